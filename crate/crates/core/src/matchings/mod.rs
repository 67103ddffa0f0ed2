//! Perfect matchings of diamond graphs: exact counts, weighted matching
//! polynomials and the condensation identities.

mod condensation;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diamonds::{DiamondEdge, DiamondGraph};
use crate::laurent::{Coefficient, Exponents, LaurentPoly};
use crate::tiling::{EdgeId, VertexId};

pub use condensation::{
    condensation_instance, verify_condensation, CondensationDiff, CondensationInstance,
    CondensationKind, CondensationPair, MONO1, MONO2,
};

/// Widest index gap the frontier bitmask can hold.
pub const MAX_BANDWIDTH: usize = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("frontier of width {0} exceeds the supported {MAX_BANDWIDTH}")]
    FrontierTooWide(usize),
    #[error("more than {0} perfect matchings")]
    LimitExceeded(usize),
    #[error("condensation kind {kind} needs n >= {min}, got {n}")]
    OutOfRange { kind: u8, n: u32, min: u32 },
}

/// Planar order in which the profile DP visits vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepOrder {
    /// Ascending `(y, x)`.
    #[default]
    RowMajor,
    /// Ascending `(x, y)`.
    ColumnMajor,
}

impl SweepOrder {
    pub const ALL: [SweepOrder; 2] = [SweepOrder::RowMajor, SweepOrder::ColumnMajor];

    fn key(self, v: &VertexId) -> (i64, i64) {
        let p = v.position();
        match self {
            SweepOrder::RowMajor => (p.y, p.x),
            SweepOrder::ColumnMajor => (p.x, p.y),
        }
    }
}

/// Values accumulated by the profile DP: a semiring where each edge acts by
/// multiplication.
pub trait MatchingWeight: Clone {
    fn empty_product() -> Self;
    fn absorb(&mut self, other: Self);
    fn times_edge(&self, edge: &DiamondEdge) -> Self;
}

/// Plain counting: every edge has weight one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Count<T>(pub T);

impl<T: Clone + Zero + One> MatchingWeight for Count<T> {
    fn empty_product() -> Self {
        Count(T::one())
    }

    fn absorb(&mut self, other: Self) {
        let v = std::mem::replace(&mut self.0, T::zero());
        self.0 = v + other.0;
    }

    fn times_edge(&self, _: &DiamondEdge) -> Self {
        self.clone()
    }
}

impl<C: Coefficient> MatchingWeight for LaurentPoly<C> {
    fn empty_product() -> Self {
        LaurentPoly::one()
    }

    fn absorb(&mut self, other: Self) {
        *self += &other;
    }

    fn times_edge(&self, edge: &DiamondEdge) -> Self {
        self.mul_monomial(&edge.weight_exponents())
    }
}

struct Indexed<'g> {
    /// `adj[i]`: later neighbours `(j - i, edge)` of vertex `i`.
    adj: Vec<Vec<(usize, &'g DiamondEdge)>>,
}

fn index_graph(g: &DiamondGraph, order: SweepOrder) -> Result<Indexed<'_>, MatchingError> {
    let mut verts = g.vertices.clone();
    verts.sort_by_key(|v| order.key(v));
    let pos: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut adj = vec![Vec::new(); verts.len()];
    for e in &g.edges {
        let (u, v) = (pos[&e.edge.white], pos[&e.edge.black]);
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let gap = hi - lo;
        if gap > MAX_BANDWIDTH {
            return Err(MatchingError::FrontierTooWide(gap));
        }
        adj[lo].push((gap, e));
    }
    for a in &mut adj {
        a.sort_by_key(|(gap, _)| *gap);
    }
    Ok(Indexed { adj })
}

/// Sum over perfect matchings of the product of edge weights.
///
/// Bit `k` of a state records that vertex `i + k` was already matched by an
/// earlier vertex, where `i` is the vertex being processed.
pub fn profile_dp<W: MatchingWeight>(g: &DiamondGraph, order: SweepOrder) -> Result<Option<W>, MatchingError> {
    let ix = index_graph(g, order)?;
    let mut states: HashMap<u128, W> = HashMap::from([(0u128, W::empty_product())]);
    for adj in &ix.adj {
        let mut next: HashMap<u128, W> = HashMap::with_capacity(states.len());
        let mut push = |key: u128, w: W| match next.get_mut(&key) {
            Some(acc) => acc.absorb(w),
            None => {
                next.insert(key, w);
            }
        };
        for (state, w) in states {
            if state & 1 == 1 {
                push(state >> 1, w);
                continue;
            }
            for &(gap, e) in adj {
                if state >> gap & 1 == 0 {
                    push((state | 1 << gap) >> 1, w.times_edge(e));
                }
            }
        }
        states = next;
    }
    Ok(states.remove(&0))
}

/// Number of perfect matchings.
pub fn count_pm_with<T: Clone + Zero + One>(g: &DiamondGraph, order: SweepOrder) -> Result<T, MatchingError> {
    Ok(profile_dp::<Count<T>>(g, order)?.map_or_else(T::zero, |c| c.0))
}

pub fn count_pm(g: &DiamondGraph) -> Result<BigInt, MatchingError> {
    count_pm_with(g, SweepOrder::RowMajor)
}

/// `w(G)`: matching polynomial with edge weights `1 / (x_a x_b)`.
pub fn weighted_pm_sum_with<C: Coefficient>(
    g: &DiamondGraph,
    order: SweepOrder,
) -> Result<LaurentPoly<C>, MatchingError> {
    Ok(profile_dp::<LaurentPoly<C>>(g, order)?.unwrap_or_else(LaurentPoly::zero))
}

pub fn weighted_pm_sum(g: &DiamondGraph) -> Result<LaurentPoly<BigInt>, MatchingError> {
    weighted_pm_sum_with(g, SweepOrder::RowMajor)
}

/// A perfect matching, edges sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<EdgeId>,
    pub weight: Exponents,
}

impl Matching {
    /// Every vertex of `g` lies on exactly one edge, and every edge belongs to `g`.
    pub fn is_perfect_in(&self, g: &DiamondGraph) -> bool {
        let known: std::collections::HashSet<EdgeId> = g.edges.iter().map(|e| e.edge).collect();
        let mut hits: BTreeMap<VertexId, u32> = g.vertices.iter().map(|v| (*v, 0)).collect();
        for e in &self.edges {
            if !known.contains(e) {
                return false;
            }
            for v in [e.white, e.black] {
                match hits.get_mut(&v) {
                    Some(h) => *h += 1,
                    None => return false,
                }
            }
        }
        hits.values().all(|&h| h == 1)
    }
}

/// All perfect matchings by backtracking on the lowest uncovered vertex.
pub fn enumerate_pm(g: &DiamondGraph, limit: usize) -> Result<Vec<Matching>, MatchingError> {
    let n = g.vertices.len();
    let pos: HashMap<VertexId, usize> = g.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, e) in g.edges.iter().enumerate() {
        let (u, v) = (pos[&e.edge.white], pos[&e.edge.black]);
        adj[u].push((v, k));
        adj[v].push((u, k));
    }
    for a in &mut adj {
        a.sort_unstable();
    }

    struct Search<'a> {
        g: &'a DiamondGraph,
        adj: Vec<Vec<(usize, usize)>>,
        covered: Vec<bool>,
        chosen: Vec<usize>,
        out: Vec<Matching>,
        limit: usize,
    }

    impl Search<'_> {
        fn run(&mut self) -> Result<(), MatchingError> {
            let Some(u) = self.covered.iter().position(|c| !c) else {
                if self.out.len() == self.limit {
                    return Err(MatchingError::LimitExceeded(self.limit));
                }
                let mut edges: Vec<EdgeId> = self.chosen.iter().map(|&k| self.g.edges[k].edge).collect();
                edges.sort();
                let weight = self
                    .chosen
                    .iter()
                    .fold(Exponents::ZERO, |acc, &k| acc + self.g.edges[k].weight_exponents());
                self.out.push(Matching { edges, weight });
                return Ok(());
            };
            self.covered[u] = true;
            for i in 0..self.adj[u].len() {
                let (v, k) = self.adj[u][i];
                if !self.covered[v] {
                    self.covered[v] = true;
                    self.chosen.push(k);
                    let r = self.run();
                    self.chosen.pop();
                    self.covered[v] = false;
                    r?;
                }
            }
            self.covered[u] = false;
            Ok(())
        }
    }

    let mut s = Search { g, adj, covered: vec![false; n], chosen: Vec::new(), out: Vec::new(), limit };
    s.run()?;
    Ok(s.out)
}

/// Sum of the matchings' weight monomials.
pub fn aggregate<C: Coefficient>(matchings: &[Matching]) -> LaurentPoly<C> {
    LaurentPoly::from_terms(matchings.iter().map(|m| (m.weight, C::one())))
}
