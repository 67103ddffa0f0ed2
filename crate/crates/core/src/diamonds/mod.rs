//! Diamonds `D_m` and their rotated companions `D'_m`, for half-integer
//! order `m = N/2`, together with face vectors, boundary vectors and
//! covering monomials.

mod export;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::laurent::{Coefficient, Exponents, LaurentPoly, NVARS, SIGMA};
use crate::tiling::{face_adjacency, face_boundary, rotate_about, EdgeId, FaceId, Tiling, VertexId};

pub use export::{to_dot, to_json, to_json_value, to_svg, ExportFormat};

/// Order `m = N / 2` stored as the integer `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfOrder(pub u32);

impl HalfOrder {
    /// `n` for `m = n` or `m = n + 1/2`.
    pub fn whole(self) -> u32 {
        self.0 / 2
    }

    pub fn is_integral(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl std::fmt::Display for HalfOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Face counts per label `1..=6`.
pub type CountVector = [u32; NVARS];

fn count_labels<'a>(tiling: &Tiling, faces: impl IntoIterator<Item = &'a FaceId>) -> CountVector {
    let mut v = [0u32; NVARS];
    for f in faces {
        v[tiling.label(f) as usize - 1] += 1;
    }
    v
}

/// Faces of `D_{N/2}` (or `D'_{N/2}` when `primed`).
pub fn diamond_face_set(tiling: &Tiling, n: HalfOrder, primed: bool) -> BTreeSet<FaceId> {
    let faces = unprimed_face_set(tiling, n);
    if primed {
        let center = tiling.rotation_center(n.0);
        faces.iter().map(|f| rotate_about(f, center)).collect()
    } else {
        faces
    }
}

fn unprimed_face_set(tiling: &Tiling, n: HalfOrder) -> BTreeSet<FaceId> {
    let mut faces = BTreeSet::new();
    match n.0 {
        0 => {}
        1 => faces.extend(tiling.s2()),
        _ => {
            let k = n.whole() as i32;
            for j in -(k - 1)..=(k - 1) {
                let span = k - 1 - j.abs();
                for i in (-(k - 1) - span)..=(-(k - 1) + span) {
                    faces.extend(tiling.block_faces(i, j));
                }
            }
            if !n.is_integral() {
                for i in (-k + 2)..=1 {
                    for j in 1..=(2 - i) {
                        faces.extend(tiling.block_faces(i, j));
                    }
                }
                faces.extend(tiling.s3());
                faces.extend(tiling.s2());
            }
        }
    }
    faces
}

/// An edge of a diamond with the labels of the two faces it separates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondEdge {
    pub edge: EdgeId,
    pub faces: [FaceId; 2],
    pub labels: [u8; 2],
}

impl DiamondEdge {
    /// Exponent vector of the weight `1 / (x_a x_b)`.
    pub fn weight_exponents(&self) -> Exponents {
        let mut e = [0i32; NVARS];
        for l in self.labels {
            e[l as usize - 1] -= 1;
        }
        Exponents(e)
    }
}

/// Finite subgraph of the lattice spanned by a set of faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondGraph {
    pub half_order: HalfOrder,
    pub primed: bool,
    pub faces: BTreeSet<FaceId>,
    pub face_labels: BTreeMap<FaceId, u8>,
    /// Sorted boundary vertices of the faces.
    pub vertices: Vec<VertexId>,
    /// Sorted boundary edges of the faces.
    pub edges: Vec<DiamondEdge>,
}

impl DiamondGraph {
    /// Graph formed by the boundaries of `faces`.
    pub fn from_faces(tiling: &Tiling, faces: BTreeSet<FaceId>, half_order: HalfOrder, primed: bool) -> Self {
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeMap::new();
        for f in &faces {
            let bd = face_boundary(f);
            vertices.extend(bd.vertices);
            for e in bd.edges {
                edges.entry(e.edge).or_insert_with(|| DiamondEdge {
                    edge: e.edge,
                    faces: e.faces,
                    labels: tiling.edge_labels(&e.faces),
                });
            }
        }
        let face_labels = faces.iter().map(|f| (*f, tiling.label(f))).collect();
        DiamondGraph {
            half_order,
            primed,
            faces,
            face_labels,
            vertices: vertices.into_iter().collect(),
            edges: edges.into_values().collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Connectivity of the vertex graph (the empty graph counts as connected).
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let index: BTreeMap<_, _> = self.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            let (u, v) = (index[&e.edge.white], index[&e.edge.black]);
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn label_counts(&self) -> CountVector {
        let mut v = [0u32; NVARS];
        for &l in self.face_labels.values() {
            v[l as usize - 1] += 1;
        }
        v
    }
}

pub fn build_diamond(tiling: &Tiling, n: HalfOrder, primed: bool) -> DiamondGraph {
    DiamondGraph::from_faces(tiling, diamond_face_set(tiling, n, primed), n, primed)
}

/// Distinct faces outside `faces` sharing an edge with one of them.
pub fn neighbour_faces(faces: &BTreeSet<FaceId>) -> BTreeSet<FaceId> {
    faces
        .iter()
        .flat_map(face_adjacency)
        .filter(|g| !faces.contains(g))
        .collect()
}

pub fn face_vector(tiling: &Tiling, n: HalfOrder, primed: bool) -> CountVector {
    count_labels(tiling, &diamond_face_set(tiling, n, primed))
}

pub fn boundary_vector(tiling: &Tiling, n: HalfOrder, primed: bool) -> CountVector {
    count_labels(tiling, &neighbour_faces(&diamond_face_set(tiling, n, primed)))
}

/// Exponents of the covering monomial of an arbitrary face set.
pub fn cover_exponents(tiling: &Tiling, faces: &BTreeSet<FaceId>) -> Exponents {
    let f = count_labels(tiling, faces);
    let h = count_labels(tiling, &neighbour_faces(faces));
    Exponents(std::array::from_fn(|i| (f[i] + h[i]) as i32))
}

/// Exponent vector of `m(D_{N/2})`; `m(D_0) = x3` and `m(D'_0) = x6`.
pub fn covering_exponents(tiling: &Tiling, n: HalfOrder, primed: bool) -> Exponents {
    if n.0 == 0 {
        let e = Exponents::unit(3);
        return if primed { SIGMA.permute_exponents(&e) } else { e };
    }
    cover_exponents(tiling, &diamond_face_set(tiling, n, primed))
}

pub fn covering_monomial<C: Coefficient>(tiling: &Tiling, n: HalfOrder, primed: bool) -> LaurentPoly<C> {
    LaurentPoly::monomial(covering_exponents(tiling, n, primed), C::one())
}

/// Closed forms for the unprimed diamonds of half-order `N >= 2`.
pub mod closed_form {
    use super::*;

    fn sq(n: i64) -> i64 {
        n * n
    }

    fn vec6(v: [i64; 6]) -> CountVector {
        v.map(|x| u32::try_from(x).expect("closed form entries are non-negative"))
    }

    /// `f_n` for even `N = 2n`, `f_{n+1/2}` for odd `N = 2n + 1`.
    pub fn face_vector(n: HalfOrder) -> CountVector {
        let k = n.whole() as i64;
        if n.is_integral() {
            vec6([k * (k - 1), sq(k), sq(k - 1), sq(k), k * (k - 1) + 1, sq(k - 1)])
        } else {
            vec6([sq(k), k * (k + 1) + 1, k * (k - 1) + 1, k * (k + 1), sq(k), k * (k - 1)])
        }
    }

    /// `h_n` / `h_{n+1/2}`.
    pub fn boundary_vector(n: HalfOrder) -> CountVector {
        let k = n.whole() as i64;
        if n.is_integral() {
            vec6([k, 0, 3 * k, 0, k - 1, 3 * k - 1])
        } else {
            vec6([k + 1, 0, 3 * k, 0, k + 1, 3 * k + 1])
        }
    }

    /// Exponents of `m(D_n)` / `m(D_{n+1/2})`; valid for every `N >= 0`.
    pub fn covering_exponents(n: HalfOrder) -> Exponents {
        let k = n.whole() as i32;
        let s = k * k;
        if n.is_integral() {
            Exponents([s, s, s + k + 1, s, s, s + k])
        } else {
            Exponents([s + k + 1, s + k + 1, s + 2 * k + 1, s + k, s + k + 1, s + 2 * k + 1])
        }
    }

    /// Block multiplicities `([254], [316], [214], [356])` of `D_n`.
    pub fn block_counts(n: u32) -> [u32; 4] {
        let n = n as i64;
        [n * (n + 1) / 2, n * (n - 1) / 2, n * (n - 1) / 2, (n - 1) * (n - 2) / 2].map(|x| x as u32)
    }

    /// Common value of the first covering-monomial recursion, `n >= 2`.
    pub fn recursion_one_product(n: u32) -> Exponents {
        let n = n as i32;
        let q = 2 * n * n;
        Exponents([q - 3 * n + 3, q - 3 * n + 3, q - n + 2, q - 3 * n + 2, q - 3 * n + 3, q - n + 1])
    }

    /// Common value of the second covering-monomial recursion, `n >= 1`.
    pub fn recursion_two_product(n: u32) -> Exponents {
        let n = n as i32;
        let q = 2 * n * n;
        Exponents([q - n + 2, q - n + 2, q + n + 2, q - n + 1, q - n + 2, q + n + 1])
    }
}

/// Constant factors of the covering-monomial recursions, as exponent vectors.
pub mod recursion_factors {
    use crate::laurent::Exponents;

    /// `(x1 x2)(x3 x4)(x5 x6)`.
    pub const ONE_A: Exponents = Exponents([1, 1, 1, 1, 1, 1]);
    /// `(x1 x2)(x2 x3)(x3 x5)`.
    pub const ONE_B: Exponents = Exponents([1, 2, 2, 0, 1, 0]);
    /// `(x1 x3)(x2 x6)(x4 x5)`.
    pub const TWO_A: Exponents = Exponents([1, 1, 1, 1, 1, 1]);
    /// `(x1 x3)(x2 x3)(x2 x5)`.
    pub const TWO_B: Exponents = Exponents([1, 2, 2, 0, 1, 0]);
}

/// The three expressions of a covering-monomial recursion, which must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialRecursion {
    pub lhs: Exponents,
    pub rhs_unprimed: Exponents,
    pub rhs_primed: Exponents,
}

impl MonomialRecursion {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs_unprimed && self.lhs == self.rhs_primed
    }
}

/// `m(D_n) m(D_{n-3/2})` against both right-hand sides, `n >= 2`.
pub fn monomial_recursion_one(tiling: &Tiling, n: u32) -> MonomialRecursion {
    let m = |k: u32, p: bool| covering_exponents(tiling, HalfOrder(k), p);
    let big = 2 * n;
    MonomialRecursion {
        lhs: m(big, false) + m(big - 3, false),
        rhs_unprimed: m(big - 1, false) + m(big - 2, false) + recursion_factors::ONE_A,
        rhs_primed: m(big - 1, true) + m(big - 2, true) + recursion_factors::ONE_B,
    }
}

/// `m(D_{n+1/2}) m(D_{n-1})` against both right-hand sides, `n >= 1`.
pub fn monomial_recursion_two(tiling: &Tiling, n: u32) -> MonomialRecursion {
    let m = |k: u32, p: bool| covering_exponents(tiling, HalfOrder(k), p);
    MonomialRecursion {
        lhs: m(2 * n + 1, false) + m(2 * n - 2, false),
        rhs_unprimed: m(2 * n, false) + m(2 * n - 1, false) + recursion_factors::TWO_A,
        rhs_primed: m(2 * n, true) + m(2 * n - 1, true) + recursion_factors::TWO_B,
    }
}

/// Block multiplicities `([254], [316], [214], [356])` of `D_n`, counted from the tiling.
pub fn block_counts(tiling: &Tiling, n: u32) -> [u32; 4] {
    use crate::tiling::BlockType;
    let k = n as i32;
    let mut out = [0u32; 4];
    for j in -(k - 1)..=(k - 1) {
        let span = k - 1 - j.abs();
        for i in (-(k - 1) - span)..=(-(k - 1) + span) {
            let t = tiling.block_type(i, j);
            let idx = BlockType::ALL.iter().position(|&x| x == t).expect("known type");
            out[idx] += 1;
        }
    }
    out
}
