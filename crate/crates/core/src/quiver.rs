//! Exchange matrices, seed mutation and the period-6 mutation sequence.
//!
//! Two independent routes produce the cluster variables `y_N`, `y'_N`:
//! Fomin–Zelevinsky seed mutation along `2, 4, 5, 1, 3, 6, ...`
//! ([`run_periodic_sequence`]) and the three-term exchange recurrence
//! `y_N y_{N-3} = y_{N-1} y_{N-2} + y'_{N-1} y'_{N-2}` ([`YRecurrence`]).
//! Node indices are 1-based everywhere.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use thiserror::Error;

use crate::laurent::{Coefficient, LaurentPoly, NVARS, SIGMA};

/// Mutation order of one full period.
pub const MUTATION_PERIOD: [usize; 6] = [2, 4, 5, 1, 3, 6];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("node index {0} is outside 1..=6")]
    NodeOutOfRange(usize),
    #[error("exchange binomial at node {node} is not divisible by the old variable")]
    NotDivisible { node: usize },
    #[error("seed mutation and exchange recurrence disagree at {name}")]
    Mismatch { name: String },
    #[error("index {0} is below the first defined index -2")]
    IndexOutOfRange(i64),
    #[error("exchange matrix entry overflows after mutating at node {node}")]
    EntryOverflow { node: usize },
}

/// Skew-symmetric 6×6 exchange matrix; `b[i][j] > 0` counts arrows `i -> j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BMatrix(pub [[i32; NVARS]; NVARS]);

impl BMatrix {
    /// Entry for 1-based nodes.
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.0[i - 1][j - 1]
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..NVARS).all(|i| (0..NVARS).all(|j| self.0[i][j] == -self.0[j][i]))
    }

    /// `b[σ(i)][σ(j)] == b[i][j]` for all `i, j`.
    pub fn is_sigma_invariant(&self) -> bool {
        (1..=NVARS).all(|i| {
            (1..=NVARS).all(|j| self.get(SIGMA.apply(i), SIGMA.apply(j)) == self.get(i, j))
        })
    }

    pub fn negated(&self) -> BMatrix {
        BMatrix(self.0.map(|row| row.map(|v| -v)))
    }

    /// Column `k` split into the nodes with positive and negative entries.
    pub fn column_signs(&self, k: usize) -> (Vec<usize>, Vec<usize>) {
        let pos = (1..=NVARS).filter(|&i| self.get(i, k) > 0).collect();
        let neg = (1..=NVARS).filter(|&i| self.get(i, k) < 0).collect();
        (pos, neg)
    }
}

impl fmt::Debug for BMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BMatrix[")?;
        for row in &self.0 {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// The exchange matrix of the dP3 quiver in the initial seed.
pub fn initial_b_matrix() -> BMatrix {
    BMatrix([
        [0, -1, 1, 1, 0, -1],
        [1, 0, -1, 0, -1, 1],
        [-1, 1, 0, -1, 1, 0],
        [-1, 0, 1, 0, 1, -1],
        [0, 1, -1, -1, 0, 1],
        [1, -1, 0, 1, -1, 0],
    ])
}

fn check_node(k: usize) -> Result<(), QuiverError> {
    if (1..=NVARS).contains(&k) {
        Ok(())
    } else {
        Err(QuiverError::NodeOutOfRange(k))
    }
}

/// Fomin–Zelevinsky matrix mutation at node `k`.
#[allow(clippy::needless_range_loop)]
pub fn mutate_matrix(b: &BMatrix, k: usize) -> Result<BMatrix, QuiverError> {
    check_node(k)?;
    let node = k;
    let k = k - 1;
    let overflow = || QuiverError::EntryOverflow { node };
    let mut out = b.0;
    for i in 0..NVARS {
        for j in 0..NVARS {
            out[i][j] = if i == k || j == k {
                b.0[i][j].checked_neg().ok_or_else(overflow)?
            } else {
                let bik = b.0[i][k];
                let prod = bik.checked_mul(b.0[k][j]).ok_or_else(overflow)?.max(0);
                b.0[i][j].checked_add(bik.signum() * prod).ok_or_else(overflow)?
            };
        }
    }
    Ok(BMatrix(out))
}

/// Exchange matrix plus the current cluster; `cluster[k-1]` sits at node `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed<C: Coefficient> {
    pub matrix: BMatrix,
    pub cluster: [LaurentPoly<C>; NVARS],
}

impl<C: Coefficient> Seed<C> {
    /// `(B0, (x1, ..., x6))`.
    pub fn initial() -> Self {
        Seed {
            matrix: initial_b_matrix(),
            cluster: std::array::from_fn(|i| LaurentPoly::var(i + 1)),
        }
    }

    /// Mutates at node `k`, returning the new seed.
    pub fn mutate(&self, k: usize) -> Result<Seed<C>, QuiverError> {
        mutate_seed(self, k)
    }
}

/// Seed mutation: the new variable at `k` is
/// `(prod cluster[i]^[b_ik]_+ + prod cluster[i]^[-b_ik]_+) / cluster[k]`.
pub fn mutate_seed<C: Coefficient>(s: &Seed<C>, k: usize) -> Result<Seed<C>, QuiverError> {
    check_node(k)?;
    let mut incoming = LaurentPoly::one();
    let mut outgoing = LaurentPoly::one();
    for i in 1..=NVARS {
        let b = s.matrix.get(i, k);
        if b > 0 {
            incoming = &incoming * &s.cluster[i - 1].pow(b as u32);
        } else if b < 0 {
            outgoing = &outgoing * &s.cluster[i - 1].pow((-b) as u32);
        }
    }
    let binomial = &incoming + &outgoing;
    let fresh = binomial
        .div_exact(&s.cluster[k - 1])
        .map_err(|_| QuiverError::NotDivisible { node: k })?;
    let mut cluster = s.cluster.clone();
    cluster[k - 1] = fresh;
    Ok(Seed { matrix: mutate_matrix(&s.matrix, k)?, cluster })
}

/// Memoized solver for the exchange recurrence, independent of any B-matrix.
///
/// Safe to share between threads; entries are computed in order and never
/// change once stored.
pub struct YRecurrence<C> {
    // pairs (y_N, y'_N) for N = -2, -1, 0, 1, ...
    memo: RwLock<Vec<(LaurentPoly<C>, LaurentPoly<C>)>>,
}

impl<C: Coefficient> Default for YRecurrence<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Coefficient> YRecurrence<C> {
    pub fn new() -> Self {
        let x = |i| LaurentPoly::var(i);
        YRecurrence { memo: RwLock::new(vec![(x(2), x(4)), (x(5), x(1)), (x(3), x(6))]) }
    }

    /// `(y_n, y'_n)` for `n >= -2`.
    pub fn get(&self, n: i64) -> Result<(LaurentPoly<C>, LaurentPoly<C>), QuiverError> {
        if n < -2 {
            return Err(QuiverError::IndexOutOfRange(n));
        }
        let idx = (n + 2) as usize;
        if let Some(v) = self.memo.read().expect("memo lock").get(idx) {
            return Ok(v.clone());
        }
        let mut memo = self.memo.write().expect("memo lock");
        while memo.len() <= idx {
            let m = memo.len();
            let (y1, yp1) = &memo[m - 1];
            let (y2, yp2) = &memo[m - 2];
            let (y3, _) = &memo[m - 3];
            let rhs = &(y1 * y2) + &(yp1 * yp2);
            let y = rhs
                .div_exact(y3)
                .map_err(|_| QuiverError::NotDivisible { node: 0 })?;
            let yp = y.permute(&SIGMA);
            memo.push((y, yp));
        }
        Ok(memo[idx].clone())
    }

    pub fn y(&self, n: i64) -> Result<LaurentPoly<C>, QuiverError> {
        self.get(n).map(|p| p.0)
    }

    pub fn y_prime(&self, n: i64) -> Result<LaurentPoly<C>, QuiverError> {
        self.get(n).map(|p| p.1)
    }
}

/// `(y_n, y'_n)` from the process-wide big-integer recurrence cache.
pub fn recurrence_y(n: i64) -> Result<(LaurentPoly<BigInt>, LaurentPoly<BigInt>), QuiverError> {
    static CACHE: OnceLock<YRecurrence<BigInt>> = OnceLock::new();
    CACHE.get_or_init(YRecurrence::new).get(n)
}

/// Output of [`run_periodic_sequence`].
#[derive(Clone, Debug)]
pub struct YSequence<C: Coefficient> {
    /// New variables in harvest order `y_1, y'_1, y_2, y'_2, ...`.
    pub harvested: Vec<LaurentPoly<C>>,
    pub final_seed: Seed<C>,
}

impl<C: Coefficient> YSequence<C> {
    /// `y_n` for `n >= 1`, if harvested.
    pub fn y(&self, n: usize) -> Option<&LaurentPoly<C>> {
        n.checked_sub(1).and_then(|i| self.harvested.get(2 * i))
    }

    /// `y'_n` for `n >= 1`, if harvested.
    pub fn y_prime(&self, n: usize) -> Option<&LaurentPoly<C>> {
        n.checked_sub(1).and_then(|i| self.harvested.get(2 * i + 1))
    }
}

/// Name of the `step`-th harvested variable (0-based): `y_1`, `y'_1`, ...
pub fn harvest_name(step: usize) -> String {
    let n = step / 2 + 1;
    if step.is_multiple_of(2) {
        format!("y_{n}")
    } else {
        format!("y'_{n}")
    }
}

/// Performs `steps` mutations cycling through `2, 4, 5, 1, 3, 6` from the
/// initial seed, checking every new variable against the recurrence.
pub fn run_periodic_sequence<C: Coefficient>(steps: usize) -> Result<YSequence<C>, QuiverError> {
    let rec = YRecurrence::<C>::new();
    let mut seed = Seed::<C>::initial();
    let mut harvested = Vec::with_capacity(steps);
    for step in 0..steps {
        let node = MUTATION_PERIOD[step % MUTATION_PERIOD.len()];
        seed = mutate_seed(&seed, node)?;
        let fresh = seed.cluster[node - 1].clone();
        let n = (step / 2 + 1) as i64;
        let (y, yp) = rec.get(n)?;
        let expected = if step % 2 == 0 { y } else { yp };
        if fresh != expected {
            return Err(QuiverError::Mismatch { name: harvest_name(step) });
        }
        harvested.push(fresh);
    }
    Ok(YSequence { harvested, final_seed: seed })
}
