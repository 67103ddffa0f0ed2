//! Verification suites: each check computes both sides of an identity
//! independently and records digests of both.

use std::fmt::Display;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diamonds::{self, build_diamond, closed_form, HalfOrder};
use crate::laurent::{Exponents, LaurentPoly, SIGMA};
use crate::matchings::{
    self, aggregate, condensation_instance, count_pm, enumerate_pm, verify_condensation, weighted_pm_sum,
    CondensationKind, SweepOrder,
};
use crate::quiver::{initial_b_matrix, mutate_matrix, mutate_seed, recurrence_y, BMatrix, Seed, MUTATION_PERIOD};
use crate::tiling::{quiver_from_tiling, Tiling};
use crate::Poly;

/// Largest order for which all matchings are enumerated by backtracking.
pub const ORACLE_MAX_HALF_ORDER: u32 = 4;
/// Covering-monomial identities are checked for `n <= 5`.
const MONOMIAL_MAX_N: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem,
    Counts,
    Recursions,
    Quiver,
    Oracle,
    All,
}

impl Suite {
    pub const SINGLE: [Suite; 5] = [Suite::Theorem, Suite::Counts, Suite::Recursions, Suite::Quiver, Suite::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem => "theorem",
            Suite::Counts => "counts",
            Suite::Recursions => "recursions",
            Suite::Quiver => "quiver",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::SINGLE
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub lhs_digest: String,
    pub rhs_digest: String,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().all(|c| c.status == Status::Pass);
        SuiteReport { suite: suite.to_string(), checks, passed }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// One line per check, then a summary line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let st = if c.status == Status::Pass { "PASS" } else { "FAIL" };
            s.push_str(&format!(
                "{st} {} lhs={} rhs={} ({:.1} ms)",
                c.id, c.lhs_digest, c.rhs_digest, c.runtime_ms
            ));
            if let Some(d) = &c.detail {
                s.push_str(&format!(": {d}"));
            }
            s.push('\n');
        }
        let failed = self.failures().count();
        s.push_str(&format!(
            "suite {}: {} ({} checks, {failed} failed)\n",
            self.suite,
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        s
    }
}

/// First 16 hex digits of the SHA-256 of the value's display form.
pub fn digest(v: &impl Display) -> String {
    let h = Sha256::digest(v.to_string().as_bytes());
    h.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Compares two computed values; errors on either side fail the check.
fn check<T, E>(id: String, compute: impl FnOnce() -> Result<(T, T), E>) -> CheckResult
where
    T: PartialEq + Display,
    E: Display,
{
    let start = Instant::now();
    let outcome = compute();
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok((lhs, rhs)) => {
            let ok = lhs == rhs;
            CheckResult {
                id,
                status: if ok { Status::Pass } else { Status::Fail },
                lhs_digest: digest(&lhs),
                rhs_digest: digest(&rhs),
                runtime_ms,
                detail: (!ok).then(|| abbreviate(&format!("{lhs} != {rhs}"))),
            }
        }
        Err(e) => CheckResult {
            id,
            status: Status::Fail,
            lhs_digest: "-".into(),
            rhs_digest: "-".into(),
            runtime_ms,
            detail: Some(e.to_string()),
        },
    }
}

fn abbreviate(s: &str) -> String {
    const MAX: usize = 200;
    match s.char_indices().nth(MAX) {
        Some((i, _)) => format!("{}...", &s[..i]),
        None => s.to_string(),
    }
}

/// Wrapper giving [`Exponents`] and matrices a display form for digests.
struct Shown<T>(T);

impl std::fmt::Display for Shown<Exponents> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0 .0)
    }
}

impl std::fmt::Display for Shown<BMatrix> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0 .0)
    }
}

impl std::fmt::Display for Shown<[u32; 6]> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<T: PartialEq> PartialEq for Shown<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

fn name(n: u32, primed: bool) -> String {
    format!("y{}_{n}", if primed { "'" } else { "" })
}

fn diamond_name(n: u32, primed: bool) -> String {
    format!("D{}_{}", if primed { "'" } else { "" }, HalfOrder(n))
}

/// `|PM(D_{N/2})|` from the closed forms `2^{m(m+1)}` and `2^{(m+1/2)^2}`.
pub fn expected_count(half_order: u32) -> BigInt {
    let k = half_order / 2;
    let e = if half_order.is_multiple_of(2) { k * (k + 1) } else { (k + 1) * (k + 1) };
    BigInt::one() << e
}

/// `y_N` (or `y'_N`) through the matchings of `D_{N/2}` (or `D'_{N/2}`).
pub fn y_via_matchings(tiling: &Tiling, n: u32, primed: bool) -> Result<Poly, matchings::MatchingError> {
    let g = build_diamond(tiling, HalfOrder(n), primed);
    let w = weighted_pm_sum(&g)?;
    Ok(w.mul_monomial(&diamonds::covering_exponents(tiling, HalfOrder(n), primed)))
}

/// New variables harvested along the periodic mutation sequence, without
/// consulting the recurrence: `(y_n, y'_n)` for `n = 1..=count`.
pub fn y_via_seeds(count: u32) -> Result<Vec<(Poly, Poly)>, crate::quiver::QuiverError> {
    let mut seed = Seed::<BigInt>::initial();
    let mut out = Vec::new();
    let mut pending = None;
    for step in 0..2 * count as usize {
        let node = MUTATION_PERIOD[step % MUTATION_PERIOD.len()];
        seed = mutate_seed(&seed, node)?;
        let fresh = seed.cluster[node - 1].clone();
        match pending.take() {
            None => pending = Some(fresh),
            Some(y) => out.push((y, fresh)),
        }
    }
    Ok(out)
}

pub fn theorem_suite(tiling: &Tiling, max_half_order: u32) -> SuiteReport {
    let mut checks = Vec::new();
    for n in 1..=max_half_order {
        for primed in [false, true] {
            checks.push(check(format!("theorem/{}", name(n, primed)), || -> Result<_, String> {
                let (y, yp) = recurrence_y(i64::from(n)).map_err(|e| e.to_string())?;
                let lhs = if primed { yp } else { y };
                let rhs = y_via_matchings(tiling, n, primed).map_err(|e| e.to_string())?;
                Ok((lhs, rhs))
            }));
        }
    }
    SuiteReport::new("theorem", checks)
}

pub fn counts_suite(tiling: &Tiling, max_half_order: u32) -> SuiteReport {
    let mut checks = Vec::new();
    for n in 1..=max_half_order {
        for primed in [false, true] {
            checks.push(check(format!("counts/{}", diamond_name(n, primed)), || {
                let g = build_diamond(tiling, HalfOrder(n), primed);
                count_pm(&g).map(|c| (c, expected_count(n)))
            }));
        }
        checks.push(check(format!("counts/specialize/{}", name(n, false)), || -> Result<_, String> {
            let y = recurrence_y(i64::from(n)).map_err(|e| e.to_string())?.0;
            let ones = [BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one()];
            let g = build_diamond(tiling, HalfOrder(n), false);
            Ok((y.eval(&ones), count_pm(&g).map_err(|e| e.to_string())?))
        }));
    }
    SuiteReport::new("counts", checks)
}

pub fn recursions_suite(tiling: &Tiling, max_half_order: u32) -> SuiteReport {
    let mut checks = Vec::new();
    for (kind, top) in [(CondensationKind::One, max_half_order / 2), (CondensationKind::Two, max_half_order.saturating_sub(1) / 2)] {
        for n in kind.min_n()..=top {
            checks.push(check(format!("recursions/weight-kind{}/n={n}", kind.number()), || -> Result<_, String> {
                let inst = condensation_instance(tiling, n, kind).map_err(|e| e.to_string())?;
                let d = verify_condensation(&inst).map_err(|e| e.to_string())?;
                Ok((d.lhs, d.rhs))
            }));
        }
    }
    let top_order = 2 * MONOMIAL_MAX_N + 1;
    for big in 0..=top_order {
        let h = HalfOrder(big);
        checks.push(check(format!("recursions/m-closed-form/{}", diamond_name(big, false)), || {
            Ok::<_, String>((
                Shown(diamonds::covering_exponents(tiling, h, false)),
                Shown(closed_form::covering_exponents(h)),
            ))
        }));
        checks.push(check(format!("recursions/m-sigma/{}", diamond_name(big, true)), || {
            Ok::<_, String>((
                Shown(diamonds::covering_exponents(tiling, h, true)),
                Shown(SIGMA.permute_exponents(&diamonds::covering_exponents(tiling, h, false))),
            ))
        }));
        if big >= 2 {
            checks.push(check(format!("recursions/f-closed-form/{}", diamond_name(big, false)), || {
                Ok::<_, String>((Shown(diamonds::face_vector(tiling, h, false)), Shown(closed_form::face_vector(h))))
            }));
            checks.push(check(format!("recursions/h-closed-form/{}", diamond_name(big, false)), || {
                Ok::<_, String>((Shown(diamonds::boundary_vector(tiling, h, false)), Shown(closed_form::boundary_vector(h))))
            }));
        }
    }
    for n in 2..=MONOMIAL_MAX_N {
        let r = diamonds::monomial_recursion_one(tiling, n);
        let want = closed_form::recursion_one_product(n);
        checks.push(check(format!("recursions/m-kind1/n={n}/unprimed"), || Ok::<_, String>((Shown(r.lhs), Shown(r.rhs_unprimed)))));
        checks.push(check(format!("recursions/m-kind1/n={n}/primed"), || Ok::<_, String>((Shown(r.lhs), Shown(r.rhs_primed)))));
        checks.push(check(format!("recursions/m-kind1/n={n}/product"), || Ok::<_, String>((Shown(r.lhs), Shown(want)))));
    }
    for n in 1..=MONOMIAL_MAX_N {
        let r = diamonds::monomial_recursion_two(tiling, n);
        let want = closed_form::recursion_two_product(n);
        checks.push(check(format!("recursions/m-kind2/n={n}/unprimed"), || Ok::<_, String>((Shown(r.lhs), Shown(r.rhs_unprimed)))));
        checks.push(check(format!("recursions/m-kind2/n={n}/primed"), || Ok::<_, String>((Shown(r.lhs), Shown(r.rhs_primed)))));
        checks.push(check(format!("recursions/m-kind2/n={n}/product"), || Ok::<_, String>((Shown(r.lhs), Shown(want)))));
    }
    SuiteReport::new("recursions", checks)
}

pub fn quiver_suite(tiling: &Tiling, max_half_order: u32) -> SuiteReport {
    let mut checks = Vec::new();
    let b0 = initial_b_matrix();
    checks.push(check("quiver/period-6".into(), || {
        MUTATION_PERIOD
            .iter()
            .try_fold(b0, |b, &k| mutate_matrix(&b, k))
            .map(|b| (Shown(b), Shown(b0)))
    }));
    let mut stage = b0;
    for pair in MUTATION_PERIOD.chunks(2) {
        let (a, sa) = (pair[0], pair[1]);
        let before = stage;
        checks.push(check(format!("quiver/paired-reversal/{a}{sa}"), || {
            let after = mutate_matrix(&mutate_matrix(&before, a)?, sa)?;
            let mut expected = before;
            for i in 0..6 {
                for j in 0..6 {
                    if [a, sa].contains(&(i + 1)) || [a, sa].contains(&(j + 1)) {
                        expected.0[i][j] = -before.0[i][j];
                    }
                }
            }
            Ok::<_, crate::quiver::QuiverError>((Shown(after), Shown(expected)))
        }));
        stage = mutate_matrix(&stage, a).and_then(|b| mutate_matrix(&b, sa)).unwrap_or(stage);
    }
    for k in 1..=6 {
        checks.push(check(format!("quiver/involution/{k}"), || {
            mutate_matrix(&mutate_matrix(&b0, k)?, k).map(|b| (Shown(b), Shown(b0)))
        }));
    }
    checks.push(check("quiver/sigma-symmetry".into(), || {
        let mut permuted = b0;
        for i in 0..6 {
            for j in 0..6 {
                permuted.0[SIGMA.apply(i + 1) - 1][SIGMA.apply(j + 1) - 1] = b0.0[i][j];
            }
        }
        Ok::<_, String>((Shown(permuted), Shown(b0)))
    }));
    checks.push(check("quiver/dual-of-tiling".into(), || {
        let q = quiver_from_tiling(&tiling.labeling);
        let signed = if q == b0.negated() { q.negated() } else { q };
        Ok::<_, String>((Shown(signed), Shown(b0)))
    }));
    let seeds = y_via_seeds(max_half_order);
    for n in 1..=max_half_order {
        let from_seed = |primed: bool| -> Result<Poly, String> {
            let pairs = seeds.as_ref().map_err(|e| e.to_string())?;
            let (y, yp) = &pairs[n as usize - 1];
            Ok(if primed { yp.clone() } else { y.clone() })
        };
        for primed in [false, true] {
            checks.push(check(format!("quiver/seed-vs-recurrence/{}", name(n, primed)), || -> Result<_, String> {
                let (y, yp) = recurrence_y(i64::from(n)).map_err(|e| e.to_string())?;
                Ok((from_seed(primed)?, if primed { yp } else { y }))
            }));
        }
        checks.push(check(format!("quiver/sigma-image/{}", name(n, true)), || -> Result<_, String> {
            Ok((from_seed(true)?, from_seed(false)?.permute(&SIGMA)))
        }));
        checks.push(check(format!("quiver/positivity/{}", name(n, false)), || -> Result<_, String> {
            let y = recurrence_y(i64::from(n)).map_err(|e| e.to_string())?.0;
            Ok((y.all_coefficients_positive(), true))
        }));
    }
    SuiteReport::new("quiver", checks)
}

pub fn oracle_suite(tiling: &Tiling, max_half_order: u32) -> SuiteReport {
    let mut checks = Vec::new();
    for n in 1..=max_half_order.min(ORACLE_MAX_HALF_ORDER) {
        for primed in [false, true] {
            let g = build_diamond(tiling, HalfOrder(n), primed);
            checks.push(check(format!("oracle/enumeration/{}", diamond_name(n, primed)), || -> Result<_, String> {
                let limit = 1usize << 20;
                let all = enumerate_pm(&g, limit).map_err(|e| e.to_string())?;
                Ok((weighted_pm_sum(&g).map_err(|e| e.to_string())?, aggregate::<BigInt>(&all)))
            }));
            checks.push(check(format!("oracle/sweep-order/{}", diamond_name(n, primed)), || -> Result<_, String> {
                let a: LaurentPoly<BigInt> =
                    matchings::weighted_pm_sum_with(&g, SweepOrder::RowMajor).map_err(|e| e.to_string())?;
                let b = matchings::weighted_pm_sum_with(&g, SweepOrder::ColumnMajor).map_err(|e| e.to_string())?;
                Ok((a, b))
            }));
        }
    }
    SuiteReport::new("oracle", checks)
}

/// Runs one suite; `All` concatenates every suite under the name `all`.
pub fn run_suite(suite: Suite, tiling: &Tiling, max_half_order: u32) -> SuiteReport {
    match suite {
        Suite::Theorem => theorem_suite(tiling, max_half_order),
        Suite::Counts => counts_suite(tiling, max_half_order),
        Suite::Recursions => recursions_suite(tiling, max_half_order),
        Suite::Quiver => quiver_suite(tiling, max_half_order),
        Suite::Oracle => oracle_suite(tiling, max_half_order),
        Suite::All => {
            let checks = Suite::SINGLE
                .into_iter()
                .flat_map(|s| run_suite(s, tiling, max_half_order).checks)
                .collect();
            SuiteReport::new("all", checks)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> &'static Tiling {
        Tiling::calibrated()
    }

    #[test]
    fn every_suite_passes_at_small_orders() {
        for s in Suite::SINGLE {
            let r = run_suite(s, t(), 4);
            assert!(r.passed, "{}", r.to_text());
            assert!(!r.checks.is_empty());
        }
    }

    #[test]
    fn all_collects_every_suite() {
        let r = run_suite(Suite::All, t(), 3);
        let total: usize = Suite::SINGLE.iter().map(|&s| run_suite(s, t(), 3).checks.len()).sum();
        assert_eq!(r.checks.len(), total);
        assert!(r.passed);
    }

    #[test]
    fn relabeled_tiling_fails_the_theorem() {
        let mut bad = *t();
        bad.labeling.table[0].swap(0, 1);
        let r = theorem_suite(&bad, 2);
        assert!(!r.passed);
        assert!(r.failures().next().unwrap().detail.is_some());
    }

    #[test]
    fn seeds_route_matches_first_values() {
        let s = y_via_seeds(2).unwrap();
        assert_eq!(s[0].0, "x1 x2^-1 x6 + x2^-1 x3 x5".parse::<Poly>().unwrap());
        assert_eq!(s[0].1, s[0].0.permute(&SIGMA));
    }

    #[test]
    fn closed_form_counts() {
        let want = [2u64, 4, 16, 64, 512, 4096, 65536, 1048576];
        for (i, &w) in want.iter().enumerate() {
            assert_eq!(expected_count(i as u32 + 1), BigInt::from(w));
        }
    }

    #[test]
    fn digests_are_stable() {
        assert_eq!(digest(&"abc"), "ba7816bf8f01cfea");
        assert_eq!(digest(&1), digest(&"1"));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::SINGLE.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn text_report_has_summary() {
        let r = counts_suite(t(), 2);
        let text = r.to_text();
        assert!(text.lines().last().unwrap().starts_with("suite counts: PASS"));
        assert_eq!(text.lines().count(), r.checks.len() + 1);
    }
}
