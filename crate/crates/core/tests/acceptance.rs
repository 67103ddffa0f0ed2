//! One line per acceptance criterion. Run with
//! `cargo test -p dp3-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use dp3_core::diamonds::{self, build_diamond, closed_form, HalfOrder};
use dp3_core::laurent::{Exponents, SIGMA};
use dp3_core::matchings::{
    aggregate, condensation_instance, count_pm, count_pm_with, enumerate_pm, verify_condensation, weighted_pm_sum,
    CondensationKind, SweepOrder,
};
use dp3_core::quiver::{initial_b_matrix, mutate_matrix, recurrence_y, MUTATION_PERIOD};
use dp3_core::tiling::{calibrate, Tiling};
use dp3_core::verify::{expected_count, y_via_matchings, y_via_seeds};
use dp3_core::Poly;
use num_bigint::BigInt;
use num_traits::One;

const MAX_N: u32 = 8;

struct Outcome {
    ok: bool,
    note: String,
}

fn pass(note: impl Into<String>) -> Outcome {
    Outcome { ok: true, note: note.into() }
}

fn fail(note: impl Into<String>) -> Outcome {
    Outcome { ok: false, note: note.into() }
}

fn criterion(id: u32, title: &str, limit: Option<Duration>, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = body();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.ok = false;
            out.note = format!("{}; over the {:?} budget", out.note, limit);
        }
    }
    println!(
        "criterion {id} {} {title}: {} ({:.1} ms)",
        if out.ok { "PASS" } else { "FAIL" },
        out.note,
        elapsed.as_secs_f64() * 1e3
    );
    out.ok
}

fn y(n: u32, primed: bool) -> Poly {
    let (y, yp) = recurrence_y(i64::from(n)).unwrap();
    if primed {
        yp
    } else {
        y
    }
}

fn ones() -> [BigInt; 6] {
    std::array::from_fn(|_| BigInt::one())
}

fn counts(t: &Tiling) -> Outcome {
    let want = [2u64, 4, 16, 64, 512, 4096, 65536, 1048576];
    for n in 1..=MAX_N {
        let got = count_pm(&build_diamond(t, HalfOrder(n), false)).unwrap();
        let expected = BigInt::from(want[n as usize - 1]);
        if got != expected || expected != expected_count(n) {
            return fail(format!("|PM(D_{})| = {got}, expected {expected}", HalfOrder(n)));
        }
    }
    pass(format!("{want:?}"))
}

/// First `N` at which the two routes disagree.
fn theorem_mismatch(t: &Tiling) -> Option<(u32, bool)> {
    for n in 1..=MAX_N {
        for primed in [false, true] {
            if y_via_matchings(t, n, primed).ok() != Some(y(n, primed)) {
                return Some((n, primed));
            }
        }
    }
    None
}

fn theorem(t: &Tiling) -> Outcome {
    match theorem_mismatch(t) {
        None => pass(format!("y_N and y'_N agree for N = 1..{MAX_N} ({} terms in y_8)", y(MAX_N, false).len())),
        Some((n, p)) => fail(format!("mismatch at N = {n}, primed = {p}")),
    }
}

fn specialization(t: &Tiling) -> Outcome {
    for n in 1..=MAX_N {
        let v = y(n, false).eval(&ones());
        let c = count_pm(&build_diamond(t, HalfOrder(n), false)).unwrap();
        if v != c {
            return fail(format!("y_{n}(1) = {v} but |PM| = {c}"));
        }
    }
    pass(format!("N = 1..{MAX_N}"))
}

fn quiver() -> Outcome {
    let b0 = initial_b_matrix();
    let mut b = b0;
    for pair in MUTATION_PERIOD.chunks(2) {
        let next = mutate_matrix(&mutate_matrix(&b, pair[0]).unwrap(), pair[1]).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let touched = pair.contains(&(i + 1)) || pair.contains(&(j + 1));
                let want = if touched { -b.0[i][j] } else { b.0[i][j] };
                if next.0[i][j] != want {
                    return fail(format!("pair {pair:?} changed entry ({}, {})", i + 1, j + 1));
                }
            }
        }
        b = next;
    }
    if b != b0 {
        return fail("six mutations do not return to B0");
    }
    let seeds = y_via_seeds(MAX_N).unwrap();
    for n in 1..=MAX_N {
        let (sy, syp) = &seeds[n as usize - 1];
        if *sy != y(n, false) || *syp != y(n, true) {
            return fail(format!("seed route differs at N = {n}"));
        }
        if y(n, true) != y(n, false).permute(&SIGMA) {
            return fail(format!("y'_{n} != sigma(y_{n})"));
        }
    }
    pass(format!("period 6, paired reversal, sigma symmetry and seed route for N <= {MAX_N}"))
}

fn weight_recursions(t: &Tiling) -> Outcome {
    let cases = [(CondensationKind::One, 2..=4), (CondensationKind::Two, 1..=4)];
    let mut done = 0;
    for (kind, range) in cases {
        for n in range {
            let inst = condensation_instance(t, n, kind).unwrap();
            if !verify_condensation(&inst).unwrap().holds() {
                return fail(format!("kind {} fails at n = {n}", kind.number()));
            }
            done += 1;
        }
    }
    pass(format!("{done} identities"))
}

fn covering_monomials(t: &Tiling) -> Outcome {
    let m = |n: u32| diamonds::covering_exponents(t, HalfOrder(n), false);
    if m(0) != Exponents([0, 0, 1, 0, 0, 0]) || m(1) != Exponents([1, 1, 1, 0, 1, 1]) {
        return fail(format!("m(D_0) = {:?}, m(D_1/2) = {:?}", m(0), m(1)));
    }
    for big in 0..=11 {
        let h = HalfOrder(big);
        if m(big) != closed_form::covering_exponents(h) {
            return fail(format!("m(D_{h}) closed form"));
        }
        if big >= 2
            && (diamonds::face_vector(t, h, false) != closed_form::face_vector(h)
                || diamonds::boundary_vector(t, h, false) != closed_form::boundary_vector(h))
        {
            return fail(format!("f or h closed form at D_{h}"));
        }
    }
    for n in 1..=5 {
        let two = diamonds::monomial_recursion_two(t, n);
        if !two.holds() || two.lhs != closed_form::recursion_two_product(n) {
            return fail(format!("monomial recursion 2 at n = {n}"));
        }
        if n >= 2 {
            let one = diamonds::monomial_recursion_one(t, n);
            if !one.holds() || one.lhs != closed_form::recursion_one_product(n) {
                return fail(format!("monomial recursion 1 at n = {n}"));
            }
        }
    }
    pass("f, h, m closed forms, both recursions and products for n <= 5")
}

fn oracle(t: &Tiling) -> Outcome {
    let mut graphs = 0;
    for n in 1..=4 {
        for primed in [false, true] {
            let g = build_diamond(t, HalfOrder(n), primed);
            let all = enumerate_pm(&g, 1 << 20).unwrap();
            if weighted_pm_sum(&g).unwrap() != aggregate::<BigInt>(&all) {
                return fail(format!("enumeration differs on D_{} (primed = {primed})", HalfOrder(n)));
            }
            let by_order: Vec<BigInt> = SweepOrder::ALL.iter().map(|&o| count_pm_with(&g, o).unwrap()).collect();
            if by_order.iter().any(|c| *c != by_order[0]) {
                return fail("count depends on sweep order");
            }
            graphs += 1;
        }
    }
    pass(format!("{graphs} graphs"))
}

fn calibration() -> Outcome {
    let report = calibrate().unwrap();
    if report.survivors != 1 {
        return fail(format!("{} survivors", report.survivors));
    }
    let t = report.tiling;
    let mut perturbations = 0;
    for o in 0..2 {
        for c in 0..3 {
            for label in 1..=6u8 {
                if label == t.labeling.table[o][c] {
                    continue;
                }
                let mut bad = t;
                bad.labeling.table[o][c] = label;
                let counts_hold = matches!(counts(&bad), Outcome { ok: true, .. });
                if counts_hold && theorem_mismatch(&bad).is_none() {
                    return fail(format!("table[{o}][{c}] = {label} survives criteria 1 and 2"));
                }
                perturbations += 1;
            }
        }
    }
    pass(format!(
        "1 survivor of {} schemes; all {perturbations} single-entry perturbations detected",
        report.schemes_tested
    ))
}

fn positivity() -> Outcome {
    let mut terms = 0;
    for n in 1..=MAX_N {
        for primed in [false, true] {
            let p = y(n, primed);
            if !p.all_coefficients_positive() {
                return fail(format!("non-positive coefficient in y_{n} (primed = {primed})"));
            }
            terms += p.len();
        }
    }
    pass(format!("{terms} coefficients"))
}

#[test]
fn acceptance() {
    let t = Tiling::calibrated();
    let results = [
        criterion(1, "matching counts", Some(Duration::from_secs(10)), || counts(t)),
        criterion(2, "main theorem", Some(Duration::from_secs(120)), || theorem(t)),
        criterion(3, "specialization", None, || specialization(t)),
        criterion(4, "quiver behaviour", None, quiver),
        criterion(5, "weight recursions", None, || weight_recursions(t)),
        criterion(6, "covering monomials", None, || covering_monomials(t)),
        criterion(7, "oracle equivalence", None, || oracle(t)),
        criterion(8, "calibration soundness", None, calibration),
        criterion(9, "positivity", None, positivity),
    ];
    let failed: Vec<usize> = (1..=9).filter(|i| !results[i - 1]).collect();
    println!("acceptance: {} of 9 criteria pass", 9 - failed.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
