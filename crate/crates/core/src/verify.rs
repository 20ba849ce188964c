//! End-to-end acceptance checks. Each criterion returns a report instead of
//! panicking so the same code backs the test suite and `verify-all`.
//!
//! Comparison tolerances are fixed here; only the rank cutoff is a parameter.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::biunimodular::{
    bjorck_saffari, gaussian, gcd, is_biunimodular, max_entangled_unitary, BjorckSaffariSpec, LineFunction,
};
use crate::catalog::{explicit_s2_s4, full_catalog, impossibility_certificates, lambda_table, reference_transform};
use crate::error::Result;
use crate::magic::check_properties;
use crate::qft::{check_spec, communication_operator, equiv_classes, factorizations, qft_schmidt_number};
use crate::random::{seeded, unimodular};
use crate::schmidt::{coefficient_deviation, schmidt_decompose, schmidt_number, swap};
use crate::weyl::{analytic_schmidt, diag_from_lambda, dft2, GridFunction};

/// Seed shared by every randomized criterion.
pub const ACCEPTANCE_SEED: u64 = 20_240_917;

const COEFF_TOL: f64 = 1e-9;
const TABLE_TOL: f64 = 1e-12;
const BIUNI_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub max_residual: f64,
    /// Wall-clock time; left out of serialized reports so they are
    /// reproducible.
    #[serde(skip_serializing)]
    pub elapsed_ms: f64,
}

impl CriterionReport {
    /// One line: `[PASS] 3 title (detail)`.
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("[{tag}] criterion {} {}: {} (max residual {:.3e})", self.id, self.title, self.detail, self.max_residual)
    }
}

struct Run {
    start: Instant,
    worst: f64,
    failures: Vec<String>,
}

impl Run {
    fn new() -> Self {
        Run { start: Instant::now(), worst: 0.0, failures: vec![] }
    }

    fn residual(&mut self, what: impl FnOnce() -> String, r: f64, tol: f64) {
        self.worst = self.worst.max(r);
        if r.is_nan() || r > tol {
            self.failures.push(format!("{}: {r:.3e} > {tol:e}", what()));
        }
    }

    fn require(&mut self, what: impl FnOnce() -> String, cond: bool) {
        if !cond {
            self.failures.push(what());
        }
    }

    fn finish(mut self, id: u8, title: &str, summary: String, time_limit: Option<Duration>) -> CriterionReport {
        let elapsed = self.start.elapsed();
        if let Some(limit) = time_limit {
            if elapsed > limit {
                self.failures.push(format!("took {elapsed:?}, limit {limit:?}"));
            }
        }
        let passed = self.failures.is_empty();
        let detail = if passed {
            summary
        } else {
            let mut f = self.failures;
            let extra = f.len().saturating_sub(5);
            f.truncate(5);
            let more = if extra > 0 { format!(" (+{extra} more)") } else { String::new() };
            format!("{}{more}", f.join("; "))
        };
        CriterionReport {
            id,
            title: title.into(),
            passed,
            detail,
            max_residual: self.worst,
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
        }
    }

    fn fail_with(mut self, e: crate::Error, id: u8, title: &str) -> CriterionReport {
        self.failures.push(e.to_string());
        self.finish(id, title, String::new(), None)
    }
}

macro_rules! try_or_report {
    ($run:ident, $id:expr, $title:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return $run.fail_with(err, $id, $title),
        }
    };
}

/// Schmidt numbers 1..=9 on `C³⊗C³`, plus `Sch(U) = Sch(V) = 2`, `Sch(UV) = 4`.
pub fn criterion_1(rel_tol: f64) -> CriterionReport {
    let title = "catalog reproduction";
    let mut run = Run::new();
    let catalog = try_or_report!(run, 1, title, full_catalog(rel_tol));
    let numbers: Vec<usize> = catalog.iter().map(|e| e.coefficients.len()).collect();
    run.require(|| format!("Schmidt numbers {numbers:?}"), numbers == (1..=9).collect::<Vec<_>>());
    for e in &catalog {
        run.residual(|| format!("S={} unitarity", e.s), e.unitarity_residual, 1e-10);
    }
    let (u, v, uv) = explicit_s2_s4();
    let sch = |op| schmidt_number(op, rel_tol).unwrap_or(0);
    let (su, sv, suv) = (sch(&u), sch(&v), sch(&uv));
    run.require(|| format!("Sch(U), Sch(V), Sch(UV) = {su}, {sv}, {suv}"), (su, sv, suv) == (2, 2, 4));
    run.finish(1, title, "Schmidt numbers 1..9; Sch(U)=Sch(V)=2, Sch(UV)=4".into(), Some(Duration::from_secs(1)))
}

/// Computed `λ̂_S` equals the published table for `S ∈ {5,6,7,8}`.
pub fn criterion_2() -> CriterionReport {
    let title = "table fidelity";
    let mut run = Run::new();
    for s in 5..=8 {
        let lambda = try_or_report!(run, 2, title, lambda_table(s));
        let reference = try_or_report!(run, 2, title, reference_transform(s));
        let hat = dft2(&lambda);
        let diff = hat.values().iter().zip(reference.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        run.residual(|| format!("S={s}"), diff, TABLE_TOL);
    }
    run.finish(2, title, "S = 5, 6, 7, 8 entrywise".into(), None)
}

/// Every `P ⊂ Z_3²` with `|P| ∈ {2, 4}` has a unique-translate witness.
pub fn criterion_3() -> CriterionReport {
    let title = "impossibility certificate";
    let mut run = Run::new();
    let certs = try_or_report!(run, 3, title, impossibility_certificates());
    run.require(|| format!("{} certificates, expected 162", certs.len()), certs.len() == 162);
    let bad = certs.iter().filter(|c| !c.verify()).count();
    run.require(|| format!("{bad} witnesses fail re-verification"), bad == 0);
    run.finish(3, title, format!("{} subsets certified", certs.len()), None)
}

/// Closed-form `|λ̂|` against the realignment oracle on random unimodular `λ`.
pub fn criterion_4(rel_tol: f64) -> CriterionReport {
    let title = "analytic vs oracle (diagonal family)";
    let mut run = Run::new();
    let mut rng = seeded(ACCEPTANCE_SEED);
    let mut count = 0;
    for n in 2..=8 {
        for trial in 0..20 {
            let lambda = GridFunction::from_fn(n, |_, _| unimodular(&mut rng));
            let analytic = try_or_report!(run, 4, title, analytic_schmidt(&lambda, rel_tol));
            let oracle = try_or_report!(run, 4, title, schmidt_decompose(&diag_from_lambda(&lambda), rel_tol));
            match coefficient_deviation(analytic.coefficients(), oracle.coefficients()) {
                Some(d) => run.residual(|| format!("N={n} trial {trial}"), d, COEFF_TOL),
                None => run.require(|| format!("N={n} trial {trial}: {} vs {} terms", analytic.len(), oracle.len()), false),
            }
            count += 1;
        }
    }
    run.finish(4, title, format!("{count} random λ, N = 2..8"), Some(Duration::from_secs(30)))
}

/// QFT sweep over every factorization with `N ≤ 16`; class counting to 24.
pub fn criterion_5(rel_tol: f64) -> CriterionReport {
    let title = "QFT sweep";
    let mut run = Run::new();
    let mut specs = 0;
    for n in 1..=16 {
        for spec in factorizations(n) {
            let c = try_or_report!(run, 5, title, check_spec(&spec, rel_tol));
            specs += 1;
            run.require(|| format!("{spec:?}: {} classes, Sch {}", c.class_count, c.schmidt_number), c.class_count == c.schmidt_number);
            run.require(|| format!("{spec:?}: oracle rank {}", c.oracle_rank), c.oracle_rank == c.schmidt_number);
            match c.coefficient_deviation {
                Some(d) => run.residual(|| format!("{spec:?} coefficients"), d, COEFF_TOL),
                None => run.require(|| format!("{spec:?}: term counts differ"), false),
            }
            run.residual(|| format!("{spec:?} reconstruction"), c.reconstruction_residual, COEFF_TOL);
            run.residual(|| format!("{spec:?} A_C representative"), c.representative_spread, 1e-12);
            run.require(
                || format!("{spec:?}: predicate {} vs oracle {}", c.predicate, c.oracle_max_entangled),
                c.predicate == c.oracle_max_entangled,
            );
            run.require(|| format!("{spec:?}: coefficient outside value set"), c.in_value_set);
            run.require(|| format!("{spec:?}: {} distinct values", c.distinct_values), c.distinct_values <= 4);
        }
    }
    let mut counted = 0;
    for n in 17..=24 {
        for spec in factorizations(n) {
            let classes = try_or_report!(run, 5, title, equiv_classes(&spec));
            let sch = try_or_report!(run, 5, title, qft_schmidt_number(&spec));
            run.require(|| format!("{spec:?}: {} classes, Sch {sch}", classes.len()), classes.len() == sch);
            counted += 1;
        }
    }
    run.finish(5, title, format!("{specs} specs with N ≤ 16 checked against the oracle, {counted} more counted to N = 24"), None)
}

/// `log₂ Sch = log₂ min(M₁N₁, M₂N₂)` on the sweep; communication operator
/// against its oracle for `d₁d₂d₃ ≤ 24`.
pub fn criterion_6(rel_tol: f64) -> CriterionReport {
    let title = "communication bounds";
    let mut run = Run::new();
    let mut specs = 0;
    for n in 1..=16 {
        for spec in factorizations(n) {
            let c = try_or_report!(run, 6, title, check_spec(&spec, rel_tol));
            specs += 1;
            run.residual(|| format!("{spec:?}: upper − lower"), (c.bounds.upper - c.bounds.lower).abs(), 1e-12);
            run.require(|| format!("{spec:?}: not maximal"), c.bounds.maximal);
        }
    }
    let mut ops = 0;
    for d1 in 1..=24 {
        for d2 in 1..=24 / d1 {
            for d3 in 1..=24 / (d1 * d2) {
                let (op, analytic) = try_or_report!(run, 6, title, communication_operator(d1, d2, d3));
                let oracle = try_or_report!(run, 6, title, schmidt_decompose(&op, rel_tol));
                match coefficient_deviation(analytic.coefficients(), oracle.coefficients()) {
                    Some(d) => run.residual(|| format!("C({d1},{d2},{d3})"), d, COEFF_TOL),
                    None => run.require(|| format!("C({d1},{d2},{d3}): Sch {} vs {d2}", oracle.len()), false),
                }
                run.residual(|| format!("C({d1},{d2},{d3}) reconstruction"), analytic.reconstruction_residual(&op), COEFF_TOL);
                ops += 1;
            }
        }
    }
    run.finish(6, title, format!("{specs} QFT specs maximal; {ops} communication operators"), None)
}

fn check_biunimodular(run: &mut Run, label: impl Fn() -> String, f: &LineFunction) {
    let worst = f.values().iter().chain(crate::biunimodular::dft1(f).values()).map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    run.residual(&label, worst, BIUNI_TOL);
    run.require(label, is_biunimodular(f, BIUNI_TOL));
}

/// Gaussian and Björck–Saffari functions are biunimodular; lifted product
/// unitaries for `N ≤ 6` have `N²` unit Schmidt coefficients.
pub fn criterion_7(rel_tol: f64) -> CriterionReport {
    let title = "biunimodularity";
    let mut run = Run::new();
    let mut functions = vec![];
    for n in (1..=15).step_by(2) {
        for a in 0..n as i64 {
            if gcd(a as u64, n as u64) != 1 {
                continue;
            }
            for b in 0..n as i64 {
                let g = try_or_report!(run, 7, title, gaussian(n, a, b));
                check_biunimodular(&mut run, || format!("g_{{{n},{a},{b}}}"), &g);
                functions.push(g);
            }
        }
    }
    for n in (2..=16).step_by(2) {
        let g = try_or_report!(run, 7, title, gaussian(n, 1, 0));
        check_biunimodular(&mut run, || format!("g_{n}"), &g);
        functions.push(g);
    }
    let mut rng = seeded(ACCEPTANCE_SEED ^ 7);
    for (n, case) in [(4, 1), (8, 1), (9, 1), (12, 1), (16, 1), (18, 2)] {
        let canonical = BjorckSaffariSpec::canonical(n);
        run.require(|| format!("N={n} is case {}", canonical.case_tag), canonical.case_tag == case);
        let (pn, _) = canonical.parameter_dims();
        let mut tau: Vec<usize> = (0..pn).collect();
        tau.reverse();
        let phases = (0..pn).map(|_| unimodular(&mut rng)).collect();
        let varied = BjorckSaffariSpec { tau, phases, ..canonical.clone() };
        for spec in [canonical, varied] {
            let f = try_or_report!(run, 7, title, bjorck_saffari(&spec));
            check_biunimodular(&mut run, || format!("Björck–Saffari N={n}"), &f);
            functions.push(f);
        }
    }
    let mut lifted = 0;
    for n in 1..=6 {
        let on_n: Vec<&LineFunction> = functions.iter().filter(|f| f.n() == n).collect();
        let pairs = [(on_n[0], on_n[0]), (on_n[0], on_n[on_n.len() - 1])];
        for (f, g) in pairs {
            let u = try_or_report!(run, 7, title, max_entangled_unitary(f, g));
            run.residual(|| format!("N={n} lift unitarity"), u.matrix().unitarity_residual(), BIUNI_TOL);
            let d = try_or_report!(run, 7, title, schmidt_decompose(&u, rel_tol));
            run.require(|| format!("N={n} lift: {} coefficients", d.len()), d.len() == n * n);
            let worst = d.coefficients().iter().map(|c| (c - 1.0).abs()).fold(0.0, f64::max);
            run.residual(|| format!("N={n} lift coefficients"), worst, COEFF_TOL);
            lifted += 1;
        }
    }
    run.finish(7, title, format!("{} functions biunimodular; {lifted} lifts maximally entangled", functions.len()), None)
}

/// SWAP on `C^N⊗C^N` has `N²` unit coefficients.
pub fn criterion_8(rel_tol: f64) -> CriterionReport {
    let title = "SWAP";
    let mut run = Run::new();
    for n in 1..=6 {
        let d = try_or_report!(run, 8, title, swap(n).and_then(|s| schmidt_decompose(&s, rel_tol)));
        run.require(|| format!("N={n}: Sch {}", d.len()), d.len() == n * n);
        let worst = d.coefficients().iter().map(|c| (c - 1.0).abs()).fold(0.0, f64::max);
        run.residual(|| format!("N={n}"), worst, COEFF_TOL);
    }
    run.finish(8, title, "N = 1..6".into(), None)
}

/// Determinant-gradient properties at `N ∈ {2, 3, 4}` on 100 seeded trials.
pub fn criterion_9() -> CriterionReport {
    let title = "determinant gradient properties";
    let mut run = Run::new();
    let mut checks = 0;
    for n in 2..=4 {
        let report = try_or_report!(run, 9, title, check_properties(n, 100, ACCEPTANCE_SEED));
        for p in &report.properties {
            checks += 1;
            run.worst = run.worst.max(p.max_residual.min(p.tolerance));
            run.require(|| format!("N={n} property {}: residual {:.3e} (tol {:e})", p.id, p.max_residual, p.tolerance), p.passed);
        }
    }
    run.finish(9, title, format!("{checks} property checks over N = 2, 3, 4"), None)
}

/// All nine criteria in order.
pub fn run_all(rel_tol: f64) -> Vec<CriterionReport> {
    vec![
        criterion_1(rel_tol),
        criterion_2(),
        criterion_3(),
        criterion_4(rel_tol),
        criterion_5(rel_tol),
        criterion_6(rel_tol),
        criterion_7(rel_tol),
        criterion_8(rel_tol),
        criterion_9(),
    ]
}

pub fn run_one(id: u8, rel_tol: f64) -> Result<CriterionReport> {
    Ok(match id {
        1 => criterion_1(rel_tol),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(rel_tol),
        5 => criterion_5(rel_tol),
        6 => criterion_6(rel_tol),
        7 => criterion_7(rel_tol),
        8 => criterion_8(rel_tol),
        9 => criterion_9(),
        _ => return Err(crate::Error::Domain(format!("no criterion {id}; expected 1..=9"))),
    })
}
