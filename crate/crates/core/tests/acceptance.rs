//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process exits nonzero
//! if any criterion fails.
//!
//! Run alone with `cargo test -p entmono-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use entmono_core::decompositions::Isometry;
use entmono_core::locc::random_local_channel;
use entmono_core::monotones::check_schur_concavity;
use entmono_core::states::DEFAULT_CUTOFF;
use entmono_core::*;
use nalgebra::DMatrix;

/// Solver-vs-oracle and solver-vs-solver agreement.
const AGREEMENT_TOL: f64 = 2e-3;
/// Tolerance on the closed-form EF value of the gap instance.
const GAP_VALUE_TOL: f64 = 1e-3;
const MIN_GAP: f64 = 0.2;
const STRONG_MONOTONICITY_SLACK: f64 = 5e-3;
const SEPARABLE_TOL: f64 = 1e-6;
const HJW_TOL: f64 = 1e-8;
const LU_TOL: f64 = 2e-3;
const ORDERING_SLACK: f64 = 2e-3;

/// `h(0.75, 0.25) = -(0.75 ln 0.75 + 0.25 ln 0.25)`.
const GAP_EF_VALUE: f64 = 0.562_335_144_618_808_3;
/// `0.5 ln 2`, the spectral-ensemble roof value.
const GAP_ROOF_BOUND: f64 = 0.346_573_590_279_972_65;

struct Outcome {
    passed: bool,
    detail: String,
}

fn d22() -> Dims {
    Dims::new(2, 2).unwrap()
}

fn d33() -> Dims {
    Dims::new(3, 3).unwrap()
}

fn ac1_closed_form_grid() -> Outcome {
    let cfg = SolverConfig { restarts: 64, cardinality: Some(4), ..SolverConfig::default() };
    let mut worst: f64 = 0.0;
    let mut fails = Vec::new();
    for eta in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for c1sq in [0.5, 0.6, 0.75, 0.9] {
            let params = Theorem4Params::from_c1sq(eta, c1sq).unwrap();
            let rho = theorem4_state(&params);
            for spec in [MonotoneSpec::entropy(), MonotoneSpec::avg_e()] {
                let got = minimize_ef(&rho, &spec, &cfg).unwrap().value;
                let want = theorem4_value(&params, &spec);
                let err = (got - want).abs();
                worst = worst.max(err);
                if err > AGREEMENT_TOL {
                    fails.push(format!("eta={eta} c1sq={c1sq} {}: {got} vs {want}", spec.name()));
                }
            }
        }
    }
    Outcome {
        passed: fails.is_empty(),
        detail: format!("40 cases, max |ef - closed form| = {worst:.2e} (tol {AGREEMENT_TOL:e}) {fails:?}"),
    }
}

fn ac2_two_qubit_concurrence() -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut fails = Vec::new();
    for seed in 0..50u64 {
        let rho = random_density(d22(), 4, 20_000 + seed).unwrap();
        let got = minimize_ef(&rho, &MonotoneSpec::concurrence(), &cfg).unwrap().value;
        let want = wootters_concurrence(&rho).unwrap();
        let err = (got - want).abs();
        worst = worst.max(err);
        if err > AGREEMENT_TOL {
            fails.push(format!("seed {seed}: {got} vs {want}"));
        }
    }
    Outcome {
        passed: fails.is_empty(),
        detail: format!("50 states, max |ef - wootters| = {worst:.2e} (tol {AGREEMENT_TOL:e}) {fails:?}"),
    }
}

fn ac3_linear_equivalence() -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut fails = Vec::new();
    for seed in 0..30u64 {
        let rho = random_density(d33(), 2, 30_000 + seed).unwrap();
        let report = compare(&rho, &MonotoneSpec::avg_e(), &cfg).unwrap();
        worst = worst.max(report.gap.abs());
        if report.gap.abs() > AGREEMENT_TOL {
            fails.push(format!("seed {seed}: gap {}", report.gap));
        }
    }
    Outcome {
        passed: fails.is_empty(),
        detail: format!("30 states, max |ef - roof| = {worst:.2e} (tol {AGREEMENT_TOL:e}) {fails:?}"),
    }
}

fn ac4_new_monotone_gap() -> Outcome {
    let params = Theorem4Params::from_c1sq(0.5, 0.5).unwrap();
    let rho = theorem4_state(&params);
    let r = compare(&rho, &MonotoneSpec::entropy(), &SolverConfig::default()).unwrap();
    let ok_ef = (r.ef.value - GAP_EF_VALUE).abs() <= GAP_VALUE_TOL;
    let ok_roof = r.roof.value <= GAP_ROOF_BOUND + GAP_VALUE_TOL;
    let ok_gap = r.gap >= MIN_GAP;
    Outcome {
        passed: ok_ef && ok_roof && ok_gap && r.gap_significant,
        detail: format!(
            "ef = {:.6} (want {GAP_EF_VALUE:.5} ± {GAP_VALUE_TOL:e}), roof = {:.6} (<= {GAP_ROOF_BOUND:.5} + {GAP_VALUE_TOL:e}), gap = {:.6} (>= {MIN_GAP})",
            r.ef.value, r.roof.value, r.gap
        ),
    }
}

fn ac5_strong_monotonicity() -> Outcome {
    let cfg = SolverConfig::default();
    let mut violations = Vec::new();
    let mut min_margin = f64::INFINITY;
    for seed in 0..100u64 {
        let rho = random_density(d22(), 2, 50_000 + seed).unwrap();
        let side = if seed % 2 == 0 { Side::A } else { Side::B };
        let ch = random_local_channel(2, 2, side, 60_000 + seed).unwrap();
        let r = locc::strong_monotonicity_check_with_slack(
            &rho,
            &MonotoneSpec::concurrence(),
            &ch,
            &cfg,
            STRONG_MONOTONICITY_SLACK,
        )
        .unwrap();
        min_margin = min_margin.min(r.lhs - r.rhs);
        if !r.passed {
            violations.push(format!("seed {seed}: lhs {} rhs {}", r.lhs, r.rhs));
        }
    }
    Outcome {
        passed: violations.is_empty(),
        detail: format!(
            "100 pairs, {} violations, min lhs - rhs = {min_margin:.2e} (slack {STRONG_MONOTONICITY_SLACK:e}) {violations:?}",
            violations.len()
        ),
    }
}

fn ac6_separable_vanishing() -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        // the diagonal of any density matrix is a probability vector
        let probs = random_density(d22(), 4, 70_000 + seed).unwrap().matrix().diagonal();
        let rho = DensityMatrix::new(d22(), DMatrix::from_diagonal(&probs)).unwrap();
        for spec in MonotoneSpec::builtins() {
            worst = worst.max(minimize_ef(&rho, &spec, &cfg).unwrap().value);
        }
    }
    Outcome {
        passed: worst <= SEPARABLE_TOL,
        detail: format!("20 states x 3 monotones, max E_F = {worst:.2e} (tol {SEPARABLE_TOL:e})"),
    }
}

fn ac7_properties() -> Outcome {
    let mut fails: Vec<String> = Vec::new();

    // majorization: reflexive and transitive on Schmidt vectors of random states
    let vecs: Vec<SchmidtVector> = (0..40).map(|s| schmidt_decompose(&random_pure(d33(), 80_000 + s))).collect();
    let mut extended = vecs.clone();
    extended.push(SchmidtVector::product(3));
    extended.push(SchmidtVector::uniform(3));
    for x in &extended {
        if !majorizes(x, x) {
            fails.push("majorization not reflexive".into());
        }
        if !majorizes(x, &SchmidtVector::uniform(3)) {
            fails.push("uniform vector not majorized".into());
        }
        for y in &extended {
            for z in &extended {
                if majorizes(x, y) && majorizes(y, z) && !majorizes(x, z) {
                    fails.push("majorization not transitive".into());
                }
            }
        }
    }

    // Schur concavity of the built-ins
    for spec in MonotoneSpec::builtins() {
        let r = check_schur_concavity(&spec, 1000, 81);
        if !r.passed() {
            fails.push(format!("{} Schur violations: {}", spec.name(), r.violations.len()));
        }
    }

    // HJW reconstruction for random isometries, average Schmidt vector validity
    for seed in 0..20u64 {
        let rho = random_density(Dims::new(2, 3).unwrap(), 1 + (seed as usize % 6), 82_000 + seed).unwrap();
        let spec = eigendecompose(&rho, DEFAULT_CUTOFF);
        let r = spec.rank();
        let v = Isometry::random(r * r + (seed as usize % 5), r, seed);
        let e = hjw_ensemble(&spec, &v).unwrap();
        let err = rho.distance(&e.density_matrix());
        if err > HJW_TOL || !ensemble_reconstructs(&e, &rho) {
            fails.push(format!("HJW reconstruction error {err:e}"));
        }
        let avg = average_schmidt_vector(&e);
        let sorted = avg.entries().windows(2).all(|w| w[0] >= w[1]);
        let total: f64 = avg.entries().iter().sum();
        if !sorted || (total - 1.0).abs() > 1e-10 || !majorizes(&SchmidtVector::product(avg.len()), &avg) {
            fails.push("average Schmidt vector invalid".into());
        }
    }

    // local-unitary invariance, witness self-consistency and Theorem 2 ordering
    let cfg = SolverConfig::default();
    let mut lu_worst: f64 = 0.0;
    let mut order_worst = f64::INFINITY;
    for seed in 0..10u64 {
        let (rho, spec) = if seed % 2 == 0 {
            (random_density(d22(), 2, 83_000 + seed).unwrap(), MonotoneSpec::concurrence())
        } else {
            (random_density(d33(), 2, 83_000 + seed).unwrap(), MonotoneSpec::entropy())
        };
        let u = random_local_unitary(rho.dims(), 84_000 + seed);
        let rotated = u.apply_density(&rho).unwrap();
        let report = compare(&rho, &spec, &cfg).unwrap();
        let ef_rot = minimize_ef(&rotated, &spec, &cfg).unwrap();
        lu_worst = lu_worst.max((report.ef.value - ef_rot.value).abs());
        order_worst = order_worst.min(report.gap);
        for r in [&report.ef, &ef_rot] {
            if !pure_to_ensemble_convertible(&r.witness_state(), &r.witness_ensemble) {
                fails.push(format!("seed {seed}: witness not convertible into its ensemble"));
            }
        }
        if !ensemble_reconstructs(&report.ef.witness_ensemble, &rho) {
            fails.push(format!("seed {seed}: EF witness does not reconstruct"));
        }
    }
    if lu_worst > LU_TOL {
        fails.push(format!("local-unitary deviation {lu_worst:e}"));
    }
    if order_worst < -ORDERING_SLACK {
        fails.push(format!("ef below roof by {:e}", -order_worst));
    }

    Outcome {
        passed: fails.is_empty(),
        detail: format!(
            "majorization/Schur/HJW/witness checks; LU deviation {lu_worst:.2e} (tol {LU_TOL:e}); min ef - roof {order_worst:.2e} (slack {ORDERING_SLACK:e}) {fails:?}"
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("AC1 closed-form 3x3 family matches E_F", ac1_closed_form_grid),
        ("AC2 two-qubit E_F(concurrence) = Wootters", ac2_two_qubit_concurrence),
        ("AC3 linear monotone: E_F = convex roof", ac3_linear_equivalence),
        ("AC4 entropy gap between E_F and roof", ac4_new_monotone_gap),
        ("AC5 strong monotonicity, 100 channels", ac5_strong_monotonicity),
        ("AC6 separable states vanish", ac6_separable_vanishing),
        ("AC7 property suites", ac7_properties),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {name} ({:.1}s): {}", t.elapsed().as_secs_f64(), out.detail);
        if !out.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
