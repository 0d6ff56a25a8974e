use std::path::Path;

use entmono_core::locc::strong_monotonicity_check;
use entmono_core::{
    compare, minimize_convex_roof, minimize_ef, random_local_channel, schmidt_decompose, theorem4_state,
    theorem4_value, wootters_concurrence, MonotoneSpec, Side, SolverConfig, Theorem4Params,
};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::report::{solver_json, ConfigEcho, InputDigest, Report};
use crate::statefile::{self, LoadedState};
use crate::{fixtures, CliError, Command, SolverArgs};

/// Agreement required by `theorem4 --verify`.
const VERIFY_TOL: f64 = 2e-3;

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Schmidt { statefile } => schmidt(statefile),
        Command::Ef { statefile, solver } => solve(statefile, solver, "ef"),
        Command::Roof { statefile, solver } => solve(statefile, solver, "roof"),
        Command::Compare { statefile, solver } => solve(statefile, solver, "compare"),
        Command::Theorem4 { eta, c1sq, monotone, verify, seed } => theorem4(*eta, *c1sq, monotone, *verify, *seed),
        Command::Wootters { statefile } => wootters(statefile),
        Command::LoccTest { statefile, monotone, channels, kraus, seed, restarts } => {
            locc_test(statefile, monotone, *channels, *kraus, *seed, *restarts)
        }
        Command::Fixtures { dir, seed } => fixtures::write_all(dir, *seed),
    }
}

fn load(path: &Path) -> Result<(LoadedState, InputDigest), CliError> {
    let (state, bytes) = statefile::load(path)?;
    let digest = InputDigest { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) };
    Ok((state, digest))
}

fn config(args: &SolverArgs) -> SolverConfig {
    SolverConfig {
        restarts: args.restarts,
        cardinality: args.cardinality,
        max_iters: args.max_iters,
        seed: args.seed,
        ..SolverConfig::default()
    }
}

fn schmidt(path: &Path) -> Result<Report, CliError> {
    let (state, digest) = load(path)?;
    let LoadedState::Pure(psi) = state else {
        return Err(CliError::Input("schmidt needs a pure-state file (kind \"pure\")".into()));
    };
    let lambda = schmidt_decompose(&psi);
    let mut report = Report::new("schmidt", json!({ "schmidt_vector": lambda.entries() }));
    report.input = Some(digest);
    Ok(report)
}

fn solve(path: &Path, args: &SolverArgs, command: &str) -> Result<Report, CliError> {
    let (state, digest) = load(path)?;
    let spec = MonotoneSpec::from_name(&args.monotone)?;
    let cfg = config(args);
    let rho = state.to_density();
    let results = match command {
        "ef" => solver_json(&minimize_ef(&rho, &spec, &cfg)?),
        "roof" => solver_json(&minimize_convex_roof(&rho, &spec, &cfg)?),
        _ => {
            let g = compare(&rho, &spec, &cfg)?;
            json!({
                "ef_value": g.ef.value,
                "roof_value": g.roof.value,
                "gap": g.gap,
                "tolerance": g.tolerance,
                "gap_significant": g.gap_significant,
                "ef": solver_json(&g.ef),
                "roof": solver_json(&g.roof),
            })
        }
    };
    let mut report = Report::new(command, results);
    report.input = Some(digest);
    report.seed = Some(cfg.seed);
    report.config = Some(ConfigEcho::new(spec.name(), &cfg));
    Ok(report)
}

fn theorem4(eta: f64, c1sq: f64, monotone: &str, verify: bool, seed: u64) -> Result<Report, CliError> {
    let params = Theorem4Params::from_c1sq(eta, c1sq)?;
    let spec = MonotoneSpec::from_name(monotone)?;
    let value = theorem4_value(&params, &spec);
    let mut report = Report::new(
        "theorem4",
        json!({ "eta": eta, "c1sq": c1sq, "theta_vector": params.theta_vector(), "value": value }),
    );
    if verify {
        let cfg = SolverConfig::with_seed(seed);
        let solved = minimize_ef(&theorem4_state(&params), &spec, &cfg)?;
        let diff = (solved.value - value).abs();
        report.check("solver_matches_closed_form", diff <= VERIFY_TOL, format!("|{} - {value}| = {diff:e}", solved.value));
        report.results["solver"] = solver_json(&solved);
        report.seed = Some(seed);
        report.config = Some(ConfigEcho::new(spec.name(), &cfg));
    }
    Ok(report)
}

fn wootters(path: &Path) -> Result<Report, CliError> {
    let (state, digest) = load(path)?;
    let c = wootters_concurrence(&state.to_density())?;
    let mut report = Report::new("wootters", json!({ "concurrence": c }));
    report.input = Some(digest);
    Ok(report)
}

fn locc_test(
    path: &Path,
    monotone: &str,
    channels: usize,
    kraus: usize,
    seed: u64,
    restarts: usize,
) -> Result<Report, CliError> {
    let (state, digest) = load(path)?;
    let spec = MonotoneSpec::from_name(monotone)?;
    let rho = state.to_density();
    let cfg = SolverConfig { restarts, seed, ..SolverConfig::default() };
    let mut rows = Vec::with_capacity(channels);
    let mut report = Report::new("locc-test", json!(null));
    for k in 0..channels {
        let (side, dim) = if k % 2 == 0 { (Side::A, rho.dims().a) } else { (Side::B, rho.dims().b) };
        let ch = random_local_channel(dim, kraus, side, seed.wrapping_add(k as u64))?;
        let r = strong_monotonicity_check(&rho, &spec, &ch, &cfg)?;
        report.check(
            format!("channel_{k}"),
            r.passed,
            format!("lhs {} + slack {} >= rhs {}", r.lhs, r.slack, r.rhs),
        );
        rows.push(json!({
            "channel": k,
            "side": if side == Side::A { "A" } else { "B" },
            "lhs": r.lhs,
            "rhs": r.rhs,
            "slack": r.slack,
            "branches": r.branches.iter().map(|b| json!({ "probability": b.probability, "value": b.value })).collect::<Vec<_>>(),
            "passed": r.passed,
        }));
    }
    let failures = rows.iter().filter(|r| r["passed"] == json!(false)).count();
    report.results = json!({ "channels": rows, "failures": failures });
    report.input = Some(digest);
    report.seed = Some(seed);
    report.config = Some(ConfigEcho::new(spec.name(), &cfg));
    Ok(report)
}
