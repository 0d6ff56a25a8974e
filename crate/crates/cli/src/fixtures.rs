//! Standard fixture files, regenerated by `entmono fixtures <dir>`.

use std::fs;
use std::path::Path;

use entmono_core::{random_density, theorem4_state, DensityMatrix, Dims, PureState, Theorem4Params, C64};
use nalgebra::DMatrix;
use serde_json::json;

use crate::report::Report;
use crate::statefile::{Kind, StateFile};
use crate::CliError;

fn bell() -> PureState {
    PureState::from_schmidt(Dims { a: 2, b: 2 }, &[0.5, 0.5]).expect("valid")
}

fn werner(p: f64) -> DensityMatrix {
    let d = Dims { a: 2, b: 2 };
    let m = bell().projector() * C64::new(p, 0.0) + DensityMatrix::maximally_mixed(d).matrix() * C64::new(1.0 - p, 0.0);
    DensityMatrix::new(d, m).expect("valid")
}

pub fn fixture_set(seed: u64) -> Vec<(&'static str, StateFile)> {
    let d22 = Dims { a: 2, b: 2 };
    let probs = random_density(d22, 4, seed).expect("valid rank").matrix().diagonal();
    let separable = DensityMatrix::new(d22, DMatrix::from_diagonal(&probs)).expect("valid");
    let t4 = theorem4_state(&Theorem4Params::from_c1sq(0.5, 0.5).expect("valid"));
    let mut malformed = StateFile::from_pure(&PureState::basis(d22, 0, 0));
    malformed.data[0] = [0.9f64.sqrt(), 0.0];
    assert_eq!(malformed.kind, Kind::Pure);
    vec![
        ("bell.json", StateFile::from_pure(&bell())),
        ("product.json", StateFile::from_pure(&PureState::basis(d22, 0, 1))),
        ("werner_0.8.json", StateFile::from_density(&werner(0.8))),
        ("separable.json", StateFile::from_density(&separable)),
        ("qutrit_family_eta0.5.json", StateFile::from_density(&t4)),
        ("random_rank2_2x2.json", StateFile::from_density(&random_density(d22, 2, seed).expect("valid rank"))),
        ("malformed_norm.json", malformed),
    ]
}

pub fn write_all(dir: &Path, seed: u64) -> Result<Report, CliError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, file) in fixture_set(seed) {
        fs::write(dir.join(name), format!("{}\n", file.to_json()))?;
        written.push(name);
    }
    let mut report = Report::new("fixtures", json!({ "dir": dir.display().to_string(), "files": written }));
    report.seed = Some(seed);
    Ok(report)
}
