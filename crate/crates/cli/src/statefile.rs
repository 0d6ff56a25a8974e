//! JSON state files.
//!
//! ```json
//! { "dims": [2, 2], "kind": "pure", "data": [[0.7071, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071, 0.0]] }
//! ```
//!
//! `data` holds `[re, im]` pairs: `d_a * d_b` amplitudes for `"pure"`, or the
//! `(d_a d_b)^2` entries of the matrix in row-major order for `"density"`.

use std::fs;
use std::path::Path;

use entmono_core::{DensityMatrix, Dims, PureState, C64};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pure,
    Density,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub kind: Kind,
    pub data: Vec<[f64; 2]>,
}

/// A validated state read from disk.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl LoadedState {
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(p) => p.to_density(),
            LoadedState::Density(d) => d.clone(),
        }
    }
}

pub fn pairs(values: impl IntoIterator<Item = C64>) -> Vec<[f64; 2]> {
    values.into_iter().map(|z| [z.re, z.im]).collect()
}

impl StateFile {
    pub fn from_pure(psi: &PureState) -> Self {
        let d = psi.dims();
        Self { dims: [d.a, d.b], kind: Kind::Pure, data: pairs(psi.amplitudes().iter().copied()) }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        let d = rho.dims();
        let m = rho.matrix();
        let n = d.total();
        let data = (0..n).flat_map(|r| (0..n).map(move |c| m[(r, c)])).map(|z| [z.re, z.im]).collect();
        Self { dims: [d.a, d.b], kind: Kind::Density, data }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed state file: {e}")))
    }

    /// Enforces the state invariants.
    pub fn validate(&self) -> Result<LoadedState, CliError> {
        let dims = Dims::new(self.dims[0], self.dims[1])?;
        let values: Vec<C64> = self.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        match self.kind {
            Kind::Pure => Ok(LoadedState::Pure(PureState::new(dims, values)?)),
            Kind::Density => {
                let n = dims.total();
                if values.len() != n * n {
                    return Err(entmono_core::Error::DimensionMismatch { expected: n * n, got: values.len() }.into());
                }
                let m = DMatrix::from_row_slice(n, n, &values);
                Ok(LoadedState::Density(DensityMatrix::new(dims, m)?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }
}

/// Reads and validates a state file, returning the state and the raw bytes.
pub fn load(path: &Path) -> Result<(LoadedState, Vec<u8>), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("{} is not UTF-8: {e}", path.display())))?;
    let state = StateFile::parse(text)?.validate()?;
    Ok((state, bytes))
}
