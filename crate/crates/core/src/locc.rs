//! One-sided local Kraus channels and LOCC conversion criteria.
//!
//! A channel `{M_k}` on one side yields branches `p_k = Tr(M_k rho M_k^dagger)`,
//! `rho_k = M_k rho M_k^dagger / p_k`. Strong monotonicity asks
//! `E_F(rho) >= sum_k p_k E_F(rho_k)`; solver estimates are upper bounds on both sides,
//! so checks carry a slack.

use nalgebra::DMatrix;

use crate::decompositions::{average_schmidt_vector, Ensemble};
use crate::error::{Error, Result};
use crate::linalg::{gaussian_matrix, hermitian_eigen, max_abs_diff};
use crate::monotones::MonotoneSpec;
use crate::optimizer::{minimize_ef, SolverConfig};
use crate::states::{majorizes, schmidt_decompose, seeded_rng, DensityMatrix, PureState};
use crate::C64;

const COMPLETENESS_TOL: f64 = 1e-10;
/// Branches below this probability are dropped.
pub const MIN_BRANCH_PROB: f64 = 1e-12;
/// Slack for inequalities between solver estimates.
pub const SOLVER_SLACK: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Kraus operators acting on one side of a bipartite system.
#[derive(Debug, Clone)]
pub struct LocalChannel {
    side: Side,
    kraus: Vec<DMatrix<C64>>,
}

impl LocalChannel {
    /// Requires square operators of a common size with `sum_k M_k^dagger M_k = I` to `1e-10`.
    pub fn new(side: Side, kraus: Vec<DMatrix<C64>>) -> Result<Self> {
        let d = kraus.first().map(|m| m.nrows()).ok_or(Error::Incomplete(1.0))?;
        if let Some(m) = kraus.iter().find(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: m.nrows().max(m.ncols()) });
        }
        let ch = Self { side, kraus };
        let dev = ch.completeness_deviation();
        if dev > COMPLETENESS_TOL {
            return Err(Error::Incomplete(dev));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize, side: Side) -> Self {
        Self { side, kraus: vec![DMatrix::identity(dim, dim)] }
    }

    /// Computational-basis measurement `{|i><i|}`.
    pub fn projective(dim: usize, side: Side) -> Self {
        let kraus = (0..dim)
            .map(|i| {
                let mut m = DMatrix::zeros(dim, dim);
                m[(i, i)] = C64::new(1.0, 0.0);
                m
            })
            .collect();
        Self { side, kraus }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    pub fn kraus(&self) -> &[DMatrix<C64>] {
        &self.kraus
    }

    /// `max |sum_k M_k^dagger M_k - I|`
    pub fn completeness_deviation(&self) -> f64 {
        let d = self.dim();
        let mut s = DMatrix::zeros(d, d);
        for m in &self.kraus {
            s += m.adjoint() * m;
        }
        max_abs_diff(&s, &DMatrix::identity(d, d))
    }

    fn lifted(&self, k: usize, rho: &DensityMatrix) -> Result<DMatrix<C64>> {
        let dims = rho.dims();
        let local = match self.side {
            Side::A => dims.a,
            Side::B => dims.b,
        };
        if local != self.dim() {
            return Err(Error::DimensionMismatch { expected: local, got: self.dim() });
        }
        Ok(match self.side {
            Side::A => self.kraus[k].kronecker(&DMatrix::<C64>::identity(dims.b, dims.b)),
            Side::B => DMatrix::<C64>::identity(dims.a, dims.a).kronecker(&self.kraus[k]),
        })
    }
}

/// Random channel with `n_kraus` operators: Gaussian blocks `G_k` rescaled by
/// `S^{-1/2}` with `S = sum_k G_k^dagger G_k`.
pub fn random_local_channel(dim: usize, n_kraus: usize, side: Side, seed: u64) -> Result<LocalChannel> {
    if n_kraus == 0 || dim == 0 {
        return Err(Error::InvalidConfig("channel needs dim >= 1 and n_kraus >= 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let blocks: Vec<DMatrix<C64>> = (0..n_kraus).map(|_| gaussian_matrix(dim, dim, &mut rng)).collect();
    let mut gram = DMatrix::zeros(dim, dim);
    for g in &blocks {
        gram += g.adjoint() * g;
    }
    let (vals, vecs) = hermitian_eigen(&gram);
    let inv_sqrt = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        vals.iter().map(|&v| C64::new(1.0 / v.sqrt(), 0.0)),
    ));
    let s = &vecs * inv_sqrt * vecs.adjoint();
    LocalChannel::new(side, blocks.into_iter().map(|g| g * &s).collect())
}

/// One measurement outcome.
#[derive(Debug, Clone)]
pub struct Branch {
    pub probability: f64,
    pub state: DensityMatrix,
}

/// Post-measurement branches `(p_k, rho_k)`, dropping outcomes with `p_k < 1e-12`.
pub fn apply_channel_branches(rho: &DensityMatrix, ch: &LocalChannel) -> Result<Vec<Branch>> {
    let mut out = Vec::with_capacity(ch.kraus.len());
    for k in 0..ch.kraus.len() {
        let m = ch.lifted(k, rho)?;
        let out_k = &m * rho.matrix() * m.adjoint();
        let p = out_k.trace().re;
        if p < MIN_BRANCH_PROB {
            continue;
        }
        out.push(Branch { probability: p, state: DensityMatrix::from_unnormalized(rho.dims(), out_k)? });
    }
    Ok(out)
}

/// Non-selective output `sum_k M_k rho M_k^dagger`.
pub fn deterministic_output(rho: &DensityMatrix, ch: &LocalChannel) -> Result<DensityMatrix> {
    let n = rho.dims().total();
    let mut acc = DMatrix::zeros(n, n);
    for k in 0..ch.kraus.len() {
        let m = ch.lifted(k, rho)?;
        acc += &m * rho.matrix() * m.adjoint();
    }
    DensityMatrix::new(rho.dims(), acc)
}

/// Pure-to-pure LOCC convertibility `phi -> psi`: `lambda(psi)` majorizes `lambda(phi)`.
pub fn nielsen_convertible(phi: &PureState, psi: &PureState) -> bool {
    phi.dims() == psi.dims() && majorizes(&schmidt_decompose(psi), &schmidt_decompose(phi))
}

/// `phi` converts into the ensemble iff its average Schmidt vector majorizes `lambda(phi)`.
pub fn pure_to_ensemble_convertible(phi: &PureState, e: &Ensemble) -> bool {
    phi.dims() == e.dims() && majorizes(&average_schmidt_vector(e), &schmidt_decompose(phi))
}

#[derive(Debug, Clone)]
pub struct BranchValue {
    pub probability: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    /// Estimate of `E_F(rho)`.
    pub lhs: f64,
    /// `sum_k p_k E_F(rho_k)`, or `E_F` of the channel output in the deterministic form.
    pub rhs: f64,
    pub slack: f64,
    pub branches: Vec<BranchValue>,
    pub passed: bool,
}

/// Checks `E_F(rho) + 5e-3 >= sum_k p_k E_F(rho_k)` with one shared solver configuration.
pub fn strong_monotonicity_check(
    rho: &DensityMatrix,
    spec: &MonotoneSpec,
    ch: &LocalChannel,
    cfg: &SolverConfig,
) -> Result<MonotonicityReport> {
    strong_monotonicity_check_with_slack(rho, spec, ch, cfg, SOLVER_SLACK)
}

pub fn strong_monotonicity_check_with_slack(
    rho: &DensityMatrix,
    spec: &MonotoneSpec,
    ch: &LocalChannel,
    cfg: &SolverConfig,
    slack: f64,
) -> Result<MonotonicityReport> {
    let lhs = minimize_ef(rho, spec, cfg)?.value;
    let mut branches = Vec::new();
    for b in apply_channel_branches(rho, ch)? {
        let value = minimize_ef(&b.state, spec, cfg)?.value;
        branches.push(BranchValue { probability: b.probability, value });
    }
    let rhs = branches.iter().map(|b| b.probability * b.value).sum();
    Ok(MonotonicityReport { lhs, rhs, slack, passed: lhs + slack >= rhs, branches })
}

/// Deterministic form: `E_F(rho) + 5e-3 >= E_F(sum_k M_k rho M_k^dagger)`.
pub fn monotonicity_check(
    rho: &DensityMatrix,
    spec: &MonotoneSpec,
    ch: &LocalChannel,
    cfg: &SolverConfig,
) -> Result<MonotonicityReport> {
    let lhs = minimize_ef(rho, spec, cfg)?.value;
    let rhs = minimize_ef(&deterministic_output(rho, ch)?, spec, cfg)?.value;
    Ok(MonotonicityReport {
        lhs,
        rhs,
        slack: SOLVER_SLACK,
        passed: lhs + SOLVER_SLACK >= rhs,
        branches: vec![BranchValue { probability: 1.0, value: rhs }],
    })
}
