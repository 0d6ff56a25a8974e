//! Pure-state ensembles of a density matrix.
//!
//! Every ensemble `{p_i, psi_i}` of `rho` arises from its spectral data through an
//! `m x r` isometry `V`: the unnormalized members are
//! `psi~_i = sum_j V_ij sqrt(mu_j) |e_j>` with `p_i = <psi~_i|psi~_i>`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{haar_isometry, max_abs_diff};
use crate::states::{schmidt_decompose, seeded_rng, DensityMatrix, Dims, PureState, SchmidtVector, SpectralData};
use crate::C64;

/// Members lighter than this are dropped from HJW ensembles.
pub const MIN_WEIGHT: f64 = 1e-14;
/// Max-entry tolerance for ensemble reconstruction.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
const ISOMETRY_TOL: f64 = 1e-10;

/// Default ensemble size for a rank-`r` matrix.
pub fn default_cardinality(rank: usize) -> usize {
    rank * rank
}

/// Largest ensemble size accepted for a rank-`r` matrix.
pub fn max_cardinality(rank: usize) -> usize {
    rank * rank + 4
}

/// Weighted list of pure states on a common system.
#[derive(Debug, Clone)]
pub struct Ensemble {
    dims: Dims,
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Ensemble {
    /// Weights must be positive and sum to one within `1e-10`.
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.is_empty() || weights.len() != states.len() {
            return Err(Error::DimensionMismatch { expected: states.len(), got: weights.len() });
        }
        if weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
            return Err(Error::Probabilities("ensemble weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Probabilities(format!("ensemble weights sum to {total}")));
        }
        let dims = states[0].dims();
        if let Some(s) = states.iter().find(|s| s.dims() != dims) {
            return Err(Error::DimensionMismatch { expected: dims.total(), got: s.dims().total() });
        }
        Ok(Self { dims, weights, states })
    }

    /// The eigen-ensemble `{mu_j, e_j}`.
    pub fn spectral(spec: &SpectralData) -> Result<Self> {
        let total: f64 = spec.eigenvalues.iter().sum();
        let weights = spec.eigenvalues.iter().map(|mu| mu / total).collect();
        Self::new(weights, spec.eigenvectors.clone())
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &PureState)> {
        self.weights.iter().copied().zip(self.states.iter())
    }

    /// `sum_i p_i |psi_i><psi_i|`
    pub fn density_matrix(&self) -> DMatrix<C64> {
        let n = self.dims.total();
        let mut m = DMatrix::zeros(n, n);
        for (p, s) in self.iter() {
            m += s.projector() * C64::new(p, 0.0);
        }
        m
    }
}

/// `m x r` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry(DMatrix<C64>);

impl Isometry {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let (m, r) = entries.shape();
        if m < r || r == 0 {
            return Err(Error::DimensionMismatch { expected: r, got: m });
        }
        let gram = entries.adjoint() * &entries;
        let dev = max_abs_diff(&gram, &DMatrix::identity(r, r));
        if dev > ISOMETRY_TOL {
            return Err(Error::NotIsometry(dev));
        }
        Ok(Self(entries))
    }

    /// First `r` columns of the `m x m` identity.
    pub fn identity(m: usize, r: usize) -> Self {
        assert!(m >= r && r > 0);
        Self(DMatrix::identity(m, r))
    }

    /// Haar-random isometry, deterministic in `seed`.
    pub fn random(m: usize, r: usize, seed: u64) -> Self {
        assert!(m >= r && r > 0);
        Self(haar_isometry(m, r, &mut seeded_rng(seed)))
    }

    pub(crate) fn from_unchecked(entries: DMatrix<C64>) -> Self {
        Self(entries)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }
}

/// `n x r` matrix whose columns are `sqrt(mu_j) |e_j>`.
pub(crate) fn weighted_eigenbasis(spec: &SpectralData) -> DMatrix<C64> {
    let n = spec.dims.total();
    DMatrix::from_fn(n, spec.rank(), |row, j| {
        spec.eigenvectors[j].amplitudes()[row] * spec.eigenvalues[j].sqrt()
    })
}

/// HJW ensemble generated by `v` from the spectral data of a density matrix.
pub fn hjw_ensemble(spec: &SpectralData, v: &Isometry) -> Result<Ensemble> {
    if v.cols() != spec.rank() {
        return Err(Error::DimensionMismatch { expected: spec.rank(), got: v.cols() });
    }
    // column i of W V^T is psi~_i
    let members = weighted_eigenbasis(spec) * v.matrix().transpose();
    let mut weights = Vec::with_capacity(v.rows());
    let mut states = Vec::with_capacity(v.rows());
    for col in members.column_iter() {
        let p = col.norm_squared();
        if p < MIN_WEIGHT {
            continue;
        }
        weights.push(p);
        states.push(PureState::normalized(spec.dims, col.iter().copied().collect())?);
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Ensemble::new(weights, states)
}

/// `sum_i p_i lambda(psi_i)`, the Schmidt vector of a state reachable from the ensemble's
/// convertible pure states.
pub fn average_schmidt_vector(e: &Ensemble) -> SchmidtVector {
    let len = e.dims().schmidt_len();
    let mut avg = vec![0.0; len];
    for (p, s) in e.iter() {
        for (a, l) in avg.iter_mut().zip(schmidt_decompose(s).entries()) {
            *a += p * l;
        }
    }
    SchmidtVector::new(avg).expect("convex combination of Schmidt vectors")
}

/// True iff `sum_i p_i |psi_i><psi_i|` equals `rho` within `1e-8` max-entry norm.
pub fn ensemble_reconstructs(e: &Ensemble, rho: &DensityMatrix) -> bool {
    e.dims() == rho.dims() && rho.distance(&e.density_matrix()) <= RECONSTRUCTION_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{eigendecompose, random_density, DEFAULT_CUTOFF};
    use approx::assert_abs_diff_eq;

    fn family_at_half() -> (DensityMatrix, PureState, PureState) {
        let d = Dims::new(3, 3).unwrap();
        let s = 0.5f64.sqrt();
        let mut a = vec![C64::new(0.0, 0.0); 9];
        a[d.index(0, 0)] = C64::new(s, 0.0);
        a[d.index(1, 1)] = C64::new(s, 0.0);
        let phi0 = PureState::new(d, a).unwrap();
        let e33 = PureState::basis(d, 2, 2);
        let rho = DensityMatrix::mixture(&[(0.5, &phi0), (0.5, &e33)]).unwrap();
        (rho, phi0, e33)
    }

    #[test]
    fn identity_isometry_gives_spectral_ensemble() {
        let rho = random_density(Dims::new(2, 3).unwrap(), 3, 9).unwrap();
        let spec = eigendecompose(&rho, DEFAULT_CUTOFF);
        let e = hjw_ensemble(&spec, &Isometry::identity(3, 3)).unwrap();
        assert_eq!(e.len(), 3);
        for (j, (p, s)) in e.iter().enumerate() {
            assert_abs_diff_eq!(p, spec.eigenvalues[j], epsilon = 1e-12);
            let overlap = (s.amplitudes().adjoint() * spec.eigenvectors[j].amplitudes())[0].norm();
            assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
        }
        assert!(ensemble_reconstructs(&e, &rho));
    }

    #[test]
    fn family_spectral_members() {
        let (rho, phi0, e33) = family_at_half();
        let spec = eigendecompose(&rho, DEFAULT_CUTOFF);
        let e = hjw_ensemble(&spec, &Isometry::identity(2, 2)).unwrap();
        assert_eq!(e.len(), 2);
        for (p, s) in e.iter() {
            assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
            let o1 = (s.amplitudes().adjoint() * phi0.amplitudes())[0].norm();
            let o2 = (s.amplitudes().adjoint() * e33.amplitudes())[0].norm();
            // each member lies in span{phi0, |33>}
            assert_abs_diff_eq!(o1 * o1 + o2 * o2, 1.0, epsilon = 1e-12);
        }
        assert!(ensemble_reconstructs(&e, &rho));
    }

    #[test]
    fn average_schmidt_examples() {
        let (_, phi0, e33) = family_at_half();
        let e = Ensemble::new(vec![0.5, 0.5], vec![phi0.clone(), e33]).unwrap();
        let avg = average_schmidt_vector(&e);
        for (a, b) in avg.entries().iter().zip([0.75, 0.25, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }

        let single = Ensemble::new(vec![1.0], vec![phi0.clone()]).unwrap();
        assert_eq!(average_schmidt_vector(&single), schmidt_decompose(&phi0));

        let d = Dims::new(2, 2).unwrap();
        let prods = Ensemble::new(
            vec![0.2, 0.3, 0.5],
            vec![PureState::basis(d, 0, 0), PureState::basis(d, 1, 0), PureState::basis(d, 1, 1)],
        )
        .unwrap();
        assert_eq!(average_schmidt_vector(&prods).entries(), &[1.0, 0.0]);
    }

    #[test]
    fn reconstruction_rejects_other_state() {
        let d = Dims::new(2, 2).unwrap();
        let rho = random_density(d, 4, 1).unwrap();
        let other = random_density(d, 4, 2).unwrap();
        let e = Ensemble::spectral(&eigendecompose(&rho, DEFAULT_CUTOFF)).unwrap();
        assert!(ensemble_reconstructs(&e, &rho));
        assert!(!ensemble_reconstructs(&e, &other));
    }

    #[test]
    fn column_mismatch_and_bad_isometry() {
        let rho = random_density(Dims::new(2, 2).unwrap(), 2, 4).unwrap();
        let spec = eigendecompose(&rho, DEFAULT_CUTOFF);
        assert!(matches!(
            hjw_ensemble(&spec, &Isometry::identity(4, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad = DMatrix::from_element(3, 2, C64::new(1.0, 0.0));
        assert!(matches!(Isometry::new(bad), Err(Error::NotIsometry(_))));
        assert!(Isometry::new(Isometry::random(5, 3, 1).matrix().clone()).is_ok());
    }

    #[test]
    fn ensemble_validation() {
        let d = Dims::new(2, 2).unwrap();
        let s = PureState::basis(d, 0, 0);
        assert!(Ensemble::new(vec![0.5, 0.4], vec![s.clone(), s.clone()]).is_err());
        assert!(Ensemble::new(vec![1.0, 0.0], vec![s.clone(), s.clone()]).is_err());
        assert!(Ensemble::new(vec![1.0], vec![]).is_err());
    }
}
