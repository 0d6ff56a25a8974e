//! Bipartite pure and mixed states and the linear-algebra primitives on them.
//!
//! Schmidt vectors store probabilities: for `|psi> = sum_n sqrt(lambda_n) |a_n>|b_n>` the
//! stored entries are the `lambda_n`, sorted descending.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{gaussian_matrix, haar_isometry, hermitian_eigen, max_abs_diff, weighted_schmidt};
use crate::C64;

/// Squared-norm and trace slack within which inputs are renormalized silently.
pub const NORM_TOL: f64 = 1e-8;
/// Entrywise Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Slack used by majorization partial-sum comparisons.
pub const MAJORIZATION_TOL: f64 = 1e-10;
/// Default eigenvalue cutoff defining numerical rank.
pub const DEFAULT_CUTOFF: f64 = 1e-12;

/// Local dimensions `(d_a, d_b)` of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidDims(a, b));
        }
        Ok(Self { a, b })
    }

    /// `d_a * d_b`
    pub fn total(&self) -> usize {
        self.a * self.b
    }

    /// Length of a Schmidt vector on this system.
    pub fn schmidt_len(&self) -> usize {
        self.a.min(self.b)
    }

    /// Basis index of `|i>|j>`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.b + j
    }
}

/// Normalized amplitude vector on `d_a x d_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    amps: DVector<C64>,
}

impl PureState {
    /// Validates length and normalization. A squared norm within `1e-8` of one is
    /// renormalized; anything further off is rejected.
    pub fn new(dims: Dims, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::DimensionMismatch { expected: dims.total(), got: amps.len() });
        }
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if !n2.is_finite() || (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(n2));
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self { dims, amps: DVector::from_iterator(amps.len(), amps.into_iter().map(|z| z * inv)) })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(dims: Dims, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::DimensionMismatch { expected: dims.total(), got: amps.len() });
        }
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::Normalization(n2));
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self { dims, amps: DVector::from_iterator(amps.len(), amps.into_iter().map(|z| z * inv)) })
    }

    /// Product basis state `|i>|j>`.
    pub fn basis(dims: Dims, i: usize, j: usize) -> Self {
        let mut amps = DVector::zeros(dims.total());
        amps[dims.index(i, j)] = C64::new(1.0, 0.0);
        Self { dims, amps }
    }

    /// `sum_n sqrt(lambda_n) |n>|n>` for a probability vector `lambda`.
    pub fn from_schmidt(dims: Dims, lambda: &[f64]) -> Result<Self> {
        if lambda.len() > dims.schmidt_len() {
            return Err(Error::DimensionMismatch { expected: dims.schmidt_len(), got: lambda.len() });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
        for (n, &l) in lambda.iter().enumerate() {
            amps[dims.index(n, n)] = C64::new(l.max(0.0).sqrt(), 0.0);
        }
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// `|psi><psi|`
    pub fn projector(&self) -> DMatrix<C64> {
        &self.amps * self.amps.adjoint()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { dims: self.dims, mat: self.projector() }
    }
}

/// Descending probability vector of squared Schmidt coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector(Vec<f64>);

impl SchmidtVector {
    /// Sorts descending and validates non-negativity and unit sum (slack `1e-10`).
    /// The stored entries are renormalized to sum exactly to one.
    pub fn new(mut entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Probabilities("empty vector".into()));
        }
        if let Some(x) = entries.iter().find(|x| !x.is_finite() || **x < -MAJORIZATION_TOL) {
            return Err(Error::Probabilities(format!("entry {x} is negative or not finite")));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Probabilities(format!("entries sum to {total}")));
        }
        for x in entries.iter_mut() {
            *x = x.max(0.0) / total;
        }
        entries.sort_by(|x, y| y.total_cmp(x));
        Ok(Self(entries))
    }

    /// `(1, 0, ..., 0)` of length `len`.
    pub fn product(len: usize) -> Self {
        let mut v = vec![0.0; len.max(1)];
        v[0] = 1.0;
        Self(v)
    }

    /// `(1/d, ..., 1/d)`.
    pub fn uniform(len: usize) -> Self {
        Self(vec![1.0 / len as f64; len])
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy zero-padded (or truncated of trailing entries) to `len`.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        let mut v = self.0.clone();
        v.resize(len, 0.0);
        v
    }

    /// Largest index with a nonzero entry plus one, ignoring entries at or below `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.0.iter().filter(|&&x| x > tol).count()
    }
}

/// Hermitian, positive-semidefinite, unit-trace matrix on `d_a x d_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(dims: Dims, mat: DMatrix<C64>) -> Result<Self> {
        let n = dims.total();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: mat.nrows().max(mat.ncols()) });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotHermitian(f64::NAN));
        }
        let herm_dev = max_abs_diff(&mat, &mat.adjoint());
        if herm_dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm_dev));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::Trace(tr));
        }
        let mat = (&mat + mat.adjoint()) * C64::new(0.5 / tr, 0.0);
        let (vals, _) = hermitian_eigen(&mat);
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { dims, mat })
    }

    /// Normalizes a nonzero positive-semidefinite matrix by its trace before validating.
    pub fn from_unnormalized(dims: Dims, mat: DMatrix<C64>) -> Result<Self> {
        let tr = mat.trace().re;
        if tr <= 0.0 || !tr.is_finite() {
            return Err(Error::Trace(tr));
        }
        Self::new(dims, mat * C64::new(1.0 / tr, 0.0))
    }

    /// `sum_i w_i |psi_i><psi_i|` for weights summing to one.
    pub fn mixture(parts: &[(f64, &PureState)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Probabilities("empty mixture".into()))?;
        let dims = first.1.dims();
        let n = dims.total();
        let mut mat = DMatrix::zeros(n, n);
        for (w, psi) in parts {
            if psi.dims() != dims {
                return Err(Error::DimensionMismatch { expected: n, got: psi.dims().total() });
            }
            mat += psi.projector() * C64::new(*w, 0.0);
        }
        Self::new(dims, mat)
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        Self { dims, mat: DMatrix::identity(n, n) * C64::new(1.0 / n as f64, 0.0) }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Max-entry distance to another matrix of the same size.
    pub fn distance(&self, other: &DMatrix<C64>) -> f64 {
        max_abs_diff(&self.mat, other)
    }
}

/// Positive part of a spectral decomposition.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub dims: Dims,
    /// Descending, all above the cutoff.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<PureState>,
}

impl SpectralData {
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_j mu_j |e_j><e_j|`
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let n = self.dims.total();
        let mut m = DMatrix::zeros(n, n);
        for (mu, e) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m += e.projector() * C64::new(*mu, 0.0);
        }
        m
    }
}

/// Squared Schmidt coefficients of `psi`, descending, summing exactly to one.
pub fn schmidt_decompose(psi: &PureState) -> SchmidtVector {
    let d = psi.dims();
    let mut out = Vec::with_capacity(d.schmidt_len());
    weighted_schmidt(psi.amplitudes().as_slice(), d.a, d.b, &mut out);
    let total: f64 = out.iter().sum();
    for x in out.iter_mut() {
        *x /= total;
    }
    SchmidtVector(out)
}

/// True iff `x` majorizes `y` (`y ≺ x`): every descending partial sum of `x` is at least
/// the matching partial sum of `y`, up to `1e-10`. The shorter vector is zero-padded.
pub fn majorizes(x: &SchmidtVector, y: &SchmidtVector) -> bool {
    let len = x.len().max(y.len());
    let (xs, ys) = (x.padded(len), y.padded(len));
    let mut sx = 0.0;
    let mut sy = 0.0;
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        if sx < sy - MAJORIZATION_TOL {
            return false;
        }
    }
    true
}

/// Eigenpairs of `rho` with eigenvalue above `cutoff`, descending.
pub fn eigendecompose(rho: &DensityMatrix, cutoff: f64) -> SpectralData {
    let dims = rho.dims();
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let mut eigenvalues = Vec::new();
    let mut eigenvectors = Vec::new();
    for (j, &mu) in vals.iter().enumerate() {
        if mu > cutoff {
            eigenvalues.push(mu);
            let col: Vec<C64> = vecs.column(j).iter().copied().collect();
            eigenvectors.push(PureState { dims, amps: DVector::from_vec(col) });
        }
    }
    SpectralData { dims, eigenvalues, eigenvectors }
}

/// Pair of local unitaries `U_A (x) U_B`.
#[derive(Debug, Clone)]
pub struct LocalUnitary {
    pub a: DMatrix<C64>,
    pub b: DMatrix<C64>,
}

impl LocalUnitary {
    pub fn kron(&self) -> DMatrix<C64> {
        self.a.kronecker(&self.b)
    }

    pub fn apply_pure(&self, psi: &PureState) -> PureState {
        let amps = self.kron() * psi.amplitudes();
        PureState { dims: psi.dims(), amps }
    }

    pub fn apply_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let u = self.kron();
        DensityMatrix::new(rho.dims(), &u * rho.matrix() * u.adjoint())
    }
}

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Normalized complex Gaussian vector; deterministic in `seed`.
pub fn random_pure(dims: Dims, seed: u64) -> PureState {
    let mut rng = seeded_rng(seed);
    let g = gaussian_matrix(dims.total(), 1, &mut rng);
    PureState::normalized(dims, g.iter().copied().collect()).expect("gaussian vector is nonzero")
}

/// `G G^dagger / tr` for a complex Gaussian `G` with `rank` columns.
pub fn random_density(dims: Dims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let n = dims.total();
    if rank == 0 || rank > n {
        return Err(Error::InvalidRank { rank, dim: n });
    }
    let mut rng = seeded_rng(seed);
    let g = gaussian_matrix(n, rank, &mut rng);
    DensityMatrix::from_unnormalized(dims, &g * g.adjoint())
}

/// Haar-random local unitaries on both sides; deterministic in `seed`.
pub fn random_local_unitary(dims: Dims, seed: u64) -> LocalUnitary {
    let mut rng = seeded_rng(seed);
    let a = haar_isometry(dims.a, dims.a, &mut rng);
    let b = haar_isometry(dims.b, dims.b, &mut rng);
    LocalUnitary { a, b }
}
