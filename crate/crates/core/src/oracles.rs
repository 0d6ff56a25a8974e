//! Reference values independent of the local search: the Wootters closed form for two
//! qubits, the closed-form `3 x 3` family `eta |phi0><phi0| + (1 - eta) |33><33|`, and a
//! pure sampling upper bound.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decompositions::{average_schmidt_vector, default_cardinality, hjw_ensemble, Isometry};
use crate::error::{Error, Result};
use crate::linalg::{haar_isometry, hermitian_eigen};
use crate::monotones::{eval_pure, MonotoneSpec};
use crate::states::{eigendecompose, DensityMatrix, Dims, PureState, DEFAULT_CUTOFF};
use crate::C64;

/// Wootters concurrence `max(0, nu_1 - nu_2 - nu_3 - nu_4)`, where `nu_i` are the square
/// roots of the eigenvalues of `sqrt(rho) rho~ sqrt(rho)` and
/// `rho~ = (Y (x) Y) rho* (Y (x) Y)`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dims();
    if d.a != 2 || d.b != 2 {
        return Err(Error::DimensionMismatch { expected: 4, got: d.total() });
    }
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    #[rustfmt::skip]
    let yy = DMatrix::from_row_slice(4, 4, &[
        z, z, z, -one,
        z, z, one, z,
        z, one, z, z,
        -one, z, z, z,
    ]);
    let flipped = &yy * rho.matrix().conjugate() * &yy;
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let sqrt_diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        vals.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    let sqrt_rho = &vecs * sqrt_diag * vecs.adjoint();
    let r = &sqrt_rho * flipped * &sqrt_rho;
    let (mut nu, _) = hermitian_eigen(&r);
    for x in nu.iter_mut() {
        *x = x.max(0.0).sqrt();
    }
    Ok((nu[0] - nu[1] - nu[2] - nu[3]).max(0.0))
}

/// `sigma = eta |phi0><phi0| + (1 - eta) |33><33|` with `|phi0> = c1 |11> + c2 |22>` on
/// `3 x 3` (basis labels 1, 2, 3 map to indices 0, 1, 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem4Params {
    pub eta: f64,
    pub c1: C64,
    pub c2: C64,
}

impl Theorem4Params {
    pub fn new(eta: f64, c1: C64, c2: C64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Probabilities(format!("eta = {eta} outside [0, 1]")));
        }
        let n = c1.norm_sqr() + c2.norm_sqr();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization(n));
        }
        Ok(Self { eta, c1, c2 })
    }

    /// Real amplitudes `c1 = sqrt(c1sq)`, `c2 = sqrt(1 - c1sq)`.
    pub fn from_c1sq(eta: f64, c1sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c1sq) {
            return Err(Error::Probabilities(format!("|c1|^2 = {c1sq} outside [0, 1]")));
        }
        Self::new(eta, C64::new(c1sq.sqrt(), 0.0), C64::new((1.0 - c1sq).sqrt(), 0.0))
    }

    pub fn dims() -> Dims {
        Dims { a: 3, b: 3 }
    }

    pub fn phi0(&self) -> PureState {
        let d = Self::dims();
        let mut a = vec![C64::new(0.0, 0.0); 9];
        a[d.index(0, 0)] = self.c1;
        a[d.index(1, 1)] = self.c2;
        PureState::new(d, a).expect("validated amplitudes")
    }

    /// `lambda(theta) = eta lambda(phi0) + (1 - eta) (1, 0, 0)`, parameter-order free.
    pub fn theta_vector(&self) -> [f64; 3] {
        let a = self.c1.norm_sqr();
        let b = self.c2.norm_sqr();
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        [self.eta * hi + (1.0 - self.eta), self.eta * lo, 0.0]
    }
}

pub fn theorem4_state(params: &Theorem4Params) -> DensityMatrix {
    let d = Theorem4Params::dims();
    let phi0 = params.phi0();
    let e33 = PureState::basis(d, 2, 2);
    let mat = phi0.projector() * C64::new(params.eta, 0.0) + e33.projector() * C64::new(1.0 - params.eta, 0.0);
    DensityMatrix::new(d, mat).expect("convex combination of projectors")
}

/// Closed-form value `F(theta)`.
pub fn theorem4_value(params: &Theorem4Params, spec: &MonotoneSpec) -> f64 {
    spec.eval_sorted(&params.theta_vector())
}

/// Minimum of `f(average Schmidt vector)` over `budget` isometries with no refinement:
/// sample 0 is the identity (the spectral ensemble), the rest are Haar-random `r^2 x r`
/// isometries drawn from stream `i` of a ChaCha generator seeded with `seed`.
pub fn brute_force_ef(rho: &DensityMatrix, spec: &MonotoneSpec, budget: usize, seed: u64) -> Result<f64> {
    if budget == 0 {
        return Err(Error::InvalidConfig("budget must be at least 1".into()));
    }
    spec.check_length(rho.dims().schmidt_len())?;
    let spectral = eigendecompose(rho, DEFAULT_CUTOFF);
    let r = spectral.rank();
    let m = default_cardinality(r);
    let values: Vec<Result<f64>> = (0..budget)
        .into_par_iter()
        .map(|i| {
            let v = if i == 0 {
                Isometry::identity(m, r)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                Isometry::new(haar_isometry(m, r, &mut rng))?
            };
            let e = hjw_ensemble(&spectral, &v)?;
            eval_pure(spec, &average_schmidt_vector(&e))
        })
        .collect();
    let mut best = f64::INFINITY;
    for v in values {
        best = best.min(v?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::random_density;
    use approx::assert_abs_diff_eq;

    fn bell() -> PureState {
        let s = 0.5f64.sqrt();
        let z = C64::new(0.0, 0.0);
        PureState::new(Dims::new(2, 2).unwrap(), vec![C64::new(s, 0.0), z, z, C64::new(s, 0.0)]).unwrap()
    }

    fn werner(p: f64) -> DensityMatrix {
        let d = Dims::new(2, 2).unwrap();
        let mat = bell().projector() * C64::new(p, 0.0)
            + DensityMatrix::maximally_mixed(d).matrix() * C64::new(1.0 - p, 0.0);
        DensityMatrix::new(d, mat).unwrap()
    }

    #[test]
    fn wootters_examples() {
        assert_abs_diff_eq!(wootters_concurrence(&bell().to_density()).unwrap(), 1.0, epsilon = 1e-9);
        let mm = DensityMatrix::maximally_mixed(Dims::new(2, 2).unwrap());
        assert_abs_diff_eq!(wootters_concurrence(&mm).unwrap(), 0.0, epsilon = 1e-12);
        for p in [0.2, 1.0 / 3.0, 0.5, 0.8, 0.95] {
            let want = ((3.0 * p - 1.0) / 2.0f64).max(0.0);
            assert_abs_diff_eq!(wootters_concurrence(&werner(p)).unwrap(), want, epsilon = 1e-8);
        }
    }

    #[test]
    fn wootters_on_pure_states_matches_schmidt_formula() {
        for seed in 0..20 {
            let psi = crate::states::random_pure(Dims::new(2, 2).unwrap(), seed);
            let l = crate::states::schmidt_decompose(&psi);
            let want = 2.0 * (l.entries()[0] * l.entries()[1]).sqrt();
            assert_abs_diff_eq!(wootters_concurrence(&psi.to_density()).unwrap(), want, epsilon = 1e-7);
        }
    }

    #[test]
    fn wootters_wrong_dims() {
        let rho = random_density(Dims::new(2, 3).unwrap(), 2, 0).unwrap();
        assert!(wootters_concurrence(&rho).is_err());
    }

    #[test]
    fn closed_form_family_limits() {
        let p = Theorem4Params::from_c1sq(1.0, 0.6).unwrap();
        let rho = theorem4_state(&p);
        assert!(rho.distance(&p.phi0().projector()) < 1e-14);
        for spec in MonotoneSpec::builtins().into_iter().filter(|s| s.name() != "concurrence") {
            let want = eval_pure(&spec, &crate::states::schmidt_decompose(&p.phi0())).unwrap();
            assert_abs_diff_eq!(theorem4_value(&p, &spec), want, epsilon = 1e-12);
        }

        let p = Theorem4Params::from_c1sq(0.0, 0.6).unwrap();
        let e33 = PureState::basis(Theorem4Params::dims(), 2, 2);
        assert!(theorem4_state(&p).distance(&e33.projector()) < 1e-14);

        let p = Theorem4Params::from_c1sq(0.5, 0.5).unwrap();
        let s = eigendecompose(&theorem4_state(&p), DEFAULT_CUTOFF);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn closed_form_family_values() {
        let p = Theorem4Params::from_c1sq(0.5, 0.5).unwrap();
        let h = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert_abs_diff_eq!(theorem4_value(&p, &MonotoneSpec::entropy()), h, epsilon = 1e-14);
        assert_abs_diff_eq!(theorem4_value(&p, &MonotoneSpec::avg_e()), 0.5 * 2f64.ln(), epsilon = 1e-14);
        // amplitude order does not matter
        let a = Theorem4Params::from_c1sq(0.3, 0.8).unwrap();
        let b = Theorem4Params::from_c1sq(0.3, 0.2).unwrap();
        for (x, y) in a.theta_vector().iter().zip(b.theta_vector()) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
        assert!(Theorem4Params::from_c1sq(1.2, 0.5).is_err());
        assert!(Theorem4Params::new(0.5, C64::new(1.0, 0.0), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn brute_force_on_pure_and_separable() {
        let psi = crate::states::random_pure(Dims::new(2, 3).unwrap(), 3);
        let want = eval_pure(&MonotoneSpec::entropy(), &crate::states::schmidt_decompose(&psi)).unwrap();
        let got = brute_force_ef(&psi.to_density(), &MonotoneSpec::entropy(), 5, 0).unwrap();
        assert_abs_diff_eq!(got, want, epsilon = 1e-12);

        let d = Dims::new(2, 2).unwrap();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [0.1, 0.2, 0.3, 0.4].iter().map(|&x| C64::new(x, 0.0)).collect(),
        ));
        let rho = DensityMatrix::new(d, diag).unwrap();
        let v = brute_force_ef(&rho, &MonotoneSpec::concurrence(), 10_000, 1).unwrap();
        assert!(v <= 1e-6, "{v}");
        assert!(brute_force_ef(&rho, &MonotoneSpec::concurrence(), 0, 1).is_err());
    }
}
