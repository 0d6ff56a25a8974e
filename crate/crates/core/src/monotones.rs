//! Pure-state entanglement monotones as symmetric concave functions of the Schmidt vector.
//!
//! Every spec is evaluated on the descending-sorted vector, so permutation symmetry holds
//! by construction. All logarithms are natural.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::states::{seeded_rng, SchmidtVector};

/// Entries at or below this count as zero when checking the concurrence domain.
const DOMAIN_TOL: f64 = 1e-10;
/// Slack allowed by the Schur-concavity check.
const SCHUR_TOL: f64 = 1e-9;

type CustomFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Entropy,
    Concurrence,
    AvgE,
    Custom(CustomFn),
}

/// A pure-state monotone `F(psi) = f(lambda(psi))`.
#[derive(Clone)]
pub struct MonotoneSpec {
    name: String,
    kind: Kind,
    linear: bool,
}

impl fmt::Debug for MonotoneSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneSpec")
            .field("name", &self.name)
            .field("is_linear", &self.linear)
            .finish()
    }
}

impl MonotoneSpec {
    /// Entropy of entanglement, `-sum lambda_n ln lambda_n`.
    pub fn entropy() -> Self {
        Self { name: "entropy".into(), kind: Kind::Entropy, linear: false }
    }

    /// Two-qubit pure-state concurrence `2 sqrt(lambda_1 lambda_2)`; Schmidt rank at most 2.
    pub fn concurrence() -> Self {
        Self { name: "concurrence".into(), kind: Kind::Concurrence, linear: false }
    }

    /// `<E> = sum_{n=2}^{d} n (lambda_n - lambda_{n+1}) ln n` with `lambda_{d+1} = 0`.
    /// Affine in the sorted vector.
    pub fn avg_e() -> Self {
        Self { name: "avg_e".into(), kind: Kind::AvgE, linear: true }
    }

    /// User-supplied `f`, called on the descending-sorted vector.
    pub fn custom<F>(name: impl Into<String>, f: F, is_linear: bool) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self { name: name.into(), kind: Kind::Custom(Arc::new(f)), linear: is_linear }
    }

    /// Looks up a built-in by its CLI identifier.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "entropy" => Ok(Self::entropy()),
            "concurrence" | "concurrence_pure" => Ok(Self::concurrence()),
            "avg_e" | "avg_E" => Ok(Self::avg_e()),
            other => Err(Error::UnknownMonotone(other.to_string())),
        }
    }

    pub fn builtins() -> Vec<Self> {
        vec![Self::entropy(), Self::concurrence(), Self::avg_e()]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// Checks that vectors of Schmidt length `len` are in the domain of `f`.
    pub fn check_length(&self, len: usize) -> Result<()> {
        match self.kind {
            Kind::Concurrence if len > 2 => Err(Error::Domain(format!(
                "concurrence is defined for Schmidt rank <= 2, system has Schmidt length {len}"
            ))),
            _ => Ok(()),
        }
    }

    /// Evaluates `f` on an arbitrary probability vector (sorted internally).
    pub fn eval(&self, lambda: &[f64]) -> Result<f64> {
        let mut v = lambda.to_vec();
        v.sort_by(|x, y| y.total_cmp(x));
        if matches!(self.kind, Kind::Concurrence) && v.iter().skip(2).any(|&x| x > DOMAIN_TOL) {
            return Err(Error::Domain(format!(
                "concurrence needs Schmidt rank <= 2, got vector {v:?}"
            )));
        }
        Ok(self.eval_sorted(&v))
    }

    /// `f` on a vector already sorted descending; no domain check.
    pub(crate) fn eval_sorted(&self, v: &[f64]) -> f64 {
        match &self.kind {
            Kind::Entropy => v.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum(),
            Kind::Concurrence => {
                let l1 = v.first().copied().unwrap_or(0.0);
                let l2 = v.get(1).copied().unwrap_or(0.0);
                2.0 * (l1 * l2).max(0.0).sqrt()
            }
            Kind::AvgE => {
                let d = v.len();
                (2..=d)
                    .map(|n| {
                        let next = if n < d { v[n] } else { 0.0 };
                        n as f64 * (v[n - 1] - next) * (n as f64).ln()
                    })
                    .sum()
            }
            Kind::Custom(f) => f(v),
        }
    }
}

/// `F(psi)` given `lambda(psi)`.
pub fn eval_pure(spec: &MonotoneSpec, lambda: &SchmidtVector) -> Result<f64> {
    spec.eval(lambda.entries())
}

/// One comparable pair `x ≻ y` with `f(x) > f(y) + 1e-9`.
#[derive(Debug, Clone)]
pub struct SchurViolation {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub fx: f64,
    pub fy: f64,
}

#[derive(Debug, Clone)]
pub struct SchurReport {
    pub monotone: String,
    pub samples: usize,
    pub violations: Vec<SchurViolation>,
}

impl SchurReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples pairs with `x ≻ y` and reports those where `f(x) > f(y) + 1e-9`.
///
/// `y` is a random convex combination of permutations of `x`, a doubly-stochastic image,
/// so it is always majorized by `x`. Some `x` are sparsified to reach simplex faces.
pub fn check_schur_concavity(spec: &MonotoneSpec, n_samples: usize, seed: u64) -> SchurReport {
    let mut rng = seeded_rng(seed);
    let mut violations = Vec::new();
    let max_len = if matches!(spec.kind, Kind::Concurrence) { 2 } else { 6 };
    for _ in 0..n_samples.max(1) {
        let d = rng.random_range(2..=max_len);
        let mut x: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        if rng.random_bool(0.3) {
            let keep = rng.random_range(1..=d);
            for v in x.iter_mut().skip(keep) {
                *v = 0.0;
            }
        }
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);

        let n_perm = rng.random_range(1..=4);
        let weights: Vec<f64> = (0..n_perm).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let wsum: f64 = weights.iter().sum();
        let mut y = vec![0.0; d];
        let mut perm: Vec<usize> = (0..d).collect();
        for w in &weights {
            perm.shuffle(&mut rng);
            for (i, &p) in perm.iter().enumerate() {
                y[i] += w / wsum * x[p];
            }
        }
        x.sort_by(|a, b| b.total_cmp(a));
        y.sort_by(|a, b| b.total_cmp(a));
        let fx = spec.eval_sorted(&x);
        let fy = spec.eval_sorted(&y);
        if fx > fy + SCHUR_TOL {
            violations.push(SchurViolation { x, y, fx, fy });
        }
    }
    SchurReport { monotone: spec.name.clone(), samples: n_samples.max(1), violations }
}
