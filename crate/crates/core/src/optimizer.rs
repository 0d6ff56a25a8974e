//! Random-restart local search over HJW isometries.
//!
//! Both objectives are functions of the ensemble generated by an `m x r` isometry `V`:
//!
//! - [`Mode::Ef`]: `f(sum_i p_i lambda(psi_i))`, the least monotone value over pure states
//!   convertible into `rho`;
//! - [`Mode::Roof`]: `sum_i p_i f(lambda(psi_i))`, the convex roof.
//!
//! Local refinement moves along one-parameter subgroups `exp(t G) V`, where `G` runs over
//! the real and imaginary off-diagonal generators of `u(m)`. Such a move mixes exactly two
//! ensemble members, so each trial only re-evaluates two Schmidt vectors. Steps that fail
//! for a whole sweep are halved. Restart 0 starts from the spectral ensemble; the others
//! start from Haar-random isometries. Restart `k` draws from stream `k` of a ChaCha
//! generator seeded with `seed`, so results do not depend on scheduling.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decompositions::{
    average_schmidt_vector, default_cardinality, hjw_ensemble, max_cardinality, weighted_eigenbasis,
    Ensemble, Isometry, MIN_WEIGHT,
};
use crate::error::{Error, Result};
use crate::linalg::{haar_isometry, weighted_schmidt};
use crate::monotones::{eval_pure, MonotoneSpec};
use crate::states::{
    eigendecompose, schmidt_decompose, DensityMatrix, PureState, SchmidtVector, SpectralData, DEFAULT_CUTOFF,
};
use crate::C64;

/// Restarts whose value is within this of the best are counted as agreeing.
const AGREEMENT_TOL: f64 = 1e-6;
/// Search stops once the step falls below this.
const MIN_STEP: f64 = 1e-12;
/// Successive accepted moves along one generator before moving on.
const MAX_REPEATS: usize = 16;
/// Relative decrease a trial must achieve to count as progress rather than rounding.
const IMPROVEMENT_EPS: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub restarts: usize,
    /// Ensemble size `m`; `None` means `r^2`.
    pub cardinality: Option<usize>,
    pub max_iters: usize,
    pub objective_tol: f64,
    pub stall_iters: usize,
    pub step_scale: f64,
    pub seed: u64,
    /// Eigenvalue cutoff defining the rank of the input.
    pub cutoff: f64,
    /// Solver agreement tolerance; `compare` flags gaps above ten times this.
    pub gap_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            cardinality: None,
            max_iters: 2000,
            objective_tol: 1e-9,
            stall_iters: 100,
            step_scale: 0.1,
            seed: 0,
            cutoff: DEFAULT_CUTOFF,
            gap_tolerance: 2e-3,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    /// Validates the configuration for a rank-`r` input and resolves the ensemble size.
    pub fn resolve_cardinality(&self, rank: usize) -> Result<usize> {
        if self.restarts == 0 || self.max_iters == 0 || self.stall_iters == 0 {
            return Err(Error::InvalidConfig("restarts, max_iters and stall_iters must be positive".into()));
        }
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.objective_tol) || !positive(self.step_scale) || !positive(self.cutoff) {
            return Err(Error::InvalidConfig("objective_tol, step_scale and cutoff must be positive".into()));
        }
        let m = self.cardinality.unwrap_or_else(|| default_cardinality(rank));
        if m < rank {
            return Err(Error::InvalidConfig(format!("cardinality {m} is below the rank {rank}")));
        }
        if m > max_cardinality(rank) {
            return Err(Error::InvalidConfig(format!(
                "cardinality {m} exceeds the cap r^2 + 4 = {}",
                max_cardinality(rank)
            )));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Least monotone value over convertible pure states.
    Ef,
    /// Convex roof.
    Roof,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Ef => "EF",
            Mode::Roof => "ROOF",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub mode: Mode,
    /// Best objective found; an upper bound on the true minimum.
    pub value: f64,
    /// In EF mode the Schmidt vector of the optimal convertible pure state; in ROOF mode the
    /// average Schmidt vector of the witness ensemble.
    pub witness_vector: SchmidtVector,
    pub witness_ensemble: Ensemble,
    pub witness_isometry: Isometry,
    pub restarts: usize,
    pub restarts_within_tol: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl SolverResult {
    /// A pure state with Schmidt vector `witness_vector`.
    pub fn witness_state(&self) -> PureState {
        PureState::from_schmidt(self.witness_ensemble.dims(), self.witness_vector.entries())
            .expect("witness vector is a valid Schmidt vector of the system")
    }
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub ef: SolverResult,
    pub roof: SolverResult,
    /// `ef.value - roof.value`
    pub gap: f64,
    pub tolerance: f64,
    /// `gap > 10 * tolerance`
    pub gap_significant: bool,
}

/// Least `F` over pure states convertible into `rho`.
pub fn minimize_ef(rho: &DensityMatrix, spec: &MonotoneSpec, cfg: &SolverConfig) -> Result<SolverResult> {
    minimize(rho, spec, cfg, Mode::Ef)
}

/// Convex roof of `F`: least average `F` over decompositions of `rho`.
pub fn minimize_convex_roof(rho: &DensityMatrix, spec: &MonotoneSpec, cfg: &SolverConfig) -> Result<SolverResult> {
    minimize(rho, spec, cfg, Mode::Roof)
}

/// Runs both solvers with the same configuration and reports the gap.
pub fn compare(rho: &DensityMatrix, spec: &MonotoneSpec, cfg: &SolverConfig) -> Result<GapReport> {
    let ef = minimize_ef(rho, spec, cfg)?;
    let roof = minimize_convex_roof(rho, spec, cfg)?;
    let gap = ef.value - roof.value;
    Ok(GapReport {
        gap,
        tolerance: cfg.gap_tolerance,
        gap_significant: gap > 10.0 * cfg.gap_tolerance,
        ef,
        roof,
    })
}

/// Objective of an explicit ensemble.
pub fn objective(e: &Ensemble, spec: &MonotoneSpec, mode: Mode) -> Result<f64> {
    match mode {
        Mode::Ef => eval_pure(spec, &average_schmidt_vector(e)),
        Mode::Roof => e
            .iter()
            .map(|(p, s)| eval_pure(spec, &schmidt_decompose(s)).map(|v| p * v))
            .sum(),
    }
}

fn minimize(rho: &DensityMatrix, spec: &MonotoneSpec, cfg: &SolverConfig, mode: Mode) -> Result<SolverResult> {
    spec.check_length(rho.dims().schmidt_len())?;
    let spectral = eigendecompose(rho, cfg.cutoff);
    let rank = spectral.rank();
    if rank == 0 {
        return Err(Error::NotPositive(0.0));
    }
    let m = cfg.resolve_cardinality(rank)?;

    let runs: Vec<Result<Candidate>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| run_restart(&spectral, spec, cfg, mode, m, k))
        .collect();
    let mut candidates = Vec::with_capacity(runs.len());
    for r in runs {
        candidates.push(r?);
    }

    // lowest value wins, earliest restart on ties
    let best_idx = candidates
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let best_value = candidates[best_idx].value;
    let restarts_within_tol = candidates.iter().filter(|c| c.value <= best_value + AGREEMENT_TOL).count();
    let best = candidates.swap_remove(best_idx);
    Ok(SolverResult {
        mode,
        value: best.value,
        witness_vector: best.vector,
        witness_ensemble: best.ensemble,
        witness_isometry: best.isometry,
        restarts: cfg.restarts,
        restarts_within_tol,
        converged: best.converged,
        iterations: best.iterations,
    })
}

struct Candidate {
    value: f64,
    vector: SchmidtVector,
    ensemble: Ensemble,
    isometry: Isometry,
    converged: bool,
    iterations: usize,
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn run_restart(
    spectral: &SpectralData,
    spec: &MonotoneSpec,
    cfg: &SolverConfig,
    mode: Mode,
    m: usize,
    restart: usize,
) -> Result<Candidate> {
    let r = spectral.rank();
    let mut rng = restart_rng(cfg.seed, restart);
    let v0 = if restart == 0 { DMatrix::identity(m, r) } else { haar_isometry(m, r, &mut rng) };
    let mut search = Search::new(spectral, spec, mode, v0);
    let (converged, iterations) = search.descend(cfg, &mut rng);
    let isometry = Isometry::from_unchecked(reorthonormalize(search.v));
    let ensemble = hjw_ensemble(spectral, &isometry)?;
    let vector = average_schmidt_vector(&ensemble);
    let value = match mode {
        Mode::Ef => eval_pure(spec, &vector)?,
        Mode::Roof => objective(&ensemble, spec, mode)?,
    };
    Ok(Candidate { value, vector, ensemble, isometry, converged, iterations })
}

/// Removes the rounding drift accumulated over many rotations.
fn reorthonormalize(v: DMatrix<C64>) -> DMatrix<C64> {
    let (m, r) = v.shape();
    let qr = v.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for c in 0..r {
        let d = rr[(c, c)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for row in 0..m {
                q[(row, c)] *= phase;
            }
        }
    }
    q
}

#[derive(Clone, Copy)]
enum Generator {
    /// `E_kl - E_lk`
    Real(usize, usize),
    /// `i (E_kl + E_lk)`
    Imag(usize, usize),
}

impl Generator {
    fn rows(&self) -> (usize, usize) {
        match *self {
            Generator::Real(k, l) | Generator::Imag(k, l) => (k, l),
        }
    }

    /// `(x, y) -> exp(t G)` acting on the pair of rows `(k, l)`.
    #[inline]
    fn rotate(&self, t: f64, x: C64, y: C64) -> (C64, C64) {
        let (s, c) = t.sin_cos();
        match self {
            Generator::Real(..) => (x * c - y * s, x * s + y * c),
            Generator::Imag(..) => {
                let is = C64::new(0.0, s);
                (x * c + y * is, x * is + y * c)
            }
        }
    }
}

/// Incremental state of one restart.
struct Search<'a> {
    spec: &'a MonotoneSpec,
    mode: Mode,
    da: usize,
    db: usize,
    /// `m x r`, rotated alongside the members.
    v: DMatrix<C64>,
    /// Unnormalized members `psi~_i`.
    members: Vec<Vec<C64>>,
    /// Eigenvalues of each member's reduced matrix, i.e. `p_i lambda(psi_i)`.
    weighted: Vec<Vec<f64>>,
    /// `p_i f(lambda(psi_i))`
    terms: Vec<f64>,
    sum: Vec<f64>,
    total: f64,
    scratch_a: Vec<C64>,
    scratch_b: Vec<C64>,
    wa: Vec<f64>,
    wb: Vec<f64>,
    norm_buf: Vec<f64>,
}

impl<'a> Search<'a> {
    fn new(spectral: &SpectralData, spec: &'a MonotoneSpec, mode: Mode, v: DMatrix<C64>) -> Self {
        let dims = spectral.dims;
        let basis = weighted_eigenbasis(spectral);
        let members_mat = &basis * v.transpose();
        let members: Vec<Vec<C64>> = members_mat.column_iter().map(|c| c.iter().copied().collect()).collect();
        let n = dims.total();
        let s = dims.schmidt_len();
        let total: f64 = spectral.eigenvalues.iter().sum();
        let mut search = Self {
            spec,
            mode,
            da: dims.a,
            db: dims.b,
            v,
            weighted: vec![Vec::with_capacity(s); members.len()],
            terms: vec![0.0; members.len()],
            members,
            sum: vec![0.0; s],
            total,
            scratch_a: vec![C64::new(0.0, 0.0); n],
            scratch_b: vec![C64::new(0.0, 0.0); n],
            wa: Vec::with_capacity(s),
            wb: Vec::with_capacity(s),
            norm_buf: Vec::with_capacity(s),
        };
        search.refresh();
        search
    }

    /// Recomputes all cached quantities from the members.
    fn refresh(&mut self) {
        for i in 0..self.members.len() {
            let mut w = std::mem::take(&mut self.weighted[i]);
            weighted_schmidt(&self.members[i], self.da, self.db, &mut w);
            self.terms[i] = self.term(&w);
            self.weighted[i] = w;
        }
        self.sum.iter_mut().for_each(|x| *x = 0.0);
        for w in &self.weighted {
            for (acc, x) in self.sum.iter_mut().zip(w) {
                *acc += x;
            }
        }
    }

    /// `p f(lambda)` for one member given its weighted Schmidt vector.
    fn term(&mut self, w: &[f64]) -> f64 {
        if self.mode == Mode::Ef {
            return 0.0;
        }
        let p: f64 = w.iter().sum();
        if p < MIN_WEIGHT {
            return 0.0;
        }
        self.norm_buf.clear();
        self.norm_buf.extend(w.iter().map(|x| x / p));
        p * self.spec.eval_sorted(&self.norm_buf)
    }

    fn current(&mut self) -> f64 {
        match self.mode {
            Mode::Ef => {
                self.norm_buf.clear();
                let t = self.total;
                self.norm_buf.extend(self.sum.iter().map(|x| x / t));
                self.spec.eval_sorted(&self.norm_buf)
            }
            Mode::Roof => self.terms.iter().sum::<f64>() / self.total,
        }
    }

    /// Objective after applying `exp(t G)`; leaves the candidate in the scratch buffers.
    fn trial(&mut self, g: Generator, t: f64) -> (f64, f64, f64) {
        let (k, l) = g.rows();
        for idx in 0..self.scratch_a.len() {
            let (x, y) = g.rotate(t, self.members[k][idx], self.members[l][idx]);
            self.scratch_a[idx] = x;
            self.scratch_b[idx] = y;
        }
        weighted_schmidt(&self.scratch_a, self.da, self.db, &mut self.wa);
        weighted_schmidt(&self.scratch_b, self.da, self.db, &mut self.wb);
        match self.mode {
            Mode::Ef => {
                self.norm_buf.clear();
                for i in 0..self.sum.len() {
                    let x = self.sum[i] - self.weighted[k][i] - self.weighted[l][i] + self.wa[i] + self.wb[i];
                    self.norm_buf.push(x.max(0.0) / self.total);
                }
                (self.spec.eval_sorted(&self.norm_buf), 0.0, 0.0)
            }
            Mode::Roof => {
                let wa = std::mem::take(&mut self.wa);
                let wb = std::mem::take(&mut self.wb);
                let ta = self.term(&wa);
                let tb = self.term(&wb);
                self.wa = wa;
                self.wb = wb;
                let rest: f64 = self.terms.iter().sum::<f64>() - self.terms[k] - self.terms[l];
                ((rest + ta + tb) / self.total, ta, tb)
            }
        }
    }

    fn accept(&mut self, g: Generator, t: f64, ta: f64, tb: f64) {
        let (k, l) = g.rows();
        std::mem::swap(&mut self.members[k], &mut self.scratch_a);
        std::mem::swap(&mut self.members[l], &mut self.scratch_b);
        for i in 0..self.sum.len() {
            self.sum[i] += self.wa[i] + self.wb[i] - self.weighted[k][i] - self.weighted[l][i];
        }
        std::mem::swap(&mut self.weighted[k], &mut self.wa);
        std::mem::swap(&mut self.weighted[l], &mut self.wb);
        self.terms[k] = ta;
        self.terms[l] = tb;
        for c in 0..self.v.ncols() {
            let (x, y) = g.rotate(t, self.v[(k, c)], self.v[(l, c)]);
            self.v[(k, c)] = x;
            self.v[(l, c)] = y;
        }
    }

    /// Coordinate descent; returns `(converged, sweeps)`.
    fn descend(&mut self, cfg: &SolverConfig, rng: &mut ChaCha8Rng) -> (bool, usize) {
        let m = self.members.len();
        let mut generators = Vec::with_capacity(m * m.saturating_sub(1));
        for k in 0..m {
            for l in (k + 1)..m {
                generators.push(Generator::Real(k, l));
                generators.push(Generator::Imag(k, l));
            }
        }
        if generators.is_empty() {
            return (true, 0);
        }
        let mut step = cfg.step_scale;
        let mut best = self.current();
        let mut history = Vec::with_capacity(cfg.max_iters.min(4096));
        for sweep in 0..cfg.max_iters {
            generators.shuffle(rng);
            let mut improved = false;
            for &g in &generators {
                for dir in [1.0, -1.0] {
                    let mut accepted = 0;
                    while accepted < MAX_REPEATS {
                        let (cand, ta, tb) = self.trial(g, dir * step);
                        if cand < best - IMPROVEMENT_EPS * best.abs().max(1.0) {
                            self.accept(g, dir * step, ta, tb);
                            best = cand;
                            accepted += 1;
                        } else {
                            break;
                        }
                    }
                    if accepted > 0 {
                        improved = true;
                        break;
                    }
                }
            }
            self.refresh();
            best = self.current();
            if !improved {
                step *= 0.5;
                if step < MIN_STEP {
                    return (true, sweep + 1);
                }
            }
            history.push(best);
            if sweep >= cfg.stall_iters && history[sweep - cfg.stall_iters] - best < cfg.objective_tol {
                return (true, sweep + 1);
            }
        }
        (false, cfg.max_iters)
    }
}
