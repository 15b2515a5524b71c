//! Multi-start gradient ascent of coherent information over input states.
//!
//! States are parameterized as ρ = GG†/tr(GG†) with G an unconstrained
//! complex `din x din` matrix, so every iterate is a valid density matrix.
//! The gradient is a central finite difference over the real and imaginary
//! parts of G.
//!
//! Restart seeds come from SplitMix64: a generator seeded with
//! `OptimizerConfig::seed` yields one `u64` per restart, and restart `r >= 1`
//! draws the entries of its initial G as standard complex Gaussians from a
//! fresh SplitMix64 seeded with the `r`-th of those values. Restart 0 starts
//! at the maximally mixed state.

use num_complex::Complex;
use rand::RngCore;
use rayon::prelude::*;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::information::entropy_of_spectrum;
use crate::linops::{hermitian_eigen, hermitian_eigenvalues, ComplexMatrix, QuantumState, SubsystemShape};
use crate::parallel::thread_pool;
use crate::random::{gaussian_matrix, rng_from_seed};
use crate::scalar::Real;

/// Largest channel input dimension the optimizer accepts.
pub const MAX_INPUT_DIM: usize = 64;

/// Backtracking gives up after this many halvings of the step.
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub gradient_step: f64,
    pub fd_epsilon: f64,
    /// Stop once an accepted step improves the objective by no more than this.
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 2000, gradient_step: 1e-2, fd_epsilon: 1e-6, convergence_tol: 1e-9, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::invalid("restarts and max_iters must be at least 1"));
        }
        if !positive(self.gradient_step) || !positive(self.fd_epsilon) || !positive(self.convergence_tol) {
            return Err(Error::invalid("step, finite-difference width and tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult<T> {
    pub best_value: T,
    pub best_state: QuantumState<T>,
    /// Gradient iterations of the winning restart.
    pub iterations_used: usize,
    /// Whether the winning restart met the convergence test before `max_iters`.
    pub converged: bool,
    pub best_restart: usize,
}

struct RestartOutcome<T> {
    value: T,
    state: QuantumState<T>,
    iterations: usize,
    converged: bool,
}

/// Best coherent information found over all restarts; a lower bound on the
/// single-letter quantum capacity of `c`.
///
/// Each restart's endpoint is also rounded to its dominant eigenvector. Pure
/// inputs give I_c = 0 for every channel, so when the ascent stalls on a
/// negative slope towards a pure state the rounding reaches that value
/// exactly.
pub fn maximize_coherent_information<T: Real>(
    c: &KrausChannel<T>,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult<T>> {
    cfg.validate()?;
    if c.din() > MAX_INPUT_DIM {
        return Err(Error::TooLarge { din: c.din(), limit: MAX_INPUT_DIM });
    }
    let mut master = rng_from_seed(cfg.seed);
    let seeds: Vec<u64> = (0..cfg.restarts).map(|_| master.next_u64()).collect();
    let outcomes = thread_pool()
        .install(|| seeds.par_iter().enumerate().map(|(r, &seed)| run_restart(c, cfg, r, seed)).collect::<Vec<_>>());
    let mut best: Option<(usize, RestartOutcome<T>)> = None;
    for (r, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        if best.as_ref().is_none_or(|(_, b)| outcome.value > b.value) {
            best = Some((r, outcome));
        }
    }
    let (best_restart, b) = best.expect("at least one restart");
    Ok(OptimizationResult {
        best_value: b.value,
        best_state: b.state,
        iterations_used: b.iterations,
        converged: b.converged,
        best_restart,
    })
}

/// Runs the optimizer and reports whether its best value is at most `tol`.
/// This is numerical evidence, not a proof: the landscape is not concave.
pub fn certify_zero_q1<T: Real>(c: &KrausChannel<T>, cfg: &OptimizerConfig, tol: T) -> Result<(bool, T)> {
    let result = maximize_coherent_information(c, cfg)?;
    Ok((result.best_value <= tol, result.best_value))
}

/// ρ = GG†/tr(GG†).
pub fn state_from_factor<T: Real>(g: &ComplexMatrix<T>) -> QuantumState<T> {
    let m = g * &g.adjoint();
    let tr = m.trace().re;
    QuantumState::trusted(m.scale_real(T::one() / tr), SubsystemShape::single("A", g.rows()))
}

/// Coherent information at ρ(G), using eigenvalues only.
pub fn objective<T: Real>(c: &KrausChannel<T>, g: &ComplexMatrix<T>) -> Result<T> {
    let kg: Vec<ComplexMatrix<T>> = c.kraus().iter().map(|k| k * g).collect();
    value_from_products(&kg, g.frobenius_norm().powi(2))
}

/// H(B) − H(E) from the products K_k G and tr(GG†):
/// B = Σ_k (K_k G)(K_k G)† / tr and E_kl = tr((K_k G)(K_l G)†) / tr.
fn value_from_products<T: Real>(kg: &[ComplexMatrix<T>], trace: T) -> Result<T> {
    let dout = kg[0].rows();
    let r = kg[0].cols();
    let inv = T::one() / trace;
    let mut b = ComplexMatrix::zeros(dout, dout);
    for m in kg {
        for i in 0..dout {
            let ri = m.row(i);
            for j in i..dout {
                let rj = m.row(j);
                let mut acc = Complex::new(T::zero(), T::zero());
                for t in 0..r {
                    acc = acc + ri[t] * rj[t].conj();
                }
                b[(i, j)] = b[(i, j)] + acc;
            }
        }
    }
    for i in 0..dout {
        for j in i..dout {
            let v = b[(i, j)].scale(inv);
            b[(i, j)] = v;
            b[(j, i)] = v.conj();
        }
    }
    let n = kg.len();
    let mut env = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        for l in k..n {
            let v = kg[k].inner(&kg[l]).scale(inv);
            env[(k, l)] = v;
            env[(l, k)] = v.conj();
        }
    }
    let value = entropy_of_spectrum(&hermitian_eigenvalues(&b)?)? - entropy_of_spectrum(&hermitian_eigenvalues(&env)?)?;
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("coherent information evaluated to {value}")));
    }
    Ok(value)
}

/// Central finite-difference gradient with respect to (Re G, Im G), laid
/// out entry by entry as `[d/dRe g_00, d/dIm g_00, d/dRe g_01, ...]`.
///
/// Perturbing g_ij only moves column `j` of each K_k G, by δ·K_k e_i, so
/// the products are patched in place rather than recomputed.
pub fn fd_gradient<T: Real>(c: &KrausChannel<T>, g: &ComplexMatrix<T>, eps: T) -> Result<Vec<T>> {
    let (rows, cols) = (g.rows(), g.cols());
    let mut kg: Vec<ComplexMatrix<T>> = c.kraus().iter().map(|k| k * g).collect();
    let base_trace = g.frobenius_norm().powi(2);
    let dout = c.dout();
    let mut saved = vec![Complex::new(T::zero(), T::zero()); dout * kg.len()];
    let mut grad = Vec::with_capacity(2 * rows * cols);
    let two_eps = eps + eps;
    for i in 0..rows {
        for j in 0..cols {
            for (k, m) in kg.iter().enumerate() {
                for b in 0..dout {
                    saved[k * dout + b] = m[(b, j)];
                }
            }
            let gij = g[(i, j)];
            for dir in [Complex::new(eps, T::zero()), Complex::new(T::zero(), eps)] {
                let mut side = [T::zero(); 2];
                for (slot, delta) in side.iter_mut().zip([dir, -dir]) {
                    for (k, m) in kg.iter_mut().enumerate() {
                        let kraus = &c.kraus()[k];
                        for b in 0..dout {
                            m[(b, j)] = saved[k * dout + b] + kraus[(b, i)] * delta;
                        }
                    }
                    let trace = base_trace - gij.norm_sqr() + (gij + delta).norm_sqr();
                    *slot = value_from_products(&kg, trace)?;
                }
                grad.push((side[0] - side[1]) / two_eps);
            }
            for (k, m) in kg.iter_mut().enumerate() {
                for b in 0..dout {
                    m[(b, j)] = saved[k * dout + b];
                }
            }
        }
    }
    Ok(grad)
}

fn normalized<T: Real>(g: ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = g.frobenius_norm();
    g.scale_real(T::one() / n)
}

fn step_along<T: Real>(g: &ComplexMatrix<T>, grad: &[T], step: T) -> ComplexMatrix<T> {
    let cols = g.cols();
    normalized(ComplexMatrix::from_fn(g.rows(), cols, |i, j| {
        let k = 2 * (i * cols + j);
        g[(i, j)] + Complex::new(grad[k], grad[k + 1]).scale(step)
    }))
}

fn initial_factor<T: Real>(d: usize, restart: usize, seed: u64) -> ComplexMatrix<T> {
    if restart == 0 {
        ComplexMatrix::identity(d)
    } else {
        gaussian_matrix(d, d, &mut rng_from_seed(seed))
    }
}

fn run_restart<T: Real>(
    c: &KrausChannel<T>,
    cfg: &OptimizerConfig,
    restart: usize,
    seed: u64,
) -> Result<RestartOutcome<T>> {
    let eps = T::lit(cfg.fd_epsilon);
    let tol = T::lit(cfg.convergence_tol);
    let mut g = normalized(initial_factor::<T>(c.din(), restart, seed));
    let mut value = objective(c, &g)?;
    let mut step = T::lit(cfg.gradient_step);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let grad = fd_gradient(c, &g, eps)?;
        if grad.iter().all(|x| x.is_zero()) {
            converged = true;
            break;
        }
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let candidate = step_along(&g, &grad, step);
            let v = objective(c, &candidate)?;
            if v > value {
                accepted = Some((candidate, v));
                break;
            }
            step = step / T::lit(2.0);
        }
        let Some((candidate, v)) = accepted else {
            converged = true;
            break;
        };
        let gain = v - value;
        g = candidate;
        value = v;
        step = step + step;
        if gain <= tol {
            converged = true;
            break;
        }
    }
    let state = state_from_factor(&g);
    let rounded = dominant_pure_state(&state)?;
    let rounded_value = objective(c, &ComplexMatrix::column(&rounded))?;
    if rounded_value > value {
        let state = state_from_factor(&ComplexMatrix::column(&rounded));
        return Ok(RestartOutcome { value: rounded_value, state, iterations, converged });
    }
    Ok(RestartOutcome { value, state, iterations, converged })
}

fn dominant_pure_state<T: Real>(rho: &QuantumState<T>) -> Result<Vec<Complex<T>>> {
    let e = hermitian_eigen(rho.matrix())?;
    Ok(e.vector(e.values.len() - 1))
}
