//! Time-domain integration of the master equation.
//!
//! This exists to check [`steady_state`](crate::obe::steady_state) by an
//! independent route: start anywhere, integrate long enough, and the state
//! must settle onto the same density matrix. Classical fixed-step RK4.

use num_complex::Complex64;

use crate::obe::{master_equation_rhs, DensityMatrix, Dissipator, Operator};
use crate::{Error, Result};

/// Largest trace change tolerated in a single step.
pub const TRACE_DRIFT_MAX: f64 = 1e-8;

/// Largest admissible step: one hundredth of the inverse of the fastest
/// scale in the problem (largest `|H|` entry or relaxation rate).
pub fn max_step(h: &Operator, d: &Dissipator) -> f64 {
    let fastest = h.iter().map(|z| z.norm()).fold(d.max_rate(), f64::max);
    0.01 / fastest
}

/// Integrates `dσ/dt = −i[H, σ] + D(σ)` from `sigma0` for `t_final` seconds
/// with steps no longer than `dt`.
pub fn time_evolve(
    h: &Operator,
    d: &Dissipator,
    sigma0: &DensityMatrix,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::invalid("t_final", format!("{t_final}")));
    }
    let bound = max_step(h, d);
    if !(dt > 0.0 && dt <= bound * (1.0 + 1e-12)) {
        return Err(Error::invalid("dt", format!("{dt:e} s exceeds the bound {bound:e} s")));
    }
    if !sigma0.is_physical() {
        return Err(Error::invalid("sigma0", "not a valid density matrix"));
    }
    let n_steps = (t_final / dt).ceil() as u64;
    if n_steps == 0 {
        return Ok(sigma0.clone());
    }
    let step = t_final / n_steps as f64;
    let sigma = integrate(h, d, *sigma0.as_operator(), step, n_steps, true)?;
    Ok(DensityMatrix::from_operator(sigma))
}

/// `n_steps` RK4 steps of length `step`. With `checked`, every step is
/// tested for trace drift and loss of Hermiticity.
pub(crate) fn integrate(
    h: &Operator,
    d: &Dissipator,
    mut sigma: Operator,
    step: f64,
    n_steps: u64,
    checked: bool,
) -> Result<Operator> {
    let half = Complex64::from(0.5 * step);
    let full = Complex64::from(step);
    let sixth = Complex64::from(step / 6.0);
    let two = Complex64::from(2.0);
    for n in 0..n_steps {
        let k1 = master_equation_rhs(h, d, &sigma);
        let k2 = master_equation_rhs(h, d, &(sigma + k1 * half));
        let k3 = master_equation_rhs(h, d, &(sigma + k2 * half));
        let k4 = master_equation_rhs(h, d, &(sigma + k3 * full));
        let next = sigma + (k1 + k2 * two + k3 * two + k4) * sixth;
        if checked {
            let drift = (next.trace() - sigma.trace()).norm();
            let asymmetry = (next - next.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if drift > TRACE_DRIFT_MAX || asymmetry > 1e-10 || !drift.is_finite() {
                return Err(Error::StepTooLarge(format!(
                    "step {n}: trace drift {drift:e}, hermiticity {asymmetry:e}"
                )));
            }
        }
        sigma = next;
    }
    Ok(sigma)
}
