//! Direct steady-state solve.
//!
//! σ is Hermitian, so it is parameterised by 16 real numbers: the four
//! populations followed by `(Re σij, Im σij)` for each `i < j`. The
//! Liouvillian is assembled as a real 16×16 matrix on that basis, scaled by
//! the relaxation scale so its entries are of order one, and the `|1⟩`
//! population equation (redundant because the dynamics preserve trace) is
//! replaced by `Tr σ = 1`.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use super::{DensityMatrix, Dissipator, Level, Operator};
use crate::{Error, Result};

const DIM: usize = 16;
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
/// Smallest accepted LU pivot relative to the largest matrix entry.
const PIVOT_RATIO_MIN: f64 = 1e-12;

type RealLiouvillian = SMatrix<f64, DIM, DIM>;
type RealState = SVector<f64, DIM>;

/// `−i[H, σ] + D(σ)`, in rad/s.
pub fn master_equation_rhs(h: &Operator, d: &Dissipator, sigma: &Operator) -> Operator {
    let commutator = h * sigma - sigma * h;
    commutator * Complex64::new(0.0, -1.0) + d.apply(sigma)
}

/// Rate used to make the linear system dimensionless: Γ2 when `|2⟩`
/// decays, otherwise the largest relaxation rate.
pub fn relaxation_scale(d: &Dissipator) -> f64 {
    let gamma2 = d.departure_rate(Level::Two);
    if gamma2 > 0.0 {
        gamma2
    } else {
        d.max_rate()
    }
}

/// Max-norm of the master-equation right-hand side at `sigma`, in units of
/// [`relaxation_scale`].
pub fn residual(h: &Operator, d: &Dissipator, sigma: &DensityMatrix) -> f64 {
    let scale = relaxation_scale(d);
    let rhs = master_equation_rhs(h, d, sigma.as_operator());
    let max = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale > 0.0 {
        max / scale
    } else {
        max
    }
}

/// Probe absorption, `Im ⟨1|σ|2⟩`. Positive on an isolated resonance.
pub fn probe_absorption(sigma: &DensityMatrix) -> f64 {
    sigma.element(Level::One, Level::Two).im
}

/// Unique trace-one density matrix annihilated by the master equation.
///
/// Fails with [`Error::SingularSystem`] when the steady state is not unique,
/// e.g. when nothing relaxes.
pub fn steady_state(h: &Operator, d: &Dissipator) -> Result<DensityMatrix> {
    let h_max = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let deviation = (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if deviation > 1e-12 * h_max.max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitian { deviation });
    }

    let scale = relaxation_scale(d);
    if scale == 0.0 {
        return Err(Error::SingularSystem { pivot_ratio: 0.0 });
    }

    let mut l = real_liouvillian(h, d) / scale;
    for c in 0..DIM {
        l[(0, c)] = if c < 4 { 1.0 } else { 0.0 };
    }
    let mut rhs = RealState::zeros();
    rhs[0] = 1.0;

    let entry_max = l.amax();
    let lu = l.lu();
    let pivot_min = lu.u().diagonal().amin();
    let pivot_ratio = pivot_min / entry_max;
    if !(pivot_ratio > PIVOT_RATIO_MIN) {
        return Err(Error::SingularSystem { pivot_ratio });
    }
    let x = lu.solve(&rhs).ok_or(Error::SingularSystem { pivot_ratio })?;
    Ok(DensityMatrix::from_operator(unpack(&x)))
}

fn real_liouvillian(h: &Operator, d: &Dissipator) -> RealLiouvillian {
    let mut l = RealLiouvillian::zeros();
    for k in 0..4 {
        let image = apply_to_unit(h, d, k, k);
        store_column(&mut l, k, &image);
    }
    for (p, &(k, m)) in PAIRS.iter().enumerate() {
        let a = apply_to_unit(h, d, k, m);
        let b = apply_to_unit(h, d, m, k);
        let i = Complex64::i();
        // Re σkm multiplies E_km + E_mk; Im σkm multiplies i E_km − i E_mk.
        store_column(&mut l, 4 + 2 * p, &(a + b));
        store_column(&mut l, 5 + 2 * p, &((a - b) * i));
    }
    l
}

/// Liouvillian applied to the matrix unit `|k⟩⟨m|`.
fn apply_to_unit(h: &Operator, d: &Dissipator, k: usize, m: usize) -> Operator {
    let mut out = Operator::zeros();
    let i = Complex64::i();
    for r in 0..4 {
        // −i H|k⟩⟨m| fills column m with −i H[:, k]
        out[(r, m)] -= i * h[(r, k)];
        // +i |k⟩⟨m|H fills row k with +i H[m, :]
        out[(k, r)] += i * h[(m, r)];
    }
    if k != m {
        out[(k, m)] -= Complex64::from(d.coherence_decay[k][m]);
    } else {
        for f in d.population_flow.iter().filter(|f| f.from.index() == k) {
            out[(k, k)] -= Complex64::from(f.rate);
            out[(f.to.index(), f.to.index())] += Complex64::from(f.rate);
        }
    }
    out
}

fn store_column(l: &mut RealLiouvillian, col: usize, image: &Operator) {
    for k in 0..4 {
        l[(k, col)] = image[(k, k)].re;
    }
    for (p, &(k, m)) in PAIRS.iter().enumerate() {
        l[(4 + 2 * p, col)] = image[(k, m)].re;
        l[(5 + 2 * p, col)] = image[(k, m)].im;
    }
}

fn unpack(x: &RealState) -> Operator {
    let mut sigma = Operator::zeros();
    for k in 0..4 {
        sigma[(k, k)] = Complex64::from(x[k]);
    }
    for (p, &(k, m)) in PAIRS.iter().enumerate() {
        let z = Complex64::new(x[4 + 2 * p], x[5 + 2 * p]);
        sigma[(k, m)] = z;
        sigma[(m, k)] = z.conj();
    }
    sigma
}
