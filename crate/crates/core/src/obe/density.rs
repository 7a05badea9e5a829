use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{Level, Operator};

/// Tolerances for [`DensityMatrix::is_physical`].
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const DIAGONAL_TOL: f64 = 1e-9;
pub const EIGENVALUE_TOL: f64 = 1e-8;

/// A 4×4 density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Operator);

/// Measured deviations of a matrix from a physical state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantReport {
    /// `max |σij − conj(σji)|`
    pub hermiticity: f64,
    /// `|Tr σ − 1|`
    pub trace_error: f64,
    /// Largest imaginary part on the diagonal.
    pub diagonal_imag: f64,
    pub min_population: f64,
    pub max_population: f64,
    pub min_eigenvalue: f64,
}

impl InvariantReport {
    pub fn passes(&self) -> bool {
        self.hermiticity < HERMITICITY_TOL
            && self.trace_error < TRACE_TOL
            && self.diagonal_imag < DIAGONAL_TOL
            && self.min_population >= -DIAGONAL_TOL
            && self.max_population <= 1.0 + DIAGONAL_TOL
            && self.min_eigenvalue >= -EIGENVALUE_TOL
    }
}

impl DensityMatrix {
    /// Wraps a matrix without checking it; see [`DensityMatrix::invariants`].
    pub fn from_operator(m: Operator) -> Self {
        DensityMatrix(m)
    }

    /// The pure state `|level⟩⟨level|`.
    pub fn pure(level: Level) -> Self {
        let mut m = Operator::zeros();
        m[(level.index(), level.index())] = Complex64::from(1.0);
        DensityMatrix(m)
    }

    pub fn as_operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    /// `⟨row|σ|col⟩`.
    pub fn element(&self, row: Level, col: Level) -> Complex64 {
        self.0[(row.index(), col.index())]
    }

    pub fn population(&self, level: Level) -> f64 {
        self.element(level, level).re
    }

    pub fn invariants(&self) -> InvariantReport {
        let m = &self.0;
        let hermiticity = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let trace_error = (m.trace() - Complex64::from(1.0)).norm();
        let diag = m.diagonal();
        let diagonal_imag = diag.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let min_population = diag.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let max_population = diag.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        // Eigenvalues of the Hermitian part; the anti-Hermitian part is
        // already bounded by `hermiticity`.
        let hermitian = (m + m.adjoint()) * Complex64::from(0.5);
        let min_eigenvalue = SymmetricEigen::new(hermitian)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        InvariantReport {
            hermiticity,
            trace_error,
            diagonal_imag,
            min_population,
            max_population,
            min_eigenvalue,
        }
    }

    pub fn is_physical(&self) -> bool {
        self.invariants().passes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_is_physical() {
        for l in Level::ALL {
            assert!(DensityMatrix::pure(l).is_physical());
        }
    }

    #[test]
    fn detects_negative_eigenvalue() {
        let mut m = Operator::zeros();
        m[(0, 0)] = Complex64::from(0.5);
        m[(1, 1)] = Complex64::from(0.5);
        m[(0, 1)] = Complex64::from(0.8);
        m[(1, 0)] = Complex64::from(0.8);
        let r = DensityMatrix::from_operator(m).invariants();
        assert!(r.trace_error < 1e-15 && r.hermiticity == 0.0);
        assert!((r.min_eigenvalue + 0.3).abs() < 1e-12);
        assert!(!r.passes());
    }

    #[test]
    fn detects_non_hermitian() {
        let mut m = *DensityMatrix::pure(Level::One).as_operator();
        m[(0, 2)] = Complex64::new(0.0, 1e-6);
        assert!(!DensityMatrix::from_operator(m).is_physical());
    }
}
