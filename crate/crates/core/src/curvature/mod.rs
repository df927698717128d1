//! The HCF₊ curvature operator `K = S + Q̃` of left-invariant metrics.
//!
//! Convention: sums over pairs of bracket indices run over unordered pairs
//! `i < j`. With this reading, in a unitary frame,
//!
//! ```text
//! K = ½ Σ_{i<j} μ(e_i, e_j) μ(e_i, e_j)ᴴ = ½ M Mᴴ,
//! ```
//!
//! where `M` is the `n × n(n−1)/2` matrix of bracket images. On the Heisenberg
//! algebra `μ(W₁, W₂) = s W₃` this gives `K = ½ diag(0, 0, |s|²)` and
//! `tr K = ½‖μ‖²` in general.

pub mod chern;

pub use chern::{q_from_torsion, s_tensor, torsion, TorsionTensor};

use crate::algebra::action::act;
use crate::algebra::bracket::BracketTensor;
use crate::error::{Error, Result};
use crate::linalg::{
    checked_inverse, frobenius_norm, hermitian_eigenvalues, hermitian_part, identity, max_abs,
    unitarizing_frame_cholesky, unitarizing_frame_eigen,
};
use crate::scalar::{lit, CMatrix, Real};

/// Hermitian positive semidefinite curvature operator.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOperator<T: Real> {
    pub matrix: CMatrix<T>,
}

impl<T: Real> CurvatureOperator<T> {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// `‖K‖² = tr(K Kᴴ)`.
    pub fn norm_sq(&self) -> T {
        self.matrix.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr())
    }

    /// Eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Largest entry of `K` having at least one index in `z^⊥`, in a basis
    /// adapted to the splitting given by the orthonormal `complement` columns.
    pub fn off_center_max(&self, complement: &CMatrix<T>) -> T {
        if complement.ncols() == 0 {
            return T::zero();
        }
        let kp = &self.matrix * complement;
        let pk = complement.adjoint() * &self.matrix;
        max_abs(&kp).max(max_abs(&pk))
    }
}

/// `K_μ` in the unitary frame in which `μ` is written.
pub fn k_from_bracket<T: Real>(mu: &BracketTensor<T>) -> CurvatureOperator<T> {
    let m = mu.bracket_matrix();
    let k = (&m * m.adjoint()).map(|x| x.scale(lit(0.5)));
    CurvatureOperator {
        matrix: hermitian_part(&k),
    }
}

/// How to produce the frame change `C` with `Cᴴ h C = Id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Unitarization {
    #[default]
    Cholesky,
    Eigen,
}

/// Curvature of a Hermitian metric `h` on a fixed bracket.
#[derive(Debug, Clone)]
pub struct MetricCurvature<T: Real> {
    /// Tensor components `K(h)` in the original frame, operator layout:
    /// `K(h)(X, Y) = yᴴ · tensor · x`.
    pub tensor: CMatrix<T>,
    /// The bracket written in the `h`-unitary frame.
    pub unitary_bracket: BracketTensor<T>,
    /// `K_λ` for the unitary-frame bracket; similar to `h⁻¹ · tensor`.
    pub operator: CurvatureOperator<T>,
}

impl<T: Real> MetricCurvature<T> {
    /// Eigenvalues of the curvature operator relative to `h`, ascending.
    pub fn operator_spectrum(&self) -> Vec<T> {
        self.operator.spectrum()
    }
}

/// `K(h)` for the metric `g(X, Y) = yᴴ h x`: unitarize, compute `K` for the
/// bracket in the unitary frame and pull the tensor back.
pub fn k_from_metric<T: Real>(mu: &BracketTensor<T>, h: &CMatrix<T>) -> Result<MetricCurvature<T>> {
    k_from_metric_with(mu, h, Unitarization::Cholesky)
}

pub fn k_from_metric_with<T: Real>(
    mu: &BracketTensor<T>,
    h: &CMatrix<T>,
    method: Unitarization,
) -> Result<MetricCurvature<T>> {
    if h.nrows() != mu.dim() || h.ncols() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: h.nrows(),
        });
    }
    let c = match method {
        Unitarization::Cholesky => unitarizing_frame_cholesky(h)?,
        Unitarization::Eigen => unitarizing_frame_eigen(h)?,
    };
    let c_inv = checked_inverse(&c, T::max_value().unwrap_or(lit(1e300)))?;
    let lambda = act(&c_inv, mu)?;
    let operator = k_from_bracket(&lambda);
    let tensor = hermitian_part(&(c_inv.adjoint() * &operator.matrix * &c_inv));
    Ok(MetricCurvature {
        tensor,
        unitary_bracket: lambda,
        operator,
    })
}

/// Trace identity and distance from a static metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceChecks<T: Real> {
    pub tr_k: T,
    pub half_norm_sq: T,
    /// `‖K − (tr K / n) Id‖ / ‖K‖` (Frobenius), zero when `K = 0`.
    pub static_residual: T,
}

pub fn trace_checks<T: Real>(mu: &BracketTensor<T>) -> TraceChecks<T> {
    let k = k_from_bracket(mu);
    TraceChecks {
        tr_k: k.trace(),
        half_norm_sq: mu.norm_sq() * lit(0.5),
        static_residual: static_residual(&k.matrix),
    }
}

/// `‖K − (tr K/n) Id‖ / ‖K‖`; zero for `K = 0`.
pub fn static_residual<T: Real>(k: &CMatrix<T>) -> T {
    let n = k.nrows();
    let norm = frobenius_norm(k);
    if n == 0 || norm == T::zero() {
        return T::zero();
    }
    let c = k.trace().re / lit(n as f64);
    let id = identity::<T>(n).map(|x| x.scale(c));
    frobenius_norm(&(k - id)) / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::linalg::real_diagonal;
    use crate::scalar::{cplx, creal};

    #[test]
    fn heisenberg_curvature() {
        let s = cplx::<f64>(1.2, -0.4);
        let k = k_from_bracket(&catalog::heisenberg3(s).unwrap().bracket);
        let expect = real_diagonal(&[0.0, 0.0, s.norm_sqr() / 2.0]);
        assert!(max_abs(&(k.matrix - expect)) < 1e-15);
    }

    #[test]
    fn weighted_h5_curvature() {
        let (a, b) = (cplx::<f64>(1.0, 1.0), creal::<f64>(2.0));
        let k = k_from_bracket(&catalog::weighted_h5(a, b).unwrap().bracket);
        let expect = real_diagonal(&[0.0, 0.0, 0.0, 0.0, 3.0]);
        assert!(max_abs(&(k.matrix - expect)) < 1e-15);
    }

    #[test]
    fn abelian_curvature_vanishes() {
        let k = k_from_bracket(&catalog::abelian::<f64>(3).unwrap().bracket);
        assert_eq!(k.norm_sq(), 0.0);
        assert_eq!(trace_checks(&catalog::abelian::<f64>(3).unwrap().bracket).static_residual, 0.0);
    }

    #[test]
    fn metric_identity_matches_bracket() {
        let d = catalog::free_two_step::<f64>(3).unwrap();
        let mk = k_from_metric(&d.bracket, &identity(d.dim())).unwrap();
        let k = k_from_bracket(&d.bracket);
        assert!(max_abs(&(mk.tensor - k.matrix)) < 1e-14);
    }

    #[test]
    fn heisenberg_metric_component() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        for lam in [0.25, 1.0, 3.0] {
            let mk = k_from_metric(&mu, &real_diagonal(&[1.0, 1.0, lam])).unwrap();
            assert!((mk.tensor[(2, 2)].re - lam * lam / 2.0).abs() < 1e-13);
            assert!((mk.operator_spectrum()[2] - lam / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn non_positive_metric_rejected() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        let h = real_diagonal(&[1.0, 0.0, 1.0]);
        assert!(matches!(k_from_metric(&mu, &h), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn trace_checks_heisenberg() {
        let tc = trace_checks(&catalog::heisenberg3(creal::<f64>(2.0)).unwrap().bracket);
        assert!((tc.tr_k - 2.0).abs() < 1e-15);
        assert!((tc.half_norm_sq - 2.0).abs() < 1e-15);
        let tc1 = trace_checks(&catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket);
        let expect = (1.0f64 / 6.0).sqrt() / 0.5;
        assert!((tc1.static_residual - expect).abs() < 1e-14);
    }

    #[test]
    fn synthetic_scalar_curvature_is_static() {
        let k = real_diagonal(&[0.7, 0.7, 0.7, 0.7]);
        assert_eq!(static_residual(&k), 0.0);
    }
}
