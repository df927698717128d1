//! The moment map `Φ(μ) = 2K_μ/‖μ‖²`, the functional `F` and the static test.

use crate::algebra::action::{bracket_inner, endo_inner, pi_action};
use crate::algebra::bracket::BracketTensor;
use crate::algebra::descriptor::AlgebraDescriptor;
use crate::curvature::{k_from_bracket, static_residual};
use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, hermitian_defect};
use crate::scalar::{lit, to_f64, CMatrix, Real};

/// Relative tolerance for an endomorphism to count as Hermitian and
/// supported on the center block.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Allowed imaginary part of the defect, relative to `‖μ‖²‖E‖`.
pub const DEFECT_IMAG_TOL: f64 = 1e-12;

pub fn moment_map<T: Real>(mu: &BracketTensor<T>) -> Result<CMatrix<T>> {
    let norm_sq = mu.norm_sq();
    if norm_sq == T::zero() {
        return Err(Error::ZeroBracket);
    }
    let k = k_from_bracket(mu);
    Ok(k.matrix.map(|z| z.scale(lit::<T>(2.0) / norm_sq)))
}

/// `⟨K_μ, E⟩ − ½⟨π(E)μ, μ⟩` for a Hermitian `E` supported on the center.
pub fn moment_defect<T: Real>(desc: &AlgebraDescriptor<T>, e: &CMatrix<T>) -> Result<T> {
    let mu = &desc.bracket;
    let n = desc.dim();
    if e.nrows() != n || e.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: e.nrows() });
    }
    let e_norm = frobenius_norm(e);
    let p = desc.center_projector();
    let outside = frobenius_norm(&(e - &p * e * &p));
    let defect = outside.max(hermitian_defect(e));
    if defect > lit::<T>(SUPPORT_TOL) * e_norm.max(T::one()) {
        return Err(Error::BadSupport { defect: to_f64(defect) });
    }
    let k = k_from_bracket(mu);
    let lhs = endo_inner(&k.matrix, e)?;
    let rhs = bracket_inner(&pi_action(e, mu)?, mu)?;
    let value = lhs - rhs.scale(lit(0.5));
    let scale = mu.norm_sq() * e_norm;
    if value.im.abs() > lit::<T>(DEFECT_IMAG_TOL) * scale.max(T::default_epsilon()) {
        return Err(Error::NonReal { imag: to_f64(value.im) });
    }
    Ok(value.re)
}

/// `F(μ) = ‖K_μ‖²/‖μ‖⁴`.
pub fn functional_f<T: Real>(mu: &BracketTensor<T>) -> Result<T> {
    let norm_sq = mu.norm_sq();
    if norm_sq == T::zero() {
        return Err(Error::ZeroBracket);
    }
    Ok(k_from_bracket(mu).norm_sq() / (norm_sq * norm_sq))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticCheck<T: Real> {
    /// `tr K / n`, the only possible constant in `K = c·Id`.
    pub c_candidate: T,
    /// `‖K − c·Id‖/‖K‖`.
    pub residual: T,
}

pub fn static_check<T: Real>(mu: &BracketTensor<T>) -> Result<StaticCheck<T>> {
    if mu.norm_sq() == T::zero() {
        return Err(Error::ZeroBracket);
    }
    let k = k_from_bracket(mu);
    Ok(StaticCheck {
        c_candidate: k.trace() / lit(mu.dim() as f64),
        residual: static_residual(&k.matrix),
    })
}
