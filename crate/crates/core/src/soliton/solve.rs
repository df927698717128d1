//! Detecting algebraic solitons `K_μ = c·Id + ½(D + Dᴴ)`, `D ∈ Der(μ)`.

use nalgebra::DMatrix;

use crate::algebra::action::{bracket_inner, pi_action};
use crate::algebra::bracket::BracketTensor;
use crate::algebra::derivations::derivation_space;
use crate::curvature::k_from_bracket;
use crate::error::{Error, Result};
use crate::flow::diagnostics::fixed_point_residual;
use crate::linalg::{frobenius_norm, hermitian_defect, identity};
use crate::scalar::{cplx, creal, lit, to_f64, CMatrix, Real};

/// Both residuals must be below this multiple of `‖K_μ‖`.
pub const SOLITON_REL_TOL: f64 = 1e-8;
/// `|c|` below this is reported as numerically steady.
pub const STEADY_DEAD_ZONE: f64 = 1e-10;
/// Largest accepted imaginary part of the fitted constant.
pub const IMAG_C_TOL: f64 = 1e-12;
/// Hermitian defect allowed for `D`, relative to `‖D‖`.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Expanding,
    Steady,
    Shrinking,
    NotSoliton,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Expanding => "expanding",
            Classification::Steady => "steady",
            Classification::Shrinking => "shrinking",
            Classification::NotSoliton => "not_soliton",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolitonReport<T: Real> {
    pub c: T,
    pub d: CMatrix<T>,
    /// `‖K − c·Id − ½(D + Dᴴ)‖`.
    pub soliton_residual: T,
    /// `‖π(D)μ‖`.
    pub derivation_residual: T,
    pub classification: Classification,
    /// Whether `D` is Hermitian to [`HERMITIAN_TOL`].
    pub symmetric: bool,
    /// Best `c` with `K − c·Id` a derivation, `−2‖K‖²/‖μ‖²`.
    pub shortcut_c: T,
    /// `‖π(K − c·Id)μ‖` at the shortcut constant.
    pub shortcut_residual: T,
    /// `‖K_μ‖`, the scale of the residual tolerance.
    pub k_norm: T,
}

impl<T: Real> SolitonReport<T> {
    pub fn is_soliton(&self) -> bool {
        self.classification != Classification::NotSoliton
    }
}

fn classify<T: Real>(c: T, res1: T, res2: T, k_norm: T) -> Classification {
    let tol = lit::<T>(SOLITON_REL_TOL) * k_norm;
    if !(res1 <= tol && res2 <= tol) {
        Classification::NotSoliton
    } else if c.abs() <= lit(STEADY_DEAD_ZONE) {
        Classification::Steady
    } else if c < T::zero() {
        Classification::Expanding
    } else {
        Classification::Shrinking
    }
}

/// `(c, ‖π(K − c·Id)μ‖)` for the optimal real `c`.
fn shortcut<T: Real>(mu: &BracketTensor<T>, k: &CMatrix<T>) -> Result<(T, T)> {
    let pk = pi_action(k, mu)?;
    let c = -bracket_inner(&pk, mu)?.re / mu.norm_sq();
    // π(K − c·Id)μ = π(K)μ + c·μ
    let r = pk.axpy(creal(c), mu)?.norm();
    Ok((c, r))
}

/// Least squares over real `c` and `D ∈ Der(μ)` of `‖K − c·Id − ½(D + Dᴴ)‖`.
///
/// The minimum-norm solution is taken, so any anti-Hermitian derivation is
/// projected out of `D`.
pub fn soliton_solve<T: Real>(mu: &BracketTensor<T>) -> Result<SolitonReport<T>> {
    if mu.norm_sq() == T::zero() {
        return Err(Error::ZeroBracket);
    }
    let n = mu.dim();
    let k = k_from_bracket(mu).matrix;
    let basis = derivation_space(mu);
    let m = basis.len();
    let half = lit::<T>(0.5);
    let i = cplx(T::zero(), T::one());

    // columns: c_re, c_im, Re x_l, Im x_l; rows: real and imaginary parts
    let id = identity::<T>(n);
    let mut columns: Vec<CMatrix<T>> = vec![-id.clone(), -id.map(|z| z * i)];
    for b in &basis {
        let bh = b.adjoint();
        columns.push(-(b + &bh).map(|z| z.scale(half)));
        columns.push(-(b.map(|z| z * i) - bh.map(|z| z * i)).map(|z| z.scale(half)));
    }
    let rows = 2 * n * n;
    let mut a = DMatrix::<T>::zeros(rows, columns.len());
    for (col, mat) in columns.iter().enumerate() {
        for (r, z) in mat.iter().enumerate() {
            a[(2 * r, col)] = z.re;
            a[(2 * r + 1, col)] = z.im;
        }
    }
    let mut rhs = nalgebra::DVector::<T>::zeros(rows);
    for (r, z) in k.iter().enumerate() {
        rhs[2 * r] = -z.re;
        rhs[2 * r + 1] = -z.im;
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.iter().fold(T::zero(), |acc, s| acc.max(*s));
    let eps = smax * lit(crate::linalg::RANK_REL_TOL);
    let u = svd
        .solve(&rhs, eps)
        .map_err(|e| Error::BadParameter(e.to_string()))?;

    if u[1].abs() > lit(IMAG_C_TOL) {
        return Err(Error::NonReal { imag: to_f64(u[1]) });
    }
    let c = u[0];
    let mut d = CMatrix::<T>::zeros(n, n);
    for (l, b) in basis.iter().enumerate() {
        let x = cplx(u[2 + 2 * l], u[3 + 2 * l]);
        d += b.map(|z| z * x);
    }
    debug_assert_eq!(basis.len(), m);

    let sym = (&d + d.adjoint()).map(|z| z.scale(half));
    let soliton_residual = frobenius_norm(&(&k - id.map(|z| z.scale(c)) - sym));
    let derivation_residual = pi_action(&d, mu)?.norm();
    let k_norm = frobenius_norm(&k);
    let d_norm = frobenius_norm(&d);
    let symmetric = hermitian_defect(&d) <= lit::<T>(HERMITIAN_TOL) * d_norm.max(T::one());
    let (shortcut_c, shortcut_residual) = shortcut(mu, &k)?;
    Ok(SolitonReport {
        c,
        d,
        soliton_residual,
        derivation_residual,
        classification: classify(c, soliton_residual, derivation_residual, k_norm),
        symmetric,
        shortcut_c,
        shortcut_residual,
        k_norm,
    })
}

/// Certificate at a fixed point of the normalized flow: `D = K + r·Id` with
/// `r = 2‖K‖²/‖ν‖²` and `c = −r`.
///
/// Fails with `NotFixedPoint` when the fixed-point residual exceeds `tol`.
pub fn fixed_point_is_soliton<T: Real>(nu: &BracketTensor<T>, tol: T) -> Result<SolitonReport<T>> {
    let norm_sq = nu.norm_sq();
    if norm_sq == T::zero() {
        return Err(Error::ZeroBracket);
    }
    let residual = fixed_point_residual(nu);
    if residual > tol {
        return Err(Error::NotFixedPoint { residual: to_f64(residual) });
    }
    let n = nu.dim();
    let k = k_from_bracket(nu).matrix;
    let k_norm = frobenius_norm(&k);
    let r = lit::<T>(2.0) * k_norm * k_norm / norm_sq;
    let c = -r;
    let d = &k + identity::<T>(n).map(|z| z.scale(r));
    let sym = (&d + d.adjoint()).map(|z| z.scale(lit(0.5)));
    let soliton_residual = frobenius_norm(&(&k - identity::<T>(n).map(|z| z.scale(c)) - sym));
    let derivation_residual = pi_action(&d, nu)?.norm();
    let (shortcut_c, shortcut_residual) = shortcut(nu, &k)?;
    Ok(SolitonReport {
        c,
        symmetric: hermitian_defect(&d) <= lit::<T>(HERMITIAN_TOL) * frobenius_norm(&d),
        d,
        soliton_residual,
        derivation_residual,
        classification: classify(c, soliton_residual, derivation_residual, k_norm),
        shortcut_c,
        shortcut_residual,
        k_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::linalg::{max_abs, real_diagonal};

    #[test]
    fn heisenberg_soliton() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        let rep = soliton_solve(&mu).unwrap();
        assert!((rep.c + 0.5).abs() < 1e-12);
        assert!(max_abs(&(&rep.d - real_diagonal(&[0.5, 0.5, 1.0]))) < 1e-12);
        assert!(rep.soliton_residual < 1e-12 && rep.derivation_residual < 1e-12);
        assert_eq!(rep.classification, Classification::Expanding);
        assert!(rep.symmetric);
        assert!((rep.shortcut_c + 0.5).abs() < 1e-14);
    }

    #[test]
    fn heisenberg_constant_scales_with_norm() {
        let mu = catalog::heisenberg3(cplx::<f64>(0.0, 2.0)).unwrap().bracket;
        let rep = soliton_solve(&mu).unwrap();
        assert!((rep.c + 2.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_h5_unit_soliton() {
        let s = 0.5f64.sqrt();
        let mu = catalog::weighted_h5(creal::<f64>(s), cplx::<f64>(0.0, s)).unwrap().bracket;
        let rep = soliton_solve(&mu).unwrap();
        assert!((rep.c + 0.5).abs() < 1e-12);
        assert!(max_abs(&(&rep.d - real_diagonal(&[0.5, 0.5, 0.5, 0.5, 1.0]))) < 1e-12);
        assert_eq!(rep.classification, Classification::Expanding);
    }

    #[test]
    fn abelian_is_rejected() {
        let mu = catalog::abelian::<f64>(4).unwrap().bracket;
        assert_eq!(soliton_solve(&mu), Err(Error::ZeroBracket));
    }

    #[test]
    fn non_soliton_is_detected() {
        // H3 ⊕ H3 with unequal weights sits outside the soliton locus
        let a = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        let b = catalog::heisenberg3(creal::<f64>(2.0)).unwrap().bracket;
        let mu = catalog::direct_sum(&a, &b).unwrap().bracket;
        let rep = soliton_solve(&mu).unwrap();
        assert_eq!(rep.classification, Classification::NotSoliton);
    }

    #[test]
    fn fixed_point_certificate() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        let rep = fixed_point_is_soliton(&mu, 1e-10).unwrap();
        assert!((rep.c + 0.5).abs() < 1e-15);
        assert!(max_abs(&(&rep.d - real_diagonal(&[0.5, 0.5, 1.0]))) < 1e-15);
        let far = catalog::direct_sum(
            &catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket,
            &catalog::heisenberg3(creal::<f64>(2.0)).unwrap().bracket,
        )
        .unwrap()
        .bracket
        .normalized()
        .unwrap();
        assert!(matches!(fixed_point_is_soliton(&far, 1e-10), Err(Error::NotFixedPoint { .. })));
    }
}
