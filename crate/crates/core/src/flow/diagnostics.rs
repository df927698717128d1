use crate::algebra::action::pi_action;
use crate::algebra::bracket::BracketTensor;
use crate::curvature::k_from_bracket;
use crate::scalar::{creal, CMatrix, Real};

/// Per-sample quantities recorded along a flow.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics<T: Real> {
    /// `‖μ‖²`.
    pub norm_sq: T,
    /// `F(μ) = ‖K_μ‖² / ‖μ‖⁴`; reported as 0 when μ = 0 (see `f_defined`).
    pub f_value: T,
    pub f_defined: bool,
    pub tr_k: T,
    /// Eigenvalues of `K_μ`, ascending.
    pub spectrum: Vec<T>,
    /// `‖π(K_ν + r_ν Id)ν‖` for `ν = μ/‖μ‖`.
    pub residual: T,
    /// Largest entry of `K_μ` touching `z^⊥`, when a complement basis is given.
    pub off_center: T,
    /// `max |μ(μ(e_i,e_j),e_l)| / ‖μ‖²`.
    pub structure_residual: T,
}

impl<T: Real> Diagnostics<T> {
    pub fn compute(mu: &BracketTensor<T>, complement: Option<&CMatrix<T>>) -> Self {
        let norm_sq = mu.norm_sq();
        let k = k_from_bracket(mu);
        let k_norm_sq = k.norm_sq();
        let f_defined = norm_sq > T::zero();
        let (f_value, residual, structure_residual) = if f_defined {
            let nu = mu.scale_real(T::one() / norm_sq.sqrt());
            (
                k_norm_sq / (norm_sq * norm_sq),
                fixed_point_residual(&nu),
                mu.two_step_residual() / norm_sq,
            )
        } else {
            (T::zero(), T::zero(), T::zero())
        };
        Self {
            norm_sq,
            f_value,
            f_defined,
            tr_k: k.trace(),
            spectrum: k.spectrum(),
            residual,
            off_center: complement.map_or(T::zero(), |c| k.off_center_max(c)),
            structure_residual,
        }
    }
}

/// `‖π(K_ν + r_ν Id)ν‖` with `r_ν = 2‖K_ν‖²/‖ν‖²`.
pub fn fixed_point_residual<T: Real>(nu: &BracketTensor<T>) -> T {
    normalized_velocity_unchecked(nu).norm()
}

/// `−π(K_ν + r_ν Id)ν`, with `r_ν = 2‖K_ν‖²/‖ν‖²` so that the velocity is
/// tangent to every sphere, not only the unit one.
pub(crate) fn normalized_velocity_unchecked<T: Real>(nu: &BracketTensor<T>) -> BracketTensor<T> {
    let norm_sq = nu.norm_sq();
    if norm_sq == T::zero() {
        return BracketTensor::zeros(nu.dim());
    }
    let k = k_from_bracket(nu);
    let r = (k.norm_sq() + k.norm_sq()) / norm_sq;
    let pk = pi_action(&k.matrix, nu).expect("square by construction");
    // −π(K + r Id)ν = −π(K)ν + r ν
    pk.scale(creal(-T::one())).axpy(creal(r), nu).expect("same dimension")
}
