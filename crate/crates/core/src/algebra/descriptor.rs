use std::sync::OnceLock;

use crate::algebra::bracket::BracketTensor;
use crate::algebra::derivations::derivation_space;
use crate::error::{Error, Result};
use crate::linalg::{kernel_split, projector};
use crate::scalar::{rel_tol, to_f64, CMatrix, CVector, Real, C};

/// Jacobi residual tolerance, relative to `‖μ‖²`.
pub const JACOBI_REL_TOL: f64 = 1e-10;
/// Tolerance, relative to `‖μ‖`, for `μ(·,·)` landing in the center.
pub const TWO_STEP_REL_TOL: f64 = 1e-9;

/// A validated bracket together with its center/complement splitting.
#[derive(Debug, Clone)]
pub struct AlgebraDescriptor<T: Real> {
    pub bracket: BracketTensor<T>,
    /// Orthonormal columns spanning the center `z`.
    pub center_basis: CMatrix<T>,
    /// Orthonormal columns spanning `z^⊥`.
    pub complement_basis: CMatrix<T>,
    pub is_two_step: bool,
    pub jacobi_residual: T,
    derivations: OnceLock<Vec<CMatrix<T>>>,
}

impl<T: Real> AlgebraDescriptor<T> {
    pub fn dim(&self) -> usize {
        self.bracket.dim()
    }

    pub fn center_dim(&self) -> usize {
        self.center_basis.ncols()
    }

    pub fn is_abelian(&self) -> bool {
        self.center_dim() == self.dim()
    }

    /// Orthogonal projector onto the center.
    pub fn center_projector(&self) -> CMatrix<T> {
        projector(&self.center_basis)
    }

    /// Frobenius-orthonormal basis of `Der(μ)`, computed on first use.
    pub fn derivation_basis(&self) -> &[CMatrix<T>] {
        self.derivations.get_or_init(|| derivation_space(&self.bracket))
    }

    /// Orthogonal projection onto brackets with `μ(z, ·) = 0` and image in `z`,
    /// for this descriptor's center `z`. Both flows leave that subspace
    /// invariant; projecting removes drift out of it, which the normalized
    /// flow amplifies.
    pub fn project_onto_structure(&self, mu: &BracketTensor<T>) -> Result<BracketTensor<T>> {
        self.bracket.check_dim(mu)?;
        let pz = self.center_projector();
        let q = &self.complement_basis;
        let p = q.ncols();
        // μ(P⊥·, P⊥·) = Σ_{a<b} (qᵀ_a ⊗ qᵀ_b − qᵀ_b ⊗ qᵀ_a) μ(q_a, q_b)
        let mut out = BracketTensor::zeros(mu.dim());
        for a in 0..p {
            for b in a + 1..p {
                let (qa, qb) = (q.column(a).into_owned(), q.column(b).into_owned());
                let img = &pz * mu.apply(&qa, &qb);
                for (i, j) in out.pairs().collect::<Vec<_>>() {
                    let w = qa[i].conj() * qb[j].conj() - qa[j].conj() * qb[i].conj();
                    if w != C::new(T::zero(), T::zero()) {
                        for k in 0..mu.dim() {
                            let v = out.get(i, j, k) + w * img[k];
                            out.set(i, j, k, v);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn require_two_step(&self) -> Result<()> {
        if self.is_two_step {
            Ok(())
        } else {
            Err(Error::NotTwoStep)
        }
    }
}

/// Validates a raw bracket: finiteness, Jacobi identity, center splitting and
/// the 2-step flag. A bracket that is not 2-step still validates.
pub fn validate<T: Real>(raw: BracketTensor<T>) -> Result<AlgebraDescriptor<T>> {
    if !raw.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm_sq = raw.norm_sq();
    let (jacobi, triple) = raw.jacobi_residual();
    if jacobi > rel_tol::<T>(JACOBI_REL_TOL) * norm_sq {
        return Err(Error::JacobiViolation {
            residual: to_f64(jacobi),
            triple,
        });
    }
    let (center_basis, complement_basis) = center_split(&raw);
    let is_two_step = image_in_subspace(&raw, &center_basis);
    Ok(AlgebraDescriptor {
        bracket: raw,
        center_basis,
        complement_basis,
        is_two_step,
        jacobi_residual: jacobi,
        derivations: OnceLock::new(),
    })
}

/// Center as the common kernel of the maps `X ↦ μ(X, e_j)`.
fn center_split<T: Real>(mu: &BracketTensor<T>) -> (CMatrix<T>, CMatrix<T>) {
    let n = mu.dim();
    let mut stacked = CMatrix::<T>::zeros(n * n, n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                stacked[(j * n + k, i)] = mu.get(i, j, k);
            }
        }
    }
    let split = kernel_split(&stacked);
    (split.kernel, split.complement)
}

fn image_in_subspace<T: Real>(mu: &BracketTensor<T>, basis: &CMatrix<T>) -> bool {
    let n = mu.dim();
    let proj = projector(basis);
    let tol = rel_tol::<T>(TWO_STEP_REL_TOL) * mu.norm();
    mu.pairs().all(|(i, j)| {
        let v: CVector<T> = mu.image(i, j);
        let off = &v - &proj * &v;
        debug_assert_eq!(off.len(), n);
        off.norm() <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, creal};

    #[test]
    fn heisenberg_center_is_third_axis() {
        let raw = BracketTensor::from_entries(3, [(0, 1, 2, creal::<f64>(1.0))]).unwrap();
        let d = validate(raw).unwrap();
        assert!(d.is_two_step);
        assert_eq!(d.center_dim(), 1);
        let z = d.center_basis.column(0);
        assert!((z[2].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn abelian_center_is_everything() {
        let d = validate(BracketTensor::<f64>::zeros(3)).unwrap();
        assert!(d.is_two_step);
        assert_eq!(d.center_dim(), 3);
        assert_eq!(d.complement_basis.ncols(), 0);
    }

    #[test]
    fn affine_algebra_is_not_two_step() {
        let raw = BracketTensor::from_entries(2, [(0, 1, 1, creal::<f64>(1.0))]).unwrap();
        let d = validate(raw).unwrap();
        assert!(!d.is_two_step);
        assert_eq!(d.center_dim(), 0);
        assert_eq!(d.require_two_step(), Err(Error::NotTwoStep));
    }

    #[test]
    fn jacobi_violation_is_an_error() {
        let raw = BracketTensor::from_entries(
            3,
            [(0, 1, 2, creal::<f64>(1.0)), (1, 2, 0, creal::<f64>(1.0)), (0, 2, 0, creal::<f64>(1.0))],
        )
        .unwrap();
        assert!(matches!(validate(raw), Err(Error::JacobiViolation { .. })));
    }

    #[test]
    fn non_finite_rejected() {
        let raw = BracketTensor::from_entries(3, [(0, 1, 2, cplx::<f64>(f64::NAN, 0.0))]).unwrap();
        assert!(matches!(validate(raw), Err(Error::NonFinite)));
    }

    #[test]
    fn projection_fixes_two_step_brackets_and_removes_drift() {
        let mut rng = crate::algebra::random::seeded_rng(8);
        let d = validate(crate::algebra::random::two_step::<f64, _>(6, &mut rng).unwrap()).unwrap();
        let same = d.project_onto_structure(&d.bracket).unwrap();
        assert!(same.axpy(C::new(-1.0, 0.0), &d.bracket).unwrap().max_abs() < 1e-14);
        let noise = crate::algebra::random::two_step::<f64, _>(6, &mut rng).unwrap();
        let drifted = d.bracket.axpy(C::new(1e-6, 0.0), &noise).unwrap();
        let back = d.project_onto_structure(&drifted).unwrap();
        assert!(back.two_step_residual() < 1e-12);
        let twice = d.project_onto_structure(&back).unwrap();
        assert!(twice.axpy(C::new(-1.0, 0.0), &back).unwrap().max_abs() < 1e-14);
    }
}
