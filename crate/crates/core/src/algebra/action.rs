//! The change-of-basis action of `GL_n(ℂ)` on brackets, its infinitesimal
//! version `π`, and the Hermitian pairings used throughout.

use crate::algebra::bracket::BracketTensor;
use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, frobenius_inner};
use crate::scalar::{lit, CMatrix, CVector, Real, C};

/// Condition number above which an endomorphism is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// `φ·μ = φ μ(φ⁻¹·, φ⁻¹·)`.
pub fn act<T: Real>(phi: &CMatrix<T>, mu: &BracketTensor<T>) -> Result<BracketTensor<T>> {
    let n = mu.dim();
    check_square(phi, n)?;
    let psi = checked_inverse(phi, lit(MAX_CONDITION))?;
    let cols: Vec<CVector<T>> = (0..n).map(|a| psi.column(a).into_owned()).collect();
    let mut out = BracketTensor::zeros(n);
    for a in 0..n {
        for b in a + 1..n {
            let v = phi * mu.apply(&cols[a], &cols[b]);
            for k in 0..n {
                out.set(a, b, k, v[k]);
            }
        }
    }
    Ok(out)
}

/// `π(A)μ = A μ(·,·) − μ(A·,·) − μ(·,A·)`; the result need not satisfy Jacobi.
pub fn pi_action<T: Real>(a: &CMatrix<T>, mu: &BracketTensor<T>) -> Result<BracketTensor<T>> {
    let n = mu.dim();
    check_square(a, n)?;
    let mut out = BracketTensor::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut acc = C::new(T::zero(), T::zero());
                for m in 0..n {
                    acc += a[(k, m)] * mu.get(i, j, m);
                    acc -= a[(m, i)] * mu.get(m, j, k);
                    acc -= a[(m, j)] * mu.get(i, m, k);
                }
                out.set(i, j, k, acc);
            }
        }
    }
    Ok(out)
}

/// `⟨μ, λ⟩ = Σ_{i<j,k} μ_ij^k · conj(λ_ij^k)`.
pub fn bracket_inner<T: Real>(mu: &BracketTensor<T>, lambda: &BracketTensor<T>) -> Result<C<T>> {
    mu.check_dim(lambda)?;
    Ok(mu
        .as_slice()
        .iter()
        .zip(lambda.as_slice())
        .fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + *x * y.conj()))
}

/// `⟨A, B⟩ = tr(A Bᴴ)`.
pub fn endo_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<C<T>> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(frobenius_inner(a, b))
}

fn check_square<T: Real>(a: &CMatrix<T>, n: usize) -> Result<()> {
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if a.nrows() != n { a.nrows() } else { a.ncols() },
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::linalg::{identity, real_diagonal};
    use crate::scalar::{cplx, creal};

    fn close(a: &BracketTensor<f64>, b: &BracketTensor<f64>, tol: f64) -> bool {
        a.axpy(creal::<f64>(-1.0), b).unwrap().max_abs() <= tol
    }

    #[test]
    fn scalar_action_scales_inversely() {
        let mu = catalog::weighted_h5(cplx::<f64>(1.0, 0.5), cplx::<f64>(-0.3, 2.0)).unwrap().bracket;
        let c = cplx::<f64>(2.0, -1.0);
        let phi = identity::<f64>(5).map(|x| x * c);
        let out = act(&phi, &mu).unwrap();
        assert!(close(&out, &mu.scale(c.inv()), 1e-14));
    }

    #[test]
    fn center_scaling_of_heisenberg() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        let out = act(&real_diagonal(&[1.0, 1.0, 3.0]), &mu).unwrap();
        assert!((out.get(0, 1, 2) - creal::<f64>(3.0)).norm() < 1e-15);
    }

    #[test]
    fn pi_of_identity_is_minus_mu() {
        let mu = catalog::free_two_step(3).unwrap().bracket;
        let out = pi_action(&identity(mu.dim()), &mu).unwrap();
        assert!(close(&out, &mu.scale(creal::<f64>(-1.0)), 0.0));
    }

    #[test]
    fn pi_on_heisenberg_diagonals() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        let center = pi_action(&real_diagonal(&[0.0, 0.0, 1.0]), &mu).unwrap();
        assert!(close(&center, &mu, 0.0));
        let first = pi_action(&real_diagonal(&[1.0, 0.0, 0.0]), &mu).unwrap();
        assert!(close(&first, &mu.scale(creal::<f64>(-1.0)), 0.0));
    }

    #[test]
    fn singular_phi_rejected() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        assert!(matches!(
            act(&real_diagonal(&[1.0, 1.0, 0.0]), &mu),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_reported() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        assert!(matches!(
            pi_action(&identity(4), &mu),
            Err(Error::DimensionMismatch { .. })
        ));
        let other = BracketTensor::<f64>::zeros(4);
        assert!(bracket_inner(&mu, &other).is_err());
    }

    #[test]
    fn norms_of_catalog_brackets() {
        let s = cplx::<f64>(0.6, -0.8);
        let mu = catalog::heisenberg3(s.scale(2.0)).unwrap().bracket;
        assert!((bracket_inner(&mu, &mu).unwrap().re - 4.0).abs() < 1e-14);
        let h5 = catalog::weighted_h5(cplx::<f64>(1.0, 1.0), creal::<f64>(3.0)).unwrap().bracket;
        assert!((bracket_inner(&h5, &h5).unwrap() - creal::<f64>(11.0)).norm() < 1e-14);
    }

    #[test]
    fn endo_inner_values() {
        assert_eq!(endo_inner(&identity::<f64>(3), &identity(3)).unwrap(), creal::<f64>(3.0));
        let e = std::f64::consts::E;
        let a = real_diagonal(&[0.0, 0.0, 0.5]);
        let b = real_diagonal(&[0.0, 0.0, e]);
        assert!((endo_inner(&a, &b).unwrap().re - e / 2.0).abs() < 1e-15);
    }
}
