//! The derivation algebra `Der(μ) = ker(D ↦ π(D)μ)`.

use crate::algebra::action::pi_action;
use crate::algebra::bracket::BracketTensor;
use crate::linalg::kernel_split;
use crate::scalar::{cone, CMatrix, Real};

/// Matrix of the linear map `vec(A) ↦ π(A)μ`, with `vec` column-major
/// (column `a + b·n` is `π(E_ab)μ`) and rows in bracket storage order.
pub fn pi_matrix<T: Real>(mu: &BracketTensor<T>) -> CMatrix<T> {
    let n = mu.dim();
    let rows = mu.num_pairs() * n;
    let mut l = CMatrix::<T>::zeros(rows, n * n);
    for b in 0..n {
        for a in 0..n {
            let mut e = CMatrix::<T>::zeros(n, n);
            e[(a, b)] = cone();
            let img = pi_action(&e, mu).expect("square by construction");
            for (r, v) in img.as_slice().iter().enumerate() {
                l[(r, a + b * n)] = *v;
            }
        }
    }
    l
}

/// Frobenius-orthonormal basis of `Der(μ)` by singular-value thresholding.
pub fn derivation_space<T: Real>(mu: &BracketTensor<T>) -> Vec<CMatrix<T>> {
    let n = mu.dim();
    if n == 0 {
        return Vec::new();
    }
    let split = kernel_split(&pi_matrix(mu));
    (0..split.kernel.ncols())
        .map(|c| CMatrix::from_fn(n, n, |a, b| split.kernel[(a + b * n, c)]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::linalg::{frobenius_norm, real_diagonal};
    use crate::scalar::creal;

    #[test]
    fn abelian_derivations_are_everything() {
        let mu = BracketTensor::<f64>::zeros(2);
        assert_eq!(derivation_space(&mu).len(), 4);
    }

    #[test]
    fn heisenberg_diagonal_derivation_condition() {
        let mu = catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket;
        let ok = pi_action(&real_diagonal(&[0.3, 0.9, 1.2]), &mu).unwrap();
        assert!(ok.max_abs() < 1e-15);
        let bad = pi_action(&real_diagonal(&[0.3, 0.9, 1.0]), &mu).unwrap();
        assert!(bad.max_abs() > 0.1);
    }

    #[test]
    fn returned_basis_is_orthonormal_and_exact() {
        let d = catalog::free_two_step::<f64>(3).unwrap();
        let basis = derivation_space(&d.bracket);
        for (i, a) in basis.iter().enumerate() {
            assert!((frobenius_norm(a) - 1.0).abs() < 1e-12);
            let r = pi_action(a, &d.bracket).unwrap();
            assert!(r.norm() <= 1e-10 * d.bracket.norm());
            for b in &basis[..i] {
                assert!(crate::linalg::frobenius_inner(a, b).norm() < 1e-12);
            }
        }
    }
}
