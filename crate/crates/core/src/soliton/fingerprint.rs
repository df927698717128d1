//! Unitary invariants of a bracket, for comparing flow limits.

use crate::algebra::bracket::BracketTensor;
use crate::algebra::descriptor::validate;
use crate::curvature::k_from_bracket;
use crate::error::Result;
use crate::scalar::{czero, CMatrix, Real, C};

#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint<T: Real> {
    /// Eigenvalues of `K_ν` at unit norm, ascending.
    pub spectrum: Vec<T>,
    pub f_value: T,
    pub center_dim: usize,
    pub derivation_dim: usize,
    /// Singular values of `ν` as a map `Λ²z^⊥ → z`, descending.
    pub center_profile: Vec<T>,
    /// `‖ν∧ν‖` when the center is one-dimensional.
    pub wedge_norm: Option<T>,
}

/// Per-field absolute differences between two fingerprints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FingerprintDiff<T: Real> {
    pub spectrum: T,
    pub f_value: T,
    pub center_dim_equal: bool,
    pub derivation_dim_equal: bool,
    pub center_profile: T,
    pub wedge_norm: T,
}

impl<T: Real> FingerprintDiff<T> {
    pub fn max_numeric(&self) -> T {
        self.spectrum
            .max(self.f_value)
            .max(self.center_profile)
            .max(self.wedge_norm)
    }

    pub fn matches(&self, tol: T) -> bool {
        self.center_dim_equal && self.derivation_dim_equal && self.max_numeric() <= tol
    }
}

pub fn fingerprint<T: Real>(mu: &BracketTensor<T>) -> Result<Fingerprint<T>> {
    let nu = mu.normalized()?;
    let desc = validate(nu)?;
    let nu = &desc.bracket;
    let k = k_from_bracket(nu);
    let z = &desc.center_basis;
    let q = &desc.complement_basis;
    let p = q.ncols();

    // ω[a, (α,β)] = ⟨ν(q_α, q_β), z_a⟩
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|a| (a + 1..p).map(move |b| (a, b))).collect();
    let mut omega = CMatrix::<T>::zeros(z.ncols(), pairs.len());
    for (col, &(a, b)) in pairs.iter().enumerate() {
        let img = nu.apply(&q.column(a).into_owned(), &q.column(b).into_owned());
        let coords = z.adjoint() * img;
        omega.set_column(col, &coords);
    }
    let mut center_profile: Vec<T> = if omega.is_empty() {
        Vec::new()
    } else {
        omega.singular_values().iter().copied().collect()
    };
    center_profile.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));

    let wedge_norm = (z.ncols() == 1).then(|| {
        let form = |a: usize, b: usize| -> C<T> {
            if a == b {
                czero()
            } else if a < b {
                omega[(0, pairs.iter().position(|&pp| pp == (a, b)).expect("pair"))]
            } else {
                -omega[(0, pairs.iter().position(|&pp| pp == (b, a)).expect("pair"))]
            }
        };
        let mut acc = T::zero();
        for a in 0..p {
            for b in a + 1..p {
                for c in b + 1..p {
                    for d in c + 1..p {
                        let pf = form(a, b) * form(c, d) - form(a, c) * form(b, d) + form(a, d) * form(b, c);
                        acc += (pf + pf).norm_sqr();
                    }
                }
            }
        }
        acc.sqrt()
    });

    Ok(Fingerprint {
        spectrum: k.spectrum(),
        f_value: k.norm_sq(),
        center_dim: desc.center_dim(),
        derivation_dim: desc.derivation_basis().len(),
        center_profile,
        wedge_norm,
    })
}

fn max_diff<T: Real>(a: &[T], b: &[T]) -> T {
    let len = a.len().max(b.len());
    (0..len).fold(T::zero(), |acc, i| {
        let x = a.get(i).copied().unwrap_or(T::zero());
        let y = b.get(i).copied().unwrap_or(T::zero());
        acc.max((x - y).abs())
    })
}

pub fn compare<T: Real>(a: &Fingerprint<T>, b: &Fingerprint<T>) -> FingerprintDiff<T> {
    let wedge_norm = match (a.wedge_norm, b.wedge_norm) {
        (Some(x), Some(y)) => (x - y).abs(),
        (None, None) => T::zero(),
        _ => T::one(),
    };
    FingerprintDiff {
        spectrum: max_diff(&a.spectrum, &b.spectrum),
        f_value: (a.f_value - b.f_value).abs(),
        center_dim_equal: a.center_dim == b.center_dim,
        derivation_dim_equal: a.derivation_dim == b.derivation_dim,
        center_profile: max_diff(&a.center_profile, &b.center_profile),
        wedge_norm,
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::error::Error;
    use crate::scalar::{cplx, creal};

    #[test]
    fn homothetic_heisenbergs_agree() {
        let a = fingerprint(&catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket).unwrap();
        let b = fingerprint(&catalog::heisenberg3(creal::<f64>(5.0)).unwrap().bracket).unwrap();
        assert!(compare(&a, &b).matches(1e-12));
        assert_eq!(a.center_dim, 1);
        assert_eq!(a.derivation_dim, 6);
    }

    #[test]
    fn heisenberg_and_free_differ_in_f() {
        let a = fingerprint(&catalog::heisenberg3(creal::<f64>(1.0)).unwrap().bracket).unwrap();
        let b = fingerprint(&catalog::free_two_step::<f64>(3).unwrap().bracket).unwrap();
        let diff = compare(&a, &b);
        assert!((diff.f_value - (0.25 - 1.0 / 12.0)).abs() < 1e-12);
        assert!(!diff.matches(1e-6));
    }

    #[test]
    fn weighted_h5_wedge_separates_orbits() {
        let s = 0.5f64.sqrt();
        let a = fingerprint(&catalog::weighted_h5(creal::<f64>(s), creal::<f64>(s)).unwrap().bracket).unwrap();
        let b = fingerprint(&catalog::weighted_h5(creal::<f64>(0.9f64.sqrt()), cplx::<f64>(0.0, 0.1f64.sqrt())).unwrap().bracket)
            .unwrap();
        let diff = compare(&a, &b);
        assert!(diff.spectrum < 1e-12 && diff.f_value < 1e-12);
        assert!((a.wedge_norm.unwrap() - 1.0).abs() < 1e-12);
        assert!((b.wedge_norm.unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn zero_bracket_is_rejected() {
        assert_eq!(fingerprint(&BracketTensor::<f64>::zeros(3)), Err(Error::ZeroBracket));
    }
}
