//! Standard complex 2-step nilpotent Lie algebras.

use crate::algebra::bracket::{pair_count, BracketTensor};
use crate::algebra::descriptor::{validate, AlgebraDescriptor};
use crate::error::{Error, Result};
use crate::scalar::{cone, Real, C};

/// Complex Heisenberg algebra `μ(Z₁, Z₂) = s Z₃`.
pub fn heisenberg3<T: Real>(s: C<T>) -> Result<AlgebraDescriptor<T>> {
    validate(BracketTensor::from_entries(3, [(0, 1, 2, s)])?)
}

/// `μ(Z₁, Z₂) = a Z₅`, `μ(Z₃, Z₄) = b Z₅`.
pub fn weighted_h5<T: Real>(a: C<T>, b: C<T>) -> Result<AlgebraDescriptor<T>> {
    validate(BracketTensor::from_entries(5, [(0, 1, 4, a), (2, 3, 4, b)])?)
}

/// Heisenberg algebra of dimension `2m + 1`: `μ(X_i, Y_i) = Z` over the basis
/// `X₁, Y₁, …, X_m, Y_m, Z`.
pub fn heisenberg<T: Real>(m: usize) -> Result<AlgebraDescriptor<T>> {
    if m == 0 {
        return Err(Error::BadParameter("heisenberg: m must be >= 1".into()));
    }
    let n = 2 * m + 1;
    validate(BracketTensor::from_entries(
        n,
        (0..m).map(|i| (2 * i, 2 * i + 1, n - 1, cone())),
    )?)
}

/// Free 2-step nilpotent algebra on `m` generators: dimension `m + m(m−1)/2`,
/// `μ(Z_i, Z_j) = W_ij` with the `W_ij` ordered lexicographically.
pub fn free_two_step<T: Real>(m: usize) -> Result<AlgebraDescriptor<T>> {
    if m == 0 {
        return Err(Error::BadParameter("free_two_step: m must be >= 1".into()));
    }
    let n = m + pair_count(m);
    let mut entries = Vec::new();
    let mut w = m;
    for i in 0..m {
        for j in i + 1..m {
            entries.push((i, j, w, cone()));
            w += 1;
        }
    }
    validate(BracketTensor::from_entries(n, entries)?)
}

/// Abelian algebra `ℂⁿ`.
pub fn abelian<T: Real>(n: usize) -> Result<AlgebraDescriptor<T>> {
    if n == 0 {
        return Err(Error::BadParameter("abelian: n must be >= 1".into()));
    }
    validate(BracketTensor::zeros(n))
}

/// Direct sum, basis of `μ₁` first.
pub fn direct_sum<T: Real>(
    first: &BracketTensor<T>,
    second: &BracketTensor<T>,
) -> Result<AlgebraDescriptor<T>> {
    let n1 = first.dim();
    let entries = first
        .nonzero_entries()
        .chain(
            second
                .nonzero_entries()
                .map(|(i, j, k, v)| (i + n1, j + n1, k + n1, v)),
        )
        .collect::<Vec<_>>();
    validate(BracketTensor::from_entries(n1 + second.dim(), entries)?)
}

/// Non-abelian members of the catalog with default parameters.
pub fn standard_examples<T: Real>() -> Vec<(String, AlgebraDescriptor<T>)> {
    let one = cone::<T>();
    let two = one + one;
    let h3 = heisenberg3(one).expect("catalog");
    let mut out = vec![
        ("heisenberg3(1)".to_string(), h3.clone()),
        ("heisenberg3(2)".to_string(), heisenberg3(two).expect("catalog")),
        ("weighted_h5(1,1)".to_string(), weighted_h5(one, one).expect("catalog")),
        ("weighted_h5(1,0)".to_string(), weighted_h5(one, C::new(T::zero(), T::zero())).expect("catalog")),
        ("weighted_h5(2,1)".to_string(), weighted_h5(two, one).expect("catalog")),
        ("heisenberg(5)".to_string(), heisenberg(2).expect("catalog")),
        ("heisenberg(7)".to_string(), heisenberg(3).expect("catalog")),
        ("free_two_step(3)".to_string(), free_two_step(3).expect("catalog")),
        ("free_two_step(4)".to_string(), free_two_step(4).expect("catalog")),
    ];
    out.push((
        "heisenberg3+abelian(1)".to_string(),
        direct_sum(&h3.bracket, &abelian::<T>(1).expect("catalog").bracket).expect("catalog"),
    ));
    out.push((
        "heisenberg3+heisenberg3".to_string(),
        direct_sum(&h3.bracket, &h3.bracket).expect("catalog"),
    ));
    out
}
