//! Structure constants of a complex Lie algebra over a fixed basis.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::modulus;
use crate::scalar::{czero, CMatrix, CVector, Real, C};

/// Complex structure constants `μ(e_i, e_j) = Σ_k μ_ij^k e_k`.
///
/// Only pairs `i < j` are stored; `μ_ji = −μ_ij` and `μ_ii = 0` are implied.
/// Indices are 0-based. Storage is `data[pair(i, j) * dim + k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketTensor<T: Real> {
    dim: usize,
    data: Vec<C<T>>,
}

/// Number of unordered pairs `i < j` in dimension `n`.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl<T: Real> BracketTensor<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![czero(); pair_count(dim) * dim],
        }
    }

    /// Builds a bracket from `(i, j, k, value)` entries with `i < j`.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, C<T>)>,
    {
        let mut mu = Self::zeros(dim);
        for (i, j, k, v) in entries {
            if i >= j || j >= dim || k >= dim {
                return Err(Error::BadParameter(format!(
                    "bracket entry ({i}, {j}, {k}) out of range or not i < j"
                )));
            }
            mu.set(i, j, k, v);
        }
        Ok(mu)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn num_pairs(&self) -> usize {
        pair_count(self.dim)
    }

    /// Position of the pair `(i, j)`, `i < j`, in lexicographic order.
    #[inline]
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.dim);
        i * (2 * self.dim - i - 1) / 2 + (j - i - 1)
    }

    /// Pairs `(i, j)` with `i < j` in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.dim;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// `μ_ij^k` for any ordered pair.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C<T> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => czero(),
            Less => self.data[self.pair_index(i, j) * self.dim + k],
            Greater => -self.data[self.pair_index(j, i) * self.dim + k],
        }
    }

    /// Sets `μ_ij^k` (and implicitly `μ_ji^k = −v`). Requires `i != j`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: C<T>) {
        assert!(i != j, "diagonal bracket entries are identically zero");
        let (a, b, v) = if i < j { (i, j, v) } else { (j, i, -v) };
        let p = self.pair_index(a, b);
        self.data[p * self.dim + k] = v;
    }

    /// Stored values, pair-major.
    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    /// Nonzero stored entries `(i, j, k, μ_ij^k)` with `i < j`.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, usize, C<T>)> + '_ {
        let n = self.dim;
        self.pairs().enumerate().flat_map(move |(p, (i, j))| {
            (0..n).filter_map(move |k| {
                let v = self.data[p * n + k];
                (v != czero()).then_some((i, j, k, v))
            })
        })
    }

    /// `μ(e_i, e_j)` as a column vector.
    pub fn image(&self, i: usize, j: usize) -> CVector<T> {
        CVector::from_fn(self.dim, |k, _| self.get(i, j, k))
    }

    /// `μ(x, y)` for coordinate vectors `x`, `y`.
    pub fn apply(&self, x: &CVector<T>, y: &CVector<T>) -> CVector<T> {
        let n = self.dim;
        let mut out = CVector::zeros(n);
        for (p, (i, j)) in self.pairs().enumerate() {
            let w = x[i] * y[j] - x[j] * y[i];
            if w == czero() {
                continue;
            }
            for k in 0..n {
                out[k] += w * self.data[p * n + k];
            }
        }
        out
    }

    /// `μ(v, e_l)` for a coordinate vector `v`.
    pub fn apply_basis_right(&self, v: &CVector<T>, l: usize) -> CVector<T> {
        let n = self.dim;
        let mut out = CVector::zeros(n);
        for m in 0..n {
            if v[m] == czero() || m == l {
                continue;
            }
            for k in 0..n {
                out[k] += v[m] * self.get(m, l, k);
            }
        }
        out
    }

    /// The `n × P` matrix whose columns are `μ(e_i, e_j)`, `i < j`.
    pub fn bracket_matrix(&self) -> CMatrix<T> {
        let n = self.dim;
        CMatrix::from_fn(n, self.num_pairs(), |k, p| self.data[p * n + k])
    }

    /// Inverse of [`BracketTensor::bracket_matrix`].
    pub fn from_bracket_matrix(dim: usize, m: &CMatrix<T>) -> Result<Self> {
        if m.nrows() != dim || m.ncols() != pair_count(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: m.nrows(),
            });
        }
        let mut mu = Self::zeros(dim);
        for p in 0..m.ncols() {
            for k in 0..dim {
                mu.data[p * dim + k] = m[(k, p)];
            }
        }
        Ok(mu)
    }

    pub fn scale(&self, c: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| *v * c).collect(),
        }
    }

    pub fn scale_real(&self, c: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: C<T>, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| *a + c * *b)
                .collect(),
        })
    }

    pub fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// `‖μ‖² = Σ_{i<j,k} |μ_ij^k|²`.
    pub fn norm_sq(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| acc + v.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, v| acc.max(modulus(*v)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == czero())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// `μ/‖μ‖`; fails on the zero bracket.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == T::zero() {
            return Err(Error::ZeroBracket);
        }
        Ok(self.scale_real(T::one() / n))
    }

    /// Interleaved `(re, im)` real coordinates, for the ODE integrator.
    pub fn to_real_vector(&self) -> DVector<T> {
        DVector::from_iterator(
            2 * self.data.len(),
            self.data.iter().flat_map(|v| [v.re, v.im]),
        )
    }

    pub fn from_real_vector(dim: usize, v: &DVector<T>) -> Result<Self> {
        let len = pair_count(dim) * dim;
        if v.len() != 2 * len {
            return Err(Error::DimensionMismatch {
                expected: 2 * len,
                found: v.len(),
            });
        }
        Ok(Self {
            dim,
            data: (0..len).map(|i| C::new(v[2 * i], v[2 * i + 1])).collect(),
        })
    }

    /// Maximal Jacobi residual `|μ(μ(e_i,e_j),e_l) + cyclic|` over `i < j < l`
    /// with the triple where it is attained.
    pub fn jacobi_residual(&self) -> (T, (usize, usize, usize)) {
        let n = self.dim;
        let mut worst = (T::zero(), (0, 0, 0));
        for i in 0..n {
            for j in i + 1..n {
                let ij = self.image(i, j);
                for l in j + 1..n {
                    let jl = self.image(j, l);
                    let li = self.image(l, i);
                    let r = self.apply_basis_right(&ij, l)
                        + self.apply_basis_right(&jl, i)
                        + self.apply_basis_right(&li, j);
                    let mag = r.iter().fold(T::zero(), |acc, x| acc.max(modulus(*x)));
                    if mag > worst.0 {
                        worst = (mag, (i, j, l));
                    }
                }
            }
        }
        worst
    }

    /// Maximal `|μ(μ(e_i,e_j), e_l)|`; zero exactly when μ is 2-step nilpotent
    /// (or abelian).
    pub fn two_step_residual(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for (i, j) in self.pairs() {
            let ij = self.image(i, j);
            for l in 0..n {
                let r = self.apply_basis_right(&ij, l);
                worst = r.iter().fold(worst, |acc, x| acc.max(modulus(*x)));
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn heis() -> BracketTensor<f64> {
        BracketTensor::from_entries(3, [(0, 1, 2, cplx::<f64>(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn antisymmetry_is_structural() {
        let mu = heis();
        assert_eq!(mu.get(0, 1, 2), cplx::<f64>(1.0, 0.0));
        assert_eq!(mu.get(1, 0, 2), cplx::<f64>(-1.0, 0.0));
        assert_eq!(mu.get(1, 1, 2), czero());
    }

    #[test]
    fn set_with_reversed_pair_stores_negative() {
        let mut mu = BracketTensor::<f64>::zeros(3);
        mu.set(1, 0, 2, cplx::<f64>(2.0, 1.0));
        assert_eq!(mu.get(0, 1, 2), cplx::<f64>(-2.0, -1.0));
    }

    #[test]
    fn pair_index_is_dense() {
        let mu = BracketTensor::<f64>::zeros(5);
        let idx: Vec<usize> = mu.pairs().map(|(i, j)| mu.pair_index(i, j)).collect();
        assert_eq!(idx, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn bad_entries_rejected() {
        assert!(BracketTensor::<f64>::from_entries(3, [(1, 1, 2, cplx::<f64>(1.0, 0.0))]).is_err());
        assert!(BracketTensor::<f64>::from_entries(3, [(0, 3, 2, cplx::<f64>(1.0, 0.0))]).is_err());
    }

    #[test]
    fn apply_matches_components() {
        let mu = heis();
        let mut x = CVector::zeros(3);
        let mut y = CVector::zeros(3);
        x[0] = cplx::<f64>(2.0, 0.0);
        y[1] = cplx::<f64>(0.0, 1.0);
        let z = mu.apply(&x, &y);
        assert_eq!(z[2], cplx::<f64>(0.0, 2.0));
    }

    #[test]
    fn non_nilpotent_bracket_detected() {
        // [Z1, Z2] = Z2
        let mu = BracketTensor::<f64>::from_entries(2, [(0, 1, 1, cplx::<f64>(1.0, 0.0))]).unwrap();
        assert_eq!(mu.jacobi_residual().0, 0.0);
        assert!(mu.two_step_residual() > 0.5);
    }

    #[test]
    fn jacobi_violation_located() {
        // [e1,e2]=e3, [e2,e3]=e1 and nothing else violates Jacobi at (1,2,3)
        let mu = BracketTensor::<f64>::from_entries(
            3,
            [(0, 1, 2, cplx::<f64>(1.0, 0.0)), (1, 2, 0, cplx::<f64>(1.0, 0.0)), (0, 2, 0, cplx::<f64>(1.0, 0.0))],
        )
        .unwrap();
        let (r, triple) = mu.jacobi_residual();
        assert!(r > 0.1);
        assert_eq!(triple, (0, 1, 2));
    }

    #[test]
    fn real_vector_round_trip() {
        let mu = BracketTensor::<f64>::from_entries(4, [(0, 1, 3, cplx::<f64>(1.5, -0.25))]).unwrap();
        let v = mu.to_real_vector();
        assert_eq!(BracketTensor::from_real_vector(4, &v).unwrap(), mu);
    }
}
