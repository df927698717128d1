//! Chern-connection quantities of a left-invariant Hermitian metric on a
//! complex Lie group, evaluated in a unitary frame of `g ⊗ ℂ = g^{1,0} ⊕ g^{0,1}`.
//!
//! Brackets between `Z_i` and `Z̄_j` vanish because the complex structure is
//! bi-invariant. The component formulas below are written out in full anyway;
//! every term carrying a mixed bracket then evaluates to zero, which is what
//! makes `S ≡ 0` and `T_ip^k = −μ_ip^k`.

use crate::algebra::bracket::BracketTensor;
use crate::scalar::{czero, lit, CMatrix, Real, C};

/// A vector of the complexified frame: `Hol(i) = Z_i`, `Anti(i) = Z̄_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameIndex {
    Hol(usize),
    Anti(usize),
}

use FrameIndex::{Anti, Hol};

/// Structure constants of the complexified algebra.
#[derive(Debug, Clone, Copy)]
pub struct ComplexifiedBracket<'a, T: Real> {
    mu: &'a BracketTensor<T>,
}

impl<'a, T: Real> ComplexifiedBracket<'a, T> {
    pub fn new(mu: &'a BracketTensor<T>) -> Self {
        Self { mu }
    }

    /// Component of `[a, b]` along `c`.
    pub fn component(&self, a: FrameIndex, b: FrameIndex, c: FrameIndex) -> C<T> {
        match (a, b, c) {
            (Hol(i), Hol(j), Hol(k)) => self.mu.get(i, j, k),
            (Anti(i), Anti(j), Anti(k)) => self.mu.get(i, j, k).conj(),
            _ => czero(),
        }
    }
}

/// Christoffel symbol `Γ_lr^j = −μ_{l j̄}^{r̄}`.
pub fn christoffel<T: Real>(mu: &BracketTensor<T>, l: usize, r: usize, j: usize) -> C<T> {
    -ComplexifiedBracket::new(mu).component(Hol(l), Anti(j), Anti(r))
}

/// Torsion components `T_ip^k`, stored for all ordered pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionTensor<T: Real> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> TorsionTensor<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, p: usize, k: usize) -> C<T> {
        self.data[(i * self.dim + p) * self.dim + k]
    }
}

/// `T_ip^k = −μ_{i k̄}^{p̄} + μ_{p k̄}^{ī} − μ_ip^k`.
pub fn torsion<T: Real>(mu: &BracketTensor<T>) -> TorsionTensor<T> {
    let n = mu.dim();
    let cb = ComplexifiedBracket::new(mu);
    let mut data = vec![czero(); n * n * n];
    for i in 0..n {
        for p in 0..n {
            for k in 0..n {
                data[(i * n + p) * n + k] = -cb.component(Hol(i), Anti(k), Anti(p))
                    + cb.component(Hol(p), Anti(k), Anti(i))
                    - cb.component(Hol(i), Hol(p), Hol(k));
            }
        }
    }
    TorsionTensor { dim: n, data }
}

/// `Q̃` from the torsion in a unitary frame, `2 Q̃_ij̄ = Σ_{k<m} T_{km j̄} T_{k̄ m̄ i}`.
///
/// Returned in operator layout: entry `(j, i)` holds `Q̃_ij̄`.
pub fn q_from_torsion<T: Real>(t: &TorsionTensor<T>) -> CMatrix<T> {
    let n = t.dim();
    let half = lit::<T>(0.5);
    let mut q = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = czero::<T>();
            for k in 0..n {
                for m in k + 1..n {
                    acc += t.get(k, m, j) * t.get(k, m, i).conj();
                }
            }
            q[(j, i)] = acc.scale(half);
        }
    }
    q
}

/// Second Chern–Ricci tensor
/// `S_ij̄ = −μ_{k̄i}^r μ_{kj̄}^{r̄} + μ_{kr̄}^{ī} μ_{k̄r}^j + μ_{kk̄}^r μ_{rj̄}^{ī} − μ_{kk̄}^{r̄} μ_{r̄i}^j`,
/// in operator layout. Vanishes identically on complex Lie groups.
pub fn s_tensor<T: Real>(mu: &BracketTensor<T>) -> CMatrix<T> {
    let n = mu.dim();
    let cb = ComplexifiedBracket::new(mu);
    let mut s = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = czero::<T>();
            for k in 0..n {
                for r in 0..n {
                    acc -= cb.component(Anti(k), Hol(i), Hol(r)) * cb.component(Hol(k), Anti(j), Anti(r));
                    acc += cb.component(Hol(k), Anti(r), Anti(i)) * cb.component(Anti(k), Hol(r), Hol(j));
                    acc += cb.component(Hol(k), Anti(k), Hol(r)) * cb.component(Hol(r), Anti(j), Anti(i));
                    acc -= cb.component(Hol(k), Anti(k), Anti(r)) * cb.component(Anti(r), Hol(i), Hol(j));
                }
            }
            s[(j, i)] = acc;
        }
    }
    s
}
