//! Small dense complex linear-algebra helpers built on nalgebra.

use nalgebra::{Cholesky, ComplexField, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{cone, czero, lit, rel_tol, to_f64, CMatrix, Real, C};

/// Singular values at or below this fraction of the largest one count as zero.
pub const RANK_REL_TOL: f64 = 1e-10;

/// `tr(A Bᴴ)`.
pub fn frobenius_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> C<T> {
    a.iter()
        .zip(b.iter())
        .fold(czero(), |acc, (x, y)| acc + *x * y.conj())
}

pub fn frobenius_norm<T: Real>(a: &CMatrix<T>) -> T {
    a.iter()
        .fold(T::zero(), |acc, x| acc + x.norm_sqr())
        .sqrt()
}

pub fn max_abs<T: Real>(a: &CMatrix<T>) -> T {
    a.iter().fold(T::zero(), |acc, x| acc.max(modulus(*x)))
}

/// `(A + Aᴴ)/2`.
pub fn hermitian_part<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    (a + a.adjoint()).map(|x| x * lit::<T>(0.5))
}

/// Largest entry of `A − Aᴴ` in modulus.
pub fn hermitian_defect<T: Real>(a: &CMatrix<T>) -> T {
    max_abs(&(a - a.adjoint()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Real>(a: &CMatrix<T>) -> Vec<T> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut vals: Vec<T> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    vals
}

/// Orthonormal bases of the kernel of a linear map and of its orthogonal
/// complement in the domain, obtained from a full singular value decomposition.
#[derive(Debug, Clone)]
pub struct KernelSplit<T: Real> {
    /// Columns span the (numerical) kernel.
    pub kernel: CMatrix<T>,
    /// Columns span the orthogonal complement of the kernel.
    pub complement: CMatrix<T>,
    pub largest_singular_value: T,
}

/// Numerical kernel of `a` (as a map on column vectors) with the crate-wide
/// relative threshold [`RANK_REL_TOL`].
pub fn kernel_split<T: Real>(a: &CMatrix<T>) -> KernelSplit<T> {
    kernel_split_with(a, rel_tol(RANK_REL_TOL))
}

pub fn kernel_split_with<T: Real>(a: &CMatrix<T>, rel_tol: T) -> KernelSplit<T> {
    let n = a.ncols();
    if n == 0 {
        return KernelSplit {
            kernel: CMatrix::zeros(0, 0),
            complement: CMatrix::zeros(0, 0),
            largest_singular_value: T::zero(),
        };
    }
    // A thin SVD of a wide matrix would not expose the full right-singular
    // basis, so pad with zero rows.
    let rows = a.nrows().max(n);
    let mut padded = CMatrix::<T>::zeros(rows, n);
    padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().fold(T::zero(), |acc, s| acc.max(*s));
    let threshold = smax * rel_tol;
    let mut kernel_cols = Vec::new();
    let mut range_cols = Vec::new();
    for (idx, s) in sigma.iter().enumerate() {
        let v = v_t.row(idx).adjoint();
        if smax == T::zero() || *s <= threshold {
            kernel_cols.push(v);
        } else {
            range_cols.push(v);
        }
    }
    KernelSplit {
        kernel: columns_to_matrix(n, &kernel_cols),
        complement: columns_to_matrix(n, &range_cols),
        largest_singular_value: smax,
    }
}

fn columns_to_matrix<T: Real>(n: usize, cols: &[nalgebra::DVector<C<T>>]) -> CMatrix<T> {
    let mut m = CMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Ratio of the largest to smallest singular value.
pub fn condition_number<T: Real>(a: &CMatrix<T>) -> T {
    let sv = a.clone().singular_values();
    let smax = sv.iter().fold(T::zero(), |acc, s| acc.max(*s));
    let smin = sv.iter().fold(smax, |acc, s| acc.min(*s));
    if smin == T::zero() {
        T::max_value().unwrap_or(smax)
    } else {
        smax / smin
    }
}

/// Inverse of a square matrix; rejects condition numbers above `max_condition`.
pub fn checked_inverse<T: Real>(a: &CMatrix<T>, max_condition: T) -> Result<CMatrix<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    let cond = condition_number(a);
    if !(cond <= max_condition) {
        return Err(Error::SingularMatrix {
            condition: to_f64(cond),
        });
    }
    a.clone().try_inverse().ok_or(Error::SingularMatrix {
        condition: to_f64(cond),
    })
}

/// Distance between two subspaces given by orthonormal column bases: the sine
/// of the largest principal angle (1 when the dimensions differ).
pub fn subspace_distance<T: Real>(q1: &CMatrix<T>, q2: &CMatrix<T>) -> T {
    if q1.ncols() != q2.ncols() {
        return T::one();
    }
    if q1.ncols() == 0 {
        return T::zero();
    }
    let p1 = q1 * q1.adjoint();
    let p2 = q2 * q2.adjoint();
    let diff = p1 - p2;
    diff.singular_values()
        .iter()
        .fold(T::zero(), |acc, s| acc.max(*s))
}

/// Frame change `C` with `Cᴴ h C = Id`, via the Cholesky factor of `h`.
pub fn unitarizing_frame_cholesky<T: Real>(h: &CMatrix<T>) -> Result<CMatrix<T>> {
    check_positive_definite(h)?;
    let chol = Cholesky::new(hermitian_part(h)).ok_or(Error::NotPositiveDefinite { ratio: 0.0 })?;
    // h = L Lᴴ  ⇒  C = L^{-H}
    let l = chol.l();
    let l_inv = l
        .solve_lower_triangular(&CMatrix::identity(h.nrows(), h.nrows()))
        .ok_or(Error::NotPositiveDefinite { ratio: 0.0 })?;
    Ok(l_inv.adjoint())
}

/// Frame change `C = V Λ^{-1/2}` from the eigendecomposition `h = V Λ Vᴴ`.
pub fn unitarizing_frame_eigen<T: Real>(h: &CMatrix<T>) -> Result<CMatrix<T>> {
    check_positive_definite(h)?;
    let eig = SymmetricEigen::new(hermitian_part(h));
    let mut c = eig.eigenvectors.clone();
    for (j, lam) in eig.eigenvalues.iter().enumerate() {
        let s = T::one() / lam.sqrt();
        c.column_mut(j).scale_mut(s);
    }
    Ok(c)
}

/// Smallest-to-largest eigenvalue ratio must exceed `1e-12`.
pub fn check_positive_definite<T: Real>(h: &CMatrix<T>) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: h.ncols(),
        });
    }
    if h.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let eig = hermitian_eigenvalues(h);
    let (Some(&lo), Some(&hi)) = (eig.first(), eig.last()) else {
        return Ok(());
    };
    let ratio = if hi > T::zero() { lo / hi } else { -T::one() };
    if hi <= T::zero() || ratio <= lit(1e-12) {
        return Err(Error::NotPositiveDefinite {
            ratio: to_f64(ratio),
        });
    }
    Ok(())
}

/// Orthogonal projector `Q Qᴴ` onto the span of orthonormal columns.
pub fn projector<T: Real>(q: &CMatrix<T>) -> CMatrix<T> {
    if q.ncols() == 0 {
        return CMatrix::zeros(q.nrows(), q.nrows());
    }
    q * q.adjoint()
}

/// Matrix exponential.
pub fn expm<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    a.clone().exp()
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::from_diagonal_element(n, n, cone())
}

/// Real-diagonal complex matrix.
pub fn real_diagonal<T: Real>(d: &[T]) -> CMatrix<T> {
    let n = d.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, x) in d.iter().enumerate() {
        m[(i, i)] = C::new(*x, T::zero());
    }
    m
}

/// Absolute value helper usable on the modulus of a complex number.
pub fn modulus<T: Real>(z: C<T>) -> T {
    ComplexField::modulus(z)
}
