//! Seeded generators for random brackets, unitaries and Hermitian matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::action::act;
use crate::algebra::bracket::{pair_count, BracketTensor};
use crate::algebra::descriptor::AlgebraDescriptor;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, modulus};
use crate::scalar::{lit, CMatrix, Real, C};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (`E|z|² = 1`).
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    C::new(lit(re * s), lit(im * s))
}

pub fn complex_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    let g = complex_matrix::<T, R>(n, n, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let m = modulus(d);
        if m > T::zero() {
            let phase = d / C::new(m, T::zero());
            for x in q.column_mut(j).iter_mut() {
                *x *= phase;
            }
        }
    }
    q
}

pub fn hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix<T> {
    hermitian_part(&complex_matrix::<T, R>(n, n, rng))
}

/// Random 2-step bracket with `generators` generator directions mapped into
/// `center` central directions, in coordinate-aligned form.
pub fn two_step_aligned<T: Real, R: Rng + ?Sized>(
    generators: usize,
    center: usize,
    rng: &mut R,
) -> Result<BracketTensor<T>> {
    if center == 0 || generators < 2 || center > pair_count(generators) {
        return Err(Error::BadParameter(format!(
            "no generic 2-step bracket with {generators} generators and {center} central directions"
        )));
    }
    let n = generators + center;
    let mut mu = BracketTensor::zeros(n);
    for i in 0..generators {
        for j in i + 1..generators {
            for k in generators..n {
                mu.set(i, j, k, complex_normal(rng));
            }
        }
    }
    Ok(mu)
}

/// Random non-abelian 2-step bracket of dimension `n ≥ 3`, in a random unitary
/// frame so that neither the center nor its complement is coordinate-aligned.
pub fn two_step<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BracketTensor<T>> {
    let options: Vec<(usize, usize)> = (2..n)
        .map(|p| (p, n - p))
        .filter(|&(p, q)| q >= 1 && q <= pair_count(p))
        .collect();
    if options.is_empty() {
        return Err(Error::BadParameter(format!(
            "no non-abelian 2-step algebra of dimension {n}"
        )));
    }
    let (p, q) = options[rng.random_range(0..options.len())];
    let aligned = two_step_aligned(p, q, rng)?;
    act(&unitary::<T, R>(n, rng), &aligned)
}

/// Random Hermitian endomorphism supported on the center block.
pub fn center_hermitian<T: Real, R: Rng + ?Sized>(
    desc: &AlgebraDescriptor<T>,
    rng: &mut R,
) -> CMatrix<T> {
    let z = &desc.center_basis;
    let h = hermitian::<T, R>(z.ncols(), rng);
    hermitian_part(&(z * h * z.adjoint()))
}

/// Random element of `gl(z)` embedded as `B_z E B_zᴴ`.
pub fn center_endomorphism<T: Real, R: Rng + ?Sized>(
    desc: &AlgebraDescriptor<T>,
    scale: T,
    rng: &mut R,
) -> CMatrix<T> {
    let z = &desc.center_basis;
    let e = complex_matrix::<T, R>(z.ncols(), z.ncols(), rng).map(|x| x.scale(scale));
    z * e * z.adjoint()
}
