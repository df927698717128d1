//! The curvature flow on Hermitian metrics, `h' = −K(h)`, for a fixed bracket.

use nalgebra::DVector;

use crate::algebra::descriptor::AlgebraDescriptor;
use crate::curvature::k_from_metric;
use crate::error::{Error, Result};
use crate::flow::bracket_flow::Termination;
use crate::flow::integrator::{integrate, Control, IntegratorConfig};
use crate::linalg::{check_positive_definite, hermitian_part};
use crate::scalar::{cplx, CMatrix, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample<T: Real> {
    pub t: T,
    pub h: CMatrix<T>,
    /// Eigenvalues of the curvature operator of `h` relative to `h`.
    pub spectrum: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricTrace<T: Real> {
    pub samples: Vec<MetricSample<T>>,
    pub termination: Termination,
}

impl<T: Real> MetricTrace<T> {
    pub fn last(&self) -> &MetricSample<T> {
        self.samples.last().expect("traces always hold the initial sample")
    }
}

fn matrix_to_real<T: Real>(h: &CMatrix<T>) -> DVector<T> {
    DVector::from_iterator(2 * h.len(), h.iter().flat_map(|z| [z.re, z.im]))
}

fn real_to_matrix<T: Real>(n: usize, v: &DVector<T>) -> CMatrix<T> {
    CMatrix::from_iterator(n, n, (0..n * n).map(|i| cplx(v[2 * i], v[2 * i + 1])))
}

/// Integrates `h' = −K(h)` starting from the positive definite `h0`.
/// `h` is re-Hermitized after every accepted step.
pub fn integrate_metric_flow<T: Real>(
    desc: &AlgebraDescriptor<T>,
    h0: &CMatrix<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<MetricTrace<T>> {
    let n = desc.dim();
    if h0.nrows() != n || h0.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: h0.nrows() });
    }
    let h0 = hermitian_part(h0);
    check_positive_definite(&h0)?;
    let mu = &desc.bracket;
    let mut samples = Vec::new();
    let outcome = integrate(
        |_, y: &DVector<T>| {
            let h = real_to_matrix(n, y);
            Ok(-matrix_to_real(&k_from_metric(mu, &h)?.tensor))
        },
        T::zero(),
        matrix_to_real(&h0),
        cfg,
        |t, y| {
            let h = hermitian_part(&real_to_matrix(n, y));
            y.copy_from(&matrix_to_real(&h));
            let k = k_from_metric(mu, &h)?;
            if cfg.wants_sample(t) {
                samples.push(MetricSample { t, h, spectrum: k.operator_spectrum() });
            }
            Ok(Control::Continue)
        },
    )?;
    if samples.last().map(|s: &MetricSample<T>| s.t) != Some(outcome.t) {
        let h = real_to_matrix(n, &outcome.y);
        let spectrum = k_from_metric(mu, &h)?.operator_spectrum();
        samples.push(MetricSample { t: outcome.t, h, spectrum });
    }
    Ok(MetricTrace { samples, termination: Termination::TEnd })
}
