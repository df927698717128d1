//! Sweeps of the normalized flow over random starting points in a
//! `GL(z)`-orbit, compared through fingerprints.

use rayon::prelude::*;

use crate::algebra::action::act;
use crate::algebra::descriptor::{validate, AlgebraDescriptor};
use crate::algebra::random::{center_endomorphism, complex_matrix, seeded_rng};
use crate::error::Result;
use crate::flow::{integrate_normalized_flow, IntegratorConfig, Termination};
use crate::linalg::expm;
use crate::soliton::fingerprint::{compare, fingerprint, Fingerprint};
use crate::soliton::solve::{soliton_solve, SolitonReport};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// `exp(E)` with `E ∈ gl(z)` acting on the center block only.
    Center,
    /// `exp(E)` with arbitrary `E ∈ gl(n)`.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeLimit<T: Real> {
    pub seed: u64,
    pub termination: Termination,
    pub residual: T,
    pub fingerprint: Fingerprint<T>,
    pub soliton: SolitonReport<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport<T: Real> {
    pub kind: TransformKind,
    pub limits: Vec<ProbeLimit<T>>,
    /// Largest fingerprint difference from the first limit.
    pub max_deviation: T,
    /// Whether all fingerprints share discrete fields (dimensions).
    pub dims_agree: bool,
}

impl<T: Real> ProbeReport<T> {
    /// Uniqueness is asserted only for center-block transformations.
    pub fn unique_within(&self, tol: T) -> Option<bool> {
        match self.kind {
            TransformKind::Center => Some(self.dims_agree && self.max_deviation <= tol),
            TransformKind::Full => None,
        }
    }
}

/// Runs the normalized flow from `exp(E)·μ/‖exp(E)·μ‖` for each seed.
pub fn uniqueness_probe<T: Real>(
    desc: &AlgebraDescriptor<T>,
    seeds: &[u64],
    kind: TransformKind,
    scale: T,
    cfg: &IntegratorConfig<T>,
) -> Result<ProbeReport<T>> {
    desc.require_two_step()?;
    let limits = seeds
        .par_iter()
        .map(|&seed| {
            let mut rng = seeded_rng(seed);
            let e = match kind {
                TransformKind::Center => center_endomorphism(desc, scale, &mut rng),
                TransformKind::Full => complex_matrix::<T, _>(desc.dim(), desc.dim(), &mut rng)
                    .map(|z| z.scale(scale)),
            };
            let start = act(&expm(&e), &desc.bracket)?.normalized()?;
            let trace = integrate_normalized_flow(&validate(start)?, cfg)?;
            let last = trace.last();
            Ok(ProbeLimit {
                seed,
                termination: trace.termination,
                residual: last.diag.residual,
                fingerprint: fingerprint(&last.bracket)?,
                soliton: soliton_solve(&last.bracket)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (max_deviation, dims_agree) = match limits.first() {
        None => (T::zero(), true),
        Some(first) => limits.iter().fold((T::zero(), true), |(dev, ok), l| {
            let diff = compare(&first.fingerprint, &l.fingerprint);
            (
                dev.max(diff.max_numeric()),
                ok && diff.center_dim_equal && diff.derivation_dim_equal,
            )
        }),
    };
    Ok(ProbeReport { kind, limits, max_deviation, dims_agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::scalar::creal;

    #[test]
    fn heisenberg_center_orbit_is_unique() {
        let d = catalog::heisenberg3(creal::<f64>(1.0)).unwrap();
        let cfg = IntegratorConfig::default().with_t_end(100.0);
        let rep = uniqueness_probe(&d, &[1, 2, 3], TransformKind::Center, 0.5, &cfg).unwrap();
        assert_eq!(rep.limits.len(), 3);
        assert_eq!(rep.unique_within(1e-8), Some(true));
    }
}
