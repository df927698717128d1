//! Recovering the unnormalized norm from the normalized flow.
//!
//! With `μ(t) = √y(t)·ν(τ(t))` one has `d ln y/dτ = −4‖K_ν‖²` and
//! `dt/dτ = 1/y`. The augmented state `(ν, ln y, t)` is integrated in τ until
//! `t` reaches the requested time.

use nalgebra::DVector;

use crate::algebra::bracket::BracketTensor;
use crate::algebra::descriptor::AlgebraDescriptor;
use crate::curvature::k_from_bracket;
use crate::error::{Error, Result};
use crate::flow::bracket_flow::check_drift;
use crate::flow::diagnostics::{fixed_point_residual, normalized_velocity_unchecked};
use crate::flow::integrator::{dopri_step, integrate, Control, IntegratorConfig};
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct CompanionSample<T: Real> {
    /// Normalized-flow time.
    pub tau: T,
    /// Unnormalized time.
    pub t: T,
    /// `‖μ(t)‖²`.
    pub norm_sq: T,
    pub f_value: T,
    /// Normalized bracket `ν(τ)`.
    pub bracket: BracketTensor<T>,
}

impl<T: Real> CompanionSample<T> {
    /// `t·‖μ(t)‖²`.
    pub fn scaled_norm(&self) -> T {
        self.t * self.norm_sq
    }

    /// `1/(4F)`, the limit of `t·‖μ(t)‖²` once ν has settled.
    pub fn limit_estimate(&self) -> T {
        T::one() / (lit::<T>(4.0) * self.f_value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompanionTrace<T: Real> {
    pub samples: Vec<CompanionSample<T>>,
}

impl<T: Real> CompanionTrace<T> {
    pub fn last(&self) -> &CompanionSample<T> {
        self.samples.last().expect("companion traces are never empty")
    }
}

/// Integrates the augmented system until unnormalized time `t_target`.
///
/// `cfg.t_end` bounds the normalized time τ; reaching it first yields
/// `NoConvergence`. The last sample lands on `t_target` to within the
/// integrator tolerance.
pub fn integrate_norm_companion<T: Real>(
    desc: &AlgebraDescriptor<T>,
    t_target: T,
    cfg: &IntegratorConfig<T>,
) -> Result<CompanionTrace<T>> {
    desc.require_two_step()?;
    if !(t_target > T::zero()) {
        return Err(Error::BadParameter("target time must be positive".into()));
    }
    let n = desc.dim();
    let y0 = desc.bracket.norm_sq();
    let nu0 = desc.bracket.normalized()?;
    let m = nu0.to_real_vector().len();

    let mut state0 = DVector::zeros(m + 2);
    state0.rows_mut(0, m).copy_from(&nu0.to_real_vector());
    state0[m] = y0.ln();

    let mut rhs = move |_: T, s: &DVector<T>| -> Result<DVector<T>> {
        let nu = BracketTensor::from_real_vector(n, &s.rows(0, m).into_owned())?;
        let k_sq = k_from_bracket(&nu).norm_sq() / (nu.norm_sq() * nu.norm_sq());
        let mut out = DVector::zeros(m + 2);
        out.rows_mut(0, m).copy_from(&normalized_velocity_unchecked(&nu).to_real_vector());
        out[m] = -lit::<T>(4.0) * k_sq;
        out[m + 1] = (-s[m]).exp();
        Ok(out)
    };

    let sample = |tau: T, s: &DVector<T>| -> Result<CompanionSample<T>> {
        let nu = BracketTensor::from_real_vector(n, &s.rows(0, m).into_owned())?;
        Ok(CompanionSample {
            tau,
            t: s[m + 1],
            norm_sq: s[m].exp(),
            f_value: k_from_bracket(&nu).norm_sq(),
            bracket: nu,
        })
    };

    let mut samples = Vec::new();
    let mut previous: Option<(T, DVector<T>)> = None;
    let mut crossed = false;
    let outcome = integrate(
        &mut rhs,
        T::zero(),
        state0,
        cfg,
        |tau, s| {
            let raw = BracketTensor::from_real_vector(n, &s.rows(0, m).into_owned())?;
            check_drift(tau, &raw)?;
            let nu = desc.project_onto_structure(&raw)?.normalized()?;
            s.rows_mut(0, m).copy_from(&nu.to_real_vector());
            if s[m + 1] >= t_target {
                crossed = true;
                return Ok(Control::Stop);
            }
            if cfg.wants_sample(tau) {
                samples.push(sample(tau, s)?);
            }
            previous = Some((tau, s.clone()));
            Ok(Control::Continue)
        },
    )?;
    if !crossed {
        let (tau, s) = previous.expect("at least the initial state was observed");
        let nu = BracketTensor::from_real_vector(n, &s.rows(0, m).into_owned())?;
        return Err(Error::NoConvergence {
            t: to_f64(tau),
            residual: to_f64(fixed_point_residual(&nu)),
        });
    }
    let (tau0, s0) = previous.expect("crossing happens after an accepted step");
    let k0 = rhs(tau0, &s0)?;
    let full = outcome.t - tau0;

    // bisection on the step length so that t lands on the target
    let (mut lo, mut hi) = (T::zero(), full);
    let mut best = outcome.y.clone();
    let mut best_step = full;
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        let (s_mid, _) = dopri_step(&mut rhs, tau0, &s0, &k0, mid)?;
        let gap = s_mid[m + 1] - t_target;
        best = s_mid;
        best_step = mid;
        if gap.abs() <= lit::<T>(1e-13) * t_target || hi - lo <= lit::<T>(1e-15) * full {
            break;
        }
        if gap > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let nu = BracketTensor::from_real_vector(n, &best.rows(0, m).into_owned())?;
    let nu = desc.project_onto_structure(&nu)?.normalized()?;
    best.rows_mut(0, m).copy_from(&nu.to_real_vector());
    samples.push(sample(tau0 + best_step, &best)?);
    Ok(CompanionTrace { samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::scalar::creal;

    #[test]
    fn heisenberg_norm_decays_like_inverse_time() {
        let d = catalog::heisenberg3(creal::<f64>(1.0)).unwrap();
        let cfg = IntegratorConfig::default().with_t_end(100.0);
        let trace = integrate_norm_companion(&d, 3.0, &cfg).unwrap();
        let last = trace.last();
        assert!((last.t - 3.0).abs() < 1e-9);
        assert!((last.norm_sq - 0.25).abs() < 1e-8);
        assert!((last.limit_estimate() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn short_horizon_reports_no_convergence() {
        let d = catalog::heisenberg3(creal::<f64>(1.0)).unwrap();
        let cfg = IntegratorConfig::default().with_t_end(0.5);
        assert!(matches!(
            integrate_norm_companion(&d, 100.0, &cfg),
            Err(Error::NoConvergence { .. })
        ));
    }
}
