//! The bracket flow `μ' = −π(K_μ)μ` and its norm-normalized version.

use nalgebra::DVector;

use crate::algebra::action::pi_action;
use crate::algebra::bracket::BracketTensor;
use crate::algebra::descriptor::AlgebraDescriptor;
use crate::curvature::k_from_bracket;
use crate::error::{Error, Result};
use crate::flow::diagnostics::{normalized_velocity_unchecked, Diagnostics};
use crate::flow::integrator::{integrate, Control, IntegratorConfig, Stop};
use crate::scalar::{creal, lit, rel_tol, to_f64, Real};

/// Mismatch allowed in `d/dt‖μ‖² = −4‖K_μ‖²`, relative to `1 + ‖K_μ‖²`.
pub const DECAY_LAW_TOL: f64 = 1e-9;
/// Relative 2-step residual beyond which an integration aborts.
pub const DRIFT_ABORT: f64 = 1e-6;
/// Allowed deviation from unit norm for normalized-flow inputs.
pub const UNIT_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    TEnd,
    FixedPoint,
    StepFailure,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::TEnd => "t_end",
            Termination::FixedPoint => "fixed_point",
            Termination::StepFailure => "step_failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample<T: Real> {
    pub t: T,
    pub bracket: BracketTensor<T>,
    pub diag: Diagnostics<T>,
}

/// Time-stamped brackets with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace<T: Real> {
    pub samples: Vec<FlowSample<T>>,
    pub termination: Termination,
    pub accepted_steps: usize,
}

impl<T: Real> FlowTrace<T> {
    pub fn last(&self) -> &FlowSample<T> {
        self.samples.last().expect("traces always hold the initial sample")
    }

    /// The final sample if the flow stopped at a fixed point.
    pub fn require_fixed_point(&self) -> Result<&FlowSample<T>> {
        let last = self.last();
        match self.termination {
            Termination::FixedPoint => Ok(last),
            _ => Err(Error::NoConvergence {
                t: to_f64(last.t),
                residual: to_f64(last.diag.residual),
            }),
        }
    }
}

/// `−π(K_μ)μ`. The bracket must be 2-step nilpotent.
pub fn bracket_velocity<T: Real>(mu: &BracketTensor<T>) -> Result<BracketTensor<T>> {
    if mu.two_step_residual() > rel_tol::<T>(1e-10) * mu.norm_sq() {
        return Err(Error::NotTwoStep);
    }
    Ok(bracket_velocity_unchecked(mu))
}

fn bracket_velocity_unchecked<T: Real>(mu: &BracketTensor<T>) -> BracketTensor<T> {
    let k = k_from_bracket(mu);
    pi_action(&k.matrix, mu)
        .expect("square by construction")
        .scale(creal(-T::one()))
}

/// `r_ν = 2‖K_ν‖²`.
pub fn normalization_rate<T: Real>(nu: &BracketTensor<T>) -> T {
    let k = k_from_bracket(nu).norm_sq();
    k + k
}

/// `−π(K_ν + r_ν Id)ν` for a unit-norm ν.
pub fn normalized_velocity<T: Real>(nu: &BracketTensor<T>) -> Result<BracketTensor<T>> {
    let norm = nu.norm();
    if (norm - T::one()).abs() > lit(UNIT_NORM_TOL) {
        return Err(Error::NotUnitNorm { norm: to_f64(norm) });
    }
    Ok(normalized_velocity_unchecked(nu))
}

/// Integrates the unnormalized bracket flow from the descriptor's bracket.
///
/// Every accepted step checks the decay law `d/dt‖μ‖² = −4‖K_μ‖²` against
/// the integrator's derivative and aborts on 2-step drift.
pub fn integrate_bracket_flow<T: Real>(
    desc: &AlgebraDescriptor<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<FlowTrace<T>> {
    desc.require_two_step()?;
    let n = desc.dim();
    let complement = desc.complement_basis.clone();
    let mut samples: Vec<FlowSample<T>> = Vec::new();
    let outcome = integrate(
        |_, y: &DVector<T>| {
            let mu = BracketTensor::from_real_vector(n, y)?;
            Ok(bracket_velocity_unchecked(&mu).to_real_vector())
        },
        T::zero(),
        desc.bracket.to_real_vector(),
        cfg,
        |t, y| {
            let mu = BracketTensor::from_real_vector(n, y)?;
            let diag = Diagnostics::compute(&mu, Some(&complement));
            check_decay_law(t, &mu, &diag)?;
            if diag.structure_residual > rel_tol(DRIFT_ABORT) {
                return Err(Error::StructureDrift {
                    t: to_f64(t),
                    residual: to_f64(diag.structure_residual),
                });
            }
            if cfg.wants_sample(t) {
                samples.push(FlowSample { t, bracket: mu, diag });
            }
            Ok(Control::Continue)
        },
    )?;
    push_final(&mut samples, outcome.t, n, &outcome.y, Some(&complement))?;
    Ok(FlowTrace {
        samples,
        termination: Termination::TEnd,
        accepted_steps: outcome.accepted,
    })
}

/// Aborts when the 2-step residual, relative to `‖μ‖²`, exceeds [`DRIFT_ABORT`].
pub(crate) fn check_drift<T: Real>(t: T, mu: &BracketTensor<T>) -> Result<()> {
    let norm_sq = mu.norm_sq();
    if norm_sq > T::zero() {
        let drift = mu.two_step_residual() / norm_sq;
        if drift > rel_tol(DRIFT_ABORT) {
            return Err(Error::StructureDrift { t: to_f64(t), residual: to_f64(drift) });
        }
    }
    Ok(())
}

fn check_decay_law<T: Real>(t: T, mu: &BracketTensor<T>, diag: &Diagnostics<T>) -> Result<()> {
    let v = bracket_velocity_unchecked(mu);
    let slope = crate::algebra::action::bracket_inner(&v, mu)?.re * lit(2.0);
    let k_sq = diag.f_value * diag.norm_sq * diag.norm_sq;
    let mismatch = (slope + k_sq * lit(4.0)).abs();
    if mismatch > rel_tol::<T>(DECAY_LAW_TOL) * (T::one() + k_sq) {
        return Err(Error::DecayLawViolation {
            t: to_f64(t),
            mismatch: to_f64(mismatch),
        });
    }
    Ok(())
}

fn push_final<T: Real>(
    samples: &mut Vec<FlowSample<T>>,
    t: T,
    n: usize,
    y: &DVector<T>,
    complement: Option<&crate::scalar::CMatrix<T>>,
) -> Result<()> {
    if samples.last().map(|s| s.t) != Some(t) {
        let mu = BracketTensor::from_real_vector(n, y)?;
        let diag = Diagnostics::compute(&mu, complement);
        samples.push(FlowSample { t, bracket: mu, diag });
    }
    Ok(())
}

/// Integrates the normalized flow `ν' = −π(K_ν + r_ν Id)ν` until the
/// fixed-point residual drops below `cfg.fixed_point_tol` or `t_end`.
///
/// The initial bracket is rescaled to unit norm. After every accepted step ν
/// is projected back onto the brackets adapted to the initial center (see
/// [`AlgebraDescriptor::project_onto_structure`]) and renormalized: the
/// normalization term grows components outside that subspace at rate `r_ν`,
/// so rounding errors would otherwise surface as 2-step drift after a few
/// dozen time units. Drift in a single step beyond [`DRIFT_ABORT`] still
/// aborts.
pub fn integrate_normalized_flow<T: Real>(
    desc: &AlgebraDescriptor<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<FlowTrace<T>> {
    desc.require_two_step()?;
    let n = desc.dim();
    let nu0 = desc.bracket.normalized()?;
    let complement = desc.complement_basis.clone();
    let mut samples: Vec<FlowSample<T>> = Vec::new();
    let mut converged = false;
    let outcome = integrate(
        |_, y: &DVector<T>| {
            let nu = BracketTensor::from_real_vector(n, y)?;
            Ok(normalized_velocity_unchecked(&nu).to_real_vector())
        },
        T::zero(),
        nu0.to_real_vector(),
        cfg,
        |t, y| {
            let raw = BracketTensor::from_real_vector(n, y)?;
            check_drift(t, &raw)?;
            let nu = desc.project_onto_structure(&raw)?.normalized()?;
            y.copy_from(&nu.to_real_vector());
            let diag = Diagnostics::compute(&nu, Some(&complement));
            let done = diag.residual < cfg.fixed_point_tol;
            if done || cfg.wants_sample(t) {
                samples.push(FlowSample { t, bracket: nu, diag });
            }
            if done {
                converged = true;
                Ok(Control::Stop)
            } else {
                Ok(Control::Continue)
            }
        },
    )?;
    push_final(&mut samples, outcome.t, n, &outcome.y, Some(&complement))?;
    let termination = if converged && outcome.stop == Stop::Observer {
        Termination::FixedPoint
    } else {
        Termination::TEnd
    };
    Ok(FlowTrace {
        samples,
        termination,
        accepted_steps: outcome.accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::action::bracket_inner;
    use crate::algebra::catalog;
    use crate::algebra::random::{seeded_rng, two_step};
    use crate::scalar::cplx;

    #[test]
    fn heisenberg_velocity() {
        let s = cplx::<f64>(0.8, 0.6);
        let mu = catalog::heisenberg3(s.scale(2.0)).unwrap().bracket;
        let v = bracket_velocity(&mu).unwrap();
        let s2 = s.scale(2.0);
        let expect = -s2 * creal::<f64>(s2.norm_sqr() / 2.0);
        assert!((v.get(0, 1, 2) - expect).norm() < 1e-14);
    }

    #[test]
    fn weighted_h5_velocity_preserves_ratio() {
        let (a, b) = (cplx::<f64>(2.0, 0.0), cplx::<f64>(0.0, 1.0));
        let mu = catalog::weighted_h5(a, b).unwrap().bracket;
        let v = bracket_velocity(&mu).unwrap();
        let w = creal::<f64>(-0.5 * (a.norm_sqr() + b.norm_sqr()));
        assert!((v.get(0, 1, 4) - w * a).norm() < 1e-14);
        assert!((v.get(2, 3, 4) - w * b).norm() < 1e-14);
    }

    #[test]
    fn abelian_velocity_is_zero() {
        let mu = catalog::abelian::<f64>(3).unwrap().bracket;
        assert!(bracket_velocity(&mu).unwrap().is_zero());
    }

    #[test]
    fn velocity_rejects_non_nilpotent() {
        let mu = BracketTensor::<f64>::from_entries(2, [(0, 1, 1, creal::<f64>(1.0))]).unwrap();
        assert_eq!(bracket_velocity(&mu), Err(Error::NotTwoStep));
    }

    #[test]
    fn unit_soliton_examples_are_stationary() {
        let h = catalog::heisenberg3(cplx::<f64>(0.6, 0.8)).unwrap().bracket;
        assert!(normalized_velocity(&h).unwrap().max_abs() < 1e-15);
        let s = 0.5f64.sqrt();
        let w = catalog::weighted_h5(creal::<f64>(s), creal::<f64>(s)).unwrap().bracket;
        assert!(normalized_velocity(&w).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn normalized_velocity_is_tangent() {
        let mut rng = seeded_rng(4);
        for _ in 0..10 {
            let nu = two_step::<f64, _>(6, &mut rng).unwrap().normalized().unwrap();
            let v = normalized_velocity(&nu).unwrap();
            assert!(bracket_inner(&v, &nu).unwrap().re.abs() < 1e-12);
        }
    }

    #[test]
    fn normalized_velocity_requires_unit_norm() {
        let mu = catalog::heisenberg3(creal::<f64>(2.0)).unwrap().bracket;
        assert!(matches!(normalized_velocity(&mu), Err(Error::NotUnitNorm { .. })));
    }

    #[test]
    fn heisenberg_closed_form() {
        let d = catalog::heisenberg3(creal::<f64>(1.0)).unwrap();
        let cfg = IntegratorConfig::default().with_t_end(3.0);
        let trace = integrate_bracket_flow(&d, &cfg).unwrap();
        let last = trace.last();
        assert_eq!(last.t, 3.0);
        assert!((last.diag.norm_sq - 0.25).abs() < 1e-8);
    }

    #[test]
    fn abelian_flow_is_constant() {
        let d = catalog::abelian::<f64>(3).unwrap();
        let trace = integrate_bracket_flow(&d, &IntegratorConfig::default().with_t_end(2.0)).unwrap();
        assert!(trace.samples.iter().all(|s| s.diag.tr_k == 0.0));
    }

    #[test]
    fn flow_refuses_non_nilpotent() {
        let raw = BracketTensor::<f64>::from_entries(2, [(0, 1, 1, creal::<f64>(1.0))]).unwrap();
        let d = crate::algebra::validate(raw).unwrap();
        let cfg = IntegratorConfig::default();
        assert_eq!(integrate_bracket_flow(&d, &cfg), Err(Error::NotTwoStep));
        assert_eq!(integrate_normalized_flow(&d, &cfg), Err(Error::NotTwoStep));
    }

    #[test]
    fn heisenberg_normalized_flow_stops_immediately() {
        let d = catalog::heisenberg3(cplx::<f64>(0.0, 1.0)).unwrap();
        let trace = integrate_normalized_flow(&d, &IntegratorConfig::default().with_t_end(10.0)).unwrap();
        assert_eq!(trace.termination, Termination::FixedPoint);
        assert_eq!(trace.samples.len(), 1);
        assert!(trace.last().diag.residual <= 1e-14);
    }

    #[test]
    fn unconverged_trace_reports_no_convergence() {
        let mut rng = seeded_rng(11);
        let d = crate::algebra::validate(two_step::<f64, _>(6, &mut rng).unwrap()).unwrap();
        let trace = integrate_normalized_flow(&d, &IntegratorConfig::default().with_t_end(1e-3)).unwrap();
        if trace.termination == Termination::TEnd {
            assert!(matches!(trace.require_fixed_point(), Err(Error::NoConvergence { .. })));
        }
    }
}
