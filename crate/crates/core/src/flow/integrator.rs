//! Embedded Runge–Kutta 5(4) (Dormand–Prince) with PI step-size control.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Integration settings shared by all flows.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig<T: Real> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<T>,
    pub max_step: T,
    pub t_end: T,
    pub max_steps: usize,
    /// Fixed-point residual below which the normalized flow stops.
    pub fixed_point_tol: T,
    /// When set, samples are recorded only at these times (plus the start and
    /// the end); otherwise every accepted step is recorded.
    pub sample_times: Option<Vec<T>>,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-9),
            abs_tol: lit(1e-12),
            initial_step: None,
            max_step: T::max_value().unwrap_or(lit(1e300)),
            t_end: lit(1.0),
            max_steps: 1_000_000,
            fixed_point_tol: lit(1e-10),
            sample_times: None,
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn with_t_end(mut self, t_end: T) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: T, abs_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_sample_times(mut self, times: Vec<T>) -> Self {
        self.sample_times = Some(times);
        self
    }

    pub fn with_fixed_point_tol(mut self, tol: T) -> Self {
        self.fixed_point_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.abs_tol > T::zero()) {
            return Err(Error::BadParameter("tolerances must be positive".into()));
        }
        if !(self.t_end > T::zero()) {
            return Err(Error::BadParameter("t_end must be positive".into()));
        }
        if !(self.max_step > T::zero()) || self.max_steps == 0 {
            return Err(Error::BadParameter("step limits must be positive".into()));
        }
        if let Some(h) = self.initial_step {
            if !(h > T::zero()) {
                return Err(Error::BadParameter("initial step must be positive".into()));
            }
        }
        Ok(())
    }

    /// Whether `t` is a requested sample time, the start `t = 0`, `t_end`, or
    /// sampling is dense.
    pub fn wants_sample(&self, t: T) -> bool {
        match &self.sample_times {
            None => true,
            Some(ts) => t == T::zero() || t == self.t_end || ts.contains(&t),
        }
    }
}

/// What the observer wants after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Why an integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    /// Reached `t_end`.
    End,
    /// The observer asked to stop.
    Observer,
}

#[derive(Debug, Clone)]
pub struct Outcome<T: Real> {
    pub t: T,
    pub y: DVector<T>,
    pub stop: Stop,
    pub accepted: usize,
    pub rejected: usize,
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// error weights: b - b̂
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince step from `(t, y)` with derivative `k1 = f(t, y)`.
/// Returns the 5th-order solution and the embedded error estimate.
pub fn dopri_step<T, F>(f: &mut F, t: T, y: &DVector<T>, k1: &DVector<T>, h: T) -> Result<(DVector<T>, DVector<T>)>
where
    T: Real,
    F: FnMut(T, &DVector<T>) -> Result<DVector<T>>,
{
    let l = |x: f64| lit::<T>(x);
    let k2 = f(t + h * l(C2), &(y + k1 * (h * l(A21))))?;
    let k3 = f(t + h * l(C3), &(y + k1 * (h * l(A31)) + &k2 * (h * l(A32))))?;
    let k4 = f(
        t + h * l(C4),
        &(y + k1 * (h * l(A41)) + &k2 * (h * l(A42)) + &k3 * (h * l(A43))),
    )?;
    let k5 = f(
        t + h * l(C5),
        &(y + k1 * (h * l(A51)) + &k2 * (h * l(A52)) + &k3 * (h * l(A53)) + &k4 * (h * l(A54))),
    )?;
    let k6 = f(
        t + h,
        &(y + k1 * (h * l(A61))
            + &k2 * (h * l(A62))
            + &k3 * (h * l(A63))
            + &k4 * (h * l(A64))
            + &k5 * (h * l(A65))),
    )?;
    let y_new = y
        + k1 * (h * l(B1))
        + &k3 * (h * l(B3))
        + &k4 * (h * l(B4))
        + &k5 * (h * l(B5))
        + &k6 * (h * l(B6));
    let k7 = f(t + h, &y_new)?;
    let err = k1 * (h * l(E1))
        + &k3 * (h * l(E3))
        + &k4 * (h * l(E4))
        + &k5 * (h * l(E5))
        + &k6 * (h * l(E6))
        + &k7 * (h * l(E7));
    Ok((y_new, err))
}

fn error_norm<T: Real>(err: &DVector<T>, y0: &DVector<T>, y1: &DVector<T>, cfg: &IntegratorConfig<T>) -> T {
    let n = err.len();
    if n == 0 {
        return T::zero();
    }
    let mut acc = T::zero();
    for i in 0..n {
        let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / sc;
        acc += r * r;
    }
    (acc / lit(n as f64)).sqrt()
}

/// Integrates `y' = f(t, y)` from `t0` to `cfg.t_end`.
///
/// `observer` sees every accepted step and may modify the state in place
/// (e.g. renormalize); it is also called once on the initial state.
/// Steps are shortened to land exactly on `cfg.sample_times`.
pub fn integrate<T, F, O>(mut f: F, t0: T, y0: DVector<T>, cfg: &IntegratorConfig<T>, mut observer: O) -> Result<Outcome<T>>
where
    T: Real,
    F: FnMut(T, &DVector<T>) -> Result<DVector<T>>,
    O: FnMut(T, &mut DVector<T>) -> Result<Control>,
{
    cfg.validate()?;
    let mut t = t0;
    let mut y = y0;
    if observer(t, &mut y)? == Control::Stop {
        return Ok(Outcome { t, y, stop: Stop::Observer, accepted: 0, rejected: 0 });
    }
    let mut stops: Vec<T> = cfg
        .sample_times
        .iter()
        .flatten()
        .copied()
        .filter(|s| *s > t0 && *s < cfg.t_end)
        .collect();
    stops.push(cfg.t_end);
    stops.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    stops.dedup();
    let mut next_stop = 0usize;

    let mut k1 = f(t, &y)?;
    let mut h = match cfg.initial_step {
        Some(h) => h,
        None => initial_step(&y, &k1, cfg),
    }
    .min(cfg.max_step);
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut err_prev = lit::<T>(1e-4);
    let (alpha, beta, safety) = (lit::<T>(0.7 / 5.0), lit::<T>(0.4 / 5.0), lit::<T>(0.9));
    let (min_factor, max_factor) = (lit::<T>(0.2), lit::<T>(5.0));

    loop {
        if accepted + rejected >= cfg.max_steps {
            return Err(Error::StepFailure { t: to_f64(t), step: to_f64(h) });
        }
        let target = stops[next_stop];
        let mut landing = false;
        let mut step = h;
        if t + step >= target {
            step = target - t;
            landing = true;
        }
        let floor = lit::<T>(1e-14) * t.abs().max(T::one());
        if step < floor && !landing {
            return Err(Error::StepFailure { t: to_f64(t), step: to_f64(step) });
        }
        let (y_new, err) = dopri_step(&mut f, t, &y, &k1, step)?;
        if y_new.iter().any(|v| !v.is_finite()) {
            rejected += 1;
            h = step * min_factor;
            continue;
        }
        let en = error_norm(&err, &y, &y_new, cfg);
        if en <= T::one() {
            accepted += 1;
            t = if landing { target } else { t + step };
            y = y_new;
            let en_c = en.max(lit(1e-10));
            let factor = (safety * en_c.powf(-alpha) * err_prev.powf(beta)).min(max_factor).max(min_factor);
            err_prev = en_c;
            // a shortened landing step says nothing about the next step size
            if !landing || step >= h {
                h = step * factor;
            }
            h = h.min(cfg.max_step);
            if landing {
                next_stop += 1;
            }
            let control = observer(t, &mut y)?;
            if control == Control::Stop {
                return Ok(Outcome { t, y, stop: Stop::Observer, accepted, rejected });
            }
            if next_stop >= stops.len() {
                return Ok(Outcome { t, y, stop: Stop::End, accepted, rejected });
            }
            k1 = f(t, &y)?;
        } else {
            rejected += 1;
            let factor = (safety * en.powf(-lit::<T>(0.2))).max(min_factor);
            h = step * factor;
            if h < floor {
                return Err(Error::StepFailure { t: to_f64(t), step: to_f64(h) });
            }
        }
    }
}

fn initial_step<T: Real>(y: &DVector<T>, f0: &DVector<T>, cfg: &IntegratorConfig<T>) -> T {
    let scale = |v: &DVector<T>| {
        let n = v.len().max(1);
        let mut acc = T::zero();
        for i in 0..v.len() {
            let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs();
            acc += (v[i] / sc) * (v[i] / sc);
        }
        (acc / lit(n as f64)).sqrt()
    };
    let d0 = scale(y);
    let d1 = scale(f0);
    let h = if d0 < lit(1e-5) || d1 < lit(1e-5) {
        lit(1e-6)
    } else {
        lit::<T>(0.01) * d0 / d1
    };
    h.min(cfg.t_end).max(lit(1e-12))
}
