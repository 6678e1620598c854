//! Fixed-step RK4 and adaptive Runge-Kutta-Fehlberg 4(5) with sign-change
//! event location.

use nalgebra::Vector6;

use super::{IntegratorConfig, PropagationError};

pub(crate) type State6 = Vector6<f64>;

/// Direction of a zero crossing that counts as an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Crossing {
    Rising,
    Falling,
    Either,
}

impl Crossing {
    fn triggered(self, before: f64, after: f64) -> bool {
        match self {
            Crossing::Rising => before < 0.0 && after >= 0.0,
            Crossing::Falling => before > 0.0 && after <= 0.0,
            Crossing::Either => (before < 0.0 && after >= 0.0) || (before > 0.0 && after <= 0.0),
        }
    }
}

pub(crate) struct EventFn<'a> {
    pub g: Box<dyn Fn(f64, &State6) -> f64 + 'a>,
    pub crossing: Crossing,
    /// Bracket width at which bisection stops, seconds.
    pub time_tol: f64,
}

pub(crate) struct Outcome {
    pub t: f64,
    pub y: State6,
    pub event: Option<usize>,
}

type Rhs<'a> = dyn FnMut(f64, &State6) -> Result<State6, PropagationError> + 'a;

fn rk4_step(f: &mut Rhs, t: f64, y: &State6, h: f64) -> Result<State6, PropagationError> {
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &(y + 0.5 * h * k1))?;
    let k3 = f(t + 0.5 * h, &(y + 0.5 * h * k2))?;
    let k4 = f(t + h, &(y + h * k3))?;
    Ok(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// One Fehlberg step. Returns the fifth-order solution (local extrapolation)
/// and the difference to the embedded fourth-order one.
fn rkf45_step(f: &mut Rhs, t: f64, y: &State6, h: f64) -> Result<(State6, State6), PropagationError> {
    let k1 = f(t, y)?;
    let k2 = f(t + h / 4.0, &(y + h * (k1 / 4.0)))?;
    let k3 = f(t + 3.0 * h / 8.0, &(y + h * (3.0 / 32.0 * k1 + 9.0 / 32.0 * k2)))?;
    let k4 = f(
        t + 12.0 * h / 13.0,
        &(y + h * (1932.0 / 2197.0 * k1 - 7200.0 / 2197.0 * k2 + 7296.0 / 2197.0 * k3)),
    )?;
    let k5 = f(
        t + h,
        &(y + h * (439.0 / 216.0 * k1 - 8.0 * k2 + 3680.0 / 513.0 * k3 - 845.0 / 4104.0 * k4)),
    )?;
    let k6 = f(
        t + h / 2.0,
        &(y + h
            * (-8.0 / 27.0 * k1 + 2.0 * k2 - 3544.0 / 2565.0 * k3 + 1859.0 / 4104.0 * k4
                - 11.0 / 40.0 * k5)),
    )?;
    let y4 = y + h * (25.0 / 216.0 * k1 + 1408.0 / 2565.0 * k3 + 2197.0 / 4104.0 * k4 - k5 / 5.0);
    let y5 = y + h
        * (16.0 / 135.0 * k1 + 6656.0 / 12825.0 * k3 + 28561.0 / 56430.0 * k4 - 9.0 / 50.0 * k5
            + 2.0 / 55.0 * k6);
    Ok((y5, y5 - y4))
}

fn single_step(f: &mut Rhs, cfg: &IntegratorConfig, t: f64, y: &State6, h: f64) -> Result<State6, PropagationError> {
    match cfg {
        IntegratorConfig::Rk4Fixed { .. } => rk4_step(f, t, y, h),
        IntegratorConfig::Rkf45 { .. } => Ok(rkf45_step(f, t, y, h)?.0),
    }
}

/// Integrates from `t0` to `t_end` (forward only), stopping early at the first
/// event. `guard` runs on every accepted state; `on_step` sees every accepted
/// step and is used for dense output.
pub(crate) fn integrate(
    rhs: &mut Rhs,
    t0: f64,
    y0: State6,
    t_end: f64,
    cfg: &IntegratorConfig,
    events: &[EventFn],
    guard: &dyn Fn(f64, &State6) -> Result<(), PropagationError>,
    on_step: &mut dyn FnMut(f64, &State6),
) -> Result<Outcome, PropagationError> {
    cfg.validate()?;
    let mut t = t0;
    let mut y = y0;
    if t_end <= t0 {
        return Ok(Outcome { t, y, event: None });
    }
    let mut g_prev: Vec<f64> = events.iter().map(|e| (e.g)(t, &y)).collect();
    let mut h = match *cfg {
        IntegratorConfig::Rk4Fixed { step } => step,
        IntegratorConfig::Rkf45 { max_step, .. } => max_step.min(10.0),
    };

    while t < t_end {
        let remaining = t_end - t;
        let truncated = h >= remaining;
        let h_try = if truncated { remaining } else { h };

        let (t_new, y_new) = match *cfg {
            IntegratorConfig::Rk4Fixed { .. } => (t + h_try, rk4_step(rhs, t, &y, h_try)?),
            IntegratorConfig::Rkf45 {
                rel_tol,
                abs_tol,
                min_step,
                max_step,
            } => {
                let (y5, err) = rkf45_step(rhs, t, &y, h_try)?;
                let mut norm: f64 = 0.0;
                for k in 0..6 {
                    let scale = abs_tol + rel_tol * y[k].abs().max(y5[k].abs());
                    norm = norm.max(err[k].abs() / scale);
                }
                if !norm.is_finite() {
                    norm = 1e10;
                }
                let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                if norm > 1.0 {
                    h = h_try * factor;
                    if h < min_step {
                        return Err(PropagationError::StepSizeUnderflow { epoch: t });
                    }
                    continue;
                }
                // keep the pre-truncation step size so the last short step
                // doesn't poison the next call
                h = (if truncated { h.max(h_try) } else { h_try * factor }).min(max_step);
                (t + h_try, y5)
            }
        };
        let t_new = if truncated { t_end } else { t_new };

        guard(t_new, &y_new)?;

        // earliest triggered event in this step wins
        let mut hit: Option<(usize, f64, State6)> = None;
        for (idx, ev) in events.iter().enumerate() {
            let g_new = (ev.g)(t_new, &y_new);
            if ev.crossing.triggered(g_prev[idx], g_new) {
                let (tc, yc) = locate(rhs, cfg, ev, t, &y, g_prev[idx], t_new, &y_new)?;
                // a start sitting on the event surface isn't a crossing
                if tc - t0 <= 2.0 * ev.time_tol {
                    g_prev[idx] = g_new;
                    continue;
                }
                if hit.as_ref().is_none_or(|(_, th, _)| tc < *th) {
                    hit = Some((idx, tc, yc));
                }
            }
            g_prev[idx] = g_new;
        }
        if let Some((idx, tc, yc)) = hit {
            on_step(tc, &yc);
            return Ok(Outcome {
                t: tc,
                y: yc,
                event: Some(idx),
            });
        }
        t = t_new;
        y = y_new;
        on_step(t, &y);
    }
    Ok(Outcome { t, y, event: None })
}

/// Bisection on the bracket [ta, tb], re-stepping from the bracket start.
#[allow(clippy::too_many_arguments)]
fn locate(
    rhs: &mut Rhs,
    cfg: &IntegratorConfig,
    ev: &EventFn,
    ta: f64,
    ya: &State6,
    ga: f64,
    tb: f64,
    yb: &State6,
) -> Result<(f64, State6), PropagationError> {
    let (mut lo, mut hi) = (ta, tb);
    let mut g_lo = ga;
    let mut y_hi = *yb;
    for _ in 0..200 {
        if hi - lo <= ev.time_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let y_mid = single_step(rhs, cfg, ta, ya, mid - ta)?;
        let g_mid = (ev.g)(mid, &y_mid);
        if ev.crossing.triggered(g_lo, g_mid) {
            hi = mid;
            y_hi = y_mid;
        } else {
            lo = mid;
            g_lo = g_mid;
        }
    }
    Ok((hi, y_hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator() -> impl FnMut(f64, &State6) -> Result<State6, PropagationError> {
        // two decoupled harmonic oscillators plus a linear drift pair
        |_t, y: &State6| Ok(State6::new(y[1], -y[0], y[3], -4.0 * y[2], 1.0, 0.0))
    }

    fn no_guard(_t: f64, _y: &State6) -> Result<(), PropagationError> {
        Ok(())
    }

    #[test]
    fn rk4_fourth_order() {
        let y0 = State6::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        let exact = |t: f64| State6::new(t.cos(), -t.sin(), (2.0 * t).cos(), -2.0 * (2.0 * t).sin(), t, 0.0);
        let mut errs = vec![];
        for h in [0.1, 0.05] {
            let mut f = oscillator();
            let out = integrate(&mut f, 0.0, y0, 5.0, &IntegratorConfig::Rk4Fixed { step: h }, &[], &no_guard, &mut |_, _| {}).unwrap();
            errs.push((out.y - exact(5.0)).norm());
        }
        assert!(errs[0] / errs[1] > 14.0, "{errs:?}");
    }

    #[test]
    fn rkf45_tracks_tolerance() {
        let y0 = State6::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        let mut f = oscillator();
        let cfg = IntegratorConfig::Rkf45 { rel_tol: 1e-12, abs_tol: 1e-14, min_step: 1e-9, max_step: 1.0 };
        let out = integrate(&mut f, 0.0, y0, 10.0, &cfg, &[], &no_guard, &mut |_, _| {}).unwrap();
        assert_eq!(out.t, 10.0);
        assert!((out.y[0] - 10f64.cos()).abs() < 1e-10);
        assert!((out.y[2] - 20f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn locates_zero_crossing() {
        let y0 = State6::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        let mut f = oscillator();
        let cfg = IntegratorConfig::Rkf45 { rel_tol: 1e-12, abs_tol: 1e-14, min_step: 1e-9, max_step: 1.0 };
        // cos t falls through zero at π/2
        let ev = EventFn { g: Box::new(|_t, y: &State6| y[0]), crossing: Crossing::Falling, time_tol: 1e-9 };
        let out = integrate(&mut f, 0.0, y0, 10.0, &cfg, &[ev], &no_guard, &mut |_, _| {}).unwrap();
        assert_eq!(out.event, Some(0));
        assert!((out.t - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_config() {
        let mut f = oscillator();
        let r = integrate(&mut f, 0.0, State6::zeros(), 1.0, &IntegratorConfig::Rk4Fixed { step: 0.0 }, &[], &no_guard, &mut |_, _| {});
        assert!(matches!(r, Err(PropagationError::InvalidConfig(_))));
    }
}
