use std::f64::consts::{PI, TAU};

use super::{wrap_two_pi, OrbitalError};

/// Which anomaly an angle measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnomalyKind {
    True,
    Eccentric,
    Mean,
}

/// Solves Kepler's equation `E - e sin E = M` for the eccentric anomaly.
///
/// Newton iteration from a standard starter, falling back to bisection on the
/// bracket [M', M' + e] if Newton fails to settle. The returned angle carries
/// the same number of whole revolutions as `mean_anomaly`.
pub fn solve_kepler(mean_anomaly: f64, e: f64) -> Result<f64, OrbitalError> {
    if !(0.0..1.0).contains(&e) || !e.is_finite() {
        return Err(OrbitalError::NotElliptical(e));
    }
    if e == 0.0 {
        return Ok(mean_anomaly);
    }
    // reduce to (-π, π] so the bracket logic is symmetric
    let revs = ((mean_anomaly + PI) / TAU).floor();
    let m = mean_anomaly - revs * TAU;

    let residual = |ecc: f64| ecc - e * ecc.sin() - m;

    let mut ecc = if e < 0.8 { m } else { m.signum() * PI };
    if m == 0.0 {
        ecc = 0.0;
    }
    let mut converged = false;
    for _ in 0..50 {
        let f = residual(ecc);
        let fp = 1.0 - e * ecc.cos();
        let step = f / fp;
        ecc -= step;
        if step.abs() <= 1e-15 * ecc.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged || residual(ecc).abs() > 1e-12 || !ecc.is_finite() {
        // E - e sin E is monotone, and M lies between E - e and E + e
        let (mut lo, mut hi) = (m - e, m + e);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-16 {
                break;
            }
        }
        ecc = 0.5 * (lo + hi);
    }
    Ok(ecc + revs * TAU)
}

fn true_to_eccentric(nu: f64, e: f64) -> f64 {
    let beta = ((1.0 - e) / (1.0 + e)).sqrt();
    let half = nu / 2.0;
    // keep the branch: atan2 on the half angles preserves the quadrant
    2.0 * (beta * half.sin()).atan2(half.cos())
}

fn eccentric_to_true(ecc: f64, e: f64) -> f64 {
    let beta = ((1.0 + e) / (1.0 - e)).sqrt();
    let half = ecc / 2.0;
    2.0 * (beta * half.sin()).atan2(half.cos())
}

/// Converts between true, eccentric and mean anomaly.
///
/// Outputs are normalized to [0, 2π) except for the identity conversion,
/// which returns `value` untouched.
pub fn anomaly_convert(
    value: f64,
    e: f64,
    from: AnomalyKind,
    to: AnomalyKind,
) -> Result<f64, OrbitalError> {
    use AnomalyKind::*;
    if !(0.0..1.0).contains(&e) {
        return Err(OrbitalError::NotElliptical(e));
    }
    if from == to {
        return Ok(value);
    }
    let ecc = match from {
        True => true_to_eccentric(value, e),
        Eccentric => value,
        Mean => solve_kepler(value, e)?,
    };
    let out = match to {
        True => eccentric_to_true(ecc, e),
        Eccentric => ecc,
        Mean => ecc - e * ecc.sin(),
    };
    Ok(wrap_two_pi(out))
}
