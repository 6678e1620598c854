use nalgebra::{Matrix3, Vector3};

use super::{CartesianState, OrbitalError};

/// Rotation taking ECI vectors into Radial / In-track / Cross-track
/// components of a reference state. Rows are the R, I and C unit axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicBasis {
    pub rows: Matrix3<f64>,
}

impl RicBasis {
    pub fn radial(&self) -> Vector3<f64> {
        self.rows.row(0).transpose()
    }

    pub fn in_track(&self) -> Vector3<f64> {
        self.rows.row(1).transpose()
    }

    pub fn cross_track(&self) -> Vector3<f64> {
        self.rows.row(2).transpose()
    }

    /// ECI → RIC.
    pub fn to_ric(&self, eci: &Vector3<f64>) -> Vector3<f64> {
        self.rows * eci
    }

    /// RIC → ECI.
    pub fn to_eci(&self, ric: &Vector3<f64>) -> Vector3<f64> {
        self.rows.transpose() * ric
    }
}

/// RIC axes of `reference`: R along r, C along r×v, I completing the triad.
pub fn ric_basis(reference: &CartesianState) -> Result<RicBasis, OrbitalError> {
    let r = reference.r;
    let h = r.cross(&reference.v);
    let rn = r.norm();
    let hn = h.norm();
    if !(rn > 0.0) || !(hn > 1e-12 * rn * reference.v.norm()) || !hn.is_finite() {
        return Err(OrbitalError::Degenerate("position and velocity are parallel or zero"));
    }
    let radial = r / rn;
    let cross = h / hn;
    let in_track = cross.cross(&radial);
    Ok(RicBasis {
        rows: Matrix3::from_rows(&[radial.transpose(), in_track.transpose(), cross.transpose()]),
    })
}

/// Chaser position and velocity relative to a target, in the target's
/// rotating RIC frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeState {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

impl RelativeState {
    pub fn new(position: Vector3<f64>, velocity: Vector3<f64>) -> Self {
        Self { position, velocity }
    }

    pub fn zero() -> Self {
        Self::new(Vector3::zeros(), Vector3::zeros())
    }
}

pub fn relative_state_ric(
    chaser: &CartesianState,
    target: &CartesianState,
) -> Result<RelativeState, OrbitalError> {
    if chaser.epoch != target.epoch {
        return Err(OrbitalError::EpochMismatch {
            chaser: chaser.epoch,
            target: target.epoch,
        });
    }
    let basis = ric_basis(target)?;
    let rho = chaser.r - target.r;
    let omega = target.r.cross(&target.v) / target.r.norm_squared();
    let rho_dot = chaser.v - target.v - omega.cross(&rho);
    Ok(RelativeState {
        position: basis.to_ric(&rho),
        velocity: basis.to_ric(&rho_dot),
    })
}
