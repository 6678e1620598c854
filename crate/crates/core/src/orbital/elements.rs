use std::f64::consts::PI;

use nalgebra::{Rotation3, Vector3};

use super::{wrap_two_pi, GravContext, OrbitalError, ECC_SINGULAR, INC_SINGULAR, R_EARTH};

/// Osculating Keplerian elements. Angles in radians, `a` in km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalOrbitalElements {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
    pub nu: f64,
}

/// Marks elements that were set by the singular-element policy rather than
/// measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ElementQuality {
    /// `argp` forced to zero, `nu` holds the argument of latitude (or true
    /// longitude when also equatorial).
    pub circular: bool,
    /// `raan` forced to zero.
    pub equatorial: bool,
}

impl ElementQuality {
    pub fn is_nominal(&self) -> bool {
        !self.circular && !self.equatorial
    }
}

impl ClassicalOrbitalElements {
    /// Builds and validates an element set, normalizing the three angles.
    pub fn new(a: f64, e: f64, i: f64, raan: f64, argp: f64, nu: f64) -> Result<Self, OrbitalError> {
        let coe = Self {
            a,
            e,
            i,
            raan: wrap_two_pi(raan),
            argp: wrap_two_pi(argp),
            nu: wrap_two_pi(nu),
        };
        coe.validate()?;
        Ok(coe)
    }

    pub fn from_degrees(
        a: f64,
        e: f64,
        i_deg: f64,
        raan_deg: f64,
        argp_deg: f64,
        nu_deg: f64,
    ) -> Result<Self, OrbitalError> {
        Self::new(
            a,
            e,
            i_deg.to_radians(),
            raan_deg.to_radians(),
            argp_deg.to_radians(),
            nu_deg.to_radians(),
        )
    }

    pub fn validate(&self) -> Result<(), OrbitalError> {
        if !(self.e >= 0.0 && self.e < 1.0) {
            return Err(OrbitalError::NotElliptical(self.e));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(OrbitalError::NonPositiveSemiMajorAxis(self.a));
        }
        if !(0.0..=PI).contains(&self.i) {
            return Err(OrbitalError::InclinationOutOfRange(self.i));
        }
        Ok(())
    }

    pub fn semi_latus_rectum(&self) -> f64 {
        self.a * (1.0 - self.e * self.e)
    }

    pub fn radius(&self) -> f64 {
        self.semi_latus_rectum() / (1.0 + self.e * self.nu.cos())
    }

    pub fn periapsis_radius(&self) -> f64 {
        self.a * (1.0 - self.e)
    }

    pub fn apoapsis_radius(&self) -> f64 {
        self.a * (1.0 + self.e)
    }

    /// Specific angular momentum magnitude, km²/s.
    pub fn angular_momentum(&self, ctx: &GravContext) -> f64 {
        (ctx.mu * self.semi_latus_rectum()).sqrt()
    }

    /// Argument of latitude ω + ν, wrapped.
    pub fn arg_latitude(&self) -> f64 {
        wrap_two_pi(self.argp + self.nu)
    }

    pub fn period(&self, ctx: &GravContext) -> f64 {
        ctx.period(self.a)
    }
}

/// Inertial position/velocity with an epoch in seconds from scenario start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianState {
    pub r: Vector3<f64>,
    pub v: Vector3<f64>,
    pub epoch: f64,
}

impl CartesianState {
    pub fn new(r: Vector3<f64>, v: Vector3<f64>, epoch: f64) -> Self {
        Self { r, v, epoch }
    }

    /// Above the reference sphere with finite components.
    pub fn is_valid_flight_state(&self) -> bool {
        self.r.iter().chain(self.v.iter()).all(|c| c.is_finite()) && self.r.norm() > R_EARTH
    }

    pub fn radius(&self) -> f64 {
        self.r.norm()
    }

    pub fn speed(&self) -> f64 {
        self.v.norm()
    }

    pub fn angular_momentum(&self) -> Vector3<f64> {
        self.r.cross(&self.v)
    }

    /// Specific orbital energy, km²/s².
    pub fn energy(&self, ctx: &GravContext) -> f64 {
        0.5 * self.v.norm_squared() - ctx.mu / self.r.norm()
    }

    pub fn altitude(&self, ctx: &GravContext) -> f64 {
        self.r.norm() - ctx.re
    }

    pub fn with_epoch(mut self, epoch: f64) -> Self {
        self.epoch = epoch;
        self
    }
}

/// Converts elements to an inertial state at epoch zero.
pub fn coe_to_cartesian(
    coe: &ClassicalOrbitalElements,
    ctx: &GravContext,
) -> Result<CartesianState, OrbitalError> {
    coe.validate()?;
    let p = coe.semi_latus_rectum();
    let (s, c) = coe.nu.sin_cos();
    let r = p / (1.0 + coe.e * c);
    let r_pf = Vector3::new(r * c, r * s, 0.0);
    let k = (ctx.mu / p).sqrt();
    let v_pf = Vector3::new(-k * s, k * (coe.e + c), 0.0);
    let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), coe.raan)
        * Rotation3::from_axis_angle(&Vector3::x_axis(), coe.i)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), coe.argp);
    Ok(CartesianState {
        r: rot * r_pf,
        v: rot * v_pf,
        epoch: 0.0,
    })
}

/// Osculating elements through `state`, with the singular-element policy
/// applied and reported in the returned quality flags.
pub fn cartesian_to_coe(
    state: &CartesianState,
    ctx: &GravContext,
) -> Result<(ClassicalOrbitalElements, ElementQuality), OrbitalError> {
    let r = state.r;
    let v = state.v;
    let rn = r.norm();
    if !(rn > 0.0) || !rn.is_finite() || !v.norm().is_finite() {
        return Err(OrbitalError::Degenerate("zero or non-finite position"));
    }
    let energy = 0.5 * v.norm_squared() - ctx.mu / rn;
    if energy >= 0.0 {
        return Err(OrbitalError::Unbound(energy));
    }
    let h = r.cross(&v);
    let hn = h.norm();
    if hn <= 1e-12 * rn * v.norm() {
        return Err(OrbitalError::Degenerate("rectilinear state"));
    }
    let h_hat = h / hn;
    let a = -ctx.mu / (2.0 * energy);
    let e_vec = ((v.norm_squared() - ctx.mu / rn) * r - r.dot(&v) * v) / ctx.mu;
    let e = e_vec.norm();
    if e >= 1.0 {
        return Err(OrbitalError::NotElliptical(e));
    }
    let i = h_hat.x.hypot(h_hat.y).atan2(h_hat.z);

    let q = ElementQuality {
        circular: e < ECC_SINGULAR,
        equatorial: i < INC_SINGULAR || PI - i < INC_SINGULAR,
    };

    let node = Vector3::z().cross(&h);
    let (raan, node_hat) = if q.equatorial {
        (0.0, Vector3::x())
    } else {
        let n_hat = node.normalize();
        (n_hat.y.atan2(n_hat.x), n_hat)
    };

    // angle from `from` to `to` measured about the orbit normal
    let angle_about_h = |from: &Vector3<f64>, to: &Vector3<f64>| h_hat.dot(&from.cross(to)).atan2(from.dot(to));

    let (argp, nu) = if q.circular {
        (0.0, angle_about_h(&node_hat, &r))
    } else {
        let e_hat = e_vec / e;
        (angle_about_h(&node_hat, &e_hat), angle_about_h(&e_hat, &r))
    };
    Ok((
        ClassicalOrbitalElements {
            a,
            e,
            i,
            raan: wrap_two_pi(raan),
            argp: wrap_two_pi(argp),
            nu: wrap_two_pi(nu),
        },
        q,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn ctx() -> GravContext {
        GravContext::default()
    }

    fn angle_diff(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    #[test]
    fn circular_equatorial_state() {
        let coe = ClassicalOrbitalElements::new(7000.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let s = coe_to_cartesian(&coe, &ctx()).unwrap();
        assert!((s.r - Vector3::new(7000.0, 0.0, 0.0)).norm() < 1e-9);
        // √(μ/a) evaluated separately: 7.546053290107541 km/s
        assert!((s.v.norm() - 7.546_053_290_107_541).abs() < 1e-12);
        assert!(s.v.x.abs() < 1e-12 && s.v.y > 0.0 && s.v.z.abs() < 1e-12);
    }

    #[test]
    fn table_initial_orbit_speed() {
        let coe = ClassicalOrbitalElements::from_degrees(6928.14, 0.0, 95.0, 0.0, 0.0, 0.0).unwrap();
        let s = coe_to_cartesian(&coe, &ctx()).unwrap();
        assert!((s.v.norm() - 7.585_086_892_923_757).abs() < 1e-10);
    }

    #[test]
    fn rejects_open_orbits() {
        let coe = ClassicalOrbitalElements { a: 7000.0, e: 1.0, i: 0.1, raan: 0.0, argp: 0.0, nu: 0.0 };
        assert!(matches!(coe_to_cartesian(&coe, &ctx()), Err(OrbitalError::NotElliptical(_))));
        let hyper = CartesianState::new(Vector3::new(7000.0, 0.0, 0.0), Vector3::new(0.0, 12.0, 0.0), 0.0);
        assert!(matches!(cartesian_to_coe(&hyper, &ctx()), Err(OrbitalError::Unbound(_))));
    }

    #[test]
    fn recovers_circular_orbit() {
        let s = CartesianState::new(Vector3::new(7000.0, 0.0, 0.0), Vector3::new(0.0, 7.546, 0.0), 0.0);
        let (coe, q) = cartesian_to_coe(&s, &ctx()).unwrap();
        // vis-viva oracle: a = 1/(2/r - v²/μ)
        let a = 1.0 / (2.0 / 7000.0 - 7.546f64.powi(2) / MU);
        assert!((coe.a - a).abs() < 1e-8);
        assert!((coe.a - 7000.0).abs() < 0.1);
        assert!(coe.e < 1e-4);
        assert!(q.equatorial);
    }

    const MU: f64 = super::super::MU_EARTH;

    #[test]
    fn sso_round_trip() {
        let coe = ClassicalOrbitalElements::from_degrees(7046.14, 0.001, 98.3, 30.0, 40.0, 50.0).unwrap();
        let s = coe_to_cartesian(&coe, &ctx()).unwrap();
        let (back, q) = cartesian_to_coe(&s, &ctx()).unwrap();
        assert!(q.is_nominal());
        assert!((back.a - coe.a).abs() / coe.a < 1e-9);
        assert!((back.e - coe.e).abs() / coe.e < 1e-9);
        for (x, y) in [(back.i, coe.i), (back.raan, coe.raan), (back.argp, coe.argp), (back.nu, coe.nu)] {
            assert!(angle_diff(x, y) < 1e-9);
        }
    }

    #[test]
    fn singular_policy() {
        let coe = ClassicalOrbitalElements::from_degrees(7046.14, 0.0, 98.3, 140.0, 0.0, 33.0).unwrap();
        let s = coe_to_cartesian(&coe, &ctx()).unwrap();
        let (back, q) = cartesian_to_coe(&s, &ctx()).unwrap();
        assert!(q.circular && !q.equatorial);
        assert_eq!(back.argp, 0.0);
        assert!(angle_diff(back.nu, 33f64.to_radians()) < 1e-9);

        let eq = ClassicalOrbitalElements::from_degrees(7046.14, 0.01, 0.0, 0.0, 70.0, 20.0).unwrap();
        let s = coe_to_cartesian(&eq, &ctx()).unwrap();
        let (back, q) = cartesian_to_coe(&s, &ctx()).unwrap();
        assert!(q.equatorial && !q.circular);
        assert_eq!(back.raan, 0.0);
        assert!(angle_diff(back.argp, 70f64.to_radians()) < 1e-9);
    }

    proptest! {
        #[test]
        fn vis_viva_holds(a in 6600.0..40000.0f64, e in 0.0..0.9f64, i in 0.0..PI,
                          raan in 0.0..TAU, argp in 0.0..TAU, nu in 0.0..TAU) {
            let coe = ClassicalOrbitalElements::new(a, e, i, raan, argp, nu).unwrap();
            let s = coe_to_cartesian(&coe, &ctx()).unwrap();
            let lhs = s.v.norm_squared();
            let rhs = MU * (2.0 / s.r.norm() - 1.0 / a);
            prop_assert!((lhs - rhs).abs() / rhs <= 1e-10);
        }
    }
}
