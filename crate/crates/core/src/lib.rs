//! Debris chase-and-deorbit mission planning.
//!
//! The crate covers the full chain from element sets to a simulated mission:
//!
//! - [`orbital`]: element conversions, Kepler's equation, RIC frames
//! - [`propagation`]: two-body + J2 Cartesian and Gauss-variational propagators
//! - [`guidance`]: the Directional Adaptive Guidance law and the Q-law
//! - [`maneuvers`]: Hohmann, plane change, Clohessy-Wiltshire targeting, propellant
//! - [`mission`]: the raise / plane change / chase / capture / de-orbit sequence
//! - [`io`]: TLE parsing, scenario files and CSV/report writers
//!
//! Runnable walkthroughs live in `examples/`.

pub mod orbital;
pub mod propagation;
pub mod guidance;
pub mod maneuvers;
pub mod mission;
pub mod io;
