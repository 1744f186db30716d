//! Constellation geometry, observer-side signal observables, spreading
//! codes, CSK modulation and acquisition search planning for LEO and MEO
//! navigation constellations.

pub mod bands;
pub mod codes;
pub mod constants;
pub mod config;
pub mod constellation;
pub mod csk;
pub mod error;
pub mod geodesy;
pub mod kinematics;
pub mod kv;
pub mod metrics;
pub mod observables;
pub mod planner;
pub mod obslog;
pub mod sim;

pub use bands::{Band, BandSpec};
pub use constellation::{
    build_nominal, orbital_constants, propagate, AltitudeReference, Constellation, EcefState,
    NominalConstellation, Satellite, ShellSpec,
};
pub use error::{Error, Result};
pub use geodesy::Observer;
pub use observables::{observe, Observable};
