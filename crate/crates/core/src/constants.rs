//! Physical constants shared by every module.

/// Earth gravitational parameter (m^3/s^2).
pub const MU_EARTH: f64 = 3.986_004_418e14;

/// Earth rotation rate (rad/s).
pub const OMEGA_EARTH: f64 = 7.292_115_0e-5;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// WGS84 semi-major axis (m).
pub const WGS84_A: f64 = 6_378_137.0;

/// WGS84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;

/// WGS84 first eccentricity squared.
pub const WGS84_E2: f64 = WGS84_F * (2.0 - WGS84_F);

/// Mean Earth radius (m), the reference used for nominal orbit radii.
pub const EARTH_MEAN_RADIUS: f64 = 6_371_000.0;

pub const SECONDS_PER_DAY: f64 = 86_400.0;
