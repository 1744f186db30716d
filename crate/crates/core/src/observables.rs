//! Observer-side signal observables: look angles, range and its first
//! three time derivatives, and their carrier/code Doppler equivalents.
//!
//! Doppler is positive while the satellite approaches.

use std::f64::consts::PI;

use crate::bands::Band;
use crate::constants::SPEED_OF_LIGHT;
use crate::constellation::{EcefState, Satellite};
use crate::error::{Error, Result};
use crate::geodesy::TopocentricFrame;

/// One (time, observer, satellite) sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    pub time: f64,
    pub svid: u32,
    pub prn_id: u32,
    pub plane_index: usize,
    pub shell_index: usize,
    pub elevation: f64,
    pub azimuth: f64,
    /// Satellite exactly at the zenith; azimuth forced to 0.
    pub zenith: bool,
    pub range: f64,
    pub range_rate: f64,
    pub range_accel: f64,
    pub range_jerk: f64,
}

impl Observable {
    pub fn doppler(&self, band: Band) -> f64 {
        -self.range_rate / SPEED_OF_LIGHT * band.carrier()
    }

    pub fn doppler_rate(&self, band: Band) -> f64 {
        -self.range_accel / SPEED_OF_LIGHT * band.carrier()
    }

    pub fn doppler_rate_derivative(&self, band: Band) -> f64 {
        -self.range_jerk / SPEED_OF_LIGHT * band.carrier()
    }

    pub fn code_doppler(&self, band: Band) -> f64 {
        carrier_to_code_doppler(self.doppler(band), band)
    }

    /// One-way propagation delay in seconds.
    pub fn delay(&self) -> f64 {
        self.range / SPEED_OF_LIGHT
    }
}

/// Range derivatives from relative state. Returns (rho, rho', rho'', rho''').
#[inline]
pub fn range_derivatives(d: &EcefState, origin: &crate::constellation::Vec3) -> (f64, f64, f64, f64) {
    let r = d.position - origin;
    let v = d.velocity;
    let a = d.acceleration;
    let j = d.jerk;
    let rho = r.norm();
    let rd = r.dot(&v) / rho;
    let rdd = (v.norm_squared() + r.dot(&a) - rd * rd) / rho;
    let rddd = (3.0 * v.dot(&a) + r.dot(&j) - 3.0 * rd * rdd) / rho;
    (rho, rd, rdd, rddd)
}

/// Observables of `sat` in `state` as seen from a static observer.
pub fn observe(frame: &TopocentricFrame, sat: &Satellite, state: &EcefState) -> Observable {
    let los = state.position - frame.origin;
    let (elevation, azimuth, zenith) = frame.look_angles(&los);
    let (range, range_rate, range_accel, range_jerk) = range_derivatives(state, &frame.origin);
    Observable {
        time: state.time,
        svid: sat.svid,
        prn_id: sat.prn_id,
        plane_index: sat.plane_index,
        shell_index: sat.shell_index,
        elevation,
        azimuth,
        zenith,
        range,
        range_rate,
        range_accel,
        range_jerk,
    }
}

/// Elevation of `state` only; cheaper than [`observe`] for visibility scans.
#[inline]
pub fn elevation_deg(frame: &TopocentricFrame, state: &EcefState) -> f64 {
    let los = state.position - frame.origin;
    (los.dot(&frame.up) / los.norm()).asin().to_degrees()
}

pub fn carrier_to_code_doppler(doppler_hz: f64, band: Band) -> f64 {
    let s = band.spec();
    doppler_hz * s.chip_rate / s.carrier_frequency
}

/// Free-space path loss 20 log10(4 pi d f / c), dB.
pub fn fspl_db(range_m: f64, frequency_hz: f64) -> Result<f64> {
    if !(range_m > 0.0) || !(frequency_hz > 0.0) {
        return Err(Error::domain("range and frequency must be positive"));
    }
    Ok(20.0 * (4.0 * PI * range_m * frequency_hz / SPEED_OF_LIGHT).log10())
}

/// Path-loss difference between two ranges at a common frequency, dB.
pub fn fspl_delta_db(range_a: f64, range_b: f64) -> Result<f64> {
    if !(range_a > 0.0) || !(range_b > 0.0) {
        return Err(Error::domain("ranges must be positive"));
    }
    Ok(20.0 * (range_a / range_b).log10())
}

/// Slant range from an observer at radius `observer_radius` to a satellite
/// at `orbit_radius` seen at elevation `mask_deg`.
pub fn footprint_radius(orbit_radius: f64, observer_radius: f64, mask_deg: f64) -> Result<f64> {
    if !(observer_radius > 0.0) || !(orbit_radius > observer_radius) {
        return Err(Error::domain(format!(
            "orbit radius {orbit_radius} must exceed observer radius {observer_radius}"
        )));
    }
    if !(0.0..=90.0).contains(&mask_deg) {
        return Err(Error::domain(format!("mask {mask_deg} outside [0, 90]")));
    }
    let (s, c) = mask_deg.to_radians().sin_cos();
    let r = observer_radius;
    Ok(-r * s + (orbit_radius * orbit_radius - r * r * c * c).sqrt())
}

/// Inclusive elevation test.
#[inline]
pub fn visible(obs: &Observable, mask_deg: f64) -> bool {
    obs.elevation >= mask_deg
}
