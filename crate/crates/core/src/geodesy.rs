//! WGS84 observer positions and the local east-north-up frame.

use crate::constants::{WGS84_A, WGS84_E2};
use crate::constellation::Vec3;
use crate::error::{Error, Result};

/// Static ground observer, geodetic coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observer {
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    pub height_m: f64,
}

impl Observer {
    pub fn new(latitude_deg: f64, longitude_deg: f64, height_m: f64) -> Result<Self> {
        if !latitude_deg.is_finite() || latitude_deg.abs() > 90.0 {
            return Err(Error::config(format!("latitude {latitude_deg} outside [-90, 90]")));
        }
        if !longitude_deg.is_finite() || !(-180.0..180.0).contains(&longitude_deg) {
            return Err(Error::config(format!(
                "longitude {longitude_deg} outside [-180, 180)"
            )));
        }
        if !height_m.is_finite() {
            return Err(Error::config("observer height must be finite"));
        }
        Ok(Self {
            latitude_deg,
            longitude_deg,
            height_m,
        })
    }

    /// Observer on the ellipsoid at longitude 0.
    pub fn at_latitude(latitude_deg: f64) -> Result<Self> {
        Self::new(latitude_deg, 0.0, 0.0)
    }

    pub fn ecef(&self) -> Vec3 {
        let (sl, cl) = self.latitude_deg.to_radians().sin_cos();
        let (so, co) = self.longitude_deg.to_radians().sin_cos();
        let n = WGS84_A / (1.0 - WGS84_E2 * sl * sl).sqrt();
        Vec3::new(
            (n + self.height_m) * cl * co,
            (n + self.height_m) * cl * so,
            (n * (1.0 - WGS84_E2) + self.height_m) * sl,
        )
    }

    pub fn frame(&self) -> TopocentricFrame {
        TopocentricFrame::new(self)
    }
}

/// Precomputed observer position and ENU basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopocentricFrame {
    pub origin: Vec3,
    pub east: Vec3,
    pub north: Vec3,
    pub up: Vec3,
}

impl TopocentricFrame {
    pub fn new(obs: &Observer) -> Self {
        let (sl, cl) = obs.latitude_deg.to_radians().sin_cos();
        let (so, co) = obs.longitude_deg.to_radians().sin_cos();
        Self {
            origin: obs.ecef(),
            east: Vec3::new(-so, co, 0.0),
            north: Vec3::new(-sl * co, -sl * so, cl),
            up: Vec3::new(cl * co, cl * so, sl),
        }
    }

    /// Elevation and azimuth (degrees) of a line-of-sight vector.
    ///
    /// Azimuth is measured clockwise from north in [0, 360). At the zenith
    /// it is undefined and reported as 0 with the flag set.
    pub fn look_angles(&self, los: &Vec3) -> (f64, f64, bool) {
        let e = los.dot(&self.east);
        let n = los.dot(&self.north);
        let u = los.dot(&self.up);
        let horiz = e.hypot(n);
        let elevation = u.atan2(horiz).to_degrees();
        if horiz <= 1e-9 * los.norm() {
            return (elevation, 0.0, true);
        }
        let mut az = e.atan2(n).to_degrees();
        if az < 0.0 {
            az += 360.0;
        }
        if az >= 360.0 {
            az -= 360.0;
        }
        (elevation, az, false)
    }
}
