//! Nominal Walker-style constellations and circular two-body propagation
//! into the Earth-fixed frame.
//!
//! At `t = 0` the Earth-fixed and inertial frames coincide. Plane `p` of a
//! shell sits at RAAN `p * raan_offset` and slot `s` at argument of latitude
//! `s * anomaly_offset + p * interplane_phasing`. Explicit slot tables
//! (used for the GPS baseline) override the uniform layout.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

use crate::constants::{EARTH_MEAN_RADIUS, MU_EARTH, OMEGA_EARTH, WGS84_A};
use crate::error::{Error, Result};
use crate::kv::{KvDocument, KvWriter};

pub type Vec3 = Vector3<f64>;

/// Earth radius used to turn a nominal altitude into an orbit radius.
///
/// The nominal tables quote radii as mean radius + altitude, while range
/// extremes seen by a WGS84 observer are only reproduced with the
/// equatorial radius + altitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AltitudeReference {
    #[default]
    Mean,
    Equatorial,
}

impl AltitudeReference {
    pub fn earth_radius(self) -> f64 {
        match self {
            AltitudeReference::Mean => EARTH_MEAN_RADIUS,
            AltitudeReference::Equatorial => WGS84_A,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AltitudeReference::Mean => "mean",
            AltitudeReference::Equatorial => "equatorial",
        }
    }
}

impl FromStr for AltitudeReference {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mean" => Ok(AltitudeReference::Mean),
            "equatorial" => Ok(AltitudeReference::Equatorial),
            other => Err(Error::config(format!(
                "unknown altitude reference `{other}` (expected mean|equatorial)"
            ))),
        }
    }
}

impl fmt::Display for AltitudeReference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Built-in constellation identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NominalConstellation {
    PulsarFoc,
    PulsarIov,
    Gps24,
}

impl NominalConstellation {
    pub const ALL: [NominalConstellation; 3] = [
        NominalConstellation::PulsarFoc,
        NominalConstellation::PulsarIov,
        NominalConstellation::Gps24,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NominalConstellation::PulsarFoc => "pulsar-foc",
            NominalConstellation::PulsarIov => "pulsar-iov",
            NominalConstellation::Gps24 => "gps-24",
        }
    }
}

impl FromStr for NominalConstellation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pulsar-foc" => Ok(NominalConstellation::PulsarFoc),
            "pulsar-iov" => Ok(NominalConstellation::PulsarIov),
            "gps-24" | "gps" => Ok(NominalConstellation::Gps24),
            other => Err(Error::config(format!(
                "unknown constellation `{other}` (expected pulsar-foc|pulsar-iov|gps-24)"
            ))),
        }
    }
}

impl fmt::Display for NominalConstellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Explicit (RAAN, argument of latitude) for one slot, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotPhase {
    pub raan_deg: f64,
    pub arg_lat_deg: f64,
}

/// One homogeneous shell of circular orbits.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellSpec {
    pub name: String,
    pub planes: usize,
    pub raan_offset_deg: f64,
    pub sats_per_plane: usize,
    pub anomaly_offset_deg: f64,
    pub interplane_phasing_deg: f64,
    pub inclination_deg: f64,
    pub altitude_km: f64,
    pub eccentricity: f64,
    /// SVID of plane 0, slot 0. SVIDs increase slot-major within a plane.
    pub first_svid: u32,
    /// PRN ID of the first satellite (or first plane when `prn_per_plane`).
    pub first_prn: u32,
    /// Every satellite of a plane shares the plane's PRN ID.
    pub prn_per_plane: bool,
    /// Plane-major slot table; empty means uniform spacing.
    pub slots: Vec<SlotPhase>,
}

impl ShellSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn uniform(
        name: &str,
        planes: usize,
        sats_per_plane: usize,
        interplane_phasing_deg: f64,
        inclination_deg: f64,
        altitude_km: f64,
        first_svid: u32,
        first_prn: u32,
        prn_per_plane: bool,
    ) -> Self {
        Self {
            name: name.to_string(),
            planes,
            raan_offset_deg: 360.0 / planes as f64,
            sats_per_plane,
            anomaly_offset_deg: 360.0 / sats_per_plane as f64,
            interplane_phasing_deg,
            inclination_deg,
            altitude_km,
            eccentricity: 0.0,
            first_svid,
            first_prn,
            prn_per_plane,
            slots: Vec::new(),
        }
    }

    pub fn satellite_count(&self) -> usize {
        self.planes * self.sats_per_plane
    }

    pub fn orbit_radius(&self, reference: AltitudeReference) -> f64 {
        reference.earth_radius() + self.altitude_km * 1e3
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::config(format!("shell `{}`: {msg}", self.name)));
        if self.planes == 0 || self.sats_per_plane == 0 {
            return fail("planes and sats_per_plane must be positive".into());
        }
        if self.eccentricity != 0.0 {
            return fail(format!(
                "only circular orbits are supported (eccentricity {})",
                self.eccentricity
            ));
        }
        if (self.raan_offset_deg * self.planes as f64 - 360.0).abs() > 1e-6 {
            return fail(format!(
                "raan_offset {} x {} planes != 360",
                self.raan_offset_deg, self.planes
            ));
        }
        if (self.anomaly_offset_deg * self.sats_per_plane as f64 - 360.0).abs() > 1e-6 {
            return fail(format!(
                "anomaly_offset {} x {} sats != 360",
                self.anomaly_offset_deg, self.sats_per_plane
            ));
        }
        if !(0.0..=180.0).contains(&self.inclination_deg) {
            return fail(format!("inclination {} out of [0, 180]", self.inclination_deg));
        }
        if !(self.altitude_km > 0.0) {
            return fail(format!("altitude {} km must be positive", self.altitude_km));
        }
        if !self.slots.is_empty() && self.slots.len() != self.satellite_count() {
            return fail(format!(
                "slot table has {} entries, expected {}",
                self.slots.len(),
                self.satellite_count()
            ));
        }
        Ok(())
    }

    fn slot_phase(&self, plane: usize, slot: usize) -> SlotPhase {
        if self.slots.is_empty() {
            SlotPhase {
                raan_deg: plane as f64 * self.raan_offset_deg,
                arg_lat_deg: slot as f64 * self.anomaly_offset_deg
                    + plane as f64 * self.interplane_phasing_deg,
            }
        } else {
            self.slots[plane * self.sats_per_plane + slot]
        }
    }
}

/// Period, mean motion and inertial speed of a circular orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitalConstants {
    pub period_s: f64,
    pub mean_motion: f64,
    pub speed: f64,
}

pub fn orbital_constants(orbit_radius: f64) -> Result<OrbitalConstants> {
    if !orbit_radius.is_finite() || orbit_radius <= WGS84_A {
        return Err(Error::domain(format!(
            "orbit radius {orbit_radius} m is not above the Earth surface"
        )));
    }
    let mean_motion = (MU_EARTH / orbit_radius.powi(3)).sqrt();
    Ok(OrbitalConstants {
        period_s: TAU / mean_motion,
        mean_motion,
        speed: (MU_EARTH / orbit_radius).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Satellite {
    pub svid: u32,
    pub shell_index: usize,
    /// Constellation-wide plane index (planes of later shells follow).
    pub plane_index: usize,
    pub slot_index: usize,
    pub prn_id: u32,
    pub orbit_radius: f64,
    pub inclination: f64,
    pub raan: f64,
    pub argument_of_latitude_at_epoch: f64,
    mean_motion: f64,
    node_axis: Vec3,
    normal_axis: Vec3,
}

impl Satellite {
    pub fn new(
        svid: u32,
        shell_index: usize,
        plane_index: usize,
        slot_index: usize,
        prn_id: u32,
        orbit_radius: f64,
        inclination: f64,
        raan: f64,
        argument_of_latitude_at_epoch: f64,
    ) -> Result<Self> {
        let constants = orbital_constants(orbit_radius)?;
        let (sin_o, cos_o) = raan.sin_cos();
        let (sin_i, cos_i) = inclination.sin_cos();
        Ok(Self {
            svid,
            shell_index,
            plane_index,
            slot_index,
            prn_id,
            orbit_radius,
            inclination,
            raan,
            argument_of_latitude_at_epoch,
            mean_motion: constants.mean_motion,
            node_axis: Vec3::new(cos_o, sin_o, 0.0),
            normal_axis: Vec3::new(-sin_o * cos_i, cos_o * cos_i, sin_i),
        })
    }

    pub fn mean_motion(&self) -> f64 {
        self.mean_motion
    }

    pub fn period(&self) -> f64 {
        TAU / self.mean_motion
    }

    pub fn speed(&self) -> f64 {
        self.mean_motion * self.orbit_radius
    }

    pub fn argument_of_latitude(&self, t: f64) -> f64 {
        self.argument_of_latitude_at_epoch + self.mean_motion * t
    }

    /// Inertial position and velocity at `t` seconds after epoch.
    pub fn inertial(&self, t: f64) -> (Vec3, Vec3) {
        let (s, c) = self.argument_of_latitude(t).sin_cos();
        let a = self.orbit_radius;
        let v = a * self.mean_motion;
        (
            (self.node_axis * c + self.normal_axis * s) * a,
            (self.normal_axis * c - self.node_axis * s) * v,
        )
    }
}

/// Earth-fixed kinematic state; acceleration and jerk feed the Doppler-rate
/// and Doppler-rate-derivative observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcefState {
    pub time: f64,
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
    pub jerk: Vec3,
}

/// Rotate an inertial vector into the Earth-fixed frame at Earth angle `theta`.
#[inline]
fn to_fixed(v: &Vec3, sin_t: f64, cos_t: f64) -> Vec3 {
    Vec3::new(cos_t * v.x + sin_t * v.y, -sin_t * v.x + cos_t * v.y, v.z)
}

#[inline]
fn cross_omega(v: &Vec3) -> Vec3 {
    // (0, 0, w) x v
    Vec3::new(-OMEGA_EARTH * v.y, OMEGA_EARTH * v.x, 0.0)
}

/// Earth-fixed position, velocity, acceleration and jerk of `sat` at `t`.
pub fn propagate(sat: &Satellite, t: f64) -> EcefState {
    let (r_i, v_i) = sat.inertial(t);
    let n2 = sat.mean_motion * sat.mean_motion;
    let (sin_t, cos_t) = (OMEGA_EARTH * t).sin_cos();

    let r = to_fixed(&r_i, sin_t, cos_t);
    let vi = to_fixed(&v_i, sin_t, cos_t);
    let ai = -n2 * r;
    let ji = -n2 * vi;

    // d/dt of a rotating-frame representation: (x')_fixed - w x x_fixed
    let v = vi - cross_omega(&r);
    let a = ai - 2.0 * cross_omega(&v) - cross_omega(&cross_omega(&r));
    let j = ji - cross_omega(&ai) - 2.0 * cross_omega(&a) - cross_omega(&cross_omega(&v));
    EcefState {
        time: t,
        position: r,
        velocity: v,
        acceleration: a,
        jerk: j,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    pub name: String,
    pub altitude_reference: AltitudeReference,
    pub epoch: f64,
    pub shells: Vec<ShellSpec>,
    pub satellites: Vec<Satellite>,
}

impl Constellation {
    pub fn from_shells(
        name: &str,
        shells: Vec<ShellSpec>,
        altitude_reference: AltitudeReference,
        epoch: f64,
    ) -> Result<Self> {
        let mut satellites = Vec::new();
        let mut plane_base = 0;
        for (shell_index, shell) in shells.iter().enumerate() {
            shell.validate()?;
            let radius = shell.orbit_radius(altitude_reference);
            let inclination = shell.inclination_deg.to_radians();
            for plane in 0..shell.planes {
                for slot in 0..shell.sats_per_plane {
                    let offset = (plane * shell.sats_per_plane + slot) as u32;
                    let prn = if shell.prn_per_plane {
                        shell.first_prn + plane as u32
                    } else {
                        shell.first_prn + offset
                    };
                    let phase = shell.slot_phase(plane, slot);
                    satellites.push(Satellite::new(
                        shell.first_svid + offset,
                        shell_index,
                        plane_base + plane,
                        slot,
                        prn,
                        radius,
                        inclination,
                        phase.raan_deg.to_radians().rem_euclid(TAU),
                        phase.arg_lat_deg.to_radians().rem_euclid(TAU),
                    )?);
                }
            }
            plane_base += shell.planes;
        }
        let mut seen = std::collections::BTreeSet::new();
        for sat in &satellites {
            if !seen.insert(sat.svid) {
                return Err(Error::config(format!("duplicate SVID {}", sat.svid)));
            }
        }
        Ok(Self {
            name: name.to_string(),
            altitude_reference,
            epoch,
            shells,
            satellites,
        })
    }

    pub fn plane_count(&self) -> usize {
        self.shells.iter().map(|s| s.planes).sum()
    }

    pub fn shell_index(&self, name: &str) -> Option<usize> {
        self.shells.iter().position(|s| s.name == name)
    }

    pub fn satellite(&self, svid: u32) -> Option<&Satellite> {
        self.satellites.iter().find(|s| s.svid == svid)
    }

    /// Dump as a `key = value` document readable by [`Constellation::from_document`].
    pub fn to_document(&self) -> String {
        let mut w = KvWriter::new();
        w.comment("constellation definition");
        w.entry("name", &self.name)
            .entry("altitude_reference", self.altitude_reference)
            .entry("epoch_s", self.epoch)
            .entry("shells", self.shells.len());
        for (i, sh) in self.shells.iter().enumerate() {
            let k = |field: &str| format!("shell.{i}.{field}");
            w.entry(&k("name"), &sh.name)
                .entry(&k("planes"), sh.planes)
                .entry(&k("raan_offset_deg"), sh.raan_offset_deg)
                .entry(&k("sats_per_plane"), sh.sats_per_plane)
                .entry(&k("anomaly_offset_deg"), sh.anomaly_offset_deg)
                .entry(&k("interplane_phasing_deg"), sh.interplane_phasing_deg)
                .entry(&k("inclination_deg"), sh.inclination_deg)
                .entry(&k("altitude_km"), sh.altitude_km)
                .entry(&k("eccentricity"), sh.eccentricity)
                .entry(&k("first_svid"), sh.first_svid)
                .entry(&k("first_prn"), sh.first_prn)
                .entry(&k("prn_per_plane"), sh.prn_per_plane);
            for (j, slot) in sh.slots.iter().enumerate() {
                w.entry(
                    &format!("shell.{i}.slot.{j}"),
                    format!("{} {}", slot.raan_deg, slot.arg_lat_deg),
                );
            }
        }
        w.finish()
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let doc = KvDocument::parse(text)?;
        Self::from_kv(&doc, None)
    }

    /// Build from an already-parsed document. `reference_override` replaces
    /// the document's altitude reference when given.
    pub fn from_kv(doc: &KvDocument, reference_override: Option<AltitudeReference>) -> Result<Self> {
        let name: String = doc.parse_req("name")?;
        let reference = match reference_override {
            Some(r) => r,
            None => doc
                .parse_opt::<AltitudeReference>("altitude_reference")?
                .unwrap_or_default(),
        };
        let epoch = doc.parse_opt::<f64>("epoch_s")?.unwrap_or(0.0);
        let count: usize = doc.parse_req("shells")?;
        let mut shells = Vec::with_capacity(count);
        for i in 0..count {
            let k = |field: &str| format!("shell.{i}.{field}");
            let planes: usize = doc.parse_req(&k("planes"))?;
            let sats_per_plane: usize = doc.parse_req(&k("sats_per_plane"))?;
            let mut slots = Vec::new();
            for j in 0..planes * sats_per_plane {
                let Some(raw) = doc.get(&format!("shell.{i}.slot.{j}")) else {
                    break;
                };
                let parts: Vec<f64> = raw
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::config(format!("shell.{i}.slot.{j}: {e}")))?;
                if parts.len() != 2 {
                    return Err(Error::config(format!(
                        "shell.{i}.slot.{j}: expected `raan_deg arg_lat_deg`"
                    )));
                }
                slots.push(SlotPhase {
                    raan_deg: parts[0],
                    arg_lat_deg: parts[1],
                });
            }
            shells.push(ShellSpec {
                name: doc.parse_req(&k("name"))?,
                planes,
                raan_offset_deg: doc
                    .parse_opt(&k("raan_offset_deg"))?
                    .unwrap_or(360.0 / planes.max(1) as f64),
                sats_per_plane,
                anomaly_offset_deg: doc
                    .parse_opt(&k("anomaly_offset_deg"))?
                    .unwrap_or(360.0 / sats_per_plane.max(1) as f64),
                interplane_phasing_deg: doc.parse_opt(&k("interplane_phasing_deg"))?.unwrap_or(0.0),
                inclination_deg: doc.parse_req(&k("inclination_deg"))?,
                altitude_km: doc.parse_req(&k("altitude_km"))?,
                eccentricity: doc.parse_opt(&k("eccentricity"))?.unwrap_or(0.0),
                first_svid: doc.parse_opt(&k("first_svid"))?.unwrap_or(1),
                first_prn: doc.parse_opt(&k("first_prn"))?.unwrap_or(1),
                prn_per_plane: doc.parse_opt(&k("prn_per_plane"))?.unwrap_or(true),
                slots,
            });
        }
        Self::from_shells(&name, shells, reference, epoch)
    }
}

/// GPS 24-slot baseline: (RAAN deg, argument of latitude deg) per slot,
/// planes A..F, four slots each.
const GPS_BASELINE_SLOTS: [(f64, f64); 24] = [
    (272.847, 268.126),
    (272.847, 161.786),
    (272.847, 11.676),
    (272.847, 41.806),
    (332.847, 80.956),
    (332.847, 173.336),
    (332.847, 309.976),
    (332.847, 204.376),
    (32.847, 111.876),
    (32.847, 11.796),
    (32.847, 339.666),
    (32.847, 241.556),
    (92.847, 135.226),
    (92.847, 265.446),
    (92.847, 35.156),
    (92.847, 167.356),
    (152.847, 197.046),
    (152.847, 302.596),
    (152.847, 66.066),
    (152.847, 333.686),
    (212.847, 238.886),
    (212.847, 345.226),
    (212.847, 105.206),
    (212.847, 135.346),
];

pub fn nominal_shells(which: NominalConstellation) -> Vec<ShellSpec> {
    match which {
        NominalConstellation::PulsarFoc => vec![
            ShellSpec::uniform("inclined", 12, 16, 22.5 / 12.0, 53.0, 1080.0, 1, 1, true),
            ShellSpec::uniform("polar", 6, 11, 360.0 / 11.0 / 6.0, 97.0, 1080.0, 193, 13, true),
        ],
        NominalConstellation::PulsarIov => {
            vec![ShellSpec::uniform("iov", 1, 1, 0.0, 97.0, 520.0, 1, 1, true)]
        }
        NominalConstellation::Gps24 => {
            let mut shell = ShellSpec::uniform("gps", 6, 4, 0.0, 55.0, 20180.0, 1, 1, false);
            shell.slots = GPS_BASELINE_SLOTS
                .iter()
                .map(|&(raan_deg, arg_lat_deg)| SlotPhase {
                    raan_deg,
                    arg_lat_deg,
                })
                .collect();
            vec![shell]
        }
    }
}

/// One of the built-in constellations.
pub fn build_nominal(which: NominalConstellation, reference: AltitudeReference) -> Constellation {
    Constellation::from_shells(which.as_str(), nominal_shells(which), reference, 0.0)
        .expect("built-in constellation definitions are valid")
}

/// Name-based variant of [`build_nominal`].
pub fn build_nominal_named(name: &str, reference: AltitudeReference) -> Result<Constellation> {
    Ok(build_nominal(name.parse()?, reference))
}
