use leopnt::constellation::{build_nominal, AltitudeReference, Constellation, NominalConstellation, ShellSpec};
use leopnt::geodesy::Observer;
use leopnt::observables::{carrier_to_code_doppler, elevation_deg, footprint_radius, observe};
use leopnt::{propagate, Band};
use nalgebra::{Rotation3, Vector3};
use proptest::prelude::*;

// independent constants for the oracles
const MU: f64 = 3.986004418e14;
const WE: f64 = 7.2921150e-5;
const C: f64 = 299792458.0;

fn foc() -> Constellation {
    build_nominal(NominalConstellation::PulsarFoc, AltitudeReference::Mean)
}

/// Earth-fixed position by explicit rotation matrices.
fn oracle_position(radius: f64, inc: f64, raan: f64, u0: f64, t: f64) -> Vector3<f64> {
    let n = (MU / radius.powi(3)).sqrt();
    let u = u0 + n * t;
    let inertial = Rotation3::from_axis_angle(&Vector3::z_axis(), raan)
        * Rotation3::from_axis_angle(&Vector3::x_axis(), inc)
        * Rotation3::from_axis_angle(&Vector3::z_axis(), u)
        * Vector3::new(radius, 0.0, 0.0);
    Rotation3::from_axis_angle(&Vector3::z_axis(), -WE * t) * inertial
}

fn oracle_up(lat: f64, lon: f64) -> Vector3<f64> {
    let (p, l) = (lat.to_radians(), lon.to_radians());
    Vector3::new(p.cos() * l.cos(), p.cos() * l.sin(), p.sin())
}

#[test]
fn nominal_layouts() {
    let c = foc();
    assert_eq!(c.satellites.len(), 12 * 16 + 6 * 11);
    assert_eq!(c.shells.iter().map(ShellSpec::satellite_count).sum::<usize>(), c.satellites.len());
    let gps = build_nominal(NominalConstellation::Gps24, AltitudeReference::Mean);
    assert_eq!(gps.satellites.len(), 24);
    assert_eq!(gps.plane_count(), 6);
    let iov = build_nominal(NominalConstellation::PulsarIov, AltitudeReference::Mean);
    assert_eq!(iov.satellites.len(), 1);
    // epoch layout: RAAN steps by the plane offset
    let s = &c.shells[0];
    for sat in c.satellites.iter().filter(|s| s.shell_index == 0 && s.slot_index == 0) {
        let want = (sat.plane_index as f64 * s.raan_offset_deg).to_radians();
        assert!((sat.raan - want).abs() < 1e-12);
    }
}

#[test]
fn document_roundtrip() {
    for which in NominalConstellation::ALL {
        for r in [AltitudeReference::Mean, AltitudeReference::Equatorial] {
            let c = build_nominal(which, r);
            let back = Constellation::from_document(&c.to_document()).unwrap();
            assert_eq!(back, c);
        }
    }
    assert!(Constellation::from_document("name = x\nshells = 1\n").is_err());
}

#[test]
fn periods_match_kepler() {
    for sat in foc().satellites.iter().step_by(17) {
        let want = 2.0 * std::f64::consts::PI * (sat.orbit_radius.powi(3) / MU).sqrt();
        assert!((sat.period() - want).abs() < 1e-9 * want);
        assert!((sat.speed() - (MU / sat.orbit_radius).sqrt()).abs() < 1e-9);
    }
}

#[test]
fn footprint_matches_direct_geometry() {
    // zero-mask slant range is the tangent length
    for radius in [6_891e3, 7_451e3, 26_560e3] {
        let r: f64 = 6_371e3;
        let d = footprint_radius(radius, r, 0.0).unwrap();
        assert!((d - (radius * radius - r * r).sqrt()).abs() < 1e-6);
    }
}

proptest! {
    #[test]
    fn propagation_matches_rotation_oracle(idx in 0usize..258, t in 0.0f64..259_200.0) {
        let c = foc();
        let sat = &c.satellites[idx];
        let s = propagate(sat, t);
        let o = oracle_position(sat.orbit_radius, sat.inclination, sat.raan, sat.argument_of_latitude_at_epoch, t);
        prop_assert!((s.position - o).norm() < 1e-4);
        prop_assert!((s.position.norm() - sat.orbit_radius).abs() < 1e-6);
    }

    #[test]
    fn derivatives_match_finite_differences(idx in 0usize..258, t in 10.0f64..259_000.0) {
        let c = foc();
        let sat = &c.satellites[idx];
        let h = 0.05;
        let (a, b) = (propagate(sat, t - h), propagate(sat, t + h));
        let s = propagate(sat, t);
        let fd = |x: Vector3<f64>, y: Vector3<f64>| (y - x) / (2.0 * h);
        prop_assert!((fd(a.position, b.position) - s.velocity).norm() < 1e-3);
        prop_assert!((fd(a.velocity, b.velocity) - s.acceleration).norm() < 1e-5);
        prop_assert!((fd(a.acceleration, b.acceleration) - s.jerk).norm() < 1e-7);
    }

    #[test]
    fn observables_match_independent_geometry(
        idx in 0usize..258,
        t in 10.0f64..259_000.0,
        lat in -90.0f64..90.0,
        lon in -180.0f64..180.0,
    ) {
        let c = foc();
        let sat = &c.satellites[idx];
        let obs = Observer::new(lat, lon, 0.0).unwrap();
        let frame = obs.frame();
        let s = propagate(sat, t);
        let o = observe(&frame, sat, &s);
        let los = s.position - obs.ecef();
        let el = (los.normalize().dot(&oracle_up(lat, lon))).asin().to_degrees();
        prop_assert!((o.elevation - el).abs() < 1e-7);
        prop_assert!((elevation_deg(&frame, &s) - el).abs() < 1e-7);
        let range = |tt: f64| (propagate(sat, tt).position - obs.ecef()).norm();
        prop_assert!((o.range - los.norm()).abs() < 1e-6);
        let h = 0.05;
        let rr = (range(t + h) - range(t - h)) / (2.0 * h);
        prop_assert!((o.range_rate - rr).abs() < 1e-4);
        let ra = (range(t + h) - 2.0 * range(t) + range(t - h)) / (h * h);
        prop_assert!((o.range_accel - ra).abs() < 5e-3);
        // carrier and code Doppler scale
        let f = Band::X1.carrier();
        prop_assert!((o.doppler(Band::X1) + o.range_rate * f / C).abs() < 1e-9);
        prop_assert!((o.doppler_rate(Band::X5) + o.range_accel * Band::X5.carrier() / C).abs() < 1e-9);
        prop_assert!((carrier_to_code_doppler(o.doppler(Band::X1), Band::X1) - o.code_doppler(Band::X1)).abs() < 1e-9);
        prop_assert!(o.azimuth >= 0.0 && o.azimuth < 360.0);
    }
}
