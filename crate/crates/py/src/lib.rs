//! Python bindings: constellations and observables, sweeps and report
//! tables, spreading codes, the CSK modem and the acquisition planner.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use leopnt::codes::generators::parse_state;
use leopnt::codes::{self, ChipSequence, Family, LfsrSpec};
use leopnt::metrics::{self as lm, Metric};
use leopnt::planner::{self as lp, OrbitClass};
use leopnt::sim::TimeGrid;
use leopnt::{AltitudeReference, Band};

create_exception!(leopnt, LeopntError, PyValueError);

fn err(e: leopnt::Error) -> PyErr {
    LeopntError::new_err(e.to_string())
}

fn band(name: &str) -> PyResult<Band> {
    name.parse().map_err(err)
}

fn chips(seq: &ChipSequence) -> Vec<i8> {
    seq.chips.clone()
}

fn sequence(c: Vec<i8>, chip_rate: f64) -> PyResult<ChipSequence> {
    ChipSequence::new(c, Family::Custom, chip_rate).map_err(err)
}

/// A satellite constellation at epoch zero.
#[pyclass(module = "leopnt", frozen)]
struct Constellation {
    inner: leopnt::Constellation,
}

#[pymethods]
impl Constellation {
    /// Built-in layout: "pulsar-foc", "pulsar-iov" or "gps-24".
    #[staticmethod]
    #[pyo3(signature = (name, reference = "mean"))]
    fn nominal(name: &str, reference: &str) -> PyResult<Self> {
        let r: AltitudeReference = reference.parse().map_err(err)?;
        let inner = leopnt::constellation::build_nominal_named(name, r).map_err(err)?;
        Ok(Self { inner })
    }

    /// Parse a key = value constellation definition.
    #[staticmethod]
    fn from_document(text: &str) -> PyResult<Self> {
        Ok(Self { inner: leopnt::Constellation::from_document(text).map_err(err)? })
    }

    fn to_document(&self) -> String {
        self.inner.to_document()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn shells(&self) -> Vec<String> {
        self.inner.shells.iter().map(|s| s.name.clone()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.satellites.len()
    }

    /// Earth-fixed positions (m) of every satellite at `t` seconds.
    fn positions(&self, t: f64) -> Vec<(f64, f64, f64)> {
        self.inner
            .satellites
            .iter()
            .map(|s| {
                let p = leopnt::propagate(s, t).position;
                (p.x, p.y, p.z)
            })
            .collect()
    }

    /// Observables of the satellites at or above `mask` degrees.
    #[pyo3(signature = (latitude, t, longitude = 0.0, height_m = 0.0, mask = 0.0))]
    fn observe(&self, latitude: f64, t: f64, longitude: f64, height_m: f64, mask: f64) -> PyResult<Vec<Observable>> {
        let obs = leopnt::Observer::new(latitude, longitude, height_m).map_err(err)?;
        let frame = obs.frame();
        Ok(self
            .inner
            .satellites
            .iter()
            .map(|s| leopnt::observe(&frame, s, &leopnt::propagate(s, t)))
            .filter(|o| o.elevation >= mask)
            .map(|inner| Observable { inner })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Constellation({:?}, {} satellites)", self.inner.name, self.inner.satellites.len())
    }
}

/// One satellite as seen by one observer.
#[pyclass(module = "leopnt", frozen)]
struct Observable {
    inner: leopnt::Observable,
}

#[pymethods]
impl Observable {
    #[getter]
    fn time(&self) -> f64 {
        self.inner.time
    }
    #[getter]
    fn svid(&self) -> u32 {
        self.inner.svid
    }
    #[getter]
    fn prn(&self) -> u32 {
        self.inner.prn_id
    }
    #[getter]
    fn plane(&self) -> usize {
        self.inner.plane_index
    }
    #[getter]
    fn elevation(&self) -> f64 {
        self.inner.elevation
    }
    #[getter]
    fn azimuth(&self) -> f64 {
        self.inner.azimuth
    }
    #[getter]
    fn range(&self) -> f64 {
        self.inner.range
    }
    #[getter]
    fn range_rate(&self) -> f64 {
        self.inner.range_rate
    }
    #[getter]
    fn range_accel(&self) -> f64 {
        self.inner.range_accel
    }

    /// Carrier Doppler in Hz, positive while approaching.
    fn doppler(&self, band_name: &str) -> PyResult<f64> {
        Ok(self.inner.doppler(band(band_name)?))
    }

    fn doppler_rate(&self, band_name: &str) -> PyResult<f64> {
        Ok(self.inner.doppler_rate(band(band_name)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Observable(svid={}, el={:.2}, az={:.2}, range={:.1})",
            self.inner.svid, self.inner.elevation, self.inner.azimuth, self.inner.range
        )
    }
}

/// Per-latitude statistics of one sweep.
#[pyclass(module = "leopnt", frozen)]
struct SweepResults {
    inner: lm::SweepResults,
}

#[pymethods]
impl SweepResults {
    #[getter]
    fn latitudes(&self) -> Vec<f64> {
        self.inner.latitudes()
    }

    #[getter]
    fn masks(&self) -> Vec<f64> {
        self.inner.masks.clone()
    }

    /// Rows (latitude, mask, min, avg, max, count) of a metric; empty cells are None.
    #[pyo3(signature = (metric, group = "all"))]
    #[allow(clippy::type_complexity)]
    fn table(&self, metric: &str, group: &str) -> PyResult<Vec<(f64, f64, Option<(f64, f64, f64, u64)>)>> {
        let t = self.inner.table(Metric::parse(metric).map_err(err)?, group).map_err(err)?;
        let mut out = Vec::new();
        for (i, &lat) in t.latitudes.iter().enumerate() {
            for (j, &mask) in t.masks.iter().enumerate() {
                out.push((lat, mask, t.cells[i][j].map(|c| (c.min, c.avg, c.max, c.count))));
            }
        }
        Ok(out)
    }

    /// Flat statistics CSV, the input of `report`.
    fn stats_csv(&self) -> PyResult<String> {
        let mut store = lm::StatsStore::new();
        store.insert_results(&self.inner).map_err(err)?;
        let mut b = Vec::new();
        store.write_csv(&mut b).map_err(err)?;
        Ok(String::from_utf8(b).expect("csv is utf-8"))
    }
}

/// Sweep observers at `latitudes` over `duration_days`.
#[pyfunction]
#[pyo3(signature = (constellation, latitudes, duration_days = 3.0, step_s = 1.0, masks = vec![0.0, 5.0, 10.0, 15.0, 20.0], pair_step_s = 1.0, workers = None))]
fn run_sweep(
    py: Python<'_>,
    constellation: &Constellation,
    latitudes: Vec<f64>,
    duration_days: f64,
    step_s: f64,
    masks: Vec<f64>,
    pair_step_s: f64,
    workers: Option<usize>,
) -> PyResult<SweepResults> {
    let grid = TimeGrid::days(duration_days, step_s).map_err(err)?;
    let cfg = lm::MetricsConfig { masks, ..Default::default() }.with_pair_period(&grid, pair_step_s);
    let c = &constellation.inner;
    let inner = py
        .detach(|| lm::run_sweep(c, &latitudes, 0.0, 0.0, &grid, &cfg, workers))
        .map_err(err)?;
    Ok(SweepResults { inner })
}

/// Markdown report tables from one or more `stats_csv` texts.
#[pyfunction]
fn report(tables: Vec<u8>, stats: Vec<String>) -> PyResult<String> {
    let mut store = lm::StatsStore::new();
    for s in &stats {
        store.merge(lm::StatsStore::read_csv(s.as_bytes()).map_err(err)?);
    }
    let mut kin = Vec::new();
    if tables.contains(&1) {
        for n in leopnt::NominalConstellation::ALL {
            let c = leopnt::build_nominal(n, AltitudeReference::Mean);
            kin.extend(leopnt::kinematics::shell_kinematics(&c, None).map_err(err)?);
        }
        lm::tables::apply_store(&mut kin, &store);
    }
    let out = lm::report_tables(&tables, &store, &kin).map_err(err)?;
    Ok(out.iter().map(|t| t.to_markdown()).collect::<Vec<_>>().join("\n"))
}

/// Ground distance to the visibility edge, metres.
#[pyfunction]
#[pyo3(signature = (orbit_radius, observer_radius = leopnt::constants::EARTH_MEAN_RADIUS, mask_deg = 0.0))]
fn footprint_radius(orbit_radius: f64, observer_radius: f64, mask_deg: f64) -> PyResult<f64> {
    leopnt::observables::footprint_radius(orbit_radius, observer_radius, mask_deg).map_err(err)
}

/// Free-space path-loss difference between two ranges, dB.
#[pyfunction]
fn fspl_delta_db(range_a: f64, range_b: f64) -> PyResult<f64> {
    leopnt::observables::fspl_delta_db(range_a, range_b).map_err(err)
}

/// LFSR m-sequence chips (+1/-1).
#[pyfunction]
#[pyo3(signature = (degree, taps, state = None, length = None))]
fn msequence(degree: usize, taps: Vec<usize>, state: Option<&str>, length: Option<usize>) -> PyResult<Vec<i8>> {
    let init = match state {
        Some(s) => parse_state(s).map_err(err)?,
        None => vec![1; degree],
    };
    let spec = LfsrSpec::new(degree, &taps, &init).map_err(err)?;
    let n = length.unwrap_or((1usize << degree) - 1);
    Ok(chips(&codes::msequence(&spec, n).map_err(err)?))
}

fn base_pair() -> PyResult<(ChipSequence, ChipSequence)> {
    let g = codes::X1Generator::default();
    let u = codes::msequence(&LfsrSpec::new(10, &g.xa_taps, &[1; 10]).map_err(err)?, 1023).map_err(err)?;
    let v = codes::msequence(&LfsrSpec::new(10, &g.xb_taps, &[1; 10]).map_err(err)?, 1023).map_err(err)?;
    Ok((u, v))
}

/// The 32 codes of the 1023-chip Kasami small set.
#[pyfunction]
fn kasami_small_set() -> PyResult<Vec<Vec<i8>>> {
    let (u, _) = base_pair()?;
    Ok(codes::kasami_small_set(&u).map_err(err)?.iter().map(chips).collect())
}

/// The 1025 codes of the 1023-chip Gold family.
#[pyfunction]
fn gold_family() -> PyResult<Vec<Vec<i8>>> {
    let (u, v) = base_pair()?;
    Ok(codes::gold_family(&u, &v).map_err(err)?.iter().map(chips).collect())
}

#[pyfunction]
fn x1_code(xa: &str, xb: &str, xc: &str) -> PyResult<Vec<i8>> {
    let (a, b, c) = (parse_state(xa).map_err(err)?, parse_state(xb).map_err(err)?, parse_state(xc).map_err(err)?);
    Ok(chips(&codes::x1_generator(&a, &b, &c).map_err(err)?))
}

#[pyfunction]
fn x5_code(xb: &str) -> PyResult<Vec<i8>> {
    Ok(chips(&codes::x5_generator(&parse_state(xb).map_err(err)?).map_err(err)?))
}

/// Circular correlation `r[k] = sum a[i] b[i + k]`.
#[pyfunction]
fn circular_correlation(a: Vec<i8>, b: Vec<i8>) -> PyResult<Vec<i64>> {
    let (a, b) = (sequence(a, 0.0)?, sequence(b, 0.0)?);
    Ok(codes::circular_correlation(&a, &b).map_err(err)?.values)
}

/// (max auto, max cross) correlation magnitudes over a code family.
#[pyfunction]
fn family_correlation(family: Vec<Vec<i8>>) -> PyResult<(i64, i64)> {
    let seqs = family.into_iter().map(|c| sequence(c, 0.0)).collect::<PyResult<Vec<_>>>()?;
    let f = codes::family_correlation(&seqs).map_err(err)?;
    Ok((f.max_auto, f.max_cross))
}

/// Two code periods of `prn` shifted left by `symbol`.
#[pyfunction]
fn csk_modulate(prn: Vec<i8>, symbol: u32) -> PyResult<Vec<i8>> {
    leopnt::csk::csk_modulate(&sequence(prn, Band::X5.spec().chip_rate)?, symbol).map_err(err)
}

/// (symbol, metric, margin) of a received block.
#[pyfunction]
#[pyo3(signature = (rx, prn, fft = false))]
fn csk_demodulate(rx: Vec<f64>, prn: Vec<i8>, fft: bool) -> PyResult<(u8, f64, f64)> {
    let prn = sequence(prn, Band::X5.spec().chip_rate)?;
    let d = if fft {
        leopnt::csk::FftDemodulator::new(&prn).and_then(|m| m.demodulate(&rx))
    } else {
        leopnt::csk::csk_demodulate(&rx, &prn)
    }
    .map_err(err)?;
    Ok((d.value, d.metric, d.margin))
}

/// Ordered Doppler search bins.
#[pyclass(module = "leopnt", frozen)]
struct SearchPlan {
    inner: lp::SearchPlan,
}

#[pymethods]
impl SearchPlan {
    /// (center, lo, hi) in search order, Hz.
    #[getter]
    fn bins(&self) -> Vec<(f64, f64, f64)> {
        self.inner.bins.iter().map(|b| (b.center, b.lo, b.hi)).collect()
    }

    #[getter]
    fn limit(&self) -> f64 {
        self.inner.f_limit
    }

    #[getter]
    fn exclusions(&self) -> Vec<(f64, f64)> {
        self.inner.exclusions.clone()
    }

    /// Search position of the bin holding `doppler`.
    fn rank_of(&self, doppler: f64) -> Option<usize> {
        self.inner.rank_of(doppler)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.bins.len()
    }
}

fn strategy(name: &str) -> PyResult<lp::Strategy> {
    match name {
        "large-positive-first" => Ok(lp::Strategy::LargePositiveFirst),
        "high-elevation-first" => Ok(lp::Strategy::HighElevationFirst),
        "zero-first" => Ok(lp::Strategy::ZeroFirst),
        other => Err(LeopntError::new_err(format!("unknown strategy `{other}`"))),
    }
}

/// Doppler search plan. `phase` is "cold" or "operation"; a `mask` makes the
/// environment urban.
#[pyfunction]
#[pyo3(signature = (phase, band_name, orbit, bin_width, mask = None, strategy_name = None, tracked = None))]
fn plan_doppler(
    phase: &str,
    band_name: &str,
    orbit: &str,
    bin_width: f64,
    mask: Option<f64>,
    strategy_name: Option<&str>,
    tracked: Option<Vec<f64>>,
) -> PyResult<SearchPlan> {
    let scenario = lp::Scenario {
        phase: match phase {
            "cold" => lp::Phase::ColdStart,
            "operation" => lp::Phase::Operation,
            other => return Err(LeopntError::new_err(format!("unknown phase `{other}`"))),
        },
        environment: mask.map_or(lp::Environment::OpenSky, |m| lp::Environment::Urban { mask: m }),
        strategy: strategy_name.map(strategy).transpose()?,
        prn_state: tracked.map_or(lp::PrnState::NewPrn, lp::PrnState::Tracked),
    };
    let orbit: OrbitClass = orbit.parse().map_err(err)?;
    let inner = lp::plan_doppler(&scenario, band(band_name)?, orbit, lp::PlanOptions::new(bin_width), &lp::Calibration::builtin())
        .map_err(err)?;
    Ok(SearchPlan { inner })
}

/// Whole-millisecond overlay delay candidates. Relative mode when
/// `clock_uncertainty_ms` is None, precise-time mode otherwise.
#[pyfunction]
#[pyo3(signature = (mask = 0.0, clock_uncertainty_ms = None, sign = None, gps = false))]
fn overlay_delays(mask: f64, clock_uncertainty_ms: Option<f64>, sign: Option<&str>, gps: bool) -> PyResult<Vec<i64>> {
    let bounds = if gps { lp::DelayBounds::gps() } else { lp::DelayBounds::pulsar() };
    let mode = match clock_uncertainty_ms {
        Some(c) => lp::DelayMode::PreciseTime { mask, clock_uncertainty_ms: c },
        None => lp::DelayMode::RelativeToTracked {
            mask,
            sign: match sign {
                None => None,
                Some("later") => Some(lp::SignHint::Later),
                Some("earlier") => Some(lp::SignHint::Earlier),
                Some(other) => return Err(LeopntError::new_err(format!("unknown sign `{other}`"))),
            },
        },
    };
    Ok(lp::overlay_delay_candidates(mode, &bounds).map_err(err)?.values().to_vec())
}

/// Longest coherent integration (s) for a Doppler rate and phase-error fraction.
#[pyfunction]
#[pyo3(signature = (rate, fraction = 1.0))]
fn max_coherent_integration(rate: f64, fraction: f64) -> PyResult<Option<f64>> {
    Ok(lp::max_coherent_integration(rate, fraction).map_err(err)?.seconds())
}

/// Seconds for the code to slip `chips` at `code_doppler` chip/s.
#[pyfunction]
fn time_for_shift(code_doppler: f64, chips: f64) -> PyResult<Option<f64>> {
    Ok(lp::time_for_shift(code_doppler, chips).map_err(err)?.seconds())
}

/// Carrier-domain value expressed on the code of `band_name`.
#[pyfunction]
fn carrier_to_code(band_name: &str, value: f64) -> PyResult<f64> {
    Ok(lp::carrier_to_code(band(band_name)?, value))
}

/// Module initializer; public so the module can be built inside an
/// embedded interpreter.
#[pymodule]
#[pyo3(name = "leopnt")]
pub fn leopnt_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LeopntError", m.py().get_type::<LeopntError>())?;
    m.add_class::<Constellation>()?;
    m.add_class::<Observable>()?;
    m.add_class::<SweepResults>()?;
    m.add_class::<SearchPlan>()?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(footprint_radius, m)?)?;
    m.add_function(wrap_pyfunction!(fspl_delta_db, m)?)?;
    m.add_function(wrap_pyfunction!(msequence, m)?)?;
    m.add_function(wrap_pyfunction!(kasami_small_set, m)?)?;
    m.add_function(wrap_pyfunction!(gold_family, m)?)?;
    m.add_function(wrap_pyfunction!(x1_code, m)?)?;
    m.add_function(wrap_pyfunction!(x5_code, m)?)?;
    m.add_function(wrap_pyfunction!(circular_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(family_correlation, m)?)?;
    m.add_function(wrap_pyfunction!(csk_modulate, m)?)?;
    m.add_function(wrap_pyfunction!(csk_demodulate, m)?)?;
    m.add_function(wrap_pyfunction!(plan_doppler, m)?)?;
    m.add_function(wrap_pyfunction!(overlay_delays, m)?)?;
    m.add_function(wrap_pyfunction!(max_coherent_integration, m)?)?;
    m.add_function(wrap_pyfunction!(time_for_shift, m)?)?;
    m.add_function(wrap_pyfunction!(carrier_to_code, m)?)?;
    Ok(())
}
