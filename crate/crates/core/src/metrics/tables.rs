//! Summary tables in the row/column layout of the published tables.
//!
//! Range-type tables report kilometres; delay tables are the same cells
//! divided by the speed of light, in milliseconds.

use std::fmt::Write as _;

use super::store::StatsStore;
use super::sweep::Metric;
use crate::bands::Band;
use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::kinematics::ShellKinematics;

/// Latitude columns of the per-latitude tables.
pub const TABLE_LATITUDES: [f64; 7] = [0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0];
pub const TABLE_MASKS: [f64; 5] = [0.0, 5.0, 10.0, 15.0, 20.0];
pub const TABLE_IDS: [u8; 8] = [1, 3, 4, 5, 6, 7, 8, 9];

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub id: u8,
    pub title: String,
    pub corner: String,
    pub columns: Vec<String>,
    /// Row label and cells; `None` renders as "-" (nothing visible) and
    /// `Some(None)` is never stored: missing inputs become `Missing`.
    pub rows: Vec<(String, Vec<Value>)>,
    pub decimals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Number(f64),
    /// Computed, but nothing visible.
    Absent,
    /// Inputs do not cover this cell.
    Missing,
    Text(&'static str),
}

impl Value {
    pub fn number(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }

    fn render(&self, decimals: usize) -> String {
        match self {
            Value::Number(x) => format!("{x:.decimals$}"),
            Value::Absent => "-".into(),
            Value::Missing => "not computed".into(),
            Value::Text(t) => (*t).into(),
        }
    }

    fn map(self, f: impl Fn(f64) -> f64) -> Value {
        match self {
            Value::Number(x) => Value::Number(f(x)),
            v => v,
        }
    }
}

impl ReportTable {
    pub fn cell(&self, row: &str, column: &str) -> Option<Value> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.iter().find(|(r, _)| r == row).map(|(_, v)| v[j])
    }

    /// Cells whose inputs were not available.
    pub fn missing(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (r, vals) in &self.rows {
            for (c, v) in self.columns.iter().zip(vals) {
                if *v == Value::Missing {
                    out.push((r.clone(), c.clone()));
                }
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut cells: Vec<Vec<String>> = vec![std::iter::once(self.corner.clone())
            .chain(self.columns.iter().cloned())
            .collect()];
        for (label, vals) in &self.rows {
            cells.push(
                std::iter::once(label.clone())
                    .chain(vals.iter().map(|v| v.render(self.decimals)))
                    .collect(),
            );
        }
        let ncol = cells[0].len();
        let widths: Vec<usize> = (0..ncol)
            .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(1).max(3))
            .collect();
        let mut out = format!("### Table {}: {}\n\n", self.id, self.title);
        for (i, row) in cells.iter().enumerate() {
            out.push('|');
            for (j, c) in row.iter().enumerate() {
                if j == 0 {
                    let _ = write!(out, " {:<w$} |", c, w = widths[j]);
                } else {
                    let _ = write!(out, " {:>w$} |", c, w = widths[j]);
                }
            }
            out.push('\n');
            if i == 0 {
                out.push('|');
                for (j, w) in widths.iter().enumerate() {
                    out.push_str(if j == 0 { " :" } else { " " });
                    out.push_str(&"-".repeat(w - 1));
                    out.push_str(if j == 0 { " |" } else { ": |" });
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![self.corner.clone()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (label, vals) in &self.rows {
            let mut rec = vec![label.clone()];
            rec.extend(vals.iter().map(|v| match v {
                Value::Number(x) => format!("{x:.prec$}", prec = self.decimals),
                Value::Absent => String::new(),
                Value::Missing => "NA".into(),
                Value::Text(t) => (*t).into(),
            }));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Display label of a constellation.
pub fn constellation_label(name: &str) -> String {
    match name {
        "pulsar-foc" => "Pulsar".into(),
        "pulsar-iov" => "Pulsar IOV".into(),
        "gps-24" => "GPS".into(),
        other => other.to_string(),
    }
}

fn rank(name: &str) -> usize {
    match name {
        "pulsar-foc" => 0,
        "pulsar-iov" => 1,
        "gps-24" => 2,
        _ => 3,
    }
}

/// (row label, constellation, group) for every group worth a row.
fn group_rows(store: &StatsStore, with_total: bool) -> Vec<(String, String, String)> {
    let mut names = store.constellations();
    names.sort_by_key(|n| (rank(n), n.clone()));
    let mut rows = Vec::new();
    for name in names {
        let label = constellation_label(&name);
        let shells = store.shells(&name);
        if with_total || shells.len() < 2 {
            rows.push((label.clone(), name.clone(), "all".to_string()));
        }
        if shells.len() > 1 {
            for s in shells {
                rows.push((format!("{label} {s}"), name.clone(), s));
            }
        }
    }
    rows
}

fn fetch(
    store: &StatsStore,
    constellation: &str,
    group: &str,
    metric: Metric,
    lat: f64,
    mask: f64,
    pick: impl Fn(&super::sweep::Cell) -> f64,
) -> Value {
    match store.get(constellation, group, metric, lat, mask) {
        None => Value::Missing,
        Some(None) => Value::Absent,
        Some(Some(c)) => Value::Number(pick(&c)),
    }
}

/// Extreme over every stored latitude; `Missing` when none are stored.
fn over_latitudes(
    store: &StatsStore,
    constellation: &str,
    group: &str,
    metric: Metric,
    mask: f64,
    largest: bool,
    pick: impl Fn(&super::sweep::Cell) -> f64 + Copy,
) -> Value {
    let mut best: Option<f64> = None;
    let mut any = false;
    for lat in store.latitudes(constellation) {
        match fetch(store, constellation, group, metric, lat, mask, pick) {
            Value::Number(x) => {
                any = true;
                best = Some(match best {
                    None => x,
                    Some(b) if largest => b.max(x),
                    Some(b) => b.min(x),
                });
            }
            Value::Absent => any = true,
            _ => {}
        }
    }
    match (best, any) {
        (Some(b), _) => Value::Number(b),
        (None, true) => Value::Absent,
        (None, false) => Value::Missing,
    }
}

fn mask_columns() -> Vec<String> {
    TABLE_MASKS.iter().map(|m| format!("{m}")).collect()
}

/// Average elevation over the table latitudes (optionally capped at
/// `max_lat`): unweighted mean of per-latitude averages, a latitude where
/// the group is never above the mask counting as zero.
pub fn table_average_elevation(
    store: &StatsStore,
    constellation: &str,
    group: &str,
    mask: f64,
    max_lat: f64,
) -> Value {
    let mut sum = 0.0;
    let mut n = 0usize;
    for &lat in TABLE_LATITUDES.iter().filter(|&&l| l <= max_lat) {
        match fetch(store, constellation, group, Metric::Elevation, lat, mask, |c| c.avg) {
            Value::Number(x) => {
                sum += x;
                n += 1;
            }
            Value::Absent => n += 1,
            _ => return Value::Missing,
        }
    }
    if n == 0 {
        Value::Missing
    } else {
        Value::Number(sum / n as f64)
    }
}

fn table3(store: &StatsStore) -> ReportTable {
    let mut rows = Vec::new();
    for (context, cap) in [("all latitudes", 90.0), ("latitudes up to 60", 60.0)] {
        for (label, name, group) in group_rows(store, true) {
            let vals = TABLE_MASKS
                .iter()
                .map(|&m| table_average_elevation(store, &name, &group, m, cap))
                .collect();
            rows.push((format!("{label} ({context})"), vals));
        }
    }
    ReportTable {
        id: 3,
        title: "Average elevation (deg)".into(),
        corner: "Elevation mask (deg)".into(),
        columns: mask_columns(),
        rows,
        decimals: 1,
    }
}

fn min_range_rows(store: &StatsStore, delay: bool) -> Vec<(String, Vec<Value>)> {
    group_rows(store, false)
        .into_iter()
        .map(|(label, name, group)| {
            let mask = store.masks(&name).first().copied().unwrap_or(0.0);
            let vals = TABLE_LATITUDES
                .iter()
                .map(|&lat| {
                    let v = fetch(store, &name, &group, Metric::Range, lat, mask, |c| c.min);
                    v.map(|x| if delay { x / SPEED_OF_LIGHT * 1e3 } else { x / 1e3 })
                })
                .collect();
            (label, vals)
        })
        .collect()
}

fn max_by_mask_rows(
    store: &StatsStore,
    metric: Metric,
    delay: bool,
) -> Vec<(String, Vec<Value>)> {
    let mut rows = Vec::new();
    for (label, name, group) in group_rows(store, false) {
        let vals = TABLE_MASKS
            .iter()
            .map(|&m| {
                over_latitudes(store, &name, &group, metric, m, true, |c| c.max)
                    .map(|x| if delay { x / SPEED_OF_LIGHT * 1e3 } else { x / 1e3 })
            })
            .collect();
        rows.push((label, vals));
    }
    rows
}

fn range_diff_rows(store: &StatsStore, delay: bool) -> Vec<(String, Vec<Value>)> {
    let to_unit = |x: f64| if delay { x / SPEED_OF_LIGHT * 1e3 } else { x / 1e3 };
    let mut names = store.constellations();
    names.sort_by_key(|n| (rank(n), n.clone()));
    let mut rows = Vec::new();
    for name in names {
        let label = constellation_label(&name);
        let shells = store.shells(&name);
        let row = |metric: Metric, group: &str| -> Vec<Value> {
            TABLE_MASKS
                .iter()
                .map(|&m| over_latitudes(store, &name, group, metric, m, true, |c| c.max).map(to_unit))
                .collect()
        };
        rows.push((label.clone(), row(Metric::RangeDiff, "all")));
        if shells.len() > 1 {
            for s in &shells {
                rows.push((format!("{label} {s}"), row(Metric::RangeDiff, s)));
            }
            for s in &shells {
                rows.push((format!("{label} {s} (same plane)"), row(Metric::SamePlaneRangeDiff, s)));
            }
        } else {
            rows.push((format!("{label} (same plane)"), row(Metric::SamePlaneRangeDiff, "all")));
        }
    }
    rows
}

fn table1(kin: &[ShellKinematics]) -> ReportTable {
    let columns: Vec<String> = kin
        .iter()
        .map(|k| {
            let label = constellation_label(&k.constellation);
            if kin.iter().filter(|o| o.constellation == k.constellation).count() > 1 {
                format!("{label} {}", k.shell)
            } else {
                label
            }
        })
        .collect();
    let row = |label: &str, f: &dyn Fn(&ShellKinematics) -> Value| {
        (label.to_string(), kin.iter().map(f).collect::<Vec<_>>())
    };
    let n = |x: f64| Value::Number(x);
    let rows = vec![
        row("Number of orbital planes", &|k| n(k.planes as f64)),
        row("Satellites per plane", &|k| n(k.sats_per_plane as f64)),
        row("Inclination (deg)", &|k| n(k.inclination_deg)),
        row("Altitude (km)", &|k| n(k.altitude_km)),
        row("Orbit radius (km)", &|k| n(k.orbit_radius / 1e3)),
        row("Orbit perimeter (km)", &|k| n(k.perimeter / 1e3)),
        row("Orbital period (min)", &|k| n(k.period_s / 60.0)),
        row("Orbital speed (m/s)", &|k| n(k.speed)),
        row("Max ECEF speed (m/s)", &|k| n(k.max_ecef_speed)),
        row("Max relative speed (m/s)", &|k| {
            k.max_relative_speed.map_or(Value::Missing, Value::Number)
        }),
        row("Max L1-band carrier Doppler (Hz)", &|k| {
            k.max_doppler(k.l1_band).map_or(Value::Missing, Value::Number)
        }),
        row("Max L5-band carrier Doppler (Hz)", &|k| {
            k.max_doppler(k.l5_band).map_or(Value::Missing, Value::Number)
        }),
    ];
    ReportTable {
        id: 1,
        title: "Constellation characteristics".into(),
        corner: "Parameter".into(),
        columns,
        rows,
        decimals: 1,
    }
}

/// Largest |range rate| of a group over every stored latitude at the lowest mask.
pub fn max_relative_speed(store: &StatsStore, constellation: &str, group: &str) -> Option<f64> {
    let mask = store.masks(constellation).first().copied()?;
    let band = Band::X1;
    let k = SPEED_OF_LIGHT / band.carrier();
    let lo = over_latitudes(store, constellation, group, Metric::Doppler(band), mask, false, |c| c.min);
    let hi = over_latitudes(store, constellation, group, Metric::Doppler(band), mask, true, |c| c.max);
    match (lo.number(), hi.number()) {
        (Some(a), Some(b)) => Some(a.abs().max(b.abs()) * k),
        _ => None,
    }
}

/// Build the requested tables. Table 1 needs `kinematics`; the others read `store`.
pub fn report_tables(
    which: &[u8],
    store: &StatsStore,
    kinematics: &[ShellKinematics],
) -> Result<Vec<ReportTable>> {
    let mut out = Vec::new();
    for &id in which {
        let t = match id {
            1 => table1(kinematics),
            3 => table3(store),
            4 | 5 => ReportTable {
                id,
                title: if id == 4 { "Minimum range (km)" } else { "Minimum propagation delay (ms)" }.into(),
                corner: "Latitude (deg)".into(),
                columns: TABLE_LATITUDES.iter().map(|l| format!("{l}")).collect(),
                rows: min_range_rows(store, id == 5),
                decimals: 1,
            },
            6 | 7 => ReportTable {
                id,
                title: if id == 6 { "Maximum range (km)" } else { "Maximum propagation delay (ms)" }.into(),
                corner: "Elevation mask (deg)".into(),
                columns: mask_columns(),
                rows: max_by_mask_rows(store, Metric::Range, id == 7),
                decimals: 1,
            },
            8 | 9 => ReportTable {
                id,
                title: if id == 8 { "Maximum range difference (km)" } else { "Maximum delay difference (ms)" }.into(),
                corner: "Elevation mask (deg)".into(),
                columns: mask_columns(),
                rows: range_diff_rows(store, id == 9),
                decimals: 1,
            },
            other => {
                return Err(Error::usage(format!(
                    "unknown table {other} (available: 1, 3, 4, 5, 6, 7, 8, 9)"
                )))
            }
        };
        out.push(t);
    }
    Ok(out)
}

/// Fill the observer-side maxima of `kinematics` from stored sweep cells.
pub fn apply_store(kinematics: &mut [ShellKinematics], store: &StatsStore) {
    for k in kinematics {
        if k.max_relative_speed.is_none() {
            k.max_relative_speed = max_relative_speed(store, &k.constellation, &k.shell);
        }
    }
}
