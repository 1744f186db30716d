//! Observable log CSV: one row per satellite-epoch.
//!
//! Column order is fixed. Every column has a fixed number of decimals so
//! files are byte-stable and parse back to the same text.

use std::io::{Read, Write};

use crate::bands::Band;
use crate::error::{Error, Result};
use crate::observables::Observable;

/// Fixed leading columns; two (doppler, doppler rate) pairs follow, one per band.
pub const BASE_COLUMNS: [&str; 13] = [
    "time_s",
    "latitude_deg",
    "svid",
    "prn",
    "plane",
    "shell",
    "elev_deg",
    "az_deg",
    "range_m",
    "range_rate_mps",
    "range_accel_mps2",
    "range_jerk_mps3",
    "visible",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableLogRow {
    pub time_s: f64,
    pub latitude_deg: f64,
    pub svid: u32,
    pub prn: u32,
    pub plane: usize,
    pub shell: usize,
    pub elev_deg: f64,
    pub az_deg: f64,
    pub range_m: f64,
    pub range_rate_mps: f64,
    pub range_accel_mps2: f64,
    pub range_jerk_mps3: f64,
    /// Elevation at or above the log's lowest mask.
    pub visible: bool,
    /// (doppler Hz, doppler rate Hz/s) per band, in header order.
    pub bands: Vec<(f64, f64)>,
}

impl ObservableLogRow {
    pub fn from_observable(o: &Observable, latitude_deg: f64, visible: bool, bands: &[Band]) -> Self {
        Self {
            time_s: o.time,
            latitude_deg,
            svid: o.svid,
            prn: o.prn_id,
            plane: o.plane_index,
            shell: o.shell_index,
            elev_deg: o.elevation,
            az_deg: o.azimuth,
            range_m: o.range,
            range_rate_mps: o.range_rate,
            range_accel_mps2: o.range_accel,
            range_jerk_mps3: o.range_jerk,
            visible,
            bands: bands.iter().map(|&b| (o.doppler(b), o.doppler_rate(b))).collect(),
        }
    }

    pub fn to_observable(&self) -> Observable {
        Observable {
            time: self.time_s,
            svid: self.svid,
            prn_id: self.prn,
            plane_index: self.plane,
            shell_index: self.shell,
            elevation: self.elev_deg,
            azimuth: self.az_deg,
            zenith: self.elev_deg >= 90.0,
            range: self.range_m,
            range_rate: self.range_rate_mps,
            range_accel: self.range_accel_mps2,
            range_jerk: self.range_jerk_mps3,
        }
    }
}

pub fn header(bands: &[Band]) -> Vec<String> {
    let mut h: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
    for b in bands {
        h.push(format!("doppler_{}_hz", b.name()));
        h.push(format!("doppler_rate_{}_hzps", b.name()));
    }
    h
}

/// Streaming writer.
pub struct ObservableLogWriter<W: Write> {
    inner: csv::Writer<W>,
    bands: Vec<Band>,
    record: Vec<String>,
}

impl<W: Write> ObservableLogWriter<W> {
    pub fn new(w: W, bands: &[Band]) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(header(bands))?;
        Ok(Self { inner, bands: bands.to_vec(), record: Vec::new() })
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn write(&mut self, r: &ObservableLogRow) -> Result<()> {
        if r.bands.len() != self.bands.len() {
            return Err(Error::usage("row band count does not match the log header"));
        }
        self.record.clear();
        let rec = &mut self.record;
        rec.push(format!("{:.3}", r.time_s));
        rec.push(format!("{:.6}", r.latitude_deg));
        rec.push(r.svid.to_string());
        rec.push(r.prn.to_string());
        rec.push(r.plane.to_string());
        rec.push(r.shell.to_string());
        rec.push(format!("{:.6}", r.elev_deg));
        rec.push(format!("{:.6}", r.az_deg));
        rec.push(format!("{:.4}", r.range_m));
        rec.push(format!("{:.6}", r.range_rate_mps));
        rec.push(format!("{:.8}", r.range_accel_mps2));
        rec.push(format!("{:.10}", r.range_jerk_mps3));
        rec.push(if r.visible { "1" } else { "0" }.to_string());
        for (d, dr) in &r.bands {
            rec.push(format!("{d:.4}"));
            rec.push(format!("{dr:.6}"));
        }
        self.inner.write_record(&self.record)?;
        Ok(())
    }

    pub fn finish(self) -> Result<W> {
        self.inner.into_inner().map_err(|e| Error::Io(e.into_error()))
    }
}

fn parse_band_column(name: &str) -> Option<Band> {
    name.strip_prefix("doppler_")?.strip_suffix("_hz")?.parse().ok()
}

/// Read a whole log. Returns the band list from the header and the rows.
pub fn read_log<R: Read>(r: R) -> Result<(Vec<Band>, Vec<ObservableLogRow>)> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let head: Vec<String> = rd.headers()?.iter().map(|s| s.to_string()).collect();
    if head.len() < BASE_COLUMNS.len() || head[..BASE_COLUMNS.len()] != BASE_COLUMNS {
        return Err(Error::Parse { line: 1, message: "not an observable log header".into() });
    }
    let extra = &head[BASE_COLUMNS.len()..];
    if extra.len() % 2 != 0 {
        return Err(Error::Parse { line: 1, message: "band columns must come in pairs".into() });
    }
    let mut bands = Vec::new();
    for pair in extra.chunks(2) {
        let b = parse_band_column(&pair[0]).ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("unexpected column {:?}", pair[0]),
        })?;
        if pair[1] != format!("doppler_rate_{}_hzps", b.name()) {
            return Err(Error::Parse { line: 1, message: format!("unexpected column {:?}", pair[1]) });
        }
        bands.push(b);
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let f = |j: usize| -> Result<f64> {
            rec.get(j)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse { line, message: format!("bad value in column {}", head[j]) })
        };
        let u = |j: usize| -> Result<u64> {
            rec.get(j)
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse { line, message: format!("bad integer in column {}", head[j]) })
        };
        let visible = match rec.get(12) {
            Some("1") => true,
            Some("0") => false,
            _ => return Err(Error::Parse { line, message: "visible must be 0 or 1".into() }),
        };
        let mut bvals = Vec::with_capacity(bands.len());
        for k in 0..bands.len() {
            let j = BASE_COLUMNS.len() + 2 * k;
            bvals.push((f(j)?, f(j + 1)?));
        }
        rows.push(ObservableLogRow {
            time_s: f(0)?,
            latitude_deg: f(1)?,
            svid: u(2)? as u32,
            prn: u(3)? as u32,
            plane: u(4)? as usize,
            shell: u(5)? as usize,
            elev_deg: f(6)?,
            az_deg: f(7)?,
            range_m: f(8)?,
            range_rate_mps: f(9)?,
            range_accel_mps2: f(10)?,
            range_jerk_mps3: f(11)?,
            visible,
            bands: bvals,
        });
    }
    Ok((bands, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let o = Observable {
            time: 12.0,
            svid: 7,
            prn_id: 1,
            plane_index: 0,
            shell_index: 0,
            elevation: 12.345678912,
            azimuth: 359.9999999,
            zenith: false,
            range: 2_345_678.123456,
            range_rate: -5432.1234567,
            range_accel: 12.3456789012,
            range_jerk: -0.0123456789,
        };
        let bands = [Band::X1, Band::X5];
        let mut w = ObservableLogWriter::new(Vec::new(), &bands).unwrap();
        w.write(&ObservableLogRow::from_observable(&o, 45.0, true, &bands)).unwrap();
        let text = w.finish().unwrap();
        let (b, rows) = read_log(text.as_slice()).unwrap();
        assert_eq!(b, bands);
        let mut w2 = ObservableLogWriter::new(Vec::new(), &b).unwrap();
        w2.write(&rows[0]).unwrap();
        assert_eq!(w2.finish().unwrap(), text);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_log("a,b\n1,2\n".as_bytes()).is_err());
    }
}
