//! Flat, serializable form of sweep results: one row per
//! (constellation, group, metric, latitude, mask) cell.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::sweep::{Cell, Metric, SweepResults};
use crate::bands::Band;
use crate::error::{Error, Result};

const HEADER: [&str; 10] = [
    "constellation",
    "reference",
    "group",
    "metric",
    "latitude_deg",
    "mask_deg",
    "count",
    "min",
    "avg",
    "max",
];

/// Millidegree key so that cells can live in ordered maps.
fn key_deg(x: f64) -> i64 {
    (x * 1000.0).round() as i64
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    constellation: String,
    group: String,
    metric: String,
    latitude: i64,
    mask: i64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatsStore {
    cells: BTreeMap<Key, Option<Cell>>,
    references: BTreeMap<String, String>,
    shells: BTreeMap<String, Vec<String>>,
}

impl StatsStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every metric of every group of `results`.
    pub fn insert_results(&mut self, results: &SweepResults) -> Result<()> {
        self.references
            .insert(results.constellation.clone(), results.reference.to_string());
        self.shells
            .insert(results.constellation.clone(), results.shells.clone());
        let mut metrics = Vec::new();
        for band in Band::ALL {
            for m in Metric::catalog(band) {
                if !metrics.contains(&m) {
                    metrics.push(m);
                }
            }
        }
        for g in 0..=results.shells.len() {
            let group = results.group_name(g).to_string();
            for &metric in &metrics {
                let table = results.table(metric, &group)?;
                for (i, &lat) in table.latitudes.iter().enumerate() {
                    for (j, &mask) in table.masks.iter().enumerate() {
                        self.insert(&results.constellation, &group, metric, lat, mask, table.cells[i][j]);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn insert(
        &mut self,
        constellation: &str,
        group: &str,
        metric: Metric,
        latitude: f64,
        mask: f64,
        cell: Option<Cell>,
    ) {
        self.cells.insert(
            Key {
                constellation: constellation.to_string(),
                group: group.to_string(),
                metric: metric.name(),
                latitude: key_deg(latitude),
                mask: key_deg(mask),
            },
            cell,
        );
    }

    /// `None` when not computed, `Some(None)` when computed but empty.
    pub fn get(
        &self,
        constellation: &str,
        group: &str,
        metric: Metric,
        latitude: f64,
        mask: f64,
    ) -> Option<Option<Cell>> {
        self.cells
            .get(&Key {
                constellation: constellation.to_string(),
                group: group.to_string(),
                metric: metric.name(),
                latitude: key_deg(latitude),
                mask: key_deg(mask),
            })
            .copied()
    }

    pub fn constellations(&self) -> Vec<String> {
        let mut names: Vec<String> = self.shells.keys().cloned().collect();
        for k in self.cells.keys() {
            if !names.contains(&k.constellation) {
                names.push(k.constellation.clone());
            }
        }
        names
    }

    pub fn shells(&self, constellation: &str) -> Vec<String> {
        if let Some(s) = self.shells.get(constellation) {
            return s.clone();
        }
        let mut out: Vec<String> = Vec::new();
        for k in self.cells.keys() {
            if k.constellation == constellation && k.group != "all" && !out.contains(&k.group) {
                out.push(k.group.clone());
            }
        }
        out
    }

    pub fn reference(&self, constellation: &str) -> Option<&str> {
        self.references.get(constellation).map(String::as_str)
    }

    pub fn latitudes(&self, constellation: &str) -> Vec<f64> {
        let mut l: Vec<i64> = self
            .cells
            .keys()
            .filter(|k| k.constellation == constellation)
            .map(|k| k.latitude)
            .collect();
        l.sort_unstable();
        l.dedup();
        l.into_iter().map(|x| x as f64 / 1000.0).collect()
    }

    pub fn masks(&self, constellation: &str) -> Vec<f64> {
        let mut l: Vec<i64> = self
            .cells
            .keys()
            .filter(|k| k.constellation == constellation)
            .map(|k| k.mask)
            .collect();
        l.sort_unstable();
        l.dedup();
        l.into_iter().map(|x| x as f64 / 1000.0).collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn merge(&mut self, other: StatsStore) {
        self.cells.extend(other.cells);
        self.references.extend(other.references);
        self.shells.extend(other.shells);
    }

    /// CSV with fixed six-decimal formatting.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(HEADER)?;
        for (k, cell) in &self.cells {
            let reference = self.references.get(&k.constellation).cloned().unwrap_or_default();
            let f = |x: f64| format!("{x:.6}");
            let (count, min, avg, max) = match cell {
                Some(c) => (c.count.to_string(), f(c.min), f(c.avg), f(c.max)),
                None => ("0".into(), String::new(), String::new(), String::new()),
            };
            wr.write_record([
                k.constellation.as_str(),
                &reference,
                &k.group,
                &k.metric,
                &format!("{:.3}", k.latitude as f64 / 1000.0),
                &format!("{:.3}", k.mask as f64 / 1000.0),
                &count,
                &min,
                &avg,
                &max,
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let headers = rd.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != HEADER {
            return Err(Error::usage("not a statistics CSV (unexpected header)"));
        }
        let mut store = StatsStore::new();
        for (i, rec) in rd.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let num = |j: usize| -> Result<f64> {
                rec[j].parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("column {}: {e}", HEADER[j]),
                })
            };
            let metric = Metric::parse(&rec[3])?;
            let cell = if rec[7].is_empty() {
                None
            } else {
                Some(Cell {
                    count: rec[6].parse().map_err(|e| Error::Parse {
                        line,
                        message: format!("count: {e}"),
                    })?,
                    min: num(7)?,
                    avg: num(8)?,
                    max: num(9)?,
                })
            };
            let constellation = rec[0].to_string();
            if !rec[1].is_empty() {
                store.references.insert(constellation.clone(), rec[1].to_string());
            }
            let group = rec[2].to_string();
            if group != "all" {
                let shells = store.shells.entry(constellation.clone()).or_default();
                if !shells.contains(&group) {
                    shells.push(group.clone());
                }
            } else {
                store.shells.entry(constellation.clone()).or_default();
            }
            store.insert(&constellation, &group, metric, num(4)?, num(5)?, cell);
        }
        Ok(store)
    }
}
