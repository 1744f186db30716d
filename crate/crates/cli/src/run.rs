//! simulate, metrics and report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::Args;
use leopnt::config::RunConfig;
use leopnt::constellation::{build_nominal, Constellation, NominalConstellation};
use leopnt::kinematics::{shell_kinematics, signal_bands};
use leopnt::metrics::tables::{apply_store, TABLE_IDS};
use leopnt::metrics::{
    replay, report_tables, run_sweep, Histogram, Metric, MetricsConfig, ObserverStats, StatsStore, SweepResults,
};
use leopnt::obslog::{read_log, ObservableLogRow, ObservableLogWriter};
use leopnt::planner::Calibration;
use leopnt::sim::{scan, Crossing, EpochSink, TimeGrid};
use leopnt::{Band, Error, Observable, Observer, Result};

use crate::io::{deg_tag, ensure_dir, read_text, write_file};
use crate::{Context, RunOverrides};

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::config(format!("thread pool: {e}")))
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    run: RunOverrides,
    /// Also log satellites below the lowest mask.
    #[arg(long)]
    all: bool,
}

struct LogSink {
    writer: ObservableLogWriter<BufWriter<File>>,
    latitude: f64,
    lowest_mask: f64,
    bands: Vec<Band>,
    rows: u64,
    error: Option<Error>,
}

impl EpochSink for LogSink {
    fn epoch(&mut self, _k: usize, _t: f64, visible: &[(usize, Observable)]) {
        if self.error.is_some() {
            return;
        }
        for (_, o) in visible {
            let row = ObservableLogRow::from_observable(o, self.latitude, o.elevation >= self.lowest_mask, &self.bands);
            if let Err(e) = self.writer.write(&row) {
                self.error = Some(e);
                return;
            }
            self.rows += 1;
        }
    }

    fn crossing(&mut self, _c: &Crossing) {}
}

pub fn log_name(constellation: &str, latitude: f64) -> String {
    format!("observables_{constellation}_lat{}.csv", deg_tag(latitude))
}

fn simulate_one(c: &Constellation, cfg: &RunConfig, lat: f64, all: bool, path: &Path) -> Result<u64> {
    let grid = cfg.grid()?;
    let observer = Observer::new(lat, cfg.longitude, cfg.height_m)?;
    let (b1, b2) = signal_bands(&c.name);
    let file = File::create(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let mut sink = LogSink {
        writer: ObservableLogWriter::new(BufWriter::new(file), &[b1, b2])?,
        latitude: lat,
        lowest_mask: cfg.masks[0],
        bands: vec![b1, b2],
        rows: 0,
        error: None,
    };
    let masks = if all { vec![-90.0] } else { vec![cfg.masks[0]] };
    scan(c, &observer, &grid, &masks, &mut sink)?;
    if let Some(e) = sink.error {
        return Err(e);
    }
    let rows = sink.rows;
    sink.writer.finish()?;
    Ok(rows)
}

pub fn simulate(ctx: &Context, a: &SimulateArgs) -> Result<()> {
    let cfg = ctx.run_config(&a.run)?;
    let c = cfg.load_constellation()?;
    let out = ctx.out_dir();
    ensure_dir(&out)?;
    write_file(&out.join("run.cfg"), cfg.to_document().as_bytes())?;
    let all = a.all || cfg.log_all;
    let jobs: Vec<(f64, PathBuf)> = cfg.latitudes.iter().map(|&l| (l, out.join(log_name(&c.name, l)))).collect();
    let counts: Vec<Result<u64>> = pool(ctx.workers)?.install(|| {
        use rayon::prelude::*;
        jobs.par_iter().map(|(lat, path)| simulate_one(&c, &cfg, *lat, all, path)).collect()
    });
    for ((lat, path), n) in jobs.iter().zip(counts) {
        println!("latitude {lat}: {} rows -> {}", n?, path.display());
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    #[command(flatten)]
    run: RunOverrides,
    /// Observable logs to replay instead of propagating.
    #[arg(long, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Write carrier-Doppler histograms (all latitudes pooled).
    #[arg(long)]
    histograms: bool,
    /// Also render each histogram as SVG.
    #[arg(long, requires = "histograms")]
    svg: bool,
    /// Write an acquisition-planner calibration derived from this sweep.
    #[arg(long)]
    calibration: bool,
}

fn replay_logs(c: &Constellation, cfg: &RunConfig, inputs: &[PathBuf]) -> Result<SweepResults> {
    let mut by_lat: Vec<(f64, Vec<ObservableLogRow>)> = Vec::new();
    for p in inputs {
        let (_, rows) = read_log(File::open(p).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))))?)?;
        for r in rows {
            match by_lat.iter_mut().find(|(l, _)| *l == r.latitude_deg) {
                Some((_, v)) => v.push(r),
                None => by_lat.push((r.latitude_deg, vec![r])),
            }
        }
    }
    if by_lat.is_empty() {
        return Err(Error::coverage("input logs hold no rows"));
    }
    let mut observers = Vec::new();
    for (_, mut rows) in by_lat {
        rows.sort_by(|a, b| a.time_s.total_cmp(&b.time_s).then(a.svid.cmp(&b.svid)));
        let mut times: Vec<f64> = rows.iter().map(|r| r.time_s).collect();
        times.dedup();
        let step = times.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let step = if step.is_finite() { step } else { cfg.step_s };
        let grid = TimeGrid::new(times[0], times[times.len() - 1] - times[0] + step, step)?;
        let mc = MetricsConfig { masks: cfg.masks.clone(), histogram_bins: cfg.histogram_bins, ..Default::default() }
            .with_pair_period(&grid, cfg.pair_step_s);
        observers.push(replay(c, &rows, mc)?);
    }
    Ok(SweepResults {
        constellation: c.name.clone(),
        reference: c.altitude_reference,
        shells: c.shells.iter().map(|s| s.name.clone()).collect(),
        masks: cfg.masks.clone(),
        observers,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:.6}"))
}

/// Every catalog metric by group, latitude and mask.
pub fn sweep_csv(r: &SweepResults, band: Band) -> Result<String> {
    let mut s = String::from("metric,group,latitude_deg,mask_deg,min,avg,max,count\n");
    let groups: Vec<String> = std::iter::once("all".to_string()).chain(r.shells.iter().cloned()).collect();
    for metric in Metric::catalog(band) {
        for g in &groups {
            let t = match r.table(metric, g) {
                Ok(t) => t,
                Err(_) => continue,
            };
            for (i, lat) in t.latitudes.iter().enumerate() {
                for (j, mask) in t.masks.iter().enumerate() {
                    let c = t.cells[i][j];
                    let _ = writeln!(
                        s,
                        "{metric},{g},{lat:.3},{mask:.3},{},{},{},{}",
                        fmt_opt(c.map(|c| c.min)),
                        fmt_opt(c.map(|c| c.avg)),
                        fmt_opt(c.map(|c| c.max)),
                        c.map_or(0, |c| c.count)
                    );
                }
            }
        }
    }
    Ok(s)
}

pub fn histogram_csv(h: &Histogram, unit: &str) -> String {
    let mut s = format!("lo_{unit},hi_{unit},count\n");
    for (lo, hi, n) in h.rows() {
        let _ = writeln!(s, "{lo:.4},{hi:.4},{n}");
    }
    s
}

/// Bar chart of a histogram.
pub fn histogram_svg(h: &Histogram, title: &str) -> String {
    let (w, ht, pad) = (640.0, 360.0, 40.0);
    let rows: Vec<(f64, f64, u64)> = h.rows().collect();
    let peak = rows.iter().map(|r| r.2).max().unwrap_or(0).max(1) as f64;
    let bw = (w - 2.0 * pad) / rows.len().max(1) as f64;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{ht}\" viewBox=\"0 0 {w} {ht}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{pad}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>\n"
    );
    for (i, (_, _, n)) in rows.iter().enumerate() {
        let bh = (ht - 2.0 * pad) * (*n as f64) / peak;
        let _ = writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{bh:.2}\" fill=\"steelblue\"/>",
            pad + i as f64 * bw,
            ht - pad - bh,
            bw.max(0.5)
        );
    }
    if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
        let _ = writeln!(
            s,
            "<text x=\"{pad}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{:.0}</text>\n\
             <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{:.0}</text>",
            ht - 12.0,
            first.0,
            w - pad,
            ht - 12.0,
            last.1
        );
    }
    s.push_str("</svg>\n");
    s
}

fn write_histograms(out: &Path, r: &SweepResults, band: Band, svg: bool) -> Result<()> {
    let pooled: ObserverStats = r.combined(|_| true).ok_or_else(|| Error::coverage("sweep has no observers"))?;
    let k = -band.carrier() / leopnt::constants::SPEED_OF_LIGHT;
    for (g, per_mask) in pooled.range_rate_histogram.iter().enumerate() {
        for (m, h) in per_mask.iter().enumerate() {
            let d = h.scaled(k);
            let stem = format!("hist_{}_{}_doppler_{band}_mask{}", r.constellation, r.group_name(g), deg_tag(r.masks[m]));
            write_file(&out.join(format!("{stem}.csv")), histogram_csv(&d, "hz").as_bytes())?;
            if svg {
                let title = format!("{} {} carrier Doppler {band}, mask {} deg", r.constellation, r.group_name(g), r.masks[m]);
                write_file(&out.join(format!("{stem}.svg")), histogram_svg(&d, &title).as_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn metrics(ctx: &Context, a: &MetricsArgs) -> Result<()> {
    let cfg = ctx.run_config(&a.run)?;
    let c = cfg.load_constellation()?;
    let results = if a.input.is_empty() {
        let grid = cfg.grid()?;
        run_sweep(&c, &cfg.latitudes, cfg.longitude, cfg.height_m, &grid, &cfg.metrics_config()?, ctx.workers)?
    } else {
        replay_logs(&c, &cfg, &a.input)?
    };
    let out = ctx.out_dir();
    ensure_dir(&out)?;
    let mut store = StatsStore::new();
    store.insert_results(&results)?;
    let mut bytes = Vec::new();
    store.write_csv(&mut bytes)?;
    let stats_path = out.join(format!("stats_{}.csv", c.name));
    write_file(&stats_path, &bytes)?;
    let band = signal_bands(&c.name).0;
    let sweep_path = out.join(format!("sweep_{}.csv", c.name));
    write_file(&sweep_path, sweep_csv(&results, band)?.as_bytes())?;
    println!("{} cells -> {}", store.len(), stats_path.display());
    println!("sweep table -> {}", sweep_path.display());
    if a.histograms {
        write_histograms(&out, &results, band, a.svg)?;
        println!("histograms -> {}", out.display());
    }
    if a.calibration {
        let cal = Calibration::from_sweep(&results)?;
        let mut b = Vec::new();
        cal.write_csv(&mut b)?;
        let p = out.join(format!("calibration_{}.csv", c.name));
        write_file(&p, &b)?;
        println!("planner calibration -> {}", p.display());
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Table numbers, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    tables: Option<Vec<u8>>,
    /// Statistics files from `metrics` (default: every stats_*.csv in the output directory).
    #[arg(long, num_args = 1..)]
    stats: Vec<PathBuf>,
    /// Fail with exit code 2 when any cell lacks inputs.
    #[arg(long)]
    strict: bool,
}

fn default_stats(out: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(out)
        .map(|rd| {
            rd.filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.file_name()
                        .and_then(|n| n.to_str())
                        .is_some_and(|n| n.starts_with("stats_") && n.ends_with(".csv"))
                })
                .collect()
        })
        .unwrap_or_default();
    v.sort();
    v
}

pub fn report(ctx: &Context, a: &ReportArgs) -> Result<()> {
    let out = ctx.out_dir();
    let which = a.tables.clone().unwrap_or_else(|| TABLE_IDS.to_vec());
    if let Some(bad) = which.iter().find(|t| !TABLE_IDS.contains(t)) {
        return Err(Error::usage(format!("unknown table {bad} (available: {TABLE_IDS:?})")));
    }
    let paths = if a.stats.is_empty() { default_stats(&out) } else { a.stats.clone() };
    let mut store = StatsStore::new();
    for p in &paths {
        store.merge(StatsStore::read_csv(read_text(p)?.as_bytes())?);
    }
    if store.is_empty() && which.iter().any(|&t| t != 1) {
        return Err(Error::coverage(format!(
            "no statistics found (looked for stats_*.csv in {}); run `metrics` first or pass --stats",
            out.display()
        )));
    }
    let mut kin = Vec::new();
    if which.contains(&1) {
        for n in [NominalConstellation::PulsarFoc, NominalConstellation::PulsarIov, NominalConstellation::Gps24] {
            let c = build_nominal(n, ctx.config.altitude_reference);
            kin.extend(shell_kinematics(&c, None)?);
        }
        apply_store(&mut kin, &store);
    }
    let tables = report_tables(&which, &store, &kin)?;
    ensure_dir(&out)?;
    let mut missing: BTreeMap<u8, Vec<String>> = BTreeMap::new();
    for t in &tables {
        let md = t.to_markdown();
        write_file(&out.join(format!("table{}.md", t.id)), md.as_bytes())?;
        write_file(&out.join(format!("table{}.csv", t.id)), t.to_csv()?.as_bytes())?;
        println!("{md}");
        let m = t.missing();
        if !m.is_empty() {
            missing.insert(t.id, m.into_iter().map(|(r, c)| format!("{r} @ {c}")).collect());
        }
    }
    for (id, cells) in &missing {
        eprintln!("table {id}: {} cell(s) not computed from the inputs:", cells.len());
        for c in cells {
            eprintln!("  {c}");
        }
    }
    if a.strict && !missing.is_empty() {
        return Err(Error::coverage("inputs do not cover every requested cell"));
    }
    Ok(())
}
