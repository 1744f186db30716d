//! plan doppler | overlay | budgets

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use leopnt::metrics::StatsStore;
use leopnt::planner::{
    bin_width, carrier_to_code, code_shift_budget, max_coherent_integration, overlay_delay_candidates, plan_doppler,
    time_for_shift, Budget, Calibration, DelayBounds, DelayMode, Environment, OrbitClass, OverlayDelays, Phase,
    PlanOptions, PrnState, Scenario, SignHint, Strategy,
};
use leopnt::{Band, Error, Result};

use crate::io::{emit, read_text};
use crate::Context;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhaseArg {
    Cold,
    Operation,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnvArg {
    OpenSky,
    Urban,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    LargePositiveFirst,
    HighElevationFirst,
    ZeroFirst,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    /// Offsets relative to a tracked satellite of the same plane.
    Relative,
    /// Absolute window from known time and position.
    Precise,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SignArg {
    Later,
    Earlier,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundsArg {
    Pulsar,
    Gps,
}

#[derive(Subcommand, Debug)]
pub enum PlanCommand {
    /// Ordered Doppler search bins.
    Doppler {
        #[arg(long, value_enum)]
        phase: PhaseArg,
        #[arg(long, value_enum)]
        env: EnvArg,
        /// Urban elevation mask in degrees.
        #[arg(long, default_value_t = 30.0)]
        mask: f64,
        #[arg(long)]
        band: Band,
        #[arg(long)]
        orbit: OrbitClass,
        /// Bin width in Hz; defaults to 1/(2 T) of --cit-ms.
        #[arg(long)]
        bin_width: Option<f64>,
        /// Coherent integration time in ms.
        #[arg(long, default_value_t = 1.0)]
        cit_ms: f64,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Dopplers (Hz) already tracked on this PRN, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        tracked: Option<Vec<f64>>,
        /// Half-width of each tracked exclusion, Hz.
        #[arg(long)]
        exclusion: Option<f64>,
        /// Calibration CSV from `metrics --calibration`.
        #[arg(long)]
        calibration: Option<PathBuf>,
        /// Print a summary instead of the bin CSV.
        #[arg(long)]
        summary: bool,
    },
    /// Overlay-code delay candidates.
    Overlay {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.0)]
        mask: f64,
        /// Known sign of the delay relative to the tracked satellite.
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
        /// Receiver clock uncertainty in ms (precise mode).
        #[arg(long, default_value_t = 0.0)]
        clock_ms: f64,
        /// Built-in range bounds.
        #[arg(long, value_enum, default_value = "pulsar")]
        bounds: BoundsArg,
        /// Statistics file from `metrics` to derive bounds from instead.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Constellation name inside --stats.
        #[arg(long, default_value = "pulsar-foc")]
        constellation: String,
    },
    /// Coherent integration and code-slip budgets.
    Budgets {
        #[arg(long)]
        band: Band,
        #[arg(long)]
        orbit: OrbitClass,
        /// Doppler rate in Hz/s; defaults to the calibrated maximum.
        #[arg(long, allow_hyphen_values = true)]
        rate: Option<f64>,
        /// Carrier Doppler in Hz; defaults to the calibrated limit.
        #[arg(long, allow_hyphen_values = true)]
        doppler: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        mask: f64,
        #[arg(long)]
        calibration: Option<PathBuf>,
    },
}

fn calibration(path: Option<&PathBuf>) -> Result<Calibration> {
    match path {
        None => Ok(Calibration::builtin()),
        Some(p) => Calibration::read_csv(read_text(p)?.as_bytes()),
    }
}

fn seconds(b: Budget) -> String {
    b.seconds().map_or("unbounded".into(), |s| format!("{:.3}", s * 1e3))
}

pub fn run(ctx: &Context, c: PlanCommand) -> Result<()> {
    let out = ctx.out.as_deref();
    match c {
        PlanCommand::Doppler {
            phase,
            env,
            mask,
            band,
            orbit,
            bin_width: w,
            cit_ms,
            strategy,
            tracked,
            exclusion,
            calibration: cal,
            summary,
        } => {
            if !(cit_ms > 0.0) {
                return Err(Error::usage("--cit-ms must be positive"));
            }
            let scenario = Scenario {
                phase: match phase {
                    PhaseArg::Cold => Phase::ColdStart,
                    PhaseArg::Operation => Phase::Operation,
                },
                environment: match env {
                    EnvArg::OpenSky => Environment::OpenSky,
                    EnvArg::Urban => Environment::Urban { mask },
                },
                strategy: strategy.map(|s| match s {
                    StrategyArg::LargePositiveFirst => Strategy::LargePositiveFirst,
                    StrategyArg::HighElevationFirst => Strategy::HighElevationFirst,
                    StrategyArg::ZeroFirst => Strategy::ZeroFirst,
                }),
                prn_state: tracked.map_or(PrnState::NewPrn, PrnState::Tracked),
            };
            let mut opts = PlanOptions::new(w.unwrap_or_else(|| bin_width(cit_ms * 1e-3)));
            opts.exclusion_half_width = exclusion;
            let plan = plan_doppler(&scenario, band, orbit, opts, &calibration(cal.as_ref())?)?;
            if summary {
                emit(out, "plan_doppler.txt", &plan.summary())
            } else {
                emit(out, "plan_doppler.csv", &plan.to_csv())
            }
        }
        PlanCommand::Overlay { mode, mask, sign, clock_ms, bounds, stats, constellation } => {
            let b = match stats {
                Some(p) => DelayBounds::from_store(&StatsStore::read_csv(read_text(&p)?.as_bytes())?, &constellation)?,
                None => match bounds {
                    BoundsArg::Pulsar => DelayBounds::pulsar(),
                    BoundsArg::Gps => DelayBounds::gps(),
                },
            };
            let m = match mode {
                ModeArg::Relative => DelayMode::RelativeToTracked {
                    mask,
                    sign: sign.map(|s| match s {
                        SignArg::Later => SignHint::Later,
                        SignArg::Earlier => SignHint::Earlier,
                    }),
                },
                ModeArg::Precise => DelayMode::PreciseTime { mask, clock_uncertainty_ms: clock_ms },
            };
            let d = overlay_delay_candidates(m, &b)?;
            let mut s = String::new();
            match &d {
                OverlayDelays::Relative { max_delay_diff_ms, .. } => {
                    let _ = writeln!(s, "# relative to tracked, max delay difference {max_delay_diff_ms:.3} ms");
                }
                OverlayDelays::Absolute(w) => {
                    let _ = writeln!(
                        s,
                        "# window {:.3} to {:.3} ms (span {:.3} ms)",
                        w.start_ms,
                        w.end_ms,
                        w.span_ms()
                    );
                }
            }
            s.push_str("order_index,delay_ms\n");
            for (i, v) in d.values().iter().enumerate() {
                let _ = writeln!(s, "{i},{v}");
            }
            emit(out, "plan_overlay.csv", &s)
        }
        PlanCommand::Budgets { band, orbit, rate, doppler, mask, calibration: cal } => {
            let cal = calibration(cal.as_ref())?;
            let cc = cal.class(orbit)?;
            let rate = match rate {
                Some(r) => r,
                None => cc.max_doppler_rate(band, mask)?,
            };
            let doppler = match doppler {
                Some(d) => d,
                None => cc.doppler_limit(band, mask)?,
            };
            let code = carrier_to_code(band, doppler);
            let mut s = String::new();
            let _ = writeln!(s, "# {} {orbit}, Doppler {doppler:.1} Hz, rate {rate:.2} Hz/s", band.name());
            let _ = writeln!(s, "# code Doppler {code:.4} chip/s, code Doppler rate {:.4} chip/s^2", carrier_to_code(band, rate));
            s.push_str("quantity,parameter,value\n");
            for alpha in [1.0, 0.5, 0.25] {
                let t = max_coherent_integration(rate, alpha)?;
                let _ = writeln!(s, "max_cit_ms,{alpha},{}", seconds(t));
                if let Some(t) = t.seconds() {
                    let _ = writeln!(s, "bin_width_hz,{alpha},{:.3}", bin_width(t));
                }
            }
            for chips in [1.0, 0.5, 0.25] {
                let _ = writeln!(s, "time_for_shift_ms,{chips},{}", seconds(time_for_shift(code, chips)?));
            }
            let _ = writeln!(s, "shift_in_1ms_chips,,{:.6}", code_shift_budget(code, 1e-3));
            emit(out, "plan_budgets.csv", &s)
        }
    }
}
