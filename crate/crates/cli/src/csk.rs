//! csk roundtrip | modulate | demodulate | noise

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use leopnt::codes::generators::parse_state;
use leopnt::codes::{x5_generator, ChipSequence, Family};
use leopnt::csk::{
    bit_rate, chips_from_i8_stream, chips_to_i8_stream, csk_demodulate, csk_modulate, decisions_csv, FftDemodulator,
    ALPHABET,
};
use leopnt::{Band, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::io::{emit, parse_chips, read_text, write_file};
use crate::Context;

/// The 10230-chip code carrying the symbols.
#[derive(Args, Debug, Clone)]
pub struct PrnArgs {
    /// Chip file (`codes x5` output).
    #[arg(long, conflicts_with = "xb")]
    prn: Option<PathBuf>,
    /// XB initial state of the X5 generator instead of a file.
    #[arg(long, default_value = "0101011100100")]
    xb: String,
}

impl PrnArgs {
    fn load(&self) -> Result<ChipSequence> {
        match &self.prn {
            Some(p) => parse_chips(&read_text(p)?, Family::Custom, Band::X5.spec().chip_rate),
            None => x5_generator(&parse_state(&self.xb)?),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum CskCommand {
    /// Modulate and demodulate every symbol with both demodulators.
    Roundtrip {
        #[command(flatten)]
        prn: PrnArgs,
    },
    /// Write the signed 8-bit chip stream of a symbol list.
    Modulate {
        #[command(flatten)]
        prn: PrnArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        symbols: Vec<u32>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Demodulate a signed 8-bit chip stream into a decisions CSV.
    Demodulate {
        #[command(flatten)]
        prn: PrnArgs,
        #[arg(long)]
        input: PathBuf,
        /// Use the transform demodulator.
        #[arg(long)]
        fft: bool,
    },
    /// Symbol error rate under additive Gaussian noise (uses --seed).
    Noise {
        #[command(flatten)]
        prn: PrnArgs,
        /// Noise standard deviation per chip (unit chip amplitude).
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

pub fn run(ctx: &Context, c: CskCommand) -> Result<()> {
    let out = ctx.out.as_deref();
    match c {
        CskCommand::Roundtrip { prn } => {
            let code = prn.load()?;
            let fft = FftDemodulator::new(&code)?;
            let mut bad = Vec::new();
            for s in 0..ALPHABET as u32 {
                let rx: Vec<f64> = csk_modulate(&code, s)?.iter().map(|&c| c as f64).collect();
                let d = csk_demodulate(&rx, &code)?;
                let f = fft.demodulate(&rx)?;
                if u32::from(d.value) != s || u32::from(f.value) != s {
                    bad.push(s);
                }
            }
            let ok = ALPHABET - bad.len();
            emit(out, "csk_roundtrip.txt", &format!("{ok}/{ALPHABET} symbols recovered, {:.1} bit/s\n", bit_rate()))?;
            if bad.is_empty() {
                Ok(())
            } else {
                Err(Error::domain(format!("symbols not recovered: {bad:?}")))
            }
        }
        CskCommand::Modulate { prn, symbols, output } => {
            let code = prn.load()?;
            let mut stream = Vec::new();
            for &s in &symbols {
                stream.extend(chips_to_i8_stream(&csk_modulate(&code, s)?));
            }
            write_file(&output, &stream)?;
            println!("{} symbols, {} chips -> {}", symbols.len(), stream.len(), output.display());
            Ok(())
        }
        CskCommand::Demodulate { prn, input, fft } => {
            let code = prn.load()?;
            let bytes = std::fs::read(&input)?;
            let block = 2 * code.len();
            if bytes.is_empty() || bytes.len() % block != 0 {
                return Err(Error::usage(format!(
                    "stream of {} samples is not a whole number of {block}-chip symbols",
                    bytes.len()
                )));
            }
            let rx = chips_from_i8_stream(&bytes);
            let demod = if fft { Some(FftDemodulator::new(&code)?) } else { None };
            let decisions = rx
                .chunks(block)
                .map(|b| match &demod {
                    Some(d) => d.demodulate(b),
                    None => csk_demodulate(b, &code),
                })
                .collect::<Result<Vec<_>>>()?;
            emit(out, "csk_decisions.csv", &decisions_csv(&decisions))
        }
        CskCommand::Noise { prn, sigma, trials } => {
            let code = prn.load()?;
            let normal = Normal::new(0.0, sigma).map_err(|e| Error::usage(format!("--sigma: {e}")))?;
            let fft = FftDemodulator::new(&code)?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let mut errors = 0usize;
            for _ in 0..trials {
                let s: u32 = rng.gen_range(0..ALPHABET as u32);
                let rx: Vec<f64> =
                    csk_modulate(&code, s)?.iter().map(|&c| c as f64 + normal.sample(&mut rng)).collect();
                errors += usize::from(u32::from(fft.demodulate(&rx)?.value) != s);
            }
            let mut s = String::from("sigma,trials,symbol_errors,symbol_error_rate\n");
            let _ = writeln!(s, "{sigma},{trials},{errors},{:.6}", errors as f64 / trials.max(1) as f64);
            emit(out, "csk_noise.csv", &s)
        }
    }
}
