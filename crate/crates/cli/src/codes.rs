//! codes msequence | kasami | gold | x1 | x5 | family | assignment | overlay | correlate

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use leopnt::codes::generators::parse_state;
use leopnt::codes::overlay::OVERLAY_LENGTH;
use leopnt::codes::{
    circular_correlation, family_correlation, gold_family, kasami_small_set, msequence, overlay_check, ChipSequence,
    CodeAssignment, Family, LfsrSpec, X1Generator, X5Generator,
};
use leopnt::kv::KvDocument;
use leopnt::{Band, Error, Result};

use crate::io::{emit, format_chips, parse_chips, read_text, ChipFormat};
use crate::Context;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Kasami,
    Gold,
}

#[derive(Subcommand, Debug)]
pub enum CodesCommand {
    /// Maximal-length LFSR sequence.
    Msequence {
        #[arg(long, default_value_t = 10)]
        degree: usize,
        /// Feedback taps (stage numbers), comma separated.
        #[arg(long, value_delimiter = ',', default_value = "3,10")]
        taps: Vec<usize>,
        /// Initial state, stage 1 first; default all ones.
        #[arg(long)]
        state: Option<String>,
        /// Number of chips; default the full period.
        #[arg(long)]
        length: Option<usize>,
        #[arg(long, value_enum, default_value = "chips")]
        format: ChipFormat,
    },
    /// Member of the 1023-chip Kasami small set (0..=31).
    Kasami {
        #[arg(long)]
        index: usize,
        #[arg(long, value_enum, default_value = "chips")]
        format: ChipFormat,
    },
    /// Member of the 1023-chip Gold family (0..=1024).
    Gold {
        #[arg(long)]
        index: usize,
        #[arg(long, value_enum, default_value = "chips")]
        format: ChipFormat,
    },
    /// Three-register 1023-chip primary code.
    X1 {
        #[arg(long, default_value = "1111111111")]
        xa: String,
        #[arg(long, default_value = "0000000000")]
        xb: String,
        #[arg(long, default_value = "00000")]
        xc: String,
        #[arg(long, value_enum, default_value = "chips")]
        format: ChipFormat,
    },
    /// Two-register 10230-chip primary code.
    X5 {
        /// XB initial state (13 bits).
        #[arg(long)]
        xb: String,
        #[arg(long, value_enum, default_value = "chips")]
        format: ChipFormat,
    },
    /// Worst auto- and cross-correlation of a whole family.
    Family {
        #[arg(long, value_enum)]
        kind: FamilyArg,
    },
    /// Per-plane code table and its correlation extremes.
    Assignment {
        /// key = value overrides (plane.<n>.<data|pilot> = xa,xb,xc).
        #[arg(long)]
        overrides: Option<PathBuf>,
    },
    /// Cross-correlation check of 100-chip overlay codes (one bit string per line).
    Overlay {
        #[arg(long)]
        file: PathBuf,
    },
    /// Circular correlation of two chip files.
    Correlate {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

fn base_pair() -> Result<(ChipSequence, ChipSequence)> {
    let g = X1Generator::default();
    let u = msequence(&LfsrSpec::new(10, &g.xa_taps, &[1; 10])?, 1023)?;
    let v = msequence(&LfsrSpec::new(10, &g.xb_taps, &[1; 10])?, 1023)?;
    Ok((u, v))
}

fn pick(family: Vec<ChipSequence>, index: usize, what: &str) -> Result<ChipSequence> {
    let n = family.len();
    family
        .into_iter()
        .nth(index)
        .ok_or_else(|| Error::usage(format!("{what} index {index} out of range 0..={}", n - 1)))
}

fn db(x: i64, n: usize) -> f64 {
    20.0 * (x as f64 / n as f64).log10()
}

fn read_chip_file(p: &PathBuf) -> Result<ChipSequence> {
    parse_chips(&read_text(p)?, Family::Custom, Band::X1.spec().chip_rate)
}

pub fn run(ctx: &Context, c: CodesCommand) -> Result<()> {
    let out = ctx.out.as_deref();
    match c {
        CodesCommand::Msequence { degree, taps, state, length, format } => {
            let init = match state {
                Some(s) => parse_state(&s)?,
                None => vec![1; degree],
            };
            let spec = LfsrSpec::new(degree, &taps, &init)?;
            let n = length.unwrap_or((1usize << degree) - 1);
            emit(out, "msequence.txt", &format_chips(&msequence(&spec, n)?, format))
        }
        CodesCommand::Kasami { index, format } => {
            let (u, _) = base_pair()?;
            let code = pick(kasami_small_set(&u)?, index, "Kasami")?;
            emit(out, &format!("kasami_{index}.txt"), &format_chips(&code, format))
        }
        CodesCommand::Gold { index, format } => {
            let (u, v) = base_pair()?;
            let code = pick(gold_family(&u, &v)?, index, "Gold")?;
            emit(out, &format!("gold_{index}.txt"), &format_chips(&code, format))
        }
        CodesCommand::X1 { xa, xb, xc, format } => {
            let code = X1Generator::default().generate(&parse_state(&xa)?, &parse_state(&xb)?, &parse_state(&xc)?)?;
            emit(out, "x1.txt", &format_chips(&code, format))
        }
        CodesCommand::X5 { xb, format } => {
            let code = X5Generator::default().generate(&parse_state(&xb)?)?;
            emit(out, "x5.txt", &format_chips(&code, format))
        }
        CodesCommand::Family { kind } => {
            let (u, v) = base_pair()?;
            let (name, fam) = match kind {
                FamilyArg::Kasami => ("kasami", kasami_small_set(&u)?),
                FamilyArg::Gold => ("gold", gold_family(&u, &v)?),
            };
            let f = family_correlation(&fam)?;
            let mut s = String::from("family,members,max_auto,max_cross,max,max_db,worst_i,worst_j\n");
            let _ = writeln!(
                s,
                "{name},{},{},{},{},{:.2},{},{}",
                fam.len(),
                f.max_auto,
                f.max_cross,
                f.max(),
                db(f.max(), 1023),
                f.worst_pair.0,
                f.worst_pair.1
            );
            emit(out, &format!("family_{name}.csv"), &s)
        }
        CodesCommand::Assignment { overrides } => {
            let mut a = CodeAssignment::default();
            if let Some(p) = overrides {
                a.apply(&KvDocument::parse(&read_text(&p)?)?)?;
            }
            let g = X1Generator::default();
            let codes = a.validate(&g)?;
            let bits = |v: &[u8]| v.iter().map(|b| char::from(b'0' + b)).collect::<String>();
            let mut s = String::from("plane,channel,xa,xb,xc,family\n");
            for ((plane, ch, r), code) in a.entries.iter().zip(&codes) {
                let _ = writeln!(s, "{plane},{},{},{},{},{}", ch.as_str(), bits(&r.xa), bits(&r.xb), bits(&r.xc), code.family.as_str());
            }
            let f = family_correlation(&codes)?;
            let _ = writeln!(s, "# worst correlation {} ({:.2} dB) between entries {} and {}", f.max(), db(f.max(), 1023), f.worst_pair.0, f.worst_pair.1);
            emit(out, "assignment.csv", &s)
        }
        CodesCommand::Overlay { file } => {
            let text = read_text(&file)?;
            let codes = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| ChipSequence::from_bit_text(l, Family::Overlay, 1e3))
                .collect::<Result<Vec<_>>>()?;
            let r = overlay_check(&codes)?;
            let mut s = String::from("i,j,max_db\n");
            for (i, j, d) in &r.pairs {
                let _ = writeln!(s, "{i},{j},{d:.2}");
            }
            let _ = writeln!(
                s,
                "# {} codes of {OVERLAY_LENGTH} chips, worst {} ({:.2} dB) between {} and {}",
                codes.len(),
                r.max_abs,
                r.max_db,
                r.worst_pair.0,
                r.worst_pair.1
            );
            emit(out, "overlay.csv", &s)
        }
        CodesCommand::Correlate { a, b } => {
            let p = circular_correlation(&read_chip_file(&a)?, &read_chip_file(&b)?)?;
            emit(out, "correlation.csv", &p.to_csv())
        }
    }
}
