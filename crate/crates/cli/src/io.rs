//! File helpers shared by the commands.

use std::fs;
use std::io::Write;
use std::path::Path;

use leopnt::codes::{ChipSequence, Family};
use leopnt::{Error, Result};

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", dir.display()))))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    fs::write(path, bytes).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Print to stdout and, when `out` is set, also write `out/name`.
pub fn emit(out: Option<&Path>, name: &str, text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    if let Some(dir) = out {
        write_file(&dir.join(name), text.as_bytes())?;
    }
    Ok(())
}

/// Degrees as a file-name fragment: 0, 45, -45, 37.5.
pub fn deg_tag(x: f64) -> String {
    format!("{x}")
}

/// Text form of a chip sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ChipFormat {
    /// One chip (+1 or -1) per line.
    Chips,
    /// One line of 0/1 bits.
    Bits,
    /// Hexadecimal, first chip in the most significant bit.
    Hex,
}

pub fn format_chips(c: &ChipSequence, f: ChipFormat) -> String {
    match f {
        ChipFormat::Chips => {
            let mut s = String::with_capacity(3 * c.len());
            for &x in &c.chips {
                s.push_str(if x > 0 { "1\n" } else { "-1\n" });
            }
            s
        }
        ChipFormat::Bits => format!("{}\n", c.to_bit_text()),
        ChipFormat::Hex => format!("{}\n", c.to_hex()),
    }
}

/// Read a chip file written by [`format_chips`] in `chips` or `bits` form.
pub fn parse_chips(text: &str, family: Family, chip_rate: f64) -> Result<ChipSequence> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() == 1 {
        return ChipSequence::from_bit_text(tokens[0], family, chip_rate);
    }
    let chips = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| match *t {
            "1" | "+1" => Ok(1i8),
            "-1" => Ok(-1i8),
            _ => Err(Error::Parse { line: i + 1, message: format!("expected +1 or -1, got `{t}`") }),
        })
        .collect::<Result<Vec<_>>>()?;
    ChipSequence::new(chips, family, chip_rate)
}
