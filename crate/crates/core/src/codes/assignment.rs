//! Primary code per (plane, channel).
//!
//! The default gives planes 1 to 16 the Kasami small set, two codes per
//! plane, and planes 17 and 18 four Gold codes made with an all-zero XC.
//! Gold XB states are placeholders, overridable like every other entry.

use super::generators::{parse_state, X1Generator};
use super::ChipSequence;
use crate::error::{Error, Result};
use crate::kv::KvDocument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    Data,
    Pilot,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Data => "data",
            Channel::Pilot => "pilot",
        }
    }
}

/// Register initial states of one X1 code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeRef {
    pub xa: Vec<u8>,
    pub xb: Vec<u8>,
    pub xc: Vec<u8>,
}

impl CodeRef {
    pub fn generate(&self, g: &X1Generator) -> Result<ChipSequence> {
        g.generate(&self.xa, &self.xb, &self.xc)
    }
}

fn bits(value: u32, width: usize) -> Vec<u8> {
    (0..width).map(|i| ((value >> (width - 1 - i)) & 1) as u8).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeAssignment {
    /// Indexed by 1-based plane (PRN ID) then channel.
    pub entries: Vec<(u32, Channel, CodeRef)>,
}

impl Default for CodeAssignment {
    fn default() -> Self {
        let mut entries = Vec::new();
        // XC states 0..31 enumerate the small set (state 0 gives XA alone).
        for plane in 1..=16u32 {
            for (c, ch) in [Channel::Data, Channel::Pilot].into_iter().enumerate() {
                let k = 2 * (plane - 1) + c as u32;
                entries.push((plane, ch, CodeRef { xa: vec![1; 10], xb: vec![0; 10], xc: bits(k, 5) }));
            }
        }
        for plane in 17..=18u32 {
            for (c, ch) in [Channel::Data, Channel::Pilot].into_iter().enumerate() {
                let k = 2 * (plane - 17) + c as u32 + 1;
                entries.push((plane, ch, CodeRef { xa: vec![1; 10], xb: bits(k, 10), xc: vec![0; 5] }));
            }
        }
        Self { entries }
    }
}

impl CodeAssignment {
    pub fn get(&self, plane: u32, channel: Channel) -> Option<&CodeRef> {
        self.entries.iter().find(|(p, c, _)| *p == plane && *c == channel).map(|(_, _, r)| r)
    }

    /// Override entries from keys `code.<plane>.<channel> = xa xb xc`.
    pub fn apply(&mut self, doc: &KvDocument) -> Result<()> {
        for key in doc.keys().filter(|k| k.starts_with("code.")).map(str::to_string).collect::<Vec<_>>() {
            let parts: Vec<&str> = key.split('.').collect();
            let (plane, channel) = match parts.as_slice() {
                [_, p, c] => (
                    p.parse::<u32>().map_err(|_| Error::config(format!("bad plane in {key}")))?,
                    match *c {
                        "data" => Channel::Data,
                        "pilot" => Channel::Pilot,
                        _ => return Err(Error::config(format!("bad channel in {key}"))),
                    },
                ),
                _ => return Err(Error::config(format!("bad code key {key}"))),
            };
            let fields: Vec<&str> = doc.get(&key).unwrap_or("").split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::config(format!("{key} needs three register states")));
            }
            let r = CodeRef { xa: parse_state(fields[0])?, xb: parse_state(fields[1])?, xc: parse_state(fields[2])? };
            match self.entries.iter_mut().find(|(p, c, _)| *p == plane && *c == channel) {
                Some(e) => e.2 = r,
                None => self.entries.push((plane, channel, r)),
            }
        }
        self.entries.sort_by_key(|(p, c, _)| (*p, *c));
        Ok(())
    }

    /// Every assigned code must differ and be generated without error.
    pub fn validate(&self, g: &X1Generator) -> Result<Vec<ChipSequence>> {
        let codes: Vec<ChipSequence> = self.entries.iter().map(|(_, _, r)| r.generate(g)).collect::<Result<_>>()?;
        for i in 0..codes.len() {
            for j in i + 1..codes.len() {
                if codes[i] == codes[j] {
                    let (a, b) = (&self.entries[i], &self.entries[j]);
                    return Err(Error::config(format!(
                        "plane {} {} and plane {} {} share a code",
                        a.0,
                        a.1.as_str(),
                        b.0,
                        b.1.as_str()
                    )));
                }
            }
        }
        Ok(codes)
    }
}
