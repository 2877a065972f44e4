use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::math::Angle8;

/// Opaque reference to a qubit held by the quantum backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitHandle(pub u64);

/// Everything that crosses the Alice/Bob channel. No variant can carry
/// θ, φ, φ′ or r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WireMessage {
    QubitBatch { count: usize, handles: Vec<QubitHandle> },
    MeasureInstruction { j: usize, delta_k: Angle8 },
    MeasureResult { j: usize, s: u8 },
    Done,
}

/// Messages of one session plus Alice's corrected results (indexed by qubit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub messages: Vec<WireMessage>,
    pub results: Vec<u8>,
}

impl Transcript {
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for m in &self.messages {
            serde_json::to_writer(&mut w, m)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    /// Parses a JSON-lines message stream (results are not part of the wire).
    pub fn read_messages<R: BufRead>(r: R) -> Result<Vec<WireMessage>, serde_json::Error> {
        r.lines()
            .map(|l| l.map_err(serde_json::Error::io))
            .filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()))
            .map(|l| serde_json::from_str(&l?))
            .collect()
    }

    /// The `(δ, raw s)` pairs Bob observed, by qubit.
    pub fn bob_view(&self) -> Vec<(usize, Angle8, u8)> {
        let mut deltas = std::collections::HashMap::new();
        let mut out = Vec::new();
        for m in &self.messages {
            match m {
                WireMessage::MeasureInstruction { j, delta_k } => {
                    deltas.insert(*j, *delta_k);
                }
                WireMessage::MeasureResult { j, s } => out.push((*j, deltas[j], *s)),
                _ => {}
            }
        }
        out
    }
}
