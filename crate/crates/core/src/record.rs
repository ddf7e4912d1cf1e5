//! JSON-lines circuit records.
//!
//! One circuit per line:
//!
//! ```json
//! {"n":4,"end_choice":[1,0],"second_dir":2,"raw_turns":[6,6,6,6],"centers":[[0,0],[0,1],[1,1],[1,0]],"piece_codes":[-2,-2,-2,-2]}
//! ```
//!
//! `raw_turns` lists `k_1..k_N`. The circuit is rebuilt from
//! `second_dir`, `end_choice` and `raw_turns`; `centers` and `piece_codes`
//! are redundant and checked on load. `mode` is present only for circuits
//! using the sharp pieces.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, EndChoice};
use crate::error::{Error, Result};
use crate::geometry::{Cell, Direction, PieceMode, TurnCode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitRecord {
    pub n: usize,
    pub end_choice: EndChoice,
    pub second_dir: u8,
    pub raw_turns: Vec<u8>,
    pub centers: Vec<Cell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece_codes: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<PieceMode>,
}

impl From<&Circuit> for CircuitRecord {
    fn from(c: &Circuit) -> Self {
        CircuitRecord {
            n: c.n(),
            end_choice: c.end_choice(),
            second_dir: c.second_dir().index(),
            raw_turns: c.turns().iter().map(|k| k.raw()).collect(),
            centers: c.centers().to_vec(),
            piece_codes: Some(c.piece_codes()),
            mode: (c.mode() == PieceMode::Extended).then_some(PieceMode::Extended),
        }
    }
}

impl CircuitRecord {
    pub fn to_circuit(&self) -> std::result::Result<Circuit, String> {
        let mode = self.mode.unwrap_or_default();
        if self.raw_turns.len() != self.n {
            return Err(format!("n = {} but {} turn codes", self.n, self.raw_turns.len()));
        }
        let second = Direction::new(self.second_dir).map_err(|e| e.to_string())?;
        let turns = self
            .raw_turns
            .iter()
            .map(|&k| TurnCode::from_raw(k))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let c = Circuit::from_turns(second, &turns, self.end_choice, mode).map_err(|e| e.to_string())?;
        if c.centers() != self.centers.as_slice() {
            return Err("centers disagree with the turn codes".into());
        }
        if let Some(codes) = &self.piece_codes {
            if *codes != c.piece_codes() {
                return Err("piece codes disagree with the turn codes".into());
            }
        }
        Ok(c)
    }
}

pub fn to_json_line(c: &Circuit) -> String {
    serde_json::to_string(&CircuitRecord::from(c)).expect("records serialize")
}

pub fn write_records<'a, W: Write>(mut w: W, circuits: impl IntoIterator<Item = &'a Circuit>) -> Result<()> {
    for c in circuits {
        writeln!(w, "{}", to_json_line(c))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records, skipping blank lines. Errors carry 1-based line numbers.
pub fn read_records<R: BufRead>(r: R) -> Result<Vec<Circuit>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse = |message: String| Error::Parse { line: i + 1, message };
        let rec: CircuitRecord = serde_json::from_str(&line).map_err(|e| parse(e.to_string()))?;
        out.push(rec.to_circuit().map_err(parse)?);
    }
    Ok(out)
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Writes `dir/catalogue.jsonl` atomically and returns its path.
pub fn write_catalogue<'a>(circuits: impl IntoIterator<Item = &'a Circuit>, dir: &Path) -> Result<PathBuf> {
    let mut buf = Vec::new();
    write_records(&mut buf, circuits)?;
    let path = dir.join("catalogue.jsonl");
    write_atomic(&path, &buf)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block() -> Circuit {
        let dirs = [0, 2, 4, 6].map(|d| Direction::new(d).unwrap());
        Circuit::from_directions(&dirs, PieceMode::Standard).unwrap()
    }

    #[test]
    fn documented_example_parses() {
        let line = r#"{"n":4,"end_choice":[1,0],"second_dir":2,"raw_turns":[6,6,6,6],"centers":[[0,0],[0,1],[1,1],[1,0]],"piece_codes":[-2,-2,-2,-2]}"#;
        let c = read_records(line.as_bytes()).unwrap();
        assert_eq!(to_json_line(&c[0]), line);
    }

    #[test]
    fn round_trip() {
        let c = block();
        let mut buf = Vec::new();
        write_records(&mut buf, [&c, &c]).unwrap();
        assert_eq!(read_records(buf.as_slice()).unwrap(), vec![c.clone(), c]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let good = to_json_line(&block());
        let bad = good.replace("\"second_dir\":6", "\"second_dir\":9");
        assert_ne!(good, bad);
        let text = format!("{good}\n\n{bad}\n");
        match read_records(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let wrong_codes = good.replace("[2,2,2,2]", "[2,2,2,-2]");
        assert!(matches!(read_records(wrong_codes.as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_catalogue() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_catalogue(std::iter::empty(), dir.path()).unwrap();
        assert_eq!(fs::read_to_string(path).unwrap(), "");
    }
}
