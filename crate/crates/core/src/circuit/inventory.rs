use std::fmt;

use serde::{Deserialize, Serialize};

use super::Circuit;
use crate::geometry::PieceType;

/// Per-type piece availability. `None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inventory {
    caps: [Option<u32>; 8],
}

impl Inventory {
    pub const fn unbounded() -> Self {
        Inventory { caps: [None; 8] }
    }

    /// The same cap for every type.
    pub const fn uniform(cap: u32) -> Self {
        Inventory {
            caps: [Some(cap); 8],
        }
    }

    /// The commercial box: four pieces of each type.
    pub const fn easyloop() -> Self {
        Self::uniform(4)
    }

    /// Unbounded supply of the listed types and none of the others.
    pub fn piece_set(kinds: &[PieceType]) -> Self {
        let mut caps = [Some(0); 8];
        for k in kinds {
            caps[k.id() as usize - 1] = None;
        }
        Inventory { caps }
    }

    /// Straights and quarter arcs only, as in classic wooden track sets.
    pub fn brio() -> Self {
        Self::piece_set(&[PieceType::Straight, PieceType::Curve])
    }

    pub fn from_caps(caps: [Option<u32>; 8]) -> Self {
        Inventory { caps }
    }

    pub fn with_cap(mut self, kind: PieceType, cap: Option<u32>) -> Self {
        self.caps[kind.id() as usize - 1] = cap;
        self
    }

    pub fn cap(&self, kind: PieceType) -> Option<u32> {
        self.caps[kind.id() as usize - 1]
    }

    pub fn caps(&self) -> &[Option<u32>; 8] {
        &self.caps
    }

    /// Whether a usage vector (indexed by `type − 1`) fits.
    pub fn admits(&self, usage: &[u32; 8]) -> bool {
        usage
            .iter()
            .zip(&self.caps)
            .all(|(&u, cap)| cap.is_none_or(|c| u <= c))
    }

    pub fn admits_one_more(&self, usage: &[u32; 8], kind: PieceType) -> bool {
        let i = kind.id() as usize - 1;
        self.caps[i].is_none_or(|c| usage[i] < c)
    }

    pub fn check(&self, circuit: &Circuit) -> bool {
        self.admits(&circuit.type_counts())
    }

    /// Total number of pieces of the first `types` types, if finite.
    pub fn total(&self, types: usize) -> Option<u64> {
        self.caps[..types].iter().map(|c| c.map(u64::from)).sum()
    }

    /// Reversal swaps types 5 and 6 (and 7 and 8); merging circuits under
    /// reversal is only sound when those caps agree.
    pub fn is_reversal_symmetric(&self) -> bool {
        self.caps[4] == self.caps[5] && self.caps[6] == self.caps[7]
    }

    pub fn is_unbounded(&self) -> bool {
        self.caps.iter().all(Option::is_none)
    }
}

impl Default for Inventory {
    fn default() -> Self {
        Self::unbounded()
    }
}

impl fmt::Display for Inventory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unbounded() {
            return write!(f, "inf");
        }
        let parts: Vec<String> = self
            .caps
            .iter()
            .map(|c| c.map_or("inf".into(), |c| c.to_string()))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}
