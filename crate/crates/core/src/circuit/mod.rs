//! Closed circuits, inventories and canonical keys.
//!
//! A circuit of `N` pieces is stored as its occupied squares `c_1..c_N`, the
//! headings `d_i` of the moves `c_i → c_{i+1}` (with `d_N` closing back to
//! `c_1`), the turn codes `k_i = d_i − d_{i−1}` and the signed piece codes.
//! Circuits are normalized so that `c_1` is the origin and `c_N` is `(1, 0)`
//! or `(1, 1)`.

mod canonical;
mod inventory;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{classify_piece, Cell, Direction, PieceCode, PieceMode, PieceType, TurnCode};

pub use canonical::{
    canonical_key, canonical_rotation, least_rotation, mirror_codes, reverse_codes, CanonicalKey,
    Equivalence,
};
pub use inventory::Inventory;

/// Normalized position of the last square of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i32; 2]", into = "[i32; 2]")]
pub enum EndChoice {
    /// `c_N = (1, 0)`; the closing move heads west.
    Axis,
    /// `c_N = (1, 1)`; the closing move heads south-west.
    Diagonal,
}

impl EndChoice {
    pub const ALL: [EndChoice; 2] = [EndChoice::Axis, EndChoice::Diagonal];

    pub fn cell(self) -> Cell {
        match self {
            EndChoice::Axis => Cell::new(1, 0),
            EndChoice::Diagonal => Cell::new(1, 1),
        }
    }

    pub fn from_cell(c: Cell) -> Option<Self> {
        EndChoice::ALL.into_iter().find(|e| e.cell() == c)
    }

    /// Heading of the move `c_N → c_1`.
    pub fn closing_direction(self) -> Direction {
        match self {
            EndChoice::Axis => Direction::WEST,
            EndChoice::Diagonal => Direction::SOUTH_WEST,
        }
    }
}

impl TryFrom<[i32; 2]> for EndChoice {
    type Error = String;
    fn try_from(v: [i32; 2]) -> std::result::Result<Self, String> {
        EndChoice::from_cell(v.into()).ok_or_else(|| format!("end choice must be [1,0] or [1,1], got {v:?}"))
    }
}

impl From<EndChoice> for [i32; 2] {
    fn from(e: EndChoice) -> [i32; 2] {
        e.cell().into()
    }
}

/// A closed, normalized circuit. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    mode: PieceMode,
    centers: Vec<Cell>,
    dirs: Vec<Direction>,
    turns: Vec<TurnCode>,
    pieces: Vec<PieceCode>,
}

impl Circuit {
    /// Builds the circuit swept by the parameters `(d_1, k_2..k_{N−1}, c_N)`.
    ///
    /// Returns `None` when the path does not end on `end`, when a closing
    /// turn `k_N` or `k_1` is not a legal piece of `mode`, or when `N < 3`.
    pub fn build(
        second_dir: Direction,
        mid_turns: &[TurnCode],
        end: EndChoice,
        mode: PieceMode,
    ) -> Option<Circuit> {
        let n = mid_turns.len() + 2;
        if n < 3 || mid_turns.iter().any(|&k| !mode.allows(k)) {
            return None;
        }
        let mut dirs = Vec::with_capacity(n);
        let mut centers = Vec::with_capacity(n);
        dirs.push(second_dir);
        centers.push(Cell::ORIGIN);
        centers.push(Cell::ORIGIN.step(second_dir));
        for &k in mid_turns {
            let d = dirs.last().unwrap().turn(k);
            centers.push(centers.last().unwrap().step(d));
            dirs.push(d);
        }
        if centers[n - 1] != end.cell() {
            return None;
        }
        dirs.push(end.closing_direction());
        Self::from_parts(centers, dirs, mode).ok()
    }

    /// Builds a circuit from its `N` headings, starting at the origin and
    /// normalizing by a quarter-turn rotation.
    pub fn from_directions(dirs: &[Direction], mode: PieceMode) -> Result<Circuit> {
        let n = dirs.len();
        if n < 3 {
            return Err(Error::TooShort(n));
        }
        let (sx, sy) = dirs.iter().fold((0, 0), |(x, y), d| {
            let (dx, dy) = d.step();
            (x + dx, y + dy)
        });
        if (sx, sy) != (0, 0) {
            return Err(Error::NotClosed(sx, sy));
        }
        let last = dirs[n - 1].index();
        let r = (0..4u8).find(|r| matches!((last + 2 * r) % 8, 4 | 5)).unwrap();
        let dirs: Vec<Direction> = dirs.iter().map(|d| d.rotated_quarter(r)).collect();
        let mut centers = Vec::with_capacity(n);
        centers.push(Cell::ORIGIN);
        for d in &dirs[..n - 1] {
            centers.push(centers.last().unwrap().step(*d));
        }
        Self::from_parts(centers, dirs, mode)
    }

    /// Rebuilds a circuit from its sweep parameters and checks the stored
    /// closing turns; used when reading records.
    pub fn from_turns(
        second_dir: Direction,
        raw_turns: &[TurnCode],
        end: EndChoice,
        mode: PieceMode,
    ) -> Result<Circuit> {
        let n = raw_turns.len();
        if n < 3 {
            return Err(Error::TooShort(n));
        }
        for &k in raw_turns {
            if !mode.allows(k) {
                return Err(Error::InvalidTurn(k.raw().into()));
            }
        }
        let c = Self::build(second_dir, &raw_turns[1..n - 1], end, mode).ok_or_else(|| {
            Error::InvalidParams("sweep parameters do not describe a closed circuit".into())
        })?;
        if c.turns != raw_turns {
            return Err(Error::InvalidParams(format!(
                "closing turns ({}, {}) disagree with the path ({}, {})",
                raw_turns[0].raw(),
                raw_turns[n - 1].raw(),
                c.turns[0].raw(),
                c.turns[n - 1].raw()
            )));
        }
        Ok(c)
    }

    fn from_parts(centers: Vec<Cell>, dirs: Vec<Direction>, mode: PieceMode) -> Result<Circuit> {
        let n = dirs.len();
        let mut turns = Vec::with_capacity(n);
        let mut pieces = Vec::with_capacity(n);
        for i in 0..n {
            let d_in = dirs[(i + n - 1) % n];
            let d_out = dirs[i];
            pieces.push(classify_piece(d_in, d_out, mode)?);
            turns.push(TurnCode::between(d_in, d_out).expect("classified turns are legal"));
        }
        Ok(Circuit {
            mode,
            centers,
            dirs,
            turns,
            pieces,
        })
    }

    pub fn n(&self) -> usize {
        self.centers.len()
    }

    pub fn mode(&self) -> PieceMode {
        self.mode
    }

    pub fn centers(&self) -> &[Cell] {
        &self.centers
    }

    /// Headings `d_1..d_N`; `d_i` leads from `c_i` to `c_{i+1}`.
    pub fn dirs(&self) -> &[Direction] {
        &self.dirs
    }

    /// Turn codes `k_1..k_N`; `k_i` is taken in square `c_i`.
    pub fn turns(&self) -> &[TurnCode] {
        &self.turns
    }

    /// Pieces `p_1..p_N`; `p_i` occupies `c_i`.
    pub fn pieces(&self) -> &[PieceCode] {
        &self.pieces
    }

    pub fn piece_codes(&self) -> Vec<i8> {
        self.pieces.iter().map(|p| p.signed()).collect()
    }

    pub fn second_dir(&self) -> Direction {
        self.dirs[0]
    }

    pub fn end_choice(&self) -> EndChoice {
        EndChoice::from_cell(self.centers[self.n() - 1]).expect("circuits are normalized")
    }

    /// `k_2..k_{N−1}`, the free sweep parameters.
    pub fn mid_turns(&self) -> &[TurnCode] {
        &self.turns[1..self.n() - 1]
    }

    /// Number of pieces of each type, indexed by `type − 1`.
    pub fn type_counts(&self) -> [u32; 8] {
        let mut counts = [0; 8];
        for p in &self.pieces {
            counts[p.kind.id() as usize - 1] += 1;
        }
        counts
    }

    pub fn count_of(&self, kind: PieceType) -> u32 {
        self.type_counts()[kind.id() as usize - 1]
    }

    /// Sum of the signed turns, in eighths of a full turn.
    pub fn total_turning(&self) -> i32 {
        self.turns.iter().map(|k| k.signed() as i32).sum()
    }

    pub fn key(&self, stage: Equivalence) -> CanonicalKey {
        canonical_key(&self.piece_codes(), stage)
    }

    fn sweep_order(&self) -> (EndChoice, u8, impl Iterator<Item = u8> + '_) {
        (
            self.end_choice(),
            self.second_dir().index(),
            self.mid_turns().iter().map(|k| k.raw()),
        )
    }
}

/// Orders circuits by `N`, then by their sweep parameters.
impl Ord for Circuit {
    fn cmp(&self, other: &Self) -> Ordering {
        let (e1, d1, t1) = self.sweep_order();
        let (e2, d2, t2) = other.sweep_order();
        self.n()
            .cmp(&other.n())
            .then(e1.cmp(&e2))
            .then(d1.cmp(&d2))
            .then_with(|| t1.cmp(t2))
            .then_with(|| (self.mode == PieceMode::Extended).cmp(&(other.mode == PieceMode::Extended)))
    }
}

impl PartialOrd for Circuit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn turns(raw: &[u8]) -> Vec<TurnCode> {
        raw.iter().map(|&k| TurnCode::from_raw(k).unwrap()).collect()
    }

    // With c_N fixed at (1, 0) and a northward first move the block loop is
    // necessarily traversed clockwise, so every turn is a right quarter turn.
    #[test]
    fn square_block_loop() {
        let c = Circuit::build(Direction::NORTH, &turns(&[6, 6]), EndChoice::Axis, PieceMode::Standard).unwrap();
        assert_eq!(c.piece_codes(), vec![-2, -2, -2, -2]);
        assert_eq!(
            c.centers(),
            &[Cell::new(0, 0), Cell::new(0, 1), Cell::new(1, 1), Cell::new(1, 0)]
        );
        assert_eq!(c.total_turning(), -8);
        assert_eq!(c.turns().iter().map(|k| k.raw()).collect::<Vec<_>>(), vec![6, 6, 6, 6]);
        // left turns from the same start wander off to (-1, 0)
        assert!(Circuit::build(Direction::NORTH, &turns(&[2, 2]), EndChoice::Axis, PieceMode::Standard).is_none());
    }

    #[test]
    fn diamond_loop() {
        let c = Circuit::build(Direction::NORTH_WEST, &turns(&[6, 6]), EndChoice::Diagonal, PieceMode::Standard);
        let c = c.expect("diamond closes");
        assert_eq!(c.piece_codes(), vec![-4, -4, -4, -4]);
        assert_eq!(c.centers()[1..], [Cell::new(-1, 1), Cell::new(0, 2), Cell::new(1, 1)]);
    }

    #[test]
    fn open_path_is_rejected() {
        assert!(Circuit::build(Direction::EAST, &turns(&[0, 0]), EndChoice::Axis, PieceMode::Standard).is_none());
    }

    #[test]
    fn short_paths_are_rejected() {
        assert!(Circuit::build(Direction::EAST, &[], EndChoice::Axis, PieceMode::Standard).is_none());
        assert!(matches!(
            Circuit::from_directions(&[Direction::EAST, Direction::WEST], PieceMode::Standard),
            Err(Error::TooShort(2))
        ));
    }

    #[test]
    fn from_directions_normalizes() {
        // the block loop traversed east, north, west, south from the origin
        let dirs = [Direction::EAST, Direction::NORTH, Direction::WEST, Direction::SOUTH];
        let c = Circuit::from_directions(&dirs, PieceMode::Standard).unwrap();
        assert_eq!(c.centers()[0], Cell::ORIGIN);
        assert!(EndChoice::from_cell(c.centers()[3]).is_some());
        assert_eq!(c.piece_codes(), vec![2, 2, 2, 2]);
        assert_eq!(c.total_turning(), 8);
        let rebuilt = Circuit::build(c.second_dir(), c.mid_turns(), c.end_choice(), PieceMode::Standard).unwrap();
        assert_eq!(rebuilt, c);
    }

    #[test]
    fn from_directions_rejects_open_paths() {
        let dirs = [Direction::EAST, Direction::NORTH, Direction::NORTH_WEST];
        assert!(matches!(
            Circuit::from_directions(&dirs, PieceMode::Standard),
            Err(Error::NotClosed(0, 2))
        ));
    }

    #[test]
    fn from_turns_checks_closing_codes() {
        let c = Circuit::build(Direction::NORTH, &turns(&[6, 6]), EndChoice::Axis, PieceMode::Standard).unwrap();
        assert_eq!(Circuit::from_turns(Direction::NORTH, c.turns(), EndChoice::Axis, PieceMode::Standard).unwrap(), c);
        let mut bad = c.turns().to_vec();
        bad[0] = TurnCode::STRAIGHT;
        assert!(Circuit::from_turns(Direction::NORTH, &bad, EndChoice::Axis, PieceMode::Standard).is_err());
    }

    #[test]
    fn end_choice_serde() {
        assert_eq!(serde_json::to_string(&EndChoice::Diagonal).unwrap(), "[1,1]");
        assert_eq!(serde_json::from_str::<EndChoice>("[1,0]").unwrap(), EndChoice::Axis);
        assert!(serde_json::from_str::<EndChoice>("[0,1]").is_err());
    }
}
