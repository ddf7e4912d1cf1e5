//! Design session state machine.
//!
//! A session records the headings `d_1..d_m` chosen so far. Squares follow
//! from them: `c_1` is the origin and `c_{i+1} = c_i + d_i`, so the head is
//! `c_{m+1}`. The first move picks `d_1`; every later move picks a turn code
//! and thereby places the piece in the head square. The piece in the origin
//! is placed last, when the head returns there and the closing turn is legal.
//!
//! Invariants of every reachable state: junctions `c_i + c_{i+1}` are
//! pairwise distinct, pieces sharing a square pass the pair catalogue, and
//! usage never exceeds the inventory.

use serde::{Deserialize, Serialize};

use railgrid::circuit::{Circuit, Inventory};
use railgrid::constructibility::{check_pair, is_constructible, PiecePlacement};
use railgrid::geometry::{Cell, Direction, Nature, PieceMode, TurnCode, WidthConfig};
use railgrid::random::{close_suffix, OpenPath};

/// One user action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    /// First move only: the heading out of the origin.
    Direction { direction: u8 },
    /// Raw turn code `0..8` relative to the current heading.
    Turn { turn: u8 },
}

/// A legal move and what it would do.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoveOption {
    #[serde(rename = "move")]
    pub action: Move,
    /// Signed code of the piece placed by this move.
    pub piece: Option<i8>,
    pub head: Cell,
    pub heading: u8,
    /// The move returns to the origin and completes the circuit.
    pub closes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Closure {
    pub closable: bool,
    /// Fewest further moves completing the circuit.
    pub min_pieces: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    inventory: Inventory,
    mode: PieceMode,
    width: WidthConfig,
    dirs: Vec<Direction>,
    status: Status,
}

impl Session {
    pub fn new(inventory: Inventory, mode: PieceMode, width: WidthConfig) -> Self {
        Session {
            inventory,
            mode,
            width,
            dirs: Vec::new(),
            status: Status::Open,
        }
    }

    pub fn inventory(&self) -> &Inventory {
        &self.inventory
    }

    pub fn mode(&self) -> PieceMode {
        self.mode
    }

    pub fn width(&self) -> &WidthConfig {
        &self.width
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn directions(&self) -> &[Direction] {
        &self.dirs
    }

    /// `c_1..c_{m+1}`; the last entry is the head (or the origin once closed).
    pub fn squares(&self) -> Vec<Cell> {
        let mut out = vec![Cell::ORIGIN];
        for d in &self.dirs {
            out.push(out.last().unwrap().step(*d));
        }
        out
    }

    pub fn head(&self) -> Cell {
        *self.squares().last().unwrap()
    }

    /// Nature of the open endpoint at the head, once a heading exists.
    pub fn head_nature(&self) -> Option<Nature> {
        self.dirs.last().map(|d| if d.is_axis() { Nature::Middle } else { Nature::Vertex })
    }

    /// Pieces placed so far, in circuit order. Closed sessions include the
    /// origin piece first.
    pub fn placed(&self) -> Vec<PiecePlacement> {
        let squares = self.squares();
        let m = self.dirs.len();
        let mut out = Vec::with_capacity(m);
        if self.status == Status::Closed {
            out.push(self.piece(0, squares[0], self.dirs[m - 1], self.dirs[0]));
        }
        for (i, w) in self.dirs.windows(2).enumerate() {
            out.push(self.piece(i + 1, squares[i + 1], w[0], w[1]));
        }
        out
    }

    fn piece(&self, index: usize, square: Cell, d_in: Direction, d_out: Direction) -> PiecePlacement {
        PiecePlacement::new(index, square, d_in, d_out, self.mode).expect("only legal turns are stored")
    }

    /// Pieces used per type (index `type − 1`).
    pub fn usage(&self) -> [u32; 8] {
        let mut usage = [0; 8];
        for p in self.placed() {
            usage[p.code.kind.id() as usize - 1] += 1;
        }
        usage
    }

    /// Remaining pieces per type; `None` is unbounded.
    pub fn remaining(&self) -> [Option<u32>; 8] {
        let usage = self.usage();
        let mut out = *self.inventory.caps();
        for (cap, used) in out.iter_mut().zip(usage) {
            *cap = cap.map(|c| c - used);
        }
        out
    }

    /// Total pieces still available among this mode's types, if finite.
    pub fn available(&self) -> Option<u64> {
        let rem = self.remaining();
        rem[..self.mode.type_count()].iter().map(|c| c.map(u64::from)).sum()
    }

    /// The completed circuit, normalized.
    pub fn circuit(&self) -> Option<Circuit> {
        (self.status == Status::Closed)
            .then(|| Circuit::from_directions(&self.dirs, self.mode).expect("closed sessions hold circuits"))
    }

    pub fn legal_moves(&self) -> Vec<MoveOption> {
        if self.status == Status::Closed {
            return Vec::new();
        }
        let Some(&last) = self.dirs.last() else {
            if self.available() == Some(0) {
                return Vec::new();
            }
            return Direction::ALL
                .iter()
                .map(|&d| MoveOption {
                    action: Move::Direction { direction: d.index() },
                    piece: None,
                    head: Cell::ORIGIN.step(d),
                    heading: d.index(),
                    closes: false,
                })
                .collect();
        };
        let squares = self.squares();
        let junctions: Vec<(i32, i32)> = squares.windows(2).map(|w| (w[0].x + w[1].x, w[0].y + w[1].y)).collect();
        let placed = self.placed();
        let usage = self.usage();
        let head = *squares.last().unwrap();
        let m = self.dirs.len();

        let mut out = Vec::new();
        for &k in self.mode.turns() {
            let d = last.turn(k);
            let next = head.step(d);
            let p = self.piece(m, head, last, d);
            if !self.inventory.admits_one_more(&usage, p.code.kind) {
                continue;
            }
            if junctions.contains(&(head.x + next.x, head.y + next.y)) {
                continue;
            }
            if placed.iter().any(|q| q.square == head && check_pair(q, &p, &self.width).is_some()) {
                continue;
            }
            let closes = next == Cell::ORIGIN && self.would_close(d);
            out.push(MoveOption {
                action: Move::Turn { turn: k.raw() },
                piece: Some(p.code.signed()),
                head: next,
                heading: d.index(),
                closes,
            });
        }
        out
    }

    /// Whether appending `d` (which returns to the origin) yields a valid circuit.
    fn would_close(&self, d: Direction) -> bool {
        let legal = TurnCode::between(d, self.dirs[0]).is_some_and(|k| self.mode.allows(k));
        if !legal {
            return false;
        }
        let mut dirs = self.dirs.clone();
        dirs.push(d);
        match Circuit::from_directions(&dirs, self.mode) {
            Ok(c) => self.inventory.check(&c) && is_constructible(&c, &self.width),
            Err(_) => false,
        }
    }

    /// Applies `mv` if it is currently legal and returns the option taken.
    pub fn apply(&mut self, mv: Move) -> Option<MoveOption> {
        let option = self.legal_moves().into_iter().find(|o| o.action == mv)?;
        self.dirs.push(Direction::new(option.heading).expect("headings are valid"));
        if option.closes {
            self.status = Status::Closed;
        }
        Some(option)
    }

    /// Removes the last move; a closed session reopens. `false` if empty.
    pub fn undo(&mut self) -> bool {
        if self.dirs.pop().is_none() {
            return false;
        }
        self.status = Status::Open;
        true
    }

    /// Searches completions of at most `max` further moves.
    pub fn closure(&self, max: usize) -> Closure {
        if self.status == Status::Closed {
            return Closure {
                closable: true,
                min_pieces: Some(0),
            };
        }
        let found = (1..=max).find(|&s| self.closable_in(s));
        Closure {
            closable: found.is_some(),
            min_pieces: found,
        }
    }

    fn closable_in(&self, s: usize) -> bool {
        let ok = |dirs: &Vec<Direction>| {
            Circuit::from_directions(dirs, self.mode)
                .is_ok_and(|c| self.inventory.check(&c) && is_constructible(&c, &self.width))
        };
        if self.dirs.is_empty() {
            // the first move fixes d_1 without placing a piece
            return s >= 2
                && Direction::ALL.iter().any(|&d| {
                    close_suffix(&OpenPath::new(vec![d]), s - 1, self.mode).iter().any(ok)
                });
        }
        close_suffix(&OpenPath::new(self.dirs.clone()), s, self.mode).iter().any(ok)
    }
}
