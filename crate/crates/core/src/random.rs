//! Randomized construction of long circuits.
//!
//! `q` random open prefixes of `r` pieces are drawn from the origin. Those
//! ending inside the box `|x| < R, |y| < R` are completed in every possible
//! way by `s` further pieces returning to the origin. Completed circuits go
//! through the usual filters: inventory, full-stage dedup, constructibility.
//!
//! Prefix `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so
//! results are reproducible and independent of the number of workers.

use std::collections::BTreeSet;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Equivalence, Inventory};
use crate::constructibility::is_constructible;
use crate::error::{Error, Result};
use crate::geometry::{Cell, Direction, PieceMode, TurnCode, WidthConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomParams {
    pub r: usize,
    pub s: usize,
    pub q: usize,
    /// Half-width of the box the prefix endpoint must fall in.
    pub radius: i32,
    pub seed: u64,
}

impl RandomParams {
    pub fn n(&self) -> usize {
        self.r + self.s
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.s == 0 || self.q == 0 || self.radius < 1 {
            return Err(Error::InvalidParams(format!(
                "need r, s, q ≥ 1 and R ≥ 1, got r={} s={} q={} R={}",
                self.r, self.s, self.q, self.radius
            )));
        }
        if self.n() < 3 {
            return Err(Error::TooShort(self.n()));
        }
        Ok(())
    }
}

/// An open path from the origin: headings `d_1..d_r`, squares `c_1..c_{r+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenPath {
    pub dirs: Vec<Direction>,
    pub centers: Vec<Cell>,
}

impl OpenPath {
    pub fn new(dirs: Vec<Direction>) -> Self {
        let mut centers = vec![Cell::ORIGIN];
        for d in &dirs {
            centers.push(centers.last().unwrap().step(*d));
        }
        OpenPath { dirs, centers }
    }

    /// Number of pieces already fixed (`r`); the piece in the head square is not.
    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn head(&self) -> Cell {
        *self.centers.last().unwrap()
    }
}

/// Draws a uniform random prefix of `r ≥ 1` pieces.
pub fn random_prefix<R: Rng>(r: usize, mode: PieceMode, rng: &mut R) -> OpenPath {
    let turns = mode.turns();
    let mut dirs = Vec::with_capacity(r);
    dirs.push(Direction::ALL[rng.random_range(0..8)]);
    for _ in 1..r {
        let k = turns[rng.random_range(0..turns.len())];
        dirs.push(dirs.last().unwrap().turn(k));
    }
    OpenPath::new(dirs)
}

/// All ways to close `prefix` with exactly `s` more pieces.
///
/// The completion occupies the squares `c_{r+1}..c_{r+s}` and its last move
/// returns to the origin; the closing turns `k_{r+s}` and `k_1` must be legal.
/// Each result is the full heading sequence `d_1..d_{r+s}`.
pub fn close_suffix(prefix: &OpenPath, s: usize, mode: PieceMode) -> Vec<Vec<Direction>> {
    let mut out = Vec::new();
    if prefix.is_empty() || s == 0 || prefix.head().king_distance(Cell::ORIGIN) > s as i32 {
        return out;
    }
    let mut dirs = prefix.dirs.clone();
    extend(&mut dirs, prefix.head(), s - 1, mode, &mut out);
    out
}

fn extend(dirs: &mut Vec<Direction>, cell: Cell, free: usize, mode: PieceMode, out: &mut Vec<Vec<Direction>>) {
    if free == 0 {
        let Some(d_n) = Direction::from_step(-cell.x, -cell.y) else {
            return;
        };
        let last = *dirs.last().unwrap();
        let legal = |from, to| TurnCode::between(from, to).is_some_and(|k| mode.allows(k));
        if cell != Cell::ORIGIN && legal(last, d_n) && legal(d_n, dirs[0]) {
            let mut full = dirs.clone();
            full.push(d_n);
            out.push(full);
        }
        return;
    }
    for &k in mode.turns() {
        let d = dirs.last().unwrap().turn(k);
        let next = cell.step(d);
        // after this move `free − 1` moves remain, then the closing one
        if next.king_distance(Cell::ORIGIN) > free as i32 {
            continue;
        }
        dirs.push(d);
        extend(dirs, next, free - 1, mode, out);
        dirs.pop();
    }
}

#[derive(Debug, Clone, Default)]
pub struct RandomOutcome {
    pub circuits: Vec<Circuit>,
    /// Prefixes whose endpoint fell inside the box.
    pub prefixes_in_box: usize,
    /// Closed completions before filtering.
    pub completions: usize,
}

/// Runs the randomized construction on `workers` threads.
pub fn build_random(
    params: &RandomParams,
    inventory: &Inventory,
    mode: PieceMode,
    width: &WidthConfig,
    workers: usize,
) -> Result<RandomOutcome> {
    params.validate()?;
    let workers = workers.max(1);
    // per prefix: (in box?, completions in order)
    let per_prefix: Vec<(usize, bool, Vec<Circuit>)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..params.q)
                        .step_by(workers)
                        .map(|i| {
                            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
                            rng.set_stream(i as u64);
                            let prefix = random_prefix(params.r, mode, &mut rng);
                            let head = prefix.head();
                            if head.x.abs() >= params.radius || head.y.abs() >= params.radius {
                                return (i, false, Vec::new());
                            }
                            let circuits = close_suffix(&prefix, params.s, mode)
                                .into_iter()
                                .map(|dirs| Circuit::from_directions(&dirs, mode).expect("completions close legally"))
                                .collect();
                            (i, true, circuits)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<_> = handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect();
        all.sort_by_key(|x| x.0);
        all
    });

    let mut outcome = RandomOutcome::default();
    let mut seen = BTreeSet::new();
    for (_, in_box, circuits) in per_prefix {
        outcome.prefixes_in_box += in_box as usize;
        outcome.completions += circuits.len();
        for c in circuits {
            if !inventory.check(&c) || !seen.insert(c.key(Equivalence::Full)) {
                continue;
            }
            if is_constructible(&c, width) {
                outcome.circuits.push(c);
            }
        }
    }
    Ok(outcome)
}
