//! Exhaustive staged enumeration.
//!
//! The sweep walks every parameter tuple `(c_N, d_1, k_2..k_{N−1})` depth
//! first. Branches are cut as soon as the walk can no longer reach `c_N` in
//! the remaining king moves or the inventory is exhausted; neither cut changes
//! the counts. Accepted tuples then pass through the staged filters:
//! direct dedup, full dedup and constructibility.

mod brio;
mod table;

use std::collections::BTreeMap;
use std::thread;

use crate::circuit::{canonical_key, Circuit, EndChoice, Equivalence, Inventory};
use crate::constructibility::is_constructible;
use crate::error::{Error, Result};
use crate::geometry::{classify_piece, Cell, Direction, PieceMode, TurnCode, WidthConfig};

pub use brio::{brio_compare, d4_orbit_size, BrioComparison};
pub use table::{CountRow, CountTable};

/// Sweeps larger than this many tuples are refused unless forced.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Filter stage, in the order they are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Looping,
    Direct,
    Isometries,
    Constructible,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Looping, Stage::Direct, Stage::Isometries, Stage::Constructible];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Looping => "looping",
            Stage::Direct => "direct",
            Stage::Isometries => "isometries",
            Stage::Constructible => "constructible",
        }
    }
}

impl std::str::FromStr for Stage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown stage {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub n: usize,
    pub inventory: Inventory,
    pub mode: PieceMode,
    pub width: WidthConfig,
    /// Keep every looping tuple, not only the class representatives.
    pub keep_looping: bool,
    /// Largest admissible `possible(N)`; `None` disables the guard.
    pub budget: Option<u128>,
}

impl SweepSpec {
    pub fn new(n: usize, inventory: Inventory) -> Self {
        SweepSpec {
            n,
            inventory,
            mode: PieceMode::Standard,
            width: WidthConfig::default(),
            keep_looping: false,
            budget: Some(DEFAULT_BUDGET),
        }
    }

    pub fn keep_looping(mut self, keep: bool) -> Self {
        self.keep_looping = keep;
        self
    }

    pub fn budget(mut self, budget: Option<u128>) -> Self {
        self.budget = budget;
        self
    }

    pub fn mode(mut self, mode: PieceMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn width(mut self, width: WidthConfig) -> Self {
        self.width = width;
        self
    }
}

/// Staged output of a sweep. Every list is sorted in sweep order; class
/// lists hold the first tuple of each class.
#[derive(Debug, Clone, Default)]
pub struct SweepResult {
    pub row: CountRow,
    /// Empty unless `keep_looping` was set.
    pub looping: Vec<Circuit>,
    pub direct: Vec<Circuit>,
    pub isometries: Vec<Circuit>,
    pub constructible: Vec<Circuit>,
}

impl SweepResult {
    pub fn stage(&self, stage: Stage) -> &[Circuit] {
        match stage {
            Stage::Looping => &self.looping,
            Stage::Direct => &self.direct,
            Stage::Isometries => &self.isometries,
            Stage::Constructible => &self.constructible,
        }
    }
}

/// Number of swept parameter tuples: `2` for `N = 1`, `2·8·b^(N−2)` beyond,
/// with `b` the number of legal turns.
pub fn possible(n: usize, mode: PieceMode) -> u128 {
    match n {
        0 => 0,
        1 => 2,
        _ => 16 * (mode.turns().len() as u128).pow(n as u32 - 2),
    }
}

pub fn sweep(spec: &SweepSpec) -> Result<SweepResult> {
    partitioned_sweep(spec, 1)
}

/// Runs the sweep on `shards` threads. The result does not depend on `shards`.
pub fn partitioned_sweep(spec: &SweepSpec, shards: usize) -> Result<SweepResult> {
    if shards == 0 {
        return Err(Error::InvalidParams("shard count must be positive".into()));
    }
    if spec.n == 0 {
        return Err(Error::InvalidParams("N must be at least 1".into()));
    }
    let total = possible(spec.n, spec.mode);
    if let Some(budget) = spec.budget {
        if total > budget {
            return Err(Error::BudgetExceeded {
                estimated: total,
                budget,
            });
        }
    }
    let mut result = SweepResult {
        row: CountRow {
            n: spec.n,
            possible: u64::try_from(total).unwrap_or(u64::MAX),
            ..CountRow::default()
        },
        ..SweepResult::default()
    };
    if spec.n < 3 {
        return Ok(result);
    }

    let jobs: Vec<(EndChoice, Direction, TurnCode)> = EndChoice::ALL
        .into_iter()
        .flat_map(|e| Direction::ALL.into_iter().map(move |d| (e, d)))
        .flat_map(|(e, d)| spec.mode.turns().iter().map(move |&k| (e, d, k)))
        .collect();

    let partials: Vec<Partial> = thread::scope(|s| {
        let handles: Vec<_> = (0..shards)
            .map(|w| {
                let jobs = &jobs;
                s.spawn(move || {
                    let mut partial = Partial::default();
                    for &(end, d1, k2) in jobs.iter().skip(w).step_by(shards) {
                        run_job(spec, end, d1, k2, &mut partial);
                    }
                    partial
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });

    let mut direct: BTreeMap<Vec<i8>, Circuit> = BTreeMap::new();
    for p in partials {
        result.row.looping += p.accepted;
        result.looping.extend(p.looping);
        for (key, c) in p.direct {
            merge_min(&mut direct, key, c);
        }
    }
    result.looping.sort();

    let mut full: BTreeMap<Vec<i8>, Circuit> = BTreeMap::new();
    for c in direct.values() {
        merge_min(&mut full, c.key(Equivalence::Full).codes, c.clone());
    }
    result.direct = sorted(direct.into_values());
    result.isometries = sorted(full.into_values());
    result.constructible = result
        .isometries
        .iter()
        .filter(|c| is_constructible(c, &spec.width))
        .cloned()
        .collect();
    result.row.direct = result.direct.len() as u64;
    result.row.isometries = result.isometries.len() as u64;
    result.row.constructible = result.constructible.len() as u64;
    Ok(result)
}

/// Count rows for every `N` in `range`, each with `template`'s other settings.
pub fn count_range(range: std::ops::RangeInclusive<usize>, template: &SweepSpec, shards: usize) -> Result<CountTable> {
    let mut rows = Vec::new();
    for n in range {
        let spec = SweepSpec {
            n,
            keep_looping: false,
            ..template.clone()
        };
        rows.push(partitioned_sweep(&spec, shards)?.row);
    }
    Ok(CountTable { rows })
}

fn sorted(it: impl Iterator<Item = Circuit>) -> Vec<Circuit> {
    let mut v: Vec<Circuit> = it.collect();
    v.sort();
    v
}

fn merge_min(map: &mut BTreeMap<Vec<i8>, Circuit>, key: Vec<i8>, c: Circuit) {
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            if c < *e.get() {
                e.insert(c);
            }
        }
    }
}

#[derive(Default)]
struct Partial {
    accepted: u64,
    looping: Vec<Circuit>,
    direct: BTreeMap<Vec<i8>, Circuit>,
}

struct Walker<'a> {
    spec: &'a SweepSpec,
    end: EndChoice,
    d1: Direction,
    mid: Vec<TurnCode>,
    usage: [u32; 8],
    out: &'a mut Partial,
}

fn run_job(spec: &SweepSpec, end: EndChoice, d1: Direction, k2: TurnCode, out: &mut Partial) {
    let c2 = Cell::ORIGIN.step(d1);
    // c_2 must still reach c_N in the N − 2 remaining moves
    if c2.king_distance(end.cell()) > spec.n as i32 - 2 {
        return;
    }
    let mut w = Walker {
        spec,
        end,
        d1,
        mid: Vec::with_capacity(spec.n),
        usage: [0; 8],
        out,
    };
    w.descend(c2, d1, 1, &[k2]);
}

impl Walker<'_> {
    /// `cell = c_{t+1}` was reached with heading `dir` after `t` moves.
    fn descend(&mut self, cell: Cell, dir: Direction, t: usize, options: &[TurnCode]) {
        let n = self.spec.n;
        if t == n - 1 {
            self.close(cell, dir);
            return;
        }
        let target = self.end.cell();
        let left_after = (n - 2 - t) as i32;
        for &k in options {
            let next_dir = dir.turn(k);
            let next = cell.step(next_dir);
            if next.king_distance(target) > left_after {
                continue;
            }
            let kind = classify_piece(dir, next_dir, self.spec.mode)
                .expect("sweep turns are legal")
                .kind;
            if !self.spec.inventory.admits_one_more(&self.usage, kind) {
                continue;
            }
            let slot = kind.id() as usize - 1;
            self.usage[slot] += 1;
            self.mid.push(k);
            self.descend(next, next_dir, t + 1, self.spec.mode.turns());
            self.mid.pop();
            self.usage[slot] -= 1;
        }
    }

    fn close(&mut self, cell: Cell, dir: Direction) {
        if cell != self.end.cell() {
            return;
        }
        let mode = self.spec.mode;
        let d_n = self.end.closing_direction();
        let (Ok(last), Ok(first)) = (classify_piece(dir, d_n, mode), classify_piece(d_n, self.d1, mode)) else {
            return;
        };
        let mut usage = self.usage;
        usage[last.kind.id() as usize - 1] += 1;
        usage[first.kind.id() as usize - 1] += 1;
        if !self.spec.inventory.admits(&usage) {
            return;
        }
        let c = Circuit::build(self.d1, &self.mid, self.end, mode).expect("walk closes legally");
        self.out.accepted += 1;
        let key = canonical_key(&c.piece_codes(), Equivalence::Direct).codes;
        if self.spec.keep_looping {
            self.out.looping.push(c.clone());
        }
        merge_min(&mut self.out.direct, key, c);
    }
}
