use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::thread;

use serde::{Deserialize, Serialize};

use super::{pair_clearance, AnchorIndex, CurveGeometry, PieceMode, Vec2};
use crate::error::{Error, Result};

/// A piece midline inside the reference square, identified by its anchors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedCurve {
    pub entry: AnchorIndex,
    pub exit: AnchorIndex,
}

impl OrientedCurve {
    pub fn new(entry: AnchorIndex, exit: AnchorIndex) -> Result<Self> {
        if entry == exit {
            return Err(Error::SharedAnchors);
        }
        Ok(OrientedCurve { entry, exit })
    }

    /// Whether some piece of `mode` joins these anchors.
    ///
    /// A turn `k` joins anchors at counterclockwise distance `k + 4`, so the
    /// six-piece set covers distances 2..=6 and the extended set 1..=7.
    pub fn is_legal(self, mode: PieceMode) -> bool {
        let d = self.entry.ccw_distance(self.exit);
        match mode {
            PieceMode::Standard => (2..=6).contains(&d),
            PieceMode::Extended => (1..=7).contains(&d),
        }
    }

    /// Every legal oriented curve of `mode`, ordered by `(entry, exit)`.
    pub fn all(mode: PieceMode) -> Vec<OrientedCurve> {
        let mut out = Vec::new();
        for a in 0..8 {
            for b in 0..8 {
                if a == b {
                    continue;
                }
                let c = OrientedCurve {
                    entry: AnchorIndex(a),
                    exit: AnchorIndex(b),
                };
                if c.is_legal(mode) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Midline in the square centered at the origin.
    pub fn geometry(self) -> CurveGeometry {
        CurveGeometry::between_anchors(Vec2::ZERO, self.entry, self.exit)
    }

    pub fn reversed(self) -> Self {
        OrientedCurve {
            entry: self.exit,
            exit: self.entry,
        }
    }

    fn undirected(self) -> (u8, u8) {
        let (a, b) = (self.entry.kappa(), self.exit.kappa());
        (a.min(b), a.max(b))
    }

    fn slot(self) -> usize {
        self.entry.kappa() as usize * 8 + self.exit.kappa() as usize
    }
}

/// Boundary-partition test: do the chords `{k1, k2}` and `{m1, m2}` interleave?
///
/// `k1, k2` split the remaining anchors into two arcs; the curves cross iff
/// `m1` and `m2` fall on different arcs. All four anchors must be distinct.
pub fn anchors_cross(k1: AnchorIndex, k2: AnchorIndex, m1: AnchorIndex, m2: AnchorIndex) -> bool {
    let span = k1.ccw_distance(k2);
    let inside = |m: AnchorIndex| {
        let d = k1.ccw_distance(m);
        d > 0 && d < span
    };
    inside(m1) != inside(m2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRelation {
    SharedAnchor,
    Crossing,
    Disjoint,
}

/// Two oriented curves sharing a square, with their clearance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEntry {
    pub first: OrientedCurve,
    pub second: OrientedCurve,
    pub relation: PairRelation,
    /// Minimal distance between the two midlines.
    pub clearance: f64,
    /// Points realizing `clearance`, on `first` and `second` respectively.
    pub witness: (Vec2, Vec2),
}

/// All ordered pairs of oriented curves of a piece mode.
///
/// The six-piece catalogue has 40 oriented curves and hence 1600 entries.
#[derive(Debug, Clone)]
pub struct PairCatalogue {
    mode: PieceMode,
    entries: Vec<PairEntry>,
    slots: Vec<u32>,
}

const EMPTY_SLOT: u32 = u32::MAX;

impl PairCatalogue {
    /// Process-wide six-piece catalogue, computed on first use.
    pub fn standard() -> &'static PairCatalogue {
        static CELL: OnceLock<PairCatalogue> = OnceLock::new();
        CELL.get_or_init(|| sweep_pair_catalogue(PieceMode::Standard))
    }

    /// Process-wide catalogue including the sharp parabolas.
    pub fn extended() -> &'static PairCatalogue {
        static CELL: OnceLock<PairCatalogue> = OnceLock::new();
        CELL.get_or_init(|| sweep_pair_catalogue(PieceMode::Extended))
    }

    pub fn for_mode(mode: PieceMode) -> &'static PairCatalogue {
        match mode {
            PieceMode::Standard => Self::standard(),
            PieceMode::Extended => Self::extended(),
        }
    }

    pub fn mode(&self) -> PieceMode {
        self.mode
    }

    pub fn entries(&self) -> &[PairEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, first: OrientedCurve, second: OrientedCurve) -> Option<&PairEntry> {
        let i = self.slots[first.slot() * 64 + second.slot()];
        (i != EMPTY_SLOT).then(|| &self.entries[i as usize])
    }

    /// The tightest non-crossing pair with four distinct anchors.
    pub fn min_disjoint(&self) -> &PairEntry {
        self.entries
            .iter()
            .filter(|e| e.relation == PairRelation::Disjoint)
            .min_by(|a, b| a.clearance.total_cmp(&b.clearance))
            .expect("every catalogue has disjoint pairs")
    }
}

/// Computes the pair catalogue of `mode` from scratch.
///
/// Clearances depend only on the unordered pair of undirected curves, so each
/// is computed once; the work is spread across the available cores.
pub fn sweep_pair_catalogue(mode: PieceMode) -> PairCatalogue {
    type Endpoints = (u8, u8);
    let curves = OrientedCurve::all(mode);
    let mut undirected: Vec<(u8, u8)> = curves.iter().map(|c| c.undirected()).collect();
    undirected.sort_unstable();
    undirected.dedup();

    let mut jobs = Vec::new();
    for (i, &u) in undirected.iter().enumerate() {
        for &v in &undirected[i..] {
            jobs.push((u, v));
        }
    }
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len());
    let geometry = |(a, b): (u8, u8)| OrientedCurve::new(AnchorIndex(a), AnchorIndex(b)).unwrap().geometry();
    let computed: BTreeMap<(Endpoints, Endpoints), (f64, Vec2, Vec2)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let jobs = &jobs;
                s.spawn(move || {
                    jobs.iter()
                        .skip(w)
                        .step_by(workers)
                        .map(|&(u, v)| {
                            let c = pair_clearance(&geometry(u), &geometry(v));
                            ((u, v), (c.distance, c.p1, c.p2))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });

    let mut entries = Vec::with_capacity(curves.len() * curves.len());
    let mut slots = vec![EMPTY_SLOT; 64 * 64];
    for &first in &curves {
        for &second in &curves {
            let shared = [first.entry, first.exit].contains(&second.entry)
                || [first.entry, first.exit].contains(&second.exit);
            let relation = if shared {
                PairRelation::SharedAnchor
            } else if anchors_cross(first.entry, first.exit, second.entry, second.exit) {
                PairRelation::Crossing
            } else {
                PairRelation::Disjoint
            };
            let (u, v) = (first.undirected(), second.undirected());
            let (clearance, witness) = if u <= v {
                let &(d, p, q) = &computed[&(u, v)];
                (d, (p, q))
            } else {
                let &(d, p, q) = &computed[&(v, u)];
                (d, (q, p))
            };
            slots[first.slot() * 64 + second.slot()] = entries.len() as u32;
            entries.push(PairEntry {
                first,
                second,
                relation,
                clearance,
                witness,
            });
        }
    }
    PairCatalogue {
        mode,
        entries,
        slots,
    }
}
