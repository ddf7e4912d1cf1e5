//! Physical feasibility of a circuit.
//!
//! Two rules apply. Junction points (the shared extremities of consecutive
//! pieces) must be pairwise distinct, so no two pieces meet anywhere except at
//! their own junction. Pieces sharing a square must neither cross nor come
//! closer than the rail width `e`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::geometry::{
    anchors_cross, AnchorIndex, Cell, CurveGeometry, Direction, OrientedCurve, PairCatalogue,
    PairRelation, PieceCode, PieceMode, WidthConfig,
};

/// One piece of a circuit in its square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecePlacement {
    /// Position of the piece in the circuit (`0` for `p_1`).
    pub index: usize,
    pub square: Cell,
    pub entry: AnchorIndex,
    pub exit: AnchorIndex,
    pub code: PieceCode,
    pub curve: CurveGeometry,
}

impl PiecePlacement {
    /// The piece in `square` entered with heading `d_in` and left with `d_out`.
    pub fn new(index: usize, square: Cell, d_in: Direction, d_out: Direction, mode: PieceMode) -> Result<Self> {
        let code = crate::geometry::classify_piece(d_in, d_out, mode)?;
        let entry = AnchorIndex::entry_of(d_in);
        let exit = AnchorIndex::exit_of(d_out);
        Ok(PiecePlacement {
            index,
            square,
            entry,
            exit,
            code,
            curve: CurveGeometry::between_anchors(square.to_vec2(), entry, exit),
        })
    }

    pub fn oriented(&self) -> OrientedCurve {
        OrientedCurve {
            entry: self.entry,
            exit: self.exit,
        }
    }

    /// Entry point in doubled lattice coordinates (exact).
    pub fn entry_point2(&self) -> (i32, i32) {
        doubled(self.square, self.entry)
    }

    pub fn exit_point2(&self) -> (i32, i32) {
        doubled(self.square, self.exit)
    }
}

fn doubled(square: Cell, anchor: AnchorIndex) -> (i32, i32) {
    let (dx, dy) = Direction::ALL[anchor.kappa() as usize].step();
    (2 * square.x + dx, 2 * square.y + dy)
}

/// Why a circuit cannot be built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// Two junctions coincide at this point (doubled coordinates).
    SharedEndpoint { point: (i32, i32), first: usize, second: usize },
    /// Two pieces in one square end on the same anchor.
    SharedAnchor { square: Cell, first: usize, second: usize },
    Crossing { square: Cell, first: usize, second: usize },
    TooClose { square: Cell, first: usize, second: usize, clearance: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::SharedEndpoint { point, first, second } => write!(
                f,
                "junctions {} and {} coincide at ({}, {})",
                first + 1,
                second + 1,
                point.0 as f64 / 2.0,
                point.1 as f64 / 2.0
            ),
            Violation::SharedAnchor { square, first, second } => write!(
                f,
                "pieces {} and {} share an endpoint in square ({}, {})",
                first + 1,
                second + 1,
                square.x,
                square.y
            ),
            Violation::Crossing { square, first, second } => write!(
                f,
                "pieces {} and {} cross in square ({}, {})",
                first + 1,
                second + 1,
                square.x,
                square.y
            ),
            Violation::TooClose {
                square,
                first,
                second,
                clearance,
            } => write!(
                f,
                "pieces {} and {} are {clearance:.5} apart in square ({}, {})",
                first + 1,
                second + 1,
                square.x,
                square.y
            ),
        }
    }
}

/// Placements `p_1..p_N` of a circuit.
pub fn placements(c: &Circuit) -> Vec<PiecePlacement> {
    let n = c.n();
    (0..n)
        .map(|i| {
            PiecePlacement::new(i, c.centers()[i], c.dirs()[(i + n - 1) % n], c.dirs()[i], PieceMode::Extended)
                .expect("circuit pieces are valid")
        })
        .collect()
}

/// Pieces grouped by square.
pub fn occupancy_map(c: &Circuit) -> BTreeMap<Cell, Vec<PiecePlacement>> {
    let mut map: BTreeMap<Cell, Vec<PiecePlacement>> = BTreeMap::new();
    for p in placements(c) {
        map.entry(p.square).or_default().push(p);
    }
    map
}

/// First repeated junction of a closed circuit, if any.
///
/// Junction `j_i` joins `p_i` and `p_{i+1}`; it lies halfway between `c_i`
/// and `c_{i+1}`. Each piece owns two junctions, so a repeated junction is
/// exactly an extremity shared outside a legitimate connection.
pub fn shared_junction(c: &Circuit) -> Option<Violation> {
    let n = c.n();
    let mut seen = BTreeMap::new();
    for i in 0..n {
        let (a, b) = (c.centers()[i], c.centers()[(i + 1) % n]);
        let point = (a.x + b.x, a.y + b.y);
        if let Some(&first) = seen.get(&point) {
            return Some(Violation::SharedEndpoint {
                point,
                first,
                second: i,
            });
        }
        seen.insert(point, i);
    }
    None
}

pub fn endpoint_sharing_violation(c: &Circuit) -> bool {
    shared_junction(c).is_some()
}

/// Whether two pieces of one square cross. Anchors must be pairwise distinct.
pub fn pair_crossing(p1: &PiecePlacement, p2: &PiecePlacement) -> Result<bool> {
    let anchors = [p1.entry, p1.exit, p2.entry, p2.exit];
    if (0..4).any(|i| (i + 1..4).any(|j| anchors[i] == anchors[j])) {
        return Err(Error::SharedAnchors);
    }
    Ok(anchors_cross(p1.entry, p1.exit, p2.entry, p2.exit))
}

/// Checks one pair of pieces sharing a square against the catalogue.
pub fn check_pair(p1: &PiecePlacement, p2: &PiecePlacement, width: &WidthConfig) -> Option<Violation> {
    let entry = PairCatalogue::extended()
        .lookup(p1.oriented(), p2.oriented())
        .expect("extended catalogue covers every piece");
    let (square, first, second) = (p1.square, p1.index, p2.index);
    match entry.relation {
        PairRelation::SharedAnchor => Some(Violation::SharedAnchor { square, first, second }),
        PairRelation::Crossing => Some(Violation::Crossing { square, first, second }),
        // tangent rail edges (δ = e) are still acceptable
        PairRelation::Disjoint if entry.clearance < width.rail_width => Some(Violation::TooClose {
            square,
            first,
            second,
            clearance: entry.clearance,
        }),
        PairRelation::Disjoint => None,
    }
}

/// Checks every same-square pair among `pieces`, pairwise.
pub fn same_square_violation(pieces: &[PiecePlacement], width: &WidthConfig) -> Option<Violation> {
    let mut by_square: BTreeMap<Cell, Vec<&PiecePlacement>> = BTreeMap::new();
    for p in pieces {
        by_square.entry(p.square).or_default().push(p);
    }
    by_square.values().find_map(|group| {
        (0..group.len()).find_map(|i| (i + 1..group.len()).find_map(|j| check_pair(group[i], group[j], width)))
    })
}

/// First reason `c` cannot be built, or `None` if it can.
pub fn first_violation(c: &Circuit, width: &WidthConfig) -> Option<Violation> {
    if let Some(v) = shared_junction(c) {
        return Some(v);
    }
    let mut seen = HashSet::with_capacity(c.n());
    if c.centers().iter().all(|x| seen.insert(*x)) {
        return None;
    }
    same_square_violation(&placements(c), width)
}

pub fn is_constructible(c: &Circuit, width: &WidthConfig) -> bool {
    first_violation(c, width).is_none()
}

/// Errors with the first violation; convenient for `?` chains.
pub fn ensure_constructible(c: &Circuit, width: &WidthConfig) -> Result<()> {
    match first_violation(c, width) {
        None => Ok(()),
        Some(v) => Err(Error::NotConstructible(v.to_string())),
    }
}
