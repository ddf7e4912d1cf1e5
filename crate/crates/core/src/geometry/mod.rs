//! Lattice primitives and piece geometry for the unit-square tiling.
//!
//! Every square of the tiling has eight *anchors*: the four edge midpoints and
//! the four vertices. Anchor `κ` sits in direction `κ·π/4` from the square
//! center, so even anchors are midpoints and odd anchors are vertices. The
//! same indexing is used for the eight king-move [`Direction`]s: moving in
//! direction `d` leaves a square through anchor `d` and enters the next one
//! through anchor `d + 4`.

mod catalogue;
mod clearance;
mod curve;
mod vec2;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalogue::{anchors_cross, sweep_pair_catalogue, OrientedCurve, PairCatalogue, PairEntry, PairRelation};
pub use clearance::{pair_clearance, Clearance, DENSE_SAMPLES};
pub use curve::{realize_midline, CurveGeometry};
pub use vec2::Vec2;

/// Exact clearance between the closest pair of non-crossing curves sharing a square.
pub const DELTA_MIN: f64 = 0.207_106_781_186_547_5; // (√2 − 1) / 2

/// Rail width of the commercial cross-section, as a fraction of the square side.
pub const DEFAULT_RAIL_WIDTH: f64 = 0.18349;

/// Side length (cm) implied by `(δ_min − e)·L = 0.51493 cm`.
pub const DEFAULT_SIDE_LENGTH_CM: f64 = 0.51493 / (DELTA_MIN - DEFAULT_RAIL_WIDTH);

/// Integer center of a square of the tiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const ORIGIN: Cell = Cell { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn step(self, d: Direction) -> Cell {
        let (dx, dy) = d.step();
        Cell::new(self.x + dx, self.y + dy)
    }

    /// Number of king moves needed to reach `other`.
    pub fn king_distance(self, other: Cell) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn to_vec2(self) -> Vec2 {
        Vec2::new(self.x as f64, self.y as f64)
    }

    /// Rotation by `quarter_turns · π/2` about the origin.
    pub fn rotated_quarter(self, quarter_turns: u8) -> Cell {
        (0..quarter_turns % 4).fold(self, |c, _| Cell::new(-c.y, c.x))
    }
}

impl From<[i32; 2]> for Cell {
    fn from([x, y]: [i32; 2]) -> Self {
        Cell { x, y }
    }
}

impl From<Cell> for [i32; 2] {
    fn from(c: Cell) -> Self {
        [c.x, c.y]
    }
}

/// Which piece catalogue is in play.
///
/// `Standard` is the six-piece set. `Extended` adds the sharp parabolas
/// (types 7 and 8, turns of ±3π/4) whose curvature radius is too small to be
/// manufactured; it is never used for the reference counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceMode {
    #[default]
    Standard,
    Extended,
}

impl PieceMode {
    /// Legal turn codes, in sweep order.
    pub fn turns(self) -> &'static [TurnCode] {
        const STANDARD: [TurnCode; 5] = [
            TurnCode(0),
            TurnCode(1),
            TurnCode(2),
            TurnCode(6),
            TurnCode(7),
        ];
        const EXTENDED: [TurnCode; 7] = [
            TurnCode(0),
            TurnCode(1),
            TurnCode(2),
            TurnCode(3),
            TurnCode(5),
            TurnCode(6),
            TurnCode(7),
        ];
        match self {
            PieceMode::Standard => &STANDARD,
            PieceMode::Extended => &EXTENDED,
        }
    }

    pub fn allows(self, turn: TurnCode) -> bool {
        match self {
            PieceMode::Standard => turn.signed().abs() <= 2,
            PieceMode::Extended => true,
        }
    }

    /// Number of piece types in the catalogue (6 or 8).
    pub fn type_count(self) -> usize {
        match self {
            PieceMode::Standard => 6,
            PieceMode::Extended => 8,
        }
    }

    fn name(self) -> &'static str {
        match self {
            PieceMode::Standard => "standard",
            PieceMode::Extended => "extended",
        }
    }
}

/// One of the eight king-move headings, counterclockwise from east.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Direction(u8);

impl Direction {
    pub const EAST: Direction = Direction(0);
    pub const NORTH_EAST: Direction = Direction(1);
    pub const NORTH: Direction = Direction(2);
    pub const NORTH_WEST: Direction = Direction(3);
    pub const WEST: Direction = Direction(4);
    pub const SOUTH_WEST: Direction = Direction(5);
    pub const SOUTH: Direction = Direction(6);
    pub const SOUTH_EAST: Direction = Direction(7);

    pub const ALL: [Direction; 8] = [
        Direction(0),
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
        Direction(6),
        Direction(7),
    ];

    pub fn new(index: u8) -> Result<Self> {
        if index < 8 {
            Ok(Direction(index))
        } else {
            Err(Error::InvalidDirection(index.into()))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Axis headings cross an edge; diagonal headings cross a vertex.
    pub fn is_axis(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Unit king-move displacement.
    pub fn step(self) -> (i32, i32) {
        const STEPS: [(i32, i32); 8] = [
            (1, 0),
            (1, 1),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
        ];
        STEPS[self.0 as usize]
    }

    pub fn from_step(dx: i32, dy: i32) -> Option<Self> {
        Direction::ALL.into_iter().find(|d| d.step() == (dx, dy))
    }

    pub fn opposite(self) -> Self {
        Direction((self.0 + 4) % 8)
    }

    /// Rotates by `quarter_turns · π/2` counterclockwise.
    pub fn rotated_quarter(self, quarter_turns: u8) -> Self {
        Direction((self.0 + 2 * (quarter_turns % 4)) % 8)
    }

    /// Applies a turn: the resulting index is `index + signed(k) mod 8`.
    pub fn turn(self, k: TurnCode) -> Self {
        Direction((self.0 + k.0) % 8)
    }

    /// Mirror image across the horizontal axis.
    pub fn reflected(self) -> Self {
        Direction((8 - self.0) % 8)
    }
}

impl TryFrom<u8> for Direction {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Direction::new(value)
    }
}

impl From<Direction> for u8 {
    fn from(d: Direction) -> u8 {
        d.0
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 8] = ["E", "NE", "N", "NW", "W", "SW", "S", "SE"];
        f.write_str(NAMES[self.0 as usize])
    }
}

/// Heading change between consecutive steps, in multiples of π/4.
///
/// The raw code lives in `{0,1,2,3,5,6,7}`; 4 (a U-turn) is unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct TurnCode(u8);

impl TurnCode {
    pub const STRAIGHT: TurnCode = TurnCode(0);

    pub fn from_raw(raw: u8) -> Result<Self> {
        if raw < 8 && raw != 4 {
            Ok(TurnCode(raw))
        } else {
            Err(Error::InvalidTurn(raw.into()))
        }
    }

    pub fn from_signed(signed: i8) -> Result<Self> {
        if (-3..=3).contains(&signed) {
            Ok(TurnCode(signed.rem_euclid(8) as u8))
        } else {
            Err(Error::InvalidTurn(signed.into()))
        }
    }

    /// Turn taking heading `from` to heading `to`; `None` for a U-turn.
    pub fn between(from: Direction, to: Direction) -> Option<Self> {
        TurnCode::from_raw((to.0 + 8 - from.0) % 8).ok()
    }

    pub fn raw(self) -> u8 {
        self.0
    }

    /// Signed value in `-3..=3`; positive turns go left.
    pub fn signed(self) -> i8 {
        if self.0 <= 3 {
            self.0 as i8
        } else {
            self.0 as i8 - 8
        }
    }

    pub fn inverse(self) -> Self {
        TurnCode((8 - self.0) % 8)
    }
}

impl TryFrom<u8> for TurnCode {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        TurnCode::from_raw(value)
    }
}

impl From<TurnCode> for u8 {
    fn from(k: TurnCode) -> u8 {
        k.0
    }
}

/// Whether a piece endpoint is an edge midpoint or a square vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Nature {
    Middle,
    Vertex,
}

/// One of the eight anchor points of a square (see module docs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnchorIndex(u8);

impl AnchorIndex {
    pub fn new(kappa: u8) -> Result<Self> {
        if kappa < 8 {
            Ok(AnchorIndex(kappa))
        } else {
            Err(Error::InvalidAnchor(kappa.into()))
        }
    }

    /// Anchor through which a piece is left when moving in `d`.
    pub fn exit_of(d: Direction) -> Self {
        AnchorIndex(d.0)
    }

    /// Anchor through which a square is entered when arriving with heading `d`.
    pub fn entry_of(d: Direction) -> Self {
        AnchorIndex(d.opposite().0)
    }

    pub fn kappa(self) -> u8 {
        self.0
    }

    pub fn nature(self) -> Nature {
        if self.0.is_multiple_of(2) {
            Nature::Middle
        } else {
            Nature::Vertex
        }
    }

    /// Position relative to the square center (unit side).
    pub fn offset(self) -> Vec2 {
        let (dx, dy) = Direction(self.0).step();
        Vec2::new(0.5 * dx as f64, 0.5 * dy as f64)
    }

    /// Counterclockwise distance from `self` to `other`, in `0..8`.
    pub fn ccw_distance(self, other: AnchorIndex) -> u8 {
        (other.0 + 8 - self.0) % 8
    }
}

/// The eight piece shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceType {
    /// Edge midpoint to opposite edge midpoint.
    Straight = 1,
    /// Quarter circle of radius 1/2 between adjacent edge midpoints.
    Curve = 2,
    /// Vertex to opposite vertex.
    Diagonal = 3,
    /// Quarter circle of radius √2/2 between consecutive vertices.
    VertexCurve = 4,
    /// Parabola from an edge midpoint to a vertex of the opposite edge.
    MiddleToVertex = 5,
    /// Parabola from a vertex to an edge midpoint.
    VertexToMiddle = 6,
    /// Sharp parabola from a midpoint to a vertex of the same edge.
    SharpMiddleToVertex = 7,
    /// Sharp parabola from a vertex to a midpoint of the same edge.
    SharpVertexToMiddle = 8,
}

impl PieceType {
    pub const ALL: [PieceType; 8] = [
        PieceType::Straight,
        PieceType::Curve,
        PieceType::Diagonal,
        PieceType::VertexCurve,
        PieceType::MiddleToVertex,
        PieceType::VertexToMiddle,
        PieceType::SharpMiddleToVertex,
        PieceType::SharpVertexToMiddle,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Result<Self> {
        PieceType::ALL
            .get((id as usize).wrapping_sub(1))
            .copied()
            .ok_or(Error::InvalidPieceCode(id.into()))
    }

    pub fn endpoint_natures(self) -> (Nature, Nature) {
        use Nature::*;
        match self {
            PieceType::Straight | PieceType::Curve => (Middle, Middle),
            PieceType::Diagonal | PieceType::VertexCurve => (Vertex, Vertex),
            PieceType::MiddleToVertex | PieceType::SharpMiddleToVertex => (Middle, Vertex),
            PieceType::VertexToMiddle | PieceType::SharpVertexToMiddle => (Vertex, Middle),
        }
    }

    pub fn is_straight(self) -> bool {
        matches!(self, PieceType::Straight | PieceType::Diagonal)
    }

    /// Partner type under traversal reversal (5 ↔ 6, 7 ↔ 8).
    pub fn reversed(self) -> Self {
        match self {
            PieceType::MiddleToVertex => PieceType::VertexToMiddle,
            PieceType::VertexToMiddle => PieceType::MiddleToVertex,
            PieceType::SharpMiddleToVertex => PieceType::SharpVertexToMiddle,
            PieceType::SharpVertexToMiddle => PieceType::SharpMiddleToVertex,
            other => other,
        }
    }
}

/// A piece type together with its turning sign (`+1` left, `-1` right, `0` straight).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PieceCode {
    pub kind: PieceType,
    pub sign: i8,
}

impl PieceCode {
    /// Signed integer code: `±type` for curved pieces, `type` for straight ones.
    pub fn signed(self) -> i8 {
        if self.sign == 0 {
            self.kind.id() as i8
        } else {
            self.sign * self.kind.id() as i8
        }
    }

    pub fn from_signed(code: i8) -> Result<Self> {
        let kind = PieceType::from_id(code.unsigned_abs())?;
        let sign = if kind.is_straight() {
            if code < 0 {
                return Err(Error::InvalidPieceCode(code.into()));
            }
            0
        } else if code > 0 {
            1
        } else {
            -1
        };
        Ok(PieceCode { kind, sign })
    }
}

impl fmt::Display for PieceCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "{}", self.kind.id()),
            s if s > 0 => write!(f, "+{}", self.kind.id()),
            _ => write!(f, "-{}", self.kind.id()),
        }
    }
}

/// Classifies the piece occupying a square entered with heading `d_in` and
/// left with heading `d_out`.
pub fn classify_piece(d_in: Direction, d_out: Direction, mode: PieceMode) -> Result<PieceCode> {
    let illegal = |raw| Error::IllegalTurn {
        from: d_in.0,
        to: d_out.0,
        raw,
        mode: mode.name(),
    };
    let turn = TurnCode::between(d_in, d_out).ok_or_else(|| illegal(4))?;
    if !mode.allows(turn) {
        return Err(illegal(turn.raw()));
    }
    let signed = turn.signed();
    let kind = match (d_in.is_axis(), d_out.is_axis(), signed.abs()) {
        (true, true, 0) => PieceType::Straight,
        (true, true, 2) => PieceType::Curve,
        (false, false, 0) => PieceType::Diagonal,
        (false, false, 2) => PieceType::VertexCurve,
        (true, false, 1) => PieceType::MiddleToVertex,
        (false, true, 1) => PieceType::VertexToMiddle,
        (true, false, 3) => PieceType::SharpMiddleToVertex,
        (false, true, 3) => PieceType::SharpVertexToMiddle,
        _ => unreachable!("turn parity always matches heading parity"),
    };
    Ok(PieceCode {
        kind,
        sign: signed.signum(),
    })
}

/// Rail width and physical scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthConfig {
    /// Rail width `e` as a fraction of the square side; `0 < e < 1/2`.
    pub rail_width: f64,
    /// Physical side length in cm, used only for annotations.
    pub side_length_cm: f64,
}

impl WidthConfig {
    pub fn new(rail_width: f64, side_length_cm: f64) -> Result<Self> {
        if !(rail_width > 0.0 && rail_width < 0.5) {
            return Err(Error::InvalidParams(format!(
                "rail width must lie in (0, 1/2), got {rail_width}"
            )));
        }
        if !(side_length_cm > 0.0 && side_length_cm.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "side length must be positive, got {side_length_cm}"
            )));
        }
        Ok(WidthConfig {
            rail_width,
            side_length_cm,
        })
    }

    pub fn with_rail_width(rail_width: f64) -> Result<Self> {
        WidthConfig::new(rail_width, DEFAULT_SIDE_LENGTH_CM)
    }

    /// Physical gap between the rail edges of the tightest same-square pair.
    pub fn edge_gap_cm(&self) -> f64 {
        (DELTA_MIN - self.rail_width) * self.side_length_cm
    }
}

impl Default for WidthConfig {
    fn default() -> Self {
        WidthConfig {
            rail_width: DEFAULT_RAIL_WIDTH,
            side_length_cm: DEFAULT_SIDE_LENGTH_CM,
        }
    }
}
