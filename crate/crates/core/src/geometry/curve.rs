use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{classify_piece, AnchorIndex, Cell, Direction, PieceMode, PieceType, Vec2};
use crate::error::Result;

/// Midline of one piece, parameterized over `t ∈ [0, 1]` from entry to exit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveGeometry {
    Segment {
        start: Vec2,
        end: Vec2,
    },
    Arc {
        center: Vec2,
        radius: f64,
        start_angle: f64,
        /// Signed sweep in radians; positive is counterclockwise.
        sweep: f64,
    },
    QuadBezier {
        start: Vec2,
        control: Vec2,
        end: Vec2,
    },
}

impl CurveGeometry {
    /// Builds the midline joining anchors `entry` and `exit` of the square centered at `center`.
    ///
    /// The curve is tangent at both ends to the line through the square center:
    /// straight for opposite anchors, a quarter circle for anchors two steps
    /// apart, and otherwise the quadratic Bézier with the center as control point.
    pub fn between_anchors(center: Vec2, entry: AnchorIndex, exit: AnchorIndex) -> Self {
        let a = entry.offset();
        let b = exit.offset();
        match entry.ccw_distance(exit) {
            4 => CurveGeometry::Segment {
                start: center + a,
                end: center + b,
            },
            d @ (2 | 6) => {
                let arc_center = a + b;
                let from = a - arc_center;
                CurveGeometry::Arc {
                    center: center + arc_center,
                    radius: from.norm(),
                    start_angle: from.y.atan2(from.x),
                    // anchors two steps counterclockwise apart need a clockwise arc
                    sweep: if d == 2 { -FRAC_PI_2 } else { FRAC_PI_2 },
                }
            }
            _ => CurveGeometry::QuadBezier {
                start: center + a,
                control: center,
                end: center + b,
            },
        }
    }

    pub fn point(&self, t: f64) -> Vec2 {
        match *self {
            CurveGeometry::Segment { start, end } => start.lerp(end, t),
            CurveGeometry::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let angle = start_angle + sweep * t;
                center + Vec2::new(angle.cos(), angle.sin()) * radius
            }
            CurveGeometry::QuadBezier {
                start,
                control,
                end,
            } => {
                let s = 1.0 - t;
                start * (s * s) + control * (2.0 * s * t) + end * (t * t)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> Vec2 {
        match *self {
            CurveGeometry::Segment { start, end } => end - start,
            CurveGeometry::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => {
                let angle = start_angle + sweep * t;
                Vec2::new(-angle.sin(), angle.cos()) * (radius * sweep)
            }
            CurveGeometry::QuadBezier {
                start,
                control,
                end,
            } => ((control - start) * (1.0 - t) + (end - control) * t) * 2.0,
        }
    }

    pub fn second_derivative(&self, t: f64) -> Vec2 {
        match *self {
            CurveGeometry::Segment { .. } => Vec2::ZERO,
            CurveGeometry::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => {
                let angle = start_angle + sweep * t;
                Vec2::new(angle.cos(), angle.sin()) * (-radius * sweep * sweep)
            }
            CurveGeometry::QuadBezier {
                start,
                control,
                end,
            } => (end - control * 2.0 + start) * 2.0,
        }
    }

    pub fn start(&self) -> Vec2 {
        self.point(0.0)
    }

    pub fn end(&self) -> Vec2 {
        self.point(1.0)
    }

    /// Signed curvature; positive when turning left.
    pub fn signed_curvature(&self, t: f64) -> f64 {
        let d1 = self.derivative(t);
        let d2 = self.second_derivative(t);
        d1.cross(d2) / d1.norm().powi(3)
    }

    /// Smallest radius of curvature along the curve (`+∞` for segments).
    pub fn min_curvature_radius(&self) -> f64 {
        match *self {
            CurveGeometry::Segment { .. } => f64::INFINITY,
            CurveGeometry::Arc { radius, .. } => radius,
            CurveGeometry::QuadBezier {
                start,
                control,
                end,
            } => {
                // B' = 2((1-t)u + t v) and B'' = 2(v - u), so |B' × B''| = 4|u × v|
                // is constant and the radius is smallest where |B'| is.
                let u = control - start;
                let v = end - control;
                let twist = u.cross(v).abs();
                if twist == 0.0 {
                    return f64::INFINITY;
                }
                let dv = v - u;
                let t = if dv.norm_squared() == 0.0 {
                    0.0
                } else {
                    (-u.dot(dv) / dv.norm_squared()).clamp(0.0, 1.0)
                };
                let w = u + dv * t;
                2.0 * w.norm().powi(3) / twist
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            CurveGeometry::Segment { start, end } => start.distance(end),
            CurveGeometry::Arc { radius, sweep, .. } => radius * sweep.abs(),
            CurveGeometry::QuadBezier { .. } => {
                // 16-panel Simpson on |B'|, which is smooth on [0, 1]
                let n = 16;
                let h = 1.0 / n as f64;
                let f = |i: usize| self.derivative(i as f64 * h).norm();
                let inner: f64 = (1..n)
                    .map(|i| if i % 2 == 1 { 4.0 * f(i) } else { 2.0 * f(i) })
                    .sum();
                h / 3.0 * (f(0) + inner + f(n))
            }
        }
    }

    /// The same point set traversed backwards.
    pub fn reversed(&self) -> Self {
        match *self {
            CurveGeometry::Segment { start, end } => CurveGeometry::Segment {
                start: end,
                end: start,
            },
            CurveGeometry::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => CurveGeometry::Arc {
                center,
                radius,
                start_angle: start_angle + sweep,
                sweep: -sweep,
            },
            CurveGeometry::QuadBezier {
                start,
                control,
                end,
            } => CurveGeometry::QuadBezier {
                start: end,
                control,
                end: start,
            },
        }
    }
}

/// Midline of the piece in the square at `square_center`, entered with heading
/// `d_in` and left with heading `d_out`.
pub fn realize_midline(
    square_center: Cell,
    d_in: Direction,
    d_out: Direction,
) -> Result<(PieceType, CurveGeometry)> {
    let code = classify_piece(d_in, d_out, PieceMode::Extended)?;
    let curve = CurveGeometry::between_anchors(
        square_center.to_vec2(),
        AnchorIndex::entry_of(d_in),
        AnchorIndex::exit_of(d_out),
    );
    Ok((code.kind, curve))
}
