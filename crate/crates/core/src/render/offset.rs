use crate::geometry::{CurveGeometry, Vec2};

/// One drawing command of an offset curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathSegment {
    Line { to: Vec2 },
    /// Circular arc; `sweep` is signed (positive counterclockwise).
    Arc { radius: f64, sweep: f64, to: Vec2 },
    Cubic { c1: Vec2, c2: Vec2, to: Vec2 },
}

/// A curve displaced by a constant distance along its left normal.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetPath {
    pub start: Vec2,
    pub segments: Vec<PathSegment>,
}

impl OffsetPath {
    pub fn end(&self) -> Vec2 {
        match self.segments.last() {
            None => self.start,
            Some(PathSegment::Line { to } | PathSegment::Arc { to, .. } | PathSegment::Cubic { to, .. }) => *to,
        }
    }
}

const MAX_DEPTH: u32 = 12;

/// Offset of `curve` by `h` (left of the travel direction when positive).
///
/// Segments and arcs have exact offsets. Parabolas are flattened into cubic
/// Hermite pieces matching the offset curve and its derivative
/// `P'(t)·(1 − h·κ(t))` at the breakpoints, subdivided until the deviation
/// at interior probes is below `tolerance`.
pub fn offset_curve(curve: &CurveGeometry, h: f64, tolerance: f64) -> OffsetPath {
    let at = |t: f64| offset_point(curve, h, t);
    match *curve {
        CurveGeometry::Segment { .. } => OffsetPath {
            start: at(0.0),
            segments: vec![PathSegment::Line { to: at(1.0) }],
        },
        CurveGeometry::Arc { radius, sweep, .. } => {
            // left of travel is the inside of a counterclockwise arc
            let r = radius - h * sweep.signum();
            OffsetPath {
                start: at(0.0),
                segments: vec![PathSegment::Arc {
                    radius: r,
                    sweep,
                    to: at(1.0),
                }],
            }
        }
        CurveGeometry::QuadBezier { .. } => {
            let mut segments = Vec::new();
            hermite(curve, h, 0.0, 1.0, tolerance, 0, &mut segments);
            OffsetPath {
                start: at(0.0),
                segments,
            }
        }
    }
}

/// `P(t) + h·n(t)` with `n` the unit left normal.
pub fn offset_point(curve: &CurveGeometry, h: f64, t: f64) -> Vec2 {
    curve.point(t) + curve.derivative(t).normalized().perp() * h
}

fn offset_derivative(curve: &CurveGeometry, h: f64, t: f64) -> Vec2 {
    curve.derivative(t) * (1.0 - h * curve.signed_curvature(t))
}

fn hermite(curve: &CurveGeometry, h: f64, t0: f64, t1: f64, tol: f64, depth: u32, out: &mut Vec<PathSegment>) {
    let dt = t1 - t0;
    let p0 = offset_point(curve, h, t0);
    let p1 = offset_point(curve, h, t1);
    let c1 = p0 + offset_derivative(curve, h, t0) * (dt / 3.0);
    let c2 = p1 - offset_derivative(curve, h, t1) * (dt / 3.0);
    let within = [0.25, 0.5, 0.75].iter().all(|&u| {
        let cubic = cubic_point(p0, c1, c2, p1, u);
        cubic.distance(offset_point(curve, h, t0 + u * dt)) <= tol
    });
    if within || depth >= MAX_DEPTH {
        out.push(PathSegment::Cubic { c1, c2, to: p1 });
    } else {
        let tm = 0.5 * (t0 + t1);
        hermite(curve, h, t0, tm, tol, depth + 1, out);
        hermite(curve, h, tm, t1, tol, depth + 1, out);
    }
}

pub(crate) fn cubic_point(p0: Vec2, c1: Vec2, c2: Vec2, p1: Vec2, u: f64) -> Vec2 {
    let v = 1.0 - u;
    p0 * (v * v * v) + c1 * (3.0 * v * v * u) + c2 * (3.0 * v * u * u) + p1 * (u * u * u)
}
