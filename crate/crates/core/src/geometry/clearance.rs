use super::{CurveGeometry, Vec2};

/// Samples per curve in the dense scan that seeds the local refinement.
pub const DENSE_SAMPLES: usize = 1024;

/// Distances below this are reported as an exact contact.
const CONTACT_EPS: f64 = 1e-9;

const GOLDEN_ITERATIONS: usize = 64;

/// Closest approach between two curves, with the witnessing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clearance {
    pub distance: f64,
    pub t1: f64,
    pub t2: f64,
    pub p1: Vec2,
    pub p2: Vec2,
}

/// Infimum of the distance between points of `g1` and `g2`.
///
/// A dense scan over [`DENSE_SAMPLES`]² parameter pairs locates the basin of
/// the minimum, which is then polished with nested golden-section searches in
/// a two-cell neighborhood. Contacts (crossings, shared points) come out as 0.
pub fn pair_clearance(g1: &CurveGeometry, g2: &CurveGeometry) -> Clearance {
    let step = 1.0 / (DENSE_SAMPLES - 1) as f64;
    let s1: Vec<Vec2> = (0..DENSE_SAMPLES).map(|i| g1.point(i as f64 * step)).collect();
    let s2: Vec<Vec2> = (0..DENSE_SAMPLES).map(|i| g2.point(i as f64 * step)).collect();

    let mut best = (f64::INFINITY, 0, 0);
    for (i, p) in s1.iter().enumerate() {
        for (j, q) in s2.iter().enumerate() {
            let d = (*p - *q).norm_squared();
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    let (_, i, j) = best;
    let grid = (i as f64 * step, j as f64 * step);

    let bracket = |t: f64| ((t - 2.0 * step).max(0.0), (t + 2.0 * step).min(1.0));
    let (lo2, hi2) = bracket(grid.1);
    let inner = |t1: f64| {
        let p = g1.point(t1);
        golden_min(lo2, hi2, |t2| p.distance(g2.point(t2)))
    };
    let (lo1, hi1) = bracket(grid.0);
    let (t1, _) = golden_min(lo1, hi1, |t1| inner(t1).1);
    let (t2, _) = inner(t1);

    let mut candidates = [grid, (t1, t2)];
    candidates.sort_by(|a, b| {
        let da = g1.point(a.0).distance(g2.point(a.1));
        let db = g1.point(b.0).distance(g2.point(b.1));
        da.total_cmp(&db)
    });
    let (t1, t2) = candidates[0];
    let p1 = g1.point(t1);
    let p2 = g2.point(t2);
    let distance = p1.distance(p2);
    Clearance {
        distance: if distance < CONTACT_EPS { 0.0 } else { distance },
        t1,
        t2,
        p1,
        p2,
    }
}

/// Golden-section minimization of `f` on `[lo, hi]`; returns `(argmin, min)`.
fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..GOLDEN_ITERATIONS {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    // the endpoints of the original bracket may beat the interior estimate
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    [(mid, fm), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{realize_midline, Cell, Direction};

    fn curve(d_in: u8, d_out: u8) -> CurveGeometry {
        realize_midline(
            Cell::ORIGIN,
            Direction::new(d_in).unwrap(),
            Direction::new(d_out).unwrap(),
        )
        .unwrap()
        .1
    }

    #[test]
    fn identical_curves_touch() {
        let g = curve(0, 1);
        assert_eq!(pair_clearance(&g, &g).distance, 0.0);
    }

    #[test]
    fn shared_endpoint_touches() {
        // both leave through the east midpoint
        let a = curve(0, 0);
        let b = curve(2, 0);
        assert_eq!(pair_clearance(&a, &b).distance, 0.0);
    }

    #[test]
    fn parallel_segments() {
        let a = CurveGeometry::Segment {
            start: Vec2::new(0.0, 0.0),
            end: Vec2::new(1.0, 0.0),
        };
        let b = CurveGeometry::Segment {
            start: Vec2::new(0.3, 0.25),
            end: Vec2::new(2.0, 0.25),
        };
        let c = pair_clearance(&a, &b);
        assert!((c.distance - 0.25).abs() < 1e-12);
    }

    #[test]
    fn diagonal_against_corner_arc() {
        // NE-bound diagonal vs the quarter arc in the south-east corner
        let diagonal = curve(1, 1);
        let arc = curve(2, 0);
        let c = pair_clearance(&diagonal, &arc);
        let exact = (2f64.sqrt() - 1.0) / 2.0;
        assert!((c.distance - exact).abs() < 1e-9, "{}", c.distance);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_min(-1.0, 3.0, |x| (x - 1.25) * (x - 1.25) + 0.5);
        assert!((x - 1.25).abs() < 1e-7);
        assert!((fx - 0.5).abs() < 1e-12);
    }
}
