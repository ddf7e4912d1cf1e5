//! Deterministic SVG output.
//!
//! World coordinates have unit squares and `y` pointing up; the document
//! flips `y`. All numbers are printed with three decimals, so identical
//! inputs give byte-identical documents.

mod offset;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::circuit::Circuit;
use crate::constructibility::{ensure_constructible, placements, PiecePlacement};
use crate::error::{Error, Result};
use crate::geometry::{Cell, CurveGeometry, Vec2, WidthConfig};

pub use offset::{offset_curve, offset_point, OffsetPath, PathSegment};

/// Flattening tolerance for rail curves, in square sides.
pub const RAIL_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderConfig {
    /// Pixels per square side.
    pub scale: f64,
    pub width: WidthConfig,
    pub midline: bool,
    pub rails: bool,
    pub dots: bool,
    pub connectors: bool,
    pub grid: bool,
    /// Print the physical scale in a caption.
    pub annotate: bool,
    /// Render circuits that fail the constructibility check.
    pub force: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            scale: 60.0,
            width: WidthConfig::default(),
            midline: true,
            rails: true,
            dots: true,
            connectors: true,
            grid: false,
            annotate: false,
            force: false,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParams(format!("scale must be positive, got {}", self.scale)));
        }
        Ok(())
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

struct Canvas<'a> {
    cfg: &'a RenderConfig,
    body: String,
    min: Vec2,
    max: Vec2,
}

impl<'a> Canvas<'a> {
    fn new(cfg: &'a RenderConfig, squares: impl Iterator<Item = Cell>) -> Self {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for c in squares {
            min = Vec2::new(min.x.min(c.x as f64), min.y.min(c.y as f64));
            max = Vec2::new(max.x.max(c.x as f64), max.y.max(c.y as f64));
        }
        if !min.x.is_finite() {
            min = Vec2::ZERO;
            max = Vec2::ZERO;
        }
        // one square of margin around the occupied squares
        Canvas {
            cfg,
            body: String::new(),
            min: min + Vec2::new(-1.0, -1.0),
            max: max + Vec2::new(1.0, 1.0),
        }
    }

    fn pt(&self, p: Vec2) -> String {
        format!("{} {}", num(p.x * self.cfg.scale), num(-p.y * self.cfg.scale))
    }

    fn grid(&mut self) {
        let s = self.cfg.scale;
        let mut d = String::new();
        let (x0, x1) = (self.min.x + 0.5, self.max.x - 0.5);
        let (y0, y1) = (self.min.y + 0.5, self.max.y - 0.5);
        let mut x = x0;
        while x <= x1 + 1e-9 {
            write!(d, "M{} {}V{}", num(x * s), num(-y0 * s), num(-y1 * s)).unwrap();
            x += 1.0;
        }
        let mut y = y0;
        while y <= y1 + 1e-9 {
            write!(d, "M{} {}H{}", num(x0 * s), num(-y * s), num(x1 * s)).unwrap();
            y += 1.0;
        }
        writeln!(self.body, r##"<path class="grid" d="{d}" fill="none" stroke="#cccccc" stroke-width="1"/>"##).unwrap();
    }

    fn midline_d(&self, g: &CurveGeometry) -> String {
        let s = self.cfg.scale;
        match *g {
            CurveGeometry::Segment { start, end } => format!("M{}L{}", self.pt(start), self.pt(end)),
            CurveGeometry::Arc { radius, sweep, .. } => format!(
                "M{}A{} {} 0 0 {} {}",
                self.pt(g.start()),
                num(radius * s),
                num(radius * s),
                // counterclockwise in the world is counterclockwise on screen: flag 0
                if sweep > 0.0 { 0 } else { 1 },
                self.pt(g.end())
            ),
            CurveGeometry::QuadBezier { start, control, end } => {
                format!("M{}Q{} {}", self.pt(start), self.pt(control), self.pt(end))
            }
        }
    }

    fn offset_d(&self, path: &OffsetPath) -> String {
        let s = self.cfg.scale;
        let mut d = format!("M{}", self.pt(path.start));
        for seg in &path.segments {
            match *seg {
                PathSegment::Line { to } => write!(d, "L{}", self.pt(to)).unwrap(),
                PathSegment::Arc { radius, sweep, to } => write!(
                    d,
                    "A{} {} 0 0 {} {}",
                    num(radius * s),
                    num(radius * s),
                    if sweep > 0.0 { 0 } else { 1 },
                    self.pt(to)
                )
                .unwrap(),
                PathSegment::Cubic { c1, c2, to } => {
                    write!(d, "C{} {} {}", self.pt(c1), self.pt(c2), self.pt(to)).unwrap()
                }
            }
        }
        d
    }

    fn piece(&mut self, p: &PiecePlacement) {
        let code = p.code;
        if self.cfg.rails {
            let h = self.cfg.width.rail_width / 2.0;
            for side in [h, -h] {
                let d = self.offset_d(&offset_curve(&p.curve, side, RAIL_TOLERANCE));
                writeln!(
                    self.body,
                    r##"<path class="rail" data-piece="{}" d="{d}" fill="none" stroke="#333333" stroke-width="1.5"/>"##,
                    p.index + 1
                )
                .unwrap();
            }
        }
        if self.cfg.midline {
            let d = self.midline_d(&p.curve);
            writeln!(
                self.body,
                r##"<path class="midline" data-piece="{}" data-code="{code}" d="{d}" fill="none" stroke="#8b5a2b" stroke-width="2"/>"##,
                p.index + 1
            )
            .unwrap();
        }
    }

    /// Junction markers: a yellow dot at vertex junctions and a chevron
    /// pointing from the female (entry) side to the male (exit) side.
    fn junction(&mut self, at: Vec2, heading: Vec2, vertex: bool) {
        if self.cfg.dots && vertex {
            let (x, y) = (num(at.x * self.cfg.scale), num(-at.y * self.cfg.scale));
            writeln!(
                self.body,
                r##"<circle class="vertex-dot" cx="{x}" cy="{y}" r="{}" fill="#ffd700" stroke="#806c00"/>"##,
                num(0.06 * self.cfg.scale)
            )
            .unwrap();
        }
        if self.cfg.connectors {
            let u = heading.normalized() * 0.08;
            let v = u.perp();
            let d = format!("M{}L{}L{}", self.pt(at - u + v), self.pt(at + u * 0.5), self.pt(at - u - v));
            writeln!(self.body, r##"<path class="connector" d="{d}" fill="none" stroke="#b22222" stroke-width="1.5"/>"##).unwrap();
        }
    }

    fn head_marker(&mut self, at: Cell) {
        let p = at.to_vec2();
        writeln!(
            self.body,
            r##"<circle class="head" cx="{}" cy="{}" r="{}" fill="none" stroke="#1e90ff" stroke-width="2"/>"##,
            num(p.x * self.cfg.scale),
            num(-p.y * self.cfg.scale),
            num(0.35 * self.cfg.scale)
        )
        .unwrap();
    }

    fn caption(&mut self, text: &str) {
        writeln!(
            self.body,
            r##"<text class="caption" x="{}" y="{}" font-family="sans-serif" font-size="12">{text}</text>"##,
            num(self.min.x * self.cfg.scale + 4.0),
            num(-self.min.y * self.cfg.scale - 4.0)
        )
        .unwrap();
    }

    fn finish(self) -> String {
        let s = self.cfg.scale;
        let (x, y) = (self.min.x * s, -self.max.y * s);
        let (w, h) = ((self.max.x - self.min.x) * s, (self.max.y - self.min.y) * s);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">\n{}</svg>\n",
            num(w),
            num(h),
            num(x),
            num(y),
            num(w),
            num(h),
            self.body
        )
    }
}

/// Renders a closed circuit. Non-constructible circuits are refused unless
/// `cfg.force` is set.
pub fn to_svg(c: &Circuit, cfg: &RenderConfig) -> Result<String> {
    cfg.validate()?;
    if !cfg.force {
        ensure_constructible(c, &cfg.width)?;
    }
    let pieces = placements(c);
    let n = c.n();
    let junctions: Vec<(Vec2, Vec2, bool)> = (0..n)
        .map(|i| {
            let d = c.dirs()[i];
            let (a, b) = (c.centers()[i], c.centers()[(i + 1) % n]);
            let (dx, dy) = d.step();
            (
                (a.to_vec2() + b.to_vec2()) * 0.5,
                Vec2::new(dx as f64, dy as f64),
                !d.is_axis(),
            )
        })
        .collect();
    Ok(render_parts(&pieces, &junctions, None, cfg))
}

/// Renders an arbitrary list of placed pieces, e.g. an unfinished design.
/// Junctions are drawn between consecutive pieces; `head` gets a ring.
pub fn render_placements(pieces: &[PiecePlacement], head: Option<Cell>, cfg: &RenderConfig) -> Result<String> {
    cfg.validate()?;
    let junctions: Vec<(Vec2, Vec2, bool)> = pieces
        .iter()
        .map(|p| {
            let (x, y) = p.exit_point2();
            let at = Vec2::new(x as f64 / 2.0, y as f64 / 2.0);
            let out = at - p.square.to_vec2();
            (at, out, p.exit.kappa() % 2 == 1)
        })
        .collect();
    Ok(render_parts(pieces, &junctions, head, cfg))
}

fn render_parts(pieces: &[PiecePlacement], junctions: &[(Vec2, Vec2, bool)], head: Option<Cell>, cfg: &RenderConfig) -> String {
    let squares = pieces.iter().map(|p| p.square).chain(head);
    let mut canvas = Canvas::new(cfg, squares);
    if cfg.grid {
        canvas.grid();
    }
    for p in pieces {
        canvas.piece(p);
    }
    for &(at, heading, vertex) in junctions {
        canvas.junction(at, heading, vertex);
    }
    if let Some(h) = head {
        canvas.head_marker(h);
    }
    if cfg.annotate {
        let text = format!(
            "side {:.2} cm, rail width {:.5}, {} pieces",
            cfg.width.side_length_cm,
            cfg.width.rail_width,
            pieces.len()
        );
        canvas.caption(&text);
    }
    canvas.finish()
}

/// Polygon view: the closed polyline through the square centers. Squares
/// visited twice get a ring and both visit numbers.
pub fn to_polygon_view(c: &Circuit, cfg: &RenderConfig) -> Result<String> {
    cfg.validate()?;
    let mut canvas = Canvas::new(cfg, c.centers().iter().copied());
    if cfg.grid {
        canvas.grid();
    }
    let mut d = String::new();
    for (i, p) in c.centers().iter().enumerate() {
        write!(d, "{}{}", if i == 0 { "M" } else { "L" }, canvas.pt(p.to_vec2())).unwrap();
    }
    d.push('Z');
    writeln!(canvas.body, r##"<path class="polygon" d="{d}" fill="none" stroke="#2f4f4f" stroke-width="2"/>"##).unwrap();
    let mut visits: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    for (i, p) in c.centers().iter().enumerate() {
        visits.entry(*p).or_default().push(i + 1);
    }
    let s = cfg.scale;
    for (cell, idx) in &visits {
        let (x, y) = (num(cell.x as f64 * s), num(-cell.y as f64 * s));
        writeln!(canvas.body, r##"<circle class="center" cx="{x}" cy="{y}" r="{}" fill="#2f4f4f"/>"##, num(0.05 * s)).unwrap();
        if idx.len() > 1 {
            writeln!(
                canvas.body,
                r##"<circle class="shared" cx="{x}" cy="{y}" r="{}" fill="none" stroke="#b22222" stroke-width="2"/>"##,
                num(0.2 * s)
            )
            .unwrap();
            let label: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            writeln!(
                canvas.body,
                r##"<text class="visits" x="{x}" y="{y}" dx="{}" font-family="sans-serif" font-size="10">{}</text>"##,
                num(0.25 * s),
                label.join("/")
            )
            .unwrap();
        }
    }
    Ok(canvas.finish())
}
