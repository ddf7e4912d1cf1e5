use std::ops::RangeInclusive;

use clap::Args;
use railgrid::circuit::Inventory;
use railgrid::enumerator::DEFAULT_BUDGET;
use railgrid::geometry::{PieceMode, PieceType, WidthConfig, DEFAULT_RAIL_WIDTH};

use crate::Failure;

/// `a..b` (inclusive) or a single `a`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("range {s:?} must satisfy 1 ≤ a ≤ b"));
    }
    Ok(lo..=hi)
}

/// A per-type cap; `None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cap(pub Option<u32>);

/// A non-negative integer or `inf`.
pub fn parse_cap(s: &str) -> Result<Cap, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Cap(None));
    }
    s.parse()
        .map(|c| Cap(Some(c)))
        .map_err(|_| format!("expected a non-negative integer or inf, got {s:?}"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceList(pub Vec<PieceType>);

/// Comma-separated piece type ids, e.g. `1,2`.
pub fn parse_pieces(s: &str) -> Result<PieceList, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .ok()
                .and_then(|id| PieceType::from_id(id).ok())
                .ok_or_else(|| format!("unknown piece type {t:?}; types run 1..8"))
        })
        .collect::<Result<_, _>>()
        .map(PieceList)
}

#[derive(Args, Debug, Clone)]
pub struct InventoryArgs {
    /// Pieces available per type: an integer or `inf`.
    #[arg(long, value_parser = parse_cap, conflicts_with = "easyloop")]
    pub max_per_type: Option<Cap>,

    /// Restrict to these piece types (comma-separated ids).
    #[arg(long, value_parser = parse_pieces)]
    pub pieces: Option<PieceList>,

    /// Four pieces of each type.
    #[arg(long)]
    pub easyloop: bool,

    /// Also allow the sharp pieces (types 7 and 8).
    #[arg(long)]
    pub extended: bool,
}

impl InventoryArgs {
    pub fn inventory(&self) -> Inventory {
        let cap = if self.easyloop { Some(4) } else { self.max_per_type.and_then(|c| c.0) };
        let mut inv = Inventory::from_caps([cap; 8]);
        if let Some(PieceList(kinds)) = &self.pieces {
            for t in PieceType::ALL {
                if !kinds.contains(&t) {
                    inv = inv.with_cap(t, Some(0));
                }
            }
        }
        inv
    }

    pub fn mode(&self) -> PieceMode {
        if self.extended {
            PieceMode::Extended
        } else {
            PieceMode::Standard
        }
    }

    pub fn validate(&self) -> Result<(), Failure> {
        if let Some(PieceList(kinds)) = &self.pieces {
            if !self.extended && kinds.iter().any(|k| k.id() > 6) {
                return Err(Failure::Usage("types 7 and 8 need --extended".into()));
            }
        }
        Ok(())
    }
}

#[derive(Args, Debug, Clone)]
pub struct WidthArgs {
    /// Rail width as a fraction of the square side.
    #[arg(long, default_value_t = DEFAULT_RAIL_WIDTH)]
    pub width: f64,
}

impl WidthArgs {
    pub fn config(&self) -> Result<WidthConfig, Failure> {
        WidthConfig::with_rail_width(self.width).map_err(|e| Failure::Usage(e.to_string()))
    }
}

/// Sweep guard from `RAILGRID_BUDGET` (an integer, or `inf` to disable).
pub fn budget() -> Result<Option<u128>, Failure> {
    match std::env::var("RAILGRID_BUDGET") {
        Err(_) => Ok(Some(DEFAULT_BUDGET)),
        Ok(v) if v.eq_ignore_ascii_case("inf") => Ok(None),
        Ok(v) => v
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("RAILGRID_BUDGET must be an integer or inf, got {v:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..9"), Ok(4..=9));
        assert_eq!(parse_range("4..=9"), Ok(4..=9));
        assert_eq!(parse_range("7"), Ok(7..=7));
        assert!(parse_range("9..4").is_err());
        assert!(parse_range("0..3").is_err());
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn caps_and_pieces() {
        assert_eq!(parse_cap("inf"), Ok(Cap(None)));
        assert_eq!(parse_cap("4"), Ok(Cap(Some(4))));
        assert!(parse_cap("-1").is_err());
        assert_eq!(parse_pieces("1,2"), Ok(PieceList(vec![PieceType::Straight, PieceType::Curve])));
        assert!(parse_pieces("9").is_err());
    }

    #[test]
    fn piece_filter_composes_with_cap() {
        let args = InventoryArgs {
            max_per_type: Some(Cap(Some(3))),
            pieces: Some(PieceList(vec![PieceType::Curve])),
            easyloop: false,
            extended: false,
        };
        let inv = args.inventory();
        assert_eq!(inv.cap(PieceType::Curve), Some(3));
        assert_eq!(inv.cap(PieceType::Straight), Some(0));
    }
}
