use std::collections::BTreeSet;

use serde::Serialize;

use super::{partitioned_sweep, SweepSpec};
use crate::circuit::{Circuit, Inventory};
use crate::error::Result;
use crate::geometry::Cell;

/// Straight-and-arc circuits compared with self-avoiding polygons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrioComparison {
    pub n: usize,
    /// Constructible classes using only pieces 1 and 2.
    pub brio: u64,
    /// Orbit sizes under the dihedral group of the classes whose squares are
    /// all distinct, in class order.
    pub orbit_sizes: Vec<u32>,
    /// Sum of `orbit_sizes`: the number of polygons counted up to translation.
    pub sap_expansion: u64,
}

pub fn brio_compare(n: usize, shards: usize) -> Result<BrioComparison> {
    let result = partitioned_sweep(&SweepSpec::new(n, Inventory::brio()), shards)?;
    let orbit_sizes: Vec<u32> = result
        .constructible
        .iter()
        .filter(|c| {
            let mut seen = BTreeSet::new();
            c.centers().iter().all(|x| seen.insert(*x))
        })
        .map(d4_orbit_size)
        .collect();
    Ok(BrioComparison {
        n,
        brio: result.row.constructible,
        sap_expansion: orbit_sizes.iter().map(|&s| s as u64).sum(),
        orbit_sizes,
    })
}

/// Number of distinct translates-classes among the eight rotations and
/// reflections of the circuit's center polygon.
pub fn d4_orbit_size(c: &Circuit) -> u32 {
    let transforms: [fn(Cell) -> Cell; 8] = [
        |p| p,
        |p| Cell::new(-p.y, p.x),
        |p| Cell::new(-p.x, -p.y),
        |p| Cell::new(p.y, -p.x),
        |p| Cell::new(-p.x, p.y),
        |p| Cell::new(p.x, -p.y),
        |p| Cell::new(p.y, p.x),
        |p| Cell::new(-p.y, -p.x),
    ];
    let n = c.n();
    let shapes: BTreeSet<Vec<(Cell, Cell)>> = transforms
        .iter()
        .map(|t| {
            let pts: Vec<Cell> = c.centers().iter().map(|&p| t(p)).collect();
            let min_x = pts.iter().map(|p| p.x).min().unwrap();
            let min_y = pts.iter().map(|p| p.y).min().unwrap();
            let shift = |p: Cell| Cell::new(p.x - min_x, p.y - min_y);
            let mut edges: Vec<(Cell, Cell)> = (0..n)
                .map(|i| {
                    let (a, b) = (shift(pts[i]), shift(pts[(i + 1) % n]));
                    (a.min(b), a.max(b))
                })
                .collect();
            edges.sort();
            edges
        })
        .collect();
    shapes.len() as u32
}
