//! Independent oracles shared by the integration tests. Nothing here uses
//! the turn-code parameterization of the sweep.
#![allow(dead_code)]

use std::collections::BTreeSet;

use railgrid::circuit::Circuit;
use railgrid::geometry::{Direction, PieceMode};

const STEPS: [(i32, i32); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

/// Looping tuples by brute force over every heading sequence: closed, with
/// legal turns everywhere, and ending with a westward or south-westward move
/// (the normalization `c_N ∈ {(1,0), (1,1)}`).
pub fn naive_looping(n: usize) -> BTreeSet<Vec<u8>> {
    let mut out = BTreeSet::new();
    let total = 8usize.pow(n as u32);
    for mut code in 0..total {
        let mut dirs = Vec::with_capacity(n);
        for _ in 0..n {
            dirs.push((code % 8) as u8);
            code /= 8;
        }
        if !matches!(dirs[n - 1], 4 | 5) {
            continue;
        }
        let (sx, sy) = dirs.iter().fold((0, 0), |(x, y), &d| (x + STEPS[d as usize].0, y + STEPS[d as usize].1));
        if (sx, sy) != (0, 0) {
            continue;
        }
        let legal = (0..n).all(|i| {
            let k = (dirs[i] + 8 - dirs[(i + n - 1) % n]) % 8;
            matches!(k, 0 | 1 | 2 | 6 | 7)
        });
        if legal {
            out.insert(dirs);
        }
    }
    out
}

pub fn headings(c: &Circuit) -> Vec<u8> {
    c.dirs().iter().map(|d| d.index()).collect()
}

/// Self-avoiding polygons of perimeter `n` on the square lattice, counted up
/// to translation: closed self-avoiding axis walks divided by `2n`.
pub fn sap_count(n: usize) -> u64 {
    fn walk(x: i32, y: i32, left: usize, seen: &mut Vec<(i32, i32)>, count: &mut u64) {
        if (x.abs() + y.abs()) as usize > left {
            return;
        }
        if left == 0 {
            return;
        }
        for (dx, dy) in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            let (nx, ny) = (x + dx, y + dy);
            if (nx, ny) == (0, 0) {
                if left == 1 {
                    *count += 1;
                }
                continue;
            }
            if seen.contains(&(nx, ny)) {
                continue;
            }
            seen.push((nx, ny));
            walk(nx, ny, left - 1, seen, count);
            seen.pop();
        }
    }
    if n < 4 || n % 2 == 1 {
        return 0;
    }
    let mut count = 0;
    walk(0, 0, n, &mut vec![], &mut count);
    count / (2 * n as u64)
}

/// Structural invariants every closed circuit must satisfy.
pub fn invariant_violations(c: &Circuit) -> Vec<String> {
    let mut v = Vec::new();
    let n = c.n();
    let (sx, sy) = c.dirs().iter().fold((0, 0), |(x, y), d| {
        let (dx, dy) = d.step();
        (x + dx, y + dy)
    });
    if (sx, sy) != (0, 0) {
        v.push(format!("steps sum to ({sx}, {sy})"));
    }
    for i in 0..n {
        let (a, b) = (c.centers()[i], c.centers()[(i + 1) % n]);
        if a.king_distance(b) != 1 {
            v.push(format!("squares {i} and {} are not adjacent", i + 1));
        }
        let from = c.dirs()[(i + n - 1) % n];
        let to = c.dirs()[i];
        let expected = railgrid::geometry::classify_piece(from, to, PieceMode::Standard);
        if expected.ok() != Some(c.pieces()[i]) {
            v.push(format!("piece {i} disagrees with its headings"));
        }
    }
    if c.total_turning().rem_euclid(8) != 0 {
        v.push(format!("total turning {} is not a multiple of 8", c.total_turning()));
    }
    let counts = c.type_counts();
    if counts[4] != counts[5] {
        v.push(format!("{} pieces of type 5 but {} of type 6", counts[4], counts[5]));
    }
    v
}

pub fn dir(d: u8) -> Direction {
    Direction::new(d).unwrap()
}
