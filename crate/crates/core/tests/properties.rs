mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use railgrid::circuit::{canonical_key, Circuit, Equivalence, Inventory};
use railgrid::constructibility::{is_constructible, placements};
use railgrid::enumerator::{sweep, SweepSpec};
use railgrid::fit::{fit, FitParams};
use railgrid::geometry::{realize_midline, Cell, Direction, PieceMode, TurnCode, WidthConfig, DELTA_MIN};
use railgrid::random::{close_suffix, random_prefix, OpenPath};
use railgrid::record::{read_records, to_json_line};
use railgrid::render::offset_curve;

/// Every looping tuple for `N = 4..=8`.
fn pool() -> &'static [Circuit] {
    static POOL: OnceLock<Vec<Circuit>> = OnceLock::new();
    POOL.get_or_init(|| {
        (4..=8)
            .flat_map(|n| sweep(&SweepSpec::new(n, Inventory::unbounded()).keep_looping(true)).unwrap().looping)
            .collect()
    })
}

fn constructible_at(n: usize, e: f64) -> BTreeSet<String> {
    let spec = SweepSpec::new(n, Inventory::unbounded()).width(WidthConfig::with_rail_width(e).unwrap());
    sweep(&spec).unwrap().constructible.iter().map(|c| c.to_string()).collect()
}

fn default_constructible() -> &'static BTreeSet<String> {
    static SET: OnceLock<BTreeSet<String>> = OnceLock::new();
    SET.get_or_init(|| constructible_at(8, WidthConfig::default().rail_width))
}

proptest! {
    #[test]
    fn turn_code_round_trip(raw in 0u8..8) {
        prop_assume!(raw != 4);
        let k = TurnCode::from_raw(raw).unwrap();
        prop_assert_eq!(TurnCode::from_signed(k.signed()).unwrap(), k);
        prop_assert!((-3..=3).contains(&k.signed()));
        for d in Direction::ALL {
            prop_assert_eq!(TurnCode::between(d, d.turn(k)), Some(k));
        }
    }

    #[test]
    fn full_key_is_invariant(i in 0usize..10_000, quarter in 0u8..4, mirror: bool, reverse: bool, shift in 0usize..16) {
        let c = &pool()[i % pool().len()];
        let mut dirs: Vec<Direction> = c.dirs().iter().map(|d| d.rotated_quarter(quarter)).collect();
        if mirror {
            dirs = dirs.iter().map(|d| d.reflected()).collect();
        }
        if reverse {
            dirs = dirs.iter().rev().map(|d| d.opposite()).collect();
        }
        let len = dirs.len();
        dirs.rotate_left(shift % len);
        let t = Circuit::from_directions(&dirs, PieceMode::Standard).unwrap();
        prop_assert_eq!(t.key(Equivalence::Full), c.key(Equivalence::Full));
        if !mirror && !reverse {
            prop_assert_eq!(t.key(Equivalence::Direct), c.key(Equivalence::Direct));
        }
    }

    #[test]
    fn key_is_a_rotation_minimum(i in 0usize..10_000) {
        let codes = pool()[i % pool().len()].piece_codes();
        let key = canonical_key(&codes, Equivalence::Direct).codes;
        let min = (0..codes.len())
            .map(|s| {
                let mut r = codes.clone();
                r.rotate_left(s);
                r
            })
            .min()
            .unwrap();
        prop_assert_eq!(key, min);
    }

    #[test]
    fn circuits_close_and_balance(i in 0usize..10_000) {
        let c = &pool()[i % pool().len()];
        prop_assert_eq!(common::invariant_violations(c), Vec::<String>::new());
        if is_constructible(c, &WidthConfig::default()) {
            prop_assert_eq!(c.total_turning().abs(), 8);
        }
    }

    #[test]
    fn records_round_trip(i in 0usize..10_000) {
        let c = &pool()[i % pool().len()];
        let line = to_json_line(c);
        prop_assert_eq!(&read_records(line.as_bytes()).unwrap()[0], c);
    }

    #[test]
    fn fit_recovers_its_law(a in 0.5f64..50.0, mu in 2.0f64..12.0, g in -10.0f64..0.0) {
        let truth = FitParams::new(a, mu, g).unwrap();
        let samples: Vec<(usize, u64)> = (20..=30).map(|n| (n, truth.estimate(n).round() as u64)).collect();
        prop_assume!(samples.iter().all(|s| s.1 > 1_000_000 && s.1 < 1 << 60));
        let p = fit(&samples).unwrap().params;
        prop_assert!((p.mu / mu - 1.0).abs() < 1e-4);
        prop_assert!((p.gamma_minus_1 - g).abs() < 1e-3);
    }

    #[test]
    fn fit_scale_equivariance(scale in 2u64..50) {
        let base = [(4usize, 2u64), (5, 1), (6, 5), (7, 6), (8, 28), (9, 63), (10, 244), (11, 753)];
        let scaled: Vec<(usize, u64)> = base.iter().map(|&(n, q)| (n, q * scale)).collect();
        let p = fit(&base).unwrap().params;
        let s = fit(&scaled).unwrap().params;
        prop_assert!((s.amplitude / p.amplitude / scale as f64 - 1.0).abs() < 1e-9);
        prop_assert!((s.mu / p.mu - 1.0).abs() < 1e-9);
        prop_assert!((s.gamma_minus_1 - p.gamma_minus_1).abs() < 1e-9);
    }

    /// Consecutive pieces share position and tangent, so their rails meet.
    #[test]
    fn offset_rails_are_continuous(i in 0usize..10_000, h in -0.25f64..0.25) {
        let c = &pool()[i % pool().len()];
        let ps = placements(c);
        let paths: Vec<_> = ps
            .iter()
            .map(|p| {
                let g = realize_midline(p.square, c.dirs()[(p.index + c.n() - 1) % c.n()], c.dirs()[p.index]).unwrap().1;
                offset_curve(&g, h, 1e-4)
            })
            .collect();
        for k in 0..paths.len() {
            let next = &paths[(k + 1) % paths.len()];
            prop_assert!(paths[k].end().distance(next.start) < 1e-9);
        }
    }

    #[test]
    fn completions_match_brute_force(seed: u64, r in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prefix = random_prefix(r, PieceMode::Standard, &mut rng);
        let s = 4;
        let got: BTreeSet<Vec<Direction>> = close_suffix(&prefix, s, PieceMode::Standard).into_iter().collect();
        let want = brute_force_completions(&prefix, s);
        prop_assert_eq!(got, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Below the tightest same-square clearance the rail width changes nothing.
    #[test]
    fn narrower_rails_keep_the_set(e in 0.01f64..DELTA_MIN) {
        prop_assert_eq!(&constructible_at(8, e), default_constructible());
    }
}

fn brute_force_completions(prefix: &OpenPath, s: usize) -> BTreeSet<Vec<Direction>> {
    let mut out = BTreeSet::new();
    for mut code in 0..8usize.pow(s as u32) {
        let mut dirs = prefix.dirs.clone();
        for _ in 0..s {
            dirs.push(Direction::ALL[code % 8]);
            code /= 8;
        }
        let n = dirs.len();
        let cell = dirs.iter().fold(Cell::ORIGIN, |c, d| c.step(*d));
        let legal = (0..n).all(|i| {
            TurnCode::between(dirs[(i + n - 1) % n], dirs[i]).is_some_and(|k| PieceMode::Standard.allows(k))
        });
        if cell == Cell::ORIGIN && legal {
            out.insert(dirs);
        }
    }
    out
}

#[test]
fn prefix_turns_are_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts = [0usize; 8];
    let mut total = 0;
    for _ in 0..4000 {
        let p = random_prefix(10, PieceMode::Standard, &mut rng);
        for w in p.dirs.windows(2) {
            counts[TurnCode::between(w[0], w[1]).unwrap().raw() as usize] += 1;
            total += 1;
        }
    }
    for raw in [0, 1, 2, 6, 7] {
        let f = counts[raw] as f64 / total as f64;
        assert!((f - 0.2).abs() < 0.02, "turn {raw} drawn with frequency {f}");
    }
    assert_eq!(counts[3] + counts[4] + counts[5], 0);
}

#[test]
fn sharp_mode_allows_more_closures() {
    let std = sweep(&SweepSpec::new(5, Inventory::unbounded())).unwrap().row;
    let ext = sweep(&SweepSpec::new(5, Inventory::unbounded()).mode(PieceMode::Extended)).unwrap().row;
    assert!(ext.looping >= std.looping);
    assert_eq!(ext.possible, 16 * 7u64.pow(3));
}
