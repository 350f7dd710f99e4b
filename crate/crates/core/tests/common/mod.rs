#![allow(dead_code)]

use bloch_sectors::qstate::random_state;
use bloch_sectors::PureState;

/// (N, d) cells small enough for the Bloch oracle.
pub const CELLS: [(usize, usize); 10] = [
    (2, 2),
    (3, 2),
    (4, 2),
    (5, 2),
    (2, 3),
    (3, 3),
    (4, 3),
    (2, 4),
    (3, 4),
    (2, 5),
];

/// Haar state `i` of cell `(n, d)`, reproducible across test targets.
pub fn corpus_state(n: usize, d: usize, i: usize) -> PureState {
    let seed = 1_000_003 * (10 * n + d) as u64 + i as u64;
    random_state(n, d, seed).unwrap()
}

pub fn assert_close(a: &[f64], b: &[f64], tol: f64, ctx: &str) {
    assert_eq!(a.len(), b.len(), "{ctx}");
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).abs() <= tol, "{ctx}: component {k}: {x} vs {y}");
    }
}
