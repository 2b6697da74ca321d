#![allow(dead_code)]

use circodes::zmod::{gcd, ResidueSet};

/// Every connected inverse-closed `S ⊂ Z_n` with `|S| = size`, 0 excluded.
pub fn connection_sets(n: u64, size: usize) -> Vec<ResidueSet> {
    sets(n, size, true)
}

/// Like [`connection_sets`] without the connectivity filter.
pub fn inverse_closed_sets(n: u64, size: usize) -> Vec<ResidueSet> {
    sets(n, size, false)
}

struct Walk {
    n: u64,
    connected: bool,
    cur: Vec<u64>,
    out: Vec<ResidueSet>,
}

impl Walk {
    /// Pairs `{x, n - x}` (or `n/2` alone) are taken or skipped in increasing `x`.
    fn go(&mut self, x: u64, left: usize, g: u64) {
        if left == 0 {
            if !self.connected || g == 1 {
                self.out.push(ResidueSet::from_residues(self.n, self.cur.iter().copied()));
            }
            return;
        }
        if 2 * x > self.n {
            return;
        }
        self.go(x + 1, left, g);
        let pair = 2 * x != self.n;
        let cost = if pair { 2 } else { 1 };
        if cost <= left {
            self.cur.push(x);
            if pair {
                self.cur.push(self.n - x);
            }
            self.go(x + 1, left - cost, gcd(g, x));
            self.cur.truncate(self.cur.len() - cost);
        }
    }
}

fn sets(n: u64, size: usize, connected: bool) -> Vec<ResidueSet> {
    let mut walk = Walk { n, connected, cur: Vec::new(), out: Vec::new() };
    walk.go(1, size, n);
    walk.out
}

/// `(n, p, l)` for the existence sweep: `p^l | n`, the graph not complete.
pub fn sweep_params() -> Vec<(u64, u64, u32)> {
    let mut out = Vec::new();
    for n in (8..=64).step_by(4) {
        out.push((n, 2, 2));
    }
    for n in (18..=90).step_by(9) {
        out.push((n, 3, 2));
    }
    for n in (16..=48).step_by(8) {
        out.push((n, 2, 3));
    }
    out
}
