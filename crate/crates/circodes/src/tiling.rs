//! Factorizations `Z_n = A ⊕ B` and the exact-cover search for perfect codes.
//!
//! `D` is a perfect code of `Cay(Z_n, S)` exactly when `Z_n = S_0 ⊕ D` with
//! `S_0 = S ∪ {0}`. The search here is the oracle the structural results are
//! checked against, so it uses nothing beyond that definition.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::zmod::{difference_set, is_inverse_closed, ResidueSet};

/// A verified factorization `Z_n = left ⊕ right` with `0` in both factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    left: ResidueSet,
    right: ResidueSet,
}

impl Tiling {
    pub fn new(left: ResidueSet, right: ResidueSet) -> Result<Self> {
        if !left.contains(0) || !right.contains(0) {
            return Err(Error::InvalidInput("both factors of a tiling contain 0".into()));
        }
        if !is_direct_sum(&left, &right)? {
            return Err(Error::InvalidInput(format!("{left} and {right} do not tile")));
        }
        Ok(Self { left, right })
    }

    pub fn group_modulus(&self) -> u64 {
        self.left.modulus()
    }

    pub fn left(&self) -> &ResidueSet {
        &self.left
    }

    pub fn right(&self) -> &ResidueSet {
        &self.right
    }
}

fn check_same(a: &ResidueSet, b: &ResidueSet) -> Result<()> {
    if a.modulus() != b.modulus() {
        return Err(Error::IncompatibleOperands(format!(
            "moduli {} and {}",
            a.modulus(),
            b.modulus()
        )));
    }
    Ok(())
}

/// `|A||B| = n` and `(A - A) ∩ (B - B) = {0}`.
pub fn is_direct_sum(a: &ResidueSet, b: &ResidueSet) -> Result<bool> {
    check_same(a, b)?;
    if a.is_empty() || b.is_empty() || (a.len() as u64) * (b.len() as u64) != a.modulus() {
        return Ok(false);
    }
    differences_meet_trivially(a, b)
}

/// `(A - A) ∩ (B - B) ⊆ {0}`.
pub fn differences_meet_trivially(a: &ResidueSet, b: &ResidueSet) -> Result<bool> {
    check_same(a, b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(true);
    }
    let da = difference_set(a)?;
    let db = difference_set(b)?;
    let ok = da.iter().all(|x| x == 0 || !db.contains(x));
    Ok(ok)
}

/// `A + B = Z_n`.
pub fn sumset_covers(a: &ResidueSet, b: &ResidueSet) -> Result<bool> {
    check_same(a, b)?;
    let n = a.modulus();
    let mut hit = vec![false; n as usize];
    for x in a.iter() {
        for y in b.iter() {
            hit[((x + y) % n) as usize] = true;
        }
    }
    Ok(hit.into_iter().all(|h| h))
}

/// Every element of Z_n has exactly one representation `a + b`.
pub fn represents_uniquely(a: &ResidueSet, b: &ResidueSet) -> Result<bool> {
    check_same(a, b)?;
    let n = a.modulus();
    let mut hits = vec![0u32; n as usize];
    for x in a.iter() {
        for y in b.iter() {
            hits[((x + y) % n) as usize] += 1;
        }
    }
    Ok(hits.into_iter().all(|h| h == 1))
}

/// Checks that `S` is a connection set: `0 ∉ S` and `S = -S`.
pub fn validate_connection_set(s: &ResidueSet) -> Result<()> {
    if s.contains(0) {
        return Err(Error::InvalidConnectionSet(format!("{s} contains 0")));
    }
    if !is_inverse_closed(s) {
        return Err(Error::InvalidConnectionSet(format!("{s} is not inverse-closed")));
    }
    Ok(())
}

pub fn is_perfect_code(s: &ResidueSet, d: &ResidueSet) -> Result<bool> {
    validate_connection_set(s)?;
    is_direct_sum(&s.with_zero(), d)
}

/// Some perfect code containing 0, if one exists.
pub fn find_perfect_code(s: &ResidueSet) -> Result<Option<ResidueSet>> {
    validate_connection_set(s)?;
    Ok(find_complement(&s.with_zero()))
}

/// All perfect codes containing 0, sorted.
pub fn enumerate_perfect_codes(s: &ResidueSet) -> Result<Vec<ResidueSet>> {
    validate_connection_set(s)?;
    Ok(enumerate_complements(&s.with_zero()))
}

pub fn count_perfect_codes(s: &ResidueSet) -> Result<u64> {
    validate_connection_set(s)?;
    let Some(search) = Search::new(&s.with_zero()) else {
        return Ok(0);
    };
    let mut count = 0u64;
    search.run(|_| {
        count += 1;
        true
    });
    Ok(count)
}

/// At most `limit` codes containing 0 in search order, plus whether the list was cut.
pub fn enumerate_perfect_codes_limited(
    s: &ResidueSet,
    limit: usize,
) -> Result<(Vec<ResidueSet>, bool)> {
    validate_connection_set(s)?;
    let Some(search) = Search::new(&s.with_zero()) else {
        return Ok((Vec::new(), false));
    };
    let mut out = Vec::new();
    let mut truncated = false;
    search.run(|d| {
        if out.len() == limit {
            truncated = true;
            return false;
        }
        out.push(d);
        true
    });
    out.sort();
    Ok((out, truncated))
}

/// Some `B ∋ 0` with `Z_n = A ⊕ B`. Requires `0 ∈ A`.
pub fn find_complement(a: &ResidueSet) -> Option<ResidueSet> {
    let search = Search::new(a)?;
    let mut found = None;
    search.run(|d| {
        found = Some(d);
        false
    });
    found
}

/// Every `B ∋ 0` with `Z_n = A ⊕ B`, sorted. Top-level branches run in parallel.
pub fn enumerate_complements(a: &ResidueSet) -> Vec<ResidueSet> {
    let Some(search) = Search::new(a) else {
        return Vec::new();
    };
    let mut out: Vec<ResidueSet> = search
        .root_branches()
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut found = Vec::new();
            search.run_from(&[0, x], |d| {
                found.push(d);
                true
            });
            found
        })
        .collect();
    out.sort();
    out
}

/// Exact cover of Z_n by translates of `A`, always covering the smallest
/// uncovered element next. Each factorization is reached once.
struct Search {
    n: usize,
    a: Vec<usize>,
    words: usize,
}

struct State {
    covered: Vec<u64>,
    chosen: Vec<u64>,
    filled: usize,
}

impl Search {
    fn new(a: &ResidueSet) -> Option<Self> {
        let n = a.modulus() as usize;
        if !a.contains(0) || a.is_empty() || n % a.len() != 0 {
            return None;
        }
        Some(Self {
            n,
            a: a.iter().map(|x| x as usize).collect(),
            words: n.div_ceil(64),
        })
    }

    fn fits(&self, st: &State, x: usize) -> bool {
        self.a.iter().all(|&s| {
            let y = (x + s) % self.n;
            st.covered[y / 64] >> (y % 64) & 1 == 0
        })
    }

    fn toggle(&self, st: &mut State, x: usize) {
        for &s in &self.a {
            let y = (x + s) % self.n;
            st.covered[y / 64] ^= 1 << (y % 64);
        }
    }

    fn first_uncovered(&self, st: &State) -> Option<usize> {
        st.covered
            .iter()
            .enumerate()
            .find(|(_, w)| **w != u64::MAX)
            .map(|(i, w)| i * 64 + (!w).trailing_zeros() as usize)
            .filter(|&e| e < self.n)
    }

    fn empty_state(&self) -> State {
        let mut covered = vec![0u64; self.words];
        let tail = self.words * 64 - self.n;
        if tail > 0 {
            covered[self.words - 1] |= !0u64 << (64 - tail);
        }
        State { covered, chosen: Vec::new(), filled: 0 }
    }

    /// Candidate translates covering `e`, increasing.
    fn candidates(&self, st: &State, e: usize) -> Vec<usize> {
        let mut xs: Vec<usize> = self
            .a
            .iter()
            .map(|&s| (e + self.n - s) % self.n)
            .filter(|&x| self.fits(st, x))
            .collect();
        xs.sort_unstable();
        xs
    }

    fn root_branches(&self) -> Vec<usize> {
        let mut st = self.empty_state();
        self.toggle(&mut st, 0);
        match self.first_uncovered(&st) {
            Some(e) => self.candidates(&st, e),
            None => vec![usize::MAX],
        }
    }

    fn run(&self, visit: impl FnMut(ResidueSet) -> bool) {
        self.run_from(&[0], visit);
    }

    /// Places the given translates (a `usize::MAX` entry is skipped) and searches.
    fn run_from(&self, start: &[usize], mut visit: impl FnMut(ResidueSet) -> bool) {
        let mut st = self.empty_state();
        for &x in start {
            if x == usize::MAX {
                continue;
            }
            if !self.fits(&st, x) {
                return;
            }
            self.toggle(&mut st, x);
            st.chosen.push(x as u64);
            st.filled += self.a.len();
        }
        self.descend(&mut st, &mut visit);
    }

    fn descend(&self, st: &mut State, visit: &mut impl FnMut(ResidueSet) -> bool) -> bool {
        let Some(e) = self.first_uncovered(st) else {
            return visit(ResidueSet::from_residues(self.n as u64, st.chosen.iter().copied()));
        };
        for x in self.candidates(st, e) {
            self.toggle(st, x);
            st.chosen.push(x as u64);
            st.filled += self.a.len();
            let go_on = self.descend(st, visit);
            st.filled -= self.a.len();
            st.chosen.pop();
            self.toggle(st, x);
            if !go_on {
                return false;
            }
        }
        true
    }
}
