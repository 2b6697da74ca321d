//! Projections `f_m`, `g_m`, their lifts `f̄_m`, `ḡ_m`, and the families
//! built by alternating lifts of a complete graph.
//!
//! Everything acts on extended connection sets `S_0 ⊂ Z_n`. Writing `N = mn`:
//!
//! * `f_m(S_0) = S_0 mod (n/m)`, defined when the reduction is injective;
//! * `g_m(S_0) = S_0 mod (n/m)`, defined when `S_0 + n/m = S_0`;
//! * `f̄_m(S_0)` is the family of `{s + σ(s) n : s ∈ S_0} ⊂ Z_N` over feasible `σ`;
//! * `ḡ_m(S_0) = {s + i n : s ∈ S_0, 0 ≤ i < m} ⊂ Z_N`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::zmod::{gcd, generates, is_inverse_closed, is_prime, ResidueSet};

fn check_divides(s0: &ResidueSet, m: u64) -> Result<u64> {
    let n = s0.modulus();
    if m == 0 || n % m != 0 {
        return Err(Error::InvalidInput(format!("{m} does not divide {n}")));
    }
    Ok(n / m)
}

/// `f_m`: reduce modulo `n/m`, which must be injective on `S_0`.
pub fn f_project(s0: &ResidueSet, m: u64) -> Result<ResidueSet> {
    let q = check_divides(s0, m)?;
    if !s0.meets_trivially(q) {
        return Err(Error::NotACover(q));
    }
    Ok(s0.reduce(q))
}

/// `g_m`: reduce modulo `n/m`; `S_0` must be invariant under `n/m`.
pub fn g_project(s0: &ResidueSet, m: u64) -> Result<ResidueSet> {
    let q = check_divides(s0, m)?;
    if !s0.is_invariant_under(q) {
        return Err(Error::NotPeriodic(q));
    }
    Ok(s0.reduce(q))
}

/// `ḡ_m(S_0) ⊂ Z_{mn}`.
pub fn g_lift(s0: &ResidueSet, m: u64) -> Result<ResidueSet> {
    if m == 0 {
        return Err(Error::InvalidInput("lift factor must be positive".into()));
    }
    let n = s0.modulus();
    let big = n
        .checked_mul(m)
        .ok_or_else(|| Error::InvalidInput("lifted modulus overflows".into()))?;
    Ok(ResidueSet::from_residues(
        big,
        s0.iter().flat_map(|s| (0..m).map(move |i| s + i * n)),
    ))
}

/// One feasible `σ: S_0 -> {0, ..., m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleLift {
    base_modulus: u64,
    factor: u64,
    assignment: Vec<(u64, u64)>,
}

impl FeasibleLift {
    pub fn base_modulus(&self) -> u64 {
        self.base_modulus
    }

    pub fn factor(&self) -> u64 {
        self.factor
    }

    /// Pairs `(s, σ(s))`, sorted by `s`.
    pub fn assignment(&self) -> &[(u64, u64)] {
        &self.assignment
    }

    pub fn sigma(&self, s: u64) -> Option<u64> {
        self.assignment
            .binary_search_by_key(&s, |&(x, _)| x)
            .ok()
            .map(|i| self.assignment[i].1)
    }

    /// `T(σ)_0`.
    pub fn lifted(&self) -> ResidueSet {
        let n = self.base_modulus;
        ResidueSet::from_residues(
            n * self.factor,
            self.assignment.iter().map(|&(s, v)| s + v * n),
        )
    }
}

/// The free coordinates of `σ`: one per pair `{s, n - s}` with `s < n/2`.
/// `σ(n - s) = m - 1 - σ(s)`, and `n/2` (if present) is pinned to `(m-1)/2`.
#[derive(Debug, Clone)]
struct LiftShape {
    n: u64,
    m: u64,
    reps: Vec<u64>,
    middle: Option<u64>,
    feasible: bool,
}

impl LiftShape {
    fn new(s0: &ResidueSet, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("lift factor must be positive".into()));
        }
        if !s0.contains(0) {
            return Err(Error::InvalidInput(format!("{s0} does not contain 0")));
        }
        if !is_inverse_closed(s0) {
            return Err(Error::InvalidConnectionSet(format!("{s0} is not inverse-closed")));
        }
        let n = s0.modulus();
        n.checked_mul(m)
            .ok_or_else(|| Error::InvalidInput("lifted modulus overflows".into()))?;
        let reps = s0.iter().filter(|&s| s != 0 && 2 * s < n).collect();
        let middle = (n % 2 == 0 && s0.contains(n / 2) && n > 1).then_some(n / 2);
        Ok(Self { n, m, reps, middle, feasible: middle.is_none() || m % 2 == 1 })
    }

    fn count(&self) -> BigUint {
        if !self.feasible {
            return BigUint::zero();
        }
        BigUint::from(self.m).pow(self.reps.len() as u32)
    }

    fn build(&self, digits: &[u64]) -> FeasibleLift {
        let (n, m) = (self.n, self.m);
        let mut assignment = Vec::with_capacity(2 * self.reps.len() + 2);
        assignment.push((0, 0));
        for (&s, &v) in self.reps.iter().zip(digits) {
            assignment.push((s, v));
            assignment.push((n - s, m - 1 - v));
        }
        if let Some(h) = self.middle {
            assignment.push((h, (m - 1) / 2));
        }
        assignment.sort_unstable();
        FeasibleLift { base_modulus: n, factor: m, assignment }
    }
}

/// Number of feasible maps into `{0, ..., m-1}` (connected or not).
pub fn lift_count(s0: &ResidueSet, m: u64) -> Result<BigUint> {
    Ok(LiftShape::new(s0, m)?.count())
}

/// Iterator over feasible maps in lexicographic order of the free values.
pub struct Lifts {
    shape: LiftShape,
    digits: Vec<u64>,
    done: bool,
    require_connected: bool,
}

impl Iterator for Lifts {
    type Item = FeasibleLift;

    fn next(&mut self) -> Option<FeasibleLift> {
        while !self.done {
            let lift = self.shape.build(&self.digits);
            self.done = true;
            for d in self.digits.iter_mut().rev() {
                *d += 1;
                if *d < self.shape.m {
                    self.done = false;
                    break;
                }
                *d = 0;
            }
            if !self.require_connected || generates(&lift.lifted()) {
                return Some(lift);
            }
        }
        None
    }
}

/// Every feasible `σ`, optionally only those whose `T(σ)` generates `Z_{mn}`.
pub fn enumerate_lifts(s0: &ResidueSet, m: u64, require_connected: bool) -> Result<Lifts> {
    let shape = LiftShape::new(s0, m)?;
    let digits = vec![0; shape.reps.len()];
    let done = !shape.feasible;
    Ok(Lifts { shape, digits, done, require_connected })
}

/// `Y ∈ f̄_m(Z)`, tested without enumerating.
pub fn is_f_lift_of(y: &ResidueSet, z: &ResidueSet, m: u64) -> bool {
    y.modulus() == z.modulus() * m
        && y.len() == z.len()
        && y.contains(0)
        && is_inverse_closed(y)
        && y.reduce(z.modulus()) == *z
}

/// `Y = ḡ_m(Z)`.
pub fn is_g_lift_of(y: &ResidueSet, z: &ResidueSet, m: u64) -> bool {
    y.modulus() == z.modulus() * m
        && y.len() as u64 == z.len() as u64 * m
        && y.is_invariant_under(z.modulus())
        && y.reduce(z.modulus()) == *z
}

/// A single lift step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiftOp {
    F(u64),
    G(u64),
}

impl LiftOp {
    fn factor(self) -> u64 {
        match self {
            LiftOp::F(m) | LiftOp::G(m) => m,
        }
    }
}

/// Applies `ops` left to right to `seed`. With `connected`, each `f̄` step keeps
/// only the lifts that generate their group. Fails once more than `budget`
/// sets would be produced at any stage.
pub fn apply_ops(
    seed: &ResidueSet,
    ops: &[LiftOp],
    connected: bool,
    budget: usize,
) -> Result<BTreeSet<ResidueSet>> {
    let mut current = BTreeSet::from([seed.clone()]);
    for &op in ops {
        let mut next = BTreeSet::new();
        for x in &current {
            match op {
                LiftOp::G(m) => {
                    next.insert(g_lift(x, m)?);
                }
                LiftOp::F(m) => {
                    let shape = LiftShape::new(x, m)?;
                    let room = budget.saturating_sub(next.len());
                    if shape.count() > BigUint::from(room) && !connected {
                        return Err(Error::BudgetExceeded(budget));
                    }
                    for lift in enumerate_lifts(x, m, connected)? {
                        next.insert(lift.lifted());
                        if next.len() > budget {
                            return Err(Error::BudgetExceeded(budget));
                        }
                    }
                }
            }
        }
        current = next;
    }
    Ok(current)
}

/// Whether `x` is produced from `seed` by `ops`, peeling the steps off from
/// the last one. Every step is invertible on its image, so this needs no search.
pub fn in_chain(x: &ResidueSet, seed: &ResidueSet, ops: &[LiftOp], connected: bool) -> bool {
    let mut y = x.clone();
    for &op in ops.iter().rev() {
        let m = op.factor();
        if m == 0 || y.modulus() % m != 0 {
            return false;
        }
        let z = y.reduce(y.modulus() / m);
        let ok = match op {
            LiftOp::F(_) => is_f_lift_of(&y, &z, m) && (!connected || generates(&y)),
            LiftOp::G(_) => is_g_lift_of(&y, &z, m),
        };
        if !ok {
            return false;
        }
        y = z;
    }
    y == *seed
}

/// Parameters of a family: `Σ l_i = l`, `Π m_i = m`, all entries positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub p: u64,
    pub l_seq: Vec<u32>,
    pub m_seq: Vec<u64>,
}

impl FamilySpec {
    pub fn new(p: u64, l_seq: Vec<u32>, m_seq: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if l_seq.is_empty() || l_seq.len() != m_seq.len() {
            return Err(Error::InvalidInput("l and m sequences must be nonempty and of equal length".into()));
        }
        if l_seq.contains(&0) || m_seq.contains(&0) {
            return Err(Error::InvalidInput("sequence entries must be positive".into()));
        }
        let spec = Self { p, l_seq, m_seq };
        if spec.m() < 2 {
            return Err(Error::InvalidInput("the product of the m sequence must be at least 2".into()));
        }
        spec.n_checked()?;
        Ok(spec)
    }

    pub fn ell(&self) -> u32 {
        self.l_seq.iter().sum()
    }

    pub fn m(&self) -> u64 {
        self.m_seq.iter().product()
    }

    fn n_checked(&self) -> Result<u64> {
        self.p
            .checked_pow(self.ell())
            .and_then(|q| q.checked_mul(self.m()))
            .ok_or_else(|| Error::InvalidInput("modulus overflows".into()))
    }

    pub fn n(&self) -> u64 {
        self.p.pow(self.ell()) * self.m()
    }

    pub fn t(&self) -> usize {
        self.l_seq.len()
    }

    /// `K_{p^{l_t}}`, as the extended set `Z_{p^{l_t}}`.
    pub fn seed(&self) -> ResidueSet {
        ResidueSet::full(self.p.pow(self.l_seq[self.t() - 1]))
    }

    /// `f̄_{m_t}`, then `ḡ_{p^{l_i}}`, `f̄_{m_i}` for `i = t-1, ..., 1`.
    pub fn ops(&self) -> Vec<LiftOp> {
        let t = self.t();
        let mut ops = vec![LiftOp::F(self.m_seq[t - 1])];
        for i in (0..t - 1).rev() {
            ops.push(LiftOp::G(self.p.pow(self.l_seq[i])));
            ops.push(LiftOp::F(self.m_seq[i]));
        }
        ops
    }
}

/// Members of the family for `spec` as extended connection sets, sorted.
pub fn generate_family(spec: &FamilySpec, budget: usize) -> Result<Vec<ResidueSet>> {
    Ok(apply_ops(&spec.seed(), &spec.ops(), true, budget)?.into_iter().collect())
}

pub fn family_contains(spec: &FamilySpec, x: &ResidueSet) -> bool {
    in_chain(x, &spec.seed(), &spec.ops(), true)
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return if total >= 1 { vec![vec![total]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorizations(m: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for d in crate::zmod::divisors(m) {
        for mut rest in factorizations(m / d, parts - 1) {
            rest.insert(0, d);
            out.push(rest);
        }
    }
    out
}

/// Every valid `(l, m)` splitting for `n = p^l m`.
pub fn splittings(p: u64, ell: u32, m: u64) -> Result<Vec<FamilySpec>> {
    let mut out = Vec::new();
    for t in 1..=ell as usize {
        for l in compositions(ell, t) {
            for ms in factorizations(m, t) {
                out.push(FamilySpec::new(p, l.clone(), ms)?);
            }
        }
    }
    Ok(out)
}

/// Union of the families over all splittings of `n = p^l m`.
pub fn family_union(n: u64, p: u64, ell: u32, budget: usize) -> Result<BTreeSet<ResidueSet>> {
    let pl = p.pow(ell);
    if n % pl != 0 {
        return Err(Error::InvalidInput(format!("{p}^{ell} does not divide {n}")));
    }
    let mut out = BTreeSet::new();
    for spec in splittings(p, ell, n / pl)? {
        out.extend(generate_family(&spec, budget)?);
    }
    Ok(out)
}

/// Closure under the multipliers `x -> ux` with `gcd(u, n) = 1`.
pub fn multiplier_closure<'a, I>(sets: I) -> BTreeSet<ResidueSet>
where
    I: IntoIterator<Item = &'a ResidueSet>,
{
    let mut out = BTreeSet::new();
    for s in sets {
        let n = s.modulus();
        for u in (1..=n).filter(|&u| gcd(u, n) == 1) {
            out.insert(s.scale(u));
        }
    }
    out
}

/// `m^{#pairs}`: the size of `f̄_m(K_q)` for the complete graph on `q` vertices.
pub fn complete_lift_count(q: u64, m: u64) -> BigUint {
    if q % 2 == 0 && m % 2 == 0 && q > 1 {
        return BigUint::zero();
    }
    if q <= 1 {
        return BigUint::one();
    }
    BigUint::from(m).pow(((q - 1) / 2) as u32)
}
