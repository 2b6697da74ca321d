//! Residue sets and subgroups of the cyclic group Z_n.
//!
//! Quotients are always materialized: Z_n / <d> is identified with Z_d via
//! `x -> x mod d`, so every projected set is again a plain [`ResidueSet`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A subset of Z_n, stored sorted and without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueSet {
    modulus: u64,
    elems: Vec<u64>,
}

/// The subgroup `<d>` of Z_n for a divisor `d` of `n`. `d = n` is `{0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    modulus: u64,
    generator: u64,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Distinct prime factors of `n`, increasing.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// `Some(e)` when `x = p^e`.
pub fn exact_log(p: u64, mut x: u64) -> Option<u32> {
    if p < 2 || x == 0 {
        return None;
    }
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    (x == 1).then_some(e)
}

impl ResidueSet {
    /// Reduces, deduplicates and sorts `raw`.
    pub fn new<I>(modulus: u64, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        if modulus == 0 {
            return Err(Error::InvalidModulus(0));
        }
        let m = modulus as i128;
        let elems = raw
            .into_iter()
            .map(|x| (x as i128).rem_euclid(m) as u64)
            .collect();
        Ok(Self::from_vec(modulus, elems))
    }

    /// Like [`ResidueSet::new`] for values that are already nonnegative.
    pub fn from_residues<I>(modulus: u64, raw: I) -> Self
    where
        I: IntoIterator<Item = u64>,
    {
        assert!(modulus > 0, "modulus must be positive");
        Self::from_vec(modulus, raw.into_iter().map(|x| x % modulus).collect())
    }

    fn from_vec(modulus: u64, mut elems: Vec<u64>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        Self { modulus, elems }
    }

    /// Z_n itself.
    pub fn full(modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self { modulus, elems: (0..modulus).collect() }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&(x % self.modulus)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elems.iter().copied()
    }

    /// `X + g`.
    pub fn translate(&self, g: u64) -> Self {
        let n = self.modulus;
        let g = g % n;
        Self::from_vec(n, self.elems.iter().map(|&x| (x + g) % n).collect())
    }

    /// `uX`, the image under the multiplier `x -> ux`.
    pub fn scale(&self, u: u64) -> Self {
        let n = self.modulus as u128;
        let u = u as u128 % n;
        Self::from_vec(
            self.modulus,
            self.elems.iter().map(|&x| ((x as u128 * u) % n) as u64).collect(),
        )
    }

    pub fn negate(&self) -> Self {
        let n = self.modulus;
        Self::from_vec(n, self.elems.iter().map(|&x| (n - x) % n).collect())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        same_modulus(self, other)?;
        let mut v = self.elems.clone();
        v.extend_from_slice(&other.elems);
        Ok(Self::from_vec(self.modulus, v))
    }

    /// `X ∪ {0}`.
    pub fn with_zero(&self) -> Self {
        let mut v = self.elems.clone();
        v.push(0);
        Self::from_vec(self.modulus, v)
    }

    /// `X ∖ {0}`.
    pub fn without_zero(&self) -> Self {
        Self {
            modulus: self.modulus,
            elems: self.elems.iter().copied().filter(|&x| x != 0).collect(),
        }
    }

    /// Image in Z_d under `x -> x mod d`. Panics unless `d | n`.
    pub fn reduce(&self, d: u64) -> Self {
        assert!(d > 0 && self.modulus % d == 0, "{d} does not divide {}", self.modulus);
        Self::from_vec(d, self.elems.iter().map(|&x| x % d).collect())
    }

    /// Whether `X + d = X`.
    pub fn is_invariant_under(&self, d: u64) -> bool {
        let n = self.modulus;
        let d = d % n;
        d == 0 || self.elems.iter().all(|&x| self.contains((x + d) % n))
    }

    /// Whether `(X - X) ∩ <d> = {0}`, i.e. reduction mod `d` is injective on X.
    pub fn meets_trivially(&self, d: u64) -> bool {
        self.reduce(d).len() == self.len()
    }
}

fn same_modulus(a: &ResidueSet, b: &ResidueSet) -> Result<()> {
    if a.modulus != b.modulus {
        return Err(Error::IncompatibleOperands(format!(
            "moduli {} and {}",
            a.modulus, b.modulus
        )));
    }
    Ok(())
}

/// Reduces `raw` modulo `modulus`, then sorts and deduplicates.
pub fn normalize(modulus: u64, raw: &[i64]) -> Result<ResidueSet> {
    ResidueSet::new(modulus, raw.iter().copied())
}

pub fn is_inverse_closed(x: &ResidueSet) -> bool {
    let n = x.modulus;
    x.elems.iter().all(|&e| x.contains((n - e) % n))
}

/// `X - X`.
pub fn difference_set(x: &ResidueSet) -> Result<ResidueSet> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = x.modulus;
    let mut seen = vec![false; n as usize];
    for &a in &x.elems {
        for &b in &x.elems {
            seen[((a + n - b) % n) as usize] = true;
        }
    }
    Ok(ResidueSet {
        modulus: n,
        elems: (0..n).filter(|&i| seen[i as usize]).collect(),
    })
}

/// The subgroup of all `a` with `X + a = X`.
pub fn subgroup_of_periods(x: &ResidueSet) -> Subgroup {
    let n = x.modulus;
    let d = divisors(n)
        .into_iter()
        .find(|&d| x.is_invariant_under(d))
        .unwrap_or(n);
    Subgroup { modulus: n, generator: d }
}

/// `X / H` as a subset of Z_d where `H = <d>`.
pub fn project(x: &ResidueSet, h: &Subgroup) -> Result<ResidueSet> {
    if x.modulus != h.modulus {
        return Err(Error::IncompatibleOperands(format!(
            "set modulus {} vs subgroup modulus {}",
            x.modulus, h.modulus
        )));
    }
    Ok(x.reduce(h.generator))
}

/// Whether X generates Z_n, i.e. `gcd(X ∪ {n}) = 1`.
pub fn generates(x: &ResidueSet) -> bool {
    x.elems.iter().fold(x.modulus, |g, &e| gcd(g, e)) == 1
}

impl Subgroup {
    pub fn new(modulus: u64, generator: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidModulus(0));
        }
        if generator == 0 || modulus % generator != 0 {
            return Err(Error::InvalidInput(format!(
                "subgroup generator {generator} must be a positive divisor of {modulus}"
            )));
        }
        Ok(Self { modulus, generator })
    }

    pub fn trivial(modulus: u64) -> Self {
        Self { modulus, generator: modulus }
    }

    pub fn whole(modulus: u64) -> Self {
        Self { modulus, generator: 1 }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn order(&self) -> u64 {
        self.modulus / self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.generator == self.modulus
    }

    pub fn contains(&self, x: u64) -> bool {
        (x % self.modulus) % self.generator == 0
    }

    /// Whether `self ≤ other`.
    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.modulus == other.modulus && self.generator % other.generator == 0
    }

    pub fn to_set(&self) -> ResidueSet {
        ResidueSet {
            modulus: self.modulus,
            elems: (0..self.order()).map(|j| j * self.generator).collect(),
        }
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.modulus)?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:<{}>", self.modulus, self.generator)
    }
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Splits `"n:rest"` and parses `n`, returning `(n, rest, offset of rest)`.
fn split_modulus(s: &str) -> Result<(u64, &str, usize)> {
    let colon = s.find(':').ok_or_else(|| parse_err(s.len(), "expected ':' after modulus"))?;
    let head = &s[..colon];
    let n: u64 = head
        .trim()
        .parse()
        .map_err(|_| parse_err(0, format!("bad modulus {head:?}")))?;
    if n == 0 {
        return Err(parse_err(0, "modulus must be positive"));
    }
    Ok((n, &s[colon + 1..], colon + 1))
}

impl FromStr for ResidueSet {
    type Err = Error;

    /// Parses `"n:e1,e2,..."`. Elements may be unsorted or negative.
    fn from_str(s: &str) -> Result<Self> {
        let (n, rest, mut pos) = split_modulus(s)?;
        let mut raw = Vec::new();
        if !rest.trim().is_empty() {
            for tok in rest.split(',') {
                let t = tok.trim();
                let v: i64 = t
                    .parse()
                    .map_err(|_| parse_err(pos, format!("bad element {tok:?}")))?;
                raw.push(v);
                pos += tok.len() + 1;
            }
        }
        ResidueSet::new(n, raw)
    }
}

impl FromStr for Subgroup {
    type Err = Error;

    /// Parses `"n:<d>"`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, rest, pos) = split_modulus(s)?;
        let inner = rest
            .trim()
            .strip_prefix('<')
            .and_then(|r| r.strip_suffix('>'))
            .ok_or_else(|| parse_err(pos, "expected <d>"))?;
        let d: u64 = inner
            .trim()
            .parse()
            .map_err(|_| parse_err(pos + 1, format!("bad generator {inner:?}")))?;
        Subgroup::new(n, d).map_err(|e| parse_err(pos + 1, e.to_string()))
    }
}
