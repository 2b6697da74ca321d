//! Pyramidal sets and their admissible subgroup series.
//!
//! A series is carried by the generators `g_0, g_1, ..., g_2t` of
//! `H_i = <g_i>`, so `X / H_i` is just `X mod g_i`. `H_0` is always the exact
//! subgroup of periods of `X`, and each even step `H_2i` is the exact subgroup
//! of periods of `X / H_{2i-1}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tiling::validate_connection_set;
use crate::zmod::{
    difference_set, divisors, exact_log, generates, is_prime, prime_factors, subgroup_of_periods,
    ResidueSet, Subgroup,
};

/// `H_0 < H_1 < ... < H_2t = Z_n` together with the integer sequences it determines:
/// `H_{2i-1} = <p^{h_{i-1}} k_i>`, `H_{2i} = <p^{h_i} k_i>`,
/// `l_i = h_{i-1} - h_i` and `m_i = k_{i-1} / k_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleSeries {
    modulus: u64,
    p: u64,
    ell: u32,
    generators: Vec<u64>,
    h: Vec<u32>,
    k: Vec<u64>,
    l: Vec<u32>,
    m: Vec<u64>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSeries(msg.into())
}

impl AdmissibleSeries {
    /// Builds a series from `g_0, ..., g_2t` and derives `h`, `k`, `l`, `m`.
    ///
    /// Only the shape is checked here; use [`check_t_conditions`] to test it
    /// against a set.
    pub fn from_generators(modulus: u64, generators: Vec<u64>, p: u64, ell: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let pl = p
            .checked_pow(ell)
            .filter(|&q| modulus % q == 0)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{ell} does not divide {modulus}")))?;
        let len = generators.len();
        if len < 3 || len % 2 == 0 {
            return Err(bad(format!("need an odd number (at least 3) of subgroups, got {len}")));
        }
        if generators[len - 1] != 1 {
            return Err(bad("the series must end at the whole group <1>"));
        }
        for w in generators.windows(2) {
            if w[1] == 0 || w[0] % w[1] != 0 {
                return Err(bad(format!("<{}> is not contained in <{}>", w[0], w[1])));
            }
        }
        if modulus % generators[0] != 0 {
            return Err(bad(format!("{} does not divide {modulus}", generators[0])));
        }
        for (i, w) in generators.windows(2).enumerate() {
            if w[0] == w[1] && i != len - 2 {
                return Err(bad(format!("H{i} = H{} is only allowed at the top", i + 1)));
            }
        }
        let t = (len - 1) / 2;
        let m0 = modulus / pl;
        let derive = || -> Option<(Vec<u32>, Vec<u64>)> {
            if generators[0] % m0 != 0 {
                return None;
            }
            let mut h = vec![exact_log(p, generators[0] / m0)?];
            let mut k = vec![m0];
            for i in 1..=t {
                let ph = p.pow(h[i - 1]);
                let g_odd = generators[2 * i - 1];
                if g_odd % ph != 0 {
                    return None;
                }
                let ki = g_odd / ph;
                let g_even = generators[2 * i];
                if g_even % ki != 0 {
                    return None;
                }
                h.push(exact_log(p, g_even / ki)?);
                k.push(ki);
            }
            Some((h, k))
        };
        let (h, k) = derive().ok_or_else(|| {
            bad(format!("generators {generators:?} do not have the form p^h k for p = {p}"))
        })?;
        if h[0] > ell || h[t] != 0 || k[t] != 1 {
            return Err(bad(format!("derived h = {h:?}, k = {k:?} are out of range")));
        }
        for i in 1..=t {
            if h[i] >= h[i - 1] || k[i - 1] % k[i] != 0 {
                return Err(bad(format!("derived h = {h:?}, k = {k:?} are not monotone")));
            }
        }
        let l = (1..=t).map(|i| h[i - 1] - h[i]).collect();
        let m = (1..=t).map(|i| k[i - 1] / k[i]).collect();
        Ok(Self { modulus, p, ell, generators, h, k, l, m })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Half the length of the series.
    pub fn t(&self) -> usize {
        (self.generators.len() - 1) / 2
    }

    /// `g_0, ..., g_2t`.
    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn subgroups(&self) -> Vec<Subgroup> {
        self.generators
            .iter()
            .map(|&g| Subgroup::new(self.modulus, g).expect("validated generator"))
            .collect()
    }

    pub fn h_seq(&self) -> &[u32] {
        &self.h
    }

    pub fn k_seq(&self) -> &[u64] {
        &self.k
    }

    pub fn l_seq(&self) -> &[u32] {
        &self.l
    }

    pub fn m_seq(&self) -> &[u64] {
        &self.m
    }

    /// `e = Σ_{i<t} (h_{i-1} - h_i) k_i + h_{t-1} - l` with `h_{-1} = l`.
    pub fn bound_exponent(&self) -> u64 {
        let t = self.t();
        let ell = u64::from(self.ell);
        let mut prev = ell;
        let mut e = 0;
        for i in 0..t {
            e += (prev - u64::from(self.h[i])) * self.k[i];
            prev = u64::from(self.h[i]);
        }
        e + u64::from(self.h[t - 1]) - ell
    }

    /// Whether `H_0` is nontrivial.
    pub fn is_periodic(&self) -> bool {
        self.generators[0] != self.modulus
    }
}

impl fmt::Display for AdmissibleSeries {
    /// `"90: H0=<90> < H1=<45> < H2=<15> < H3=<3> < H4=<1>; h=(2,1,0); k=(10,5,1)"`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.modulus)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                let last = i == self.generators.len() - 1 && self.generators[i - 1] == *g;
                f.write_str(if last { " <=" } else { " <" })?;
            }
            write!(f, " H{i}=<{g}>")?;
        }
        let join = |v: Vec<String>| v.join(",");
        write!(
            f,
            "; h=({}); k=({})",
            join(self.h.iter().map(u32::to_string).collect()),
            join(self.k.iter().map(u64::to_string).collect())
        )
    }
}

fn parse_tuple(s: &str, key: &str, pos: usize) -> Result<Vec<u64>> {
    let perr = |msg: String| Error::Parse { pos, msg };
    let body = s
        .trim()
        .strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix('='))
        .map(str::trim)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| perr(format!("expected {key}=(...)")))?;
    body.split(',')
        .map(|t| t.trim().parse().map_err(|_| perr(format!("bad integer {t:?} in {key}"))))
        .collect()
}

impl FromStr for AdmissibleSeries {
    type Err = Error;

    /// Parses the text form written by `Display`. The prime is read off
    /// `g_1 / g_2` and the exponent off `n / k_0`; the stated `h` and `k`
    /// must match the ones derived from the generators.
    fn from_str(s: &str) -> Result<Self> {
        let perr = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(perr(0, "expected '<chain>; h=(...); k=(...)'"));
        }
        let chain = parts[0];
        let colon = chain.find(':').ok_or_else(|| perr(chain.len(), "expected ':'"))?;
        let n: u64 = chain[..colon].trim().parse().map_err(|_| perr(0, "bad modulus"))?;
        let mut gens = Vec::new();
        let mut pos = colon + 1;
        for tok in chain[colon + 1..].split(' ') {
            let here = pos;
            pos += tok.len() + 1;
            if tok.is_empty() || tok == "<" || tok == "<=" {
                continue;
            }
            let want = format!("H{}=<", gens.len());
            let g = tok
                .strip_prefix(want.as_str())
                .and_then(|r| r.strip_suffix('>'))
                .and_then(|r| r.parse::<u64>().ok())
                .ok_or_else(|| perr(here, &format!("expected {want}d>")))?;
            gens.push(g);
        }
        let h_pos = parts[0].len() + 1;
        let k_pos = h_pos + parts[1].len() + 1;
        let h = parse_tuple(parts[1], "h", h_pos)?;
        let k = parse_tuple(parts[2], "k", k_pos)?;
        if gens.len() < 3 || k.is_empty() || k[0] == 0 {
            return Err(bad("series too short"));
        }
        if gens[1] == 0 || gens[2] == 0 || gens[1] % gens[2] != 0 || gens[1] == gens[2] {
            return Err(bad("cannot read the prime off H1 and H2"));
        }
        let p = prime_factors(gens[1] / gens[2])[0];
        let ell = (n % k[0] == 0)
            .then(|| exact_log(p, n / k[0]))
            .flatten()
            .ok_or_else(|| bad(format!("{n}/{} is not a power of {p}", k[0])))?;
        let series = AdmissibleSeries::from_generators(n, gens, p, ell)?;
        let h_given: Vec<u32> = h.iter().map(|&x| x as u32).collect();
        if series.h != h_given || series.k != k {
            return Err(bad(format!(
                "stated h = {h_given:?}, k = {k:?} but the subgroups give h = {:?}, k = {:?}",
                series.h, series.k
            )));
        }
        Ok(series)
    }
}

fn check_generators(x: &ResidueSet, g: &[u64]) -> Result<bool> {
    let t = (g.len() - 1) / 2;
    if subgroup_of_periods(x).generator() != g[0] {
        return Ok(false);
    }
    for i in 0..t {
        // (T1): the difference set of X / H_2i meets H_{2i+1} / H_2i trivially.
        let q = x.reduce(g[2 * i]);
        let diff = difference_set(&q)?;
        if diff.iter().any(|d| d != 0 && d % g[2 * i + 1] == 0) {
            return Ok(false);
        }
        // (T3), size part.
        if q.len() != x.reduce(g[2 * i + 1]).len() {
            return Ok(false);
        }
    }
    for i in 1..=t {
        // (T2) with H_2i / H_{2i-1} the exact subgroup of periods.
        let q = x.reduce(g[2 * i - 1]);
        if subgroup_of_periods(&q).generator() != g[2 * i] {
            return Ok(false);
        }
    }
    let top = g[2 * t - 1];
    Ok(x.reduce(top).len() as u64 == top)
}

/// Whether `series` is an admissible subgroup series for `x`.
pub fn check_t_conditions(x: &ResidueSet, series: &AdmissibleSeries) -> Result<bool> {
    if !x.contains(0) {
        return Err(Error::InvalidInput(format!("{x} does not contain 0")));
    }
    if x.modulus() != series.modulus {
        return Err(Error::IncompatibleOperands(format!(
            "set modulus {} vs series modulus {}",
            x.modulus(),
            series.modulus
        )));
    }
    check_generators(x, &series.generators)
}

/// Every admissible series of `x` as generator lists, in search order:
/// at each odd step the larger subgroups are tried first.
///
/// Chains whose odd step reaches the whole group are skipped; they only occur
/// when `x` lies in a proper subgroup.
pub fn admissible_chains(x: &ResidueSet) -> Vec<Vec<u64>> {
    let n = x.modulus();
    let divs = divisors(n);
    let mut out = Vec::new();
    let mut gens = vec![subgroup_of_periods(x).generator()];
    extend_chains(x, &divs, &mut gens, &mut out);
    out
}

fn extend_chains(x: &ResidueSet, divs: &[u64], gens: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    let g = *gens.last().expect("nonempty");
    if g == 1 {
        if gens.len() >= 3 {
            out.push(gens.clone());
        }
        return;
    }
    let q = x.reduce(g);
    for &g1 in divs.iter().filter(|&&d| d > 1 && d < g && g % d == 0) {
        if !q.meets_trivially(g1) {
            continue;
        }
        let period = subgroup_of_periods(&x.reduce(g1)).generator();
        if period == g1 {
            continue;
        }
        gens.push(g1);
        gens.push(period);
        extend_chains(x, divs, gens, out);
        gens.pop();
        gens.pop();
    }
}

fn check_size(s0: &ResidueSet, p: u64, ell: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if !s0.contains(0) {
        return Err(Error::InvalidInput(format!("{s0} does not contain 0")));
    }
    let pl = p.checked_pow(ell).ok_or_else(|| Error::InvalidInput("p^l overflows".into()))?;
    if s0.len() as u64 != pl {
        return Err(Error::InvalidInput(format!("|S_0| = {} but {p}^{ell} = {pl}", s0.len())));
    }
    if s0.modulus() % pl != 0 {
        return Err(Error::InvalidInput(format!("{p}^{ell} does not divide {}", s0.modulus())));
    }
    Ok(())
}

/// All admissible series of `s0` whose `h`/`k` sequences exist.
pub fn admissible_series(s0: &ResidueSet, p: u64, ell: u32) -> Result<Vec<AdmissibleSeries>> {
    check_size(s0, p, ell)?;
    Ok(admissible_chains(s0)
        .into_iter()
        .filter_map(|g| AdmissibleSeries::from_generators(s0.modulus(), g, p, ell).ok())
        .collect())
}

/// The longest admissible series, or `None` when `s0` is not pyramidal.
///
/// The longest series need not be unique. Ties go to the largest
/// [`AdmissibleSeries::bound_exponent`], then to search order.
pub fn longest_series(s0: &ResidueSet, p: u64, ell: u32) -> Result<Option<AdmissibleSeries>> {
    let all = admissible_series(s0, p, ell)?;
    let best = all.iter().map(|s| (s.t(), s.bound_exponent())).max();
    Ok(best.and_then(|b| all.into_iter().find(|s| (s.t(), s.bound_exponent()) == b)))
}

pub fn is_pyramidal(s0: &ResidueSet, p: u64, ell: u32) -> Result<bool> {
    Ok(longest_series(s0, p, ell)?.is_some())
}

/// Outcome of the existence test for a connected, non-complete circulant
/// `Cay(Z_n, S)` of degree `p^l - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Existence {
    pub exists: bool,
    pub divides: bool,
    pub pyramidal: bool,
    pub aperiodic: bool,
    /// `(S_0 - S_0) ∩ <p^l> = {0}`, i.e. `<p^l>` is itself a perfect code.
    pub subgroup_code: bool,
    /// Some perfect code containing 0 is not a subgroup.
    pub non_subgroup_codes: bool,
    pub series: Option<AdmissibleSeries>,
}

pub fn decide_existence(s: &ResidueSet, p: u64, ell: u32) -> Result<Existence> {
    validate_connection_set(s)?;
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let pl = p.checked_pow(ell).ok_or_else(|| Error::InvalidInput("p^l overflows".into()))?;
    if s.len() as u64 + 1 != pl {
        return Err(Error::InvalidInput(format!("|S| = {} but {p}^{ell} - 1 = {}", s.len(), pl - 1)));
    }
    if !generates(s) {
        return Err(Error::InvalidInput(format!("{s} does not generate Z_{}", s.modulus())));
    }
    let n = s.modulus();
    if pl >= n {
        return Err(Error::InvalidInput("the graph is complete".into()));
    }
    let s0 = s.with_zero();
    let aperiodic = subgroup_of_periods(&s0).is_trivial();
    let divides = n % pl == 0;
    if !divides {
        return Ok(Existence {
            exists: false,
            divides,
            pyramidal: false,
            aperiodic,
            subgroup_code: false,
            non_subgroup_codes: false,
            series: None,
        });
    }
    let series = longest_series(&s0, p, ell)?;
    let pyramidal = series.is_some();
    let subgroup_code = s0.meets_trivially(pl);
    let unique = aperiodic && subgroup_code && series.as_ref().is_some_and(|s| s.t() == 1);
    Ok(Existence {
        exists: pyramidal,
        divides,
        pyramidal,
        aperiodic,
        subgroup_code,
        non_subgroup_codes: pyramidal && !unique,
        series,
    })
}
