//! Closed-form count of connected circulants `Cay(Z_n, S)` of degree `p^l - 1`
//! with `(S_0 - S_0) ∩ <p^l> = {0}`, and a direct enumeration to check it.
//!
//! Such an `S_0` is a lift of `K_{p^l}` by `m = n / p^l`, determined by one
//! value in `{0, ..., m-1}` per pair `{x, -x}` of nonzero residues mod `p^l`.
//! There are `r` pairs: `(p^l - 1)/2` for odd `p`, `2^{l-1} - 1` for `p = 2`
//! (the residue `2^{l-1}` is its own inverse and has no free choice). Removing
//! the disconnected lifts by inclusion-exclusion over square-free `d | m`
//! coprime to `p` gives
//!
//! ```text
//! N = m^r + Σ_d (-1)^{ν(d)} (m/d)^r
//! ```

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::zmod::{divisors, gcd, is_prime, prime_factors};

/// Validated `(n, p, l)` with the derived quantities of the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountParams {
    n: u64,
    p: u64,
    ell: u32,
    m: u64,
    r: u32,
    square_free: Vec<u64>,
}

impl CountParams {
    pub fn new(n: u64, p: u64, ell: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if ell == 0 {
            return Err(Error::InvalidInput("l must be positive".into()));
        }
        let pl = p
            .checked_pow(ell)
            .filter(|&q| n % q == 0 && n > 0)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{ell} does not divide {n}")))?;
        let r = if p == 2 { (pl / 2 - 1) as u32 } else { ((pl - 1) / 2) as u32 };
        let square_free = divisors(n)
            .into_iter()
            .filter(|&d| d > 1 && d % p != 0 && is_square_free(d))
            .collect();
        Ok(Self { n, p, ell, m: n / pl, r, square_free })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Number of free pairs.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Square-free divisors of `n` above 1 and coprime to `p`.
    pub fn square_free_divisors(&self) -> &[u64] {
        &self.square_free
    }
}

fn is_square_free(d: u64) -> bool {
    prime_factors(d).iter().all(|&q| d % (q * q) != 0)
}

/// Number of distinct prime divisors.
pub fn nu(d: u64) -> usize {
    prime_factors(d).len()
}

fn signed_sum(params: &CountParams) -> BigInt {
    params
        .square_free
        .iter()
        .map(|&d| {
            let term = BigInt::from(params.m / d).pow(params.r);
            if nu(d) % 2 == 0 { term } else { -term }
        })
        .sum()
}

pub fn count_formula(params: &CountParams) -> Result<BigUint> {
    if params.ell as u64 + params.p < 4 {
        return Err(Error::OutOfHypothesis(format!(
            "l + p = {} is below 4",
            params.ell as u64 + params.p
        )));
    }
    if params.p == 2 && params.m % 2 == 0 {
        // The residue 2^{l-1} must come from the involution n/2, which lies over it only for odd m.
        return Ok(BigUint::zero());
    }
    let total = BigInt::from(params.m).pow(params.r) + signed_sum(params);
    Ok(total.to_biguint().expect("inclusion-exclusion count is nonnegative"))
}

/// Lifts of `K_{p^l}` by `m` that do not generate `Z_n`.
pub fn gcd_excess(params: &CountParams) -> BigUint {
    let s = -signed_sum(params);
    debug_assert!(!s.is_negative());
    s.to_biguint().unwrap_or_default()
}

struct Sweep {
    n: u64,
    pl: u64,
    target: usize,
    used: Vec<bool>,
    size: usize,
    g: u64,
    nodes: usize,
    budget: usize,
}

impl Sweep {
    fn run(&mut self, x: u64) -> Result<u64> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        if self.size == self.target {
            return Ok(u64::from(self.g == 1));
        }
        if 2 * x > self.n {
            return Ok(0);
        }
        let mut total = self.run(x + 1)?;
        let (a, b) = ((x % self.pl) as usize, ((self.n - x) % self.pl) as usize);
        let pair = 2 * x != self.n;
        let fits = !self.used[a] && (!pair || (a != b && !self.used[b]));
        if fits {
            let saved = self.g;
            self.used[a] = true;
            if pair {
                self.used[b] = true;
            }
            self.size += 1 + usize::from(pair);
            self.g = gcd(self.g, x);
            total += self.run(x + 1)?;
            self.g = saved;
            self.size -= 1 + usize::from(pair);
            self.used[a] = false;
            if pair {
                self.used[b] = false;
            }
        }
        Ok(total)
    }
}

/// Direct count over inverse-closed `S`, one include/skip choice per pair `{x, n - x}`.
/// `budget` caps the number of search nodes.
pub fn count_enumerate(params: &CountParams, budget: usize) -> Result<BigUint> {
    let pl = params.p.pow(params.ell);
    let mut used = vec![false; pl as usize];
    used[0] = true;
    let mut sweep = Sweep {
        n: params.n,
        pl,
        target: pl as usize - 1,
        used,
        size: 0,
        g: params.n,
        nodes: 0,
        budget,
    };
    Ok(BigUint::from(sweep.run(1)?))
}
