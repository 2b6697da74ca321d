//! Perfect codes manufactured from an admissible series, and the lower bound
//! on their number.
//!
//! With `h_0 > ... > h_t = 0` and `k_0, ..., k_t = 1` from the series, the
//! code starts from `D_0 = {j p^{h_{t-1}} : j < k_{t-1}}` and alternates
//!
//! ```text
//! D_{2i-1} = {x + τ_i(x) : x ∈ D_{2i-2}}
//! D_{2i}   = D_{2i-1} + J_i,   J_i = {j p^{h_{t-i-1}} k_{t-i} : j < k_{t-i-1} / k_{t-i}}
//! ```
//!
//! for `i = 1, ..., t-1`, where `τ_i` takes values in
//! `p^{h_{t-i}} k_{t-i} · {0, ..., p^{h_{t-i-1} - h_{t-i}} - 1}` and fixes 0.
//! A periodic set gets one more map `τ` into `p^{h_0} k_0 · {0, ..., p^{l - h_0} - 1}`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::pyramidal::{check_t_conditions, longest_series, AdmissibleSeries};
use crate::zmod::ResidueSet;

/// The `τ` choices that pick one code out of a series.
///
/// Each map is stored as its values on the sorted domain, so the first entry
/// (the image of 0) is always 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeRecipe {
    series: AdmissibleSeries,
    tau_seq: Vec<Vec<u64>>,
    tau_final: Option<Vec<u64>>,
}

impl CodeRecipe {
    pub fn new(
        series: AdmissibleSeries,
        tau_seq: Vec<Vec<u64>>,
        tau_final: Option<Vec<u64>>,
    ) -> Result<Self> {
        let steps = steps(&series);
        let maps: Vec<&Vec<u64>> = tau_seq.iter().chain(tau_final.as_ref()).collect();
        if maps.len() != steps.len() || tau_final.is_some() != series.is_periodic() {
            return Err(Error::InvalidRecipe(format!(
                "expected {} maps{}, got {}",
                steps.len(),
                if series.is_periodic() { " including a final one" } else { "" },
                maps.len()
            )));
        }
        for (i, (vals, step)) in maps.iter().zip(&steps).enumerate() {
            if vals.len() as u64 != step.domain {
                return Err(Error::InvalidRecipe(format!(
                    "map {} has {} values, its domain has {}",
                    i + 1,
                    vals.len(),
                    step.domain
                )));
            }
            if vals[0] != 0 {
                return Err(Error::InvalidRecipe(format!("map {} does not fix 0", i + 1)));
            }
            if let Some(v) = vals.iter().find(|&&v| v % step.stride != 0 || v / step.stride >= step.choices) {
                return Err(Error::InvalidRecipe(format!(
                    "map {} value {v} is not in {} * {{0..{}}}",
                    i + 1,
                    step.stride,
                    step.choices - 1
                )));
            }
        }
        Ok(Self { series, tau_seq, tau_final })
    }

    /// The recipe with every `τ` identically zero.
    pub fn zero(series: AdmissibleSeries) -> Self {
        let steps = steps(&series);
        let mut maps: Vec<Vec<u64>> = steps.iter().map(|s| vec![0; s.domain as usize]).collect();
        let tau_final = series.is_periodic().then(|| maps.pop().expect("final step"));
        Self { series, tau_seq: maps, tau_final }
    }

    pub fn series(&self) -> &AdmissibleSeries {
        &self.series
    }

    pub fn tau_seq(&self) -> &[Vec<u64>] {
        &self.tau_seq
    }

    pub fn tau_final(&self) -> Option<&[u64]> {
        self.tau_final.as_deref()
    }
}

#[derive(Debug, Clone, Copy)]
struct Step {
    domain: u64,
    stride: u64,
    choices: u64,
    /// Stride and length of `J_i`; `None` for the final periodic map.
    jump: Option<(u64, u64)>,
}

fn steps(series: &AdmissibleSeries) -> Vec<Step> {
    let (h, k, p) = (series.h_seq(), series.k_seq(), series.p());
    let t = series.t();
    let mut out = Vec::with_capacity(t);
    for i in 1..t {
        let j = t - i;
        out.push(Step {
            domain: k[j],
            stride: p.pow(h[j]) * k[j],
            choices: p.pow(h[j - 1] - h[j]),
            jump: Some((p.pow(h[j - 1]) * k[j], k[j - 1] / k[j])),
        });
    }
    if series.is_periodic() {
        out.push(Step {
            domain: k[0],
            stride: p.pow(h[0]) * k[0],
            choices: p.pow(series.ell() - h[0]),
            jump: None,
        });
    }
    out
}

fn first_domain(series: &AdmissibleSeries) -> Vec<u64> {
    let t = series.t();
    let stride = series.p().pow(series.h_seq()[t - 1]);
    (0..series.k_seq()[t - 1]).map(|j| j * stride).collect()
}

fn build_unchecked(series: &AdmissibleSeries, maps: &[&[u64]]) -> ResidueSet {
    let n = series.modulus();
    let mut d = first_domain(series);
    for (step, vals) in steps(series).iter().zip(maps) {
        let mut next: Vec<u64> = d.iter().zip(vals.iter()).map(|(&x, &v)| (x + v) % n).collect();
        if let Some((stride, len)) = step.jump {
            next = next
                .iter()
                .flat_map(|&x| (0..len).map(move |j| (x + j * stride) % n))
                .collect();
        }
        next.sort_unstable();
        d = next;
    }
    ResidueSet::from_residues(n, d)
}

/// Builds the code for `recipe`, whose series must be admissible for `s0`.
pub fn build_code(s0: &ResidueSet, recipe: &CodeRecipe) -> Result<ResidueSet> {
    let series = &recipe.series;
    if !check_t_conditions(s0, series).map_err(|e| Error::InvalidRecipe(e.to_string()))? {
        return Err(Error::InvalidRecipe(format!("the series is not admissible for {s0}")));
    }
    let maps: Vec<&[u64]> = recipe
        .tau_seq
        .iter()
        .chain(recipe.tau_final.as_ref())
        .map(Vec::as_slice)
        .collect();
    let code = build_unchecked(series, &maps);
    debug_assert_eq!(code.len() as u64, series.k_seq()[0]);
    debug_assert!(crate::tiling::is_direct_sum(s0, &code).unwrap_or(false));
    Ok(code)
}

/// All recipes over one series, in a fixed mixed radix.
///
/// The domain sizes `|D_{2i-2}| = k_{t-i}` do not depend on earlier choices,
/// so every recipe has a position `0 <= index < len()`.
#[derive(Debug, Clone)]
pub struct RecipeSpace {
    series: AdmissibleSeries,
    steps: Vec<Step>,
}

impl RecipeSpace {
    pub fn new(series: AdmissibleSeries) -> Self {
        let steps = steps(&series);
        Self { series, steps }
    }

    /// The space over the longest series of `s0`.
    pub fn for_set(s0: &ResidueSet, p: u64, ell: u32) -> Result<Self> {
        let series = longest_series(s0, p, ell)?
            .ok_or_else(|| Error::InvalidInput(format!("{s0} is not pyramidal")))?;
        Ok(Self::new(series))
    }

    pub fn series(&self) -> &AdmissibleSeries {
        &self.series
    }

    /// `p` to the number of free `τ` values.
    pub fn len(&self) -> BigUint {
        self.steps
            .iter()
            .map(|s| BigUint::from(s.choices).pow((s.domain - 1) as u32))
            .product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn digits_len(&self) -> usize {
        self.steps.iter().map(|s| (s.domain - 1) as usize).sum()
    }

    fn recipe_from_digits(&self, digits: &[u64]) -> CodeRecipe {
        let mut rest = digits;
        let mut maps = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let (mine, tail) = rest.split_at((step.domain - 1) as usize);
            rest = tail;
            let mut vals = vec![0];
            vals.extend(mine.iter().map(|&d| d * step.stride));
            maps.push(vals);
        }
        let tau_final = self.series.is_periodic().then(|| maps.pop().expect("final step"));
        CodeRecipe { series: self.series.clone(), tau_seq: maps, tau_final }
    }

    fn radices(&self) -> Vec<u64> {
        self.steps
            .iter()
            .flat_map(|s| std::iter::repeat(s.choices).take((s.domain - 1) as usize))
            .collect()
    }

    /// The recipe at `index` in lexicographic order, or `None` past the end.
    pub fn recipe_at(&self, index: &BigUint) -> Option<CodeRecipe> {
        if *index >= self.len() {
            return None;
        }
        let radices = self.radices();
        let mut digits = vec![0; radices.len()];
        let mut rest = index.clone();
        for (d, &r) in digits.iter_mut().zip(&radices).rev() {
            let r = BigUint::from(r);
            *d = (&rest % &r).to_u64().expect("digit below radix");
            rest /= r;
        }
        Some(self.recipe_from_digits(&digits))
    }

    /// Builds the code at a recipe from this space without rechecking the series.
    pub fn code(&self, recipe: &CodeRecipe) -> ResidueSet {
        let maps: Vec<&[u64]> = recipe
            .tau_seq
            .iter()
            .chain(recipe.tau_final.as_ref())
            .map(Vec::as_slice)
            .collect();
        build_unchecked(&self.series, &maps)
    }

    pub fn iter(&self) -> Recipes<'_> {
        Recipes { space: self, radices: self.radices(), digits: vec![0; self.digits_len()], done: false }
    }
}

/// Lexicographic stream over a [`RecipeSpace`].
pub struct Recipes<'a> {
    space: &'a RecipeSpace,
    radices: Vec<u64>,
    digits: Vec<u64>,
    done: bool,
}

impl Iterator for Recipes<'_> {
    type Item = CodeRecipe;

    fn next(&mut self) -> Option<CodeRecipe> {
        if self.done {
            return None;
        }
        let out = self.space.recipe_from_digits(&self.digits);
        self.done = true;
        for (d, &r) in self.digits.iter_mut().zip(&self.radices).rev() {
            *d += 1;
            if *d < r {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

/// Recipe space over the longest series of `s0`; iterate it with `.iter()`.
pub fn enumerate_recipes(s0: &ResidueSet, p: u64, ell: u32) -> Result<RecipeSpace> {
    RecipeSpace::for_set(s0, p, ell)
}

/// `p^e` with `e = Σ_{i<t} (h_{i-1} - h_i) k_i + h_{t-1} - l` and `h_{-1} = l`.
pub fn lower_bound(series: &AdmissibleSeries) -> BigUint {
    BigUint::from(series.p()).pow(series.bound_exponent() as u32)
}
