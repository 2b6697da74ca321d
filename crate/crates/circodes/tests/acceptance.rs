//! End-to-end acceptance checks, one line of output per criterion.
//! Runs without the libtest harness so the lines are always shown.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use circodes::codes::{build_code, enumerate_recipes, lower_bound, CodeRecipe, RecipeSpace};
use circodes::counting::{count_enumerate, count_formula, CountParams};
use circodes::lifts::{
    apply_ops, family_union, in_chain, multiplier_closure, LiftOp,
};
use circodes::pyramidal::{
    check_t_conditions, decide_existence, is_pyramidal, longest_series, AdmissibleSeries,
};
use circodes::tiling::{count_perfect_codes, enumerate_perfect_codes, find_perfect_code, is_perfect_code};
use circodes::zmod::{is_inverse_closed, project, subgroup_of_periods, ResidueSet, Subgroup};

type Check = std::result::Result<String, String>;

fn set(s: &str) -> ResidueSet {
    s.parse().expect("valid set literal")
}

fn ensure(cond: bool, what: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

const TWO_SERIES: &str = "90:1,5,6,7,83,84,85,89";
const SPREAD: &str = "90:0,1,15,16,31,59,74,75,89";
const NONSYM: &str = "315:0,1,14,15,16,29,30,31,44";
const MOD_2430: &str = "2430:1,44,45,46,224,225,226,269,270,271,314,315,316,2114,2115,2116,2159,2160,2161,2204,2205,2206,2384,2385,2386,2429";

fn two_series_set() -> Check {
    let s = set(TWO_SERIES);
    let e = decide_existence(&s, 3, 2).map_err(|e| e.to_string())?;
    ensure(e.exists, "no code reported")?;
    ensure(e.subgroup_code && e.non_subgroup_codes, "diagnosis is off")?;
    let nine = Subgroup::new(90, 9).unwrap().to_set();
    ensure(is_perfect_code(&s, &nine).unwrap(), "<9> is not a code")?;
    ensure(
        is_perfect_code(&s, &set("90:0,3,18,21,36,39,54,57,72,75")).unwrap(),
        "listed D is not a code",
    )?;
    let series = e.series.ok_or("no series")?;
    ensure(series.generators() == [90, 18, 6, 3, 1], format!("series {series}"))?;
    ensure(series.t() == 2, "t != 2")?;
    let alt = AdmissibleSeries::from_generators(90, vec![90, 9, 1], 3, 2).unwrap();
    ensure(check_t_conditions(&s.with_zero(), &alt).unwrap(), "<9> series rejected")?;
    Ok(format!("series {series}"))
}

fn mod_2430_set() -> Check {
    let s = set(MOD_2430);
    let s0 = s.with_zero();
    ensure(subgroup_of_periods(&s0).is_trivial(), "S_0 is periodic")?;
    let e = decide_existence(&s, 3, 3).map_err(|e| e.to_string())?;
    ensure(e.exists && e.pyramidal, "not pyramidal")?;
    let series = e.series.ok_or("no series")?;
    ensure(
        series.generators() == [2430, 810, 270, 135, 45, 3, 1],
        format!("series {series}"),
    )?;
    ensure(!s0.meets_trivially(27), "(S_0 - S_0) meets <27> trivially")?;
    ensure(!e.subgroup_code, "subgroup code reported")?;
    let base = [
        0u64, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30, 33, 36, 39, 42, 135, 138, 141, 144, 147, 150,
        153, 156, 159, 162, 165, 168, 171, 174, 177,
    ];
    let d = ResidueSet::from_residues(2430, base.iter().flat_map(|&b| [b, b + 810, b + 1620]));
    ensure(d.len() == 90, "D has the wrong size")?;
    ensure(is_perfect_code(&s, &d).unwrap(), "listed D is not a code")?;
    let space = RecipeSpace::new(series.clone());
    ensure(space.code(&CodeRecipe::zero(series.clone())) == d, "zero recipe differs from D")?;
    let total = space.len();
    let bound = lower_bound(&series);
    ensure(total == bound, "recipe count differs from the bound")?;
    // Sampled recipes: the first block, the last, and evenly spaced ones.
    let mut indices: Vec<BigUint> = (0u32..200).map(BigUint::from).collect();
    indices.push(&total - 1u32);
    for j in 1u32..200 {
        indices.push(&total * j / 200u32);
    }
    let pl = Subgroup::new(2430, 27).unwrap().to_set();
    let codes: Vec<ResidueSet> = indices
        .par_iter()
        .map(|i| space.code(&space.recipe_at(i).expect("index in range")))
        .collect();
    for c in &codes {
        ensure(is_perfect_code(&s, c).unwrap(), format!("constructed {c} is not a code"))?;
        // The only subgroup of order 90 is <27>.
        ensure(*c != pl, "a constructed code is a subgroup")?;
    }
    let distinct: BTreeSet<_> = codes.iter().collect();
    let sampled: BTreeSet<_> = indices.iter().collect();
    ensure(distinct.len() == sampled.len(), "sampled recipes collide")?;
    let (found, _) = circodes::tiling::enumerate_perfect_codes_limited(&s, 50).unwrap();
    ensure(!found.is_empty(), "oracle found no code")?;
    for c in &found {
        ensure(*c != pl, "an oracle code is a subgroup")?;
    }
    let exponent = (0u32..).find(|&e| BigUint::from(3u32).pow(e) >= bound).unwrap_or(0);
    Ok(format!(
        "bound 3^{exponent}, {} sampled recipes and {} oracle codes checked",
        sampled.len(),
        found.len()
    ))
}

fn spread_set() -> Check {
    let s0 = set(SPREAD);
    let series = longest_series(&s0, 3, 2).unwrap().ok_or("not pyramidal")?;
    ensure(series.generators() == [90, 45, 15, 3, 1], format!("series {series}"))?;
    let mod15 = project(&s0, &Subgroup::new(90, 15).unwrap()).unwrap();
    let mod3 = project(&s0, &Subgroup::new(90, 3).unwrap()).unwrap();
    ensure(mod15 == set("15:0,1,14"), format!("mod 15 gives {mod15}"))?;
    ensure(mod3 == set("3:0,1,2"), format!("mod 3 gives {mod3}"))?;
    Ok(format!("{mod15} and {mod3}"))
}

fn non_symmetric() -> Check {
    let x = set(NONSYM);
    let s = AdmissibleSeries::from_generators(315, vec![315, 45, 15, 3, 1], 3, 2).unwrap();
    ensure(check_t_conditions(&x, &s).unwrap(), "T conditions fail")?;
    ensure(!is_inverse_closed(&x), "X is inverse-closed")?;
    Ok(format!("k = {:?}", s.k_seq()))
}

struct Instance {
    s: ResidueSet,
    p: u64,
    ell: u32,
}

fn sweep() -> Vec<Instance> {
    common::sweep_params()
        .into_iter()
        .flat_map(|(n, p, ell)| {
            common::connection_sets(n, p.pow(ell) as usize - 1)
                .into_iter()
                .map(move |s| Instance { s, p, ell })
        })
        .collect()
}

fn existence(all: &[Instance]) -> Check {
    let bad: Vec<String> = all
        .par_iter()
        .filter(|i| {
            let e = decide_existence(&i.s, i.p, i.ell).expect("valid instance");
            e.exists != find_perfect_code(&i.s).unwrap().is_some()
        })
        .map(|i| i.s.to_string())
        .collect();
    ensure(bad.is_empty(), format!("{} disagreements, e.g. {:?}", bad.len(), bad.first()))?;
    let yes = all
        .par_iter()
        .filter(|i| is_pyramidal(&i.s.with_zero(), i.p, i.ell).unwrap())
        .count();
    Ok(format!("{} instances, {yes} with codes, 0 disagreements", all.len()))
}

fn pyramidal_instances(all: &[Instance]) -> Vec<(&Instance, AdmissibleSeries)> {
    all.par_iter()
        .filter_map(|i| longest_series(&i.s.with_zero(), i.p, i.ell).unwrap().map(|s| (i, s)))
        .collect()
}

fn counting_bound(pyr: &[(&Instance, AdmissibleSeries)]) -> Check {
    let bad: Vec<String> = pyr
        .par_iter()
        .filter(|(i, _)| i.s.modulus() <= 96)
        .filter(|(i, series)| BigUint::from(count_perfect_codes(&i.s).unwrap()) < lower_bound(series))
        .map(|(i, _)| i.s.to_string())
        .collect();
    ensure(bad.is_empty(), format!("bound fails on {bad:?}"))?;
    let ex = set(TWO_SERIES);
    let c = count_perfect_codes(&ex).unwrap();
    ensure(c >= 3, format!("count {c} for the two-series set"))?;
    Ok(format!("{} pyramidal instances, two-series set count {c} >= 3", pyr.len()))
}

fn family_coverage() -> Check {
    let mut notes = Vec::new();
    for (n, p, ell) in [(12u64, 2u64, 2u32), (18, 3, 2), (20, 2, 2), (24, 2, 3), (36, 2, 2), (45, 3, 2)] {
        let q = p.pow(ell) as usize;
        let fam = family_union(n, p, ell, 1_000_000).map_err(|e| e.to_string())?;
        let fam = multiplier_closure(&fam);
        let oracle: BTreeSet<ResidueSet> = common::connection_sets(n, q - 1)
            .into_par_iter()
            .filter(|s| find_perfect_code(s).unwrap().is_some())
            .map(|s| s.with_zero())
            .collect();
        ensure(
            fam == oracle,
            format!("({n},{q}): family {} sets, oracle {} sets", fam.len(), oracle.len()),
        )?;
        notes.push(format!("({n},{q}):{}", fam.len()));
    }
    Ok(notes.join(" "))
}

const LIFT_BUDGET: usize = 400_000;

fn family_of(seed: &ResidueSet, ops: &[LiftOp]) -> std::result::Result<BTreeSet<ResidueSet>, String> {
    apply_ops(seed, ops, false, LIFT_BUDGET).map_err(|e| format!("{ops:?}: {e}"))
}

/// Seeds `S_0 ⊂ Z_n`, `n <= 20`, `|S_0| = p^l`, `n = p^l m` with `gcd(m, p) = 1`, `m >= 2`.
fn identity_seeds() -> Vec<(ResidueSet, u64)> {
    let mut out = Vec::new();
    for (n, p, ell) in [(6u64, 2u64, 1u32), (10, 2, 1), (12, 2, 2), (20, 2, 2), (6, 3, 1), (12, 3, 1), (15, 3, 1)] {
        let q = p.pow(ell) as usize;
        for s in common::inverse_closed_sets(n, q - 1).into_iter().take(3) {
            out.push((s.with_zero(), p));
        }
    }
    out
}

fn operator_identities() -> Check {
    use LiftOp::{F, G};
    let seeds = identity_seeds();
    let mut checked = 0usize;
    for (s0, p) in &seeds {
        let p = *p;
        // (a) and (b)
        for (a, b) in [(2u64, 3u64), (3, 3), (2, 2), (3, 2)] {
            ensure(family_of(s0, &[F(a), F(b)])? == family_of(s0, &[F(a * b)])?, format!("(a) {s0} {a} {b}"))?;
            ensure(family_of(s0, &[G(a), G(b)])? == family_of(s0, &[G(a * b)])?, format!("(b) {s0} {a} {b}"))?;
            checked += 2;
        }
        for r in 1..=2u32 {
            let pr = p.pow(r);
            if pr > 9 {
                continue;
            }
            for a in 2..=9u64 {
                let lhs = family_of(s0, &[F(a), G(pr)])?;
                if a % p != 0 {
                    // (c)
                    for x in &lhs {
                        ensure(in_chain(x, s0, &[G(pr), F(a)], false), format!("(c) {s0} a={a} p^r={pr}"))?;
                    }
                } else {
                    // (d)
                    for x in &lhs {
                        ensure(!in_chain(x, s0, &[G(pr), F(a)], false), format!("(d) {s0} a={a} p^r={pr}"))?;
                    }
                }
                checked += lhs.len();
            }
        }
        // (e): enumerate g_{p^{k+c}} f_a g_{p^{h-c}}, test against g_{p^k} f_a g_{p^h}.
        for (a, h, c, k) in [(p, 2u32, 1u32, 1u32), (2 * p, 2, 1, 1)] {
            if a > 9 || p.pow(h) > 9 || p.pow(k + c) > 9 {
                continue;
            }
            let rhs = family_of(s0, &[G(p.pow(h - c)), F(a), G(p.pow(k + c))])?;
            for y in &rhs {
                ensure(
                    !in_chain(y, s0, &[G(p.pow(h)), F(a), G(p.pow(k))], false),
                    format!("(e) {s0} a={a} h={h} c={c} k={k}"),
                )?;
            }
            checked += rhs.len();
        }
        // (f): enumerate f_{bd} g_{p^r} f_{a/d}, test against f_b g_{p^r} f_a.
        for (a, d, b, r) in [(p, p, 2u64, 1u32), (2 * p, p, 2, 1), (p, p, 3, 1)] {
            if a > 9 || b > 9 || p.pow(r) > 9 {
                continue;
            }
            let lhs = family_of(s0, &[F(a / d), G(p.pow(r)), F(b * d)])?;
            for x in &lhs {
                ensure(
                    !in_chain(x, s0, &[F(a), G(p.pow(r)), F(b)], false),
                    format!("(f) {s0} a={a} d={d} b={b}"),
                )?;
            }
            checked += lhs.len();
        }
    }
    Ok(format!("{} seeds, {checked} memberships checked", seeds.len()))
}

fn closed_form_count() -> Check {
    let mut notes = Vec::new();
    for (n, p, ell) in [(18u64, 3u64, 2u32), (36, 3, 2), (45, 3, 2), (8, 2, 3), (24, 2, 3), (40, 2, 3)] {
        let params = CountParams::new(n, p, ell).map_err(|e| e.to_string())?;
        let f = count_formula(&params).map_err(|e| e.to_string())?;
        let o = count_enumerate(&params, 500_000_000).map_err(|e| e.to_string())?;
        ensure(f == o, format!("N({n},{p}^{ell}): formula {f}, enumeration {o}"))?;
        notes.push(format!("N({n},{})={f}", p.pow(ell)));
    }
    ensure(notes.contains(&"N(45,9)=624".to_string()), "N(45,9) != 624")?;
    ensure(notes.contains(&"N(8,8)=1".to_string()), "N(8,8) != 1")?;
    Ok(notes.join(" "))
}

fn distinctness(pyr: &[(&Instance, AdmissibleSeries)]) -> Check {
    let deep: Vec<_> = pyr.iter().filter(|(_, s)| s.t() >= 2).collect();
    let bad: Vec<String> = deep
        .par_iter()
        .filter_map(|(i, series)| {
            let s0 = i.s.with_zero();
            let space = RecipeSpace::new(series.clone());
            let built: Vec<ResidueSet> = space.iter().map(|r| space.code(&r)).collect();
            let distinct: BTreeSet<_> = built.iter().collect();
            let oracle: BTreeSet<ResidueSet> = enumerate_perfect_codes(&i.s).unwrap().into_iter().collect();
            let ok = BigUint::from(distinct.len()) == space.len()
                && built.iter().all(|c| oracle.contains(c))
                && build_code(&s0, &CodeRecipe::zero(series.clone())).is_ok();
            (!ok).then(|| i.s.to_string())
        })
        .collect();
    ensure(bad.is_empty(), format!("fails on {bad:?}"))?;
    ensure(
        enumerate_recipes(&set(SPREAD), 3, 2).unwrap().len() == BigUint::from(81u32),
        "recipe count mod 90",
    )?;
    Ok(format!("{} instances with t >= 2", deep.len()))
}

fn report(n: usize, name: &str, result: Check, started: Instant, failed: &mut usize) {
    let secs = started.elapsed().as_secs_f64();
    match result {
        Ok(note) => println!("criterion {n:>2} PASS  {name} ({note}; {secs:.1}s)"),
        Err(why) => {
            *failed += 1;
            println!("criterion {n:>2} FAIL  {name}: {why} ({secs:.1}s)");
        }
    }
}

fn main() {
    // `cargo test -- --list` and filters pass arguments; this binary has a single entry.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut failed = 0;
    let t = Instant::now();
    report(1, "Set mod 90 with two admissible series", two_series_set(), t, &mut failed);
    let t = Instant::now();
    report(2, "Set mod 2430 with a non-subgroup code", mod_2430_set(), t, &mut failed);
    let t = Instant::now();
    report(3, "Spread set mod 90 and its projections", spread_set(), t, &mut failed);
    let t = Instant::now();
    report(4, "Non-symmetric pyramidal set mod 315", non_symmetric(), t, &mut failed);
    let t = Instant::now();
    let all = sweep();
    report(5, "Existence test agrees with the exact-cover oracle", existence(&all), t, &mut failed);
    let pyr = pyramidal_instances(&all);
    let t = Instant::now();
    report(6, "Code count is at least the lower bound", counting_bound(&pyr), t, &mut failed);
    let t = Instant::now();
    report(7, "Lift families cover every graph with a code", family_coverage(), t, &mut failed);
    let t = Instant::now();
    report(8, "Lift operator identities", operator_identities(), t, &mut failed);
    let t = Instant::now();
    report(9, "Closed-form count equals enumeration", closed_form_count(), t, &mut failed);
    let t = Instant::now();
    report(10, "Distinct recipes give distinct oracle codes", distinctness(&pyr), t, &mut failed);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
