//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use hyperarr::catalog::{boolean, fam5, lookup, ss22};
use hyperarr::dependencies::{
    check_low_exponent_lemmas, circuits_of_size_3, dependency_profile, in_circuit_span, is_formal,
    relation_of,
};
use hyperarr::derivations::{
    derivation_space, freeness, minimal_generator_degrees, quadratic_ideal_check, FreenessStatus,
};
use hyperarr::exact::{poly_det, rat};
use hyperarr::lattice::{build_lattice, is_supersolvable, IntPoly};
use hyperarr::report::VerifyReport;
use hyperarr::scan::{scan, Configuration, ScanSummary, Verdict};
use hyperarr::{Arrangement, LinearForm, MPoly, Rational};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("{what} took {t:.1?}, limit {limit:?}"))
}

/// Every catalog arrangement used below, by name.
fn catalog_items() -> Vec<Arrangement> {
    let mut v: Vec<Arrangement> = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "P5", "Gen4", "A8e"]
        .iter()
        .map(|n| lookup(n).unwrap())
        .collect();
    v.extend((1..=6).map(boolean));
    v.extend((2..=6).map(ss22));
    v.push(fam5(&rat(2), &rat(1)).unwrap());
    v.push(fam5(&rat(2), &rat(-1)).unwrap());
    v
}

fn free_exponents(a: &Arrangement) -> Option<Vec<usize>> {
    let v = freeness(a, None).ok()?;
    (v.status == FreenessStatus::Free).then(|| v.exponents.unwrap())
}

// ---------------------------------------------------------------- criterion 1

fn catalog_table() -> Outcome {
    let start = Instant::now();
    let free = [
        ("A1", vec![1, 3, 3], false),
        ("A2", vec![1, 3, 3], true),
        ("A5", vec![1, 2, 4], true),
        ("A7", vec![1, 2, 3], true),
        ("A8", vec![1, 2, 3], true),
    ];
    for (name, exps, ss) in free {
        let a = lookup(name).unwrap();
        let v = freeness(&a, None).map_err(|e| e.to_string())?;
        ensure(v.status == FreenessStatus::Free, || format!("{name}: {}", v.status))?;
        ensure(v.exponents.as_ref() == Some(&exps), || {
            format!("{name}: exponents {:?}", v.exponents)
        })?;
        ensure(is_supersolvable(&a).0 == ss, || format!("{name}: supersolvable != {ss}"))?;
    }
    let not_free = [
        ("A3", vec![1, 2, 5, 5]),
        ("A4", vec![1, 3, 4, 4]),
        ("A6", vec![1, 5, 5, 5, 5, 5, 5]),
    ];
    for (name, degrees) in not_free {
        let a = lookup(name).unwrap();
        let v = freeness(&a, None).map_err(|e| e.to_string())?;
        ensure(v.status == FreenessStatus::NotFree, || format!("{name}: {}", v.status))?;
        // the generator list is complete up to |A| - k + 1, past every
        // degree a free arrangement could need
        let s = minimal_generator_degrees(&a, a.len() - a.dim() + 1);
        ensure(s.min_gen_degrees == degrees, || {
            format!("{name}: generator degrees {:?}", s.min_gen_degrees)
        })?;
    }
    within(start, Duration::from_secs(60), "catalog table")?;
    Ok(format!("A1..A8 match, {:.2?}", start.elapsed()))
}

// ---------------------------------------------------------------- criterion 2

fn binomial_row(k: usize) -> Vec<i64> {
    let mut row = vec![1i64];
    for _ in 0..k {
        let mut next = vec![1i64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

fn poincare_checks() -> Outcome {
    // (1+t)(1+3t)^2 expanded by hand
    let target = vec![1, 7, 15, 9];
    for name in ["A1", "A2", "A3"] {
        let p = build_lattice(&lookup(name).unwrap()).poincare_polynomial();
        ensure(p.coefficients() == target, || format!("{name}: {p}"))?;
    }
    for k in 1..=6 {
        let p = build_lattice(&boolean(k)).poincare_polynomial();
        ensure(p.coefficients() == binomial_row(k), || format!("B{k}: {p}"))?;
    }
    let mut factored = 0;
    for a in catalog_items() {
        if let Some(exps) = free_exponents(&a) {
            let p = build_lattice(&a).poincare_polynomial();
            let q = exps.iter().fold(IntPoly::one(), |acc, &e| {
                acc.mul(&IntPoly(vec![1, e as i64]))
            });
            ensure(p == q, || format!("{}: {p} vs {q}", a.name().unwrap_or("?")))?;
            factored += 1;
        }
    }
    Ok(format!("A1-A3, B1..B6, {factored} free items factor"))
}

// ---------------------------------------------------------------- criterion 3

fn ss22_pipeline() -> Outcome {
    let start = Instant::now();
    for k in 3..=6 {
        let a = ss22(k);
        let v = freeness(&a, None).map_err(|e| e.to_string())?;
        let mut exps = vec![2; k];
        exps[0] = 1;
        ensure(v.is_free() && v.exponents.as_ref() == Some(&exps), || {
            format!("SS22({k}): {} {:?}", v.status, v.exponents)
        })?;

        let p = dependency_profile(&a);
        ensure(p.max_multiplicity <= 3, || format!("SS22({k}): multiplicity {}", p.max_multiplicity))?;
        ensure(p.triple_count == k - 1, || format!("SS22({k}): {} triples", p.triple_count))?;
        let lonely = p.m_i.iter().filter(|&&m| m == 1).count();
        ensure(lonely >= 2, || format!("SS22({k}): {lonely} hyperplanes with m_i = 1"))?;

        let lemmas = check_low_exponent_lemmas(&a, &p, &v);
        ensure(lemmas.applicable() && lemmas.all_pass(), || {
            format!("SS22({k}): lemma report {:?}", lemmas.checks)
        })?;

        let lat = build_lattice(&a);
        let coatom = lat
            .modular_coatoms()
            .into_iter()
            .find(|(f, _)| f.size() + 2 == a.len());
        ensure(coatom.is_some(), || format!("SS22({k}): no modular coatom of size |A|-2"))?;

        let (ss, chain) = is_supersolvable(&a);
        let chain = chain.ok_or_else(|| format!("SS22({k}): not supersolvable"))?;
        ensure(ss && lat.is_valid_modular_chain(&chain), || format!("SS22({k}): invalid chain"))?;
        ensure(chain.exponents() == exps, || format!("SS22({k}): chain {:?}", chain.exponents()))?;

        let r = VerifyReport::build(&a).map_err(|e| e.to_string())?;
        ensure(!r.has_failure(), || format!("SS22({k}): verify report has a failure"))?;
    }
    within(start, Duration::from_secs(120), "SS22 pipeline")?;
    Ok(format!("k = 3..6, {:.2?}", start.elapsed()))
}

// ---------------------------------------------------------------- criterion 4

const LISTED: &[(usize, &str, &str)] = &[
    (4, "k4 s=3", "147 258 357 456 678"),
    (4, "k4 s=1", "128 234 357 456 678"),
    (5, "s=6 (iii)", "179 27(10) 378 489 58(10) 69(10)"),
    (5, "s=5 (i)", "16(10) 27(10) 38(10) 49(10) 589 679"),
    (5, "s=5 (ii) a", "16(10) 28(10) 39(10) 489 579 678"),
    (5, "s=5 (ii) b", "17(10) 28(10) 389 468 569 79(10)"),
    (5, "s=4 (i)", "15(10) 26(10) 379 489 567 89(10)"),
    (5, "s=4 (ii)", "179 289 35(10) 46(10) 569 78(10)"),
    (5, "s=4 (iii)", "19(10) 289 36(10) 457 569 78(10)"),
    (5, "s=4 (iv)", "169 289 37(10) 48(10) 59(10) 567"),
    (5, "s=4 (v)", "169 29(10) 38(10) 478 56(10) 579"),
    (5, "s=4 (vi)", "189 269 38(10) 47(10) 56(10) 579"),
    (5, "s=4 (vii)", "15(10) 28(10) 389 467 569 79(10)"),
    (5, "s=4 (viii)", "15(10) 26(10) 389 478 569 79(10)"),
    (5, "s=4 (ix)", "19(10) 26(10) 38(10) 457 569 789"),
    (5, "s=3 (i)", "14(10) 25(10) 379 456 678 89(10)"),
    (5, "s=3 (ii)", "14(10) 278 359 456 67(10) 89(10)"),
    (5, "s=3 (iii)", "14(10) 27(10) 39(10) 456 678 589"),
    (5, "s=3 (iv)", "16(10) 29(10) 389 45(10) 567 478"),
    (5, "s=3 (v)", "18(10) 249 369 45(10) 67(10) 578"),
    (5, "s=3 (vi)", "148 256 379 45(10) 67(10) 89(10)"),
    (5, "s=2 (i)", "139 27(10) 345 567 468 89(10)"),
    (5, "s=2 (ii)", "138 29(10) 345 567 789 46(10)"),
    (5, "s=2 (iii)", "13(10) 29(10) 345 567 789 468"),
];

/// Valid configurations reachable by exchanging one label between two flats.
fn single_swap_repairs(cfg: &Configuration) -> BTreeSet<Configuration> {
    let flats: Vec<Vec<usize>> = cfg.flats().cloned().collect();
    let mut out = BTreeSet::new();
    for a in 0..flats.len() {
        for b in a + 1..flats.len() {
            for &x in &flats[a] {
                for &y in &flats[b] {
                    if x == y || flats[a].contains(&y) || flats[b].contains(&x) {
                        continue;
                    }
                    let mut f = flats.clone();
                    f[a].iter_mut().filter(|l| **l == x).for_each(|l| *l = y);
                    f[b].iter_mut().filter(|l| **l == y).for_each(|l| *l = x);
                    let (quads, triples) = f.into_iter().partition(|g| g.len() == 4);
                    let c = Configuration::new(cfg.k, cfg.n, quads, triples);
                    if c.is_valid() {
                        out.insert(c.canonical());
                    }
                }
            }
        }
    }
    out
}

fn rank_deficient_with_seed(summary: &ScanSummary, cfg: &Configuration) -> Result<(), String> {
    let class = summary.find(cfg).ok_or_else(|| format!("{cfg} not enumerated"))?;
    match &class.verdict {
        Verdict::RankDeficient { seed } if seed.len() == cfg.k - 1 => {
            // the seed must close over every label
            ensure(cfg.canonical().circuit_closure(seed).len() == cfg.n, || {
                format!("{cfg}: seed does not close")
            })
        }
        other => Err(format!("{cfg}: verdict {other}")),
    }
}

fn conjecture_scan() -> Outcome {
    let start = Instant::now();
    let s4 = scan(4);
    let s5 = scan(5);
    within(start, Duration::from_secs(300), "scan 4 + scan 5")?;
    ensure(s4.open == 0 && s5.open == 0, || {
        format!("open classes: k=4 {}, k=5 {}", s4.open, s5.open)
    })?;

    let mut checked = 0;
    let mut misprints = Vec::new();
    let mut repairs = 0;
    for &(k, label, text) in LISTED {
        let cfg = Configuration::parse(k, text).ok_or_else(|| format!("{label}: unparsable"))?;
        let summary = if k == 4 { &s4 } else { &s5 };
        if !cfg.is_valid() {
            // not a rank-2 configuration; every one-swap correction must be
            // eliminated the same way
            let fixes = single_swap_repairs(&cfg);
            ensure(!fixes.is_empty(), || format!("{label}: no valid repair"))?;
            for f in &fixes {
                rank_deficient_with_seed(summary, f).map_err(|e| format!("{label} repair: {e}"))?;
            }
            repairs += fixes.len();
            misprints.push(format!("{label} [{}]", cfg.violations().join("; ")));
            continue;
        }
        rank_deficient_with_seed(summary, &cfg).map_err(|e| format!("{label}: {e}"))?;
        checked += 1;
    }

    // the v = 1 family is eliminated as a product, not by rank
    let v1 = Configuration::parse(5, "1234 589 68(10) 79(10)").unwrap();
    let class = s5.find(&v1).ok_or("v=1 configuration not enumerated")?;
    ensure(matches!(class.verdict, Verdict::Reducible { .. }), || {
        format!("v=1 configuration: {}", class.verdict)
    })?;

    Ok(format!(
        "open k=4: {} (without lonely-pair rule {}), k=5: {} (without {}); \
         {checked} listed configurations RankDeficient with a (k-1)-seed; \
         {} listed lists are not valid configurations, all {repairs} one-swap repairs RankDeficient: {}; {:.2?}",
        s4.open,
        s4.open_without_pair_rule(),
        s5.open,
        s5.open_without_pair_rule(),
        misprints.len(),
        misprints.join(", "),
        start.elapsed()
    ))
}

// ---------------------------------------------------------------- criterion 5

fn parametric_family() -> Outcome {
    let a = fam5(&rat(2), &rat(1)).unwrap();
    let v = freeness(&a, None).map_err(|e| e.to_string())?;
    ensure(v.status == FreenessStatus::NotFree, || format!("Fam5(2,1): {}", v.status))?;
    let s = minimal_generator_degrees(&a, a.len() - a.dim() + 1);
    ensure(s.min_gen_degrees == [1, 1, 3, 3, 3, 3], || {
        format!("Fam5(2,1): generator degrees {:?}", s.min_gen_degrees)
    })?;

    let b = fam5(&rat(2), &rat(-1)).unwrap();
    ensure(free_exponents(&b) == Some(vec![1, 1, 2, 3, 3]), || {
        format!("Fam5(2,-1): {:?}", free_exponents(&b))
    })?;
    ensure(is_supersolvable(&b).0, || "Fam5(2,-1) not supersolvable".into())?;
    let p = dependency_profile(&b);
    ensure(p.u == 4, || format!("Fam5(2,-1): u = {}", p.u))?;
    Ok("Fam5(2,1) degrees {1,1,3,3,3,3}; Fam5(2,-1) free (1,1,2,3,3), supersolvable, u = 4".into())
}

// ---------------------------------------------------------------- criterion 6

fn formality() -> Outcome {
    let p5 = lookup("P5").unwrap();
    let f = is_formal(&p5);
    ensure(f.formal, || format!("P5: {f:?}"))?;
    // S1 = {x, z, x-z}, S2 = {y, z, y-z}, S3 = {x, y, x-z, y-z}
    let r1 = relation_of(&p5, &[0, 2, 3]).map_err(|e| e.to_string())?;
    let r2 = relation_of(&p5, &[1, 2, 4]).map_err(|e| e.to_string())?;
    let r3 = relation_of(&p5, &[0, 1, 3, 4]).map_err(|e| e.to_string())?;
    let mut diff = vec![Rational::zero(); 5];
    for (i, c) in [0, 2, 3].iter().zip(&r1) {
        diff[*i] += c;
    }
    for (i, c) in [1, 2, 4].iter().zip(&r2) {
        diff[*i] -= c;
    }
    let mut s3 = vec![Rational::zero(); 5];
    for (i, c) in [0, 1, 3, 4].iter().zip(&r3) {
        s3[*i] = c.clone();
    }
    ensure(diff == s3, || format!("R_S1 - R_S2 = {diff:?}, R_S3 = {s3:?}"))?;
    ensure(in_circuit_span(&p5, &s3), || "R_S3 outside the circuit span".into())?;

    let g = is_formal(&lookup("Gen4").unwrap());
    ensure(!g.formal, || format!("Gen4: {g:?}"))?;

    let mut free = 0;
    for a in catalog_items() {
        if free_exponents(&a).is_some() {
            let f = is_formal(&a);
            ensure(f.formal, || format!("{} free but {f:?}", a.name().unwrap_or("?")))?;
            free += 1;
        }
    }
    Ok(format!("P5 formal with R_S3 = R_S1 - R_S2; Gen4 not formal; {free} free items formal"))
}

// ---------------------------------------------------------------- criterion 7

fn small_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn subset_rank(a: &Arrangement, mask: u32) -> usize {
    let rows: Vec<Vec<Rational>> = (0..a.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| a.form(i).coeffs().to_vec())
        .collect();
    small_rank(&rows)
}

fn arrangement_strategy(dim: usize, max_n: usize) -> impl Strategy<Value = Arrangement> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, dim), 1..=max_n + 4).prop_filter_map(
        "need distinct nonzero forms",
        move |rows| {
            let mut forms: Vec<LinearForm> = Vec::new();
            for r in rows {
                if let Ok(f) = LinearForm::from_i64(&r) {
                    if !forms.contains(&f) && forms.len() < max_n {
                        forms.push(f);
                    }
                }
            }
            Arrangement::new(dim, forms).ok()
        },
    )
}

/// Flats from all 2^n subsets, Möbius values from the poset and the
/// Poincaré polynomial from the subset expansion.
fn lattice_matches_brute_force(a: &Arrangement) -> Result<(), TestCaseError> {
    let n = a.len();
    let ranks: Vec<usize> = (0..1u32 << n).map(|m| subset_rank(a, m)).collect();
    let mut flats: BTreeSet<(usize, u32)> = BTreeSet::new();
    for m in 0..1u32 << n {
        let closure = (0..n)
            .filter(|&i| ranks[(m | 1 << i) as usize] == ranks[m as usize])
            .fold(0u32, |acc, i| acc | 1 << i);
        flats.insert((ranks[m as usize], closure));
    }
    let lat = build_lattice(a);
    let mask_of = |c: &[usize]| c.iter().fold(0u32, |acc, &i| acc | 1 << i);
    let ours: BTreeSet<(usize, u32)> = lat.flats().iter().map(|f| (f.rank, mask_of(&f.closure))).collect();
    prop_assert_eq!(&ours, &flats);

    let order: Vec<(usize, u32)> = flats.iter().copied().collect();
    let mut mu: BTreeMap<u32, i64> = BTreeMap::new();
    for &(_, y) in &order {
        let below: i64 = mu.iter().filter(|(&z, _)| z != y && z & !y == 0).map(|(_, v)| v).sum();
        mu.insert(y, if y == 0 { 1 } else { -below });
    }
    for (i, f) in lat.flats().iter().enumerate() {
        prop_assert_eq!(lat.mobius(i), mu[&mask_of(&f.closure)]);
    }

    let mut pi = vec![0i64; a.dim() + 1];
    for m in 0..1u32 << n {
        let r = ranks[m as usize];
        let sign = if (m.count_ones() as usize + r).is_multiple_of(2) { 1 } else { -1 };
        pi[r] += sign;
    }
    while pi.len() > 1 && pi.last() == Some(&0) {
        pi.pop();
    }
    let ours = lat.poincare_polynomial();
    prop_assert_eq!(ours.coefficients(), &pi[..]);
    Ok(())
}

fn circuits_match_rank_scan(a: &Arrangement) -> Result<(), TestCaseError> {
    let n = a.len();
    let mut expected = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                if subset_rank(a, 1 << i | 1 << j | 1 << l) == 2 {
                    expected.insert(vec![i, j, l]);
                }
            }
        }
    }
    let circuits = circuits_of_size_3(a);
    let found: BTreeSet<Vec<usize>> = circuits.iter().map(|c| c.indices.clone()).collect();
    prop_assert_eq!(found.len(), circuits.len());
    prop_assert_eq!(&found, &expected);
    for c in &circuits {
        prop_assert!(c.relation.iter().all(|x| !x.is_zero()));
        for coord in 0..a.dim() {
            let s: Rational = c
                .indices
                .iter()
                .zip(&c.relation)
                .map(|(&i, r)| r * &a.form(i).coeffs()[coord])
                .sum();
            prop_assert!(s.is_zero());
        }
    }
    Ok(())
}

fn binom(n: usize, r: usize) -> usize {
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// dim of ⊕ S(-e_i) in degree d, k variables.
fn free_module_dim(exps: &[usize], k: usize, d: usize) -> usize {
    exps.iter().filter(|&&e| e <= d).map(|&e| binom(d - e + k - 1, k - 1)).sum()
}

fn leibniz(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    let nvars = m[0][0].nvars();
    let mut total = MPoly::zero(nvars);
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut term = MPoly::one(nvars);
        for (i, &p) in perm.iter().enumerate() {
            term = &term * &m[i][p];
        }
        total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

fn poly_strategy() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u16..3, 0u16..3), -3i64..=3), 0..4).prop_map(|terms| {
        let mut p = MPoly::zero(2);
        for ((e0, e1), c) in terms {
            let m = MPoly::var(2, 0).pow(e0 as usize);
            let m = &m * &MPoly::var(2, 1).pow(e1 as usize);
            p = &p + &m.scale(&rat(c));
        }
        p
    })
}

fn run_prop<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        failure_persistence: None,
        ..Config::with_cases(cases)
    };
    TestRunner::new(config)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn oracle_suites() -> Outcome {
    run_prop(40, arrangement_strategy(3, 10), |a| lattice_matches_brute_force(&a))
        .map_err(|e| format!("lattice rank 3: {e}"))?;
    run_prop(30, arrangement_strategy(4, 9), |a| lattice_matches_brute_force(&a))
        .map_err(|e| format!("lattice rank 4: {e}"))?;
    for a in catalog_items().iter().filter(|a| a.len() <= 10) {
        lattice_matches_brute_force(a).map_err(|e| format!("{}: {e}", a.name().unwrap_or("?")))?;
    }

    run_prop(60, arrangement_strategy(3, 12), |a| circuits_match_rank_scan(&a))
        .map_err(|e| format!("circuits: {e}"))?;
    run_prop(30, arrangement_strategy(4, 12), |a| circuits_match_rank_scan(&a))
        .map_err(|e| format!("circuits rank 4: {e}"))?;

    let mut hilbert = 0;
    for a in catalog_items() {
        if let Some(exps) = free_exponents(&a) {
            for d in 0..=5 {
                let got = derivation_space(&a, d).len();
                let want = free_module_dim(&exps, a.dim(), d);
                ensure(got == want, || {
                    format!("{}: dim D_{d} = {got}, free module gives {want}", a.name().unwrap_or("?"))
                })?;
                hilbert += 1;
            }
        }
    }

    for n in 1..=4 {
        run_prop(50, prop::collection::vec(prop::collection::vec(poly_strategy(), n), n), |m| {
            prop_assert_eq!(poly_det(&m), leibniz(&m));
            Ok(())
        })
        .map_err(|e| format!("poly_det {n}x{n}: {e}"))?;
    }
    Ok(format!("lattice/Möbius/Poincaré, circuits, {hilbert} Hilbert values, poly_det 1x1..4x4 agree"))
}

// ---------------------------------------------------------------- criterion 8

fn quadratic_ideal() -> Outcome {
    let a = lookup("A8").unwrap();
    let s = minimal_generator_degrees(&a, 2);
    let theta = s
        .generators
        .iter()
        .zip(&s.min_gen_degrees)
        .find(|(_, &d)| d == 2)
        .map(|(g, _)| g.clone())
        .ok_or("A8 has no quadratic generator")?;
    let mut points = 0;
    for u in 0..a.dim() {
        for v in 0..a.dim() {
            if u == v {
                continue;
            }
            let r = quadratic_ideal_check(&a, &theta, (u, v)).map_err(|e| e.to_string())?;
            ensure(r.theta_is_logarithmic, || "quadratic generator not logarithmic".into())?;
            for c in &r.checks {
                ensure(c.vanishes, || {
                    format!("pair ({u},{v}), form {}: values {:?}", c.form_index + 1, c.values)
                })?;
                // recompute the generators' values independently of the flag
                ensure(c.values.iter().all(|x| x.is_zero()), || "nonzero value".into())?;
                ensure(c.point.iter().any(|x| x.abs() > Rational::zero()), || "zero point".into())?;
            }
            points += r.checks.len();
        }
    }
    ensure(points > 0, || "no applicable dual points".into())?;
    Ok(format!("{points} dual points across all ordered pairs lie on V(I_uv)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("1 catalog table", catalog_table),
        ("2 Poincaré polynomials", poincare_checks),
        ("3 (1,2,...,2) pipeline on SS22(3..6)", ss22_pipeline),
        ("4 rank-2 configuration scan", conjecture_scan),
        ("5 parametric family", parametric_family),
        ("6 formality", formality),
        ("7 oracle suites", oracle_suites),
        ("8 quadratic ideal on A8", quadratic_ideal),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
