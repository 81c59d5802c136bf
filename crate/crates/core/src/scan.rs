//! Exhaustive enumeration of abstract rank-2 configurations: n = 2k labels
//! covered by v four-point flats and u three-point flats, subject to the
//! counting constraints satisfied by free arrangements with exponents
//! (1,2,...,2,3), and classification of each configuration by three
//! elimination rules.
//!
//! A configuration is stored as an incidence matrix: one bitmask per label,
//! bit e set when the label lies on flat e (quads occupy the low v bits).
//! Two labelings give the same configuration iff their sorted row multisets
//! agree after permuting flats of equal size, which is what `canonical`
//! minimizes over.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::lattice::build_lattice;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    pub k: usize,
    pub n: usize,
    /// Four-label flats, 0-based labels, each sorted.
    pub quads: Vec<Vec<usize>>,
    /// Three-label flats.
    pub triples: Vec<Vec<usize>>,
}

fn label_str(i: usize) -> String {
    if i < 9 {
        (i + 1).to_string()
    } else {
        format!("({})", i + 1)
    }
}

fn flat_str(f: &[usize]) -> String {
    f.iter().map(|&i| label_str(i)).collect()
}

pub fn labels_str(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.flats().map(|f| flat_str(f)).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Configuration {
    pub fn new(k: usize, n: usize, mut quads: Vec<Vec<usize>>, mut triples: Vec<Vec<usize>>) -> Self {
        for f in quads.iter_mut().chain(triples.iter_mut()) {
            f.sort_unstable();
        }
        quads.sort();
        triples.sort();
        Configuration { k, n, quads, triples }
    }

    /// Parses flats written as digit strings with labels ≥ 10 in
    /// parentheses, e.g. `"15(10) 26(10) 379"`; four-label flats are quads.
    pub fn parse(k: usize, text: &str) -> Option<Self> {
        let mut quads = Vec::new();
        let mut triples = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let mut labels = Vec::new();
            let mut chars = tok.chars().peekable();
            while let Some(c) = chars.next() {
                let v: usize = if c == '(' {
                    let s: String = chars.by_ref().take_while(|&c| c != ')').collect();
                    s.parse().ok()?
                } else {
                    c.to_digit(10)? as usize
                };
                if v == 0 {
                    return None;
                }
                labels.push(v - 1);
            }
            match labels.len() {
                3 => triples.push(labels),
                4 => quads.push(labels),
                _ => return None,
            }
        }
        Some(Configuration::new(k, 2 * k, quads, triples))
    }

    /// The three- and four-hyperplane rank-2 flats of a concrete
    /// arrangement. Larger flats are dropped and no constraint is enforced.
    pub fn from_arrangement(a: &Arrangement) -> Self {
        let lat = build_lattice(a);
        let mut quads = Vec::new();
        let mut triples = Vec::new();
        for f in lat.level(2) {
            match f.size() {
                3 => triples.push(f.closure.clone()),
                4 => quads.push(f.closure.clone()),
                _ => {}
            }
        }
        Configuration::new(a.dim(), a.len(), quads, triples)
    }

    pub fn u(&self) -> usize {
        self.triples.len()
    }

    pub fn v(&self) -> usize {
        self.quads.len()
    }

    pub fn flats(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.quads.iter().chain(&self.triples)
    }

    pub fn u_i(&self) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for f in &self.triples {
            for &i in f {
                c[i] += 1;
            }
        }
        c
    }

    pub fn v_i(&self) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for f in &self.quads {
            for &i in f {
                c[i] += 1;
            }
        }
        c
    }

    /// Number of 3-dependencies through each label: one per triple, three
    /// per quad.
    pub fn m_i(&self) -> Vec<usize> {
        self.u_i().iter().zip(self.v_i()).map(|(u, v)| u + 3 * v).collect()
    }

    pub fn s(&self) -> usize {
        self.m_i().iter().filter(|&&m| m == 1).count()
    }

    /// All 3-dependencies: the triples and the four 3-subsets of each quad.
    pub fn dependencies(&self) -> Vec<Vec<usize>> {
        let mut out = self.triples.clone();
        for q in &self.quads {
            for skip in 0..4 {
                out.push(q.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &i)| i).collect());
            }
        }
        out.sort();
        out
    }

    fn flat_masks(&self) -> Vec<u64> {
        self.flats()
            .map(|f| f.iter().fold(0u64, |m, &i| m | (1 << i)))
            .collect()
    }

    /// Checks every constraint an enumerated configuration must satisfy.
    pub fn violations(&self) -> Vec<String> {
        let (k, n) = (self.k, self.n);
        let mut out = Vec::new();
        if n != 2 * k {
            out.push(format!("n = {n} != 2k"));
        }
        if self.u() + 3 * self.v() != k + 1 {
            out.push(format!("u + 3v = {} != k + 1", self.u() + 3 * self.v()));
        }
        if 5 * self.v() > k + 3 {
            out.push(format!("v = {} > (k+3)/5", self.v()));
        }
        let flats: Vec<&Vec<usize>> = self.flats().collect();
        for (a, f) in flats.iter().enumerate() {
            if f.iter().any(|&i| i >= n) {
                out.push(format!("flat {} has a label beyond n", flat_str(f)));
            }
            for g in &flats[a + 1..] {
                if f.iter().filter(|i| g.contains(i)).count() > 1 {
                    out.push(format!("flats {} and {} share two labels", flat_str(f), flat_str(g)));
                }
            }
        }
        let (ui, vi) = (self.u_i(), self.v_i());
        for i in 0..n {
            if ui[i] + vi[i] == 0 {
                out.push(format!("label {} lies on no flat", i + 1));
            }
            if 2 * ui[i] + 3 * vi[i] > 2 * k - 1 {
                out.push(format!("label {}: 2u_i + 3v_i > 2k - 1", i + 1));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    fn rows(&self) -> Vec<u32> {
        let mut rows = vec![0u32; self.n];
        for (e, f) in self.flats().enumerate() {
            for &i in f {
                rows[i] |= 1 << e;
            }
        }
        rows
    }

    fn from_rows(k: usize, v: usize, u: usize, rows: &[u32]) -> Self {
        let flat = |e: usize| -> Vec<usize> { (0..rows.len()).filter(|&i| rows[i] >> e & 1 == 1).collect() };
        Configuration::new(k, rows.len(), (0..v).map(flat).collect(), (v..v + u).map(flat).collect())
    }

    /// Representative of the isomorphism class: labels relabeled so that the
    /// incidence rows, under the best permutation of quads and of triples,
    /// form the lexicographically largest descending sequence.
    pub fn canonical(&self) -> Self {
        let (v, u) = (self.v(), self.u());
        let rows = self.rows();
        let best = canonical_rows(&rows, v, u);
        Configuration::from_rows(self.k, v, u, &best)
    }

    pub fn circuit_closure(&self, seed: &[usize]) -> Vec<usize> {
        let m = closure_mask(&self.flat_masks(), seed.iter().fold(0, |m, &i| m | 1 << i));
        (0..self.n).filter(|&i| m >> i & 1 == 1).collect()
    }

    /// Connected components of the hypergraph with labels as vertices and
    /// flats as edges.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let masks = self.flat_masks();
        let mut seen = 0u64;
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            loop {
                let grown = masks
                    .iter()
                    .filter(|&&f| f & comp != 0)
                    .fold(comp, |c, &f| c | f);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            seen |= comp;
            comps.push((0..self.n).filter(|&i| comp >> i & 1 == 1).collect());
        }
        comps
    }
}

fn closure_mask(flats: &[u64], mut known: u64) -> u64 {
    loop {
        let mut grown = known;
        for &f in flats {
            if (f & grown).count_ones() >= 2 {
                grown |= f;
            }
        }
        if grown == known {
            return known;
        }
        known = grown;
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn permute_rows(rows: &[u32], perm: &[usize], out: &mut Vec<u32>) {
    out.clear();
    out.extend(rows.iter().map(|&r| {
        let mut x = 0u32;
        let mut bits = r;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            x |= 1 << perm[b];
            bits &= bits - 1;
        }
        x
    }));
    out.sort_unstable_by(|a, b| b.cmp(a));
}

fn canonical_rows(rows: &[u32], v: usize, u: usize) -> Vec<u32> {
    let mut qp: Vec<usize> = (0..v).collect();
    let mut best: Option<Vec<u32>> = None;
    let mut buf = Vec::with_capacity(rows.len());
    loop {
        let mut tp: Vec<usize> = (v..v + u).collect();
        loop {
            let perm: Vec<usize> = qp.iter().chain(&tp).copied().collect();
            permute_rows(rows, &perm, &mut buf);
            if best.as_ref().is_none_or(|b| buf > *b) {
                best = Some(buf.clone());
            }
            if !next_permutation(&mut tp) {
                break;
            }
        }
        if !next_permutation(&mut qp) {
            break;
        }
    }
    best.unwrap_or_default()
}

/// (u, v) pairs allowed for rank k: u + 3v = k + 1 and 5v ≤ k + 3.
pub fn admissible_uv(k: usize) -> Vec<(usize, usize)> {
    (0..=(k + 1) / 3)
        .filter(|&v| 5 * v <= k + 3)
        .map(|v| (k + 1 - 3 * v, v))
        .collect()
}

struct Search<'a> {
    n: usize,
    candidates: &'a [u32],
    cap: Vec<u32>,
    /// shared[e]: flats already meeting flat e in some label.
    shared: Vec<u32>,
    rows: Vec<u32>,
    out: Vec<Vec<u32>>,
}

impl Search<'_> {
    fn fits(&self, mask: u32) -> bool {
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            if self.cap[e] == 0 || self.shared[e] & mask & !(1 << e) != 0 {
                return false;
            }
            bits &= bits - 1;
        }
        true
    }

    fn apply(&mut self, mask: u32, sign: bool) {
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            if sign {
                self.cap[e] -= 1;
                self.shared[e] |= mask & !(1 << e);
            } else {
                self.cap[e] += 1;
                self.shared[e] &= !mask;
            }
            bits &= bits - 1;
        }
    }

    fn run(&mut self, from: usize) {
        let left = self.n - self.rows.len();
        let remaining: u32 = self.cap.iter().sum();
        if left == 0 {
            if remaining == 0 {
                self.out.push(self.rows.clone());
            }
            return;
        }
        let width = self.cap.len() as u32;
        if remaining < left as u32 || remaining > left as u32 * width {
            return;
        }
        for ci in from..self.candidates.len() {
            let mask = self.candidates[ci];
            if !self.fits(mask) {
                continue;
            }
            self.apply(mask, true);
            self.rows.push(mask);
            // rows are non-increasing, so the same candidate may repeat
            self.run(ci);
            self.rows.pop();
            self.apply(mask, false);
        }
    }
}

/// Incidence rows for every labeled solution with the given (u, v), rows in
/// non-increasing order, grouped by first row so branches run in parallel.
fn raw_solutions(k: usize, u: usize, v: usize) -> Vec<Vec<u32>> {
    let n = 2 * k;
    let m = u + v;
    assert!(m < 32 && n <= 64);
    let quad_bits: u32 = (1u32 << v) - 1;
    let mut candidates: Vec<u32> = (1..1u32 << m)
        .filter(|&mask| {
            let q = (mask & quad_bits).count_ones() as usize;
            let t = (mask & !quad_bits).count_ones() as usize;
            2 * t + 3 * q < 2 * k
        })
        .collect();
    candidates.sort_unstable_by(|a, b| b.cmp(a));
    let cap: Vec<u32> = (0..m).map(|e| if e < v { 4 } else { 3 }).collect();
    (0..candidates.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut s = Search {
                n,
                candidates: &candidates,
                cap: cap.clone(),
                shared: vec![0; m],
                rows: vec![],
                out: vec![],
            };
            let mask = candidates[first];
            s.apply(mask, true);
            s.rows.push(mask);
            s.run(first);
            s.out
        })
        .collect()
}

/// Every configuration for rank k up to isomorphism, in canonical form and
/// sorted.
pub fn enumerate_configurations(k: usize) -> Vec<Configuration> {
    assert!(k >= 3, "rank must be at least 3");
    let mut all = BTreeSet::new();
    for (u, v) in admissible_uv(k) {
        let canon: BTreeSet<Vec<u32>> = raw_solutions(k, u, v)
            .par_iter()
            .map(|rows| canonical_rows(rows, v, u))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        all.extend(canon.iter().map(|rows| Configuration::from_rows(k, v, u, rows)));
    }
    all.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// s ≥ u + 1: two hyperplanes share a unique 3-dependency coming from a
    /// three-point flat, which yields a modular coatom.
    SupersolvableByS,
    /// A (k-1)-subset whose circuit closure is every label, forcing rank ≤ k-1.
    RankDeficient { seed: Vec<usize> },
    /// The flat hypergraph is disconnected.
    Reducible { components: usize },
    /// Two labels lying in exactly one 3-dependency share a three-label
    /// flat. This is the situation the s ≥ u + 1 count guarantees by
    /// pigeonhole; it is checked only for configurations the three rules
    /// above leave open.
    LonelyPair { flat: Vec<usize> },
    Open,
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::SupersolvableByS => "supersolvable-by-s",
            Verdict::RankDeficient { .. } => "rank-deficient",
            Verdict::Reducible { .. } => "reducible",
            Verdict::LonelyPair { .. } => "lonely-pair",
            Verdict::Open => "open",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::SupersolvableByS => f.write_str("supersolvable (s >= u+1)"),
            Verdict::RankDeficient { seed } => write!(f, "rank-deficient, seed {}", labels_str(seed)),
            Verdict::Reducible { components } => {
                write!(f, "reducible, {components} components (paper-style elimination)")
            }
            Verdict::LonelyPair { flat } => write!(
                f,
                "supersolvable (two labels with m_i = 1 share flat {}; s < u+1)",
                flat_str(flat)
            ),
            Verdict::Open => f.write_str("OPEN"),
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    for i in (0..r).rev() {
        if c[i] < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The lexicographically first (k-1)-subset whose closure is every label.
pub fn rank_deficient_seed(cfg: &Configuration) -> Option<Vec<usize>> {
    let r = cfg.k - 1;
    if r > cfg.n {
        return None;
    }
    let masks = cfg.flat_masks();
    let all = if cfg.n == 64 { u64::MAX } else { (1u64 << cfg.n) - 1 };
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        let seed = c.iter().fold(0u64, |m, &i| m | 1 << i);
        if closure_mask(&masks, seed) == all {
            return Some(c);
        }
        if !next_combination(&mut c, cfg.n) {
            return None;
        }
    }
}

/// Applies, in order: the s-count rule, the closure rule, the connectivity
/// rule, then the lonely-pair rule; returns the first that fires.
pub fn classify(cfg: &Configuration) -> Verdict {
    if cfg.s() > cfg.u() {
        return Verdict::SupersolvableByS;
    }
    if let Some(seed) = rank_deficient_seed(cfg) {
        return Verdict::RankDeficient { seed };
    }
    let comps = cfg.components().len();
    if comps > 1 {
        return Verdict::Reducible { components: comps };
    }
    match lonely_pair_flat(cfg) {
        Some(flat) => Verdict::LonelyPair { flat },
        None => Verdict::Open,
    }
}

/// A three-label flat containing two labels with m_i = 1.
pub fn lonely_pair_flat(cfg: &Configuration) -> Option<Vec<usize>> {
    let m = cfg.m_i();
    cfg.triples
        .iter()
        .find(|t| t.iter().filter(|&&i| m[i] == 1).count() >= 2)
        .cloned()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedConfiguration {
    pub configuration: Configuration,
    pub u: usize,
    pub v: usize,
    pub s: usize,
    pub verdict: Verdict,
}

impl fmt::Display for ClassifiedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  (u={}, v={}, s={})  {}",
            self.configuration, self.u, self.v, self.s, self.verdict
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub k: usize,
    pub admissible: Vec<(usize, usize)>,
    pub total: usize,
    pub supersolvable_by_s: usize,
    pub rank_deficient: usize,
    pub reducible: usize,
    pub lonely_pair: usize,
    pub open: usize,
    pub classes: Vec<ClassifiedConfiguration>,
}

impl ScanSummary {
    pub fn open_classes(&self) -> impl Iterator<Item = &ClassifiedConfiguration> {
        self.classes.iter().filter(|c| c.verdict == Verdict::Open)
    }

    /// Classes eliminated only by the disconnectedness rule.
    pub fn reducible_classes(&self) -> impl Iterator<Item = &ClassifiedConfiguration> {
        self.classes.iter().filter(|c| matches!(c.verdict, Verdict::Reducible { .. }))
    }

    /// Open count when only the s-count, closure and connectivity rules are
    /// applied.
    pub fn open_without_pair_rule(&self) -> usize {
        self.open + self.lonely_pair
    }

    /// Looks up the class of a configuration given in any labeling.
    pub fn find(&self, cfg: &Configuration) -> Option<&ClassifiedConfiguration> {
        let c = cfg.canonical();
        self.classes.iter().find(|x| x.configuration == c)
    }
}

pub fn scan(k: usize) -> ScanSummary {
    let configs = enumerate_configurations(k);
    let classes: Vec<ClassifiedConfiguration> = configs
        .par_iter()
        .map(|c| ClassifiedConfiguration {
            u: c.u(),
            v: c.v(),
            s: c.s(),
            verdict: classify(c),
            configuration: c.clone(),
        })
        .collect();
    let count = |kind: &str| classes.iter().filter(|c| c.verdict.kind() == kind).count();
    ScanSummary {
        k,
        admissible: admissible_uv(k),
        total: classes.len(),
        supersolvable_by_s: count("supersolvable-by-s"),
        rank_deficient: count("rank-deficient"),
        reducible: count("reducible"),
        lonely_pair: count("lonely-pair"),
        open: count("open"),
        classes,
    }
}
