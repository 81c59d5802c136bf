//! Intersection lattice, Möbius function, Poincaré polynomial, modular
//! elements and the supersolvability decision.
//!
//! Flats are identified by their closure (the sorted set of hyperplanes
//! containing them). Subspaces are never compared directly; every
//! containment question reduces to closures and ranks of form sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::exact::{QMatrix, Rational};

/// An element of L(A).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    /// Reduced echelon basis of the span of the forms vanishing on the flat.
    pub basis: QMatrix,
    pub rank: usize,
    pub closure: Vec<usize>,
    mask: Vec<u64>,
}

impl Flat {
    fn new(basis: QMatrix, closure: Vec<usize>, n: usize) -> Self {
        let mut mask = vec![0u64; n.div_ceil(64).max(1)];
        for &i in &closure {
            mask[i / 64] |= 1 << (i % 64);
        }
        Flat {
            rank: basis.rows(),
            basis,
            closure,
            mask,
        }
    }

    pub fn size(&self) -> usize {
        self.closure.len()
    }

    pub fn contains_hyperplane(&self, i: usize) -> bool {
        self.mask[i / 64] & (1 << (i % 64)) != 0
    }

    /// Closure inclusion: `self` lies below `other` in L(A) (as subspaces,
    /// `other ⊆ self`).
    pub fn is_below(&self, other: &Flat) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }
}

fn in_row_space(basis: &QMatrix, v: &[Rational]) -> bool {
    // basis is in reduced echelon form
    let mut r = v.to_vec();
    for i in 0..basis.rows() {
        let row = basis.row(i);
        let p = row.iter().position(|c| !c.is_zero()).expect("nonzero row");
        if r[p].is_zero() {
            continue;
        }
        let f = r[p].clone();
        for (x, b) in r.iter_mut().zip(row) {
            if !b.is_zero() {
                *x -= &f * b;
            }
        }
    }
    r.iter().all(|x| x.is_zero())
}

/// Integer polynomial in one variable `t`, coefficients by ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly(pub Vec<i64>);

impl IntPoly {
    pub fn one() -> Self {
        IntPoly(vec![1])
    }

    fn trim(mut self) -> Self {
        while self.0.len() > 1 && *self.0.last().unwrap() == 0 {
            self.0.pop();
        }
        self
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly(out).trim()
    }

    /// ∏ (1 + e t)
    pub fn from_exponents(exps: &[usize]) -> IntPoly {
        exps.iter()
            .fold(IntPoly::one(), |acc, &e| acc.mul(&IntPoly(vec![1, e as i64])))
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, &c) in self.0.iter().enumerate() {
            if c == 0 && !(first && d + 1 == self.0.len()) {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match d {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "t")?,
                1 => write!(f, "{a}t")?,
                _ if a == 1 => write!(f, "t^{d}")?,
                _ => write!(f, "{a}t^{d}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Counts of rank-2 flats by closure size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank2Profile {
    pub u: usize,
    pub v: usize,
    pub histogram: BTreeMap<usize, usize>,
}

/// A chain V = X_0 < X_1 < ... < X_r of modular flats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularChain {
    pub flats: Vec<Flat>,
    pub block_sizes: Vec<usize>,
}

impl ModularChain {
    /// Block sizes sorted ascending; for a supersolvable arrangement these
    /// are its exponents.
    pub fn exponents(&self) -> Vec<usize> {
        let mut e = self.block_sizes.clone();
        e.sort_unstable();
        e
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    dim: usize,
    n: usize,
    forms: Vec<Vec<Rational>>,
    flats: Vec<Flat>,
    levels: Vec<std::ops::Range<usize>>,
    mobius: Vec<i64>,
    index: HashMap<Vec<usize>, usize>,
    covers: Vec<Vec<usize>>,
}

impl IntersectionLattice {
    pub fn build(a: &Arrangement) -> Self {
        let n = a.len();
        let dim = a.dim();
        let forms: Vec<Vec<Rational>> = a.forms().iter().map(|f| f.coeffs().to_vec()).collect();
        let mut flats = vec![Flat::new(QMatrix::zeros(0, dim), vec![], n)];
        #[allow(clippy::single_range_in_vec_init)]
        let mut levels = vec![0..1];
        let mut index = HashMap::new();
        index.insert(Vec::new(), 0);
        let top_rank = a.rank();
        for _ in 0..top_rank {
            let prev = levels.last().unwrap().clone();
            let mut next: BTreeMap<Vec<usize>, QMatrix> = BTreeMap::new();
            for fi in prev {
                for h in 0..n {
                    if flats[fi].contains_hyperplane(h) {
                        continue;
                    }
                    let row = QMatrix::from_rows(dim, &[forms[h].as_slice()]);
                    let basis = flats[fi].basis.vstack(&row).row_space_basis();
                    let closure: Vec<usize> =
                        (0..n).filter(|&j| in_row_space(&basis, &forms[j])).collect();
                    next.entry(closure).or_insert(basis);
                }
            }
            let start = flats.len();
            for (closure, basis) in next {
                index.insert(closure.clone(), flats.len());
                flats.push(Flat::new(basis, closure, n));
            }
            levels.push(start..flats.len());
        }

        let mut mobius = vec![0i64; flats.len()];
        mobius[0] = 1;
        for (r, level) in levels.iter().enumerate().skip(1) {
            for y in level.clone() {
                let mut s = 0;
                for lower in &levels[..r] {
                    for z in lower.clone() {
                        if flats[z].is_below(&flats[y]) {
                            s += mobius[z];
                        }
                    }
                }
                mobius[y] = -s;
            }
        }

        let mut covers = vec![Vec::new(); flats.len()];
        for r in 0..levels.len().saturating_sub(1) {
            for x in levels[r].clone() {
                for y in levels[r + 1].clone() {
                    if flats[x].is_below(&flats[y]) {
                        covers[x].push(y);
                    }
                }
            }
        }

        IntersectionLattice {
            dim,
            n,
            forms,
            flats,
            levels,
            mobius,
            index,
            covers,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.n
    }

    /// Rank of the arrangement (the top flat's rank).
    pub fn rank(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, i: usize) -> &Flat {
        &self.flats[i]
    }

    /// Flats of rank `r`; empty above the rank of the arrangement.
    pub fn level(&self, r: usize) -> &[Flat] {
        &self.flats[self.level_indices(r)]
    }

    pub fn level_indices(&self, r: usize) -> std::ops::Range<usize> {
        self.levels.get(r).cloned().unwrap_or(0..0)
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn mobius(&self, i: usize) -> i64 {
        self.mobius[i]
    }

    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn top(&self) -> usize {
        self.levels.last().unwrap().start
    }

    pub fn index_of(&self, closure: &[usize]) -> Option<usize> {
        self.index.get(closure).copied()
    }

    /// Rank of the span of the given forms.
    pub fn rank_of(&self, indices: &[usize]) -> usize {
        let rows: Vec<&[Rational]> = indices.iter().map(|&i| self.forms[i].as_slice()).collect();
        QMatrix::from_rows(self.dim, &rows).rank()
    }

    /// All hyperplanes whose form lies in the span of the given ones.
    pub fn closure_of(&self, indices: &[usize]) -> Vec<usize> {
        let rows: Vec<&[Rational]> = indices.iter().map(|&i| self.forms[i].as_slice()).collect();
        let basis = QMatrix::from_rows(self.dim, &rows).row_space_basis();
        (0..self.n)
            .filter(|&j| in_row_space(&basis, &self.forms[j]))
            .collect()
    }

    pub fn poincare_polynomial(&self) -> IntPoly {
        let mut coeffs = vec![0i64; self.levels.len()];
        for (r, level) in self.levels.iter().enumerate() {
            let s: i64 = level.clone().map(|i| self.mobius[i]).sum();
            coeffs[r] = if r % 2 == 0 { s } else { -s };
        }
        IntPoly(coeffs)
    }

    pub fn rank2_profile(&self) -> Rank2Profile {
        let mut histogram = BTreeMap::new();
        if self.levels.len() > 2 {
            for f in self.level(2) {
                *histogram.entry(f.size()).or_insert(0) += 1;
            }
        }
        Rank2Profile {
            u: histogram.get(&3).copied().unwrap_or(0),
            v: histogram.get(&4).copied().unwrap_or(0),
            histogram,
        }
    }

    /// Modular-pair test r(X) + r(Y) = r(X ∨ Y) + r(X ∧ Y). The subspace sum
    /// X + Y is cut out by the forms common to both closures, so it belongs
    /// to L(A) exactly when those forms span the full intersection of the
    /// two annihilator spaces.
    fn modular_pair(&self, x: usize, y: usize) -> bool {
        let fx = &self.flats[x];
        let fy = &self.flats[y];
        if fx.is_below(fy) || fy.is_below(fx) {
            return true;
        }
        let meet_rank = {
            let common: Vec<usize> = fx
                .closure
                .iter()
                .copied()
                .filter(|&i| fy.contains_hyperplane(i))
                .collect();
            match self.index.get(&common) {
                Some(&i) => self.flats[i].rank,
                None => self.rank_of(&common),
            }
        };
        let join_rank = fx.basis.vstack(&fy.basis).rank();
        fx.rank + fy.rank == join_rank + meet_rank
    }

    /// X is modular in the interval [V, top].
    fn is_modular_within(&self, x: usize, top: usize) -> bool {
        let t = &self.flats[top];
        self.flats
            .iter()
            .enumerate()
            .filter(|(_, y)| y.is_below(t))
            .all(|(y, _)| self.modular_pair(x, y))
    }

    pub fn is_modular_index(&self, x: usize) -> bool {
        self.is_modular_within(x, self.top())
    }

    pub fn is_modular(&self, x: &Flat) -> bool {
        let i = self.index_of(&x.closure).expect("flat of this lattice");
        self.is_modular_index(i)
    }

    /// Modular flats of rank r(A) - 1, with closure sizes.
    pub fn modular_coatoms(&self) -> Vec<(Flat, usize)> {
        let r = self.rank();
        if r == 0 {
            return vec![];
        }
        self.level_indices(r - 1)
            .filter(|&i| self.is_modular_index(i))
            .map(|i| (self.flats[i].clone(), self.flats[i].size()))
            .collect()
    }

    /// A maximal chain of modular flats, if L(A) is supersolvable.
    pub fn modular_chain(&self) -> Option<ModularChain> {
        let mut memo = HashMap::new();
        let idx = self.chain_below(self.top(), &mut memo)?;
        let flats: Vec<Flat> = idx.iter().map(|&i| self.flats[i].clone()).collect();
        let block_sizes = flats.windows(2).map(|w| w[1].size() - w[0].size()).collect();
        Some(ModularChain { flats, block_sizes })
    }

    /// Checks a chain independently: ranks 0, 1, ..., r(A), each flat below
    /// the next, and every flat modular in the whole lattice.
    pub fn is_valid_modular_chain(&self, chain: &ModularChain) -> bool {
        chain.flats.len() == self.rank() + 1
            && chain.flats.iter().enumerate().all(|(i, f)| f.rank == i && self.is_modular(f))
            && chain.flats.windows(2).all(|w| w[0].is_below(&w[1]))
            && chain.flats.last().map(|f| f.size()) == Some(self.num_hyperplanes())
    }

    fn chain_below(
        &self,
        top: usize,
        memo: &mut HashMap<usize, Option<Vec<usize>>>,
    ) -> Option<Vec<usize>> {
        if let Some(c) = memo.get(&top) {
            return c.clone();
        }
        let t = &self.flats[top];
        let result = match t.rank {
            0 => Some(vec![top]),
            1 => Some(vec![0, top]),
            2 => {
                let h = self.index_of(&[t.closure[0]]).expect("hyperplane flat");
                Some(vec![0, h, top])
            }
            r => {
                let mut candidates: Vec<usize> = self
                    .level_indices(r - 1)
                    .filter(|&x| self.flats[x].is_below(t))
                    .collect();
                candidates.sort_by_key(|&x| std::cmp::Reverse(self.flats[x].size()));
                candidates
                    .into_iter()
                    .filter(|&x| self.is_modular_within(x, top))
                    .find_map(|x| self.chain_below(x, memo))
                    .map(|mut c| {
                        c.push(top);
                        c
                    })
            }
        };
        memo.insert(top, result.clone());
        result
    }
}

pub fn build_lattice(a: &Arrangement) -> IntersectionLattice {
    IntersectionLattice::build(a)
}

/// Supersolvability with a witnessing maximal modular chain.
pub fn is_supersolvable(a: &Arrangement) -> (bool, Option<ModularChain>) {
    let chain = IntersectionLattice::build(a).modular_chain();
    (chain.is_some(), chain)
}

/// A_X: the hyperplanes containing X, in ambient coordinates.
pub fn restriction_subarrangement(a: &Arrangement, x: &Flat) -> Arrangement {
    a.subarrangement(&x.closure)
}
