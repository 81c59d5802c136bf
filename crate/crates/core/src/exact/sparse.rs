//! Sparse incremental row echelon form. The derivation solver builds systems
//! with a few thousand unknowns whose rows touch only a handful of columns.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::Rational;

/// Sparse row, entries sorted by column, no explicit zeros.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut d = vec![Rational::zero(); len];
    for (i, x) in v {
        d[*i] = x.clone();
    }
    d
}

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Fully reduces `v` against the stored rows; the remainder only has
    /// entries in non-pivot columns.
    pub fn reduce(&self, v: &[(usize, Rational)]) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = v.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((c, val)) = acc.pop_first() {
            match self.pivot_row.get(&c) {
                Some(&r) => {
                    for (cc, rv) in &self.rows[r][1..] {
                        let e = acc.entry(*cc).or_insert_with(Rational::zero);
                        *e -= &val * rv;
                        if e.is_zero() {
                            acc.remove(cc);
                        }
                    }
                }
                None => out.push((c, val)),
            }
        }
        out
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the row space. Returns the new pivot column, or `None`
    /// when `v` was already in the span.
    pub fn insert(&mut self, v: &[(usize, Rational)]) -> Option<usize> {
        let mut r = self.reduce(v);
        if r.is_empty() {
            return None;
        }
        let lead = r[0].1.clone();
        if !lead.is_one() {
            for (_, x) in r.iter_mut() {
                *x /= &lead;
            }
        }
        let p = r[0].0;
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(r);
        Some(p)
    }

    /// Brings the stored rows to reduced echelon form, sorted by pivot.
    pub fn into_reduced(mut self) -> ReducedEchelon {
        self.rows.sort_by_key(|r| r[0].0);
        let mut done = Echelon::new();
        let mut reduced: Vec<SparseVec> = vec![Vec::new(); self.rows.len()];
        for (idx, row) in self.rows.iter().enumerate().rev() {
            let mut tail = done.reduce(&row[1..]);
            let mut full = Vec::with_capacity(tail.len() + 1);
            full.push(row[0].clone());
            full.append(&mut tail);
            done.pivot_row.insert(full[0].0, done.rows.len());
            done.rows.push(full.clone());
            reduced[idx] = full;
        }
        ReducedEchelon { rows: reduced }
    }
}

#[derive(Clone, Debug)]
pub struct ReducedEchelon {
    rows: Vec<SparseVec>,
}

impl ReducedEchelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Null space basis of the system in `ncols` unknowns, free columns in
    /// increasing order with a unit entry in the free position.
    pub fn kernel_basis(&self, ncols: usize) -> Vec<SparseVec> {
        let mut is_pivot = vec![false; ncols];
        for r in &self.rows {
            is_pivot[r[0].0] = true;
        }
        // column -> list of (pivot, coefficient) for rows mentioning it
        let mut by_col: HashMap<usize, Vec<(usize, Rational)>> = HashMap::new();
        for r in &self.rows {
            let p = r[0].0;
            for (c, x) in &r[1..] {
                by_col.entry(*c).or_default().push((p, x.clone()));
            }
        }
        (0..ncols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v: SparseVec = by_col
                    .get(&f)
                    .map(|es| es.iter().map(|(p, x)| (*p, -x.clone())).collect())
                    .unwrap_or_default();
                v.push((f, Rational::one()));
                v.sort_by_key(|e| e.0);
                v
            })
            .collect()
    }
}

/// Kernel of a sparse system `rows · x = 0` in `ncols` unknowns.
pub fn sparse_kernel(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.into_reduced().kernel_basis(ncols)
}
