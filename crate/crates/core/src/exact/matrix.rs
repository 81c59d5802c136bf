use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_rational, Rational};

/// Dense rectangular matrix over the rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows<R: AsRef<[Rational]>>(cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| super::rat(x)).collect())
            .collect();
        Self::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            if !inv.is_one() {
                for j in c..m.cols {
                    let x = &m[(r, j)] * &inv;
                    m[(r, j)] = x;
                }
            }
            let pivot_row: Vec<Rational> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for (off, pv) in pivot_row.iter().enumerate() {
                    if pv.is_zero() {
                        continue;
                    }
                    let x = &m[(i, c + off)] - &f * pv;
                    m[(i, c + off)] = x;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space. Free columns are taken in increasing
    /// order, each basis vector carrying a 1 in its own free position.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Nonzero rows of the reduced echelon form: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        let rows: Vec<Vec<Rational>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        QMatrix::from_rows(self.cols, &rows)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    #[test]
    fn rref_identity_and_zero() {
        let id = QMatrix::identity(3);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2]));
        let z = QMatrix::zeros(2, 3);
        assert_eq!(z.rref(), (z.clone(), vec![]));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = QMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]]);
        assert_eq!(m.rank(), 2);
        // (1, -1, 1) is a kernel vector, checked by hand
        let v: Vec<Rational> = [1, -1, 1].iter().map(|&x| rat(x)).collect();
        assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn kernels() {
        assert!(QMatrix::identity(3).kernel_basis().is_empty());
        let m = QMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(m.kernel_basis(), vec![vec![rat(1), rat(1)]]);
        // columns x1, x2, x3, x1-x3, x2-x3
        let five = QMatrix::from_i64(&[&[1, 0, 0, 1, 0], &[0, 1, 0, 0, 1], &[0, 0, 1, -1, -1]]);
        let ker = five.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(five.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                let rows: Vec<Vec<Rational>> =
                    v.chunks(c).map(|ch| ch.iter().map(|&x| rat(x)).collect()).collect();
                QMatrix::from_rows(c, &rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let ker = m.kernel_basis();
            prop_assert_eq!(m.rank() + ker.len(), m.cols());
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            prop_assert_eq!(m.rref(), m.rref());
        }
    }
}
