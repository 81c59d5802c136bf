//! Sparse multivariate polynomials over the rationals in graded
//! lexicographic term order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{fmt_rational, is_negative, Rational};
use crate::error::{Error, Result};

/// Exponent vector. Ordered by total degree, then lexicographically with
/// `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u16>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    /// All monomials of total degree `d` in `nvars` variables, ascending.
    pub fn all_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
        fn rec(nvars: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if cur.len() + 1 == nvars {
                cur.push(left as u16);
                out.push(Monomial(cur.clone()));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e as u16);
                rec(nvars, left - e, cur, out);
                cur.pop();
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        rec(nvars, d, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rational::one());
        p
    }

    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.0.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x.clone())).collect(),
        }
    }

    pub fn mul_var(&self, i: usize) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, x)| (t.times_var(i), x.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: usize) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Replaces variable `var` by `repl` (a polynomial in the same ring).
    pub fn substitute(&self, var: usize, repl: &MPoly) -> MPoly {
        let mut powers: Vec<MPoly> = vec![MPoly::one(self.nvars)];
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * repl;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[var] = 0;
            for (pm, pc) in &powers[e].terms {
                out.add_term(pm.mul(&rest), pc * c);
            }
        }
        out
    }

    /// Exact quotient by the variable `i`, or `None` if some term misses it.
    pub fn div_var(&self, i: usize) -> Option<MPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                return None;
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            terms.insert(Monomial(e), c.clone());
        }
        Some(MPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Coefficients of a homogeneous linear polynomial.
    pub fn linear_coefficients(&self) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.nvars];
        for (m, c) in &self.terms {
            if m.degree() != 1 {
                return None;
            }
            let i = m.0.iter().position(|&e| e == 1).unwrap();
            v[i] = c.clone();
        }
        Some(v)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

/// Default variable names: `x, y, z` up to three variables, `x1..xk` beyond.
pub fn default_var_names(k: usize) -> Vec<String> {
    if k <= 3 {
        ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MPoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.names[i], e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.nvars);
        write!(f, "{}", self.display_with(&names))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

/// True iff the linear form with coefficient vector `form` divides `p`.
///
/// Solves the form for its first variable with nonzero coefficient,
/// substitutes into `p` and tests for the zero polynomial.
pub fn divisible_by_linear(p: &MPoly, form: &[Rational]) -> Result<bool> {
    let Some(pivot) = form.iter().position(|c| !c.is_zero()) else {
        return Err(Error::ZeroLinearForm);
    };
    if form.len() != p.nvars {
        return Err(Error::DimensionMismatch {
            expected: p.nvars,
            found: form.len(),
        });
    }
    Ok(p.substitute(pivot, &pivot_solution(form, pivot)).is_zero())
}

/// The polynomial `x_pivot` equals on the hyperplane `form = 0`.
pub fn pivot_solution(form: &[Rational], pivot: usize) -> MPoly {
    let lead = &form[pivot];
    let mut repl = MPoly::zero(form.len());
    for (j, c) in form.iter().enumerate() {
        if j != pivot && !c.is_zero() {
            repl.add_term(Monomial::var(form.len(), j), -(c / lead));
        }
    }
    repl
}

/// Determinant of a square polynomial matrix by cofactor expansion along
/// rows, memoized on the set of remaining columns. Division free.
pub fn poly_det(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    assert!(n < 32, "matrix too large for cofactor expansion");
    let nvars = m
        .iter()
        .flatten()
        .next()
        .map_or(0, MPoly::nvars);
    if n == 0 {
        return MPoly::one(nvars);
    }
    let mut memo: HashMap<u32, MPoly> = HashMap::new();
    det_rows(m, 0, (1u32 << n) - 1, nvars, &mut memo)
}

fn det_rows(
    m: &[Vec<MPoly>],
    row: usize,
    cols: u32,
    nvars: usize,
    memo: &mut HashMap<u32, MPoly>,
) -> MPoly {
    if cols == 0 {
        return MPoly::one(nvars);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = MPoly::zero(nvars);
    let mut sign_positive = true;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let minor = det_rows(m, row + 1, cols & !(1 << c), nvars, memo);
            if !minor.is_zero() {
                let t = entry * &minor;
                acc = if sign_positive { &acc + &t } else { &acc - &t };
            }
        }
        sign_positive = !sign_positive;
    }
    memo.insert(cols, acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    fn x(k: usize, i: usize) -> MPoly {
        MPoly::var(k, i)
    }

    fn lin(c: &[i64]) -> MPoly {
        MPoly::linear(&c.iter().map(|&v| rat(v)).collect::<Vec<_>>())
    }

    /// Leibniz expansion over all permutations.
    fn leibniz(m: &[Vec<MPoly>]) -> MPoly {
        let n = m.len();
        let nvars = m[0][0].nvars();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = MPoly::zero(nvars);
        permute(&mut perm, 0, &mut |p| {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let mut t = MPoly::one(nvars);
            for (i, &pi) in p.iter().enumerate() {
                t = &t * &m[i][pi];
            }
            total = if inversions % 2 == 0 { &total + &t } else { &total - &t };
        });
        total
    }

    fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
        if i == p.len() {
            f(p);
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            permute(p, i + 1, f);
            p.swap(i, j);
        }
    }

    /// Long division by a linear form with respect to its pivot variable.
    fn long_division_remainder(p: &MPoly, form: &[Rational]) -> MPoly {
        let k = p.nvars();
        let pivot = form.iter().position(|c| !c.is_zero()).unwrap();
        let divisor = MPoly::linear(form);
        let lead = form[pivot].clone();
        let mut rem = p.clone();
        loop {
            // highest term containing the pivot variable
            let t = rem
                .terms()
                .rev()
                .find(|(m, _)| m.exponents()[pivot] > 0)
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = t else { break };
            let mut e = m.exponents().to_vec();
            e[pivot] -= 1;
            let q = MPoly::monomial(Monomial::from_exponents(e), c / &lead);
            rem = &rem - &(&q * &divisor);
            assert_eq!(rem.nvars(), k);
        }
        rem
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exponents(vec![2, 0, 0]);
        let b = Monomial::from_exponents(vec![1, 1, 0]);
        let c = Monomial::from_exponents(vec![0, 0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(6, 6).len(), 462);
    }

    #[test]
    fn det_examples() {
        let k = 3;
        let z = MPoly::zero(k);
        let diag = vec![
            vec![x(k, 0), z.clone(), z.clone()],
            vec![z.clone(), x(k, 1), z.clone()],
            vec![z.clone(), z.clone(), x(k, 2)],
        ];
        let xyz = &(&x(k, 0) * &x(k, 1)) * &x(k, 2);
        assert_eq!(poly_det(&diag), xyz);

        let same = vec![
            vec![x(k, 0), x(k, 0), lin(&[1, 1, 0])],
            vec![x(k, 1), x(k, 1), z.clone()],
            vec![lin(&[0, 2, 1]), lin(&[0, 2, 1]), x(k, 2)],
        ];
        assert!(poly_det(&same).is_zero());

        // [[x, 0], [y, lambda (x+y) y]] with lambda = 3/2
        let k = 2;
        let lambda = ratio(3, 2);
        let xy = lin(&[1, 1]);
        let m = vec![
            vec![x(k, 0), MPoly::zero(k)],
            vec![x(k, 1), (&xy * &x(k, 1)).scale(&lambda)],
        ];
        let expected = (&(&xy * &x(k, 0)) * &x(k, 1)).scale(&lambda);
        assert_eq!(poly_det(&m), expected);
    }

    #[test]
    fn divisibility_examples() {
        let k = 2;
        let p = &(&x(k, 0) * &x(k, 0)) + &(&x(k, 0) * &x(k, 1));
        assert!(divisible_by_linear(&p, &[rat(1), rat(0)]).unwrap());
        let q = &(&x(k, 0) * &x(k, 0)) + &(&x(k, 1) * &x(k, 1));
        assert!(!divisible_by_linear(&q, &[rat(1), rat(-1)]).unwrap());
        let r = &lin(&[1, 1, -1]) * &lin(&[1, 0, 1]);
        assert!(divisible_by_linear(&r, &[rat(1), rat(1), rat(-1)]).unwrap());
        assert_eq!(
            divisible_by_linear(&r, &[rat(0), rat(0), rat(0)]),
            Err(Error::ZeroLinearForm)
        );
    }

    #[test]
    fn substitution_and_eval() {
        let k = 2;
        let q = &(&x(k, 0) * &x(k, 0)) + &(&x(k, 1) * &x(k, 1));
        let s = q.substitute(0, &x(k, 1));
        assert_eq!(s, (&x(k, 1) * &x(k, 1)).scale(&rat(2)));
        assert_eq!(q.evaluate(&[rat(1), rat(2)]), rat(5));
        assert_eq!(format!("{}", &q - &lin(&[0, 3])), "x^2 + y^2 - 3*y");
    }

    fn small_poly(k: usize) -> impl Strategy<Value = MPoly> {
        prop::collection::vec((0u16..3, 0u16..3, -2i64..3), 0..4).prop_map(move |ts| {
            let mut p = MPoly::zero(k);
            for (a, b, c) in ts {
                let mut e = vec![0u16; k];
                e[0] = a.min(2);
                if k > 1 {
                    e[1] = b.min(2 - e[0]);
                }
                p.add_term(Monomial::from_exponents(e), rat(c));
            }
            p
        })
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<MPoly>>> {
        (1usize..5).prop_flat_map(|n| {
            prop::collection::vec(small_poly(3), n * n)
                .prop_map(move |v| v.chunks(n).map(|c| c.to_vec()).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn det_matches_leibniz(m in small_matrix()) {
            prop_assert_eq!(poly_det(&m), leibniz(&m));
        }

        #[test]
        fn divisibility_matches_long_division(
            p in small_poly(3),
            f in prop::collection::vec(-2i64..3, 3),
            g in prop::collection::vec(-2i64..3, 3),
            multiply in any::<bool>(),
        ) {
            prop_assume!(f.iter().any(|&c| c != 0));
            let form: Vec<Rational> = f.iter().map(|&c| rat(c)).collect();
            let p = if multiply { &(&p * &lin(&g)) * &MPoly::linear(&form) } else { &p * &lin(&g) };
            let by_subst = divisible_by_linear(&p, &form).unwrap();
            let by_division = long_division_remainder(&p, &form).is_zero();
            prop_assert_eq!(by_subst, by_division);
        }
    }
}
