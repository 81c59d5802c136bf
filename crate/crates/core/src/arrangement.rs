//! Central hyperplane arrangements over the rationals.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::poly::default_var_names;
use crate::exact::{fmt_rational, normalize_first_nonzero, parse_rational, rat, MPoly, QMatrix, Rational};

/// A nonzero linear form scaled so that its first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm(Vec<Rational>);

impl LinearForm {
    pub fn new(mut coeffs: Vec<Rational>) -> Result<Self> {
        if !normalize_first_nonzero(&mut coeffs) {
            return Err(Error::ZeroLinearForm);
        }
        Ok(LinearForm(coeffs))
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// The coordinate form `x_i` in `dim` variables.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        LinearForm(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    /// Index of the first nonzero coefficient (which equals 1).
    pub fn pivot(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).expect("nonzero form")
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    pub fn is_coordinate(&self, i: usize) -> bool {
        *self == LinearForm::coordinate(self.dim(), i)
    }

    pub fn to_poly(&self) -> MPoly {
        MPoly::linear(&self.0)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a LinearForm, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0.to_poly().display_with(self.1))
            }
        }
        D(self, names)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl Serialize for LinearForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(fmt_rational).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|t| parse_rational(t).ok_or_else(|| serde::de::Error::custom(format!("bad rational {t}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        LinearForm::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// A simple central arrangement: distinct hyperplanes through the origin
/// of a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    forms: Vec<LinearForm>,
    name: Option<String>,
}

impl Arrangement {
    pub fn new(dim: usize, forms: Vec<LinearForm>) -> Result<Self> {
        let mut seen: HashMap<&LinearForm, usize> = HashMap::new();
        for (i, f) in forms.iter().enumerate() {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.dim(),
                });
            }
            if let Some(&first) = seen.get(f) {
                return Err(Error::DuplicateForm {
                    line: i + 1,
                    first: first + 1,
                });
            }
            seen.insert(f, i);
        }
        Ok(Self {
            dim,
            forms,
            name: None,
        })
    }

    pub fn from_i64(dim: usize, rows: &[&[i64]]) -> Result<Self> {
        let forms = rows
            .iter()
            .map(|r| LinearForm::from_i64(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, forms)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Parses the `.arr` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::MissingHeader)?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let [k, n] = head[..] else {
            return Err(Error::MissingHeader);
        };
        let (Ok(k), Ok(n)) = (k.parse::<usize>(), n.parse::<usize>()) else {
            return Err(Error::MissingHeader);
        };
        let mut forms: Vec<LinearForm> = Vec::with_capacity(n);
        let mut seen: HashMap<LinearForm, usize> = HashMap::new();
        let mut count = 0;
        for (line, body) in lines {
            count += 1;
            if count > n {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks.len() != k {
                return Err(Error::ColumnCount {
                    line,
                    expected: k,
                    found: toks.len(),
                });
            }
            let coeffs = toks
                .iter()
                .map(|t| {
                    parse_rational(t).ok_or_else(|| Error::MalformedRational {
                        line,
                        token: t.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let form = LinearForm::new(coeffs).map_err(|_| Error::ZeroForm { line })?;
            if let Some(&first) = seen.get(&form) {
                return Err(Error::DuplicateForm {
                    line,
                    first: first + 1,
                });
            }
            seen.insert(form.clone(), forms.len());
            forms.push(form);
        }
        if count != n {
            return Err(Error::RowCount {
                expected: n,
                found: count,
            });
        }
        Self::new(k, forms)
    }

    /// Renders the `.arr` format; `parse` reproduces the arrangement.
    pub fn to_arr(&self) -> String {
        let mut s = String::new();
        if let Some(name) = &self.name {
            s.push_str(&format!("# {name}\n"));
        }
        s.push_str(&format!("{} {}\n", self.dim, self.forms.len()));
        for f in &self.forms {
            let row: Vec<String> = f.coeffs().iter().map(fmt_rational).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &LinearForm {
        &self.forms[i]
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn var_names(&self) -> Vec<String> {
        default_var_names(self.dim)
    }

    /// The n×k coefficient matrix, one row per form.
    pub fn form_matrix(&self) -> QMatrix {
        let rows: Vec<&[Rational]> = self.forms.iter().map(|f| f.coeffs()).collect();
        QMatrix::from_rows(self.dim, &rows)
    }

    pub fn rank(&self) -> usize {
        self.form_matrix().rank()
    }

    pub fn rank_of(&self, indices: &[usize]) -> usize {
        let rows: Vec<&[Rational]> = indices.iter().map(|&i| self.forms[i].coeffs()).collect();
        QMatrix::from_rows(self.dim, &rows).rank()
    }

    pub fn defining_polynomial(&self) -> MPoly {
        self.forms
            .iter()
            .fold(MPoly::one(self.dim), |acc, f| &acc * &f.to_poly())
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.dim
    }

    /// Irreducible iff the only linear logarithmic derivations are the
    /// multiples of the Euler derivation.
    pub fn is_irreducible(&self) -> Result<bool> {
        let rank = self.rank();
        if rank != self.dim {
            return Err(Error::NotEssential {
                rank,
                dim: self.dim,
            });
        }
        Ok(crate::derivations::derivation_space(self, 1).len() == 1)
    }

    /// Groups of form indices that are connected through shared variables.
    pub fn coordinate_components(&self) -> Vec<Vec<usize>> {
        let n = self.forms.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        let mut owner: Vec<Option<usize>> = vec![None; self.dim];
        for (i, f) in self.forms.iter().enumerate() {
            for v in f.support() {
                match owner[v] {
                    None => owner[v] = Some(i),
                    Some(j) => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            let g = *slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(i);
        }
        groups
    }

    /// Splits the arrangement into sub-arrangements on disjoint variable
    /// sets, in the current coordinates.
    pub fn coordinate_product_split(&self) -> Vec<Arrangement> {
        let groups = self.coordinate_components();
        if groups.len() <= 1 {
            return vec![self.clone()];
        }
        groups.iter().map(|g| self.subarrangement(g)).collect()
    }

    pub fn subarrangement(&self, indices: &[usize]) -> Arrangement {
        Arrangement {
            dim: self.dim,
            forms: indices.iter().map(|&i| self.forms[i].clone()).collect(),
            name: None,
        }
    }

    pub fn without(&self, h: usize) -> Result<Arrangement> {
        if h >= self.forms.len() {
            return Err(Error::IndexOutOfRange {
                index: h,
                len: self.forms.len(),
            });
        }
        let mut forms = self.forms.clone();
        forms.remove(h);
        Ok(Arrangement {
            dim: self.dim,
            forms,
            name: None,
        })
    }

    /// The same arrangement expressed in coordinates on the span of its
    /// forms, so that the result is essential of dimension `rank`.
    pub fn essentialize(&self) -> Arrangement {
        let (_, pivots) = self.form_matrix().rref();
        if pivots.len() == self.dim {
            return Arrangement {
                dim: self.dim,
                forms: self.forms.clone(),
                name: self.name.clone(),
            };
        }
        // the reduced basis carries an identity block on the pivot columns,
        // so a form's coordinates are its pivot-column entries
        let forms = self
            .forms
            .iter()
            .map(|f| {
                LinearForm::new(pivots.iter().map(|&p| f.coeffs()[p].clone()).collect())
                    .expect("form in its own span is nonzero")
            })
            .collect();
        Arrangement {
            dim: pivots.len(),
            forms,
            name: self.name.clone(),
        }
    }

    /// Sorted forms of the essentialization; equal keys mean equal
    /// arrangements up to the coordinate choice made by `essentialize`.
    pub fn canonical_key(&self) -> (usize, Vec<LinearForm>) {
        let e = self.essentialize();
        let mut forms = e.forms;
        forms.sort();
        (e.dim, forms)
    }

    /// Whether the first `dim` forms are the coordinate forms `x_1..x_k`.
    pub fn has_coordinate_frame(&self) -> bool {
        self.forms.len() >= self.dim && (0..self.dim).all(|i| self.forms[i].is_coordinate(i))
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        let parts: Vec<String> = self
            .forms
            .iter()
            .map(|l| {
                let s = l.display_with(&names).to_string();
                if l.support().count() == 1 {
                    s
                } else {
                    format!("({s})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::divisible_by_linear;

    fn b3() -> Arrangement {
        Arrangement::parse("3 3\n1 0 0\n0 1 0\n0 0 1\n").unwrap()
    }

    #[test]
    fn parse_boolean() {
        let a = b3();
        assert_eq!(a.len(), 3);
        assert_eq!(a.rank(), 3);
        assert!(a.is_essential());
        assert_eq!(a.defining_polynomial().to_string(), "x*y*z");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            Arrangement::parse("2 2\n1 0\n1 0\n"),
            Err(Error::DuplicateForm { line: 3, first: 1 })
        );
        assert_eq!(
            Arrangement::parse("2 2\n1 0\n2 0\n"),
            Err(Error::DuplicateForm { line: 3, first: 1 })
        );
        assert_eq!(
            Arrangement::parse("2 1\n1 x\n"),
            Err(Error::MalformedRational {
                line: 2,
                token: "x".into()
            })
        );
        assert_eq!(
            Arrangement::parse("2 1\n1 0 0\n"),
            Err(Error::ColumnCount {
                line: 2,
                expected: 2,
                found: 3
            })
        );
        assert_eq!(Arrangement::parse("2 1\n0 0\n"), Err(Error::ZeroForm { line: 2 }));
        assert_eq!(
            Arrangement::parse("2 2\n1 0\n"),
            Err(Error::RowCount {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(Arrangement::parse("# nothing\n"), Err(Error::MissingHeader));
    }

    #[test]
    fn comments_and_fractions() {
        let a = Arrangement::parse("# two lines\n2 2 # header\n2 1/2\n0 -3 # y\n").unwrap();
        assert_eq!(a.form(0).coeffs(), &[rat(1), crate::exact::ratio(1, 4)]);
        assert_eq!(a.form(1), &LinearForm::coordinate(2, 1));
        assert_eq!(Arrangement::parse(&a.to_arr()).unwrap(), a);
    }

    #[test]
    fn empty_and_nonessential() {
        let e = Arrangement::new(3, vec![]).unwrap();
        assert_eq!(e.defining_polynomial(), MPoly::one(3));
        assert_eq!(e.rank(), 0);
        let xy = Arrangement::from_i64(3, &[&[1, 0, 0], &[0, 1, 0]]).unwrap();
        assert!(!xy.is_essential());
        assert!(matches!(xy.is_irreducible(), Err(Error::NotEssential { .. })));
        let ess = xy.essentialize();
        assert_eq!(ess.dim(), 2);
        assert!(ess.is_essential());
    }

    #[test]
    fn product_split() {
        let parts = b3().coordinate_product_split();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|p| p.rank() == 1));
        let b2 = Arrangement::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert!(!b2.is_irreducible().unwrap());
    }

    #[test]
    fn defining_polynomial_divisible_by_forms() {
        let a = Arrangement::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[1, -1, 0], &[1, 1, -1]]).unwrap();
        let q = a.defining_polynomial();
        assert_eq!(q.degree(), Some(4));
        for f in a.forms() {
            assert!(divisible_by_linear(&q, f.coeffs()).unwrap());
        }
    }
}
