//! Named arrangements used by the CLI and the test suites.
//!
//! Fixed entries are stored as their defining polynomial, a product of
//! linear factors such as `xyz(x-y)(x-2y)(x-z)`, and parsed on lookup.

use num_traits::{One, Zero};

use crate::arrangement::{Arrangement, LinearForm};
use crate::error::{Error, Result};
use crate::exact::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dim: usize,
    pub polynomial: &'static str,
    pub note: &'static str,
}

pub const FIXED: &[CatalogEntry] = &[
    CatalogEntry {
        name: "A1",
        dim: 3,
        polynomial: "xyz(x-y)(x-z)(y-z)(x+y-z)",
        note: "non-Fano arrangement; free, exponents (1,3,3), not supersolvable",
    },
    CatalogEntry {
        name: "A2",
        dim: 3,
        polynomial: "xyz(x-z)(x-2z)(y-z)(y-2z)",
        note: "supersolvable, exponents (1,3,3)",
    },
    CatalogEntry {
        name: "A3",
        dim: 3,
        polynomial: "x(x-z)(x-2z)(x-3z)(x-4z)y(y-z)",
        note: "not free; minimal derivations in degrees 1,2,5,5",
    },
    CatalogEntry {
        name: "A4",
        dim: 3,
        polynomial: "xy(x-z)(y-z)(x-2z)(y-2z)(x-y)",
        note: "not free; minimal derivations in degrees 1,3,4,4",
    },
    CatalogEntry {
        name: "A5",
        dim: 3,
        polynomial: "xyz(x-z)(x-2z)(x-3z)(y-z)",
        note: "supersolvable, exponents (1,2,4)",
    },
    CatalogEntry {
        name: "A6",
        dim: 3,
        polynomial: "yz(x+y+z)(x-y-z)(2x+4y+z)(2x+y+4z)(3x-9y-z)",
        note: "not free; six minimal derivations of degree 5",
    },
    CatalogEntry {
        name: "A7",
        dim: 3,
        polynomial: "xyz(x+y+z)(x+z)(y+z)",
        note: "supersolvable, exponents (1,2,3), four triple points",
    },
    CatalogEntry {
        name: "A8",
        dim: 3,
        polynomial: "xyz(x-y)(x-2y)(x-z)",
        note: "supersolvable, exponents (1,2,3), one triple and one quadruple point",
    },
    CatalogEntry {
        name: "P5",
        dim: 3,
        polynomial: "xyz(x-z)(y-z)",
        note: "five lines with two triple points; formal",
    },
    CatalogEntry {
        name: "Gen4",
        dim: 3,
        polynomial: "xyz(x+2y+3z)",
        note: "four generic lines; not formal",
    },
    CatalogEntry {
        name: "A8e",
        dim: 4,
        polynomial: "x1x2x3(x1-x2)(x1-2x2)(x1-x3)x4(x3+x4)",
        note: "A8 extended by a rank-1 block; supersolvable, exponents (1,2,2,3)",
    },
];

/// Parametric families accepted by `lookup` besides the fixed entries.
pub const FAMILIES: &[(&str, &str)] = &[
    ("B<k>", "Boolean arrangement x1...xk"),
    (
        "SS22(<k>)",
        "x1...xk (x1+x2)(x2+x3)...(x(k-1)+xk); supersolvable, exponents (1,2,...,2)",
    ),
    (
        "Fam5(<a>,<b>)",
        "x1x2(x1+x2)(x1+a x2) x3x4x5(x3+x4)(x3+x5)(x4+b x5), a != 0,1 and b != 0",
    ),
];

pub fn var_names(dim: usize) -> Vec<String> {
    crate::exact::poly::default_var_names(dim)
}

/// Parses a product of linear factors into raw (unnormalized) coefficient
/// vectors.
pub fn parse_factors(text: &str, dim: usize) -> Result<Vec<Vec<Rational>>> {
    let names = var_names(dim);
    let err = |m: &str| Error::FactorSyntax(format!("{m} in `{text}`"));
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;

    let read_var = |pos: &mut usize| -> Result<usize> {
        let start = *pos;
        if *pos >= chars.len() || !chars[*pos].is_ascii_alphabetic() {
            return Err(err("expected variable"));
        }
        *pos += 1;
        if dim > 3 {
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
        }
        let name: String = chars[start..*pos].iter().collect();
        names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| err(&format!("unknown variable {name}")))
    };

    let mut factors = Vec::new();
    while pos < chars.len() {
        match chars[pos] {
            '*' => pos += 1,
            '(' => {
                pos += 1;
                let mut coeffs = vec![Rational::zero(); dim];
                let mut first = true;
                loop {
                    if pos >= chars.len() {
                        return Err(err("unclosed parenthesis"));
                    }
                    if chars[pos] == ')' {
                        pos += 1;
                        break;
                    }
                    let mut sign = Rational::one();
                    match chars[pos] {
                        '+' => pos += 1,
                        '-' => {
                            sign = -sign;
                            pos += 1;
                        }
                        _ if first => {}
                        _ => return Err(err("expected + or -")),
                    }
                    first = false;
                    let start = pos;
                    while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                        pos += 1;
                    }
                    let c = if start == pos {
                        Rational::one()
                    } else {
                        let tok: String = chars[start..pos].iter().collect();
                        parse_rational(&tok).ok_or_else(|| err("bad coefficient"))?
                    };
                    if pos < chars.len() && chars[pos] == '*' {
                        pos += 1;
                    }
                    let v = read_var(&mut pos)?;
                    coeffs[v] += sign * c;
                }
                factors.push(coeffs);
            }
            _ => {
                let v = read_var(&mut pos)?;
                let mut coeffs = vec![Rational::zero(); dim];
                coeffs[v] = Rational::one();
                factors.push(coeffs);
            }
        }
    }
    Ok(factors)
}

pub fn from_polynomial(dim: usize, text: &str) -> Result<Arrangement> {
    let forms = parse_factors(text, dim)?
        .into_iter()
        .map(LinearForm::new)
        .collect::<Result<Vec<_>>>()?;
    Arrangement::new(dim, forms)
}

pub fn boolean(k: usize) -> Arrangement {
    let forms = (0..k).map(|i| LinearForm::coordinate(k, i)).collect();
    Arrangement::new(k, forms).unwrap().with_name(format!("B{k}"))
}

/// x1...xk (x1+x2)(x2+x3)...(x(k-1)+xk).
pub fn ss22(k: usize) -> Arrangement {
    let mut forms: Vec<LinearForm> = (0..k).map(|i| LinearForm::coordinate(k, i)).collect();
    for i in 0..k.saturating_sub(1) {
        let mut c = vec![Rational::zero(); k];
        c[i] = Rational::one();
        c[i + 1] = Rational::one();
        forms.push(LinearForm::new(c).unwrap());
    }
    Arrangement::new(k, forms).unwrap().with_name(format!("SS22({k})"))
}

/// x1x2(x1+x2)(x1+a x2) x3x4x5(x3+x4)(x3+x5)(x4+b x5).
pub fn fam5(a: &Rational, b: &Rational) -> Result<Arrangement> {
    let one = Rational::one();
    let z = Rational::zero();
    let row = |c: [&Rational; 5]| c.iter().map(|x| (*x).clone()).collect::<Vec<_>>();
    let rows = vec![
        row([&one, &z, &z, &z, &z]),
        row([&z, &one, &z, &z, &z]),
        row([&one, &one, &z, &z, &z]),
        row([&one, a, &z, &z, &z]),
        row([&z, &z, &one, &z, &z]),
        row([&z, &z, &z, &one, &z]),
        row([&z, &z, &z, &z, &one]),
        row([&z, &z, &one, &one, &z]),
        row([&z, &z, &one, &z, &one]),
        row([&z, &z, &z, &one, b]),
    ];
    let forms = rows
        .into_iter()
        .map(LinearForm::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(Arrangement::new(5, forms)?.with_name(format!(
        "Fam5({},{})",
        crate::exact::fmt_rational(a),
        crate::exact::fmt_rational(b)
    )))
}

fn args(name: &str, prefix: &str) -> Option<Vec<String>> {
    let inner = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    Some(inner.split(',').map(|s| s.trim().to_string()).collect())
}

pub fn lookup(name: &str) -> Result<Arrangement> {
    let unknown = || Error::UnknownCatalog(name.to_string());
    if let Some(e) = FIXED.iter().find(|e| e.name == name) {
        return Ok(from_polynomial(e.dim, e.polynomial)?.with_name(e.name));
    }
    if let Some(a) = args(name, "SS22") {
        let [k] = &a[..] else { return Err(unknown()) };
        let k: usize = k.parse().map_err(|_| unknown())?;
        if k == 0 {
            return Err(unknown());
        }
        return Ok(ss22(k));
    }
    if let Some(a) = args(name, "Fam5") {
        let [p, q] = &a[..] else { return Err(unknown()) };
        let p = parse_rational(p).ok_or_else(unknown)?;
        let q = parse_rational(q).ok_or_else(unknown)?;
        return fam5(&p, &q);
    }
    let k = args(name, "Bk")
        .and_then(|a| a.first().cloned())
        .or_else(|| name.strip_prefix('B').map(str::to_string));
    if let Some(k) = k {
        if let Ok(k) = k.parse::<usize>() {
            if k > 0 {
                return Ok(boolean(k));
            }
        }
    }
    Err(unknown())
}
