//! Graded pieces of the module of logarithmic derivations D(A), minimal
//! generator degrees, Saito's criterion and freeness verdicts.
//!
//! D(A)_d is computed as the kernel of an exact linear system: the unknowns
//! are the coefficients of k homogeneous polynomials of degree d, and each
//! form ℓ contributes the equations θ(ℓ)|_{ℓ=0} = 0, obtained by solving ℓ
//! for its pivot variable.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exact::poly::pivot_solution;
use crate::exact::sparse::{sparse_kernel, Echelon, SparseVec};
use crate::exact::{fmt_rational, poly_det, MPoly, Monomial, QMatrix, Rational};

/// θ = Σ P_i ∂_i with all P_i homogeneous of a common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub coeffs: Vec<MPoly>,
    pub degree: usize,
}

impl Derivation {
    pub fn new(coeffs: Vec<MPoly>, degree: usize) -> Self {
        debug_assert!(coeffs
            .iter()
            .all(|p| p.is_zero() || (p.is_homogeneous() && p.degree() == Some(degree))));
        Derivation { coeffs, degree }
    }

    /// x_1∂_1 + ... + x_k∂_k
    pub fn euler(k: usize) -> Self {
        Derivation {
            coeffs: (0..k).map(|i| MPoly::var(k, i)).collect(),
            degree: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MPoly::is_zero)
    }

    /// θ(ℓ) = Σ c_i P_i
    pub fn apply(&self, form: &[Rational]) -> MPoly {
        let mut out = MPoly::zero(self.dim());
        for (c, p) in form.iter().zip(&self.coeffs) {
            if !c.is_zero() {
                out = &out + &p.scale(c);
            }
        }
        out
    }

    pub fn is_logarithmic(&self, a: &Arrangement) -> bool {
        a.forms().iter().all(|f| {
            crate::exact::divisible_by_linear(&self.apply(f.coeffs()), f.coeffs())
                .expect("nonzero form")
        })
    }

    pub fn mul_poly(&self, p: &MPoly) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().map(|c| c * p).collect(),
            degree: self.degree + p.degree().unwrap_or(0),
        }
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
            degree: self.degree,
        }
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
            degree: self.degree,
        }
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Derivation, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self
                    .0
                    .coeffs
                    .iter()
                    .map(|p| p.display_with(self.1).to_string())
                    .collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
        D(self, names)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::exact::poly::default_var_names(self.dim());
        let shown = self.display_with(&names).to_string();
        f.write_str(&shown)
    }
}

/// Coordinates of degree-d derivations: unknown `i * M + j` is the
/// coefficient of monomial j in P_i.
struct DegreeFrame {
    k: usize,
    degree: usize,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeFrame {
    fn new(k: usize, degree: usize) -> Self {
        let monomials = Monomial::all_of_degree(k, degree);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        DegreeFrame {
            k,
            degree,
            monomials,
            index,
        }
    }

    fn unknowns(&self) -> usize {
        self.k * self.monomials.len()
    }

    fn to_derivation(&self, v: &SparseVec) -> Derivation {
        let m = self.monomials.len();
        let mut coeffs = vec![MPoly::zero(self.k); self.k];
        for (u, c) in v {
            coeffs[u / m].add_term(self.monomials[u % m].clone(), c.clone());
        }
        Derivation::new(coeffs, self.degree)
    }

    #[cfg(test)]
    fn to_vector(&self, d: &Derivation) -> SparseVec {
        let m = self.monomials.len();
        let mut v: SparseVec = Vec::new();
        for (i, p) in d.coeffs.iter().enumerate() {
            for (mono, c) in p.terms() {
                v.push((i * m + self.index[mono], c.clone()));
            }
        }
        v.sort_by_key(|e| e.0);
        v
    }

    /// x_var · θ, with θ given in the frame one degree lower.
    fn shift(&self, lower: &DegreeFrame, v: &SparseVec, var: usize) -> SparseVec {
        let ml = lower.monomials.len();
        let m = self.monomials.len();
        let mut out: SparseVec = v
            .iter()
            .map(|(u, c)| {
                let (i, j) = (u / ml, u % ml);
                (i * m + self.index[&lower.monomials[j].times_var(var)], c.clone())
            })
            .collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

/// Builds the logarithmic-condition system for degree `d` and returns its
/// kernel (a basis of D(A)_d in frame coordinates).
fn solve_degree(a: &Arrangement, frame: &DegreeFrame) -> Vec<SparseVec> {
    let k = a.dim();
    let m = frame.monomials.len();
    let mut rows: BTreeMap<(usize, Monomial), SparseVec> = BTreeMap::new();
    for (fi, form) in a.forms().iter().enumerate() {
        let c = form.coeffs();
        let p = form.pivot();
        let repl = pivot_solution(c, p);
        let mut powers = vec![MPoly::one(k)];
        for e in 1..=frame.degree {
            powers.push(&powers[e - 1] * &repl);
        }
        for (j, mono) in frame.monomials.iter().enumerate() {
            let e = mono.exponents()[p] as usize;
            let mut rest = mono.exponents().to_vec();
            rest[p] = 0;
            let image = powers[e].mul_monomial(&Monomial::from_exponents(rest));
            for (t, coef) in image.terms() {
                let row = rows.entry((fi, t.clone())).or_default();
                for (i, ci) in c.iter().enumerate() {
                    if !ci.is_zero() {
                        row.push((i * m + j, ci * coef));
                    }
                }
            }
        }
    }
    let rows: Vec<SparseVec> = rows
        .into_values()
        .map(|mut r| {
            r.sort_by_key(|e| e.0);
            r
        })
        .collect();
    sparse_kernel(&rows, frame.unknowns())
}

/// Basis of D(A)_d.
pub fn derivation_space(a: &Arrangement, d: usize) -> Vec<Derivation> {
    let frame = DegreeFrame::new(a.dim(), d);
    solve_degree(a, &frame)
        .iter()
        .map(|v| frame.to_derivation(v))
        .collect()
}

/// Incremental walk over degrees 0, 1, 2, ... that tracks dim D(A)_d and the
/// minimal generators found so far.
struct GradedWalk<'a> {
    a: &'a Arrangement,
    prev: Option<(DegreeFrame, Vec<SparseVec>)>,
    dims: Vec<usize>,
    generators: Vec<Derivation>,
}

impl<'a> GradedWalk<'a> {
    fn new(a: &'a Arrangement) -> Self {
        GradedWalk {
            a,
            prev: None,
            dims: Vec::new(),
            generators: Vec::new(),
        }
    }

    fn step_with(&mut self, frame: DegreeFrame, basis: Vec<SparseVec>) -> usize {
        let mut span = Echelon::new();
        if let Some((lower, lower_basis)) = &self.prev {
            for v in lower_basis {
                for var in 0..frame.k {
                    span.insert(&frame.shift(lower, v, var));
                }
            }
        }
        let mut found = 0;
        for v in &basis {
            if span.insert(v).is_some() {
                self.generators.push(frame.to_derivation(v));
                found += 1;
            }
        }
        self.dims.push(basis.len());
        self.prev = Some((frame, basis));
        found
    }

    fn step(&mut self) -> usize {
        let d = self.dims.len();
        let frame = DegreeFrame::new(self.a.dim(), d);
        let basis = solve_degree(self.a, &frame);
        self.step_with(frame, basis)
    }
}

/// Dimensions of D(A)_d and minimal generator degrees up to a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDerivationSummary {
    pub dims: Vec<usize>,
    pub min_gen_degrees: Vec<usize>,
    pub bound: usize,
    pub generators: Vec<Derivation>,
}

pub fn minimal_generator_degrees(a: &Arrangement, bound: usize) -> GradedDerivationSummary {
    // slices are independent linear systems
    let slices: Vec<(DegreeFrame, Vec<SparseVec>)> = (0..=bound)
        .into_par_iter()
        .map(|d| {
            let frame = DegreeFrame::new(a.dim(), d);
            let basis = solve_degree(a, &frame);
            (frame, basis)
        })
        .collect();
    let mut walk = GradedWalk::new(a);
    for (frame, basis) in slices {
        walk.step_with(frame, basis);
    }
    GradedDerivationSummary {
        dims: walk.dims,
        min_gen_degrees: walk.generators.iter().map(|g| g.degree).collect(),
        bound,
        generators: walk.generators,
    }
}

fn check_candidates(a: &Arrangement, candidate: &[Derivation]) -> Result<()> {
    if candidate.len() != a.dim() {
        return Err(Error::CandidateCount {
            expected: a.dim(),
            found: candidate.len(),
        });
    }
    let sum: usize = candidate.iter().map(|d| d.degree).sum();
    if sum != a.len() {
        return Err(Error::DegreeSumMismatch {
            expected: a.len(),
            found: sum,
        });
    }
    Ok(())
}

/// Coefficient matrix with one column per derivation.
pub fn saito_matrix(candidate: &[Derivation]) -> Vec<Vec<MPoly>> {
    let k = candidate.len();
    (0..k)
        .map(|i| candidate.iter().map(|d| d.coeffs[i].clone()).collect())
        .collect()
}

/// Saito's criterion: returns `Some(c)` when det = c·Q(A) with c ≠ 0.
pub fn saito_check(a: &Arrangement, candidate: &[Derivation]) -> Result<Option<Rational>> {
    check_candidates(a, candidate)?;
    let det = poly_det(&saito_matrix(candidate));
    let q = a.defining_polynomial();
    let (Some((_, dl)), Some((_, ql))) = (det.leading_term(), q.leading_term()) else {
        return Ok(None);
    };
    let c = dl / ql;
    Ok((det == q.scale(&c)).then_some(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreenessStatus {
    Free,
    NotFree,
    UndeterminedUpToBound,
}

impl fmt::Display for FreenessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FreenessStatus::Free => "free",
            FreenessStatus::NotFree => "not free",
            FreenessStatus::UndeterminedUpToBound => "undetermined up to bound",
        };
        f.write_str(s)
    }
}

/// Why a verdict other than `Free` was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreenessWitness {
    /// More than k minimal generators exist.
    TooManyGenerators { count: usize, degree: usize },
    /// Exactly k minimal generators whose degrees do not sum to |A|.
    DegreeSum { degrees: Vec<usize> },
    /// k minimal generators with the right degree sum whose determinant is
    /// not a multiple of Q(A).
    SaitoFailed { degrees: Vec<usize> },
    /// Fewer than k generators up to a bound at least |A| - k + 1, the
    /// largest exponent a free essential arrangement can have.
    TooFewGenerators { count: usize, bound: usize },
    /// Fewer than k generators up to a user bound below |A| - k + 1.
    BoundTooLow { count: usize, bound: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessVerdict {
    pub status: FreenessStatus,
    pub exponents: Option<Vec<usize>>,
    pub certificate: Option<Vec<Derivation>>,
    pub saito_constant: Option<Rational>,
    pub witness: Option<FreenessWitness>,
    /// Minimal generator degrees found up to `degree_reached`.
    pub min_gen_degrees: Vec<usize>,
    pub dims: Vec<usize>,
    pub bound: usize,
    pub degree_reached: usize,
}

impl FreenessVerdict {
    pub fn is_free(&self) -> bool {
        self.status == FreenessStatus::Free
    }
}

pub fn default_bound(a: &Arrangement) -> usize {
    (a.len() + 1).saturating_sub(a.dim()).max(1)
}

/// Decides freeness of an essential arrangement by walking degrees up to
/// `bound` (default |A| - k + 1) and stopping as soon as the minimal
/// generators seen so far settle the question.
pub fn freeness(a: &Arrangement, bound: Option<usize>) -> Result<FreenessVerdict> {
    let k = a.dim();
    let n = a.len();
    let rank = a.rank();
    if rank != k {
        return Err(Error::NotEssential { rank, dim: k });
    }
    let bound = bound.unwrap_or_else(|| default_bound(a));
    let natural = default_bound(a);
    let mut walk = GradedWalk::new(a);

    let verdict = |walk: &GradedWalk, status, witness, cert: Option<(Vec<Derivation>, Rational)>| {
        let degs: Vec<usize> = walk.generators.iter().map(|g| g.degree).collect();
        let (certificate, saito_constant) = match cert {
            Some((c, s)) => (Some(c), Some(s)),
            None => (None, None),
        };
        FreenessVerdict {
            status,
            exponents: (status == FreenessStatus::Free).then(|| degs.clone()),
            certificate,
            saito_constant,
            witness,
            min_gen_degrees: degs,
            dims: walk.dims.clone(),
            bound,
            degree_reached: walk.dims.len().saturating_sub(1),
        }
    };

    if k == 0 {
        walk.dims.push(0);
        return Ok(verdict(
            &walk,
            FreenessStatus::Free,
            None,
            Some((vec![], Rational::one())),
        ));
    }

    for d in 0..=bound {
        let found = walk.step();
        let count = walk.generators.len();
        if count > k {
            return Ok(verdict(
                &walk,
                FreenessStatus::NotFree,
                Some(FreenessWitness::TooManyGenerators { count, degree: d }),
                None,
            ));
        }
        if count == k && found > 0 {
            let degrees: Vec<usize> = walk.generators.iter().map(|g| g.degree).collect();
            if degrees.iter().sum::<usize>() != n {
                return Ok(verdict(
                    &walk,
                    FreenessStatus::NotFree,
                    Some(FreenessWitness::DegreeSum { degrees }),
                    None,
                ));
            }
            let gens = walk.generators.clone();
            return Ok(match saito_check(a, &gens)? {
                Some(c) => verdict(&walk, FreenessStatus::Free, None, Some((gens, c))),
                None => verdict(
                    &walk,
                    FreenessStatus::NotFree,
                    Some(FreenessWitness::SaitoFailed { degrees }),
                    None,
                ),
            });
        }
    }
    let count = walk.generators.len();
    if bound >= natural {
        Ok(verdict(
            &walk,
            FreenessStatus::NotFree,
            Some(FreenessWitness::TooFewGenerators { count, bound }),
            None,
        ))
    } else {
        Ok(verdict(
            &walk,
            FreenessStatus::UndeterminedUpToBound,
            Some(FreenessWitness::BoundTooLow { count, bound }),
            None,
        ))
    }
}

fn require_frame(a: &Arrangement) -> Result<()> {
    for i in 0..a.dim() {
        if i >= a.len() || !a.form(i).is_coordinate(i) {
            return Err(Error::CoordinateFrame { index: i });
        }
    }
    Ok(())
}

/// Linear forms L_i with θ(x_i) = L_i·x_i.
fn diagonal_factors(theta: &Derivation) -> Result<Vec<MPoly>> {
    theta
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, q)| q.div_var(i).ok_or(Error::NotDiagonalShape { index: i }))
        .collect()
}

/// θ - L_i·θ_E for a quadratic derivation θ; the result has vanishing i-th
/// coefficient and is zero iff θ is a multiple of the Euler derivation.
pub fn euler_complement(a: &Arrangement, theta: &Derivation, i: usize) -> Result<Derivation> {
    require_frame(a)?;
    if theta.degree != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            found: theta.degree,
        });
    }
    if i >= a.dim() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: a.dim(),
        });
    }
    let l = diagonal_factors(theta)?;
    Ok(theta.sub(&Derivation::euler(a.dim()).mul_poly(&l[i])))
}

/// L_i, B_{p,r} and the generators of I_{u,v} for a quadratic derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticIdealData {
    /// Coefficient vectors of L_1..L_k; entry `[i][u]` is b_{u,i}.
    pub l_forms: Vec<Vec<Rational>>,
    /// `b[(p, r)] = B_{p,r} = b_{r,p} - b_{r,r}`.
    pub b: QMatrix,
    pub pair: (usize, usize),
    pub generators: Vec<MPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPointCheck {
    pub form_index: usize,
    pub point: Vec<Rational>,
    pub values: Vec<Rational>,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticIdealReport {
    pub data: QuadraticIdealData,
    pub theta_is_logarithmic: bool,
    pub checks: Vec<DualPointCheck>,
}

impl QuadraticIdealReport {
    pub fn all_vanish(&self) -> bool {
        self.checks.iter().all(|c| c.vanishes)
    }
}

pub fn quadratic_ideal_data(
    a: &Arrangement,
    theta: &Derivation,
    (u, v): (usize, usize),
) -> Result<QuadraticIdealData> {
    require_frame(a)?;
    let k = a.dim();
    if u >= k || v >= k || u == v {
        return Err(Error::InvalidPair { u, v, dim: k });
    }
    if theta.degree != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            found: theta.degree,
        });
    }
    let l_forms: Vec<Vec<Rational>> = diagonal_factors(theta)?
        .iter()
        .map(|l| {
            if l.is_zero() {
                vec![Rational::zero(); k]
            } else {
                l.linear_coefficients().expect("linear factor")
            }
        })
        .collect();
    let bcoef = |row: usize, col: usize| l_forms[col][row].clone();
    let mut b = QMatrix::zeros(k, k);
    for p in 0..k {
        for r in 0..k {
            b[(p, r)] = bcoef(r, p) - bcoef(r, r);
        }
    }
    let l_st = |s: usize, t: usize| -> MPoly {
        &MPoly::var(k, s).scale(&b[(s, t)]) + &MPoly::var(k, t).scale(&b[(t, s)])
    };
    let mut generators = vec![l_st(u, v)];
    for w in (0..k).filter(|&w| w != u && w != v) {
        let g = &(&MPoly::var(k, u) * &l_st(v, w)) - &(&MPoly::var(k, v) * &l_st(u, w));
        generators.push(g);
    }
    Ok(QuadraticIdealData {
        l_forms,
        b,
        pair: (u, v),
        generators,
    })
}

/// Evaluates the generators of I_{u,v} at the dual point of every non-frame
/// form with nonzero u- and v-coefficients.
pub fn quadratic_ideal_check(
    a: &Arrangement,
    theta: &Derivation,
    pair: (usize, usize),
) -> Result<QuadraticIdealReport> {
    let data = quadratic_ideal_data(a, theta, pair)?;
    let (u, v) = pair;
    let checks = a
        .forms()
        .iter()
        .enumerate()
        .skip(a.dim())
        .filter(|(_, f)| !f.coeffs()[u].is_zero() && !f.coeffs()[v].is_zero())
        .map(|(j, f)| {
            let point = f.coeffs().to_vec();
            let values: Vec<Rational> = data.generators.iter().map(|g| g.evaluate(&point)).collect();
            DualPointCheck {
                form_index: j,
                vanishes: values.iter().all(Zero::is_zero),
                point,
                values,
            }
        })
        .collect();
    Ok(QuadraticIdealReport {
        theta_is_logarithmic: theta.is_logarithmic(a),
        data,
        checks,
    })
}

/// Σ_i C(d - e_i + k - 1, k - 1): dim of the degree-d part of a free module
/// with generators in degrees e_i over k variables.
pub fn free_hilbert(exponents: &[usize], k: usize, d: usize) -> usize {
    fn binom(n: usize, r: usize) -> usize {
        if r > n {
            return 0;
        }
        (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
    }
    exponents
        .iter()
        .filter(|&&e| e <= d)
        .map(|&e| binom(d - e + k - 1, k - 1))
        .sum()
}

pub fn render_rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}
