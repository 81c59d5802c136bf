//! Minimal dependent sets of size three, their relations, formality and the
//! per-hyperplane rank-2 statistics (u, v, s, u_i, v_i, m_i).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::derivations::{FreenessStatus, FreenessVerdict};
use crate::error::{Error, Result};
use crate::exact::{normalize_first_nonzero, QMatrix, Rational};
use crate::lattice::{build_lattice, IntersectionLattice};

/// A minimal dependent set with its relation Σ c_i ℓ_i = 0, normalized so
/// the first coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub indices: Vec<usize>,
    pub relation: Vec<Rational>,
}

impl Circuit {
    /// The relation as a vector of length |A|.
    pub fn embedded(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (i, c) in self.indices.iter().zip(&self.relation) {
            v[*i] = c.clone();
        }
        v
    }
}

/// The normalized relation among the forms indexed by `s`.
pub fn relation_of(a: &Arrangement, s: &[usize]) -> Result<Vec<Rational>> {
    for &i in s {
        if i >= a.len() {
            return Err(Error::IndexOutOfRange { index: i, len: a.len() });
        }
    }
    let cols = QMatrix::from_rows(a.dim(), &s.iter().map(|&i| a.form(i).coeffs()).collect::<Vec<_>>())
        .transpose();
    let kernel = cols.kernel_basis();
    match &kernel[..] {
        [r] if r.iter().all(|c| !c.is_zero()) => {
            let mut r = r.clone();
            normalize_first_nonzero(&mut r);
            Ok(r)
        }
        _ => Err(Error::NotMinimalDependent(s.to_vec())),
    }
}

fn triples_of(closure: &[usize]) -> impl Iterator<Item = [usize; 3]> + '_ {
    let m = closure.len();
    (0..m).flat_map(move |i| {
        (i + 1..m).flat_map(move |j| (j + 1..m).map(move |l| [closure[i], closure[j], closure[l]]))
    })
}

pub fn circuits_of_size_3_in(a: &Arrangement, lattice: &IntersectionLattice) -> Vec<Circuit> {
    let mut out: Vec<Circuit> = lattice
        .level(2)
        .iter()
        .filter(|f| f.size() >= 3)
        .flat_map(|f| triples_of(&f.closure).collect::<Vec<_>>())
        .map(|t| Circuit {
            relation: relation_of(a, &t).expect("three forms in a rank-2 flat"),
            indices: t.to_vec(),
        })
        .collect();
    out.sort_by(|x, y| x.indices.cmp(&y.indices));
    out
}

/// All 3-circuits, found through the rank-2 flats: a flat whose closure has
/// m hyperplanes contributes C(m,3) circuits.
pub fn circuits_of_size_3(a: &Arrangement) -> Vec<Circuit> {
    circuits_of_size_3_in(a, &build_lattice(a))
}

/// Span of the 3-circuit relations inside ℚ^n, as an echelon basis.
pub fn circuit_relation_span(a: &Arrangement) -> QMatrix {
    let rows: Vec<Vec<Rational>> = circuits_of_size_3(a).iter().map(|c| c.embedded(a.len())).collect();
    QMatrix::from_rows(a.len(), &rows).row_space_basis()
}

/// Whether a relation vector (length |A|) lies in the span of the 3-circuit
/// relations.
pub fn in_circuit_span(a: &Arrangement, relation: &[Rational]) -> bool {
    let span = circuit_relation_span(a);
    span.vstack(&QMatrix::from_rows(a.len(), &[relation])).rank() == span.rows()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formality {
    pub formal: bool,
    /// n - rank: dimension of all relations among the forms.
    pub relation_space_dim: usize,
    pub circuit_span_dim: usize,
}

pub fn is_formal(a: &Arrangement) -> Formality {
    let relation_space_dim = a.len() - a.rank();
    let circuit_span_dim = circuit_relation_span(a).rows();
    Formality {
        formal: relation_space_dim == circuit_span_dim,
        relation_space_dim,
        circuit_span_dim,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyProfile {
    /// Rank-2 flats with exactly three hyperplanes.
    pub u: usize,
    /// Rank-2 flats with exactly four hyperplanes.
    pub v: usize,
    /// Multiplicity → number of rank-2 flats.
    pub histogram: BTreeMap<usize, usize>,
    pub triple_count: usize,
    pub u_i: Vec<usize>,
    pub v_i: Vec<usize>,
    pub m_i: Vec<usize>,
    /// Hyperplanes lying in exactly one 3-circuit.
    pub s: usize,
    pub max_multiplicity: usize,
    /// False when some rank-2 flat has five or more hyperplanes, in which
    /// case identities phrased through u and v do not apply.
    pub uv_applicable: bool,
}

pub fn dependency_profile_in(a: &Arrangement, lattice: &IntersectionLattice) -> DependencyProfile {
    let n = a.len();
    let mut histogram = BTreeMap::new();
    let (mut u_i, mut v_i, mut m_i) = (vec![0; n], vec![0; n], vec![0; n]);
    let mut triple_count = 0;
    for f in lattice.level(2) {
        let m = f.size();
        *histogram.entry(m).or_insert(0) += 1;
        triple_count += m * (m - 1) * m.saturating_sub(2) / 6;
        for &i in &f.closure {
            match m {
                3 => u_i[i] += 1,
                4 => v_i[i] += 1,
                _ => {}
            }
            m_i[i] += (m - 1) * m.saturating_sub(2) / 2;
        }
    }
    let max_multiplicity = histogram.keys().next_back().copied().unwrap_or(0);
    DependencyProfile {
        u: histogram.get(&3).copied().unwrap_or(0),
        v: histogram.get(&4).copied().unwrap_or(0),
        uv_applicable: max_multiplicity <= 4,
        s: m_i.iter().filter(|&&m| m == 1).count(),
        histogram,
        triple_count,
        u_i,
        v_i,
        m_i,
        max_multiplicity,
    }
}

pub fn dependency_profile(a: &Arrangement) -> DependencyProfile {
    dependency_profile_in(a, &build_lattice(a))
}

/// Exponent shapes for which the low-exponent identities are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// (1, 2, ..., 2)
    OnesAndTwos,
    /// (1, 2, ..., 2, 3)
    OneCubic,
    NotApplicable,
}

pub fn regime_of(exponents: &[usize]) -> Regime {
    let mut e = exponents.to_vec();
    e.sort_unstable();
    let k = e.len();
    if k >= 2 && e[0] == 1 && e[1..].iter().all(|&x| x == 2) {
        Regime::OnesAndTwos
    } else if k >= 3 && e[0] == 1 && e[k - 1] == 3 && e[1..k - 1].iter().all(|&x| x == 2) {
        Regime::OneCubic
    } else {
        Regime::NotApplicable
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::NotApplicable => "not applicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub id: String,
    pub statement: String,
    pub status: CheckStatus,
    pub detail: String,
}

fn check(id: &str, statement: &str, ok: bool, detail: String) -> LemmaCheck {
    LemmaCheck {
        id: id.to_string(),
        statement: statement.to_string(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub regime: Regime,
    pub checks: Vec<LemmaCheck>,
    pub observed_s: usize,
    pub note: Option<String>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn applicable(&self) -> bool {
        self.regime != Regime::NotApplicable
    }
}

/// Two hyperplanes with m_i = 1 lying in a common 3-circuit.
fn unique_pair(circuits: &[Circuit], m_i: &[usize]) -> Option<(usize, usize)> {
    circuits.iter().find_map(|c| {
        let lonely: Vec<usize> = c.indices.iter().copied().filter(|&i| m_i[i] == 1).collect();
        (lonely.len() >= 2).then(|| (lonely[0], lonely[1]))
    })
}

/// Evaluates the counting identities and inequalities that hold for free
/// arrangements with exponents (1,2,...,2) or (1,2,...,2,3).
pub fn check_low_exponent_lemmas(
    a: &Arrangement,
    profile: &DependencyProfile,
    verdict: &FreenessVerdict,
) -> LemmaReport {
    let exps = match (&verdict.status, &verdict.exponents) {
        (FreenessStatus::Free, Some(e)) => e.clone(),
        _ => {
            return LemmaReport {
                regime: Regime::NotApplicable,
                checks: vec![],
                observed_s: profile.s,
                note: Some("arrangement not certified free".into()),
            }
        }
    };
    let regime = regime_of(&exps);
    let k = a.dim();
    let n = a.len();
    let p = profile;
    let mut checks = Vec::new();
    match regime {
        Regime::OnesAndTwos => {
            checks.push(check(
                "multiplicity-at-most-3",
                "every rank-2 flat has at most three hyperplanes",
                p.max_multiplicity <= 3,
                format!("max multiplicity {}", p.max_multiplicity),
            ));
            checks.push(check(
                "k-1-triples",
                "exactly k-1 3-dependencies",
                p.triple_count == k - 1,
                format!("{} 3-dependencies, k-1 = {}", p.triple_count, k - 1),
            ));
            let circuits = circuits_of_size_3(a);
            let pair = unique_pair(&circuits, &p.m_i);
            checks.push(check(
                "two-in-unique-dependency",
                "two hyperplanes belong to a unique common 3-dependency",
                pair.is_some(),
                match pair {
                    Some((i, j)) => format!("hyperplanes {} and {}", i + 1, j + 1),
                    None => "no such pair".into(),
                },
            ));
            let sum: usize = p.m_i.iter().sum();
            checks.push(check(
                "sum-m-i",
                "m_1 + ... + m_n = 3(k-1)",
                sum == 3 * (k - 1),
                format!("sum {sum}, 3(k-1) = {}", 3 * (k - 1)),
            ));
            checks.push(check(
                "every-hyperplane-in-a-dependency",
                "m_i >= 1 for every hyperplane",
                p.m_i.iter().all(|&m| m >= 1),
                format!("min m_i {}", p.m_i.iter().min().copied().unwrap_or(0)),
            ));
            checks.push(check(
                "n-equals-2k-1",
                "|A| = 2k - 1",
                n == 2 * k - 1,
                format!("|A| = {n}"),
            ));
        }
        Regime::OneCubic => {
            checks.push(check(
                "multiplicity-at-most-4",
                "every rank-2 flat has at most four hyperplanes",
                p.max_multiplicity <= 4,
                format!("max multiplicity {}", p.max_multiplicity),
            ));
            checks.push(check(
                "u-plus-3v",
                "u + 3v = k + 1",
                p.u + 3 * p.v == k + 1,
                format!("u = {}, v = {}, k + 1 = {}", p.u, p.v, k + 1),
            ));
            checks.push(check(
                "s-lower-bound",
                "s >= u - 4",
                p.s + 4 >= p.u,
                format!("s = {}, u = {}", p.s, p.u),
            ));
            checks.push(check(
                "3u-plus-4v",
                "3u + 4v >= 2k",
                3 * p.u + 4 * p.v >= 2 * k,
                format!("3u + 4v = {}", 3 * p.u + 4 * p.v),
            ));
            checks.push(check(
                "v-upper-bound",
                "v <= (k + 3)/5",
                5 * p.v <= k + 3,
                format!("v = {}", p.v),
            ));
            let worst = (0..n).map(|i| 2 * p.u_i[i] + 3 * p.v_i[i]).max().unwrap_or(0);
            checks.push(check(
                "per-hyperplane-bound",
                "2u_i + 3v_i <= 2k - 1",
                worst < 2 * k,
                format!("max 2u_i + 3v_i = {worst}"),
            ));
            let lhs: usize = p.u_i.iter().sum::<usize>() + 3 * p.v_i.iter().sum::<usize>();
            checks.push(check(
                "incidence-sum",
                "sum u_i + 3 sum v_i = 3(u + 4v)",
                lhs == 3 * (p.u + 4 * p.v),
                format!("{lhs} vs {}", 3 * (p.u + 4 * p.v)),
            ));
            checks.push(check("n-equals-2k", "|A| = 2k", n == 2 * k, format!("|A| = {n}")));
        }
        Regime::NotApplicable => {}
    }
    LemmaReport {
        regime,
        checks,
        observed_s: p.s,
        note: (regime == Regime::NotApplicable)
            .then(|| format!("exponents {exps:?} outside the (1,2,...,2) and (1,2,...,2,3) shapes")),
    }
}
