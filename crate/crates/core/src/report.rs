//! Aggregated analysis and verification reports with a stable serialized
//! layout. All numbers are exact; rationals are rendered as strings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::dependencies::{
    check_low_exponent_lemmas, dependency_profile_in, is_formal, CheckStatus, DependencyProfile,
    Formality, LemmaReport, Regime,
};
use crate::derivations::{freeness, FreenessStatus, FreenessVerdict, FreenessWitness};
use crate::error::Result;
use crate::exact::fmt_rational;
use crate::induction::{verify_deletion_path, PathReport};
use crate::lattice::{build_lattice, IntPoly, IntersectionLattice, ModularChain};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementSummary {
    pub name: Option<String>,
    pub dim: usize,
    pub size: usize,
    pub rank: usize,
    pub essential: bool,
    pub forms: Vec<String>,
    pub defining_polynomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessSummary {
    pub status: FreenessStatus,
    pub exponents: Option<Vec<usize>>,
    pub witness: Option<FreenessWitness>,
    pub min_gen_degrees: Vec<usize>,
    pub dims: Vec<usize>,
    pub bound: usize,
    pub degree_reached: usize,
    pub saito_constant: Option<String>,
    pub basis: Option<Vec<String>>,
    /// Set when the arrangement was essentialized before solving.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareSummary {
    pub coefficients: Vec<i64>,
    pub text: String,
    /// For free arrangements: whether π(t) = Π(1 + e_i t).
    pub factors_by_exponents: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub rank: usize,
    /// 1-based hyperplane indices in the closure.
    pub hyperplanes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupersolvableSummary {
    pub supersolvable: bool,
    pub chain: Option<Vec<ChainStep>>,
    pub chain_exponents: Option<Vec<usize>>,
}

impl SupersolvableSummary {
    pub fn from_chain(chain: Option<ModularChain>) -> Self {
        SupersolvableSummary {
            supersolvable: chain.is_some(),
            chain_exponents: chain.as_ref().map(ModularChain::exponents),
            chain: chain.map(|c| {
                c.flats
                    .iter()
                    .map(|f| ChainStep {
                        rank: f.rank,
                        hyperplanes: f.closure.iter().map(|i| i + 1).collect(),
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub arrangement: ArrangementSummary,
    pub freeness: FreenessSummary,
    pub poincare: PoincareSummary,
    pub supersolvable: SupersolvableSummary,
    pub irreducible: Option<bool>,
    pub formality: Formality,
    pub dependencies: DependencyProfile,
    pub lemmas: LemmaReport,
}

pub fn summarize_arrangement(a: &Arrangement) -> ArrangementSummary {
    let names = a.var_names();
    ArrangementSummary {
        name: a.name().map(str::to_string),
        dim: a.dim(),
        size: a.len(),
        rank: a.rank(),
        essential: a.is_essential(),
        forms: a.forms().iter().map(|f| f.display_with(&names).to_string()).collect(),
        defining_polynomial: a.to_string(),
    }
}

/// Freeness of any arrangement: non-essential input is essentialized and
/// its exponents are padded with zeros.
pub fn freeness_any(a: &Arrangement, bound: Option<usize>) -> Result<(FreenessVerdict, Option<String>)> {
    if a.is_essential() {
        return Ok((freeness(a, bound)?, None));
    }
    let e = a.essentialize();
    let mut v = freeness(&e, bound)?;
    let pad = a.dim() - e.dim();
    if let Some(x) = v.exponents.as_mut() {
        x.splice(0..0, std::iter::repeat_n(0, pad));
    }
    Ok((v, Some(format!("solved on the essentialization (rank {}); {pad} zero exponents added", e.dim()))))
}

pub fn summarize_freeness(v: &FreenessVerdict, names: &[String], note: Option<String>) -> FreenessSummary {
    FreenessSummary {
        status: v.status,
        exponents: v.exponents.clone(),
        witness: v.witness.clone(),
        min_gen_degrees: v.min_gen_degrees.clone(),
        dims: v.dims.clone(),
        bound: v.bound,
        degree_reached: v.degree_reached,
        saito_constant: v.saito_constant.as_ref().map(fmt_rational),
        basis: v.certificate.as_ref().map(|c| {
            let names = if c.first().is_some_and(|d| d.dim() != names.len()) {
                crate::exact::poly::default_var_names(c[0].dim())
            } else {
                names.to_vec()
            };
            c.iter().map(|d| d.display_with(&names).to_string()).collect()
        }),
        note,
    }
}

impl Report {
    pub fn build(a: &Arrangement, max_degree: Option<usize>) -> Result<Report> {
        let lattice = build_lattice(a);
        let (verdict, note) = freeness_any(a, max_degree)?;
        let poly = lattice.poincare_polynomial();
        let profile = dependency_profile_in(a, &lattice);
        let lemmas = check_low_exponent_lemmas(a, &profile, &verdict);
        Ok(Report {
            arrangement: summarize_arrangement(a),
            poincare: PoincareSummary {
                coefficients: poly.coefficients().to_vec(),
                text: poly.to_string(),
                factors_by_exponents: verdict
                    .exponents
                    .as_ref()
                    .map(|e| IntPoly::from_exponents(e) == poly),
            },
            freeness: summarize_freeness(&verdict, &a.var_names(), note),
            supersolvable: SupersolvableSummary::from_chain(lattice.modular_chain()),
            irreducible: a.is_irreducible().ok(),
            formality: is_formal(a),
            dependencies: profile,
            lemmas,
        })
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let a = &self.arrangement;
        let _ = writeln!(
            s,
            "arrangement: {}{}",
            a.name.as_deref().map(|n| format!("{n}: ")).unwrap_or_default(),
            a.defining_polynomial
        );
        let _ = writeln!(s, "  dim {}, {} hyperplanes, rank {}", a.dim, a.size, a.rank);
        let f = &self.freeness;
        let _ = write!(s, "freeness: {}", f.status);
        if let Some(e) = &f.exponents {
            let _ = write!(s, ", exponents {}", fmt_tuple(e));
        }
        let _ = writeln!(s);
        if let Some(w) = &f.witness {
            let _ = writeln!(s, "  witness: {}", witness_text(w));
        }
        let _ = writeln!(
            s,
            "  minimal generator degrees (to degree {}): {:?}",
            f.degree_reached, f.min_gen_degrees
        );
        if let Some(b) = &f.basis {
            let _ = writeln!(s, "  Saito basis (det = {} Q):", f.saito_constant.as_deref().unwrap_or("?"));
            for d in b {
                let _ = writeln!(s, "    {d}");
            }
        }
        if let Some(n) = &f.note {
            let _ = writeln!(s, "  note: {n}");
        }
        let _ = writeln!(s, "poincare: {}", self.poincare.text);
        if let Some(ok) = self.poincare.factors_by_exponents {
            let _ = writeln!(s, "  factors as product of (1 + e_i t): {ok}");
        }
        let ss = &self.supersolvable;
        let _ = writeln!(s, "supersolvable: {}", ss.supersolvable);
        if let Some(chain) = &ss.chain {
            for c in chain {
                let _ = writeln!(s, "  rank {}: {:?}", c.rank, c.hyperplanes);
            }
        }
        if let Some(irr) = self.irreducible {
            let _ = writeln!(s, "irreducible: {irr}");
        }
        let fm = &self.formality;
        let _ = writeln!(
            s,
            "formal: {} (relations {}, spanned by 3-dependencies {})",
            fm.formal, fm.relation_space_dim, fm.circuit_span_dim
        );
        let p = &self.dependencies;
        let _ = writeln!(
            s,
            "rank-2 flats: u = {}, v = {}, multiplicities {:?}, 3-dependencies {}, s = {}",
            p.u, p.v, p.histogram, p.triple_count, p.s
        );
        let _ = writeln!(s, "  m_i = {:?}", p.m_i);
        render_lemmas(&mut s, &self.lemmas);
        s
    }
}

fn fmt_tuple(e: &[usize]) -> String {
    let v: Vec<String> = e.iter().map(usize::to_string).collect();
    format!("({})", v.join(","))
}

pub fn witness_text(w: &FreenessWitness) -> String {
    match w {
        FreenessWitness::TooManyGenerators { count, degree } => {
            format!("{count} minimal generators by degree {degree}, more than the rank")
        }
        FreenessWitness::DegreeSum { degrees } => {
            format!("generator degrees {degrees:?} do not sum to |A|")
        }
        FreenessWitness::SaitoFailed { degrees } => {
            format!("generators of degrees {degrees:?} fail Saito's criterion")
        }
        FreenessWitness::TooFewGenerators { count, bound } => {
            format!("only {count} minimal generators up to degree {bound}")
        }
        FreenessWitness::BoundTooLow { count, bound } => {
            format!("only {count} minimal generators up to degree {bound}; raise --max-degree")
        }
    }
}

fn render_lemmas(s: &mut String, r: &LemmaReport) {
    let regime = match r.regime {
        Regime::OnesAndTwos => "exponents (1,2,...,2)",
        Regime::OneCubic => "exponents (1,2,...,2,3)",
        Regime::NotApplicable => "not applicable",
    };
    let _ = writeln!(s, "lemma checks: {regime}");
    if let Some(n) = &r.note {
        let _ = writeln!(s, "  note: {n}");
    }
    for c in &r.checks {
        let _ = writeln!(s, "  [{}] {}: {}", c.status, c.statement, c.detail);
    }
}

/// A modular coatom X with |A| - |A_X| = 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoatomCheck {
    pub found: bool,
    /// 1-based hyperplanes in the closure of the coatom found.
    pub hyperplanes: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub arrangement: ArrangementSummary,
    pub status: FreenessStatus,
    pub exponents: Option<Vec<usize>>,
    pub lemmas: LemmaReport,
    pub modular_coatom: Option<CoatomCheck>,
    pub supersolvable: Option<bool>,
    pub chain_valid: Option<bool>,
    pub deletion_path: Option<PathReport>,
}

impl VerifyReport {
    /// A failed lemma, a missing coatom, or a failed supersolvability check.
    pub fn has_failure(&self) -> bool {
        self.lemmas.checks.iter().any(|c| c.status == CheckStatus::Fail)
            || self.modular_coatom.as_ref().is_some_and(|c| !c.found)
            || self.supersolvable == Some(false)
            || self.chain_valid == Some(false)
            || self
                .deletion_path
                .as_ref()
                .is_some_and(|p| p.applicable && !p.confirmed)
    }

    pub fn build(a: &Arrangement) -> Result<VerifyReport> {
        let lattice = build_lattice(a);
        let (verdict, _) = freeness_any(a, None)?;
        let profile = dependency_profile_in(a, &lattice);
        let lemmas = check_low_exponent_lemmas(a, &profile, &verdict);
        let mut r = VerifyReport {
            arrangement: summarize_arrangement(a),
            status: verdict.status,
            exponents: verdict.exponents.clone(),
            modular_coatom: None,
            supersolvable: None,
            chain_valid: None,
            deletion_path: None,
            lemmas,
        };
        match r.lemmas.regime {
            Regime::OnesAndTwos => {
                r.modular_coatom = Some(small_modular_coatom(&lattice, a.len()));
                let chain = lattice.modular_chain();
                r.supersolvable = Some(chain.is_some());
                r.chain_valid = chain.map(|c| lattice.is_valid_modular_chain(&c));
            }
            Regime::OneCubic => {
                let chain = lattice.modular_chain();
                r.supersolvable = Some(chain.is_some());
                r.chain_valid = chain.map(|c| lattice.is_valid_modular_chain(&c));
                r.deletion_path = Some(verify_deletion_path(a));
            }
            Regime::NotApplicable => {}
        }
        Ok(r)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let a = &self.arrangement;
        let _ = writeln!(
            s,
            "arrangement: {}{}",
            a.name.as_deref().map(|n| format!("{n}: ")).unwrap_or_default(),
            a.defining_polynomial
        );
        let _ = write!(s, "freeness: {}", self.status);
        if let Some(e) = &self.exponents {
            let _ = write!(s, ", exponents {}", fmt_tuple(e));
        }
        let _ = writeln!(s);
        render_lemmas(&mut s, &self.lemmas);
        if let Some(c) = &self.modular_coatom {
            match &c.hyperplanes {
                Some(h) => {
                    let _ = writeln!(s, "modular coatom with |A| - |A_X| = 2: {h:?}");
                }
                None => {
                    let _ = writeln!(s, "modular coatom with |A| - |A_X| = 2: NOT FOUND");
                }
            }
        }
        if let Some(ss) = self.supersolvable {
            let _ = writeln!(s, "supersolvable: {ss}");
        }
        if let Some(v) = self.chain_valid {
            let _ = writeln!(s, "modular chain re-checked: {v}");
        }
        if let Some(p) = &self.deletion_path {
            render_path(&mut s, p);
        }
        if !self.lemmas.applicable() {
            let _ = writeln!(s, "verification: not applicable");
        } else {
            let _ = writeln!(
                s,
                "verification: {}",
                if self.has_failure() { "FAILED" } else { "all checks pass" }
            );
        }
        s
    }
}

fn render_path(s: &mut String, p: &PathReport) {
    let _ = writeln!(s, "deletion path:");
    if let (Some(h), Some(case)) = (p.hyperplane, p.case) {
        let _ = writeln!(
            s,
            "  H0 = hyperplane {}: {:?}, exp(A') {}, exp(A'') {}, |A''| = {}",
            h + 1,
            case,
            fmt_tuple(&p.exp_deleted),
            fmt_tuple(&p.exp_restricted),
            p.restricted_size
        );
    }
    if let Some(d) = p.deleted_linear_derivations {
        let _ = writeln!(
            s,
            "  dim D(A')_1 = {d}, split visible in given coordinates: {}",
            p.coordinate_split_visible.unwrap_or(false)
        );
    }
    match p.unique_pair {
        Some((i, j)) => {
            let _ = writeln!(s, "  hyperplanes {} and {} share a unique 3-dependency (s = {})", i + 1, j + 1, p.s);
        }
        None => {
            let _ = writeln!(s, "  no two hyperplanes share a unique 3-dependency (s = {})", p.s);
        }
    }
    if let Some(n) = &p.note {
        let _ = writeln!(s, "  note: {n}");
    }
}

fn small_modular_coatom(lattice: &IntersectionLattice, n: usize) -> CoatomCheck {
    let hit = lattice
        .modular_coatoms()
        .into_iter()
        .find(|(_, size)| size + 2 == n)
        .map(|(f, _)| f.closure.iter().map(|i| i + 1).collect::<Vec<_>>());
    CoatomCheck {
        found: hit.is_some(),
        hyperplanes: hit,
    }
}
