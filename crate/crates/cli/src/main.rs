//! `hyperarr`: command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 finding (open configurations or
//! a failed verification check).

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use hyperarr::catalog::{self, FAMILIES, FIXED};
use hyperarr::derivations::minimal_generator_degrees;
use hyperarr::lattice::build_lattice;
use hyperarr::report::{freeness_any, summarize_freeness, Report, SupersolvableSummary, VerifyReport};
use hyperarr::scan::scan;
use hyperarr::{Arrangement, Error};

#[derive(Parser)]
#[command(name = "hyperarr", version)]
#[command(about = "Exact analysis of central hyperplane arrangements over the rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: freeness, Poincaré polynomial, supersolvability, dependencies, lemma checks
    Analyze {
        /// Path to a .arr file or a catalog name (A1..A8, B4, SS22(5), Fam5(2,-1), ...)
        source: String,
        /// Largest derivation degree to solve for
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Freeness verdict with a Saito certificate or a witness
    Freeness {
        source: String,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Supersolvability with a maximal modular chain
    Supersolvable {
        source: String,
        #[arg(long)]
        json: bool,
    },
    /// Intersection lattice, Möbius values and Poincaré polynomial
    Lattice {
        source: String,
        #[arg(long)]
        json: bool,
    },
    /// Dimensions of D(A)_d and minimal generators up to a degree
    Derivations {
        source: String,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate and classify rank-2 configurations for rank k
    Scan {
        k: usize,
        /// Print open configuration classes
        #[arg(long)]
        list_open: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check the low-exponent identities and the supersolvability pipeline
    Verify {
        source: String,
        #[arg(long)]
        json: bool,
    },
    /// List catalog entries, or print one as a .arr file
    Catalog { name: Option<String> },
}

fn load(source: &str) -> Result<Arrangement, Error> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io {
            path: source.to_string(),
            message: e.to_string(),
        })?;
        let a = Arrangement::parse(&text)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(source);
        let named = a.name().is_none();
        Ok(if named { a.with_name(stem) } else { a })
    } else {
        catalog::lookup(source)
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Analyze { source, max_degree, json } => {
            let a = load(&source)?;
            let r = Report::build(&a, max_degree)?;
            if json {
                print_json(&r);
            } else {
                print!("{}", r.render_text());
            }
        }
        Command::Freeness { source, max_degree, json } => {
            let a = load(&source)?;
            let (v, note) = freeness_any(&a, max_degree)?;
            let s = summarize_freeness(&v, &a.var_names(), note);
            if json {
                print_json(&s);
            } else {
                print!("freeness: {}", s.status);
                if let Some(e) = &s.exponents {
                    print!(", exponents {e:?}");
                }
                println!();
                if let Some(w) = &s.witness {
                    println!("witness: {}", hyperarr::report::witness_text(w));
                }
                println!("dim D(A)_d for d = 0..{}: {:?}", s.degree_reached, s.dims);
                println!("minimal generator degrees found: {:?}", s.min_gen_degrees);
                if let Some(b) = &s.basis {
                    println!("basis (det = {} Q):", s.saito_constant.as_deref().unwrap_or("?"));
                    for d in b {
                        println!("  {d}");
                    }
                }
                if let Some(n) = &s.note {
                    println!("note: {n}");
                }
            }
        }
        Command::Supersolvable { source, json } => {
            let a = load(&source)?;
            let lat = build_lattice(&a);
            let s = SupersolvableSummary::from_chain(lat.modular_chain());
            let coatoms: Vec<Vec<usize>> = lat
                .modular_coatoms()
                .iter()
                .map(|(f, _)| f.closure.iter().map(|i| i + 1).collect())
                .collect();
            if json {
                print_json(&json!({ "supersolvable": s, "modular_coatoms": coatoms }));
            } else {
                println!("supersolvable: {}", s.supersolvable);
                if let Some(c) = &s.chain {
                    for step in c {
                        println!("  rank {}: {:?}", step.rank, step.hyperplanes);
                    }
                }
                if let Some(e) = &s.chain_exponents {
                    println!("exponents from chain: {e:?}");
                }
                println!("modular coatoms: {coatoms:?}");
            }
        }
        Command::Lattice { source, json } => {
            let a = load(&source)?;
            let lat = build_lattice(&a);
            let levels: Vec<Vec<serde_json::Value>> = (0..=lat.rank())
                .map(|r| {
                    lat.level_indices(r)
                        .map(|i| {
                            let f = lat.flat(i);
                            json!({
                                "hyperplanes": f.closure.iter().map(|h| h + 1).collect::<Vec<_>>(),
                                "mobius": lat.mobius(i),
                            })
                        })
                        .collect()
                })
                .collect();
            let poly = lat.poincare_polynomial();
            if json {
                print_json(&json!({
                    "rank": lat.rank(),
                    "level_sizes": lat.level_sizes(),
                    "levels": levels,
                    "poincare": poly.coefficients(),
                }));
            } else {
                println!("rank {}, flats per rank {:?}", lat.rank(), lat.level_sizes());
                for (r, level) in levels.iter().enumerate() {
                    println!("rank {r}:");
                    for f in level {
                        println!("  {} mu = {}", f["hyperplanes"], f["mobius"]);
                    }
                }
                println!("poincare: {poly}");
            }
        }
        Command::Derivations { source, max_degree, json } => {
            let a = load(&source)?;
            let s = minimal_generator_degrees(&a, max_degree);
            let names = a.var_names();
            let gens: Vec<String> = s.generators.iter().map(|g| g.display_with(&names).to_string()).collect();
            if json {
                print_json(&json!({
                    "bound": s.bound,
                    "dims": s.dims,
                    "min_gen_degrees": s.min_gen_degrees,
                    "generators": gens,
                }));
            } else {
                for (d, n) in s.dims.iter().enumerate() {
                    println!("dim D(A)_{d} = {n}");
                }
                println!("minimal generator degrees up to {}: {:?}", s.bound, s.min_gen_degrees);
                for (g, deg) in gens.iter().zip(&s.min_gen_degrees) {
                    println!("  [{deg}] {g}");
                }
            }
        }
        Command::Scan { k, list_open, json } => {
            if k < 3 {
                return Err(Error::RankTooSmall(k));
            }
            let s = scan(k);
            if json {
                print_json(&s);
            } else {
                println!("k = {k}, n = {}, admissible (u, v): {:?}", 2 * k, s.admissible);
                for c in &s.classes {
                    println!("{c}");
                }
                println!(
                    "classes {}: supersolvable by s {}, rank-deficient {}, reducible {}, lonely pair {}, open {}",
                    s.total, s.supersolvable_by_s, s.rank_deficient, s.reducible, s.lonely_pair, s.open
                );
                println!("open without the lonely-pair rule: {}", s.open_without_pair_rule());
                let red: Vec<_> = s.reducible_classes().collect();
                if !red.is_empty() {
                    println!("eliminated only by disconnectedness:");
                    for c in red {
                        println!("  {}", c.configuration);
                    }
                }
                if list_open {
                    println!("open classes:");
                    for c in s.open_classes() {
                        println!("  {}  (u={}, v={}, s={})", c.configuration, c.u, c.v, c.s);
                    }
                }
            }
            if s.open > 0 {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Verify { source, json } => {
            let a = load(&source)?;
            let r = VerifyReport::build(&a)?;
            if json {
                print_json(&r);
            } else {
                print!("{}", r.render_text());
            }
            if r.has_failure() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Catalog { name } => match name {
            None => {
                for e in FIXED {
                    println!("{:<6} {:<48} {}", e.name, e.polynomial, e.note);
                }
                for (pattern, note) in FAMILIES {
                    println!("{pattern:<14} {note}");
                }
            }
            Some(n) => {
                let a = catalog::lookup(&n)?;
                println!("# {n}: {a}");
                print!("{}", a.to_arr());
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
