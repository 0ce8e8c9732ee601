//! Command-line front end: scenario ingestion, built-in reproductions, and
//! JSON/markdown report emission.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use k3fix::cyclotomic::primitive_trace;
use k3fix::enumerate::{enumerate_configs, verify_equalities_42, Scenario};
use k3fix::error::Error;
use k3fix::lattice::parse_direct_sum;
use k3fix::lefschetz::{build_holomorphic_system, isolated_point_types, multiplicity_name};
use k3fix::report::{Report, ScenarioFile, WeierstrassFile};
use k3fix::weierstrass::{check_invariance, two_form_weight};

/// Exit codes: 0 success (including an empty solution set), 1 usage error,
/// 2 internal inconsistency.
#[derive(Parser)]
#[command(name = "k3fix", version, about = "Exact fixed-locus classification for non-symplectic K3 automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the trace of the action on the transcendental lattice
    /// (the sum of the primitive n-th roots of unity)
    Traces { n: u32 },
    /// Print invariants of a named lattice or direct sum, e.g. "U+E8+A6"
    Lattice { expr: String },
    /// Print the reduced holomorphic constraint system for an order
    Solve {
        #[arg(long)]
        order: u32,
    },
    /// Enumerate all fixed-locus configurations of a scenario file
    Enumerate {
        #[arg(long)]
        scenario: PathBuf,
        /// Emit the machine-readable JSON report instead of markdown
        #[arg(long)]
        json: bool,
        /// Write the report to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Partition the search across threads (output is identical)
        #[arg(long)]
        parallel: bool,
    },
    /// Check a diagonal action on a monomial Weierstrass model
    VerifyWeierstrass { file: PathBuf },
    /// Re-run a shipped scenario and diff against its golden report
    Repro {
        /// order7, order21 or order42
        case: String,
        /// Print the full JSON report as well
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(msg) => Failure::Internal(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

const SHIPPED_SCENARIOS: [(&str, &str); 3] = [
    ("order7", include_str!("../scenarios/order7.json")),
    ("order21", include_str!("../scenarios/order21.json")),
    ("order42", include_str!("../scenarios/order42.json")),
];

const GOLDEN_REPORTS: [(&str, &str); 3] = [
    ("order7", include_str!("../golden/order7.json")),
    ("order21", include_str!("../golden/order21.json")),
    ("order42", include_str!("../golden/order42.json")),
];

fn shipped_scenario(name: &str) -> Result<Scenario, Error> {
    shipped_scenario_depth(name, 0)
}

fn shipped_scenario_depth(name: &str, depth: usize) -> Result<Scenario, Error> {
    if depth > 4 {
        return Err(Error::InvalidScenario(format!(
            "curve containment chain too deep at `{name}`"
        )));
    }
    let text = SHIPPED_SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            Error::InvalidScenario(format!(
                "`{name}` is not a shipped scenario (use order7, order21 or order42)"
            ))
        })?;
    ScenarioFile::from_json(text)?.into_scenario(&|inner| resolve_shipped_curves(inner, depth + 1))
}

/// Resolves `contained_in` names against the shipped scenarios: the named
/// scenario must enumerate to solutions with a single curve multiset.
fn resolve_shipped_curves(name: &str, depth: usize) -> Result<Vec<u32>, Error> {
    let scenario = shipped_scenario_depth(name, depth)?;
    let solutions = enumerate_configs(&scenario, false)?;
    let mut multisets: Vec<Vec<u32>> = solutions
        .configs()
        .iter()
        .map(|c| c.curves().genus_list().to_vec())
        .collect();
    multisets.sort();
    multisets.dedup();
    match multisets.as_slice() {
        [one] => Ok(one.clone()),
        [] => Err(Error::InvalidScenario(format!(
            "scenario `{name}` has no solutions; its curves cannot contain anything"
        ))),
        _ => Err(Error::InvalidScenario(format!(
            "scenario `{name}` has several curve multisets; containment is ambiguous"
        ))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2 on its own; usage problems are exit 1 here
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Traces { n } => {
            if n == 0 {
                return Err(Failure::Usage("n must be positive".into()));
            }
            println!("{}", primitive_trace(n));
            Ok(())
        }
        Command::Lattice { expr } => {
            let lattice = parse_direct_sum(&expr)?;
            let inv = lattice.invariants();
            println!("{lattice}");
            println!("rank: {}", inv.rank);
            println!("determinant: {}", inv.determinant);
            println!("signature: ({},{})", inv.signature.0, inv.signature.1);
            if inv.is_degenerate {
                println!("degenerate: radical of rank {}", inv.null_rank);
            }
            println!("even: {}", inv.is_even);
            println!("unimodular: {}", inv.is_unimodular);
            Ok(())
        }
        Command::Solve { order } => {
            let system = build_holomorphic_system(order)?;
            let types = isolated_point_types(order);
            println!(
                "order {order}: {} isolated point types + g_sum, {} coordinate equations",
                types.len(),
                system.equalities.len()
            );
            let rank = system.rank();
            println!("rank: {rank}");
            // present the last `rank` type multiplicities in terms of the rest
            let dependents: Vec<String> = types[types.len() - rank..]
                .iter()
                .map(multiplicity_name)
                .collect();
            let dependent_refs: Vec<&str> = dependents.iter().map(String::as_str).collect();
            let elimination = match system.solve_for(&dependent_refs) {
                Ok(e) => e,
                Err(_) => system
                    .reduced(&[])
                    .ok_or_else(|| Failure::Internal("holomorphic system inconsistent".into()))?,
            };
            print!("{elimination}");
            Ok(())
        }
        Command::Enumerate { scenario, json, out, parallel } => {
            let text = std::fs::read_to_string(&scenario).map_err(|e| {
                Failure::Usage(format!("cannot read {}: {e}", scenario.display()))
            })?;
            let file = ScenarioFile::from_json(&text)?;
            let scenario = file.into_scenario(&|name| resolve_shipped_curves(name, 0))?;
            let solutions = enumerate_configs(&scenario, parallel)?;
            let report = Report::new(&scenario, &solutions);
            let rendered = if json { report.to_json() } else { report.to_markdown() };
            match out {
                Some(path) => std::fs::write(&path, rendered).map_err(|e| {
                    Failure::Usage(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{rendered}"),
            }
            Ok(())
        }
        Command::VerifyWeierstrass { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
            let parsed = WeierstrassFile::from_json(&text)?;
            let (model, action) = parsed.into_model()?;
            let [wx, wy, wt] = action.weights();
            println!("equation: {model}");
            println!(
                "action: order {}, (x,y,t) -> (z^{wx} x, z^{wy} y, z^{wt} t)",
                action.order()
            );
            println!("action order: {}", action.actual_order());
            match check_invariance(&model, &action) {
                Ok(weight) => {
                    println!("invariance: OK, common weight {weight} (mod {})", action.order());
                    let w = two_form_weight(&action);
                    println!("two-form weight: {} (mod {})", w.weight, action.order());
                    if w.is_symplectic_or_trivial() {
                        println!("verdict: symplectic or trivial (2-form preserved)");
                    } else if w.is_unit {
                        println!(
                            "verdict: non-symplectic of full order {}",
                            action.order()
                        );
                    } else {
                        println!("verdict: 2-form weight is not a unit mod {}", action.order());
                    }
                }
                Err(Error::NonInvariant(weights)) => {
                    println!("invariance: FAILED; per-monomial weights:");
                    for (label, w) in weights {
                        println!("  {label}: {w}");
                    }
                }
                Err(other) => return Err(other.into()),
            }
            Ok(())
        }
        Command::Repro { case, json } => {
            let scenario = shipped_scenario(&case)?;
            let solutions = enumerate_configs(&scenario, false)?;
            let report = Report::new(&scenario, &solutions);
            println!("{}", report.summary());
            if case == "order42" {
                let tightness = verify_equalities_42(&scenario)?;
                let tight: Vec<String> = tightness
                    .iter()
                    .filter_map(|g| {
                        g.common_sum.filter(|&s| s > 0).map(|s| {
                            let members: Vec<String> =
                                g.members.iter().map(|t| t.to_string()).collect();
                            format!("{} = {s}", members.join(" + "))
                        })
                    })
                    .collect();
                println!("tight group sums: {}", tight.join("; "));
            }
            if json {
                println!("{}", report.to_json());
            }
            let golden = GOLDEN_REPORTS
                .iter()
                .find(|(n, _)| *n == case)
                .map(|(_, t)| *t)
                .ok_or_else(|| Failure::Usage(format!("no golden report for `{case}`")))?;
            let expected = Report::from_json(golden)?;
            if expected == report {
                println!("repro {case}: PASS");
                Ok(())
            } else {
                println!("repro {case}: FAIL");
                println!("--- expected ---");
                println!("{}", expected.to_json());
                println!("--- actual ---");
                println!("{}", report.to_json());
                Err(Failure::Internal(format!(
                    "report for `{case}` diverges from the golden output"
                )))
            }
        }
    }
}
