//! `torelli`: command-line front end for `torelli-core`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::{json, Value};

use torelli_core::bounds::ENUMERATION_MAX_GENUS;
use torelli_core::selftest::{run_selftest, Level};
use torelli_core::{
    census, check_certificate, classify, decide_equal_genus1, dim_report, enumerate_symplectic_2subspaces,
    realize_splitting, reduce_to_genus1, sigma_of_subspace, symplectic_basis_of, symplectic_plane_count,
    tree_sigma_k, vanishes_main3, write_census_csv, Certificate, CycleSystem, Error, GenusContext, Gf2Subspace,
    Mode, PartitionTree, Verdict,
};

#[derive(Parser)]
#[command(name = "torelli", version, about = "Abelian cycles in the Torelli group via the Birman-Craggs-Johnson map")]
struct Cli {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Wrap output in a {"status", "payload", "diagnostics"} JSON object.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// σ of a symplectic subspace, e.g. --subspace "a1,b1".
    Sigma {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        subspace: String,
        #[arg(long, default_value = "closed")]
        mode: Mode,
    },
    /// List or count the 2-dimensional symplectic subspaces.
    Enumerate {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Decide equality of two genus-1 pair cycles, e.g. --pair1 "a1,b1; a2,b2".
    DecideEqual {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        pair1: String,
        #[arg(long)]
        pair2: String,
        /// Write the certificate here when the verdict is equal.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Replay a certificate file.
    VerifyCert { file: PathBuf },
    /// Questions about an admissible partition tree, e.g. --tree "0(1)(1)(2)".
    #[command(group(ArgGroup::new("query").required(true).args(["sigma_k", "vanishes", "reduce", "classify"])))]
    Tree {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        tree: String,
        #[arg(long)]
        sigma_k: bool,
        #[arg(long)]
        vanishes: bool,
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        classify: bool,
    },
    /// Upper and lower bounds for dim H_2 of the abelian-separating part.
    DimBounds {
        #[arg(long)]
        g: usize,
    },
    /// CSV of all admissible trees with k curves.
    Census {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, default_value = "quick")]
        level: Level,
    },
}

/// Output of a successful command: machine payload plus its text rendering.
struct Output {
    payload: Value,
    text: String,
    ok: bool,
    diagnostics: Vec<String>,
}

impl Output {
    fn ok(payload: Value, text: impl Into<String>) -> Self {
        Self { payload, text: text.into(), ok: true, diagnostics: Vec::new() }
    }
}

fn ctx(g: usize) -> Result<GenusContext, Error> {
    GenusContext::new(g)
}

fn run(cmd: Command, seed: u64) -> Result<Output, Error> {
    match cmd {
        Command::Sigma { g, subspace, mode } => {
            let s = Gf2Subspace::parse(&subspace, ctx(g)?)?;
            let v = symplectic_basis_of(&s)?;
            let p = sigma_of_subspace(&v, mode).to_string();
            Ok(Output::ok(json!(p), p))
        }
        Command::Enumerate { g, count_only } => {
            let c = ctx(g)?;
            if count_only {
                let n = if g <= ENUMERATION_MAX_GENUS {
                    enumerate_symplectic_2subspaces(c).count() as u128
                } else {
                    symplectic_plane_count(g)
                };
                return Ok(Output::ok(json!(n.to_string()), n.to_string()));
            }
            if g > ENUMERATION_MAX_GENUS {
                return Err(Error::GenusTooLarge { what: "listing planes", got: g, limit: ENUMERATION_MAX_GENUS });
            }
            let all: Vec<String> = enumerate_symplectic_2subspaces(c).map(|v| v.space().to_string()).collect();
            let text = all.join("\n");
            Ok(Output::ok(json!(all), text))
        }
        Command::DecideEqual { g, pair1, pair2, cert } => {
            let c = ctx(g)?;
            let p = CycleSystem::parse(&pair1, c)?;
            let q = CycleSystem::parse(&pair2, c)?;
            match decide_equal_genus1(&p, &q)? {
                Verdict::Equal(certificate) => {
                    let steps = certificate.steps().len();
                    if let Some(path) = cert {
                        std::fs::write(&path, certificate.to_json())
                            .map_err(|e| Error::Internal(format!("writing {}: {e}", path.display())))?;
                    }
                    Ok(Output::ok(
                        json!({"verdict": "equal", "steps": steps}),
                        format!("equal (certificate with {steps} steps)"),
                    ))
                }
                Verdict::DistinctBySigma => {
                    Ok(Output::ok(json!({"verdict": "distinct-by-sigma"}), "distinct (sigma_2 differs)"))
                }
                Verdict::Inconclusive => Ok(Output::ok(json!({"verdict": "inconclusive"}), "inconclusive")),
            }
        }
        Command::VerifyCert { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Error::CertificateFormat(format!("reading {}: {e}", file.display())))?;
            let cert = Certificate::from_json(&text)?;
            let report = check_certificate(&cert);
            let diagnostics: Vec<String> = report.to_string().lines().map(str::to_owned).collect();
            let ok = report.passed();
            Ok(Output {
                payload: json!({"valid": ok, "steps": cert.steps().len()}),
                text: format!("{}\n{}", if ok { "ok" } else { "fail" }, report).trim_end().to_owned(),
                ok,
                diagnostics,
            })
        }
        Command::Tree { g, tree, sigma_k, vanishes, reduce, classify: want_classify } => {
            let t = PartitionTree::parse(&tree, g)?;
            let payload = if sigma_k {
                let w = tree_sigma_k(&t, &realize_splitting(&t)?)?;
                json!({"sigma_k": w.to_string(), "zero": w.is_zero()})
            } else if vanishes {
                json!({"vanishes": vanishes_main3(&t)?})
            } else if reduce {
                let systems: Vec<String> = reduce_to_genus1(&t)?.iter().map(|s| s.to_string()).collect();
                json!({"reduce": systems})
            } else {
                debug_assert!(want_classify);
                let c = classify(&t)?;
                let map = |m: &std::collections::BTreeMap<usize, usize>| -> Value {
                    m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into()
                };
                json!({
                    "edges": t.edges(),
                    "outermost": c.outermost,
                    "grouping": c.grouping,
                    "cap": map(&c.cap),
                    "cap_base": map(&c.cap_base),
                    "grouped": c.grouped.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
                    "simple": c.simple,
                })
            };
            let text = serde_json::to_string(&payload).expect("json");
            Ok(Output::ok(payload, text))
        }
        Command::DimBounds { g } => {
            let r = dim_report(g)?;
            let payload = serde_json::to_value(&r).expect("json");
            Ok(Output::ok(payload, r.to_json()))
        }
        Command::Census { g, k } => {
            let rows = census(g, k)?;
            let mut buf = Vec::new();
            write_census_csv(&rows, &mut buf)?;
            let text = String::from_utf8(buf).expect("csv is utf-8");
            let payload = serde_json::to_value(&rows).expect("json");
            Ok(Output::ok(payload, text.trim_end()))
        }
        Command::Selftest { level } => {
            let results = run_selftest(level, seed);
            let ok = results.iter().all(|r| r.passed);
            let text = results
                .iter()
                .map(|r| {
                    let tag = if r.passed { "PASS" } else { "FAIL" };
                    format!("{tag} {:<20} {:>8.2}s  {}", r.name, r.seconds, r.detail)
                })
                .collect::<Vec<_>>()
                .join("\n");
            let diagnostics = results.iter().filter(|r| !r.passed).map(|r| format!("{}: {}", r.name, r.detail)).collect();
            Ok(Output { payload: serde_json::to_value(&results).expect("json"), text, ok, diagnostics })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, cli.seed) {
        Ok(out) => {
            if cli.json {
                let status = if out.ok { "ok" } else { "error" };
                let v = json!({"status": status, "payload": out.payload, "diagnostics": out.diagnostics});
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                let v = json!({"status": "error", "payload": Value::Null, "diagnostics": [e.to_string()]});
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}
