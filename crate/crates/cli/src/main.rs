use std::path::PathBuf;
use std::process::ExitCode;

use cfk_core::suite::{run_suite, Mutation};
use cfk_core::{eval, parse_expr, render_svg, sharpness, tau, top_alexander, KnotExpr, ParamSeq};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "cfk",
    version,
    about = "Knot Floer standard complexes and the γ₀ invariant"
)]
struct Cli {
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print γ₀ of an expression as a bracketed list.
    Gamma0 {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print τ, ε, top Alexander grading, genus and sharpness.
    Invariants {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Compare two expressions up to local equivalence.
    Equiv {
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Draw γ₀ as SVG.
    Svg {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the reproducibility suite.
    VerifyPaper {
        /// Inject a deliberate fault to confirm the checks can fail.
        #[arg(long, value_enum)]
        mutate: Option<MutateArg>,
        /// Cases in the randomized sweep.
        #[arg(long, default_value_t = 200)]
        sweep: usize,
        /// List individual failures.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MutateArg {
    CableMiddle,
    NoMod2,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct InvariantReport {
    expr: String,
    gamma0: ParamSeq,
    tau: i64,
    epsilon: i64,
    #[serde(rename = "topA")]
    top_a: i64,
    genus: Option<i64>,
    sharp: Option<bool>,
    loop_count: usize,
}

fn parse(s: &str) -> Result<KnotExpr, String> {
    parse_expr(s).map_err(|e| e.to_string())
}

fn gamma0(s: &str) -> Result<(KnotExpr, cfk_core::Evaluation), String> {
    let e = parse(s)?;
    let ev = eval(&e).map_err(|err| format!("{e}: {err}"))?;
    Ok((e, ev))
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Gamma0 { expr } => {
            let (e, ev) = gamma0(&expr)?;
            if cli.json {
                let v = serde_json::json!({ "expr": e.to_string(), "gamma0": ev.gamma0 });
                println!("{v}");
            } else {
                println!("{}", ev.gamma0);
            }
            Ok(true)
        }
        Command::Invariants { expr } => {
            let (e, ev) = gamma0(&expr)?;
            let s = &ev.gamma0;
            let sharp = match ev.genus {
                Some(g) => Some(sharpness(g, s).map_err(|err| err.to_string())?.sharp),
                None => None,
            };
            let rep = InvariantReport {
                expr: e.to_string(),
                gamma0: s.clone(),
                tau: tau(s),
                epsilon: cfk_core::epsilon(s),
                top_a: top_alexander(s),
                genus: ev.genus,
                sharp,
                loop_count: ev.closed_components,
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&rep).map_err(|err| err.to_string())?
                );
            } else {
                println!("expr: {}", rep.expr);
                println!("gamma0: {}", rep.gamma0);
                println!("tau: {}", rep.tau);
                println!("epsilon: {}", rep.epsilon);
                println!("topA: {}", rep.top_a);
                if let Some(g) = rep.genus {
                    println!("genus: {g}");
                }
                if let Some(sh) = rep.sharp {
                    println!("sharp: {sh}");
                }
                println!("loopCount: {}", rep.loop_count);
            }
            Ok(true)
        }
        Command::Equiv { first, second } => {
            let (e1, a) = gamma0(&first)?;
            let (e2, b) = gamma0(&second)?;
            let same = a.gamma0 == b.gamma0;
            let verdict = if same { "EQUIVALENT" } else { "NOT EQUIVALENT" };
            if cli.json {
                let v = serde_json::json!({
                    "first": e1.to_string(),
                    "second": e2.to_string(),
                    "gamma0First": a.gamma0,
                    "gamma0Second": b.gamma0,
                    "equivalent": same,
                });
                println!("{v}");
            } else {
                println!("{verdict}");
            }
            Ok(same)
        }
        Command::Svg { expr, out } => {
            let (_, ev) = gamma0(&expr)?;
            let svg = render_svg(&ev.gamma0);
            match out {
                Some(path) => {
                    std::fs::write(&path, svg)
                        .map_err(|err| format!("{}: {err}", path.display()))?;
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::json!({ "out": path.display().to_string() })
                        );
                    } else {
                        println!("wrote {}", path.display());
                    }
                }
                None => print!("{svg}"),
            }
            Ok(true)
        }
        Command::VerifyPaper {
            mutate,
            sweep,
            verbose,
        } => {
            let m = match mutate {
                None => Mutation::None,
                Some(MutateArg::CableMiddle) => Mutation::CableMiddle,
                Some(MutateArg::NoMod2) => Mutation::NoMod2,
            };
            let rep = run_suite(m, sweep);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&rep).map_err(|err| err.to_string())?
                );
            } else {
                for c in &rep.criteria {
                    let verdict = if c.passed() { "PASS" } else { "FAIL" };
                    println!(
                        "criterion {}: {verdict} ({}; {} checks, {} failed)",
                        c.id,
                        c.title,
                        c.cases,
                        c.failures.len()
                    );
                    let shown = if verbose { c.failures.len() } else { 3 };
                    for f in c.failures.iter().take(shown) {
                        println!("    {f}");
                    }
                }
                println!(
                    "{}",
                    if rep.passed() {
                        "all checks passed"
                    } else {
                        "some checks failed"
                    }
                );
            }
            Ok(rep.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
