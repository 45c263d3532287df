use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use tensorium::certificates::{assemble_counterexample, run_checks, CheckContext, CHECK_NAMES};
use tensorium::constructions::{
    adjoin, mod_space_contains, mod_space_sample, sadjoin, AdjoinSpec, ModParams, ModSpace,
};
use tensorium::linalg::{backend, rank_exact, rank_mod_p};
use tensorium::rank_bounds::{
    monomial_decomposition, sylvester_bound, verify_spanning_certificate, verify_sym_decomposition,
    SymDecomposition, SymTarget,
};
use tensorium::tensor::{flatten, multi_slice, n_clone, poly_to_tensor, unfold};
use tensorium::wset::{build_w_order4, build_w_order6};
use tensorium::{Error, PolyForm, Rational, Tensor};

#[derive(Parser)]
#[command(name = "tensorium", version, about = "Exact tensor rank certificates")]
struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Flattening matrix T^(J) and its rank.
    Flatten {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long, value_delimiter = ',')]
        modes: Vec<usize>,
        /// Compute the rank modulo this prime instead of exactly.
        #[arg(long)]
        modular: Option<u64>,
    },
    /// Regroup modes, e.g. `--partition "1,2;3"`.
    Unfold {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        partition: String,
    },
    /// Fix the given modes to the given 1-based indices.
    Slice {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long, value_delimiter = ',')]
        modes: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        index: Vec<usize>,
    },
    /// Block-replicate a binary tensor with block size n.
    #[command(name = "clone")]
    CloneTensor {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Adjoin per-mode slice lists to a core.
    Adjoin {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Adjoin the same symmetric slices in every mode.
    Sadjoin {
        #[arg(long)]
        tensor: PathBuf,
        /// JSON list of order-(d-1) tensors.
        #[arg(long)]
        generators: PathBuf,
    },
    /// The member of a Mod space with the given parameters.
    ModspaceSample {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        params: PathBuf,
    },
    /// Whether a tensor lies in a Mod space; exit 1 if not.
    ModspaceContains {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Certify that rank-one generators span the slice space L_J.
    SpanningCert {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long, value_delimiter = ',')]
        modes: Vec<usize>,
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        symmetric: bool,
    },
    /// rank >= drk_J + drk_Jc - rank T^(J).
    Sylvester {
        #[arg(long)]
        drk_j: usize,
        #[arg(long)]
        drk_jc: usize,
        #[arg(long)]
        flat_rank: usize,
    },
    /// Waring decomposition of x^{d-1}(alpha x + d y) from distinct lambdas.
    MonomialDecomp {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambdas: Vec<String>,
    },
    /// Check a symmetric decomposition against a tensor or form; exit 1 if it differs.
    VerifyDecomp {
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Generator sets.
    Wset {
        #[command(subcommand)]
        cmd: WsetCmd,
    },
    /// Run a certificate check, or all of them.
    Verify {
        #[arg(value_parser = verify_names())]
        check: String,
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, conflicts_with = "exact")]
        modular: Option<u64>,
        /// Exact rank for the order-6 independence check (slow).
        #[arg(long)]
        exact: bool,
    },
    /// The implicit counterexample.
    Counterexample {
        #[command(subcommand)]
        cmd: CounterexampleCmd,
    },
}

#[derive(Subcommand)]
enum WsetCmd {
    Build {
        /// 5 or 6 for the order-6 set, 3 or 4 for the order-4 set.
        #[arg(long, default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 7)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum CounterexampleCmd {
    Build {
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Also report the entry at this 1-based index.
        #[arg(long, value_delimiter = ',')]
        entry: Option<Vec<usize>>,
    },
}

fn verify_names() -> clap::builder::PossibleValuesParser {
    let mut names: Vec<&str> = CHECK_NAMES.to_vec();
    names.push("all");
    clap::builder::PossibleValuesParser::new(names)
}

/// A JSON result and whether it counts as success.
struct Outcome {
    value: Value,
    ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// A tensor file, or a polynomial file (recognised by its `vars` key).
fn read_tensor(path: &Path) -> Result<Tensor, Error> {
    let v: Value = read_json(path)?;
    if v.get("vars").is_some() {
        poly_to_tensor(&serde_json::from_value::<PolyForm>(v)?)
    } else {
        Ok(serde_json::from_value(v)?)
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn parse_partition(s: &str) -> Result<Vec<Vec<usize>>, Error> {
    s.split(';')
        .map(|block| {
            block
                .split(',')
                .map(|m| {
                    m.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad mode {m:?} in partition")))
                })
                .collect()
        })
        .collect()
}

fn run(cmd: Cmd) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Flatten {
            tensor,
            modes,
            modular,
        } => {
            let t = read_tensor(&tensor)?;
            let m = flatten(&t, &modes)?;
            let rank = match modular {
                Some(p) => rank_mod_p(&m, p)?,
                None => rank_exact(&m),
            };
            Ok(Outcome::ok(json!({
                "modes": modes,
                "rows": m.rows(),
                "cols": m.cols(),
                "rank": rank,
                "modulus": modular.map(|p| p.to_string()),
                "matrix": m,
            })))
        }
        Cmd::Unfold { tensor, partition } => {
            let t = read_tensor(&tensor)?;
            Ok(Outcome::ok(to_value(&unfold(
                &t,
                &parse_partition(&partition)?,
            )?)))
        }
        Cmd::Slice {
            tensor,
            modes,
            index,
        } => {
            let t = read_tensor(&tensor)?;
            Ok(Outcome::ok(to_value(&multi_slice(&t, &modes, &index)?)))
        }
        Cmd::CloneTensor { tensor, n } => {
            let t = read_tensor(&tensor)?;
            Ok(Outcome::ok(to_value(&n_clone(&t, n)?)))
        }
        Cmd::Adjoin { spec } => {
            let spec: AdjoinSpec = read_json(&spec)?;
            Ok(Outcome::ok(to_value(&adjoin(&spec)?)))
        }
        Cmd::Sadjoin { tensor, generators } => {
            let core = read_tensor(&tensor)?;
            let gens: Vec<Tensor> = read_json(&generators)?;
            Ok(Outcome::ok(to_value(&sadjoin(&core, &gens)?)))
        }
        Cmd::ModspaceSample { space, params } => {
            let ms: ModSpace = read_json(&space)?;
            let p: ModParams = read_json(&params)?;
            Ok(Outcome::ok(to_value(&mod_space_sample(&ms, &p)?)))
        }
        Cmd::ModspaceContains { space, tensor } => {
            let ms: ModSpace = read_json(&space)?;
            let t = read_tensor(&tensor)?;
            let params = mod_space_contains(&ms, &t)?;
            Ok(Outcome {
                ok: params.is_some(),
                value: json!({ "contained": params.is_some(), "params": params }),
            })
        }
        Cmd::SpanningCert {
            tensor,
            modes,
            generators,
            symmetric,
        } => {
            let t = read_tensor(&tensor)?;
            let gens: Vec<Tensor> = read_json(&generators)?;
            match verify_spanning_certificate(&t, &modes, &gens, symmetric) {
                Ok(cert) => Ok(Outcome::ok(json!({
                    "verified": true,
                    "upper_bound": gens.len(),
                    "certificate": cert,
                }))),
                Err(
                    e @ (Error::GeneratorNotRankOne(_)
                    | Error::GeneratorNotSymmetric(_)
                    | Error::SpanFailure(_)),
                ) => Ok(Outcome {
                    ok: false,
                    value: json!({ "verified": false, "reason": e.to_string() }),
                }),
                Err(e) => Err(e),
            }
        }
        Cmd::Sylvester {
            drk_j,
            drk_jc,
            flat_rank,
        } => Ok(Outcome::ok(json!({
            "drk_j": drk_j,
            "drk_jc": drk_jc,
            "flat_rank": flat_rank,
            "lower_bound": sylvester_bound(drk_j, drk_jc, flat_rank)?,
        }))),
        Cmd::MonomialDecomp {
            alpha,
            degree,
            lambdas,
        } => {
            let alpha: Rational = alpha.parse()?;
            let lambdas = lambdas
                .iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<Rational>, Error>>()?;
            Ok(Outcome::ok(to_value(&monomial_decomposition(
                &alpha, degree, &lambdas,
            )?)))
        }
        Cmd::VerifyDecomp { decomp, tensor } => {
            let dec: SymDecomposition = read_json(&decomp)?;
            let v: Value = read_json(&tensor)?;
            let target = if v.get("vars").is_some() {
                SymTarget::Poly(serde_json::from_value(v)?)
            } else {
                SymTarget::Tensor(serde_json::from_value(v)?)
            };
            let ok = verify_sym_decomposition(&target, &dec)?;
            Ok(Outcome {
                ok,
                value: json!({ "verified": ok, "terms": dec.terms.len() }),
            })
        }
        Cmd::Wset {
            cmd: WsetCmd::Build { order, n },
        } => {
            let w = match order {
                5 | 6 => build_w_order6(n)?,
                3 | 4 => build_w_order4(),
                other => {
                    return Err(Error::Parse(format!(
                        "order {other}: expected 3 or 4 (order-4 set) or 5 or 6 (order-6 set)"
                    )))
                }
            };
            let mut value = to_value(&w);
            value["counts"] = json!({ "w1": w.w1.len(), "w": w.len() });
            Ok(Outcome::ok(value))
        }
        Cmd::Verify {
            check,
            n,
            modular,
            exact,
        } => {
            let b = if exact {
                backend("exact", None)?
            } else {
                backend("modular", modular)?
            };
            let certs = run_checks(&check, &CheckContext { n, backend: b })?;
            Ok(Outcome {
                ok: certs.iter().all(|c| c.accepted()),
                value: to_value(&certs),
            })
        }
        Cmd::Counterexample {
            cmd: CounterexampleCmd::Build { n, entry },
        } => {
            let ce = assemble_counterexample(n)?;
            let mut value = json!({
                "report": ce.report(),
                "core": { "base": ce.core().base(), "block_size": ce.core().n() },
            });
            if let Some(idx) = entry {
                value["entry"] = json!({ "index": idx, "value": ce.entry(&idx)? });
            }
            Ok(Outcome::ok(value))
        }
    }
}

fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}

fn usage_error(kind: &str, message: &str) -> ExitCode {
    let diag = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{diag}");
    ExitCode::from(2)
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("TENSORIUM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("TENSORIUM_THREADS={v:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return usage_error("Usage", e.render().to_string().trim()),
    };
    if let Err(msg) = configure_threads() {
        return usage_error("Environment", &msg);
    }
    let outcome = match run(cli.cmd) {
        Ok(o) => o,
        Err(e) => return usage_error(&error_kind(&e), &e.to_string()),
    };
    let text = serde_json::to_string_pretty(&outcome.value).expect("serializable") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return usage_error("Io", &format!("{}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
