mod input;
mod render;

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use drinfeld_ext::biderivation::Biderivation;
use drinfeld_ext::ext::{
    bidual_tmodule, carlitz_ext_structure, default_bound, dual_tmodule, find_splitting, reduce_carlitz,
    reduce_dual_c, reduce_vs_carlitz, Certificate,
};
use drinfeld_ext::field::{DegreeLimitExceeded, KElement};
use drinfeld_ext::json::{encode_matrix, BiderivationJson, CertificateJson, TModuleJson};
use drinfeld_ext::parse::parse_t_poly;
use drinfeld_ext::verify::{run_suite, Suite};
use drinfeld_ext::Error;

use input::{BiderivationArgs, Context, FileSpec, Kind};
use render::{ActOut, BidualOut, CarlitzOut, DualOut, ReduceOut, SplitOut};

const ABORT_ENV: &str = "DRINFELD_EXT_ABORT_DEG";
const DEFAULT_ABORT_DEG: usize = 10_000;

#[derive(Parser, Debug)]
#[command(name = "drinfeld-ext", version, about = "Exact Ext¹ computations for Drinfeld modules and t-modules")]
struct Cli {
    /// Size of the constant field F_q.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Irreducible modulus in `g` for q = p^m, m > 1.
    #[arg(long, global = true)]
    modulus: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trials per verification suite.
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// τ-degree bound for the splitting search.
    #[arg(long, global = true)]
    bound: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Pretty)]
    output: Output,
    /// Rescale the module to a_r = 1 where the construction needs it.
    #[arg(long, global = true)]
    normalize: bool,
    /// Read the module or biderivation from a JSON file.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Π(t) on Ext¹(E, C) and the dual module E^∨.
    Dual {
        /// Coefficients a_1,...,a_r of Φ(t) = θ + a_1 τ + ... + a_r τ^r.
        #[arg(long)]
        drinfeld: Option<String>,
    },
    /// Ξ(t) on Ext¹(E^∨, C).
    Bidual {
        #[arg(long)]
        drinfeld: Option<String>,
    },
    /// Π(t) on Ext¹(C^⊗m, C^⊗n).
    CarlitzExt {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Reduces a biderivation to its canonical representative.
    Reduce {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Searches for a splitting matrix U with δ = δ^(U).
    Split {
        #[arg(value_enum, default_value = "e-vs-c")]
        kind: Kind,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Applies b ∈ F_q[t] to a class and reduces the result.
    Act {
        #[arg(value_enum)]
        kind: Kind,
        /// The element b, written in `T`.
        #[arg(long)]
        b: String,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Runs randomized property suites.
    Verify {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(clap::Args, Debug)]
struct SpecArgs {
    #[arg(long)]
    drinfeld: Option<String>,
    /// δ(t), rows separated by `;`, entries by `,`.
    #[arg(long)]
    value: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

struct Exit {
    code: u8,
    message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            _ if e.is_unsupported() => 2,
            Error::LieObstruction | Error::Undetermined(_) => 2,
            _ => 1,
        };
        Exit { code, message: e.to_string() }
    }
}

fn verification_failure(message: impl Into<String>) -> Exit {
    Exit { code: 3, message: message.into() }
}

/// Text for stdout and the exit code it goes with.
type Run = std::result::Result<(String, u8), Exit>;

fn abort_limit() -> std::result::Result<usize, Exit> {
    match std::env::var(ABORT_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Exit { code: 1, message: format!("{ABORT_ENV} must be a non-negative integer, got {s:?}") }),
        Err(_) => Ok(DEFAULT_ABORT_DEG),
    }
}

fn emit<T: serde::Serialize>(output: Output, value: &T, pretty: impl FnOnce(&T) -> String) -> String {
    match output {
        Output::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Output::Pretty => pretty(value),
    }
}

fn reduce(context: &Context, delta: &Biderivation) -> drinfeld_ext::Result<Certificate> {
    Ok(match context {
        Context::EVsC(e) => reduce_vs_carlitz(e, delta)?.certificate(),
        Context::DualVsC(e) => reduce_dual_c(e, delta)?.certificate(),
        Context::Carlitz(m, n) => reduce_carlitz(*m, *n, delta)?.certificate(),
    })
}

fn run(cli: &Cli) -> Run {
    let limit = abort_limit()?;
    let file = cli.file.as_deref().map(FileSpec::read).transpose()?;
    let fq = input::field(cli.q, cli.modulus.as_deref(), file.as_ref(), limit)?;
    let out = cli.output;
    match &cli.command {
        Command::Dual { drinfeld } => {
            let e = input::drinfeld(&fq, drinfeld.as_deref(), file.as_ref())?;
            let d = dual_tmodule(&e)?;
            let value = DualOut { pi: TModuleJson::encode(&d.pi), dual: TModuleJson::encode(&d.dual) };
            ok(emit(out, &value, render::dual))
        }
        Command::Bidual { drinfeld } => {
            let e = input::drinfeld(&fq, drinfeld.as_deref(), file.as_ref())?;
            let (e, scale) = input::maybe_normalize(e, cli.normalize)?;
            let xi = bidual_tmodule(&e)?;
            let r = e.rank();
            if xi.phi_t().get(r - 1, r - 1) != e.phi_t() {
                return Err(verification_failure("α_r differs from Φ(t)"));
            }
            let value = BidualOut {
                module: TModuleJson::encode(e.as_tmodule()),
                scale: scale.as_ref().map(KElement::to_string),
                xi: TModuleJson::encode(&xi),
            };
            ok(emit(out, &value, render::bidual))
        }
        Command::CarlitzExt { m, n } => {
            let pi = carlitz_ext_structure(&fq, *m, *n)?;
            let value = CarlitzOut { m: *m, n: *n, pi: TModuleJson::encode(&pi) };
            ok(emit(out, &value, render::carlitz))
        }
        Command::Reduce { kind, spec } => {
            let (context, delta) = input::biderivation(&fq, *kind, &spec_args(spec, cli.normalize), file.as_ref())?;
            let cert = reduce(&context, &delta)?;
            if !cert.check {
                return Err(verification_failure("certificate check failed: input - reduced is not inner(witness)"));
            }
            let value = ReduceOut { kind: kind.name().into(), certificate: CertificateJson::encode(&cert) };
            ok(emit(out, &value, render::reduce))
        }
        Command::Split { kind, spec } => {
            let (_, delta) = input::biderivation(&fq, *kind, &spec_args(spec, cli.normalize), file.as_ref())?;
            let bound = cli.bound.unwrap_or_else(|| default_bound(&delta));
            let witness = find_splitting(&delta, bound)?;
            if let Some(u) = &witness {
                if !delta.split_check(u)? {
                    return Err(verification_failure("splitting witness does not reproduce δ"));
                }
            }
            let value = SplitOut {
                delta: BiderivationJson::encode(&delta),
                bound,
                splits: witness.is_some(),
                witness: witness.as_ref().map(encode_matrix),
            };
            ok(emit(out, &value, render::split))
        }
        Command::Act { kind, b, spec } => {
            let (context, delta) = input::biderivation(&fq, *kind, &spec_args(spec, cli.normalize), file.as_ref())?;
            let b_poly = parse_t_poly(&fq, b)?;
            let right = reduce(&context, &delta.t_action_right(&b_poly))?;
            let left = reduce(&context, &delta.t_action_left(&b_poly))?;
            if !right.check || !left.check {
                return Err(verification_failure("certificate check failed"));
            }
            if right.reduced != left.reduced {
                return Err(verification_failure("δ·b and b·δ reduce to different classes"));
            }
            let value = ActOut {
                kind: kind.name().into(),
                b: KElement::from_poly(&fq, b_poly).to_string(),
                certificate: CertificateJson::encode(&right),
            };
            ok(emit(out, &value, render::act))
        }
        Command::Verify { suite } => {
            let suites = Suite::parse_list(suite)?;
            let reports: Vec<_> = suites.into_iter().map(|s| run_suite(s, &fq, cli.seed, cli.trials)).collect();
            let code = if reports.iter().all(|r| r.passed) { 0 } else { 3 };
            Ok((emit(out, &reports, |r| render::verify(r)), code))
        }
    }
}

fn ok(text: String) -> Run {
    Ok((text, 0))
}

fn spec_args(spec: &SpecArgs, normalize: bool) -> BiderivationArgs<'_> {
    BiderivationArgs {
        drinfeld: spec.drinfeld.as_deref(),
        value: spec.value.as_deref(),
        m: spec.m,
        n: spec.n,
        normalize,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let default_hook = panic::take_hook();
    panic::set_hook(Box::new(move |info| {
        if info.payload().downcast_ref::<DegreeLimitExceeded>().is_none() {
            default_hook(info);
        }
    }));
    let result = panic::catch_unwind(AssertUnwindSafe(|| run(&cli))).unwrap_or_else(|payload| {
        match payload.downcast::<DegreeLimitExceeded>() {
            Ok(d) => Err(Exit { code: 2, message: format!("{d} (raise {ABORT_ENV} to allow more)") }),
            Err(payload) => panic::resume_unwind(payload),
        }
    });
    match result {
        Ok((text, code)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(Exit { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
