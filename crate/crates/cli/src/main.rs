use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use twistlab::hopf::Witness;
use twistlab::states::{costructure_table, recipe, StateId};
use twistlab::suite::{dump_matrix, emit_report, run_suite, OutputFormat, Suite, SuiteConfig};
use twistlab::twist::{
    alternative_chain, chain_twist, extended_twist_generic, external_factor, jordanian_factor,
    ExternalKind,
};
use twistlab::{Rational, TwistSequence, WitnessKind};

#[derive(Parser)]
#[command(
    name = "twistlab",
    version,
    about = "Exact verification of twist deformations of U(gl(N))"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and print a report.
    Verify(VerifyArgs),
    /// Materialize a twist in a witness representation and write its matrix.
    Dump(DumpArgs),
    /// Print a costructure table of H~(2,1) as JSON.
    Table(TableArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON or TOML file with the suite configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated suite names, or `all`.
    #[arg(long, value_delimiter = ',')]
    suites: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    r: Vec<usize>,
    /// Comma-separated rationals such as `1/3`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Vec<Rational>,
    /// `fundamental`, `doubled`, or both comma-separated.
    #[arg(long, value_delimiter = ',')]
    witness: Vec<WitnessKind>,
    #[arg(long)]
    format: Option<OutputFormat>,
    #[arg(long)]
    dump_dir: Option<PathBuf>,
    /// Random inputs per law in the `core` suite.
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DumpArgs {
    /// jordanian, extended, chain, alt-chain, external-e0, external-e1, or a
    /// state label such as `E0J1J0`.
    twist: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    alpha: Rational,
    /// Carrier index for `extended`, or `r` for states.
    #[arg(long, default_value_t = 3)]
    r: usize,
    /// Chain length for `chain`.
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value = "fundamental")]
    witness: WitnessKind,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    state: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    r: usize,
}

fn load_config(path: &Path) -> anyhow::Result<SuiteConfig> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_toml = path.extension().is_some_and(|e| e == "toml");
    if is_toml {
        Ok(toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
    } else {
        Ok(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
    }
}

fn parse_suites(names: &[String]) -> anyhow::Result<Vec<Suite>> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(name.parse()?);
        }
    }
    Ok(out)
}

fn build_config(args: &VerifyArgs) -> anyhow::Result<SuiteConfig> {
    let mut cfg = match (&args.config, args.n) {
        (Some(path), _) => load_config(path)?,
        (None, Some(n)) => SuiteConfig::new(n),
        (None, None) => bail!("either --n or --config is required"),
    };
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if !args.suites.is_empty() {
        cfg.suites = parse_suites(&args.suites)?;
    }
    if !args.r.is_empty() {
        cfg.r_values = args.r.clone();
    }
    if !args.alpha.is_empty() {
        cfg.alpha_values = args.alpha.clone();
    }
    if !args.witness.is_empty() {
        cfg.witness_reps = args.witness.clone();
    }
    if let Some(f) = args.format {
        cfg.output = f;
    }
    if args.dump_dir.is_some() {
        cfg.dump_dir = args.dump_dir.clone();
    }
    if let Some(c) = args.cases {
        cfg.core_cases = c;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn verify(args: &VerifyArgs) -> anyhow::Result<bool> {
    let cfg = build_config(args)?;
    let report = run_suite(&cfg)?;
    print!("{}", emit_report(&report, cfg.output));
    Ok(report.all_passed())
}

fn named_twist(args: &DumpArgs) -> anyhow::Result<TwistSequence> {
    let n = args.n;
    Ok(match args.twist.as_str() {
        "jordanian" => TwistSequence::single(jordanian_factor(n, 1)?),
        "extended" => extended_twist_generic(n, args.r, &args.alpha)?,
        "chain" => chain_twist(n, args.p)?,
        "alt-chain" => alternative_chain(n)?,
        "external-e0" => TwistSequence::single(external_factor(n, ExternalKind::E0Tilde)?),
        "external-e1" => TwistSequence::single(external_factor(n, ExternalKind::E1Tilde)?),
        other => {
            let state: StateId = other.parse()?;
            costructure_table(state, n, args.r)?;
            recipe(n, args.r, state.steps())?
        }
    })
}

fn dump(args: &DumpArgs) -> anyhow::Result<bool> {
    let f = named_twist(args)?;
    let w = Witness::new(args.witness, args.n)?;
    let (m, _) = w.materialize(&f)?;
    match &args.out {
        Some(path) => {
            dump_matrix(&m, path)?;
            eprintln!(
                "wrote {} ({}: dim {}, {} entries)",
                path.display(),
                f.names().join(" "),
                m.dim(),
                m.nnz()
            );
        }
        None => print!("{}", m.to_dump_string()),
    }
    Ok(true)
}

fn table(args: &TableArgs) -> anyhow::Result<bool> {
    let state: StateId = args.state.parse()?;
    let t = costructure_table(state, args.n, args.r)?;
    println!("{}", serde_json::to_string_pretty(&t)?);
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Dump(a) => dump(a),
        Command::Table(a) => table(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
