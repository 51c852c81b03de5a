//! Command-line definitions and the subcommand implementations.
//!
//! Every subcommand renders into a [`Report`] instead of printing, so the
//! binary stays a thin shell and the integration tests can call the same
//! code paths.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glued_core::cube_complex::{self, CubeVertex};
use glued_core::dynamics::{folner_ratio, folner_set, format_ratio, free_semigroup_check};
use glued_core::finite_pv::{classify, verify_classification};
use glued_core::lef::{CheckReport, Lef, Mode};
use glued_core::text::parse_word;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::parallel::par_multiplicativity;
use crate::spec::{parse_context, parse_group, parse_vertex, VertexJson};
use crate::suite::{self, ConfigFile, Format, SuiteConfig};

/// Name of the environment variable capping enumeration sizes.
pub const BUDGET_VAR: &str = "PV_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "glued", version, about = "Exact computation in glued products of groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a word in the generators to the form g·h·a.
    Eval(EvalArgs),
    /// Classify the glued product of two finite groups as Alt or Sym.
    Classify(ClassifyArgs),
    /// Explore the commensurated-subset cube complex.
    #[command(subcommand)]
    Cube(CubeCommand),
    /// Local embeddings into finite glued products.
    #[command(subcommand)]
    Lef(LefCommand),
    /// Check that positive words in g and h are pairwise distinct.
    Pong(PongArgs),
    /// Følner ratio of the box scheme in the first factor.
    Folner(FolnerArgs),
    /// Run a property suite.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct ContextArgs {
    /// Left factor G: a short name (Z, Z/5, Z^2, (Z/2)^2, F2, S3), JSON, or @file.
    #[arg(long)]
    pub left: String,
    /// Right factor H, in the same syntax.
    #[arg(long)]
    pub right: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub context: ContextArgs,
    #[arg(
        allow_hyphen_values = true,
        default_value = "",
        help = "Letters G:<x>, H:<y>, PERM:<cycles>, separated by whitespace"
    )]
    pub word: String,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub context: ContextArgs,
    /// Also compute the order of the realized group with Schreier–Sims.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum CubeCommand {
    /// Vertices within a radius of the copy of G, as DOT or JSON lines.
    Ball(BallArgs),
    /// A monolith element carrying one vertex to another.
    Transport(TransportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BallFormat {
    Dot,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct BallArgs {
    #[arg(long, default_value = "Z")]
    pub left: String,
    #[arg(long, default_value = "Z")]
    pub right: String,
    #[arg(long)]
    pub radius: usize,
    /// Largest payload length of the points allowed in a ledger.
    #[arg(long, default_value_t = 3)]
    pub payload: u64,
    #[arg(long, value_enum, default_value_t = BallFormat::Dot)]
    pub format: BallFormat,
}

#[derive(Debug, Args)]
pub struct TransportArgs {
    #[arg(long, default_value = "Z")]
    pub left: String,
    #[arg(long, default_value = "Z")]
    pub right: String,
    /// Source vertex as {"removed": [...], "added": [...]}, or @file.
    #[arg(long)]
    pub from: String,
    /// Target vertex, in the same syntax.
    #[arg(long)]
    pub to: String,
}

#[derive(Debug, Subcommand)]
pub enum LefCommand {
    /// Verify the local embedding Φ_n on its window.
    Check(LefArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum LefCheck {
    Multiplicativity,
    Injectivity,
    WeakEquivariance,
    Pushforward,
    Bijection,
}

impl LefCheck {
    fn name(self) -> &'static str {
        match self {
            LefCheck::Multiplicativity => "multiplicativity",
            LefCheck::Injectivity => "injectivity",
            LefCheck::WeakEquivariance => "weak_equivariance",
            LefCheck::Pushforward => "pushforward",
            LefCheck::Bijection => "bijection",
        }
    }
}

#[derive(Debug, Args)]
pub struct LefArgs {
    #[command(flatten)]
    pub context: ContextArgs,
    #[arg(short = 'n', long = "n")]
    pub n: u64,
    /// `exhaustive` or `sample:<k>`. Defaults to exhaustive for
    /// multiplicativity and sample:100000 for injectivity.
    #[arg(long)]
    pub mode: Option<String>,
    /// Modulus of the cyclic quotients (default 8n+1).
    #[arg(long)]
    pub modulus: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of pairs or elements to enumerate; PV_BUDGET also caps it.
    #[arg(long)]
    pub budget: Option<u128>,
    /// Checks to run (repeatable; default: all).
    #[arg(long = "check", value_enum)]
    pub checks: Vec<LefCheck>,
}

#[derive(Debug, Args)]
pub struct PongArgs {
    #[arg(long, default_value = "Z")]
    pub left: String,
    #[arg(long, default_value = "Z")]
    pub right: String,
    /// Element of G.
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// Element of H.
    #[arg(long, allow_hyphen_values = true)]
    pub h: String,
    /// Maximum word length.
    #[arg(short = 'L', long = "length")]
    pub length: usize,
}

#[derive(Debug, Args)]
pub struct FolnerArgs {
    #[arg(long, default_value = "Z")]
    pub left: String,
    #[arg(long, default_value = "Z")]
    pub right: String,
    #[arg(short = 'n', long = "n")]
    pub n: u64,
    /// The element to test, as a word.
    #[arg(long, allow_hyphen_values = true)]
    pub test: String,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// core, finite, cube, lef, dynamics or all.
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Run a single check, named `check` or `suite/check`.
    #[arg(long)]
    pub only: Option<String>,
    #[arg(long, help = "TOML file with seed, format, budget, [samples] and [context]")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub budget: Option<u128>,
}

/// Text to print and the process exit code: 0 success, 1 a check failed,
/// 2 (via [`CliError`]) invalid input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub exit_code: i32,
}

impl Report {
    fn ok(stdout: String) -> Report {
        Report { stdout, exit_code: 0 }
    }

    fn with_status(stdout: String, success: bool) -> Report {
        Report { stdout, exit_code: if success { 0 } else { 1 } }
    }
}

/// The budget from `PV_BUDGET`, if set.
pub fn env_budget() -> CliResult<Option<u128>> {
    match std::env::var(BUDGET_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<u128>() {
            Ok(b) if b > 0 => Ok(Some(b)),
            _ => Err(CliError::Budget(v)),
        },
    }
}

/// The smallest of the given caps, or the default.
fn effective_budget(caps: &[Option<u128>]) -> u128 {
    caps.iter().flatten().copied().min().unwrap_or(glued_core::lef::DEFAULT_BUDGET)
}

pub fn run(cli: Cli) -> CliResult<Report> {
    match cli.command {
        Command::Eval(a) => eval(&a),
        Command::Classify(a) => classify_cmd(&a),
        Command::Cube(CubeCommand::Ball(a)) => cube_ball(&a),
        Command::Cube(CubeCommand::Transport(a)) => cube_transport(&a),
        Command::Lef(LefCommand::Check(a)) => lef_check(&a),
        Command::Pong(a) => pong(&a),
        Command::Folner(a) => folner(&a),
        Command::Suite(a) => suite_cmd(&a),
    }
}

fn eval(a: &EvalArgs) -> CliResult<Report> {
    let ctx = parse_context(&a.context.left, &a.context.right)?;
    let sigma = ctx.normalize(&parse_word(&ctx, &a.word)?)?;
    Ok(Report::ok(format!("{sigma}\n")))
}

fn classify_cmd(a: &ClassifyArgs) -> CliResult<Report> {
    let (g, h) = (parse_group(&a.context.left)?, parse_group(&a.context.right)?);
    if a.verify {
        let v = verify_classification(&g, &h)?;
        let verdict = if v.holds() { "verified" } else { "MISMATCH" };
        let out = format!("{}({})\norder {} ({verdict})\n", v.classification, v.degree, v.order);
        return Ok(Report::with_status(out, v.holds()));
    }
    let c = classify(&g, &h)?;
    let degree = g.order().unwrap_or(0) + h.order().unwrap_or(0) - 1;
    Ok(Report::ok(format!("{c}({degree})\n")))
}

fn cube_ball(a: &BallArgs) -> CliResult<Report> {
    let ctx = parse_context(&a.left, &a.right)?;
    let vertices = cube_complex::vertex_ball(&ctx, a.radius, a.payload)?;
    let mut out = String::new();
    match a.format {
        BallFormat::Dot => {
            out.push_str("graph cube {\n");
            for (i, v) in vertices.iter().enumerate() {
                out.push_str(&format!("  v{i} [label=\"{}\", tooltip=\"{v}\"];\n", v.s_invariant()));
            }
            for (i, j) in cube_complex::edges(&vertices) {
                out.push_str(&format!("  v{i} -- v{j};\n"));
            }
            out.push_str("}\n");
        }
        BallFormat::Jsonl => {
            for v in &vertices {
                let VertexJson { removed, added } = VertexJson::from_vertex(v);
                let line = serde_json::json!({ "removed": removed, "added": added, "s": v.s_invariant() });
                out.push_str(&format!("{line}\n"));
            }
        }
    }
    Ok(Report::ok(out))
}

fn cube_transport(a: &TransportArgs) -> CliResult<Report> {
    let ctx = parse_context(&a.left, &a.right)?;
    let (v, w): (CubeVertex, CubeVertex) = (parse_vertex(&ctx, &a.from)?, parse_vertex(&ctx, &a.to)?);
    let sigma = cube_complex::transporter(&ctx, &v, &w)?;
    Ok(Report::ok(format!("{sigma}\n")))
}

fn lef_check(a: &LefArgs) -> CliResult<Report> {
    let budget = effective_budget(&[a.budget, env_budget()?]);
    let ctx = parse_context(&a.context.left, &a.context.right)?;
    let lef = Lef::new(ctx, a.n, a.modulus)?;
    let mut checks = a.checks.clone();
    if checks.is_empty() {
        checks = vec![
            LefCheck::Multiplicativity,
            LefCheck::Injectivity,
            LefCheck::WeakEquivariance,
            LefCheck::Pushforward,
            LefCheck::Bijection,
        ];
    }
    checks.sort();
    checks.dedup();
    let explicit: Option<Mode> = a.mode.as_deref().map(str::parse).transpose()?;
    let mut out = String::new();
    let mut all_passed = true;
    for check in checks {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let start = Instant::now();
        let (mode, report): (Option<Mode>, CheckReport) = match check {
            LefCheck::Multiplicativity => {
                let mode = explicit.unwrap_or(Mode::Exhaustive);
                let report = match mode {
                    Mode::Exhaustive => par_multiplicativity(&lef, budget)?,
                    Mode::Sample(_) => lef.check_multiplicativity(mode, budget, &mut rng)?,
                };
                (Some(mode), report)
            }
            LefCheck::Injectivity => {
                let mode = explicit.unwrap_or(Mode::Sample(100_000));
                (Some(mode), lef.check_injectivity(mode, budget, &mut rng)?)
            }
            LefCheck::WeakEquivariance => (None, lef.check_weak_equivariance()?),
            LefCheck::Pushforward => (None, lef.check_pushforward(budget)?),
            LefCheck::Bijection => (None, lef.check_bijection()?),
        };
        all_passed &= report.passed();
        let line = serde_json::json!({
            "check": check.name(),
            "n": a.n,
            "mode": mode.map_or_else(|| "exhaustive".to_string(), |m| m.to_string()),
            "pairs_checked": report.pairs_checked,
            "failure_count": report.failure_count,
            "failures": report.failures,
            "wall_time": start.elapsed().as_secs_f64(),
        });
        out.push_str(&format!("{line}\n"));
    }
    Ok(Report::with_status(out, all_passed))
}

fn pong(a: &PongArgs) -> CliResult<Report> {
    let ctx = parse_context(&a.left, &a.right)?;
    let g = ctx.g().parse_element(&a.g)?;
    let h = ctx.h().parse_element(&a.h)?;
    let r = free_semigroup_check(&ctx, &g, &h, a.length)?;
    let mut out = format!("words={} distinct={}\n", r.words, r.all_distinct);
    if let Some((u, v)) = &r.collision {
        out.push_str(&format!("collision: {u} = {v}\n"));
    }
    Ok(Report::with_status(out, r.all_distinct))
}

fn folner(a: &FolnerArgs) -> CliResult<Report> {
    let ctx = parse_context(&a.left, &a.right)?;
    let sigma = ctx.normalize(&parse_word(&ctx, &a.test)?)?;
    let set = folner_set(ctx.g(), a.n)?;
    Ok(Report::ok(format!("{}\n", format_ratio(&folner_ratio(&ctx, &set, &sigma)))))
}

/// Merges the config file (if any) under the command-line flags.
pub fn suite_config(a: &SuiteArgs) -> CliResult<SuiteConfig> {
    let file = match &a.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let env = env_budget()?;
    let flag_budget = a.budget.or(file.budget.map(u128::from));
    Ok(SuiteConfig {
        seed: a.seed.or(file.seed).unwrap_or(0),
        budget: effective_budget(&[flag_budget, env]),
        samples: file.samples,
        context: file.context,
        format: a.format.or(file.format).unwrap_or_default(),
        config_path: a.config.clone(),
        budget_from_env: env.is_some_and(|e| flag_budget.is_none_or(|f| e <= f)),
    })
}

fn suite_cmd(a: &SuiteArgs) -> CliResult<Report> {
    let cfg = suite_config(a)?;
    let outcomes = suite::run_suite(&a.suite, &cfg, a.only.as_deref())?;
    let passed = outcomes.iter().all(|o| o.passed);
    Ok(Report::with_status(suite::render(&outcomes, cfg.format), passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CliResult<Report> {
        run(Cli::try_parse_from(std::iter::once("glued").chain(args.iter().copied())).expect("valid arguments"))
    }

    #[test]
    fn eval_examples() {
        let r = run_args(&["eval", "--left", "Z", "--right", "Z", "G:1 H:1 G:-1 H:-1"]).unwrap();
        assert_eq!(r.stdout, "g=0 h=0 a=(e g:1 h:1)\n");
        let r = run_args(&["eval", "--left", "Z", "--right", "Z", ""]).unwrap();
        assert_eq!(r.stdout, "g=0 h=0 a=()\n");
    }

    #[test]
    fn classify_output() {
        assert_eq!(run_args(&["classify", "--left", "Z/3", "--right", "Z/3"]).unwrap().stdout, "Alt(5)\n");
        let r = run_args(&["classify", "--left", "Z/2", "--right", "Z/3", "--verify"]).unwrap();
        assert_eq!(r.stdout, "Sym(4)\norder 24 (verified)\n");
        assert!(run_args(&["classify", "--left", "Z", "--right", "Z/3"]).is_err());
    }

    #[test]
    fn folner_and_pong() {
        let r = run_args(&["folner", "-n", "1", "--test", "G:1"]).unwrap();
        assert_eq!(r.stdout, "2/3\n");
        let r = run_args(&["folner", "-n", "4", "--test", "H:-2"]).unwrap();
        assert_eq!(r.stdout, "0/1\n");
        let r = run_args(&["pong", "--g", "1", "--h", "1", "-L", "4"]).unwrap();
        assert_eq!((r.stdout.as_str(), r.exit_code), ("words=30 distinct=true\n", 0));
    }

    #[test]
    fn budgets_take_the_minimum() {
        assert_eq!(effective_budget(&[None, None]), glued_core::lef::DEFAULT_BUDGET);
        assert_eq!(effective_budget(&[Some(5), Some(3)]), 3);
        assert_eq!(effective_budget(&[None, Some(7)]), 7);
    }
}
