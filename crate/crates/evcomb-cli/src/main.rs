//! `evcomb` command line: combine evidence documents, run canonical
//! scenarios, and bench the cross-rule equivalence properties.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 total conflict under
//! Dempster's rule, 4 property violation in bench check mode.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use evcomb::checks::{run_check, CheckKind};
use evcomb::doc::parse_input_document;
use evcomb::render::{render_report, Format};
use evcomb::rules::{DeltaPolicy, LambdaPolicy, RuleSpec};
use evcomb::scenarios::{comparison_report, zadeh_scenario, Scenario};
use evcomb::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_TOTAL_CONFLICT: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "evcomb",
    version,
    about = "Belief-function evidence combination"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Combine the sources of an evidence document under one rule.
    Combine {
        /// Path to a JSON evidence document.
        #[arg(long)]
        input: PathBuf,
        /// conjunctive|disjunctive|dempster|pcr5|pcr6|yamada1|mixed|cbc
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        policies: PolicyArgs,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Run a canonical scenario across rules.
    Scenario {
        #[command(subcommand)]
        which: ScenarioCommand,
    },
    /// Run a named equivalence/conservation check over seeded random cases.
    Bench {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// pcr5-pcr6|yamada1-pcr5|eq40-pcr6|mixed-disjunctive|sum-to-one|oracle-agreement
        #[arg(long)]
        check: String,
        #[arg(long, default_value = "table")]
        format: String,
    },
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Zadeh's two-expert example with residual mass epsilon on C.
    Zadeh {
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// `all` or a comma-separated list of rule names.
        #[arg(long, default_value = "all")]
        rules: String,
        #[command(flatten)]
        policies: PolicyArgs,
        #[arg(long, default_value = "table")]
        format: String,
    },
}

#[derive(Args)]
struct PolicyArgs {
    /// Mixed-rule delta policy: `overlap` or `fixed:<v>` with v in [0,1].
    #[arg(long, default_value = "overlap")]
    delta: String,
    /// Compromise-rule lambda policy: `cardinality`.
    #[arg(long, default_value = "cardinality")]
    lambda: String,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_INPUT,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TotalConflict => EXIT_TOTAL_CONFLICT,
            _ => EXIT_INPUT,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn parse_format(name: &str) -> Result<Format, CliError> {
    Format::parse(name)
        .ok_or_else(|| CliError::input(format!("unknown format `{name}` (use table or json)")))
}

fn parse_delta(spec: &str) -> Result<DeltaPolicy, CliError> {
    if spec == "overlap" {
        return Ok(DeltaPolicy::Overlap);
    }
    if let Some(value) = spec.strip_prefix("fixed:") {
        let v: f64 = value
            .parse()
            .map_err(|_| CliError::input(format!("bad fixed delta `{value}`")))?;
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::BadDelta(v).into());
        }
        return Ok(DeltaPolicy::Fixed(v));
    }
    Err(CliError::input(format!(
        "unknown delta policy `{spec}` (use overlap or fixed:<v>)"
    )))
}

fn parse_lambda(spec: &str) -> Result<LambdaPolicy, CliError> {
    match spec {
        "cardinality" => Ok(LambdaPolicy::Cardinality),
        _ => Err(CliError::input(format!(
            "unknown lambda policy `{spec}` (use cardinality)"
        ))),
    }
}

fn parse_rules(spec: &str, policies: &PolicyArgs) -> Result<Vec<RuleSpec>, CliError> {
    let delta = parse_delta(&policies.delta)?;
    let lambda = parse_lambda(&policies.lambda)?;
    if spec == "all" {
        return Ok(RuleSpec::all()
            .into_iter()
            .map(|rule| match rule {
                RuleSpec::Mixed(_) => RuleSpec::Mixed(delta),
                RuleSpec::Cbc(_) => RuleSpec::Cbc(lambda),
                other => other,
            })
            .collect());
    }
    spec.split(',')
        .map(|name| {
            RuleSpec::by_name(name.trim(), delta, lambda)
                .ok_or_else(|| CliError::input(format!("unknown rule `{name}`")))
        })
        .collect()
}

fn scenario_from_document(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let (frame, sources) = parse_input_document(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if sources.len() < 2 {
        return Err(Error::TooFewSources(sources.len()).into());
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "document".to_owned());
    Scenario::new(name, frame, sources, "").map_err(CliError::from)
}

/// Rendered output plus the exit code to finish with.
struct Outcome {
    text: String,
    code: u8,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Combine {
            input,
            rule,
            policies,
            format,
        } => {
            let format = parse_format(&format)?;
            let rules = parse_rules(&rule, &policies)?;
            let scenario = scenario_from_document(&input)?;
            let report = comparison_report(&scenario, &rules)?;
            Ok(Outcome {
                text: render_report(&report, format),
                code: 0,
            })
        }
        Command::Scenario { which } => match which {
            ScenarioCommand::Zadeh {
                epsilon,
                rules,
                policies,
                format,
            } => {
                let format = parse_format(&format)?;
                let rules = parse_rules(&rules, &policies)?;
                let scenario = zadeh_scenario(epsilon)?;
                let report = comparison_report(&scenario, &rules)?;
                Ok(Outcome {
                    text: render_report(&report, format),
                    code: 0,
                })
            }
        },
        Command::Bench {
            trials,
            seed,
            check,
            format,
        } => {
            let format = parse_format(&format)?;
            let kind = CheckKind::parse(&check)
                .ok_or_else(|| CliError::input(format!("unknown check `{check}`")))?;
            let run = run_check(kind, trials, seed)?;
            let verdict = if run.pass { "pass" } else { "fail" };
            let text = match format {
                Format::Table => format!(
                    "check={} trials={} max_abs_diff={:.3e} tolerance={:.0e} verdict={}\n",
                    kind.name(),
                    run.trials,
                    run.max_abs_diff,
                    run.tolerance,
                    verdict
                ),
                Format::Json => format!(
                    "{{\"check\": \"{}\", \"trials\": {}, \"max_abs_diff\": {:e}, \"tolerance\": {:e}, \"verdict\": \"{}\"}}\n",
                    kind.name(),
                    run.trials,
                    run.max_abs_diff,
                    run.tolerance,
                    verdict
                ),
            };
            Ok(Outcome {
                text,
                code: if run.pass { 0 } else { EXIT_CHECK_FAILED },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.code)
        }
        Err(err) => {
            eprintln!("error: {}", err.message.trim_end());
            ExitCode::from(err.code)
        }
    }
}
