//! `ejr`: compute committees, verify representation axioms, compare rules and
//! run party-list apportionments from JSON files.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ejr_core::axioms::Axiom;
use ejr_core::trace::TraceLevel;
use ejr_core::{Rule, TieBreak, TiePolicy};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ejr",
    version,
    about = "Approval-based committee elections with exact quota transfers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one rule and print the committee with its iteration trace.
    Compute(ComputeArgs),
    /// Check a committee against JR, PJR or EJR.
    Verify(VerifyArgs),
    /// Run several rules and check every axiom on each result.
    Compare(CompareArgs),
    /// Apportion seats of a party-list election by several methods.
    Apportion(ApportionArgs),
}

#[derive(Args)]
struct Common {
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunFlags {
    #[arg(long, value_enum, default_value_t = TieBreakArg::Support)]
    tie_break: TieBreakArg,
    /// Skip the engine invariant checks.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args)]
struct ComputeArgs {
    election: PathBuf,
    /// phragmen-stv, hare-av, ejr-lr-even, sejr, sejr-rav, rav or ejr-mwv-even.
    #[arg(long, value_parser = parse_rule)]
    rule: Rule,
    #[command(flatten)]
    run: RunFlags,
    #[arg(long, value_enum, default_value_t = TraceArg::Summary)]
    trace: TraceArg,
    /// Vote removal for hare-av: one run removing in group order, or the set
    /// of every reachable committee.
    #[arg(long, value_enum, default_value_t = HareArg::GroupOrder)]
    hare_strategy: HareArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    election: PathBuf,
    /// Comma-separated candidate names.
    #[arg(
        long,
        value_delimiter = ',',
        required_unless_present = "from",
        conflicts_with = "from"
    )]
    winners: Vec<String>,
    /// Read the winners from the output of a previous `compute`.
    #[arg(long)]
    from: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = AxiomArg::Ejr)]
    axiom: AxiomArg,
    /// Give up (exit 4) after this many enumeration steps.
    #[arg(long, default_value_t = ejr_core::axioms::DEFAULT_EVALUATION_CAP)]
    max_evaluations: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    election: PathBuf,
    /// Rules to run, comma-separated or repeated; at least two.
    #[arg(long = "rule", value_delimiter = ',', num_args = 1.., required = true, value_parser = parse_rule)]
    rules: Vec<Rule>,
    #[command(flatten)]
    run: RunFlags,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ApportionArgs {
    party_list: PathBuf,
    /// `lr`, `dhondt`, or any rule name applied through the reduction.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "lr,dhondt,ejr-lr-even,sejr-rav"
    )]
    methods: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreakArg {
    Support,
    Index,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceArg {
    None,
    Summary,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum HareArg {
    GroupOrder,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxiomArg {
    Jr,
    Pjr,
    Ejr,
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse::<Rule>().map_err(|e| e.to_string())
}

impl RunFlags {
    fn tie_break(&self) -> TieBreak {
        TieBreak::new(match self.tie_break {
            TieBreakArg::Support => TiePolicy::SupportThenIndex,
            TieBreakArg::Index => TiePolicy::IndexOnly,
        })
    }
}

impl From<TraceArg> for TraceLevel {
    fn from(t: TraceArg) -> Self {
        match t {
            TraceArg::None => TraceLevel::None,
            TraceArg::Summary => TraceLevel::Summary,
            TraceArg::Full => TraceLevel::Full,
        }
    }
}

impl From<AxiomArg> for Axiom {
    fn from(a: AxiomArg) -> Self {
        match a {
            AxiomArg::Jr => Axiom::Jr,
            AxiomArg::Pjr => Axiom::Pjr,
            AxiomArg::Ejr => Axiom::Ejr,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Compute(a) => commands::compute(
            &a.election,
            a.rule,
            &a.run.tie_break(),
            !a.run.no_verify,
            a.trace.into(),
            matches!(a.hare_strategy, HareArg::Exhaustive),
            a.common.output.as_deref(),
        ),
        Command::Verify(a) => commands::verify(
            &a.election,
            &a.winners,
            a.from.as_deref(),
            a.axiom.into(),
            a.max_evaluations,
            a.common.output.as_deref(),
        ),
        Command::Compare(a) => commands::compare(
            &a.election,
            &a.rules,
            &a.run.tie_break(),
            !a.run.no_verify,
            a.common.output.as_deref(),
        ),
        Command::Apportion(a) => {
            commands::apportion(&a.party_list, &a.methods, a.common.output.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Some(msg) = failure.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(failure.code())
        }
    }
}
