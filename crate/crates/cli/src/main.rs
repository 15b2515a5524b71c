use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcap_cli::{
    all_passed, cmd_gap, cmd_maximize, cmd_nonconvexity, cmd_selftest, cmd_superactivation, reports_to_json, CliError,
    ReproReport, ZERO_CERT_TOL,
};
use qcap_core::optimizer::OptimizerConfig;
use qcap_core::selftest::{SelftestOptions, DEFAULT_SEED};

/// Numerical reproduction of zero-capacity superactivation.
///
/// Each subcommand prints one line per checked quantity and exits 0 when
/// every check passes, 1 when a check fails and 2 on bad input.
///
/// Default tolerances: closed-form equalities 1e-8, halving identity 1e-9,
/// threshold probability 5e-5, PPT eigenvalues -1e-10, zero-capacity
/// certificate 1e-6 (override with --tol).
#[derive(Parser, Debug)]
#[command(name = "qcap", version, about, long_about)]
struct Cli {
    /// Print a JSON array of reports instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for restarts and random self-test instances.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of optimizer restarts.
    #[arg(long, global = true)]
    restarts: Option<usize>,

    /// Upper bound used to certify a zero coherent-information maximum.
    #[arg(long, global = true, default_value_t = ZERO_CERT_TOL)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Private value and halving identity for the Horodecki channel.
    Superactivation,
    /// Flagged-mixture coherent information across p.
    Nonconvexity {
        /// Mixing probability; repeat for several (default 0.001 0.002 0.004 0.0041 0.008).
        #[arg(long = "p")]
        p: Vec<f64>,
    },
    /// Single-use versus two-use coherent information of the switch channel.
    Gap(OptimizerArgs),
    /// Maximize coherent information of one channel.
    Maximize {
        /// JSON file or builtin:horodecki4, builtin:erasure:D:P, builtin:identity:D,
        /// builtin:depolarizing:D, builtin:flagged:P, builtin:switch.
        #[arg(long)]
        channel: String,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Internal consistency suites.
    Selftest {
        #[arg(long, hide = true)]
        corrupt_horodecki: bool,
    },
}

#[derive(Args, Debug)]
struct OptimizerArgs {
    /// Iteration cap per restart.
    #[arg(long)]
    max_iters: Option<usize>,
}

impl Cli {
    fn optimizer_config(&self, opt: &OptimizerArgs) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::default();
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(m) = opt.max_iters {
            cfg.max_iters = m;
        }
        cfg
    }
}

fn emit(reports: &[ReproReport], json: bool) {
    if json {
        println!("{}", reports_to_json(reports));
    } else {
        for r in reports {
            println!("{r}");
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let reports = match &cli.command {
        Command::Superactivation => cmd_superactivation()?,
        Command::Nonconvexity { p } => cmd_nonconvexity(p)?,
        Command::Gap(opt) => cmd_gap(&cli.optimizer_config(opt), cli.tol)?,
        Command::Maximize { channel, opt } => cmd_maximize(channel, &cli.optimizer_config(opt), cli.tol)?,
        Command::Selftest { corrupt_horodecki } => {
            let opts =
                SelftestOptions { seed: cli.seed.unwrap_or(DEFAULT_SEED), corrupt_horodecki: *corrupt_horodecki };
            let (report, rows) = cmd_selftest(&opts);
            if cli.json {
                emit(&rows, true);
            } else {
                for s in &report.suites {
                    let status = if s.passed() { "PASS" } else { "FAIL" };
                    println!("{status}  {:<48} {:>3} checks, {} failed", s.name, s.checks, s.failures.len());
                    for f in &s.failures {
                        println!("      - {f}");
                    }
                }
                println!("{} checks in {} suites", report.total_checks(), report.suites.len());
            }
            return Ok(report.passed());
        }
    };
    emit(&reports, cli.json);
    Ok(all_passed(&reports))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
