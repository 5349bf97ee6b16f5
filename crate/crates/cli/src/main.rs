//! `lawvere`: batch checks over `.law` files.
//!
//! Exit codes: 0 when every verdict is positive, 1 when a check failed with a
//! witness, 2 when a check was inconclusive or hit a bound, 3 on input errors.

mod commands;
mod report;
mod select;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Report, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "lawvere", version, about = "Checks for presented algebraic theories and their finite models")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Leave timings out of the report so that runs compare byte for byte.
    #[arg(long, global = true)]
    no_timings: bool,
    /// Worker threads for enumerations (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Reserved; every search is exhaustive and ignores it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Syntactic,
    Semantic,
}

/// The input file and the flags that pick blocks out of it. Unset flags
/// default to the first block of the right kind.
#[derive(Args, Debug, Clone)]
pub struct Input {
    pub file: PathBuf,
    #[arg(long)]
    pub theory: Option<String>,
    /// Commutativity table.
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub model: Option<String>,
    /// Probe list; defaults to every category model of the table's theory.
    #[arg(long)]
    pub probes: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load the file and validate every block in it.
    CheckTheory(Input),
    /// Decide whether the basis operations commute pairwise.
    Commutative {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Mode::Syntactic)]
        mode: Mode,
        /// Largest carrier searched for a counter-model in semantic mode.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Rewrite steps allowed per equation.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Coherence of a commutativity table, relative to the probes.
    SigmaCheck {
        #[command(flatten)]
        input: Input,
        /// Constant plugged into binary operations for the unit laws of a
        /// table given through a theory map.
        #[arg(long)]
        unit: Option<String>,
    },
    /// The associativity compatibilities of the pseudomonoid a table induces.
    AssocDerived(Input),
    /// The braid relation on every triple of objects.
    YangBaxter {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "m")]
        tensor: String,
        #[arg(long, default_value = "b")]
        braiding: String,
        /// Associator cell; used when the theory has it.
        #[arg(long, default_value = "a")]
        associator: String,
    },
    /// Set models of a given size, up to isomorphism.
    Models {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        size: usize,
    },
    /// Homomorphisms from --model to --target.
    Homs {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value = "lax")]
        weakness: String,
    },
    /// Internal algebras: lax homomorphisms from the terminal model.
    Intalg(Input),
    /// Internal coalgebras: colax homomorphisms from the terminal model.
    Intcoalg(Input),
    /// Internal bialgebras with respect to a commutativity table.
    Intbialg(Input),
    /// Convolution algebras on hom-sets from coalgebras to algebras.
    Convolve {
        #[command(flatten)]
        input: Input,
        /// Index of the algebra, in enumeration order.
        #[arg(long)]
        algebra: Option<usize>,
        /// Index of the coalgebra, in enumeration order.
        #[arg(long)]
        coalgebra: Option<usize>,
    },
    /// The model of homomorphisms from --model to --target.
    HomInternal {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value = "lax")]
        weakness: String,
    },
    /// Binary multimaps X, Y -> Z against homomorphisms X -> [Y, Z].
    ClosedCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        middle: Option<String>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value = "lax")]
        weakness: String,
    },
    /// Comonad laws of the internal algebra construction at a model.
    Fox {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "lax")]
        weakness: String,
    },
    /// Eckmann-Hilton preconditions.
    Eh {
        #[command(flatten)]
        input: Input,
        /// 1 for the plain theory, 2 for the theory with its table; defaults
        /// to 2 when the file has a table.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        dim: Option<u8>,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Compatibility of algebra and coalgebra structures on one object.
    Bilax {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        algebra: Option<usize>,
        #[arg(long)]
        coalgebra: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_INPUT as u8);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let report = run(cli.command, cli.no_timings);
    match cli.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(report.exit_code as u8)
}

fn run(command: Command, no_timings: bool) -> Report {
    use commands as c;
    let (name, input) = command_input(&command);
    let mut report = Report::new(name);
    let started = std::time::Instant::now();
    let ctx = match select::Context::load(&input) {
        Ok(ctx) => ctx,
        Err(e) => {
            report.error = Some(e);
            report.finish();
            return report;
        }
    };
    report.input = Some(ctx.input.clone());
    let load_ms = started.elapsed().as_secs_f64() * 1e3;
    let started = std::time::Instant::now();
    let outcome = match &command {
        Command::CheckTheory(_) => c::check_theory(&ctx, &mut report),
        Command::Commutative {
            mode, max_size, budget, ..
        } => c::commutative(&ctx, &mut report, *mode, *max_size, *budget),
        Command::SigmaCheck { unit, .. } => c::sigma_check(&ctx, &mut report, unit.as_deref()),
        Command::AssocDerived(_) => c::assoc_derived(&ctx, &mut report),
        Command::YangBaxter {
            tensor,
            braiding,
            associator,
            ..
        } => c::yang_baxter(&ctx, &mut report, tensor, braiding, associator),
        Command::Models { size, .. } => c::models(&ctx, &mut report, *size),
        Command::Homs { target, weakness, .. } => c::homs(&ctx, &mut report, target.as_deref(), weakness),
        Command::Intalg(_) => c::intalg(&ctx, &mut report, false),
        Command::Intcoalg(_) => c::intalg(&ctx, &mut report, true),
        Command::Intbialg(_) => c::intbialg(&ctx, &mut report),
        Command::Convolve { algebra, coalgebra, .. } => c::convolve(&ctx, &mut report, *algebra, *coalgebra),
        Command::HomInternal { target, weakness, .. } => c::hom_internal(&ctx, &mut report, target.as_deref(), weakness),
        Command::ClosedCheck {
            middle, target, weakness, ..
        } => c::closed_check(&ctx, &mut report, middle.as_deref(), target.as_deref(), weakness),
        Command::Fox { weakness, .. } => c::fox(&ctx, &mut report, weakness),
        Command::Eh { dim, max_size, .. } => c::eh(&ctx, &mut report, *dim, *max_size),
        Command::Bilax { algebra, coalgebra, .. } => c::bilax(&ctx, &mut report, *algebra, *coalgebra),
    };
    if let Err(e) = outcome {
        c::record_error(&mut report, e);
    }
    if !no_timings {
        report.timings = Some(report::Timings {
            load_ms,
            run_ms: started.elapsed().as_secs_f64() * 1e3,
        });
    }
    report.finish();
    report
}

fn command_input(command: &Command) -> (&'static str, Input) {
    let (name, input) = match command {
        Command::CheckTheory(i) => ("check-theory", i),
        Command::Commutative { input, .. } => ("commutative", input),
        Command::SigmaCheck { input, .. } => ("sigma-check", input),
        Command::AssocDerived(i) => ("assoc-derived", i),
        Command::YangBaxter { input, .. } => ("yang-baxter", input),
        Command::Models { input, .. } => ("models", input),
        Command::Homs { input, .. } => ("homs", input),
        Command::Intalg(i) => ("intalg", i),
        Command::Intcoalg(i) => ("intcoalg", i),
        Command::Intbialg(i) => ("intbialg", i),
        Command::Convolve { input, .. } => ("convolve", input),
        Command::HomInternal { input, .. } => ("hom-internal", input),
        Command::ClosedCheck { input, .. } => ("closed-check", input),
        Command::Fox { input, .. } => ("fox", input),
        Command::Eh { input, .. } => ("eh", input),
        Command::Bilax { input, .. } => ("bilax", input),
    };
    (name, input.clone())
}
