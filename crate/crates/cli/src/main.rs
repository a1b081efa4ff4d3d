use std::path::PathBuf;

use clap::{Parser, Subcommand};
use twisted_ore_cli::{cmd_check, cmd_example4, cmd_resolve, cmd_verify, Example4Args, Preset};

#[derive(Parser)]
#[command(
    name = "twisted-ore",
    version,
    about = "Certify truncated Ore extensions, their twisting maps and resolutions of the ground field",
    after_help = "EXIT CODES:\n  0  every check passed\n  1  a check failed (the report carries a witness)\n  2  the input was rejected\n\n\
                  EXAMPLES:\n  twisted-ore verify ore.json\
                  \n  twisted-ore resolve ore.json --degree 4 --out res.json\
                  \n  twisted-ore check res.json --exact-through 4\
                  \n  twisted-ore example4 --p 5 --t 2 --alpha 1 --degree 4\
                  \n  twisted-ore example4 --preset nichols --p 5"
)]
struct Cli {
    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check σ, δ, the truncation conditions, the twisting axioms and associativity
    Verify { spec: PathBuf },
    /// Build and certify the resolution of the ground field, then export it
    Resolve {
        spec: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-certify an exported complex: d² = 0 and exactness below the given degree
    Check {
        complex: PathBuf,
        /// Check exactness in degrees below N using d_1..d_N (default: top degree)
        #[arg(long, value_name = "N")]
        exact_through: Option<usize>,
    },
    /// The family δ(x) = α x^t over F_p[x]/(x^p), closed forms against the generic pipeline
    Example4 {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// σ(x) = q x for the quantum preset
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = match &cli.command {
        Command::Verify { spec } => cmd_verify(spec),
        Command::Resolve { spec, degree, out } => cmd_resolve(spec, *degree, out),
        Command::Check { complex, exact_through } => cmd_check(complex, *exact_through),
        Command::Example4 {
            p,
            t,
            alpha,
            preset,
            q,
            degree,
        } => cmd_example4(&Example4Args {
            p: *p,
            t: *t,
            alpha: alpha.clone(),
            preset: *preset,
            q: q.clone(),
            degree: *degree,
        }),
    };
    let text = outcome.render(cli.json);
    if outcome.error.is_some() && !cli.json {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    std::process::exit(outcome.exit().code());
}
