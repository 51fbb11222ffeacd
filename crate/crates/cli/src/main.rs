use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nsgrade::algebra::{Identity, JacobiProduct};
use nsgrade::exactla::{parse_rational, Rational};
use nsgrade::{DerivationProblem, Limits};
use nsgrade_cli::{
    cmd_check, cmd_derive, cmd_grade, cmd_magma, cmd_paper_example, render_text, MapSelector,
    Report,
};

#[derive(Parser)]
#[command(
    name = "nsgrade",
    version,
    about = "Gradings of algebras by (delta, gamma)-derivations, and whether they come from semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityArg {
    Associative,
    Commutative,
    Anticommutative,
    Jacobi,
}

#[derive(Clone, Copy, ValueEnum)]
enum JacobiArg {
    Auto,
    Raw,
    Commutator,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    delta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    gamma: Rational,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = 6)]
    max_word_len: usize,
    /// Extra elements allowed in the finite search.
    #[arg(long, default_value_t = 4)]
    max_size: usize,
    #[arg(long, default_value_t = 64)]
    max_rules: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_word_len: self.max_word_len,
            max_rules: self.max_rules,
            max_extra_elements: self.max_size,
            ..Limits::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a multilinear identity on an algebra or family file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = IdentityArg::Associative)]
        identity: IdentityArg,
        /// Product bracketed by the Jacobi check.
        #[arg(long, value_enum, default_value_t = JacobiArg::Auto)]
        jacobi_product: JacobiArg,
    },
    /// Solve for the (delta, gamma)-derivations.
    Derive {
        file: PathBuf,
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Decompose by a derivation, read off the grading and test it.
    Grade {
        file: PathBuf,
        #[command(flatten)]
        problem: ProblemArgs,
        /// Matrix file holding the map.
        #[arg(long, conflicts_with = "pick", required_unless_present = "pick")]
        map: Option<PathBuf>,
        /// Use the K-th basis map of the derivation space (from 1).
        #[arg(long, value_name = "K")]
        pick: Option<usize>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Decide whether a partial magma embeds into a semigroup.
    Magma {
        file: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Rebuild the six-dimensional antiderivation example and check every value.
    PaperExample {
        /// Algebra or family file to use instead of the built-in one.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<Report, nsgrade_cli::InputError> {
    match &cli.command {
        Command::Check {
            file,
            identity,
            jacobi_product,
        } => {
            let which = match identity {
                IdentityArg::Associative => Identity::Associative,
                IdentityArg::Commutative => Identity::Commutative,
                IdentityArg::Anticommutative => Identity::Anticommutative,
                IdentityArg::Jacobi => Identity::Jacobi(match jacobi_product {
                    JacobiArg::Auto => JacobiProduct::Auto,
                    JacobiArg::Raw => JacobiProduct::Raw,
                    JacobiArg::Commutator => JacobiProduct::Commutator,
                }),
            };
            cmd_check(file, which)
        }
        Command::Derive { file, problem } => cmd_derive(
            file,
            &DerivationProblem::new(problem.delta.clone(), problem.gamma.clone()),
        ),
        Command::Grade {
            file,
            problem,
            map,
            pick,
            limits,
        } => {
            let selector = match (map, pick) {
                (Some(p), _) => MapSelector::File(p.clone()),
                (None, Some(k)) => MapSelector::Pick(*k),
                (None, None) => unreachable!("clap requires one selector"),
            };
            let prob = DerivationProblem::new(problem.delta.clone(), problem.gamma.clone());
            cmd_grade(file, &selector, &prob, &limits.limits())
        }
        Command::Magma { file, limits } => cmd_magma(file, &limits.limits()),
        Command::PaperExample { fixture } => {
            cmd_paper_example(fixture.as_deref(), &Limits::default())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => render_text(&report),
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code as u8)
}
