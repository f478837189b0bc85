//! `diffop`: exact filtrations of left differential operators on associative
//! algebras, divided-power operator calculus, and free-algebra checks.
//!
//! Exit status: 0 when every requested check passes, 1 when a check fails
//! (the report carries a witness), 2 on usage, parse or spec errors.

use clap::{Args, Parser, Subcommand};
use diffop_core::filtration::FiltrationMode;
use diffop_core::report::{
    self, FreeAction, PolyAction, Report, ReportFormat, RunError, DEFAULT_SEED,
};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "diffop",
    version,
    about = "Exact differential-operator filtrations on associative algebras",
    after_help = "Algebra specs are JSON: {\"preset\": name, \"params\": [...]} with presets \
dual_numbers, truncated_poly(vars, max_degree), truncated_free(generators, max_degree), \
matrix_algebra(n), upper_triangular(n); or an explicit table \
{\"dim\", \"labels\", \"unit\", \"scalars\": \"Q\"|\"Z\", \"structure_constants\": [[i,j,k,num,den], ...]}. \
--spec accepts a file path or inline JSON."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Output format: table, json or csv.
    #[arg(long, default_value = "table")]
    format: ReportFormat,
    /// Seed for all sampled checks; reports embed it for reproducibility.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct SpecArg {
    /// Algebra spec: a path to a JSON file, or inline JSON.
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra laws (associativity, unit) of a spec.
    Validate {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        output: Output,
    },
    /// Compute the operator filtration D_0 ⊆ D_1 ⊆ … of an algebra.
    Filtration {
        #[command(flatten)]
        spec: SpecArg,
        /// comm (commutator recursion; commutative algebras only) or nc
        /// (sandwich L·D'·L definition). Default: comm when commutative.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<FiltrationMode>,
        /// Deepest level to compute; default dim(A)+1.
        #[arg(long)]
        nmax: Option<usize>,
        /// Include level bases (as matrices) in the report.
        #[arg(long)]
        bases: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Least filtration level containing a given endomorphism.
    Order {
        #[command(flatten)]
        spec: SpecArg,
        /// The operator as a JSON matrix, e.g. `[[0,1],[0,0]]` ("n/d" entries allowed).
        #[arg(long)]
        op: String,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<FiltrationMode>,
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Iterated-commutator order test on a commutative algebra.
    AdTest {
        #[command(flatten)]
        spec: SpecArg,
        /// The operator as a JSON matrix.
        #[arg(long)]
        op: String,
        /// Tests order ≤ n, i.e. vanishing of all (n+1)-fold commutators.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Build P^n = (A⊗A)/J^{n+1} and the operators it induces.
    PrincipalParts {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run all applicable definitions and compare the subspaces level by level.
    Compare {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Verify D_r·D_s ⊆ D_{r+s} for all r+s ≤ rmax.
    Multiplicative {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 3)]
        rmax: usize,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<FiltrationMode>,
        #[command(flatten)]
        output: Output,
    },
    /// Divided-power operator calculus on `k[X]` / `k[X,Y]`.
    Poly {
        #[command(subcommand)]
        action: PolyCommand,
    },
    /// Truncated free algebras: evaluation, codiagonal, multimorphisms.
    Free {
        #[command(subcommand)]
        action: FreeCommand,
    },
    /// Build ∂_n = d^n/n! from a derivation and verify the Hasse–Schmidt law.
    HsCheck {
        /// Comma-separated generator names, e.g. x,y.
        #[arg(long)]
        gens: String,
        /// Truncation degree of the free algebra.
        #[arg(long)]
        degree: usize,
        /// Generator images, e.g. 'x=y, y=0' (missing generators map to 0).
        #[arg(long)]
        derivation: String,
        /// Length N of the sequence (∂_0, …, ∂_N).
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Also verify ∂_n ∈ D_n in the non-commutative filtration.
        #[arg(long)]
        containment: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Combined report: validate, filtration, compare (commutative), multiplicative.
    Report {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum PolyCommand {
    /// Parse and print the normal form.
    Normalize {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        common: PolyCommon,
    },
    /// Apply an operator to a polynomial.
    Apply {
        #[arg(long)]
        expr: String,
        /// The polynomial argument.
        #[arg(long)]
        to: String,
        #[command(flatten)]
        common: PolyCommon,
    },
    /// Compose two operators (normal form of expr ∘ with).
    Compose {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        with: String,
        #[command(flatten)]
        common: PolyCommon,
    },
    /// Commutator with a multiplication: expr∘l_f − l_f∘expr.
    Ad {
        #[arg(long)]
        expr: String,
        /// The polynomial f.
        #[arg(long)]
        with: String,
        #[command(flatten)]
        common: PolyCommon,
    },
    /// Order (max i+j) of the normal form; -1 for the zero operator.
    Order {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        common: PolyCommon,
    },
    /// Z-mode: is the operator a sum of f·dX^i·dY^j (i!·j! divisibility)?
    Naive {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        common: PolyCommon,
    },
}

#[derive(Args)]
struct PolyCommon {
    /// Number of variables: 1 (X) or 2 (X, Y).
    #[arg(long, default_value_t = 2)]
    vars: usize,
    /// Scalar ring: Q or Z.
    #[arg(long, default_value = "Q")]
    scalars: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum FreeCommand {
    /// Normalize a word expression, optionally multiplied by a second one.
    Eval {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        times: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Compare ker(codiagonal of A∗A) with the primed-difference ideal.
    Codiag {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Build the Y-substitution map and sample the multimorphism law.
    Multimorphism {
        /// All generators, X-part first, e.g. x,y.
        #[arg(long)]
        gens: String,
        /// How many leading generators form the X sub-alphabet.
        #[arg(long)]
        xcount: usize,
        #[arg(long)]
        degree: usize,
        /// Words must contain exactly r Y-letters to survive.
        #[arg(long)]
        r: usize,
        /// One substitution expression per Y-generator.
        #[arg(long = "subst")]
        substitutions: Vec<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_mode(s: &str) -> Result<FiltrationMode, String> {
    match s {
        "comm" => Ok(FiltrationMode::Commutative),
        "nc" => Ok(FiltrationMode::Noncommutative),
        other => Err(format!("unknown mode '{other}' (expected comm or nc)")),
    }
}

/// `--spec` takes inline JSON (starts with '{') or a file path.
fn load_spec_text(spec: &str) -> Result<String, RunError> {
    let trimmed = spec.trim_start();
    if trimmed.starts_with('{') {
        return Ok(spec.to_string());
    }
    std::fs::read_to_string(spec)
        .map_err(|e| RunError::Usage(format!("cannot read spec file '{spec}': {e}")))
}

fn dispatch(cli: Cli) -> Result<(Report, ReportFormat), RunError> {
    match cli.command {
        Command::Validate { spec, output } => {
            let text = load_spec_text(&spec.spec)?;
            Ok((report::run_validate(&text, output.seed)?, output.format))
        }
        Command::Filtration {
            spec,
            mode,
            nmax,
            bases,
            output,
        } => {
            let text = load_spec_text(&spec.spec)?;
            Ok((
                report::run_filtration(&text, mode, nmax, bases, output.seed)?,
                output.format,
            ))
        }
        Command::Order {
            spec,
            op,
            mode,
            nmax,
            output,
        } => {
            let text = load_spec_text(&spec.spec)?;
            Ok((
                report::run_order(&text, &op, mode, nmax, output.seed)?,
                output.format,
            ))
        }
        Command::AdTest {
            spec,
            op,
            n,
            output,
        } => {
            let text = load_spec_text(&spec.spec)?;
            Ok((
                report::run_ad_test(&text, &op, n, output.seed)?,
                output.format,
            ))
        }
        Command::PrincipalParts { spec, n, output } => {
            let text = load_spec_text(&spec.spec)?;
            Ok((
                report::run_principal_parts(&text, n, output.seed)?,
                output.format,
            ))
        }
        Command::Compare { spec, nmax, output } => {
            let text = load_spec_text(&spec.spec)?;
            Ok((
                report::run_compare(&text, nmax, output.seed)?,
                output.format,
            ))
        }
        Command::Multiplicative {
            spec,
            rmax,
            mode,
            output,
        } => {
            let text = load_spec_text(&spec.spec)?;
            Ok((
                report::run_multiplicative(&text, rmax, mode, output.seed)?,
                output.format,
            ))
        }
        Command::Poly { action } => {
            let (poly_action, common) = match action {
                PolyCommand::Normalize { expr, common } => (PolyAction::Normalize { expr }, common),
                PolyCommand::Apply { expr, to, common } => (PolyAction::Apply { expr, to }, common),
                PolyCommand::Compose { expr, with, common } => {
                    (PolyAction::Compose { expr, with }, common)
                }
                PolyCommand::Ad { expr, with, common } => {
                    (PolyAction::AdMult { expr, with }, common)
                }
                PolyCommand::Order { expr, common } => (PolyAction::Order { expr }, common),
                PolyCommand::Naive { expr, common } => (PolyAction::Naive { expr }, common),
            };
            Ok((
                report::run_poly(
                    poly_action,
                    common.vars,
                    &common.scalars,
                    common.output.seed,
                )?,
                common.output.format,
            ))
        }
        Command::Free { action } => match action {
            FreeCommand::Eval {
                gens,
                degree,
                expr,
                times,
                output,
            } => Ok((
                report::run_free(
                    FreeAction::Eval {
                        gens,
                        degree,
                        expr,
                        times,
                    },
                    output.seed,
                )?,
                output.format,
            )),
            FreeCommand::Codiag {
                gens,
                degree,
                output,
            } => Ok((
                report::run_free(FreeAction::Codiag { gens, degree }, output.seed)?,
                output.format,
            )),
            FreeCommand::Multimorphism {
                gens,
                xcount,
                degree,
                r,
                substitutions,
                samples,
                output,
            } => Ok((
                report::run_free(
                    FreeAction::Multimorphism {
                        gens,
                        x_count: xcount,
                        degree,
                        r,
                        substitutions,
                        samples,
                    },
                    output.seed,
                )?,
                output.format,
            )),
        },
        Command::HsCheck {
            gens,
            degree,
            derivation,
            order,
            containment,
            output,
        } => Ok((
            report::run_hs_check(&gens, degree, &derivation, order, containment, output.seed)?,
            output.format,
        )),
        Command::Report { spec, nmax, output } => {
            let text = load_spec_text(&spec.spec)?;
            Ok((report::run_report(&text, nmax, output.seed)?, output.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((report, format)) => {
            print!("{}", report.emit(format));
            if let Some(ms) = report.elapsed_ms {
                eprintln!("elapsed: {ms} ms");
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
