//! Command-line front end: tableau emission and verification, integration
//! runs, convergence studies and energy-drift studies.
//!
//! Exit codes: 0 success/verified, 1 verification failure, 2 usage error,
//! 3 numerical failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use csrkn::experiments::{convergence_study, drift_study, DriftMethod};
use csrkn::integrator::integrate;
use csrkn::problems;
use csrkn::quadrature::gauss_legendre;
use csrkn::scheme::build_symplectic_family;
use csrkn::system::StepperConfig;
use csrkn::tableau::{discretize, RknTableau};
use csrkn::{Error, SPEC_VERSION};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "csrkn",
    about = "High-order symplectic Runge-Kutta-Nystrom methods: generate, verify, integrate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the s-stage tableau of the order-4/6/8 symplectic family
    GenTableau {
        /// Method order: 4, 6 or 8
        #[arg(long)]
        order: u32,
        /// Free family parameter
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write to this file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive order and symplecticity claims of a tableau JSON file
    Verify {
        /// Tableau JSON file
        file: PathBuf,
    },
    /// Integrate a catalog problem and write the trajectory CSV
    Integrate {
        /// Problem name (see the catalog in the README, e.g. kepler-e0.6)
        #[arg(long)]
        problem: String,
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        /// Step size
        #[arg(long)]
        h: f64,
        /// Number of steps
        #[arg(long)]
        steps: usize,
        /// Record every n-th step
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Step-size refinement study; emits one JSON report per method
    Convergence {
        #[arg(long)]
        problem: String,
        /// Comma-separated method orders, e.g. 4,6,8
        #[arg(long, value_delimiter = ',')]
        order: Vec<u32>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        /// Comma-separated step sizes, e.g. 0.1,0.05,0.025
        #[arg(long, value_delimiter = ',')]
        h: Vec<f64>,
        /// Final time of each run
        #[arg(long = "T", default_value_t = 1.0)]
        t_final: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Long-horizon energy-drift study (JSON report)
    Drift {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        order: u32,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        h: f64,
        /// Horizon
        #[arg(long = "T")]
        t_horizon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn from_error(err: Error) -> Self {
        let code = match &err {
            Error::UnknownProblem { .. }
            | Error::UnsupportedOrder(_)
            | Error::InvalidArgument(_)
            | Error::InvalidConfig(_)
            | Error::StageCountOutOfRange(_)
            | Error::FreeCoefficientOutOfRange { .. }
            | Error::StepBudgetExceeded { .. }
            | Error::Json(_)
            | Error::TableauFormat(_) => EXIT_USAGE,
            Error::StageNonConvergence { .. }
            | Error::NonFiniteStage { .. }
            | Error::StepFailed { .. }
            | Error::CellFailed { .. }
            | Error::NodeSolveFailed { .. } => EXIT_NUMERICAL,
            Error::InvalidMassMatrix { .. } | Error::DimensionMismatch { .. } => EXIT_USAGE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::from_error(err)
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("io error: {err}"),
        }
    }
}

fn family_tableau(order: u32, theta: f64) -> Result<RknTableau, Failure> {
    let scheme = build_symplectic_family(order, theta)?;
    let rule = gauss_legendre((order / 2) as usize)?;
    Ok(discretize(&scheme, &rule))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_gen_tableau(
    order: u32,
    theta: f64,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let tableau = family_tableau(order, theta)?;
    let rendered = match format {
        Format::Json => tableau.to_json() + "\n",
        Format::Text => tableau.to_text(),
    };
    emit(&rendered, &out)
}

fn cmd_verify(file: PathBuf) -> Result<(), Failure> {
    let text = fs::read_to_string(&file)?;
    let tableau = RknTableau::from_json(&text)?;
    let verification = tableau.verify();
    let report = &verification.order_report;
    for (k, residual) in report.b_residuals.iter().enumerate() {
        println!("B({}): residual {:.3e}", k + 1, residual.abs());
    }
    for (k, residual) in report.cn_residuals.iter().enumerate() {
        println!("CN kappa={}: residual {:.3e}", k + 1, residual.abs());
    }
    for (k, residual) in report.dn_residuals.iter().enumerate() {
        println!("DN kappa={}: residual {:.3e}", k + 1, residual.abs());
    }
    println!(
        "weight consistency |b_bar - b(1-c)|: {:.3e}",
        verification.weight_consistency_residual
    );
    println!(
        "conditions hold: B({}), CN({}), DN({}) -> implied order {}",
        report.b_max,
        report.cn_max_kappa + 1,
        report.dn_max_kappa + 1,
        report.implied_order
    );
    match &verification.symplectic_verdict {
        csrkn::tableau::RknSymplecticVerdict::Symplectic => {
            println!("symplectic: conditions satisfied")
        }
        csrkn::tableau::RknSymplecticVerdict::Violated { i, j, residual } => {
            println!("symplectic: violated at ({i},{j}) with residual {residual:.3e}")
        }
    }
    println!(
        "claimed order {} ({}symplectic): {}",
        verification.claimed_order,
        if verification.claimed_symplectic {
            ""
        } else {
            "non-"
        },
        if verification.ok {
            "VERIFIED"
        } else {
            "NOT VERIFIED"
        }
    );
    if verification.ok {
        Ok(())
    } else {
        let mut failed = Vec::new();
        if report.implied_order < verification.claimed_order as usize {
            failed.push(format!(
                "implied order {} < claimed {}",
                report.implied_order, verification.claimed_order
            ));
        }
        if verification.weight_consistency_residual > csrkn::tableau::CONDITION_TOL {
            failed.push("weight consistency".into());
        }
        if verification.claimed_symplectic && !verification.symplectic_verdict.is_symplectic() {
            failed.push("symplecticity".into());
        }
        Err(Failure {
            code: EXIT_VERIFICATION,
            message: format!("verification failed: {}", failed.join("; ")),
        })
    }
}

fn cmd_integrate(
    problem_name: &str,
    order: u32,
    theta: f64,
    h: f64,
    steps: usize,
    stride: usize,
    out: PathBuf,
) -> Result<(), Failure> {
    if h.is_nan() || h <= 0.0 {
        return Err(Failure::usage(format!("--h must be positive, got {h}")));
    }
    if stride == 0 {
        return Err(Failure::usage("--stride must be at least 1"));
    }
    let problem = problems::lookup(problem_name)?;
    let tableau = family_tableau(order, theta)?;
    let cfg = StepperConfig::new(h)?;
    let trajectory = integrate(
        &problem.system,
        &tableau,
        &problem.initial,
        &cfg,
        steps,
        stride,
    )
    .map_err(|e| {
        let failure = Failure::from_error(e);
        Failure {
            code: failure.code,
            message: format!("{} (try a smaller --h)", failure.message),
        }
    })?;
    fs::write(&out, trajectory.to_csv())?;
    let final_state = trajectory.final_state();
    println!(
        "final state: t = {:.16e}, p = {:?}, q = {:?}",
        final_state.t, final_state.p, final_state.q
    );
    println!(
        "max relative energy error: {:.3e}",
        trajectory.max_energy_rel_err()
    );
    println!(
        "wrote {} rows to {}",
        trajectory.points().len(),
        out.display()
    );
    Ok(())
}

fn cmd_convergence(
    problem_name: &str,
    orders: &[u32],
    theta: f64,
    step_sizes: &[f64],
    t_final: f64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    if orders.is_empty() {
        return Err(Failure::usage("--order needs at least one method order"));
    }
    if step_sizes.is_empty() {
        return Err(Failure::usage("--h needs at least one step size"));
    }
    let problem = problems::lookup(problem_name)?;
    let reports = convergence_study(&problem, orders, theta, step_sizes, t_final)?;
    let doc = serde_json::json!({
        "spec_version": SPEC_VERSION,
        "problem": problem.name,
        "t_final": t_final,
        "reports": reports,
    });
    let rendered = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    emit(&rendered, &out)
}

fn cmd_drift(
    problem_name: &str,
    order: u32,
    theta: f64,
    h: f64,
    t_horizon: f64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let problem = problems::lookup(problem_name)?;
    let tableau = family_tableau(order, theta)?;
    let label = format!("rkn{order}-theta{theta}");
    let report = drift_study(&problem, DriftMethod::Rkn(&tableau), &label, h, t_horizon)?;
    let doc = serde_json::json!({
        "spec_version": SPEC_VERSION,
        "report": report,
    });
    let rendered = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    emit(&rendered, &out)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::GenTableau {
            order,
            theta,
            format,
            out,
        } => cmd_gen_tableau(order, theta, format, out),
        Command::Verify { file } => cmd_verify(file),
        Command::Integrate {
            problem,
            order,
            theta,
            h,
            steps,
            stride,
            out,
        } => cmd_integrate(&problem, order, theta, h, steps, stride, out),
        Command::Convergence {
            problem,
            order,
            theta,
            h,
            t_final,
            out,
        } => cmd_convergence(&problem, &order, theta, &h, t_final, out),
        Command::Drift {
            problem,
            order,
            theta,
            h,
            t_horizon,
            out,
        } => cmd_drift(&problem, order, theta, h, t_horizon, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
