use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use entroflux::io::{self, OutputFormat, Overrides, ScenarioConfig, EXIT_INPUT};
use entroflux::tol;

#[derive(Parser)]
#[command(name = "entroflux", version, about = "Stochastic entropy production under Kraus maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a Kraus JSON file: TP/CP/unitality, invariant state, classification.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = tol::TP)]
        tol_tp: f64,
    },
    /// Two-point-measurement statistics for a scenario.
    Tpm(ScenarioArgs),
    /// Mean/variance rates and mitigation flags over a time grid (CSV).
    Scan(ScenarioArgs),
    /// Write the thermalizing-qubit Kraus operators as JSON.
    ExportKraus {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// Integrated rate Γ.
        #[arg(long)]
        gamma_int: f64,
        /// Phase ωt.
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON; defaults to the damped-oscillatory qubit at β = 0.5.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    /// constant:G0 | damped:G0,A,NU,TAU | table:FILE.csv
    #[arg(long)]
    rate: Option<String>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Classification tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

impl ScenarioArgs {
    fn load(&self) -> entroflux::Result<ScenarioConfig> {
        let o = Overrides {
            beta: self.beta,
            omega: self.omega,
            rate: self.rate.clone(),
            t_max: self.t_max,
            steps: self.steps,
            out: self.out.clone(),
            tol: self.tol,
        };
        ScenarioConfig::load(self.config.as_deref(), &o)
    }
}

fn run(cli: Cli) -> entroflux::Result<i32> {
    io::configure_threads()?;
    match cli.command {
        Command::Validate { file, tol_tp } => {
            let rep = io::cmd_validate(&file, tol_tp)?;
            print!("{}", rep.render());
            Ok(rep.exit_code())
        }
        Command::Tpm(args) => {
            let cfg = args.load()?;
            let out = io::cmd_tpm(&cfg)?;
            io::emit(cfg.output.path.as_deref(), &(io::tpm_output_to_json(&out) + "\n"))?;
            Ok(io::EXIT_OK)
        }
        Command::Scan(args) => {
            let cfg = args.load()?;
            let rep = io::cmd_scan(&cfg)?;
            let text = match cfg.output.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => io::scan_to_csv(&rep),
                OutputFormat::Json => io::scan_to_json(&rep) + "\n",
            };
            io::emit(cfg.output.path.as_deref(), &text)?;
            eprintln!("{} mitigation window(s)", rep.windows.len());
            Ok(io::EXIT_OK)
        }
        Command::ExportKraus { beta, omega, gamma_int, phase, out } => {
            let map = io::export_qubit_kraus(beta, omega, gamma_int, phase)?;
            io::emit(out.as_deref(), &(io::kraus_to_json(&map) + "\n"))?;
            Ok(io::EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
