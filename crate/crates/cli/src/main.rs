//! `vpquad`: command-line front end for variable-pitch quadrotor design.
//!
//! Exit codes: 0 success, 1 invalid input, 2 infeasible design, 3 numerical
//! failure.

mod commands;
mod config;
mod error;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vpquad_core::sizing::DEFAULT_RESONANCE_BAND;
use vpquad_core::{Axis, InflowVariant};

use crate::commands::{CurvesArgs, SimulateArgs, SizeArgs};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "vpquad", version, about = "Design and analysis tools for variable-pitch quadrotors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    /// Inflow formula exactly as commonly printed
    Printed,
    /// Inflow consistent with momentum theory
    Consistent,
}

impl From<Variant> for InflowVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Printed => InflowVariant::AsPrinted,
            Variant::Consistent => InflowVariant::MomentumConsistent,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Channel {
    Roll,
    Pitch,
    Yaw,
}

impl From<Channel> for Axis {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Roll => Axis::Roll,
            Channel::Pitch => Axis::Pitch,
            Channel::Yaw => Axis::Yaw,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep blade pitch at fixed speed and write thrust/power/torque curves as CSV
    Curves {
        #[arg(long)]
        vehicle: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        rpm: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta_max: f64,
        /// Pitch increment in degrees
        #[arg(long, allow_negative_numbers = true)]
        step: f64,
        /// Override the vehicle file's inflow variant
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Size the vehicle: take-off weight, engine, endurance and resonance
    Size {
        #[arg(long)]
        vehicle: PathBuf,
        #[arg(long)]
        engines: PathBuf,
        #[arg(long)]
        modes: PathBuf,
        /// Thrust reserved for control, as a fraction of hover thrust
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        margin: f64,
        /// Resonance band half-width as a fraction of the excitation frequency
        #[arg(long, default_value_t = DEFAULT_RESONANCE_BAND, allow_negative_numbers = true)]
        band: f64,
        /// Also write the report as key,value CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// PD gains for one attitude axis
    Gains {
        /// Axis moment of inertia, kg·m²
        #[arg(long, allow_negative_numbers = true)]
        inertia: f64,
        #[arg(long, allow_negative_numbers = true)]
        zeta: f64,
        /// Natural frequency, rad/s
        #[arg(long, allow_negative_numbers = true)]
        omega_n: f64,
    },
    /// Blade-pass excitation frequency and structural mode verdicts
    Vibration {
        #[arg(long, allow_negative_numbers = true)]
        rpm: f64,
        #[arg(long)]
        blades: u32,
        #[arg(long)]
        modes: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        band: Option<f64>,
    },
    /// Fuel-limited endurance in hours
    Endurance {
        #[arg(long, allow_negative_numbers = true)]
        fuel_l: f64,
        /// Fuel density, g/L
        #[arg(long, allow_negative_numbers = true)]
        density: f64,
        /// Brake-specific fuel consumption, g/kWh
        #[arg(long, allow_negative_numbers = true)]
        bsfc: f64,
        /// Shaft power demand, W
        #[arg(long, allow_negative_numbers = true)]
        power_w: f64,
        /// Transmission efficiency
        #[arg(long, allow_negative_numbers = true)]
        eta: f64,
    },
    /// Run a closed-loop scenario and write the state log as CSV
    Simulate {
        #[arg(long)]
        vehicle: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Report step metrics for this channel
        #[arg(long, value_enum)]
        metrics: Option<Channel>,
    },
}

fn run(cli: Cli, stdout: &mut impl Write, stderr: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::Curves { vehicle, rpm, theta_min, theta_max, step, variant, out } => commands::curves(
            &CurvesArgs {
                vehicle,
                rpm,
                theta_min_deg: theta_min,
                theta_max_deg: theta_max,
                step_deg: step,
                variant: variant.map(Into::into),
                out,
            },
            stdout,
        ),
        Command::Size { vehicle, engines, modes, margin, band, csv } => {
            commands::size(&SizeArgs { vehicle, engines, modes, margin, band, csv }, stdout)
        }
        Command::Gains { inertia, zeta, omega_n } => commands::gains(inertia, zeta, omega_n, stdout),
        Command::Vibration { rpm, blades, modes, band } => commands::vibration(rpm, blades, &modes, band, stdout),
        Command::Endurance { fuel_l, density, bsfc, power_w, eta } => {
            commands::endurance_cmd(fuel_l, density, bsfc, power_w, eta, stdout)
        }
        Command::Simulate { vehicle, scenario, out, metrics } => commands::simulate(
            &SimulateArgs { vehicle, scenario, out, metrics: metrics.map(Into::into) },
            stdout,
            stderr,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    match run(cli, &mut stdout, &mut stderr) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
