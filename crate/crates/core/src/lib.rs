//! Design and analysis toolkit for long-endurance variable-pitch quadrotors.
//!
//! - [`aero`]: momentum and blade element theory for a constant-speed,
//!   variable-pitch rotor in hover
//! - [`sizing`]: take-off weight, engine selection, fuel endurance and
//!   n-per-rev resonance checks
//! - [`control`]: PD gain synthesis, pitch allocation and governor
//! - [`sim`]: closed-loop RK4 simulation and step-response metrics
//!
//! Angles are radians and rotor speeds rad/s throughout; [`units`] converts
//! at the boundary.

pub mod aero;
pub mod control;
pub mod error;
mod numeric;
pub mod sim;
pub mod sizing;
pub mod units;

pub use nalgebra;

pub use aero::{
    calibrate_solidity, ideal_hover_power, inflow_ratio, pitch_for_thrust, power_coefficient, solve_rotor,
    sweep_curves, thrust_coefficient, AeroConstants, CurveRow, InflowVariant, PowerCoefficients, RotorGeometry,
    RotorOperatingPoint, RotorSolution,
};
pub use control::{
    build_allocation_jacobian, governor_step, pd_torque, synthesize_pd, AxisSpec, GovernorSpec, Mixer, MixerConfig,
    PdGains,
};
pub use error::{Error, Result};
pub use numeric::{BISECTION_MAX_ITERATIONS, BISECTION_TOLERANCE};
pub use sim::{
    dynamics_derivative, run_scenario, step_metrics, step_rk4, Axis, Disturbance, LogRecord, Scenario, Segment,
    SimState, StepMetrics, VehicleModel, VehicleParams,
};
pub use sizing::{
    build_sizing_report, endurance, excitation_frequency, max_takeoff_weight, max_total_lift, required_power_torque,
    resonance_check, select_engine, EngineSpec, FuelSpec, ModeVerdict, SizingConfig, SizingInputs, SizingReport,
    StructuralMode, StructuralModeSet, Verdict,
};
