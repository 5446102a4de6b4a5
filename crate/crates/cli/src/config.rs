//! On-disk formats: vehicle description, engine catalog, structural modes and
//! simulation scenarios. All are TOML; key names carry their units.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use vpquad_core::nalgebra::{UnitQuaternion, Vector3};
use vpquad_core::units::{deg_to_rad, rpm_to_rad_s};
use vpquad_core::{
    calibrate_solidity, AeroConstants, Disturbance, EngineSpec, FuelSpec, GovernorSpec, InflowVariant, RotorGeometry,
    Scenario, Segment, SimState, StructuralMode, StructuralModeSet, VehicleModel, VehicleParams,
};

use crate::error::CliError;

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationAnchor {
    pub theta_deg: f64,
    pub thrust_n: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotorSection {
    pub radius_m: f64,
    pub blade_count: u32,
    pub solidity: Option<f64>,
    pub calibration: Option<CalibrationAnchor>,
    pub pitch_limits_deg: [f64; 2],
    #[serde(default)]
    pub variant: InflowVariant,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AeroSection {
    pub a: f64,
    pub kappa: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleSection {
    pub mass_kg: f64,
    pub mtow_kg: f64,
    pub rotor_count: u32,
    pub arm_length_m: f64,
    pub ixx_kgm2: f64,
    pub iyy_kgm2: f64,
    pub izz_kgm2: f64,
    pub eta_transmission: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSection {
    pub zeta: f64,
    pub omega_n: f64,
    pub governor_rpm: f64,
    #[serde(default = "default_governor_tau")]
    pub governor_tau_s: f64,
}

fn default_governor_tau() -> f64 {
    GovernorSpec::DEFAULT_TIME_CONSTANT_S
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuelSection {
    pub tank_l: f64,
    pub density_g_per_l: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleConfigFile {
    pub rotor: RotorSection,
    pub aero: AeroSection,
    pub vehicle: VehicleSection,
    pub control: ControlSection,
    pub fuel: FuelSection,
}

/// Vehicle file resolved into library types.
#[derive(Debug, Clone)]
pub struct VehicleConfig {
    pub file: VehicleConfigFile,
    pub geometry: RotorGeometry,
    pub aero: AeroConstants,
    pub variant: InflowVariant,
    /// Governor speed, rad/s.
    pub omega: f64,
}

impl VehicleConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let file: VehicleConfigFile = read(path)?;
        Self::resolve(file)
    }

    pub fn resolve(file: VehicleConfigFile) -> Result<Self, CliError> {
        let a = &file.aero;
        let aero = AeroConstants::new(a.a, a.kappa, a.beta0, a.beta1, a.beta2, a.rho)?;
        let rotor = &file.rotor;
        let (pitch_min, pitch_max) = (deg_to_rad(rotor.pitch_limits_deg[0]), deg_to_rad(rotor.pitch_limits_deg[1]));
        if !(file.control.governor_rpm.is_finite() && file.control.governor_rpm > 0.0) {
            return Err(CliError::Validation("control.governor_rpm must be positive".into()));
        }
        let omega = rpm_to_rad_s(file.control.governor_rpm);
        let geometry = match (rotor.solidity, &rotor.calibration) {
            (Some(solidity), _) => {
                RotorGeometry::new(rotor.radius_m, rotor.blade_count, solidity, pitch_min, pitch_max)?
            }
            (None, Some(anchor)) => {
                let draft = RotorGeometry::new(rotor.radius_m, rotor.blade_count, 0.05, pitch_min, pitch_max)?;
                let sigma = calibrate_solidity(
                    &draft,
                    &aero,
                    omega,
                    deg_to_rad(anchor.theta_deg),
                    anchor.thrust_n,
                    rotor.variant,
                )?;
                draft.with_solidity(sigma)?
            }
            (None, None) => {
                return Err(CliError::Validation("rotor needs either `solidity` or a `calibration` anchor".into()))
            }
        };
        let v = &file.vehicle;
        let positive = [v.mass_kg, v.mtow_kg, v.arm_length_m, v.ixx_kgm2, v.iyy_kgm2, v.izz_kgm2];
        if positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(CliError::Validation("vehicle masses, arm length and inertias must be positive".into()));
        }
        Ok(VehicleConfig { variant: rotor.variant, geometry, aero, omega, file })
    }

    pub fn fuel(&self) -> FuelSpec {
        FuelSpec { tank_volume_l: self.file.fuel.tank_l, fuel_density_g_per_l: self.file.fuel.density_g_per_l }
    }

    pub fn governor(&self) -> GovernorSpec {
        GovernorSpec { omega_ref: self.omega, time_constant_s: self.file.control.governor_tau_s }
    }

    pub fn model(&self) -> Result<VehicleModel, CliError> {
        let v = &self.file.vehicle;
        if v.rotor_count != 4 {
            return Err(CliError::Validation("the simulator models quadrotors only (rotor_count = 4)".into()));
        }
        Ok(VehicleModel::new(&VehicleParams {
            mass_kg: v.mass_kg,
            inertia: Vector3::new(v.ixx_kgm2, v.iyy_kgm2, v.izz_kgm2),
            geometry: self.geometry,
            aero: self.aero,
            variant: self.variant,
            arm_length: v.arm_length_m,
            governor: self.governor(),
            zeta: self.file.control.zeta,
            omega_n: self.file.control.omega_n,
        })?)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    engine: Vec<EngineSpec>,
}

pub fn load_catalog(path: &Path) -> Result<Vec<EngineSpec>, CliError> {
    let file: CatalogFile = read(path)?;
    for engine in &file.engine {
        engine.validate()?;
    }
    Ok(file.engine)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModesFile {
    #[serde(default)]
    mode: Vec<StructuralMode>,
}

pub fn load_modes(path: &Path) -> Result<StructuralModeSet, CliError> {
    let file: ModesFile = read(path)?;
    let set = StructuralModeSet { modes: file.mode };
    set.validate()?;
    Ok(set)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialSection {
    #[serde(default)]
    roll_deg: f64,
    #[serde(default)]
    pitch_deg: f64,
    #[serde(default)]
    yaw_deg: f64,
    #[serde(default)]
    p_rads: f64,
    #[serde(default)]
    q_rads: f64,
    #[serde(default)]
    r_rads: f64,
    #[serde(default)]
    altitude_m: f64,
    #[serde(default)]
    vz_mps: f64,
    rpm: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentEntry {
    start_s: f64,
    #[serde(default)]
    roll_ref_deg: f64,
    #[serde(default)]
    pitch_ref_deg: f64,
    #[serde(default)]
    yaw_ref_deg: f64,
    collective_thrust_n: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DisturbanceEntry {
    time_s: f64,
    axis: vpquad_core::Axis,
    impulse_nms: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    duration_s: f64,
    dt_s: f64,
    #[serde(default)]
    initial: InitialSection,
    segment: Vec<SegmentEntry>,
    #[serde(default)]
    disturbance: Vec<DisturbanceEntry>,
}

pub fn load_scenario(path: &Path, governor: &GovernorSpec) -> Result<Scenario, CliError> {
    let file: ScenarioFile = read(path)?;
    let init = &file.initial;
    let rotor_speed = match init.rpm {
        Some(rpm) => rpm_to_rad_s(rpm),
        None => governor.omega_ref,
    };
    let scenario = Scenario {
        duration_s: file.duration_s,
        dt_s: file.dt_s,
        initial: SimState {
            attitude: UnitQuaternion::from_euler_angles(
                deg_to_rad(init.roll_deg),
                deg_to_rad(init.pitch_deg),
                deg_to_rad(init.yaw_deg),
            ),
            body_rates: Vector3::new(init.p_rads, init.q_rads, init.r_rads),
            altitude_m: init.altitude_m,
            vertical_velocity: init.vz_mps,
            rotor_speed,
            time_s: 0.0,
        },
        segments: file
            .segment
            .iter()
            .map(|s| Segment {
                start_time: s.start_s,
                roll_ref: deg_to_rad(s.roll_ref_deg),
                pitch_ref: deg_to_rad(s.pitch_ref_deg),
                yaw_ref: deg_to_rad(s.yaw_ref_deg),
                collective_thrust: s.collective_thrust_n,
            })
            .collect(),
        disturbances: file
            .disturbance
            .iter()
            .map(|d| Disturbance { time_s: d.time_s, axis: d.axis, impulse: d.impulse_nms })
            .collect(),
    };
    scenario.validate()?;
    Ok(scenario)
}
