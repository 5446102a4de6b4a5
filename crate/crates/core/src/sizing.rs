//! Rotor/engine matching, take-off weight, fuel endurance and rotor
//! excitation checks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::aero::{pitch_for_thrust, solve_rotor, AeroConstants, InflowVariant, RotorGeometry, RotorOperatingPoint};
use crate::error::{Error, Result};
use crate::units::GRAVITY;

/// One engine catalog entry. Torque is quoted at the rotor shaft, after gearing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineSpec {
    pub name: String,
    pub displacement_cc: f64,
    pub max_power_w: f64,
    pub max_torque_nm: f64,
    pub bsfc_g_per_kwh: f64,
    pub rpm_min: f64,
    pub rpm_max: f64,
}

impl EngineSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.displacement_cc,
            self.max_power_w,
            self.max_torque_nm,
            self.bsfc_g_per_kwh,
            self.rpm_min,
            self.rpm_max,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid(format!("engine `{}`: values must be finite", self.name)));
        }
        if self.max_power_w <= 0.0 || self.bsfc_g_per_kwh <= 0.0 {
            return Err(Error::invalid(format!("engine `{}`: power and bsfc must be positive", self.name)));
        }
        if self.rpm_min >= self.rpm_max {
            return Err(Error::invalid(format!("engine `{}`: rpm_min must be below rpm_max", self.name)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuelSpec {
    pub tank_volume_l: f64,
    pub fuel_density_g_per_l: f64,
}

impl FuelSpec {
    pub fn fuel_mass_g(&self) -> f64 {
        self.tank_volume_l * self.fuel_density_g_per_l
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizingConfig {
    pub rotor_count: u32,
    /// Thrust headroom above weight reserved for control, as a fraction.
    pub control_margin: f64,
    pub transmission_efficiency: f64,
}

impl Default for SizingConfig {
    fn default() -> Self {
        SizingConfig { rotor_count: 4, control_margin: 0.5, transmission_efficiency: 0.8 }
    }
}

impl SizingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rotor_count < 3 {
            return Err(Error::invalid("at least three rotors are required"));
        }
        if !(0.0..=1.0).contains(&self.control_margin) {
            return Err(Error::invalid("control margin must lie in [0, 1]"));
        }
        check_efficiency(self.transmission_efficiency)
    }
}

fn check_efficiency(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::invalid("transmission efficiency must lie in (0, 1]"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralMode {
    pub mode_name: String,
    pub frequency_hz: f64,
    /// Whether contra-rotating rotors can excite the mode. Modes that need
    /// in-phase excitation from every rotor are cancelled.
    #[serde(rename = "activatable")]
    pub activatable_by_contrarotation: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StructuralModeSet {
    pub modes: Vec<StructuralMode>,
}

impl StructuralModeSet {
    pub fn validate(&self) -> Result<()> {
        for m in &self.modes {
            if !(m.frequency_hz.is_finite() && m.frequency_hz > 0.0) {
                return Err(Error::invalid(format!("mode `{}`: frequency must be positive", m.mode_name)));
            }
        }
        Ok(())
    }
}

/// Ordered from best to worst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Warn => "WARN",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeVerdict {
    pub mode_name: String,
    pub frequency_hz: f64,
    /// Separation from the excitation frequency.
    pub proximity: Verdict,
    /// An activatable mode below the excitation frequency is swept through
    /// while the rotors spool up.
    pub spool_up_crossing: bool,
}

impl ModeVerdict {
    pub fn verdict(&self) -> Verdict {
        if self.spool_up_crossing {
            self.proximity.max(Verdict::Warn)
        } else {
            self.proximity
        }
    }
}

pub const DEFAULT_RESONANCE_BAND: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct SizingReport {
    pub max_total_lift_n: f64,
    pub mtow_kg: f64,
    pub vehicle_mass_kg: f64,
    pub hover_pitch_rad: f64,
    /// Engine shaft power in hover, transmission losses included.
    pub hover_power_w: f64,
    /// Aerodynamic power at maximum pitch, at the rotor shafts.
    pub required_power_w: f64,
    pub required_torque_nm: f64,
    pub selected_engine: Option<EngineSpec>,
    /// Fuel-limited hover time; `None` when no engine was selected.
    pub endurance_hours: Option<f64>,
    pub excitation_hz: f64,
    pub resonance_verdicts: Vec<ModeVerdict>,
}

pub fn max_total_lift(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    rotor_count: u32,
    variant: InflowVariant,
) -> Result<f64> {
    let op = RotorOperatingPoint::new(omega, geom.pitch_max())?;
    let per_rotor = solve_rotor(geom, consts, op, variant)?.thrust_n;
    Ok(f64::from(rotor_count) * per_rotor)
}

/// `lift / (g·(1 + margin))`, kg.
pub fn max_takeoff_weight(max_total_lift_n: f64, control_margin: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&control_margin) {
        return Err(Error::invalid("control margin must lie in [0, 1]"));
    }
    if !(max_total_lift_n.is_finite() && max_total_lift_n >= 0.0) {
        return Err(Error::invalid("lift must be non-negative"));
    }
    Ok(max_total_lift_n / (GRAVITY * (1.0 + control_margin)))
}

/// Engine power and rotor-speed torque needed to run every rotor at maximum
/// pitch through a transmission of efficiency `eta`.
pub fn required_power_torque(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    rotor_count: u32,
    eta: f64,
    variant: InflowVariant,
) -> Result<(f64, f64)> {
    check_efficiency(eta)?;
    let op = RotorOperatingPoint::new(omega, geom.pitch_max())?;
    let per_rotor = solve_rotor(geom, consts, op, variant)?.power_w;
    let power = f64::from(rotor_count) * per_rotor / eta;
    Ok((power, power / omega))
}

/// Smallest sufficient engine: lowest rated power, then lowest displacement,
/// then name. An engine qualifies when its torque covers `torque_req` and the
/// power it can deliver at `omega_rotor` (limited by rated power and by
/// torque × speed) covers `power_req`.
pub fn select_engine(catalog: &[EngineSpec], power_req: f64, torque_req: f64, omega_rotor: f64) -> Option<&EngineSpec> {
    catalog
        .iter()
        .filter(|e| {
            let deliverable = e.max_power_w.min(e.max_torque_nm * omega_rotor);
            e.max_power_w >= power_req && deliverable >= power_req && e.max_torque_nm >= torque_req
        })
        .min_by(|a, b| {
            a.max_power_w
                .partial_cmp(&b.max_power_w)
                .unwrap_or(Ordering::Equal)
                .then(a.displacement_cc.partial_cmp(&b.displacement_cc).unwrap_or(Ordering::Equal))
                .then_with(|| a.name.cmp(&b.name))
        })
}

/// Hours of flight from a full tank at constant rotor power `shaft_power_w`,
/// with the engine supplying `shaft_power_w / eta`.
pub fn endurance(fuel: &FuelSpec, bsfc_g_per_kwh: f64, shaft_power_w: f64, eta: f64) -> Result<f64> {
    check_efficiency(eta)?;
    if !(shaft_power_w.is_finite() && shaft_power_w > 0.0) {
        return Err(Error::invalid("shaft power must be positive"));
    }
    if !(bsfc_g_per_kwh.is_finite() && bsfc_g_per_kwh > 0.0) {
        return Err(Error::invalid("bsfc must be positive"));
    }
    if !(fuel.tank_volume_l >= 0.0 && fuel.fuel_density_g_per_l > 0.0) {
        return Err(Error::invalid("fuel volume must be non-negative and density positive"));
    }
    let burn_g_per_h = bsfc_g_per_kwh * (shaft_power_w / 1000.0) / eta;
    Ok(fuel.fuel_mass_g() / burn_g_per_h)
}

/// Blade-passage (n-per-rev) frequency, Hz.
pub fn excitation_frequency(rotor_rpm: f64, blades_per_rotor: u32) -> Result<f64> {
    if !(rotor_rpm.is_finite() && rotor_rpm > 0.0) || blades_per_rotor == 0 {
        return Err(Error::invalid("rpm must be positive and blade count at least one"));
    }
    Ok(rotor_rpm / 60.0 * f64::from(blades_per_rotor))
}

pub fn resonance_check(
    excitation_hz: f64,
    modes: &StructuralModeSet,
    margin_fraction: f64,
) -> Result<Vec<ModeVerdict>> {
    if !(margin_fraction > 0.0 && margin_fraction < 1.0) {
        return Err(Error::invalid("resonance band must lie in (0, 1)"));
    }
    if !(excitation_hz.is_finite() && excitation_hz > 0.0) {
        return Err(Error::invalid("excitation frequency must be positive"));
    }
    Ok(modes
        .modes
        .iter()
        .map(|m| {
            let separation = (m.frequency_hz - excitation_hz).abs() / excitation_hz;
            let proximity = match (separation < margin_fraction, m.activatable_by_contrarotation) {
                (true, true) => Verdict::Fail,
                (true, false) => Verdict::Warn,
                (false, _) => Verdict::Pass,
            };
            ModeVerdict {
                mode_name: m.mode_name.clone(),
                frequency_hz: m.frequency_hz,
                proximity,
                spool_up_crossing: m.activatable_by_contrarotation && m.frequency_hz < excitation_hz,
            }
        })
        .collect())
}

/// Everything the sizing pipeline needs besides the rotor model.
#[derive(Debug, Clone)]
pub struct SizingInputs<'a> {
    pub config: SizingConfig,
    pub fuel: FuelSpec,
    pub catalog: &'a [EngineSpec],
    pub modes: &'a StructuralModeSet,
    pub vehicle_mass_kg: f64,
    pub resonance_band: f64,
}

/// Runs the full sizing chain for a vehicle of `inputs.vehicle_mass_kg`.
pub fn build_sizing_report(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    variant: InflowVariant,
    inputs: &SizingInputs<'_>,
) -> Result<SizingReport> {
    let config = inputs.config;
    config.validate()?;
    inputs.modes.validate()?;
    let n = f64::from(config.rotor_count);
    let eta = config.transmission_efficiency;

    let max_total_lift_n = max_total_lift(geom, consts, omega, config.rotor_count, variant)?;
    let mtow_kg = max_takeoff_weight(max_total_lift_n, config.control_margin)?;
    if !(inputs.vehicle_mass_kg.is_finite() && inputs.vehicle_mass_kg > 0.0) {
        return Err(Error::invalid("vehicle mass must be positive"));
    }
    if inputs.vehicle_mass_kg > mtow_kg {
        return Err(Error::Overweight { mass_kg: inputs.vehicle_mass_kg, mtow_kg });
    }

    let hover_pitch_rad = pitch_for_thrust(geom, consts, omega, inputs.vehicle_mass_kg * GRAVITY / n, variant)?;
    let hover = solve_rotor(geom, consts, RotorOperatingPoint::new(omega, hover_pitch_rad)?, variant)?;
    let rotor_hover_power = n * hover.power_w;

    let (required_power_w, required_torque_nm) =
        required_power_torque(geom, consts, omega, config.rotor_count, 1.0, variant)?;
    let selected_engine = select_engine(inputs.catalog, required_power_w, required_torque_nm, omega).cloned();
    let endurance_hours = selected_engine
        .as_ref()
        .map(|e| endurance(&inputs.fuel, e.bsfc_g_per_kwh, rotor_hover_power, eta))
        .transpose()?;

    let rpm = crate::units::rad_s_to_rpm(omega);
    let excitation_hz = excitation_frequency(rpm, geom.blade_count())?;
    let resonance_verdicts = resonance_check(excitation_hz, inputs.modes, inputs.resonance_band)?;

    Ok(SizingReport {
        max_total_lift_n,
        mtow_kg,
        vehicle_mass_kg: inputs.vehicle_mass_kg,
        hover_pitch_rad,
        hover_power_w: rotor_hover_power / eta,
        required_power_w,
        required_torque_nm,
        selected_engine,
        endurance_hours,
        excitation_hz,
        resonance_verdicts,
    })
}
