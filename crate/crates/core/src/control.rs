//! Attitude PD control, pitch allocation and rotor-speed governor.

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::aero::{solve_rotor, AeroConstants, InflowVariant, RotorGeometry, RotorOperatingPoint};
use crate::error::{Error, Result};

/// Second-order design target for one attitude axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    /// kg·m²
    pub inertia: f64,
    pub zeta: f64,
    /// rad/s
    pub omega_n: f64,
}

impl AxisSpec {
    pub fn new(inertia: f64, zeta: f64, omega_n: f64) -> Result<Self> {
        let spec = AxisSpec { inertia, zeta, omega_n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.inertia) && positive(self.zeta) && positive(self.omega_n)) {
            return Err(Error::invalid("inertia, damping ratio and natural frequency must be positive"));
        }
        if self.zeta > 2.0 {
            return Err(Error::invalid("damping ratio above 2 is outside the supported range"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdGains {
    /// N·m/rad
    pub kp: f64,
    /// N·m/(rad/s)
    pub kd: f64,
}

/// Places the closed-loop poles of `I·φ̈ = τ` at `s² + 2ζωn·s + ωn²`.
pub fn synthesize_pd(spec: &AxisSpec) -> Result<PdGains> {
    spec.validate()?;
    Ok(PdGains { kp: spec.inertia * spec.omega_n * spec.omega_n, kd: 2.0 * spec.zeta * spec.omega_n * spec.inertia })
}

/// PD law with the derivative acting on the measured body rate.
pub fn pd_torque(gains: &PdGains, angle_error: f64, body_rate: f64) -> f64 {
    gains.kp * angle_error - gains.kd * body_rate
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GovernorSpec {
    /// rad/s
    pub omega_ref: f64,
    pub time_constant_s: f64,
}

impl GovernorSpec {
    pub const DEFAULT_TIME_CONSTANT_S: f64 = 0.5;

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_ref.is_finite()
            && self.omega_ref > 0.0
            && self.time_constant_s.is_finite()
            && self.time_constant_s > 0.0)
        {
            return Err(Error::invalid("governor reference and time constant must be positive"));
        }
        Ok(())
    }
}

/// Exact discretisation of a first-order lag toward `omega_ref` over `dt`.
pub fn governor_step(spec: &GovernorSpec, omega: f64, dt: f64) -> Result<f64> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("governor step must be positive"));
    }
    let blend = -(-dt / spec.time_constant_s).exp_m1();
    Ok(omega + (spec.omega_ref - omega) * blend)
}

/// Rotor numbering around the X frame, body axes x forward, y left, z up:
/// 1 front-right, 2 front-left, 3 rear-left, 4 rear-right.
pub const ROTOR_LAYOUT: [(f64, f64); 4] = [(1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)];

/// Fixed description of the mixer before linearisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixerConfig {
    /// Hub-to-rotor distance, m.
    pub arm_length: f64,
    /// +1 for CCW, −1 for CW. Yaw torque is `Σ spin_i·Q_i`.
    pub spin_directions: [f64; 4],
    pub hover_pitch: f64,
}

impl MixerConfig {
    pub const DEFAULT_SPINS: [f64; 4] = [1.0, -1.0, 1.0, -1.0];

    pub fn validate(&self) -> Result<()> {
        if !(self.arm_length.is_finite() && self.arm_length > 0.0) {
            return Err(Error::invalid("arm length must be positive"));
        }
        if self.spin_directions.iter().any(|s| s.abs() != 1.0) {
            return Err(Error::invalid("spin directions must be +1 or -1"));
        }
        for i in 0..4 {
            if self.spin_directions[i] == self.spin_directions[(i + 1) % 4] {
                return Err(Error::invalid("adjacent rotors must spin in opposite directions"));
            }
        }
        Ok(())
    }

    /// Moment arm about the body x and y axes, `arm_length/√2`.
    pub fn axis_arm(&self) -> f64 {
        self.arm_length / std::f64::consts::SQRT_2
    }

    /// Body-frame (x, y) of rotor `i`.
    pub fn rotor_position(&self, i: usize) -> (f64, f64) {
        let d = self.axis_arm();
        (ROTOR_LAYOUT[i].0 * d, ROTOR_LAYOUT[i].1 * d)
    }

    /// Wrench `(T_total, τx, τy, τz)` from per-rotor thrust and torque.
    pub fn wrench(&self, thrust: &[f64; 4], torque: &[f64; 4]) -> Vector4<f64> {
        let mut w = Vector4::zeros();
        for i in 0..4 {
            let (x, y) = self.rotor_position(i);
            w[0] += thrust[i];
            w[1] += y * thrust[i];
            w[2] -= x * thrust[i];
            w[3] += self.spin_directions[i] * torque[i];
        }
        w
    }
}

pub const JACOBIAN_STEP: f64 = 1e-4;
pub const MAX_CONDITION_NUMBER: f64 = 1e8;

/// `∂(T_total, τx, τy, τz)/∂θ_i` about `config.hover_pitch`, by central
/// differences on the rotor model.
pub fn build_allocation_jacobian(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    config: &MixerConfig,
    variant: InflowVariant,
) -> Result<Matrix4<f64>> {
    config.validate()?;
    geom.check_pitch(config.hover_pitch)?;
    let at = |theta: f64| solve_rotor(geom, consts, RotorOperatingPoint::new(omega, theta)?, variant);
    let plus = at(config.hover_pitch + JACOBIAN_STEP)?;
    let minus = at(config.hover_pitch - JACOBIAN_STEP)?;
    let dthrust = (plus.thrust_n - minus.thrust_n) / (2.0 * JACOBIAN_STEP);
    let dtorque = (plus.torque_nm - minus.torque_nm) / (2.0 * JACOBIAN_STEP);

    let mut jacobian = Matrix4::zeros();
    for i in 0..4 {
        let (x, y) = config.rotor_position(i);
        jacobian[(0, i)] = dthrust;
        jacobian[(1, i)] = y * dthrust;
        jacobian[(2, i)] = -x * dthrust;
        jacobian[(3, i)] = config.spin_directions[i] * dtorque;
    }
    let singular = jacobian.singular_values();
    let condition = singular.max() / singular.min();
    if !condition.is_finite() || condition > MAX_CONDITION_NUMBER {
        return Err(Error::SingularJacobian { condition });
    }
    Ok(jacobian)
}

/// Linearised pitch allocator about hover.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixer {
    pub config: MixerConfig,
    pub jacobian: Matrix4<f64>,
    inverse: Matrix4<f64>,
    /// Per-rotor thrust at the hover pitch.
    pub hover_thrust: f64,
    pitch_min: f64,
    pitch_max: f64,
}

impl Mixer {
    pub fn build(
        geom: &RotorGeometry,
        consts: &AeroConstants,
        omega: f64,
        config: MixerConfig,
        variant: InflowVariant,
    ) -> Result<Self> {
        let jacobian = build_allocation_jacobian(geom, consts, omega, &config, variant)?;
        let inverse = jacobian.try_inverse().ok_or(Error::SingularJacobian { condition: f64::INFINITY })?;
        let hover = solve_rotor(geom, consts, RotorOperatingPoint::new(omega, config.hover_pitch)?, variant)?;
        Ok(Mixer {
            config,
            jacobian,
            inverse,
            hover_thrust: hover.thrust_n,
            pitch_min: geom.pitch_min(),
            pitch_max: geom.pitch_max(),
        })
    }

    /// Total thrust at hover pitch on all rotors.
    pub fn hover_total_thrust(&self) -> f64 {
        4.0 * self.hover_thrust
    }

    /// Pitch deviations from hover that realise a wrench deviation, no limits.
    pub fn pitch_deviation(&self, wrench_delta: &Vector4<f64>) -> Vector4<f64> {
        self.inverse * wrench_delta
    }

    /// Pitches that realise `thrust_cmd` and `torque_cmd` to first order.
    ///
    /// Saturation keeps the thrust command and scales roll/pitch torque first,
    /// then yaw torque, by the largest factor in [0, 1] that fits the limits.
    pub fn allocate(&self, thrust_cmd: f64, torque_cmd: &Vector3<f64>) -> [f64; 4] {
        let hover = Vector4::repeat(self.config.hover_pitch);
        let thrust_part = self.inverse * Vector4::new(thrust_cmd - self.hover_total_thrust(), 0.0, 0.0, 0.0);
        let tilt_part = self.inverse * Vector4::new(0.0, torque_cmd.x, torque_cmd.y, 0.0);
        let yaw_part = self.inverse * Vector4::new(0.0, 0.0, 0.0, torque_cmd.z);

        let base = (hover + thrust_part).map(|t| t.clamp(self.pitch_min, self.pitch_max));
        let tilt_scale = self.feasible_scale(&base, &tilt_part);
        let with_tilt = base + tilt_part * tilt_scale;
        let yaw_scale = self.feasible_scale(&with_tilt, &yaw_part);
        let pitches = (with_tilt + yaw_part * yaw_scale).map(|t| t.clamp(self.pitch_min, self.pitch_max));
        [pitches[0], pitches[1], pitches[2], pitches[3]]
    }

    /// Largest `s` in [0, 1] with `base + s·direction` inside the pitch limits.
    fn feasible_scale(&self, base: &Vector4<f64>, direction: &Vector4<f64>) -> f64 {
        let mut scale: f64 = 1.0;
        for (b, d) in base.iter().zip(direction.iter()) {
            if *d > 0.0 {
                scale = scale.min((self.pitch_max - b) / d);
            } else if *d < 0.0 {
                scale = scale.min((self.pitch_min - b) / d);
            }
        }
        scale.max(0.0)
    }
}
