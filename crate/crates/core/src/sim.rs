//! Closed-loop rigid-body simulation: attitude plus vertical translation,
//! driven by the PD attitude loop, the pitch allocator, the governor and the
//! blade element rotor model.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use nalgebra::{Quaternion, SVector, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::aero::{pitch_for_thrust, solve_rotor, AeroConstants, InflowVariant, RotorGeometry, RotorOperatingPoint};
use crate::control::{governor_step, pd_torque, synthesize_pd, AxisSpec, GovernorSpec, Mixer, MixerConfig, PdGains};
use crate::error::{Error, Result};
use crate::units::{format_significant, GRAVITY};

/// State magnitude beyond which integration is considered diverged.
pub const BLOWUP_LIMIT: f64 = 1e6;
pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Roll,
    Pitch,
    Yaw,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Roll, Axis::Pitch, Axis::Yaw];

    pub fn index(self) -> usize {
        match self {
            Axis::Roll => 0,
            Axis::Pitch => 1,
            Axis::Yaw => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Roll => "roll",
            Axis::Pitch => "pitch",
            Axis::Yaw => "yaw",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "roll" => Ok(Axis::Roll),
            "pitch" => Ok(Axis::Pitch),
            "yaw" => Ok(Axis::Yaw),
            other => Err(Error::invalid(format!("unknown axis `{other}`"))),
        }
    }
}

/// Design parameters from which a [`VehicleModel`] is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleParams {
    pub mass_kg: f64,
    /// Principal moments of inertia (Ixx, Iyy, Izz), kg·m².
    pub inertia: Vector3<f64>,
    pub geometry: RotorGeometry,
    pub aero: AeroConstants,
    pub variant: InflowVariant,
    pub arm_length: f64,
    pub governor: GovernorSpec,
    pub zeta: f64,
    pub omega_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleModel {
    pub mass_kg: f64,
    pub inertia: Vector3<f64>,
    pub geometry: RotorGeometry,
    pub aero: AeroConstants,
    pub variant: InflowVariant,
    pub mixer: Mixer,
    pub governor: GovernorSpec,
    /// Roll, pitch, yaw.
    pub gains: [PdGains; 3],
    pub gravity: f64,
}

impl VehicleModel {
    /// Trims the rotors for hover at the governor speed, linearises the mixer
    /// there and synthesises one PD loop per axis.
    pub fn new(params: &VehicleParams) -> Result<Self> {
        if !(params.mass_kg.is_finite() && params.mass_kg > 0.0) {
            return Err(Error::invalid("vehicle mass must be positive"));
        }
        if params.inertia.iter().any(|i| !(i.is_finite() && *i > 0.0)) {
            return Err(Error::invalid("moments of inertia must be positive"));
        }
        params.aero.validate()?;
        params.governor.validate()?;
        let omega = params.governor.omega_ref;
        let hover_pitch =
            pitch_for_thrust(&params.geometry, &params.aero, omega, params.mass_kg * GRAVITY / 4.0, params.variant)?;
        let mixer = Mixer::build(
            &params.geometry,
            &params.aero,
            omega,
            MixerConfig { arm_length: params.arm_length, spin_directions: MixerConfig::DEFAULT_SPINS, hover_pitch },
            params.variant,
        )?;
        let mut gains = [PdGains { kp: 0.0, kd: 0.0 }; 3];
        for (gain, inertia) in gains.iter_mut().zip(params.inertia.iter()) {
            *gain = synthesize_pd(&AxisSpec::new(*inertia, params.zeta, params.omega_n)?)?;
        }
        Ok(VehicleModel {
            mass_kg: params.mass_kg,
            inertia: params.inertia,
            geometry: params.geometry,
            aero: params.aero,
            variant: params.variant,
            mixer,
            governor: params.governor,
            gains,
            gravity: GRAVITY,
        })
    }

    /// The symmetric X frame expects Ixx == Iyy.
    pub fn symmetry_warning(&self) -> Option<String> {
        (self.inertia.x != self.inertia.y).then(|| {
            format!("Ixx ({}) differs from Iyy ({}); the X frame is normally symmetric", self.inertia.x, self.inertia.y)
        })
    }

    pub fn weight(&self) -> f64 {
        self.mass_kg * self.gravity
    }

    /// Level hover at the governor speed.
    pub fn hover_state(&self) -> SimState {
        SimState {
            attitude: UnitQuaternion::identity(),
            body_rates: Vector3::zeros(),
            altitude_m: 0.0,
            vertical_velocity: 0.0,
            rotor_speed: self.governor.omega_ref,
            time_s: 0.0,
        }
    }

    /// Per-rotor thrust and aerodynamic torque.
    pub fn rotor_loads(&self, pitches: &[f64; 4], omega: f64) -> Result<([f64; 4], [f64; 4])> {
        let mut thrust = [0.0; 4];
        let mut torque = [0.0; 4];
        for i in 0..4 {
            let s =
                solve_rotor(&self.geometry, &self.aero, RotorOperatingPoint::new(omega, pitches[i])?, self.variant)?;
            thrust[i] = s.thrust_n;
            torque[i] = s.torque_nm;
        }
        Ok((thrust, torque))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    /// Body to world, world z up.
    pub attitude: UnitQuaternion<f64>,
    /// (p, q, r), rad/s.
    pub body_rates: Vector3<f64>,
    pub altitude_m: f64,
    pub vertical_velocity: f64,
    /// rad/s
    pub rotor_speed: f64,
    pub time_s: f64,
}

impl SimState {
    fn is_finite(&self) -> bool {
        self.attitude.coords.iter().all(|v| v.is_finite())
            && self.body_rates.iter().all(|v| v.is_finite())
            && self.altitude_m.is_finite()
            && self.vertical_velocity.is_finite()
            && self.rotor_speed.is_finite()
    }

    fn max_magnitude(&self) -> f64 {
        self.body_rates.amax().max(self.altitude_m.abs()).max(self.vertical_velocity.abs()).max(self.rotor_speed.abs())
    }

    /// Rotational kinetic energy `½ωᵀIω`.
    pub fn rotational_energy(&self, inertia: &Vector3<f64>) -> f64 {
        0.5 * self.body_rates.component_mul(inertia).dot(&self.body_rates)
    }

    /// (roll, pitch, yaw), ZYX convention.
    pub fn euler(&self) -> (f64, f64, f64) {
        self.attitude.euler_angles()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub attitude: Quaternion<f64>,
    pub body_accel: Vector3<f64>,
    pub climb_rate: f64,
    pub vertical_accel: f64,
}

type Packed = SVector<f64, 9>;

fn pack(q: &Quaternion<f64>, rates: &Vector3<f64>, altitude: f64, vz: f64) -> Packed {
    Packed::from_column_slice(&[q.w, q.i, q.j, q.k, rates.x, rates.y, rates.z, altitude, vz])
}

fn derivative_packed(d: &StateDerivative) -> Packed {
    pack(&d.attitude, &d.body_accel, d.climb_rate, d.vertical_accel)
}

fn rates_from(state: &SimState) -> Packed {
    pack(state.attitude.quaternion(), &state.body_rates, state.altitude_m, state.vertical_velocity)
}

/// Time derivative of the rigid-body state under fixed rotor pitches.
pub fn dynamics_derivative(
    model: &VehicleModel,
    state: &SimState,
    pitches: &[f64; 4],
    omega: f64,
) -> Result<StateDerivative> {
    let (thrust, torque) = model.rotor_loads(pitches, omega)?;
    Ok(derivative_with_loads(
        model,
        state.attitude.quaternion(),
        &state.body_rates,
        &thrust,
        &torque,
        state.vertical_velocity,
    ))
}

fn derivative_with_loads(
    model: &VehicleModel,
    q: &Quaternion<f64>,
    rates: &Vector3<f64>,
    thrust: &[f64; 4],
    torque: &[f64; 4],
    vertical_velocity: f64,
) -> StateDerivative {
    let wrench = model.mixer.config.wrench(thrust, torque);
    let body_torque = Vector3::new(wrench[1], wrench[2], wrench[3]);
    let momentum = rates.component_mul(&model.inertia);
    let body_accel = (body_torque - rates.cross(&momentum)).component_div(&model.inertia);

    let attitude = q * Quaternion::from_imag(*rates) * 0.5;

    // z component of the body z axis in the world frame
    let n = q.norm_squared();
    let tilt_cos = 1.0 - 2.0 * (q.i * q.i + q.j * q.j) / n;
    let vertical_accel = (wrench[0] * tilt_cos - model.mass_kg * model.gravity) / model.mass_kg;

    StateDerivative { attitude, body_accel, climb_rate: vertical_velocity, vertical_accel }
}

/// Classical RK4 over `dt` with pitches and rotor speed held, followed by a
/// quaternion renormalisation and one governor update.
pub fn step_rk4(model: &VehicleModel, state: &SimState, pitches: &[f64; 4], dt: f64) -> Result<SimState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("time step must be positive"));
    }
    let omega = state.rotor_speed;
    // pitches and speed are frozen over the step, so the loads are too
    let (thrust, torque) = model.rotor_loads(pitches, omega)?;
    let f = |x: &Packed| -> Packed {
        let q = Quaternion::new(x[0], x[1], x[2], x[3]);
        let rates = Vector3::new(x[4], x[5], x[6]);
        derivative_packed(&derivative_with_loads(model, &q, &rates, &thrust, &torque, x[8]))
    };

    let x0 = rates_from(state);
    let k1 = f(&x0);
    let k2 = f(&(x0 + k1 * (0.5 * dt)));
    let k3 = f(&(x0 + k2 * (0.5 * dt)));
    let k4 = f(&(x0 + k3 * dt));
    let x1 = x0 + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);

    let next = SimState {
        attitude: UnitQuaternion::from_quaternion(Quaternion::new(x1[0], x1[1], x1[2], x1[3])),
        body_rates: Vector3::new(x1[4], x1[5], x1[6]),
        altitude_m: x1[7],
        vertical_velocity: x1[8],
        rotor_speed: governor_step(&model.governor, omega, dt)?,
        time_s: state.time_s + dt,
    };
    if !next.is_finite() || next.max_magnitude() > BLOWUP_LIMIT {
        return Err(Error::NumericalBlowup { time_s: next.time_s });
    }
    Ok(next)
}

/// Reference held from `start_time` until the next segment starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start_time: f64,
    pub roll_ref: f64,
    pub pitch_ref: f64,
    pub yaw_ref: f64,
    /// Total thrust command, N. `None` holds the vehicle weight.
    pub collective_thrust: Option<f64>,
}

impl Segment {
    pub fn level(start_time: f64) -> Self {
        Segment { start_time, roll_ref: 0.0, pitch_ref: 0.0, yaw_ref: 0.0, collective_thrust: None }
    }

    pub fn reference(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Roll => self.roll_ref,
            Axis::Pitch => self.pitch_ref,
            Axis::Yaw => self.yaw_ref,
        }
    }
}

/// Torque impulse applied to the body between two steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disturbance {
    pub time_s: f64,
    pub axis: Axis,
    /// N·m·s
    pub impulse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub duration_s: f64,
    pub dt_s: f64,
    pub initial: SimState,
    pub segments: Vec<Segment>,
    pub disturbances: Vec<Disturbance>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_s.is_finite() && self.dt_s > 0.0) {
            return Err(Error::invalid("scenario dt must be positive"));
        }
        if !(self.duration_s.is_finite() && self.duration_s >= self.dt_s) {
            return Err(Error::invalid("scenario duration must be at least one step"));
        }
        let first =
            self.segments.first().ok_or_else(|| Error::invalid("scenario needs at least one reference segment"))?;
        if first.start_time != 0.0 {
            return Err(Error::invalid("first reference segment must start at t = 0"));
        }
        for pair in self.segments.windows(2) {
            if pair[1].start_time.partial_cmp(&pair[0].start_time) != Some(Ordering::Greater) {
                return Err(Error::invalid("reference segments must be strictly ordered by start time"));
            }
        }
        for seg in &self.segments {
            if seg.start_time.partial_cmp(&self.duration_s) != Some(Ordering::Less) {
                return Err(Error::invalid("reference segment starts after the scenario ends"));
            }
            let values = [seg.roll_ref, seg.pitch_ref, seg.yaw_ref, seg.collective_thrust.unwrap_or(0.0)];
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("reference values must be finite"));
            }
            if seg.collective_thrust.is_some_and(|t| t < 0.0) {
                return Err(Error::invalid("collective thrust must be non-negative"));
            }
        }
        for d in &self.disturbances {
            if !(d.time_s >= 0.0 && d.time_s < self.duration_s && d.impulse.is_finite()) {
                return Err(Error::invalid("disturbances must be finite and fall inside the scenario"));
            }
        }
        if !self.initial.is_finite() || self.initial.rotor_speed <= 0.0 {
            return Err(Error::invalid("initial state must be finite with positive rotor speed"));
        }
        Ok(())
    }

    pub fn step_count(&self) -> usize {
        (self.duration_s / self.dt_s).round() as usize
    }

    /// Segment in force at time `t`.
    pub fn active_segment(&self, t: f64) -> &Segment {
        let idx = self.segments.partition_point(|s| s.start_time <= t);
        &self.segments[idx.saturating_sub(1)]
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(2.0 * PI);
    if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRecord {
    pub time_s: f64,
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub pitches: [f64; 4],
    pub omega: f64,
    pub altitude_m: f64,
    pub vz: f64,
    pub thrust_total: f64,
    pub roll_ref: f64,
    pub pitch_ref: f64,
    pub yaw_ref: f64,
}

impl LogRecord {
    pub fn angle(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Roll => self.roll,
            Axis::Pitch => self.pitch,
            Axis::Yaw => self.yaw,
        }
    }

    pub fn reference(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Roll => self.roll_ref,
            Axis::Pitch => self.pitch_ref,
            Axis::Yaw => self.yaw_ref,
        }
    }

    fn fields(&self) -> [f64; 18] {
        [
            self.time_s,
            self.roll,
            self.pitch,
            self.yaw,
            self.p,
            self.q,
            self.r,
            self.pitches[0],
            self.pitches[1],
            self.pitches[2],
            self.pitches[3],
            self.omega,
            self.altitude_m,
            self.vz,
            self.thrust_total,
            self.roll_ref,
            self.pitch_ref,
            self.yaw_ref,
        ]
    }

    fn from_fields(f: &[f64; 18]) -> Self {
        LogRecord {
            time_s: f[0],
            roll: f[1],
            pitch: f[2],
            yaw: f[3],
            p: f[4],
            q: f[5],
            r: f[6],
            pitches: [f[7], f[8], f[9], f[10]],
            omega: f[11],
            altitude_m: f[12],
            vz: f[13],
            thrust_total: f[14],
            roll_ref: f[15],
            pitch_ref: f[16],
            yaw_ref: f[17],
        }
    }
}

/// Runs the closed loop. Each record holds the state at the start of a step
/// together with the commands applied over that step.
pub fn run_scenario(model: &VehicleModel, scenario: &Scenario) -> Result<Vec<LogRecord>> {
    scenario.validate()?;
    let dt = scenario.dt_s;
    let steps = scenario.step_count();
    let mut disturbances = scenario.disturbances.clone();
    disturbances.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
    let mut pending = disturbances.iter().peekable();

    let mut state = scenario.initial;
    state.time_s = 0.0;
    let mut log = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = k as f64 * dt;
        while let Some(d) = pending.next_if(|d| d.time_s < t + dt) {
            let idx = d.axis.index();
            state.body_rates[idx] += d.impulse / model.inertia[idx];
        }

        let segment = scenario.active_segment(t);
        let (roll, pitch, yaw) = state.euler();
        let errors = [segment.roll_ref - roll, segment.pitch_ref - pitch, wrap_angle(segment.yaw_ref - yaw)];
        let torque = Vector3::from_fn(|i, _| pd_torque(&model.gains[i], errors[i], state.body_rates[i]));
        let thrust_cmd = segment.collective_thrust.unwrap_or_else(|| model.weight());
        let pitches = model.mixer.allocate(thrust_cmd, &torque);
        let (thrust, _) = model.rotor_loads(&pitches, state.rotor_speed)?;

        log.push(LogRecord {
            time_s: t,
            roll,
            pitch,
            yaw,
            p: state.body_rates.x,
            q: state.body_rates.y,
            r: state.body_rates.z,
            pitches,
            omega: state.rotor_speed,
            altitude_m: state.altitude_m,
            vz: state.vertical_velocity,
            thrust_total: thrust.iter().sum(),
            roll_ref: segment.roll_ref,
            pitch_ref: segment.pitch_ref,
            yaw_ref: segment.yaw_ref,
        });

        state = step_rk4(model, &state, &pitches, dt)?;
        state.time_s = (k + 1) as f64 * dt;
    }
    Ok(log)
}

pub const LOG_COLUMNS: [&str; 18] = [
    "time_s",
    "roll_rad",
    "pitch_rad",
    "yaw_rad",
    "p_rads",
    "q_rads",
    "r_rads",
    "theta1_rad",
    "theta2_rad",
    "theta3_rad",
    "theta4_rad",
    "omega_rads",
    "altitude_m",
    "vz_mps",
    "thrust_total_n",
    "roll_ref_rad",
    "pitch_ref_rad",
    "yaw_ref_rad",
];

pub const LOG_SIGNIFICANT_DIGITS: usize = 9;

pub fn write_log_csv<W: Write>(log: &[LogRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", LOG_COLUMNS.join(","))?;
    for record in log {
        let line: Vec<String> =
            record.fields().iter().map(|v| format_significant(*v, LOG_SIGNIFICANT_DIGITS)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_log_csv<R: BufRead>(input: R) -> Result<Vec<LogRecord>> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::invalid("empty log"))?.map_err(|e| Error::invalid(e.to_string()))?;
    if header.trim() != LOG_COLUMNS.join(",") {
        return Err(Error::invalid("unexpected log header"));
    }
    let mut log = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::invalid(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = [0.0; 18];
        let mut count = 0;
        for (slot, text) in fields.iter_mut().zip(line.split(',')) {
            *slot =
                text.trim().parse().map_err(|_| Error::invalid(format!("log line {}: bad number `{text}`", n + 2)))?;
            count += 1;
        }
        if count != 18 || line.split(',').count() != 18 {
            return Err(Error::invalid(format!("log line {}: expected 18 fields", n + 2)));
        }
        log.push(LogRecord::from_fields(&fields));
    }
    Ok(log)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMetrics {
    /// Peak excursion past the final value as a fraction of the step.
    pub overshoot: f64,
    /// Time from the step until the response stays within 2% of the step
    /// size around its final value.
    pub settling_time_2pct_s: f64,
    /// Reference minus the mean of the final 10% of samples.
    pub steady_state_error: f64,
    /// Time from the step to the largest excursion.
    pub peak_time_s: f64,
}

impl StepMetrics {
    /// Damping ratio and natural frequency of the second-order system with
    /// the same overshoot and peak time. `None` without overshoot.
    pub fn second_order_fit(&self) -> Option<(f64, f64)> {
        if self.overshoot <= 0.0 || self.peak_time_s <= 0.0 {
            return None;
        }
        let ln = self.overshoot.ln();
        let zeta = -ln / (PI * PI + ln * ln).sqrt();
        let omega_n = PI / (self.peak_time_s * (1.0 - zeta * zeta).sqrt());
        Some((zeta, omega_n))
    }
}

/// Step metrics of a sampled response. `target` is the reference value after
/// the step, `delta` the size of the step.
pub fn step_response_metrics(
    times: &[f64],
    values: &[f64],
    target: f64,
    step_time: f64,
    delta: f64,
) -> Result<StepMetrics> {
    if times.len() != values.len() {
        return Err(Error::invalid("time and value series differ in length"));
    }
    if !(delta.is_finite() && delta != 0.0) {
        return Err(Error::invalid("reference step must be non-zero"));
    }
    let start = times.partition_point(|t| *t < step_time);
    if start >= times.len() || times.first().is_none_or(|t| *t > step_time) {
        return Err(Error::StepNotFound { channel: String::from("series"), step_time });
    }
    let tail_len = (values.len() / 10).max(1);
    let tail = &values[values.len() - tail_len..];
    let final_value = tail.iter().sum::<f64>() / tail_len as f64;

    let after = &values[start..];
    let (peak_idx, peak) = after
        .iter()
        .map(|y| (y - final_value) / delta)
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let band = 0.02 * delta.abs();
    let last_outside = after.iter().rposition(|y| (y - final_value).abs() > band);
    let settle_idx = match last_outside {
        None => start,
        Some(i) if start + i + 1 < times.len() => start + i + 1,
        Some(_) => times.len() - 1,
    };
    Ok(StepMetrics {
        overshoot: peak.max(0.0),
        settling_time_2pct_s: times[settle_idx] - step_time,
        steady_state_error: target - final_value,
        peak_time_s: times[start + peak_idx] - step_time,
    })
}

pub fn step_metrics(log: &[LogRecord], channel: Axis, step_time: f64, reference_delta: f64) -> Result<StepMetrics> {
    let not_found = || Error::StepNotFound { channel: channel.to_string(), step_time };
    let last = log.last().ok_or_else(not_found)?;
    if last.time_s < step_time || log[0].time_s > step_time {
        return Err(not_found());
    }
    let times: Vec<f64> = log.iter().map(|r| r.time_s).collect();
    let values: Vec<f64> = log.iter().map(|r| r.angle(channel)).collect();
    step_response_metrics(&times, &values, last.reference(channel), step_time, reference_delta).map_err(|e| match e {
        Error::StepNotFound { .. } => not_found(),
        other => other,
    })
}

/// Time and size of the first change in `channel`'s reference.
pub fn find_first_step(log: &[LogRecord], channel: Axis) -> Option<(f64, f64)> {
    log.windows(2).find_map(|w| {
        let delta = w[1].reference(channel) - w[0].reference(channel);
        (delta != 0.0).then_some((w[1].time_s, delta))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aero::calibrate_solidity;
    use crate::units::rpm_to_rad_s;

    pub(crate) fn reference_model() -> VehicleModel {
        let aero = AeroConstants::default();
        let omega = rpm_to_rad_s(2500.0);
        let draft = RotorGeometry::new(0.4, 2, 0.05, -14f64.to_radians(), 14f64.to_radians()).unwrap();
        let sigma =
            calibrate_solidity(&draft, &aero, omega, 14f64.to_radians(), 39.0, InflowVariant::MomentumConsistent)
                .unwrap();
        VehicleModel::new(&VehicleParams {
            mass_kg: 10.0,
            inertia: Vector3::new(0.43, 0.43, 0.67),
            geometry: draft.with_solidity(sigma).unwrap(),
            aero,
            variant: InflowVariant::MomentumConsistent,
            arm_length: 0.6,
            governor: GovernorSpec { omega_ref: omega, time_constant_s: 0.5 },
            zeta: 0.8,
            omega_n: 7.0,
        })
        .unwrap()
    }

    fn hover_pitches(m: &VehicleModel) -> [f64; 4] {
        [m.mixer.config.hover_pitch; 4]
    }

    #[test]
    fn hover_is_equilibrium() {
        let m = reference_model();
        let s = m.hover_state();
        let d = dynamics_derivative(&m, &s, &hover_pitches(&m), s.rotor_speed).unwrap();
        assert_eq!(d.body_accel, Vector3::zeros());
        assert_eq!(d.attitude.coords.norm(), 0.0);
        assert!(d.vertical_accel.abs() < 1e-6 / m.mass_kg * 4.0);
        let next = step_rk4(&m, &s, &hover_pitches(&m), 0.01).unwrap();
        assert!(next.attitude.angle() < 1e-9);
        assert!(next.body_rates.norm() < 1e-9);
        assert!(next.vertical_velocity.abs() < 1e-9);
        assert!((next.time_s - 0.01).abs() < 1e-15);
    }

    #[test]
    fn single_axis_rotation_has_no_gyroscopic_term() {
        let m = reference_model();
        let mut s = m.hover_state();
        s.body_rates = Vector3::new(0.7, 0.0, 0.0);
        let d = dynamics_derivative(&m, &s, &hover_pitches(&m), s.rotor_speed).unwrap();
        assert_eq!(d.body_accel, Vector3::zeros());
    }

    #[test]
    fn differential_pitch_roll_torque() {
        let m = reference_model();
        let s = m.hover_state();
        let h = m.mixer.config.hover_pitch;
        let delta = 0.01;
        // rotor 2 (front-left) up, rotor 4 (rear-right) down
        let pitches = [h, h + delta, h, h - delta];
        let d = dynamics_derivative(&m, &s, &pitches, s.rotor_speed).unwrap();
        let (thrust, _) = m.rotor_loads(&pitches, s.rotor_speed).unwrap();
        let half_diff = (thrust[1] - thrust[3]) / 2.0;
        let roll_torque = d.body_accel.x * m.inertia.x;
        let arm = 0.6 / std::f64::consts::SQRT_2;
        assert!((roll_torque - 2.0 * half_diff * arm).abs() < 1e-9);
        // matches the jacobian roll row to first order
        let from_jacobian = m.mixer.jacobian[(1, 1)] * delta - m.mixer.jacobian[(1, 3)] * delta;
        assert!((roll_torque - from_jacobian).abs() / roll_torque.abs() < 1e-3);
    }

    #[test]
    fn blowup_is_reported() {
        let m = reference_model();
        let mut s = m.hover_state();
        s.body_rates = Vector3::new(2e6, 0.0, 0.0);
        assert!(matches!(step_rk4(&m, &s, &hover_pitches(&m), 1e-3), Err(Error::NumericalBlowup { .. })));
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((wrap_angle(-0.1) + 0.1).abs() < 1e-12);
    }

    #[test]
    fn scenario_validation() {
        let m = reference_model();
        let base = Scenario {
            duration_s: 1.0,
            dt_s: 0.01,
            initial: m.hover_state(),
            segments: vec![Segment::level(0.0)],
            disturbances: vec![],
        };
        assert!(base.validate().is_ok());
        let mut bad = base.clone();
        bad.dt_s = 0.0;
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.segments = vec![Segment::level(0.1)];
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.segments = vec![Segment::level(0.0), Segment::level(0.5), Segment::level(0.5)];
        assert!(bad.validate().is_err());
        let mut bad = base.clone();
        bad.disturbances = vec![Disturbance { time_s: 2.0, axis: Axis::Roll, impulse: 0.1 }];
        assert!(bad.validate().is_err());
        assert!(run_scenario(&m, &bad).is_err());
    }

    #[test]
    fn disturbance_kicks_rate() {
        let m = reference_model();
        let scenario = Scenario {
            duration_s: 0.5,
            dt_s: 0.001,
            initial: m.hover_state(),
            segments: vec![Segment::level(0.0)],
            disturbances: vec![Disturbance { time_s: 0.1, axis: Axis::Pitch, impulse: 0.043 }],
        };
        let log = run_scenario(&m, &scenario).unwrap();
        assert_eq!(log[99].q, 0.0);
        assert!((log[100].q - 0.1).abs() < 1e-12);
        assert!(log.iter().map(|r| r.pitch).fold(0.0, f64::max) > 0.005);
    }

    #[test]
    fn step_metrics_analytic_trace() {
        let zeta: f64 = 0.8;
        let wn = 7.0;
        let wd = wn * (1.0 - zeta * zeta).sqrt();
        let times: Vec<f64> = (0..6000).map(|k| k as f64 * 1e-3).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|&t| {
                if t < 1.0 {
                    0.0
                } else {
                    let t = t - 1.0;
                    1.0 - (-zeta * wn * t).exp() * ((wd * t).cos() + zeta / (1.0 - zeta * zeta).sqrt() * (wd * t).sin())
                }
            })
            .collect();
        let m = step_response_metrics(&times, &values, 1.0, 1.0, 1.0).unwrap();
        assert!((m.overshoot - 0.015_164_619_864_546_57).abs() < 1e-3);
        assert!((m.settling_time_2pct_s - 0.5366).abs() < 2e-3);
        let (z, w) = m.second_order_fit().unwrap();
        assert!((z - 0.8).abs() < 5e-3 && (w - 7.0).abs() < 0.05);

        let crit: Vec<f64> = times
            .iter()
            .map(|&t| if t < 1.0 { 0.0 } else { 1.0 - (1.0 + wn * (t - 1.0)) * (-wn * (t - 1.0)).exp() })
            .collect();
        assert!(step_response_metrics(&times, &crit, 1.0, 1.0, 1.0).unwrap().overshoot < 1e-12);

        let flat = vec![1.0; times.len()];
        let m = step_response_metrics(&times, &flat, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(m.settling_time_2pct_s, 0.0);
        assert_eq!(m.steady_state_error, 0.0);

        assert!(matches!(step_response_metrics(&times, &flat, 1.0, 10.0, 1.0), Err(Error::StepNotFound { .. })));
    }

    #[test]
    fn log_csv_round_trip() {
        let m = reference_model();
        let scenario = Scenario {
            duration_s: 0.2,
            dt_s: 0.01,
            initial: m.hover_state(),
            segments: vec![Segment::level(0.0), Segment { roll_ref: 0.05, ..Segment::level(0.05) }],
            disturbances: vec![],
        };
        let log = run_scenario(&m, &scenario).unwrap();
        let mut buf = Vec::new();
        write_log_csv(&log, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), LOG_COLUMNS.join(","));
        assert_eq!(text.lines().count(), log.len() + 1);
        let back = read_log_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), log.len());
        for (a, b) in log.iter().zip(&back) {
            for (x, y) in a.fields().iter().zip(b.fields().iter()) {
                assert!((x - y).abs() <= 1e-8 * x.abs().max(1e-300), "{x} vs {y}");
            }
        }
        assert_eq!(find_first_step(&back, Axis::Roll).map(|s| s.1), Some(0.05));
        assert!(find_first_step(&back, Axis::Yaw).is_none());
    }
}
