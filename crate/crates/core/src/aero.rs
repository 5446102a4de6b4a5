//! Hover performance of a constant-speed, variable-pitch rotor.
//!
//! Momentum theory supplies the ideal induced power bound; blade element
//! theory with uniform inflow supplies thrust and power coefficients as a
//! function of collective pitch:
//!
//! ```text
//! CT  = (σa/2)(θ/3 − λ/2)
//! λ   = (σa/16)[√(1 + 64θ/(kσa)) − 1]       k = 3 (momentum consistent) or 1 (as printed)
//! CP  = κ·CT^{3/2}/√2 + (σ/8)(β0 + β1·α + β2·α²),   α = θ − λ
//! T   = CT·ρA(ΩR)²,   P = CP·ρA(ΩR)³,   Q = P/Ω
//! ```
//!
//! Negative pitch is handled as an odd extension of the positive branch.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect_increasing, BISECTION_TOLERANCE};

/// Largest pitch magnitude a geometry may declare, rad.
pub const PITCH_LIMIT_BOUND: f64 = 0.35;
/// Exclusive upper bound on rotor solidity.
pub const SOLIDITY_UPPER: f64 = 0.3;
const SOLIDITY_LOWER: f64 = 1e-9;
/// Slack for pitch-limit checks so that degree→radian round trips at the
/// envelope edge are not rejected.
const PITCH_SLACK: f64 = 1e-12;

/// Empirical aerodynamic constants of the blade section and the air.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AeroConstants {
    /// Sectional lift curve slope, per radian.
    pub lift_slope: f64,
    /// Induced power correction factor κ.
    pub kappa: f64,
    /// Drag polar `Cd(α) = beta0 + beta1·α + beta2·α²`, α in radians.
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Air density, kg/m³.
    pub rho: f64,
}

impl Default for AeroConstants {
    /// Constants for off-the-shelf hobby helicopter blades at near sea level.
    fn default() -> Self {
        AeroConstants { lift_slope: 5.7, kappa: 1.60, beta0: 0.0130, beta1: -0.0216, beta2: 0.400, rho: 1.18 }
    }
}

impl AeroConstants {
    pub fn new(lift_slope: f64, kappa: f64, beta0: f64, beta1: f64, beta2: f64, rho: f64) -> Result<Self> {
        let consts = AeroConstants { lift_slope, kappa, beta0, beta1, beta2, rho };
        consts.validate()?;
        Ok(consts)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.lift_slope, self.kappa, self.beta0, self.beta1, self.beta2, self.rho];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("aerodynamic constants must be finite"));
        }
        if self.lift_slope <= 0.0 {
            return Err(Error::invalid("lift curve slope must be positive"));
        }
        if self.rho <= 0.0 {
            return Err(Error::invalid("air density must be positive"));
        }
        if self.kappa < 1.0 {
            return Err(Error::invalid("induced power correction must be >= 1"));
        }
        // minimum of the quadratic over the checked interval
        let lo = -PITCH_LIMIT_BOUND;
        let hi = PITCH_LIMIT_BOUND;
        let mut candidates = vec![lo, hi];
        if self.beta2 != 0.0 {
            let vertex = -self.beta1 / (2.0 * self.beta2);
            if vertex > lo && vertex < hi {
                candidates.push(vertex);
            }
        }
        if candidates.iter().any(|&a| self.drag_coefficient(a) <= 0.0) {
            return Err(Error::invalid("drag polar must be positive for |alpha| <= 0.35 rad"));
        }
        Ok(())
    }

    pub fn drag_coefficient(&self, alpha: f64) -> f64 {
        self.beta0 + self.beta1 * alpha + self.beta2 * alpha * alpha
    }
}

/// Physical description of one rotor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorGeometry {
    radius: f64,
    blade_count: u32,
    solidity: f64,
    pitch_min: f64,
    pitch_max: f64,
    disk_area: f64,
}

impl RotorGeometry {
    pub fn new(radius: f64, blade_count: u32, solidity: f64, pitch_min: f64, pitch_max: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid("rotor radius must be positive"));
        }
        if blade_count < 2 {
            return Err(Error::invalid("a rotor needs at least two blades"));
        }
        check_solidity(solidity)?;
        if !(pitch_min.is_finite() && pitch_max.is_finite()) || !(pitch_min < 0.0 && 0.0 < pitch_max) {
            return Err(Error::invalid("pitch limits must satisfy pitch_min < 0 < pitch_max"));
        }
        if pitch_min.abs() > PITCH_LIMIT_BOUND || pitch_max > PITCH_LIMIT_BOUND {
            return Err(Error::invalid("pitch limits must lie within ±0.35 rad"));
        }
        Ok(RotorGeometry { radius, blade_count, solidity, pitch_min, pitch_max, disk_area: PI * radius * radius })
    }

    /// Same rotor with a different solidity.
    pub fn with_solidity(&self, solidity: f64) -> Result<Self> {
        check_solidity(solidity)?;
        Ok(RotorGeometry { solidity, ..*self })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn blade_count(&self) -> u32 {
        self.blade_count
    }

    pub fn solidity(&self) -> f64 {
        self.solidity
    }

    pub fn pitch_min(&self) -> f64 {
        self.pitch_min
    }

    pub fn pitch_max(&self) -> f64 {
        self.pitch_max
    }

    /// π·R², m².
    pub fn disk_area(&self) -> f64 {
        self.disk_area
    }

    pub fn check_pitch(&self, theta: f64) -> Result<()> {
        if !theta.is_finite() {
            return Err(Error::invalid("pitch must be finite"));
        }
        if theta < self.pitch_min - PITCH_SLACK || theta > self.pitch_max + PITCH_SLACK {
            return Err(Error::PitchOutOfLimits { theta, min: self.pitch_min, max: self.pitch_max });
        }
        Ok(())
    }
}

fn check_solidity(solidity: f64) -> Result<()> {
    if !(solidity.is_finite() && solidity > 0.0 && solidity < SOLIDITY_UPPER) {
        return Err(Error::invalid("solidity must lie in (0, 0.3)"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorOperatingPoint {
    /// Rotor speed, rad/s.
    pub omega: f64,
    /// Collective pitch, rad.
    pub theta: f64,
}

impl RotorOperatingPoint {
    pub fn new(omega: f64, theta: f64) -> Result<Self> {
        check_omega(omega)?;
        if !theta.is_finite() {
            return Err(Error::invalid("pitch must be finite"));
        }
        Ok(RotorOperatingPoint { omega, theta })
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid("rotor speed must be positive"));
    }
    Ok(())
}

/// Which closed form to use for the uniform inflow ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InflowVariant {
    /// `64θ/(σa)` under the radical.
    AsPrinted,
    /// `64θ/(3σa)` under the radical; satisfies `λ = √(CT/2)`.
    #[default]
    MomentumConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCoefficients {
    pub total: f64,
    pub induced: f64,
    pub profile: f64,
    /// Effective blade angle of attack θ − λ, rad.
    pub alpha_eff: f64,
}

/// Hover performance of one rotor at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorSolution {
    pub omega: f64,
    pub theta: f64,
    pub ct: f64,
    pub cp_total: f64,
    pub cp_induced: f64,
    pub cp_profile: f64,
    pub inflow: f64,
    pub alpha_eff: f64,
    pub thrust_n: f64,
    pub power_w: f64,
    pub torque_nm: f64,
}

/// Nondimensional state of a rotor; depends only on solidity, pitch and the
/// aerodynamic constants.
#[derive(Debug, Clone, Copy)]
struct Coefficients {
    inflow: f64,
    ct: f64,
    cp_induced: f64,
    cp_profile: f64,
    alpha_eff: f64,
}

fn inflow_unchecked(solidity: f64, lift_slope: f64, theta: f64, variant: InflowVariant) -> f64 {
    let sa = solidity * lift_slope;
    let k = match variant {
        InflowVariant::AsPrinted => 1.0,
        InflowVariant::MomentumConsistent => 3.0,
    };
    let magnitude = sa / 16.0 * ((1.0 + 64.0 * theta.abs() / (k * sa)).sqrt() - 1.0);
    if theta < 0.0 {
        -magnitude
    } else {
        magnitude
    }
}

fn coefficients(solidity: f64, consts: &AeroConstants, theta: f64, variant: InflowVariant) -> Coefficients {
    let sa = solidity * consts.lift_slope;
    let inflow = inflow_unchecked(solidity, consts.lift_slope, theta, variant);
    let ct = sa / 2.0 * (theta / 3.0 - inflow / 2.0);
    let cp_induced = consts.kappa * ct.abs().powf(1.5) / 2f64.sqrt();
    let alpha_eff = theta - inflow;
    let cp_profile = solidity / 8.0 * consts.drag_coefficient(alpha_eff);
    Coefficients { inflow, ct, cp_induced, cp_profile, alpha_eff }
}

/// Uniform inflow ratio λ at collective pitch `theta`.
pub fn inflow_ratio(geom: &RotorGeometry, consts: &AeroConstants, theta: f64, variant: InflowVariant) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::invalid("pitch must be finite"));
    }
    if geom.solidity * consts.lift_slope <= 0.0 {
        return Err(Error::invalid("solidity times lift slope must be positive"));
    }
    Ok(inflow_unchecked(geom.solidity, consts.lift_slope, theta, variant))
}

/// Thrust coefficient and the inflow ratio it was computed with, `(CT, λ)`.
pub fn thrust_coefficient(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    theta: f64,
    variant: InflowVariant,
) -> Result<(f64, f64)> {
    geom.check_pitch(theta)?;
    inflow_ratio(geom, consts, theta, variant)?;
    let c = coefficients(geom.solidity, consts, theta, variant);
    Ok((c.ct, c.inflow))
}

pub fn power_coefficient(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    theta: f64,
    variant: InflowVariant,
) -> Result<PowerCoefficients> {
    geom.check_pitch(theta)?;
    inflow_ratio(geom, consts, theta, variant)?;
    let c = coefficients(geom.solidity, consts, theta, variant);
    Ok(PowerCoefficients {
        total: c.cp_induced + c.cp_profile,
        induced: c.cp_induced,
        profile: c.cp_profile,
        alpha_eff: c.alpha_eff,
    })
}

fn dimensionalize(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    theta: f64,
    c: Coefficients,
) -> RotorSolution {
    let tip_speed = omega * geom.radius;
    let cp_total = c.cp_induced + c.cp_profile;
    let thrust_n = c.ct * consts.rho * geom.disk_area * tip_speed * tip_speed;
    let power_w = cp_total * consts.rho * geom.disk_area * tip_speed * tip_speed * tip_speed;
    RotorSolution {
        omega,
        theta,
        ct: c.ct,
        cp_total,
        cp_induced: c.cp_induced,
        cp_profile: c.cp_profile,
        inflow: c.inflow,
        alpha_eff: c.alpha_eff,
        thrust_n,
        power_w,
        torque_nm: power_w / omega,
    }
}

pub fn solve_rotor(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    op: RotorOperatingPoint,
    variant: InflowVariant,
) -> Result<RotorSolution> {
    check_omega(op.omega)?;
    geom.check_pitch(op.theta)?;
    inflow_ratio(geom, consts, op.theta, variant)?;
    let c = coefficients(geom.solidity, consts, op.theta, variant);
    Ok(dimensionalize(geom, consts, op.omega, op.theta, c))
}

fn thrust_at(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    theta: f64,
    variant: InflowVariant,
) -> Result<f64> {
    solve_rotor(geom, consts, RotorOperatingPoint { omega, theta }, variant).map(|s| s.thrust_n)
}

/// Collective pitch that produces `thrust_target` newtons at rotor speed `omega`.
///
/// Bisects the thrust–pitch map on `[0, pitch_max]` (or `[pitch_min, 0]` for a
/// negative target). The map is monotone under [`InflowVariant::MomentumConsistent`];
/// the printed variant goes negative at small pitch and may not invert.
pub fn pitch_for_thrust(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    thrust_target: f64,
    variant: InflowVariant,
) -> Result<f64> {
    check_omega(omega)?;
    if !thrust_target.is_finite() {
        return Err(Error::invalid("thrust target must be finite"));
    }
    if thrust_target == 0.0 {
        return Ok(0.0);
    }
    let max = thrust_at(geom, consts, omega, geom.pitch_max, variant)?;
    let min = thrust_at(geom, consts, omega, geom.pitch_min, variant)?;
    let out_of_envelope = Error::OutOfEnvelope { target: thrust_target, min, max };
    let (lo, hi) = if thrust_target > 0.0 {
        if thrust_target > max + BISECTION_TOLERANCE {
            return Err(out_of_envelope);
        }
        (0.0, geom.pitch_max)
    } else {
        if thrust_target < min - BISECTION_TOLERANCE {
            return Err(out_of_envelope);
        }
        (geom.pitch_min, 0.0)
    };
    bisect_increasing(
        |theta| thrust_at(geom, consts, omega, theta, variant),
        lo,
        hi,
        thrust_target,
        BISECTION_TOLERANCE,
    )
}

/// One sample of a pitch sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub theta: f64,
    pub thrust_n: f64,
    pub power_w: f64,
    pub torque_nm: f64,
    pub ct: f64,
    pub cp: f64,
    pub inflow: f64,
}

impl From<RotorSolution> for CurveRow {
    fn from(s: RotorSolution) -> Self {
        CurveRow {
            theta: s.theta,
            thrust_n: s.thrust_n,
            power_w: s.power_w,
            torque_nm: s.torque_nm,
            ct: s.ct,
            cp: s.cp_total,
            inflow: s.inflow,
        }
    }
}

/// Samples the rotor at `theta_start, theta_start + step, ...` up to and
/// including `theta_end` (within a 1e-9 step fraction).
pub fn sweep_curves(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    theta_start: f64,
    theta_end: f64,
    theta_step: f64,
    variant: InflowVariant,
) -> Result<Vec<CurveRow>> {
    check_omega(omega)?;
    if !(theta_step.is_finite() && theta_step > 0.0) {
        return Err(Error::invalid("pitch step must be positive"));
    }
    if !(theta_start.is_finite() && theta_end.is_finite()) {
        return Err(Error::invalid("pitch range must be finite"));
    }
    if theta_start > theta_end {
        return Err(Error::EmptyRange { start: theta_start, end: theta_end });
    }
    geom.check_pitch(theta_start)?;
    geom.check_pitch(theta_end)?;

    let count = ((theta_end - theta_start) / theta_step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|k| {
            let theta = (theta_start + k as f64 * theta_step).min(theta_end);
            solve_rotor(geom, consts, RotorOperatingPoint { omega, theta }, variant).map(CurveRow::from)
        })
        .collect()
}

/// Minimum power for `rotor_count` rotors of `disk_area_each` to lift
/// `total_lift_n` in hover: `N^{3/2} / √(2ρ·n·A)`.
pub fn ideal_hover_power(total_lift_n: f64, rotor_count: u32, disk_area_each: f64, rho: f64) -> Result<f64> {
    let positive = |v: f64| v.is_finite() && v > 0.0;
    if !(positive(total_lift_n) && rotor_count > 0 && positive(disk_area_each) && positive(rho)) {
        return Err(Error::invalid("ideal hover power needs positive lift, rotor count, area and density"));
    }
    let total_area = f64::from(rotor_count) * disk_area_each;
    Ok(total_lift_n.powf(1.5) / (2.0 * rho * total_area).sqrt())
}

/// Solidity that makes the rotor produce `thrust_ref` at (`omega`, `theta_ref`).
/// The solidity already stored in `geom` is ignored.
pub fn calibrate_solidity(
    geom: &RotorGeometry,
    consts: &AeroConstants,
    omega: f64,
    theta_ref: f64,
    thrust_ref: f64,
    variant: InflowVariant,
) -> Result<f64> {
    check_omega(omega)?;
    if !(thrust_ref.is_finite() && thrust_ref > 0.0) {
        return Err(Error::invalid("reference thrust must be positive"));
    }
    if !(theta_ref.is_finite() && theta_ref > 0.0) {
        return Err(Error::invalid("reference pitch must be positive"));
    }
    geom.check_pitch(theta_ref)?;
    let thrust_for = |solidity: f64| -> Result<f64> {
        let c = coefficients(solidity, consts, theta_ref, variant);
        let tip_speed = omega * geom.radius;
        Ok(c.ct * consts.rho * geom.disk_area * tip_speed * tip_speed)
    };
    let no_solution = Error::NoSolution { thrust_ref };
    if thrust_for(SOLIDITY_UPPER)? < thrust_ref - BISECTION_TOLERANCE || thrust_for(SOLIDITY_LOWER)? > thrust_ref {
        return Err(no_solution);
    }
    let solidity = bisect_increasing(thrust_for, SOLIDITY_LOWER, SOLIDITY_UPPER, thrust_ref, BISECTION_TOLERANCE)?;
    if solidity >= SOLIDITY_UPPER {
        return Err(no_solution);
    }
    Ok(solidity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Straight-line evaluation of the closed forms, kept separate from the
    // implementation above.
    fn oracle_inflow(sigma: f64, a: f64, theta: f64, k: f64) -> f64 {
        sigma * a / 16.0 * ((1.0 + 64.0 * theta / (k * sigma * a)).sqrt() - 1.0)
    }

    fn geom(sigma: f64) -> RotorGeometry {
        RotorGeometry::new(0.4, 2, sigma, -0.3, 0.3).unwrap()
    }

    fn geom14(sigma: f64) -> RotorGeometry {
        RotorGeometry::new(0.4, 2, sigma, -14f64.to_radians(), 14f64.to_radians()).unwrap()
    }

    const OMEGA_2500: f64 = 2500.0 * 2.0 * PI / 60.0;
    const MC: InflowVariant = InflowVariant::MomentumConsistent;

    #[test]
    fn inflow_examples() {
        let c = AeroConstants::default();
        let printed = inflow_ratio(&geom(0.05), &c, 0.24435, InflowVariant::AsPrinted).unwrap();
        assert_relative_eq!(printed, 0.115_331_116_656_038, max_relative = 1e-12);
        assert_relative_eq!(printed, oracle_inflow(0.05, 5.7, 0.24435, 1.0), max_relative = 1e-14);
        let mc = inflow_ratio(&geom(0.039), &c, 0.24435, MC).unwrap();
        assert_relative_eq!(mc, 0.054_805_740_820_984_26, max_relative = 1e-12);
        for v in [InflowVariant::AsPrinted, MC] {
            assert_eq!(inflow_ratio(&geom(0.07), &c, 0.0, v).unwrap(), 0.0);
        }
    }

    #[test]
    fn inflow_rejects_bad_input() {
        let c = AeroConstants::default();
        assert!(inflow_ratio(&geom(0.05), &c, f64::NAN, MC).is_err());
        let mut bad = c;
        bad.lift_slope = -1.0;
        assert!(inflow_ratio(&geom(0.05), &bad, 0.1, MC).is_err());
    }

    #[test]
    fn thrust_coefficient_examples() {
        let c = AeroConstants::default();
        let (ct, lambda) = thrust_coefficient(&geom(0.039), &c, 0.24435, MC).unwrap();
        assert_relative_eq!(ct, 0.006_007_338_453_873_8, max_relative = 1e-10);
        assert_relative_eq!(lambda, 0.054_805_740_820_984_26, max_relative = 1e-12);
        let (ct, _) = thrust_coefficient(&geom(0.05), &c, 0.24435, InflowVariant::AsPrinted).unwrap();
        assert_relative_eq!(ct, 0.003_389_282_938_257_29, max_relative = 1e-10);
        assert_eq!(thrust_coefficient(&geom(0.05), &c, 0.0, MC).unwrap().0, 0.0);
    }

    #[test]
    fn thrust_coefficient_outside_limits() {
        let c = AeroConstants::default();
        assert!(matches!(thrust_coefficient(&geom(0.05), &c, 0.32, MC), Err(Error::PitchOutOfLimits { .. })));
    }

    #[test]
    fn power_coefficient_examples() {
        let c = AeroConstants::default();
        let p = power_coefficient(&geom(0.039), &c, 0.24435, MC).unwrap();
        assert_relative_eq!(p.induced, 5.267_786_149_231_036e-4, max_relative = 1e-10);
        assert_relative_eq!(p.profile, 1.134_736_905_745_073e-4, max_relative = 1e-10);
        assert_relative_eq!(p.total, 6.402_523_054_976_11e-4, max_relative = 1e-10);
        assert_eq!(p.total, p.induced + p.profile);

        let p0 = power_coefficient(&geom(0.039), &c, 0.0, MC).unwrap();
        assert_eq!(p0.induced, 0.0);
        assert_relative_eq!(p0.profile, 0.039 / 8.0 * 0.013, max_relative = 1e-15);
        assert_relative_eq!(p0.profile, 6.34e-5, max_relative = 1e-3);

        let p95 = power_coefficient(&geom(0.039), &c, 0.16581, MC).unwrap();
        assert_relative_eq!(p95.total, 3.385_320_433_211_839e-4, max_relative = 1e-10);
    }

    #[test]
    fn solve_rotor_examples() {
        let c = AeroConstants::default();
        let s = solve_rotor(&geom(0.039), &c, RotorOperatingPoint::new(OMEGA_2500, 0.24435).unwrap(), MC).unwrap();
        assert_relative_eq!(s.thrust_n, 39.074_299_358_463_71, max_relative = 1e-10);
        assert!((s.thrust_n - 39.0).abs() <= 3.9);

        let s0 = solve_rotor(&geom(0.039), &c, RotorOperatingPoint::new(100.0, 0.0).unwrap(), MC).unwrap();
        assert_eq!(s0.thrust_n, 0.0);
        assert!(s0.power_w > 0.0);

        let s95 = solve_rotor(&geom(0.039), &c, RotorOperatingPoint::new(OMEGA_2500, 0.16581).unwrap(), MC).unwrap();
        assert_relative_eq!(s95.thrust_n, 24.326_575_674_927_79, max_relative = 1e-10);
        assert_relative_eq!(s95.power_w, 230.588_422_983_372_27, max_relative = 1e-10);
        assert_eq!(s95.torque_nm, s95.power_w / OMEGA_2500);
    }

    #[test]
    fn solve_rotor_rejects_bad_speed() {
        let c = AeroConstants::default();
        let op = RotorOperatingPoint { omega: 0.0, theta: 0.1 };
        assert!(solve_rotor(&geom(0.039), &c, op, MC).is_err());
        assert!(RotorOperatingPoint::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn negative_pitch_is_odd_in_thrust() {
        let c = AeroConstants::default();
        let g = geom(0.039);
        let up = solve_rotor(&g, &c, RotorOperatingPoint { omega: OMEGA_2500, theta: 0.15 }, MC).unwrap();
        let down = solve_rotor(&g, &c, RotorOperatingPoint { omega: OMEGA_2500, theta: -0.15 }, MC).unwrap();
        assert_eq!(down.thrust_n, -up.thrust_n);
        assert_eq!(down.inflow, -up.inflow);
        assert_eq!(down.cp_induced, up.cp_induced);
        assert!(down.cp_profile > 0.0);
    }

    #[test]
    fn pitch_for_thrust_examples() {
        let c = AeroConstants::default();
        let g = geom14(0.039);
        let target = solve_rotor(&g, &c, RotorOperatingPoint { omega: OMEGA_2500, theta: 0.1 }, MC).unwrap().thrust_n;
        let theta = pitch_for_thrust(&g, &c, OMEGA_2500, target, MC).unwrap();
        assert!((theta - 0.1).abs() <= 1e-6);

        let hover = pitch_for_thrust(&g, &c, OMEGA_2500, 24.53, MC).unwrap();
        // closed-form bisection oracle: 9.5641 deg
        assert!((hover.to_degrees() - 9.564_084_649_641_36).abs() < 1e-5);
        assert!((hover.to_degrees() - 9.5).abs() <= 0.1);

        let max =
            solve_rotor(&g, &c, RotorOperatingPoint { omega: OMEGA_2500, theta: g.pitch_max() }, MC).unwrap().thrust_n;
        assert!(matches!(pitch_for_thrust(&g, &c, OMEGA_2500, 2.0 * max, MC), Err(Error::OutOfEnvelope { .. })));
        let neg = pitch_for_thrust(&g, &c, OMEGA_2500, -target, MC).unwrap();
        assert!((neg + 0.1).abs() <= 1e-6);
    }

    #[test]
    fn sweep_examples() {
        let c = AeroConstants::default();
        let g = geom14(0.038_908_014_585_792_96);
        let rows = sweep_curves(&g, &c, OMEGA_2500, g.pitch_min(), g.pitch_max(), 1f64.to_radians(), MC).unwrap();
        assert_eq!(rows.len(), 29);
        for w in rows.windows(2) {
            assert!(w[1].theta > w[0].theta);
            if w[0].theta >= -1e-12 {
                assert!(w[1].thrust_n > w[0].thrust_n);
            }
        }
        for row in &rows {
            let s = solve_rotor(&g, &c, RotorOperatingPoint { omega: OMEGA_2500, theta: row.theta }, MC).unwrap();
            assert_eq!(CurveRow::from(s), *row);
        }
        let last = rows.last().unwrap();
        assert!((4.0 * last.power_w - 1300.0).abs() <= 0.4 * 1300.0);
        assert!((4.0 * last.torque_nm - 5.2).abs() <= 0.4 * 5.2);

        let single = sweep_curves(&g, &c, OMEGA_2500, 0.0, 0.0, 0.01, MC).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].thrust_n, 0.0);

        assert!(matches!(sweep_curves(&g, &c, OMEGA_2500, 0.1, 0.0, 0.01, MC), Err(Error::EmptyRange { .. })));
        assert!(matches!(sweep_curves(&g, &c, OMEGA_2500, 0.0, 0.25, 0.01, MC), Err(Error::PitchOutOfLimits { .. })));
        assert!(sweep_curves(&g, &c, OMEGA_2500, 0.0, 0.1, 0.0, MC).is_err());
    }

    #[test]
    fn ideal_power_examples() {
        let p = ideal_hover_power(98.1, 4, 0.50265, 1.18).unwrap();
        assert_relative_eq!(p, 446.051_157_271_014_9, max_relative = 1e-12);
        let a = 0.37;
        assert_eq!(ideal_hover_power(50.0, 1, a, 1.2).unwrap(), ideal_hover_power(50.0, 4, a / 4.0, 1.2).unwrap());
        assert_eq!(
            ideal_hover_power(50.0, 1, 4.0 * a, 1.2).unwrap() * 2.0,
            ideal_hover_power(50.0, 1, a, 1.2).unwrap()
        );
        assert!(ideal_hover_power(0.0, 4, a, 1.2).is_err());
        assert!(ideal_hover_power(10.0, 0, a, 1.2).is_err());
        assert!(ideal_hover_power(10.0, 4, a, -1.0).is_err());
    }

    #[test]
    fn calibrate_examples() {
        let c = AeroConstants::default();
        let g = geom(0.1);
        let sigma = calibrate_solidity(&g, &c, OMEGA_2500, 14f64.to_radians(), 39.0, MC).unwrap();
        assert!((sigma - 0.038_908_014_585_792_96).abs() < 1e-8);
        assert!((sigma - 0.039).abs() < 5e-4);

        let at05 =
            solve_rotor(&geom(0.05), &c, RotorOperatingPoint { omega: OMEGA_2500, theta: 0.2 }, MC).unwrap().thrust_n;
        let back = calibrate_solidity(&g, &c, OMEGA_2500, 0.2, at05, MC).unwrap();
        assert!((back - 0.05).abs() <= 1e-6);

        assert!(matches!(
            calibrate_solidity(&g, &c, OMEGA_2500, 14f64.to_radians(), 3900.0, MC),
            Err(Error::NoSolution { .. })
        ));
    }

    #[test]
    fn geometry_validation() {
        assert!(RotorGeometry::new(0.4, 1, 0.05, -0.2, 0.2).is_err());
        assert!(RotorGeometry::new(0.4, 2, 0.3, -0.2, 0.2).is_err());
        assert!(RotorGeometry::new(0.4, 2, 0.05, 0.1, 0.2).is_err());
        assert!(RotorGeometry::new(0.4, 2, 0.05, -0.4, 0.2).is_err());
        assert!(RotorGeometry::new(0.0, 2, 0.05, -0.2, 0.2).is_err());
        let g = RotorGeometry::new(0.4, 2, 0.05, -0.2, 0.2).unwrap();
        assert_eq!(g.disk_area(), PI * 0.4 * 0.4);
    }

    #[test]
    fn constants_validation() {
        assert!(AeroConstants::default().validate().is_ok());
        assert!(AeroConstants::new(5.7, 0.9, 0.013, -0.0216, 0.4, 1.18).is_err());
        // polar with negative minimum inside the checked interval
        assert!(AeroConstants::new(5.7, 1.6, 0.001, -0.1, 0.4, 1.18).is_err());
        assert!(AeroConstants::new(5.7, 1.6, 0.013, -0.0216, 0.4, 0.0).is_err());
    }
}
