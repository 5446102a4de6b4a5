#![allow(dead_code)]

use nalgebra::Vector3;
use vpquad_core::units::{deg_to_rad, rpm_to_rad_s};
use vpquad_core::{
    calibrate_solidity, AeroConstants, GovernorSpec, InflowVariant, RotorGeometry, VehicleModel, VehicleParams,
};

pub const MC: InflowVariant = InflowVariant::MomentumConsistent;

pub fn omega_2500() -> f64 {
    rpm_to_rad_s(2500.0)
}

/// 800 mm two-blade rotor, ±14°, solidity calibrated to 39 N at 14° and 2500 RPM.
pub fn calibrated_rotor() -> (RotorGeometry, AeroConstants) {
    let aero = AeroConstants::default();
    let draft = RotorGeometry::new(0.4, 2, 0.05, -deg_to_rad(14.0), deg_to_rad(14.0)).unwrap();
    let sigma = calibrate_solidity(&draft, &aero, omega_2500(), deg_to_rad(14.0), 39.0, MC).unwrap();
    (draft.with_solidity(sigma).unwrap(), aero)
}

pub fn vehicle(mass_kg: f64) -> VehicleModel {
    let (geometry, aero) = calibrated_rotor();
    VehicleModel::new(&VehicleParams {
        mass_kg,
        inertia: Vector3::new(0.43, 0.43, 0.67),
        geometry,
        aero,
        variant: MC,
        arm_length: 0.6,
        governor: GovernorSpec { omega_ref: omega_2500(), time_constant_s: 0.5 },
        zeta: 0.8,
        omega_n: 7.0,
    })
    .unwrap()
}
