use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use vpquad_core::nalgebra::Vector3;
use vpquad_core::units::{deg_to_rad, rpm_to_rad_s};
use vpquad_core::{
    calibrate_solidity, run_scenario, step_rk4, AeroConstants, GovernorSpec, InflowVariant, RotorGeometry, Scenario,
    Segment, VehicleModel, VehicleParams,
};

fn model() -> VehicleModel {
    let aero = AeroConstants::default();
    let omega = rpm_to_rad_s(2500.0);
    let limit = deg_to_rad(14.0);
    let draft = RotorGeometry::new(0.4, 2, 0.05, -limit, limit).unwrap();
    let sigma = calibrate_solidity(&draft, &aero, omega, limit, 39.0, InflowVariant::MomentumConsistent).unwrap();
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

fn bench_sim(c: &mut Criterion) {
    let model = model();
    let state = model.hover_state();
    let pitches = [model.mixer.config.hover_pitch; 4];
    c.bench_function("step_rk4", |b| b.iter(|| step_rk4(&model, black_box(&state), &pitches, 1e-3).unwrap()));

    let scenario = Scenario {
        duration_s: 4.0,
        dt_s: 1e-3,
        initial: model.hover_state(),
        segments: vec![Segment::level(0.0), Segment { roll_ref: deg_to_rad(5.0), ..Segment::level(1.0) }],
        disturbances: vec![],
    };
    let mut group = c.benchmark_group("scenario");
    group.sample_size(20);
    group.bench_function("roll_step_4s", |b| b.iter(|| run_scenario(&model, black_box(&scenario)).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_sim);
criterion_main!(benches);
