use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use vpquad_core::sim::{find_first_step, write_log_csv};
use vpquad_core::sizing::DEFAULT_RESONANCE_BAND;
use vpquad_core::units::{deg_to_rad, format_significant, rad_to_deg, rpm_to_rad_s};
use vpquad_core::{
    build_sizing_report, endurance, excitation_frequency, resonance_check, run_scenario, step_metrics, sweep_curves,
    synthesize_pd, Axis, AxisSpec, FuelSpec, InflowVariant, ModeVerdict, SizingConfig, SizingInputs,
};

use crate::config::{load_catalog, load_modes, load_scenario, VehicleConfig};
use crate::error::CliError;

const CSV_DIGITS: usize = 9;

fn positive(name: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::Validation(format!("{name} must be positive, got {value}")))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))
}

fn mode_line(v: &ModeVerdict) -> String {
    format!(
        "mode={} frequency_hz={:.2} proximity={} spool_up_crossing={} verdict={}",
        v.mode_name,
        v.frequency_hz,
        v.proximity,
        v.spool_up_crossing,
        v.verdict()
    )
}

pub struct CurvesArgs {
    pub vehicle: PathBuf,
    pub rpm: f64,
    pub theta_min_deg: f64,
    pub theta_max_deg: f64,
    pub step_deg: f64,
    pub variant: Option<InflowVariant>,
    pub out: PathBuf,
}

pub fn curves(args: &CurvesArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let omega = rpm_to_rad_s(positive("rpm", args.rpm)?);
    positive("step", args.step_deg)?;
    let vehicle = VehicleConfig::load(&args.vehicle)?;
    let variant = args.variant.unwrap_or(vehicle.variant);
    let rows = sweep_curves(
        &vehicle.geometry,
        &vehicle.aero,
        omega,
        deg_to_rad(args.theta_min_deg),
        deg_to_rad(args.theta_max_deg),
        deg_to_rad(args.step_deg),
        variant,
    )?;
    let mut out = create(&args.out)?;
    writeln!(out, "theta_deg,thrust_n,power_w,torque_nm,ct,cp,lambda")?;
    for row in &rows {
        let fields = [rad_to_deg(row.theta), row.thrust_n, row.power_w, row.torque_nm, row.ct, row.cp, row.inflow];
        let line: Vec<String> = fields.iter().map(|v| format_significant(*v, CSV_DIGITS)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    writeln!(stdout, "rows={}", rows.len())?;
    Ok(())
}

pub struct SizeArgs {
    pub vehicle: PathBuf,
    pub engines: PathBuf,
    pub modes: PathBuf,
    pub margin: f64,
    pub band: f64,
    pub csv: Option<PathBuf>,
}

pub fn size(args: &SizeArgs, stdout: &mut impl Write) -> Result<(), CliError> {
    let vehicle = VehicleConfig::load(&args.vehicle)?;
    let catalog = load_catalog(&args.engines)?;
    let modes = load_modes(&args.modes)?;
    let v = &vehicle.file.vehicle;
    let inputs = SizingInputs {
        config: SizingConfig {
            rotor_count: v.rotor_count,
            control_margin: args.margin,
            transmission_efficiency: v.eta_transmission,
        },
        fuel: vehicle.fuel(),
        catalog: &catalog,
        modes: &modes,
        vehicle_mass_kg: v.mass_kg,
        resonance_band: args.band,
    };
    let report = build_sizing_report(&vehicle.geometry, &vehicle.aero, vehicle.omega, vehicle.variant, &inputs)?;

    let mut pairs: Vec<(String, String)> = vec![
        ("solidity".into(), format!("{:.6}", vehicle.geometry.solidity())),
        ("max_total_lift_n".into(), format!("{:.2}", report.max_total_lift_n)),
        ("mtow_kg".into(), format!("{:.2}", report.mtow_kg)),
        ("design_mtow_kg".into(), format!("{:.2}", v.mtow_kg)),
        ("vehicle_mass_kg".into(), format!("{:.2}", report.vehicle_mass_kg)),
        ("hover_pitch_deg".into(), format!("{:.3}", rad_to_deg(report.hover_pitch_rad))),
        ("hover_power_w".into(), format!("{:.1}", report.hover_power_w)),
        ("required_power_w".into(), format!("{:.1}", report.required_power_w)),
        ("required_torque_nm".into(), format!("{:.3}", report.required_torque_nm)),
        ("engine".into(), report.selected_engine.as_ref().map_or("none".into(), |e| e.name.clone())),
        ("endurance_hours".into(), report.endurance_hours.map_or("none".into(), |h| format!("{h:.2}"))),
        ("excitation_hz".into(), format!("{:.2}", report.excitation_hz)),
    ];
    for m in &report.resonance_verdicts {
        pairs.push((format!("resonance.{}", m.mode_name), m.verdict().to_string()));
    }
    for (key, value) in &pairs {
        writeln!(stdout, "{key}={value}")?;
    }
    if let Some(path) = &args.csv {
        let mut out = create(path)?;
        writeln!(out, "key,value")?;
        for (key, value) in &pairs {
            writeln!(out, "{key},{value}")?;
        }
        out.flush()?;
    }
    if report.selected_engine.is_none() {
        return Err(CliError::Infeasible(format!(
            "no engine in the catalog delivers {:.1} W and {:.3} Nm",
            report.required_power_w, report.required_torque_nm
        )));
    }
    Ok(())
}

pub fn gains(inertia: f64, zeta: f64, omega_n: f64, stdout: &mut impl Write) -> Result<(), CliError> {
    let spec = AxisSpec::new(inertia, zeta, omega_n)?;
    let g = synthesize_pd(&spec)?;
    writeln!(stdout, "kp={:.3}", g.kp)?;
    writeln!(stdout, "kd={:.3}", g.kd)?;
    Ok(())
}

pub fn vibration(
    rpm: f64,
    blades: u32,
    modes: &Path,
    band: Option<f64>,
    stdout: &mut impl Write,
) -> Result<(), CliError> {
    let f = excitation_frequency(rpm, blades)?;
    let modes = load_modes(modes)?;
    let verdicts = resonance_check(f, &modes, band.unwrap_or(DEFAULT_RESONANCE_BAND))?;
    writeln!(stdout, "excitation_hz={f:.2}")?;
    for v in &verdicts {
        writeln!(stdout, "{}", mode_line(v))?;
    }
    let failing: Vec<&str> =
        verdicts.iter().filter(|v| v.verdict() == vpquad_core::Verdict::Fail).map(|v| v.mode_name.as_str()).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Infeasible(format!(
            "excitation at {f:.2} Hz falls within the resonance band of: {}",
            failing.join(", ")
        )))
    }
}

pub fn endurance_cmd(
    fuel_l: f64,
    density: f64,
    bsfc: f64,
    power_w: f64,
    eta: f64,
    stdout: &mut impl Write,
) -> Result<(), CliError> {
    let fuel = FuelSpec {
        tank_volume_l: positive("fuel volume", fuel_l)?,
        fuel_density_g_per_l: positive("fuel density", density)?,
    };
    let hours = endurance(&fuel, bsfc, power_w, eta)?;
    writeln!(stdout, "endurance_hours={hours:.2}")?;
    Ok(())
}

pub struct SimulateArgs {
    pub vehicle: PathBuf,
    pub scenario: PathBuf,
    pub out: PathBuf,
    pub metrics: Option<Axis>,
}

pub fn simulate(args: &SimulateArgs, stdout: &mut impl Write, stderr: &mut impl Write) -> Result<(), CliError> {
    let vehicle = VehicleConfig::load(&args.vehicle)?;
    let model = vehicle.model()?;
    if let Some(warning) = model.symmetry_warning() {
        writeln!(stderr, "warning: {warning}")?;
    }
    let scenario = load_scenario(&args.scenario, &vehicle.governor())?;
    let log = run_scenario(&model, &scenario)?;

    let mut out = create(&args.out)?;
    write_log_csv(&log, &mut out)?;
    out.flush()?;
    writeln!(stdout, "records={}", log.len())?;

    let channel = match args.metrics {
        Some(axis) => Some(axis),
        None => Axis::ALL.into_iter().find(|a| find_first_step(&log, *a).is_some()),
    };
    if let Some(axis) = channel {
        let (step_time, delta) = find_first_step(&log, axis)
            .ok_or_else(|| CliError::Validation(format!("scenario has no reference step in channel `{axis}`")))?;
        let m = step_metrics(&log, axis, step_time, delta)?;
        writeln!(stdout, "channel={axis}")?;
        writeln!(stdout, "step_time_s={step_time:.3}")?;
        writeln!(stdout, "step_deg={:.3}", rad_to_deg(delta))?;
        writeln!(stdout, "overshoot_pct={:.2}", 100.0 * m.overshoot)?;
        writeln!(stdout, "settling_time_s={:.3}", m.settling_time_2pct_s)?;
        writeln!(stdout, "steady_state_error_deg={:.4}", rad_to_deg(m.steady_state_error))?;
    }
    Ok(())
}
