use std::fs;
use std::path::Path;
use std::thread;

use geogate_core::dynamics::designed_unitary;
use geogate_core::{
    closure_check, gate_distance_global_phase, geometric_phase, lindblad_evolve, optimize_conventional_triangle,
    propagate_unitary, schedule_square_wave, state_fidelity, total_phase, ClosedPath, DensityMatrix, DeviceLimits,
    Error, GateSpec, NamedPath, PulseSchedule, QubitState, DEFAULT_QUAD_NODES, DEFAULT_SAMPLES_PER_SEGMENT,
};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::args::{BenchArgs, Command, OptimizeArgs, PathArgs, SimulateArgs, SynthesizeArgs};
use crate::error::{CliError, CliResult};
use crate::output::{emit, write_csv, write_json};

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Synthesize(a) => synthesize(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Optimize(a) => optimize(&a),
        Command::Bench(a) => bench(&a),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

/// Path name and loop selected by `--path` or `--path-file`. An empty or
/// blank path file is an empty loop, which the scheduler rejects as not closed.
fn load_path(args: &PathArgs) -> CliResult<(String, ClosedPath)> {
    let (name, mut path) = match (&args.path, &args.path_file) {
        (Some(named), _) => (named.name().to_string(), named.build(args.phi0)),
        (None, Some(file)) => {
            let text = fs::read_to_string(file).map_err(|source| CliError::Io { path: file.clone(), source })?;
            let path = if text.trim().is_empty() {
                ClosedPath { eta: 0.0, segments: Vec::new() }
            } else {
                serde_json::from_str(&text).map_err(|source| CliError::Parse { path: file.clone(), source })?
            };
            let name = file.file_stem().map_or("custom".into(), |s| s.to_string_lossy().into_owned());
            (name, path)
        }
        (None, None) => return Err(CliError::Config("one of --path or --path-file is required".into())),
    };
    if let Some(eta) = args.eta {
        path.eta = eta;
    }
    if !path.segments.is_empty() {
        path.validate()?;
    }
    Ok((name, path))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSummary {
    pub path: String,
    pub eta: f64,
    pub gamma_g: f64,
    pub gamma_total: f64,
    pub total_time_tau0: f64,
    pub signed_areas: Vec<f64>,
    pub segment_boundaries_tau0: Vec<f64>,
}

/// Pulse CSV row; times in `τ₀`, frequencies in `Ω₀`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleRow {
    pub t_tau0: f64,
    pub omega_r: f64,
    pub phi_pulse: f64,
    pub delta: f64,
    pub signed_direction: i8,
    pub segment: usize,
}

/// JSON pulse file. The schedule's own sample list is left empty; the
/// samples are in `samples`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PulseFile {
    pub summary: PulseSummary,
    pub samples: Vec<SampleRow>,
    pub schedule: PulseSchedule,
}

fn pulse_summary(name: &str, schedule: &PulseSchedule) -> CliResult<PulseSummary> {
    let gamma_g = geometric_phase(&schedule.path, DEFAULT_QUAD_NODES)?;
    Ok(PulseSummary {
        path: name.to_string(),
        eta: schedule.eta(),
        gamma_g,
        gamma_total: total_phase(gamma_g, schedule.eta())?,
        total_time_tau0: schedule.total_time_tau0(),
        signed_areas: schedule.signed_areas.clone(),
        segment_boundaries_tau0: schedule.segment_boundaries.iter().map(|t| t / schedule.tau0).collect(),
    })
}

fn synthesize(args: &SynthesizeArgs) -> CliResult<()> {
    let limits = args.limits.limits()?;
    let (name, path) = load_path(&args.path)?;
    let mut schedule = schedule_square_wave(&path, &limits, args.samples_per_segment)?;
    let summary = pulse_summary(&name, &schedule)?;
    let samples: Vec<SampleRow> = schedule
        .samples
        .iter()
        .map(|s| SampleRow {
            t_tau0: s.t / schedule.tau0,
            omega_r: s.control.omega_r,
            phi_pulse: s.control.phi_pulse,
            delta: s.control.delta,
            signed_direction: s.control.signed_direction,
            segment: s.segment,
        })
        .collect();
    schedule.samples.clear();
    emit(&args.output, &summary, &samples, || PulseFile {
        summary: summary.clone(),
        samples: samples.clone(),
        schedule,
    })
}

fn checked_schedule(schedule: PulseSchedule) -> CliResult<PulseSchedule> {
    if !closure_check(&schedule.path) {
        return Err(Error::PathNotClosed("pulse file holds no closed loop".into()).into());
    }
    let n = schedule.path.segments.len();
    if schedule.segment_boundaries.len() != n + 1 || !(schedule.tau0.is_finite() && schedule.tau0 > 0.0) {
        return Err(CliError::Config("pulse file schedule is inconsistent".into()));
    }
    Ok(schedule)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub path: String,
    pub eta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub dt_tau0: f64,
    pub total_time_tau0: f64,
    pub final_fidelity: f64,
    pub final_p0: f64,
    pub final_p1: f64,
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

/// Trajectory CSV row. `fidelity` is measured against the designed
/// closed-system evolution of `|+⟩` at the same time.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t_tau0: f64,
    pub p0: f64,
    pub p1: f64,
    pub fidelity: f64,
    pub trace_error: f64,
}

#[derive(Serialize)]
struct TrajectoryDocument<'a> {
    summary: &'a SimulationSummary,
    trajectory: &'a [TrajectoryRow],
}

fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let limits = args.limits.limits()?;
    let (name, schedule) = match &args.pulse {
        Some(file) => {
            let pulse: PulseFile = read_json(file)?;
            (pulse.summary.path, checked_schedule(pulse.schedule)?)
        }
        None => {
            let (name, path) = load_path(&args.path)?;
            (name, schedule_square_wave(&path, &limits, DEFAULT_SAMPLES_PER_SEGMENT)?)
        }
    };
    GateSpec::for_path(&schedule.path, DEFAULT_QUAD_NODES)?;
    let dt = schedule.tau0 / args.steps.dt_per_tau0 as f64;
    let plus = QubitState::plus();
    let traj = lindblad_evolve(&schedule, &DensityMatrix::from_pure(&plus), &limits, dt)?;

    let fidelity_at = |t: f64, rho: &DensityMatrix| -> CliResult<f64> {
        let ideal = plus.apply(&designed_unitary(&schedule, t.min(schedule.total_time))?);
        Ok(state_fidelity(rho, &ideal))
    };
    let last = traj.points.len() - 1;
    let mut rows = Vec::with_capacity(last / args.record_every + 2);
    let (mut trace_err, mut herm_err, mut min_eig): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for (k, p) in traj.points.iter().enumerate() {
        let d = p.rho.diagnostics();
        trace_err = trace_err.max(d.trace_error);
        herm_err = herm_err.max(d.hermiticity_error);
        min_eig = min_eig.min(d.min_eigenvalue);
        if k % args.record_every == 0 || k == last {
            rows.push(TrajectoryRow {
                t_tau0: p.t / schedule.tau0,
                p0: p.rho.population_zero(),
                p1: p.rho.population_one(),
                fidelity: fidelity_at(p.t, &p.rho)?,
                trace_error: d.trace_error,
            });
        }
    }
    let end = &traj.points[last];
    let summary = SimulationSummary {
        path: name,
        eta: schedule.eta(),
        gamma1: limits.gamma1,
        gamma2: limits.gamma2,
        dt_tau0: dt / schedule.tau0,
        total_time_tau0: schedule.total_time_tau0(),
        final_fidelity: fidelity_at(end.t, &end.rho)?,
        final_p0: end.rho.population_zero(),
        final_p1: end.rho.population_one(),
        max_trace_error: trace_err,
        max_hermiticity_error: herm_err,
        min_eigenvalue: min_eig,
    };
    emit(&args.output, &summary, &rows, || TrajectoryDocument { summary: &summary, trajectory: &rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeSummary {
    pub gamma_target: f64,
    pub theta_c: f64,
    pub theta_c_over_pi: f64,
    pub total_time_tau0: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanRow {
    pub theta_c: f64,
    pub total_time_tau0: f64,
}

#[derive(Serialize)]
struct OptimizeDocument<'a> {
    summary: &'a OptimizeSummary,
    scan: &'a [ScanRow],
}

fn optimize(args: &OptimizeArgs) -> CliResult<()> {
    let limits = args.limits.limits()?;
    let opt = optimize_conventional_triangle(&limits, args.gamma_target)?;
    let summary = OptimizeSummary {
        gamma_target: args.gamma_target,
        theta_c: opt.theta_c,
        theta_c_over_pi: opt.theta_c / std::f64::consts::PI,
        total_time_tau0: opt.total_time_tau0(),
    };
    let scan: Vec<ScanRow> =
        opt.scan.iter().map(|p| ScanRow { theta_c: p.theta_c, total_time_tau0: p.total_time / opt.tau0 }).collect();
    emit(&args.output, &summary, &scan, || OptimizeDocument { summary: &summary, scan: &scan })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub path: String,
    pub time_tau0: f64,
    pub gamma_g: f64,
    pub gamma_total: f64,
    pub gate_distance: f64,
    pub fidelity: f64,
}

fn bench_path(named: NamedPath, phi0: f64, limits: &DeviceLimits, steps_per_tau0: u64) -> CliResult<BenchRow> {
    let schedule = schedule_square_wave(&named.build(phi0), limits, DEFAULT_SAMPLES_PER_SEGMENT)?;
    let spec = GateSpec::for_path(&schedule.path, DEFAULT_QUAD_NODES)?;
    let dt = schedule.tau0 / steps_per_tau0 as f64;
    let u = propagate_unitary(&schedule, dt)?.final_unitary;
    let plus = QubitState::plus();
    let traj = lindblad_evolve(&schedule, &DensityMatrix::from_pure(&plus), limits, dt)?;
    Ok(BenchRow {
        path: named.name().to_string(),
        time_tau0: schedule.total_time_tau0(),
        gamma_g: spec.gamma_g,
        gamma_total: spec.gamma_total,
        gate_distance: gate_distance_global_phase(&u, &spec.target_unitary())?,
        fidelity: state_fidelity(traj.final_state(), &plus.apply(&spec.target_unitary())),
    })
}

fn bench(args: &BenchArgs) -> CliResult<()> {
    let limits = args.limits.limits()?;
    let steps = args.steps.dt_per_tau0;
    let rows: Vec<BenchRow> = thread::scope(|s| {
        let workers: Vec<_> =
            NamedPath::ALL.into_iter().map(|p| s.spawn(move || bench_path(p, args.phi0, &limits, steps))).collect();
        workers.into_iter().map(|w| w.join().expect("bench worker panicked")).collect::<CliResult<_>>()
    })?;
    let path = args.output.output.as_deref();
    match args.output.format {
        Some(crate::args::Format::Json) => write_json(path, &rows),
        Some(crate::args::Format::Csv) => write_csv(path, &rows),
        None if path.is_some() => write_csv(path, &rows),
        None => {
            println!(
                "{:<24} {:>10} {:>12} {:>12} {:>14} {:>10}",
                "path", "time/tau0", "gamma_g", "gamma_total", "gate_distance", "fidelity"
            );
            for r in &rows {
                println!(
                    "{:<24} {:>10.4} {:>12.7} {:>12.7} {:>14.3e} {:>10.6}",
                    r.path, r.time_tau0, r.gamma_g, r.gamma_total, r.gate_distance, r.fidelity
                );
            }
            Ok(())
        }
    }
}
