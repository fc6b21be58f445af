//! Scenario runners. Each returns the files, metadata results and a short
//! human summary; nothing touches the disk here.

use std::time::Instant;

use kgwell::modes::{MassiveMode, MasslessMode, ModeSpec};
use kgwell::products::{
    classical_bounce_ratio, energy_expectation, energy_sq_expectation, kg_norm, one_plus_z, receding_energy_factor,
};
use kgwell::solver::{
    cross_validate, evolve_moving_wall, evolve_strip, measure_redshift, EvolutionRecord, MovingWallSolverConfig,
    StripSolverConfig,
};
use kgwell::wavepacket::{amplitude, mean_energy, normalized_amplitude, sample_flat, sample_hyp};
use kgwell::{flat_to_hyp, ComplexField, ExactSolution, FlatPoint, Frame};
use serde_json::{json, Value};

use crate::config::{Init, RunConfig, Scenario};
use crate::error::CliError;
use crate::output::{density_svg, diagnostics_csv, field_csv, Bundle};

pub struct Report {
    pub bundle: Bundle,
    pub results: Value,
    pub summary: Vec<String>,
    pub timings: Vec<(&'static str, f64)>,
}

struct Timer {
    start: Instant,
    phases: Vec<(&'static str, f64)>,
}

impl Timer {
    fn new() -> Self {
        Timer {
            start: Instant::now(),
            phases: Vec::new(),
        }
    }

    fn lap(&mut self, name: &'static str) {
        let now = Instant::now();
        self.phases.push((name, (now - self.start).as_secs_f64()));
        self.start = now;
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.scenario {
        Scenario::Modes => modes(cfg),
        Scenario::Packet => packet(cfg),
        Scenario::EvolveFlat => evolve_flat(cfg),
        Scenario::EvolveStrip => evolve_strip_run(cfg),
        Scenario::Compare => compare(cfg),
        Scenario::Redshift => redshift(cfg),
    }
}

fn exact_mode(cfg: &RunConfig, n: u32) -> Result<Box<dyn ExactSolution>, CliError> {
    let spec = ModeSpec::new(n, cfg.mass, cfg.wall)?;
    Ok(if cfg.mass == 0.0 {
        Box::new(MasslessMode::new(spec)?)
    } else {
        Box::new(MassiveMode::new(spec)?)
    })
}

/// Largest `|ψ - ψ_exact|` over every snapshot node.
fn mode_error(rec: &EvolutionRecord, mode: &dyn ExactSolution) -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for s in rec.snapshots() {
        for (i, c) in s.grid().coords().enumerate() {
            let exact = match rec.frame() {
                Frame::Flat => mode.eval_flat(FlatPoint::new(s.time(), c))?.psi,
                Frame::Hyperbolic => mode.eval_log(s.time().ln(), c)?.psi,
            };
            worst = worst.max((s.psi()[i] - exact).norm());
        }
    }
    Ok(worst)
}

fn add_snapshots(bundle: &mut Bundle, rec: &EvolutionRecord, prefix: &str, svg: bool) {
    let (coord, time) = match rec.frame() {
        Frame::Flat => ("x", "t"),
        Frame::Hyperbolic => ("u", "rho"),
    };
    for (i, s) in rec.snapshots().iter().enumerate() {
        bundle.add(format!("{prefix}snapshot_{i:03}.csv"), field_csv(s, coord));
        if svg {
            let title = format!("|psi|^2 at {time} = {:.6}", s.time());
            bundle.add(format!("{prefix}snapshot_{i:03}.svg"), density_svg(s, &title, coord));
        }
    }
    bundle.add(format!("{prefix}diagnostics.csv"), diagnostics_csv(rec.diagnostics(), time, coord));
}

fn record_json(rec: &EvolutionRecord) -> Value {
    let d = rec.diagnostics();
    let first = d.first().expect("records hold diagnostics");
    let last = d.last().expect("records hold diagnostics");
    json!({
        "steps": rec.steps(),
        "snapshot_times": rec.snapshots().iter().map(|s| s.time()).collect::<Vec<_>>(),
        "norm_initial": first.norm,
        "norm_final": last.norm,
        "norm_drift": rec.norm_drift(),
        "energy_per_norm_initial": first.energy_per_norm(),
        "energy_per_norm_final": last.energy_per_norm(),
    })
}

/// Sign changes of the real standing factor `sin(k u)` at interior samples.
fn interior_nodes(cfg: &RunConfig, field: &ComplexField, k: f64) -> Result<usize, CliError> {
    let n = field.len();
    let mut prev = 0.0f64;
    let mut count = 0;
    for x in field.grid().coords().take(n - 1).skip(1) {
        let u = flat_to_hyp(&cfg.wall, FlatPoint::new(field.time(), x))?.u();
        let s = (k * u).sin();
        if s != 0.0 {
            if prev != 0.0 && s.signum() != prev.signum() {
                count += 1;
            }
            prev = s;
        }
    }
    Ok(count)
}

fn modes(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut timer = Timer::new();
    let Init::Mode { n } = cfg.init else { unreachable!("modes resolve to a mode") };
    let mode = exact_mode(cfg, n)?;
    let spec = ModeSpec::new(n, cfg.mass, cfg.wall)?;
    let field = mode.sample_flat(cfg.t, cfg.points)?;
    let nodes = interior_nodes(cfg, &field, spec.wavenumber())?;
    timer.lap("sample");

    let mut bundle = Bundle::default();
    bundle.add("mode.csv", field_csv(&field, "x"));
    if cfg.svg {
        bundle.add("mode.svg", density_svg(&field, &format!("|Psi_{n}|^2 at t = {:.6}", cfg.t), "x"));
    }
    let results = json!({
        "wavenumber": spec.wavenumber(),
        "lambda": cfg.wall.lambda(),
        "length": cfg.wall.length_at(cfg.t),
        "interior_nodes": nodes,
        "boundary_max": field.boundary_max(),
        "kg_norm": kg_norm(&field),
    });
    let summary = vec![
        format!("mode n = {n}, k = {:.6}, L(t) = {:.6}", spec.wavenumber(), cfg.wall.length_at(cfg.t)),
        format!("interior nodes: {nodes}, max |psi| on walls: {:.3e}", field.boundary_max()),
    ];
    Ok(Report {
        bundle,
        results,
        summary,
        timings: timer.phases,
    })
}

fn packet(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut timer = Timer::new();
    let spec = cfg.packet().expect("packet scenario resolves to a packet");
    let field = sample_flat(&spec, &cfg.wall, cfg.t, cfg.points)?;
    let norm = kg_norm(&field);
    let energy = energy_expectation(&field)?;
    let energy_sq = energy_sq_expectation(&field)?;
    timer.lap("sample");

    let mut bundle = Bundle::default();
    bundle.add("packet.csv", field_csv(&field, "x"));
    if cfg.svg {
        bundle.add("packet.svg", density_svg(&field, &format!("packet |psi|^2 at t = {:.6}", cfg.t), "x"));
    }
    let results = json!({
        "amplitude": amplitude(&spec),
        "normalized_amplitude": normalized_amplitude(&spec),
        "kg_norm": norm,
        "energy": energy,
        "energy_per_norm": energy / norm,
        "energy_sq_per_norm": energy_sq / norm,
        "momentum_space_energy": mean_energy(&spec),
        "boundary_max": field.boundary_max(),
    });
    let summary = vec![
        format!("KG norm {norm:.8}, <H>/norm {:.6} (momentum space {:.6})", energy / norm, mean_energy(&spec)),
    ];
    Ok(Report {
        bundle,
        results,
        summary,
        timings: timer.phases,
    })
}

fn flat_config(cfg: &RunConfig, snapshots: Vec<f64>) -> MovingWallSolverConfig {
    let mut c = MovingWallSolverConfig::new(cfg.wall, cfg.points, (cfg.wall.t0(), cfg.t_end));
    c.cfl = cfg.cfl;
    c.mass = cfg.mass;
    c.snapshot_times = snapshots;
    c.diag_every = cfg.diag_every;
    c.boundary_tol = cfg.boundary_tol;
    c
}

fn run_flat(cfg: &RunConfig, snapshots: Vec<f64>) -> Result<EvolutionRecord, CliError> {
    let t0 = cfg.wall.t0();
    let init = match cfg.init {
        Init::Packet { .. } => sample_flat(&cfg.packet().expect("packet"), &cfg.wall, t0, cfg.points)?,
        Init::Mode { n } => exact_mode(cfg, n)?.sample_flat(t0, cfg.points)?,
    };
    Ok(evolve_moving_wall(&flat_config(cfg, snapshots), &init)?)
}

fn run_strip(cfg: &RunConfig) -> Result<EvolutionRecord, CliError> {
    let init = match cfg.init {
        Init::Packet { .. } => sample_hyp(&cfg.packet().expect("packet"), &cfg.wall, cfg.rho_start, cfg.points)?,
        Init::Mode { n } => exact_mode(cfg, n)?.sample_hyp(cfg.rho_start, cfg.points)?,
    };
    let mut c = StripSolverConfig::new(cfg.wall.nu(), cfg.points, (cfg.rho_start.ln(), cfg.rho_end.ln()));
    c.cfl = cfg.cfl;
    c.mass = cfg.mass;
    c.snapshot_taus = cfg.strip_snapshots.iter().map(|r| r.ln()).collect();
    c.diag_every = cfg.diag_every;
    c.boundary_tol = cfg.boundary_tol;
    Ok(evolve_strip(&c, &init)?)
}

fn evolution_report(cfg: &RunConfig, rec: EvolutionRecord, mut timer: Timer) -> Result<Report, CliError> {
    let mut results = record_json(&rec);
    if let Init::Mode { n } = cfg.init {
        let err = mode_error(&rec, exact_mode(cfg, n)?.as_ref())?;
        results["max_error_vs_exact"] = json!(err);
    }
    let mut bundle = Bundle::default();
    add_snapshots(&mut bundle, &rec, "", cfg.svg);
    timer.lap("output");
    let summary = vec![format!(
        "{} steps, {} snapshots, KG norm drift {:.3e}",
        rec.steps(),
        rec.snapshots().len(),
        rec.norm_drift()
    )];
    Ok(Report {
        bundle,
        results,
        summary,
        timings: timer.phases,
    })
}

fn evolve_flat(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut timer = Timer::new();
    let rec = run_flat(cfg, cfg.flat_snapshots.clone())?;
    timer.lap("evolve");
    evolution_report(cfg, rec, timer)
}

fn evolve_strip_run(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut timer = Timer::new();
    let rec = run_strip(cfg)?;
    timer.lap("evolve");
    evolution_report(cfg, rec, timer)
}

fn compare(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut timer = Timer::new();
    let t0 = cfg.wall.t0();
    let count = ((cfg.t_end - t0) / cfg.ref_dt).ceil() as usize;
    let times: Vec<f64> = (0..=count)
        .map(|i| if i == count { cfg.t_end } else { t0 + i as f64 * cfg.ref_dt })
        .collect();
    let flat = run_flat(cfg, times)?;
    timer.lap("evolve_flat");
    let strip = run_strip(cfg)?;
    timer.lap("evolve_strip");
    let rep = cross_validate(&strip, &flat, &cfg.wall)?;
    timer.lap("compare");

    let mut bundle = Bundle::default();
    add_snapshots(&mut bundle, &strip, "strip_", cfg.svg);
    bundle.add("flat_diagnostics.csv", diagnostics_csv(flat.diagnostics(), "t", "x"));
    let results = json!({
        "points_compared": rep.points,
        "max_abs": rep.max_abs,
        "mean_abs": rep.mean_abs,
        "peak": rep.peak,
        "max_rel": rep.max_rel(),
        "mean_rel": rep.mean_rel(),
        "flat": record_json(&flat),
        "strip": record_json(&strip),
    });
    let summary = vec![format!(
        "|psi|^2 discrepancy over {} points: mean/peak {:.3e}, max/peak {:.3e}",
        rep.points,
        rep.mean_rel(),
        rep.max_rel()
    )];
    Ok(Report {
        bundle,
        results,
        summary,
        timings: timer.phases,
    })
}

fn redshift(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut timer = Timer::new();
    let rec = run_flat(cfg, cfg.flat_snapshots.clone())?;
    timer.lap("evolve");
    let m = measure_redshift(&rec)?;
    let nu = cfg.wall.nu();
    let direction = if m.is_redshift() { "decrease" } else { "increase" };
    let results = json!({
        "energy_ratio_after_over_before": m.ratio,
        "direction": direction,
        "receding_mirror_factor": receding_energy_factor(nu)?,
        "one_plus_z_as_written": one_plus_z(nu)?,
        "classical_bounce_ratio": classical_bounce_ratio(nu)?,
        "relative_error": m.relative_error(),
        "convention": "ratio is E_after/E_before of <H>/norm on the free plateaus; a receding mirror lowers the energy by (1-nu)/(1+nu), the inverse of (1+nu)/(1-nu)",
        "events": m.events.iter().map(|e| json!({
            "start": e.start,
            "end": e.end,
            "energy_before": e.energy_before,
            "energy_after": e.energy_after,
            "ratio": e.ratio(),
        })).collect::<Vec<_>>(),
        "record": record_json(&rec),
    });
    let mut bundle = Bundle::default();
    add_snapshots(&mut bundle, &rec, "", cfg.svg);
    timer.lap("output");
    let summary = vec![
        format!("energy after/before first reflection: {:.6} ({direction})", m.ratio),
        format!(
            "receding-mirror factor (1-nu)/(1+nu) = {:.6}; (1+nu)/(1-nu) = {:.6}; relative deviation {:.2e}",
            m.expected,
            one_plus_z(nu)?,
            m.relative_error()
        ),
    ];
    Ok(Report {
        bundle,
        results,
        summary,
        timings: timer.phases,
    })
}
