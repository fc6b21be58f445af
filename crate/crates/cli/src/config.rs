//! Flag and config-file parsing, merging and validation into a [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kgwell::modes::ModeSpec;
use kgwell::{lambda_of_nu, PacketSpec, WallConfig};
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "kgwell", version, about = "Klein-Gordon field in a square well with a receding wall")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Sample an exact mode on one time slice.
    Modes(Flags),
    /// Evolve in flat coordinates with the moving wall.
    EvolveFlat(Flags),
    /// Evolve on the static strip in hyperbolic log coordinates.
    EvolveStrip(Flags),
    /// Sample the free Gaussian packet and report its norm and energy.
    Packet(Flags),
    /// Run both solvers on the same initial state and compare |psi|^2.
    Compare(Flags),
    /// Measure the energy change of a packet over one reflection.
    Redshift(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Modes,
    EvolveFlat,
    EvolveStrip,
    Packet,
    Compare,
    Redshift,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Modes => "modes",
            Scenario::EvolveFlat => "evolve-flat",
            Scenario::EvolveStrip => "evolve-strip",
            Scenario::Packet => "packet",
            Scenario::Compare => "compare",
            Scenario::Redshift => "redshift",
        }
    }
}

impl Command {
    pub fn split(self) -> (Scenario, Flags) {
        match self {
            Command::Modes(f) => (Scenario::Modes, f),
            Command::EvolveFlat(f) => (Scenario::EvolveFlat, f),
            Command::EvolveStrip(f) => (Scenario::EvolveStrip, f),
            Command::Packet(f) => (Scenario::Packet, f),
            Command::Compare(f) => (Scenario::Compare, f),
            Command::Redshift(f) => (Scenario::Redshift, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    Mode,
    Packet,
}

/// Flags shared by every subcommand. Numbers accept `a/b` fractions.
#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct Flags {
    /// TOML file with the same keys as the long flags (`-` written as `_`).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot of |psi|^2 per snapshot.
    #[arg(long)]
    pub svg: bool,

    /// Wall speed, 0 < nu < 1.
    #[arg(long, value_parser = parse_real)]
    pub nu: Option<f64>,
    /// Well length at t0.
    #[arg(long, value_parser = parse_real)]
    pub l0: Option<f64>,
    /// Time at which the wall starts at L0.
    #[arg(long, value_parser = parse_real)]
    pub t0: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    pub mass: Option<f64>,
    /// Mode index.
    #[arg(long)]
    pub n: Option<u32>,
    /// Time slice for `modes` and `packet`.
    #[arg(long, value_parser = parse_real)]
    pub t: Option<f64>,
    /// Initial state for the solvers.
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,
    /// Packet central momentum.
    #[arg(long, value_parser = parse_real)]
    pub p0: Option<f64>,
    /// Packet width parameter c.
    #[arg(long = "c", value_parser = parse_real)]
    pub width_c: Option<f64>,
    /// Packet centre at the reference time.
    #[arg(long, value_parser = parse_real)]
    pub x0: Option<f64>,

    /// Grid points (walls included).
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_parser = parse_real)]
    pub cfl: Option<f64>,
    /// End of the flat-time span; the span starts at t0.
    #[arg(long, value_parser = parse_real)]
    pub t_end: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    pub rho_start: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    pub rho_end: Option<f64>,
    /// Snapshot times: t for flat runs, rho for strip runs.
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    pub snapshots: Option<Vec<f64>>,
    /// Snapshot spacing of the flat reference record in `compare`.
    #[arg(long, value_parser = parse_real)]
    pub ref_dt: Option<f64>,
    #[arg(long)]
    pub diag_every: Option<usize>,
    /// Largest |psi| accepted on the walls of packet initial data.
    #[arg(long, value_parser = parse_real)]
    pub boundary_tol: Option<f64>,
}

/// Decimal, exponent or `a/b` fraction. Fractions are split and each side
/// parsed on its own, so `49/50` is the correctly rounded quotient.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = if let Some((a, b)) = s.split_once('/') {
        let num: f64 = a.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
        let den: f64 = b.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
        if den == 0.0 {
            return Err(format!("zero denominator in '{s}'"));
        }
        num / den
    } else {
        s.parse().map_err(|_| format!("'{s}' is not a number"))?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn field_err(field: &str, msg: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_string(),
        message: msg.into(),
    }
}

fn toml_real(field: &str, v: &toml::Value) -> Result<f64, CliError> {
    match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        toml::Value::String(s) => parse_real(s).map_err(|e| field_err(field, e)),
        _ => Err(field_err(field, "expected a number or a fraction string")),
    }
}

fn toml_count(field: &str, v: &toml::Value) -> Result<u64, CliError> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(field_err(field, "expected a non-negative integer")),
    }
}

/// Loads a TOML config into flags; keys already set on `flags` win.
fn merge_file(flags: &mut Flags, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| field_err("config", format!("{}: {e}", path.display())))?;
    let table: toml::Table = text.parse().map_err(|e| field_err("config", format!("{}: {e}", path.display())))?;
    for (key, v) in &table {
        let k = key.replace('-', "_");
        macro_rules! real {
            ($f:ident) => {
                if flags.$f.is_none() {
                    flags.$f = Some(toml_real(&k, v)?);
                }
            };
        }
        match k.as_str() {
            "nu" => real!(nu),
            "l0" => real!(l0),
            "t0" => real!(t0),
            "mass" => real!(mass),
            "t" => real!(t),
            "p0" => real!(p0),
            "c" => real!(width_c),
            "x0" => real!(x0),
            "cfl" => real!(cfl),
            "t_end" => real!(t_end),
            "rho_start" => real!(rho_start),
            "rho_end" => real!(rho_end),
            "ref_dt" => real!(ref_dt),
            "boundary_tol" => real!(boundary_tol),
            "n" => {
                if flags.n.is_none() {
                    let n = toml_count(&k, v)?;
                    flags.n = Some(u32::try_from(n).map_err(|_| field_err(&k, "too large"))?);
                }
            }
            "points" => {
                if flags.points.is_none() {
                    flags.points = Some(toml_count(&k, v)? as usize);
                }
            }
            "diag_every" => {
                if flags.diag_every.is_none() {
                    flags.diag_every = Some(toml_count(&k, v)? as usize);
                }
            }
            "snapshots" => {
                if flags.snapshots.is_none() {
                    let arr = v.as_array().ok_or_else(|| field_err(&k, "expected an array"))?;
                    flags.snapshots = Some(arr.iter().map(|x| toml_real(&k, x)).collect::<Result<_, _>>()?);
                }
            }
            "init" => {
                if flags.init.is_none() {
                    flags.init = Some(match v.as_str() {
                        Some("mode") => InitKind::Mode,
                        Some("packet") => InitKind::Packet,
                        _ => return Err(field_err(&k, "expected \"mode\" or \"packet\"")),
                    });
                }
            }
            "out" => {
                if flags.out.is_none() {
                    flags.out = Some(PathBuf::from(v.as_str().ok_or_else(|| field_err(&k, "expected a path string"))?));
                }
            }
            "svg" => flags.svg |= v.as_bool().ok_or_else(|| field_err(&k, "expected a boolean"))?,
            _ => return Err(field_err(&k, "unknown key")),
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Mode { n: u32 },
    Packet { p0: f64, width_c: f64, x0: f64 },
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub out: PathBuf,
    pub svg: bool,
    pub wall: WallConfig,
    pub mass: f64,
    pub init: Init,
    /// Slice for `modes`/`packet`.
    pub t: f64,
    pub points: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub rho_start: f64,
    pub rho_end: f64,
    pub flat_snapshots: Vec<f64>,
    pub strip_snapshots: Vec<f64>,
    pub ref_dt: f64,
    pub diag_every: usize,
    pub boundary_tol: f64,
}

impl RunConfig {
    pub fn packet(&self) -> Option<PacketSpec> {
        match self.init {
            Init::Packet { p0, width_c, x0 } => PacketSpec::new(p0, width_c)
                .ok()
                .map(|s| s.with_offset(x0).with_t_ref(self.wall.t0())),
            Init::Mode { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let init = match self.init {
            Init::Mode { n } => json!({ "kind": "mode", "n": n }),
            Init::Packet { p0, width_c, x0 } => json!({ "kind": "packet", "p0": p0, "c": width_c, "x0": x0 }),
        };
        json!({
            "nu": self.wall.nu(),
            "l0": self.wall.l0(),
            "t0": self.wall.t0(),
            "mass": self.mass,
            "init": init,
            "t": self.t,
            "points": self.points,
            "cfl": self.cfl,
            "t_end": self.t_end,
            "rho_start": self.rho_start,
            "rho_end": self.rho_end,
            "flat_snapshots": self.flat_snapshots,
            "strip_snapshots": self.strip_snapshots,
            "ref_dt": self.ref_dt,
            "diag_every": self.diag_every,
            "boundary_tol": self.boundary_tol,
            "svg": self.svg,
        })
    }
}

const DEFAULT_PACKET_PC: f64 = 8.0;
const DEFAULT_SNAPSHOTS: usize = 9;

fn evenly(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}

fn check_in_span(field: &str, values: &[f64], a: f64, b: f64) -> Result<(), CliError> {
    let tol = 1e-12 * a.abs().max(b.abs()).max(1.0);
    for &v in values {
        if v < a - tol || v > b + tol {
            return Err(field_err(field, format!("{v} lies outside the evolution span [{a}, {b}]")));
        }
    }
    Ok(())
}

/// Flat time at which a right-moving packet starting at `x0` meets the wall.
fn packet_hit_time(wall: &WallConfig, x0: f64) -> f64 {
    wall.t0() + (wall.l0() - x0) / (1.0 - wall.nu())
}

pub fn resolve(scenario: Scenario, mut flags: Flags) -> Result<RunConfig, CliError> {
    if let Some(path) = flags.config.clone() {
        merge_file(&mut flags, &path)?;
    }
    let modes = scenario == Scenario::Modes;

    let nu = flags.nu.unwrap_or(if modes { 49.0 / 50.0 } else { 0.5 });
    lambda_of_nu(nu).map_err(|_| field_err("nu", format!("wall speed {nu} must satisfy 0 < nu < 1")))?;
    let t0 = flags.t0.unwrap_or(if modes { 1.0 } else { 0.0 });
    // modes default to the apex at the origin, L0 = nu t0
    let l0 = flags.l0.unwrap_or(if modes { nu * t0 } else { 1.0 });
    let wall = WallConfig::new(nu, l0, t0).map_err(|e| field_err(if l0 > 0.0 { "t0" } else { "l0" }, e.to_string()))?;
    let mass = flags.mass.unwrap_or(0.0);
    if !(mass >= 0.0) {
        return Err(field_err("mass", format!("{mass} must be >= 0")));
    }

    let wants_packet = match scenario {
        Scenario::Modes => false,
        Scenario::Packet | Scenario::Redshift => true,
        _ => flags.init.unwrap_or(InitKind::Packet) == InitKind::Packet,
    };
    if scenario == Scenario::Redshift && flags.init == Some(InitKind::Mode) {
        return Err(field_err("init", "redshift is measured on a packet"));
    }
    if modes && flags.init == Some(InitKind::Packet) {
        return Err(field_err("init", "modes samples exact modes only"));
    }
    let init = if wants_packet {
        if mass != 0.0 {
            return Err(field_err("mass", "packets are massless"));
        }
        let width_c = flags.width_c.unwrap_or(l0 / 16.0);
        let p0 = flags.p0.unwrap_or(DEFAULT_PACKET_PC / width_c);
        let x0 = flags.x0.unwrap_or(0.5 * l0);
        PacketSpec::new(p0, width_c).map_err(|e| field_err(if width_c > 0.0 { "p0" } else { "c" }, e.to_string()))?;
        if !(x0 > 0.0 && x0 < l0) {
            return Err(field_err("x0", format!("packet centre {x0} must lie inside (0, L0 = {l0})")));
        }
        Init::Packet { p0, width_c, x0 }
    } else {
        let n = flags.n.unwrap_or(if modes { 10 } else { 1 });
        ModeSpec::new(n, mass, wall).map_err(|e| field_err("n", e.to_string()))?;
        Init::Mode { n }
    };

    let t = flags.t.unwrap_or(t0);
    if matches!(scenario, Scenario::Modes | Scenario::Packet) && !(t >= t0) {
        return Err(field_err("t", format!("slice time {t} precedes t0 = {t0}")));
    }
    let points = flags.points.unwrap_or(if modes { 2001 } else { 2048 });
    if points < kgwell::field::MIN_SAMPLES {
        return Err(field_err("points", format!("need at least {} points", kgwell::field::MIN_SAMPLES)));
    }
    let cfl = flags.cfl.unwrap_or(0.5);
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(field_err("cfl", format!("Courant number {cfl} must lie in (0, 1]")));
    }

    // default span: one reflection plus most of the return trip for packets
    let default_end = match init {
        Init::Packet { x0, .. } => {
            let hit = packet_hit_time(&wall, x0);
            hit + 0.8 * wall.length_at(hit)
        }
        Init::Mode { .. } => t0 + 2.0,
    };
    let t_end = flags.t_end.unwrap_or(default_end);
    if !(t_end > t0) {
        return Err(field_err("t_end", format!("{t_end} must exceed t0 = {t0}")));
    }
    let ts_end = wall.shifted_time(t_end);
    let rho_start = flags.rho_start.unwrap_or(match init {
        // slice through the packet centre at t0
        Init::Packet { x0, .. } => {
            let ts = wall.shifted_time(t0);
            (ts * ts - x0 * x0).sqrt()
        }
        Init::Mode { .. } => wall.shifted_time(t0),
    });
    let rho_end = flags.rho_end.unwrap_or(match init {
        // last slice that stays below t_end all the way to the wall
        Init::Packet { .. } => ts_end * (1.0 - nu * nu).sqrt(),
        Init::Mode { n } => {
            let k = ModeSpec::new(n, mass, wall).map(|s| s.wavenumber()).unwrap_or(1.0);
            rho_start * (2.0 * std::f64::consts::PI / k).exp()
        }
    });
    if !(rho_start > 0.0) {
        return Err(field_err("rho_start", format!("{rho_start} must be > 0")));
    }
    if !(rho_end > rho_start) {
        return Err(field_err("rho_end", format!("{rho_end} must exceed rho_start = {rho_start}")));
    }

    let is_strip = scenario == Scenario::EvolveStrip;
    let (flat_snapshots, strip_snapshots) = match &flags.snapshots {
        Some(v) if is_strip => {
            check_in_span("snapshots", v, rho_start, rho_end)?;
            (Vec::new(), v.clone())
        }
        Some(v) if scenario == Scenario::Compare => {
            check_in_span("snapshots", v, rho_start, rho_end)?;
            (Vec::new(), v.clone())
        }
        Some(v) => {
            check_in_span("snapshots", v, t0, t_end)?;
            (v.clone(), Vec::new())
        }
        None => (evenly(t0, t_end, DEFAULT_SNAPSHOTS), evenly(rho_start, rho_end, DEFAULT_SNAPSHOTS)),
    };
    let ref_dt = flags.ref_dt.unwrap_or(0.005);
    if !(ref_dt > 0.0) {
        return Err(field_err("ref_dt", format!("{ref_dt} must be > 0")));
    }
    let diag_every = flags.diag_every.unwrap_or(8);
    if diag_every == 0 {
        return Err(field_err("diag_every", "must be at least 1"));
    }
    let boundary_tol = flags.boundary_tol.unwrap_or(if wants_packet { 1e-8 } else { kgwell::field::DEFAULT_BOUNDARY_TOL });
    if !(boundary_tol >= 0.0) {
        return Err(field_err("boundary_tol", "must be >= 0"));
    }

    Ok(RunConfig {
        scenario,
        out: flags.out.unwrap_or_else(|| PathBuf::from(format!("kgwell-{}", scenario.name()))),
        svg: flags.svg,
        wall,
        mass,
        init,
        t,
        points,
        cfl,
        t_end,
        rho_start,
        rho_end,
        flat_snapshots,
        strip_snapshots,
        ref_dt,
        diag_every,
        boundary_tol,
    })
}
