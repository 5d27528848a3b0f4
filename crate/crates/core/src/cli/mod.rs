//! Command-line runner: argument parsing into a [`RunConfig`], validation,
//! and dispatch to the commands that produce JSON or CSV artifacts.

mod commands;
pub mod parse;
pub mod report;
pub mod suites;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use crate::error::{Error, Result};
use crate::fuchsian::{MultiplierKind, MultiplierSystem};
use crate::geom::Point;

pub use report::{Assertion, CheckReport, Relation, SuiteReport};
pub use suites::{run_suite, SuiteInput, SUITES};

/// Version tag carried by every JSON artifact.
pub const SCHEMA: u32 = 1;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Geom,
    Resolvent,
    Heat,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TransformMode {
    Forward,
    Inverse,
    Roundtrip,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GroupMode {
    Ball,
    Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Kernel(KernelKind),
    Transform(TransformMode),
    Group(GroupMode),
    Constants,
    /// suite name or "all"
    Check(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MultiplierArg {
    Trivial,
    #[value(name = "eta_power", alias = "eta-power")]
    EtaPower,
}

/// Everything a run needs, after parsing and defaulting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub weight_k: f64,
    pub multiplier: MultiplierKind,
    pub s_list: Vec<Complex64>,
    pub r_list: Vec<f64>,
    pub t_list: Vec<f64>,
    pub x_list: Vec<f64>,
    pub u_list: Vec<f64>,
    pub rho_list: Vec<f64>,
    pub points: Vec<(Point, Point)>,
    /// spectral shift Z of the Poisson kernel
    pub shift: Complex64,
    #[serde(rename = "trunc_R")]
    pub trunc_r: f64,
    pub d_dim: usize,
    pub y_cut: f64,
    /// Poisson kernel as a group sum instead of the free kernel
    pub group_sum: bool,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<String>,
    pub seed: u64,
}

impl RunConfig {
    /// Defaults of a bare `check all`.
    pub fn check(suite: &str, k: f64, multiplier: MultiplierKind, seed: u64) -> Self {
        Self {
            command: Command::Check(suite.to_string()),
            weight_k: k,
            multiplier,
            s_list: vec![],
            r_list: vec![],
            t_list: vec![],
            x_list: vec![],
            u_list: vec![],
            rho_list: vec![],
            points: vec![],
            shift: Complex64::new(0.0, 0.0),
            trunc_r: 50.0,
            d_dim: 1,
            y_cut: 2.0,
            group_sum: false,
            tolerances: BTreeMap::new(),
            output_path: None,
            seed,
        }
    }

    pub fn multiplier_system(&self) -> Result<MultiplierSystem> {
        let ms = match self.multiplier {
            MultiplierKind::Trivial => MultiplierSystem::trivial(self.weight_k),
            MultiplierKind::EtaPower => MultiplierSystem::eta_power(self.weight_k),
        };
        ms.map_err(|e| Error::config("k", e.to_string()))
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// Range checks on every field, reported with the field path.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: String, msg: String| Err(Error::config(field, msg));
        if !self.weight_k.is_finite() {
            return bad("k".into(), "weight must be finite".into());
        }
        if !(self.trunc_r >= 1.0 && self.trunc_r.is_finite()) {
            return bad("R".into(), format!("truncation radius must be finite and >= 1, got {}", self.trunc_r));
        }
        for (name, v) in &self.tolerances {
            if !(*v > 0.0) {
                return bad(format!("tol.{name}"), "tolerances must be positive".into());
            }
        }
        for (field, list) in [("t", &self.t_list), ("u", &self.u_list)] {
            if let Some((i, v)) = list.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
                return bad(format!("{field}[{i}]"), format!("must be positive, got {v}"));
            }
        }
        for (field, list) in [("r", &self.r_list), ("x", &self.x_list), ("rho", &self.rho_list)] {
            if let Some((i, v)) = list.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
                return bad(format!("{field}[{i}]"), format!("must be non-negative, got {v}"));
            }
        }
        if self.d_dim == 0 {
            return bad("d".into(), "dimension must be at least 1".into());
        }
        if !(self.y_cut > 3f64.sqrt() / 2.0) {
            return bad("y-cut".into(), format!("cut height must exceed sqrt(3)/2, got {}", self.y_cut));
        }
        if let Command::Check(name) = &self.command {
            if name != "all" && !SUITES.contains(&name.as_str()) {
                return bad("check".into(), format!("unknown suite `{name}`; known: all, {}", SUITES.join(", ")));
            }
        }
        Ok(())
    }
}

/// Bytes of the artifact plus whether any check inside it failed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub bytes: Vec<u8>,
    pub failed: bool,
}

/// Validates and executes a configuration; does not touch the filesystem.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    commands::dispatch(cfg)
}

#[derive(Parser, Debug)]
#[command(name = "poincare", version, about = "Weight-k automorphic kernels on the modular group")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// weight k
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    k: f64,
    #[arg(long, global = true, value_enum, default_value = "eta_power")]
    multiplier: MultiplierArg,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// write the artifact here instead of stdout
    #[arg(long, short = 'o', global = true)]
    output: Option<String>,
    /// tolerance override NAME=VALUE (repeatable)
    #[arg(long = "tol", global = true)]
    tol: Vec<String>,
    /// truncation radius in sigma = 1 + u
    #[arg(long = "R", global = true, default_value_t = 50.0)]
    trunc_r: f64,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Evaluate an automorphic kernel at point pairs
    Kernel {
        #[arg(value_enum)]
        kind: KernelKind,
        /// points z, comma separated "a+bi"
        #[arg(long, allow_hyphen_values = true, default_value = "i")]
        z: String,
        #[arg(long, allow_hyphen_values = true, default_value = "2i")]
        w: String,
        /// spectral parameters (geom, resolvent)
        #[arg(long, allow_hyphen_values = true, default_value = "3")]
        s: String,
        /// times (heat)
        #[arg(long, default_value = "1")]
        t: String,
        /// Poisson parameters
        #[arg(long, default_value = "1")]
        u: String,
        /// Poisson spectral shift Z
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        shift: String,
        /// Poisson kernel as a group sum (refused when the tail is too large)
        #[arg(long)]
        group: bool,
    },
    /// Transform pipeline between profiles and spectral coefficients
    Transform {
        #[arg(value_enum)]
        mode: TransformMode,
        #[arg(long, allow_hyphen_values = true, default_value = "2.5")]
        s: String,
        /// spectral grid
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
        /// profile grid
        #[arg(long)]
        x: Option<String>,
    },
    /// Ball enumeration and lattice counting in the modular group
    Group {
        #[arg(value_enum)]
        mode: GroupMode,
        #[arg(long, allow_hyphen_values = true, default_value = "i")]
        z: String,
        #[arg(long, allow_hyphen_values = true, default_value = "i")]
        w: String,
        /// hyperbolic radii (count)
        #[arg(long, default_value = "0.1,1,2,3,4")]
        rho: String,
    },
    /// Sup-norm constants and the digamma term
    Constants {
        /// dimension of the multiplier system
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// height at which the fundamental domain is cut
        #[arg(long = "y-cut", default_value_t = 2.0)]
        y_cut: f64,
    },
    /// Run invariant suites
    Check {
        /// "all" or a suite name
        #[arg(default_value = "all")]
        suite: String,
    },
}

fn field<T>(name: &str, r: std::result::Result<T, String>) -> Result<T> {
    r.map_err(|m| Error::config(name, m))
}

fn pair_points(z: &str, w: &str) -> Result<Vec<(Point, Point)>> {
    let zs = field("z", parse::parse_points(z))?;
    let ws = field("w", parse::parse_points(w))?;
    match (zs.len(), ws.len()) {
        (a, b) if a == b => Ok(zs.into_iter().zip(ws).collect()),
        (1, _) => Ok(ws.into_iter().map(|w| (zs[0], w)).collect()),
        (_, 1) => Ok(zs.into_iter().map(|z| (z, ws[0])).collect()),
        (a, b) => Err(Error::config("w", format!("{a} z points cannot pair with {b} w points"))),
    }
}

fn build_config(cli: Cli) -> Result<RunConfig> {
    let g = cli.global;
    let multiplier = match g.multiplier {
        MultiplierArg::Trivial => MultiplierKind::Trivial,
        MultiplierArg::EtaPower => MultiplierKind::EtaPower,
    };
    let mut tolerances = BTreeMap::new();
    for t in &g.tol {
        let (name, v) = field("tol", parse::parse_tolerance(t))?;
        tolerances.insert(name, v);
    }
    let mut cfg = RunConfig::check("all", g.k, multiplier, g.seed);
    cfg.trunc_r = g.trunc_r;
    cfg.tolerances = tolerances;
    cfg.output_path = g.output;
    match cli.command {
        CliCommand::Kernel { kind, z, w, s, t, u, shift, group } => {
            cfg.command = Command::Kernel(kind);
            cfg.points = pair_points(&z, &w)?;
            match kind {
                KernelKind::Geom | KernelKind::Resolvent => cfg.s_list = field("s", parse::parse_complex_list(&s))?,
                KernelKind::Heat => cfg.t_list = field("t", parse::parse_grid(&t))?,
                KernelKind::Poisson => {
                    cfg.u_list = field("u", parse::parse_grid(&u))?;
                    cfg.shift = field("shift", parse::parse_complex(&shift))?;
                    cfg.group_sum = group;
                }
            }
        }
        CliCommand::Transform { mode, s, r, x } => {
            cfg.command = Command::Transform(mode);
            cfg.s_list = field("s", parse::parse_complex_list(&s))?;
            let r_default = if mode == TransformMode::Roundtrip { "0,0.5,1,2" } else { "0:5:11" };
            cfg.r_list = field("r", parse::parse_grid(r.as_deref().unwrap_or(r_default)))?;
            let x_default = if mode == TransformMode::Roundtrip { "0,1,4" } else { "0:4:9" };
            cfg.x_list = field("x", parse::parse_grid(x.as_deref().unwrap_or(x_default)))?;
        }
        CliCommand::Group { mode, z, w, rho } => {
            cfg.command = Command::Group(mode);
            cfg.points = pair_points(&z, &w)?;
            if mode == GroupMode::Count {
                cfg.rho_list = field("rho", parse::parse_grid(&rho))?;
            }
        }
        CliCommand::Constants { d, y_cut } => {
            cfg.command = Command::Constants;
            cfg.d_dim = d;
            cfg.y_cut = y_cut;
        }
        CliCommand::Check { suite } => cfg.command = Command::Check(suite),
    }
    Ok(cfg)
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(raw) = std::env::var("POINCARE_THREADS") else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::config("POINCARE_THREADS", format!("`{raw}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Error::config("POINCARE_THREADS", e.to_string()))
}

fn emit(cfg: &RunConfig, out: &RunOutput) -> Result<()> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, &out.bytes)?,
        None => std::io::stdout().lock().write_all(&out.bytes)?,
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::UnknownSuite(_) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = build_config(cli).and_then(|cfg| {
        let out = match thread_pool()? {
            Some(pool) => pool.install(|| run(&cfg))?,
            None => run(&cfg)?,
        };
        emit(&cfg, &out)?;
        Ok(out.failed)
    });
    match result {
        Ok(false) => EXIT_OK,
        Ok(true) => EXIT_FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
