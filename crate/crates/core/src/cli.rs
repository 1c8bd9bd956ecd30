// Copyright 2026 catkerr Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 i/o failure or failed benchmark claims, 2
//! configuration error, 3 numerical failure (step underflow, trace drift,
//! no convergence).

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{CdVariantChoice, ExperimentConfig, Subcommand, WignerState};
use crate::error::{Error, Result};
use crate::fock::{cat_state, coherent_state, DensityMatrix, Operator, Parity, PureState};
use crate::lindblad::{steady_state, CollapseOp, EvolutionProblem, Hamiltonian, SteadyStateMethod, SteadyStateOptions};
use crate::linalg::C64;
use crate::model::{build_h0, lossy_eigen_amplitude, ModelSpec};
use crate::observables::{fidelity_pair, mean_photon, parity_expectation, wigner, GridSpec, WignerGrid};
use crate::output::{self, ArtifactDir, UNIT_NOTE};
use crate::protocols::{
    analytic_init_dephasing, condition_sweep, nphoton_check, run_adiabatic_init, run_gate_x, run_gate_z,
    run_gate_zz, run_stabilization, run_transitionless_init, DriveEnvelope, GateXParams, GateZParams,
    GateZzParams, InitParams, ProtocolReport, RunOptions, StabilizationMode, StabilizationParams,
};
use crate::reproduce::{self, CLAIM_IDS};

#[derive(Debug, Parser)]
#[command(name = "catkerr", version, about = "Two-photon driven Kerr resonator simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Stationary state from vacuum and its fidelity to the cat mixture.
    SteadyState(Flags),
    /// Smooth two-photon drive ramp from |0> or |1>.
    AdiabaticInit(Flags),
    /// Fast ramp with an auxiliary counterdiabatic drive.
    TaInit(Flags),
    /// Cat lifetime with driven, undriven and linear resonators.
    Stabilize(Flags),
    /// Logical Z rotation through a single-photon drive.
    GateZ(Flags),
    /// Logical X rotation through a detuning.
    GateX(Flags),
    /// Entangling gate between two resonators.
    GateZz(Flags),
    /// Eigenstate check for an n-photon drive.
    NphotonCheck(Flags),
    /// Wigner function of a reference state.
    Wigner(Flags),
    /// Gate fidelity across drive strengths.
    Sweep(Flags),
    /// Recompute the published benchmark numbers.
    ReproducePaper(Flags),
}

fn kebab<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|e| e.to_string())
}

/// Number, `pi`, or `[a*]pi[/b]`.
fn angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|e| format!("bad angle '{s}': {e}"))?),
        None => (t, 1.0),
    };
    let factor = match num.strip_suffix("pi").map(str::trim) {
        Some("") => 1.0,
        Some("-") => -1.0,
        Some(f) => f.trim_end_matches('*').trim().parse::<f64>().map_err(|e| format!("bad angle '{s}': {e}"))?,
        None => return Err(format!("bad angle '{s}'")),
    };
    Ok(factor * std::f64::consts::PI / den)
}

/// Flags shared by every subcommand; each overrides the config file entry of the same name.
#[derive(Debug, Args)]
struct Flags {
    /// Flat TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long = "out")]
    output_dir: Option<PathBuf>,
    #[arg(long = "K", allow_hyphen_values = true)]
    k: Option<f64>,
    /// Real part of the two-photon drive.
    #[arg(long = "Ep", allow_hyphen_values = true)]
    ep: Option<f64>,
    /// Imaginary part of the two-photon drive.
    #[arg(long = "Ep-im", allow_hyphen_values = true)]
    ep_im: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long = "Ez", allow_hyphen_values = true)]
    ez: Option<f64>,
    #[arg(long = "delta-x", allow_hyphen_values = true)]
    delta_x: Option<f64>,
    #[arg(long = "Ezz", allow_hyphen_values = true)]
    ezz: Option<f64>,
    /// Photon number of the parametric drive.
    #[arg(long = "n-drive")]
    n_drive: Option<u32>,
    /// Fock-space truncation per mode.
    #[arg(long = "N")]
    n_fock: Option<usize>,
    /// Plateau of the drive ramp.
    #[arg(long = "Ep0")]
    ep0: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    /// Initial parity: even starts from |0>, odd from |1>.
    #[arg(long, value_parser = kebab::<Parity>)]
    initial: Option<Parity>,
    /// over-norm, times-norm, exact or none.
    #[arg(long = "cd-variant", value_parser = kebab::<CdVariantChoice>)]
    cd_variant: Option<CdVariantChoice>,
    /// Rotation angle; accepts `pi/2`, `3*pi/4`, ...
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// angle-over-rate or inverse-rate.
    #[arg(long = "z-timing", value_parser = kebab::<crate::protocols::ZTiming>)]
    z_timing: Option<crate::protocols::ZTiming>,
    /// calibrated or nominal.
    #[arg(long = "x-timing", value_parser = kebab::<crate::protocols::XTiming>)]
    x_timing: Option<crate::protocols::XTiming>,
    /// Gate duration overriding the timing rule.
    #[arg(long)]
    duration: Option<f64>,
    /// Cat amplitude (stabilize) or state amplitude (wigner).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Time-series samples including both ends.
    #[arg(long)]
    samples: Option<usize>,
    /// long-time or null-space.
    #[arg(long, value_parser = kebab::<SteadyStateMethod>)]
    method: Option<SteadyStateMethod>,
    /// vacuum, coherent, even-cat or odd-cat.
    #[arg(long = "state", value_parser = kebab::<WignerState>)]
    wigner_state: Option<WignerState>,
    /// z, x or zz.
    #[arg(long = "gate", value_parser = kebab::<crate::protocols::SweepGate>)]
    sweep_gate: Option<crate::protocols::SweepGate>,
    /// Comma-separated drive strengths.
    #[arg(long = "values", value_delimiter = ',', allow_hyphen_values = true)]
    sweep_values: Option<Vec<f64>>,
    #[arg(long = "x-min", allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long = "x-max", allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long = "p-min", allow_hyphen_values = true)]
    p_min: Option<f64>,
    #[arg(long = "p-max", allow_hyphen_values = true)]
    p_max: Option<f64>,
    #[arg(long)]
    np: Option<usize>,
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    #[arg(long = "abs-tol")]
    abs_tol: Option<f64>,
    #[arg(long = "max-steps")]
    max_steps: Option<usize>,
    #[arg(long = "convergence-eps")]
    convergence_eps: Option<f64>,
    /// Longest integration time for the steady state.
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Comma-separated claim ids (reproduce-paper).
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<u32>>,
}

impl Flags {
    fn to_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            subcommand: None,
            k: self.k,
            ep: self.ep,
            ep_im: self.ep_im,
            kappa: self.kappa,
            ez: self.ez,
            delta_x: self.delta_x,
            ezz: self.ezz,
            n_drive: self.n_drive,
            n_fock: self.n_fock,
            ep0: self.ep0,
            tau: self.tau,
            t_final: self.t_final,
            initial: self.initial,
            cd_variant: self.cd_variant,
            theta: self.theta,
            z_timing: self.z_timing,
            x_timing: self.x_timing,
            duration: self.duration,
            alpha: self.alpha,
            samples: self.samples,
            method: self.method,
            wigner_state: self.wigner_state,
            sweep_gate: self.sweep_gate,
            sweep_values: self.sweep_values.clone(),
            x_min: self.x_min,
            x_max: self.x_max,
            nx: self.nx,
            p_min: self.p_min,
            p_max: self.p_max,
            np: self.np,
            output_dir: self.output_dir.clone(),
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_steps: self.max_steps,
            convergence_eps: self.convergence_eps,
            t_max: self.t_max,
        }
    }
}

impl Command {
    fn split(self) -> (Subcommand, Flags) {
        match self {
            Command::SteadyState(f) => (Subcommand::SteadyState, f),
            Command::AdiabaticInit(f) => (Subcommand::AdiabaticInit, f),
            Command::TaInit(f) => (Subcommand::TaInit, f),
            Command::Stabilize(f) => (Subcommand::Stabilize, f),
            Command::GateZ(f) => (Subcommand::GateZ, f),
            Command::GateX(f) => (Subcommand::GateX, f),
            Command::GateZz(f) => (Subcommand::GateZz, f),
            Command::NphotonCheck(f) => (Subcommand::NphotonCheck, f),
            Command::Wigner(f) => (Subcommand::Wigner, f),
            Command::Sweep(f) => (Subcommand::Sweep, f),
            Command::ReproducePaper(f) => (Subcommand::ReproducePaper, f),
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        2
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (cmd, flags) = cli.command.split();
    match execute(cmd, &flags) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("catkerr {cmd}: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cmd: Subcommand, flags: &Flags) -> Result<i32> {
    let mut config = match &flags.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(c) = config.subcommand {
        if c != cmd {
            return Err(Error::Config(format!("config file is for '{c}', not '{cmd}'")));
        }
    }
    config.overlay(&flags.to_config());
    config.subcommand = Some(cmd);
    let config = config.resolve()?;
    let only = flags.only.clone();
    crate::parallel::with_pool(move || dispatch(&config, only))?
}

/// Conventions echoed into every summary.
#[derive(Debug, Default, Serialize)]
struct Conventions {
    fidelity: &'static str,
    root_fidelity: &'static str,
    vectorization: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta0_branch: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cd_variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gate_timing: Option<String>,
}

impl Conventions {
    fn new() -> Self {
        Self {
            fidelity: "<psi|rho|psi> for pure targets, (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 for mixed targets",
            root_fidelity: "square root of fidelity",
            vectorization: "column stacking",
            ..Default::default()
        }
    }
}

struct Run {
    fidelity: Option<(f64, f64)>,
    model: Option<ModelSpec>,
    conventions: Conventions,
    results: Value,
    exit: i32,
}

impl Run {
    fn new(results: Value) -> Self {
        Self { fidelity: None, model: None, conventions: Conventions::new(), results, exit: 0 }
    }

    fn from_report(report: &ProtocolReport) -> Result<Self> {
        let mut run = Self::new(to_value(report)?);
        run.fidelity = Some((report.fidelity, report.root_fidelity));
        Ok(run)
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))
}

fn dispatch(config: &ExperimentConfig, only: Option<Vec<u32>>) -> Result<i32> {
    let started = Instant::now();
    let cmd = config.subcommand()?;
    let out_dir = ExperimentConfig::require(&config.output_dir, "output_dir")?;
    let mut dir = ArtifactDir::new(out_dir);
    let opts = RunOptions { solver: config.solver(), samples: config.samples.unwrap_or(1) };
    let run = match cmd {
        Subcommand::SteadyState => steady(config, &mut dir)?,
        Subcommand::AdiabaticInit | Subcommand::TaInit => init(config, cmd, &opts, &mut dir)?,
        Subcommand::Stabilize => stabilize(config, &opts, &mut dir)?,
        Subcommand::GateZ | Subcommand::GateX | Subcommand::GateZz => gate(config, cmd, &opts, &mut dir)?,
        Subcommand::NphotonCheck => {
            let spec = config.model()?;
            let mut run = Run::new(to_value(&nphoton_check(&spec)?)?);
            run.model = Some(spec);
            run
        }
        Subcommand::Wigner => wigner_cmd(config, &mut dir)?,
        Subcommand::Sweep => sweep(config, &opts, &mut dir)?,
        Subcommand::ReproducePaper => reproduce_cmd(config, only, &mut dir)?,
    };
    let mut files = dir.files().to_vec();
    files.push("summary.json".into());
    let summary = json!({
        "tool": "catkerr",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": cmd.name(),
        "fidelity": run.fidelity.map(|f| f.0),
        "root_fidelity": run.fidelity.map(|f| f.1),
        "model": run.model,
        "config": config,
        "conventions": run.conventions,
        "units": UNIT_NOTE,
        "timings": { "wall_seconds": started.elapsed().as_secs_f64() },
        "results": run.results,
        "files": files,
    });
    dir.write_json("summary.json", &summary)?;
    if let Some((f, root)) = run.fidelity {
        println!("{cmd}: fidelity {f:.6} (root {root:.6}); artifacts in {}", dir.root().display());
    } else {
        println!("{cmd}: artifacts in {}", dir.root().display());
    }
    Ok(run.exit)
}

fn grid_from(config: &ExperimentConfig, alpha0: C64) -> GridSpec {
    let default = GridSpec::around(alpha0);
    GridSpec {
        x_min: config.x_min.unwrap_or(default.x_min),
        x_max: config.x_max.unwrap_or(default.x_max),
        nx: config.nx.unwrap_or(default.nx),
        p_min: config.p_min.unwrap_or(default.p_min),
        p_max: config.p_max.unwrap_or(default.p_max),
        np: config.np.unwrap_or(default.np),
    }
}

fn write_wigner(dir: &mut ArtifactDir, name: &str, rho: &DensityMatrix, grid: &GridSpec) -> Result<WignerGrid> {
    let w = wigner(rho, grid)?;
    dir.write(&format!("wigner_{name}.csv"), &output::wigner_csv(&w))?;
    Ok(w)
}

fn steady(config: &ExperimentConfig, dir: &mut ArtifactDir) -> Result<Run> {
    let spec = config.model()?;
    let n = spec.n_fock;
    let amp = lossy_eigen_amplitude(&spec)?;
    let t_max = ExperimentConfig::require(&config.t_max, "t_max")?;
    let problem = EvolutionProblem::new(Hamiltonian::new(build_h0(&spec)?), DensityMatrix::fock(0, n)?, (0.0, t_max))
        .with_collapse(CollapseOp::with_rate(spec.kappa, Operator::annihilation(n)?)?);
    let opts = SteadyStateOptions {
        method: config.method.unwrap_or(SteadyStateMethod::LongTime),
        convergence_eps: config.convergence_eps.unwrap_or(1e-8),
        decay_rate: None,
        solver: config.solver(),
    };
    let rho = steady_state(&problem, &opts)?;
    let plus = coherent_state(amp.alpha0, n)?.to_density();
    let minus = coherent_state(-amp.alpha0, n)?.to_density();
    let target = DensityMatrix::mixture(&[(0.5, &plus), (0.5, &minus)])?;
    let f = fidelity_pair(&rho, &target)?;
    write_wigner(dir, "steady", &rho, &grid_from(config, amp.alpha0))?;
    let mut run = Run::new(json!({
        "target": "(|a0><a0| + |-a0><-a0|)/2",
        "alpha0": [amp.alpha0.re, amp.alpha0.im],
        "r0": amp.r0,
        "theta0": amp.theta0,
        "rotation": amp.rotation,
        "parity": parity_expectation(&rho),
        "mean_n": mean_photon(&rho),
        "purity": rho.purity(),
        "method": opts.method,
    }));
    run.fidelity = Some((f.squared, f.root));
    run.conventions.theta0_branch = Some(to_value(&amp.status)?);
    run.model = Some(spec);
    Ok(run)
}

fn init(config: &ExperimentConfig, cmd: Subcommand, opts: &RunOptions, dir: &mut ArtifactDir) -> Result<Run> {
    let n = ExperimentConfig::require(&config.n_fock, "N")?;
    let mut p = InitParams::new(
        ExperimentConfig::require(&config.ep0, "Ep0")?,
        ExperimentConfig::require(&config.tau, "tau")?,
        ExperimentConfig::require(&config.t_final, "t_final")?,
        n,
    )
    .with_kappa(config.kappa.unwrap_or(0.0))
    .with_initial(config.initial.unwrap_or(Parity::Even));
    p.k = config.k.unwrap_or(1.0);
    let variant = config.cd_variant.and_then(|c| c.0);
    let report = if cmd == Subcommand::TaInit {
        run_transitionless_init(&p, variant, opts)?
    } else {
        run_adiabatic_init(&p, opts)?
    };
    dir.write("timeseries.csv", &output::timeseries_csv(&report.timeseries))?;
    let alpha = C64::new((p.ep0 / p.k).sqrt(), 0.0);
    if let Some(rho) = &report.final_state {
        write_wigner(dir, "final", rho, &grid_from(config, alpha))?;
    }
    let mut run = Run::from_report(&report)?;
    if p.kappa > 0.0 {
        let est = analytic_init_dephasing(p.kappa, &DriveEnvelope::smooth_turn_on(p.ep0, p.tau)?, p.k, p.t_final)?;
        run.results["analytic_dephasing"] = to_value(&est)?;
    }
    if cmd == Subcommand::TaInit {
        run.conventions.cd_variant = Some(variant.map(|v| v.name()).unwrap_or("none").to_string());
    }
    Ok(run)
}

fn stabilize(config: &ExperimentConfig, opts: &RunOptions, dir: &mut ArtifactDir) -> Result<Run> {
    let mut p = StabilizationParams::new(
        config.k.unwrap_or(1.0),
        config.kappa.unwrap_or(0.0),
        ExperimentConfig::require(&config.alpha, "alpha")?,
        ExperimentConfig::require(&config.t_final, "t_final")?,
        ExperimentConfig::require(&config.n_fock, "N")?,
    );
    p.ep = config.ep;
    p.snapshot_times = vec![p.t_final];
    let runs = StabilizationMode::ALL
        .par_iter()
        .map(|&m| run_stabilization(&p, m, opts))
        .collect::<Result<Vec<_>>>()?;
    let grid = grid_from(config, C64::new(p.alpha, 0.0));
    let mut modes = serde_json::Map::new();
    for r in &runs {
        let name = r.mode.name();
        dir.write(&format!("timeseries_{name}.csv"), &output::timeseries_csv(&r.report.timeseries))?;
        if let Some((_, rho)) = r.snapshots.last() {
            write_wigner(dir, &format!("{name}_final"), rho, &grid)?;
        }
        modes.insert(name.to_string(), to_value(&r.report)?);
    }
    let driven = &runs[0].report;
    let margin = |other: usize| {
        driven.timeseries.iter().zip(&runs[other].report.timeseries).skip(1).map(|(d, o)| d.fidelity - o.fidelity).fold(f64::INFINITY, f64::min)
    };
    let mut run = Run::new(json!({
        "Ep": p.drive(),
        "modes": modes,
        "min_margin_undriven": margin(1),
        "min_margin_linear": margin(2),
    }));
    run.fidelity = Some((driven.fidelity, driven.root_fidelity));
    Ok(run)
}

fn gate(config: &ExperimentConfig, cmd: Subcommand, opts: &RunOptions, dir: &mut ArtifactDir) -> Result<Run> {
    let k = config.k.unwrap_or(1.0);
    let kappa = config.kappa.unwrap_or(0.0);
    let ep = ExperimentConfig::require(&config.ep, "Ep")?;
    let n = ExperimentConfig::require(&config.n_fock, "N")?;
    let (report, timing) = match cmd {
        Subcommand::GateZ => {
            let p = GateZParams {
                k,
                kappa,
                timing: config.z_timing.unwrap_or(crate::protocols::ZTiming::AngleOverRate),
                duration: config.duration,
                ..GateZParams::new(ep, config.ez.unwrap_or(0.0), ExperimentConfig::require(&config.theta, "theta")?, n)
            };
            (run_gate_z(&p, opts)?, to_value(&p.timing)?)
        }
        Subcommand::GateX => {
            let p = GateXParams {
                k,
                kappa,
                timing: config.x_timing.unwrap_or(crate::protocols::XTiming::Calibrated),
                duration: config.duration,
                ..GateXParams::new(
                    ep,
                    config.delta_x.unwrap_or(0.0),
                    ExperimentConfig::require(&config.theta, "theta")?,
                    n,
                )
            };
            (run_gate_x(&p, opts)?, to_value(&p.timing)?)
        }
        _ => {
            let p = GateZzParams { k, kappa, duration: config.duration, ..GateZzParams::new(ep, config.ezz.unwrap_or(0.0), n) };
            (run_gate_zz(&p, opts)?, json!("pi/(2 delta_zz)"))
        }
    };
    dir.write("timeseries.csv", &output::timeseries_csv(&report.timeseries))?;
    if cmd != Subcommand::GateZz {
        if let Some(rho) = &report.final_state {
            let alpha = (ep / k).sqrt();
            write_wigner(dir, "final", rho, &grid_from(config, C64::new(alpha, 0.0)))?;
        }
    }
    let mut run = Run::from_report(&report)?;
    run.conventions.gate_timing = timing.as_str().map(str::to_string);
    run.model = Some(config.model()?);
    Ok(run)
}

fn wigner_cmd(config: &ExperimentConfig, dir: &mut ArtifactDir) -> Result<Run> {
    let n = ExperimentConfig::require(&config.n_fock, "N")?;
    let state = config.wigner_state.unwrap_or(WignerState::Vacuum);
    let alpha = C64::new(config.alpha.unwrap_or(0.0), 0.0);
    let psi = match state {
        WignerState::Vacuum => PureState::fock(0, n)?,
        WignerState::Coherent => coherent_state(alpha, n)?,
        WignerState::EvenCat => cat_state(alpha, Parity::Even, n)?,
        WignerState::OddCat => cat_state(alpha, Parity::Odd, n)?,
    };
    let name = to_value(&state)?.as_str().unwrap_or("state").to_string();
    let w = write_wigner(dir, &name, &psi.to_density(), &grid_from(config, alpha))?;
    let (ix, ip) = w.argmax();
    Ok(Run::new(json!({
        "state": state,
        "alpha": alpha.re,
        "max": w.max(),
        "min": w.min(),
        "argmax": [w.x_axis[ix], w.p_axis[ip]],
        "integral": w.riemann_sum(),
    })))
}

fn sweep(config: &ExperimentConfig, opts: &RunOptions, dir: &mut ArtifactDir) -> Result<Run> {
    let gate = ExperimentConfig::require(&config.sweep_gate, "sweep_gate")?;
    let values = ExperimentConfig::require(&config.sweep_values, "sweep_values")?;
    let rows = condition_sweep(
        gate,
        &values,
        config.ep,
        config.kappa.unwrap_or(0.0),
        ExperimentConfig::require(&config.n_fock, "N")?,
        &RunOptions { samples: 1, ..*opts },
    )?;
    dir.write("sweep.csv", &output::sweep_csv(&rows))?;
    Ok(Run::new(json!({ "gate": gate, "strength": gate.strength_name(), "rows": rows })))
}

fn reproduce_cmd(config: &ExperimentConfig, only: Option<Vec<u32>>, dir: &mut ArtifactDir) -> Result<Run> {
    let ids = only.unwrap_or_else(|| CLAIM_IDS.to_vec());
    if let Some(bad) = ids.iter().find(|id| !CLAIM_IDS.contains(id)) {
        return Err(Error::Config(format!("unknown claim {bad} (expected 1-11)")));
    }
    let outcomes = reproduce::run_claims(&ids, config.solver());
    let table = reproduce::render_table(&outcomes);
    print!("{table}");
    dir.write("claims.txt", &table)?;
    let passed = outcomes.iter().filter(|o| o.pass()).count();
    let mut run = Run::new(json!({ "passed": passed, "total": outcomes.len(), "claims": outcomes }));
    if passed < outcomes.len() {
        run.exit = 1;
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(angle("pi").unwrap(), PI);
        assert_eq!(angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(angle("-pi").unwrap(), -PI);
        assert_eq!(angle("0.25").unwrap(), 0.25);
        assert!(angle("tau").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Convergence { t_max: 1.0, residual: 1.0 }), 3);
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::Io("x".into())), 1);
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        assert_eq!(run(["catkerr", "gate-y"]), 2);
        assert_eq!(run(["catkerr"]), 2);
        assert_eq!(run(["catkerr", "--help"]), 0);
    }
}
