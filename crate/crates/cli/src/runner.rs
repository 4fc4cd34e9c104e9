// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Dispatch from a validated config to the solvers, and file output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use windcore::hilbert::{build_composite, fidelity};
use windcore::models::{self, FnHamiltonian, Hamiltonian, ModelParams};
use windcore::propagator::{self, default_steps, StepOptions, Trajectory, TrajectoryColumns};
use windcore::redfield::{self, RobustnessSpec};
use windcore::table::Table;
use windcore::tomography::{self, StateRef};
use windcore::wind::{self, WindControl};
use windcore::{energetics, CompositeSpace, Operator, QuantumState};

use crate::config::{
    projector_kind, Control, Experiment, ExperimentConfig, ResolvedVariant, WignerSource,
};
use crate::error::CliError;
use crate::manifest::{OutputDir, RunManifest};

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Directory under which `<name>/` is created.
    pub out_root: PathBuf,
    /// Replaces `numerics.steps` for every run.
    pub steps: Option<usize>,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub manifest: RunManifest,
}

/// `1`, `0.5`, `1000`: the shortest exact rendering of a duration.
pub fn tau_tag(tau: f64) -> String {
    format!("{tau}")
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    space: CompositeSpace,
    psi_i: QuantumState,
    psi_f: QuantumState,
    variants: Vec<ResolvedVariant>,
    steps: Option<usize>,
}

/// One closed-system run.
struct Run {
    traj: Trajectory,
    control: Option<WindControl>,
}

impl<'a> Context<'a> {
    fn new(cfg: &'a ExperimentConfig, steps: Option<usize>) -> Result<Self, CliError> {
        let space = build_composite(cfg.model.n_cut)?;
        let psi_i = cfg.initial.build(&space)?;
        let psi_f = cfg.target.build(&space)?;
        Ok(Context {
            cfg,
            space,
            psi_i,
            psi_f,
            variants: cfg.variants(),
            steps: steps.or(cfg.numerics.steps),
        })
    }

    fn steps_for(&self, tau: f64) -> usize {
        self.steps.unwrap_or_else(|| default_steps(tau))
    }

    fn params(&self, v: &ResolvedVariant, tau: f64) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(
            v.drive.protocol(tau),
            self.cfg.model.kind,
            self.space.clone(),
        )?)
    }

    fn evolve(
        &self,
        v: &ResolvedVariant,
        control: Control,
        tau: f64,
        decimation: usize,
    ) -> Result<Run, CliError> {
        let p = self.params(v, tau)?;
        let steps = self.steps_for(tau);
        let mut opts = StepOptions::new(steps)
            .decimate(decimation)
            .guard(&self.space);
        opts.leakage_limit = self.cfg.numerics.leakage_limit;
        Ok(match control {
            Control::None => Run {
                traj: propagator::evolve_with(&p, &self.psi_i, tau, &opts)?,
                control: None,
            },
            Control::Wind => {
                let wc = wind::synthesize(&p, &self.psi_i, &self.psi_f, tau, steps)?;
                Run {
                    traj: wind::evolve_controlled(&p, &wc, &opts)?,
                    control: Some(wc),
                }
            }
            Control::ClosedForm => {
                let n = self.cfg.closed_form.as_ref().map_or(0, |c| c.n);
                let h = FnHamiltonian::new(p.dim(), |t| {
                    let hc = wind::closed_form_control_for(&p.drive, n, t, &p.space)?;
                    p.at(t)?.add(&hc)
                });
                Run {
                    traj: propagator::evolve_with(&h, &self.psi_i, tau, &opts)?,
                    control: None,
                }
            }
        })
    }

    /// Every `(variant, control, tau)` combination in config order.
    fn cells(&self) -> Vec<(usize, Control, f64)> {
        let mut cells = Vec::new();
        for vi in 0..self.variants.len() {
            for &c in &self.cfg.controls {
                for &tau in &self.cfg.timing.taus {
                    cells.push((vi, c, tau));
                }
            }
        }
        cells
    }

    fn run_name(&self, vi: usize, control: Control, tau: f64) -> String {
        format!(
            "{}_{}_tau{}",
            self.variants[vi].name,
            control.name(),
            tau_tag(tau)
        )
    }
}

fn write_table(out: &mut OutputDir, name: &str, table: &Table) -> Result<(), CliError> {
    out.write(name, table.to_csv_string().as_bytes())?;
    Ok(())
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Runs one experiment and writes its outputs plus a manifest.
pub fn run(name: &str, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let dir = opts
        .out_root
        .join(cfg.output.directory.as_deref().unwrap_or(name));
    let ctx = Context::new(cfg, opts.steps)?;
    let mut out = OutputDir::create(&dir)?;
    log::info!("running {name} ({}) into {}", cfg.experiment.name(), dir.display());
    let max_leakage = match cfg.experiment {
        Experiment::FidelitySweep => fidelity_sweep(&ctx, &mut out)?,
        Experiment::SingleRun => single_run(&ctx, &mut out)?,
        Experiment::Wigner => wigner(&ctx, &mut out)?,
        Experiment::QslSweep => qsl_sweep(&ctx, &mut out)?,
        Experiment::Robustness => robustness(&ctx, &mut out)?,
    };
    let manifest = RunManifest {
        name: name.to_string(),
        experiment: cfg.experiment.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: serde_json::to_value(cfg).expect("configs serialize"),
        steps_override: opts.steps,
        wall_time_s: start.elapsed().as_secs_f64(),
        max_leakage,
        files: Vec::new(),
    };
    let manifest = out.finish(manifest)?;
    Ok(RunOutcome { dir, manifest })
}

#[derive(Serialize)]
struct FidelityRecord {
    variant: String,
    control: &'static str,
    tau: f64,
    steps: usize,
    fidelity: f64,
    max_leakage: f64,
}

fn fidelity_sweep(ctx: &Context<'_>, out: &mut OutputDir) -> Result<Option<f64>, CliError> {
    let cells = ctx.cells();
    let records = cells
        .par_iter()
        .map(|&(vi, control, tau)| {
            let steps = ctx.steps_for(tau);
            let run = ctx.evolve(&ctx.variants[vi], control, tau, steps)?;
            Ok(FidelityRecord {
                variant: ctx.variants[vi].name.clone(),
                control: control.name(),
                tau,
                steps,
                fidelity: fidelity(run.traj.final_state(), &ctx.psi_f)?,
                max_leakage: run.traj.max_leakage,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    for v in &ctx.variants {
        let mut header = vec!["tau".to_string()];
        header.extend(ctx.cfg.controls.iter().map(|c| format!("F_{}", c.name())));
        let mut table = Table::new(header);
        for &tau in &ctx.cfg.timing.taus {
            let mut row = vec![tau];
            for c in &ctx.cfg.controls {
                let r = records
                    .iter()
                    .find(|r| r.variant == v.name && r.control == c.name() && r.tau == tau)
                    .expect("every cell ran");
                row.push(r.fidelity);
            }
            table.push(row)?;
        }
        write_table(out, &format!("fidelity_{}.csv", v.name), &table)?;
    }
    if ctx.cfg.wants_json() {
        out.write_json("summary.json", &json!({ "runs": records }))?;
    }
    Ok(Some(max_of(records.iter().map(|r| r.max_leakage))))
}

fn projectors(ctx: &Context<'_>) -> Result<Vec<(String, Operator)>, CliError> {
    ctx.cfg
        .observables
        .projectors
        .iter()
        .map(|name| {
            let kind = projector_kind(name).expect("validated projector name");
            Ok((name.clone(), models::subspace_projector(kind, &ctx.space)?))
        })
        .collect()
}

fn drive_table(p: &ModelParams, times: &[f64]) -> Result<Table, CliError> {
    let mut table = Table::new(["t", "lambda", "omega_q"]);
    for &t in times {
        table.push(vec![
            t,
            models::coupling(t, &p.drive)?,
            models::qubit_frequency(t, &p.drive)?,
        ])?;
    }
    Ok(table)
}

fn single_run(ctx: &Context<'_>, out: &mut OutputDir) -> Result<Option<f64>, CliError> {
    let projectors = projectors(ctx)?;
    let decimation = ctx.cfg.numerics.decimation;
    let cells = ctx.cells();
    let results = cells
        .par_iter()
        .map(|&(vi, control, tau)| {
            let run = ctx.evolve(&ctx.variants[vi], control, tau, decimation)?;
            let cols = TrajectoryColumns {
                target: &ctx.psi_f,
                projectors: &projectors,
                space: &ctx.space,
            };
            let traj_table = propagator::trajectory_table(&run.traj, &cols)?;
            let control_table = match &run.control {
                Some(wc) => Some(wind::control_table(wc, decimation)?),
                None => None,
            };
            let drive = drive_table(&ctx.params(&ctx.variants[vi], tau)?, &run.traj.times)?;
            let summary = json!({
                "variant": ctx.variants[vi].name,
                "control": control.name(),
                "tau": tau,
                "steps": run.traj.step_count,
                "final_fidelity": fidelity(run.traj.final_state(), &ctx.psi_f)?,
                "max_leakage": run.traj.max_leakage,
            });
            Ok((traj_table, control_table, drive, summary, run.traj.max_leakage))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut summaries = Vec::new();
    let mut leak: f64 = 0.0;
    for (&(vi, control, tau), (traj, control_table, drive, summary, l)) in cells.iter().zip(results) {
        write_table(out, &format!("trajectory_{}.csv", ctx.run_name(vi, control, tau)), &traj)?;
        if let Some(table) = control_table {
            write_table(out, &format!("control_{}.csv", ctx.run_name(vi, control, tau)), &table)?;
        }
        // the drive does not depend on the control mode
        let drive_name = format!("drive_{}_tau{}.csv", ctx.variants[vi].name, tau_tag(tau));
        if !out.files().iter().any(|f| f.name == drive_name) {
            write_table(out, &drive_name, &drive)?;
        }
        summaries.push(summary);
        leak = leak.max(l);
    }
    if ctx.cfg.wants_json() {
        out.write_json("summary.json", &json!({ "runs": summaries }))?;
    }
    Ok(Some(leak))
}

fn adopt_all(out: &mut OutputDir, paths: &[PathBuf]) -> Result<(), CliError> {
    for p in paths {
        out.adopt(p)?;
    }
    Ok(())
}

fn write_grid(
    out: &mut OutputDir,
    dir: &Path,
    state: &QuantumState,
    ctx: &Context<'_>,
    stem: &str,
    meta: serde_json::Value,
) -> Result<(), CliError> {
    let spec = ctx.cfg.wigner.as_ref().expect("validated wigner table");
    let grid = tomography::wigner_grid(StateRef::from(state), &spec.grid(), &spec.labels, &ctx.space)?;
    let paths = tomography::write_wigner(&grid, dir, stem, meta)
        .map_err(|e| CliError::io(dir.join(stem), e))?;
    adopt_all(out, &paths)
}

fn wigner(ctx: &Context<'_>, out: &mut OutputDir) -> Result<Option<f64>, CliError> {
    let spec = ctx.cfg.wigner.as_ref().expect("validated wigner table");
    let dir = out.path().to_path_buf();
    if spec.source == WignerSource::Target {
        let meta = json!({ "source": "target", "state": ctx.cfg.target });
        write_grid(out, &dir, &ctx.psi_f, ctx, "wigner_target", meta)?;
        return Ok(None);
    }
    let mut leak: f64 = 0.0;
    for (vi, control, tau) in ctx.cells() {
        let steps = ctx.steps_for(tau);
        let run = ctx.evolve(&ctx.variants[vi], control, tau, steps)?;
        leak = leak.max(run.traj.max_leakage);
        let state = run.traj.final_state();
        let meta = json!({
            "source": "final",
            "variant": ctx.variants[vi].name,
            "control": control.name(),
            "tau": tau,
            "steps": steps,
            "fidelity_to_target": fidelity(state, &ctx.psi_f)?,
        });
        let stem = format!("wigner_{}", ctx.run_name(vi, control, tau));
        write_grid(out, &dir, state, ctx, &stem, meta)?;
    }
    Ok(Some(leak))
}

fn qsl_sweep(ctx: &Context<'_>, out: &mut OutputDir) -> Result<Option<f64>, CliError> {
    let mut summaries = Vec::new();
    for v in &ctx.variants {
        let p = ctx.params(v, ctx.cfg.timing.taus[0])?;
        let rows = energetics::speed_resource_sweep(
            &p,
            &ctx.psi_i,
            &ctx.psi_f,
            &ctx.cfg.timing.taus,
            ctx.steps,
        )?;
        write_table(out, &format!("qsl_{}.csv", v.name), &energetics::sweep_table(&rows))?;
        summaries.push(json!({ "variant": v.name, "rows": rows }));
    }
    if ctx.cfg.wants_json() {
        out.write_json("summary.json", &json!({ "sweeps": summaries }))?;
    }
    Ok(None)
}

fn robustness(ctx: &Context<'_>, out: &mut OutputDir) -> Result<Option<f64>, CliError> {
    let bath = ctx.cfg.bath.as_ref().expect("validated bath table");
    let mut summaries = Vec::new();
    for v in &ctx.variants {
        for &tau in &ctx.cfg.timing.taus {
            let p = ctx.params(v, tau)?;
            let spec = RobustnessSpec {
                params: &p,
                psi_i: &ctx.psi_i,
                psi_f: &ctx.psi_f,
                steps: ctx.steps_for(tau),
                secular_cutoff: bath.secular_cutoff,
                thermal_floor: bath.thermal_floor,
            };
            let rows =
                redfield::robustness_sweep(&spec, &bath.gammas, &bath.temperatures, &bath.channels)?;
            let name = format!("robustness_{}_tau{}.csv", v.name, tau_tag(tau));
            write_table(out, &name, &redfield::robustness_table(&rows))?;
            summaries.push(json!({ "variant": v.name, "tau": tau, "rows": rows }));
        }
    }
    if ctx.cfg.wants_json() {
        let channels: Vec<_> = redfield::ChannelConfig::ALL
            .iter()
            .map(|c| json!({ "index": c.index(), "name": c.name() }))
            .collect();
        out.write_json(
            "summary.json",
            &json!({ "channel_codes": channels, "sweeps": summaries }),
        )?;
    }
    Ok(None)
}
