// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration. One TOML document describes one experiment;
//! unknown keys are rejected and every value is checked before any
//! computation starts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use windcore::models::{self, DriveProtocol, Envelope, ModelKind, Profile, SubspaceKind};
use windcore::propagator::LEAKAGE_LIMIT;
use windcore::redfield::{ChannelConfig, DEFAULT_SECULAR_CUTOFF, DEFAULT_THERMAL_FLOOR};
use windcore::tomography::GridSpec;
use windcore::{CompositeSpace, PauliLabel, QuantumState, Qubit};

use crate::error::SchemaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    FidelitySweep,
    SingleRun,
    Wigner,
    QslSweep,
    Robustness,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::FidelitySweep => "fidelity_sweep",
            Experiment::SingleRun => "single_run",
            Experiment::Wigner => "wigner",
            Experiment::QslSweep => "qsl_sweep",
            Experiment::Robustness => "robustness",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Control {
    None,
    Wind,
    ClosedForm,
}

impl Control {
    pub fn name(self) -> &'static str {
        match self {
            Control::None => "none",
            Control::Wind => "wind",
            Control::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n_cut: usize,
}

fn one() -> f64 {
    1.0
}

/// A drive schedule without its duration; durations come from `timing.taus`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    #[serde(default = "one")]
    pub omega_c: f64,
    pub omega_i: f64,
    pub omega_f: f64,
    pub profile: Profile,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta_cubic: f64,
    #[serde(default)]
    pub lambda_0: f64,
    pub lambda_m: f64,
    #[serde(default)]
    pub phi: f64,
    pub envelope: Envelope,
}

impl DriveSpec {
    pub fn protocol(&self, tau: f64) -> DriveProtocol {
        DriveProtocol {
            omega_c: self.omega_c,
            omega_i: self.omega_i,
            omega_f: self.omega_f,
            profile: self.profile,
            alpha: self.alpha,
            beta_cubic: self.beta_cubic,
            lambda_0: self.lambda_0,
            lambda_m: self.lambda_m,
            phi: self.phi,
            envelope: self.envelope,
            tau,
        }
    }
}

/// A named override of some drive fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub name: String,
    pub omega_c: Option<f64>,
    pub omega_i: Option<f64>,
    pub omega_f: Option<f64>,
    pub profile: Option<Profile>,
    pub alpha: Option<f64>,
    pub beta_cubic: Option<f64>,
    pub lambda_0: Option<f64>,
    pub lambda_m: Option<f64>,
    pub phi: Option<f64>,
    pub envelope: Option<Envelope>,
}

impl Variant {
    pub fn apply(&self, base: &DriveSpec) -> DriveSpec {
        DriveSpec {
            omega_c: self.omega_c.unwrap_or(base.omega_c),
            omega_i: self.omega_i.unwrap_or(base.omega_i),
            omega_f: self.omega_f.unwrap_or(base.omega_f),
            profile: self.profile.unwrap_or(base.profile),
            alpha: self.alpha.unwrap_or(base.alpha),
            beta_cubic: self.beta_cubic.unwrap_or(base.beta_cubic),
            lambda_0: self.lambda_0.unwrap_or(base.lambda_0),
            lambda_m: self.lambda_m.unwrap_or(base.lambda_m),
            phi: self.phi.unwrap_or(base.phi),
            envelope: self.envelope.unwrap_or(base.envelope),
        }
    }

    fn sets(&self, field: &str) -> bool {
        match field {
            "omega_c" => self.omega_c.is_some(),
            "omega_i" => self.omega_i.is_some(),
            "omega_f" => self.omega_f.is_some(),
            "alpha" => self.alpha.is_some(),
            "beta_cubic" => self.beta_cubic.is_some(),
            "lambda_0" => self.lambda_0.is_some(),
            "lambda_m" => self.lambda_m.is_some(),
            "phi" => self.phi.is_some(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// `|q, n>`
    Basis { qubit: Qubit, n: usize },
    /// `(|q_a, n_a> + |q_b, n_b>) / sqrt 2`
    FockSuperposition {
        n_a: usize,
        n_b: usize,
        q_a: Qubit,
        q_b: Qubit,
    },
    GiantCat {
        eta: f64,
        #[serde(default)]
        theta: f64,
    },
}

impl StateSpec {
    pub fn build(&self, space: &CompositeSpace) -> windcore::Result<QuantumState> {
        match *self {
            StateSpec::Basis { qubit, n } => space.ket(qubit, n),
            StateSpec::FockSuperposition { n_a, n_b, q_a, q_b } => {
                models::fock_superposition(n_a, n_b, q_a, q_b, space)
            }
            StateSpec::GiantCat { eta, theta } => models::giant_cat_state(eta, theta, space),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub taus: Vec<f64>,
}

fn one_usize() -> usize {
    1
}

fn leakage_limit() -> f64 {
    LEAKAGE_LIMIT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    /// Fixed step count; absent means `max(2000, ceil(200 tau))`.
    pub steps: Option<usize>,
    /// Keep every n-th trajectory point in exported series.
    #[serde(default = "one_usize")]
    pub decimation: usize,
    #[serde(default = "leakage_limit")]
    pub leakage_limit: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            steps: None,
            decimation: 1,
            leakage_limit: LEAKAGE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observables {
    /// `parity_plus`, `parity_minus` or `excitation_<j>`
    #[serde(default)]
    pub projectors: Vec<String>,
}

/// Parses a projector name into its subspace.
pub fn projector_kind(name: &str) -> Option<SubspaceKind> {
    match name {
        "parity_plus" => Some(SubspaceKind::ParityPlus),
        "parity_minus" => Some(SubspaceKind::ParityMinus),
        _ => name
            .strip_prefix("excitation_")
            .and_then(|j| j.parse().ok())
            .map(SubspaceKind::JcExcitation),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WignerSource {
    /// the state reached at the end of each run
    #[default]
    Final,
    /// the target state itself, no evolution
    Target,
}

fn half_width() -> f64 {
    5.0
}

fn grid_step() -> f64 {
    0.05
}

fn all_labels() -> Vec<PauliLabel> {
    PauliLabel::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerSpec {
    #[serde(default = "half_width")]
    pub half_width: f64,
    #[serde(default = "grid_step")]
    pub step: f64,
    #[serde(default = "all_labels")]
    pub labels: Vec<PauliLabel>,
    #[serde(default)]
    pub source: WignerSource,
}

impl WignerSpec {
    pub fn grid(&self) -> GridSpec {
        GridSpec::square(self.half_width, self.step)
    }
}

fn all_channels() -> Vec<ChannelConfig> {
    ChannelConfig::ALL.to_vec()
}

fn secular_cutoff() -> f64 {
    DEFAULT_SECULAR_CUTOFF
}

fn thermal_floor() -> f64 {
    DEFAULT_THERMAL_FLOOR
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSweep {
    pub gammas: Vec<f64>,
    pub temperatures: Vec<f64>,
    #[serde(default = "all_channels")]
    pub channels: Vec<ChannelConfig>,
    /// `inf` keeps every tensor term
    #[serde(default = "secular_cutoff")]
    pub secular_cutoff: f64,
    #[serde(default = "thermal_floor")]
    pub thermal_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedFormSpec {
    /// Fock level of the `|e,n>` component
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Subdirectory of the output root; defaults to the config name.
    pub directory: Option<String>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            directory: None,
            formats: default_formats(),
        }
    }
}

fn default_controls() -> Vec<Control> {
    vec![Control::None]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub description: String,
    pub model: ModelSpec,
    pub drive: DriveSpec,
    #[serde(default)]
    pub variants: Vec<Variant>,
    #[serde(default = "default_controls")]
    pub controls: Vec<Control>,
    pub initial: StateSpec,
    pub target: StateSpec,
    pub timing: Timing,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub observables: Observables,
    pub wigner: Option<WignerSpec>,
    pub bath: Option<BathSweep>,
    pub closed_form: Option<ClosedFormSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// A drive variant after overrides, with the name used in file names.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedVariant {
    pub name: String,
    pub drive: DriveSpec,
}

impl ExperimentConfig {
    /// Parses and validates a document.
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_of(text, s.start));
            SchemaError {
                field: line.and_then(|l| field_on_line(text, l)),
                line,
                message: e.message().trim().to_string(),
            }
        })?;
        cfg.validate().map_err(|mut e| {
            if let Some(field) = &e.field {
                e.line = locate(text, field);
            }
            e
        })?;
        Ok(cfg)
    }

    /// The drive variants, or a single one named after the base profile.
    pub fn variants(&self) -> Vec<ResolvedVariant> {
        if self.variants.is_empty() {
            vec![ResolvedVariant {
                name: self.drive.profile.name().to_string(),
                drive: self.drive.clone(),
            }]
        } else {
            self.variants
                .iter()
                .map(|v| ResolvedVariant {
                    name: v.name.clone(),
                    drive: v.apply(&self.drive),
                })
                .collect()
        }
    }

    pub fn wants_json(&self) -> bool {
        self.output.formats.contains(&Format::Json)
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        if self.model.n_cut < 2 {
            return Err(field_err("model.n_cut", "must be at least 2"));
        }
        if self.timing.taus.is_empty() {
            return Err(field_err("timing.taus", "at least one duration is required"));
        }
        for (i, &tau) in self.timing.taus.iter().enumerate() {
            if !(tau.is_finite() && tau > 0.0) {
                return Err(field_err(
                    &format!("timing.taus[{i}]"),
                    &format!("duration {tau} must be positive and finite"),
                ));
            }
        }
        self.validate_numerics()?;
        self.validate_drives()?;
        self.validate_controls()?;
        let space = windcore::hilbert::build_composite(self.model.n_cut)
            .map_err(|e| field_err("model.n_cut", &e.to_string()))?;
        for (name, spec) in [("initial", &self.initial), ("target", &self.target)] {
            spec.build(&space)
                .map_err(|e| field_err(&format!("{name}.kind"), &e.to_string()))?;
        }
        for (i, p) in self.observables.projectors.iter().enumerate() {
            let kind = projector_kind(p).ok_or_else(|| {
                field_err(
                    &format!("observables.projectors[{i}]"),
                    &format!("unknown projector `{p}` (parity_plus, parity_minus, excitation_<j>)"),
                )
            })?;
            if let SubspaceKind::JcExcitation(j) = kind {
                if j + 1 >= self.model.n_cut {
                    return Err(field_err(
                        &format!("observables.projectors[{i}]"),
                        &format!("excitation {j} does not fit n_cut = {}", self.model.n_cut),
                    ));
                }
            }
        }
        if !self.output.formats.contains(&Format::Csv) {
            return Err(field_err("output.formats", "csv output cannot be disabled"));
        }
        if let Some(dir) = &self.output.directory {
            if !safe_name(dir) {
                return Err(field_err(
                    "output.directory",
                    "must be a plain directory name (letters, digits, `_`, `-`, `.`)",
                ));
            }
        }
        match self.experiment {
            Experiment::Wigner => self.validate_wigner(),
            Experiment::Robustness => self.validate_bath(),
            _ => Ok(()),
        }
    }

    fn validate_numerics(&self) -> Result<(), SchemaError> {
        let n = &self.numerics;
        if n.steps == Some(0) {
            return Err(field_err("numerics.steps", "must be at least 1"));
        }
        if n.decimation == 0 {
            return Err(field_err("numerics.decimation", "must be at least 1"));
        }
        if !(n.leakage_limit > 0.0 && n.leakage_limit < 1.0) {
            return Err(field_err("numerics.leakage_limit", "must lie in (0, 1)"));
        }
        Ok(())
    }

    fn validate_drives(&self) -> Result<(), SchemaError> {
        let mut names = BTreeSet::new();
        for (i, v) in self.variants.iter().enumerate() {
            let path = format!("variants[{i}].name");
            if !safe_name(&v.name) {
                return Err(field_err(
                    &path,
                    "must be non-empty and use only letters, digits, `_`, `-`, `.`",
                ));
            }
            if !names.insert(v.name.as_str()) {
                return Err(field_err(&path, &format!("duplicate variant `{}`", v.name)));
            }
        }
        let resolved = self.variants();
        for (i, v) in resolved.iter().enumerate() {
            if let Err(e) = v.drive.protocol(self.timing.taus[0]).validate() {
                let msg = e.to_string();
                let what = drive_field_in(&msg);
                let path = match (self.variants.get(i), what) {
                    (Some(var), Some(f)) if var.sets(f) => format!("variants[{i}].{f}"),
                    (_, Some(f)) => format!("drive.{f}"),
                    _ => "drive".to_string(),
                };
                return Err(field_err(&path, &msg));
            }
        }
        Ok(())
    }

    fn validate_controls(&self) -> Result<(), SchemaError> {
        if self.controls.is_empty() {
            return Err(field_err("controls", "at least one control mode is required"));
        }
        let unique: BTreeSet<_> = self.controls.iter().collect();
        if unique.len() != self.controls.len() {
            return Err(field_err("controls", "control modes must not repeat"));
        }
        if self.controls.contains(&Control::ClosedForm) {
            let cf = self
                .closed_form
                .as_ref()
                .ok_or_else(|| field_err("closed_form", "closed_form control needs a [closed_form] table"))?;
            if cf.n >= self.model.n_cut {
                return Err(field_err("closed_form.n", "Fock level must be below n_cut"));
            }
            for v in self.variants() {
                let d = &v.drive;
                let static_qubit = d.profile == Profile::Constant || d.omega_i == d.omega_f;
                if !static_qubit || d.lambda_m != 0.0 || d.lambda_0 != 0.0 {
                    return Err(field_err(
                        "controls",
                        &format!(
                            "closed_form control needs a static, uncoupled drive (variant `{}`)",
                            v.name
                        ),
                    ));
                }
            }
            if self.initial != (StateSpec::Basis { qubit: Qubit::G, n: 0 }) {
                return Err(field_err("initial.kind", "closed_form control starts from |g,0>"));
            }
        }
        Ok(())
    }

    fn validate_wigner(&self) -> Result<(), SchemaError> {
        let w = self
            .wigner
            .as_ref()
            .ok_or_else(|| field_err("wigner", "wigner experiments need a [wigner] table"))?;
        if !(w.half_width.is_finite() && w.half_width > 0.0) {
            return Err(field_err("wigner.half_width", "must be positive"));
        }
        if !(w.step.is_finite() && w.step > 0.0 && w.step <= w.half_width) {
            return Err(field_err("wigner.step", "must be positive and at most half_width"));
        }
        if w.labels.is_empty() {
            return Err(field_err("wigner.labels", "at least one label is required"));
        }
        Ok(())
    }

    fn validate_bath(&self) -> Result<(), SchemaError> {
        let b = self
            .bath
            .as_ref()
            .ok_or_else(|| field_err("bath", "robustness experiments need a [bath] table"))?;
        if b.gammas.is_empty() {
            return Err(field_err("bath.gammas", "at least one rate is required"));
        }
        for (i, g) in b.gammas.iter().enumerate() {
            if !(g.is_finite() && *g >= 0.0) {
                return Err(field_err(
                    &format!("bath.gammas[{i}]"),
                    &format!("rate {g} must be finite and non-negative"),
                ));
            }
        }
        if b.temperatures.is_empty() {
            return Err(field_err("bath.temperatures", "at least one temperature is required"));
        }
        for (i, t) in b.temperatures.iter().enumerate() {
            if !(t.is_finite() && *t >= 0.0) {
                return Err(field_err(
                    &format!("bath.temperatures[{i}]"),
                    &format!("temperature {t} must be finite and non-negative"),
                ));
            }
        }
        if b.channels.is_empty() {
            return Err(field_err("bath.channels", "at least one channel set is required"));
        }
        if b.secular_cutoff.is_nan() || b.secular_cutoff < 0.0 {
            return Err(field_err("bath.secular_cutoff", "must be non-negative (inf allowed)"));
        }
        if !(b.thermal_floor.is_finite() && b.thermal_floor >= 0.0) {
            return Err(field_err("bath.thermal_floor", "must be finite and non-negative"));
        }
        if !self.controls.contains(&Control::Wind) || self.controls.len() != 1 {
            return Err(field_err("controls", "robustness runs use exactly [\"wind\"]"));
        }
        Ok(())
    }
}

fn field_err(field: &str, message: &str) -> SchemaError {
    SchemaError {
        field: Some(field.to_string()),
        line: None,
        message: message.to_string(),
    }
}

fn safe_name(s: &str) -> bool {
    !s.is_empty()
        && s != "."
        && s != ".."
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Picks the drive field named in a core validation message.
fn drive_field_in(msg: &str) -> Option<&'static str> {
    [
        "omega_c",
        "omega_i",
        "omega_f",
        "alpha",
        "beta_cubic",
        "lambda_0",
        "lambda_m",
        "phi",
    ]
    .into_iter()
    .find(|f| msg.starts_with(f))
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Dotted key assigned on 1-based line `line`, qualified by its table.
fn field_on_line(text: &str, line: usize) -> Option<String> {
    let mut table = String::new();
    for raw in text.lines().take(line) {
        let l = raw.trim();
        if l.starts_with('[') {
            table = l.trim_matches(|c| c == '[' || c == ']').trim().to_string();
        }
    }
    let key = text.lines().nth(line - 1)?.split_once('=')?.0.trim();
    if key.is_empty() || key.starts_with('#') {
        return None;
    }
    Some(if table.is_empty() { key.to_string() } else { format!("{table}.{key}") })
}

/// Best-effort line of `field` (`table.key`, `tables[i].key[j]`) in `text`.
pub fn locate(text: &str, field: &str) -> Option<usize> {
    let segments: Vec<(&str, usize)> = field
        .split('.')
        .map(|s| match s.find('[') {
            Some(k) => (&s[..k], s[k + 1..].trim_end_matches(']').parse().unwrap_or(0)),
            None => (s, 0),
        })
        .collect();
    let (key, _) = *segments.last()?;
    let parents = &segments[..segments.len() - 1];
    let table = parents.iter().map(|s| s.0).collect::<Vec<_>>().join(".");
    let occurrence = parents.last().map_or(0, |s| s.1);

    let mut current = String::new();
    let mut index = 0;
    let mut seen = std::collections::HashMap::<String, usize>::new();
    let mut header = None;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let parsed = if let Some(h) = line.strip_prefix("[[") {
            h.split("]]").next().map(|h| (h.trim(), true))
        } else {
            line.strip_prefix('[')
                .and_then(|h| h.split(']').next())
                .map(|h| (h.trim(), false))
        };
        match parsed {
            Some((h, array)) => {
                current = h.to_string();
                index = if array {
                    let c = seen.entry(current.clone()).or_insert(0);
                    *c += 1;
                    *c - 1
                } else {
                    0
                };
                if current == table && index == occurrence {
                    header = Some(no + 1);
                }
                if parents.is_empty() && current == key {
                    header = header.or(Some(no + 1));
                }
            }
            None if current == table && index == occurrence => {
                let is_key = line
                    .strip_prefix(key)
                    .is_some_and(|rest| rest.trim_start().starts_with('='));
                if is_key {
                    return Some(no + 1);
                }
            }
            None => {}
        }
    }
    header
}
