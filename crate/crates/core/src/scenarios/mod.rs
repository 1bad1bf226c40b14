//! Named, reproducible experiment setups and the pipeline that runs them.

mod baseline;
mod sweep;
mod tuning;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braids::{
    set_valued_winding, winding_matrix, winding_number, BraidError, BraidOptions, Strand, StrandSet, SurfaceModel,
    WindingMatrix,
};
use crate::dynamics::{
    classify_fixed_sets, integrate_flow, time_one_map, ClassifyOptions, Domain, DynamicsError, FixedSetComponent,
    HamiltonianSystem, TimeEnvelope, DEFAULT_STEPS,
};
use crate::geometry::Point2;
use crate::obstruction::{find_obstruction, ObstructionCertificate, ObstructionError};
use crate::profiles::{
    hamiltonian_from_profile, validate_profile, AlphaParams, BetaParams, ConstraintReport, ProfileError, ProfileSpec,
    RadialProfile, ValidationOptions,
};
use crate::spectrum::{
    action_spectrum, admissibility_check, ActionSpectrum, AdmissibilityOptions, AdmissibilityReport, SpectrumError,
    SpectrumOptions,
};

pub use baseline::{
    autonomous_baseline_suite, random_autonomous_system, BaselineCase, BaselineSuiteReport, Cluster, RandomSystem,
};
pub use sweep::{perturbation_sweep, PersistenceReport, PersistenceRow, PersistenceStatus, WindingChange};
pub use tuning::{expected_actions, tune_profiles, TuningCandidate, TuningGrid, TuningReport};

/// Center of the disk Δ carrying the second rotation.
pub const DELTA_CENTER: Point2<f64> = Point2 { x: 0.5, y: 0.0 };
pub const DELTA_RADIUS: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Build,
    Integrate,
    Winding,
    Obstruction,
    Classify,
    Spectrum,
    SetValued,
    Sweep,
    Baseline,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Build => "build",
            Stage::Integrate => "integrate",
            Stage::Winding => "winding",
            Stage::Obstruction => "obstruction",
            Stage::Classify => "classify",
            Stage::Spectrum => "spectrum",
            Stage::SetValued => "set-valued winding",
            Stage::Sweep => "sweep",
            Stage::Baseline => "baseline",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StageError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("profile constraints violated: {}", .0.join(", "))]
    ProfileConstraints(Vec<String>),
    #[error("marked point {label:?} is not fixed by the time-one map (defect {defect:e})")]
    NotFixed { label: String, defect: f64 },
    #[error("{stage} stage failed: {source}")]
    Stage { stage: Stage, source: StageError },
}

impl ScenarioError {
    /// Input problems, as opposed to numerical failures.
    pub fn is_validation(&self) -> bool {
        !matches!(self, ScenarioError::Stage { .. })
    }

    fn at(stage: Stage) -> impl FnOnce(StageError) -> ScenarioError {
        move |source| ScenarioError::Stage { stage, source }
    }
}

fn stage<E: Into<StageError>>(stage: Stage) -> impl FnOnce(E) -> ScenarioError {
    move |e| ScenarioError::at(stage)(e.into())
}

/// Which generator the scenario integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    /// α about the origin, then β about the center of Δ.
    Paper,
    /// α about the origin only.
    SingleRotation,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileParams {
    #[serde(default)]
    pub alpha: AlphaParams,
    #[serde(default)]
    pub beta: BetaParams,
}

/// Where a marked point sits, in disk coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Placement {
    Coordinates {
        x: f64,
        y: f64,
    },
    /// On the circle about the center of Δ where β takes this integer value.
    BetaLevel {
        beta_level: i64,
        /// Polar angle about the center of Δ, radians.
        #[serde(default)]
        angle: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub label: String,
    #[serde(flatten)]
    pub placement: Placement,
}

impl MarkedPoint {
    pub fn at(label: &str, x: f64, y: f64) -> Self {
        Self { label: label.into(), placement: Placement::Coordinates { x, y } }
    }

    pub fn on_beta_level(label: &str, beta_level: i64, angle: f64) -> Self {
        Self { label: label.into(), placement: Placement::BetaLevel { beta_level, angle } }
    }

    pub fn resolve(&self, beta: &RadialProfile<f64>) -> Result<Point2<f64>, ScenarioError> {
        match self.placement {
            Placement::Coordinates { x, y } => Ok(Point2::new(x, y)),
            Placement::BetaLevel { beta_level, angle } => {
                let r = beta.level_radius(beta_level).ok_or_else(|| {
                    ScenarioError::Invalid(format!(
                        "point {:?}: β never takes the value {beta_level} on an isolated circle",
                        self.label
                    ))
                })?;
                Ok(DELTA_CENTER + Point2::new(angle.cos(), angle.sin()) * r)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSettings {
    pub steps: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self { steps: DEFAULT_STEPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub fixed_point: f64,
    pub collision: f64,
    pub closure: f64,
    pub resolution: f64,
    pub action_spread: f64,
    pub deck_window: i64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fixed_point: 1e-8,
            collision: 1e-4,
            closure: 1e-6,
            resolution: 0.05,
            action_spread: 1e-6,
            deck_window: 3,
        }
    }
}

impl Tolerances {
    pub fn braid_options(&self) -> BraidOptions {
        BraidOptions { collision_tol: self.collision, closure_tol: self.closure, resolution_tol: self.resolution }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifySettings {
    pub resolution: usize,
    pub region_representatives: usize,
    pub circle_representatives: usize,
}

impl Default for ClassifySettings {
    fn default() -> Self {
        let d = ClassifyOptions::default();
        Self {
            resolution: d.resolution,
            region_representatives: d.region_representatives,
            circle_representatives: d.circle_representatives,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSettings {
    pub deltas: Vec<f64>,
    pub bump_center: [f64; 2],
    pub bump_radius: f64,
    pub envelope: TimeEnvelope,
    /// Minimum amplitude substeps between consecutive sweep amplitudes.
    pub substeps: usize,
    /// Largest amplitude increment of a single continuation solve.
    pub max_step: f64,
    /// Continued points farther than this from their start count as lost.
    pub drift_limit: f64,
    /// Iteration cap of each continuation solve. Convergence is slow near
    /// the degenerate circles.
    pub newton_iterations: usize,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            deltas: vec![0.0, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0],
            bump_center: [0.5, 0.0],
            bump_radius: 0.25,
            envelope: TimeEnvelope::Constant,
            substeps: 16,
            max_step: 2e-3,
            drift_limit: 0.05,
            newton_iterations: 400,
        }
    }
}

/// Chart placement of the unit disk inside the annulus or torus model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Embedding {
    pub scale: f64,
    pub offset: [f64; 2],
}

impl Default for Embedding {
    fn default() -> Self {
        Self { scale: 0.45, offset: [0.5, 0.5] }
    }
}

impl Embedding {
    pub fn apply(&self, p: Point2<f64>) -> Point2<f64> {
        Point2::new(self.offset[0], self.offset[1]) + p * self.scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default = "default_model")]
    pub model: SurfaceModel,
    pub system: SystemKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub profiles: ProfileParams,
    pub points: Vec<MarkedPoint>,
    /// Reported alongside the braid but not part of it.
    #[serde(default)]
    pub auxiliary_points: Vec<MarkedPoint>,
    #[serde(default)]
    pub integrator: IntegratorSettings,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub classify: ClassifySettings,
    #[serde(default)]
    pub sweep: SweepSettings,
    #[serde(default)]
    pub embedding: Embedding,
}

fn default_model() -> SurfaceModel {
    SurfaceModel::Disk
}

/// The four marked points of the non-autonomous braid. The moon sits on the
/// circle about the center of Δ where β = 2, which yields `w(m, p₂) = 3`.
pub fn paper_marked_points() -> Vec<MarkedPoint> {
    vec![
        MarkedPoint::at("s", 0.0, 0.0),
        MarkedPoint::at("p1", 0.1, 0.0),
        MarkedPoint::at("p2", 0.5, 0.0),
        MarkedPoint::on_beta_level("m", 2, 0.0),
    ]
}

/// Alternative moon positions reported next to the braid: the point on the
/// β = 3 circle, and the printed position.
pub fn moon_alternatives() -> Vec<MarkedPoint> {
    vec![MarkedPoint::at("m-beta3", 0.6, 0.0), MarkedPoint::at("m-printed", 0.0, 0.6)]
}

impl ScenarioConfig {
    pub fn paper_disk(profiles: ProfileParams) -> Self {
        Self {
            name: "paper-disk".into(),
            model: SurfaceModel::Disk,
            system: SystemKind::Paper,
            seed: 0,
            profiles,
            points: paper_marked_points(),
            auxiliary_points: moon_alternatives(),
            integrator: IntegratorSettings::default(),
            tolerances: Tolerances::default(),
            classify: ClassifySettings::default(),
            sweep: SweepSettings::default(),
            embedding: Embedding::default(),
        }
    }

    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            system: SystemKind::Identity,
            auxiliary_points: Vec::new(),
            ..Self::paper_disk(ProfileParams::default())
        }
    }

    pub fn single_rotation() -> Self {
        Self {
            name: "single-rotation".into(),
            system: SystemKind::SingleRotation,
            points: vec![
                MarkedPoint::at("s", 0.0, 0.0),
                MarkedPoint::at("p1", 0.1, 0.0),
                MarkedPoint::at("p2", 0.5, 0.0),
                MarkedPoint::at("q", 0.0, 0.6),
            ],
            auxiliary_points: Vec::new(),
            ..Self::paper_disk(ProfileParams::default())
        }
    }

    pub fn paper_annulus() -> Self {
        Self {
            name: "paper-annulus".into(),
            model: SurfaceModel::Annulus,
            ..Self::paper_disk(ProfileParams::default())
        }
    }

    pub fn paper_torus() -> Self {
        Self { name: "paper-torus".into(), model: SurfaceModel::Torus, ..Self::paper_disk(ProfileParams::default()) }
    }

    /// Built-in scenario by name.
    pub fn named(name: &str) -> Option<Self> {
        Some(match name {
            "paper-disk" => Self::paper_disk(ProfileParams::default()),
            "identity" => Self::identity(),
            "single-rotation" => Self::single_rotation(),
            "paper-annulus" => Self::paper_annulus(),
            "paper-torus" => Self::paper_torus(),
            _ => return None,
        })
    }

    pub const NAMES: [&'static str; 5] = ["paper-disk", "identity", "single-rotation", "paper-annulus", "paper-torus"];
}

/// A scenario's generator, marked points and domain in plane coordinates.
#[derive(Debug, Clone)]
pub struct BuiltScenario {
    pub system: HamiltonianSystem<f64>,
    pub labels: Vec<String>,
    pub points: Vec<Point2<f64>>,
    pub auxiliary: Vec<(String, Point2<f64>)>,
    pub domain: Domain<f64>,
    pub profile_reports: Vec<(ProfileSpec, ConstraintReport)>,
}

/// Validates the configuration and assembles the generator.
pub fn build_scenario(config: &ScenarioConfig) -> Result<BuiltScenario, ScenarioError> {
    if config.points.is_empty() {
        return Err(ScenarioError::Invalid("at least one marked point is required".into()));
    }
    if config.integrator.steps < crate::dynamics::MIN_STEPS {
        return Err(ScenarioError::Invalid(format!(
            "integrator.steps must be at least {}, got {}",
            crate::dynamics::MIN_STEPS,
            config.integrator.steps
        )));
    }
    let e = config.embedding;
    if config.model != SurfaceModel::Disk
        && !(e.scale > 0.0 && e.offset[1] - e.scale > 0.0 && e.offset[1] + e.scale < 1.0 && e.scale < 0.5)
    {
        return Err(ScenarioError::Invalid("embedded disk does not fit inside the unit chart".into()));
    }
    let alpha = RadialProfile::alpha(&config.profiles.alpha);
    let beta = RadialProfile::beta(&config.profiles.beta);
    let vopts = ValidationOptions::default();
    let mut profile_reports = Vec::new();
    let uses = match config.system {
        SystemKind::Paper => vec![ProfileSpec::Alpha, ProfileSpec::Beta],
        SystemKind::SingleRotation => vec![ProfileSpec::Alpha],
        SystemKind::Identity => vec![],
    };
    for spec in uses {
        let p = if spec == ProfileSpec::Alpha { &alpha } else { &beta };
        profile_reports.push((spec, validate_profile(p, spec, &vopts)));
    }
    let violated: Vec<String> =
        profile_reports.iter().flat_map(|(_, r)| r.violations().map(|c| c.id.clone())).collect();
    if !violated.is_empty() {
        return Err(ScenarioError::ProfileConstraints(violated));
    }

    let h = || -> Result<HamiltonianSystem<f64>, ScenarioError> {
        Ok(HamiltonianSystem::radial(hamiltonian_from_profile(&alpha, Point2::origin()).map_err(stage(Stage::Build))?))
    };
    let disk_system = match config.system {
        SystemKind::Identity => HamiltonianSystem::Zero,
        SystemKind::SingleRotation => h()?,
        SystemKind::Paper => {
            let h_delta =
                HamiltonianSystem::radial(hamiltonian_from_profile(&beta, DELTA_CENTER).map_err(stage(Stage::Build))?);
            HamiltonianSystem::concat_equal(vec![h()?, h_delta]).map_err(stage(Stage::Build))?
        }
    };

    let mut labels = Vec::new();
    let mut points = Vec::new();
    for mp in &config.points {
        if labels.contains(&mp.label) {
            return Err(ScenarioError::Invalid(format!("duplicate marked point label {:?}", mp.label)));
        }
        labels.push(mp.label.clone());
        points.push(mp.resolve(&beta)?);
    }
    for i in 0..points.len() {
        for j in 0..i {
            if points[i].distance(points[j]) <= config.tolerances.collision {
                return Err(ScenarioError::Invalid(format!(
                    "marked points {:?} and {:?} coincide",
                    labels[j], labels[i]
                )));
            }
        }
    }
    let auxiliary = config
        .auxiliary_points
        .iter()
        .map(|mp| Ok((mp.label.clone(), mp.resolve(&beta)?)))
        .collect::<Result<Vec<_>, ScenarioError>>()?;

    let (system, points, auxiliary, domain) = if config.model == SurfaceModel::Disk {
        (disk_system, points, auxiliary, Domain::unit_disk())
    } else {
        let offset = Point2::new(e.offset[0], e.offset[1]);
        (
            disk_system.transformed(e.scale, offset).map_err(stage(Stage::Build))?,
            points.into_iter().map(|p| e.apply(p)).collect(),
            auxiliary.into_iter().map(|(l, p)| (l, e.apply(p))).collect(),
            Domain::Disk { center: offset, radius: e.scale },
        )
    };
    Ok(BuiltScenario { system, labels, points, auxiliary, domain, profile_reports })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    pub point: Point2<f64>,
    /// Distance moved by the time-one map.
    pub fixed_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairWinding {
    pub with: String,
    pub winding: Option<i64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryPoint {
    pub label: String,
    pub point: Point2<f64>,
    pub fixed_defect: f64,
    pub windings: Vec<PairWinding>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetValuedEntry {
    pub p: String,
    pub q: String,
    pub values: Vec<i64>,
}

/// Wall-clock durations of the pipeline stages, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Timings {
    pub integrate: f64,
    pub winding: f64,
    pub obstruction: f64,
    pub classify: f64,
    pub spectrum: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub marked: Vec<LabeledPoint>,
    /// Trajectories in plane coordinates.
    pub strands: StrandSet<f64>,
    pub winding: WindingMatrix,
    pub obstruction: Option<ObstructionCertificate>,
    pub components: Vec<FixedSetComponent<f64>>,
    pub spectrum: ActionSpectrum<f64>,
    pub admissibility: AdmissibilityReport,
    pub auxiliary: Vec<AuxiliaryPoint>,
    /// Winding sets over deck translations; empty in the disk model.
    pub set_valued: Vec<SetValuedEntry>,
    pub profile_reports: Vec<(ProfileSpec, ConstraintReport)>,
    pub timings: Timings,
}

/// Trajectories and winding matrix only.
pub fn scenario_braid(
    config: &ScenarioConfig,
) -> Result<(BuiltScenario, Vec<LabeledPoint>, StrandSet<f64>, WindingMatrix), ScenarioError> {
    let built = build_scenario(config)?;
    let steps = config.integrator.steps;
    let tol = &config.tolerances;
    let trajectories = integrate_flow(&built.system, &built.points, steps).map_err(stage(Stage::Integrate))?;
    let mut marked = Vec::new();
    for (label, tr) in built.labels.iter().zip(&trajectories) {
        let defect = tr.closure_defect;
        if !(defect < tol.fixed_point) {
            return Err(ScenarioError::NotFixed { label: label.clone(), defect });
        }
        marked.push(LabeledPoint { label: label.clone(), point: tr.start(), fixed_defect: defect });
    }
    let opts = tol.braid_options();
    let strands =
        StrandSet::from_trajectories(built.labels.clone(), trajectories, &opts).map_err(stage(Stage::Winding))?;
    let w = winding_matrix(&strands, &opts).map_err(stage(Stage::Winding))?;
    Ok((built, marked, strands, w))
}

/// Runs integrate, winding, obstruction, classification, spectrum and
/// admissibility. Deterministic for a fixed configuration.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult, ScenarioError> {
    let t_start = Instant::now();
    let mut timings = Timings::default();
    let (built, marked, strands, winding) = scenario_braid(config)?;
    timings.integrate = t_start.elapsed().as_secs_f64();
    timings.winding = timings.integrate;

    let t = Instant::now();
    let obstruction = find_obstruction(&winding).map_err(stage(Stage::Obstruction))?;
    timings.obstruction = t.elapsed().as_secs_f64();

    let steps = config.integrator.steps;
    let tol = &config.tolerances;
    let t = Instant::now();
    let copts = ClassifyOptions {
        resolution: config.classify.resolution,
        region_representatives: config.classify.region_representatives,
        circle_representatives: config.classify.circle_representatives,
        fixed_tol: tol.fixed_point,
        steps,
        ..ClassifyOptions::default()
    };
    let components = classify_fixed_sets(&built.system, &built.domain, &copts).map_err(stage(Stage::Classify))?;
    timings.classify = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let sopts = SpectrumOptions { steps, closure_tol: tol.closure, spread_tol: tol.action_spread };
    let spectrum = action_spectrum(&components, &built.system, &sopts).map_err(stage(Stage::Spectrum))?;
    let marked_pts: Vec<(String, Point2<f64>)> = marked.iter().map(|m| (m.label.clone(), m.point)).collect();
    let admissibility = admissibility_check(
        &components,
        &spectrum,
        &marked_pts,
        &AdmissibilityOptions { value_tol: tol.action_spread, ..AdmissibilityOptions::default() },
    );
    timings.spectrum = t.elapsed().as_secs_f64();

    let auxiliary = auxiliary_windings(&built, &strands, config)?;
    let set_valued = set_valued_report(&strands, config)?;
    timings.total = t_start.elapsed().as_secs_f64();

    Ok(ScenarioResult {
        config: config.clone(),
        marked,
        strands,
        winding,
        obstruction,
        components,
        spectrum,
        admissibility,
        auxiliary,
        set_valued,
        profile_reports: built.profile_reports,
        timings,
    })
}

/// Windings of the auxiliary points against every marked strand. Pair
/// failures are recorded per entry instead of aborting.
pub fn auxiliary_windings(
    built: &BuiltScenario,
    strands: &StrandSet<f64>,
    config: &ScenarioConfig,
) -> Result<Vec<AuxiliaryPoint>, ScenarioError> {
    if built.auxiliary.is_empty() {
        return Ok(Vec::new());
    }
    let pts: Vec<Point2<f64>> = built.auxiliary.iter().map(|a| a.1).collect();
    let trajectories = integrate_flow(&built.system, &pts, config.integrator.steps).map_err(stage(Stage::Integrate))?;
    let opts = config.tolerances.braid_options();
    Ok(built
        .auxiliary
        .iter()
        .zip(trajectories)
        .map(|((label, point), tr)| {
            let fixed_defect = tr.closure_defect;
            let aux = Strand { label: label.clone(), trajectory: tr };
            let windings = strands
                .strands()
                .iter()
                .map(|s| match winding_number(&aux, s, &opts) {
                    Ok(w) => PairWinding { with: s.label.clone(), winding: Some(w), error: None },
                    Err(e) => PairWinding { with: s.label.clone(), winding: None, error: Some(e.to_string()) },
                })
                .collect();
            AuxiliaryPoint { label: label.clone(), point: *point, fixed_defect, windings }
        })
        .collect())
}

/// Wraps plane trajectories into the surface chart of the model.
pub fn chart_strand(model: SurfaceModel, strand: &Strand<f64>) -> Strand<f64> {
    let wrap = |p: Point2<f64>| match model {
        SurfaceModel::Disk => p,
        SurfaceModel::Annulus => Point2::new(p.x.rem_euclid(1.0), p.y),
        SurfaceModel::Torus => Point2::new(p.x.rem_euclid(1.0), p.y.rem_euclid(1.0)),
    };
    let mut s = strand.clone();
    s.trajectory.positions = s.trajectory.positions.iter().map(|&p| wrap(p)).collect();
    let n = s.trajectory.positions.len();
    s.trajectory.closure_defect = s.trajectory.positions[0].distance(s.trajectory.positions[n - 1]);
    s
}

/// Set-valued windings of all pairs over the configured deck window.
pub fn set_valued_with_window(
    strands: &StrandSet<f64>,
    model: SurfaceModel,
    window: i64,
    opts: &BraidOptions,
) -> Result<Vec<SetValuedEntry>, ScenarioError> {
    let charted: Vec<Strand<f64>> = strands.strands().iter().map(|s| chart_strand(model, s)).collect();
    let mut out = Vec::new();
    for i in 0..charted.len() {
        for j in 0..i {
            let values =
                set_valued_winding(model, &charted[i], &charted[j], window, opts).map_err(stage(Stage::SetValued))?;
            out.push(SetValuedEntry {
                p: charted[i].label.clone(),
                q: charted[j].label.clone(),
                values: values.into_iter().rev().collect(),
            });
        }
    }
    Ok(out)
}

fn set_valued_report(strands: &StrandSet<f64>, config: &ScenarioConfig) -> Result<Vec<SetValuedEntry>, ScenarioError> {
    if config.model == SurfaceModel::Disk {
        return Ok(Vec::new());
    }
    set_valued_with_window(strands, config.model, config.tolerances.deck_window, &config.tolerances.braid_options())
}

/// Two-rotation disk scenario with the given profiles.
pub fn build_paper_disk_scenario(profiles: ProfileParams) -> Result<ScenarioConfig, ScenarioError> {
    let config = ScenarioConfig::paper_disk(profiles);
    build_scenario(&config)?;
    Ok(config)
}

/// The two-rotation scenario embedded in the annulus chart, with set-valued windings.
pub fn annulus_embedding_scenario(profiles: ProfileParams) -> Result<ScenarioResult, ScenarioError> {
    let config = ScenarioConfig { profiles, ..ScenarioConfig::paper_annulus() };
    run_scenario(&config)
}

/// Checks that every marked point is fixed; returns the defects.
pub fn fixed_defects(built: &BuiltScenario, steps: usize) -> Result<Vec<f64>, ScenarioError> {
    built
        .points
        .iter()
        .map(|&p| time_one_map(&built.system, p, steps).map(|q| q.distance(p)))
        .collect::<Result<_, _>>()
        .map_err(stage(Stage::Integrate))
}
