//! Report documents and their JSON and text renderings.

use std::fmt::Write as _;

use braidflow::braids::WindingMatrix;
use braidflow::dynamics::{ComponentGeometry, FixedSetComponent};
use braidflow::obstruction::{verify_certificate, ObstructionCertificate};
use braidflow::scenarios::{
    AuxiliaryPoint, BaselineSuiteReport, LabeledPoint, PersistenceReport, ScenarioConfig, SetValuedEntry,
};
use braidflow::spectrum::{ActionSpectrum, AdmissibilityReport, ClauseStatus};
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

pub const FORMAT_VERSION: u32 = 1;

/// Significant digits kept for every floating-point number in a report.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionOutcome {
    Certificate,
    NoObstructionFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionSection {
    pub outcome: ObstructionOutcome,
    pub certificate: Option<ObstructionCertificate>,
    /// The certificate re-checked against the matrix.
    pub verified: bool,
}

impl ObstructionSection {
    pub fn new(w: &WindingMatrix, certificate: Option<ObstructionCertificate>) -> Self {
        match certificate {
            Some(c) => Self {
                outcome: ObstructionOutcome::Certificate,
                verified: verify_certificate(w, &c.subset),
                certificate: Some(c),
            },
            None => Self { outcome: ObstructionOutcome::NoObstructionFound, certificate: None, verified: false },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub format_version: u32,
    pub command: String,
    pub scenario: String,
    /// Full configuration the numbers were computed from.
    pub config: ScenarioConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked_points: Option<Vec<LabeledPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winding: Option<WindingMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auxiliary_points: Option<Vec<AuxiliaryPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_valued_windings: Option<Vec<SetValuedEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_sets: Option<Vec<FixedSetComponent<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<ActionSpectrum<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<AdmissibilityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub persistence: Option<PersistenceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineSuiteReport>,
}

impl ReportDocument {
    pub fn new(command: &str, config: &ScenarioConfig) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            command: command.into(),
            scenario: config.name.clone(),
            config: config.clone(),
            marked_points: None,
            winding: None,
            obstruction: None,
            auxiliary_points: None,
            set_valued_windings: None,
            fixed_sets: None,
            spectrum: None,
            admissibility: None,
            persistence: None,
            baseline: None,
        }
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits. Idempotent.
pub fn round_significant(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().expect("formatted float parses")
}

/// Shortest form of the rounded value; exponent notation below 1e-4.
pub fn format_number(v: f64) -> String {
    let r = round_significant(v);
    if r != 0.0 && r.abs() < 1e-4 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_significant(n.as_f64().expect("f64 number"));
            *v = Number::from_f64(r).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with rounded floats and a trailing newline. Parsing the output
/// and rendering it again reproduces it byte for byte.
pub fn to_json(doc: &ReportDocument) -> String {
    let mut v = serde_json::to_value(doc).expect("report serializes");
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> Result<ReportDocument, serde_json::Error> {
    serde_json::from_str(s)
}

fn write_matrix(out: &mut String, w: &WindingMatrix) {
    let width = w.labels().iter().map(|l| l.len()).max().unwrap_or(1).max(3);
    let _ = write!(out, "  {:>width$}", "");
    for l in w.labels() {
        let _ = write!(out, " {l:>width$}");
    }
    out.push('\n');
    for (i, l) in w.labels().iter().enumerate() {
        let _ = write!(out, "  {l:>width$}");
        for j in 0..w.size() {
            let cell = if i == j { "·".to_string() } else { w.w(i, j).to_string() };
            let _ = write!(out, " {cell:>width$}");
        }
        out.push('\n');
    }
}

fn describe(c: &FixedSetComponent<f64>) -> String {
    match &c.geometry {
        ComponentGeometry::Point { at, turns } => {
            format!("point ({}, {}) turning {} times", format_number(at.x), format_number(at.y), format_number(*turns))
        }
        ComponentGeometry::Circle { center, radius, level } => format!(
            "circle of radius {} about ({}, {}), level {level}",
            format_number(*radius),
            format_number(center.x),
            format_number(center.y)
        ),
        ComponentGeometry::Region { area, levels, .. } => {
            format!("region of area {} with levels {levels:?}", format_number(*area))
        }
    }
}

/// Human-readable rendering.
pub fn to_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let c = &doc.config;
    let _ = writeln!(out, "braidflow {} report: scenario {}", doc.command, doc.scenario);
    let _ = writeln!(
        out,
        "model {:?}, system {:?}, {} steps, α(0) = {}, α'(0.1) = {}, β(0) = {}, β'(0.1) = {}",
        c.model,
        c.system,
        c.integrator.steps,
        format_number(c.profiles.alpha.center_turns),
        format_number(c.profiles.alpha.inner_slope),
        format_number(c.profiles.beta.center_turns),
        format_number(c.profiles.beta.inner_slope)
    );
    if let Some(points) = &doc.marked_points {
        out.push_str("\nmarked points\n");
        for p in points {
            let _ = writeln!(
                out,
                "  {:<4} ({}, {})  defect {}",
                p.label,
                format_number(p.point.x),
                format_number(p.point.y),
                format_number(p.fixed_defect)
            );
        }
    }
    if let Some(w) = &doc.winding {
        out.push_str("\nwinding matrix\n");
        write_matrix(&mut out, w);
    }
    if let Some(o) = &doc.obstruction {
        out.push_str("\nobstruction\n");
        match &o.certificate {
            Some(cert) => {
                let _ = writeln!(
                    out,
                    "  certificate {{{}}} ({})",
                    cert.subset.join(", "),
                    if o.verified { "verified" } else { "NOT verified" }
                );
                for e in &cert.evidence {
                    let _ = writeln!(
                        out,
                        "    {} is not maximal: w({}, {}) = {}, w({}, {}) = {}",
                        e.strand, e.strand, e.first.0, e.first.1, e.strand, e.second.0, e.second.1
                    );
                }
            }
            None => out.push_str("  no obstruction found\n"),
        }
    }
    if let Some(aux) = &doc.auxiliary_points {
        if !aux.is_empty() {
            out.push_str("\nauxiliary points\n");
            for a in aux {
                let ws: Vec<String> = a
                    .windings
                    .iter()
                    .map(|w| match w.winding {
                        Some(v) => format!("w({}, {}) = {v}", a.label, w.with),
                        None => format!("w({}, {}) undefined", a.label, w.with),
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    "  {} ({}, {}): {}",
                    a.label,
                    format_number(a.point.x),
                    format_number(a.point.y),
                    ws.join(", ")
                );
            }
        }
    }
    if let Some(sv) = &doc.set_valued_windings {
        if !sv.is_empty() {
            out.push_str("\nset-valued windings\n");
            for e in sv {
                let vals: Vec<String> = e.values.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "  w({}, {}) = {{{}}}", e.p, e.q, vals.join(", "));
            }
        }
    }
    if let (Some(components), Some(spectrum)) = (&doc.fixed_sets, &doc.spectrum) {
        out.push_str("\nfixed sets and actions\n");
        for v in &spectrum.values {
            let comp = components.iter().find(|c| c.id == v.component);
            let _ = writeln!(
                out,
                "  #{} {:<40} action {} (spread {}, {} samples)",
                v.component,
                comp.map(describe).unwrap_or_default(),
                format_number(v.value),
                format_number(v.spread),
                v.samples
            );
        }
        match spectrum.epsilon {
            Some(e) => {
                let _ = writeln!(out, "  ε = {}", format_number(e));
            }
            None => out.push_str("  ε undefined (single value)\n"),
        }
    }
    if let Some(adm) = &doc.admissibility {
        out.push_str("\nadmissibility\n");
        for c in &adm.clauses {
            let status = match c.status {
                ClauseStatus::Pass => "pass",
                ClauseStatus::Fail => "FAIL",
                ClauseStatus::NotEvaluated => "not evaluated",
            };
            let _ = writeln!(out, "  {:<40} {status}", c.id);
        }
    }
    if let Some(p) = &doc.persistence {
        out.push_str("\npersistence sweep\n");
        let _ = writeln!(out, "  {:>10} {:>12} {:>12}  status", "delta", "hofer", "drift");
        for r in &p.rows {
            let drift = r.max_drift.map(format_number).unwrap_or_else(|| "-".into());
            let status =
                serde_json::to_value(r.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let _ = write!(
                out,
                "  {:>10} {:>12} {:>12}  {status}",
                format_number(r.delta),
                format_number(r.hofer_bound),
                drift
            );
            if let Some(note) = &r.note {
                let _ = write!(out, " ({note})");
            }
            out.push('\n');
        }
        match p.breaking_amplitude {
            Some(d) => {
                let _ = writeln!(out, "  breaking amplitude {}", format_number(d));
            }
            None => out.push_str("  persisted at every amplitude\n"),
        }
    }
    if let Some(b) = &doc.baseline {
        out.push_str("\nautonomous baseline\n");
        let passed = b.cases.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "  seed {}: {passed}/{} cases passed", b.seed, b.cases.len());
        for c in b.cases.iter().filter(|c| !c.passed) {
            let _ = writeln!(out, "  case {} (seed {}) failed", c.index, c.seed);
        }
    }
    out
}
