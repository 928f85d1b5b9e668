//! Serializable report records and their human-readable rendering.

use foliate_core::bending::{Bending, BendingResult};
use foliate_core::bounds::{IntegralCheck, MinimizerReport, MinimizerVerdict, Table1Row};
use foliate_core::{InitKind, TubeProfile};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct BranchRecord {
    pub kappa: f64,
    pub mult: usize,
    pub init: &'static str,
}

pub fn branches(profile: &TubeProfile<f64>) -> Vec<BranchRecord> {
    profile
        .branches()
        .iter()
        .map(|b| BranchRecord {
            kappa: b.kappa,
            mult: b.multiplicity,
            init: match b.init {
                InitKind::Normal => "normal",
                InitKind::Tangent => "tangent",
            },
        })
        .collect()
}

/// Record of a single bending evaluation. `value` is the absolute bending
/// when the volume is known in closed form; `error_estimate` refers to
/// `value_per_volume`.
#[derive(Debug, Serialize)]
pub struct BendingRecord {
    pub schema_version: u32,
    pub spec: String,
    pub status: &'static str,
    pub value: Option<f64>,
    pub error_estimate: Option<f64>,
    pub value_per_volume: Option<f64>,
    pub exponent_estimate: Option<f64>,
    pub mu: Option<f64>,
    pub branches: Vec<BranchRecord>,
    pub endpoint: Option<String>,
    pub volume: Option<f64>,
    pub energy_per_volume: Option<f64>,
    pub closed_form: Option<String>,
}

impl BendingRecord {
    pub fn new(spec: String, bending: &Bending<f64>, dim: usize, profile: Option<&TubeProfile<f64>>) -> Self {
        let (status, per_volume, error, exponent, endpoint) = match bending.per_volume {
            BendingResult::Finite { value, error_estimate } => {
                ("finite", Some(value), Some(error_estimate), None, None)
            }
            BendingResult::Divergent { endpoint, exponent_estimate } => {
                ("divergent", None, None, Some(exponent_estimate), Some(endpoint.to_string()))
            }
        };
        Self {
            schema_version: SCHEMA_VERSION,
            spec,
            status,
            value: bending.absolute().and_then(|b| b.value()),
            error_estimate: error,
            value_per_volume: per_volume,
            exponent_estimate: exponent,
            mu: profile.map(|p| p.mu()),
            branches: profile.map(branches).unwrap_or_default(),
            endpoint,
            volume: bending.volume,
            energy_per_volume: per_volume.map(|v| dim as f64 / 2.0 + v),
            closed_form: None,
        }
    }

    pub fn csv_header() -> [&'static str; 13] {
        [
            "schema_version",
            "spec",
            "status",
            "value",
            "error_estimate",
            "value_per_volume",
            "exponent_estimate",
            "mu",
            "branches",
            "endpoint",
            "volume",
            "energy_per_volume",
            "closed_form",
        ]
    }

    pub fn csv_row(&self) -> Vec<String> {
        let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let branches =
            self.branches.iter().map(|b| format!("{}:{}:{}", b.kappa, b.mult, b.init)).collect::<Vec<_>>().join(";");
        vec![
            self.schema_version.to_string(),
            self.spec.clone(),
            self.status.to_string(),
            num(self.value),
            num(self.error_estimate),
            num(self.value_per_volume),
            num(self.exponent_estimate),
            num(self.mu),
            branches,
            self.endpoint.clone().unwrap_or_default(),
            num(self.volume),
            num(self.energy_per_volume),
            self.closed_form.clone().unwrap_or_default(),
        ]
    }

    pub fn human(&self) -> String {
        let mut out = format!("{}\n", self.spec);
        match (self.value_per_volume, self.exponent_estimate) {
            (Some(v), _) => {
                out += &format!("B/Vol = {v:.6}");
                if let Some(cf) = &self.closed_form {
                    out += &format!(" (closed form: {cf})");
                }
                out += "\n";
                if let Some(e) = self.error_estimate {
                    out += &format!("error estimate = {e:.3e}\n");
                }
                if let Some(b) = self.value {
                    out += &format!("B = {b:.6}\n");
                }
                if let Some(e) = self.energy_per_volume {
                    out += &format!("E/Vol = {e:.6}\n");
                }
            }
            (None, Some(s)) => {
                let kind = if (0.9..=1.1).contains(&s) { "log".to_string() } else { format!("power, s={s:.3}") };
                let at = match self.endpoint.as_deref() {
                    Some("lower") => "r=0",
                    Some("both") => "r=0 and r=μ",
                    _ => "r=μ",
                };
                out += &format!("Divergent ({kind}) at {at}\n");
            }
            _ => {}
        }
        if let Some(mu) = self.mu {
            out += &format!("μ = {mu:.9}\n");
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct TorusRecord {
    pub schema_version: u32,
    pub big_r: f64,
    pub small_r: f64,
    pub area_weighted: bool,
    pub value: f64,
    pub error_estimate: f64,
    pub upper_bound: f64,
    pub within_bound: bool,
}

#[derive(Debug, Serialize)]
pub struct Table1Record {
    pub space: String,
    pub focal: String,
    pub closed_form: Option<String>,
    pub closed_form_value: Option<f64>,
    pub status: &'static str,
    pub value_per_volume: Option<f64>,
    pub error_estimate: Option<f64>,
    pub exponent_estimate: Option<f64>,
    pub relative_error: Option<f64>,
    pub reason: Option<String>,
}

impl Table1Record {
    pub fn new(row: &Table1Row<f64>) -> Self {
        let (value, error, exponent) = match row.numeric {
            Some(BendingResult::Finite { value, error_estimate }) => (Some(value), Some(error_estimate), None),
            Some(BendingResult::Divergent { exponent_estimate, .. }) => (None, None, Some(exponent_estimate)),
            None => (None, None, None),
        };
        let reason = match &row.status {
            foliate_core::RowStatus::NotComputable { reason } | foliate_core::RowStatus::Mismatch { reason } => {
                Some(reason.clone())
            }
            _ => None,
        };
        Self {
            space: row.space.to_string(),
            focal: row.focal.to_string(),
            closed_form: row.closed_form.map(|c| c.to_string()),
            closed_form_value: row.closed_form.and_then(|c| c.to_f64()).map(|c| c * row.space.lambda()),
            status: row.status.label(),
            value_per_volume: value,
            error_estimate: error,
            exponent_estimate: exponent,
            relative_error: row.relative_error,
            reason,
        }
    }

    pub fn human(&self) -> String {
        let closed = self.closed_form.as_deref().unwrap_or("-");
        let numeric = match (self.value_per_volume, self.exponent_estimate) {
            (Some(v), _) => format!("{v:.9}"),
            (None, Some(s)) => format!("divergent (s={s:.3})"),
            _ => "-".to_string(),
        };
        format!("{:<6} {:<10} {:<14} {:<22} {}", self.space, self.focal, closed, numeric, self.status)
    }
}

#[derive(Debug, Serialize)]
pub struct Table1Report {
    pub schema_version: u32,
    pub lambda: f64,
    pub rows: Vec<Table1Record>,
}

#[derive(Debug, Serialize)]
pub struct IntegralRecord {
    pub schema_version: u32,
    pub spec: String,
    pub status: &'static str,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub relative_gap: Option<f64>,
    pub reason: Option<String>,
}

impl IntegralRecord {
    pub fn new(spec: String, check: &IntegralCheck<f64>) -> Self {
        match check {
            IntegralCheck::Gap { lhs, rhs, relative_gap } => Self {
                schema_version: SCHEMA_VERSION,
                spec,
                status: "checked",
                lhs: Some(*lhs),
                rhs: Some(*rhs),
                relative_gap: Some(*relative_gap),
                reason: None,
            },
            IntegralCheck::NotApplicable { reason } => Self {
                schema_version: SCHEMA_VERSION,
                spec,
                status: "not_applicable",
                lhs: None,
                rhs: None,
                relative_gap: None,
                reason: Some(reason.clone()),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundRecord {
    pub schema_version: u32,
    pub space: String,
    pub q: usize,
    pub case: String,
    pub coefficient: f64,
    pub s_mix: f64,
    pub bound_per_volume: f64,
    pub einstein_bound_per_volume: Option<f64>,
    pub hypothesis_assumed: bool,
}

#[derive(Debug, Serialize)]
pub struct MinimizerRecord {
    pub schema_version: u32,
    pub space: String,
    pub bound_per_volume: f64,
    pub value_per_volume: Option<f64>,
    pub umbilical: bool,
    pub integrable: bool,
    pub verdict: &'static str,
}

impl MinimizerRecord {
    pub fn new(r: &MinimizerReport<f64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            space: r.space.to_string(),
            bound_per_volume: r.bound,
            value_per_volume: r.bending.value(),
            umbilical: r.umbilical,
            integrable: r.integrable,
            verdict: match r.verdict {
                MinimizerVerdict::Equality => "equality",
                MinimizerVerdict::Strict => "strict",
                MinimizerVerdict::Vacuous => "vacuous",
            },
        }
    }
}
