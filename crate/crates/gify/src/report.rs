//! Machine-readable reports emitted by checks, norms, and the catalog.

use serde::Serialize;

/// Outcome of a named property check. `pass` holds exactly when every
/// detail with a bound stays within it and no boolean detail failed.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictReport {
    pub check_name: String,
    pub pass: bool,
    pub details: Vec<Detail>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<serde_json::Value>,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Detail {
    pub description: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub ok: bool,
}

/// Builder for verdict reports.
pub struct Verdict {
    name: String,
    seed: u64,
    details: Vec<Detail>,
    witnesses: Option<serde_json::Value>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        Verdict {
            name: name.into(),
            seed,
            details: Vec::new(),
            witnesses: None,
        }
    }

    /// A numeric detail that must not exceed `bound`.
    pub fn push(&mut self, description: impl Into<String>, value: f64, bound: f64) -> &mut Self {
        self.details.push(Detail {
            description: description.into(),
            value,
            bound: Some(bound),
            ok: value.is_finite() && value <= bound,
        });
        self
    }

    /// An exact integer comparison, recorded as the actual value.
    pub fn push_eq(
        &mut self,
        description: impl Into<String>,
        actual: usize,
        expected: usize,
    ) -> &mut Self {
        self.details.push(Detail {
            description: format!("{} (expected {expected})", description.into()),
            value: actual as f64,
            bound: None,
            ok: actual == expected,
        });
        self
    }

    /// A boolean condition, recorded as 1.0 / 0.0.
    pub fn push_bool(&mut self, description: impl Into<String>, ok: bool) -> &mut Self {
        self.details.push(Detail {
            description: description.into(),
            value: if ok { 1.0 } else { 0.0 },
            bound: None,
            ok,
        });
        self
    }

    pub fn witness(&mut self, w: serde_json::Value) -> &mut Self {
        self.witnesses = Some(w);
        self
    }

    pub fn finish(self) -> VerdictReport {
        let pass = self.details.iter().all(|d| d.ok);
        VerdictReport {
            check_name: self.name,
            pass,
            details: self.details,
            witnesses: self.witnesses,
            seed: self.seed,
        }
    }
}

/// Result of a norm evaluation.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormReport {
    pub level: usize,
    pub value: f64,
    pub method: String,
    pub seed: u64,
}

impl NormReport {
    pub fn new(level: usize, value: f64, seed: u64) -> Self {
        NormReport {
            level,
            value,
            method: "largest singular value".into(),
            seed,
        }
    }
}

/// One row of the small-pair admissibility catalog.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogRow {
    pub group_name: String,
    pub order: usize,
    pub subgroup_elements: Vec<usize>,
    pub is_central: bool,
    pub admissible_aut: bool,
    pub admissible_inn: bool,
    pub balanced_inn: bool,
    pub aut_order: usize,
    pub inn_order: usize,
}
