//! Machine-readable report structures and Graphviz rendering.
//!
//! Reports serialize with serde into JSON with a fixed field order; every
//! map is a BTreeMap, so repeated runs produce byte-identical files
//! regardless of worker count.

use serde::Serialize;

use crate::can::{ClassificationReport, QuiverReport, RigidityReport};
use crate::charts::{ChartPointReport, ChartTower};
use crate::factor::Obstruction;
use crate::mf::IrreducibilityCertificate;

#[derive(Clone, Debug, Serialize)]
pub struct FactorInfo {
    pub index: usize,
    pub text: String,
    pub order: u32,
    pub in_m_squared: bool,
    pub irreducibility: IrreducibilityCertificate,
    pub associate_class: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalFactorReport {
    pub factor_index: usize,
    pub field: String,
    pub order: u32,
    pub outcome: String,
    pub factors: Vec<String>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsupported_y_degree: Option<u32>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagReport {
    pub flag: String,
    pub chain: Vec<Vec<usize>>,
    pub maximal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub charts: Option<ChartTower>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_points: Option<Vec<Vec<ChartPointReport>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contractions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction_rule_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quiver: Option<QuiverReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rigidity: Option<RigidityReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictSummary {
    pub certified: bool,
    pub caveats: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub field: String,
    pub factors: Vec<FactorInfo>,
    pub associate_classes: Vec<Vec<usize>>,
    pub orders: Vec<u32>,
    pub analyses: Vec<String>,
    pub base_classification: ClassificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formal_factorization: Option<Vec<FormalFactorReport>>,
    pub flags: Vec<FlagReport>,
    pub verdict_summary: VerdictSummary,
}

impl Report {
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("report serialization");
        out.push(b'\n');
        out
    }
}

/// Render a quiver as a Graphviz digraph with deterministic node and edge
/// order. Cycle arrows (vertex j to j+1, wrapping at the end) carry the
/// gap-product annotations; one annotated edge per direction.
pub fn render_dot(q: &QuiverReport) -> String {
    let n = q.vertices.len();
    let mut out = String::from("digraph quiver {\n  rankdir=LR;\n");
    for (i, v) in q.vertices.iter().enumerate() {
        out.push_str(&format!("  v{} [label=\"{}\"];\n", i, escape_dot(v)));
    }
    for i in 0..n {
        for j in 0..n {
            let count = q.arrows[i][j];
            for copy in 0..count {
                let annotate = copy == 0 && n > 1 && (j == i + 1 || (i + 1 == n && j == 0));
                if annotate {
                    let label = q.cycle_labels.get(i).cloned().unwrap_or_default();
                    out.push_str(&format!(
                        "  v{} -> v{} [label=\"{}\"];\n",
                        i,
                        j,
                        escape_dot(&label)
                    ));
                } else {
                    out.push_str(&format!("  v{} -> v{};\n", i, j));
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
