//! Symbolic blowup chart towers attached to flags.
//!
//! For a flag (I_1, ..., I_m) over uv = f_1...f_n, level j of the tower is
//! covered by j+1 affine charts with equations
//!
//!   u*V_1 = f_{I_1},   U_1*V_2 = f_{I_2}/f_{I_1},  ...,  U_j*v = f/f_{I_j}.
//!
//! The right-hand sides are products over "gap" index sets, computed on the
//! factor multisets exactly — never by polynomial division. Each chart is
//! classified at its origin: the completion there has type uv = g for the
//! gap product g, singular iff g lies in the square of the maximal ideal.

use serde::Serialize;

use crate::flags::Flag;
use crate::mf::FactorSystem;
use crate::poly::Poly;

/// One affine chart of one tower level.
#[derive(Clone, Debug, Serialize)]
pub struct Chart {
    pub level: usize,
    pub index: usize,
    /// display names of the chart coordinates
    pub coordinates: Vec<String>,
    /// left-hand product of the chart equation, e.g. ("u", "V1")
    pub lhs: (String, String),
    /// right-hand side as polynomial text
    pub rhs: String,
    /// 1-based factor indices whose product is the right-hand side
    pub gap_factors: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartLevel {
    pub level: usize,
    pub charts: Vec<Chart>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartTower {
    pub levels: Vec<ChartLevel>,
}

/// Verdicts about the origin of one chart.
#[derive(Clone, Debug, Serialize)]
pub struct ChartPointReport {
    pub level: usize,
    pub chart_index: usize,
    /// completion type at the origin: uv = local_equation
    pub local_equation: String,
    pub gap_factors: Vec<usize>,
    pub smooth: bool,
    pub singular: bool,
    /// no repeated associate class among the gap factors
    pub isolated: bool,
    /// exactly one gap factor (claim relative to the configured field)
    pub q_factorial: bool,
    pub q_factorial_caveat: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ContractionKind {
    Flop,
    Divisorial,
}

/// The gap subsets of a flag, level by level: gap(j) = I_j \ I_{j-1}.
fn level_gaps(flag: &Flag) -> Vec<Vec<usize>> {
    let mut gaps = flag.gaps_with_tail();
    gaps.pop(); // drop the tail complement; levels are 1..=m
    gaps
}

/// Build the chart tower for a nonempty flag.
pub fn blowup_charts(sys: &FactorSystem, flag: &Flag) -> ChartTower {
    assert_eq!(flag.n, sys.n(), "flag size must match the factor count");
    let mut levels = Vec::with_capacity(flag.len());
    for j in 1..=flag.len() {
        let mut charts = Vec::with_capacity(j + 1);
        for c in 0..=j {
            let (lhs, coords, gap): ((String, String), Vec<String>, Vec<usize>) = if c == 0 {
                (
                    ("u".into(), "V1".into()),
                    vec!["u".into(), "x".into(), "y".into(), "V1".into()],
                    flag.chain[0].clone(),
                )
            } else if c < j {
                let prev = &flag.chain[c - 1];
                let cur = &flag.chain[c];
                let gap: Vec<usize> = cur.iter().filter(|i| !prev.contains(i)).cloned().collect();
                (
                    (format!("U{c}"), format!("V{}", c + 1)),
                    vec![
                        format!("U{c}"),
                        format!("V{}", c + 1),
                        "x".into(),
                        "y".into(),
                    ],
                    gap,
                )
            } else {
                let top = &flag.chain[j - 1];
                let gap: Vec<usize> = (1..=sys.n()).filter(|i| !top.contains(i)).collect();
                (
                    (format!("U{j}"), "v".into()),
                    vec![format!("U{j}"), "v".into(), "x".into(), "y".into()],
                    gap,
                )
            };
            let rhs_poly = sys.product_over(&gap);
            charts.push(Chart {
                level: j,
                index: c,
                coordinates: coords,
                lhs,
                rhs: rhs_poly.to_string_grlex(),
                gap_factors: gap,
            });
        }
        levels.push(ChartLevel { level: j, charts });
    }
    ChartTower { levels }
}

/// Classify every chart origin of every level.
pub fn singular_points(sys: &FactorSystem, flag: &Flag) -> Vec<Vec<ChartPointReport>> {
    let tower = blowup_charts(sys, flag);
    let field_name = sys.field.descriptor();
    tower
        .levels
        .iter()
        .map(|level| {
            level
                .charts
                .iter()
                .map(|chart| {
                    let g: Poly = sys.product_over(&chart.gap_factors);
                    let ord = g.ord().unwrap_or(0);
                    let classes: Vec<usize> = chart
                        .gap_factors
                        .iter()
                        .map(|&i| sys.associate_classes[i - 1])
                        .collect();
                    let mut dedup = classes.clone();
                    dedup.sort_unstable();
                    dedup.dedup();
                    ChartPointReport {
                        level: chart.level,
                        chart_index: chart.index,
                        local_equation: chart.rhs.clone(),
                        gap_factors: chart.gap_factors.clone(),
                        smooth: ord <= 1,
                        singular: ord >= 2,
                        isolated: dedup.len() == classes.len(),
                        q_factorial: chart.gap_factors.len() == 1,
                        q_factorial_caveat: format!(
                            "single-irreducible-factor criterion over {field_name}; completion-sensitive"
                        ),
                    }
                })
                .collect()
        })
        .collect()
}

/// Only the singular chart origins, flattened over all tower levels
/// (intermediate levels are the partially-blown-up spaces and may carry
/// singular points that disappear higher in the tower).
pub fn singular_points_flat(sys: &FactorSystem, flag: &Flag) -> Vec<ChartPointReport> {
    singular_points(sys, flag)
        .into_iter()
        .flatten()
        .filter(|r| r.singular)
        .collect()
}

/// Singular chart origins of the top space of the tower only.
pub fn singular_points_top(sys: &FactorSystem, flag: &Flag) -> Vec<ChartPointReport> {
    singular_points(sys, flag)
        .pop()
        .unwrap_or_default()
        .into_iter()
        .filter(|r| r.singular)
        .collect()
}

/// Per-level contraction type. Level j contracts a divisor exactly when the
/// gap class f_{I_j}/f_{I_{j-1}} shares an associate factor with the
/// remaining product f/f_{I_j}; otherwise a single curve flops. This rule is
/// an extrapolation from the worked four-factor tower and is recorded as
/// such in every report that uses it.
pub fn classify_contractions(sys: &FactorSystem, flag: &Flag) -> Vec<ContractionKind> {
    let gaps = level_gaps(flag);
    let mut out = Vec::with_capacity(gaps.len());
    for (j, gap) in gaps.iter().enumerate() {
        let in_flag = &flag.chain[j];
        let remainder: Vec<usize> = (1..=sys.n()).filter(|i| !in_flag.contains(i)).collect();
        let gap_classes: Vec<usize> = gap.iter().map(|&i| sys.associate_classes[i - 1]).collect();
        let shares = remainder
            .iter()
            .any(|&i| gap_classes.contains(&sys.associate_classes[i - 1]));
        out.push(if shares {
            ContractionKind::Divisorial
        } else {
            ContractionKind::Flop
        });
    }
    out
}
