//! The compound-A family layer: base classification, flag modules, Gabriel
//! quivers of their endomorphism algebras, and rigidity reports.

use serde::Serialize;

use crate::charts::{classify_contractions, singular_points_top, ContractionKind};
use crate::error::Error;
use crate::flags::Flag;
use crate::homology::{
    end_algebra, ext_dim, fl_torsion_dim, radical_quiver, verdict_of_dims, ExtResult, FlTorsion,
    QuiverCounts, TruncTower, Verdict,
};
use crate::mf::{flag_ideal_mf, FactorSystem, MatrixFactorization};

/// The free summand plus the flag ideals of one flag.
pub struct FlagModule {
    pub flag: Flag,
    pub summands: Vec<MatrixFactorization>,
    pub labels: Vec<String>,
}

pub fn build_flag_module(sys: &FactorSystem, flag: &Flag) -> Result<FlagModule, Error> {
    if flag.n != sys.n() {
        return Err(Error::InvalidFlag(format!(
            "flag over {} indices, system has {} factors",
            flag.n,
            sys.n()
        )));
    }
    let mut summands = vec![flag_ideal_mf(sys, &[])?];
    let mut labels = vec!["R".to_string()];
    for subset in &flag.chain {
        let mf = flag_ideal_mf(sys, subset)?;
        labels.push(mf.label.clone().unwrap_or_else(|| "T".into()));
        summands.push(mf);
    }
    Ok(FlagModule {
        flag: flag.clone(),
        summands,
        labels,
    })
}

/// Which rule produced a classification bit.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub criterion: String,
    pub field: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub smooth: bool,
    pub isolated: bool,
    pub q_factorial: bool,
    pub q_factorial_caveat: String,
    pub ct: bool,
    pub ct_note: String,
    pub terminal_note: String,
    pub mm_note: String,
    pub provenance: Vec<Provenance>,
}

/// Order/associate-based classification of the base ring uv = f_1...f_n.
pub fn classify_base(sys: &FactorSystem) -> ClassificationReport {
    let field = sys.field.descriptor();
    let total_ord: u32 = sys.factors.iter().map(|f| f.ord().unwrap_or(0)).sum();
    let smooth = total_ord <= 1;
    let isolated = sys.is_isolated();
    let q_factorial = sys.n() == 1;
    let ct = sys
        .factors
        .iter()
        .all(|f| f.ord().map(|o| o == 1).unwrap_or(false));
    let ct_note = if ct && !isolated {
        "criterion satisfied (every factor outside the square of the maximal ideal); \
         base is non-isolated, the criterion is stated without an isolatedness hypothesis"
            .to_string()
    } else if ct {
        "every factor lies outside the square of the maximal ideal".to_string()
    } else {
        "some factor lies inside the square of the maximal ideal".to_string()
    };
    ClassificationReport {
        smooth,
        isolated,
        q_factorial,
        q_factorial_caveat: format!(
            "single irreducible factor over {field}; formal irreducibility is field-sensitive \
             and can change over an extension or after completion"
        ),
        ct,
        ct_note,
        terminal_note: if isolated {
            "isolated compound-A hypersurface points of this shape are terminal".to_string()
        } else {
            "non-isolated: not terminal".to_string()
        },
        mm_note: if q_factorial {
            "single irreducible factor: the ring is its own maximal modification module".to_string()
        } else {
            "reducible defining polynomial: the ring is not maximal among modifying modules"
                .to_string()
        },
        provenance: vec![
            Provenance {
                criterion: "smooth iff total order of f at most 1".into(),
                field: field.clone(),
            },
            Provenance {
                criterion: "isolated iff factors pairwise non-associate".into(),
                field: field.clone(),
            },
            Provenance {
                criterion: "factoriality iff a single irreducible factor".into(),
                field: field.clone(),
            },
            Provenance {
                criterion: "crepant-resolution criterion: every factor outside m^2".into(),
                field,
            },
        ],
    }
}

/// Gabriel quiver of End(free + flag ideals) with labels and agreement check
/// over two consecutive truncation orders.
#[derive(Clone, Debug, Serialize)]
pub struct QuiverReport {
    pub vertices: Vec<String>,
    pub arrows: Vec<Vec<usize>>,
    pub loops: Vec<usize>,
    pub orders_checked: (u32, u32),
    pub agreed: bool,
    /// gap-product annotations for the cycle arrows vertex j -> j+1
    pub cycle_labels: Vec<String>,
}

pub fn gabriel_quiver(
    sys: &FactorSystem,
    flag: &Flag,
    tower: &TruncTower,
    orders: &[u32],
) -> Result<QuiverReport, Error> {
    let module = build_flag_module(sys, flag)?;
    let hi = *orders.iter().max().ok_or_else(|| {
        Error::OrderMismatch("quiver computation needs at least one order".into())
    })?;
    if hi < 1 {
        return Err(Error::OrderMismatch(
            "quiver agreement needs two consecutive orders; the ladder must reach 1".into(),
        ));
    }
    let lo = hi - 1;
    let counts: Vec<QuiverCounts> = [lo, hi]
        .iter()
        .map(|&n| {
            let mut alg = end_algebra(tower, &module.summands, n)?;
            if !alg.verify_identity() {
                return Err(Error::OrderMismatch(format!(
                    "identity not found in the endomorphism algebra at order {n}"
                )));
            }
            radical_quiver(&mut alg, &module.labels)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let agreed = counts[0].arrows == counts[1].arrows;
    let arrows = counts[1].arrows.clone();
    let loops = (0..arrows.len()).map(|i| arrows[i][i]).collect();
    let mut cycle_labels = Vec::new();
    for (j, gap) in flag.gaps_with_tail().iter().enumerate() {
        let g = sys.product_over(gap);
        let label = if j < flag.len() {
            g.to_string_grlex()
        } else {
            format!("({})/u", g.to_string_grlex())
        };
        cycle_labels.push(label);
    }
    Ok(QuiverReport {
        vertices: module.labels,
        arrows,
        loops,
        orders_checked: (lo, hi),
        agreed,
        cycle_labels,
    })
}

/// Rigidity verdict for the whole flag module: self-extensions in degree one
/// summed over all summand pairs, with per-pair blocks retained.
#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub flag: String,
    pub total: ExtResult,
    pub pairs: Vec<PairExt>,
    pub conclusion: String,
    pub fl_torsion: Option<FlTorsionSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairExt {
    pub source: String,
    pub target: String,
    pub ext1: ExtResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlTorsionSummary {
    pub experimental: bool,
    pub per_pair: Vec<(String, String, FlTorsion)>,
    pub total_known: Option<usize>,
}

pub fn rigidity_report(
    sys: &FactorSystem,
    flag: &Flag,
    tower: &TruncTower,
    orders: &[u32],
) -> Result<RigidityReport, Error> {
    use rayon::prelude::*;
    let module = build_flag_module(sys, flag)?;
    let nv = module.summands.len();
    // summand pairs are independent ladders; evaluate in parallel, merge in
    // index order
    let pair_results: Vec<Result<PairExt, Error>> = (0..nv * nv)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / nv, idx % nv);
            let ext1 = ext_dim(tower, &module.summands[i], &module.summands[j], 1, orders)?;
            Ok(PairExt {
                source: module.labels[i].clone(),
                target: module.labels[j].clone(),
                ext1,
            })
        })
        .collect();
    let mut pairs = Vec::with_capacity(nv * nv);
    for r in pair_results {
        pairs.push(r?);
    }
    let mut totals: std::collections::BTreeMap<u32, usize> = Default::default();
    for pair in &pairs {
        for (&n, &d) in &pair.ext1.dims {
            *totals.entry(n).or_insert(0) += d;
        }
    }
    let verdict = verdict_of_dims(&totals);
    let isolated = sys.is_isolated();
    let conclusion = match (&verdict, isolated) {
        (Verdict::Stabilized(0), true) => {
            "rigid; a rigid maximal Cohen-Macaulay module over this ring is modifying, \
             and the flag module is expected to be maximal modifying"
                .to_string()
        }
        (Verdict::Stabilized(0), false) => {
            "rigid at the computed orders (non-isolated base: verdicts carry the growth caveat)"
                .to_string()
        }
        (Verdict::Stabilized(d), _) => {
            format!("nonzero stabilized self-extensions (dimension {d})")
        }
        (Verdict::Growing { slope }, _) => format!(
            "self-extension dimensions grow with slope {slope}: non-isolated behaviour; \
             the finite-length torsion estimate below is the experimental surrogate"
        ),
        (Verdict::Inconclusive, _) => "inconclusive at the computed orders".to_string(),
    };
    let fl_torsion = if matches!(verdict, Verdict::Stabilized(_)) {
        None
    } else {
        let mut per_pair = Vec::new();
        let mut total = Some(0usize);
        for (i, a) in module.summands.iter().enumerate() {
            for (j, b) in module.summands.iter().enumerate() {
                let fl = fl_torsion_dim(tower, a, b, 1, orders)?;
                match &fl {
                    FlTorsion::Dim(d) => {
                        if let Some(t) = total.as_mut() {
                            *t += d;
                        }
                    }
                    FlTorsion::ExperimentalInconclusive => total = None,
                }
                per_pair.push((module.labels[i].clone(), module.labels[j].clone(), fl));
            }
        }
        Some(FlTorsionSummary {
            experimental: true,
            per_pair,
            total_known: total,
        })
    };
    Ok(RigidityReport {
        flag: flag.describe(),
        total: ExtResult {
            degree: 1,
            dims: totals,
            verdict,
            field: sys.field.descriptor(),
            hypersurface: tower.hyp.h.to_string_grlex(),
        },
        pairs,
        conclusion,
        fl_torsion,
    })
}

/// The highest truncation order the engine may need for a ladder: the top of
/// the ladder plus one (quiver agreement) plus the stabilization depth for
/// the largest flag-ideal entries of the system.
pub fn required_tower_order(sys: &FactorSystem, orders: &[u32]) -> u32 {
    let hi = orders.iter().max().copied().unwrap_or(4);
    let deg_f: u32 = sys
        .factors
        .iter()
        .map(|f| f.total_degree().unwrap_or(1))
        .sum();
    hi + deg_f.max(1) + 2
}

/// Consistency oracle: verdicts for a flag-ideal pair agree between the
/// fourfold model and the plane model obtained by the corner reduction.
pub fn knorrer_consistent(
    sys: &FactorSystem,
    subset_a: &[usize],
    subset_b: &[usize],
    orders: &[u32],
) -> Result<bool, Error> {
    let a4 = flag_ideal_mf(sys, subset_a)?;
    let b4 = flag_ideal_mf(sys, subset_b)?;
    let tower4 = TruncTower::new(&sys.hypersurface(), required_tower_order(sys, orders));
    let a2 = crate::mf::knorrer_reduce(&a4)?;
    let b2 = crate::mf::knorrer_reduce(&b4)?;
    let tower2 = TruncTower::new(&sys.plane_hypersurface(), required_tower_order(sys, orders));
    for degree in [1u8, 2] {
        let e4 = ext_dim(&tower4, &a4, &b4, degree, orders)?;
        let e2 = ext_dim(&tower2, &a2, &b2, degree, orders)?;
        if e4.verdict != e2.verdict {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience wrapper: all contraction kinds plus display strings.
pub fn contractions_display(sys: &FactorSystem, flag: &Flag) -> Vec<String> {
    classify_contractions(sys, flag)
        .into_iter()
        .map(|k| match k {
            ContractionKind::Flop => "flop".to_string(),
            ContractionKind::Divisorial => "divisorial".to_string(),
        })
        .collect()
}

/// The singular chart origins of a maximal flag must coincide with the
/// factors inside m^2; used as a cross-check between two independent code
/// paths (chart gaps vs direct factor scan).
pub fn chart_factor_scan_consistent(sys: &FactorSystem, flag: &Flag) -> bool {
    if !flag.is_maximal() {
        return true;
    }
    let mut via_charts: Vec<String> = singular_points_top(sys, flag)
        .into_iter()
        .map(|r| r.local_equation)
        .collect();
    let mut via_factors: Vec<String> = sys
        .factors
        .iter()
        .filter(|f| f.ord().map(|o| o >= 2).unwrap_or(false))
        .map(|f| f.to_string_grlex())
        .collect();
    via_charts.sort();
    via_factors.sort();
    via_charts == via_factors
}
