//! Job specifications (TOML), orchestration, and the exit-code contract:
//! 0 = all requested verdicts certified, 1 = input error, 2 = at least one
//! growing/inconclusive/experimental verdict in the output.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::can::{
    classify_base, contractions_display, gabriel_quiver, required_tower_order, rigidity_report,
};
use crate::charts::{blowup_charts, singular_points};
use crate::error::Error;
use crate::factor::{formal_factor_quadratic, verify_factorization, QuadraticSplit};
use crate::field::{Field, Rat};
use crate::flags::{enumerate_flags, flag_of_permutation, Flag};
use crate::homology::{TruncTower, Verdict};
use crate::mf::FactorSystem;
use crate::parse::parse_poly;
use crate::poly::Vars;
use crate::report::{
    render_dot, FactorInfo, FlagReport, FormalFactorReport, Report, VerdictSummary,
};

pub const DEFAULT_ORDERS: [u32; 3] = [4, 5, 6];
pub const DEFAULT_MAX_ORDER: u32 = 10;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub field: Option<String>,
    pub factors: Vec<String>,
    #[serde(default)]
    pub flags: Option<FlagSelector>,
    #[serde(default)]
    pub orders: Option<Vec<u32>>,
    #[serde(default)]
    pub analyses: Option<Vec<String>>,
    #[serde(default)]
    pub max_order: Option<u32>,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FlagSelector {
    Named(String),
    Explicit(Vec<Vec<usize>>),
    Permutation { permutation: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Analysis {
    Classify,
    Charts,
    Quiver,
    Ext,
    FactorFormal,
}

impl Analysis {
    fn parse(s: &str) -> Result<BTreeSet<Analysis>, Error> {
        use Analysis::*;
        Ok(match s {
            "classify" => [Classify].into(),
            "charts" => [Charts].into(),
            "quiver" => [Quiver].into(),
            "ext" => [Ext].into(),
            "factor-formal" => [FactorFormal].into(),
            "full-report" => [Classify, Charts, Quiver, Ext, FactorFormal].into(),
            other => {
                return Err(Error::Job(format!(
                    "unknown analysis `{other}` (expected classify|charts|quiver|ext|factor-formal|full-report)"
                )))
            }
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Analysis::Classify => "classify",
            Analysis::Charts => "charts",
            Analysis::Quiver => "quiver",
            Analysis::Ext => "ext",
            Analysis::FactorFormal => "factor-formal",
        }
    }
}

/// Parse a field descriptor: `Q`, or `Q(<symbol>): <monic minimal polynomial in t>`.
pub fn parse_field(descriptor: &str) -> Result<Field, Error> {
    let d = descriptor.trim();
    if d == "Q" {
        return Ok(Field::rationals());
    }
    let Some(rest) = d.strip_prefix("Q(") else {
        return Err(Error::Job(format!(
            "field must be `Q` or `Q(sym): minpoly`, got `{d}`"
        )));
    };
    let Some((sym, min)) = rest.split_once("):") else {
        return Err(Error::Job(format!(
            "field must be `Q(sym): minpoly`, got `{d}`"
        )));
    };
    let sym = sym.trim();
    if sym.is_empty() || !sym.chars().all(|c| c.is_ascii_alphanumeric()) {
        return Err(Error::Job(format!("bad extension symbol `{sym}`")));
    }
    let tvars = Vars::new(&["t"]);
    let p = parse_poly(min.trim(), &tvars, &Field::rationals())?;
    let deg = p.total_degree().unwrap_or(0) as usize;
    if deg == 0 {
        return Err(Error::Job("minimal polynomial must be nonconstant".into()));
    }
    let mut coeffs: Vec<Rat> = vec![Rat::from(num_bigint::BigInt::from(0)); deg + 1];
    for (m, c) in &p.terms {
        let cr = Field::rationals().as_rat(c).ok_or_else(|| {
            Error::Job("minimal polynomial must have rational coefficients".into())
        })?;
        coeffs[m.0[0] as usize] = cr;
    }
    let lead = coeffs.pop().unwrap();
    if lead != Rat::from(num_bigint::BigInt::from(1)) {
        return Err(Error::Job("minimal polynomial must be monic".into()));
    }
    Field::extension(sym, coeffs)
}

/// A fully resolved job ready to run.
pub struct ResolvedJob {
    pub field: Field,
    pub sys: FactorSystem,
    pub flags: Vec<Flag>,
    pub orders: Vec<u32>,
    pub analyses: BTreeSet<Analysis>,
    pub out_dir: PathBuf,
    pub jobs: Option<usize>,
}

pub fn resolve(spec: &JobSpec) -> Result<ResolvedJob, Error> {
    if spec.factors.is_empty() {
        return Err(Error::Job("factor list must be nonempty".into()));
    }
    let field = parse_field(spec.field.as_deref().unwrap_or("Q"))?;
    let texts: Vec<&str> = spec.factors.iter().map(|s| s.as_str()).collect();
    let sys = FactorSystem::parse(&field, &texts)?;
    let n = sys.n();
    let flags = match &spec.flags {
        None => enumerate_flags(n, true)?,
        Some(FlagSelector::Named(name)) => match name.as_str() {
            "all-maximal" => enumerate_flags(n, true)?,
            "all" => enumerate_flags(n, false)?,
            other => {
                return Err(Error::Job(format!(
                    "unknown flag selector `{other}` (expected all-maximal|all, an explicit chain, or a permutation)"
                )))
            }
        },
        Some(FlagSelector::Explicit(chain)) => vec![Flag::new(n, chain.clone())?],
        Some(FlagSelector::Permutation { permutation }) => {
            if permutation.len() != n {
                return Err(Error::Job(format!(
                    "permutation length {} must equal the factor count {n}",
                    permutation.len()
                )));
            }
            vec![flag_of_permutation(permutation)?]
        }
    };
    let orders = spec
        .orders
        .clone()
        .unwrap_or_else(|| DEFAULT_ORDERS.to_vec());
    let max_order = spec.max_order.unwrap_or(DEFAULT_MAX_ORDER);
    if orders.is_empty() {
        return Err(Error::Job("order ladder must be nonempty".into()));
    }
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Job(
            "order ladder must be strictly increasing".into(),
        ));
    }
    if orders.iter().any(|&o| o < 1 || o > max_order) {
        return Err(Error::Job(format!(
            "orders must lie in 1..={max_order} (configure max_order to raise the cap)"
        )));
    }
    let mut analyses = BTreeSet::new();
    match &spec.analyses {
        None => {
            analyses = Analysis::parse("full-report")?;
        }
        Some(list) => {
            for a in list {
                analyses.extend(Analysis::parse(a)?);
            }
        }
    }
    Ok(ResolvedJob {
        field,
        sys,
        flags,
        orders,
        analyses,
        out_dir: PathBuf::from(spec.out.clone().unwrap_or_else(|| ".".into())),
        jobs: spec.jobs,
    })
}

/// Outcome classes mapped to process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// every verdict certified
    Certified,
    /// at least one growing/inconclusive/experimental verdict
    Partial,
}

impl RunStatus {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunStatus::Certified => 0,
            RunStatus::Partial => 2,
        }
    }
}

pub struct RunOutput {
    pub report: Report,
    pub status: RunStatus,
    /// (file name, contents) pairs: report.json plus any DOT files.
    pub files: Vec<(String, Vec<u8>)>,
}

/// Execute a resolved job. Flag-level analyses fan out across the rayon
/// pool; assembly is ordered by flag index so output is deterministic.
pub fn run(job: &ResolvedJob) -> Result<RunOutput, Error> {
    match job.jobs {
        Some(k) if k > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Job(format!("worker pool: {e}")))?;
            pool.install(|| run_inner(job))
        }
        _ => run_inner(job),
    }
}

fn run_inner(job: &ResolvedJob) -> Result<RunOutput, Error> {
    use rayon::prelude::*;
    let sys = &job.sys;
    let mut caveats: Vec<String> = Vec::new();
    let mut certified = true;

    let base = classify_base(sys);
    let needs_tower =
        job.analyses.contains(&Analysis::Quiver) || job.analyses.contains(&Analysis::Ext);
    let tower = if needs_tower {
        Some(TruncTower::new(
            &sys.hypersurface(),
            required_tower_order(sys, &job.orders),
        ))
    } else {
        None
    };

    let flag_results: Vec<Result<FlagReport, Error>> = job
        .flags
        .par_iter()
        .map(|flag| build_flag_report(job, flag, tower.as_ref()))
        .collect();
    let mut flags = Vec::with_capacity(flag_results.len());
    for r in flag_results {
        flags.push(r?);
    }

    for fr in &flags {
        if let Some(qv) = &fr.quiver {
            if !qv.agreed {
                certified = false;
                caveats.push(format!(
                    "quiver arrow counts disagree between orders {:?} for flag {}",
                    qv.orders_checked, fr.flag
                ));
            }
        }
        if let Some(rig) = &fr.rigidity {
            match &rig.total.verdict {
                Verdict::Stabilized(_) => {}
                Verdict::Growing { slope } => {
                    certified = false;
                    caveats.push(format!(
                        "self-extension dimensions grow (slope {slope}) for flag {}",
                        fr.flag
                    ));
                }
                Verdict::Inconclusive => {
                    certified = false;
                    caveats.push(format!(
                        "inconclusive self-extension ladder for flag {}",
                        fr.flag
                    ));
                }
            }
            if let Some(fl) = &rig.fl_torsion {
                caveats.push(format!(
                    "finite-length torsion estimate for flag {} is experimental",
                    fr.flag
                ));
                if fl.total_known.is_none() {
                    certified = false;
                }
            }
        }
    }

    let formal = if job.analyses.contains(&Analysis::FactorFormal) {
        let mut out = Vec::new();
        for (i, f) in sys.factors.iter().enumerate() {
            let order = job.orders.iter().max().copied().unwrap_or(8).max(8);
            if f.ord() == Some(1) {
                out.push(FormalFactorReport {
                    factor_index: i + 1,
                    field: sys.field.descriptor(),
                    order,
                    outcome: "irreducible-over-field".into(),
                    factors: vec![],
                    verified: true,
                    obstruction: None,
                    unsupported_y_degree: None,
                    note: "order-one series are prime over every coefficient field".into(),
                });
                continue;
            }
            let split = match formal_factor_quadratic(f, order, &sys.field) {
                Ok(s) => s,
                Err(Error::SqrtUndecided(which)) => {
                    certified = false;
                    caveats.push(format!(
                        "factor {}: squareness of the discriminant constant is undecided over {which}",
                        i + 1
                    ));
                    out.push(FormalFactorReport {
                        factor_index: i + 1,
                        field: sys.field.descriptor(),
                        order,
                        outcome: "undecided-over-extension".into(),
                        factors: vec![],
                        verified: true,
                        obstruction: None,
                        unsupported_y_degree: None,
                        note: "square-root search over this extension is limited; no verdict"
                            .into(),
                    });
                    continue;
                }
                Err(e) => return Err(e),
            };
            let rep = match split {
                QuadraticSplit::Split(fac) => {
                    let verified = verify_factorization(f, &fac);
                    if !verified {
                        certified = false;
                    }
                    let mut note = format!(
                        "two formal factors certified modulo degrees above {order}; \
                         completion splits into (order {}, order {}) branches; \
                         isomorphism type inferred from the factor orders",
                        fac.factors[0].ord().unwrap_or(0),
                        fac.factors[1].ord().unwrap_or(0)
                    );
                    if sys.n() == 1 {
                        note.push_str(
                            "; the base is factorial over the configured field, but the \
                             completion has factor count 2 and is not complete-locally factorial",
                        );
                    }
                    FormalFactorReport {
                        factor_index: i + 1,
                        field: sys.field.descriptor(),
                        order,
                        outcome: "split".into(),
                        factors: fac.factors.iter().map(|g| g.to_string_grlex()).collect(),
                        verified,
                        obstruction: None,
                        unsupported_y_degree: None,
                        note,
                    }
                }
                QuadraticSplit::IrreducibleOverField { obstruction } => FormalFactorReport {
                    factor_index: i + 1,
                    field: sys.field.descriptor(),
                    order,
                    outcome: "irreducible-over-field".into(),
                    factors: vec![],
                    verified: true,
                    obstruction: Some(obstruction),
                    unsupported_y_degree: None,
                    note: "no quadratic formal split exists over the configured field".into(),
                },
                QuadraticSplit::Unsupported { y_degree } => {
                    certified = false;
                    caveats.push(format!(
                        "factor {} has regularity degree {y_degree}; only the quadratic split is implemented",
                        i + 1
                    ));
                    FormalFactorReport {
                        factor_index: i + 1,
                        field: sys.field.descriptor(),
                        order,
                        outcome: "unsupported".into(),
                        factors: vec![],
                        verified: true,
                        obstruction: None,
                        unsupported_y_degree: Some(y_degree),
                        note: "regularity degree is not 2; no verdict attempted".into(),
                    }
                }
            };
            out.push(rep);
        }
        Some(out)
    } else {
        None
    };

    let factors_info: Vec<FactorInfo> = sys
        .factors
        .iter()
        .enumerate()
        .map(|(i, f)| FactorInfo {
            index: i + 1,
            text: f.to_string_grlex(),
            order: f.ord().unwrap_or(0),
            in_m_squared: f.ord().map(|o| o >= 2).unwrap_or(false),
            irreducibility: sys.certificates[i],
            associate_class: sys.associate_classes[i] + 1,
        })
        .collect();

    let report = Report {
        tool: "canforge".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        field: sys.field.descriptor(),
        factors: factors_info,
        associate_classes: sys.classes_grouped(),
        orders: job.orders.clone(),
        analyses: job.analyses.iter().map(|a| a.name().to_string()).collect(),
        base_classification: base,
        formal_factorization: formal,
        flags,
        verdict_summary: VerdictSummary { certified, caveats },
    };

    let mut files = vec![("report.json".to_string(), report.to_json_bytes())];
    for (k, fr) in report.flags.iter().enumerate() {
        if let Some(qv) = &fr.quiver {
            files.push((format!("quiver_flag{k}.dot"), render_dot(qv).into_bytes()));
        }
    }
    let status = if certified {
        RunStatus::Certified
    } else {
        RunStatus::Partial
    };
    Ok(RunOutput {
        report,
        status,
        files,
    })
}

fn build_flag_report(
    job: &ResolvedJob,
    flag: &Flag,
    tower: Option<&TruncTower>,
) -> Result<FlagReport, Error> {
    let sys = &job.sys;
    let mut fr = FlagReport {
        flag: flag.describe(),
        chain: flag.chain.clone(),
        maximal: flag.is_maximal(),
        charts: None,
        singular_points: None,
        contractions: None,
        contraction_rule_note: None,
        quiver: None,
        rigidity: None,
    };
    if job.analyses.contains(&Analysis::Charts) && !flag.is_empty() {
        fr.charts = Some(blowup_charts(sys, flag));
        fr.singular_points = Some(singular_points(sys, flag));
        fr.contractions = Some(contractions_display(sys, flag));
        fr.contraction_rule_note = Some(
            "divisorial iff the level's gap class shares an associate factor with the remaining \
             product; extrapolated from the worked four-factor tower"
                .into(),
        );
    }
    if let Some(tower) = tower {
        if job.analyses.contains(&Analysis::Quiver) {
            fr.quiver = Some(gabriel_quiver(sys, flag, tower, &job.orders)?);
        }
        if job.analyses.contains(&Analysis::Ext) {
            fr.rigidity = Some(rigidity_report(sys, flag, tower, &job.orders)?);
        }
    }
    Ok(fr)
}

/// Load a TOML job file.
pub fn load_job_file(path: &Path) -> Result<JobSpec, Error> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Job(format!("{}: {e}", path.display())))
}

/// Run a job file end to end: write report.json (and DOT files) under the
/// output directory, returning the status for the exit code.
pub fn cmd_run(
    spec: &JobSpec,
    out_override: Option<&Path>,
    jobs_override: Option<usize>,
    max_order_override: Option<u32>,
) -> Result<(RunOutput, PathBuf), Error> {
    let mut spec = spec.clone();
    if let Some(m) = max_order_override {
        spec.max_order = Some(m);
    }
    if let Some(j) = jobs_override {
        spec.jobs = Some(j);
    }
    let mut job = resolve(&spec)?;
    if let Some(dir) = out_override {
        job.out_dir = dir.to_path_buf();
    }
    let out = run(&job)?;
    std::fs::create_dir_all(&job.out_dir)?;
    for (name, bytes) in &out.files {
        std::fs::write(job.out_dir.join(name), bytes)?;
    }
    Ok((out, job.out_dir.clone()))
}
