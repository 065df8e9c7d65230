//! Acceptance suite: one test per criterion, each printing a PASS line on
//! success (run with `--nocapture` to see them). Criterion 8 is split: 8a
//! covers the tower/contraction/quiver assertions and passes; 8b compares
//! the computed loop multiset against the recorded reference presentation
//! and fails by design — the computed minimal quiver provably drops the
//! reference's redundant loop (see the assertion message).

use std::collections::BTreeMap;

use canforge::can::contractions_display;
use canforge::can::{classify_base, gabriel_quiver, required_tower_order, rigidity_report};
use canforge::charts::{blowup_charts, singular_points, singular_points_top};
use canforge::factor::{formal_factor_quadratic, verify_factorization, QuadraticSplit};
use canforge::field::Field;
use canforge::flags::{enumerate_flags, flag_of_permutation, Flag};
use canforge::homology::{ext_dim, fl_torsion_dim, FlTorsion, TruncTower, Verdict};
use canforge::job::{resolve, run, JobSpec};
use canforge::mf::{flag_ideal_mf, knorrer_reduce, verify_mf, FactorSystem};

fn q() -> Field {
    Field::rationals()
}

fn sys(factors: &[&str]) -> FactorSystem {
    FactorSystem::parse(&q(), factors).unwrap()
}

fn proper_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        out.push(
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| i + 1)
                .collect(),
        );
    }
    out
}

/// Criterion 1: phi*psi = psi*phi = (uv - f)*Id exactly, for all flag ideals
/// over all test systems with n <= 4 and factor degree <= 3.
#[test]
fn acceptance_01_matrix_factorization_identity() {
    let systems: Vec<Vec<&str>> = vec![
        vec!["x"],
        vec!["x^2+y^3"],
        vec!["x", "y"],
        vec!["x", "x"],
        vec!["x", "x+y^2"],
        vec!["x", "y", "x+y"],
        vec!["x", "y", "y"],
        vec!["x", "y", "x^2+y^3"],
        vec!["x^2+y^2", "x", "y"],
        vec!["x", "y", "y", "x+y"],
        vec!["x", "y", "x+y", "x-y"],
        vec!["x+y^3", "y", "x", "x+y"],
    ];
    let mut checked = 0;
    for factors in &systems {
        let s = sys(factors);
        for subset in proper_subsets(s.n()) {
            let mf = flag_ideal_mf(&s, &subset).unwrap();
            assert!(verify_mf(&mf), "identity failed: {factors:?} I={subset:?}");
            assert!(mf.is_reduced(), "not reduced: {factors:?} I={subset:?}");
            checked += 1;
        }
        // empty and full subsets come back as the distinguished free object
        assert!(flag_ideal_mf(&s, &[]).unwrap().is_free());
        let full: Vec<usize> = (1..=s.n()).collect();
        assert!(flag_ideal_mf(&s, &full).unwrap().is_free());
    }
    println!("acceptance 1: PASS — {checked} flag-ideal factorizations verified exactly");
}

/// Criterion 2: stabilized Ext^1 and Ext^2 verdicts of every flag-ideal pair
/// agree between the fourfold and plane computations at orders 4, 5, 6.
#[test]
fn acceptance_02_knorrer_consistency() {
    let orders = [4u32, 5, 6];
    let systems: Vec<Vec<&str>> = vec![
        vec!["x", "y"],
        vec!["x", "x"],
        vec!["x", "x+y^2"],
        vec!["x", "y", "x+y"],
        vec!["x", "y", "y"],
        vec!["x", "y", "x^2+y^3"],
    ];
    let mut pairs = 0;
    for factors in &systems {
        let s = sys(factors);
        let tower4 = TruncTower::new(&s.hypersurface(), required_tower_order(&s, &orders));
        let tower2 = TruncTower::new(&s.plane_hypersurface(), required_tower_order(&s, &orders));
        let subsets = proper_subsets(s.n());
        for a in &subsets {
            for b in &subsets {
                let a4 = flag_ideal_mf(&s, a).unwrap();
                let b4 = flag_ideal_mf(&s, b).unwrap();
                let a2 = knorrer_reduce(&a4).unwrap();
                let b2 = knorrer_reduce(&b4).unwrap();
                for degree in [1u8, 2] {
                    let e4 = ext_dim(&tower4, &a4, &b4, degree, &orders).unwrap();
                    let e2 = ext_dim(&tower2, &a2, &b2, degree, &orders).unwrap();
                    assert_eq!(
                        e4.verdict, e2.verdict,
                        "{factors:?} I={a:?} J={b:?} deg {degree}: fourfold {:?} vs plane {:?}",
                        e4.dims, e2.dims
                    );
                }
                pairs += 1;
            }
        }
    }
    println!("acceptance 2: PASS — {pairs} flag-ideal pairs agree across the corner reduction");
}

/// Criterion 3: the conifold fixture.
#[test]
fn acceptance_03_conifold_fixture() {
    let s = sys(&["x", "y"]);
    let orders = [4u32, 5, 6];
    let tower = TruncTower::new(&s.hypersurface(), required_tower_order(&s, &orders));
    let t1 = flag_ideal_mf(&s, &[1]).unwrap();
    let e1 = ext_dim(&tower, &t1, &t1, 1, &orders).unwrap();
    assert_eq!(e1.verdict, Verdict::Stabilized(0), "{:?}", e1.dims);
    let e2 = ext_dim(&tower, &t1, &t1, 2, &orders).unwrap();
    assert_eq!(e2.verdict, Verdict::Stabilized(1), "{:?}", e2.dims);
    let flag = Flag::new(2, vec![vec![1]]).unwrap();
    let qv = gabriel_quiver(&s, &flag, &tower, &[4, 5]).unwrap();
    assert!(qv.agreed);
    assert_eq!(qv.arrows, vec![vec![0, 2], vec![2, 0]]);
    assert_eq!(qv.loops, vec![0, 0]);
    println!(
        "acceptance 3: PASS — conifold Ext^1 Stabilized(0), Ext^2 Stabilized(1), quiver [[0,2],[2,0]], no loops"
    );
}

/// Criterion 4: crepant-resolution criterion and singular-point scan across
/// all maximal flags.
#[test]
fn acceptance_04_ct_criterion() {
    // every factor outside m^2: criterion true and the top space is smooth
    let s = sys(&["x", "y", "x+y"]);
    let base = classify_base(&s);
    assert!(base.ct);
    let flags = enumerate_flags(3, true).unwrap();
    assert_eq!(flags.len(), 6);
    for flag in &flags {
        assert!(
            singular_points_top(&s, flag).is_empty(),
            "flag {}",
            flag.describe()
        );
    }
    // one factor inside m^2: criterion false, exactly one singular point of
    // that type on every top space
    let s2 = sys(&["x", "y", "x^2+y^3"]);
    let base2 = classify_base(&s2);
    assert!(!base2.ct);
    for flag in &flags {
        let pts = singular_points_top(&s2, flag);
        assert_eq!(pts.len(), 1, "flag {}", flag.describe());
        assert_eq!(pts[0].local_equation, "x^2 + y^3");
        assert!(pts[0].q_factorial && pts[0].isolated);
    }
    println!("acceptance 4: PASS — criterion and singular scan agree over all 6 maximal flags of both systems");
}

/// Criterion 5: rigidity of flag modules over isolated systems: degree-one
/// self-extensions stabilize at zero for every maximal flag.
#[test]
fn acceptance_05_rigidity_of_flag_modules() {
    let orders = [4u32, 5, 6];
    let systems: Vec<Vec<&str>> = vec![
        vec!["x^2+y^3"],
        vec!["x", "y"],
        vec!["x", "x+y^2"],
        vec!["x", "y", "x+y"],
        vec!["x", "y", "x^2+y^3"],
    ];
    let mut flags_checked = 0;
    for factors in &systems {
        let s = sys(factors);
        assert!(s.is_isolated(), "{factors:?} must be isolated");
        let tower = TruncTower::new(&s.hypersurface(), required_tower_order(&s, &orders));
        for flag in enumerate_flags(s.n(), true).unwrap() {
            let r = rigidity_report(&s, &flag, &tower, &orders).unwrap();
            assert_eq!(
                r.total.verdict,
                Verdict::Stabilized(0),
                "{factors:?} flag {}: dims {:?}",
                flag.describe(),
                r.total.dims
            );
            flags_checked += 1;
        }
    }
    println!("acceptance 5: PASS — {flags_checked} maximal flag modules rigid (Stabilized(0))");
}

/// Criterion 6: non-isolated detection on uv = x^2.
#[test]
fn acceptance_06_non_isolated_detection() {
    let s = sys(&["x", "x"]);
    let orders = [4u32, 5, 6, 7];
    let tower = TruncTower::new(&s.hypersurface(), required_tower_order(&s, &orders));
    let t1 = flag_ideal_mf(&s, &[1]).unwrap();
    let e1 = ext_dim(&tower, &t1, &t1, 1, &orders).unwrap();
    assert_eq!(e1.verdict, Verdict::Growing { slope: 1 }, "{:?}", e1.dims);
    let fl = fl_torsion_dim(&tower, &t1, &t1, 1, &orders).unwrap();
    assert_eq!(fl, FlTorsion::Dim(0));
    println!("acceptance 6: PASS — growth of slope 1 with experimental finite-length torsion 0");
}

/// Criterion 7: the completion-sensitive factorization pipeline.
#[test]
fn acceptance_07_completion_sensitive_pipeline() {
    let text = "x^2 + x^3 + y^2";
    // over the rationals: no split, and the base classifies as factorial
    // with the field caveat attached
    let s = sys(&[text]);
    let base = classify_base(&s);
    assert!(base.q_factorial);
    assert!(base.q_factorial_caveat.contains("field-sensitive"));
    let f_q = canforge::parse::parse_poly(text, &canforge::poly::Vars::xy(), &q()).unwrap();
    match formal_factor_quadratic(&f_q, 8, &q()).unwrap() {
        QuadraticSplit::IrreducibleOverField { .. } => {}
        other => panic!("expected irreducible over Q, got {other:?}"),
    }
    // over the extension: a verified split into two order-one branches
    let qi = Field::extension(
        "i",
        vec![canforge::field::rat_int(1), canforge::field::rat_int(0)],
    )
    .unwrap();
    let f_i = canforge::parse::parse_poly(text, &canforge::poly::Vars::xy(), &qi).unwrap();
    match formal_factor_quadratic(&f_i, 8, &qi).unwrap() {
        QuadraticSplit::Split(fac) => {
            assert_eq!(fac.order, 8);
            assert_eq!(fac.factors.len(), 2);
            assert!(
                verify_factorization(&f_i, &fac),
                "product must agree modulo degree 9"
            );
            for g in &fac.factors {
                assert_eq!(g.ord(), Some(1), "branches must be smooth (outside m^2)");
            }
        }
        other => panic!("expected split over Q(i), got {other:?}"),
    }
    // full pipeline report over the extension
    let spec: JobSpec = toml::from_str(
        r#"
        field = "Q(i): t^2+1"
        factors = ["x^2+x^3+y^2"]
        analyses = ["classify", "factor-formal"]
        orders = [4, 5, 6]
        "#,
    )
    .unwrap();
    let out = run(&resolve(&spec).unwrap()).unwrap();
    let ff = &out.report.formal_factorization.as_ref().unwrap()[0];
    assert_eq!(ff.outcome, "split");
    assert!(ff.verified);
    assert_eq!(ff.factors.len(), 2);
    assert!(ff.note.contains("factor count 2"));
    println!(
        "acceptance 7: PASS — irreducible over Q, verified two-branch split over Q(i) at order 8"
    );
}

fn four_factor_fixture() -> (FactorSystem, Flag) {
    (
        sys(&["x", "y", "y", "x+y"]),
        flag_of_permutation(&[1, 2, 3, 4]).unwrap(),
    )
}

/// Criterion 8 (tower, contractions, cycle arrows, loop location).
#[test]
fn acceptance_08a_four_factor_tower_fixture() {
    let (s, flag) = four_factor_fixture();
    // chart right-hand sides per level
    let tower = blowup_charts(&s, &flag);
    let rhs = |lvl: usize| -> Vec<String> {
        tower.levels[lvl]
            .charts
            .iter()
            .map(|c| c.rhs.clone())
            .collect()
    };
    assert_eq!(rhs(0), vec!["x", "x*y^2 + y^3"]);
    assert_eq!(rhs(1), vec!["x", "y", "x*y + y^2"]);
    assert_eq!(rhs(2), vec!["x", "y", "y", "x + y"]);
    // singular-point verdicts
    let pts = singular_points(&s, &flag);
    let l1_top = &pts[0][1];
    assert!(
        l1_top.singular && !l1_top.isolated,
        "level-1 top chart is a non-isolated point"
    );
    let l2_top = &pts[1][2];
    assert!(
        l2_top.singular && l2_top.isolated && !l2_top.q_factorial,
        "level-2 top chart is isolated but not a single factor"
    );
    assert!(
        pts[2].iter().all(|r| r.smooth),
        "top level is smooth everywhere"
    );
    // contraction pattern
    assert_eq!(
        contractions_display(&s, &flag),
        vec!["flop", "divisorial", "flop"]
    );
    // quiver: one arrow each way between cycle neighbours (8 cycle arrows)
    // and a loop at the vertex between the two associate gaps
    let orders = [4u32, 5];
    let htower = TruncTower::new(&s.hypersurface(), required_tower_order(&s, &orders));
    let qv = gabriel_quiver(&s, &flag, &htower, &orders).unwrap();
    assert!(qv.agreed, "arrow counts must agree at consecutive orders");
    let n = 4;
    let mut cycle_arrows = 0;
    for i in 0..n {
        let fwd = (i + 1) % n;
        let bwd = (i + n - 1) % n;
        assert_eq!(qv.arrows[i][fwd], 1, "cycle arrow {i} -> {fwd}");
        assert_eq!(qv.arrows[i][bwd], 1, "cycle arrow {i} -> {bwd}");
        cycle_arrows += 2;
        // nothing between opposite corners
        let opp = (i + 2) % n;
        assert_eq!(
            qv.arrows[i][opp],
            if i == opp { qv.arrows[i][i] } else { 0 }
        );
    }
    assert_eq!(cycle_arrows, 8);
    assert_eq!(
        qv.loops[2], 1,
        "loop at the vertex between the repeated gaps"
    );
    println!("acceptance 8a: PASS — tower displays, singular verdicts, contractions [flop, divisorial, flop], 8 cycle arrows, loop at T_{{1,2}}");
}

/// Criterion 8, loop-multiset comparison against the recorded reference
/// presentation. The reference records one loop at R and one at T_{1,2}.
/// The computed Gabriel quiver (arrows = rad/rad^2, the contract all loop
/// counts in this crate are reported by) has NO loop at R: the reference's
/// x-loop is the composite of the multiplication map R -> T_{1} (1 maps to
/// the degree-one gap generator) with the inclusion back, hence lies in
/// rad^2; the remaining maximal-ideal classes u, v, x+y are likewise
/// composites around the cycle. The reference drawing is therefore a
/// non-minimal presentation, and this comparison is expected to fail; it is
/// kept as stated so the disagreement stays visible.
#[test]
fn acceptance_08b_loop_multiset_vs_recorded_reference() {
    let (s, flag) = four_factor_fixture();
    let orders = [4u32, 5];
    let htower = TruncTower::new(&s.hypersurface(), required_tower_order(&s, &orders));
    let qv = gabriel_quiver(&s, &flag, &htower, &orders).unwrap();
    let computed: BTreeMap<String, usize> = qv
        .vertices
        .iter()
        .cloned()
        .zip(qv.loops.iter().cloned())
        .filter(|(_, c)| *c > 0)
        .collect();
    let reference: BTreeMap<String, usize> =
        [("R".to_string(), 1usize), ("T_{1,2}".to_string(), 1usize)]
            .into_iter()
            .collect();
    assert_eq!(
        computed, reference,
        "computed minimal loop multiset differs from the recorded reference presentation; \
         the reference loop at R is redundant (a composite through T_{{1}} lands it in rad^2) — \
         triaged in the project notes as a presentation-vs-minimal-quiver mismatch"
    );
    println!("acceptance 8b: PASS — loop multiset matches the recorded reference");
}

/// Criterion 9: flag combinatorics counts against brute-force enumeration.
#[test]
fn acceptance_09_flag_combinatorics() {
    assert_eq!(enumerate_flags(2, true).unwrap().len(), 2);
    assert_eq!(enumerate_flags(2, false).unwrap().len(), 3);
    assert_eq!(enumerate_flags(3, true).unwrap().len(), 6);
    assert_eq!(enumerate_flags(3, false).unwrap().len(), 13);
    // brute force: memoized chain count over subset bitmasks
    fn brute(n: usize) -> usize {
        let full = (1usize << n) - 1;
        fn from(
            s: usize,
            full: usize,
            memo: &mut std::collections::HashMap<usize, usize>,
        ) -> usize {
            if let Some(&v) = memo.get(&s) {
                return v;
            }
            let mut total = 1;
            for t in (s + 1)..full {
                if t & s == s {
                    total += from(t, full, memo);
                }
            }
            memo.insert(s, total);
            total
        }
        let mut memo = std::collections::HashMap::new();
        1 + (1..full).map(|s| from(s, full, &mut memo)).sum::<usize>()
    }
    for n in 2..=4 {
        assert_eq!(enumerate_flags(n, false).unwrap().len(), brute(n));
        assert_eq!(
            enumerate_flags(n, true).unwrap().len(),
            (1..=n).product::<usize>()
        );
    }
    println!("acceptance 9: PASS — flag counts match brute-force chain enumeration");
}

/// Criterion 10: byte-identical reports across worker counts.
#[test]
fn acceptance_10_determinism_across_worker_counts() {
    let spec_text = r#"
        factors = ["x", "y", "x+y"]
        flags = "all-maximal"
        orders = [4, 5]
        analyses = ["classify", "charts", "quiver", "ext"]
    "#;
    let mut outputs = Vec::new();
    for jobs in [1usize, 3] {
        let mut spec: JobSpec = toml::from_str(spec_text).unwrap();
        spec.jobs = Some(jobs);
        let job = resolve(&spec).unwrap();
        let out = run(&job).unwrap();
        outputs.push(out.files);
    }
    assert_eq!(outputs[0].len(), outputs[1].len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in outputs[0].iter().zip(&outputs[1]) {
        assert_eq!(name_a, name_b);
        assert_eq!(
            bytes_a, bytes_b,
            "file {name_a} differs between worker counts"
        );
    }
    println!(
        "acceptance 10: PASS — {} output files byte-identical across worker counts 1 and 3",
        outputs[0].len()
    );
}
