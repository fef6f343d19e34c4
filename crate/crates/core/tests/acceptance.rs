//! Acceptance suite: every exit criterion as one test printing a PASS/FAIL
//! line. Run with `cargo test -p pmconv-core --test acceptance -- --nocapture`
//! to see the lines.
//!
//! Criteria 1-2 and 4-6 evaluate a shared 500-trial campaign at the standard
//! caps (|X| <= 5, |Y| <= 4, |Gamma| <= 6, base <= 3); criterion 1 times its
//! own dedicated run; criteria 3 and 6 additionally run directed
//! counterexample searches; criterion 7 cross-checks threshold grids on 100
//! instances; criterion 8 covers the trivial-limit suite.

use std::sync::OnceLock;
use std::time::Instant;

use pmconv_core::bornology::Bornology;
use pmconv_core::convergence::{
    classical_p_conv, graph_ideal_conv, lower_set_ideal_conv, p_ideal_conv, p_ideal_minus_naive,
    p_ideal_minus_supinf, p_ideal_plus_naive, p_ideal_plus_supinf, pointwise_ideal_conv,
    sup_sup_condition, upper_set_ideal_conv, Instance, Side,
};
use pmconv_core::harness::{
    certify, search_counterexample, CampaignConfig, CampaignReport, Caps, IdealStrategy,
    PropertyId, SearchTarget,
};
use pmconv_core::metric::FiniteMetricSpace;
use pmconv_core::order::{tail_ideal, DirectedSet};
use pmconv_core::partial_map::{PartialMap, PartialMapNet};
use pmconv_core::Rational;

const SEED: u64 = 20260811;

fn base_config() -> CampaignConfig {
    CampaignConfig {
        seed: SEED,
        trials: 500,
        caps: Caps { x: 5, y: 4, gamma: 6, base: 3 },
        ideal_strategy: IdealStrategy::RandomNontrivial,
        properties: PropertyId::all(),
        ..CampaignConfig::default()
    }
}

fn shared_report() -> &'static CampaignReport {
    static REPORT: OnceLock<CampaignReport> = OnceLock::new();
    REPORT.get_or_init(|| certify(&base_config()).expect("config is valid"))
}

fn tally(report: &CampaignReport, prop: PropertyId) -> &pmconv_core::harness::PropertyTally {
    report
        .properties
        .get(prop.name())
        .unwrap_or_else(|| panic!("{} missing from the report", prop.name()))
}

fn conclude(number: u32, name: &str, ok: bool, detail: String) {
    println!(
        "ACCEPTANCE {number} [{name}]: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance criterion {number} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_naive_and_supinf_checkers_agree() {
    let cfg = CampaignConfig {
        properties: vec![PropertyId::LowerNaiveSupinf, PropertyId::UpperNaiveSupinf],
        ..base_config()
    };
    let start = Instant::now();
    let report = certify(&cfg).expect("config is valid");
    let elapsed = start.elapsed();
    let lower = tally(&report, PropertyId::LowerNaiveSupinf);
    let upper = tally(&report, PropertyId::UpperNaiveSupinf);
    let ok = lower.fail == 0
        && upper.fail == 0
        && lower.pass + lower.skipped == 500
        && upper.pass + upper.skipped == 500
        && lower.skipped == 0
        && upper.skipped == 0
        && elapsed.as_secs() < 60;
    conclude(
        1,
        "naive and sup-inf verdicts agree",
        ok,
        format!(
            "lower {}/{} upper {}/{} disagreements, {} trials in {:?}",
            lower.fail, 500, upper.fail, 500, cfg.trials, elapsed
        ),
    );
}

#[test]
fn criterion_2_graph_and_map_convergence_agree() {
    let t = tally(shared_report(), PropertyId::GraphMap);
    let ok = t.fail == 0 && t.pass == 500 && t.skipped == 0;
    conclude(
        2,
        "graph convergence matches map convergence",
        ok,
        format!("{} disagreements over {} instances", t.fail, 500),
    );
}

#[test]
fn criterion_3_map_convergence_implies_domain_convergence_and_converse_fails() {
    let t = tally(shared_report(), PropertyId::MapImpliesDomain);
    let search_cfg = CampaignConfig { trials: 1000, ..base_config() };
    let found = search_counterexample(&SearchTarget::MapDomainConverse, &search_cfg)
        .expect("config is valid");
    let verified = found.as_ref().is_some_and(|record| {
        let inst = record.instance.to_instance().expect("counterexample reloads");
        let lower = lower_set_ideal_conv(
            &inst.x,
            &inst.net.domains(),
            inst.limit.domain(),
            &inst.bornology,
            &inst.ideal,
        );
        lower.holds && !p_ideal_minus_supinf(&inst).holds
    });
    let ok = t.fail == 0 && t.pass + t.skipped == 500 && verified;
    conclude(
        3,
        "map convergence implies domain convergence; converse has counterexamples",
        ok,
        format!(
            "{} implication failures; converse counterexample at trial {:?}",
            t.fail,
            found.map(|r| r.trial)
        ),
    );
}

#[test]
fn criterion_4_upper_convergence_with_continuity_implies_pointwise() {
    let report = shared_report();
    let t = tally(report, PropertyId::PointwiseFromUpper);
    let ok = t.fail == 0
        && t.pass + t.fail + t.skipped == 500
        && report.degenerate_traces >= t.skipped;
    conclude(
        4,
        "upper convergence of a continuous limit implies pointwise convergence",
        ok,
        format!(
            "{} failures, {} skipped as degenerate, {} degenerate traces reported",
            t.fail, t.skipped, report.degenerate_traces
        ),
    );
}

#[test]
fn criterion_5_supsup_and_two_sided_equivalences_with_checked_hypotheses() {
    let report = shared_report();
    let supsup = tally(report, PropertyId::SupsupStrongUc);
    let stability = tally(report, PropertyId::TwoSidedStability);
    let ok = supsup.fail == 0
        && stability.fail == 0
        && supsup.hypothesis_checked_true == 500
        && stability.hypothesis_checked_true == 500
        && supsup.pass == 500
        && stability.pass == 500;
    conclude(
        5,
        "sup-sup equivalences hold; hypotheses evaluated true, not assumed",
        ok,
        format!(
            "disagreements {}+{}, hypotheses checked true {}+{} of 500 each",
            supsup.fail, stability.fail,
            supsup.hypothesis_checked_true, stability.hypothesis_checked_true
        ),
    );
}

#[test]
fn criterion_6_classical_and_tail_ideal_checkers_cohere() {
    let t = tally(shared_report(), PropertyId::ClassicalIdeal);
    let search_cfg = CampaignConfig { trials: 1000, ..base_config() };
    let found = search_counterexample(&SearchTarget::ClassicalToIdealNonAdmissible, &search_cfg)
        .expect("config is valid");
    let verified = found.as_ref().is_some_and(|record| {
        let inst = record.instance.to_instance().expect("counterexample reloads");
        inst.directed.is_linear_order()
            && inst.directed.len() >= 2
            && classical_p_conv(&inst).expect("within caps").holds
            && !p_ideal_conv(&inst).holds
    });
    let ok = t.fail == 0 && t.pass == 500 && t.skipped == 0 && verified;
    conclude(
        6,
        "classical checkers agree with tail-ideal checkers; non-admissible ideal breaks the bridge",
        ok,
        format!(
            "{} mismatches of 500; non-admissible counterexample at trial {:?}",
            t.fail,
            found.map(|r| r.trial)
        ),
    );
}

#[test]
fn criterion_7_spectrum_verdicts_match_a_ten_times_finer_grid() {
    let cfg = CampaignConfig {
        trials: 100,
        properties: vec![PropertyId::SpectrumGrid],
        ..base_config()
    };
    let report = certify(&cfg).expect("config is valid");
    let t = tally(&report, PropertyId::SpectrumGrid);
    let ok = t.fail == 0 && t.pass == 100 && t.skipped == 0;
    conclude(
        7,
        "spectrum-based verdicts equal finer-grid verdicts",
        ok,
        format!("{} grid mismatches over 100 instances", t.fail),
    );
}

/// A one-point-everything instance; every implemented mode must come back true.
fn single_point_instance() -> Instance {
    let x = FiniteMetricSpace::try_new(vec!["x".into()], vec![vec![Rational::zero()]]).unwrap();
    let y = FiniteMetricSpace::try_new(vec!["y".into()], vec![vec![Rational::zero()]]).unwrap();
    let directed = DirectedSet::linear(1);
    let ideal = tail_ideal(&directed);
    let limit = PartialMap::from_pairs(1, 1, [(0, 0)]).unwrap();
    Instance::try_new(
        x,
        y,
        directed.clone(),
        ideal,
        Bornology::all_subsets(1),
        PartialMapNet::try_new(1, vec![limit.clone()]).unwrap(),
        limit,
    )
    .unwrap()
}

#[test]
fn criterion_8_trivial_limit_suite() {
    let report = shared_report();
    let trivial = tally(report, PropertyId::TrivialTrue);
    let monotone = tally(report, PropertyId::IdealMonotonicity);

    let single = single_point_instance();
    let domains = single.net.domains();
    let single_all_true = p_ideal_minus_naive(&single).unwrap().holds
        && p_ideal_plus_naive(&single).unwrap().holds
        && p_ideal_minus_supinf(&single).holds
        && p_ideal_plus_supinf(&single).holds
        && p_ideal_conv(&single).holds
        && graph_ideal_conv(&single, Side::Lower).holds
        && graph_ideal_conv(&single, Side::Upper).holds
        && sup_sup_condition(&single).holds
        && pointwise_ideal_conv(&single).holds
        && classical_p_conv(&single).unwrap().holds
        && lower_set_ideal_conv(
            &single.x,
            &domains,
            single.limit.domain(),
            &single.bornology,
            &single.ideal,
        )
        .holds
        && upper_set_ideal_conv(
            &single.x,
            &domains,
            single.limit.domain(),
            &single.bornology,
            &single.ideal,
        )
        .holds;

    let ok = trivial.fail == 0
        && trivial.pass + trivial.skipped == 500
        && monotone.fail == 0
        && monotone.pass == 500
        && single_all_true;
    conclude(
        8,
        "constant nets converge everywhere; single-point spaces are all-true; verdicts are ideal-monotone",
        ok,
        format!(
            "constant-net failures {}, monotonicity failures {}, single-point all-true {}",
            trivial.fail, monotone.fail, single_all_true
        ),
    );
}

/// Certify-example sanity: the campaign must notice a deliberately broken
/// strict comparison.
#[test]
fn harness_detects_a_weakened_comparator() {
    let cfg = CampaignConfig {
        trials: 300,
        properties: vec![PropertyId::MutationSmoke],
        ..base_config()
    };
    let report = certify(&cfg).expect("config is valid");
    let found = report.failures();
    println!(
        "ACCEPTANCE sensitivity [weakened comparator detected]: {} — {found} counterexamples in 300 trials",
        if found > 0 { "PASS" } else { "FAIL" }
    );
    assert!(found > 0, "the harness failed to detect the weakened comparator");
}
