use exceedance_core::harness::{
    explore_mad_ratio, isolated_variance_step_holds, proof_chain_audit, report, tightness_report,
    ExploreSpec, Margin, CATALOG,
};
use exceedance_core::rational::{rat, Rational};
use exceedance_core::{
    run_claim_sweep, BinomialParams, GridSpec, PrecisionPolicy, RunOptions, Subject, Verdict,
};
use num_traits::Zero;

fn sweep(grid: &GridSpec, claim: &str) -> exceedance_core::SweepReport {
    run_claim_sweep(grid, claim, &RunOptions::default()).unwrap()
}

#[test]
fn main_bound_at_two_fair_trials() {
    let grid = GridSpec::new(2, 2, 2).unwrap();
    let report = sweep(&grid, "THM1_RELAXED");
    assert_eq!(report.records.len(), 1);
    let record = &report.records[0];
    assert_eq!(record.verdict, Verdict::Proven);
    assert_eq!(record.exact_value, Some(rat(3, 4)));
    let hi = record.bound_interval.as_ref().unwrap().hi().clone();
    assert!(hi > rat(1123, 10000) && hi < rat(1124, 10000));
}

#[test]
fn strict_quarter_bound_has_no_violations() {
    let grid = GridSpec::new(2, 50, 20).unwrap();
    let report = sweep(&grid, "GM_EQ2");
    assert_eq!(report.violated(), 0);
    assert_eq!(report.inconclusive(), 0);
    assert!(report.summary.count(Verdict::Proven) > 0);
    assert!(report.summary.count(Verdict::DomainSkipped) > 0);
}

#[test]
fn identity_margins_are_exactly_zero() {
    let grid = GridSpec::new(1, 25, 9).unwrap();
    let report = sweep(&grid, "identity_4");
    for record in &report.records {
        assert_eq!(record.verdict, Verdict::Proven);
        assert_eq!(record.margin, Some(Margin::Exact(Rational::zero())));
    }
}

#[test]
fn parallel_and_sequential_sweeps_agree() {
    let grid = GridSpec::new(2, 12, 7)
        .unwrap()
        .with_lambda_grid(vec![rat(1, 2), rat(3, 1), rat(7, 3)])
        .with_stirling_max(12);
    let one = run_claim_sweep(&grid, "ALL", &RunOptions::default()).unwrap();
    let many = run_claim_sweep(
        &grid,
        "ALL",
        &RunOptions {
            jobs: 3,
            bound_scale: None,
        },
    )
    .unwrap();
    assert_eq!(one, many);
    let render = |r| {
        let mut buf = Vec::new();
        report::write_sweep_csv(&mut buf, r).unwrap();
        buf
    };
    assert_eq!(render(&one), render(&many));
}

#[test]
fn every_catalog_claim_produces_records() {
    let grid = GridSpec::new(2, 8, 5)
        .unwrap()
        .with_lambda_grid(vec![rat(1, 2), rat(1, 1), rat(2, 1)])
        .with_stirling_max(5);
    for info in CATALOG {
        let report = sweep(&grid, info.id);
        assert!(!report.records.is_empty(), "{}", info.id);
    }
}

#[test]
fn scaled_bounds_become_violations() {
    let grid = GridSpec::new(2, 10, 6).unwrap();
    let options = RunOptions {
        jobs: 1,
        bound_scale: Some(rat(4, 1)),
    };
    let report = run_claim_sweep(&grid, "GM_EQ2", &options).unwrap();
    assert_eq!(report.violated(), report.summary.count(Verdict::Violated));
    assert!(report.violated() > 0);
}

#[test]
fn chain_records_cover_six_links() {
    let params = BinomialParams::new(11, rat(3, 7)).unwrap();
    let records = proof_chain_audit(&params, &PrecisionPolicy::default()).unwrap();
    let ids: Vec<&str> = records.iter().map(|r| r.claim_id).collect();
    assert_eq!(
        ids,
        [
            "PROOF_CHAIN_A",
            "PROOF_CHAIN_B",
            "PROOF_CHAIN_C",
            "PROOF_CHAIN_D",
            "PROOF_CHAIN_E",
            "PROOF_CHAIN_F"
        ]
    );
    assert!(records.iter().all(|r| r.verdict == Verdict::Proven));
    assert!(records
        .iter()
        .all(|r| r.subject == Subject::Binomial(params.clone())));
    assert!(isolated_variance_step_holds(&params));
}

#[test]
fn tightness_quarter_region_matches_variance_threshold() {
    let grid = GridSpec::new(2, 60, 10).unwrap();
    let report = tightness_report(&grid).unwrap();
    assert!(report.quarter_mismatches.is_empty());
    assert_eq!(report.quarter_inconclusive, 0);
}

#[test]
fn explorer_contains_fair_pair_equality() {
    let report = explore_mad_ratio(
        &ExploreSpec {
            max_len: 3,
            den_cap: 4,
            perturb_steps: 2,
        },
        128,
    )
    .unwrap();
    let fair = report
        .rows
        .iter()
        .find(|r| r.probs == vec![rat(1, 2), rat(1, 2)])
        .unwrap();
    assert_eq!(fair.ratio_sq, rat(1, 1));
    assert!(fair.meets_half_variance);
    let mut buf = Vec::new();
    report::write_explore_csv(&mut buf, &report).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.lines().last().unwrap().starts_with("0.25;0.75,"));
}
