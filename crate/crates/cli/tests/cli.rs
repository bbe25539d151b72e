use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exceedance"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn exact_quantities() {
    for (quantity, expected) in [
        ("mad", "1/2 (0.500000000000)"),
        ("exceed", "3/4 (0.750000000000)"),
        ("tce:1", "4/3 (1.33333333333)"),
        ("pmf:1", "1/2 (0.500000000000)"),
        ("tail:2", "1/4 (0.250000000000)"),
    ] {
        let out = run(&["exact", "--n", "2", "--p", "1/2", "--quantity", quantity]);
        assert_eq!(out.status.code(), Some(0), "{quantity}");
        assert_eq!(stdout(&out).trim(), expected, "{quantity}");
    }
}

#[test]
fn decimal_p_is_exact() {
    let a = run(&["exact", "--n", "10", "--p", "0.1", "--quantity", "exceed"]);
    let b = run(&["exact", "--n", "10", "--p", "1/10", "--quantity", "exceed"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn malformed_p_is_a_usage_error() {
    let out = run(&["exact", "--n", "2", "--p", "1e-3", "--quantity", "mad"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--p"));
    let out = run(&["exact", "--n", "2", "--p", "3/2", "--quantity", "mad"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_names_the_flag() {
    let out = run(&["sweep", "--n-minimum", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--n-minimum"));
}

#[test]
fn bound_reports_enclosure_tail_and_verdict() {
    let out = run(&["bound", "--n", "2", "--p", "1/2", "--kind", "theorem1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0.11237243569579452454..0.11237243569579452455"));
    assert!(text.contains("tail 3/4"));
    assert!(text.contains("verdict PROVEN"));
}

#[test]
fn bound_outside_domain_names_constraint() {
    let out = run(&["bound", "--n", "10", "--p", "1/20", "--kind", "gm"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("p >= 1/n"));
}

#[test]
fn poisson_mad_at_one() {
    let out = run(&["poisson", "--lambda", "1", "--quantity", "mad"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("(0.735758882343)"));
}

#[test]
fn orders_hold_without_witness() {
    let out = run(&["orders", "--n", "2", "--p", "1/4", "--q", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("LIKELIHOOD_RATIO,2,0.25,0.5,true,,"));
    assert!(text.contains("HAZARD_RATE,2,0.25,0.5,true,,true"));
}

#[test]
fn sweep_header_and_exit_zero() {
    let out = run(&[
        "sweep",
        "--n-min",
        "2",
        "--n-max",
        "6",
        "--p-den-cap",
        "5",
        "--claim",
        "THM1_RELAXED",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next(),
        Some("claim_id,n,p,exact,bound_lo,bound_hi,verdict,margin,dist")
    );
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.contains(",PROVEN,") || l.contains(",DOMAIN_SKIPPED,")));
}

#[test]
fn sweep_output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("exceedance-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let args = [
        "sweep",
        "--n-min",
        "2",
        "--n-max",
        "5",
        "--p-den-cap",
        "4",
        "--claim",
        "MEDIAN_FLOOR",
    ];
    let direct = run(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let filed = run(&with_file);
    assert_eq!(filed.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_claim_lists_catalog() {
    let out = run(&["sweep", "--claim", "NOT_A_CLAIM"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("THM1_RELAXED"));
}

#[test]
fn poisson_rows_carry_dist_column() {
    let out = run(&["sweep", "--claim", "POISSON_MAD", "--lambda-grid", "1,5/2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",poisson")));
    assert!(text.contains(",2.5,"));
}

#[test]
fn claims_listing_is_complete() {
    let out = run(&["claims"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for id in [
        "VERAAR_EQ1",
        "GM_EQ2",
        "RT_EQ3",
        "THM1_RELAXED",
        "IDENTITY_4",
        "PROOF_CHAIN",
        "STIRLING",
    ] {
        assert!(text.contains(id), "{id}");
    }
}

#[test]
fn explore_ends_at_reported_minimum() {
    let out = run(&["explore-pb", "--max-len", "3", "--den-cap", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text
        .lines()
        .all(|l| l.ends_with("exploratory") || l.starts_with("probs,")));
    assert!(text.contains("0.5;0.5,0.5,0.5,1,1,1.00000000000,true,exploratory"));
    assert!(stderr(&out).contains("exploratory minimum"));
}

#[test]
fn precision_start_above_cap_is_rejected() {
    let out = run(&[
        "bound",
        "--n",
        "2",
        "--p",
        "1/2",
        "--kind",
        "rt",
        "--precision-bits",
        "512",
        "--precision-cap-bits",
        "256",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn inflated_bound_exits_with_violation() {
    let out = run(&[
        "sweep",
        "--n-min",
        "2",
        "--n-max",
        "10",
        "--p-den-cap",
        "6",
        "--claim",
        "GM_EQ2",
        "--scale-bound",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains(",VIOLATED,"));
}

#[test]
fn undecidable_comparison_exits_inconclusive() {
    let out = run(&[
        "sweep",
        "--n-min",
        "2",
        "--n-max",
        "2",
        "--p-den-cap",
        "2",
        "--claim",
        "THM1_RELAXED",
        "--precision-bits",
        "2",
        "--precision-cap-bits",
        "2",
        "--scale-bound",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains(",INCONCLUSIVE,"));
}
