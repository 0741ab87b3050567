use fanbranch::reproduce::{expected, reproduce, NAMES};
use fanbranch::sweep::SweepOptions;

fn run(name: &str) -> fanbranch::reproduce::Reproduction {
    reproduce(name, &SweepOptions { jobs: 1, ..Default::default() }, |_, _| {}).unwrap()
}

#[test]
fn every_name_has_expected_values() {
    for name in NAMES {
        assert!(!expected(name).unwrap().is_empty());
    }
    assert!(expected("nonsense").is_err());
}

#[test]
fn eikelberg_reproduces() {
    let r = run("eikelberg");
    for c in &r.checks {
        assert!(c.passed(), "{}: expected {} found {}", c.key, c.expected, c.actual);
    }
}

#[test]
fn fulton_degree_two_reproduces() {
    let r = run("fulton-deg2");
    for c in &r.checks {
        assert!(c.passed(), "{}: expected {} found {}", c.key, c.expected, c.actual);
    }
}

#[test]
fn p2_tangent_reproduces() {
    let r = run("p2-tangent");
    for c in &r.checks {
        assert!(c.passed(), "{}: expected {} found {}", c.key, c.expected, c.actual);
    }
}

#[test]
fn fulton_rank_three_reports_its_failures() {
    let r = run("fulton-rank3");
    assert!(!r.passed());
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed()).map(|c| c.key.as_str()).collect();
    assert_eq!(failed, vec!["bundle.verifies", "cover.degree"]);
    assert!(r.report.iter().any(|l| l.contains("fails verification")));
}
