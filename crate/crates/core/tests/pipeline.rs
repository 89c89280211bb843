//! End-to-end runs of scenarios through counting, reconstruction and reports.

use bettibound::ffcount::{CountOptions, Counter, Domain};
use bettibound::polytope::LaurentPolynomial;
use bettibound::verify::{run_scenario, CheckKind, Scenario, ScenarioParams, Verdict};
use bettibound::Error;
use num_bigint::BigInt;

fn curve() -> LaurentPolynomial {
    let terms = [(vec![0, 2], 1), (vec![0, 1], 1), (vec![3, 0], -1)];
    LaurentPolynomial::from_terms(2, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap()
}

fn scenario() -> Scenario {
    let mut sc = Scenario::new("curve", 2, 1, Domain::Affine(2));
    sc.system = vec![curve()];
    sc.params = ScenarioParams { n: Some(2), r: Some(1), d: Some(3), ..Default::default() };
    sc.m_max = 8;
    sc.checks = vec![CheckKind::TotalDegree, CheckKind::LangWeil];
    sc.assumptions.geometrically_irreducible = true;
    sc
}

#[test]
fn report_schema() {
    let ctr = Counter::new(CountOptions::default()).unwrap();
    let report = run_scenario(&scenario(), &ctr).unwrap();
    assert!(!report.has_fail());
    let v = serde_json::to_value(&report).unwrap();
    assert_eq!(v["scenario"]["name"], "curve");
    for c in v["checks"].as_array().unwrap() {
        for key in ["name", "verdict", "lhs", "rhs", "artifacts"] {
            assert!(c.get(key).is_some(), "check lacks {key}: {c}");
        }
    }
    let ci = report.checks.iter().find(|c| c.name == "total_degree<=ci_total").unwrap();
    // complete intersection was not asserted
    assert!(matches!(ci.verdict, Verdict::Skip(_)));
}

#[test]
fn warm_cache_replays_without_budget() {
    let dir = tempfile::tempdir().unwrap();
    let cold = Counter::new(CountOptions::default()).unwrap().with_cache(dir.path()).unwrap();
    let first = run_scenario(&scenario(), &cold).unwrap();
    drop(cold);
    let opts = CountOptions { budget: 0, ..CountOptions::default() };
    let warm = Counter::new(opts).unwrap().with_cache(dir.path()).unwrap();
    let second = run_scenario(&scenario(), &warm).unwrap();
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
}

#[test]
fn budget_refusals_become_skips() {
    let opts = CountOptions { budget: 100, ..CountOptions::default() };
    let ctr = Counter::new(opts).unwrap();
    let report = run_scenario(&scenario(), &ctr).unwrap();
    assert!(report.checks.iter().any(|c| c.verdict.to_string() == "SKIP(budget)"));
    let field = bettibound::ffcount::make_field(2, 1).unwrap();
    let err = ctr.count_points(&[curve()], &Domain::Affine(2), &field, 8).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { .. }));
}
