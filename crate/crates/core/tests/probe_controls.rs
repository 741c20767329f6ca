//! Positive and negative controls for the bounded probe.

use std::time::Instant;

use periph_core::census::bundled_census;
use periph_core::diagram::dt_to_diagram;
use periph_core::group::Word;
use periph_core::malnormality::{probe_malnormality, probe_with_candidates, ProbeBounds, Survivor};
use periph_core::presentation::{wirtinger, PeripheralPair, PresentedGroup};

fn census_group(name: &str) -> (PresentedGroup, PeripheralPair) {
    let census = bundled_census().unwrap();
    wirtinger(&dt_to_diagram(&census.lookup(name).unwrap().dt).unwrap())
}

/// The fibre slope of the trefoil: `p₀ = p₁ = μ^{±6} λ^{±1}`.
fn is_fibre_pattern(s: &Survivor) -> bool {
    s.p0 == s.p1 && s.p0.0.abs() == 6 && s.p0.1.abs() == 1
}

#[test]
fn hyperbolic_controls_leave_no_survivors() {
    for name in ["4_1", "6_2"] {
        let (g, p) = census_group(name);
        let start = Instant::now();
        let report = probe_malnormality(&g, &p, &ProbeBounds::default()).unwrap();
        assert_eq!(report.survivor_total, 0, "{name}: {:?}", report.survivors);
        assert!(!report.no_refutation_power);
        assert!(report.quotients_used > 0);
        assert!(
            start.elapsed().as_secs() < 120,
            "{name} took {:?}",
            start.elapsed()
        );
    }
}

#[test]
fn trefoil_rediscovers_the_fibre() {
    let (g, p) = census_group("3_1");
    let report = probe_malnormality(&g, &p, &ProbeBounds::default()).unwrap();
    assert!(report.survivor_total > 0);
    assert!(
        report.survivors.iter().any(is_fibre_pattern),
        "{:?}",
        report.survivors
    );
    // the listed survivors are short-lex sorted
    let keys: Vec<_> = report
        .survivors
        .iter()
        .map(|s| (s.g.length(), s.g.clone()))
        .collect();
    assert!(keys.windows(2).all(|w| w[0].0 <= w[1].0));
}

#[test]
fn injected_genuine_witness_survives() {
    // in the Wirtinger trefoil the fibre μ^{±6}λ^{±1} is central, so any
    // generator conjugating μ off P is a witness
    let (g, p) = census_group("3_1");
    let bounds = ProbeBounds {
        g_length: 2,
        ..ProbeBounds::default()
    };
    let base = probe_malnormality(&g, &p, &bounds).unwrap();
    let fibre = base
        .survivors
        .iter()
        .find(|s| is_fibre_pattern(s))
        .expect("fibre survivor")
        .p0;
    let candidate = Survivor {
        g: Word::gen(&g.generators[1]).mul(&Word::gen(&g.generators[2])),
        p0: fibre,
        p1: fibre,
    };
    let report = probe_with_candidates(&g, &p, &bounds, std::slice::from_ref(&candidate)).unwrap();
    let outcome = &report.injected[0];
    assert_eq!(outcome.candidate, candidate);
    assert!(outcome.identity_holds);
    assert!(outcome.g_certified_outside);
}

#[test]
fn injected_false_witness_is_refuted() {
    let (g, p) = census_group("4_1");
    let candidate = Survivor {
        g: Word::gen(&g.generators[1]),
        p0: (1, 0),
        p1: (1, 0),
    };
    let report = probe_with_candidates(
        &g,
        &p,
        &ProbeBounds {
            g_length: 1,
            ..ProbeBounds::default()
        },
        &[candidate],
    )
    .unwrap();
    assert!(!report.injected[0].identity_holds || !report.injected[0].g_certified_outside);
}

#[test]
fn zero_budget_has_no_refutation_power() {
    let (g, p) = census_group("4_1");
    let bounds = ProbeBounds {
        quotient_budget: 0,
        g_length: 2,
        p_exponent: 1,
        ..ProbeBounds::default()
    };
    let report = probe_malnormality(&g, &p, &bounds).unwrap();
    assert!(report.no_refutation_power);
    assert_eq!(report.quotients_used, 0);
}

#[test]
fn probe_is_deterministic() {
    let (g, p) = census_group("3_1");
    let bounds = ProbeBounds {
        g_length: 3,
        ..ProbeBounds::default()
    };
    assert_eq!(
        probe_malnormality(&g, &p, &bounds).unwrap(),
        probe_malnormality(&g, &p, &bounds).unwrap()
    );
}
