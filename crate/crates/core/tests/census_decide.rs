//! Decisions over the bundled census and the characteristic-decomposition
//! truth table.

use std::collections::BTreeSet;
use std::time::Instant;

use periph_core::census::{bundled_census, GeometricType};
use periph_core::malnormality::{
    decide_malnormality, decide_peripheral_malnormality_jsj, Certificate, JsjSummary,
    MalnormalityError, Slope, Verdict,
};
use periph_core::notation::parse_knot_expr;

#[test]
fn census_decisions() {
    let census = bundled_census().unwrap();
    let start = Instant::now();
    let mut witnessed = BTreeSet::new();
    for entry in census.entries() {
        let k = parse_knot_expr(&format!("table({})", entry.name), Some(&census)).unwrap();
        let d = decide_malnormality(&k, Some(&census)).unwrap();
        match entry.geometric_type {
            GeometricType::Hyperbolic => assert_eq!(d.malnormal, Verdict::Yes, "{}", entry.name),
            _ => {
                assert_eq!(d.malnormal, Verdict::NoWithWitness, "{}", entry.name);
                let Some(Certificate::Witness(w)) = &d.certificate else {
                    panic!("{}: no witness", entry.name)
                };
                let (p, q) = entry.params.unwrap();
                assert_eq!(w.annulus_slope, Slope::new(p * q, 1).unwrap());
                witnessed.insert(entry.name.clone());
            }
        }
    }
    let expected: BTreeSet<String> = ["3_1", "5_1", "7_1", "8_19", "9_1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(witnessed, expected);
    assert!(start.elapsed().as_secs() < 60, "took {:?}", start.elapsed());
}

#[test]
fn jsj_truth_table() {
    let summary = |seifert, solid, thick| JsjSummary {
        boundary_piece_is_seifert: seifert,
        piece_description: "piece".into(),
        solid_torus: solid,
        thickened_torus: thick,
    };
    assert_eq!(
        decide_peripheral_malnormality_jsj(&summary(true, false, false))
            .unwrap()
            .malnormal,
        Verdict::No
    );
    assert_eq!(
        decide_peripheral_malnormality_jsj(&summary(false, false, false))
            .unwrap()
            .malnormal,
        Verdict::Yes
    );
    for seifert in [true, false] {
        assert!(matches!(
            decide_peripheral_malnormality_jsj(&summary(seifert, true, false)),
            Err(MalnormalityError::ExcludedManifold(_))
        ));
        assert!(matches!(
            decide_peripheral_malnormality_jsj(&summary(seifert, false, true)),
            Err(MalnormalityError::ExcludedManifold(_))
        ));
    }
}

#[test]
fn structural_inputs_outside_the_census() {
    for (text, verdict) in [
        ("torus(3,7)", Verdict::NoWithWitness),
        ("cable(2,5; table(4_1))", Verdict::NoWithWitness),
        ("sum(table(4_1), table(5_2))", Verdict::NoWithWitness),
        ("dt[4 6 8 2]", Verdict::EvidenceOnly),
    ] {
        let census = bundled_census().unwrap();
        let k = parse_knot_expr(text, Some(&census)).unwrap();
        assert_eq!(
            decide_malnormality(&k, Some(&census)).unwrap().malnormal,
            verdict,
            "{text}"
        );
    }
}
