//! JSON form of witness certificates, probe reports and decisions.

use serde::{Deserialize, Serialize};

use crate::group::Word;
use crate::presentation::{PeripheralPair, PresentedGroup};

use super::{
    Certificate, Decision, MalnormalityError, ProbeReport, StructuralClass, WitnessCertificate,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeDoc {
    pub m: i64,
    pub l: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    pub name: String,
    pub method: String,
    pub status: String,
}

/// Search settings behind a document: verification quotients for a
/// witness, the probe bounds for a probe report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundsDoc {
    Verification {
        quotients: usize,
        degree_cap: usize,
        seed: u64,
        quotients_sampled: usize,
    },
    Probe {
        g_length: usize,
        p_exponent: i64,
        quotient_budget: usize,
        degree_cap: usize,
        seed: u64,
        quotients_used: usize,
        survivor_total: u64,
        no_refutation_power: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurvivorDoc {
    pub g: String,
    pub p0: String,
    pub p1: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub knot: String,
    pub class: String,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub mu: String,
    pub lambda: String,
    pub g: Option<String>,
    pub p0: Option<String>,
    pub p1: Option<String>,
    pub annulus_slope: Option<SlopeDoc>,
    pub checks: Vec<CheckDoc>,
    pub bounds: Option<BoundsDoc>,
    pub survivors: Option<Vec<SurvivorDoc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionDoc {
    pub knot: String,
    pub malnormal: String,
    pub rationale: String,
    pub document: Option<Document>,
}

fn base(knot: &str, class: &StructuralClass, g: &PresentedGroup, p: &PeripheralPair) -> Document {
    Document {
        knot: knot.to_string(),
        class: class.to_string(),
        generators: g.generators.clone(),
        relators: g.relators.iter().map(Word::to_string).collect(),
        mu: p.mu.to_string(),
        lambda: p.lambda.to_string(),
        g: None,
        p0: None,
        p1: None,
        annulus_slope: None,
        checks: vec![],
        bounds: None,
        survivors: None,
    }
}

pub fn witness_document(c: &WitnessCertificate) -> Document {
    Document {
        g: Some(c.g.to_string()),
        p0: Some(c.p0.to_string()),
        p1: Some(c.p1.to_string()),
        annulus_slope: Some(SlopeDoc {
            m: c.annulus_slope.m(),
            l: c.annulus_slope.l(),
        }),
        checks: c
            .checks
            .iter()
            .map(|k| CheckDoc {
                name: k.name.clone(),
                method: k.method.to_string(),
                status: k.status.to_string(),
            })
            .collect(),
        bounds: c.quotient_bounds.map(|(cfg, n)| BoundsDoc::Verification {
            quotients: cfg.quotients,
            degree_cap: cfg.degree_cap,
            seed: cfg.seed,
            quotients_sampled: n,
        }),
        ..base(&c.knot, &c.class, &c.group, &c.pair)
    }
}

pub fn probe_document(
    knot: &str,
    class: &StructuralClass,
    g: &PresentedGroup,
    p: &PeripheralPair,
    r: &ProbeReport,
) -> Document {
    let b = r.bounds;
    Document {
        bounds: Some(BoundsDoc::Probe {
            g_length: b.g_length,
            p_exponent: b.p_exponent,
            quotient_budget: b.quotient_budget,
            degree_cap: b.degree_cap,
            seed: b.seed,
            quotients_used: r.quotients_used,
            survivor_total: r.survivor_total,
            no_refutation_power: r.no_refutation_power,
        }),
        survivors: Some(
            r.survivors
                .iter()
                .map(|s| SurvivorDoc {
                    g: s.g.to_string(),
                    p0: s.p0_word(p).to_string(),
                    p1: s.p1_word(p).to_string(),
                })
                .collect(),
        ),
        ..base(knot, class, g, p)
    }
}

pub fn decision_doc(d: &Decision) -> DecisionDoc {
    let document = d.certificate.as_ref().map(|c| match c {
        Certificate::Witness(w) => witness_document(w),
        Certificate::Probe(p) => probe_document(&d.knot, &p.class, &p.group, &p.pair, &p.report),
    });
    DecisionDoc {
        knot: d.knot.clone(),
        malnormal: d.malnormal.to_string(),
        rationale: d.rationale.clone(),
        document,
    }
}

/// Accepts a bare document or a decision wrapping one.
pub fn parse_document(text: &str) -> Result<Document, MalnormalityError> {
    let err = |e: serde_json::Error| MalnormalityError::Document(e.to_string());
    let v: serde_json::Value = serde_json::from_str(text).map_err(err)?;
    if v.get("malnormal").is_some() {
        let d: DecisionDoc = serde_json::from_value(v).map_err(err)?;
        d.document
            .ok_or_else(|| MalnormalityError::Document("decision carries no document".into()))
    } else {
        serde_json::from_value(v).map_err(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::malnormality::{certify, VerifyConfig};
    use crate::notation::parse_knot_expr;

    #[test]
    fn witness_round_trip() {
        let k = parse_knot_expr("torus(2,3)", None).unwrap();
        let c = certify(&k, None, &VerifyConfig::default()).unwrap();
        let doc = witness_document(&c);
        let v: serde_json::Value = serde_json::to_value(&doc).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut want = vec![
            "knot",
            "class",
            "generators",
            "relators",
            "mu",
            "lambda",
            "g",
            "p0",
            "p1",
            "annulus_slope",
            "checks",
            "bounds",
            "survivors",
        ];
        want.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, want);
        assert_eq!(doc.annulus_slope, Some(SlopeDoc { m: 6, l: 1 }));
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_document(&text).unwrap(), doc);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_document("{\"knot\":\"x\",\"extra\":1}").is_err());
        assert!(parse_document("not json").is_err());
    }
}
