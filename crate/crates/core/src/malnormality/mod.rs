//! Malnormality of the peripheral subgroup `P = ⟨μ, λ⟩`.
//!
//! `P` is malnormal when `gPg⁻¹ ∩ P = {1}` for every `g ∉ P`. It fails
//! exactly for torus, cable and composite knots; for those this module
//! builds a witness `g p₀ g⁻¹ = p₁` and verifies it. Other knots are
//! either certified through the census (hyperbolic entries) or probed for
//! bounded evidence.

mod cable_rep;
mod document;
mod probe;
mod witness;

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::census::{CensusError, CensusTable, GeometricType};
use crate::group::GroupError;
use crate::notation::{KnotExpression, NotationError};
use crate::presentation::{PeripheralPair, PresentationError, PresentedGroup};

pub use document::{
    decision_doc, parse_document, probe_document, witness_document, BoundsDoc, CheckDoc,
    DecisionDoc, Document, SlopeDoc, SurvivorDoc,
};
pub use probe::{probe_malnormality, probe_with_candidates, ProbeBounds, ProbeReport, Survivor};
pub use witness::{
    certify, synthesize_witness, verify_document, verify_witness, Check, CheckMethod, CheckStatus,
    QuotientCertificate, VerificationReport, VerifyConfig, WitnessCertificate,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalnormalityError {
    #[error(transparent)]
    Notation(#[from] NotationError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("no witness construction applies: {0}")]
    NotApplicable(String),
    #[error("excluded manifold: {0}; the peripheral subgroup is the whole group and trivially malnormal")]
    ExcludedManifold(String),
    #[error("verification check `{0}` failed")]
    CheckFailed(String),
    #[error("slope (0,0) is not a slope")]
    ZeroSlope,
    #[error("certificate document: {0}")]
    Document(String),
}

/// A slope on the peripheral torus in the `(μ, λ)` basis, primitive and
/// sign-normalized (`l > 0`, or `l = 0` and `m > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    m: i64,
    l: i64,
}

impl Slope {
    pub fn new(m: i64, l: i64) -> Result<Self, MalnormalityError> {
        if m == 0 && l == 0 {
            return Err(MalnormalityError::ZeroSlope);
        }
        let g = m.gcd(&l);
        let (mut m, mut l) = (m / g, l / g);
        if l < 0 || (l == 0 && m < 0) {
            m = -m;
            l = -l;
        }
        Ok(Self { m, l })
    }

    pub const MERIDIAN: Slope = Slope { m: 1, l: 0 };

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn l(&self) -> i64 {
        self.l
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.l)
    }
}

/// Geometric intersection number `|m₁l₂ − m₂l₁|`.
pub fn slope_distance(a: Slope, b: Slope) -> u64 {
    (i128::from(a.m) * i128::from(b.l) - i128::from(b.m) * i128::from(a.l)).unsigned_abs() as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StructuralClass {
    Torus { p: i64, q: i64 },
    Cable { a: i64, b: i64 },
    Composite { factors: usize },
    NoObstruction { evidence: String },
}

impl StructuralClass {
    pub fn has_witness(&self) -> bool {
        !matches!(self, StructuralClass::NoObstruction { .. })
    }
}

impl fmt::Display for StructuralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuralClass::Torus { p, q } => write!(f, "torus({p},{q})"),
            StructuralClass::Cable { a, b } => write!(f, "cable({a},{b})"),
            StructuralClass::Composite { factors } => write!(f, "composite({factors})"),
            StructuralClass::NoObstruction { evidence } => write!(f, "no-obstruction({evidence})"),
        }
    }
}

/// Replaces census torus entries by their structural form, so that they
/// get the torus presentation and symbolic witness checks.
pub fn structural_form(k: &KnotExpression, census: Option<&CensusTable>) -> KnotExpression {
    match k {
        KnotExpression::FromDiagram { name: Some(n), .. } => {
            match census.and_then(|c| c.lookup(n).ok()) {
                Some(e) if e.geometric_type == GeometricType::Torus => match e.params {
                    Some((p, q)) => KnotExpression::Torus { p, q },
                    None => k.clone(),
                },
                _ => k.clone(),
            }
        }
        KnotExpression::Cable { a, b, companion } => KnotExpression::Cable {
            a: *a,
            b: *b,
            companion: Box::new(structural_form(companion, census)),
        },
        KnotExpression::Sum(fs) => {
            KnotExpression::Sum(fs.iter().map(|f| structural_form(f, census)).collect())
        }
        KnotExpression::Torus { .. } | KnotExpression::FromDiagram { name: None, .. } => k.clone(),
    }
}

pub fn classify(
    k: &KnotExpression,
    census: Option<&CensusTable>,
) -> Result<StructuralClass, MalnormalityError> {
    Ok(match k {
        KnotExpression::Torus { p, q } => StructuralClass::Torus { p: *p, q: *q },
        KnotExpression::Cable { a, b, .. } => StructuralClass::Cable { a: *a, b: *b },
        KnotExpression::Sum(_) => StructuralClass::Composite {
            factors: k.summands().len(),
        },
        KnotExpression::FromDiagram {
            name: Some(n),
            source,
        } => {
            let census = census.ok_or_else(|| CensusError::UnknownTableName(n.clone()))?;
            let e = census.lookup(n)?;
            let _ = source;
            match (e.geometric_type, e.params) {
                (GeometricType::Torus, Some((p, q))) => StructuralClass::Torus { p, q },
                (GeometricType::Hyperbolic, _) => StructuralClass::NoObstruction {
                    evidence: "census: hyperbolic".into(),
                },
                (GeometricType::Satellite, _) => StructuralClass::NoObstruction {
                    evidence: "satellite: cable status unknown".into(),
                },
                (GeometricType::Torus, None) => StructuralClass::NoObstruction {
                    evidence: "census: torus entry without parameters".into(),
                },
            }
        }
        KnotExpression::FromDiagram { name: None, source } => StructuralClass::NoObstruction {
            evidence: format!(
                "no census classification; {}-crossing diagram, non-triviality not certified",
                source.crossings()
            ),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    NoWithWitness,
    EvidenceOnly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::NoWithWitness => "no-with-witness",
            Verdict::EvidenceOnly => "evidence-only",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Witness(Box<WitnessCertificate>),
    Probe(Box<ProbeCertificate>),
}

/// Probe evidence together with the presentation it ran on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeCertificate {
    pub class: StructuralClass,
    pub group: PresentedGroup,
    pub pair: PeripheralPair,
    pub report: ProbeReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub knot: String,
    pub malnormal: Verdict,
    pub rationale: String,
    pub certificate: Option<Certificate>,
}

impl Decision {
    /// `true` unless the verdict is only evidence.
    pub fn is_decided(&self) -> bool {
        self.malnormal != Verdict::EvidenceOnly
    }
}

pub fn decide_malnormality(
    k: &KnotExpression,
    census: Option<&CensusTable>,
) -> Result<Decision, MalnormalityError> {
    decide_malnormality_with(k, census, &VerifyConfig::default(), &ProbeBounds::default())
}

/// Decision with explicit verification and probe settings.
pub fn decide_malnormality_with(
    k: &KnotExpression,
    census: Option<&CensusTable>,
    verify: &VerifyConfig,
    bounds: &ProbeBounds,
) -> Result<Decision, MalnormalityError> {
    let class = classify(k, census)?;
    let knot = k.to_string();
    match &class {
        StructuralClass::NoObstruction { evidence } if evidence == "census: hyperbolic" => Ok(Decision {
            knot,
            malnormal: Verdict::Yes,
            rationale: "hyperbolic census entry: neither torus, cable nor composite, so the peripheral subgroup \
                        is malnormal"
                .into(),
            certificate: None,
        }),
        StructuralClass::NoObstruction { evidence } => {
            let (group, pair) = crate::presentation::present(&structural_form(k, census), census)?;
            let report = probe_malnormality(&group, &pair, bounds)?;
            Ok(Decision {
                knot,
                malnormal: Verdict::EvidenceOnly,
                rationale: format!(
                    "{evidence}; bounded probe left {} surviving candidate(s) over {} quotient(s)",
                    report.survivor_total, report.quotients_used
                ),
                certificate: Some(Certificate::Probe(Box::new(ProbeCertificate { class: class.clone(), group, pair, report }))),
            })
        }
        _ => {
            let cert = certify(k, census, verify)?;
            Ok(Decision {
                knot,
                malnormal: Verdict::NoWithWitness,
                rationale: format!("{class} knot: the peripheral subgroup is not malnormal; verified witness attached"),
                certificate: Some(Certificate::Witness(Box::new(cert))),
            })
        }
    }
}

/// The piece of the characteristic decomposition that contains the
/// boundary, as declared by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsjSummary {
    pub boundary_piece_is_seifert: bool,
    pub piece_description: String,
    pub solid_torus: bool,
    pub thickened_torus: bool,
}

pub fn decide_peripheral_malnormality_jsj(j: &JsjSummary) -> Result<Decision, MalnormalityError> {
    if j.solid_torus || j.thickened_torus {
        let which = if j.solid_torus {
            "solid torus"
        } else {
            "thickened torus"
        };
        return Err(MalnormalityError::ExcludedManifold(which.into()));
    }
    let (malnormal, rationale) = if j.boundary_piece_is_seifert {
        (
            Verdict::No,
            format!(
                "boundary piece `{}` is Seifert fibred: not malnormal",
                j.piece_description
            ),
        )
    } else {
        (
            Verdict::Yes,
            format!(
                "boundary piece `{}` is not Seifert fibred: malnormal",
                j.piece_description
            ),
        )
    };
    Ok(Decision {
        knot: j.piece_description.clone(),
        malnormal,
        rationale,
        certificate: None,
    })
}
