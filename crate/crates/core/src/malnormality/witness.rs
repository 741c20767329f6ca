//! Witness construction per structural class and its verification.
//!
//! * torus `(p,q)`: `g = x`, `p₀ = p₁ = λμ^{pq}`, the central fibre `x^p`;
//! * composite: `g = λ₁`, `p₀ = p₁ = μ` — `λ₁` commutes with the shared
//!   meridian but lies outside `P`;
//! * cable `(a,b)`: `g = c`, `p₀ = p₁ = λμ^{ab} = h`, the regular fibre of
//!   the cable space, which commutes with `c` by a defining relator.

use std::collections::HashSet;
use std::fmt;

use crate::census::CensusTable;
use crate::group::quotient::{generate_subgroup, Perm, MAX_DEGREE};
use crate::group::{
    find_quotients, quotient_eval, CableSpace, FiniteQuotient, QuotientSearch, SumAmalgam,
    TorusGroup, Word,
};
use crate::notation::KnotExpression;
use crate::presentation::{present, PeripheralPair, PresentedGroup, Structure};

use super::{classify, structural_form, MalnormalityError, Slope, StructuralClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckMethod {
    Symbolic,
    Quotient,
}

impl fmt::Display for CheckMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMethod::Symbolic => "symbolic",
            CheckMethod::Quotient => "quotient",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Check {
    pub name: String,
    pub method: CheckMethod,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VerifyConfig {
    pub quotients: usize,
    pub degree_cap: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            quotients: 30,
            degree_cap: 7,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCertificate {
    /// The input expression, rendered.
    pub knot: String,
    pub class: StructuralClass,
    pub group: PresentedGroup,
    pub pair: PeripheralPair,
    pub g: Word,
    pub p0: Word,
    pub p1: Word,
    pub annulus_slope: Slope,
    /// Empty until verified.
    pub checks: Vec<Check>,
    /// Settings and number of quotients used, when any check went through
    /// quotients.
    pub quotient_bounds: Option<(VerifyConfig, usize)>,
}

/// `image(g) ∉ ⟨image(μ), image(λ)⟩` in a finite quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCertificate {
    pub degree: usize,
    pub images: Vec<(String, Vec<usize>)>,
    pub g_image: Vec<usize>,
    pub peripheral_image_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub quotients_sampled: usize,
    pub g_outside: Option<QuotientCertificate>,
}

impl VerificationReport {
    pub fn uses_quotients(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.method == CheckMethod::Quotient)
    }
}

pub fn synthesize_witness(
    k: &KnotExpression,
    census: Option<&CensusTable>,
) -> Result<WitnessCertificate, MalnormalityError> {
    let class = classify(k, census)?;
    let ks = structural_form(k, census);
    let (group, pair) = present(&ks, census)?;
    let (g, p0, slope) = match (&class, &group.structure) {
        (StructuralClass::Torus { .. }, Structure::Torus { p, q }) => {
            let p0 = pair.lambda.mul(&pair.mu.power(p * q));
            (Word::gen(&group.generators[0]), p0, Slope::new(p * q, 1)?)
        }
        (StructuralClass::Composite { .. }, Structure::Sum { .. }) => {
            let first = ks.summands()[0].clone();
            let (_, p1) = present(&first, census)?;
            let lambda1 = p1.lambda.rename(|g| format!("f1_{g}"));
            (lambda1, pair.mu.clone(), Slope::MERIDIAN)
        }
        (StructuralClass::Cable { .. }, Structure::Cable { a, b, .. }) => {
            let p0 = pair.lambda.mul(&pair.mu.power(a * b));
            (Word::gen("c"), p0, Slope::new(a * b, 1)?)
        }
        (StructuralClass::NoObstruction { evidence }, _) => {
            return Err(MalnormalityError::NotApplicable(evidence.clone()));
        }
        (c, s) => {
            return Err(MalnormalityError::NotApplicable(format!(
                "class {c} with structure {s}"
            )));
        }
    };
    Ok(WitnessCertificate {
        knot: k.to_string(),
        class,
        group,
        pair,
        g,
        p1: p0.clone(),
        p0,
        annulus_slope: slope,
        checks: vec![],
        quotient_bounds: None,
    })
}

/// Synthesizes and verifies; the certificate carries the check results.
pub fn certify(
    k: &KnotExpression,
    census: Option<&CensusTable>,
    cfg: &VerifyConfig,
) -> Result<WitnessCertificate, MalnormalityError> {
    let mut cert = synthesize_witness(k, census)?;
    let report = verify_witness(&cert.group, &cert.pair, &cert, cfg)?;
    cert.quotient_bounds = report
        .uses_quotients()
        .then_some((*cfg, report.quotients_sampled));
    cert.checks = report.checks;
    Ok(cert)
}

enum Engine {
    Torus(TorusGroup),
    Amalgam(SumAmalgam),
    Quotients,
}

impl Engine {
    fn for_group(g: &PresentedGroup) -> Self {
        if let Some(t) = g.torus_group() {
            return Engine::Torus(t);
        }
        match g.sum_amalgam() {
            Ok(a) => Engine::Amalgam(a),
            Err(_) => Engine::Quotients,
        }
    }

    fn is_trivial(&self, w: &Word) -> Result<Option<bool>, MalnormalityError> {
        Ok(match self {
            Engine::Torus(t) => Some(t.normal_form(w)?.is_identity()),
            Engine::Amalgam(a) => Some(a.is_trivial(w)?),
            Engine::Quotients => None,
        })
    }

    fn in_peripheral(&self, w: &Word, lambda: &Word) -> Result<Option<bool>, MalnormalityError> {
        Ok(match self {
            Engine::Torus(t) => Some(t.peripheral_membership(w)?.is_some()),
            Engine::Amalgam(a) => Some(a.peripheral_membership(w, lambda)?.is_some()),
            Engine::Quotients => None,
        })
    }
}

struct LazyQuotients<'a> {
    group: &'a PresentedGroup,
    cfg: &'a VerifyConfig,
    cache: Option<Vec<FiniteQuotient>>,
}

impl LazyQuotients<'_> {
    fn get(&mut self) -> Result<&[FiniteQuotient], MalnormalityError> {
        if self.cache.is_none() {
            let search =
                QuotientSearch::new(self.cfg.degree_cap, self.cfg.quotients, self.cfg.seed);
            let mut qs = self.group.quotients(&search)?;
            if qs.len() < self.cfg.quotients && self.cfg.degree_cap < MAX_DEGREE {
                // too few at this cap: sample up to the largest degree
                let wide = QuotientSearch {
                    max_degree: MAX_DEGREE,
                    node_budget: 4 * search.node_budget,
                    ..search
                };
                qs = self.group.quotients(&wide)?;
            }
            self.cache = Some(qs);
        }
        Ok(self.cache.as_deref().expect("filled"))
    }
}

/// Verifies the witness identities: conjugation, `p₀ ≠ 1`, `g ∉ P`, and
/// `p₀, p₁ ∈ P`. Symbolic where a normal-form engine applies, otherwise
/// through finite quotients. Any failing check is an error.
pub fn verify_witness(
    g: &PresentedGroup,
    p: &PeripheralPair,
    w: &WitnessCertificate,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, MalnormalityError> {
    let engine = Engine::for_group(g);
    let mut quotients = LazyQuotients {
        group: g,
        cfg,
        cache: None,
    };
    let mut checks = vec![];
    let mut g_outside = None;
    let push = |checks: &mut Vec<Check>, name: &str, method, ok: bool| {
        checks.push(Check {
            name: name.to_string(),
            method,
            status: if ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
        });
    };

    // (1) g p0 g⁻¹ p1⁻¹ = 1
    let rel = w.g.mul(&w.p0).mul(&w.g.inverse()).mul(&w.p1.inverse());
    match engine.is_trivial(&rel)? {
        Some(t) => push(
            &mut checks,
            "conjugation_identity",
            CheckMethod::Symbolic,
            t,
        ),
        None => {
            let qs = quotients.get()?;
            let mut ok = !qs.is_empty();
            for q in qs {
                ok &= quotient_eval(q, &rel)?.is_identity();
            }
            push(
                &mut checks,
                "conjugation_identity",
                CheckMethod::Quotient,
                ok,
            );
        }
    }

    // (2) p0 ≠ 1
    if g.abelianize(&w.p0)? != 0 {
        push(&mut checks, "p0_nontrivial", CheckMethod::Symbolic, true);
    } else if let Some(t) = engine.is_trivial(&w.p0)? {
        push(&mut checks, "p0_nontrivial", CheckMethod::Symbolic, !t);
    } else {
        let mut ok = false;
        for q in quotients.get()? {
            ok |= !quotient_eval(q, &w.p0)?.is_identity();
        }
        push(&mut checks, "p0_nontrivial", CheckMethod::Quotient, ok);
    }

    // (3) g ∉ P
    match engine.in_peripheral(&w.g, &p.lambda)? {
        Some(inside) => push(
            &mut checks,
            "g_not_in_peripheral",
            CheckMethod::Symbolic,
            !inside,
        ),
        None => {
            g_outside = outside_certificate(quotients.get()?, p, &w.g)?;
            if g_outside.is_none() {
                g_outside = super::cable_rep::torus_companion_representation(g, p, &w.g, cfg.seed)?;
            }
            if g_outside.is_none() {
                if let Structure::Cable { .. } = g.structure {
                    // quotients killing the cable-space fibre factor through
                    // the filled companion free product ℤ/a
                    let mut rels = g.relators.clone();
                    rels.push(Word::gen("h"));
                    let search =
                        QuotientSearch::new(MAX_DEGREE, cfg.quotients * WIDEN_FACTOR, cfg.seed);
                    let qs = find_quotients(&g.generators, &rels, "fibre-killed", &search)?;
                    g_outside = outside_certificate(&qs, p, &w.g)?;
                }
            }
            if g_outside.is_none() {
                if let Structure::Cable { companion, .. } = &g.structure {
                    // an abelianized companion collapses the group onto the
                    // pattern torus knot group, in which c is a core
                    let js = &g.generators[companion.clone()];
                    let mut rels = g.relators.clone();
                    for (i, x) in js.iter().enumerate() {
                        for y in &js[i + 1..] {
                            let (x, y) = (Word::gen(x), Word::gen(y));
                            rels.push(x.mul(&y).mul(&x.inverse()).mul(&y.inverse()));
                        }
                    }
                    let search =
                        QuotientSearch::new(MAX_DEGREE, cfg.quotients * WIDEN_FACTOR, cfg.seed);
                    let qs = find_quotients(&g.generators, &rels, "companion-abelian", &search)?;
                    g_outside = outside_certificate(&qs, p, &w.g)?;
                }
            }
            if g_outside.is_none() {
                if let Structure::Sum { factors } = &g.structure {
                    g_outside = product_certificate(g, factors, p, &w.g, cfg)?;
                }
            }
            if g_outside.is_none() {
                // widen: every degree the search supports, more quotients
                let wide = QuotientSearch::new(MAX_DEGREE, cfg.quotients * WIDEN_FACTOR, cfg.seed);
                g_outside = outside_certificate(&g.quotients(&wide)?, p, &w.g)?;
            }
            match (&g_outside, &g.structure) {
                (Some(_), _) => push(
                    &mut checks,
                    "g_not_in_peripheral",
                    CheckMethod::Quotient,
                    true,
                ),
                (None, Structure::Cable { a, .. }) => {
                    // no finite certificate: decide in the cable space mod its fibre
                    let space = CableSpace::new(*a, "q", "c", "h");
                    let outside = space.owns(&w.g)
                        && space.owns(&p.mu)
                        && !space.in_meridian_image(&w.g, &p.mu)?;
                    push(
                        &mut checks,
                        "g_not_in_peripheral",
                        CheckMethod::Symbolic,
                        outside,
                    );
                }
                (None, _) => push(
                    &mut checks,
                    "g_not_in_peripheral",
                    CheckMethod::Quotient,
                    false,
                ),
            }
        }
    }

    // (4) p0, p1 ∈ P
    let mut method = CheckMethod::Symbolic;
    let mut ok = true;
    for pw in [&w.p0, &w.p1] {
        if peripheral_coordinates(g, p, pw)?.is_some() {
            continue;
        }
        match engine.in_peripheral(pw, &p.lambda)? {
            Some(inside) => ok &= inside,
            None => {
                method = CheckMethod::Quotient;
                ok = false;
            }
        }
    }
    push(&mut checks, "p_in_peripheral", method, ok);

    if let Some(bad) = checks.iter().find(|c| c.status == CheckStatus::Fail) {
        return Err(MalnormalityError::CheckFailed(bad.name.clone()));
    }
    let quotients_sampled = quotients.cache.as_ref().map_or(0, Vec::len);
    Ok(VerificationReport {
        checks,
        quotients_sampled,
        g_outside,
    })
}

/// Quotients tried for `g ∉ P` when the sampled ones give no certificate,
/// as a multiple of the sample size.
const WIDEN_FACTOR: usize = 20;

/// Factor quotients searched per summand for sum certificates, as a multiple
/// of the sample size.
const FACTOR_FACTOR: usize = 4;

/// First quotient in which the image of `g` lies outside the subgroup
/// generated by the images of `μ` and `λ`.
fn outside_certificate(
    qs: &[FiniteQuotient],
    p: &PeripheralPair,
    g: &Word,
) -> Result<Option<QuotientCertificate>, MalnormalityError> {
    for q in qs {
        let mu = quotient_eval(q, &p.mu)?;
        let la = quotient_eval(q, &p.lambda)?;
        let gi = quotient_eval(q, g)?;
        let sub = generate_subgroup(q.degree, &[mu, la]);
        if !sub.contains(&gi) {
            return Ok(Some(QuotientCertificate {
                degree: q.degree,
                images: q
                    .generators
                    .iter()
                    .cloned()
                    .zip(q.images.iter().map(|p| p.images()))
                    .collect(),
                g_image: gi.images(),
                peripheral_image_order: sub.len(),
            }));
        }
    }
    Ok(None)
}

/// Element of a product of two symmetric groups acting on disjoint blocks.
type BlockPair = (Perm, Perm);

fn pair_then(x: &BlockPair, y: &BlockPair) -> BlockPair {
    (x.0.then(&y.0), x.1.then(&y.1))
}

/// Certificate for `g ∉ P` in a connected sum from an intransitive
/// quotient: the factor owning `g` acts on one block through a quotient of
/// its own group, a second factor on another block likewise, and every
/// other generator acts on each block as the block's meridian image raised
/// to its homology class. Since all factor meridians are identified this
/// respects every relator; the relators are re-checked anyway.
fn product_certificate(
    g: &PresentedGroup,
    factors: &[(std::ops::Range<usize>, Structure)],
    p: &PeripheralPair,
    w: &Word,
    cfg: &VerifyConfig,
) -> Result<Option<QuotientCertificate>, MalnormalityError> {
    let index = |name: &str| g.generators.iter().position(|x| x == name);
    let range_of = |name: &str| -> Option<usize> {
        let i = index(name)?;
        factors.iter().position(|(r, _)| r.contains(&i))
    };
    let sub_word = |w: &Word, f: usize| -> Word {
        let ls: Vec<(&str, i64)> = w
            .letters()
            .iter()
            .filter(|l| range_of(&l.gen) == Some(f))
            .map(|l| (l.gen.as_str(), l.exp))
            .collect();
        Word::of(&ls)
    };
    let Some(home) = w.letters().first().and_then(|l| range_of(&l.gen)) else {
        return Ok(None);
    };
    if w.letters().iter().any(|l| range_of(&l.gen) != Some(home)) {
        return Ok(None);
    }

    // factor meridians, read off the gluing relators `μᵢ μⱼ⁻¹`
    let mut meridians: Vec<Option<Word>> = vec![None; factors.len()];
    for r in &g.relators {
        let mut touched: Vec<usize> = r
            .letters()
            .iter()
            .filter_map(|l| range_of(&l.gen))
            .collect();
        touched.sort_unstable();
        touched.dedup();
        if touched.len() != 2 {
            continue;
        }
        for f in touched {
            let part = sub_word(r, f);
            let m = match g.abelianize(&part)? {
                1 => part,
                -1 => part.inverse(),
                _ => continue,
            };
            meridians[f].get_or_insert(m);
        }
    }

    // factor groups are small, so search them at full degree; only quotients
    // where the factor's own longitude survives can separate anything
    let search = QuotientSearch::new(MAX_DEGREE, cfg.quotients * FACTOR_FACTOR, cfg.seed);
    let mut factor_quotients = vec![];
    for (f, (r, _)) in factors.iter().enumerate() {
        let gens = g.generators[r.clone()].to_vec();
        let rels: Vec<Word> = g
            .relators
            .iter()
            .filter(|w| w.letters().iter().all(|l| range_of(&l.gen) == Some(f)))
            .cloned()
            .collect();
        let own_lambda = sub_word(&p.lambda, f);
        let mut qs = vec![];
        for q in find_quotients(&gens, &rels, &format!("factor-{f}"), &search)? {
            if !quotient_eval(&q, &own_lambda)?.is_identity() {
                qs.push(q);
            }
        }
        factor_quotients.push(qs);
    }
    let classes: Vec<i64> = g
        .generators
        .iter()
        .map(|x| g.abelianize(&Word::gen(x)))
        .collect::<Result<_, _>>()?;

    let Some(home_mu) = &meridians[home] else {
        return Ok(None);
    };
    for (other, other_qs) in factor_quotients.iter().enumerate() {
        let Some(other_mu) = meridians[other].as_ref().filter(|_| other != home) else {
            continue;
        };
        for qa in &factor_quotients[home] {
            let ma = quotient_eval(qa, home_mu)?;
            for qb in other_qs {
                let mb = quotient_eval(qb, other_mu)?;
                let image = |k: usize| -> BlockPair {
                    let name = &g.generators[k];
                    let a = qa
                        .image_of(name)
                        .copied()
                        .unwrap_or_else(|| ma.pow(classes[k]));
                    let b = qb
                        .image_of(name)
                        .copied()
                        .unwrap_or_else(|| mb.pow(classes[k]));
                    (a, b)
                };
                let images: Vec<BlockPair> = (0..g.generators.len()).map(image).collect();
                let eval = |w: &Word| -> BlockPair {
                    let id = (Perm::identity(qa.degree), Perm::identity(qb.degree));
                    w.letters().iter().fold(id, |acc, l| {
                        let x = images[index(&l.gen).expect("own generator")];
                        pair_then(&acc, &(x.0.pow(l.exp), x.1.pow(l.exp)))
                    })
                };
                if g.relators.iter().any(|r| {
                    let v = eval(r);
                    !(v.0.is_identity() && v.1.is_identity())
                }) {
                    continue;
                }
                let gi = eval(w);
                let sub = pair_subgroup(&[eval(&p.mu), eval(&p.lambda)]);
                if sub.contains(&gi) {
                    continue;
                }
                let da = qa.degree;
                let glue = |x: &BlockPair| -> Vec<usize> {
                    x.0.images()
                        .into_iter()
                        .chain(x.1.images().into_iter().map(|v| v + da))
                        .collect()
                };
                return Ok(Some(QuotientCertificate {
                    degree: da + qb.degree,
                    images: g
                        .generators
                        .iter()
                        .cloned()
                        .zip(images.iter().map(glue))
                        .collect(),
                    g_image: glue(&gi),
                    peripheral_image_order: sub.len(),
                }));
            }
        }
    }
    Ok(None)
}

/// Subgroup generated by `gens`; only used for peripheral images, which are
/// abelian and small.
fn pair_subgroup(gens: &[BlockPair]) -> HashSet<BlockPair> {
    let id = (
        Perm::identity(gens[0].0.degree()),
        Perm::identity(gens[0].1.degree()),
    );
    let mut seen = HashSet::from([id]);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for y in gens {
            let z = pair_then(&x, y);
            if seen.insert(z) {
                queue.push(z);
            }
        }
    }
    seen
}

/// `(i, j)` with `w` freely equal to `μ^i λ^j` or `λ^j μ^i`; `i` is forced
/// by homology.
fn peripheral_coordinates(
    g: &PresentedGroup,
    p: &PeripheralPair,
    w: &Word,
) -> Result<Option<(i64, i64)>, MalnormalityError> {
    let i = g.abelianize(w)?;
    let target = w.free_reduce();
    for j in (0..=8).flat_map(|j| [j, -j]) {
        let (mi, lj) = (p.mu.power(i), p.lambda.power(j));
        if mi.mul(&lj) == target || lj.mul(&mi) == target {
            return Ok(Some((i, j)));
        }
    }
    Ok(None)
}

/// Re-derives the presentation from the document's `knot` field, requires
/// it to match the document, and verifies the recorded witness.
pub fn verify_document(
    doc: &super::Document,
    census: Option<&CensusTable>,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, MalnormalityError> {
    use super::MalnormalityError::Document as DocErr;
    let k = crate::notation::parse_knot_expr(&doc.knot, census)?;
    let cert = synthesize_witness(&k, census)?;
    let rels: Vec<String> = cert.group.relators.iter().map(|r| r.to_string()).collect();
    if doc.generators != cert.group.generators
        || doc.relators != rels
        || doc.mu != cert.pair.mu.to_string()
        || doc.lambda != cert.pair.lambda.to_string()
    {
        return Err(DocErr(
            "presentation does not match the one rebuilt from `knot`".into(),
        ));
    }
    let word = |field: &str, v: &Option<String>| -> Result<Word, MalnormalityError> {
        v.as_deref()
            .ok_or_else(|| DocErr(format!("`{field}` is null; not a witness document")))?
            .parse::<Word>()
            .map_err(|e| DocErr(format!("`{field}`: {e}")))
    };
    let claimed = WitnessCertificate {
        g: word("g", &doc.g)?,
        p0: word("p0", &doc.p0)?,
        p1: word("p1", &doc.p1)?,
        ..cert
    };
    if let Some(s) = &doc.annulus_slope {
        let slope = Slope::new(s.m, s.l)?;
        if slope != claimed.annulus_slope {
            return Err(DocErr(format!(
                "annulus slope {slope} differs from {}",
                claimed.annulus_slope
            )));
        }
    }
    verify_witness(&claimed.group, &claimed.pair, &claimed, cfg)
}
