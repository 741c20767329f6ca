//! Finite presentations of knot groups with a distinguished meridian and
//! longitude.
//!
//! Text format (bit-exact round trip):
//!
//! ```text
//! gen: x y
//! rel: x^2 y^-3
//! mu: x y^-1
//! lambda: x^2 y x^-1 y x^-1 y x^-1 y x^-1 y x^-1 y x^-1
//! structure: torus(2,3)
//! ```
//!
//! The structure tag is one of `wirtinger`, `torus(p,q)`,
//! `sum[lo..hi:S;lo..hi:S;…]` or `cable(a,b)[lo..hi:S]`, with generator
//! index ranges into the `gen:` line.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::census::CensusTable;
use crate::diagram::{self, Diagram, DiagramError};
use crate::group::{
    alexander_from_relators, find_quotients, FiniteQuotient, GroupError, LaurentPolynomial,
    QuotientSearch, SumAmalgam, TorusGroup, Word,
};
use crate::notation::{KnotExpression, NotationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Notation(#[from] NotationError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(
        "first homology is not infinite cyclic (invariants {invariants:?}, free rank {free_rank})"
    )]
    H1NotZ {
        invariants: Vec<String>,
        free_rank: usize,
    },
    #[error("meridian maps to {0} in H1, expected a generator")]
    MeridianNotGenerator(i64),
    #[error("longitude maps to {0} in H1, expected 0")]
    LongitudeNotNullHomologous(i64),
    #[error("presentation text, line {line}: {msg}")]
    Format { line: usize, msg: String },
}

/// How the presentation was assembled; drives the choice of symbolic
/// engine downstream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Structure {
    Wirtinger,
    /// Generators `x, y` at `range.start`, `range.start + 1`.
    Torus {
        p: i64,
        q: i64,
    },
    /// Factor generator ranges with their own structure; all factor
    /// meridians are identified.
    Sum {
        factors: Vec<(Range<usize>, Structure)>,
    },
    /// Companion generators in `companion`, followed by `q`, `c`, `h`.
    Cable {
        a: i64,
        b: i64,
        companion: Range<usize>,
        inner: Box<Structure>,
    },
}

impl Structure {
    fn shifted(&self, off: usize) -> Structure {
        match self {
            Structure::Wirtinger | Structure::Torus { .. } => self.clone(),
            Structure::Sum { factors } => Structure::Sum {
                factors: factors
                    .iter()
                    .map(|(r, s)| (r.start + off..r.end + off, s.shifted(off)))
                    .collect(),
            },
            Structure::Cable {
                a,
                b,
                companion,
                inner,
            } => Structure::Cable {
                a: *a,
                b: *b,
                companion: companion.start + off..companion.end + off,
                inner: Box::new(inner.shifted(off)),
            },
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Wirtinger => f.write_str("wirtinger"),
            Structure::Torus { p, q } => write!(f, "torus({p},{q})"),
            Structure::Sum { factors } => {
                f.write_str("sum[")?;
                for (i, (r, s)) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{}..{}:{}", r.start, r.end, s)?;
                }
                f.write_str("]")
            }
            Structure::Cable {
                a,
                b,
                companion,
                inner,
            } => {
                write!(
                    f,
                    "cable({a},{b})[{}..{}:{}]",
                    companion.start, companion.end, inner
                )
            }
        }
    }
}

struct StructureParser<'a> {
    s: &'a str,
    pos: usize,
}

impl StructureParser<'_> {
    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), String> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(format!("expected `{lit}` at byte {}", self.pos))
        }
    }

    fn int(&mut self) -> Result<i64, String> {
        let rest = &self.s[self.pos..];
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
            .count();
        let v = rest[..len]
            .parse::<i64>()
            .map_err(|_| format!("expected integer at byte {}", self.pos))?;
        self.pos += len;
        Ok(v)
    }

    fn range(&mut self) -> Result<Range<usize>, String> {
        let lo = self.int()?;
        self.expect("..")?;
        let hi = self.int()?;
        if lo < 0 || hi < lo {
            return Err(format!("bad range {lo}..{hi}"));
        }
        Ok(lo as usize..hi as usize)
    }

    fn structure(&mut self) -> Result<Structure, String> {
        if self.eat("wirtinger") {
            Ok(Structure::Wirtinger)
        } else if self.eat("torus(") {
            let p = self.int()?;
            self.expect(",")?;
            let q = self.int()?;
            self.expect(")")?;
            Ok(Structure::Torus { p, q })
        } else if self.eat("sum[") {
            let mut factors = vec![];
            loop {
                let r = self.range()?;
                self.expect(":")?;
                factors.push((r, self.structure()?));
                if !self.eat(";") {
                    break;
                }
            }
            self.expect("]")?;
            Ok(Structure::Sum { factors })
        } else if self.eat("cable(") {
            let a = self.int()?;
            self.expect(",")?;
            let b = self.int()?;
            self.expect(")[")?;
            let companion = self.range()?;
            self.expect(":")?;
            let inner = self.structure()?;
            self.expect("]")?;
            Ok(Structure::Cable {
                a,
                b,
                companion,
                inner: Box::new(inner),
            })
        } else {
            Err(format!("unknown structure tag at byte {}", self.pos))
        }
    }
}

impl std::str::FromStr for Structure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = StructureParser { s, pos: 0 };
        let st = p.structure()?;
        if p.pos != s.len() {
            return Err(format!("trailing input at byte {}", p.pos));
        }
        Ok(st)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedGroup {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub structure: Structure,
    /// Image of each generator in `H₁ ≅ ℤ`, aligned with `generators`.
    pub abelianization: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeripheralPair {
    pub mu: Word,
    pub lambda: Word,
}

impl PresentedGroup {
    pub fn abelianize(&self, w: &Word) -> Result<i64, GroupError> {
        w.letters().iter().try_fold(0i64, |acc, l| {
            let i = self
                .generators
                .iter()
                .position(|g| *g == l.gen)
                .ok_or_else(|| GroupError::UnknownGenerator(l.gen.clone()))?;
            Ok(acc + l.exp * self.abelianization[i])
        })
    }

    /// Hex SHA-256 of the relator part of the text form; identifies the
    /// presentation in quotient certificates.
    pub fn identity_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("gen: {}\n", self.generators.join(" ")).as_bytes());
        for r in &self.relators {
            h.update(format!("rel: {r}\n").as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn quotients(&self, cfg: &QuotientSearch) -> Result<Vec<FiniteQuotient>, GroupError> {
        find_quotients(&self.generators, &self.relators, &self.identity_hash(), cfg)
    }

    /// The torus-knot group when the whole presentation is a torus
    /// presentation.
    pub fn torus_group(&self) -> Option<TorusGroup> {
        match self.structure {
            Structure::Torus { p, q } => {
                TorusGroup::new(p, q, &self.generators[0], &self.generators[1]).ok()
            }
            _ => None,
        }
    }

    /// Amalgam normal-form engine for a sum whose factors are all torus
    /// presentations.
    pub fn sum_amalgam(&self) -> Result<SumAmalgam, GroupError> {
        let Structure::Sum { factors } = &self.structure else {
            return Err(GroupError::UnsupportedFactor(0));
        };
        let groups = factors
            .iter()
            .enumerate()
            .map(|(i, (r, s))| match s {
                Structure::Torus { p, q } => TorusGroup::new(
                    *p,
                    *q,
                    &self.generators[r.start],
                    &self.generators[r.start + 1],
                ),
                _ => Err(GroupError::UnsupportedFactor(i)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SumAmalgam::new(groups))
    }

    fn renamed(&self, prefix: &str) -> (PresentedGroup, impl Fn(&Word) -> Word) {
        let pre = prefix.to_string();
        let ren = move |w: &Word| w.rename(|g| format!("{pre}{g}"));
        let g = PresentedGroup {
            generators: self
                .generators
                .iter()
                .map(|g| format!("{prefix}{g}"))
                .collect(),
            relators: self.relators.iter().map(&ren).collect(),
            structure: self.structure.clone(),
            abelianization: self.abelianization.clone(),
        };
        (g, ren)
    }
}

pub fn amalgam_normal_form(
    g: &PresentedGroup,
    w: &Word,
) -> Result<crate::group::AmalgamForm, GroupError> {
    g.sum_amalgam()?.normal_form(w)
}

pub fn alexander_polynomial(g: &PresentedGroup) -> Result<LaurentPolynomial, GroupError> {
    alexander_from_relators(&g.generators, &g.relators, &g.abelianization)
}

/// Wirtinger presentation; the relator of the last crossing is dropped.
pub fn wirtinger(d: &Diagram) -> (PresentedGroup, PeripheralPair) {
    wirtinger_dropping(d, d.crossing_count() - 1)
}

/// Wirtinger presentation omitting the relator of crossing `drop`.
///
/// At a crossing of sign `ε` with over-arc `k`, the under-strand passes
/// from arc `i` to arc `o` and `x_o = x_k^{-ε} x_i x_k^{ε}`. The longitude
/// reads `x_k^{ε}` at every under-passage from the start of arc 0 and is
/// corrected by `μ^{-writhe}`.
pub fn wirtinger_dropping(d: &Diagram, drop: usize) -> (PresentedGroup, PeripheralPair) {
    let n = d.crossing_count();
    let gen = |i: usize| format!("x{i}");
    let crossings = d.wirtinger_crossings();
    let relators = crossings
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != drop)
        .map(|(_, c)| {
            let e = c.sign.value();
            Word::of(&[
                (&gen(c.over), -e),
                (&gen(c.incoming), 1),
                (&gen(c.over), e),
                (&gen(c.outgoing), -1),
            ])
            .free_reduce()
        })
        .collect();
    // Crossing records are in traversal order of their under-passages and
    // record k ends arc k, so arc 0 starts after record n-1.
    let mut lambda = Word::identity();
    for c in &crossings {
        lambda = lambda.mul(&Word::pow(&gen(c.over), c.sign.value()));
    }
    let mu = Word::gen(&gen(0));
    let lambda = lambda.mul(&mu.power(-diagram::writhe(d)));
    let group = PresentedGroup {
        generators: (0..n).map(gen).collect(),
        relators,
        structure: Structure::Wirtinger,
        abelianization: vec![1; n],
    };
    (group, PeripheralPair { mu, lambda })
}

/// `⟨x, y | x^p y^{-q}⟩` with `μ = x^a y^b`, `aq + bp = 1`, and
/// `λ = x^p μ^{-pq}`.
pub fn torus_presentation(
    p: i64,
    q: i64,
) -> Result<(PresentedGroup, PeripheralPair), PresentationError> {
    KnotExpression::torus(p, q)?;
    let t = TorusGroup::standard(p, q)?;
    let group = PresentedGroup {
        generators: vec!["x".into(), "y".into()],
        relators: vec![Word::of(&[("x", p), ("y", -q)])],
        structure: Structure::Torus { p, q },
        abelianization: vec![q, p],
    };
    Ok((
        group,
        PeripheralPair {
            mu: t.meridian_word(),
            lambda: t.longitude_word(),
        },
    ))
}

/// Connected sum: factor generators are prefixed `f1_`, `f2_`, …; the
/// factor meridians are identified with the first. Factors that are sums
/// themselves are spliced in.
pub fn sum_presentation(
    factors: &[(PresentedGroup, PeripheralPair)],
) -> (PresentedGroup, PeripheralPair) {
    assert!(factors.len() >= 2, "a sum needs at least two factors");
    let mut generators = vec![];
    let mut abelianization = vec![];
    let mut relators = vec![];
    let mut parts = vec![];
    let mut mus = vec![];
    let mut lambda = Word::identity();
    for (i, (g, pp)) in factors.iter().enumerate() {
        let (rg, ren) = g.renamed(&format!("f{}_", i + 1));
        let off = generators.len();
        match &g.structure {
            Structure::Sum { factors: inner } => {
                parts.extend(
                    inner
                        .iter()
                        .map(|(r, s)| (r.start + off..r.end + off, s.shifted(off))),
                );
            }
            s => parts.push((off..off + g.generators.len(), s.shifted(off))),
        }
        generators.extend(rg.generators);
        abelianization.extend(rg.abelianization);
        relators.extend(rg.relators);
        mus.push(ren(&pp.mu));
        lambda = lambda.mul(&ren(&pp.lambda));
    }
    for m in &mus[1..] {
        relators.push(mus[0].mul(&m.inverse()));
    }
    let group = PresentedGroup {
        generators,
        relators,
        structure: Structure::Sum { factors: parts },
        abelianization,
    };
    (
        group,
        PeripheralPair {
            mu: mus[0].clone(),
            lambda,
        },
    )
}

/// Smallest `s > 0` with `a·s - b·r = 1`, returned as `(s, r)`.
pub fn cable_section_exponents(a: i64, b: i64) -> (i64, i64) {
    let m = b.abs();
    let s = if m == 1 {
        1
    } else {
        (1..=m)
            .find(|s| (a * s - 1).rem_euclid(m) == 0)
            .expect("gcd(a,b) = 1")
    };
    (s, (a * s - 1) / b)
}

/// `(a,b)`-cable of `companion` (`a` = longitudinal winding).
///
/// Cable space `⟨q, c, h | [q,h], [c,h], q^a h^b⟩` glued along `⟨c, h⟩` to
/// the companion's peripheral subgroup by `h = μ_J^b λ_J^a` and
/// `c = μ_J^s λ_J^r` with `a·s - b·r = 1`. Inside the cable space
/// `⟨q,h⟩ = ⟨t⟩` with `q = t^{-b}`, `h = t^a`; the meridian is `t^{-r} c`
/// written as `q^X h^Y c`, and `λ = h μ^{-ab}`.
pub fn cable_presentation(
    a: i64,
    b: i64,
    companion: &(PresentedGroup, PeripheralPair),
) -> Result<(PresentedGroup, PeripheralPair), PresentationError> {
    check_cable(a, b)?;
    let (a, b) = if a < 0 { (-a, -b) } else { (a, b) };
    let (s, r) = cable_section_exponents(a, b);
    let (cg, cp) = companion;
    let (rg, ren) = cg.renamed("j_");
    let (mu_j, lam_j) = (ren(&cp.mu), ren(&cp.lambda));
    let n = rg.generators.len();
    let mut generators = rg.generators;
    generators.extend(["q", "c", "h"].map(String::from));
    let mut abelianization: Vec<i64> = rg.abelianization.iter().map(|v| v * a).collect();
    abelianization.extend([-b * b, a * s, a * b]);
    let (q, c, h) = (Word::gen("q"), Word::gen("c"), Word::gen("h"));
    let mut relators = rg.relators;
    relators.push(Word::commutator(&q, &h));
    relators.push(Word::commutator(&c, &h));
    relators.push(q.power(a).mul(&h.power(b)));
    relators.push(h.inverse().mul(&mu_j.power(b)).mul(&lam_j.power(a)));
    relators.push(c.inverse().mul(&mu_j.power(s)).mul(&lam_j.power(r)));
    // -bX + aY = -r, X the least non-negative solution
    let x = (0..a)
        .find(|x| (b * x - r).rem_euclid(a) == 0)
        .expect("gcd(a,b) = 1");
    let y = (b * x - r) / a;
    let mu = q.power(x).mul(&h.power(y)).mul(&c);
    let lambda = h.mul(&mu.power(-a * b));
    let group = PresentedGroup {
        generators,
        relators,
        structure: Structure::Cable {
            a,
            b,
            companion: 0..n,
            inner: Box::new(cg.structure.clone()),
        },
        abelianization,
    };
    Ok((group, PeripheralPair { mu, lambda }))
}

fn check_cable(a: i64, b: i64) -> Result<(), NotationError> {
    let g = a.gcd(&b);
    if g != 1 {
        return Err(NotationError::GcdViolation(a, b, g));
    }
    if a.abs() < 2 {
        return Err(NotationError::TrivialKnotRejected(format!(
            "cable({a},{b}; ..) has a trivial pattern"
        )));
    }
    Ok(())
}

/// Builds the presentation for an expression. Diagram-backed inputs get a
/// Wirtinger presentation.
pub fn present(
    expr: &KnotExpression,
    census: Option<&CensusTable>,
) -> Result<(PresentedGroup, PeripheralPair), PresentationError> {
    let _ = census;
    match expr {
        KnotExpression::Torus { p, q } => torus_presentation(*p, *q),
        KnotExpression::Cable { a, b, companion } => {
            cable_presentation(*a, *b, &present(companion, census)?)
        }
        KnotExpression::Sum(_) => {
            let parts = expr
                .summands()
                .into_iter()
                .map(|f| present(f, census))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(sum_presentation(&parts))
        }
        KnotExpression::FromDiagram { source, .. } => {
            Ok(wirtinger(&diagram::source_to_diagram(source)?))
        }
    }
}

/// Result of reducing the abelianized relator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianizationReport {
    /// Non-zero diagonal entries of the Smith normal form.
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
    /// A generator of `Hom(H₁, ℤ)` on the generators, sign fixed by `μ ↦ 1`.
    pub map: Vec<i64>,
    pub mu_image: i64,
    pub lambda_image: i64,
}

impl fmt::Display for AbelianizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|v| v.to_string())
            .collect();
        write!(
            f,
            "H1 = Z (smith diagonal [{}], free rank {}); mu -> {}, lambda -> {}",
            inv.join(" "),
            self.free_rank,
            self.mu_image,
            self.lambda_image
        )
    }
}

/// Smith normal form of an integer matrix. Returns the diagonal and the
/// accumulated column operations `C` (so `U·M·C = D` for some unimodular
/// `U`).
fn smith(mut m: Vec<Vec<BigInt>>, cols: usize) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let rows = m.len();
    let mut c: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let col_op =
        |m: &mut Vec<Vec<BigInt>>, c: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, k: &BigInt| {
            for row in m.iter_mut() {
                let v = &row[src] * k;
                row[dst] -= v;
            }
            for row in c.iter_mut() {
                let v = &row[src] * k;
                row[dst] -= v;
            }
        };
    let col_swap = |m: &mut Vec<Vec<BigInt>>, c: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in m.iter_mut().chain(c.iter_mut()) {
            row.swap(i, j);
        }
    };
    let mut diag = vec![];
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest non-zero magnitude in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        col_swap(&mut m, &mut c, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let k = m[i][t].div_floor(&m[t][t]);
                    let pivot_row = m[t].clone();
                    for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= &k * p;
                    }
                    if !m[i][t].is_zero() {
                        m.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let k = m[t][j].div_floor(&m[t][t]);
                    col_op(&mut m, &mut c, j, t, &k);
                    if !m[t][j].is_zero() {
                        col_swap(&mut m, &mut c, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // divisibility condition for the remaining block
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
        if let Some((i, _)) = bad {
            let row = m[i].clone();
            for (x, y) in m[t].iter_mut().zip(&row) {
                *x += y;
            }
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    (diag, c)
}

/// Abelianization of `g`: confirms `H₁ ≅ ℤ`, `μ ↦ ±1` (the sign is fixed
/// to `+1`), `λ ↦ 0`.
pub fn abelianization_check(
    g: &PresentedGroup,
    p: &PeripheralPair,
) -> Result<AbelianizationReport, PresentationError> {
    let n = g.generators.len();
    let matrix: Vec<Vec<BigInt>> = g
        .relators
        .iter()
        .map(|r| {
            g.generators
                .iter()
                .map(|x| BigInt::from(r.exponent_sum(x)))
                .collect()
        })
        .collect();
    for r in &g.relators {
        for l in r.letters() {
            if !g.generators.contains(&l.gen) {
                return Err(GroupError::UnknownGenerator(l.gen.clone()).into());
            }
        }
    }
    let (diag, c) = smith(matrix, n);
    let rank = diag.len();
    let free_rank = n - rank;
    let units = diag.iter().all(|d| d.is_one());
    if free_rank != 1 || !units {
        return Err(PresentationError::H1NotZ {
            invariants: diag
                .iter()
                .filter(|d| !d.is_one())
                .map(|d| d.to_string())
                .collect(),
            free_rank,
        });
    }
    // The free coordinate is the last column of the column transform.
    let map: Vec<i64> = c
        .iter()
        .map(|row| row[n - 1].to_i64().expect("small coefficients"))
        .collect();
    let image = |w: &Word| -> i64 {
        w.letters()
            .iter()
            .map(|l| l.exp * map[g.generators.iter().position(|x| *x == l.gen).unwrap_or(0)])
            .sum()
    };
    for w in [&p.mu, &p.lambda] {
        for l in w.letters() {
            if !g.generators.contains(&l.gen) {
                return Err(GroupError::UnknownGenerator(l.gen.clone()).into());
            }
        }
    }
    let mut mu_image = image(&p.mu);
    let mut map = map;
    if mu_image == -1 {
        map.iter_mut().for_each(|v| *v = -*v);
        mu_image = 1;
    }
    if mu_image != 1 {
        return Err(PresentationError::MeridianNotGenerator(mu_image));
    }
    let lambda_image: i64 = p
        .lambda
        .letters()
        .iter()
        .map(|l| {
            l.exp
                * map[g
                    .generators
                    .iter()
                    .position(|x| *x == l.gen)
                    .expect("checked")]
        })
        .sum();
    if lambda_image != 0 {
        return Err(PresentationError::LongitudeNotNullHomologous(lambda_image));
    }
    Ok(AbelianizationReport {
        invariant_factors: diag,
        free_rank,
        map,
        mu_image,
        lambda_image,
    })
}

/// Renders the text form.
pub fn render_presentation(g: &PresentedGroup, p: &PeripheralPair) -> String {
    let mut out = format!("gen: {}\n", g.generators.join(" "));
    for r in &g.relators {
        out.push_str(&format!("rel: {r}\n"));
    }
    out.push_str(&format!(
        "mu: {}\nlambda: {}\nstructure: {}\n",
        p.mu, p.lambda, g.structure
    ));
    out
}

/// Parses the text form; the abelianization map is recomputed from the
/// relators.
pub fn parse_presentation(
    text: &str,
) -> Result<(PresentedGroup, PeripheralPair), PresentationError> {
    let mut generators = None;
    let mut relators = vec![];
    let mut mu = None;
    let mut lambda = None;
    let mut structure = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let ferr = |msg: String| PresentationError::Format { line: line_no, msg };
        if line.trim().is_empty() {
            continue;
        }
        let (key, val) = line
            .split_once(':')
            .ok_or_else(|| ferr("missing `key:`".into()))?;
        let val = val.trim();
        let word = |v: &str| v.parse::<Word>().map_err(|e| ferr(e.to_string()));
        match key.trim() {
            "gen" => {
                let gens: Vec<String> = val.split_whitespace().map(String::from).collect();
                if gens
                    .iter()
                    .any(|g| !crate::group::word::valid_generator_name(g))
                {
                    return Err(ferr("invalid generator name".into()));
                }
                generators = Some(gens);
            }
            "rel" => relators.push(word(val)?),
            "mu" => mu = Some(word(val)?),
            "lambda" => lambda = Some(word(val)?),
            "structure" => structure = Some(val.parse::<Structure>().map_err(ferr)?),
            other => return Err(ferr(format!("unknown key `{other}`"))),
        }
    }
    let last = text.lines().count();
    let missing = |what: &str| PresentationError::Format {
        line: last,
        msg: format!("missing `{what}:` line"),
    };
    let generators = generators.ok_or_else(|| missing("gen"))?;
    let mut group = PresentedGroup {
        abelianization: vec![0; generators.len()],
        generators,
        relators,
        structure: structure.ok_or_else(|| missing("structure"))?,
    };
    let pair = PeripheralPair {
        mu: mu.ok_or_else(|| missing("mu"))?,
        lambda: lambda.ok_or_else(|| missing("lambda"))?,
    };
    let report = abelianization_check(&group, &pair)?;
    group.abelianization = report.map;
    Ok((group, pair))
}
