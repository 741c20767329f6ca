//! Bounded search for non-malnormality patterns.
//!
//! Candidates are triples `(g, μ^i λ^j, μ^i λ^{j'})` with `g` a freely
//! reduced word of length ≤ `g_length` and `|i|, |j|, |j'| ≤ p_exponent`
//! (both peripheral elements non-trivial; `i` agrees by homology). A
//! candidate is dropped when no sampled quotient certifies `g ∉ P`, or when
//! the conjugation identity fails in some quotient. Both filters only use
//! necessary conditions, so a genuine witness with a certified `g` always
//! survives.

use std::collections::{BinaryHeap, HashMap, HashSet};
use std::hash::{BuildHasherDefault, Hasher};

use rayon::prelude::*;

use crate::group::quotient::generate_subgroup;
use crate::group::{quotient_eval, FiniteQuotient, Letter, Perm, QuotientSearch, Word};
use crate::presentation::{PeripheralPair, PresentedGroup};

use super::MalnormalityError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProbeBounds {
    pub g_length: usize,
    pub p_exponent: i64,
    pub quotient_budget: usize,
    pub degree_cap: usize,
    pub seed: u64,
    /// Survivors listed in the report; all are counted.
    pub survivor_limit: usize,
}

impl Default for ProbeBounds {
    fn default() -> Self {
        // |i| = 6 reaches the trefoil fibre λμ⁶; degree 9 brings the
        // quotients that refute the 6_2 pattern μ²λ⁻¹
        Self {
            g_length: 6,
            p_exponent: 6,
            quotient_budget: 50,
            degree_cap: 9,
            seed: 7,
            survivor_limit: 20,
        }
    }
}

/// Search nodes per degree; a two-bridge diagram needs about 3.7·10⁵ to
/// exhaust degree 9.
const PROBE_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Survivor {
    pub g: Word,
    /// `(i, j)` of `p₀ = μ^i λ^j`
    pub p0: (i64, i64),
    /// `(i, j')` of `p₁ = μ^i λ^{j'}`
    pub p1: (i64, i64),
}

impl Survivor {
    pub fn p0_word(&self, p: &PeripheralPair) -> Word {
        p.mu.power(self.p0.0).mul(&p.lambda.power(self.p0.1))
    }

    pub fn p1_word(&self, p: &PeripheralPair) -> Word {
        p.mu.power(self.p1.0).mul(&p.lambda.power(self.p1.1))
    }
}

/// Outcome for a candidate injected into the stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectedOutcome {
    pub candidate: Survivor,
    pub g_certified_outside: bool,
    pub identity_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub bounds: ProbeBounds,
    /// The first `survivor_limit` survivors in short-lex order of `g`.
    pub survivors: Vec<Survivor>,
    pub survivor_total: u64,
    pub quotients_used: usize,
    pub no_refutation_power: bool,
    pub injected: Vec<InjectedOutcome>,
}

#[derive(Default)]
struct NibbleHasher(u64);

impl Hasher for NibbleHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (v ^ (v >> 29)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
}

type FastMap<V> = HashMap<u64, V, BuildHasherDefault<NibbleHasher>>;
type FastSet = HashSet<u64, BuildHasherDefault<NibbleHasher>>;

struct Prepared {
    /// index into the quotient list
    source: usize,
    gens: Vec<Perm>,
    inv: Vec<Perm>,
    peripheral: FastSet,
    /// `μ^i λ^j`, indexed by `(i + e)(2e + 1) + (j + e)`
    table: Vec<Perm>,
}

struct Ctx<'a> {
    e: i64,
    qs: Vec<Prepared>,
    /// code of `μ^i λ^{j'}` in the first quotient → `(i, j')`
    lookup: FastMap<Vec<(i64, i64)>>,
    letters: Vec<(usize, i64)>,
    gen_names: &'a [String],
    limit: usize,
}

impl Ctx<'_> {
    fn idx(&self, i: i64, j: i64) -> usize {
        ((i + self.e) * (2 * self.e + 1) + (j + self.e)) as usize
    }

    /// Number of `(p₀, p₁)` pairs per `g`: `(i,j) ≠ 0` and `(i,j') ≠ 0`.
    fn candidate_count(&self) -> u64 {
        let side = (2 * self.e + 1) as u64;
        (side - 1) * side * side + (side - 1) * (side - 1)
    }

    /// Every pair, in key order.
    fn all_pairs(&self) -> impl Iterator<Item = ((i64, i64), (i64, i64))> + '_ {
        let e = self.e;
        (-e..=e)
            .flat_map(move |i| {
                (-e..=e).flat_map(move |j| (-e..=e).map(move |j2| ((i, j), (i, j2))))
            })
            .filter(|&(a, b)| a != (0, 0) && b != (0, 0))
    }

    fn certified_outside(&self, imgs: &[Perm]) -> bool {
        self.qs
            .iter()
            .zip(imgs)
            .any(|(q, g)| !q.peripheral.contains(&g.code()))
    }

    /// Survivors for a single `g` (images given per prepared quotient);
    /// needs at least one quotient.
    fn triples(&self, imgs: &[Perm], mut emit: impl FnMut((i64, i64), (i64, i64))) {
        let e = self.e;
        if !self.certified_outside(imgs) {
            return;
        }
        let q0 = &self.qs[0];
        let (g0, g0i) = (imgs[0], imgs[0].inverse());
        for i in -e..=e {
            for j in -e..=e {
                if (i, j) == (0, 0) {
                    continue;
                }
                let c = g0.then(&q0.table[self.idx(i, j)]).then(&g0i);
                let Some(hits) = self.lookup.get(&c.code()) else {
                    continue;
                };
                for &(i2, j2) in hits {
                    if i2 != i || (i, j2) == (0, 0) {
                        continue;
                    }
                    if self.qs[1..].iter().zip(&imgs[1..]).all(|(q, g)| {
                        g.then(&q.table[self.idx(i, j)]).then(&g.inverse())
                            == q.table[self.idx(i, j2)]
                    }) {
                        emit((i, j), (i, j2));
                    }
                }
            }
        }
    }
}

/// Key ordering survivors: short-lex on letter indices, then exponents.
type Key = (usize, Vec<usize>, (i64, i64), (i64, i64));

struct Collector {
    heap: BinaryHeap<Key>,
    total: u64,
    limit: usize,
}

impl Collector {
    fn new(limit: usize) -> Self {
        Self {
            heap: BinaryHeap::new(),
            total: 0,
            limit,
        }
    }

    fn add(&mut self, word: &[usize], p0: (i64, i64), p1: (i64, i64)) {
        self.total += 1;
        self.offer((word.len(), word.to_vec(), p0, p1));
    }

    /// Keeps `key` if it is among the `limit` smallest seen.
    fn offer(&mut self, key: Key) -> bool {
        if self.heap.len() < self.limit {
            self.heap.push(key);
            true
        } else if self.heap.peek().is_some_and(|top| key < *top) {
            self.heap.pop();
            self.heap.push(key);
            true
        } else {
            false
        }
    }

    fn merge(mut self, other: Collector) -> Collector {
        self.total += other.total;
        for k in other.heap {
            self.offer(k);
        }
        self
    }
}

fn walk(ctx: &Ctx<'_>, max_len: usize, word: &mut Vec<usize>, imgs: &[Perm], out: &mut Collector) {
    if ctx.qs.is_empty() {
        // nothing refutes anything: count every pair, list the smallest
        out.total += ctx.candidate_count();
        for (p0, p1) in ctx.all_pairs() {
            if !out.offer((word.len(), word.clone(), p0, p1)) {
                break;
            }
        }
    } else {
        ctx.triples(imgs, |p0, p1| out.add(word, p0, p1));
    }
    if word.len() == max_len {
        return;
    }
    let last = word.last().copied();
    for (li, &(g, e)) in ctx.letters.iter().enumerate() {
        if let Some(l) = last {
            let (lg, le) = ctx.letters[l];
            if lg == g && le == -e {
                continue;
            }
        }
        let next: Vec<Perm> = ctx
            .qs
            .iter()
            .zip(imgs)
            .map(|(q, p)| p.then(if e > 0 { &q.gens[g] } else { &q.inv[g] }))
            .collect();
        word.push(li);
        walk(ctx, max_len, word, &next, out);
        word.pop();
    }
}

fn prepare(
    g: &PresentedGroup,
    p: &PeripheralPair,
    qs: &[FiniteQuotient],
    e: i64,
) -> Result<Vec<Prepared>, MalnormalityError> {
    let mut out = vec![];
    for (source, q) in qs.iter().enumerate() {
        let mu = quotient_eval(q, &p.mu)?;
        let la = quotient_eval(q, &p.lambda)?;
        let peripheral = generate_subgroup(q.degree, &[mu, la])
            .into_iter()
            .map(|x| x.code())
            .collect();
        let mut table = vec![];
        for i in -e..=e {
            for j in -e..=e {
                table.push(mu.pow(i).then(&la.pow(j)));
            }
        }
        let order: Vec<usize> = g
            .generators
            .iter()
            .map(|x| {
                q.generators
                    .iter()
                    .position(|y| y == x)
                    .expect("same generators")
            })
            .collect();
        let gens: Vec<Perm> = order.iter().map(|&i| q.images[i]).collect();
        let inv = gens.iter().map(Perm::inverse).collect();
        out.push(Prepared {
            source,
            gens,
            inv,
            peripheral,
            table,
        });
    }
    // largest peripheral image first: fewest collisions in the lookup
    out.sort_by_key(|q| std::cmp::Reverse(q.peripheral.len()));
    Ok(out)
}

pub fn probe_malnormality(
    g: &PresentedGroup,
    p: &PeripheralPair,
    bounds: &ProbeBounds,
) -> Result<ProbeReport, MalnormalityError> {
    probe_with_candidates(g, p, bounds, &[])
}

/// Runs the probe; `extra` candidates are evaluated under the same filters
/// and reported separately.
pub fn probe_with_candidates(
    g: &PresentedGroup,
    p: &PeripheralPair,
    bounds: &ProbeBounds,
    extra: &[Survivor],
) -> Result<ProbeReport, MalnormalityError> {
    let e = bounds.p_exponent.max(0);
    let quotients = if bounds.quotient_budget == 0 {
        vec![]
    } else {
        let search = QuotientSearch::new(bounds.degree_cap, bounds.quotient_budget, bounds.seed);
        g.quotients(&QuotientSearch {
            node_budget: PROBE_NODE_BUDGET,
            ..search
        })?
    };
    let qs = prepare(g, p, &quotients, e)?;
    let mut lookup: FastMap<Vec<(i64, i64)>> = FastMap::default();
    if let Some(q0) = qs.first() {
        for i in -e..=e {
            for j in -e..=e {
                let code = q0.table[((i + e) * (2 * e + 1) + (j + e)) as usize].code();
                lookup.entry(code).or_default().push((i, j));
            }
        }
    }
    let letters: Vec<(usize, i64)> = (0..g.generators.len())
        .flat_map(|i| [(i, 1), (i, -1)])
        .collect();
    let ctx = Ctx {
        e,
        qs,
        lookup,
        letters,
        gen_names: &g.generators,
        limit: bounds.survivor_limit,
    };

    let mut root = Collector::new(ctx.limit);
    if bounds.g_length > 0 {
        // the empty word is in P and never a candidate
        let branches: Vec<Collector> = (0..ctx.letters.len())
            .into_par_iter()
            .map(|li| {
                let (gi, ex) = ctx.letters[li];
                let imgs: Vec<Perm> = ctx
                    .qs
                    .iter()
                    .map(|q| if ex > 0 { q.gens[gi] } else { q.inv[gi] })
                    .collect();
                let mut out = Collector::new(ctx.limit);
                walk(&ctx, bounds.g_length, &mut vec![li], &imgs, &mut out);
                out
            })
            .collect();
        for b in branches {
            root = root.merge(b);
        }
    }
    let mut keys = root.heap.into_vec();
    keys.sort();
    let survivors = keys
        .into_iter()
        .map(|(_, w, p0, p1)| Survivor {
            g: ctx.word_of(&w),
            p0,
            p1,
        })
        .collect();

    let mut injected = vec![];
    for cand in extra {
        let mut outside = ctx.qs.is_empty();
        for q in &ctx.qs {
            outside |= !q
                .peripheral
                .contains(&quotient_eval(&quotients[q.source], &cand.g)?.code());
        }
        injected.push(InjectedOutcome {
            candidate: cand.clone(),
            g_certified_outside: outside,
            identity_holds: identity_holds(&quotients, p, cand)?,
        });
    }

    Ok(ProbeReport {
        bounds: *bounds,
        survivors,
        survivor_total: root.total,
        quotients_used: quotients.len(),
        no_refutation_power: quotients.is_empty(),
        injected,
    })
}

fn identity_holds(
    qs: &[FiniteQuotient],
    p: &PeripheralPair,
    c: &Survivor,
) -> Result<bool, MalnormalityError> {
    let rel =
        c.g.mul(&c.p0_word(p))
            .mul(&c.g.inverse())
            .mul(&c.p1_word(p).inverse());
    for q in qs {
        if !quotient_eval(q, &rel)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Ctx<'_> {
    fn word_of(&self, letters: &[usize]) -> Word {
        Word::from_letters(
            letters
                .iter()
                .map(|&li| {
                    let (g, e) = self.letters[li];
                    Letter {
                        gen: self.gen_names[g].clone(),
                        exp: e,
                    }
                })
                .collect(),
        )
        .free_reduce()
    }
}
