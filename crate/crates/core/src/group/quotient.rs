//! Homomorphisms onto transitive permutation groups of small degree.
//!
//! Search: the first generator ranges over one representative per cycle
//! type (every homomorphism is conjugate to such a one). Each later step
//! picks the unassigned generator whose assignment forces the most others
//! and tries, in a seed-rotated order, either the roots of a forced power
//! or the permutations of the cycle type its conjugacy class already has.
//! Every relator with exactly one unassigned generator occurring once with
//! exponent ±1 determines that generator; fully assigned relators must
//! evaluate to the identity. Results are transitive and pairwise
//! non-conjugate.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::word::Word;
use super::GroupError;

pub const MAX_DEGREE: usize = 9;

/// Permutation of `{0, …, n-1}`, acting on the right: `i^(ab) = (i^a)^b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    n: u8,
    img: [u8; MAX_DEGREE],
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&n));
        let mut img = [0u8; MAX_DEGREE];
        for (i, v) in img.iter_mut().enumerate() {
            *v = i as u8;
        }
        Self { n: n as u8, img }
    }

    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return None;
        }
        let mut seen = [false; MAX_DEGREE];
        let mut p = Self::identity(n);
        for (i, &v) in images.iter().enumerate() {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return None;
            }
            p.img[i] = v as u8;
        }
        Some(p)
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    /// Injective packing into 4-bit nibbles, for hashing.
    #[inline]
    pub fn code(&self) -> u64 {
        self.img[..self.degree()]
            .iter()
            .rev()
            .fold(0u64, |acc, &v| (acc << 4) | v as u64)
    }

    pub fn images(&self) -> Vec<usize> {
        (0..self.degree()).map(|i| self.apply(i)).collect()
    }

    /// `self` then `other`.
    #[inline]
    pub fn then(&self, other: &Perm) -> Perm {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[i] = other.img[self.img[i] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Perm {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[self.img[i] as usize] = i as u8;
        }
        out
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { *self };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..e.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.apply(i) == i)
    }

    /// Conjugate `g self g⁻¹` (as group elements under right action).
    pub fn conjugated_by(&self, g: &Perm) -> Perm {
        g.then(self).then(&g.inverse())
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; MAX_DEGREE];
        let mut lens = vec![];
        for s in 0..self.degree() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = self.apply(c);
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

/// All permutations of degree `n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![];
    loop {
        out.push(Perm::from_images(&cur).expect("valid"));
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// One permutation per cycle type (partition of `n`, largest parts first),
/// built from consecutive cycles `(0 1 … k-1)(k …)…`.
fn cycle_type_representatives(n: usize) -> Vec<Perm> {
    fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            partitions(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut parts = vec![];
    partitions(n, n, &mut vec![], &mut parts);
    parts
        .into_iter()
        .map(|part| {
            let mut img = vec![0; n];
            let mut start = 0;
            for k in part {
                for i in 0..k {
                    img[start + i] = start + (i + 1) % k;
                }
                start += k;
            }
            Perm::from_images(&img).expect("valid")
        })
        .collect()
}

/// A homomorphism from a presented group onto a transitive subgroup of
/// `S_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuotient {
    pub degree: usize,
    pub generators: Vec<String>,
    pub images: Vec<Perm>,
    /// Identity hash of the source presentation.
    pub source: String,
}

impl FiniteQuotient {
    pub fn image_of(&self, gen: &str) -> Option<&Perm> {
        self.generators
            .iter()
            .position(|g| g == gen)
            .map(|i| &self.images[i])
    }
}

pub fn quotient_eval(q: &FiniteQuotient, w: &Word) -> Result<Perm, GroupError> {
    let mut acc = Perm::identity(q.degree);
    for l in w.letters() {
        let img = q
            .image_of(&l.gen)
            .ok_or_else(|| GroupError::UnknownGenerator(l.gen.clone()))?;
        acc = acc.then(&img.pow(l.exp));
    }
    Ok(acc)
}

/// Subgroup generated by `gens` inside `S_n`, by closure under right
/// multiplication.
pub fn generate_subgroup(n: usize, gens: &[Perm]) -> HashSet<Perm> {
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let nx = p.then(g);
            if seen.insert(nx) {
                queue.push_back(nx);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientSearch {
    pub max_degree: usize,
    pub count: usize,
    pub seed: u64,
    /// Backtracking nodes allowed per degree.
    pub node_budget: u64,
}

impl QuotientSearch {
    pub fn new(max_degree: usize, count: usize, seed: u64) -> Self {
        Self {
            max_degree,
            count,
            seed,
            node_budget: 400_000,
        }
    }
}

/// Relators compiled against the generator list.
struct Compiled {
    relators: Vec<Vec<(usize, i64)>>,
    /// generators occurring in each relator
    occurs: Vec<Vec<usize>>,
    /// representative of each generator's conjugacy class as certified by
    /// relators of the form `u a u⁻¹ b⁻¹`
    class: Vec<usize>,
}

impl Compiled {
    fn new(gens: &[String], relators: &[Word]) -> Result<Self, GroupError> {
        let relators = relators
            .iter()
            .map(|r| r.free_reduce().indexed(gens))
            .collect::<Result<Vec<_>, _>>()?;
        let occurs = relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(g, _)| g)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect()
            })
            .collect();
        let mut class: Vec<usize> = (0..gens.len()).collect();
        fn find(c: &mut [usize], mut i: usize) -> usize {
            while c[i] != i {
                c[i] = c[c[i]];
                i = c[i];
            }
            i
        }
        for r in &relators {
            if let Some((a, b)) = conjugated_pair(r) {
                let (ra, rb) = (find(&mut class, a), find(&mut class, b));
                class[ra.max(rb)] = ra.min(rb);
            }
        }
        for i in 0..class.len() {
            class[i] = find(&mut class, i);
        }
        Ok(Self {
            relators,
            occurs,
            class,
        })
    }
}

/// If some cyclic rotation of `r` reads `u a u⁻¹ b⁻¹` for single letters
/// `a`, `b`, the generators `a` and `b` are conjugate.
fn conjugated_pair(r: &[(usize, i64)]) -> Option<(usize, usize)> {
    let steps: Vec<(usize, i64)> = r
        .iter()
        .flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
        .collect();
    let len = steps.len();
    if len < 2 || !len.is_multiple_of(2) {
        return None;
    }
    let half = (len - 2) / 2;
    (0..len).find_map(|rot| {
        let at = |i: usize| steps[(rot + i) % len];
        let (a, b) = (at(half), at(len - 1));
        let shape = a.1 == 1
            && b.1 == -1
            && (0..half).all(|i| {
                let (x, y) = (at(i), at(len - 2 - i));
                x.0 == y.0 && x.1 == -y.1
            });
        shape.then_some((a.0, b.0))
    })
}

struct DegreeSearch<'a> {
    n: usize,
    comp: &'a Compiled,
    perms: &'a [Perm],
    by_type: HashMap<Vec<usize>, Vec<Perm>>,
    /// `k` → (code of `p^k` → all such `p`), built on demand
    roots: HashMap<i64, HashMap<u64, Vec<Perm>>>,
    reps: Vec<Perm>,
    offsets: Vec<usize>,
    want: usize,
    nodes: u64,
    budget: u64,
    found: Vec<Vec<Perm>>,
    canon: HashSet<Vec<u8>>,
}

impl DegreeSearch<'_> {
    fn relator_holds(&self, r: usize, img: &[Option<Perm>]) -> bool {
        let mut acc = Perm::identity(self.n);
        for &(g, e) in &self.comp.relators[r] {
            let p = img[g].expect("assigned");
            acc = acc.then(&p.pow(e));
        }
        acc.is_identity()
    }

    /// Fills in forced generators; false on a contradiction.
    fn propagate(&self, img: &mut [Option<Perm>]) -> bool {
        loop {
            let mut changed = false;
            for r in 0..self.comp.relators.len() {
                let unassigned: Vec<usize> = self.comp.occurs[r]
                    .iter()
                    .copied()
                    .filter(|&g| img[g].is_none())
                    .collect();
                match unassigned.len() {
                    0 => {
                        if !self.relator_holds(r, img) {
                            return false;
                        }
                    }
                    1 => {
                        let g = unassigned[0];
                        let rel = &self.comp.relators[r];
                        let hits: Vec<usize> = (0..rel.len()).filter(|&i| rel[i].0 == g).collect();
                        if hits.len() != 1 || rel[hits[0]].1.abs() != 1 {
                            continue;
                        }
                        // u g^e v = 1  =>  g^e = u⁻¹ v⁻¹
                        let k = hits[0];
                        let mut u = Perm::identity(self.n);
                        for &(h, e) in &rel[..k] {
                            u = u.then(&img[h].expect("assigned").pow(e));
                        }
                        let mut v = Perm::identity(self.n);
                        for &(h, e) in &rel[k + 1..] {
                            v = v.then(&img[h].expect("assigned").pow(e));
                        }
                        let ge = u.inverse().then(&v.inverse());
                        img[g] = Some(if rel[k].1 > 0 { ge } else { ge.inverse() });
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Generators forced once `known` are assigned, by repeatedly solving
    /// relators with a single unknown occurring once.
    fn closure(&self, known: &mut [bool]) -> usize {
        let mut count = 0;
        loop {
            let mut changed = false;
            for r in 0..self.comp.relators.len() {
                let mut unknown = self.comp.occurs[r].iter().filter(|&&g| !known[g]);
                if let (Some(&g), None) = (unknown.next(), unknown.next()) {
                    let rel = &self.comp.relators[r];
                    let hits: Vec<i64> = rel.iter().filter(|l| l.0 == g).map(|l| l.1).collect();
                    if hits.len() == 1 && hits[0].abs() == 1 {
                        known[g] = true;
                        count += 1;
                        changed = true;
                    }
                }
            }
            if !changed {
                return count;
            }
        }
    }

    /// The unassigned generator whose assignment forces the most others;
    /// lowest index on ties.
    fn next_generator(&self, img: &[Option<Perm>]) -> Option<usize> {
        let base: Vec<bool> = img.iter().map(Option::is_some).collect();
        let mut best: Option<(usize, usize)> = None;
        for g in (0..img.len()).filter(|&g| !base[g]) {
            let mut known = base.clone();
            known[g] = true;
            let score = self.closure(&mut known);
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, g));
            }
        }
        best.map(|(_, g)| g)
    }

    /// For a relator in which `g` is the only unassigned generator and
    /// occurs in a single syllable `g^e`: `(e, g^e)` as forced by the others.
    fn forced_power(&self, r: usize, g: usize, img: &[Option<Perm>]) -> Option<(i64, Perm)> {
        let rel = &self.comp.relators[r];
        let hits: Vec<usize> = (0..rel.len()).filter(|&i| rel[i].0 == g).collect();
        let &[k] = hits.as_slice() else { return None };
        let eval = |part: &[(usize, i64)]| {
            part.iter().fold(Perm::identity(self.n), |acc, &(h, e)| {
                acc.then(&img[h].expect("assigned").pow(e))
            })
        };
        // u g^e v = 1  =>  g^e = u⁻¹ v⁻¹
        let target = eval(&rel[..k])
            .inverse()
            .then(&eval(&rel[k + 1..]).inverse());
        Some((rel[k].1, target))
    }

    /// Relators that become fully assigned once `g` is.
    fn closing_relators(&self, g: usize, img: &[Option<Perm>]) -> Vec<usize> {
        (0..self.comp.relators.len())
            .filter(|&r| {
                self.comp.occurs[r].contains(&g)
                    && self.comp.occurs[r]
                        .iter()
                        .all(|&h| h == g || img[h].is_some())
            })
            .collect()
    }

    fn roots_of(&mut self, e: i64, target: Perm) -> Vec<Perm> {
        let (e, target) = if e < 0 {
            (-e, target.inverse())
        } else {
            (e, target)
        };
        let perms = self.perms;
        let index = self.roots.entry(e).or_insert_with(|| {
            let mut m: HashMap<u64, Vec<Perm>> = HashMap::new();
            for p in perms {
                m.entry(p.pow(e).code()).or_default().push(*p);
            }
            m
        });
        index.get(&target.code()).cloned().unwrap_or_default()
    }

    fn run(&mut self, img: Vec<Option<Perm>>) {
        if self.found.len() >= self.want || self.nodes >= self.budget {
            return;
        }
        self.nodes += 1;
        let mut img = img;
        if !self.propagate(&mut img) {
            return;
        }
        let Some(next) = self.next_generator(&img) else {
            let full: Vec<Perm> = img.into_iter().map(|p| p.expect("assigned")).collect();
            if is_transitive(self.n, &full) && self.canon.insert(canonical_form(self.n, &full)) {
                self.found.push(full);
            }
            return;
        };
        if img.iter().all(Option::is_none) {
            for rep in self.reps.clone() {
                let mut trial = img.clone();
                trial[next] = Some(rep);
                self.run(trial);
            }
            return;
        }
        let closing = self.closing_relators(next, &img);
        let class = self.comp.class[next];
        let same_class = (0..img.len()).find(|&g| self.comp.class[g] == class && img[g].is_some());
        let power = closing
            .iter()
            .find_map(|&r| self.forced_power(r, next, &img));
        let (pool, rotate) = match (power, same_class) {
            // a power is forced: candidates are its roots
            (Some((e, target)), _) => (self.roots_of(e, target), false),
            (None, Some(g)) => (
                self.by_type[&img[g].expect("assigned").cycle_type()].clone(),
                true,
            ),
            (None, None) => (self.perms.to_vec(), true),
        };
        let total = pool.len();
        if total == 0 {
            return;
        }
        let offset = if rotate {
            self.offsets[next] % total
        } else {
            0
        };
        let mut trial = img;
        for k in 0..total {
            if self.found.len() >= self.want || self.nodes >= self.budget {
                return;
            }
            trial[next] = Some(pool[(offset + k) % total]);
            // rejecting a candidate costs a node too
            if !closing.iter().all(|&r| self.relator_holds(r, &trial)) {
                self.nodes += 1;
                continue;
            }
            self.run(trial.clone());
        }
    }
}

fn is_transitive(n: usize, gens: &[Perm]) -> bool {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for g in gens {
            let j = g.apply(i);
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}

/// Canonical form of a transitive tuple up to simultaneous conjugation:
/// the lexicographically least relabelling by breadth-first numbering from
/// some start point.
pub fn canonical_form(n: usize, gens: &[Perm]) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    for start in 0..n {
        let mut label = vec![u8::MAX; n];
        let mut order = vec![start];
        label[start] = 0;
        let mut head = 0;
        while head < order.len() {
            let i = order[head];
            head += 1;
            for g in gens {
                let j = g.apply(i);
                if label[j] == u8::MAX {
                    label[j] = order.len() as u8;
                    order.push(j);
                }
            }
        }
        let mut code = Vec::with_capacity(n * gens.len());
        for g in gens {
            for &i in &order {
                code.push(label[g.apply(i)]);
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.unwrap_or_default()
}

/// Finds up to `cfg.count` transitive quotients of degree `2..=max_degree`,
/// interleaving degrees round-robin (lowest first) in the output.
pub fn find_quotients(
    gens: &[String],
    relators: &[Word],
    source: &str,
    cfg: &QuotientSearch,
) -> Result<Vec<FiniteQuotient>, GroupError> {
    if cfg.max_degree > MAX_DEGREE {
        return Err(GroupError::DegreeTooLarge(cfg.max_degree));
    }
    if gens.is_empty() || cfg.count == 0 {
        return Ok(vec![]);
    }
    let comp = Compiled::new(gens, relators)?;
    let mut per_degree: Vec<Vec<Vec<Perm>>> = vec![];
    for n in 2..=cfg.max_degree {
        let perms = all_perms(n);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((n as u64) << 32));
        let offsets = (0..gens.len())
            .map(|_| rng.gen_range(0..perms.len()))
            .collect();
        let mut search = DegreeSearch {
            n,
            comp: &comp,
            perms: &perms,
            by_type: perms.iter().fold(
                HashMap::new(),
                |mut m: HashMap<Vec<usize>, Vec<Perm>>, p| {
                    m.entry(p.cycle_type()).or_default().push(*p);
                    m
                },
            ),
            roots: HashMap::new(),
            reps: cycle_type_representatives(n),
            offsets,
            want: cfg.count,
            nodes: 0,
            budget: cfg.node_budget,
            found: vec![],
            canon: HashSet::new(),
        };
        search.run(vec![None; gens.len()]);
        per_degree.push(search.found);
    }
    let mut out = vec![];
    let mut round = 0;
    while out.len() < cfg.count {
        let mut any = false;
        for (k, found) in per_degree.iter().enumerate() {
            if let Some(images) = found.get(round) {
                any = true;
                if out.len() < cfg.count {
                    out.push(FiniteQuotient {
                        degree: k + 2,
                        generators: gens.to_vec(),
                        images: images.clone(),
                        source: source.to_string(),
                    });
                }
            }
        }
        if !any {
            break;
        }
        round += 1;
    }
    Ok(out)
}
