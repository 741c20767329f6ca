//! Normal forms in the torus-knot group `⟨x, y | x^p = y^q⟩`.
//!
//! With `X = x^sign(p)`, `Y = y^sign(q)`, `P = |p|`, `Q = |q|` the group is
//! the amalgam `⟨X⟩ *_{X^P = Y^Q} ⟨Y⟩`. The amalgamated element `z = X^P` is
//! central, so every element is uniquely `z^k` times an alternating product
//! of syllables `X^e` (`0 < e < P`) and `Y^f` (`0 < f < Q`).

use num_integer::Integer;

use super::word::Word;
use super::GroupError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable {
    X(i64),
    Y(i64),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NormalForm {
    /// Exponent of the central element `z`.
    pub central: i64,
    pub syllables: Vec<Syllable>,
}

impl NormalForm {
    pub fn is_identity(&self) -> bool {
        self.central == 0 && self.syllables.is_empty()
    }

    /// Total order used to pick canonical coset representatives.
    pub(crate) fn order_key(&self) -> (usize, &[Syllable], u64, i64) {
        (
            self.syllables.len(),
            &self.syllables,
            self.central.unsigned_abs(),
            self.central,
        )
    }
}

/// A torus-knot group with named generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusGroup {
    p: i64,
    q: i64,
    x: String,
    y: String,
}

impl TorusGroup {
    pub fn new(p: i64, q: i64, x: &str, y: &str) -> Result<Self, GroupError> {
        if p.gcd(&q) != 1 || p.abs() < 2 || q.abs() < 2 {
            return Err(GroupError::BadTorusParameters(p, q));
        }
        Ok(Self {
            p,
            q,
            x: x.to_string(),
            y: y.to_string(),
        })
    }

    pub fn standard(p: i64, q: i64) -> Result<Self, GroupError> {
        Self::new(p, q, "x", "y")
    }

    pub fn params(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    pub fn generator_names(&self) -> (&str, &str) {
        (&self.x, &self.y)
    }

    fn big_p(&self) -> i64 {
        self.p.abs()
    }

    fn big_q(&self) -> i64 {
        self.q.abs()
    }

    pub fn identity(&self) -> NormalForm {
        NormalForm::default()
    }

    /// The central element `z = x^p`.
    pub fn center(&self) -> NormalForm {
        NormalForm {
            central: 1,
            syllables: vec![],
        }
    }

    pub fn owns(&self, gen: &str) -> bool {
        gen == self.x || gen == self.y
    }

    /// Right-multiplies `nf` by `X^e` (or `Y^e`).
    fn push(&self, nf: &mut NormalForm, syl: Syllable) {
        let (e, modulus, is_x) = match syl {
            Syllable::X(e) => (e, self.big_p(), true),
            Syllable::Y(e) => (e, self.big_q(), false),
        };
        let merged = match nf.syllables.last() {
            Some(Syllable::X(t)) if is_x => {
                let t = *t;
                nf.syllables.pop();
                t + e
            }
            Some(Syllable::Y(t)) if !is_x => {
                let t = *t;
                nf.syllables.pop();
                t + e
            }
            _ => e,
        };
        let (k, r) = merged.div_mod_floor(&modulus);
        nf.central += k;
        if r != 0 {
            nf.syllables
                .push(if is_x { Syllable::X(r) } else { Syllable::Y(r) });
        }
    }

    pub fn normal_form(&self, w: &Word) -> Result<NormalForm, GroupError> {
        let mut nf = NormalForm::default();
        self.extend(&mut nf, w)?;
        Ok(nf)
    }

    pub fn extend(&self, nf: &mut NormalForm, w: &Word) -> Result<(), GroupError> {
        for l in w.letters() {
            let syl = if l.gen == self.x {
                Syllable::X(l.exp * self.p.signum())
            } else if l.gen == self.y {
                Syllable::Y(l.exp * self.q.signum())
            } else {
                return Err(GroupError::UnknownGenerator(l.gen.clone()));
            };
            self.push(nf, syl);
        }
        Ok(())
    }

    pub fn mul(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        let mut out = a.clone();
        out.central += b.central;
        for &s in &b.syllables {
            self.push(&mut out, s);
        }
        out
    }

    pub fn inverse(&self, a: &NormalForm) -> NormalForm {
        let mut out = NormalForm {
            central: -a.central,
            syllables: vec![],
        };
        for s in a.syllables.iter().rev() {
            let inv = match *s {
                Syllable::X(e) => Syllable::X(-e),
                Syllable::Y(e) => Syllable::Y(-e),
            };
            self.push(&mut out, inv);
        }
        out
    }

    pub fn pow(&self, a: &NormalForm, n: i64) -> NormalForm {
        let base = if n < 0 { self.inverse(a) } else { a.clone() };
        (0..n.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(&acc, &base))
    }

    /// Meridian `x^a y^b` with `a·q + b·p = 1`, `a > 0` minimal.
    pub fn meridian_exponents(&self) -> (i64, i64) {
        meridian_exponents(self.p, self.q)
    }

    pub fn meridian_word(&self) -> Word {
        let (a, b) = self.meridian_exponents();
        Word::from_letters(vec![])
            .mul(&Word::pow(&self.x, a))
            .mul(&Word::pow(&self.y, b))
    }

    /// Longitude `x^p · μ^{-pq}`.
    pub fn longitude_word(&self) -> Word {
        Word::pow(&self.x, self.p).mul(&self.meridian_word().power(-self.p * self.q))
    }

    pub fn meridian(&self) -> NormalForm {
        self.normal_form(&self.meridian_word())
            .expect("own generators")
    }

    /// Decides `w ∈ ⟨μ, z⟩`, returning `(m, k)` with `w = z^k μ^m`.
    ///
    /// Modulo the center `μ` is a cyclically reduced two-syllable element of
    /// `Z_P * Z_Q`, so `μ^m` has exactly `2|m|` syllables and only `m = ±s/2`
    /// can match a normal form with `s` syllables.
    pub fn peripheral_membership(&self, w: &Word) -> Result<Option<(i64, i64)>, GroupError> {
        let nf = self.normal_form(w)?;
        Ok(self.peripheral_membership_nf(&nf))
    }

    pub fn peripheral_membership_nf(&self, nf: &NormalForm) -> Option<(i64, i64)> {
        let s = nf.syllables.len() as i64;
        if s % 2 != 0 {
            return None;
        }
        let mu = self.meridian();
        debug_assert_eq!(mu.syllables.len(), 2);
        let half = s / 2;
        let candidates: &[i64] = if half == 0 { &[0] } else { &[half, -half] };
        candidates.iter().find_map(|&m| {
            let mm = self.pow(&mu, m);
            (mm.syllables == nf.syllables).then(|| (m, nf.central - mm.central))
        })
    }
}

/// `(a, b)` with `a·q + b·p = 1` and `a > 0` as small as possible.
pub fn meridian_exponents(p: i64, q: i64) -> (i64, i64) {
    let eg = q.extended_gcd(&p);
    debug_assert_eq!(eg.gcd.abs(), 1);
    let (a0, b0) = (eg.x * eg.gcd, eg.y * eg.gcd);
    let step = p.abs();
    let a = (a0 - 1).rem_euclid(step) + 1;
    let t = (a - a0) / p;
    let b = b0 - t * q;
    debug_assert!(a >= 1 && a <= step, "a = {a}");
    debug_assert_eq!(a * q + b * p, 1);
    (a, b)
}

pub fn torus_normal_form(p: i64, q: i64, w: &Word) -> Result<NormalForm, GroupError> {
    TorusGroup::standard(p, q)?.normal_form(w)
}

pub fn torus_peripheral_membership(
    p: i64,
    q: i64,
    w: &Word,
) -> Result<Option<(i64, i64)>, GroupError> {
    TorusGroup::standard(p, q)?.peripheral_membership(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(pairs: &[(&str, i64)]) -> Word {
        Word::of(pairs)
    }

    #[test]
    fn normal_form_examples() {
        let g = TorusGroup::standard(2, 3).unwrap();
        assert_eq!(
            g.normal_form(&w(&[("x", 2)])).unwrap(),
            NormalForm {
                central: 1,
                syllables: vec![]
            }
        );
        assert_eq!(
            g.normal_form(&w(&[("x", 3)])).unwrap(),
            NormalForm {
                central: 1,
                syllables: vec![Syllable::X(1)]
            }
        );
        let comm = g
            .normal_form(&w(&[("y", -1), ("x", 1), ("y", 1), ("x", -1)]))
            .unwrap();
        assert!(!comm.syllables.is_empty());
        assert!(matches!(
            g.normal_form(&w(&[("t", 1)])),
            Err(GroupError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn meridian_examples() {
        assert_eq!(meridian_exponents(2, 3), (1, -1));
        assert_eq!(meridian_exponents(2, 5), (1, -2));
        assert_eq!(meridian_exponents(3, 4), (1, -1));
        assert_eq!(meridian_exponents(2, -3), (1, 2));
        assert_eq!(meridian_exponents(-2, 3), (1, 1));
        for p in -7i64..=7 {
            for q in -7i64..=7 {
                if p.abs() >= 2 && q.abs() >= 2 && p.gcd(&q) == 1 {
                    let (a, b) = meridian_exponents(p, q);
                    assert_eq!(a * q + b * p, 1);
                    assert!(a >= 1 && a <= p.abs());
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let mu = w(&[("x", 1), ("y", -1)]);
        assert_eq!(
            torus_peripheral_membership(2, 3, &mu).unwrap(),
            Some((1, 0))
        );
        assert_eq!(
            torus_peripheral_membership(2, 3, &w(&[("x", 2)])).unwrap(),
            Some((0, 1))
        );
        assert_eq!(
            torus_peripheral_membership(2, 3, &w(&[("x", 1)])).unwrap(),
            None
        );
    }

    /// Independent check of `x ∉ P`: compare against every `z^k μ^m` in a box.
    #[test]
    fn x_not_peripheral_by_enumeration() {
        let g = TorusGroup::standard(2, 3).unwrap();
        let x = g.normal_form(&w(&[("x", 1)])).unwrap();
        let mu = g.meridian_word();
        for k in -3..=3 {
            for m in -6..=6 {
                let cand = Word::pow("x", 2 * k).mul(&mu.power(m));
                assert_ne!(g.normal_form(&cand).unwrap(), x);
            }
        }
    }

    #[test]
    fn longitude_times_meridian_power_is_center() {
        for (p, q) in [(2, 3), (2, 5), (3, 4), (3, 5), (2, -7), (-5, 6)] {
            let g = TorusGroup::standard(p, q).unwrap();
            let fiber = g.longitude_word().mul(&g.meridian_word().power(p * q));
            assert_eq!(
                g.normal_form(&fiber).unwrap(),
                g.normal_form(&Word::pow("x", p)).unwrap()
            );
            assert_eq!(g.normal_form(&Word::pow("x", p)).unwrap(), g.center());
        }
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((prop::bool::ANY, -5i64..=5), 0..10).prop_map(|v| {
            Word::of(
                &v.into_iter()
                    .map(|(isx, e)| (if isx { "x" } else { "y" }, e))
                    .collect::<Vec<_>>(),
            )
        })
    }

    proptest! {
        #[test]
        fn congruence_relator_and_centrality(
            u in arb_word(), v in arb_word(), (p, q) in prop::sample::select(vec![(2i64, 3i64), (3, 5), (2, -5), (4, 7)])
        ) {
            let g = TorusGroup::standard(p, q).unwrap();
            let nu = g.normal_form(&u).unwrap();
            let nv = g.normal_form(&v).unwrap();
            prop_assert_eq!(g.normal_form(&u.mul(&v)).unwrap(), g.mul(&nu, &nv));
            let rel = Word::pow("x", p).mul(&Word::pow("y", -q));
            prop_assert!(g.normal_form(&rel).unwrap().is_identity());
            let z = Word::pow("x", p);
            prop_assert_eq!(g.normal_form(&z.conjugate_by(&u)).unwrap(), g.center());
            prop_assert!(g.mul(&nu, &g.inverse(&nu)).is_identity());
        }

        #[test]
        fn membership_matches_construction(m in -5i64..=5, k in -3i64..=3) {
            let g = TorusGroup::standard(3, 5).unwrap();
            let word = Word::pow("x", 3 * k).mul(&g.meridian_word().power(m));
            prop_assert_eq!(g.peripheral_membership(&word).unwrap(), Some((m, k)));
        }
    }
}
