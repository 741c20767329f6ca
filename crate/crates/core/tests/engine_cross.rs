//! The torus normal-form engine against finite quotients: two words have
//! the same normal form exactly when every sampled quotient sends them to
//! the same permutation.

use periph_core::group::{quotient_eval, FiniteQuotient, QuotientSearch, TorusGroup, Word};
use periph_core::presentation::torus_presentation;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS_PER_GROUP: usize = 150;

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    let letters: Vec<(&str, i64)> = (0..len)
        .map(|_| {
            let g = if rng.gen_bool(0.5) { "x" } else { "y" };
            let e = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
            (g, e)
        })
        .collect();
    Word::of(&letters)
}

/// A word equal to `w` in `⟨x, y | x^p = y^q⟩`: relators and central
/// elements inserted at random positions, and a conjugation by a random word.
fn disguise(rng: &mut ChaCha8Rng, w: &Word, p: i64, q: i64) -> Word {
    let rel = Word::of(&[("x", p), ("y", -q)]);
    let center = Word::of(&[("x", p)]);
    let mut out = w.clone();
    for _ in 0..3 {
        let cut = rng.gen_range(0..=out.letters().len());
        let (l, r) = out.letters().split_at(cut);
        let insert = if rng.gen_bool(0.5) {
            rel.clone()
        } else {
            rel.inverse()
        };
        out = Word::from_letters(l.to_vec())
            .mul(&insert)
            .mul(&Word::from_letters(r.to_vec()));
    }
    let c = random_word(rng, 3);
    // c z c⁻¹ w z⁻¹ = w since z is central
    c.mul(&center)
        .mul(&c.inverse())
        .mul(&out)
        .mul(&center.inverse())
}

fn quotients(p: i64, q: i64) -> Vec<FiniteQuotient> {
    let (g, _) = torus_presentation(p, q).unwrap();
    g.quotients(&QuotientSearch::new(8, 60, 11)).unwrap()
}

fn separated(qs: &[FiniteQuotient], a: &Word, b: &Word) -> bool {
    qs.iter()
        .any(|q| quotient_eval(q, a).unwrap() != quotient_eval(q, b).unwrap())
}

fn cross_check(p: i64, q: i64, seed: u64) -> (usize, usize) {
    let t = TorusGroup::standard(p, q).unwrap();
    let qs = quotients(p, q);
    assert!(
        qs.len() >= 20,
        "torus({p},{q}): only {} quotients",
        qs.len()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut equal, mut distinct) = (0, 0);
    for i in 0..PAIRS_PER_GROUP {
        let a = random_word(&mut rng, 9);
        let b = if i % 2 == 0 {
            disguise(&mut rng, &a, p, q)
        } else {
            random_word(&mut rng, 9)
        };
        let nf_equal = t.normal_form(&a).unwrap() == t.normal_form(&b).unwrap();
        assert_eq!(
            nf_equal,
            !separated(&qs, &a, &b),
            "torus({p},{q}): {a} vs {b}"
        );
        if nf_equal {
            equal += 1;
        } else {
            distinct += 1;
        }
    }
    (equal, distinct)
}

#[test]
fn trefoil_pairs_agree() {
    let (equal, distinct) = cross_check(2, 3, 2);
    assert!(equal >= PAIRS_PER_GROUP / 2 && distinct >= PAIRS_PER_GROUP / 4);
}

#[test]
fn torus_3_5_pairs_agree() {
    let (equal, distinct) = cross_check(3, 5, 3);
    assert!(equal >= PAIRS_PER_GROUP / 2 && distinct >= PAIRS_PER_GROUP / 4);
}

#[test]
fn peripheral_membership_of_known_elements() {
    for (p, q) in [(2, 3), (3, 5), (2, 7)] {
        let t = TorusGroup::standard(p, q).unwrap();
        let (mu, la) = (t.meridian_word(), t.longitude_word());
        let w = mu.power(5).mul(&la.power(-2));
        // coordinates (m, k) of z^k μ^m with z = x^p = λ μ^{pq}
        assert_eq!(
            t.peripheral_membership(&w).unwrap(),
            Some((5 + 2 * p * q, -2))
        );
        assert_eq!(t.peripheral_membership(&Word::gen("x")).unwrap(), None);
        assert_eq!(
            t.peripheral_membership(&Word::gen("x").power(p)).unwrap(),
            Some((0, 1))
        );
        assert_eq!(t.peripheral_membership(&la).unwrap(), Some((-p * q, 1)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_a_homomorphism(
        a in proptest::collection::vec((0usize..2, -4i64..=4), 0..10),
        b in proptest::collection::vec((0usize..2, -4i64..=4), 0..10),
    ) {
        let t = TorusGroup::standard(3, 5).unwrap();
        let names = ["x", "y"];
        let wa = Word::of(&a.iter().map(|&(g, e)| (names[g], e)).collect::<Vec<_>>());
        let wb = Word::of(&b.iter().map(|&(g, e)| (names[g], e)).collect::<Vec<_>>());
        let (na, nb) = (t.normal_form(&wa).unwrap(), t.normal_form(&wb).unwrap());
        prop_assert_eq!(t.normal_form(&wa.mul(&wb)).unwrap(), t.mul(&na, &nb));
        prop_assert!(t.normal_form(&wa.mul(&wa.inverse())).unwrap().is_identity());
        prop_assert_eq!(t.normal_form(&wa.inverse()).unwrap(), t.inverse(&na));
    }
}
