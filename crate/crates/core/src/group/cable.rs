//! The cable space `C = ⟨q, c, h | [q,h], [c,h], q^a h^b⟩` modulo its
//! central fibre: `C/⟨h⟩ = ⟨q, c | q^a⟩ ≅ ℤ/a * ℤ`.
//!
//! Free-product normal forms there decide membership in the image of the
//! outer peripheral subgroup `⟨μ, h⟩`, which is `⟨μ̄⟩` with `μ̄ = q^X c`.
//! An element whose image lies outside `⟨μ̄⟩` is outside `⟨μ, h⟩` in `C`,
//! and so in the knot group, into which `C` embeds across the
//! incompressible companion torus.

use super::word::Word;
use super::GroupError;

/// Alternating syllables `q^e` (`0 < e < a`) and `c^k` (`k ≠ 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CableSyllable {
    Q(i64),
    C(i64),
}

#[derive(Debug, Clone)]
pub struct CableSpace {
    a: i64,
    q: String,
    c: String,
    h: String,
}

impl CableSpace {
    pub fn new(a: i64, q: &str, c: &str, h: &str) -> Self {
        Self {
            a: a.abs(),
            q: q.into(),
            c: c.into(),
            h: h.into(),
        }
    }

    /// `true` when every letter of `w` is one of `q, c, h`.
    pub fn owns(&self, w: &Word) -> bool {
        w.letters()
            .iter()
            .all(|l| l.gen == self.q || l.gen == self.c || l.gen == self.h)
    }

    /// Normal form of the image of `w` in `ℤ/a * ℤ`.
    pub fn normal_form(&self, w: &Word) -> Result<Vec<CableSyllable>, GroupError> {
        let mut out: Vec<CableSyllable> = vec![];
        for l in w.letters() {
            let s = if l.gen == self.q {
                CableSyllable::Q(l.exp)
            } else if l.gen == self.c {
                CableSyllable::C(l.exp)
            } else if l.gen == self.h {
                continue;
            } else {
                return Err(GroupError::UnknownGenerator(l.gen.clone()));
            };
            let merged = match (out.last(), &s) {
                (Some(CableSyllable::Q(e)), CableSyllable::Q(f)) => Some(CableSyllable::Q(e + f)),
                (Some(CableSyllable::C(e)), CableSyllable::C(f)) => Some(CableSyllable::C(e + f)),
                _ => None,
            };
            match merged {
                Some(m) => {
                    out.pop();
                    out.push(m);
                }
                None => out.push(s),
            }
            // normalize the tail, which may cancel and expose a mergeable pair
            loop {
                match out.last_mut() {
                    Some(CableSyllable::Q(e)) => {
                        *e = e.rem_euclid(self.a);
                        if *e != 0 {
                            break;
                        }
                    }
                    Some(CableSyllable::C(k)) if *k != 0 => break,
                    Some(CableSyllable::C(_)) => {}
                    None => break,
                }
                out.pop();
                let n = out.len();
                if n >= 2 {
                    let merged = match (&out[n - 2], &out[n - 1]) {
                        (CableSyllable::Q(e), CableSyllable::Q(f)) => Some(CableSyllable::Q(e + f)),
                        (CableSyllable::C(e), CableSyllable::C(f)) => Some(CableSyllable::C(e + f)),
                        _ => None,
                    };
                    if let Some(m) = merged {
                        out.truncate(n - 2);
                        out.push(m);
                        continue;
                    }
                }
                break;
            }
        }
        Ok(out)
    }

    /// Whether the image of `w` lies in `⟨μ̄⟩`. `μ` must be cyclically
    /// reduced in `ℤ/a * ℤ` with a non-trivial `q` part (true for the
    /// cable meridian `q^X h^Y c`).
    pub fn in_meridian_image(&self, w: &Word, mu: &Word) -> Result<bool, GroupError> {
        let k = w.exponent_sum(&self.c);
        let target = self.normal_form(&mu.power(k))?;
        Ok(self.normal_form(w)? == target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space() -> CableSpace {
        CableSpace::new(3, "q", "c", "h")
    }

    #[test]
    fn normal_forms() {
        let s = space();
        let w: Word = "q^2 h c c^-1 q^4 h^-3".parse().unwrap();
        assert_eq!(s.normal_form(&w).unwrap(), vec![]);
        let w: Word = "q c q^3 c^2".parse().unwrap();
        assert_eq!(
            s.normal_form(&w).unwrap(),
            vec![CableSyllable::Q(1), CableSyllable::C(3)]
        );
        assert!(s.normal_form(&"x".parse().unwrap()).is_err());
    }

    #[test]
    fn membership() {
        let s = space();
        let mu: Word = "q h^-1 c".parse().unwrap();
        assert!(!s.in_meridian_image(&Word::gen("c"), &mu).unwrap());
        assert!(!s.in_meridian_image(&Word::gen("q"), &mu).unwrap());
        assert!(s.in_meridian_image(&Word::gen("h"), &mu).unwrap());
        assert!(s
            .in_meridian_image(&"q c q c h^5".parse().unwrap(), &mu)
            .unwrap());
    }

    proptest! {
        // the normal form is a homomorphism invariant: w·w⁻¹ reduces to nothing,
        // and it is unchanged by inserting q^a or h
        #[test]
        fn normal_form_is_well_defined(
            letters in proptest::collection::vec((0usize..3, -4i64..=4), 0..12),
            at in 0usize..12,
        ) {
            let s = space();
            let names = ["q", "c", "h"];
            let w = Word::of(&letters.iter().map(|&(g, e)| (names[g], e)).collect::<Vec<_>>());
            prop_assert!(s.normal_form(&w.mul(&w.inverse())).unwrap().is_empty());
            let cut = at.min(letters.len());
            let (l, r) = letters.split_at(cut);
            let wl = Word::of(&l.iter().map(|&(g, e)| (names[g], e)).collect::<Vec<_>>());
            let wr = Word::of(&r.iter().map(|&(g, e)| (names[g], e)).collect::<Vec<_>>());
            let padded = wl.mul(&Word::of(&[("q", 3), ("h", 2)])).mul(&wr);
            prop_assert_eq!(s.normal_form(&padded).unwrap(), s.normal_form(&w).unwrap());
        }
    }
}
