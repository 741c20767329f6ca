use std::fmt;
use std::str::FromStr;

use super::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: String,
    pub exp: i64,
}

/// A word in a free group over named generators, stored as syllables
/// `gen^exp`. Not reduced unless [`Word::free_reduce`] was applied.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn gen(name: &str) -> Self {
        Self::pow(name, 1)
    }

    pub fn pow(name: &str, exp: i64) -> Self {
        Self {
            letters: vec![Letter {
                gen: name.to_string(),
                exp,
            }],
        }
    }

    /// Convenience for literals: `Word::of(&[("x", 2), ("y", -1)])`.
    pub fn of(pairs: &[(&str, i64)]) -> Self {
        Self {
            letters: pairs
                .iter()
                .map(|&(g, e)| Letter {
                    gen: g.to_string(),
                    exp: e,
                })
                .collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of syllables.
    pub fn syllable_count(&self) -> usize {
        self.letters.len()
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }.free_reduce()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    gen: l.gen.clone(),
                    exp: -l.exp,
                })
                .collect(),
        }
    }

    pub fn power(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.letters.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend(base.letters.iter().cloned());
        }
        Word { letters }.free_reduce()
    }

    /// `a b a⁻¹ b⁻¹`
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if l.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(top) if top.gen == l.gen => {
                    top.exp += l.exp;
                    if top.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l.clone()),
            }
        }
        Word { letters: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.iter().all(|l| l.exp != 0)
            && self.letters.windows(2).all(|w| w[0].gen != w[1].gen)
    }

    pub fn rename(&self, f: impl Fn(&str) -> String) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter {
                    gen: f(&l.gen),
                    exp: l.exp,
                })
                .collect(),
        }
    }

    pub fn exponent_sum(&self, gen: &str) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.exp)
            .sum()
    }

    /// Letters expanded to `(index, ±1)` steps against a generator list.
    pub fn indexed(&self, gens: &[String]) -> Result<Vec<(usize, i64)>, GroupError> {
        self.letters
            .iter()
            .map(|l| {
                gens.iter()
                    .position(|g| *g == l.gen)
                    .map(|i| (i, l.exp))
                    .ok_or_else(|| GroupError::UnknownGenerator(l.gen.clone()))
            })
            .collect()
    }
}

impl fmt::Display for Word {
    /// Token format: `x^2 y^-1`, the empty word is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if l.exp == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, l.exp)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for Word {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::identity());
        }
        let letters = s
            .split_whitespace()
            .map(|tok| {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => {
                        let e = e
                            .parse::<i64>()
                            .map_err(|_| GroupError::MalformedWord(tok.to_string()))?;
                        (n, e)
                    }
                    None => (tok, 1),
                };
                if !valid_generator_name(name) || exp == 0 {
                    return Err(GroupError::MalformedWord(tok.to_string()));
                }
                Ok(Letter {
                    gen: name.to_string(),
                    exp,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word { letters })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn free_reduce_examples() {
        assert!(Word::of(&[("x", 1), ("x", -1)]).free_reduce().is_empty());
        assert_eq!(
            Word::of(&[("x", 2), ("y", 1), ("y", -1), ("x", 1)]).free_reduce(),
            Word::of(&[("x", 3)])
        );
        let w = Word::of(&[("x", 2), ("y", -1)]);
        assert_eq!(w.free_reduce(), w);
    }

    #[test]
    fn token_format() {
        let w: Word = "x^2 y^-1 f1_x".parse().unwrap();
        assert_eq!(w, Word::of(&[("x", 2), ("y", -1), ("f1_x", 1)]));
        assert_eq!(w.to_string(), "x^2 y^-1 f1_x");
        assert_eq!(Word::identity().to_string(), "1");
        assert!("x^0".parse::<Word>().is_err());
        assert!("2x".parse::<Word>().is_err());
        assert!("x^a".parse::<Word>().is_err());
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, -3i64..=3), 0..12).prop_map(|v| {
            Word::from_letters(
                v.into_iter()
                    .map(|(g, e)| Letter {
                        gen: ["x", "y", "z"][g].to_string(),
                        exp: e,
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn reduce_idempotent_and_shrinking(w in arb_word()) {
            let r = w.free_reduce();
            prop_assert!(r.is_reduced());
            prop_assert_eq!(r.free_reduce(), r.clone());
            prop_assert!(r.length() <= w.length());
        }

        #[test]
        fn inverse_cancels(w in arb_word()) {
            prop_assert!(w.mul(&w.inverse()).is_empty());
        }

        #[test]
        fn render_parse_round_trip(w in arb_word()) {
            let r = w.free_reduce();
            prop_assert_eq!(r.to_string().parse::<Word>().unwrap(), r);
        }
    }
}
