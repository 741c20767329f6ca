//! Symbolic group computation: free words, normal forms in torus-knot
//! groups, their meridian amalgams and cable spaces, finite permutation quotients, and
//! Fox-calculus Alexander polynomials.

pub mod alexander;
pub mod amalgam;
pub mod cable;
pub mod quotient;
pub mod torus;
pub mod word;

pub use alexander::{alexander_from_relators, torus_alexander, LaurentPolynomial, Poly};
pub use amalgam::{AmalgamForm, SumAmalgam};
pub use cable::{CableSpace, CableSyllable};
pub use quotient::{find_quotients, quotient_eval, FiniteQuotient, Perm, QuotientSearch};
pub use torus::{torus_normal_form, torus_peripheral_membership, NormalForm, Syllable, TorusGroup};
pub use word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word token `{0}`")]
    MalformedWord(String),
    #[error("torus parameters ({0},{1}) need gcd 1 and |p|,|q| >= 2")]
    BadTorusParameters(i64, i64),
    #[error("factor {0} has no membership oracle")]
    UnsupportedFactor(usize),
    #[error(
        "Fox calculus needs at least n-1 relators (got {relators} for {generators} generators)"
    )]
    NotDeficiencyOne { generators: usize, relators: usize },
    #[error("all Fox minors vanish; first homology is not infinite cyclic")]
    DegenerateAlexander,
    #[error("permutation degree {0} exceeds the supported maximum")]
    DegreeTooLarge(usize),
}

/// Freely reduces `w`.
pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}
