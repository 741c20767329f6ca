//! Normal forms in `G₁ *_⟨μ⟩ G₂ *_⟨μ⟩ … *_⟨μ⟩ G_r`, the group of a connected
//! sum, where every factor is a torus-knot group and all factor meridians
//! are identified with one element `μ`.
//!
//! An element is written `μ^e · s₁ · s₂ ⋯ s_m` where each `sᵢ` is a
//! non-trivial canonical representative of a right coset `⟨μ⟩ g` in its
//! factor and consecutive syllables come from different factors. Two words
//! are equal in the group iff their forms coincide.

use super::torus::{NormalForm, TorusGroup};
use super::word::{Letter, Word};
use super::GroupError;

#[derive(Debug, Clone)]
pub struct AmalgamFactor {
    pub group: TorusGroup,
    meridian: NormalForm,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AmalgamForm {
    pub mu_exp: i64,
    pub syllables: Vec<(usize, NormalForm)>,
}

impl AmalgamForm {
    pub fn is_identity(&self) -> bool {
        self.mu_exp == 0 && self.syllables.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SumAmalgam {
    factors: Vec<AmalgamFactor>,
}

impl SumAmalgam {
    pub fn new(groups: Vec<TorusGroup>) -> Self {
        let factors = groups
            .into_iter()
            .map(|group| {
                let meridian = group.meridian();
                AmalgamFactor { group, meridian }
            })
            .collect();
        Self { factors }
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &AmalgamFactor {
        &self.factors[i]
    }

    fn factor_of(&self, gen: &str) -> Result<usize, GroupError> {
        self.factors
            .iter()
            .position(|f| f.group.owns(gen))
            .ok_or_else(|| GroupError::UnknownGenerator(gen.to_string()))
    }

    /// Splits a factor element as `μ^e · r` with `r` the canonical
    /// representative of `⟨μ⟩ g`: the least element `μ^j g` under
    /// `NormalForm::order_key`. Modulo the center, `μ^j g` has at least
    /// `2|j| - s` syllables, so `|j| ≤ s + 1` contains the minimum.
    fn split(&self, f: usize, g: &NormalForm) -> (i64, NormalForm) {
        let fac = &self.factors[f];
        let grp = &fac.group;
        let bound = g.syllables.len() as i64 + 1;
        let mut best: Option<(i64, NormalForm)> = None;
        for j in -bound..=bound {
            let cand = grp.mul(&grp.pow(&fac.meridian, j), g);
            let better = match &best {
                None => true,
                Some((_, b)) => cand.order_key() < b.order_key(),
            };
            if better {
                best = Some((j, cand));
            }
        }
        let (j, rep) = best.expect("non-empty search range");
        (-j, rep)
    }

    /// Moves `μ^e` from the right end of `form` to its front.
    fn absorb(&self, form: &mut AmalgamForm, mut e: i64) {
        for (f, syl) in form.syllables.iter_mut().rev() {
            if e == 0 {
                return;
            }
            let grp = &self.factors[*f].group;
            let t = grp.mul(syl, &grp.pow(&self.factors[*f].meridian, e));
            let (e2, rep) = self.split(*f, &t);
            debug_assert!(!rep.is_identity());
            *syl = rep;
            e = e2;
        }
        form.mu_exp += e;
    }

    /// Right-multiplies by the factor-`f` element `g`.
    fn push(&self, form: &mut AmalgamForm, f: usize, g: &NormalForm) {
        let t = match form.syllables.last() {
            Some((lf, last)) if *lf == f => {
                let t = self.factors[f].group.mul(last, g);
                form.syllables.pop();
                t
            }
            _ => g.clone(),
        };
        let (e, rep) = self.split(f, &t);
        self.absorb(form, e);
        if !rep.is_identity() {
            form.syllables.push((f, rep));
        }
    }

    pub fn normal_form(&self, w: &Word) -> Result<AmalgamForm, GroupError> {
        let mut form = AmalgamForm::default();
        for l in w.letters() {
            let f = self.factor_of(&l.gen)?;
            let grp = &self.factors[f].group;
            let g = grp.normal_form(&Word::from_letters(vec![Letter {
                gen: l.gen.clone(),
                exp: l.exp,
            }]))?;
            self.push(&mut form, f, &g);
        }
        Ok(form)
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool, GroupError> {
        Ok(self.normal_form(w)?.is_identity())
    }

    /// Decides `w ∈ ⟨μ, λ⟩` for `λ = λ₁ λ₂ ⋯ λ_r`, returning `(i, j)` with
    /// `w = μ^i λ^j`. Each `λ_f` commutes with `μ` and lies outside `⟨μ⟩`,
    /// so `λ^j` has exactly `r·|j|` syllables.
    pub fn peripheral_membership(
        &self,
        w: &Word,
        longitude: &Word,
    ) -> Result<Option<(i64, i64)>, GroupError> {
        let nf = self.normal_form(w)?;
        let r = self.factors.len();
        let m = nf.syllables.len();
        if m % r != 0 {
            return Ok(None);
        }
        let half = (m / r) as i64;
        let candidates: &[i64] = if half == 0 { &[0] } else { &[half, -half] };
        for &j in candidates {
            let lj = self.normal_form(&longitude.power(j))?;
            if lj.syllables == nf.syllables {
                return Ok(Some((nf.mu_exp - lj.mu_exp, j)));
            }
        }
        Ok(None)
    }
}
