//! Alexander polynomials by Fox calculus.
//!
//! The Fox Jacobian of the relators is pushed through the abelianization
//! `x ↦ t^{φ(x)}`; the polynomial is the gcd of its `(n-1)`-minors over
//! `ℤ[t^{±1}]`, normalized up to units `±t^k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::word::Word;
use super::GroupError;

/// Dense polynomial in `ℤ[t]`, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Poly(vec![c.into()]).trimmed()
    }

    pub fn monomial(c: impl Into<BigInt>, deg: usize) -> Self {
        let mut v = vec![BigInt::zero(); deg + 1];
        v[deg] = c.into();
        Poly(v).trimmed()
    }

    pub fn from_coeffs<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Poly(coeffs.into_iter().map(Into::into).collect()).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigInt::zero();
        Poly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
        .trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    fn scale(&self, c: &BigInt) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        let mut p = Poly(self.0.iter().map(|x| x / &c).collect());
        if p.lead().is_negative() {
            p = p.neg();
        }
        p
    }

    /// Exact quotient over `ℤ`, or `None` if `o` does not divide `self`.
    pub fn div_exact(&self, o: &Poly) -> Option<Poly> {
        assert!(!o.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let od = o.degree().expect("nonzero");
        let Some(sd) = rem.degree() else {
            return Some(Poly::zero());
        };
        if sd < od {
            return None;
        }
        let mut quot = vec![BigInt::zero(); sd - od + 1];
        while let Some(rd) = rem.degree() {
            if rd < od {
                return None;
            }
            let (q, r) = rem.lead().div_rem(o.lead());
            if !r.is_zero() {
                return None;
            }
            let k = rd - od;
            rem = rem.sub(&o.scale(&q).shift(k));
            quot[k] = q;
        }
        Some(Poly(quot).trimmed())
    }

    /// Pseudo-remainder `lc(o)^{deg a - deg o + 1} · a mod o`.
    fn pseudo_rem(&self, o: &Poly) -> Poly {
        let od = o.degree().expect("nonzero");
        let mut rem = self.clone();
        let lc = o.lead().clone();
        while let Some(rd) = rem.degree() {
            if rd < od {
                break;
            }
            let k = rd - od;
            let c = rem.lead().clone();
            rem = rem.scale(&lc).sub(&o.scale(&c).shift(k));
        }
        rem
    }

    /// Gcd in `ℤ[t]` via the primitive remainder sequence, with positive
    /// leading coefficient.
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.primitive_part().scale(&o.content());
        }
        if o.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let c = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive_part(), o.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part().scale(&c)
    }

    /// `p(t^k)`.
    pub fn substitute_power(&self, k: usize) -> Poly {
        assert!(k >= 1);
        let mut v = vec![BigInt::zero(); self.0.len().saturating_sub(1) * k + 1];
        for (i, c) in self.0.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Poly(v).trimmed()
    }
}

/// A Laurent polynomial normalized up to `±t^k`: lowest exponent 0,
/// positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    poly: Poly,
}

impl LaurentPolynomial {
    /// Normalizes `Σ coeffs[i] t^{low + i}`.
    pub fn normalized(p: Poly) -> Self {
        let mut v = p.0;
        let first = v.iter().position(|c| !c.is_zero()).unwrap_or(v.len());
        v.drain(..first);
        let mut poly = Poly(v).trimmed();
        if !poly.is_zero() && poly.lead().is_negative() {
            poly = poly.neg();
        }
        Self { poly }
    }

    pub fn from_coeffs<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::normalized(Poly::from_coeffs(coeffs))
    }

    pub fn from_map(map: &BTreeMap<i64, BigInt>) -> Self {
        let Some((&low, _)) = map.iter().next() else {
            return Self::normalized(Poly::zero());
        };
        let high = *map.keys().next_back().expect("nonempty");
        let mut v = vec![BigInt::zero(); (high - low) as usize + 1];
        for (e, c) in map {
            v[(e - low) as usize] = c.clone();
        }
        Self::normalized(Poly(v))
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Exponent → coefficient, zero coefficients omitted.
    pub fn coefficients(&self) -> BTreeMap<i64, BigInt> {
        self.poly
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64, c.clone()))
            .collect()
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(self.poly.mul(&o.poly))
    }

    pub fn substitute_power(&self, k: i64) -> Self {
        // Δ(t^{-k}) ≐ Δ(t^k) after normalization (symmetric up to units).
        Self::normalized(self.poly.substitute_power(k.unsigned_abs() as usize))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.poly.0.iter().sum()
    }
}

impl fmt::Display for LaurentPolynomial {
    /// `t^2 - 3*t + 1`, highest degree first; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.poly.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            match (mag.is_one(), var.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => f.write_str(&var)?,
                (false, false) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed polynomial: {0}")]
pub struct PolyParseError(pub String);

impl FromStr for LaurentPolynomial {
    type Err = PolyParseError;

    /// Accepts sums of terms `c`, `c*t^k`, `t^k`, `-t`, spaces optional,
    /// negative exponents allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PolyParseError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut terms = vec![];
        let mut cur = String::new();
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, exp) = match body.find('t') {
                None => (body.parse::<BigInt>().map_err(|_| err())?, 0),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let c = if c.is_empty() {
                        BigInt::one()
                    } else {
                        c.parse().map_err(|_| err())?
                    };
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(err)?
                            .parse::<i64>()
                            .map_err(|_| err())?
                    };
                    (c, e)
                }
            };
            *map.entry(exp).or_default() += if neg { -coef } else { coef };
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self::from_map(&map))
    }
}

/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, the torus-knot polynomial.
pub fn torus_alexander(p: i64, q: i64) -> LaurentPolynomial {
    let (p, q) = (p.unsigned_abs() as usize, q.unsigned_abs() as usize);
    let tm1 = |k: usize| Poly::monomial(1, k).sub(&Poly::constant(1));
    let num = tm1(p * q).mul(&tm1(1));
    let den = tm1(p).mul(&tm1(q));
    LaurentPolynomial::normalized(num.div_exact(&den).expect("cyclotomic identity"))
}

/// Fox derivative `∂r/∂x_j` under `x_i ↦ t^{ab[i]}` as exponent → coefficient.
fn fox_entry(rel: &[(usize, i64)], j: usize, ab: &[i64]) -> BTreeMap<i64, BigInt> {
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut prefix = 0i64;
    for &(g, e) in rel {
        let a = ab[g];
        if g == j {
            if e > 0 {
                for k in 0..e {
                    *out.entry(prefix + k * a).or_default() += 1;
                }
            } else {
                for k in 1..=-e {
                    *out.entry(prefix - k * a).or_default() -= 1;
                }
            }
        }
        prefix += e * a;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn determinant(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    let mut sign = false;
    let mut prev = Poly::constant(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly::zero();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = if n == 0 {
        Poly::constant(1)
    } else {
        m[n - 1][n - 1].clone()
    };
    if sign {
        d.neg()
    } else {
        d
    }
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(0, m, k, &mut vec![], &mut out);
    out
}

/// Alexander polynomial of `⟨gens | relators⟩` with abelianization
/// `ab` (one integer per generator). Needs at least `n - 1` relators.
pub fn alexander_from_relators(
    gens: &[String],
    relators: &[Word],
    ab: &[i64],
) -> Result<LaurentPolynomial, GroupError> {
    let n = gens.len();
    if n == 0 || relators.len() + 1 < n || ab.len() != n {
        return Err(GroupError::NotDeficiencyOne {
            generators: n,
            relators: relators.len(),
        });
    }
    // Jacobian rows shifted by a unit so every entry is a polynomial.
    let mut rows: Vec<Vec<Poly>> = vec![];
    for r in relators {
        let idx = r.free_reduce().indexed(gens)?;
        let entries: Vec<BTreeMap<i64, BigInt>> = (0..n).map(|j| fox_entry(&idx, j, ab)).collect();
        let low = entries
            .iter()
            .filter_map(|e| e.keys().next().copied())
            .min()
            .unwrap_or(0);
        rows.push(
            entries
                .iter()
                .map(|e| {
                    let Some(&high) = e.keys().next_back() else {
                        return Poly::zero();
                    };
                    let mut v = vec![BigInt::zero(); (high - low) as usize + 1];
                    for (x, c) in e {
                        v[(x - low) as usize] = c.clone();
                    }
                    Poly(v).trimmed()
                })
                .collect(),
        );
    }
    let mut acc = Poly::zero();
    for sel in combinations(rows.len(), n - 1) {
        for skip in 0..n {
            let minor: Vec<Vec<Poly>> = sel
                .iter()
                .map(|&r| {
                    (0..n)
                        .filter(|&c| c != skip)
                        .map(|c| rows[r][c].clone())
                        .collect()
                })
                .collect();
            acc = acc.gcd(&determinant(minor));
        }
    }
    if acc.is_zero() {
        return Err(GroupError::DegenerateAlexander);
    }
    Ok(LaurentPolynomial::normalized(acc))
}
