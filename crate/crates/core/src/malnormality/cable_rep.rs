//! Explicit permutation representations of cables on torus knots that
//! separate `c` from the peripheral subgroup, beyond the degrees the
//! quotient search reaches.
//!
//! The companion `⟨x, y | x^p = y^q⟩` acts on a block `A` through a
//! transitive quotient of `ℤ/p * ℤ/q`, where `h = μ_J^b λ_J^a` acts with
//! some cycle `O` of length `k`. It also acts abelianly on `a - 1` copies
//! `B_1 … B_{a-1}` of `ℤ/k`, by `μ_J ↦ σ` with `σ^b` the unit shift, so `h`
//! shifts each copy by one. `q` carries `O → B_1 → … → B_{a-1} → O` with
//! `q^a = h^{-b}`, and is a power of `h` on the other cycles of `A`. Every
//! relator is checked on the result, so the construction needs no proof.

use std::collections::{HashMap, HashSet};

use num_integer::Integer;

use crate::group::{find_quotients, QuotientSearch, TorusGroup, Word};
use crate::presentation::{cable_section_exponents, PeripheralPair, PresentedGroup, Structure};

use super::witness::QuotientCertificate;
use super::MalnormalityError;

/// Core quotients of `ℤ/p * ℤ/q` tried.
const CORE_QUOTIENTS: usize = 120;
/// Largest degree built.
const MAX_BUILT_DEGREE: usize = 40;

type Images = Vec<usize>;

fn identity(n: usize) -> Images {
    (0..n).collect()
}

fn then(x: &Images, y: &Images) -> Images {
    x.iter().map(|&i| y[i]).collect()
}

fn inverse(x: &Images) -> Images {
    let mut out = vec![0; x.len()];
    for (i, &v) in x.iter().enumerate() {
        out[v] = i;
    }
    out
}

fn pow(x: &Images, e: i64) -> Images {
    let base = if e < 0 { inverse(x) } else { x.clone() };
    (0..e.unsigned_abs()).fold(identity(x.len()), |acc, _| then(&acc, &base))
}

fn eval(images: &HashMap<&str, Images>, n: usize, w: &Word) -> Images {
    w.letters().iter().fold(identity(n), |acc, l| {
        then(&acc, &pow(&images[l.gen.as_str()], l.exp))
    })
}

/// Cycles of `x`, each listed from its least point.
fn cycles(x: &Images) -> Vec<Vec<usize>> {
    let mut seen = vec![false; x.len()];
    let mut out = vec![];
    for s in 0..x.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![];
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = x[i];
        }
        out.push(c);
    }
    out
}

fn generated(n: usize, gens: &[Images]) -> HashSet<Images> {
    let mut seen = HashSet::from([identity(n)]);
    let mut stack = vec![identity(n)];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = then(&x, g);
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Searches the construction for a cable on a torus knot; `None` for other
/// structures or when no core quotient yields a certificate.
pub(super) fn torus_companion_representation(
    g: &PresentedGroup,
    p: &PeripheralPair,
    w: &Word,
    seed: u64,
) -> Result<Option<QuotientCertificate>, MalnormalityError> {
    let Structure::Cable {
        a,
        b,
        companion,
        inner,
    } = &g.structure
    else {
        return Ok(None);
    };
    let Structure::Torus { p: tp, q: tq } = **inner else {
        return Ok(None);
    };
    let (a, b) = (*a, *b);
    let (s, r) = cable_section_exponents(a, b);
    let torus = TorusGroup::standard(tp, tq)?;
    let (mu_j, lambda_j) = (torus.meridian_word(), torus.longitude_word());
    let js = &g.generators[companion.clone()];
    let (x, y) = (Word::gen("x"), Word::gen("y"));
    let core = find_quotients(
        &["x".to_string(), "y".to_string()],
        &[x.power(tp), y.power(tq)],
        "torus-core",
        &QuotientSearch::new(crate::group::quotient::MAX_DEGREE, CORE_QUOTIENTS, seed),
    )?;
    for cq in &core {
        let n_a = cq.degree;
        let local: HashMap<&str, Images> =
            HashMap::from([("x", cq.images[0].images()), ("y", cq.images[1].images())]);
        let m = eval(&local, n_a, &mu_j);
        let l = eval(&local, n_a, &lambda_j);
        let h_a = then(&pow(&m, b), &pow(&l, a));
        let c_a = then(&pow(&m, s), &pow(&l, r));
        let cyc = cycles(&h_a);
        for (pick, orbit) in cyc.iter().enumerate() {
            let k = orbit.len() as i64;
            let n = n_a + (a as usize - 1) * orbit.len();
            if k < 2 || b.gcd(&k) != 1 || n > MAX_BUILT_DEGREE {
                continue;
            }
            // q on the other cycles: h^e with e·a ≡ -b (mod length)
            let mut q = identity(n);
            let mut ok = true;
            for other in cyc
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pick)
                .map(|(_, c)| c)
            {
                let len = other.len() as i64;
                let Some(e) = (0..len).find(|e| (e * a + b).rem_euclid(len) == 0) else {
                    ok = false;
                    break;
                };
                let he = pow(&h_a, e);
                for &pt in other {
                    q[pt] = he[pt];
                }
            }
            if !ok {
                continue;
            }
            // copy j of ℤ/k occupies n_a + (j-1)k .. n_a + jk
            let at = |j: usize, i: i64| n_a + (j - 1) * orbit.len() + i.rem_euclid(k) as usize;
            let shift = |step: i64| -> Images {
                let mut out = identity(n);
                for j in 1..a as usize {
                    for i in 0..k {
                        out[at(j, i)] = at(j, i + step);
                    }
                }
                out
            };
            let binv = (1..=k)
                .find(|t| (t * b - 1).rem_euclid(k) == 0)
                .expect("gcd(b,k) = 1");
            let lift = |base: &Images, step: i64| -> Images {
                let mut out = shift(step);
                out[..n_a].copy_from_slice(base);
                out
            };
            // σ = shift by b⁻¹; x ↦ σ^q, y ↦ σ^p abelianly on the copies
            let jx = lift(&local["x"], binv * tq);
            let jy = lift(&local["y"], binv * tp);
            let hh = lift(&h_a, 1);
            let cc = lift(&c_a, binv * s);
            // orbit[i] is h-shifted to orbit[i+1]; q: O_i → B1_i → … → O_{i-b}
            for (i, &pt) in orbit.iter().enumerate() {
                q[pt] = at(1, i as i64);
            }
            for j in 1..a as usize {
                for i in 0..k {
                    q[at(j, i)] = if j + 1 < a as usize {
                        at(j + 1, i)
                    } else {
                        orbit[(i - b).rem_euclid(k) as usize]
                    };
                }
            }
            let mut images: HashMap<&str, Images> = HashMap::from([("q", q), ("c", cc), ("h", hh)]);
            images.insert(js[0].as_str(), jx);
            images.insert(js[1].as_str(), jy);
            if g.relators
                .iter()
                .any(|rel| eval(&images, n, rel) != identity(n))
            {
                continue;
            }
            let (mu, la, gi) = (
                eval(&images, n, &p.mu),
                eval(&images, n, &p.lambda),
                eval(&images, n, w),
            );
            let sub = generated(n, &[mu, la]);
            if !sub.contains(&gi) {
                return Ok(Some(QuotientCertificate {
                    degree: n,
                    images: g
                        .generators
                        .iter()
                        .map(|name| (name.clone(), images[name.as_str()].clone()))
                        .collect(),
                    g_image: gi,
                    peripheral_image_order: sub.len(),
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{cable_presentation, torus_presentation};

    #[test]
    fn separates_c_for_unit_cables() {
        for (a, b, p, q) in [(2, 1, 2, 3), (2, -1, 2, 3), (3, 1, 2, 5), (3, -1, 3, 4)] {
            let (g, pair) = cable_presentation(a, b, &torus_presentation(p, q).unwrap()).unwrap();
            let cert = torus_companion_representation(&g, &pair, &Word::gen("c"), 7)
                .unwrap()
                .expect("certificate");
            let images: HashMap<&str, Images> = cert
                .images
                .iter()
                .map(|(k, v)| (k.as_str(), v.clone()))
                .collect();
            let n = cert.degree;
            assert!(g
                .relators
                .iter()
                .all(|r| eval(&images, n, r) == identity(n)));
            let sub = generated(
                n,
                &[eval(&images, n, &pair.mu), eval(&images, n, &pair.lambda)],
            );
            assert!(!sub.contains(&cert.g_image));
        }
    }

    #[test]
    fn declines_other_structures() {
        let (g, pair) = torus_presentation(2, 3).unwrap();
        assert_eq!(
            torus_companion_representation(&g, &pair, &Word::gen("x"), 7).unwrap(),
            None
        );
    }
}
