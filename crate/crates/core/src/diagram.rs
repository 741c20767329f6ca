//! Oriented knot diagrams as signed Gauss codes.
//!
//! A diagram is stored as the cyclic sequence of crossing passages met while
//! traversing the knot, plus one sign per crossing (right-handed = +1).
//! Arcs run from one under-passage to the next; arc 0 contains passage 0.

use thiserror::Error;

use crate::notation::{BraidWord, DiagramSource, DtCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("DT code {0} has no planar realization")]
    NonRealizable(String),
    #[error("DT code with {0} crossings exceeds the realizability search limit")]
    TooLarge(usize),
}

const MAX_DT_CROSSINGS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn value(self) -> i64 {
        match self {
            CrossingSign::Positive => 1,
            CrossingSign::Negative => -1,
        }
    }

    fn from_value(v: i64) -> Self {
        if v > 0 {
            CrossingSign::Positive
        } else {
            CrossingSign::Negative
        }
    }

    pub fn flipped(self) -> Self {
        Self::from_value(-self.value())
    }
}

/// Wirtinger data for one crossing: the under-strand goes from arc
/// `incoming` to arc `outgoing` beneath arc `over`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub over: usize,
    pub incoming: usize,
    pub outgoing: usize,
    pub sign: CrossingSign,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    passages: Vec<Passage>,
    signs: Vec<CrossingSign>,
}

impl Diagram {
    /// Builds a diagram from a Gauss sequence. Panics if a crossing is not
    /// visited exactly twice (once over, once under); callers construct
    /// sequences that satisfy this.
    fn from_parts(passages: Vec<Passage>, signs: Vec<CrossingSign>) -> Self {
        let d = Self { passages, signs };
        assert!(d.closed_traversal_ok(), "inconsistent Gauss sequence");
        d
    }

    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn arc_count(&self) -> usize {
        self.crossing_count()
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn signs(&self) -> &[CrossingSign] {
        &self.signs
    }

    /// Following the knot from passage 0 meets every crossing exactly twice,
    /// once over and once under.
    pub fn closed_traversal_ok(&self) -> bool {
        let n = self.signs.len();
        if self.passages.len() != 2 * n {
            return false;
        }
        let mut over = vec![0usize; n];
        let mut under = vec![0usize; n];
        for p in &self.passages {
            if p.crossing >= n {
                return false;
            }
            if p.over {
                over[p.crossing] += 1;
            } else {
                under[p.crossing] += 1;
            }
        }
        over.iter().chain(under.iter()).all(|&c| c == 1)
    }

    /// Arc index of every passage position. The under-passage at position
    /// `t` ends arc `arc_at[t]` and starts arc `arc_at[t] + 1 (mod n)`.
    fn arc_at(&self) -> Vec<usize> {
        let n = self.crossing_count();
        let mut unders = 0;
        self.passages
            .iter()
            .map(|p| {
                let a = unders % n;
                if !p.over {
                    unders += 1;
                }
                a
            })
            .collect()
    }

    /// Crossings in the order their under-passage is met along the
    /// traversal (so crossing record `k` ends arc `k`).
    pub fn wirtinger_crossings(&self) -> Vec<Crossing> {
        let n = self.crossing_count();
        let arcs = self.arc_at();
        let mut over_arc = vec![0usize; n];
        for (t, p) in self.passages.iter().enumerate() {
            if p.over {
                over_arc[p.crossing] = arcs[t];
            }
        }
        self.passages
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.over)
            .map(|(t, p)| Crossing {
                over: over_arc[p.crossing],
                incoming: arcs[t],
                outgoing: (arcs[t] + 1) % n,
                sign: self.signs[p.crossing],
            })
            .collect()
    }

    pub fn mirror(&self) -> Self {
        Self {
            passages: self.passages.clone(),
            signs: self.signs.iter().map(|s| s.flipped()).collect(),
        }
    }

    /// DT code read back from the traversal starting at passage 0.
    pub fn dt_code(&self) -> Vec<i64> {
        let n = self.crossing_count();
        let mut first = vec![None; n];
        let mut pairs = vec![0i64; n];
        for (t, p) in self.passages.iter().enumerate() {
            let label = t as i64 + 1;
            match first[p.crossing] {
                None => first[p.crossing] = Some((label, p.over)),
                Some((l0, over0)) => {
                    let (odd, even, even_over) = if l0 % 2 == 1 {
                        (l0, label, p.over)
                    } else {
                        (label, l0, over0)
                    };
                    pairs[(odd as usize - 1) / 2] = if even_over { -even } else { even };
                }
            }
        }
        pairs
    }
}

pub fn writhe(d: &Diagram) -> i64 {
    d.signs.iter().map(|s| s.value()).sum()
}

pub fn source_to_diagram(source: &DiagramSource) -> Result<Diagram, DiagramError> {
    match source {
        DiagramSource::Dt(code) => dt_to_diagram(code),
        DiagramSource::Braid(b) => Ok(braid_to_diagram(b)),
    }
}

/// Realizes a DT code. Positive even entries mark the even passage as the
/// under-passage. The planar embedding is found by searching chirality
/// assignments for one whose rotation system has `n + 2` faces (sphere).
pub fn dt_to_diagram(code: &DtCode) -> Result<Diagram, DiagramError> {
    let n = code.crossings();
    if n > MAX_DT_CROSSINGS {
        return Err(DiagramError::TooLarge(n));
    }
    let mut passages = vec![
        Passage {
            crossing: 0,
            over: false
        };
        2 * n
    ];
    for (i, &even) in code.pairs().iter().enumerate() {
        let odd_pos = 2 * i;
        let even_pos = even.unsigned_abs() as usize - 1;
        let even_under = even > 0;
        passages[odd_pos] = Passage {
            crossing: i,
            over: even_under,
        };
        passages[even_pos] = Passage {
            crossing: i,
            over: !even_under,
        };
    }
    let chirality = find_planar_chirality(&passages, n)
        .ok_or_else(|| DiagramError::NonRealizable(code.to_string()))?;
    let mut first_over = vec![None; n];
    for p in &passages {
        first_over[p.crossing].get_or_insert(p.over);
    }
    let signs = (0..n)
        .map(|c| {
            let eps = chirality[c];
            CrossingSign::from_value(if first_over[c] == Some(true) {
                eps
            } else {
                -eps
            })
        })
        .collect();
    Ok(Diagram::from_parts(passages, signs))
}

/// Chirality `+1` at a crossing: the second visit crosses the first from its
/// right to its left. Returns the first planar assignment in binary order
/// with crossing 0 fixed to `+1`.
fn find_planar_chirality(passages: &[Passage], n: usize) -> Option<Vec<i64>> {
    let mut visits = vec![(usize::MAX, usize::MAX); n];
    for (t, p) in passages.iter().enumerate() {
        let v = &mut visits[p.crossing];
        if v.0 == usize::MAX {
            v.0 = t;
        } else {
            v.1 = t;
        }
    }
    (0u64..1 << (n - 1)).find_map(|mask| {
        let chir: Vec<i64> = (0..n)
            .map(|c| {
                if c > 0 && mask >> (c - 1) & 1 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        (count_faces(&visits, &chir, passages.len()) == n + 2).then_some(chir)
    })
}

/// Half-edge: (edge index, at its end?) where edge `k` runs from passage
/// `k` to passage `k + 1`.
type HalfEdge = (usize, bool);

fn count_faces(visits: &[(usize, usize)], chir: &[i64], m: usize) -> usize {
    let prev = |k: usize| (k + m - 1) % m;
    // counter-clockwise rotation at each crossing, indexed by half-edge
    let mut next_ccw: Vec<[HalfEdge; 2]> = vec![[(0, false); 2]; m];
    let mut set = |h: HalfEdge, nx: HalfEdge| next_ccw[h.0][h.1 as usize] = nx;
    for (c, &(s, t)) in visits.iter().enumerate() {
        let out1 = (s, false);
        let in1 = (prev(s), true);
        let out2 = (t, false);
        let in2 = (prev(t), true);
        let order = if chir[c] > 0 {
            [out1, out2, in1, in2]
        } else {
            [out1, in2, in1, out2]
        };
        for i in 0..4 {
            set(order[i], order[(i + 1) % 4]);
        }
    }
    let mut seen = vec![[false; 2]; m];
    let mut faces = 0;
    for k in 0..m {
        for dir in [false, true] {
            // dart (k, dir): dir = false walks edge k forwards
            if seen[k][dir as usize] {
                continue;
            }
            faces += 1;
            let (mut e, mut d) = (k, dir);
            while !seen[e][d as usize] {
                seen[e][d as usize] = true;
                // the half-edge where this dart arrives
                let arrive: HalfEdge = (e, !d);
                let (ne, at_end) = next_ccw[arrive.0][arrive.1 as usize];
                // leaving through the start of an edge walks it forwards
                e = ne;
                d = at_end;
            }
        }
    }
    faces
}

/// Closure of a braid. Letter `±i` crosses the strands at positions `i-1`
/// and `i`; the crossing sign is the letter sign and the strand entering
/// from position `i-1` passes over.
pub fn braid_to_diagram(b: &BraidWord) -> Diagram {
    let letters = b.letters();
    let strands = b.strands();
    let n = letters.len();
    let signs = letters
        .iter()
        .map(|&l| CrossingSign::from_value(l))
        .collect();
    let mut passages = Vec::with_capacity(2 * n);
    let mut pos = 0usize;
    loop {
        for (k, &l) in letters.iter().enumerate() {
            let i = l.unsigned_abs() as usize;
            if pos == i - 1 {
                passages.push(Passage {
                    crossing: k,
                    over: true,
                });
                pos = i;
            } else if pos == i {
                passages.push(Passage {
                    crossing: k,
                    over: false,
                });
                pos = i - 1;
            }
        }
        if pos == 0 {
            break;
        }
        debug_assert!(pos < strands);
    }
    Diagram::from_parts(passages, signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_braid, parse_dt};
    use proptest::prelude::*;

    #[test]
    fn braid_signs_and_writhe() {
        let d = braid_to_diagram(&parse_braid("B2: 1 1 1").unwrap());
        assert_eq!(d.crossing_count(), 3);
        assert!(d.signs().iter().all(|&s| s == CrossingSign::Positive));
        assert_eq!(writhe(&d), 3);
        let m = braid_to_diagram(&parse_braid("B2: -1 -1 -1").unwrap());
        assert!(m.signs().iter().all(|&s| s == CrossingSign::Negative));
        assert_eq!(writhe(&m), -3);
        let f8 = braid_to_diagram(&parse_braid("B3: 1 -2 1 -2").unwrap());
        assert_eq!(f8.crossing_count(), 4);
        assert_eq!(writhe(&f8), 0);
        assert_eq!(writhe(&d.mirror()), -writhe(&d));
    }

    #[test]
    fn dt_realizes_small_knots() {
        let t = dt_to_diagram(&parse_dt("4 6 2").unwrap()).unwrap();
        assert_eq!((t.crossing_count(), t.arc_count()), (3, 3));
        assert_eq!(writhe(&t).abs(), 3);
        let f8 = dt_to_diagram(&parse_dt("4 6 8 2").unwrap()).unwrap();
        assert_eq!(f8.crossing_count(), 4);
        assert_eq!(writhe(&f8), 0);
    }

    #[test]
    fn dt_round_trip() {
        for s in ["4 6 2", "4 6 8 2", "4 8 -12 2 -14 -16 -6 -10", "6 2 4"] {
            let code = parse_dt(s).unwrap();
            let d = dt_to_diagram(&code).unwrap();
            assert_eq!(d.dt_code(), code.pairs());
        }
    }

    #[test]
    fn kinked_unknot_code_is_realizable() {
        // 6 2 4: three nugatory curls
        let d = dt_to_diagram(&parse_dt("6 2 4").unwrap()).unwrap();
        assert_eq!(d.crossing_count(), 3);
    }

    /// Gauss's necessary planarity conditions on the crossing sequence:
    /// every crossing is interlaced with an even number of others, and two
    /// non-interlaced crossings share an even number of interlaced ones.
    fn gauss_conditions_hold(pairs: &[i64]) -> bool {
        let n = pairs.len();
        let spans: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let (a, b) = (2 * i + 1, e.unsigned_abs() as usize);
                (a.min(b), a.max(b))
            })
            .collect();
        let inter = |i: usize, j: usize| {
            let (a, b) = spans[i];
            let (c, d) = spans[j];
            (a < c && c < b) != (a < d && d < b)
        };
        let set = |i: usize| {
            (0..n)
                .filter(|&j| j != i && inter(i, j))
                .collect::<Vec<_>>()
        };
        (0..n).all(|i| set(i).len() % 2 == 0)
            && (0..n).all(|i| {
                (i + 1..n).filter(|&j| !inter(i, j)).all(|j| {
                    let sj = set(j);
                    set(i).iter().filter(|k| sj.contains(k)).count() % 2 == 0
                })
            })
    }

    #[test]
    fn non_realizable_code_rejected() {
        // crossings (1,4) and (5,8) are not interlaced but share exactly one
        // interlaced crossing, (3,6)
        let code = parse_dt("4 6 8 10 2").unwrap();
        assert!(!gauss_conditions_hold(code.pairs()));
        assert!(matches!(
            dt_to_diagram(&code),
            Err(DiagramError::NonRealizable(_))
        ));
    }

    proptest! {
        #[test]
        fn realizable_codes_meet_gauss_conditions(perm in Just((1..=6).map(|i| 2 * i).collect::<Vec<i64>>()).prop_shuffle()) {
            let code = DtCode::new(perm).unwrap();
            if dt_to_diagram(&code).is_ok() {
                prop_assert!(gauss_conditions_hold(code.pairs()));
            }
        }
    }

    #[test]
    fn wirtinger_crossings_cover_all_arcs() {
        let d = dt_to_diagram(&parse_dt("4 6 8 2").unwrap()).unwrap();
        let cs = d.wirtinger_crossings();
        assert_eq!(cs.len(), 4);
        for (k, c) in cs.iter().enumerate() {
            assert_eq!(c.incoming, k);
            assert_eq!(c.outgoing, (k + 1) % 4);
        }
    }
}
