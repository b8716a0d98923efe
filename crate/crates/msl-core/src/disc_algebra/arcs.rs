//! Exact finite unions of half-open circular arcs with rational endpoints.
//!
//! Angles are measured in full turns, so the circle is `[0, 1)` and every set
//! here is a finite union of half-open arcs `[s, e)` with `0 <= s < e <= 1`,
//! all endpoints exact rationals. Set operations, measures and the disjoint
//! refinement below are computed in rational arithmetic with no rounding, so
//! the postconditions of the refinement can be asserted with zero tolerance.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{MslError, Result};

/// Angle in full turns.
pub type Turn = Ratio<i64>;

/// Half-open arc `[start, end)` with `0 <= start < end <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub start: Turn,
    pub end: Turn,
}

impl Arc {
    pub fn length(&self) -> Turn {
        self.end - self.start
    }
}

/// Normalized finite union of arcs: sorted, pairwise disjoint, adjacent arcs
/// merged. Measure zero is equivalent to emptiness.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArcSet {
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet { arcs: Vec::new() }
    }

    pub fn full_circle() -> Self {
        ArcSet {
            arcs: vec![Arc {
                start: Turn::zero(),
                end: Turn::one(),
            }],
        }
    }

    /// Builds a set from raw `(start, end)` pairs. Endpoints are reduced
    /// modulo one full turn; an arc crossing zero is split into two pieces.
    /// Empty pairs (`start == end`) are rejected as ambiguous: a full circle
    /// must be given as `(0, 1)`.
    pub fn from_pairs(pairs: &[(Turn, Turn)]) -> Result<Self> {
        let mut arcs = Vec::new();
        for &(s, e) in pairs {
            if s == e {
                return Err(MslError::InvalidArc(format!(
                    "arc [{s}, {e}) is empty; a full circle is [0, 1)"
                )));
            }
            if e - s >= Turn::one() {
                return Ok(ArcSet::full_circle());
            }
            let s = wrap_unit(s);
            let e = wrap_unit(e);
            if s < e {
                arcs.push(Arc { start: s, end: e });
            } else {
                // crosses zero
                if s < Turn::one() {
                    arcs.push(Arc {
                        start: s,
                        end: Turn::one(),
                    });
                }
                if e > Turn::zero() {
                    arcs.push(Arc {
                        start: Turn::zero(),
                        end: e,
                    });
                }
            }
        }
        Ok(Self::normalize(arcs))
    }

    fn normalize(mut arcs: Vec<Arc>) -> Self {
        arcs.retain(|a| a.end > a.start);
        arcs.sort_by(|a, b| a.start.cmp(&b.start));
        let mut merged: Vec<Arc> = Vec::with_capacity(arcs.len());
        for arc in arcs {
            match merged.last_mut() {
                Some(last) if arc.start <= last.end => {
                    if arc.end > last.end {
                        last.end = arc.end;
                    }
                }
                _ => merged.push(arc),
            }
        }
        ArcSet { arcs: merged }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Exact normalized measure (total length in turns).
    pub fn measure(&self) -> Turn {
        self.arcs
            .iter()
            .fold(Turn::zero(), |acc, a| acc + a.length())
    }

    pub fn contains(&self, t: Turn) -> bool {
        let t = wrap_unit(t);
        self.arcs.iter().any(|a| a.start <= t && t < a.end)
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &ArcSet) -> ArcSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &ArcSet) -> ArcSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> ArcSet {
        ArcSet::full_circle().difference(self)
    }

    pub fn is_subset_of(&self, other: &ArcSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &ArcSet) -> bool {
        self.intersection(other).is_empty()
    }

    /// Sweep over the elementary intervals cut out by both sets' endpoints.
    fn combine(&self, other: &ArcSet, keep: impl Fn(bool, bool) -> bool) -> ArcSet {
        let mut cuts: Vec<Turn> = Vec::with_capacity(2 * (self.arcs.len() + other.arcs.len()) + 2);
        cuts.push(Turn::zero());
        cuts.push(Turn::one());
        for a in self.arcs.iter().chain(other.arcs.iter()) {
            cuts.push(a.start);
            cuts.push(a.end);
        }
        cuts.sort();
        cuts.dedup();
        let mut out = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            // membership is constant on (lo, hi); test at lo since arcs are
            // closed on the left and every cut is an endpoint of some arc
            if keep(self.contains(lo), other.contains(lo)) {
                out.push(Arc { start: lo, end: hi });
            }
        }
        ArcSet::normalize(out)
    }

    /// Cuts the longest arc (first such, in sorted order) at its midpoint and
    /// returns `(rest, second_half)`: `rest` is the set with the second half
    /// of that arc removed. Both parts have positive measure when `self` does.
    pub fn split_longest_arc(&self) -> Option<(ArcSet, ArcSet)> {
        let idx = self
            .arcs
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.length().cmp(&b.length()).then(ib.cmp(ia)))
            .map(|(i, _)| i)?;
        let arc = self.arcs[idx];
        let mid = (arc.start + arc.end) / 2;
        let mut rest = self.arcs.clone();
        rest[idx] = Arc {
            start: arc.start,
            end: mid,
        };
        let half = ArcSet {
            arcs: vec![Arc {
                start: mid,
                end: arc.end,
            }],
        };
        Some((ArcSet::normalize(rest), half))
    }

    /// Splits the set into `parts` pairwise disjoint pieces of positive
    /// measure whose union is exactly `self`, by repeatedly halving the
    /// longest arc. Requires positive measure.
    pub fn split_into(&self, parts: usize) -> Result<Vec<ArcSet>> {
        if self.is_empty() {
            return Err(MslError::InvalidArc(
                "cannot split an empty set into positive-measure pieces".into(),
            ));
        }
        let mut pieces = Vec::with_capacity(parts);
        let mut rest = self.clone();
        for _ in 1..parts {
            let (r, half) = rest.split_longest_arc().expect("nonempty by invariant");
            pieces.push(half);
            rest = r;
        }
        pieces.push(rest);
        pieces.reverse();
        Ok(pieces)
    }
}

fn wrap_unit(t: Turn) -> Turn {
    let mut t = t;
    while t < Turn::zero() {
        t += Turn::one();
    }
    while t >= Turn::one() {
        t -= Turn::one();
    }
    t
}

/// Disjoint refinement of threshold sets.
///
/// Given sets `tau_1..tau_N` of positive measure, produces `sigma_1..sigma_N`
/// with, exactly in rational arithmetic:
///
/// - `sigma_n` a subset of `tau_n`;
/// - every `sigma_n` of positive measure;
/// - the `sigma_n` pairwise disjoint;
/// - `measure(union of sigma_n) == measure(union of tau_n)`.
///
/// Induction on `N`: the set of minimal measure is separated from the others'
/// differences; inputs whose difference vanishes are necessarily equal to the
/// minimal set, and that set is cut into the required number of pieces by
/// halving longest arcs. Already-disjoint inputs are returned unchanged.
pub fn refine_disjoint(inputs: &[ArcSet]) -> Result<Vec<ArcSet>> {
    for (i, t) in inputs.iter().enumerate() {
        if t.is_empty() {
            return Err(MslError::ZeroMeasureInput(i));
        }
    }
    Ok(refine_inner(inputs))
}

fn refine_inner(inputs: &[ArcSet]) -> Vec<ArcSet> {
    let n = inputs.len();
    match n {
        0 => Vec::new(),
        1 => vec![inputs[0].clone()],
        2 => {
            let (first, second, swapped) = if inputs[0].measure() <= inputs[1].measure() {
                (&inputs[0], &inputs[1], false)
            } else {
                (&inputs[1], &inputs[0], true)
            };
            let diff = second.difference(first);
            let (s1, s2) = if !diff.is_empty() {
                (first.clone(), diff)
            } else {
                // second is contained in first; cut their intersection in two
                let inter = first.intersection(second);
                let (rest, half) = inter.split_longest_arc().expect("positive measure");
                (rest, half)
            };
            if swapped {
                vec![s2, s1]
            } else {
                vec![s1, s2]
            }
        }
        _ => {
            let min_idx = (0..n)
                .min_by(|&i, &j| inputs[i].measure().cmp(&inputs[j].measure()))
                .unwrap();
            let minimal = &inputs[min_idx];
            // indices with positive-measure difference recurse; the rest are
            // exact copies of the minimal set and share its split
            let mut positive: Vec<usize> = Vec::new();
            let mut exhausted: Vec<usize> = Vec::new();
            let mut diffs: Vec<ArcSet> = Vec::new();
            for i in 0..n {
                if i == min_idx {
                    continue;
                }
                let d = inputs[i].difference(minimal);
                if d.is_empty() {
                    exhausted.push(i);
                } else {
                    positive.push(i);
                    diffs.push(d);
                }
            }
            let refined_diffs = refine_inner(&diffs);
            exhausted.push(min_idx);
            exhausted.sort_unstable();
            let pieces = minimal
                .split_into(exhausted.len())
                .expect("minimal set has positive measure");

            let mut out = vec![ArcSet::empty(); n];
            for (slot, sigma) in positive.into_iter().zip(refined_diffs) {
                out[slot] = sigma;
            }
            for (slot, piece) in exhausted.into_iter().zip(pieces) {
                out[slot] = piece;
            }
            out
        }
    }
}

// --- JSON form: a set is a list of arcs, an arc a pair of rationals,
// a rational a [numerator, denominator] pair. ---

impl Serialize for ArcSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<[[i64; 2]; 2]> = self
            .arcs
            .iter()
            .map(|a| {
                [
                    [*a.start.numer(), *a.start.denom()],
                    [*a.end.numer(), *a.end.denom()],
                ]
            })
            .collect();
        raw.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ArcSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<[[i64; 2]; 2]> = Vec::deserialize(de)?;
        let mut pairs = Vec::with_capacity(raw.len());
        for [[sn, sd], [en, ed]] in raw {
            if sd == 0 || ed == 0 {
                return Err(serde::de::Error::custom("arc endpoint with zero denominator"));
            }
            pairs.push((Turn::new(sn, sd), Turn::new(en, ed)));
        }
        ArcSet::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arcset(pairs: &[(i64, i64, i64, i64)]) -> ArcSet {
        let pairs: Vec<(Turn, Turn)> = pairs
            .iter()
            .map(|&(sn, sd, en, ed)| (Turn::new(sn, sd), Turn::new(en, ed)))
            .collect();
        ArcSet::from_pairs(&pairs).unwrap()
    }

    #[test]
    fn complement_of_half() {
        let half = arcset(&[(0, 1, 1, 2)]);
        let comp = ArcSet::full_circle().difference(&half);
        assert_eq!(comp, arcset(&[(1, 2, 1, 1)]));
    }

    #[test]
    fn measure_of_union() {
        let a = arcset(&[(0, 1, 1, 4), (1, 2, 3, 4)]);
        assert_eq!(a.measure(), Turn::new(1, 2));
    }

    #[test]
    fn disjoint_intersection_is_empty() {
        let a = arcset(&[(0, 1, 1, 4)]);
        let b = arcset(&[(1, 2, 3, 4)]);
        let inter = a.intersection(&b);
        assert!(inter.is_empty());
        assert_eq!(inter.measure(), Turn::zero());
    }

    #[test]
    fn adjacent_arcs_merge() {
        let a = arcset(&[(0, 1, 1, 4), (1, 4, 1, 2)]);
        assert_eq!(a.arcs().len(), 1);
        assert_eq!(a, arcset(&[(0, 1, 1, 2)]));
    }

    #[test]
    fn wrap_around_splits() {
        let a = arcset(&[(3, 4, 5, 4)]);
        assert_eq!(a.measure(), Turn::new(1, 2));
        assert!(a.contains(Turn::new(7, 8)));
        assert!(a.contains(Turn::new(1, 8)));
        assert!(!a.contains(Turn::new(1, 2)));
    }

    #[test]
    fn refine_keeps_disjoint_inputs() {
        let t1 = arcset(&[(0, 1, 1, 4)]);
        let t2 = arcset(&[(1, 2, 3, 4)]);
        let out = refine_disjoint(&[t1.clone(), t2.clone()]).unwrap();
        assert_eq!(out, vec![t1, t2]);
    }

    #[test]
    fn refine_nested_pair_takes_difference() {
        // tau_1 strictly inside tau_2: sigma_1 = tau_1, sigma_2 = tau_2 \ tau_1
        let t1 = arcset(&[(0, 1, 1, 4)]);
        let t2 = arcset(&[(0, 1, 1, 2)]);
        let out = refine_disjoint(&[t1.clone(), t2]).unwrap();
        assert_eq!(out[0], t1);
        assert_eq!(out[1], arcset(&[(1, 4, 1, 2)]));
    }

    #[test]
    fn refine_equal_full_circles_halves() {
        let out = refine_disjoint(&[ArcSet::full_circle(), ArcSet::full_circle()]).unwrap();
        assert_eq!(out[0], arcset(&[(0, 1, 1, 2)]));
        assert_eq!(out[1], arcset(&[(1, 2, 1, 1)]));
    }

    #[test]
    fn refine_rejects_zero_measure() {
        let err = refine_disjoint(&[ArcSet::empty(), ArcSet::full_circle()]);
        assert!(matches!(err, Err(MslError::ZeroMeasureInput(0))));
    }

    #[test]
    fn refine_postconditions_on_a_triple() {
        let t1 = arcset(&[(0, 1, 1, 2)]);
        let t2 = arcset(&[(1, 4, 3, 4)]);
        let t3 = arcset(&[(1, 4, 1, 2)]);
        let inputs = vec![t1, t2, t3];
        let out = refine_disjoint(&inputs).unwrap();
        check_refinement(&inputs, &out);
    }

    pub(crate) fn check_refinement(inputs: &[ArcSet], out: &[ArcSet]) {
        assert_eq!(inputs.len(), out.len());
        let mut union_in = ArcSet::empty();
        let mut union_out = ArcSet::empty();
        for (t, s) in inputs.iter().zip(out) {
            assert!(s.is_subset_of(t), "sigma not inside tau");
            assert!(!s.is_empty(), "sigma has zero measure");
            union_in = union_in.union(t);
            union_out = union_out.union(s);
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                assert!(out[i].is_disjoint_from(&out[j]), "sigmas overlap");
            }
        }
        assert_eq!(union_in.measure(), union_out.measure(), "measure not preserved");
    }
}
