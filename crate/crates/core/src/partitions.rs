//! Integer partitions and the dominance order.
//!
//! A [`Partition`] is stored weakly decreasing with trailing zeros stripped.
//! Operations whose answer depends on an ambient number of slots (regularity,
//! enumeration of `Par_m(d)`) take that count explicitly, see
//! [`BoundedPartitionView`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts. Trailing zeros are
    /// dropped; an increase anywhere is an error.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "parts {parts:?} are not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Sorts the given values into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(d)`.
    pub fn row(d: usize) -> Self {
        Partition::from_unsorted(vec![d])
    }

    /// The one-column partition `(1^d)`.
    pub fn column(d: usize) -> Self {
        Partition { parts: vec![1; d] }
    }

    /// `(k^e)` in frequency notation.
    pub fn rectangle(k: usize, e: usize) -> Self {
        if k == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![k; e] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn get(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The parts as a vector of exactly `slots` entries.
    ///
    /// Panics if the partition has more than `slots` parts.
    pub fn padded(&self, slots: usize) -> Vec<usize> {
        assert!(self.len() <= slots, "{self} does not fit in {slots} slots");
        let mut v = self.parts.clone();
        v.resize(slots, 0);
        v
    }

    pub fn prefix_sums(&self, n: usize) -> Vec<usize> {
        let mut acc = 0;
        (0..n)
            .map(|i| {
                acc += self.get(i);
                acc
            })
            .collect()
    }

    /// The conjugate partition.
    pub fn transpose(&self) -> Partition {
        let cols = self.get(0);
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        Partition {
            parts: (0..n).map(|i| self.get(i) + other.get(i)).collect(),
        }
    }

    /// `k` times the partition.
    pub fn scale(&self, k: usize) -> Partition {
        Partition::from_unsorted(self.parts.iter().map(|p| p * k).collect())
    }

    /// `(λ¹ + k, …, λ^m + k, 0)`: add `k` to each of the first `slots`
    /// components.
    pub fn shift(&self, k: usize, slots: usize) -> Partition {
        assert!(self.len() <= slots);
        Partition::from_unsorted((0..slots).map(|i| self.get(i) + k).collect())
    }

    /// Multiplicities `a_k` of each part size `k = 1..=max`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = vec![0; self.get(0) + 1];
        for &p in &self.parts {
            out[p] += 1;
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("()");
        }
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Accepts `5,1,1,1`, `2^4`, `5 1^3` and mixtures; `()` and `0` are the
/// empty partition.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for tok in trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e),
                None => (tok, "1"),
            };
            let base: usize = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad part {tok:?} in {s:?}")))?;
            let exp: usize = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {tok:?} in {s:?}")))?;
            parts.extend(std::iter::repeat_n(base, exp));
        }
        Partition::new(parts).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A partition read as a vector of `slots` components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedPartitionView {
    partition: Partition,
    slots: usize,
}

impl BoundedPartitionView {
    pub fn new(partition: Partition, slots: usize) -> Result<Self> {
        if partition.len() > slots {
            return Err(Error::FormatViolation(format!(
                "{partition} has more than {slots} parts"
            )));
        }
        Ok(BoundedPartitionView { partition, slots })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn components(&self) -> Vec<usize> {
        self.partition.padded(self.slots)
    }
}

/// `α ⪯ λ`: equal sizes and every prefix sum of `α` bounded by that of `λ`.
pub fn dominance_leq(alpha: &Partition, lambda: &Partition) -> bool {
    if alpha.size() != lambda.size() {
        return false;
    }
    let n = alpha.len().max(lambda.len());
    let (mut sa, mut sl) = (0, 0);
    for i in 0..n {
        sa += alpha.get(i);
        sl += lambda.get(i);
        if sa > sl {
            return false;
        }
    }
    true
}

/// Greatest lower bound in the dominance lattice.
///
/// Prefix sums of a partition form a concave sequence, so their pointwise
/// minimum is again concave and its differences are a partition.
pub fn meet(lambda: &Partition, mu: &Partition) -> Result<Partition> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!(
            "meet of {lambda} (size {}) and {mu} (size {})",
            lambda.size(),
            mu.size()
        )));
    }
    let n = lambda.len().max(mu.len());
    let a = lambda.prefix_sums(n);
    let b = mu.prefix_sums(n);
    let mut prev = 0;
    let mut parts = Vec::with_capacity(n);
    for i in 0..n {
        let s = a[i].min(b[i]);
        parts.push(s - prev);
        prev = s;
    }
    Partition::new(parts).map_err(|e| Error::Defect(format!("meet produced a non-partition: {e}")))
}

/// Meet of several partitions of a common size.
pub fn meet_all<'a, I>(parts: I) -> Result<Partition>
where
    I: IntoIterator<Item = &'a Partition>,
{
    let mut it = parts.into_iter();
    let first = it
        .next()
        .ok_or_else(|| Error::InvalidArgument("meet of no partitions".into()))?
        .clone();
    it.try_fold(first, |acc, p| meet(&acc, p))
}

/// Components pairwise distinct, counting explicit trailing zeros.
pub fn is_regular(view: &BoundedPartitionView) -> bool {
    let c = view.components();
    // Components are sorted, so distinctness is a neighbour check.
    c.windows(2).all(|w| w[0] != w[1])
}

/// `□_m(d)`: the dominance-smallest element of `Par_m(d)`.
pub fn box_partition(m: usize, d: usize) -> Result<Partition> {
    if m == 0 {
        return if d == 0 {
            Ok(Partition::empty())
        } else {
            Err(Error::InvalidArgument(format!("no partition of {d} into 0 parts")))
        };
    }
    let (q, r) = (d / m, d % m);
    let mut parts = vec![q + 1; r];
    parts.extend(std::iter::repeat_n(q, m - r));
    Partition::new(parts)
}

/// `s(n) = (n, n−1, …, 1)`.
pub fn symmetric_staircase(n: usize) -> Partition {
    Partition {
        parts: (1..=n).rev().collect(),
    }
}

/// `ℓ(m, d) = max{n ≤ m | n(n+1)/2 ≤ d}`.
pub fn staircase_rows(m: usize, d: usize) -> usize {
    (0..=m).rev().find(|n| n * (n + 1) / 2 <= d).unwrap_or(0)
}

/// `⊥_m(d) = s(ℓ) + □_ℓ(d − |s(ℓ)|)` with `ℓ = ℓ(m, d)`; the smallest regular
/// element of `Par_m(d)` whenever one exists.
pub fn staircase(m: usize, d: usize) -> Result<Partition> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "staircase needs m >= 1 and d >= 1 (got m = {m}, d = {d})"
        )));
    }
    let l = staircase_rows(m, d);
    let s = symmetric_staircase(l);
    Ok(s.add(&box_partition(l, d - s.size())?))
}

/// All partitions of `d` into at most `max_parts` parts, lexicographically
/// descending.
pub fn enumerate_partitions(d: usize, max_parts: usize) -> Vec<Partition> {
    fn rec(rem: usize, max_part: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=rem.min(max_part)).rev() {
            // the remaining slots must be able to absorb what is left
            if p * slots < rem {
                break;
            }
            cur.push(p);
            rec(rem - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, max_parts, &mut Vec::new(), &mut out);
    out
}

/// All `α ∈ Par_slots(|bound|)` with `α ⪯ bound`, in enumeration order.
pub fn enumerate_dominated(bound: &Partition, slots: usize) -> Vec<Partition> {
    enumerate_partitions(bound.size(), slots)
        .into_iter()
        .filter(|a| dominance_leq(a, bound))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    // Number of partitions of n into parts of size at most k (equivalently at
    // most k parts), by the standard recurrence.
    fn count_oracle(n: usize, k: usize) -> usize {
        if n == 0 {
            return 1;
        }
        if k == 0 {
            return 0;
        }
        count_oracle(n, k - 1) + if n >= k { count_oracle(n - k, k) } else { 0 }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("5,1,1,1"), p("5 1^3"));
        assert_eq!(p("2^4").parts(), &[2, 2, 2, 2]);
        assert_eq!(p("()"), Partition::empty());
        assert_eq!(p("3,0,0"), p("3"));
        assert_eq!(p("3,2,1").to_string(), "3,2,1");
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p("2,2,2,2"), &p("5,1,1,1")));
        assert!(dominance_leq(&p("3,1"), &p("3,1")));
        assert!(!dominance_leq(&p("3,1"), &p("2,2")));
        assert!(!dominance_leq(&p("3"), &p("2,2")));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&p("2,2,2,2"), &p("5,1,1,1")).unwrap(), p("2,2,2,2"));
        assert_eq!(meet(&p("3,1"), &p("2,2")).unwrap(), p("2,2"));
        let l = p("4,2,1");
        assert_eq!(meet(&l, &l).unwrap(), l);
        assert!(matches!(meet(&p("3"), &p("2")), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p("3,1").transpose(), p("2,1,1"));
        assert_eq!(Partition::row(5).transpose(), Partition::column(5));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
    }

    #[test]
    fn regularity_examples() {
        let v = |s: &str, m| BoundedPartitionView::new(p(s), m).unwrap();
        assert!(is_regular(&v("3,1", 3)));
        assert!(!is_regular(&v("4", 3)));
        assert!(is_regular(&v("2,1", 2)));
        assert!(BoundedPartitionView::new(p("1,1,1"), 2).is_err());
    }

    #[test]
    fn box_and_staircase_examples() {
        assert_eq!(box_partition(3, 7).unwrap(), p("3,2,2"));
        assert_eq!(box_partition(4, 0).unwrap(), Partition::empty());
        assert_eq!(box_partition(1, 9).unwrap(), p("9"));
        assert!(box_partition(0, 2).is_err());
        assert_eq!(staircase(3, 6).unwrap(), p("3,2,1"));
        assert_eq!(staircase(3, 4).unwrap(), p("3,1"));
        assert_eq!(staircase(1, 7).unwrap(), p("7"));
        assert!(staircase(3, 0).is_err());
    }

    #[test]
    fn staircase_length_and_reduction() {
        for m in 1..=6 {
            for d in 1..=25 {
                let s = staircase(m, d).unwrap();
                let l = staircase_rows(m, d);
                assert_eq!(s.len(), l);
                assert_eq!(s, staircase(l, d).unwrap());
                assert_eq!(s.size(), d);
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_partitions(4, 2), vec![p("4"), p("3,1"), p("2,2")]);
        assert_eq!(enumerate_partitions(0, 3), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(8, 5).len(), 18);
        assert_eq!(
            enumerate_dominated(&p("2,2,2,2"), 5),
            vec![p("2,2,2,2"), p("2,2,2,1,1")]
        );
        assert_eq!(enumerate_dominated(&p("6"), 1), vec![p("6")]);
        assert_eq!(enumerate_dominated(&p("3,2,1"), 3), vec![p("3,2,1"), p("2,2,2")]);
    }

    #[test]
    fn enumeration_counts_match_recurrence() {
        for d in 0..=14 {
            for k in 0..=8 {
                let all = enumerate_partitions(d, k);
                assert_eq!(all.len(), count_oracle(d, k), "d={d} k={k}");
                // strictly lexicographically descending
                assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
            }
        }
    }

    #[test]
    fn dominance_is_a_partial_order() {
        for d in 0..=10 {
            let ps = enumerate_partitions(d, 5);
            for a in &ps {
                assert!(dominance_leq(a, a));
                for b in &ps {
                    if dominance_leq(a, b) && dominance_leq(b, a) {
                        assert_eq!(a, b);
                    }
                    for c in &ps {
                        if dominance_leq(a, b) && dominance_leq(b, c) {
                            assert!(dominance_leq(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn meet_is_greatest_lower_bound() {
        for d in 0..=10 {
            let ps = enumerate_partitions(d, d);
            for a in &ps {
                for b in &ps {
                    let m = meet(a, b).unwrap();
                    let lower: Vec<_> = ps
                        .iter()
                        .filter(|x| dominance_leq(x, a) && dominance_leq(x, b))
                        .collect();
                    assert!(lower.contains(&&m));
                    assert!(lower.iter().all(|x| dominance_leq(x, &m)), "{a} ∧ {b}");
                    assert_eq!(m, meet(b, a).unwrap());
                }
            }
        }
    }

    #[test]
    fn meet_is_associative() {
        let ps = enumerate_partitions(8, 8);
        for a in &ps {
            for b in ps.iter().step_by(3) {
                for c in ps.iter().step_by(5) {
                    let l = meet(&meet(a, b).unwrap(), c).unwrap();
                    let r = meet(a, &meet(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn dominance_survives_adding_a_partition() {
        let ps = enumerate_partitions(6, 6);
        let extras = enumerate_partitions(4, 4);
        for a in &ps {
            for l in &ps {
                if !dominance_leq(a, l) {
                    continue;
                }
                for nu in &extras {
                    assert!(dominance_leq(&a.add(nu), &l.add(nu)));
                }
            }
        }
    }

    #[test]
    fn transpose_reverses_dominance() {
        for d in 0..=10 {
            let ps = enumerate_partitions(d, d);
            for a in &ps {
                assert_eq!(a.transpose().transpose(), *a);
                for l in &ps {
                    assert_eq!(
                        dominance_leq(a, l),
                        dominance_leq(&l.transpose(), &a.transpose())
                    );
                }
            }
        }
    }

    #[test]
    fn regular_elements_exist_iff_enough_boxes() {
        for m in 1..=6 {
            for d in 0..=20 {
                let any = enumerate_partitions(d, m)
                    .into_iter()
                    .any(|a| is_regular(&BoundedPartitionView::new(a, m).unwrap()));
                assert_eq!(any, d >= m * (m - 1) / 2, "m={m} d={d}");
            }
        }
    }

    #[test]
    fn shifted_lambda_dominates_staircase_past_threshold() {
        for m in 1..=4 {
            let k = m * (m + 1) / 2 + m + 1;
            for d in 0..=8 {
                for l in enumerate_partitions(d, m) {
                    let shifted = l.shift(k, m);
                    let bottom = staircase(m + 1, d + k * m).unwrap();
                    assert!(dominance_leq(&bottom, &shifted), "m={m} {l}");
                }
            }
        }
    }
}
