//! Kronecker coefficients `g(λ, μ, ν) = dim([λ] ⊗ [μ] ⊗ [ν])^{S_d}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};
use crate::perm::Permutation;
use crate::symgroup::{character_table, factorial};
use crate::tableaux::Straightener;

/// Three partitions of a common degree, each fitting its format slot.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightTriple {
    pub lambda: [Partition; 3],
    pub format: [usize; 3],
}

impl WeightTriple {
    pub fn new(l1: Partition, l2: Partition, l3: Partition, format: [usize; 3]) -> Result<Self> {
        let d = l1.size();
        if l2.size() != d || l3.size() != d {
            return Err(Error::SizeMismatch(format!(
                "weight ({l1}; {l2}; {l3}) mixes degrees {}, {}, {}",
                d,
                l2.size(),
                l3.size()
            )));
        }
        for (i, l) in [&l1, &l2, &l3].into_iter().enumerate() {
            if l.len() > format[i] {
                return Err(Error::FormatViolation(format!(
                    "{l} has {} parts but slot {} holds {}",
                    l.len(),
                    i + 1,
                    format[i]
                )));
            }
        }
        Ok(WeightTriple {
            lambda: [l1, l2, l3],
            format,
        })
    }

    /// A cubic triple of format `(m, m, m)`.
    pub fn cubic(l1: Partition, l2: Partition, l3: Partition, m: usize) -> Result<Self> {
        Self::new(l1, l2, l3, [m, m, m])
    }

    /// The smallest format the partitions fit in.
    pub fn tight(l1: Partition, l2: Partition, l3: Partition) -> Result<Self> {
        let format = [l1.len().max(1), l2.len().max(1), l3.len().max(1)];
        Self::new(l1, l2, l3, format)
    }

    pub fn degree(&self) -> usize {
        self.lambda[0].size()
    }

    /// Same partitions read in a larger (or equal) format; zero padding
    /// changes nothing else.
    pub fn with_format(&self, format: [usize; 3]) -> Result<Self> {
        let [a, b, c] = self.lambda.clone();
        Self::new(a, b, c, format)
    }
}

impl fmt::Display for WeightTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({}), ({}), ({}))",
            self.lambda[0], self.lambda[1], self.lambda[2]
        )
    }
}

impl fmt::Debug for WeightTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.format)
    }
}

/// `g(λ, μ, ν)` from the character table of `S_d`.
pub fn kronecker(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<BigInt> {
    let d = lambda.size();
    if mu.size() != d || nu.size() != d {
        return Err(Error::SizeMismatch(format!(
            "Kronecker coefficient of partitions of {}, {}, {}",
            d,
            mu.size(),
            nu.size()
        )));
    }
    let table = character_table(d);
    let (a, b, c) = (table.row(lambda), table.row(mu), table.row(nu));
    let total: BigInt = table
        .class_sizes()
        .iter()
        .enumerate()
        .map(|(i, size)| size * &a[i] * &b[i] * &c[i])
        .sum();
    let (q, r) = total.div_rem(&factorial(d));
    if !r.is_zero() || q < BigInt::zero() {
        return Err(Error::Defect(format!(
            "character average for g({lambda}; {mu}; {nu}) is not a natural number"
        )));
    }
    Ok(q)
}

pub const BRUTEFORCE_MAX_DEGREE: usize = 5;

/// `g(λ, μ, ν)` by averaging explicit representation matrices over `S_d`.
///
/// The irreducible module `[λ]` is realised as the weight space
/// `V_λ^{(1,…,1)}` with `d` slots, whose basis is the standard tableaux and
/// whose `S_d`-action comes from straightening. Nothing here touches the
/// character table.
pub fn kronecker_bruteforce(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<BigInt> {
    let d = lambda.size();
    if mu.size() != d || nu.size() != d {
        return Err(Error::SizeMismatch("bruteforce Kronecker of mixed degrees".into()));
    }
    if d > BRUTEFORCE_MAX_DEGREE {
        return Err(Error::SizeGuard(format!(
            "bruteforce Kronecker limited to d <= {BRUTEFORCE_MAX_DEGREE}, got {d}"
        )));
    }
    let ones = vec![1; d];
    let mut st = Straightener::new();
    let mut total = 0i64;
    for sigma in Permutation::all(d) {
        let mut prod = 1i64;
        for shape in [lambda, mu, nu] {
            prod *= st.perm_action_matrix(&sigma, shape, &ones)?.trace();
            if prod == 0 {
                break;
            }
        }
        total += prod;
    }
    let order = (1..=d as i64).product::<i64>();
    if total % order != 0 {
        return Err(Error::Defect("group average of traces is not an integer".into()));
    }
    Ok(BigInt::from(total / order))
}

/// All triples of degree `1..=max_degree` in the given format with nonzero
/// Kronecker coefficient, ordered by degree and then by the enumeration
/// order of each slot.
pub fn kronecker_semigroup_points(format: [usize; 3], max_degree: usize) -> Result<Vec<WeightTriple>> {
    let per_degree: Vec<Result<Vec<WeightTriple>>> = (1..=max_degree)
        .into_par_iter()
        .map(|d| {
            let slots: Vec<Vec<Partition>> = format.iter().map(|&m| enumerate_partitions(d, m)).collect();
            let mut out = Vec::new();
            for a in &slots[0] {
                for b in &slots[1] {
                    for c in &slots[2] {
                        if !kronecker(a, b, c)?.is_zero() {
                            out.push(WeightTriple::new(a.clone(), b.clone(), c.clone(), format)?);
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for chunk in per_degree {
        out.extend(chunk?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn g(a: &str, b: &str, c: &str) -> BigInt {
        kronecker(&p(a), &p(b), &p(c)).unwrap()
    }

    #[test]
    fn values_from_the_literature() {
        assert_eq!(g("6", "6", "6"), BigInt::one());
        assert_eq!(g("2,2,2,2", "4,4", "4,4"), BigInt::one());
        assert_eq!(g("3,3,3,3", "3,3,3,3", "4,4,4"), BigInt::from(2));
        assert!(g("5,1,1,1", "4,4", "4,4") >= BigInt::one());
        assert!(kronecker(&p("2"), &p("1"), &p("2")).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let bf = |a, b, c| kronecker_bruteforce(&p(a), &p(b), &p(c)).unwrap();
        assert_eq!(bf("1,1", "1,1", "1,1"), BigInt::zero());
        assert_eq!(bf("2", "2", "2"), BigInt::one());
        assert_eq!(bf("2,1", "2,1", "2,1"), BigInt::one());
        assert!(matches!(
            kronecker_bruteforce(&p("6"), &p("6"), &p("6")),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn trivial_slot_detects_equality() {
        for d in 1..=7 {
            let ps = enumerate_partitions(d, d);
            for a in &ps {
                for b in &ps {
                    let v = kronecker(a, b, &Partition::row(d)).unwrap();
                    assert_eq!(v, BigInt::from(u8::from(a == b)));
                }
            }
        }
    }

    #[test]
    fn semigroup_point_examples() {
        let pts = kronecker_semigroup_points([1, 1, 1], 4).unwrap();
        assert_eq!(pts.len(), 4);
        for (i, t) in pts.iter().enumerate() {
            assert_eq!(t.lambda, [Partition::row(i + 1), Partition::row(i + 1), Partition::row(i + 1)]);
        }
        let pts = kronecker_semigroup_points([2, 2, 2], 2).unwrap();
        let has = |a: &str, b: &str, c: &str| pts.iter().any(|t| t.lambda == [p(a), p(b), p(c)]);
        assert!(has("2", "1,1", "1,1"));
        assert!(!has("1,1", "1,1", "1,1"));
    }

    #[test]
    fn weight_triple_validation() {
        assert!(WeightTriple::new(p("2"), p("1,1"), p("2"), [1, 2, 1]).is_ok());
        assert!(matches!(
            WeightTriple::new(p("2"), p("1,1"), p("2"), [1, 1, 1]),
            Err(Error::FormatViolation(_))
        ));
        assert!(matches!(
            WeightTriple::new(p("2"), p("1"), p("2"), [1, 1, 1]),
            Err(Error::SizeMismatch(_))
        ));
    }
}
