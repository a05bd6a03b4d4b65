//! The border rank argument end to end: a weight in `S(w)` but not in
//! `S°(⟨m⟩)` proves `R̲(w) > m`.
//!
//! Both halves are exact. The `S°` half is a dimension count that must be
//! zero, the `S` half is a nonzero evaluation of a highest weight vector.
//! There is no probabilistic conclusion: a failed search is reported as
//! inconclusive.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hwv::{certify_in_s_with_progress, CertifyOptions, EvalCertificate, TrialReport};
use crate::invariants::{matmul_invariant_dim, unit_invariant_dim, MatmulFormat};
use crate::kronecker::{kronecker, kronecker_semigroup_points, WeightTriple};
use crate::partitions::Partition;
use crate::tensors::RankOneDecomposition;

/// `((2^{n²}), (2^{n²}), (2n²−3, 1, 1, 1))` in format `(n², n², n²)`.
pub fn lemma61_weight(n: usize) -> Result<WeightTriple> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "n = {n}: (2n²−3, 1, 1, 1) needs n ≥ 2"
        )));
    }
    let nn = n * n;
    let two = Partition::new(vec![2; nn])?;
    let hook = Partition::new(vec![2 * nn - 3, 1, 1, 1])?;
    WeightTriple::cubic(two.clone(), two, hook, nn)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub weight: WeightTriple,
    pub target_m: usize,
    /// `dim (V_λ⃗)^{H_m}`; zero means `λ⃗ ∉ S°(⟨m⟩)`.
    #[serde(with = "crate::serial::bigint")]
    pub so_dimension: BigInt,
    pub not_in_so: bool,
    pub membership: Option<EvalCertificate>,
    pub trials_run: usize,
    pub terms: u64,
    /// `"R̲(w) > m"`, present iff `not_in_so` and `membership` is some.
    pub conclusion: Option<String>,
}

impl ObstructionReport {
    pub fn is_conclusive(&self) -> bool {
        self.conclusion.is_some()
    }
}

/// Runs both halves for `λ⃗` against `⟨m⟩` and the tensor `w`.
///
/// The `S°` half uses `λ⃗` padded to `m` slots, the `S` half uses `λ⃗` in the
/// format of `w` (zero padding changes neither side). The certificate search
/// is skipped when `λ⃗ ∈ S°(⟨m⟩)`, since then no conclusion is possible.
pub fn run_obstruction(
    lambda: &WeightTriple,
    w: &RankOneDecomposition,
    m: usize,
    opts: &CertifyOptions,
) -> Result<ObstructionReport> {
    run_obstruction_with_progress(lambda, w, m, opts, |_| {})
}

pub fn run_obstruction_with_progress(
    lambda: &WeightTriple,
    w: &RankOneDecomposition,
    m: usize,
    opts: &CertifyOptions,
    progress: impl FnMut(&TrialReport<'_>),
) -> Result<ObstructionReport> {
    // more rows than m: the module V_λ(ℂ^m) itself is zero
    let so_dimension = if lambda.lambda.iter().any(|l| l.len() > m) {
        BigInt::zero()
    } else {
        unit_invariant_dim(&lambda.with_format([m; 3])?, m)?
    };
    let not_in_so = so_dimension.is_zero();
    let mut report = ObstructionReport {
        weight: lambda.clone(),
        target_m: m,
        so_dimension,
        not_in_so,
        membership: None,
        trials_run: 0,
        terms: 0,
        conclusion: None,
    };
    if !not_in_so {
        return Ok(report);
    }
    if lambda.lambda.iter().zip(w.format()).any(|(l, n)| l.len() > n) {
        // λ⃗ ∉ S(w) for lack of room; nothing to certify
        return Ok(report);
    }
    let outcome = certify_in_s_with_progress(&lambda.with_format(w.format())?, w, opts, progress)?;
    report.trials_run = outcome.trials_run;
    report.terms = outcome.terms;
    report.membership = outcome.certificate;
    if report.membership.is_some() {
        report.conclusion = Some(format!("R̲(w) > {m}"));
    }
    Ok(report)
}

/// The `g`-factors `g(λᵢ, μ, μ)` for `μ = (2n)^n` and `λ⃗` from
/// [`lemma61_weight`].
pub fn remark62_factors(n: usize) -> Result<[BigInt; 3]> {
    let w = lemma61_weight(n)?;
    let mu = Partition::rectangle(2 * n, n);
    let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for (slot, l) in out.iter_mut().zip(&w.lambda) {
        *slot = kronecker(l, &mu, &mu)?;
    }
    Ok(out)
}

/// True iff the matrix multiplication invariant dimension of
/// [`lemma61_weight`] at `⟨n, n, n⟩` is at least the (positive) product of
/// the `μ = (2n)^n` factors, which puts the weight in `S°(⟨n, n, n⟩)`.
pub fn remark62_check(n: usize) -> Result<bool> {
    let w = lemma61_weight(n)?;
    let [a, b, c] = remark62_factors(n)?;
    let product = a * b * c;
    if product.is_zero() {
        return Ok(false);
    }
    let dim = matmul_invariant_dim(&w.lambda[0], &w.lambda[1], &w.lambda[2], MatmulFormat::new(n, n, n)?)?;
    Ok(dim >= product && product >= BigInt::one())
}

/// Exploratory search: weights of degree `≤ max_degree` in the Kronecker
/// semigroup of `w`'s format that avoid `S°(⟨m⟩)`, each followed by a
/// certificate search. Returns every report whose `S°` half succeeded, in
/// enumeration order. Nothing guarantees a conclusive one.
pub fn search_obstructions(
    w: &RankOneDecomposition,
    m: usize,
    max_degree: usize,
    opts: &CertifyOptions,
    mut progress: impl FnMut(&ObstructionReport),
) -> Result<Vec<ObstructionReport>> {
    let mut out = Vec::new();
    for lambda in kronecker_semigroup_points(w.format(), max_degree)? {
        let report = run_obstruction(&lambda, w, m, opts)?;
        if report.not_in_so {
            progress(&report);
            out.push(report);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensors::unit_tensor;

    #[test]
    fn lemma61_weights() {
        let w = lemma61_weight(2).unwrap();
        assert_eq!(w.to_string(), "((2,2,2,2), (2,2,2,2), (5,1,1,1))");
        assert_eq!(w.degree(), 8);
        let w3 = lemma61_weight(3).unwrap();
        assert_eq!(w3.degree(), 18);
        assert_eq!(w3.lambda[2].parts(), &[15, 1, 1, 1]);
        assert!(w3.lambda.iter().all(|l| l.size() == 18));
        assert!(lemma61_weight(1).is_err());
    }

    #[test]
    fn regular_weights_never_conclude() {
        let p = |s: &str| s.parse::<Partition>().unwrap();
        let l = WeightTriple::cubic(p("2,1"), p("2,1"), p("2,1"), 2).unwrap();
        let r = run_obstruction(&l, &unit_tensor(2), 2, &CertifyOptions::default()).unwrap();
        assert!(!r.not_in_so);
        assert!(r.membership.is_none() && r.conclusion.is_none());
    }

    #[test]
    fn failed_search_is_inconclusive() {
        // ((1,1),(1,1),(1,1)) is not in S(⟨2⟩) at all, so no certificate
        let p = |s: &str| s.parse::<Partition>().unwrap();
        let l = WeightTriple::cubic(p("1,1"), p("1,1"), p("1,1"), 2).unwrap();
        let opts = CertifyOptions {
            trials: 5,
            ..Default::default()
        };
        let r = run_obstruction(&l, &unit_tensor(2), 2, &opts).unwrap();
        assert!(r.not_in_so);
        assert!(r.membership.is_none());
        assert!(!r.is_conclusive());
    }

    #[test]
    fn remark62_holds_at_two() {
        let f = remark62_factors(2).unwrap();
        assert_eq!(f[0], BigInt::one());
        assert_eq!(f[1], BigInt::one());
        assert!(f[2] >= BigInt::one());
        assert!(remark62_check(2).unwrap());
    }
}
