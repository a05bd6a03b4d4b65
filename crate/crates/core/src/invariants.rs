//! Invariant dimensions for the stabilizers of the unit tensor `⟨m⟩` and of
//! the matrix multiplication tensor, and the membership tests built on them.
//!
//! For the unit tensor the stabilizer is the torus `{(a, b, c) : aᵢbᵢcᵢ = 1}`
//! extended by the diagonal `S_m`. Its invariants in `V_λ⃗` split over the
//! weights `α` in the dominance interval below `λ₁ ∧ λ₂ ∧ λ₃`, each piece
//! being the `stab(α)`-invariants of `V_{λ₁}^α ⊗ V_{λ₂}^α ⊗ V_{λ₃}^α`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kronecker::{kronecker, WeightTriple};
use crate::linalg::nullspace;
use crate::partitions::{
    dominance_leq, enumerate_dominated, enumerate_partitions, is_regular, meet_all, staircase,
    BoundedPartitionView, Partition,
};
use crate::perm::Permutation;
use crate::symgroup::{class_size, factorial, CycleType};
use crate::tableaux::{enumerate_semistandard, weight_space_dim, Straightener};

/// `stab(α) ≅ Π S_{block}` for the slots of `α` grouped by equal value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungSubgroup {
    degree: usize,
    blocks: Vec<Vec<usize>>,
}

impl YoungSubgroup {
    /// The stabilizer of a vector of slot values, zero slots included.
    pub fn stabilizer_of(components: &[usize]) -> Self {
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, &v) in components.iter().enumerate() {
            match blocks.iter_mut().find(|(val, _)| *val == v) {
                Some((_, b)) => b.push(i),
                None => blocks.push((v, vec![i])),
            }
        }
        YoungSubgroup {
            degree: components.len(),
            blocks: blocks.into_iter().map(|(_, b)| b).collect(),
        }
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn order(&self) -> BigInt {
        self.blocks.iter().map(|b| factorial(b.len())).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// One representative per conjugacy class with the class size.
    pub fn classes(&self) -> Vec<(Permutation, BigInt)> {
        let mut out = vec![(Permutation::identity(self.degree), BigInt::one())];
        for block in &self.blocks {
            if block.len() < 2 {
                continue;
            }
            let mut next = Vec::new();
            for (rep, size) in &out {
                for ct in enumerate_partitions(block.len(), block.len()) {
                    let piece = Permutation::with_cycle_type_on(self.degree, block, &ct);
                    let csize = class_size(&CycleType(ct));
                    next.push((rep.compose(&piece), size * csize));
                }
            }
            out = next;
        }
        out
    }
}

/// Matrix multiplication of `n₁ × n₂` by `n₂ × n₃` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatmulFormat {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl MatmulFormat {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix format ({n1},{n2},{n3}) needs positive sizes"
            )));
        }
        Ok(MatmulFormat { n1, n2, n3 })
    }

    /// The tensor format `(n₁n₂, n₂n₃, n₃n₁)`.
    pub fn tensor_format(&self) -> [usize; 3] {
        [self.n1 * self.n2, self.n2 * self.n3, self.n3 * self.n1]
    }

    pub fn rotate(&self) -> Self {
        MatmulFormat {
            n1: self.n2,
            n2: self.n3,
            n3: self.n1,
        }
    }
}

impl fmt::Display for MatmulFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n1, self.n2, self.n3)
    }
}

impl FromStr for MatmulFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<usize> = s
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad matrix format {s:?}"))))
            .collect::<Result<_>>()?;
        match v[..] {
            [a, b, c] => MatmulFormat::new(a, b, c),
            _ => Err(Error::Parse(format!("matrix format needs three sizes, got {s:?}"))),
        }
    }
}

fn check_cubic(lambda: &WeightTriple, m: usize) -> Result<()> {
    for l in &lambda.lambda {
        if l.len() > m {
            return Err(Error::FormatViolation(format!("{l} has more than {m} parts")));
        }
    }
    Ok(())
}

fn triple_meet(lambda: &WeightTriple) -> Result<Partition> {
    meet_all(lambda.lambda.iter())
}

fn stab_dim_with(st: &mut Straightener, lambda: &WeightTriple, alpha: &[usize]) -> Result<BigInt> {
    let group = YoungSubgroup::stabilizer_of(alpha);
    let mut total = BigInt::zero();
    for (sigma, size) in group.classes() {
        let mut prod = BigInt::one();
        for l in &lambda.lambda {
            let tr = st.trace(&sigma, l, alpha)?;
            prod *= tr;
            if prod.is_zero() {
                break;
            }
        }
        total += size * prod;
    }
    let (q, r) = total.div_rem(&group.order());
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Defect(format!(
            "class average over stab({alpha:?}) for {lambda} is not a natural number"
        )));
    }
    Ok(q)
}

/// `dim (V_{λ₁}^α ⊗ V_{λ₂}^α ⊗ V_{λ₃}^α)^{stab(α)}` with `α` read in `m` slots.
pub fn stab_alpha_invariant_dim(lambda: &WeightTriple, alpha: &Partition, m: usize) -> Result<BigInt> {
    check_cubic(lambda, m)?;
    let view = BoundedPartitionView::new(alpha.clone(), m)?;
    let bound = triple_meet(lambda)?;
    if !dominance_leq(alpha, &bound) {
        return Err(Error::InvalidArgument(format!(
            "{alpha} is not dominated by the meet {bound}"
        )));
    }
    stab_dim_with(&mut Straightener::new(), lambda, &view.components())
}

/// One summand of [`unit_invariant_dim`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaTerm {
    pub alpha: Partition,
    #[serde(with = "crate::serial::bigint")]
    pub stabilizer_order: BigInt,
    #[serde(with = "crate::serial::bigint")]
    pub dim: BigInt,
}

/// Every summand of the `α`-sum, in enumeration order of `α`.
pub fn unit_invariant_terms(lambda: &WeightTriple, m: usize) -> Result<Vec<AlphaTerm>> {
    check_cubic(lambda, m)?;
    let bound = triple_meet(lambda)?;
    enumerate_dominated(&bound, m)
        .into_par_iter()
        .map_init(Straightener::new, |st, alpha| {
            let comps = alpha.padded(m);
            let dim = stab_dim_with(st, lambda, &comps)?;
            Ok(AlphaTerm {
                stabilizer_order: YoungSubgroup::stabilizer_of(&comps).order(),
                alpha,
                dim,
            })
        })
        .collect()
}

/// `dim (V_λ⃗)^{H_m}` for the stabilizer `H_m` of `⟨m⟩`.
pub fn unit_invariant_dim(lambda: &WeightTriple, m: usize) -> Result<BigInt> {
    Ok(unit_invariant_terms(lambda, m)?.into_iter().map(|t| t.dim).sum())
}

pub const BRUTEFORCE_MAX_SLOTS: usize = 4;
pub const BRUTEFORCE_MAX_DEGREE: usize = 6;

fn compositions(d: usize, slots: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=rem {
            cur.push(v);
            rec(rem - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if slots > 0 {
        rec(d, slots, &mut Vec::new(), &mut out);
    } else if d == 0 {
        out.push(Vec::new());
    }
    out
}

/// Independent computation of [`unit_invariant_dim`]: torus invariants are
/// the weight-matched summands `V_{λ₁}^α ⊗ V_{λ₂}^α ⊗ V_{λ₃}^α` over all
/// compositions `α`, and the whole of `S_m` is averaged over their direct
/// sum (a permutation contributes a trace only on the summands it fixes).
pub fn unit_invariant_dim_bruteforce(lambda: &WeightTriple, m: usize) -> Result<BigInt> {
    check_cubic(lambda, m)?;
    let d = lambda.degree();
    if m > BRUTEFORCE_MAX_SLOTS || d > BRUTEFORCE_MAX_DEGREE {
        return Err(Error::SizeGuard(format!(
            "bruteforce invariants limited to m <= {BRUTEFORCE_MAX_SLOTS}, d <= {BRUTEFORCE_MAX_DEGREE}"
        )));
    }
    let weights: Vec<Vec<usize>> = compositions(d, m)
        .into_iter()
        .filter(|a| lambda.lambda.iter().all(|l| !enumerate_semistandard(l, a).is_empty()))
        .collect();
    let mut st = Straightener::new();
    let mut total = BigInt::zero();
    for sigma in Permutation::all(m) {
        for a in &weights {
            if (0..m).any(|i| a[sigma.apply(i)] != a[i]) {
                continue;
            }
            let mut prod = BigInt::one();
            for l in &lambda.lambda {
                prod *= st.perm_action_matrix(&sigma, l, a)?.trace();
            }
            total += prod;
        }
    }
    let (q, r) = total.div_rem(&factorial(m));
    if !r.is_zero() {
        return Err(Error::Defect("S_m average of traces is not an integer".into()));
    }
    Ok(q)
}

/// `λ⃗ ∈ S°(⟨m⟩)`, i.e. `dim (V_λ⃗)^{H_m} > 0`.
///
/// Stops at the first positive summand. A regular `α` has trivial stabilizer
/// and contributes the product of three positive Kostka numbers, so those are
/// tried first; the rest follow by increasing stabilizer order.
pub fn in_so_unit(lambda: &WeightTriple, m: usize) -> Result<bool> {
    check_cubic(lambda, m)?;
    let bound = triple_meet(lambda)?;
    let mut alphas: Vec<(BigInt, Vec<usize>)> = enumerate_dominated(&bound, m)
        .into_iter()
        .map(|a| {
            let comps = a.padded(m);
            (YoungSubgroup::stabilizer_of(&comps).order(), comps)
        })
        .collect();
    alphas.sort_by(|x, y| x.0.cmp(&y.0));
    let mut st = Straightener::new();
    for (order, comps) in alphas {
        if order.is_one() {
            if lambda.lambda.iter().all(|l| weight_space_dim(l, &comps) > 0) {
                return Ok(true);
            }
            continue;
        }
        if !stab_dim_with(&mut st, lambda, &comps)?.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `⊥_m(d)` when it is regular and below the meet of the triple.
///
/// `⊥_m(d)` is the smallest regular element of `Par_m(d)`, so a regular
/// `α ⪯ λ₁ ∧ λ₂ ∧ λ₃` exists exactly when this returns `Some`.
pub fn regular_witness(lambda: &WeightTriple, m: usize) -> Option<Partition> {
    if m == 0 || lambda.lambda.iter().any(|l| l.len() > m) {
        return None;
    }
    let bottom = staircase(m, lambda.degree()).ok()?;
    let view = BoundedPartitionView::new(bottom.clone(), m).ok()?;
    if !is_regular(&view) {
        return None;
    }
    let bound = triple_meet(lambda).ok()?;
    dominance_leq(&bottom, &bound).then_some(bottom)
}

/// Upper bound on the shift needed by [`barrier_lift`].
pub fn barrier_bound(m: usize) -> usize {
    m * (m + 1) / 2 + m + 1
}

/// Smallest `k` such that `λᵢ′ = (λᵢ¹ + k, …, λᵢ^m + k, 0)` has a regular
/// witness in `m + 1` slots, together with the lifted triple.
pub fn barrier_lift(lambda: &WeightTriple, m: usize) -> Result<(usize, WeightTriple)> {
    check_cubic(lambda, m)?;
    for k in 0..=barrier_bound(m) {
        let [a, b, c] = lambda.lambda.clone().map(|l| l.shift(k, m));
        let lifted = WeightTriple::cubic(a, b, c, m + 1)?;
        if regular_witness(&lifted, m + 1).is_some() {
            return Ok((k, lifted));
        }
    }
    Err(Error::Defect(format!(
        "no lift of {lambda} within the shift bound {}",
        barrier_bound(m)
    )))
}

/// `dim (V_λ⃗)^H` for the stabilizer of `⟨n₁, n₂, n₃⟩`:
/// `Σ g(λ₁₂, μ₁, μ₂) g(λ₂₃, μ₂, μ₃) g(λ₃₁, μ₃, μ₁)` over `μᵢ ⊢_{nᵢ} d`.
pub fn matmul_invariant_dim(
    l12: &Partition,
    l23: &Partition,
    l31: &Partition,
    fmt: MatmulFormat,
) -> Result<BigInt> {
    let d = l12.size();
    if l23.size() != d || l31.size() != d {
        return Err(Error::SizeMismatch(format!(
            "matrix multiplication weight of degrees {d}, {}, {}",
            l23.size(),
            l31.size()
        )));
    }
    let tf = fmt.tensor_format();
    for (l, cap) in [(l12, tf[0]), (l23, tf[1]), (l31, tf[2])] {
        if l.len() > cap {
            return Err(Error::FormatViolation(format!("{l} has more than {cap} parts")));
        }
    }
    let mu1s = enumerate_partitions(d, fmt.n1);
    let mu2s = enumerate_partitions(d, fmt.n2);
    let mu3s = enumerate_partitions(d, fmt.n3);
    let mut memo: HashMap<(u8, usize, usize), BigInt> = HashMap::new();
    let mut g = |tag: u8, l: &Partition, i: usize, a: &Partition, j: usize, b: &Partition| -> Result<BigInt> {
        if let Some(v) = memo.get(&(tag, i, j)) {
            return Ok(v.clone());
        }
        let v = kronecker(l, a, b)?;
        memo.insert((tag, i, j), v.clone());
        Ok(v)
    };
    let mut total = BigInt::zero();
    for (j2, mu2) in mu2s.iter().enumerate() {
        for (j1, mu1) in mu1s.iter().enumerate() {
            let first = g(0, l12, j1, mu1, j2, mu2)?;
            if first.is_zero() {
                continue;
            }
            for (j3, mu3) in mu3s.iter().enumerate() {
                let second = g(1, l23, j2, mu2, j3, mu3)?;
                if second.is_zero() {
                    continue;
                }
                let third = g(2, l31, j3, mu3, j1, mu1)?;
                total += &first * second * third;
            }
        }
    }
    Ok(total)
}

pub const UNIQUE_TENSOR_MAX_SLOTS: usize = 4;

/// Checks that the tensors in `(ℚ^m)^{⊗3}` fixed by the diagonal `S_m` and by
/// sampled torus elements `(diag a, diag b, diag c)`, `aᵢbᵢcᵢ = 1`, form the
/// line through `⟨m⟩`. Uses a fixed seed and four torus samples.
pub fn unique_invariant_tensor_check(m: usize) -> Result<bool> {
    unique_invariant_tensor_check_with(m, 4, 0x5eed)
}

/// Seeded version of [`unique_invariant_tensor_check`]. Torus elements are
/// drawn with random nonzero rational coordinates; extra samples can only
/// shrink the computed fixed space toward the true one.
pub fn unique_invariant_tensor_check_with(m: usize, samples: usize, seed: u64) -> Result<bool> {
    if m == 0 || m > UNIQUE_TENSOR_MAX_SLOTS {
        return Err(Error::SizeGuard(format!(
            "fixed tensor check needs 1 <= m <= {UNIQUE_TENSOR_MAX_SLOTS}"
        )));
    }
    let n = m * m * m;
    let idx = |p: usize, q: usize, r: usize| (p * m + q) * m + r;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for sigma in Permutation::all(m).into_iter().filter(|s| !s.is_identity()) {
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    // (σ T)[σp, σq, σr] = T[p, q, r]
                    let mut row = vec![BigRational::zero(); n];
                    row[idx(sigma.apply(p), sigma.apply(q), sigma.apply(r))] += BigRational::one();
                    row[idx(p, q, r)] -= BigRational::one();
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=9);
        if num != 0 {
            return BigRational::new(num.into(), den.into());
        }
    };
    for _ in 0..samples {
        let a: Vec<BigRational> = (0..m).map(|_| nonzero(&mut rng)).collect();
        let b: Vec<BigRational> = (0..m).map(|_| nonzero(&mut rng)).collect();
        let c: Vec<BigRational> = (0..m).map(|i| (&a[i] * &b[i]).recip()).collect();
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    let scale = &a[p] * &b[q] * &c[r] - BigRational::one();
                    if !scale.is_zero() {
                        let mut row = vec![BigRational::zero(); n];
                        row[idx(p, q, r)] = scale;
                        rows.push(row);
                    }
                }
            }
        }
    }
    let basis = nullspace(&rows, n);
    if basis.len() != 1 {
        return Ok(false);
    }
    let v = &basis[0];
    let unit: Vec<bool> = (0..n).map(|k| (0..m).any(|j| k == idx(j, j, j))).collect();
    let pivot = &v[idx(0, 0, 0)];
    Ok(!pivot.is_zero() && (0..n).all(|k| if unit[k] { &v[k] == pivot } else { v[k].is_zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn cubic(a: &str, b: &str, c: &str, m: usize) -> WeightTriple {
        WeightTriple::cubic(p(a), p(b), p(c), m).unwrap()
    }

    fn lemma61() -> WeightTriple {
        cubic("2,2,2,2", "2,2,2,2", "5,1,1,1", 5)
    }

    #[test]
    fn young_subgroup_classes_cover_the_group() {
        let y = YoungSubgroup::stabilizer_of(&[2, 2, 2, 1, 1]);
        assert_eq!(y.block_sizes(), vec![3, 2]);
        assert_eq!(y.order(), BigInt::from(12));
        let classes = y.classes();
        assert_eq!(classes.len(), 3 * 2);
        let total: BigInt = classes.iter().map(|(_, s)| s.clone()).sum();
        assert_eq!(total, y.order());
        for (sigma, _) in &classes {
            assert!((0..5).all(|i| [2, 2, 2, 1, 1][sigma.apply(i)] == [2, 2, 2, 1, 1][i]));
        }
    }

    #[test]
    fn stab_alpha_examples() {
        for d in 1..=5 {
            let t = cubic(&d.to_string(), &d.to_string(), &d.to_string(), 1);
            assert_eq!(stab_alpha_invariant_dim(&t, &Partition::row(d), 1).unwrap(), BigInt::one());
        }
        let t = lemma61();
        assert!(stab_alpha_invariant_dim(&t, &p("2,2,2,2"), 5).unwrap().is_zero());
        assert!(stab_alpha_invariant_dim(&t, &p("2,2,2,1,1"), 5).unwrap().is_zero());
        assert!(stab_alpha_invariant_dim(&t, &p("3,2,1,1,1"), 5).is_err());
    }

    #[test]
    fn regular_alpha_gives_kostka_product() {
        let t = cubic("4,2", "3,3", "4,1,1", 3);
        let alpha = p("3,2,1");
        let expect: u128 = t.lambda.iter().map(|l| weight_space_dim(l, &alpha.padded(3))).product();
        assert_eq!(stab_alpha_invariant_dim(&t, &alpha, 3).unwrap(), BigInt::from(expect));
    }

    #[test]
    fn lemma61_weight_is_not_in_the_unit_orbit_semigroup() {
        let t = lemma61();
        let terms = unit_invariant_terms(&t, 5).unwrap();
        let alphas: Vec<_> = terms.iter().map(|x| x.alpha.clone()).collect();
        assert_eq!(alphas, vec![p("2,2,2,2"), p("2,2,2,1,1")]);
        assert!(unit_invariant_dim(&t, 5).unwrap().is_zero());
        assert!(!in_so_unit(&t, 5).unwrap());
        assert_eq!(regular_witness(&t, 5), None);
    }

    #[test]
    fn bruteforce_agrees_on_small_cases() {
        for (a, b, c, m) in [("2", "1,1", "1,1", 2), ("2", "2", "2", 2), ("1", "1", "1", 1), ("2,1", "2,1", "3", 3)] {
            let t = cubic(a, b, c, m);
            assert_eq!(
                unit_invariant_dim(&t, m).unwrap(),
                unit_invariant_dim_bruteforce(&t, m).unwrap(),
                "{t}"
            );
        }
    }

    #[test]
    fn witnesses_and_lifts() {
        let t = cubic("3,2,1", "3,2,1", "3,2,1", 3);
        assert_eq!(regular_witness(&t, 3), Some(p("3,2,1")));
        assert!(in_so_unit(&t, 3).unwrap());
        let t = cubic("4", "4", "4", 1);
        assert_eq!(regular_witness(&t, 1), Some(p("4")));
        let (k, lifted) = barrier_lift(&cubic("3,2,1", "3,2,1", "3,2,1", 3), 3).unwrap();
        assert!(k <= barrier_bound(3));
        assert!(in_so_unit(&lifted, 4).unwrap());
        assert_eq!(lifted.format, [4, 4, 4]);
    }

    #[test]
    fn matmul_examples() {
        let one = MatmulFormat::new(1, 1, 1).unwrap();
        for d in 1..=5 {
            let r = Partition::row(d);
            assert_eq!(matmul_invariant_dim(&r, &r, &r, one).unwrap(), BigInt::one());
        }
        let f = MatmulFormat::new(2, 3, 1).unwrap();
        assert_eq!(matmul_invariant_dim(&p("1"), &p("1"), &p("1"), f).unwrap(), BigInt::one());
        let f = MatmulFormat::new(2, 2, 2).unwrap();
        assert!(matmul_invariant_dim(&p("2,2,2,2"), &p("2,2,2,2"), &p("5,1,1,1"), f).unwrap() >= BigInt::one());
        assert!(matches!(
            matmul_invariant_dim(&p("1,1"), &p("2"), &p("2"), one),
            Err(Error::FormatViolation(_))
        ));
        assert_eq!("2,2,3".parse::<MatmulFormat>().unwrap(), MatmulFormat::new(2, 2, 3).unwrap());
    }

    #[test]
    fn unit_tensor_spans_the_fixed_space() {
        for m in 1..=4 {
            assert!(unique_invariant_tensor_check(m).unwrap(), "m = {m}");
        }
        // with no torus samples the S_m-fixed space is larger
        assert!(!unique_invariant_tensor_check_with(2, 0, 1).unwrap());
        assert!(unique_invariant_tensor_check(5).is_err());
    }
}
