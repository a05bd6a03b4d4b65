//! Normalised weights `(1/d)·λ⃗`, exact convex hull membership, and finite
//! checks of the moment polytope statements for unit tensors.
//!
//! Membership is a linear feasibility problem solved by a phase-one simplex
//! over `BigRational` with Bland's rule, so answers are exact and every
//! positive answer carries a witness that [`check_witness`] re-validates.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hwv::{certify_in_s, CertifyOptions, EvalCertificate};
use crate::invariants::in_so_unit;
use crate::kronecker::{kronecker, kronecker_semigroup_points, WeightTriple};
use crate::partitions::{enumerate_partitions, is_regular, BoundedPartitionView, Partition};
use crate::serial::{parse_rational, rational_to_string};
use crate::tensors::unit_tensor;

fn q(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A point of `Δ_{m₁} × Δ_{m₂} × Δ_{m₃}`: three weakly decreasing,
/// nonnegative blocks, each summing to one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    blocks: [Vec<BigRational>; 3],
}

impl RationalPoint {
    pub fn new(blocks: [Vec<BigRational>; 3]) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::InvalidArgument(format!("block {} is empty", i + 1)));
            }
            if b.iter().any(|x| x.is_negative()) || b.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "block {} is not nonnegative and weakly decreasing",
                    i + 1
                )));
            }
            if b.iter().sum::<BigRational>() != BigRational::one() {
                return Err(Error::InvalidArgument(format!("block {} does not sum to 1", i + 1)));
            }
        }
        Ok(RationalPoint { blocks })
    }

    pub fn blocks(&self) -> &[Vec<BigRational>; 3] {
        &self.blocks
    }

    pub fn format(&self) -> [usize; 3] {
        [0, 1, 2].map(|i| self.blocks[i].len())
    }

    fn coords(&self) -> impl Iterator<Item = &BigRational> {
        self.blocks.iter().flatten()
    }

    /// `max |pᵢ − qᵢ|`.
    pub fn distance_inf(&self, other: &RationalPoint) -> Result<BigRational> {
        check_format(self.format(), other.format())?;
        Ok(self
            .coords()
            .zip(other.coords())
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(BigRational::zero))
    }

    /// `(p + q)/2`.
    pub fn midpoint(&self, other: &RationalPoint) -> Result<RationalPoint> {
        check_format(self.format(), other.format())?;
        let half = q(1, 2);
        let blocks = [0, 1, 2].map(|i| {
            self.blocks[i]
                .iter()
                .zip(&other.blocks[i])
                .map(|(a, b)| (a + b) * &half)
                .collect()
        });
        Ok(RationalPoint { blocks })
    }
}

fn check_format(a: [usize; 3], b: [usize; 3]) -> Result<()> {
    if a != b {
        return Err(Error::SizeMismatch(format!(
            "points of format {a:?} and {b:?}"
        )));
    }
    Ok(())
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let block = |b: &Vec<BigRational>| b.iter().map(rational_to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "(({}), ({}), ({}))",
            block(&self.blocks[0]),
            block(&self.blocks[1]),
            block(&self.blocks[2])
        )
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    blocks: [Vec<String>; 3],
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointRepr {
            blocks: self.blocks.clone().map(|b| b.iter().map(rational_to_string).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PointRepr::deserialize(d)?;
        let mut blocks: [Vec<BigRational>; 3] = Default::default();
        for (out, b) in blocks.iter_mut().zip(&repr.blocks) {
            for s in b {
                out.push(parse_rational(s).ok_or_else(|| de::Error::custom(format!("bad rational {s:?}")))?);
            }
        }
        RationalPoint::new(blocks).map_err(de::Error::custom)
    }
}

/// A generator of a hull, with the weight it was normalised from if known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub point: RationalPoint,
    #[serde(default)]
    pub source: Option<WeightTriple>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub points: Vec<Generator>,
}

impl GeneratorSet {
    /// Normalised weights, with duplicate points dropped (the first source
    /// is kept).
    pub fn from_weights<'a>(weights: impl IntoIterator<Item = &'a WeightTriple>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut points = Vec::new();
        for w in weights {
            let point = normalize(w)?;
            if seen.insert(point.clone()) {
                points.push(Generator {
                    point,
                    source: Some(w.clone()),
                });
            }
        }
        Ok(GeneratorSet { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `(1/d)·λ⃗`, each block padded with zeros to its format slot.
pub fn normalize(lambda: &WeightTriple) -> Result<RationalPoint> {
    let d = lambda.degree();
    if d == 0 {
        return Err(Error::InvalidArgument("cannot normalise a weight of degree 0".into()));
    }
    let blocks = [0, 1, 2].map(|i| {
        lambda.lambda[i]
            .padded(lambda.format[i])
            .into_iter()
            .map(|x| q(x, d))
            .collect()
    });
    Ok(RationalPoint { blocks })
}

/// `u_m⃗ = (u_{m₁}, u_{m₂}, u_{m₃})` with `u_m = (1/m, …, 1/m)`.
pub fn uniform_point(format: [usize; 3]) -> Result<RationalPoint> {
    if format.contains(&0) {
        return Err(Error::InvalidArgument(format!("format {format:?} has an empty slot")));
    }
    Ok(RationalPoint {
        blocks: format.map(|m| vec![q(1, m); m]),
    })
}

/// Normalised points of the Kronecker semigroup of the given format up to
/// `max_degree`, deduplicated.
pub fn kronecker_generators(format: [usize; 3], max_degree: usize) -> Result<GeneratorSet> {
    GeneratorSet::from_weights(&kronecker_semigroup_points(format, max_degree)?)
}

/// Decides whether `p` is a convex combination of `gens`.
///
/// Returns the coefficients (nonnegative, summing to one, one per
/// generator) on success and `None` when `p` lies outside the hull.
pub fn hull_membership(p: &RationalPoint, gens: &GeneratorSet) -> Result<Option<Vec<BigRational>>> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("empty generator set".into()));
    }
    for g in &gens.points {
        check_format(p.format(), g.point.format())?;
    }
    // Σ cⱼ gⱼ = p and Σ cⱼ = 1, c ≥ 0; all right-hand sides are ≥ 0
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    let cols: Vec<Vec<&BigRational>> = gens.points.iter().map(|g| g.point.coords().collect()).collect();
    for (k, pk) in p.coords().enumerate() {
        rows.push(cols.iter().map(|c| c[k].clone()).collect());
        rhs.push(pk.clone());
    }
    rows.push(vec![BigRational::one(); gens.len()]);
    rhs.push(BigRational::one());
    Ok(phase_one(rows, rhs))
}

/// Phase one of the simplex method with Bland's rule: a nonnegative `x`
/// with `A x = b` (`b ≥ 0`), or `None`.
fn phase_one(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + rows;
    // tableau [A | I | b], artificials n..n+rows start in the basis
    let mut t: Vec<Vec<BigRational>> = a
        .into_iter()
        .zip(b)
        .enumerate()
        .map(|(i, (mut row, bi))| {
            row.extend((0..rows).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row.push(bi);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..width).collect();
    let cost = |j: usize| if j >= n { BigRational::one() } else { BigRational::zero() };
    loop {
        let entering = (0..width).find(|&j| {
            let mut d = cost(j);
            for (i, &bv) in basis.iter().enumerate() {
                if bv >= n {
                    d -= &t[i][j];
                }
            }
            d.is_negative()
        });
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if !t[i][j].is_positive() {
                continue;
            }
            let ratio = &t[i][width] / &t[i][j];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so a ratio always exists
        let (r, _) = leave?;
        let pivot = t[r][j].clone();
        for x in t[r].iter_mut() {
            *x /= &pivot;
        }
        let prow = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        basis[r] = j;
    }
    let infeasible = basis
        .iter()
        .enumerate()
        .any(|(i, &bv)| bv >= n && !t[i][width].is_zero());
    if infeasible {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width].clone();
        }
    }
    Some(x)
}

/// True iff `coeffs` are nonnegative, sum to one and reproduce `p` exactly.
pub fn check_witness(p: &RationalPoint, gens: &GeneratorSet, coeffs: &[BigRational]) -> bool {
    if coeffs.len() != gens.len() || coeffs.iter().any(|c| c.is_negative()) {
        return false;
    }
    if coeffs.iter().sum::<BigRational>() != BigRational::one() {
        return false;
    }
    if gens.points.iter().any(|g| g.point.format() != p.format()) {
        return false;
    }
    p.coords().enumerate().all(|(k, pk)| {
        let combo: BigRational = gens
            .points
            .iter()
            .zip(coeffs)
            .map(|(g, c)| c * g.point.coords().nth(k).unwrap())
            .sum();
        &combo == pk
    })
}

fn regular_partitions(d: usize, m: usize) -> Vec<Partition> {
    enumerate_partitions(d, m)
        .into_iter()
        .filter(|p| is_regular(&BoundedPartitionView::new(p.clone(), m).unwrap()))
        .collect()
}

/// A regular partition `λ ⊢_m D` with `|λ/D − x|∞ < 1/N` for a point `x`
/// of `Δ_m`, where `D = (m(m−1)/2 + 1)·N`.
///
/// Round `x·(D − s)` to a partition `μ` of `D − s` (error below one per
/// entry, largest remainder rounding), then add the staircase `(m−1, …, 1, 0)` of size `s`; the result is
/// strictly decreasing and within `1 + s` of `D·x` in every entry.
pub fn regular_approximant(x: &[BigRational], n: usize) -> Result<Partition> {
    let m = x.len();
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("empty block or zero precision".into()));
    }
    let s = m * (m - 1) / 2;
    let d = (s + 1) * n;
    let e = BigRational::from_integer(BigInt::from(d - s));
    let scaled: Vec<BigRational> = x.iter().map(|xi| xi * &e).collect();
    let mut mu: Vec<usize> = scaled
        .iter()
        .map(|v| usize::try_from(v.floor().to_integer()).unwrap_or(0))
        .collect();
    let short = (d - s) - mu.iter().sum::<usize>();
    // largest remainders first, ties by position: keeps μ decreasing, and
    // only entries with a positive fractional part are raised
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| scaled[j].fract().cmp(&scaled[i].fract()).then(i.cmp(&j)));
    for &i in order.iter().take(short) {
        mu[i] += 1;
    }
    let parts: Vec<usize> = mu.iter().enumerate().map(|(i, v)| v + (m - 1 - i)).collect();
    Partition::new(parts)
}

/// Seeded random point of `Δ_m⃗` with denominators up to `m·scale`.
pub fn random_simplex_point(format: [usize; 3], scale: u32, rng: &mut impl Rng) -> RationalPoint {
    let blocks = format.map(|m| loop {
        let mut v: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=scale)).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        let total: u32 = v.iter().sum();
        if total > 0 {
            break v.iter().map(|&x| q(x as usize, total as usize)).collect();
        }
    });
    RationalPoint { blocks }
}

/// Finite check of `P°(⟨m⟩) = Δ(m, m, m)`.
///
/// (a) every triple of regular partitions of degree `≤ max_degree` passes
/// [`in_so_unit`]; (b) each of `samples` seeded points of `Δ_(m,m,m)` has a
/// normalised all-regular triple within `1/max_degree` in the `∞`-norm, and
/// that triple passes [`in_so_unit`] too. The approximants of (b) have degree
/// `(m(m−1)/2 + 1)·max_degree`, see [`regular_approximant`].
pub fn verify_theorem84_unit(m: usize, max_degree: usize, samples: usize, seed: u64) -> Result<bool> {
    if m == 0 || max_degree == 0 {
        return Err(Error::InvalidArgument("m and max_degree must be positive".into()));
    }
    for d in 1..=max_degree {
        let regs = regular_partitions(d, m);
        for a in &regs {
            for b in &regs {
                for c in &regs {
                    let l = WeightTriple::cubic(a.clone(), b.clone(), c.clone(), m)?;
                    if !in_so_unit(&l, m)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    let bound = q(1, max_degree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = random_simplex_point([m; 3], 4 * max_degree as u32, &mut rng);
        let [a, b, c] = [0, 1, 2].map(|i| regular_approximant(&x.blocks[i], max_degree));
        let l = WeightTriple::cubic(a?, b?, c?, m)?;
        if !in_so_unit(&l, m)? || normalize(&l)?.distance_inf(&x)? > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Witness for `u_m⃗ ∈ P(⟨m⟩)`: `ℓ·ε_m⃗ = ((ℓ^m), (ℓ^m), (ℓ^m)) ∈ S(⟨m⟩)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UniformWitness {
    pub ell: usize,
    pub certificate: EvalCertificate,
}

/// Smallest `ℓ ≤ max_degree/m` with `g(ℓ^m, ℓ^m, ℓ^m) > 0` and a certificate
/// for `((ℓ^m), (ℓ^m), (ℓ^m)) ∈ S(⟨m⟩)`, or `None` if the search fails.
pub fn verify_lemma82(m: usize, max_degree: usize, opts: &CertifyOptions) -> Result<Option<UniformWitness>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let w = unit_tensor(m);
    for ell in 1..=max_degree / m {
        let r = Partition::rectangle(ell, m);
        if kronecker(&r, &r, &r)?.is_zero() {
            continue;
        }
        let l = WeightTriple::cubic(r.clone(), r.clone(), r, m)?;
        if let Some(certificate) = certify_in_s(&l, &w, opts)?.certificate {
            return Ok(Some(UniformWitness { ell, certificate }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn gens(points: &[RationalPoint]) -> GeneratorSet {
        GeneratorSet {
            points: points
                .iter()
                .map(|x| Generator {
                    point: x.clone(),
                    source: None,
                })
                .collect(),
        }
    }

    #[test]
    fn normalize_examples() {
        let l = WeightTriple::cubic(p("3"), p("3"), p("3"), 1).unwrap();
        assert_eq!(normalize(&l).unwrap(), uniform_point([1, 1, 1]).unwrap());
        let l2 = WeightTriple::new(p("2,2,2,2"), p("2,2,2,2"), p("5,1,1,1"), [4, 4, 5]).unwrap();
        assert_eq!(normalize(&l2).unwrap().to_string(), "((1/4,1/4,1/4,1/4), (1/4,1/4,1/4,1/4), (5/8,1/8,1/8,1/8,0))");
        let l3 = WeightTriple::cubic(p("3,3"), p("3,3"), p("3,3"), 2).unwrap();
        assert_eq!(normalize(&l3).unwrap(), uniform_point([2, 2, 2]).unwrap());
    }

    #[test]
    fn uniform_points() {
        assert_eq!(uniform_point([4, 4, 4]).unwrap().blocks()[2], vec![q(1, 4); 4]);
        assert!(uniform_point([0, 1, 1]).is_err());
    }

    #[test]
    fn point_validation() {
        assert!(RationalPoint::new([vec![q(1, 3), q(2, 3)], vec![q(1, 1)], vec![q(1, 1)]]).is_err());
        assert!(RationalPoint::new([vec![q(1, 2)], vec![q(1, 1)], vec![q(1, 1)]]).is_err());
    }

    #[test]
    fn generators_are_members() {
        let g = kronecker_generators([2, 2, 2], 4).unwrap();
        for x in &g.points {
            let c = hull_membership(&x.point, &g).unwrap().expect("generator in its own hull");
            assert!(check_witness(&x.point, &g, &c));
        }
    }

    #[test]
    fn vertex_outside_interior_hull() {
        let u = uniform_point([2, 2, 2]).unwrap();
        let other = RationalPoint::new([vec![q(2, 3), q(1, 3)], vec![q(2, 3), q(1, 3)], vec![q(1, 2), q(1, 2)]]).unwrap();
        let set = gens(&[u, other]);
        let vertex = RationalPoint::new([vec![q(1, 1), q(0, 1)], vec![q(1, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert_eq!(hull_membership(&vertex, &set).unwrap(), None);
    }

    #[test]
    fn format_mismatch_is_error() {
        let set = gens(&[uniform_point([2, 2, 2]).unwrap()]);
        assert!(hull_membership(&uniform_point([1, 2, 2]).unwrap(), &set).is_err());
    }

    #[test]
    fn approximants_are_regular_and_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..=4 {
            for n in [1, 3, 8] {
                for _ in 0..20 {
                    let x = random_simplex_point([m; 3], 50, &mut rng);
                    let l = regular_approximant(&x.blocks[0], n).unwrap();
                    let d = (m * (m - 1) / 2 + 1) * n;
                    assert_eq!(l.size(), d);
                    assert!(is_regular(&BoundedPartitionView::new(l.clone(), m).unwrap()));
                    for (i, xi) in x.blocks[0].iter().enumerate() {
                        assert!((q(l.get(i), d) - xi).abs() < q(1, n));
                    }
                }
            }
        }
    }

    #[test]
    fn theorem84_trivial_cases() {
        assert!(verify_theorem84_unit(1, 5, 5, 0).unwrap());
        assert!(verify_theorem84_unit(2, 6, 10, 1).unwrap());
    }

    #[test]
    fn lemma82_small() {
        let opts = CertifyOptions::default();
        assert_eq!(verify_lemma82(1, 4, &opts).unwrap().unwrap().ell, 1);
        let w = verify_lemma82(2, 8, &opts).unwrap().unwrap();
        assert_eq!(w.ell, 2);
    }
}
