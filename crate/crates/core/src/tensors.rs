//! Tensors as explicit sums of rank-one terms, with exact integer coordinates.
//!
//! Matrix multiplication `⟨n₁, n₂, n₃⟩ = Σ e_ij ⊗ e_jk ⊗ e_ki` lives in format
//! `(n₁n₂, n₂n₃, n₃n₁)`. The pair `(i, j)` of the first factor is flattened
//! row-major to `(i−1)n₂ + j`, and cyclically `(j, k) ↦ (j−1)n₃ + k`,
//! `(k, i) ↦ (k−1)n₁ + i` for the other two.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::invariants::MatmulFormat;
use crate::linalg::IntMatrix;

/// `w = Σₛ aₛ ⊗ bₛ ⊗ cₛ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankOneDecomposition {
    format: [usize; 3],
    terms: Vec<[Vec<i64>; 3]>,
}

impl RankOneDecomposition {
    pub fn new(format: [usize; 3], terms: Vec<[Vec<i64>; 3]>) -> Result<Self> {
        for (s, t) in terms.iter().enumerate() {
            for i in 0..3 {
                if t[i].len() != format[i] {
                    return Err(Error::SizeMismatch(format!(
                        "term {} has a factor-{} vector of length {} in format {:?}",
                        s + 1,
                        i + 1,
                        t[i].len(),
                        format
                    )));
                }
            }
        }
        Ok(RankOneDecomposition { format, terms })
    }

    pub fn format(&self) -> [usize; 3] {
        self.format
    }

    pub fn terms(&self) -> &[[Vec<i64>; 3]] {
        &self.terms
    }

    /// Number of terms, an upper bound on the rank.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same tensor with every factor space padded by zero coordinates.
    pub fn padded(&self, format: [usize; 3]) -> Result<Self> {
        if (0..3).any(|i| format[i] < self.format[i]) {
            return Err(Error::FormatViolation(format!(
                "cannot shrink format {:?} to {:?}",
                self.format, format
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                for i in 0..3 {
                    t[i].resize(format[i], 0);
                }
                t
            })
            .collect();
        Ok(RankOneDecomposition { format, terms })
    }

    pub fn negated(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|[a, b, c]| [a.iter().map(|x| -x).collect(), b.clone(), c.clone()])
            .collect();
        RankOneDecomposition {
            format: self.format,
            terms,
        }
    }

    /// Concatenation of the term lists, i.e. the sum of the tensors.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.format != other.format {
            return Err(Error::SizeMismatch("sum of tensors of different formats".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(RankOneDecomposition {
            format: self.format,
            terms,
        })
    }

    /// SHA-256 of the canonical text form, hex encoded.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_string().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for RankOneDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [m1, m2, m3] = self.format;
        writeln!(f, "format {m1} {m2} {m3}")?;
        for [a, b, c] in &self.terms {
            writeln!(f, "{} | {} | {}", join(a), join(b), join(c))?;
        }
        Ok(())
    }
}

impl FromStr for RankOneDecomposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty decomposition file".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 4 || dims[0] != "format" {
            return Err(Error::Parse(format!("expected `format m1 m2 m3`, got {header:?}")));
        }
        let mut format = [0; 3];
        for i in 0..3 {
            format[i] = dims[i + 1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad dimension {:?}", dims[i + 1])))?;
        }
        let mut terms = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split('|').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("term line needs three factors: {line:?}")));
            }
            let mut term: [Vec<i64>; 3] = Default::default();
            for i in 0..3 {
                term[i] = parts[i]
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::Parse(format!("bad coordinate {x:?} in {line:?}")))
                    })
                    .collect::<Result<_>>()?;
            }
            terms.push(term);
        }
        RankOneDecomposition::new(format, terms)
    }
}

fn basis(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `⟨m⟩ = Σ_j e_j ⊗ e_j ⊗ e_j`.
pub fn unit_tensor(m: usize) -> RankOneDecomposition {
    RankOneDecomposition {
        format: [m, m, m],
        terms: (0..m).map(|j| [basis(m, j), basis(m, j), basis(m, j)]).collect(),
    }
}

/// `⟨n₁, n₂, n₃⟩` with its `n₁n₂n₃` defining terms.
pub fn matmul_tensor(fmt: MatmulFormat) -> RankOneDecomposition {
    let MatmulFormat { n1, n2, n3 } = fmt;
    let format = fmt.tensor_format();
    let mut terms = Vec::with_capacity(n1 * n2 * n3);
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                terms.push([
                    basis(format[0], i * n2 + j),
                    basis(format[1], j * n3 + k),
                    basis(format[2], k * n1 + i),
                ]);
            }
        }
    }
    RankOneDecomposition { format, terms }
}

/// Strassen's seven products for `⟨2, 2, 2⟩`, checked against the defining
/// decomposition before being returned.
pub fn strassen_decomposition() -> Result<RankOneDecomposition> {
    // coordinates: A = [a11 a12 a21 a22], B likewise, C as the third factor
    // indexed by (k, i), so C_ik sits at 2k + i: [c11 c21 c12 c22]
    #[rustfmt::skip]
    let terms: Vec<[Vec<i64>; 3]> = vec![
        [vec![1, 0, 0, 1],  vec![1, 0, 0, 1],  vec![1, 0, 0, 1]],  // M1 → C11, C22
        [vec![0, 0, 1, 1],  vec![1, 0, 0, 0],  vec![0, 1, 0, -1]], // M2 → C21, −C22
        [vec![1, 0, 0, 0],  vec![0, 1, 0, -1], vec![0, 0, 1, 1]],  // M3 → C12, C22
        [vec![0, 0, 0, 1],  vec![-1, 0, 1, 0], vec![1, 1, 0, 0]],  // M4 → C11, C21
        [vec![1, 1, 0, 0],  vec![0, 0, 0, 1],  vec![-1, 0, 1, 0]], // M5 → −C11, C12
        [vec![-1, 0, 1, 0], vec![1, 1, 0, 0],  vec![0, 0, 0, 1]],  // M6 → C22
        [vec![0, 1, 0, -1], vec![0, 0, 1, 1],  vec![1, 0, 0, 0]],  // M7 → C11
    ];
    let w = RankOneDecomposition::new([4, 4, 4], terms)?;
    let reference = matmul_tensor(MatmulFormat::new(2, 2, 2)?);
    if dense_expand(&w)? != dense_expand(&reference)? {
        return Err(Error::Defect("seven-term decomposition does not expand to <2,2,2>".into()));
    }
    if w.terms.iter().flatten().flatten().any(|x| x.abs() > 1) {
        return Err(Error::Defect("seven-term decomposition has entries outside {-1,0,1}".into()));
    }
    Ok(w)
}

/// `unit:m`, `matmul:n1,n2,n3` or `strassen`.
pub fn named_tensor(name: &str) -> Result<RankOneDecomposition> {
    let name = name.trim();
    if name == "strassen" {
        return strassen_decomposition();
    }
    if let Some(m) = name.strip_prefix("unit:") {
        let m: usize = m
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad unit tensor size in {name:?}")))?;
        if m == 0 {
            return Err(Error::InvalidArgument("unit tensor needs m >= 1".into()));
        }
        return Ok(unit_tensor(m));
    }
    if let Some(f) = name.strip_prefix("matmul:") {
        return Ok(matmul_tensor(f.parse()?));
    }
    Err(Error::Parse(format!(
        "unknown tensor {name:?} (expected unit:m, matmul:n1,n2,n3 or strassen)"
    )))
}

/// `(g₁, g₂, g₃) ∈ GL_{m₁} × GL_{m₂} × GL_{m₃}` with integer entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    g: [IntMatrix; 3],
}

impl GroupElement {
    pub fn new(g: [IntMatrix; 3]) -> Result<Self> {
        for (i, m) in g.iter().enumerate() {
            if m.rows() != m.cols() {
                return Err(Error::SizeMismatch(format!("g{} is not square", i + 1)));
            }
            if m.det().is_zero() {
                return Err(Error::InvalidArgument(format!("g{} is singular", i + 1)));
            }
        }
        Ok(GroupElement { g })
    }

    pub fn identity(format: [usize; 3]) -> Self {
        GroupElement {
            g: format.map(IntMatrix::identity),
        }
    }

    /// Permutation matrices `P_π` (sending `e_j` to `e_{π(j)}`) in each factor.
    pub fn permutations(perms: [&crate::perm::Permutation; 3]) -> Self {
        GroupElement {
            g: perms.map(|p| {
                let n = p.degree();
                let mut m = IntMatrix::zeros(n, n);
                for j in 0..n {
                    m.set(p.apply(j), j, 1);
                }
                m
            }),
        }
    }

    pub fn matrices(&self) -> &[IntMatrix; 3] {
        &self.g
    }

    pub fn format(&self) -> [usize; 3] {
        [self.g[0].rows(), self.g[1].rows(), self.g[2].rows()]
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Vec<i64>>> = self.g.iter().map(IntMatrix::to_rows).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<Vec<i64>>> = Vec::deserialize(d)?;
        let mats: Vec<IntMatrix> = rows.into_iter().map(IntMatrix::from_rows).collect();
        let g: [IntMatrix; 3] = mats
            .try_into()
            .map_err(|_| serde::de::Error::custom("group element needs three matrices"))?;
        GroupElement::new(g).map_err(serde::de::Error::custom)
    }
}

fn mat_vec(m: &IntMatrix, v: &[i64]) -> Result<Vec<i64>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .zip(v)
                .try_fold(0i64, |acc, (a, b)| acc.checked_add(a.checked_mul(*b)?))
                .ok_or_else(|| Error::SizeGuard("coordinate overflow applying a group element".into()))
        })
        .collect()
}

/// Term-wise image `(g₁aₛ, g₂bₛ, g₃cₛ)`.
pub fn apply_group(g: &GroupElement, w: &RankOneDecomposition) -> Result<RankOneDecomposition> {
    if g.format() != w.format {
        return Err(Error::SizeMismatch(format!(
            "group element of format {:?} on a tensor of format {:?}",
            g.format(),
            w.format
        )));
    }
    let terms = w
        .terms
        .iter()
        .map(|t| Ok([mat_vec(&g.g[0], &t[0])?, mat_vec(&g.g[1], &t[1])?, mat_vec(&g.g[2], &t[2])?]))
        .collect::<Result<_>>()?;
    Ok(RankOneDecomposition {
        format: w.format,
        terms,
    })
}

/// Random element with entries in `[−bound, bound]`, resampled until all
/// three determinants are nonzero. Deterministic in `seed`.
pub fn random_group_element(format: [usize; 3], bound: i64, seed: u64) -> Result<GroupElement> {
    if bound < 1 {
        return Err(Error::InvalidArgument("entry bound must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = format.map(|n| loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let m = IntMatrix::from_rows(rows);
        if n == 0 || !m.det().is_zero() {
            break m;
        }
    });
    Ok(GroupElement { g })
}

/// Default cap on the number of entries of a dense expansion.
pub const DENSE_SIZE_GUARD: usize = 1 << 22;

/// A dense `m₁ × m₂ × m₃` array, entry `(p, q, r)` at `(p·m₂ + q)·m₃ + r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseTensor<T> {
    pub format: [usize; 3],
    pub data: Vec<T>,
}

impl<T> DenseTensor<T> {
    pub fn get(&self, p: usize, q: usize, r: usize) -> &T {
        let [_, m2, m3] = self.format;
        &self.data[(p * m2 + q) * m3 + r]
    }
}

/// Entry `(p, q, r)` is `Σₛ aₛ[p] bₛ[q] cₛ[r]`.
pub fn dense_expand(w: &RankOneDecomposition) -> Result<DenseTensor<BigInt>> {
    let [m1, m2, m3] = w.format;
    let size = m1 * m2 * m3;
    if size > DENSE_SIZE_GUARD {
        return Err(Error::SizeGuard(format!(
            "dense expansion of format {:?} exceeds {DENSE_SIZE_GUARD} entries",
            w.format
        )));
    }
    let mut data = vec![BigInt::zero(); size];
    for [a, b, c] in &w.terms {
        for (p, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (q, &y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                let xy = i128::from(x) * i128::from(y);
                for (r, &z) in c.iter().enumerate().filter(|(_, z)| **z != 0) {
                    data[(p * m2 + q) * m3 + r] += BigInt::from(xy) * z;
                }
            }
        }
    }
    Ok(DenseTensor { format: w.format, data })
}

pub type RationalMatrix = Vec<Vec<BigRational>>;

/// The multilinear action of `(g₁, g₂, g₃)` on a dense tensor, over ℚ.
pub fn act_dense(g: [&RationalMatrix; 3], t: &DenseTensor<BigInt>) -> DenseTensor<BigRational> {
    let [m1, m2, m3] = t.format;
    let mut cur: Vec<BigRational> = t.data.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    // apply one factor at a time: out[.., p', ..] = Σ_p g[p'][p] cur[.., p, ..]
    let dims = [m1, m2, m3];
    for axis in 0..3 {
        let mut next = vec![BigRational::zero(); cur.len()];
        let stride = dims[axis + 1..].iter().product::<usize>();
        let n = dims[axis];
        for (flat, v) in cur.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let p = (flat / stride) % n;
            let base = flat - p * stride;
            for (pp, row) in g[axis].iter().enumerate() {
                if !row[p].is_zero() {
                    next[base + pp * stride] += &row[p] * v;
                }
            }
        }
        cur = next;
    }
    DenseTensor {
        format: t.format,
        data: cur,
    }
}

pub fn rational_matrix(m: &IntMatrix) -> RationalMatrix {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
        .collect()
}

pub fn rational_identity(n: usize) -> RationalMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn transpose(a: &RationalMatrix) -> RationalMatrix {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Inverse by Gauss–Jordan; `None` if singular.
pub fn inverse(a: &RationalMatrix) -> Option<RationalMatrix> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(rational_identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    let pivots = crate::linalg::rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `A ⊗ B` with row-major pair indices: entry `((i, j), (i′, j′))` is
/// `A[i][i′] B[j][j′]`.
pub fn kronecker_product(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let (n, m) = (a.len(), b.len());
    (0..n * m)
        .map(|r| (0..n * m).map(|c| &a[r / m][c / m] * &b[r % m][c % m]).collect())
        .collect()
}

/// `((a₁ᵀ)⁻¹ ⊗ a₂, (a₂ᵀ)⁻¹ ⊗ a₃, (a₃ᵀ)⁻¹ ⊗ a₁)`, which fixes `⟨n₁, n₂, n₃⟩`
/// for invertible `aᵢ` of size `nᵢ`.
pub fn matmul_stabilizer_element(a: [&RationalMatrix; 3]) -> Result<[RationalMatrix; 3]> {
    let inv_t = |m: &RationalMatrix| {
        inverse(&transpose(m)).ok_or_else(|| Error::InvalidArgument("singular stabilizer factor".into()))
    };
    Ok([
        kronecker_product(&inv_t(a[0])?, a[1]),
        kronecker_product(&inv_t(a[1])?, a[2]),
        kronecker_product(&inv_t(a[2])?, a[0]),
    ])
}

/// `(diag a, diag b, diag c)` with `c = (ab)⁻¹` and `a`, `b` random nonzero
/// rationals, composed with the diagonal permutation `π`; fixes `⟨m⟩`.
pub fn unit_stabilizer_sample(m: usize, seed: u64) -> [RationalMatrix; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = || loop {
        let num: i64 = rng.gen_range(-7..=7);
        if num != 0 {
            return BigRational::new(num.into(), rng.gen_range(1i64..=7).into());
        }
    };
    let a: Vec<BigRational> = (0..m).map(|_| pick()).collect();
    let b: Vec<BigRational> = (0..m).map(|_| pick()).collect();
    let pi = crate::perm::Permutation::random(m, &mut rng);
    let diag_perm = |d: Vec<BigRational>| -> RationalMatrix {
        let mut out = vec![vec![BigRational::zero(); m]; m];
        for j in 0..m {
            out[pi.apply(j)][j] = d[j].clone();
        }
        out
    };
    let c: Vec<BigRational> = (0..m).map(|i| (&a[i] * &b[i]).recip()).collect();
    [diag_perm(a), diag_perm(b), diag_perm(c)]
}
