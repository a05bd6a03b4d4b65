//! Highest weight vectors `f = P_Sym(π⃗ v_λ⃗)` and their exact evaluation at
//! tensors given by rank-one decompositions.
//!
//! For `w = Σₛ aₛ ⊗ bₛ ⊗ cₛ` with `r` terms, `f(w)` is, up to a positive
//! constant depending only on `λ⃗`,
//!
//! ```text
//! Σ_{φ : [d] → [r]}  Π_{i=1..3} Π_{columns C of St_{λᵢ}} det( top-|C| coordinates
//!                                    of the factor-i vectors of the terms φ(πᵢ(p)), p ∈ C )
//! ```
//!
//! where `St_λ` numbers the boxes of `λ` column by column. Symmetrisation
//! drops out because `w^{⊗d}` is already symmetric. The sum has `r^d`
//! summands; the evaluator walks it depth first, assigning one `φ`-value at a
//! time in an order that closes columns early, and cuts every branch in which
//! some column already holds linearly dependent vectors.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::kronecker::WeightTriple;
use crate::linalg::{det_bigint, det_i128};
use crate::partitions::Partition;
use crate::perm::{parse_cycles, Permutation};
use crate::tensors::{apply_group, random_group_element, GroupElement, RankOneDecomposition};

/// `π⃗ ∈ (S_d)³`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermTriple {
    perms: [Permutation; 3],
}

impl PermTriple {
    pub fn new(p1: Permutation, p2: Permutation, p3: Permutation) -> Result<Self> {
        if p2.degree() != p1.degree() || p3.degree() != p1.degree() {
            return Err(Error::SizeMismatch(format!(
                "permutations of degrees {}, {}, {}",
                p1.degree(),
                p2.degree(),
                p3.degree()
            )));
        }
        Ok(PermTriple { perms: [p1, p2, p3] })
    }

    pub fn identity(d: usize) -> Self {
        PermTriple {
            perms: [Permutation::identity(d), Permutation::identity(d), Permutation::identity(d)],
        }
    }

    /// Parses three cycle-notation strings of a common degree.
    pub fn parse(d: usize, cycles: [&str; 3]) -> Result<Self> {
        let [a, b, c] = cycles;
        Self::new(parse_cycles(a, d)?, parse_cycles(b, d)?, parse_cycles(c, d)?)
    }

    pub fn degree(&self) -> usize {
        self.perms[0].degree()
    }

    pub fn perms(&self) -> &[Permutation; 3] {
        &self.perms
    }
}

impl fmt::Display for PermTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}; {}", self.perms[0], self.perms[1], self.perms[2])
    }
}

#[derive(Serialize, Deserialize)]
struct PermTripleRepr {
    degree: usize,
    cycles: [String; 3],
}

impl Serialize for PermTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PermTripleRepr {
            degree: self.degree(),
            cycles: self.perms.each_ref().map(ToString::to_string),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PermTripleRepr::deserialize(d)?;
        let [a, b, c] = &r.cycles;
        PermTriple::parse(r.degree, [a, b, c]).map_err(serde::de::Error::custom)
    }
}

/// The columns of `St_λ` as 0-based positions, top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnPlan {
    columns: Vec<Vec<usize>>,
}

impl ColumnPlan {
    pub fn new(shape: &Partition) -> Self {
        let mut next = 0;
        let columns = shape
            .transpose()
            .parts()
            .iter()
            .map(|&len| {
                let col = (next..next + len).collect();
                next += len;
                col
            })
            .collect();
        ColumnPlan { columns }
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.columns.iter().map(Vec::len).collect()
    }
}

/// Exact integer that stays on `i128` until it overflows.
#[derive(Clone, Debug)]
enum Acc {
    Small(i128),
    Big(BigInt),
}

impl Acc {
    fn is_zero(&self) -> bool {
        match self {
            Acc::Small(x) => *x == 0,
            Acc::Big(x) => x.is_zero(),
        }
    }

    fn mul(&self, other: &Acc) -> Acc {
        match (self, other) {
            (Acc::Small(a), Acc::Small(b)) => match a.checked_mul(*b) {
                Some(v) => Acc::Small(v),
                None => Acc::Big(BigInt::from(*a) * b),
            },
            _ => Acc::Big(self.to_big() * other.to_big()),
        }
    }

    fn add_assign(&mut self, other: &Acc) {
        *self = match (&*self, other) {
            (Acc::Small(a), Acc::Small(b)) => match a.checked_add(*b) {
                Some(v) => Acc::Small(v),
                None => Acc::Big(BigInt::from(*a) + b),
            },
            _ => Acc::Big(self.to_big() + other.to_big()),
        };
    }

    fn to_big(&self) -> BigInt {
        match self {
            Acc::Small(x) => BigInt::from(*x),
            Acc::Big(x) => x.clone(),
        }
    }
}

#[derive(Clone, Debug)]
enum ColVal {
    Dependent,
    Independent,
    Det(Acc),
}

struct Column {
    factor: usize,
    len: usize,
    // row of the k-th vector to arrive during the search
    slot_rows: Vec<usize>,
}

/// Everything the search needs, fixed for one `(λ⃗, π⃗, w)`.
struct Kernel {
    d: usize,
    r: usize,
    // per depth: the column of each factor receiving the assigned term, and
    // whether that assignment fills it
    touch: Vec<[(usize, bool); 3]>,
    cols: Vec<Column>,
    coords: [Vec<Vec<i64>>; 3],
    cache: bool,
}

type Key = (u32, SmallVec<[u8; 8]>);

impl Kernel {
    fn build(lambda: &WeightTriple, pi: &PermTriple, w: &RankOneDecomposition, cache: bool) -> Self {
        let d = lambda.degree();
        let mut cols = Vec::new();
        // domain point q lies in column col_of[i][q] of factor i
        let mut col_of = vec![vec![0usize; d]; 3];
        let mut row_of = vec![vec![0usize; d]; 3];
        for i in 0..3 {
            let plan = ColumnPlan::new(&lambda.lambda[i]);
            for col in plan.columns() {
                let id = cols.len();
                for (row, &p) in col.iter().enumerate() {
                    let q = pi.perms[i].apply(p);
                    col_of[i][q] = id;
                    row_of[i][q] = row;
                }
                cols.push(Column {
                    factor: i,
                    len: col.len(),
                    slot_rows: Vec::with_capacity(col.len()),
                });
            }
        }
        // greedy order: prefer points whose columns are closest to full
        let mut filled = vec![0usize; cols.len()];
        let mut used = vec![false; d];
        let mut touch = Vec::with_capacity(d);
        for _ in 0..d {
            let score = |q: usize| -> (usize, u64) {
                let completes = (0..3)
                    .filter(|&i| filled[col_of[i][q]] + 1 == cols[col_of[i][q]].len)
                    .count();
                let fill: u64 = (0..3)
                    .map(|i| {
                        let c = col_of[i][q];
                        ((filled[c] + 1) as u64 * 1_000_000) / cols[c].len as u64
                    })
                    .sum();
                (completes, fill)
            };
            let q = (0..d)
                .filter(|&q| !used[q])
                .max_by(|&a, &b| score(a).cmp(&score(b)).then(b.cmp(&a)))
                .expect("an unassigned point remains");
            used[q] = true;
            let mut t = [(0, false); 3];
            for i in 0..3 {
                let c = col_of[i][q];
                cols[c].slot_rows.push(row_of[i][q]);
                filled[c] += 1;
                t[i] = (c, filled[c] == cols[c].len);
            }
            touch.push(t);
        }
        let coords = [0, 1, 2].map(|i| w.terms().iter().map(|t| t[i].clone()).collect());
        Kernel {
            d,
            r: w.len(),
            touch,
            cols,
            coords,
            cache,
        }
    }

    fn column_value(&self, id: usize, terms: &[u8], complete: bool) -> ColVal {
        let col = &self.cols[id];
        let n = col.len;
        let vec_of = |k: usize| &self.coords[col.factor][terms[k] as usize][..n];
        if complete {
            let mut m = vec![0i128; n * n];
            for k in 0..n {
                let row = col.slot_rows[k];
                for (c, &x) in vec_of(k).iter().enumerate() {
                    m[row * n + c] = i128::from(x);
                }
            }
            let det = match det_i128(&mut m, n) {
                Some(v) => Acc::Small(v),
                None => {
                    let mut rows = vec![Vec::new(); n];
                    for k in 0..n {
                        rows[col.slot_rows[k]] = vec_of(k).iter().map(|&x| BigInt::from(x)).collect();
                    }
                    Acc::Big(det_bigint(rows))
                }
            };
            if det.is_zero() {
                ColVal::Dependent
            } else {
                ColVal::Det(det)
            }
        } else if independent(&(0..terms.len()).map(vec_of).collect::<Vec<_>>()) {
            ColVal::Independent
        } else {
            ColVal::Dependent
        }
    }
}

/// Fraction-free elimination; on overflow the vectors are reported
/// independent, which only forgoes a prune.
fn independent(vecs: &[&[i64]]) -> bool {
    let n = vecs.first().map_or(0, |v| v.len());
    let mut basis: Vec<(usize, Vec<i128>)> = Vec::new();
    for v in vecs {
        let mut cur: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for (pc, row) in &basis {
            let f = cur[*pc];
            if f == 0 {
                continue;
            }
            let p = row[*pc];
            for j in 0..n {
                let Some(x) = cur[j].checked_mul(p).and_then(|a| a.checked_sub(f.checked_mul(row[j])?)) else {
                    return true;
                };
                cur[j] = x;
            }
        }
        let Some(pc) = cur.iter().position(|&x| x != 0) else {
            return false;
        };
        let g = cur.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
        if g > 1 {
            cur.iter_mut().for_each(|x| *x /= g);
        }
        basis.push((pc, cur));
    }
    true
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

struct Worker<'k> {
    k: &'k Kernel,
    memo: FxHashMap<Key, ColVal>,
    state: Vec<SmallVec<[u8; 8]>>,
}

#[derive(Default)]
struct Partial {
    sum: Option<Acc>,
    terms: u64,
    nodes: u64,
}

impl<'k> Worker<'k> {
    fn new(k: &'k Kernel) -> Self {
        Worker {
            k,
            memo: FxHashMap::default(),
            state: vec![SmallVec::new(); k.cols.len()],
        }
    }

    fn lookup(&mut self, id: usize, complete: bool) -> ColVal {
        let terms = &self.state[id];
        if !self.k.cache {
            return self.k.column_value(id, terms, complete);
        }
        let key = (id as u32, terms.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = self.k.column_value(id, terms, complete);
        self.memo.insert(key, v.clone());
        v
    }

    fn dfs(&mut self, depth: usize, prod: &Acc, prefix: &[u8], out: &mut Partial) {
        out.nodes += 1;
        if depth == self.k.d {
            out.terms += 1;
            match out.sum.as_mut() {
                Some(s) => s.add_assign(prod),
                None => out.sum = Some(prod.clone()),
            }
            return;
        }
        let choices: SmallVec<[u8; 16]> = match prefix.get(depth) {
            Some(&s) => SmallVec::from_slice(&[s]),
            None => (0..self.k.r as u8).collect(),
        };
        let touch = self.k.touch[depth];
        for s in choices {
            let mut next = prod.clone();
            let mut alive = true;
            let mut pushed = 0;
            for &(id, complete) in &touch {
                self.state[id].push(s);
                pushed += 1;
                match self.lookup(id, complete) {
                    ColVal::Dependent => {
                        alive = false;
                        break;
                    }
                    ColVal::Independent => {}
                    ColVal::Det(v) => next = next.mul(&v),
                }
            }
            if alive {
                self.dfs(depth + 1, &next, prefix, out);
            }
            for &(id, _) in &touch[..pushed] {
                self.state[id].pop();
            }
        }
    }
}

/// Knobs for [`evaluate_with`].
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// Memoise column determinants and independence checks.
    pub cache: bool,
    /// Split the search over the rayon thread pool.
    pub parallel: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            cache: true,
            parallel: true,
        }
    }
}

/// Value of an evaluation with search statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalStats {
    pub value: BigInt,
    /// Complete maps `φ` reached, i.e. nonzero determinant products summed.
    pub terms: u64,
    /// Search nodes visited.
    pub nodes: u64,
}

/// `f(w)` for `f = P_Sym(π⃗ v_λ⃗)`, exactly, up to the fixed positive scale.
pub fn evaluate(lambda: &WeightTriple, pi: &PermTriple, w: &RankOneDecomposition) -> Result<BigInt> {
    Ok(evaluate_with(lambda, pi, w, EvalOptions::default())?.value)
}

pub fn evaluate_with(
    lambda: &WeightTriple,
    pi: &PermTriple,
    w: &RankOneDecomposition,
    opts: EvalOptions,
) -> Result<EvalStats> {
    let d = lambda.degree();
    if pi.degree() != d {
        return Err(Error::SizeMismatch(format!(
            "permutations of degree {} for a weight of degree {d}",
            pi.degree()
        )));
    }
    if w.len() > usize::from(u8::MAX) {
        return Err(Error::SizeGuard(format!("{} terms exceed the supported 255", w.len())));
    }
    let zero = EvalStats {
        value: BigInt::zero(),
        terms: 0,
        nodes: 0,
    };
    // Schur functors with more rows than dimensions vanish.
    if (0..3).any(|i| lambda.lambda[i].len() > w.format()[i]) {
        return Ok(zero);
    }
    let kernel = Kernel::build(lambda, pi, w, opts.cache);
    let one = Acc::Small(1);
    let collect = |parts: Vec<Partial>| {
        let mut sum = Acc::Small(0);
        let (mut terms, mut nodes) = (0, 0);
        for p in parts {
            if let Some(s) = p.sum {
                sum.add_assign(&s);
            }
            terms += p.terms;
            nodes += p.nodes;
        }
        EvalStats {
            value: sum.to_big(),
            terms,
            nodes,
        }
    };
    if !opts.parallel || d < 2 || kernel.r < 2 {
        let mut out = Partial::default();
        Worker::new(&kernel).dfs(0, &one, &[], &mut out);
        return Ok(collect(vec![out]));
    }
    // enough fixed prefixes to keep every thread busy
    let target = 16 * rayon::current_num_threads().max(1);
    let mut depth = 1;
    while depth < d && kernel.r.pow(depth as u32) < target {
        depth += 1;
    }
    let prefixes: Vec<Vec<u8>> = (0..kernel.r.pow(depth as u32))
        .map(|mut x| {
            let mut p = vec![0u8; depth];
            for slot in p.iter_mut().rev() {
                *slot = (x % kernel.r) as u8;
                x /= kernel.r;
            }
            p
        })
        .collect();
    let parts: Vec<Partial> = prefixes
        .par_iter()
        .map_init(
            || Worker::new(&kernel),
            |worker, prefix| {
                let mut out = Partial::default();
                worker.dfs(0, &one, prefix, &mut out);
                out
            },
        )
        .collect();
    Ok(collect(parts))
}

/// A proof that `λ⃗ ∈ S(w)`: a nonzero value of a highest weight vector of
/// weight `λ⃗` at `w` (or at `g·w`, which lies in the same orbit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCertificate {
    pub weight: WeightTriple,
    pub perms: PermTriple,
    #[serde(rename = "g")]
    pub group_element: Option<GroupElement>,
    #[serde(with = "crate::serial::bigint")]
    pub value: BigInt,
    pub tensor_digest: String,
}

/// Re-evaluates a certificate at `w`; true iff it reproduces its value.
pub fn verify_certificate(cert: &EvalCertificate, w: &RankOneDecomposition) -> Result<bool> {
    if cert.tensor_digest != w.digest() || cert.value.is_zero() {
        return Ok(false);
    }
    let value = match &cert.group_element {
        Some(g) => evaluate(&cert.weight, &cert.perms, &apply_group(g, w)?)?,
        None => evaluate(&cert.weight, &cert.perms, w)?,
    };
    Ok(value == cert.value)
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Number of permutation triples to try.
    pub trials: usize,
    pub seed: u64,
    /// Also evaluate at `g·w` for a seeded random `g` with entries in
    /// `[−bound, bound]`.
    pub random_g: Option<i64>,
    /// Stop once this many determinant products have been summed.
    pub term_budget: Option<u64>,
    pub eval: EvalOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            trials: 100,
            seed: 0,
            random_g: None,
            term_budget: None,
            eval: EvalOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOutcome {
    /// `None` means inconclusive, never a proof of non-membership.
    pub certificate: Option<EvalCertificate>,
    pub trials_run: usize,
    pub terms: u64,
}

/// One attempted evaluation, for progress reporting.
#[derive(Clone, Debug)]
pub struct TrialReport<'a> {
    pub trial: usize,
    pub perms: &'a PermTriple,
    pub at_g: bool,
    pub value: &'a BigInt,
    pub terms: u64,
}

/// Candidate triples: the identity, then a cyclic shift in one factor, then
/// seeded random triples. Replacing `π⃗` by `(π₁τ, π₂τ, π₃τ)` does not change
/// the value, so the first permutation of a random triple is the identity.
pub fn candidate_triples(d: usize, seed: u64) -> impl Iterator<Item = PermTriple> {
    let id = Permutation::identity(d);
    let mut structured = vec![PermTriple::identity(d)];
    for i in 0..3 {
        for k in 1..d {
            let mut p = [id.clone(), id.clone(), id.clone()];
            p[i] = Permutation::cyclic_shift(d, k);
            let [a, b, c] = p;
            structured.push(PermTriple { perms: [a, b, c] });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    structured.into_iter().chain(std::iter::from_fn(move || {
        Some(PermTriple {
            perms: [
                Permutation::identity(d),
                Permutation::random(d, &mut rng),
                Permutation::random(d, &mut rng),
            ],
        })
    }))
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial as u64)
}

/// Searches for a nonzero evaluation certifying `λ⃗ ∈ S(w)`.
///
/// With `random_g` set, every trial also evaluates at `g·w` for its own
/// seeded `g`. This matters: a highest weight vector is tied to the
/// coordinate flag, and it can vanish at a tensor in special position (such
/// as `⟨2,2,2⟩` in its defining coordinates) while being nonzero on the orbit.
pub fn certify_in_s(lambda: &WeightTriple, w: &RankOneDecomposition, opts: &CertifyOptions) -> Result<CertifyOutcome> {
    certify_in_s_with_progress(lambda, w, opts, |_| {})
}

pub fn certify_in_s_with_progress(
    lambda: &WeightTriple,
    w: &RankOneDecomposition,
    opts: &CertifyOptions,
    mut progress: impl FnMut(&TrialReport<'_>),
) -> Result<CertifyOutcome> {
    let mut terms = 0u64;
    let digest = w.digest();
    for (trial, pi) in candidate_triples(lambda.degree(), opts.seed).take(opts.trials).enumerate() {
        // a fresh g per trial: a single unlucky g can kill every trial
        let g = match opts.random_g {
            Some(bound) => {
                let g = random_group_element(w.format(), bound, trial_seed(opts.seed, trial))?;
                let gw = apply_group(&g, w)?;
                Some((g, gw))
            }
            None => None,
        };
        let targets = std::iter::once((None, w)).chain(g.iter().map(|(g, gw)| (Some(g), gw)));
        for (g, target) in targets {
            let stats = evaluate_with(lambda, &pi, target, opts.eval)?;
            terms += stats.terms;
            progress(&TrialReport {
                trial,
                perms: &pi,
                at_g: g.is_some(),
                value: &stats.value,
                terms: stats.terms,
            });
            if !stats.value.is_zero() {
                return Ok(CertifyOutcome {
                    certificate: Some(EvalCertificate {
                        weight: lambda.clone(),
                        perms: pi,
                        group_element: g.cloned(),
                        value: stats.value,
                        tensor_digest: digest,
                    }),
                    trials_run: trial + 1,
                    terms,
                });
            }
            if opts.term_budget.is_some_and(|b| terms >= b) {
                return Ok(CertifyOutcome {
                    certificate: None,
                    trials_run: trial + 1,
                    terms,
                });
            }
        }
    }
    Ok(CertifyOutcome {
        certificate: None,
        trials_run: opts.trials,
        terms,
    })
}

/// Rank of the random tensors used by [`hwv_is_nonzero_function`]: one more
/// than the expected generic rank, capped by the maximal rank.
pub fn probe_rank(format: [usize; 3]) -> usize {
    let [a, b, c] = format;
    let sum = (a + b + c).saturating_sub(2).max(1);
    let generic = (a * b * c).div_ceil(sum) + 1;
    generic.min(a * b).min(b * c).min(c * a).max(1)
}

/// True iff `f = P_Sym(π⃗ v_λ⃗)` is nonzero at one of `trials` seeded random
/// integer tensors of the given format. `false` is inconclusive.
pub fn hwv_is_nonzero_function(
    lambda: &WeightTriple,
    pi: &PermTriple,
    format: [usize; 3],
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let r = probe_rank(format);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let terms = (0..r)
            .map(|_| format.map(|n| (0..n).map(|_| rng.gen_range(-3i64..=3)).collect()))
            .collect();
        let w = RankOneDecomposition::new(format, terms)?;
        if !evaluate(lambda, pi, &w)?.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Small values as `i64` for display; `None` if out of range.
pub fn small_value(v: &BigInt) -> Option<i64> {
    v.to_i64()
}
