//! Tableaux, semistandard bases of weight spaces `V_λ^α`, and straightening.
//!
//! A tableau `T` of shape `λ` with entries in `{1..m}` stands for the vector
//! `v(T)`: the tensor product over the columns of `T` of the wedges of the
//! basis vectors named in that column. Columns are read top to bottom,
//! leftmost column first. The vectors `v(T)` with `T` semistandard form a
//! basis of `V_λ`, and those of content `α` a basis of the weight space
//! `V_λ^α`. [`straighten`] expresses an arbitrary `v(T)` in that basis using
//! the column alternation and exchange relations.
//!
//! Normalisation constants are never applied: every quantity computed here
//! (dimensions, traces, vanishing) is insensitive to a global scale.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::partitions::Partition;
use crate::perm::Permutation;

/// Recursion guard for [`Straightener`]; tripping it is a defect.
pub const MAX_STRAIGHTEN_DEPTH: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect()).map_err(|_| {
            Error::InvalidArgument(format!("row lengths of {rows:?} are not a partition"))
        })?;
        if rows.iter().flatten().any(|&e| e == 0) {
            return Err(Error::InvalidArgument("tableau entries are 1-based".into()));
        }
        let rows = rows.into_iter().filter(|r| !r.is_empty()).collect();
        Ok(Tableau { shape, rows })
    }

    /// Builds a tableau of the given shape from its columns (top to bottom).
    pub fn from_columns(shape: &Partition, cols: &[Vec<usize>]) -> Self {
        let mut rows: Vec<Vec<usize>> = (0..shape.len()).map(|i| Vec::with_capacity(shape.get(i))).collect();
        for col in cols {
            for (i, &e) in col.iter().enumerate() {
                rows[i].push(e);
            }
        }
        Tableau {
            shape: shape.clone(),
            rows,
        }
    }

    /// `T_λ`: row `i` holds only the entry `i`.
    pub fn highest(shape: &Partition) -> Self {
        Tableau {
            shape: shape.clone(),
            rows: (0..shape.len()).map(|i| vec![i + 1; shape.get(i)]).collect(),
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        let t = self.shape.transpose();
        (0..t.len())
            .map(|j| (0..t.get(j)).map(|i| self.rows[i][j]).collect())
            .collect()
    }

    /// Entries in column reading order (the numbering of `St_λ`).
    pub fn reading_word(&self) -> Vec<usize> {
        self.columns().concat()
    }

    pub fn max_entry(&self) -> usize {
        self.rows.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self.columns().iter().all(|c| c.windows(2).all(|w| w[0] < w[1]));
        rows_ok && cols_ok
    }

    /// Replaces every entry `e` by `σ(e)`; `σ` acts on `{1..m}`.
    pub fn permute_entries(&self, sigma: &Permutation) -> Result<Tableau> {
        let m = sigma.degree();
        if self.max_entry() > m {
            return Err(Error::InvalidArgument(format!(
                "entry {} outside the domain of a degree-{m} permutation",
                self.max_entry()
            )));
        }
        Ok(Tableau {
            shape: self.shape.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&e| sigma.apply(e - 1) + 1).collect())
                .collect(),
        })
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, e) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Rows separated by `;`, entries by `,`: `1,2;2`.
impl FromStr for Tableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|r| {
                r.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Tableau::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Multiplicities of `1..=m` among the entries.
pub fn content(t: &Tableau, m: usize) -> Result<Vec<usize>> {
    let mut out = vec![0; m];
    for &e in t.rows.iter().flatten() {
        if e > m {
            return Err(Error::InvalidArgument(format!("entry {e} exceeds m = {m}")));
        }
        out[e - 1] += 1;
    }
    Ok(out)
}

/// An integer combination of semistandard tableaux of one shape and content.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StraightExpansion {
    terms: BTreeMap<Tableau, i64>,
}

impl StraightExpansion {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Tableau, i64> {
        &self.terms
    }

    pub fn coefficient(&self, t: &Tableau) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    fn add_term(&mut self, t: Tableau, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(t) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }
}

impl fmt::Display for StraightExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if *c < 0 { " - " } else { " + " })?;
            } else if *c < 0 {
                f.write_str("-")?;
            }
            write!(f, "{}[{t}]", c.abs())?;
        }
        Ok(())
    }
}

/// Sorts every column strictly increasing. Returns the sign of the column
/// permutation, or `None` when some column repeats an entry.
fn sort_columns(cols: &mut [Vec<usize>]) -> Option<i64> {
    let mut sign = 1;
    for col in cols.iter_mut() {
        // insertion sort, counting transpositions
        for i in 1..col.len() {
            let mut j = i;
            while j > 0 && col[j - 1] > col[j] {
                col.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if col.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
    }
    Some(sign)
}

/// Termination order: compare columns from the right, each read bottom-up.
/// Every exchange step strictly increases this key.
fn order_key(cols: &[Vec<usize>]) -> Vec<usize> {
    cols.iter().rev().flat_map(|c| c.iter().rev().copied()).collect()
}

/// The leftmost pair of adjacent columns with a row violation, and the
/// topmost violating row in it.
fn first_violation(cols: &[Vec<usize>]) -> Option<(usize, usize)> {
    for j in 0..cols.len().saturating_sub(1) {
        let (left, right) = (&cols[j], &cols[j + 1]);
        if let Some(k) = (0..right.len()).find(|&k| left[k] > right[k]) {
            return Some((j, k));
        }
    }
    None
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

type Terms = Rc<Vec<(Tableau, i64)>>;

/// Straightening with an optional memo table keyed by column-sorted tableaux.
/// Not `Sync`; use one per thread.
pub struct Straightener {
    cache: Option<HashMap<Tableau, Terms>>,
}

impl Default for Straightener {
    fn default() -> Self {
        Self::new()
    }
}

impl Straightener {
    pub fn new() -> Self {
        Straightener {
            cache: Some(HashMap::new()),
        }
    }

    pub fn without_cache() -> Self {
        Straightener { cache: None }
    }

    pub fn straighten(&mut self, t: &Tableau) -> Result<StraightExpansion> {
        let mut out = StraightExpansion::zero();
        let mut cols = t.columns();
        let Some(sign) = sort_columns(&mut cols) else {
            return Ok(out);
        };
        for (s, c) in self.straighten_sorted(&t.shape, cols, 0)?.iter() {
            out.add_term(s.clone(), sign * c);
        }
        Ok(out)
    }

    // `cols` are strictly increasing.
    fn straighten_sorted(&mut self, shape: &Partition, cols: Vec<Vec<usize>>, depth: usize) -> Result<Terms> {
        if depth > MAX_STRAIGHTEN_DEPTH {
            return Err(Error::Defect("straightening recursion guard tripped".into()));
        }
        let Some((j, k)) = first_violation(&cols) else {
            return Ok(Rc::new(vec![(Tableau::from_columns(shape, &cols), 1)]));
        };
        let key = Tableau::from_columns(shape, &cols);
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get(&key)) {
            return Ok(hit.clone());
        }
        let here = order_key(&cols);
        let mut acc: BTreeMap<Tableau, i64> = BTreeMap::new();
        // exchange the top k+1 entries of column j+1 with every (k+1)-subset
        // of column j, keeping vertical order on both sides
        let take = k + 1;
        for subset in k_subsets(cols[j].len(), take) {
            let mut next = cols.clone();
            for (r, &pos) in subset.iter().enumerate() {
                next[j][pos] = cols[j + 1][r];
                next[j + 1][r] = cols[j][pos];
            }
            let Some(sign) = sort_columns(&mut next) else {
                continue;
            };
            if order_key(&next) <= here {
                return Err(Error::Defect(format!(
                    "straightening step did not increase the order on {key}"
                )));
            }
            for (s, c) in self.straighten_sorted(shape, next, depth + 1)?.iter() {
                *acc.entry(s.clone()).or_insert(0) += sign * c;
            }
        }
        let terms: Terms = Rc::new(acc.into_iter().filter(|(_, c)| *c != 0).collect());
        if let Some(cache) = self.cache.as_mut() {
            cache.insert(key, terms.clone());
        }
        Ok(terms)
    }

    /// Matrix of `σ ∈ stab(α)` on the semistandard basis of `V_λ^α`:
    /// column `T` holds the expansion of `v(σT)`.
    pub fn perm_action_matrix(
        &mut self,
        sigma: &Permutation,
        lambda: &Partition,
        alpha: &[usize],
    ) -> Result<IntMatrix> {
        check_stabilizes(sigma, alpha)?;
        let basis = enumerate_semistandard(lambda, alpha);
        let index: HashMap<&Tableau, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut m = IntMatrix::zeros(basis.len(), basis.len());
        for (col, t) in basis.iter().enumerate() {
            let image = self.straighten(&t.permute_entries(sigma)?)?;
            for (s, c) in image.terms() {
                let row = *index.get(s).ok_or_else(|| {
                    Error::Defect(format!("straightened {s} is outside the weight basis"))
                })?;
                m.set(row, col, *c);
            }
        }
        Ok(m)
    }

    /// Trace of `σ ∈ stab(α)` on `V_λ^α`.
    pub fn trace(&mut self, sigma: &Permutation, lambda: &Partition, alpha: &[usize]) -> Result<i64> {
        check_stabilizes(sigma, alpha)?;
        let mut tr = 0;
        for t in enumerate_semistandard(lambda, alpha) {
            let image = t.permute_entries(sigma)?;
            if image == t {
                tr += 1;
                continue;
            }
            tr += self.straighten(&image)?.coefficient(&t);
        }
        Ok(tr)
    }
}

fn check_stabilizes(sigma: &Permutation, alpha: &[usize]) -> Result<()> {
    if sigma.degree() != alpha.len() {
        return Err(Error::SizeMismatch(format!(
            "permutation of degree {} against a content with {} slots",
            sigma.degree(),
            alpha.len()
        )));
    }
    if (0..alpha.len()).any(|i| alpha[sigma.apply(i)] != alpha[i]) {
        return Err(Error::InvalidArgument(format!(
            "{sigma} does not stabilise the content {alpha:?}"
        )));
    }
    Ok(())
}

/// Expansion of `v(T)` over semistandard tableaux.
pub fn straighten(t: &Tableau) -> Result<StraightExpansion> {
    Straightener::new().straighten(t)
}

pub fn perm_action_matrix(sigma: &Permutation, lambda: &Partition, alpha: &[usize]) -> Result<IntMatrix> {
    Straightener::new().perm_action_matrix(sigma, lambda, alpha)
}

/// All horizontal strips of size `n` that can be added to `inner` while
/// staying inside `outer`.
fn horizontal_strips(inner: &[usize], outer: &Partition, n: usize) -> Vec<Vec<usize>> {
    let rows = outer.len();
    let mut out = Vec::new();
    fn rec(i: usize, rows: usize, inner: &[usize], outer: &Partition, rem: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == rows {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // new row i may extend up to the old row i-1 (strip condition)
        let cap = if i == 0 { outer.get(0) } else { inner[i - 1].min(outer.get(i)) };
        let lo = inner[i];
        for add in 0..=rem.min(cap.saturating_sub(lo)) {
            cur.push(lo + add);
            rec(i + 1, rows, inner, outer, rem - add, cur, out);
            cur.pop();
        }
    }
    rec(0, rows, inner, outer, n, &mut Vec::with_capacity(rows), &mut out);
    out
}

/// Semistandard tableaux of shape `λ` and content `α`, in a fixed order.
pub fn enumerate_semistandard(shape: &Partition, alpha: &[usize]) -> Vec<Tableau> {
    if alpha.iter().sum::<usize>() != shape.size() {
        return Vec::new();
    }
    let rows = shape.len();
    let mut out = Vec::new();
    let mut fill: Vec<Vec<usize>> = vec![Vec::new(); rows];
    fn rec(v: usize, alpha: &[usize], shape: &Partition, inner: Vec<usize>, fill: &mut Vec<Vec<usize>>, out: &mut Vec<Tableau>) {
        if v == alpha.len() {
            if (0..shape.len()).all(|i| inner[i] == shape.get(i)) {
                out.push(Tableau {
                    shape: shape.clone(),
                    rows: fill.clone(),
                });
            }
            return;
        }
        for next in horizontal_strips(&inner, shape, alpha[v]) {
            for (i, (&a, &b)) in inner.iter().zip(&next).enumerate() {
                fill[i].extend(std::iter::repeat_n(v + 1, b - a));
            }
            rec(v + 1, alpha, shape, next.clone(), fill, out);
            for (i, (&a, &b)) in inner.iter().zip(&next).enumerate() {
                let len = fill[i].len();
                fill[i].truncate(len - (b - a));
            }
        }
    }
    rec(0, alpha, shape, vec![0; rows], &mut fill, &mut out);
    out
}

/// Kostka number `K_{λ,α} = dim V_λ^α`, counted without listing tableaux.
pub fn weight_space_dim(shape: &Partition, alpha: &[usize]) -> u128 {
    if alpha.iter().sum::<usize>() != shape.size() {
        return 0;
    }
    let rows = shape.len();
    let mut memo: HashMap<(usize, Vec<usize>), u128> = HashMap::new();
    fn count(v: usize, alpha: &[usize], shape: &Partition, inner: Vec<usize>, memo: &mut HashMap<(usize, Vec<usize>), u128>) -> u128 {
        if v == alpha.len() {
            return u128::from((0..shape.len()).all(|i| inner[i] == shape.get(i)));
        }
        let key = (v, inner);
        if let Some(&c) = memo.get(&key) {
            return c;
        }
        let total = horizontal_strips(&key.1, shape, alpha[v])
            .into_iter()
            .map(|next| count(v + 1, alpha, shape, next, memo))
            .sum();
        memo.insert(key, total);
        total
    }
    count(0, alpha, shape, vec![0; rows], &mut memo)
}
