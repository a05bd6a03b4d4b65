//! Conjugacy classes and irreducible characters of the symmetric group.
//!
//! Characters come from the Murnaghan–Nakayama rule, implemented on beta-sets
//! (removing a rim hook of length `k` moves one bead `k` places down).
//! Full tables are cached per degree behind [`character_table`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, Partition};

/// Cycle type of a conjugacy class of `S_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleType(pub Partition);

impl CycleType {
    pub fn degree(&self) -> usize {
        self.0.size()
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    /// `(−1)^{d − #parts}`.
    pub fn sign(&self) -> i64 {
        if (self.degree() - self.0.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `|C_ρ| = d! / Π_k k^{a_k} a_k!`.
pub fn class_size(rho: &CycleType) -> BigInt {
    let d = rho.degree();
    let mut centralizer = BigInt::one();
    for (k, &a) in rho.0.multiplicities().iter().enumerate().skip(1) {
        centralizer *= BigInt::from(k).pow(a as u32) * factorial(a);
    }
    factorial(d) / centralizer
}

/// Order of the centralizer of an element of cycle type `ρ`.
pub fn centralizer_order(rho: &CycleType) -> BigInt {
    factorial(rho.degree()) / class_size(rho)
}

fn to_beta(lambda: &Partition) -> Vec<usize> {
    let n = lambda.len();
    (0..n).map(|i| lambda.get(i) + (n - 1 - i)).collect()
}

fn from_beta(mut beta: Vec<usize>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let n = beta.len();
    Partition::from_unsorted((0..n).map(|i| beta[i] - (n - 1 - i)).collect())
}

/// All ways to strip a rim hook of length `k`: `(remaining shape, sign)`.
pub fn rim_hook_removals(lambda: &Partition, k: usize) -> Vec<(Partition, i64)> {
    let beta = to_beta(lambda);
    let mut out = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > b - k && x < b).count();
        let mut nb = beta.clone();
        nb[i] = b - k;
        let sign = if between % 2 == 0 { 1 } else { -1 };
        out.push((from_beta(nb), sign));
    }
    out
}

#[derive(Default)]
struct MnMemo {
    memo: HashMap<(Partition, Partition), BigInt>,
}

impl MnMemo {
    fn chi(&mut self, lambda: &Partition, rho: &Partition) -> BigInt {
        if rho.is_empty() {
            return if lambda.is_empty() { BigInt::one() } else { BigInt::zero() };
        }
        let key = (lambda.clone(), rho.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let k = rho.get(0);
        let rest = Partition::new(rho.parts()[1..].to_vec()).expect("suffix of a partition");
        let mut acc = BigInt::zero();
        for (mu, sign) in rim_hook_removals(lambda, k) {
            let v = self.chi(&mu, &rest);
            if sign > 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }
}

/// `χ_λ(ρ)`.
pub fn character(lambda: &Partition, rho: &CycleType) -> Result<BigInt> {
    if lambda.size() != rho.degree() {
        return Err(Error::SizeMismatch(format!(
            "character of {lambda} at a class of S_{}",
            rho.degree()
        )));
    }
    let table = character_table(lambda.size());
    Ok(table.value(lambda, rho).clone())
}

/// `dim [λ] = χ_λ(1^d)`.
pub fn irrep_dimension(lambda: &Partition) -> BigInt {
    let d = lambda.size();
    character(lambda, &CycleType(Partition::column(d))).expect("sizes agree")
}

/// Hook-length formula, kept as an independent cross-check.
pub fn hook_length_dimension(lambda: &Partition) -> BigInt {
    let t = lambda.transpose();
    let mut hooks = BigInt::one();
    for i in 0..lambda.len() {
        for j in 0..lambda.get(i) {
            let arm = lambda.get(i) - j - 1;
            let leg = t.get(j) - i - 1;
            hooks *= arm + leg + 1;
        }
    }
    factorial(lambda.size()) / hooks
}

/// The full character table of `S_d`. Rows are irreps, columns are classes,
/// both in [`enumerate_partitions`] order.
#[derive(Debug)]
pub struct CharacterTable {
    degree: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    entries: Vec<Vec<BigInt>>,
    class_sizes: Vec<BigInt>,
}

impl CharacterTable {
    pub fn build(d: usize) -> Self {
        let partitions = enumerate_partitions(d, d);
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut mn = MnMemo::default();
        let entries = partitions
            .iter()
            .map(|l| partitions.iter().map(|r| mn.chi(l, r)).collect())
            .collect();
        let class_sizes = partitions
            .iter()
            .map(|r| class_size(&CycleType(r.clone())))
            .collect();
        CharacterTable {
            degree: d,
            partitions,
            index,
            entries,
            class_sizes,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Irrep labels, which double as class labels.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn class_sizes(&self) -> &[BigInt] {
        &self.class_sizes
    }

    /// Row of `χ_λ` over all classes.
    pub fn row(&self, lambda: &Partition) -> &[BigInt] {
        &self.entries[self.index[lambda]]
    }

    pub fn value(&self, lambda: &Partition, rho: &CycleType) -> &BigInt {
        &self.entries[self.index[lambda]][self.index[&rho.0]]
    }
}

/// Shared, lazily built character table of `S_d`.
pub fn character_table(d: usize) -> Arc<CharacterTable> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("character table cache poisoned");
    guard
        .entry(d)
        .or_insert_with(|| Arc::new(CharacterTable::build(d)))
        .clone()
}
