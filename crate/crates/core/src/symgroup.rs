//! Irreducible characters of the symmetric group.
//!
//! Values come from the Murnaghan–Nakayama rule, evaluated on beta-sets: a
//! border strip of length `r` corresponds to moving one bead of the beta-set
//! down by `r` onto a vacant position, with sign `(-1)^(beads jumped)`.
//!
//! Characters of `S_m` are integer valued, so `χ̄ = χ` everywhere a complex
//! conjugate character appears (for instance in `imm_χ̄`).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::combinat::{factorial, partitions_of, stabilizer, MultiIndex, Partition, Permutation};
use crate::{Error, Result};

/// Largest degree for which character tables are built.
pub const MAX_CHARACTER_DEGREE: usize = 10;

/// Full character table of `S_m`, rows indexed by `λ` and columns by cycle type,
/// both in the order returned by [`partitions_of`].
#[derive(Debug, Clone)]
pub struct CharTable {
    m: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharTable {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_CHARACTER_DEGREE {
            return Err(Error::domain(format!(
                "character tables limited to 1 <= m <= {MAX_CHARACTER_DEGREE}, got {m}"
            )));
        }
        let partitions = partitions_of(m)?;
        let index = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut memo = HashMap::new();
        let values = partitions
            .iter()
            .map(|lambda| {
                partitions
                    .iter()
                    .map(|rho| mn_value(lambda.parts(), rho.parts(), &mut memo))
                    .collect()
            })
            .collect();
        Ok(CharTable {
            m,
            partitions,
            index,
            values,
        })
    }

    pub fn degree_m(&self) -> usize {
        self.m
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Rows are characters, columns are cycle types.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.values
    }

    pub fn value(&self, lambda: &Partition, rho: &Partition) -> Result<i64> {
        let i = self.lookup(lambda)?;
        let j = self.lookup(rho)?;
        Ok(self.values[i][j])
    }

    /// `χ_λ(id)`, the dimension of the irreducible representation.
    pub fn dimension(&self, lambda: &Partition) -> Result<i64> {
        self.value(lambda, &Partition::column(self.m)?)
    }

    fn lookup(&self, p: &Partition) -> Result<usize> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::domain(format!("{p} is not a partition of {}", self.m)))
    }
}

/// Number of permutations of cycle type `rho`: `m! / z_ρ`.
pub fn class_size(rho: &Partition) -> u64 {
    let m = rho.total();
    let mut z: u64 = 1;
    let mut run = 1;
    let parts = rho.parts();
    for i in 0..parts.len() {
        z *= parts[i] as u64;
        if i + 1 < parts.len() && parts[i + 1] == parts[i] {
            run += 1;
        } else {
            z *= factorial(run);
            run = 1;
        }
    }
    factorial(m) / z
}

/// Shared, lazily built table for `S_m`. Tables are immutable once built.
pub fn char_table(m: usize) -> Result<Arc<CharTable>> {
    static TABLES: OnceLock<Mutex<HashMap<usize, Arc<CharTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().unwrap().get(&m) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(CharTable::new(m)?);
    Ok(Arc::clone(tables.lock().unwrap().entry(m).or_insert(table)))
}

/// `χ_λ(σ)` for any `σ` of cycle type `rho`.
pub fn character(lambda: &Partition, rho: &Partition) -> Result<i64> {
    if lambda.total() != rho.total() {
        return Err(Error::domain(format!(
            "character {lambda} of S_{} evaluated on cycle type {rho} of S_{}",
            lambda.total(),
            rho.total()
        )));
    }
    char_table(lambda.total())?.value(lambda, rho)
}

pub fn character_of(lambda: &Partition, sigma: &Permutation) -> Result<i64> {
    character(lambda, &sigma.cycle_type())
}

/// `Σ_{σ ∈ G_α} χ_λ(σ)`; nonzero exactly when `α ∈ Ω_χ`.
pub fn character_sum_over_stabilizer(lambda: &Partition, alpha: &MultiIndex) -> Result<i64> {
    if lambda.total() != alpha.m() {
        return Err(Error::domain(format!(
            "character of S_{} paired with a multi-index of length {}",
            lambda.total(),
            alpha.m()
        )));
    }
    let table = char_table(alpha.m())?;
    stabilizer(alpha)?
        .iter()
        .map(|s| table.value(lambda, &s.cycle_type()))
        .sum()
}

type Memo = HashMap<(Vec<usize>, Vec<usize>), i64>;

/// Murnaghan–Nakayama recursion, stripping the largest remaining cycle first.
fn mn_value(lambda: &[usize], rho: &[usize], memo: &mut Memo) -> i64 {
    if rho.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = rho[0];
    let l = lambda.len();
    let beta: Vec<usize> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p + (l - 1 - i))
        .collect();
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<usize> = nb
            .iter()
            .enumerate()
            .map(|(j, &x)| x - (l - 1 - j))
            .filter(|&p| p > 0)
            .collect();
        total += sign * mn_value(&shape, &rho[1..], memo);
    }
    memo.insert(key, total);
    total
}
