//! Partitions, majorization, multi-indices and the `S_m` action on them.
//!
//! Multi-indices are 1-based, matching the usual `Γ_{m,n}` notation: an
//! element is an `m`-tuple with entries in `{1..n}`. Permutations are stored
//! 0-based internally. The right action is `(ασ)(i) = α(σ(i))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `m` accepted by [`partitions_of`].
pub const MAX_PARTITION_TOTAL: usize = 12;
/// Largest `m` for which stabilizers are enumerated explicitly.
pub const MAX_STABILIZER_DEGREE: usize = 8;

/// A partition of `m`: weakly decreasing positive parts, stored without zero padding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("a partition needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(Error::domain(format!(
                "partition {parts:?} has a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!(
                "partition {parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition { parts })
    }

    /// The one-row partition `(m)`, labelling the principal character.
    pub fn row(m: usize) -> Result<Self> {
        Partition::new(vec![m])
    }

    /// The one-column partition `(1,…,1)`, labelling the alternating character.
    pub fn column(m: usize) -> Result<Self> {
        Partition::new(vec![1; m])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts, `l(π)`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Parts padded with zeros up to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<usize> {
        let mut v = self.parts.clone();
        if v.len() < len {
            v.resize(len, 0);
        }
        v
    }

    pub fn is_row(&self) -> bool {
        self.parts.len() == 1
    }

    pub fn is_column(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma-separated parts, e.g. `"2,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::domain(format!("invalid partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// An element `α ∈ Γ_{m,n}`: a map `{1..m} → {1..n}` written as its value tuple.
///
/// Ordering is lexicographic on the entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiIndex {
    entries: Vec<usize>,
    #[serde(skip)]
    n: usize,
}

impl MultiIndex {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("multi-index must have m >= 1 entries"));
        }
        if let Some(&bad) = entries.iter().find(|&&e| e == 0 || e > n) {
            return Err(Error::domain(format!(
                "multi-index entry {bad} outside 1..={n}"
            )));
        }
        Ok(MultiIndex { entries, n })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `α(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.entries[i - 1]
    }

    pub fn is_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] < w[1])
    }

    /// The composite `ασ`, i.e. `i ↦ α(σ(i))`.
    pub fn act(&self, sigma: &Permutation) -> MultiIndex {
        debug_assert_eq!(sigma.degree(), self.m());
        MultiIndex {
            entries: sigma.map.iter().map(|&j| self.entries[j]).collect(),
            n: self.n,
        }
    }

    /// Position of `e_α` in the `e_{α(1)} ⊗ … ⊗ e_{α(m)}` basis of `⊗^m ℂ^n`,
    /// with `α(1)` the most significant digit. Agrees with lexicographic order.
    pub fn tensor_position(&self) -> usize {
        self.entries
            .iter()
            .fold(0, |acc, &e| acc * self.n + (e - 1))
    }

    pub fn from_tensor_position(mut pos: usize, m: usize, n: usize) -> MultiIndex {
        let mut entries = vec![0; m];
        for slot in entries.iter_mut().rev() {
            *slot = pos % n + 1;
            pos /= n;
        }
        MultiIndex { entries, n }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A permutation of `{0..m-1}`; `map[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation {
            map: (0..m).collect(),
        }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &j in &map {
            if j >= map.len() || seen[j] {
                return Err(Error::domain(format!("{map:?} is not a bijection")));
            }
            seen[j] = true;
        }
        Ok(Permutation { map })
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { map: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            map: other.map.iter().map(|&j| self.map[j]).collect(),
        }
    }

    /// Cycle lengths sorted weakly decreasing, fixed points included.
    pub fn cycle_type(&self) -> Partition {
        let m = self.map.len();
        let mut seen = vec![false; m];
        let mut lens = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.map[i];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts: lens }
    }

    pub fn sign(&self) -> i64 {
        let ct = self.cycle_type();
        if (self.degree() - ct.length()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// All permutations of `{0..m-1}` in lexicographic order of their image tuples.
pub fn all_permutations(m: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (0..m).collect();
    let mut out = Vec::with_capacity(factorial(m) as usize);
    loop {
        out.push(Permutation { map: cur.clone() });
        // next lexicographic permutation
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// All partitions of `m` in reverse lexicographic order, e.g. `(3), (2,1), (1,1,1)`.
pub fn partitions_of(m: usize) -> Result<Vec<Partition>> {
    if m == 0 || m > MAX_PARTITION_TOTAL {
        return Err(Error::domain(format!(
            "partitions_of needs 1 <= m <= {MAX_PARTITION_TOTAL}, got {m}"
        )));
    }
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    Ok(out)
}

/// True iff `mu ⪯ lambda`: every leading partial sum of `mu` is at most that of `lambda`.
pub fn majorizes(lambda: &Partition, mu: &Partition) -> Result<bool> {
    let m = lambda.total();
    if mu.total() != m {
        return Err(Error::domain(format!(
            "cannot compare partitions of {m} and {}",
            mu.total()
        )));
    }
    let (l, u) = (lambda.padded(m), mu.padded(m));
    let mut sl = 0;
    let mut su = 0;
    for s in 0..m {
        sl += l[s];
        su += u[s];
        if su > sl {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ω(π) = (1^{π_1}, 2^{π_2}, …)` as an element of `G_{m,n}`.
pub fn omega_of(pi: &Partition, n: usize) -> Result<MultiIndex> {
    if pi.length() > n {
        return Err(Error::domain(format!(
            "omega of {pi} needs n >= {}, got {n}",
            pi.length()
        )));
    }
    let entries = pi
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| std::iter::repeat_n(i + 1, p))
        .collect();
    MultiIndex::new(entries, n)
}

/// `μ(α)`: the fibre sizes `|α⁻¹(i)|`, `i ∈ Im α`, sorted weakly decreasing.
pub fn multiplicity_partition(alpha: &MultiIndex) -> Partition {
    let mut counts = vec![0usize; alpha.n() + 1];
    for &e in alpha.entries() {
        counts[e] += 1;
    }
    let mut parts: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition { parts }
}

/// Which subset of `Γ_{m,n}` to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexMode {
    /// All of `Γ_{m,n}`.
    Gamma,
    /// `G_{m,n}`: weakly increasing sequences.
    Increasing,
    /// `Q_{m,n}`: strictly increasing sequences.
    Strict,
}

/// The chosen subset of `Γ_{m,n}` in lexicographic order.
pub fn enumerate(mode: IndexMode, m: usize, n: usize) -> Vec<MultiIndex> {
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(mode: IndexMode, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if cur.len() == m {
            out.push(MultiIndex {
                entries: cur.clone(),
                n,
            });
            return;
        }
        let lo = match (mode, cur.last()) {
            (IndexMode::Gamma, _) | (_, None) => 1,
            (IndexMode::Increasing, Some(&l)) => l,
            (IndexMode::Strict, Some(&l)) => l + 1,
        };
        for v in lo..=n {
            cur.push(v);
            rec(mode, m, n, cur, out);
            cur.pop();
        }
    }
    rec(mode, m, n, &mut cur, &mut out);
    out
}

/// The lexicographically first element of the orbit of `alpha` together with
/// the stabilizer `G_α = {σ : ασ = α}` listed in lexicographic order.
pub fn orbit_and_stabilizer(alpha: &MultiIndex) -> Result<(MultiIndex, Vec<Permutation>)> {
    let stab = stabilizer(alpha)?;
    let mut rep = alpha.entries.clone();
    rep.sort_unstable();
    Ok((
        MultiIndex {
            entries: rep,
            n: alpha.n,
        },
        stab,
    ))
}

/// `G_α` by enumeration of `S_m`.
pub fn stabilizer(alpha: &MultiIndex) -> Result<Vec<Permutation>> {
    let m = alpha.m();
    if m > MAX_STABILIZER_DEGREE {
        return Err(Error::resource(format!(
            "stabilizer enumeration limited to m <= {MAX_STABILIZER_DEGREE}, got {m}"
        )));
    }
    Ok(all_permutations(m)
        .into_iter()
        .filter(|s| alpha.act(s) == *alpha)
        .collect())
}

/// The full orbit `{ασ : σ ∈ S_m}`, sorted and deduplicated.
pub fn orbit(alpha: &MultiIndex) -> Result<Vec<MultiIndex>> {
    let m = alpha.m();
    if m > MAX_STABILIZER_DEGREE {
        return Err(Error::resource(format!(
            "orbit enumeration limited to m <= {MAX_STABILIZER_DEGREE}, got {m}"
        )));
    }
    let mut out: Vec<MultiIndex> = all_permutations(m).iter().map(|s| alpha.act(s)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}
