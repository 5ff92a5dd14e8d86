//! The symmetry class `V_χ ⊆ ⊗^m ℂ^n` of an irreducible character `χ` of `S_m`.
//!
//! `K_χ = (χ(id)/m!) Σ_σ χ(σ) P(σ)` is assembled as an explicit `n^m × n^m`
//! matrix in the `e_α` basis, where `P(σ) e_α = e_{ασ⁻¹}`. Its columns are the
//! decomposable symmetrized tensors `e*_α = K_χ e_α`.
//!
//! Operators on `V_χ` are always reported in the orthonormal basis
//! `𝓔 = (v_α : α ∈ Δ̂)` obtained by Gram–Schmidt from `(e*_α : α ∈ Δ̂)` in
//! lexicographic order. The inclusion `Q : V_χ → ⊗^m ℂ^n` is the matrix whose
//! columns are the `v_α`, so an operator `X` on `⊗^m ℂ^n` leaving `V_χ`
//! invariant restricts to `Q* X Q`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::combinat::{
    all_permutations, enumerate, factorial, majorizes, multiplicity_partition, IndexMode,
    MultiIndex, Partition, Permutation,
};
use crate::denselin::{gram_schmidt, CMatrix, OrthoSpan, MAX_TENSOR_DIM};
use crate::symgroup::{char_table, character_sum_over_stabilizer};
use crate::{Error, Result};

/// Largest `m` for which a symmetry class is assembled.
pub const MAX_CLASS_DEGREE: usize = 6;
/// Residual norm below which `e*_α` is taken to lie in the span already built.
pub const SPAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SymmetryClass {
    chi: Partition,
    m: usize,
    n: usize,
    chi_id: i64,
    perms: Vec<Permutation>,
    projector: CMatrix,
    omega: Vec<MultiIndex>,
    delta: Vec<MultiIndex>,
    delta_bar: Vec<MultiIndex>,
    delta_hat: Vec<MultiIndex>,
    inclusion: CMatrix,
    basis_b: CMatrix,
}

impl SymmetryClass {
    /// Builds `V_χ` inside `⊗^m ℂ^n` with the default `n^m` cap.
    pub fn build(chi: &Partition, n: usize) -> Result<Self> {
        Self::build_with_cap(chi, n, MAX_TENSOR_DIM)
    }

    /// As [`SymmetryClass::build`], rejecting `n^m > cap` (cap is clamped to the default).
    pub fn build_with_cap(chi: &Partition, n: usize, cap: usize) -> Result<Self> {
        let m = chi.total();
        if m > MAX_CLASS_DEGREE {
            return Err(Error::resource(format!(
                "symmetry classes limited to m <= {MAX_CLASS_DEGREE}, got {m}"
            )));
        }
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        let cap = cap.min(MAX_TENSOR_DIM);
        let dim = n
            .checked_pow(m as u32)
            .filter(|&d| d <= cap)
            .ok_or_else(|| Error::resource(format!("n^m = {n}^{m} exceeds the cap {cap}")))?;
        if chi.length() > n {
            return Err(Error::domain(format!(
                "V_χ is zero for χ = {chi} with n = {n} (needs l(χ) <= n)"
            )));
        }

        let table = char_table(m)?;
        let chi_id = table.dimension(chi)?;
        let perms = all_permutations(m);
        let perm_chars = perms
            .iter()
            .map(|s| table.value(chi, &s.cycle_type()))
            .collect::<Result<Vec<i64>>>()?;

        let gamma = enumerate(IndexMode::Gamma, m, n);
        let coef = chi_id as f64 / factorial(m) as f64;
        let mut projector = CMatrix::zeros(dim, dim);
        for alpha in &gamma {
            let col = alpha.tensor_position();
            for (s, &c) in perms.iter().zip(&perm_chars) {
                if c != 0 {
                    projector[(alpha.act(s).tensor_position(), col)] += coef * c as f64;
                }
            }
        }

        // Ω by the stabilizer character sum, cross-checked against majorization.
        let mut omega = Vec::new();
        let mut by_mu: BTreeMap<Partition, bool> = BTreeMap::new();
        for alpha in &gamma {
            let mu = multiplicity_partition(alpha);
            let in_omega = character_sum_over_stabilizer(chi, alpha)? != 0;
            let maj = match by_mu.get(&mu) {
                Some(&b) => b,
                None => {
                    let b = majorizes(chi, &mu)?;
                    by_mu.insert(mu, b);
                    b
                }
            };
            if in_omega != maj {
                return Err(Error::numeric(format!(
                    "Ω membership of {alpha} disagrees with majorization for χ = {chi}"
                )));
            }
            if in_omega {
                omega.push(alpha.clone());
            }
        }

        let delta = enumerate(IndexMode::Increasing, m, n);
        let delta_bar: Vec<MultiIndex> = delta
            .iter()
            .filter(|a| omega.contains(a))
            .cloned()
            .collect();

        // greedy lexicographic extension of Δ̄ inside Ω
        let mut span = OrthoSpan::new(dim);
        let mut delta_hat = Vec::new();
        let mut estars = Vec::new();
        for alpha in &omega {
            let e = projector.column(alpha.tensor_position());
            if span.try_extend(&e, SPAN_TOL).is_some() {
                delta_hat.push(alpha.clone());
                estars.push(e);
            }
        }
        let rank = projector.trace().re.round() as usize;
        if rank != delta_hat.len() {
            return Err(Error::numeric(format!(
                "basis has {} elements but tr K_χ = {rank}",
                delta_hat.len()
            )));
        }
        if let Some(missing) = delta_bar.iter().find(|a| !delta_hat.contains(a)) {
            return Err(Error::numeric(format!(
                "Δ̄ element {missing} missing from Δ̂"
            )));
        }

        let (vs, basis_b) = gram_schmidt(&estars)?;
        let inclusion = CMatrix::from_columns(dim, &vs);

        Ok(SymmetryClass {
            chi: chi.clone(),
            m,
            n,
            chi_id,
            perms,
            projector,
            omega,
            delta,
            delta_bar,
            delta_hat,
            inclusion,
            basis_b,
        })
    }

    pub fn chi(&self) -> &Partition {
        &self.chi
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `χ(id)`.
    pub fn chi_id(&self) -> i64 {
        self.chi_id
    }

    /// `dim V_χ = |Δ̂|`.
    pub fn dim(&self) -> usize {
        self.delta_hat.len()
    }

    /// `n^m`.
    pub fn tensor_dim(&self) -> usize {
        self.inclusion.rows()
    }

    /// `K_χ` in the `e_α` basis.
    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    /// `Ω_χ` in lexicographic order.
    pub fn omega(&self) -> &[MultiIndex] {
        &self.omega
    }

    /// Orbit representatives `Δ = G_{m,n}`.
    pub fn delta(&self) -> &[MultiIndex] {
        &self.delta
    }

    /// `Δ̄ = Δ ∩ Ω_χ`.
    pub fn delta_bar(&self) -> &[MultiIndex] {
        &self.delta_bar
    }

    /// `Δ̂`: the lexicographically greedy basis index set, `Δ̄ ⊆ Δ̂ ⊆ Ω_χ`.
    pub fn delta_hat(&self) -> &[MultiIndex] {
        &self.delta_hat
    }

    /// Coordinates of `e*_α` in the `e_α` basis.
    pub fn estar(&self, alpha: &MultiIndex) -> Vec<Complex64> {
        self.projector.column(alpha.tensor_position())
    }

    /// `Q`: columns are the orthonormal basis vectors `v_α`, `α ∈ Δ̂`.
    pub fn inclusion(&self) -> &CMatrix {
        &self.inclusion
    }

    /// `B` with `v_α = Σ_γ B[γ][α] e*_γ`, indexed by `Δ̂`.
    pub fn basis_b(&self) -> &CMatrix {
        &self.basis_b
    }

    /// Coordinates of a vector of `V_χ` in `𝓔` (`Q* x`).
    pub fn coordinates(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.inclusion.adjoint().mul_vec(x)
    }

    fn check_ops(&self, ops: &[&CMatrix]) -> Result<()> {
        for (i, x) in ops.iter().enumerate() {
            if x.rows() != self.n || x.cols() != self.n {
                return Err(Error::domain(format!(
                    "operator {i} is {}x{}, expected {n}x{n}",
                    x.rows(),
                    x.cols(),
                    n = self.n
                )));
            }
        }
        Ok(())
    }

    /// `Q* · M · Q` where `M` is given by its action on each column of `Q`.
    fn compress<F>(&self, apply: F) -> CMatrix
    where
        F: Fn(&[Complex64]) -> Vec<Complex64> + Sync,
    {
        let d = self.dim();
        let images: Vec<Vec<Complex64>> = (0..d)
            .into_par_iter()
            .map(|j| apply(&self.inclusion.column(j)))
            .collect();
        let y = CMatrix::from_columns(self.tensor_dim(), &images);
        &self.inclusion.adjoint() * &y
    }

    /// `K_χ(A)`: the matrix of `⊗^m A` restricted to `V_χ`, in the basis `𝓔`.
    pub fn k_chi_matrix(&self, a: &CMatrix) -> Result<CMatrix> {
        self.check_ops(&[a])?;
        let ops = vec![a; self.m];
        Ok(self.compress(|v| apply_tensor(&ops, self.n, v)))
    }

    /// `X¹ ∗ ⋯ ∗ X^m = Q* ((1/m!) Σ_σ X^{σ(1)} ⊗ ⋯ ⊗ X^{σ(m)}) Q`.
    ///
    /// Summands that coincide because some operators are equal are counted once
    /// with their multiplicity; the sum runs over `σ` in lexicographic order.
    pub fn sym_op_product(&self, ops: &[CMatrix]) -> Result<CMatrix> {
        if ops.len() != self.m {
            return Err(Error::domain(format!(
                "symmetrized product needs m = {} operators, got {}",
                self.m,
                ops.len()
            )));
        }
        let refs: Vec<&CMatrix> = ops.iter().collect();
        self.check_ops(&refs)?;
        let class: Vec<usize> = (0..ops.len())
            .map(|i| (0..=i).find(|&j| ops[j] == ops[i]).unwrap())
            .collect();
        let mut arrangements: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for s in &self.perms {
            let key: Vec<usize> = (0..self.m).map(|slot| class[s.apply(slot)]).collect();
            *arrangements.entry(key).or_insert(0) += 1;
        }
        let terms: Vec<(f64, Vec<&CMatrix>)> = arrangements
            .into_iter()
            .map(|(key, count)| (count as f64, key.iter().map(|&c| &ops[c]).collect()))
            .collect();
        let total = factorial(self.m) as f64;
        Ok(self.compress(|v| {
            let mut acc = vec![Complex64::new(0.0, 0.0); v.len()];
            for (count, factors) in &terms {
                let w = apply_tensor(factors, self.n, v);
                for (a, b) in acc.iter_mut().zip(w) {
                    *a += b * (count / total);
                }
            }
            acc
        }))
    }

    /// `D^k K_χ(T)(X¹,…,X^k) = (m!/(m−k)!) · T ∗ ⋯ ∗ T ∗ X¹ ∗ ⋯ ∗ X^k`,
    /// with `m − k` copies of `T`; zero for `k > m`.
    pub fn dk_kchi(&self, t: &CMatrix, xs: &[CMatrix]) -> Result<CMatrix> {
        let k = xs.len();
        let mut all: Vec<&CMatrix> = vec![t];
        all.extend(xs.iter());
        self.check_ops(&all)?;
        if k > self.m {
            return Ok(CMatrix::zeros(self.dim(), self.dim()));
        }
        if k == 0 {
            return self.k_chi_matrix(t);
        }
        let mut ops: Vec<CMatrix> = vec![t.clone(); self.m - k];
        ops.extend(xs.iter().cloned());
        let scale = (factorial(self.m) / factorial(self.m - k)) as f64;
        Ok(self.sym_op_product(&ops)?.scale_real(scale))
    }
}

/// `(X_1 ⊗ ⋯ ⊗ X_m) v` for `v ∈ ⊗^m ℂ^n`, one tensor mode at a time.
/// Exact identity factors are skipped.
pub fn apply_tensor(ops: &[&CMatrix], n: usize, v: &[Complex64]) -> Vec<Complex64> {
    let m = ops.len();
    let mut cur = v.to_vec();
    let mut next = vec![Complex64::new(0.0, 0.0); v.len()];
    for (mode, x) in ops.iter().enumerate() {
        if is_identity(x) {
            continue;
        }
        let stride = n.pow((m - 1 - mode) as u32);
        let block = n * stride;
        for base in (0..v.len()).step_by(block) {
            for r in 0..n {
                let xr = x.row(r);
                for s in 0..stride {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (c, &xrc) in xr.iter().enumerate() {
                        acc += xrc * cur[base + c * stride + s];
                    }
                    next[base + r * stride + s] = acc;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

fn is_identity(x: &CMatrix) -> bool {
    let n = x.rows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i == j { 1.0 } else { 0.0 };
            x[(i, j)] == Complex64::new(want, 0.0)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binomial;
    use crate::denselin::{hermitian_eigen, inner, kron, vec_norm};
    use crate::random::{gaussian_matrix, psd_matrix, sample_rng};
    use crate::symgroup::character_sum_over_stabilizer;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn mi(entries: &[usize], n: usize) -> MultiIndex {
        MultiIndex::new(entries.to_vec(), n).unwrap()
    }

    /// `⊗^m X` as an explicit Kronecker matrix.
    fn kron_all(ops: &[&CMatrix]) -> CMatrix {
        ops[1..]
            .iter()
            .fold(ops[0].clone(), |acc, x| kron(&acc, x).unwrap())
    }

    /// `Q* (1/m!) Σ_σ X^{σ(1)} ⊗ ⋯ ⊗ X^{σ(m)} Q` with every Kronecker product formed.
    fn naive_sym_product(sc: &SymmetryClass, ops: &[CMatrix]) -> CMatrix {
        let m = sc.m();
        let mut sum = CMatrix::zeros(sc.tensor_dim(), sc.tensor_dim());
        for s in all_permutations(m) {
            let f: Vec<&CMatrix> = (0..m).map(|i| &ops[s.apply(i)]).collect();
            sum = &sum + &kron_all(&f);
        }
        let q = sc.inclusion();
        (&(&q.adjoint() * &sum) * q).scale_real(1.0 / factorial(m) as f64)
    }

    #[test]
    fn small_classes() {
        let sc = SymmetryClass::build(&p(&[1, 1]), 2).unwrap();
        assert_eq!(sc.dim(), 1);
        assert_eq!(sc.delta_hat(), &[mi(&[1, 2], 2)]);
        let sc = SymmetryClass::build(&p(&[2]), 2).unwrap();
        assert_eq!(sc.dim(), 3);
        assert_eq!(
            sc.delta_hat(),
            &[mi(&[1, 1], 2), mi(&[1, 2], 2), mi(&[2, 2], 2)]
        );
    }

    #[test]
    fn dimension_of_standard_class() {
        // ⊗^3 ℂ^3 = ∨^3 (10) ⊕ ∧^3 (1) ⊕ V_(2,1), so dim V_(2,1) = 27 − 10 − 1
        let sc = SymmetryClass::build(&p(&[2, 1]), 3).unwrap();
        assert_eq!(sc.dim(), 27 - 10 - 1);
        let e = hermitian_eigen(sc.projector()).unwrap();
        let rank = e.values.iter().filter(|&&l| l > 0.5).count();
        assert_eq!(rank, sc.dim());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            SymmetryClass::build(&p(&[1, 1, 1]), 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            SymmetryClass::build(&p(&[7]), 2),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            SymmetryClass::build(&p(&[3, 3]), 5),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            SymmetryClass::build_with_cap(&p(&[2, 1]), 3, 20),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn projector_and_estar_invariants() {
        for m in 1..=4 {
            for n in 1usize..=4 {
                if n.pow(m as u32) > 256 {
                    continue;
                }
                for chi in crate::combinat::partitions_of(m).unwrap() {
                    if chi.length() > n {
                        continue;
                    }
                    let sc = SymmetryClass::build(&chi, n).unwrap();
                    let k = sc.projector();
                    assert!((k * k).max_abs_diff(k) < 1e-9);
                    assert!(k.is_hermitian(1e-12));
                    let chi_id = sc.chi_id() as f64;
                    for a in enumerate(IndexMode::Gamma, m, n) {
                        let e = sc.estar(&a);
                        let norm2 = vec_norm(&e).powi(2);
                        let sum = character_sum_over_stabilizer(&chi, &a).unwrap() as f64;
                        assert!((norm2 - chi_id / factorial(m) as f64 * sum).abs() < 1e-12);
                        assert_eq!(norm2 < 1e-12, !sc.omega().contains(&a));
                    }
                    for a in sc.delta_bar() {
                        assert!(sc.delta_hat().contains(a));
                        assert!(sc.delta().contains(a));
                    }
                    for a in sc.delta_hat() {
                        assert!(sc.omega().contains(a));
                    }
                    assert!(sc.delta_hat().windows(2).all(|w| w[0] < w[1]));
                    // Q has orthonormal columns spanning range K_χ
                    let q = sc.inclusion();
                    let qq = &q.adjoint() * q;
                    assert!(qq.max_abs_diff(&CMatrix::identity(sc.dim())) < 1e-10);
                    assert!((&(q * &q.adjoint()) - k).frobenius_norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn delta_hat_special_characters() {
        for n in 1..=4 {
            for m in 1..=n.min(3) {
                let alt = SymmetryClass::build(&Partition::column(m).unwrap(), n).unwrap();
                assert_eq!(
                    alt.delta_hat(),
                    enumerate(IndexMode::Strict, m, n).as_slice()
                );
                assert_eq!(alt.delta_bar(), alt.delta_hat());
                let sym = SymmetryClass::build(&Partition::row(m).unwrap(), n).unwrap();
                assert_eq!(
                    sym.delta_hat(),
                    enumerate(IndexMode::Increasing, m, n).as_slice()
                );
                assert_eq!(sym.delta_bar(), sym.delta_hat());
            }
        }
        let sc = SymmetryClass::build(&p(&[2, 1]), 2).unwrap();
        assert_eq!(sc.delta_bar(), &[mi(&[1, 1, 2], 2), mi(&[1, 2, 2], 2)]);
        assert_eq!(sc.dim(), 4);
        assert!(sc.delta_hat().len() > sc.delta_bar().len());
    }

    #[test]
    fn basis_change_reconstructs_orthonormal_basis() {
        let sc = SymmetryClass::build(&p(&[2, 1]), 3).unwrap();
        let b = sc.basis_b();
        for (j, _) in sc.delta_hat().iter().enumerate() {
            let mut v = vec![Complex64::new(0.0, 0.0); sc.tensor_dim()];
            for (i, g) in sc.delta_hat().iter().enumerate() {
                for (x, e) in v.iter_mut().zip(sc.estar(g)) {
                    *x += b[(i, j)] * e;
                }
            }
            let q = sc.inclusion().column(j);
            assert!(v.iter().zip(&q).all(|(a, b)| (a - b).norm() < 1e-10));
        }
    }

    #[test]
    fn k_chi_examples() {
        let sc = SymmetryClass::build(&p(&[2, 1]), 3).unwrap();
        let id = sc.k_chi_matrix(&CMatrix::identity(3)).unwrap();
        assert!(id.max_abs_diff(&CMatrix::identity(sc.dim())) < 1e-12);

        let sc = SymmetryClass::build(&p(&[1, 1]), 2).unwrap();
        let mut rng = sample_rng(51, 0);
        let a = gaussian_matrix(&mut rng, 2, 2);
        let k = sc.k_chi_matrix(&a).unwrap();
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        assert!((k[(0, 0)] - det).norm() < 1e-12);
        assert!(sc.k_chi_matrix(&CMatrix::identity(3)).is_err());
    }

    #[test]
    fn k_chi_functoriality() {
        let mut rng = sample_rng(52, 0);
        for chi in [p(&[2, 1]), p(&[3]), p(&[1, 1, 1])] {
            let sc = SymmetryClass::build(&chi, 3).unwrap();
            for _ in 0..100 {
                let s = gaussian_matrix(&mut rng, 3, 3);
                let t = gaussian_matrix(&mut rng, 3, 3);
                let ks = sc.k_chi_matrix(&s).unwrap();
                let kt = sc.k_chi_matrix(&t).unwrap();
                let kst = sc.k_chi_matrix(&(&s * &t)).unwrap();
                let scale = ks.frobenius_norm() * kt.frobenius_norm();
                assert!((&kst - &(&ks * &kt)).frobenius_norm() <= 1e-8 * scale.max(1.0));
                let kadj = sc.k_chi_matrix(&t.adjoint()).unwrap();
                assert!(kadj.max_abs_diff(&kt.adjoint()) <= 1e-8 * kt.frobenius_norm().max(1.0));
                let kinv = sc.k_chi_matrix(&t.inverse().unwrap()).unwrap();
                let prod = &kinv * &kt;
                assert!(prod.max_abs_diff(&CMatrix::identity(sc.dim())) < 1e-8);
            }
        }
    }

    #[test]
    fn sym_product_matches_explicit_kronecker_sum() {
        let mut rng = sample_rng(53, 0);
        for chi in [p(&[2, 1]), p(&[1, 1, 1]), p(&[3])] {
            let sc = SymmetryClass::build(&chi, 3).unwrap();
            let ops: Vec<CMatrix> = (0..3).map(|_| gaussian_matrix(&mut rng, 3, 3)).collect();
            let fast = sc.sym_op_product(&ops).unwrap();
            assert!(fast.max_abs_diff(&naive_sym_product(&sc, &ops)) < 1e-12);
            // repeated operators exercise the grouping of identical summands
            let rep = vec![ops[0].clone(), ops[1].clone(), ops[0].clone()];
            let fast = sc.sym_op_product(&rep).unwrap();
            assert!(fast.max_abs_diff(&naive_sym_product(&sc, &rep)) < 1e-12);
        }
    }

    #[test]
    fn sym_product_examples() {
        let mut rng = sample_rng(54, 0);
        let sc = SymmetryClass::build(&p(&[2, 1]), 3).unwrap();
        let t = gaussian_matrix(&mut rng, 3, 3);
        let all_t = sc
            .sym_op_product(&[t.clone(), t.clone(), t.clone()])
            .unwrap();
        assert!(all_t.max_abs_diff(&sc.k_chi_matrix(&t).unwrap()) < 1e-12);

        let ops: Vec<CMatrix> = (0..3).map(|_| gaussian_matrix(&mut rng, 3, 3)).collect();
        let base = sc.sym_op_product(&ops).unwrap();
        for s in all_permutations(3) {
            let permuted: Vec<CMatrix> = (0..3).map(|i| ops[s.apply(i)].clone()).collect();
            assert!(sc.sym_op_product(&permuted).unwrap().max_abs_diff(&base) < 1e-12);
        }
        assert!(sc.sym_op_product(&ops[..2]).is_err());
    }

    #[test]
    fn sym_product_grouped_over_positions_of_p() {
        // (P,…,P,I,…,I) = (k!(m−k)!/m!) Σ_{β ∈ Q_{m−k,m}} ⊗_β P
        let mut rng = sample_rng(55, 0);
        for (chi, n) in [(p(&[2, 1]), 3), (p(&[2, 2]), 2), (p(&[3, 1]), 3)] {
            let sc = SymmetryClass::build(&chi, n).unwrap();
            let m = sc.m();
            let pm = psd_matrix(&mut rng, n);
            let id = CMatrix::identity(n);
            for k in 0..=m {
                let mut ops = vec![pm.clone(); m - k];
                ops.extend(std::iter::repeat_n(id.clone(), k));
                let got = sc.sym_op_product(&ops).unwrap();
                let mut sum = CMatrix::zeros(sc.tensor_dim(), sc.tensor_dim());
                let betas = if m - k == 0 {
                    vec![Vec::new()]
                } else {
                    enumerate(IndexMode::Strict, m - k, m)
                        .into_iter()
                        .map(|b| b.entries().to_vec())
                        .collect()
                };
                assert_eq!(betas.len() as u64, binomial(m, m - k));
                for beta in betas {
                    let f: Vec<&CMatrix> = (1..=m)
                        .map(|i| if beta.contains(&i) { &pm } else { &id })
                        .collect();
                    sum = &sum + &kron_all(&f);
                }
                let q = sc.inclusion();
                let scale = (factorial(k) * factorial(m - k)) as f64 / factorial(m) as f64;
                let want = (&(&q.adjoint() * &sum) * q).scale_real(scale);
                assert!(got.max_abs_diff(&want) < 1e-10, "χ={chi}, k={k}");
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let mut rng = sample_rng(56, 0);
        let sc = SymmetryClass::build(&p(&[2, 1]), 3).unwrap();
        let t = gaussian_matrix(&mut rng, 3, 3);
        let xs: Vec<CMatrix> = (0..4).map(|_| gaussian_matrix(&mut rng, 3, 3)).collect();
        assert_eq!(sc.dk_kchi(&t, &[]).unwrap(), sc.k_chi_matrix(&t).unwrap());
        let zero = sc.dk_kchi(&t, &xs).unwrap();
        assert_eq!(zero, CMatrix::zeros(sc.dim(), sc.dim()));
        let t2 = gaussian_matrix(&mut rng, 3, 3);
        let a = sc.dk_kchi(&t, &xs[..3]).unwrap();
        let b = sc.dk_kchi(&t2, &xs[..3]).unwrap();
        assert_eq!(a, b);
        let swapped = [xs[1].clone(), xs[0].clone()];
        let d1 = sc.dk_kchi(&t, &xs[..2]).unwrap();
        let d2 = sc.dk_kchi(&t, &swapped).unwrap();
        assert!(d1.max_abs_diff(&d2) < 1e-12);
        // linear in each direction
        let c = Complex64::new(0.3, -1.2);
        let lhs = sc
            .dk_kchi(&t, &[&xs[0].scale(c) + &xs[2], xs[1].clone()])
            .unwrap();
        let rhs = &sc
            .dk_kchi(&t, &[xs[0].clone(), xs[1].clone()])
            .unwrap()
            .scale(c)
            + &sc.dk_kchi(&t, &[xs[2].clone(), xs[1].clone()]).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        assert!(sc.dk_kchi(&t, &[CMatrix::identity(2)]).is_err());
    }

    #[test]
    fn eigenvectors_of_derivative_at_identity() {
        // with P diagonal, e*_α is an eigenvector of D^k K_χ(P)(I,…,I)
        let nu = [2.5, 1.5, 0.5];
        let pm = CMatrix::diag_real(&nu);
        let id = CMatrix::identity(3);
        for chi in [p(&[2, 1]), p(&[3]), p(&[1, 1, 1])] {
            let sc = SymmetryClass::build(&chi, 3).unwrap();
            for k in 1..=3 {
                let d = sc.dk_kchi(&pm, &vec![id.clone(); k]).unwrap();
                for a in sc.delta_hat() {
                    let nu_a: Vec<f64> = a.entries().iter().map(|&i| nu[i - 1]).collect();
                    let lambda =
                        factorial(k) as f64 * crate::norms::elementary_symmetric(3 - k, &nu_a);
                    let w = sc.coordinates(&sc.estar(a));
                    let dw = d.mul_vec(&w);
                    let res: f64 = dw
                        .iter()
                        .zip(&w)
                        .map(|(x, y)| (x - y * lambda).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    assert!(res < 1e-8, "χ={chi}, k={k}, α={a}");
                }
            }
        }
    }

    #[test]
    fn estar_is_orthogonal_across_orbits() {
        let sc = SymmetryClass::build(&p(&[2, 1]), 3).unwrap();
        let a = sc.estar(&mi(&[1, 1, 2], 3));
        let b = sc.estar(&mi(&[1, 2, 3], 3));
        assert!(inner(&a, &b).norm() < 1e-14);
    }
}
