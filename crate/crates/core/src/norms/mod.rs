//! Norms of derivatives of `T ↦ K_χ(T)` and of immanants.
//!
//! For `1 ≤ k ≤ m ≤ n` the norm of `D^k K_χ(T)` is `k!·p_{m−k}(ν_{ω(χ)})`, where
//! `ν_1 ≥ … ≥ ν_n` are the singular values of `T` and `ν_{ω(χ)}` repeats `ν_i`
//! exactly `χ_i` times. The same quantity with `m = n` bounds `‖D^k d_χ(A)‖`.
//!
//! The `*_report` functions pair these closed forms with direct evaluations:
//! the derivative at `(I,…,I)` after the polar reduction `T → P`, its value at
//! the unitary tuple `X^i = W⁻¹`, and the best of many random unit tuples.
//! The sampled value is only ever a lower bound.

mod immanant;

pub use immanant::{
    dk_immanant, dk_immanant_via_class, imm_matrix, immanant, k_chi_by_immanants, mixed_immanant,
    MAX_IMMANANT_DIM, MAX_MIXED_DIM,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{factorial, MultiIndex, Partition};
use crate::denselin::{polar, spectral_norm, svd, CMatrix, SingularValues};
use crate::random::{sample_rng, unit_norm_matrix};
use crate::symclass::SymmetryClass;
use crate::{Error, Result, REPORT_SCHEMA};

/// Slack allowed above the closed form for any sampled value.
pub const SAMPLE_TOL: f64 = 1e-7;
/// Relative agreement required between closed form and exact evaluations.
pub const EXACT_REL_TOL: f64 = 1e-7;

/// `p_t(xs)`: the sum of all products of `t` entries with distinct positions.
/// Zero when `t > xs.len()`.
pub fn elementary_symmetric(t: usize, xs: &[f64]) -> f64 {
    if t > xs.len() {
        return 0.0;
    }
    let mut e = vec![0.0; t + 1];
    e[0] = 1.0;
    for (seen, &x) in xs.iter().enumerate() {
        for j in (1..=t.min(seen + 1)).rev() {
            e[j] += e[j - 1] * x;
        }
    }
    e[t]
}

/// `ν_{ω(χ)} = (ν_1 ×χ_1, ν_2 ×χ_2, …)`.
pub fn nu_omega(chi: &Partition, nu: &[f64]) -> Result<Vec<f64>> {
    if chi.length() > nu.len() {
        return Err(Error::domain(format!(
            "χ = {chi} has more parts than the {} singular values given",
            nu.len()
        )));
    }
    Ok(chi
        .parts()
        .iter()
        .zip(nu)
        .flat_map(|(&c, &v)| std::iter::repeat_n(v, c))
        .collect())
}

/// `‖D^k K_χ(T)‖ = k!·p_{m−k}(ν_{ω(χ)})`, valid for `1 ≤ k ≤ m ≤ n`.
/// Returns 0 for `k > m`.
pub fn dk_norm_formula(chi: &Partition, k: usize, nu: &SingularValues, n: usize) -> Result<f64> {
    let m = chi.total();
    if nu.len() != n {
        return Err(Error::domain(format!(
            "expected {n} singular values, got {}",
            nu.len()
        )));
    }
    if m > n {
        return Err(Error::domain(format!(
            "the norm formula needs m <= n, got m = {m}, n = {n}"
        )));
    }
    if k == 0 {
        return Err(Error::domain("derivative order must be at least 1"));
    }
    if k > m {
        return Ok(0.0);
    }
    let w = nu_omega(chi, nu.values())?;
    Ok(factorial(k) as f64 * elementary_symmetric(m - k, &w))
}

/// `λ(α) = k!·p_{m−k}(ν_α)`, the eigenvalue of `D^k K_χ(P)(I,…,I)` on `e*_α`
/// when `P` is diagonal with entries `ν`.
pub fn lambda_eigenvalue(alpha: &MultiIndex, k: usize, nu: &SingularValues) -> Result<f64> {
    let m = alpha.m();
    if k == 0 || k > m {
        return Err(Error::domain(format!(
            "need 1 <= k <= m = {m}, got k = {k}"
        )));
    }
    let vals = nu.values();
    let picked = alpha
        .entries()
        .iter()
        .map(|&i| {
            vals.get(i - 1)
                .copied()
                .ok_or_else(|| Error::domain(format!("α = {alpha} indexes past ν")))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(factorial(k) as f64 * elementary_symmetric(m - k, &picked))
}

/// `‖D^k d_χ(A)‖ ≤ k!·p_{n−k}(ν_{ω(χ)})` with `n = |χ|`; zero for `k > n`.
pub fn dk_immanant_bound(chi: &Partition, k: usize, nu: &SingularValues) -> Result<f64> {
    let n = chi.total();
    if nu.len() != n {
        return Err(Error::domain(format!(
            "immanant of order {n} needs {n} singular values, got {}",
            nu.len()
        )));
    }
    if k > n {
        return Ok(0.0);
    }
    let w = nu_omega(chi, nu.values())?;
    Ok(factorial(k) as f64 * elementary_symmetric(n - k, &w))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationBounds {
    /// Bound on `‖K_χ(T) − K_χ(T+X)‖`.
    pub kchi_bound: f64,
    /// Bound on `|d_χ(A) − d_χ(A+Y)|`; only defined when `ν` has `|χ|` entries.
    pub imm_bound: Option<f64>,
}

/// `Σ_{k=1}^{m} p_{m−k}(ν_{ω(χ)}) δ^k` for `K_χ`, and the same sum with `n = |χ|`
/// for `d_χ`.
pub fn perturbation_bounds(
    chi: &Partition,
    nu: &SingularValues,
    delta: f64,
) -> Result<PerturbationBounds> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::domain(
            "perturbation size must be finite and nonnegative",
        ));
    }
    let m = chi.total();
    let w = nu_omega(chi, nu.values())?;
    let series = |top: usize| -> f64 {
        (1..=top)
            .map(|k| elementary_symmetric(top - k, &w) * delta.powi(k as i32))
            .sum()
    };
    let kchi_bound = series(m);
    let imm_bound = (nu.len() == m).then(|| series(m));
    Ok(PerturbationBounds {
        kchi_bound,
        imm_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivTolerances {
    /// Absolute slack for `sample_max <= formula_value`.
    pub sample: f64,
    /// Relative agreement of `identity_value` and `attained_value` with the formula.
    pub exact_rel: f64,
}

impl Default for DerivTolerances {
    fn default() -> Self {
        DerivTolerances {
            sample: SAMPLE_TOL,
            exact_rel: EXACT_REL_TOL,
        }
    }
}

/// Closed-form `‖D^k K_χ(T)‖` next to its direct evaluations.
#[derive(Debug, Clone, Serialize)]
pub struct DerivReport {
    pub schema: &'static str,
    pub chi: Partition,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub singular_values: SingularValues,
    pub formula_value: f64,
    /// `‖D^k K_χ(P)(I,…,I)‖` with `P` the positive polar factor of `T`.
    pub identity_value: f64,
    /// `‖D^k K_χ(T)(W⁻¹,…,W⁻¹)‖`.
    pub attained_value: f64,
    /// Best value over the random unit tuples.
    pub sample_max: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: DerivTolerances,
    pub consistent: bool,
}

impl DerivReport {
    pub fn identity_error(&self) -> f64 {
        (self.identity_value - self.formula_value).abs()
    }

    pub fn attained_error(&self) -> f64 {
        (self.attained_value - self.formula_value).abs()
    }

    fn check(&self) -> bool {
        let scale = self.formula_value.max(1.0);
        self.sample_max <= self.formula_value + self.tolerances.sample
            && self.identity_error() <= self.tolerances.exact_rel * scale
            && self.attained_error() <= self.tolerances.exact_rel * scale
    }
}

/// Largest `‖Φ(X¹,…,X^k)‖` over `samples` tuples of random unit-norm matrices,
/// tuple `i` drawn from `(seed, i)`.
pub fn sample_sup<F>(n: usize, k: usize, samples: usize, seed: u64, eval: F) -> Result<f64>
where
    F: Fn(&[CMatrix]) -> Result<f64> + Sync,
{
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let xs = (0..k)
                .map(|_| unit_norm_matrix(&mut rng, n))
                .collect::<Result<Vec<_>>>()?;
            eval(&xs)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Compares the closed form for `‖D^k K_χ(T)‖` against the polar/identity
/// evaluation, the unitary attaining tuple and random sampling.
pub fn dk_norm_verify(
    sc: &SymmetryClass,
    t: &CMatrix,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<DerivReport> {
    dk_norm_verify_with(sc, t, k, samples, seed, DerivTolerances::default())
}

pub fn dk_norm_verify_with(
    sc: &SymmetryClass,
    t: &CMatrix,
    k: usize,
    samples: usize,
    seed: u64,
    tolerances: DerivTolerances,
) -> Result<DerivReport> {
    if samples == 0 {
        return Err(Error::domain("at least one sample is required"));
    }
    let n = sc.n();
    if t.rows() != n || t.cols() != n {
        return Err(Error::domain(format!("T must be {n}x{n}")));
    }
    let nu = svd(t)?.s;
    let formula_value = dk_norm_formula(sc.chi(), k, &nu, n)?;
    let pd = polar(t)?;
    let id = CMatrix::identity(n);
    let identity_value = spectral_norm(&sc.dk_kchi(&pd.p, &vec![id; k])?)?;
    let w_inv = pd.w.adjoint();
    let attained_value = spectral_norm(&sc.dk_kchi(t, &vec![w_inv; k])?)?;
    let sample_max = sample_sup(n, k, samples, seed, |xs| spectral_norm(&sc.dk_kchi(t, xs)?))?;
    let mut report = DerivReport {
        schema: REPORT_SCHEMA,
        chi: sc.chi().clone(),
        m: sc.m(),
        n,
        k,
        singular_values: nu,
        formula_value,
        identity_value,
        attained_value,
        sample_max,
        samples,
        seed,
        tolerances,
        consistent: false,
    };
    report.consistent = report.check();
    Ok(report)
}

/// `k!·p_{n−k}(ν_{ω(χ)})` next to sampled `|D^k d_χ(A)(X¹,…,X^k)|`.
#[derive(Debug, Clone, Serialize)]
pub struct ImmanantReport {
    pub schema: &'static str,
    pub chi: Partition,
    pub n: usize,
    pub k: usize,
    pub singular_values: SingularValues,
    pub value: [f64; 2],
    pub bound: f64,
    pub sample_max: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub consistent: bool,
}

pub fn dk_immanant_report(
    chi: &Partition,
    a: &CMatrix,
    k: usize,
    samples: usize,
    seed: u64,
    tolerance: f64,
) -> Result<ImmanantReport> {
    let n = chi.total();
    if a.rows() != n || a.cols() != n {
        return Err(Error::domain(format!("A must be {n}x{n} for χ = {chi}")));
    }
    if k > n {
        return Err(Error::domain(format!("need k <= n = {n}")));
    }
    let nu = svd(a)?.s;
    let bound = dk_immanant_bound(chi, k, &nu)?;
    let value = immanant(chi, a)?;
    let sample_max = if samples == 0 {
        0.0
    } else {
        sample_sup(
            n,
            k,
            samples,
            seed,
            |xs| Ok(dk_immanant(chi, a, xs)?.norm()),
        )?
    };
    Ok(ImmanantReport {
        schema: REPORT_SCHEMA,
        chi: chi.clone(),
        n,
        k,
        singular_values: nu,
        value: [value.re, value.im],
        bound,
        sample_max,
        samples,
        seed,
        tolerance,
        consistent: sample_max <= bound + tolerance,
    })
}
