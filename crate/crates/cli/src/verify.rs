//! The verification suite behind `kchi verify`.
//!
//! Ten criteria, each a list of [`Check`]s. A check compares an `observed`
//! number with an `expected` one under a [`Relation`]; when a check covers
//! several random draws it reports the worst draw. Randomness is keyed by
//! `(seed, criterion, case, draw)` so every report is reproducible.
//!
//! `max_n` bounds the vector-space dimension `n` used by the criteria that
//! range over it; the rest run at fixed sizes and are skipped when those
//! exceed `max_n`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use kchi_core::combinat::{
    all_permutations, enumerate, factorial, majorizes, multiplicity_partition, partitions_of,
    IndexMode, Partition,
};
use kchi_core::denselin::{hermitian_eigen, polar, spectral_norm, svd, CMatrix, Complex64};
use kchi_core::norms::{
    dk_immanant, dk_immanant_report, dk_norm_formula, dk_norm_verify_with, immanant,
    k_chi_by_immanants, lambda_eigenvalue, perturbation_bounds, DerivTolerances,
};
use kchi_core::random::{
    descending_spectrum, gaussian_matrix, sample_rng, unit_norm_matrix, SampleRng,
};
use kchi_core::symclass::SymmetryClass;
use kchi_core::symgroup::{char_table, character_of, character_sum_over_stabilizer, class_size};
use kchi_core::{Result, REPORT_SCHEMA};

pub const MIN_MAX_N: usize = 2;
pub const MAX_MAX_N: usize = 4;

/// Identifier and title of each criterion, in run order.
pub const CRITERIA: [(u8, &str); 10] = [
    (
        1,
        "norm of D^k K_chi(P)(I,...,I) equals k! p_{m-k}(nu_omega)",
    ),
    (2, "special-case reductions of the norm formula"),
    (3, "sampling never exceeds the formula and W^-1 attains it"),
    (4, "derivative matches central finite differences"),
    (5, "spectrum of D^k K_chi(P)(I,...,I) is {lambda(alpha)}"),
    (
        6,
        "character-sum and majorization descriptions of Omega agree",
    ),
    (7, "K_chi(A) equals the immanant-matrix expression"),
    (
        8,
        "immanant derivative bound and the permanent strict example",
    ),
    (9, "Taylor reconstruction and perturbation bounds"),
    (10, "character table orthogonality, degrees and S_3 table"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_n: usize,
    pub seed: u64,
    /// Cap on `n^m` for the symmetry classes built.
    pub max_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|observed − expected| ≤ tolerance`
    Eq,
    /// `|observed − expected| ≤ tolerance·|expected|`
    RelEq,
    /// `observed ≤ expected + tolerance`
    Le,
}

impl Relation {
    fn violation(self, expected: f64, observed: f64) -> f64 {
        match self {
            Relation::Eq => (observed - expected).abs(),
            Relation::RelEq if expected == 0.0 => (observed - expected).abs(),
            Relation::RelEq => (observed - expected).abs() / expected.abs(),
            Relation::Le => observed - expected,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub parameters: Value,
    pub relation: Relation,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: &str,
        parameters: Value,
        relation: Relation,
        tolerance: f64,
        expected: f64,
        observed: f64,
    ) -> Check {
        let v = relation.violation(expected, observed);
        Check {
            name: name.to_string(),
            parameters,
            relation,
            expected,
            observed,
            tolerance,
            pass: v.is_finite() && v <= tolerance,
        }
    }

    /// Reports the `(expected, observed)` pair with the largest violation.
    pub fn worst(
        name: &str,
        parameters: Value,
        relation: Relation,
        tolerance: f64,
        pairs: &[(f64, f64)],
    ) -> Check {
        let (e, o) = pairs
            .iter()
            .copied()
            .max_by(|a, b| {
                let va = relation.violation(a.0, a.1);
                let vb = relation.violation(b.0, b.1);
                va.is_nan().cmp(&vb.is_nan()).then(va.total_cmp(&vb))
            })
            .unwrap_or((0.0, 0.0));
        Check::new(name, parameters, relation, tolerance, e, o)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    /// False when every case of the criterion lies above `max_n`.
    pub in_scope: bool,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub max_n: usize,
    pub seed: u64,
    pub criteria: Vec<CriterionReport>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn failed(&self) -> Vec<u8> {
        self.criteria
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.id)
            .collect()
    }
}

pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let criteria = CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, cfg))
        .collect::<Result<Vec<_>>>()?;
    let pass = criteria.iter().all(|c| c.pass);
    Ok(VerifyReport {
        schema: REPORT_SCHEMA,
        max_n: cfg.max_n,
        seed: cfg.seed,
        criteria,
        pass,
    })
}

pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> Result<CriterionReport> {
    let (_, title) = *CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .ok_or_else(|| kchi_core::Error::Domain(format!("no criterion {id}")))?;
    let ctx = Ctx { cfg: *cfg, id };
    let checks = match id {
        1 => main_equality(&ctx)?,
        2 => special_cases(&ctx)?,
        3 => sampling_and_attainment(&ctx)?,
        4 => finite_differences(&ctx)?,
        5 => spectrum(&ctx)?,
        6 => omega_criterion(&ctx)?,
        7 => immanant_matrix_form(&ctx)?,
        8 => immanant_bound(&ctx)?,
        9 => taylor_and_perturbation(&ctx)?,
        _ => character_table(&ctx)?,
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(CriterionReport {
        id,
        title,
        in_scope: !checks.is_empty(),
        checks,
        pass,
    })
}

struct Ctx {
    cfg: VerifyConfig,
    id: u8,
}

impl Ctx {
    fn case_seed(&self, case: u64) -> u64 {
        self.cfg
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(u64::from(self.id) << 48)
            .wrapping_add(case)
    }

    fn rng(&self, case: u64, draw: u64) -> SampleRng {
        sample_rng(self.case_seed(case), draw)
    }

    fn class(&self, chi: &Partition, n: usize) -> Result<SymmetryClass> {
        SymmetryClass::build_with_cap(chi, n, self.cfg.max_dim)
    }

    /// Runs `f` on draws `0..count` in parallel, results in draw order.
    fn draws<T, F>(&self, case: u64, count: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&mut SampleRng, u64) -> Result<T> + Sync,
    {
        (0..count)
            .into_par_iter()
            .map(|d| f(&mut self.rng(case, d), d))
            .collect()
    }
}

/// `(χ, n)` for every partition `χ` of `m` with `l(χ) ≤ n`, over `m_range ∋ m ≤ n`, `n ∈ n_range`.
fn classes(
    n_range: std::ops::RangeInclusive<usize>,
    m_min: usize,
) -> Result<Vec<(Partition, usize)>> {
    let mut out = Vec::new();
    for n in n_range {
        for m in m_min..=n {
            for chi in partitions_of(m)? {
                if chi.length() <= n {
                    out.push((chi, n));
                }
            }
        }
    }
    Ok(out)
}

fn params(chi: &Partition, n: usize, k: usize) -> Value {
    json!({"chi": chi, "m": chi.total(), "n": n, "k": k})
}

fn with(mut base: Value, key: &str, v: impl Serialize) -> Value {
    base[key] = json!(v);
    base
}

fn max_abs(a: &CMatrix) -> f64 {
    a.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Sum over all `t`-subsets, by bitmask.
fn esym_subsets(t: usize, xs: &[f64]) -> f64 {
    (0u32..1 << xs.len())
        .filter(|mask| mask.count_ones() as usize == t)
        .map(|mask| {
            (0..xs.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| xs[i])
                .product::<f64>()
        })
        .sum()
}

fn repeat_by(chi: &Partition, nu: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, &c) in chi.parts().iter().enumerate() {
        for _ in 0..c {
            out.push(nu[i]);
        }
    }
    out
}

const DRAWS_MAIN: u64 = 20;
const REL_1E7: f64 = 1e-7;

fn main_equality(ctx: &Ctx) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (case, (chi, n)) in classes(2..=ctx.cfg.max_n, 2)?.into_iter().enumerate() {
        let sc = ctx.class(&chi, n)?;
        for k in 1..=sc.m() {
            let pairs = ctx.draws((case * 8 + k) as u64, DRAWS_MAIN, |rng, _| {
                let t = gaussian_matrix(rng, n, n);
                let nu = svd(&t)?.s;
                let formula = dk_norm_formula(&chi, k, &nu, n)?;
                let p = polar(&t)?.p;
                let ids = vec![CMatrix::identity(n); k];
                Ok((formula, spectral_norm(&sc.dk_kchi(&p, &ids)?)?))
            })?;
            checks.push(Check::worst(
                "identity-tuple norm equals formula",
                with(params(&chi, n, k), "draws", DRAWS_MAIN),
                Relation::RelEq,
                REL_1E7,
                &pairs,
            ));
        }
    }
    Ok(checks)
}

fn special_cases(ctx: &Ctx) -> Result<Vec<Check>> {
    const SPECTRA: u64 = 50;
    let mut checks = Vec::new();
    let mut case = 0u64;
    for n in 2..=ctx.cfg.max_n {
        for m in 2..=n {
            case += 1;
            let spectra: Vec<Vec<f64>> = (0..SPECTRA)
                .map(|d| descending_spectrum(&mut ctx.rng(case, d), n))
                .collect();
            let row = Partition::row(m)?;
            let col = Partition::column(m)?;
            for k in 1..=m {
                let mut row_pairs = Vec::new();
                let mut col_pairs = Vec::new();
                for nu in &spectra {
                    let sv = kchi_core::denselin::SingularValues::new(nu.clone())?;
                    let falling = (factorial(m) / factorial(m - k)) as f64;
                    row_pairs.push((
                        falling * nu[0].powi((m - k) as i32),
                        dk_norm_formula(&row, k, &sv, n)?,
                    ));
                    col_pairs.push((
                        factorial(k) as f64 * esym_subsets(m - k, &nu[..m]),
                        dk_norm_formula(&col, k, &sv, n)?,
                    ));
                }
                let p = json!({"m": m, "n": n, "k": k, "spectra": SPECTRA});
                checks.push(Check::worst(
                    "row character",
                    p.clone(),
                    Relation::Eq,
                    1e-9,
                    &row_pairs,
                ));
                checks.push(Check::worst(
                    "column character",
                    p,
                    Relation::Eq,
                    1e-9,
                    &col_pairs,
                ));
            }
            for chi in partitions_of(m)?.into_iter().filter(|c| c.length() <= n) {
                let mut pairs = Vec::new();
                for nu in &spectra {
                    let sv = kchi_core::denselin::SingularValues::new(nu.clone())?;
                    let w = repeat_by(&chi, nu);
                    let double_sum: f64 = (0..m)
                        .map(|j| (0..m).filter(|&i| i != j).map(|i| w[i]).product::<f64>())
                        .sum();
                    pairs.push((double_sum, dk_norm_formula(&chi, 1, &sv, n)?));
                }
                checks.push(Check::worst(
                    "first derivative double sum",
                    json!({"chi": chi, "n": n, "k": 1, "spectra": SPECTRA}),
                    Relation::Eq,
                    1e-10,
                    &pairs,
                ));
            }
        }
    }
    Ok(checks)
}

fn sampling_and_attainment(ctx: &Ctx) -> Result<Vec<Check>> {
    const T_DRAWS: u64 = 10;
    const SAMPLES: usize = 1000;
    let tol = DerivTolerances::default();
    let mut checks = Vec::new();
    let mut case = 0u64;
    for (n, m, k) in [(3, 2, 1), (3, 3, 2), (4, 3, 1)] {
        if n > ctx.cfg.max_n {
            continue;
        }
        for chi in partitions_of(m)? {
            case += 1;
            let sc = ctx.class(&chi, n)?;
            let mut sampled = Vec::new();
            let mut attained = Vec::new();
            for d in 0..T_DRAWS {
                let t = gaussian_matrix(&mut ctx.rng(case, d), n, n);
                let seed = ctx.case_seed(1000 * case + d + 1);
                let r = dk_norm_verify_with(&sc, &t, k, SAMPLES, seed, tol)?;
                sampled.push((r.formula_value, r.sample_max));
                attained.push((r.formula_value, r.attained_value));
            }
            let p = with(
                with(params(&chi, n, k), "draws", T_DRAWS),
                "samples",
                SAMPLES,
            );
            checks.push(Check::worst(
                "sampled norm below formula",
                p.clone(),
                Relation::Le,
                1e-7,
                &sampled,
            ));
            checks.push(Check::worst(
                "W^-1 tuple attains formula",
                p,
                Relation::Eq,
                1e-7,
                &attained,
            ));
        }
    }
    Ok(checks)
}

fn finite_differences(ctx: &Ctx) -> Result<Vec<Check>> {
    const CASES: u64 = 10;
    const H: f64 = 1e-4;
    let n = 3;
    if n > ctx.cfg.max_n {
        return Ok(Vec::new());
    }
    let mut checks = Vec::new();
    for (ci, chi) in partitions_of(3)?.into_iter().enumerate() {
        let sc = ctx.class(&chi, n)?;
        let f = |a: &CMatrix| sc.k_chi_matrix(a);
        for k in 1..=2usize {
            let errs = ctx.draws((ci * 4 + k) as u64, CASES, |rng, _| {
                let t = gaussian_matrix(rng, n, n);
                let x1 = gaussian_matrix(rng, n, n);
                let x2 = gaussian_matrix(rng, n, n);
                let (exact, approx) = if k == 1 {
                    let step = x1.scale_real(H);
                    let fd = (&f(&(&t + &step))? - &f(&(&t - &step))?).scale_real(0.5 / H);
                    (sc.dk_kchi(&t, &[x1])?, fd)
                } else {
                    let (a, b) = (x1.scale_real(H), x2.scale_real(H));
                    let pp = f(&(&(&t + &a) + &b))?;
                    let pm = f(&(&(&t + &a) - &b))?;
                    let mp = f(&(&(&t - &a) + &b))?;
                    let mm = f(&(&(&t - &a) - &b))?;
                    let fd = (&(&pp - &pm) - &(&mp - &mm)).scale_real(0.25 / (H * H));
                    (sc.dk_kchi(&t, &[x1, x2])?, fd)
                };
                Ok((0.0, exact.max_abs_diff(&approx) / max_abs(&exact)))
            })?;
            checks.push(Check::worst(
                "relative gap to central difference",
                with(with(params(&chi, n, k), "cases", CASES), "step", H),
                Relation::Le,
                1e-5,
                &errs,
            ));
        }
    }
    Ok(checks)
}

fn spectrum(ctx: &Ctx) -> Result<Vec<Check>> {
    const DRAWS: u64 = 3;
    let mut checks = Vec::new();
    for (case, (chi, n)) in classes(1..=ctx.cfg.max_n.min(3), 1)?
        .into_iter()
        .enumerate()
    {
        let sc = ctx.class(&chi, n)?;
        for k in 1..=sc.m() {
            let per_draw = ctx.draws((case * 8 + k) as u64, DRAWS, |rng, _| {
                let t = gaussian_matrix(rng, n, n);
                let nu = svd(&t)?.s;
                let p = polar(&t)?.p;
                let d = sc.dk_kchi(&p, &vec![CMatrix::identity(n); k])?;
                let eig = hermitian_eigen(&d)?.values;
                let mut lam = sc
                    .delta_hat()
                    .iter()
                    .map(|a| lambda_eigenvalue(a, k, &nu))
                    .collect::<Result<Vec<f64>>>()?;
                lam.sort_by(|a, b| b.total_cmp(a));
                let size_ok = lam.len() == eig.len();
                Ok((size_ok, lam.into_iter().zip(eig).collect::<Vec<_>>()))
            })?;
            let sizes_ok = per_draw.iter().all(|(ok, _)| *ok);
            let pairs: Vec<(f64, f64)> = per_draw.into_iter().flat_map(|(_, p)| p).collect();
            let p = with(with(params(&chi, n, k), "draws", DRAWS), "dim", sc.dim());
            checks.push(Check::new(
                "spectrum size equals |delta_hat|",
                p.clone(),
                Relation::Eq,
                0.0,
                sc.dim() as f64,
                if sizes_ok { sc.dim() as f64 } else { f64::NAN },
            ));
            checks.push(Check::worst(
                "sorted eigenvalues equal lambda values",
                p,
                Relation::Eq,
                1e-7,
                &pairs,
            ));
        }
    }
    Ok(checks)
}

fn omega_criterion(ctx: &Ctx) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for m in 1..=ctx.cfg.max_n {
        let chis = partitions_of(m)?;
        for n in 1..=ctx.cfg.max_n {
            let mut mismatches = 0u64;
            let mut compared = 0u64;
            for alpha in enumerate(IndexMode::Gamma, m, n) {
                let mu = multiplicity_partition(&alpha);
                for chi in &chis {
                    let by_sum = character_sum_over_stabilizer(chi, &alpha)? != 0;
                    if by_sum != majorizes(chi, &mu)? {
                        mismatches += 1;
                    }
                    compared += 1;
                }
            }
            checks.push(Check::new(
                "membership disagreements",
                json!({"m": m, "n": n, "pairs": compared}),
                Relation::Eq,
                0.0,
                0.0,
                mismatches as f64,
            ));
        }
    }
    Ok(checks)
}

fn immanant_matrix_form(ctx: &Ctx) -> Result<Vec<Check>> {
    const DRAWS: u64 = 20;
    let mut checks = Vec::new();
    let mut case = 0u64;
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        if n > ctx.cfg.max_n {
            continue;
        }
        for chi in partitions_of(m)?.into_iter().filter(|c| c.length() <= n) {
            case += 1;
            let sc = ctx.class(&chi, n)?;
            let pairs = ctx.draws(case, DRAWS, |rng, _| {
                let a = gaussian_matrix(rng, n, n);
                Ok((
                    0.0,
                    sc.k_chi_matrix(&a)?
                        .max_abs_diff(&k_chi_by_immanants(&sc, &a)?),
                ))
            })?;
            checks.push(Check::worst(
                "max entry gap between the two expressions",
                json!({"chi": chi, "m": m, "n": n, "draws": DRAWS}),
                Relation::Le,
                1e-9,
                &pairs,
            ));
        }
    }
    Ok(checks)
}

fn immanant_bound(ctx: &Ctx) -> Result<Vec<Check>> {
    const DRAWS: u64 = 3;
    const SAMPLES: usize = 1000;
    const STRICT_SAMPLES: usize = 10_000;
    let mut checks = Vec::new();
    let mut case = 0u64;
    for n in 1..=ctx.cfg.max_n {
        for chi in partitions_of(n)? {
            for k in 1..=n {
                case += 1;
                let mut pairs = Vec::new();
                for d in 0..DRAWS {
                    let a = gaussian_matrix(&mut ctx.rng(case, d), n, n);
                    let seed = ctx.case_seed(1000 * case + d + 1);
                    let r = dk_immanant_report(&chi, &a, k, SAMPLES, seed, 1e-7)?;
                    pairs.push((r.bound, r.sample_max));
                }
                checks.push(Check::worst(
                    "sampled derivative below bound",
                    json!({"chi": chi, "n": n, "k": k, "draws": DRAWS, "samples": SAMPLES}),
                    Relation::Le,
                    1e-7,
                    &pairs,
                ));
            }
        }
    }
    let per = Partition::row(2)?;
    let a = CMatrix::diag_real(&[1.0, 0.0]);
    let r = dk_immanant_report(&per, &a, 1, STRICT_SAMPLES, ctx.case_seed(0), 1e-7)?;
    checks.push(Check::new(
        "permanent at diag(1,0): sampled sup at least 0.05 below bound",
        json!({"chi": per, "n": 2, "k": 1, "samples": STRICT_SAMPLES, "bound": r.bound}),
        Relation::Le,
        0.0,
        r.bound - 0.05,
        r.sample_max,
    ));
    Ok(checks)
}

fn taylor_and_perturbation(ctx: &Ctx) -> Result<Vec<Check>> {
    const TAYLOR_DRAWS: u64 = 3;
    const PERTURBATIONS: u64 = 200;
    const DELTAS: [f64; 3] = [0.01, 0.1, 1.0];
    let mut checks = Vec::new();
    let kchi_cases = classes(1..=ctx.cfg.max_n, 1)?;
    let classes_built = kchi_cases
        .iter()
        .map(|(chi, n)| ctx.class(chi, *n))
        .collect::<Result<Vec<_>>>()?;
    let imm_cases: Vec<Partition> = (1..=ctx.cfg.max_n)
        .map(partitions_of)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    for (case, sc) in classes_built.iter().enumerate() {
        let n = sc.n();
        let pairs = ctx.draws(case as u64, TAYLOR_DRAWS, |rng, _| {
            let t = gaussian_matrix(rng, n, n);
            let x = gaussian_matrix(rng, n, n);
            let mut sum = sc.k_chi_matrix(&t)?;
            for k in 1..=sc.m() {
                let term = sc.dk_kchi(&t, &vec![x.clone(); k])?;
                sum = &sum + &term.scale_real(1.0 / factorial(k) as f64);
            }
            Ok((0.0, sum.max_abs_diff(&sc.k_chi_matrix(&(&t + &x))?)))
        })?;
        checks.push(Check::worst(
            "Taylor polynomial reproduces K_chi(T+X)",
            json!({"chi": sc.chi(), "n": n, "draws": TAYLOR_DRAWS}),
            Relation::Le,
            1e-9,
            &pairs,
        ));
    }
    let offset = kchi_cases.len() as u64;
    for (i, chi) in imm_cases.iter().enumerate() {
        let n = chi.total();
        let pairs = ctx.draws(offset + i as u64, TAYLOR_DRAWS, |rng, _| {
            let a = gaussian_matrix(rng, n, n);
            let y = gaussian_matrix(rng, n, n);
            let mut sum = immanant(chi, &a)?;
            for k in 1..=n {
                sum += dk_immanant(chi, &a, &vec![y.clone(); k])? / factorial(k) as f64;
            }
            Ok((0.0, (sum - immanant(chi, &(&a + &y))?).norm()))
        })?;
        checks.push(Check::worst(
            "Taylor polynomial reproduces d_chi(A+Y)",
            json!({"chi": chi, "n": n, "draws": TAYLOR_DRAWS}),
            Relation::Le,
            1e-9,
            &pairs,
        ));
    }

    let offset = offset + imm_cases.len() as u64;
    for (di, &delta) in DELTAS.iter().enumerate() {
        let kchi_pairs = ctx.draws(offset + 2 * di as u64, PERTURBATIONS, |rng, d| {
            let sc = &classes_built[d as usize % classes_built.len()];
            let n = sc.n();
            let t = gaussian_matrix(rng, n, n);
            let x = unit_norm_matrix(rng, n)?.scale_real(delta);
            let nu = svd(&t)?.s;
            let bound = perturbation_bounds(sc.chi(), &nu, delta)?.kchi_bound;
            let diff = &sc.k_chi_matrix(&t)? - &sc.k_chi_matrix(&(&t + &x))?;
            Ok((bound, spectral_norm(&diff)?))
        })?;
        checks.push(Check::worst(
            "K_chi perturbation within bound",
            json!({"delta": delta, "perturbations": PERTURBATIONS, "classes": kchi_cases.len()}),
            Relation::Le,
            1e-8,
            &kchi_pairs,
        ));
        let imm_pairs = ctx.draws(offset + 2 * di as u64 + 1, PERTURBATIONS, |rng, d| {
            let chi = &imm_cases[d as usize % imm_cases.len()];
            let n = chi.total();
            let a = gaussian_matrix(rng, n, n);
            let y = unit_norm_matrix(rng, n)?.scale_real(delta);
            let nu = svd(&a)?.s;
            let bound = perturbation_bounds(chi, &nu, delta)?
                .imm_bound
                .ok_or_else(|| kchi_core::Error::Numeric("missing immanant bound".into()))?;
            let diff: Complex64 = immanant(chi, &a)? - immanant(chi, &(&a + &y))?;
            Ok((bound, diff.norm()))
        })?;
        checks.push(Check::worst(
            "immanant perturbation within bound",
            json!({"delta": delta, "perturbations": PERTURBATIONS, "characters": imm_cases.len()}),
            Relation::Le,
            1e-8,
            &imm_pairs,
        ));
    }
    Ok(checks)
}

/// `m! / Π hook lengths`.
fn hook_length_degree(lambda: &Partition) -> u64 {
    let parts = lambda.parts();
    let conj: Vec<usize> = (0..parts[0])
        .map(|j| parts.iter().filter(|&&p| p > j).count())
        .collect();
    let mut hooks = 1u64;
    for (i, &p) in parts.iter().enumerate() {
        for (j, &c) in conj.iter().enumerate().take(p) {
            hooks *= ((p - j - 1) + (c - i - 1) + 1) as u64;
        }
    }
    factorial(lambda.total()) / hooks
}

fn character_table(_ctx: &Ctx) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for m in 1..=6 {
        let table = char_table(m)?;
        let parts = table.partitions();
        let mut orth_bad = 0u64;
        for (a, ra) in table.rows().iter().enumerate() {
            for (b, rb) in table.rows().iter().enumerate() {
                let s: i64 = parts
                    .iter()
                    .zip(ra.iter().zip(rb))
                    .map(|(rho, (x, y))| class_size(rho) as i64 * x * y)
                    .sum();
                let want = if a == b { factorial(m) as i64 } else { 0 };
                if s != want {
                    orth_bad += 1;
                }
            }
        }
        checks.push(Check::new(
            "first orthogonality violations",
            json!({"m": m, "pairs": parts.len() * parts.len()}),
            Relation::Eq,
            0.0,
            0.0,
            orth_bad as f64,
        ));
        let mut deg_bad = 0u64;
        for lambda in parts {
            if table.dimension(lambda)? != hook_length_degree(lambda) as i64 {
                deg_bad += 1;
            }
        }
        checks.push(Check::new(
            "hook-length degree mismatches",
            json!({"m": m, "characters": parts.len()}),
            Relation::Eq,
            0.0,
            0.0,
            deg_bad as f64,
        ));
    }
    let std_rep = Partition::new(vec![2, 1])?;
    let mut bad = 0u64;
    for s in all_permutations(3) {
        let fix = (0..3).filter(|&i| s.apply(i) == i).count() as i64;
        if character_of(&std_rep, &s)? != fix - 1 {
            bad += 1;
        }
    }
    checks.push(Check::new(
        "S_3 (2,1) character against fix - 1",
        json!({"m": 3}),
        Relation::Eq,
        0.0,
        0.0,
        bad as f64,
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::new("", json!({}), Relation::Eq, 0.1, 1.0, 1.05).pass);
        assert!(!Check::new("", json!({}), Relation::Eq, 0.01, 1.0, 1.05).pass);
        assert!(Check::new("", json!({}), Relation::RelEq, 0.1, 10.0, 10.5).pass);
        assert!(Check::new("", json!({}), Relation::Le, 0.0, 1.0, 0.5).pass);
        assert!(!Check::new("", json!({}), Relation::Le, 0.0, 1.0, 1.5).pass);
        assert!(!Check::new("", json!({}), Relation::Eq, 1.0, 0.0, f64::NAN).pass);
        let w = Check::worst(
            "",
            json!({}),
            Relation::Le,
            0.0,
            &[(1.0, 0.5), (1.0, 2.0), (3.0, 0.0)],
        );
        assert_eq!((w.expected, w.observed), (1.0, 2.0));
    }

    #[test]
    fn hook_lengths() {
        assert_eq!(hook_length_degree(&Partition::new(vec![2, 1]).unwrap()), 2);
        assert_eq!(hook_length_degree(&Partition::new(vec![3, 2]).unwrap()), 5);
        assert_eq!(
            hook_length_degree(&Partition::new(vec![3, 2, 1]).unwrap()),
            16
        );
        assert_eq!(hook_length_degree(&Partition::row(4).unwrap()), 1);
    }

    #[test]
    fn small_suite_passes_and_is_reproducible() {
        let cfg = VerifyConfig {
            max_n: 2,
            seed: 3,
            max_dim: 4096,
        };
        let a = run_suite(&cfg).unwrap();
        assert!(a.pass, "failed criteria {:?}", a.failed());
        assert!(!a.criteria[3].in_scope);
        let b = run_suite(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
