//! Immanants `d_χ(A) = Σ_σ χ(σ) Π_i a_{iσ(i)}`, mixed immanants and their
//! directional derivatives, all by direct summation over `S_n`.

use num_complex::Complex64;

use crate::combinat::{all_permutations, enumerate, factorial, IndexMode, Partition};
use crate::denselin::CMatrix;
use crate::symclass::SymmetryClass;
use crate::symgroup::char_table;
use crate::{Error, Result};

/// Largest `n` for a plain immanant.
pub const MAX_IMMANANT_DIM: usize = 8;
/// Largest `n` for mixed immanants and immanant derivatives (`(n!)²` work).
pub const MAX_MIXED_DIM: usize = 6;

/// The nonzero terms `(σ, χ(σ))` of an immanant of order `n`.
struct Kernel {
    terms: Vec<(Vec<usize>, f64)>,
}

impl Kernel {
    fn new(chi: &Partition) -> Result<Self> {
        let n = chi.total();
        let table = char_table(n)?;
        let mut terms = Vec::new();
        for s in all_permutations(n) {
            let c = table.value(chi, &s.cycle_type())?;
            if c != 0 {
                terms.push((s.images().to_vec(), c as f64));
            }
        }
        Ok(Kernel { terms })
    }

    fn eval(&self, entry: impl Fn(usize, usize) -> Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(sigma, c)| {
                sigma
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| entry(i, j))
                    .product::<Complex64>()
                    * c
            })
            .sum()
    }
}

fn check_square(chi: &Partition, a: &CMatrix, what: &str) -> Result<()> {
    let n = chi.total();
    if a.rows() != n || a.cols() != n {
        return Err(Error::domain(format!(
            "{what} for χ = {chi} needs {n}x{n} matrices, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// `d_χ(A)`; the determinant for `χ = (1,…,1)`, the permanent for `χ = (n)`.
pub fn immanant(chi: &Partition, a: &CMatrix) -> Result<Complex64> {
    if chi.total() > MAX_IMMANANT_DIM {
        return Err(Error::resource(format!(
            "immanants limited to n <= {MAX_IMMANANT_DIM}"
        )));
    }
    check_square(chi, a, "immanant")?;
    Ok(Kernel::new(chi)?.eval(|i, j| a[(i, j)]))
}

/// `Δ_χ(X¹,…,X^n) = (1/n!) Σ_σ d_χ(X^{σ(1)}_{[1]}, …, X^{σ(n)}_{[n]})`, where the
/// `j`-th column of the `σ` term is taken from `X^{σ(j)}`.
pub fn mixed_immanant(chi: &Partition, xs: &[CMatrix]) -> Result<Complex64> {
    let n = chi.total();
    if n > MAX_MIXED_DIM {
        return Err(Error::resource(format!(
            "mixed immanants limited to n <= {MAX_MIXED_DIM}"
        )));
    }
    if xs.len() != n {
        return Err(Error::domain(format!(
            "mixed immanant of order {n} needs {n} matrices, got {}",
            xs.len()
        )));
    }
    for x in xs {
        check_square(chi, x, "mixed immanant")?;
    }
    let kernel = Kernel::new(chi)?;
    let total: Complex64 = all_permutations(n)
        .iter()
        .map(|s| kernel.eval(|i, j| xs[s.apply(j)][(i, j)]))
        .sum();
    Ok(total / factorial(n) as f64)
}

/// `D^k d_χ(A)(X¹,…,X^k)`.
///
/// Equal to `(n!/(n−k)!) Δ_χ(A,…,A,X¹,…,X^k)`; evaluated by grouping the terms of
/// that sum by which columns the `X^i` occupy, giving
/// `Σ_{c injective} d_χ(A with column c(i) replaced by column c(i) of X^i)`.
pub fn dk_immanant(chi: &Partition, a: &CMatrix, xs: &[CMatrix]) -> Result<Complex64> {
    let n = chi.total();
    if n > MAX_MIXED_DIM {
        return Err(Error::resource(format!(
            "immanant derivatives limited to n <= {MAX_MIXED_DIM}"
        )));
    }
    check_square(chi, a, "immanant derivative")?;
    for x in xs {
        check_square(chi, x, "immanant derivative")?;
    }
    let k = xs.len();
    if k > n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kernel = Kernel::new(chi)?;
    if k == 0 {
        return Ok(kernel.eval(|i, j| a[(i, j)]));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for cols in enumerate(IndexMode::Gamma, k, n) {
        let c = cols.entries();
        if (0..k).any(|i| c[i + 1..].contains(&c[i])) {
            continue;
        }
        // source[j] = which X fills column j, or None for A
        let mut source = vec![None; n];
        for (i, &j) in c.iter().enumerate() {
            source[j - 1] = Some(i);
        }
        total += kernel.eval(|i, j| match source[j] {
            Some(x) => xs[x][(i, j)],
            None => a[(i, j)],
        });
    }
    Ok(total)
}

/// The same derivative read off the symmetry class with `m = n`:
/// `(n!/χ(id)) · c* · D^k K_χ(A)(X¹,…,X^k) · c`, where `c` are the coordinates
/// of `e*_γ`, `γ = (1,…,n)`, in the orthonormal basis.
pub fn dk_immanant_via_class(sc: &SymmetryClass, a: &CMatrix, xs: &[CMatrix]) -> Result<Complex64> {
    let n = sc.n();
    if sc.m() != n {
        return Err(Error::domain(
            "immanant extraction needs a class with m = n",
        ));
    }
    let gamma = crate::combinat::MultiIndex::new((1..=n).collect(), n)?;
    let c = sc.coordinates(&sc.estar(&gamma));
    let d = sc.dk_kchi(a, xs)?;
    let dc = d.mul_vec(&c);
    let form: Complex64 = c.iter().zip(&dc).map(|(x, y)| x.conj() * y).sum();
    Ok(form * (factorial(n) as f64 / sc.chi_id() as f64))
}

/// `imm_χ(A)`: rows and columns indexed by `Δ̂`, entry `(γ, δ) = d_χ(A[γ|δ])`.
pub fn imm_matrix(sc: &SymmetryClass, a: &CMatrix) -> Result<CMatrix> {
    let n = sc.n();
    if a.rows() != n || a.cols() != n {
        return Err(Error::domain(format!("expected a {n}x{n} matrix")));
    }
    let kernel = Kernel::new(sc.chi())?;
    let idx: Vec<Vec<usize>> = sc
        .delta_hat()
        .iter()
        .map(|g| g.entries().iter().map(|&e| e - 1).collect())
        .collect();
    let d = idx.len();
    Ok(CMatrix::from_fn(d, d, |r, c| {
        let (g, h) = (&idx[r], &idx[c]);
        kernel.eval(|i, j| a[(g[i], h[j])])
    }))
}

/// `K_χ(A) = (χ(id)/m!) · B* · imm_χ(A) · B`, using `χ̄ = χ`.
pub fn k_chi_by_immanants(sc: &SymmetryClass, a: &CMatrix) -> Result<CMatrix> {
    let b = sc.basis_b();
    let imm = imm_matrix(sc, a)?;
    let scale = sc.chi_id() as f64 / factorial(sc.m()) as f64;
    Ok((&(&b.adjoint() * &imm) * b).scale_real(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_matrix, sample_rng};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Laplace expansion along the first row.
    fn det_oracle(a: &CMatrix) -> Complex64 {
        let n = a.rows();
        if n == 1 {
            return a[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let rows: Vec<usize> = (1..n).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                a[(0, j)] * det_oracle(&a.select(&rows, &cols)) * sign
            })
            .sum()
    }

    /// Adjugate from cofactors: adj(A)_{ji} = (−1)^{i+j} det A(i|j).
    fn adjugate(a: &CMatrix) -> CMatrix {
        let n = a.rows();
        CMatrix::from_fn(n, n, |j, i| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            det_oracle(&a.select(&rows, &cols)) * sign
        })
    }

    #[test]
    fn immanant_examples() {
        for chi in crate::combinat::partitions_of(4).unwrap() {
            let id = immanant(&chi, &CMatrix::identity(4)).unwrap();
            let deg = char_table(4).unwrap().dimension(&chi).unwrap();
            assert_eq!(id, c(deg as f64));
        }
        let ones = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(immanant(&p(&[2]), &ones).unwrap(), c(2.0));
        assert_eq!(immanant(&p(&[1, 1]), &ones).unwrap(), c(0.0));
        assert_eq!(
            immanant(&p(&[2, 1]), &CMatrix::identity(3)).unwrap(),
            c(2.0)
        );
        assert!(immanant(&p(&[2, 1]), &CMatrix::identity(2)).is_err());
    }

    #[test]
    fn determinant_matches_laplace() {
        let mut rng = sample_rng(61, 0);
        for n in 1..=5 {
            let a = gaussian_matrix(&mut rng, n, n);
            let d = immanant(&Partition::column(n).unwrap(), &a).unwrap();
            assert!((d - det_oracle(&a)).norm() < 1e-10);
        }
    }

    #[test]
    fn mixed_immanant_examples() {
        let mut rng = sample_rng(62, 0);
        let a = gaussian_matrix(&mut rng, 3, 3);
        let chi = p(&[2, 1]);
        let diag = mixed_immanant(&chi, &[a.clone(), a.clone(), a.clone()]).unwrap();
        assert!((diag - immanant(&chi, &a).unwrap()).norm() < 1e-12);

        let j = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let v = mixed_immanant(&p(&[2]), &[CMatrix::identity(2), j]).unwrap();
        assert!((v - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn mixed_immanant_is_symmetric_and_multilinear() {
        let mut rng = sample_rng(63, 0);
        let chi = p(&[2, 1]);
        let xs: Vec<CMatrix> = (0..3).map(|_| gaussian_matrix(&mut rng, 3, 3)).collect();
        let y = gaussian_matrix(&mut rng, 3, 3);
        let base = mixed_immanant(&chi, &xs).unwrap();
        for s in all_permutations(3) {
            let perm: Vec<CMatrix> = (0..3).map(|i| xs[s.apply(i)].clone()).collect();
            assert!((mixed_immanant(&chi, &perm).unwrap() - base).norm() < 1e-10);
        }
        let w = Complex64::new(0.7, 0.2);
        for slot in 0..3 {
            let mut mix = xs.clone();
            mix[slot] = &xs[slot].scale(w) + &y;
            let mut only_y = xs.clone();
            only_y[slot] = y.clone();
            let lhs = mixed_immanant(&chi, &mix).unwrap();
            let rhs = base * w + mixed_immanant(&chi, &only_y).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn derivative_matches_mixed_immanant_definition() {
        let mut rng = sample_rng(64, 0);
        for chi in [p(&[2, 1]), p(&[3]), p(&[1, 1, 1]), p(&[2, 2])] {
            let n = chi.total();
            let a = gaussian_matrix(&mut rng, n, n);
            for k in 0..=n {
                let xs: Vec<CMatrix> = (0..k).map(|_| gaussian_matrix(&mut rng, n, n)).collect();
                let mut args = vec![a.clone(); n - k];
                args.extend(xs.iter().cloned());
                let scale = (factorial(n) / factorial(n - k)) as f64;
                let want = mixed_immanant(&chi, &args).unwrap() * scale;
                let got = dk_immanant(&chi, &a, &xs).unwrap();
                assert!((got - want).norm() < 1e-9 * want.norm().max(1.0));
            }
        }
    }

    #[test]
    fn jacobi_formula_for_determinant() {
        let mut rng = sample_rng(65, 0);
        for n in 2..=4 {
            let a = gaussian_matrix(&mut rng, n, n);
            let x = gaussian_matrix(&mut rng, n, n);
            let got =
                dk_immanant(&Partition::column(n).unwrap(), &a, std::slice::from_ref(&x)).unwrap();
            let want = (&adjugate(&a) * &x).trace();
            assert!((got - want).norm() < 1e-10);
        }
    }

    #[test]
    fn top_derivative_is_independent_of_base_point() {
        let mut rng = sample_rng(66, 0);
        let n = 3;
        let chi = Partition::row(n).unwrap();
        let j = CMatrix::from_fn(n, n, |_, _| c(1.0));
        let xs = vec![j.clone(); n];
        let a = gaussian_matrix(&mut rng, n, n);
        let b = gaussian_matrix(&mut rng, n, n);
        let da = dk_immanant(&chi, &a, &xs).unwrap();
        let db = dk_immanant(&chi, &b, &xs).unwrap();
        assert!((da - db).norm() < 1e-12);
        // n! Δ(J,…,J) = n! per(J) = n!·n!
        assert!((da - c(36.0)).norm() < 1e-12);
    }

    #[test]
    fn derivative_through_symmetry_class() {
        let mut rng = sample_rng(67, 0);
        for chi in [p(&[2, 1]), p(&[3]), p(&[1, 1, 1]), p(&[2])] {
            let n = chi.total();
            let sc = SymmetryClass::build(&chi, n).unwrap();
            let a = gaussian_matrix(&mut rng, n, n);
            for k in 0..=n {
                let xs: Vec<CMatrix> = (0..k).map(|_| gaussian_matrix(&mut rng, n, n)).collect();
                let direct = dk_immanant(&chi, &a, &xs).unwrap();
                let via = dk_immanant_via_class(&sc, &a, &xs).unwrap();
                assert!((direct - via).norm() < 1e-9 * direct.norm().max(1.0));
            }
        }
    }
}
