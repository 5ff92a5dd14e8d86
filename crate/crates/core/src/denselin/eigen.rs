use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::{Error, Result};

/// Off-diagonal Frobenius mass, relative to `‖A‖_F`, at which sweeps stop.
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted descending, with unit eigenvectors as the matching columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// The 2x2 unitary `G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` that diagonalizes
/// `[[a, b], [b̄, d]]` under `G* · H · G`.
pub(super) fn jacobi_rotation(a: f64, d: f64, b: Complex64) -> [[Complex64; 2]; 2] {
    let r = b.norm();
    let phase = b / r;
    let theta = (d - a) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph = phase.conj();
    [
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [ph * (-s), ph * c],
    ]
}

/// `M ← M·G` restricted to columns `p, q`.
fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, g: &[[Complex64; 2]; 2]) {
    for k in 0..m.rows() {
        let (x, y) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = x * g[0][0] + y * g[1][0];
        m[(k, q)] = x * g[0][1] + y * g[1][1];
    }
}

/// `M ← G*·M` restricted to rows `p, q`.
fn rotate_rows(m: &mut CMatrix, p: usize, q: usize, g: &[[Complex64; 2]; 2]) {
    for k in 0..m.cols() {
        let (x, y) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = g[0][0].conj() * x + g[1][0].conj() * y;
        m[(q, k)] = g[0][1].conj() * x + g[1][1].conj() * y;
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian to `1e-9 · max(1, ‖A‖_F)`; its Hermitian part is
/// what gets diagonalized.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::domain("eigendecomposition of a non-square matrix"));
    }
    a.check_finite()?;
    let n = a.rows();
    let fro = a.frobenius_norm();
    if a.max_abs_diff(&a.adjoint()) > 1e-9 * fro.max(1.0) {
        return Err(Error::domain("matrix is not Hermitian"));
    }
    let mut h = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let target = OFF_DIAGONAL_TOL * fro.max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| h[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = h[(p, q)];
                if b.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let g = jacobi_rotation(h[(p, p)].re, h[(q, q)].re, b);
                rotate_columns(&mut h, p, q, &g);
                rotate_rows(&mut h, p, q, &g);
                rotate_columns(&mut v, p, q, &g);
                h[(p, q)] = Complex64::new(0.0, 0.0);
                h[(q, p)] = Complex64::new(0.0, 0.0);
                h[(p, p)].im = 0.0;
                h[(q, q)].im = 0.0;
            }
        }
    }
    if !converged {
        return Err(Error::numeric(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(j, j)].re.total_cmp(&h[(i, i)].re));
    let values = order.iter().map(|&i| h[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_matrix, sample_rng};

    #[test]
    fn diagonal_input() {
        let e = hermitian_eigen(&CMatrix::diag_real(&[1.0, 3.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = sample_rng(21, 0);
        for n in [1, 2, 5, 9] {
            let g = gaussian_matrix(&mut rng, n, n);
            let h = g.hermitian_part();
            let e = hermitian_eigen(&h).unwrap();
            let vt = e.vectors.adjoint();
            assert!((&vt * &e.vectors).max_abs_diff(&CMatrix::identity(n)) < 1e-12);
            let rec = &(&e.vectors * &CMatrix::diag_real(&e.values)) * &vt;
            assert!(rec.max_abs_diff(&h) < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let trace: f64 = e.values.iter().sum();
            assert!((trace - h.trace().re).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(hermitian_eigen(&a).is_err());
    }
}
