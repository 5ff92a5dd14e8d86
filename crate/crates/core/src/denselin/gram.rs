use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::{Error, Result};

/// Pivot below which [`gram_schmidt`] reports linear dependence.
pub const GS_PIVOT_TOL: f64 = 1e-9;

/// `⟨x, y⟩ = Σ x_i · conj(y_i)`, linear in the first argument.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// An orthonormal set grown one vector at a time (classical Gram–Schmidt
/// with one reorthogonalization pass).
#[derive(Debug, Clone)]
pub struct OrthoSpan {
    dim: usize,
    basis: Vec<Vec<Complex64>>,
}

impl OrthoSpan {
    pub fn new(dim: usize) -> Self {
        OrthoSpan {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Complex64>] {
        &self.basis
    }

    /// Component of `v` orthogonal to the span, and the coefficients removed.
    fn residual(&self, v: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut w = v.to_vec();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.basis.len()];
        for _ in 0..2 {
            for (b, c) in self.basis.iter().zip(coeffs.iter_mut()) {
                let r = inner(&w, b);
                *c += r;
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= r * bi;
                }
            }
        }
        (w, coeffs)
    }

    /// Adds the normalized residual of `v` if its norm exceeds `tol`.
    pub fn try_extend(&mut self, v: &[Complex64], tol: f64) -> Option<Vec<Complex64>> {
        debug_assert_eq!(v.len(), self.dim);
        let (w, _) = self.residual(v);
        let norm = vec_norm(&w);
        if norm <= tol {
            return None;
        }
        let q: Vec<Complex64> = w.into_iter().map(|z| z / norm).collect();
        self.basis.push(q.clone());
        Some(q)
    }

    /// Appends a vector already known to be unit length and orthogonal.
    pub(crate) fn push_unchecked(&mut self, q: Vec<Complex64>) {
        self.basis.push(q);
    }
}

/// Orthonormalizes `vectors` in order.
///
/// Returns the orthonormal vectors `v_j` and the upper triangular matrix `B`
/// with `v_j = Σ_i B[i][j] · vectors[i]`.
pub fn gram_schmidt(vectors: &[Vec<Complex64>]) -> Result<(Vec<Vec<Complex64>>, CMatrix)> {
    let k = vectors.len();
    let Some(dim) = vectors.first().map(Vec::len) else {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    };
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::domain("vectors of different lengths"));
    }
    let mut span = OrthoSpan::new(dim);
    let mut b = CMatrix::zeros(k, k);
    for (j, u) in vectors.iter().enumerate() {
        let (w, coeffs) = span.residual(u);
        let norm = vec_norm(&w);
        if norm <= GS_PIVOT_TOL {
            return Err(Error::domain(format!(
                "vector {j} is linearly dependent on its predecessors (pivot {norm:.3e})"
            )));
        }
        // w = u_j − Σ_i coeffs_i v_i, and each v_i = Σ_l B[l][i] u_l
        let mut col = vec![Complex64::new(0.0, 0.0); k];
        col[j] = Complex64::new(1.0, 0.0);
        for (i, c) in coeffs.iter().enumerate() {
            for (l, cl) in col.iter_mut().enumerate().take(i + 1) {
                *cl -= c * b[(l, i)];
            }
        }
        for (l, cl) in col.into_iter().enumerate() {
            b[(l, j)] = cl / norm;
        }
        span.push_unchecked(w.into_iter().map(|z| z / norm).collect());
    }
    Ok((span.basis, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_matrix, sample_rng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn check(vectors: &[Vec<Complex64>]) -> (Vec<Vec<Complex64>>, CMatrix) {
        let (q, b) = gram_schmidt(vectors).unwrap();
        for (i, qi) in q.iter().enumerate() {
            for (j, qj) in q.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(qi, qj) - c(want)).norm() < 1e-10);
            }
        }
        for (j, qj) in q.iter().enumerate() {
            let mut rec = vec![c(0.0); qj.len()];
            for (i, u) in vectors.iter().enumerate() {
                if i > j {
                    assert_eq!(b[(i, j)], c(0.0));
                }
                for (r, x) in rec.iter_mut().zip(u) {
                    *r += b[(i, j)] * x;
                }
            }
            let err: f64 = rec
                .iter()
                .zip(qj)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10);
        }
        (q, b)
    }

    #[test]
    fn orthonormal_input_gives_identity() {
        let e = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]];
        let (_, b) = check(&e);
        assert!(b.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn two_by_two_example() {
        let v = vec![vec![c(1.0), c(0.0)], vec![c(1.0), c(1.0)]];
        let (q, b) = check(&v);
        assert!((q[1][0]).norm() < 1e-15 && (q[1][1] - c(1.0)).norm() < 1e-15);
        assert_eq!(b[(1, 0)], c(0.0));
    }

    #[test]
    fn random_independent_set() {
        let mut rng = sample_rng(41, 0);
        let g = gaussian_matrix(&mut rng, 6, 4);
        let vs: Vec<_> = (0..4).map(|j| g.column(j)).collect();
        let (_, b) = check(&vs);
        assert!(b.inverse().is_ok());
    }

    #[test]
    fn dependent_set_rejected() {
        let v = vec![vec![c(1.0), c(1.0)], vec![c(2.0), c(2.0)]];
        assert!(matches!(gram_schmidt(&v), Err(Error::Domain(_))));
    }
}
