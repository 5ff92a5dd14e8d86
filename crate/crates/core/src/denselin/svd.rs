use num_complex::Complex64;
use serde::Serialize;

use super::eigen::{hermitian_eigen, jacobi_rotation};
use super::gram::OrthoSpan;
use super::matrix::CMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;
/// Columns count as orthogonal once `|a_p* a_q| <= tol · ‖a_p‖ ‖a_q‖`.
const ORTHOGONALITY_TOL: f64 = 1e-15;
/// Largest dimension accepted by [`svd`].
pub const MAX_SVD_DIM: usize = 400;

/// Singular values `ν_1 ≥ … ≥ ν_n ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SingularValues(Vec<f64>);

impl SingularValues {
    /// Sorts descending; rejects negative or non-finite entries.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain(
                "singular values must be finite and nonnegative",
            ));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(SingularValues(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }
}

/// `A = U · diag(S) · V*`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub s: SingularValues,
    pub v: CMatrix,
}

/// `P = T·W` with `P` positive semidefinite and `W` unitary.
#[derive(Debug, Clone)]
pub struct Polar {
    pub p: CMatrix,
    pub w: CMatrix,
}

fn check_square(a: &CMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::domain(format!(
            "svd needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if n > MAX_SVD_DIM {
        return Err(Error::resource(format!(
            "svd limited to n <= {MAX_SVD_DIM}"
        )));
    }
    a.check_finite()?;
    Ok(n)
}

/// `[x, y] ← [x, y]·G` on a pair of column vectors.
fn rotate_pair(cols: &mut [Vec<Complex64>], p: usize, q: usize, g: &[[Complex64; 2]; 2]) {
    let (head, tail) = cols.split_at_mut(q);
    for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * g[0][0] + b * g[1][0];
        *y = a * g[0][1] + b * g[1][1];
    }
}

/// Rotates pairs of columns until all are mutually orthogonal, applying the
/// same rotations to `v` when given. Columns are stored contiguously.
fn orthogonalize_columns(
    cols: &mut [Vec<Complex64>],
    mut v: Option<&mut [Vec<Complex64>]>,
) -> Result<()> {
    let n = cols.len();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta) = (0.0, 0.0);
                let mut gamma = Complex64::new(0.0, 0.0);
                for (x, y) in cols[p].iter().zip(&cols[q]) {
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                if gamma.norm() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt()
                    || gamma.norm() <= f64::MIN_POSITIVE
                {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                rotate_pair(cols, p, q, &g);
                if let Some(v) = v.as_deref_mut() {
                    rotate_pair(v, p, q, &g);
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::numeric(format!(
        "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
    )))
}

fn column_norms(cols: &[Vec<Complex64>]) -> Vec<f64> {
    cols.iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

/// One-sided Jacobi SVD of a square matrix.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    let n = check_square(a)?;
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n).map(|j| CMatrix::identity(n).column(j)).collect();
    orthogonalize_columns(&mut w, Some(&mut v))?;

    let norms = column_norms(&w);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let top = norms.iter().copied().fold(0.0, f64::max);
    let cutoff = (top * 1e-14).max(f64::MIN_POSITIVE);

    let mut span = OrthoSpan::new(n);
    let mut u_cols = vec![Vec::new(); n];
    let mut deficient = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        if norms[j] > cutoff {
            let col: Vec<Complex64> = w[j].iter().map(|z| z / norms[j]).collect();
            span.push_unchecked(col.clone());
            u_cols[slot] = col;
        } else {
            deficient.push(slot);
        }
    }
    // complete U on the numerical null space with standard basis vectors
    let mut basis = 0;
    for slot in deficient {
        loop {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[basis] = Complex64::new(1.0, 0.0);
            basis += 1;
            if let Some(col) = span.try_extend(&e, 1e-6) {
                u_cols[slot] = col;
                break;
            }
        }
    }
    let u = CMatrix::from_columns(n, &u_cols);
    let v = CMatrix::from_fn(n, n, |i, j| v[order[j]][i]);
    let s = SingularValues(order.iter().map(|&j| norms[j]).collect());
    Ok(Svd { u, s, v })
}

/// Singular values only; the same iteration as [`svd`] without the factors.
pub fn singular_values(a: &CMatrix) -> Result<SingularValues> {
    let n = check_square(a)?;
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    orthogonalize_columns(&mut w, None)?;
    SingularValues::new(column_norms(&w))
}

/// Polar decomposition `P = T·W` via the SVD `T = UΣV*`: `P = UΣU*`, `W = VU*`.
pub fn polar(t: &CMatrix) -> Result<Polar> {
    let Svd { u, s, v } = svd(t)?;
    let p = (&(&u * &CMatrix::diag_real(s.values())) * &u.adjoint()).hermitian_part();
    let w = &v * &u.adjoint();
    Ok(Polar { p, w })
}

/// Operator norm: the largest singular value.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    if a.is_square() {
        return Ok(singular_values(a)?.largest());
    }
    let gram = if a.rows() >= a.cols() {
        &a.adjoint() * a
    } else {
        a * &a.adjoint()
    };
    let e = hermitian_eigen(&gram)?;
    Ok(e.values[0].max(0.0).sqrt())
}
