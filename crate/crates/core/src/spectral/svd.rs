use crate::error::{Error, Result};
use crate::matrix::{dot, norm, DenseMatrix};

use super::complement_vector;
use super::jacobi::{fix_sign, MAX_SWEEPS};

/// Pairs of columns count as orthogonal once their cosine drops below this.
const ORTHOGONALITY_TOLERANCE: f64 = 1e-15;

/// `X = U diag(σ) Vᵀ` with σ descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SvdFactors {
    order: usize,
    singular_values: Vec<f64>,
    // vector i occupies [i*order..(i+1)*order]
    left: Vec<f64>,
    right: Vec<f64>,
}

impl SvdFactors {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn left_vector(&self, i: usize) -> &[f64] {
        &self.left[i * self.order..(i + 1) * self.order]
    }

    pub fn right_vector(&self, i: usize) -> &[f64] {
        &self.right[i * self.order..(i + 1) * self.order]
    }

    pub fn left_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.order, self.order, |r, c| self.left[c * self.order + r])
    }

    pub fn right_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.order, self.order, |r, c| self.right[c * self.order + r])
    }

    /// Σ_{i>k} σᵢ².
    pub fn tail_energy(&self, k: usize) -> f64 {
        self.singular_values.iter().skip(k).map(|s| s * s).sum()
    }
}

/// One-sided (Hestenes) Jacobi SVD of a square matrix: plane rotations
/// applied on the right orthogonalize the columns of X·V, whose norms are
/// then the singular values.
pub fn svd(x: &DenseMatrix) -> Result<SvdFactors> {
    let n = x.require_square("svd")?;
    // columns of X·V, stored as rows
    let mut cols = x.transpose().into_entries();
    let mut vt = DenseMatrix::identity(n).into_entries();

    // columns below this norm are rounding noise of a rank-deficient input
    let negligible_sq = ((n as f64) * f64::EPSILON * x.frobenius_norm()).powi(2);
    let mut sweeps = 0;
    loop {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let (gi, gj) = pair_rows(&mut cols, n, i, j);
                let alpha = dot(gi, gi);
                let beta = dot(gj, gj);
                let gamma = dot(gi, gj);
                let scale = (alpha * beta).sqrt();
                if alpha.min(beta) <= negligible_sq || gamma.abs() <= ORTHOGONALITY_TOLERANCE * scale {
                    continue;
                }
                worst = worst.max(gamma.abs() / scale);
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_rows(gi, gj, c, s);
                let (vi, vj) = pair_rows(&mut vt, n, i, j);
                rotate_rows(vi, vj, c, s);
            }
        }
        if worst == 0.0 {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence { sweeps, residual: worst });
        }
    }

    let norms: Vec<f64> = (0..n).map(|i| norm(&cols[i * n..(i + 1) * n])).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

    let negligible = negligible_sq.sqrt();
    let mut singular_values = Vec::with_capacity(n);
    let mut left: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n * n);
    let mut deficient = Vec::new();
    for (slot, &i) in order.iter().enumerate() {
        let sigma = norms[i];
        let mut v = vt[i * n..(i + 1) * n].to_vec();
        if sigma > negligible {
            let mut u: Vec<f64> = cols[i * n..(i + 1) * n].iter().map(|g| g / sigma).collect();
            // keep σ u vᵀ unchanged while fixing the sign of u
            let before = u.clone();
            fix_sign(&mut u);
            if u != before {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            left.push(u);
        } else {
            deficient.push(slot);
            left.push(Vec::new());
        }
        singular_values.push(sigma);
        right.extend_from_slice(&v);
    }
    complete_basis(&mut left, &deficient, n);

    Ok(SvdFactors { order: n, singular_values, left: left.concat(), right })
}

fn pair_rows(m: &mut [f64], n: usize, i: usize, j: usize) -> (&mut [f64], &mut [f64]) {
    debug_assert!(i < j);
    let (head, tail) = m.split_at_mut(j * n);
    (&mut head[i * n..(i + 1) * n], &mut tail[..n])
}

fn rotate_rows(a: &mut [f64], b: &mut [f64], c: f64, s: f64) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xa, yb) = (*x, *y);
        *x = c * xa - s * yb;
        *y = s * xa + c * yb;
    }
}

/// Fills the left vectors of (numerically) zero singular values with unit
/// vectors orthogonal to all others.
fn complete_basis(left: &mut [Vec<f64>], deficient: &[usize], n: usize) {
    for &slot in deficient {
        let filled: Vec<&[f64]> = left.iter().filter(|u| !u.is_empty()).map(Vec::as_slice).collect();
        left[slot] = complement_vector(&filled, n);
    }
}
