//! Symmetric/skew-symmetric splitting and the spectral factorizations the
//! codecs truncate.
//!
//! Every routine here is a pure function of its input. Sweep orders and
//! tie-breaking are fixed, so identical input bits give identical output
//! bits.

mod jacobi;
mod skew;
mod svd;

pub use jacobi::{eig_symmetric, SymSpectrum, MAX_SWEEPS};
pub use skew::{eig_skew, SkewPair, SkewSpectrum};
pub use svd::{svd, SvdFactors};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Relative tolerance for accepting an input as symmetric or skew-symmetric.
pub const STRUCTURE_TOLERANCE: f64 = 1e-12;

/// `(X + Xᵀ)/2`, computed once per unordered pair so the result is exactly
/// symmetric.
pub fn symmetric_part(x: &DenseMatrix) -> Result<DenseMatrix> {
    let n = x.require_square("symmetric_part")?;
    let mut b = DenseMatrix::zeros(n, n);
    for i in 0..n {
        b[(i, i)] = x[(i, i)];
        for j in i + 1..n {
            let v = 0.5 * (x[(i, j)] + x[(j, i)]);
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    Ok(b)
}

/// `(X − Xᵀ)/2`, exactly skew-symmetric with a zero diagonal.
///
/// Together with [`symmetric_part`] this reproduces `X` bit for bit whenever
/// `x[i][j] ± x[j][i]` is representable (always the case for pixel data);
/// otherwise the sum is within one rounding of `X`.
pub fn skew_symmetric_part(x: &DenseMatrix) -> Result<DenseMatrix> {
    let n = x.require_square("skew_symmetric_part")?;
    let mut c = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (x[(i, j)] - x[(j, i)]);
            c[(i, j)] = v;
            c[(j, i)] = -v;
        }
    }
    Ok(c)
}

/// Σ_{i≤k} λᵢ uᵢ uᵢᵀ.
pub fn truncate_sym(s: &SymSpectrum, k: usize) -> Result<DenseMatrix> {
    let n = s.order();
    check_rank(k, n)?;
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..k {
        let u = s.eigenvector(i);
        out.add_outer(s.eigenvalues()[i], u, u);
    }
    symmetrize(&mut out);
    Ok(out)
}

/// Real part of the k-term complex partial sum of a skew spectrum.
///
/// `k` counts complex terms: pair `j` supplies terms `2j` and `2j+1` (0-based).
/// Full pairs contribute `μ(q pᵀ − p qᵀ)`; when `k` is odd the last pair is
/// split and contributes half of that. Terms past the last pair belong to the
/// zero eigenvalue of odd-order matrices and contribute nothing.
pub fn truncate_skew(s: &SkewSpectrum, k: usize) -> Result<DenseMatrix> {
    let n = s.order();
    check_rank(k, n)?;
    let mut out = DenseMatrix::zeros(n, n);
    for (j, pair) in s.pairs().iter().enumerate() {
        let terms = k.saturating_sub(2 * j).min(2);
        if terms == 0 {
            break;
        }
        let weight = pair.mu * terms as f64 / 2.0;
        add_skew_pair(&mut out, weight, &pair.p, &pair.q);
    }
    Ok(out)
}

/// Σ_{i≤k} σᵢ uᵢ vᵢᵀ.
pub fn truncate_svd(f: &SvdFactors, k: usize) -> Result<DenseMatrix> {
    let n = f.order();
    check_rank(k, n)?;
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..k {
        out.add_outer(f.singular_values()[i], f.left_vector(i), f.right_vector(i));
    }
    Ok(out)
}

/// Adds `weight (q pᵀ − p qᵀ)` keeping the accumulator exactly skew.
pub(crate) fn add_skew_pair(out: &mut DenseMatrix, weight: f64, p: &[f64], q: &[f64]) {
    let n = out.n_rows();
    for i in 0..n {
        for j in i + 1..n {
            let v = weight * (q[i] * p[j] - p[i] * q[j]);
            out[(i, j)] += v;
            out[(j, i)] -= v;
        }
    }
}

/// The unit vector orthogonal to the orthonormal `basis` obtained from the
/// standard basis vector with the largest residual (at least 1/√n).
pub(crate) fn complement_vector(basis: &[&[f64]], n: usize) -> Vec<f64> {
    let residual = |i: usize| {
        let mut w = vec![0.0; n];
        w[i] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let d = crate::matrix::dot(&w, b);
                w.iter_mut().zip(b.iter()).for_each(|(x, y)| *x -= d * y);
            }
        }
        w
    };
    let best = (0..n)
        .map(|i| (i, crate::matrix::norm(&residual(i))))
        .fold((0, -1.0), |acc, (i, len)| if len > acc.1 { (i, len) } else { acc });
    let mut w = residual(best.0);
    let len = crate::matrix::norm(&w);
    w.iter_mut().for_each(|x| *x /= len);
    w
}

pub(crate) fn check_rank(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidRank { k, n });
    }
    Ok(())
}

fn symmetrize(m: &mut DenseMatrix) {
    let n = m.n_rows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn asymmetry(x: &DenseMatrix, sign: f64) -> f64 {
    let n = x.n_rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in i..n {
            let d = x[(i, j)] - sign * x[(j, i)];
            acc += if i == j { d * d } else { 2.0 * d * d };
        }
    }
    acc.sqrt()
}

pub(crate) fn require_structure(x: &DenseMatrix, sign: f64, what: &str) -> Result<usize> {
    let n = x.require_square(what)?;
    let defect = asymmetry(x, sign);
    if defect > STRUCTURE_TOLERANCE * x.frobenius_norm() {
        let kind = if sign > 0.0 { "symmetric" } else { "skew-symmetric" };
        return Err(Error::Contract(format!("{what} requires a {kind} matrix (defect {defect:e})")));
    }
    Ok(n)
}
