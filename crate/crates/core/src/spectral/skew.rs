use crate::error::Result;
use crate::matrix::{dot, norm, DenseMatrix};

use super::jacobi::eig_symmetric_to;
use super::{complement_vector, require_structure};

/// Off-diagonal target for the Gram matrix, whose entries scale with ‖C‖²:
/// eigenvector error there feeds straight into the pairing.
const GRAM_TOLERANCE: f64 = 1e-15;

/// One conjugate eigenvalue pair ±iμ of a real skew-symmetric matrix in real
/// form: the pair contributes `μ (q pᵀ − p qᵀ)` and its complex eigenvectors
/// are `(p ∓ i q)/√2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewPair {
    pub mu: f64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

/// Paired real spectral form of a skew-symmetric matrix:
/// `C = Σⱼ μⱼ (qⱼ pⱼᵀ − pⱼ qⱼᵀ)` with `⌊n/2⌋` pairs sorted by descending μ.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewSpectrum {
    order: usize,
    pairs: Vec<SkewPair>,
}

impl SkewSpectrum {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn pairs(&self) -> &[SkewPair] {
        &self.pairs
    }

    /// |λ| for all n complex eigenvalues in term order (μ₁, μ₁, μ₂, μ₂, …),
    /// padded with the zero eigenvalue for odd n.
    pub fn magnitudes(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.pairs.iter().flat_map(|p| [p.mu, p.mu]).collect();
        out.resize(self.order, 0.0);
        out
    }

    /// Squared Frobenius error ‖C − C̃_k‖² of the k-term real truncation.
    /// A split pair leaves half its weight behind.
    pub fn residual_energy(&self, k: usize) -> f64 {
        self.pairs
            .iter()
            .enumerate()
            .map(|(j, pair)| {
                let used = k.saturating_sub(2 * j).min(2) as f64;
                let left = pair.mu * (1.0 - used / 2.0);
                2.0 * left * left
            })
            .sum()
    }
}

/// Decomposes a skew-symmetric matrix through the symmetric eigenproblem of
/// `CᵀC = −C²`, whose eigenvalues are the μⱼ² (each twice).
///
/// Eigenvectors of `CᵀC` are taken in descending order. Each one not already
/// spanned by accepted pairs becomes `p`, its partner is `q = Cp/‖Cp‖`, and
/// both join the accepted basis. Null directions (μ ≈ 0) are paired with the
/// next unspanned eigenvector instead.
pub fn eig_skew(c: &DenseMatrix) -> Result<SkewSpectrum> {
    let n = require_structure(c, -1.0, "eig_skew")?;
    let gram = gram(c);
    let spectrum = eig_symmetric_to(&gram, GRAM_TOLERANCE)?;

    let zero_mu = (n.max(1) as f64) * f64::EPSILON * c.frobenius_norm();
    let n_pairs = n / 2;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(2 * n_pairs);
    let mut pairs = Vec::with_capacity(n_pairs);

    let mut idx = 0;
    while pairs.len() < n_pairs && idx < n {
        let candidate = spectrum.eigenvector(idx);
        idx += 1;
        let Some(p) = complete(candidate, &basis) else {
            continue;
        };
        let cp = apply(c, &p);
        basis.push(p.clone());
        // In exact arithmetic Cp is orthogonal to every accepted pair; when
        // it is not, p was a noisy null direction.
        let partner = (norm(&cp) > zero_mu).then(|| complete(&cp, &basis)).flatten();
        let (mu, q) = match partner {
            Some(q) => (dot(&q, &cp).max(0.0), q),
            None => {
                let q = (idx..n)
                    .find_map(|i| complete(spectrum.eigenvector(i), &basis))
                    .unwrap_or_else(|| {
                        let spanned: Vec<&[f64]> = basis.iter().map(Vec::as_slice).collect();
                        complement_vector(&spanned, n)
                    });
                (0.0, q)
            }
        };
        basis.push(q.clone());
        pairs.push(SkewPair { mu, p, q });
    }
    debug_assert_eq!(pairs.len(), n_pairs);

    pairs.sort_by(|a, b| b.mu.total_cmp(&a.mu));
    Ok(SkewSpectrum { order: n, pairs })
}

/// CᵀC, exactly symmetric.
fn gram(c: &DenseMatrix) -> DenseMatrix {
    let n = c.n_rows();
    let ct = c.transpose();
    let mut g = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = dot(ct.row(i), ct.row(j));
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

fn apply(c: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    (0..c.n_rows()).map(|i| dot(c.row(i), v)).collect()
}

/// Removes the components of `v` along the orthonormal `basis` (two passes)
/// and normalizes. Returns `None` when less than half of `v` survives.
fn complete(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let start = norm(v);
    if start == 0.0 {
        return None;
    }
    let mut w: Vec<f64> = v.iter().map(|x| x / start).collect();
    for _ in 0..2 {
        for b in basis {
            let d = dot(&w, b);
            w.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
    }
    let left = norm(&w);
    if left < 0.5 {
        return None;
    }
    w.iter_mut().for_each(|x| *x /= left);
    Some(w)
}
