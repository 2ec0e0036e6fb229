use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

use super::require_structure;

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 30;

/// Converged once the off-diagonal Frobenius norm is at most this fraction
/// of the input's Frobenius norm.
const OFF_DIAGONAL_TOLERANCE: f64 = 1e-12;

/// Eigenvalues and orthonormal eigenvectors of a real symmetric matrix,
/// ordered by descending |λ|.
#[derive(Clone, Debug, PartialEq)]
pub struct SymSpectrum {
    order: usize,
    eigenvalues: Vec<f64>,
    // eigenvector i occupies vectors[i*order..(i+1)*order]
    vectors: Vec<f64>,
}

impl SymSpectrum {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.order..(i + 1) * self.order]
    }

    /// Eigenvectors as the columns of an n×n matrix.
    pub fn eigenvector_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.order, self.order, |r, c| self.vectors[c * self.order + r])
    }

    /// Σ_{i>k} λᵢ², the squared Frobenius error of the rank-k truncation.
    pub fn tail_energy(&self, k: usize) -> f64 {
        self.eigenvalues.iter().skip(k).map(|l| l * l).sum()
    }
}

/// Cyclic Jacobi eigendecomposition.
///
/// Each sweep visits every off-diagonal pair once, in round-robin
/// (tournament) order: a round is a set of disjoint pairs whose rotations
/// commute, so they are applied together as one row pass and one column pass.
///
/// Ordering: descending |λ|, then descending signed λ, then the diagonal
/// position the eigenvalue settled in. Each eigenvector is signed so that
/// its largest-magnitude component (first on ties) is positive.
pub fn eig_symmetric(b: &DenseMatrix) -> Result<SymSpectrum> {
    eig_symmetric_to(b, OFF_DIAGONAL_TOLERANCE)
}

/// [`eig_symmetric`] with a caller-chosen relative off-diagonal target.
pub(crate) fn eig_symmetric_to(b: &DenseMatrix, tolerance: f64) -> Result<SymSpectrum> {
    let n = require_structure(b, 1.0, "eig_symmetric")?;
    let mut a = b.entries().to_vec();
    let mut vt = DenseMatrix::identity(n).into_entries();

    let norm = b.frobenius_norm();
    let target = tolerance * norm;
    // skipped entries total at most target/2, so the target stays reachable
    let skip_below = 0.5 * target / n.max(1) as f64;
    let schedule = round_robin(n);
    let mut rotations = Vec::with_capacity(n / 2);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Convergence { sweeps, residual: off });
        }
        for round in &schedule {
            rotations.clear();
            rotations.extend(round.iter().filter_map(|&(p, q)| {
                let apq = a[p * n + q];
                (apq.abs() > skip_below).then(|| Rotation::annihilating(&a, n, p, q))
            }));
            if !rotations.is_empty() {
                apply_round(&mut a, &mut vt, n, &rotations);
            }
        }
        sweeps += 1;
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| descending_magnitude(diag[i], diag[j]).then(i.cmp(&j)));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        eigenvalues.push(diag[i]);
        let mut v = vt[i * n..(i + 1) * n].to_vec();
        fix_sign(&mut v);
        vectors.extend_from_slice(&v);
    }
    Ok(SymSpectrum { order: n, eigenvalues, vectors })
}

#[derive(Clone, Copy, Debug)]
struct Rotation {
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    new_pp: f64,
    new_qq: f64,
}

impl Rotation {
    /// Plane rotation J with JᵀAJ zeroing `a[p][q]`.
    fn annihilating(a: &[f64], n: usize, p: usize, q: usize) -> Self {
        let apq = a[p * n + q];
        let app = a[p * n + p];
        let aqq = a[q * n + q];
        let theta = (aqq - app) / (2.0 * apq);
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
            if theta < 0.0 {
                -t
            } else {
                t
            }
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        Rotation { p, q, c, s: t * c, new_pp: app - t * apq, new_qq: aqq + t * apq }
    }

    #[inline]
    fn mix(&self, xp: f64, xq: f64) -> (f64, f64) {
        (self.c * xp - self.s * xq, self.s * xp + self.c * xq)
    }
}

/// A ← JᵀAJ and Vᵀ ← JᵀVᵀ for a set of rotations on disjoint index pairs.
fn apply_round(a: &mut [f64], vt: &mut [f64], n: usize, rotations: &[Rotation]) {
    for r in rotations {
        rotate_rows(a, n, r);
        rotate_rows(vt, n, r);
    }
    for row in a.chunks_exact_mut(n) {
        for r in rotations {
            let (xp, xq) = r.mix(row[r.p], row[r.q]);
            row[r.p] = xp;
            row[r.q] = xq;
        }
    }
    for r in rotations {
        a[r.p * n + r.p] = r.new_pp;
        a[r.q * n + r.q] = r.new_qq;
        a[r.p * n + r.q] = 0.0;
        a[r.q * n + r.p] = 0.0;
    }
}

fn rotate_rows(m: &mut [f64], n: usize, r: &Rotation) {
    let (head, tail) = m.split_at_mut(r.q * n);
    let rp = &mut head[r.p * n..(r.p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        (*x, *y) = r.mix(*x, *y);
    }
}

/// Circle-method tournament over `n` indices (a phantom index pads odd `n`):
/// `n - 1` (or `n`) rounds of disjoint pairs covering every pair exactly once.
fn round_robin(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n < 2 {
        return Vec::new();
    }
    let m = n + n % 2;
    let mut seats: Vec<usize> = (0..m).collect();
    let mut rounds = Vec::with_capacity(m - 1);
    for _ in 0..m - 1 {
        let round = (0..m / 2)
            .map(|i| (seats[i], seats[m - 1 - i]))
            .filter(|&(x, y)| x < n && y < n)
            .map(|(x, y)| (x.min(y), x.max(y)))
            .collect();
        rounds.push(round);
        seats[1..].rotate_right(1);
    }
    rounds
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            acc += a[i * n + j] * a[i * n + j];
        }
    }
    (2.0 * acc).sqrt()
}

pub(crate) fn descending_magnitude(x: f64, y: f64) -> Ordering {
    y.abs().total_cmp(&x.abs()).then(y.total_cmp(&x))
}

pub(crate) fn fix_sign(v: &mut [f64]) {
    let mut best: f64 = 0.0;
    for &x in v.iter() {
        if x.abs() > best.abs() {
            best = x;
        }
    }
    if best < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
