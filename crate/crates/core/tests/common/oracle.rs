//! Brute-force reference computations. Nothing here calls into the crate's
//! solvers: eigenvalues come from inertia counting (Sylvester's law) with
//! bisection, eigenvectors from inverse iteration with Gaussian elimination.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

pub type Rows = Vec<Vec<f64>>;

pub fn rows_of(m: &nmc::DenseMatrix) -> Rows {
    (0..m.n_rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Number of eigenvalues of symmetric `a` strictly below `shift`, from the
/// signs of the pivots of an unpivoted LDLᵀ factorization of `a - shift·I`.
fn count_below(a: &Rows, shift: f64) -> usize {
    let n = a.len();
    let mut m: Rows = a.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= shift;
    }
    let mut negatives = 0;
    for k in 0..n {
        let mut pivot = m[k][k];
        if pivot == 0.0 {
            pivot = -1e-300;
        }
        if pivot < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let f = m[i][k] / pivot;
            for j in k + 1..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    negatives
}

/// All eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &Rows) -> Vec<f64> {
    let n = a.len();
    let bound = a
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|j| {
            // smallest x with count_below(x) > j
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if count_below(a, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn solve_real(mut m: Rows, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| m[x][k].abs().total_cmp(&m[y][k].abs())).unwrap();
        m.swap(k, p);
        b.swap(k, p);
        if m[k][k] == 0.0 {
            m[k][k] = 1e-300;
        }
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / m[i][i];
    }
    x
}

fn normalize(v: &mut [f64]) {
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= s);
}

/// Unit eigenvector of symmetric `a` for the (simple) eigenvalue `lambda`.
pub fn symmetric_eigenvector(a: &Rows, lambda: f64) -> Vec<f64> {
    let n = a.len();
    let mut shifted = a.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= lambda + 1e-13 * (1.0 + lambda.abs());
    }
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
    normalize(&mut v);
    for _ in 0..4 {
        v = solve_real(shifted.clone(), v);
        normalize(&mut v);
    }
    v
}

/// Eigenpairs sorted by descending |λ|, ties by descending λ.
pub fn symmetric_eigenpairs(a: &Rows) -> Vec<(f64, Vec<f64>)> {
    let mut vals = symmetric_eigenvalues(a);
    vals.sort_by(|x, y| y.abs().total_cmp(&x.abs()).then(y.total_cmp(x)));
    vals.into_iter().map(|l| (l, symmetric_eigenvector(a, l))).collect()
}

pub fn partial_sum_sym(a: &Rows, k: usize) -> Rows {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for (l, u) in symmetric_eigenpairs(a).into_iter().take(k) {
        for i in 0..n {
            for j in 0..n {
                out[i][j] += l * u[i] * u[j];
            }
        }
    }
    out
}

pub fn transpose_times_self(x: &Rows) -> Rows {
    let n = x.len();
    let m = x[0].len();
    (0..m)
        .map(|i| (0..m).map(|j| (0..n).map(|r| x[r][i] * x[r][j]).sum()).collect())
        .collect()
}

/// Singular values of `x` as square roots of the eigenvalues of XᵀX,
/// descending.
pub fn singular_values(x: &Rows) -> Vec<f64> {
    let mut s: Vec<f64> = symmetric_eigenvalues(&transpose_times_self(x))
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Σ_{i≤k} σᵢ uᵢ vᵢᵀ computed as Σ X vᵢ vᵢᵀ with vᵢ from XᵀX.
pub fn partial_sum_svd(x: &Rows, k: usize) -> Rows {
    let n = x.len();
    let m = x[0].len();
    let mut out = vec![vec![0.0; m]; n];
    for (_, v) in symmetric_eigenpairs(&transpose_times_self(x)).into_iter().take(k) {
        let xv: Vec<f64> = (0..n).map(|i| (0..m).map(|j| x[i][j] * v[j]).sum()).collect();
        for i in 0..n {
            for j in 0..m {
                out[i][j] += xv[i] * v[j];
            }
        }
    }
    out
}

/// Real 2n×2n symmetric embedding of the Hermitian matrix H = iC.
/// H = A + iB with A = 0, B = C embeds as [[A, -B], [B, A]].
fn hermitian_embedding(c: &Rows) -> Rows {
    let n = c.len();
    let mut e = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            e[i][n + j] = -c[i][j];
            e[n + i][j] = c[i][j];
        }
    }
    e
}

/// Eigenvalues of H = iC (real, ±μ pairs), descending by magnitude then by
/// sign. The embedding doubles every eigenvalue; duplicates are dropped.
pub fn hermitian_eigenvalues_of_skew(c: &Rows) -> Vec<f64> {
    let doubled = symmetric_eigenvalues(&hermitian_embedding(c));
    let mut vals: Vec<f64> = doubled.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    vals.sort_by(|x, y| y.abs().total_cmp(&x.abs()).then(y.total_cmp(x)));
    vals
}

fn solve_complex(mut m: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| m[x][k].norm().total_cmp(&m[y][k].norm())).unwrap();
        m.swap(k, p);
        b.swap(k, p);
        if m[k][k].norm() == 0.0 {
            m[k][k] = Complex64::new(1e-300, 0.0);
        }
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let t = m[k][j];
                m[i][j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / m[i][i];
    }
    x
}

/// Real part of the k-term complex spectral partial sum of skew `c`,
/// terms ordered by descending eigenvalue magnitude.
pub fn partial_sum_skew(c: &Rows, k: usize) -> Rows {
    let n = c.len();
    let i_unit = Complex64::new(0.0, 1.0);
    let h: Vec<Vec<Complex64>> = c.iter().map(|r| r.iter().map(|&v| i_unit * v).collect()).collect();
    let mut out = vec![vec![0.0; n]; n];
    for &mu in hermitian_eigenvalues_of_skew(c).iter().take(k) {
        let mut shifted = h.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= Complex64::new(mu + 1e-13 * (1.0 + mu.abs()), 0.0);
        }
        let mut u: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.3 - 0.05 * i as f64)).collect();
        for _ in 0..4 {
            u = solve_complex(shifted.clone(), u);
            let s = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            u.iter_mut().for_each(|z| *z /= s);
        }
        // H u = mu u  =>  C u = -i mu u
        let lambda = -i_unit * mu;
        for i in 0..n {
            for j in 0..n {
                out[i][j] += (lambda * u[i] * u[j].conj()).re;
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &Rows, b: &Rows) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn rel_frobenius_rows(a: &Rows, b: &Rows) -> f64 {
    let diff: f64 = a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).powi(2)).sum();
    let norm: f64 = b.iter().flatten().map(|x| x * x).sum();
    diff.sqrt() / norm.sqrt().max(1.0)
}
