use serde::{Deserialize, Serialize};

use super::{element_count, quantize, MethodId};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::spectral::{
    add_skew_pair, check_rank, eig_skew, eig_symmetric, skew_symmetric_part, svd, symmetric_part, SkewSpectrum,
    SvdFactors, SymSpectrum,
};

/// k eigenvalues of the symmetric part and their k eigenvectors
/// (vector i at `vectors[i*n..(i+1)*n]`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymTerms {
    pub eigenvalues: Vec<f64>,
    pub vectors: Vec<f64>,
}

/// k complex eigen-terms of the skew part in real form.
///
/// Term `2j` is `(μⱼ, pⱼ)` and term `2j+1` is `(μⱼ, qⱼ)`. When k is odd the
/// last pair is split and its partner vector `q` follows as one extra vector,
/// so `vectors` holds `k + (k mod 2)` vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewTerms {
    pub weights: Vec<f64>,
    pub vectors: Vec<f64>,
}

/// k singular triples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvdTerms {
    pub singular_values: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodedBlock {
    pub method: MethodId,
    pub n: usize,
    pub k: usize,
    pub sym: Option<SymTerms>,
    pub skew: Option<SkewTerms>,
    pub svd: Option<SvdTerms>,
    /// Raw pixels: strict upper triangle (method 1) or inclusive lower
    /// triangle (method 2), row-major.
    pub triangle: Option<Vec<u8>>,
}

impl EncodedBlock {
    /// Number of real scalars in the spectral sections.
    pub fn scalar_count(&self) -> usize {
        scalar_count(self.method, self.n, self.k)
    }

    pub fn triangle_len(&self) -> usize {
        triangle_len(self.method, self.n)
    }

    /// Checks section presence and lengths against method, n and k.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::format(0, what));
        check_rank(self.k, self.n)?;
        let (n, k) = (self.n, self.k);
        let m = self.method;
        if self.sym.is_some() != m.uses_sym()
            || self.skew.is_some() != m.uses_skew()
            || self.svd.is_some() != m.uses_svd()
            || self.triangle.is_some() != (triangle_len(m, n) > 0)
        {
            return bad(format!("sections present do not match method {m}"));
        }
        if let Some(s) = &self.sym {
            if s.eigenvalues.len() != k || s.vectors.len() != k * n {
                return bad("symmetric section has the wrong length".into());
            }
        }
        if let Some(s) = &self.skew {
            if s.weights.len() != k || s.vectors.len() != skew_vector_count(k) * n {
                return bad("skew section has the wrong length".into());
            }
            for j in 0..k / 2 {
                if s.weights[2 * j] != s.weights[2 * j + 1] {
                    return bad(format!("skew terms {} and {} of one pair carry different weights", 2 * j, 2 * j + 1));
                }
            }
        }
        if let Some(s) = &self.svd {
            if s.singular_values.len() != k || s.left.len() != k * n || s.right.len() != k * n {
                return bad("svd section has the wrong length".into());
            }
        }
        if let Some(t) = &self.triangle {
            if t.len() != triangle_len(m, n) {
                return bad("triangle has the wrong length".into());
            }
        }
        Ok(())
    }
}

pub(crate) fn skew_vector_count(k: usize) -> usize {
    k + k % 2
}

pub(crate) fn triangle_len(method: MethodId, n: usize) -> usize {
    match method {
        MethodId::Symmetric => n * (n - 1) / 2,
        MethodId::Skew => n * (n + 1) / 2,
        MethodId::Joint | MethodId::Svd => 0,
    }
}

/// Scalars actually serialized. Matches [`element_count`] minus the
/// triangle, except that an odd k in a skew section needs one more vector.
pub(crate) fn scalar_count(method: MethodId, n: usize, k: usize) -> usize {
    let sym = k * (n + 1);
    let skew = k + skew_vector_count(k) * n;
    match method {
        MethodId::Symmetric => sym,
        MethodId::Skew => skew,
        MethodId::Joint => sym + skew,
        MethodId::Svd => k * (2 * n + 1),
    }
}

/// Spectra of one square pixel block, computed once and truncated at any k.
#[derive(Clone, Debug)]
pub struct BlockAnalysis {
    pixels: DenseMatrix,
    sym: Option<SymSpectrum>,
    skew: Option<SkewSpectrum>,
    svd: Option<SvdFactors>,
}

impl BlockAnalysis {
    /// Decomposes `x` as needed by `methods`. `x` must be square with integer
    /// entries in [0, 255].
    pub fn new(x: DenseMatrix, methods: &[MethodId]) -> Result<Self> {
        x.require_square("encoding")?;
        if let Some(v) = x.entries().iter().find(|v| !(0.0..=255.0).contains(*v) || v.fract() != 0.0) {
            return Err(Error::Argument(format!("block entries must be 8-bit pixel values, found {v}")));
        }
        let wants = |f: fn(MethodId) -> bool| methods.iter().any(|&m| f(m));
        let (sym, (skew, svd)) = rayon::join(
            || wants(MethodId::uses_sym).then(|| eig_symmetric(&symmetric_part(&x)?)).transpose(),
            || {
                rayon::join(
                    || wants(MethodId::uses_skew).then(|| eig_skew(&skew_symmetric_part(&x)?)).transpose(),
                    || wants(MethodId::uses_svd).then(|| svd(&x)).transpose(),
                )
            },
        );
        let (sym, skew, svd) = (sym?, skew?, svd?);
        Ok(BlockAnalysis { pixels: x, sym, skew, svd })
    }

    pub fn order(&self) -> usize {
        self.pixels.n_rows()
    }

    pub fn pixels(&self) -> &DenseMatrix {
        &self.pixels
    }

    pub fn encode(&self, method: MethodId, k: usize) -> Result<EncodedBlock> {
        let n = self.order();
        check_rank(k, n)?;
        let missing = || Error::Argument(format!("block was not analyzed for method {method}"));
        let sym = if method.uses_sym() { Some(sym_terms(self.sym.as_ref().ok_or_else(missing)?, k)) } else { None };
        let skew = if method.uses_skew() { Some(skew_terms(self.skew.as_ref().ok_or_else(missing)?, k)) } else { None };
        let svd = if method.uses_svd() { Some(svd_terms(self.svd.as_ref().ok_or_else(missing)?, k)) } else { None };
        let x = &self.pixels;
        let triangle = match method {
            MethodId::Symmetric => Some((0..n).flat_map(|i| (i + 1..n).map(move |j| x[(i, j)] as u8)).collect()),
            MethodId::Skew => Some((0..n).flat_map(|i| (0..=i).map(move |j| x[(i, j)] as u8)).collect()),
            _ => None,
        };
        let block = EncodedBlock { method, n, k, sym, skew, svd, triangle };
        debug_assert!(block.validate().is_ok());
        debug_assert_eq!(
            block.scalar_count() + block.triangle_len() - usize::from(method.uses_skew() && k % 2 == 1) * n,
            element_count(method, n, k).unwrap()
        );
        Ok(block)
    }
}

fn sym_terms(s: &SymSpectrum, k: usize) -> SymTerms {
    SymTerms {
        eigenvalues: s.eigenvalues()[..k].to_vec(),
        vectors: (0..k).flat_map(|i| s.eigenvector(i).iter().copied()).collect(),
    }
}

fn skew_terms(s: &SkewSpectrum, k: usize) -> SkewTerms {
    let n = s.order();
    let mut weights = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(skew_vector_count(k) * n);
    for t in 0..skew_vector_count(k) {
        match s.pairs().get(t / 2) {
            Some(pair) => {
                if t < k {
                    weights.push(pair.mu);
                }
                vectors.extend_from_slice(if t % 2 == 0 { &pair.p } else { &pair.q });
            }
            // the zero eigenvalue of an odd-order block
            None => {
                if t < k {
                    weights.push(0.0);
                }
                vectors.extend(std::iter::repeat_n(0.0, n));
            }
        }
    }
    SkewTerms { weights, vectors }
}

fn svd_terms(f: &SvdFactors, k: usize) -> SvdTerms {
    SvdTerms {
        singular_values: f.singular_values()[..k].to_vec(),
        left: (0..k).flat_map(|i| f.left_vector(i).iter().copied()).collect(),
        right: (0..k).flat_map(|i| f.right_vector(i).iter().copied()).collect(),
    }
}

/// Encodes one square pixel block.
pub fn encode(x: &DenseMatrix, method: MethodId, k: usize) -> Result<EncodedBlock> {
    BlockAnalysis::new(x.clone(), &[method])?.encode(method, k)
}

/// Real-valued reconstruction before pixel quantization.
pub fn reconstruct(e: &EncodedBlock) -> Result<DenseMatrix> {
    e.validate()?;
    let n = e.n;
    match e.method {
        MethodId::Symmetric => {
            let b = sym_sum(e.sym.as_ref().unwrap(), n);
            let upper = e.triangle.as_ref().unwrap();
            let mut x = DenseMatrix::zeros(n, n);
            let mut next = upper.iter();
            for i in 0..n {
                x[(i, i)] = b[(i, i)];
                for j in i + 1..n {
                    x[(i, j)] = f64::from(*next.next().unwrap());
                }
            }
            for i in 0..n {
                for j in 0..i {
                    x[(i, j)] = 2.0 * b[(i, j)] - x[(j, i)];
                }
            }
            Ok(x)
        }
        MethodId::Skew => {
            let c = skew_sum(e.skew.as_ref().unwrap(), n, e.k);
            let lower = e.triangle.as_ref().unwrap();
            let mut x = DenseMatrix::zeros(n, n);
            let mut next = lower.iter();
            for i in 0..n {
                for j in 0..=i {
                    x[(i, j)] = f64::from(*next.next().unwrap());
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    x[(i, j)] = 2.0 * c[(i, j)] + x[(j, i)];
                }
            }
            Ok(x)
        }
        MethodId::Joint => {
            let b = sym_sum(e.sym.as_ref().unwrap(), n);
            let c = skew_sum(e.skew.as_ref().unwrap(), n, e.k);
            b.add(&c)
        }
        MethodId::Svd => {
            let s = e.svd.as_ref().unwrap();
            let mut x = DenseMatrix::zeros(n, n);
            for (i, &sigma) in s.singular_values.iter().enumerate() {
                x.add_outer(sigma, &s.left[i * n..(i + 1) * n], &s.right[i * n..(i + 1) * n]);
            }
            Ok(x)
        }
    }
}

/// Decodes one block to pixel values.
pub fn decode(e: &EncodedBlock) -> Result<DenseMatrix> {
    Ok(quantize(&reconstruct(e)?))
}

fn sym_sum(s: &SymTerms, n: usize) -> DenseMatrix {
    let mut b = DenseMatrix::zeros(n, n);
    for (i, &l) in s.eigenvalues.iter().enumerate() {
        let u = &s.vectors[i * n..(i + 1) * n];
        b.add_outer(l, u, u);
    }
    b
}

fn skew_sum(s: &SkewTerms, n: usize, k: usize) -> DenseMatrix {
    let mut c = DenseMatrix::zeros(n, n);
    let vector = |t: usize| &s.vectors[t * n..(t + 1) * n];
    for j in 0..k.div_ceil(2) {
        let used = (k - 2 * j).min(2);
        // a split pair's partner is the extra vector stored after term k-1
        let q = if used == 2 { vector(2 * j + 1) } else { vector(k) };
        add_skew_pair(&mut c, s.weights[2 * j] * used as f64 / 2.0, vector(2 * j), q);
    }
    c
}
