//! The four compression methods and block tiling.
//!
//! | method | keeps | stored elements |
//! |---|---|---|
//! | 1 symmetric | k eigenpairs of B, strict upper triangle of X | k(n+1) + n(n−1)/2 |
//! | 2 skew | k eigen-terms of C, inclusive lower triangle of X | k(n+1) + n(n+1)/2 |
//! | 3 joint | k eigenpairs of B, k eigen-terms of C | 2k(n+1) |
//! | 4 svd | k singular triples of X | k(2n+1) |
//!
//! B and C are the symmetric and skew-symmetric parts of the block X.

mod block;
mod tiling;

pub use block::{
    decode, encode, reconstruct, BlockAnalysis, EncodedBlock, SkewTerms, SvdTerms, SymTerms,
};
pub(crate) use block::triangle_len as block_triangle_len;
pub use tiling::{analyze, compress, decompress, tile, untile, BlockGrid, BlockLayout, ImageAnalysis, TiledImage};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imageio::quantize_scalar;
use crate::matrix::DenseMatrix;
use crate::spectral::check_rank;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MethodId {
    /// Method #1: symmetric part plus the strict upper triangle.
    Symmetric,
    /// Method #2: skew-symmetric part plus the inclusive lower triangle.
    Skew,
    /// Method #3: truncated symmetric and skew-symmetric parts.
    Joint,
    /// Method #4: truncated SVD baseline.
    Svd,
}

impl MethodId {
    pub const ALL: [MethodId; 4] = [MethodId::Symmetric, MethodId::Skew, MethodId::Joint, MethodId::Svd];

    /// Serialization code, 1..=4.
    pub fn code(self) -> u8 {
        match self {
            MethodId::Symmetric => 1,
            MethodId::Skew => 2,
            MethodId::Joint => 3,
            MethodId::Svd => 4,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(usize::from(code).checked_sub(1)?).copied()
    }

    pub(crate) fn uses_sym(self) -> bool {
        matches!(self, MethodId::Symmetric | MethodId::Joint)
    }

    pub(crate) fn uses_skew(self) -> bool {
        matches!(self, MethodId::Skew | MethodId::Joint)
    }

    pub(crate) fn uses_svd(self) -> bool {
        self == MethodId::Svd
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<u8>()
            .ok()
            .and_then(MethodId::from_code)
            .ok_or_else(|| Error::Argument(format!("unknown method {s:?}, expected 1, 2, 3 or 4")))
    }
}

/// Number of stored scalars and pixels for one n×n block at rank k.
pub fn element_count(method: MethodId, n: usize, k: usize) -> Result<usize> {
    check_rank(k, n)?;
    Ok(match method {
        MethodId::Symmetric => k * (n + 1) + n * (n - 1) / 2,
        MethodId::Skew => k * (n + 1) + n * (n + 1) / 2,
        MethodId::Joint => 2 * k * (n + 1),
        MethodId::Svd => k * (2 * n + 1),
    })
}

/// Clamps every entry to [0, 255] and rounds half away from zero.
pub fn quantize(x: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(x.n_rows(), x.n_cols(), |i, j| quantize_scalar(x[(i, j)]))
}
