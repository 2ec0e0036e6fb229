//! Grayscale image compression by spectral truncation of the symmetric and
//! skew-symmetric parts of square pixel blocks, with a truncated-SVD
//! baseline, quality metrics, and a checksummed container format.

pub mod codec;
pub mod container;
pub mod error;
pub mod imageio;
pub mod matrix;
pub mod metrics;
pub mod spectral;

pub use codec::{BlockGrid, EncodedBlock, MethodId};
pub use error::{Error, Result};
pub use imageio::ImageMatrix;
pub use matrix::DenseMatrix;
