//! Reconstruction quality and compression ratios.

use crate::codec::{element_count, MethodId};
use crate::error::{Error, Result};
use crate::imageio::ImageMatrix;

/// Peak value of 8-bit samples.
pub const PEAK: f64 = 255.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    /// `f64::INFINITY` for identical images.
    pub psnr_db: f64,
    /// Pixels over stored elements, counting every scalar as one element.
    pub cr_elements: f64,
    /// Original image bytes over container bytes.
    pub cr_bytes: f64,
}

impl MetricsReport {
    pub fn new(original: &ImageMatrix, decoded: &ImageMatrix, cr_elements: f64, cr_bytes: f64) -> Result<Self> {
        let mse = mse(original, decoded)?;
        Ok(MetricsReport { mse, psnr_db: psnr_from_mse(mse), cr_elements, cr_bytes })
    }
}

/// Mean squared pixel difference.
pub fn mse(a: &ImageMatrix, b: &ImageMatrix) -> Result<f64> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(Error::Dimension(format!(
            "cannot compare a {}x{} image with a {}x{} image",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let sum: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
        .sum();
    Ok(sum / a.pixels().len() as f64)
}

/// 10·log₁₀(255²/MSE) in decibels.
pub fn psnr(a: &ImageMatrix, b: &ImageMatrix) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

/// n² / element_count(method, n, k).
pub fn cr_elements(method: MethodId, n: usize, k: usize) -> Result<f64> {
    Ok((n * n) as f64 / element_count(method, n, k)? as f64)
}

pub fn cr_bytes(original_bytes: usize, compressed_bytes: usize) -> Result<f64> {
    if original_bytes == 0 || compressed_bytes == 0 {
        return Err(Error::Argument("byte sizes must be positive".into()));
    }
    Ok(original_bytes as f64 / compressed_bytes as f64)
}

/// Four decimals, or `inf`.
pub fn format_db(value: f64) -> String {
    if value.is_infinite() {
        "inf".to_string()
    } else {
        format!("{value:.4}")
    }
}
