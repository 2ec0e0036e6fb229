use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::block::{decode, BlockAnalysis, EncodedBlock};
use super::MethodId;
use crate::error::{Error, Result};
use crate::imageio::ImageMatrix;
use crate::matrix::DenseMatrix;
use crate::spectral::check_rank;

/// How an image maps onto square blocks. `block_size == 0` means the whole
/// (square) image is one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLayout {
    pub width: usize,
    pub height: usize,
    pub block_size: usize,
}

impl BlockLayout {
    pub fn new(width: usize, height: usize, block_size: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!("image dimensions must be positive, got {width}x{height}")));
        }
        match block_size {
            0 if width != height => Err(Error::Dimension(format!(
                "whole-image mode needs a square image, got {width}x{height}; pick a block size"
            ))),
            1 => Err(Error::Argument("block size 1 is degenerate; use 0 (whole image) or at least 2".into())),
            _ => Ok(BlockLayout { width, height, block_size }),
        }
    }

    pub fn is_blocked(&self) -> bool {
        self.block_size != 0
    }

    /// Block order n.
    pub fn order(&self) -> usize {
        if self.is_blocked() {
            self.block_size
        } else {
            self.width
        }
    }

    /// (rows, columns) of blocks.
    pub fn grid(&self) -> (usize, usize) {
        let n = self.order();
        (self.height.div_ceil(n), self.width.div_ceil(n))
    }

    pub fn block_count(&self) -> usize {
        let (r, c) = self.grid();
        r * c
    }

    /// (height, width) after padding to whole blocks.
    pub fn padded(&self) -> (usize, usize) {
        let (r, c) = self.grid();
        (r * self.order(), c * self.order())
    }
}

/// An image cut into pixel blocks, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TiledImage {
    pub layout: BlockLayout,
    pub blocks: Vec<DenseMatrix>,
}

/// Cuts `image` into square blocks, replicating edge pixels into the padding.
pub fn tile(image: &ImageMatrix, block_size: usize) -> Result<TiledImage> {
    let layout = BlockLayout::new(image.width(), image.height(), block_size)?;
    let n = layout.order();
    let (rows, cols) = layout.grid();
    let (h, w) = (image.height(), image.width());
    let mut blocks = Vec::with_capacity(rows * cols);
    for br in 0..rows {
        for bc in 0..cols {
            blocks.push(DenseMatrix::from_fn(n, n, |i, j| {
                f64::from(image.get((br * n + i).min(h - 1), (bc * n + j).min(w - 1)))
            }));
        }
    }
    Ok(TiledImage { layout, blocks })
}

/// Reassembles blocks and crops the padding. Block entries are quantized.
pub fn untile(tiled: &TiledImage) -> Result<ImageMatrix> {
    let layout = &tiled.layout;
    let n = layout.order();
    let (_, cols) = layout.grid();
    if tiled.blocks.len() != layout.block_count() {
        return Err(Error::Dimension(format!(
            "{} blocks for a grid of {}",
            tiled.blocks.len(),
            layout.block_count()
        )));
    }
    if let Some(b) = tiled.blocks.iter().find(|b| b.n_rows() != n || b.n_cols() != n) {
        return Err(Error::Dimension(format!("block of {}x{} in a grid of order {n}", b.n_rows(), b.n_cols())));
    }
    let mut pixels = Vec::with_capacity(layout.width * layout.height);
    for row in 0..layout.height {
        for col in 0..layout.width {
            let block = &tiled.blocks[(row / n) * cols + col / n];
            pixels.push(block[(row % n, col % n)].clamp(0.0, 255.0).round() as u8);
        }
    }
    ImageMatrix::new(layout.width, layout.height, pixels)
}

/// A compressed image: every block encoded with one method and one k.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockGrid {
    pub layout: BlockLayout,
    pub method: MethodId,
    pub k: usize,
    pub blocks: Vec<EncodedBlock>,
}

/// Per-block spectra of a whole image.
#[derive(Clone, Debug)]
pub struct ImageAnalysis {
    pub layout: BlockLayout,
    pub blocks: Vec<BlockAnalysis>,
}

impl ImageAnalysis {
    pub fn encode(&self, method: MethodId, k: usize) -> Result<BlockGrid> {
        check_rank(k, self.layout.order())?;
        let blocks = self
            .blocks
            .par_iter()
            .map(|b| b.encode(method, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockGrid { layout: self.layout, method, k, blocks })
    }
}

/// Tiles the image and decomposes every block for the given methods, in
/// parallel. Results keep row-major block order.
pub fn analyze(image: &ImageMatrix, block_size: usize, methods: &[MethodId]) -> Result<ImageAnalysis> {
    let tiled = tile(image, block_size)?;
    let blocks = tiled
        .blocks
        .into_par_iter()
        .map(|b| BlockAnalysis::new(b, methods))
        .collect::<Result<Vec<_>>>()?;
    Ok(ImageAnalysis { layout: tiled.layout, blocks })
}

pub fn compress(image: &ImageMatrix, method: MethodId, k: usize, block_size: usize) -> Result<BlockGrid> {
    let layout = BlockLayout::new(image.width(), image.height(), block_size)?;
    check_rank(k, layout.order())?;
    analyze(image, block_size, &[method])?.encode(method, k)
}

pub fn decompress(grid: &BlockGrid) -> Result<ImageMatrix> {
    if grid.blocks.len() != grid.layout.block_count() {
        return Err(Error::format(0, format!("{} blocks for a grid of {}", grid.blocks.len(), grid.layout.block_count())));
    }
    let n = grid.layout.order();
    if let Some(b) = grid.blocks.iter().find(|b| b.n != n || b.k != grid.k || b.method != grid.method) {
        return Err(Error::format(0, format!("block (method {}, n {}, k {}) disagrees with its grid", b.method, b.n, b.k)));
    }
    let blocks = grid.blocks.par_iter().map(decode).collect::<Result<Vec<_>>>()?;
    untile(&TiledImage { layout: grid.layout, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image(w: usize, h: usize) -> ImageMatrix {
        ImageMatrix::new(w, h, (0..w * h).map(|i| (i * 37 % 251) as u8).collect()).unwrap()
    }

    #[test]
    fn layout_arithmetic() {
        let whole = BlockLayout::new(512, 512, 0).unwrap();
        assert_eq!((whole.grid(), whole.padded()), ((1, 1), (512, 512)));
        let single = BlockLayout::new(512, 512, 512).unwrap();
        assert_eq!((single.grid(), single.padded()), ((1, 1), (512, 512)));
        let hundred = BlockLayout::new(512, 512, 100).unwrap();
        assert_eq!((hundred.grid(), hundred.padded()), ((6, 6), (600, 600)));
        let odd = BlockLayout::new(13, 7, 8).unwrap();
        assert_eq!(odd.grid(), (1, 2));
    }

    #[test]
    fn layout_rejections() {
        assert!(matches!(BlockLayout::new(4, 4, 1), Err(Error::Argument(_))));
        assert!(matches!(BlockLayout::new(13, 7, 0), Err(Error::Dimension(_))));
        assert!(BlockLayout::new(0, 7, 2).is_err());
    }

    #[test]
    fn tile_pads_by_edge_replication() {
        let img = image(3, 2);
        let t = tile(&img, 2).unwrap();
        assert_eq!(t.blocks.len(), 2);
        let right = &t.blocks[1];
        assert_eq!(right[(0, 1)], f64::from(img.get(0, 2)));
        assert_eq!(right[(1, 1)], f64::from(img.get(1, 2)));
        assert_eq!(untile(&t).unwrap(), img);
    }

    #[test]
    fn thirteen_by_seven_round_trip() {
        let img = image(13, 7);
        let t = tile(&img, 8).unwrap();
        assert_eq!(t.blocks.len(), 2);
        assert_eq!(untile(&t).unwrap().pixels(), img.pixels());
    }

    #[test]
    fn full_rank_blocked_compression_is_lossless() {
        let img = image(13, 7);
        for method in MethodId::ALL {
            let grid = compress(&img, method, 4, 4).unwrap();
            assert_eq!(grid.blocks.len(), 8);
            assert_eq!(decompress(&grid).unwrap(), img, "method {method}");
        }
    }

    #[test]
    fn whole_image_requires_square() {
        assert!(compress(&image(13, 7), MethodId::Joint, 2, 0).is_err());
        assert!(compress(&image(8, 8), MethodId::Joint, 9, 0).is_err());
    }
}
