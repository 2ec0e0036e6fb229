//! `NMC1` container: a fixed 24-byte header, the encoded blocks in row-major
//! order, and a CRC-32 (IEEE) over everything after the magic.
//!
//! All integers and scalars are little-endian. See FORMAT.md at the
//! repository root for the byte-level layout.

use crate::codec::{BlockGrid, BlockLayout, EncodedBlock, MethodId, SkewTerms, SvdTerms, SymTerms};
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"NMC1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 24;
pub const CRC_LEN: usize = 4;

const FLAG_BLOCKED: u8 = 0b1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScalarWidth {
    #[default]
    F32,
    F64,
}

impl ScalarWidth {
    pub fn bytes(self) -> usize {
        match self {
            ScalarWidth::F32 => 4,
            ScalarWidth::F64 => 8,
        }
    }

    fn from_byte(b: u8) -> Option<Self> {
        match b {
            4 => Some(ScalarWidth::F32),
            8 => Some(ScalarWidth::F64),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContainerHeader {
    pub version: u8,
    pub method: MethodId,
    pub scalar_width: ScalarWidth,
    pub blocked: bool,
    pub width: u32,
    pub height: u32,
    /// 0 for whole-image mode.
    pub block_size: u32,
    pub k: u32,
}

impl ContainerHeader {
    pub fn layout(&self) -> Result<BlockLayout> {
        BlockLayout::new(self.width as usize, self.height as usize, self.block_size as usize)
    }

    /// Total container length implied by the header, if it is addressable.
    pub fn total_len(&self) -> Option<usize> {
        let layout = self.layout().ok()?;
        let n = layout.order() as u128;
        let k = self.k as u128;
        // counts as in codec::block, widened so hostile headers cannot overflow
        let sym = k * (n + 1);
        let skew = k + (k + k % 2) * n;
        let scalars = match self.method {
            MethodId::Symmetric => sym,
            MethodId::Skew => skew,
            MethodId::Joint => sym + skew,
            MethodId::Svd => k * (2 * n + 1),
        };
        let triangle = match self.method {
            MethodId::Symmetric => n * (n - 1) / 2,
            MethodId::Skew => n * (n + 1) / 2,
            MethodId::Joint | MethodId::Svd => 0,
        };
        let per_block = scalars * self.scalar_width.bytes() as u128 + triangle;
        let total = layout.block_count() as u128 * per_block + (HEADER_LEN + CRC_LEN) as u128;
        usize::try_from(total).ok()
    }
}

/// Parses and validates the 24-byte header without touching the payload.
pub fn inspect(bytes: &[u8]) -> Result<ContainerHeader> {
    if bytes.len() < MAGIC.len() {
        return Err(Error::Truncated { needed: HEADER_LEN, available: bytes.len() });
    }
    if bytes[..4] != MAGIC {
        return Err(Error::BadMagic { found: bytes[..4].to_vec() });
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated { needed: HEADER_LEN, available: bytes.len() });
    }
    let version = bytes[4];
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let method = MethodId::from_code(bytes[5]).ok_or_else(|| Error::format(5, format!("unknown method {}", bytes[5])))?;
    let scalar_width = ScalarWidth::from_byte(bytes[6])
        .ok_or_else(|| Error::format(6, format!("scalar width {} is neither 4 nor 8", bytes[6])))?;
    let flags = bytes[7];
    if flags & !FLAG_BLOCKED != 0 {
        return Err(Error::format(7, format!("unknown flag bits {flags:#04x}")));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let header = ContainerHeader {
        version,
        method,
        scalar_width,
        blocked: flags & FLAG_BLOCKED != 0,
        width: word(8),
        height: word(12),
        block_size: word(16),
        k: word(20),
    };
    if header.blocked != (header.block_size != 0) {
        return Err(Error::format(7, "blocked flag disagrees with block size"));
    }
    let layout = header.layout().map_err(|e| Error::format(8, e.to_string()))?;
    if header.k == 0 || header.k as usize > layout.order() {
        return Err(Error::format(20, format!("k = {} outside 1..={}", header.k, layout.order())));
    }
    Ok(header)
}

struct Writer {
    out: Vec<u8>,
    width: ScalarWidth,
}

impl Writer {
    fn scalars(&mut self, values: &[f64]) {
        for &v in values {
            match self.width {
                ScalarWidth::F32 => self.out.extend_from_slice(&(v as f32).to_le_bytes()),
                ScalarWidth::F64 => self.out.extend_from_slice(&v.to_le_bytes()),
            }
        }
    }
}

fn to_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Argument(format!("{what} {v} does not fit the container header")))
}

/// Serializes a grid. Identical grids give identical bytes.
pub fn serialize(grid: &BlockGrid, scalar_width: ScalarWidth) -> Result<Vec<u8>> {
    let layout = grid.layout;
    if grid.blocks.len() != layout.block_count() {
        return Err(Error::Argument(format!("{} blocks for a grid of {}", grid.blocks.len(), layout.block_count())));
    }
    let n = layout.order();
    for b in &grid.blocks {
        if (b.method, b.n, b.k) != (grid.method, n, grid.k) {
            return Err(Error::Argument("block disagrees with its grid".into()));
        }
        b.validate()?;
    }
    let header = ContainerHeader {
        version: VERSION,
        method: grid.method,
        scalar_width,
        blocked: layout.is_blocked(),
        width: to_u32(layout.width, "width")?,
        height: to_u32(layout.height, "height")?,
        block_size: to_u32(layout.block_size, "block size")?,
        k: to_u32(grid.k, "k")?,
    };
    let total = header.total_len().ok_or_else(|| Error::Argument("container too large".into()))?;
    let mut w = Writer { out: Vec::with_capacity(total), width: scalar_width };
    w.out.extend_from_slice(&MAGIC);
    w.out.extend_from_slice(&[VERSION, grid.method.code(), scalar_width.bytes() as u8]);
    w.out.push(if header.blocked { FLAG_BLOCKED } else { 0 });
    for v in [header.width, header.height, header.block_size, header.k] {
        w.out.extend_from_slice(&v.to_le_bytes());
    }
    for b in &grid.blocks {
        if let Some(s) = &b.sym {
            w.scalars(&s.eigenvalues);
            w.scalars(&s.vectors);
        }
        if let Some(s) = &b.skew {
            w.scalars(&s.weights);
            w.scalars(&s.vectors);
        }
        if let Some(s) = &b.svd {
            w.scalars(&s.singular_values);
            w.scalars(&s.left);
            w.scalars(&s.right);
        }
        if let Some(t) = &b.triangle {
            w.out.extend_from_slice(t);
        }
    }
    let crc = crc32fast::hash(&w.out[MAGIC.len()..]);
    w.out.extend_from_slice(&crc.to_le_bytes());
    debug_assert_eq!(w.out.len(), total);
    Ok(w.out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    width: ScalarWidth,
}

impl Reader<'_> {
    fn scalars(&mut self, count: usize) -> Vec<f64> {
        let size = self.width.bytes();
        let chunk = &self.bytes[self.pos..self.pos + count * size];
        self.pos += count * size;
        match self.width {
            ScalarWidth::F32 => chunk
                .chunks_exact(4)
                .map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap())))
                .collect(),
            ScalarWidth::F64 => chunk.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect(),
        }
    }

    fn raw(&mut self, count: usize) -> Vec<u8> {
        let out = self.bytes[self.pos..self.pos + count].to_vec();
        self.pos += count;
        out
    }
}

/// Parses a container, checking length and CRC before decoding the payload.
pub fn deserialize(bytes: &[u8]) -> Result<BlockGrid> {
    let header = inspect(bytes)?;
    let total = header.total_len().ok_or_else(|| Error::format(8, "declared dimensions are too large"))?;
    if bytes.len() < total {
        return Err(Error::Truncated { needed: total, available: bytes.len() });
    }
    if bytes.len() > total {
        return Err(Error::format(total, format!("{} trailing bytes", bytes.len() - total)));
    }
    let body_end = total - CRC_LEN;
    let stored = u32::from_le_bytes(bytes[body_end..].try_into().unwrap());
    let computed = crc32fast::hash(&bytes[MAGIC.len()..body_end]);
    if stored != computed {
        return Err(Error::CrcMismatch { stored, computed });
    }

    let layout = header.layout()?;
    let n = layout.order();
    let k = header.k as usize;
    let method = header.method;
    let mut r = Reader { bytes: &bytes[..body_end], pos: HEADER_LEN, width: header.scalar_width };
    let mut blocks = Vec::with_capacity(layout.block_count());
    for _ in 0..layout.block_count() {
        let at = r.pos;
        let sym = method.uses_sym().then(|| SymTerms { eigenvalues: r.scalars(k), vectors: r.scalars(k * n) });
        let skew = method.uses_skew().then(|| SkewTerms {
            weights: r.scalars(k),
            vectors: r.scalars((k + k % 2) * n),
        });
        let svd = method.uses_svd().then(|| SvdTerms {
            singular_values: r.scalars(k),
            left: r.scalars(k * n),
            right: r.scalars(k * n),
        });
        let tri = crate::codec::block_triangle_len(method, n);
        let triangle = (tri > 0).then(|| r.raw(tri));
        let block = EncodedBlock { method, n, k, sym, skew, svd, triangle };
        block.validate().map_err(|e| match e {
            Error::Format { reason, .. } => Error::format(at, reason),
            other => other,
        })?;
        blocks.push(block);
    }
    debug_assert_eq!(r.pos, body_end);
    Ok(BlockGrid { layout, method, k, blocks })
}
