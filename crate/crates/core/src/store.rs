//! Fixed-stride columnar store for per-source records.
//!
//! One file holds the records of a contiguous source range `[lo, hi)`: a
//! 32-byte header, then one block per source in ascending order. A block is
//! three columns over all n vertices: distances (1 byte each, 0xFF meaning
//! unreachable), path counts (2, 4, or 8 bytes little-endian), dependencies
//! (f64 bits little-endian). Fixed widths make every source addressable by
//! stride, every block rewritable in place, and the distance column its own
//! contiguous read for the skip fast path.
//!
//! Header layout, little-endian throughout:
//!
//! ```text
//! offset  size  field
//!      0     4  magic "SBC1"
//!      4     2  version (currently 1)
//!      6     1  path-count width in bytes (2, 4, or 8)
//!      7     1  reserved, zero
//!      8     8  n (vertex capacity)
//!     16     8  lo
//!     24     8  hi (exclusive)
//! ```

use crate::brandes::{Distance, SourceData, UNREACHABLE};
use crate::graph::VertexId;
use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::Path;
use thiserror::Error;

pub const HEADER_LEN: u64 = 32;
const MAGIC: [u8; 4] = *b"SBC1";
const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("store i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a record store (bad magic)")]
    BadMagic,
    #[error("unsupported store version {0}")]
    BadVersion(u16),
    #[error("unsupported path-count width {0} (want 2, 4, or 8)")]
    BadWidth(u8),
    #[error("source range [{lo}, {hi}) over {n} vertices is invalid")]
    BadRange { lo: u64, hi: u64, n: u64 },
    #[error("file holds {len} bytes, layout needs {want}")]
    Truncated { len: u64, want: u64 },
    #[error("got {got} blocks for a range of {want}")]
    BlockCount { got: u64, want: u64 },
    #[error("source {0} outside stored range")]
    SourceOutOfRange(VertexId),
    #[error("record covers {got} vertices, store holds {want}")]
    WrongLength { got: usize, want: usize },
    #[error("distance {value} at source {source_id}, vertex {vertex} does not fit one byte")]
    DistanceOverflow {
        source_id: VertexId,
        vertex: VertexId,
        value: Distance,
    },
    #[error("path count {value} at source {source_id}, vertex {vertex} does not fit {width} bytes")]
    SigmaOverflow {
        source_id: VertexId,
        vertex: VertexId,
        value: u64,
        width: u8,
    },
}

/// Running tally of traffic through one store.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IoCounters {
    pub reads: u64,
    pub writes: u64,
    pub bytes_read: u64,
    pub bytes_written: u64,
}

impl IoCounters {
    pub fn merge(&mut self, other: &IoCounters) {
        self.reads += other.reads;
        self.writes += other.writes;
        self.bytes_read += other.bytes_read;
        self.bytes_written += other.bytes_written;
    }
}

#[derive(Debug)]
pub struct BdStore {
    file: File,
    n: usize,
    lo: VertexId,
    hi: VertexId,
    width: u8,
    pub io: IoCounters,
    buf: Vec<u8>,
}

/// Largest finite distance a 1-byte cell can hold.
pub const MAX_STORED_DISTANCE: Distance = 254;

/// Smallest of the supported widths that fits `max_sigma`.
pub fn width_for(max_sigma: u64) -> u8 {
    if max_sigma <= u16::MAX as u64 {
        2
    } else if max_sigma <= u32::MAX as u64 {
        4
    } else {
        8
    }
}

impl BdStore {
    /// Creates the file and streams `blocks` into it, one per source in
    /// ascending order. The stream must yield exactly `hi - lo` records.
    pub fn create<I>(
        path: &Path,
        n: usize,
        lo: VertexId,
        hi: VertexId,
        width: u8,
        blocks: I,
    ) -> Result<BdStore, StoreError>
    where
        I: IntoIterator<Item = SourceData>,
    {
        if !matches!(width, 2 | 4 | 8) {
            return Err(StoreError::BadWidth(width));
        }
        if lo >= hi || hi as usize > n {
            return Err(StoreError::BadRange {
                lo: lo as u64,
                hi: hi as u64,
                n: n as u64,
            });
        }
        let file = OpenOptions::new()
            .read(true)
            .write(true)
            .create(true)
            .truncate(true)
            .open(path)?;
        let mut store = BdStore {
            file,
            n,
            lo,
            hi,
            width,
            io: IoCounters::default(),
            buf: Vec::new(),
        };

        let mut header = [0u8; HEADER_LEN as usize];
        header[0..4].copy_from_slice(&MAGIC);
        header[4..6].copy_from_slice(&VERSION.to_le_bytes());
        header[6] = width;
        header[8..16].copy_from_slice(&(n as u64).to_le_bytes());
        header[16..24].copy_from_slice(&(lo as u64).to_le_bytes());
        header[24..32].copy_from_slice(&(hi as u64).to_le_bytes());
        store.file.write_all(&header)?;
        store.io.writes += 1;
        store.io.bytes_written += HEADER_LEN;

        let want = (hi - lo) as u64;
        let mut next = lo;
        let mut blocks = blocks.into_iter();
        for bd in blocks.by_ref() {
            if next >= hi {
                return Err(StoreError::BlockCount {
                    got: want + 1 + blocks.count() as u64,
                    want,
                });
            }
            store.write_source(next, &bd)?;
            next += 1;
        }
        if next != hi {
            return Err(StoreError::BlockCount {
                got: (next - lo) as u64,
                want,
            });
        }
        Ok(store)
    }

    pub fn open(path: &Path) -> Result<BdStore, StoreError> {
        let mut file = OpenOptions::new().read(true).write(true).open(path)?;
        let len = file.metadata()?.len();
        if len < HEADER_LEN {
            return Err(StoreError::Truncated {
                len,
                want: HEADER_LEN,
            });
        }
        let mut header = [0u8; HEADER_LEN as usize];
        file.read_exact(&mut header)?;
        if header[0..4] != MAGIC {
            return Err(StoreError::BadMagic);
        }
        let version = u16::from_le_bytes(header[4..6].try_into().unwrap());
        if version != VERSION {
            return Err(StoreError::BadVersion(version));
        }
        let width = header[6];
        if !matches!(width, 2 | 4 | 8) {
            return Err(StoreError::BadWidth(width));
        }
        let n = u64::from_le_bytes(header[8..16].try_into().unwrap());
        let lo = u64::from_le_bytes(header[16..24].try_into().unwrap());
        let hi = u64::from_le_bytes(header[24..32].try_into().unwrap());
        if lo >= hi || hi > n || hi > VertexId::MAX as u64 {
            return Err(StoreError::BadRange { lo, hi, n });
        }
        let stride = (n as usize * (9 + width as usize)) as u64;
        let want = HEADER_LEN + (hi - lo) * stride;
        let len = file.metadata()?.len();
        if len != want {
            return Err(StoreError::Truncated { len, want });
        }
        Ok(BdStore {
            file,
            n: n as usize,
            lo: lo as VertexId,
            hi: hi as VertexId,
            width,
            io: IoCounters {
                reads: 1,
                bytes_read: HEADER_LEN,
                ..IoCounters::default()
            },
            buf: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> VertexId {
        self.lo
    }

    pub fn hi(&self) -> VertexId {
        self.hi
    }

    pub fn sigma_width(&self) -> u8 {
        self.width
    }

    pub fn block_len(&self) -> usize {
        self.n * (9 + self.width as usize)
    }

    fn offset(&self, s: VertexId) -> Result<u64, StoreError> {
        if s < self.lo || s >= self.hi {
            return Err(StoreError::SourceOutOfRange(s));
        }
        Ok(HEADER_LEN + (s - self.lo) as u64 * self.block_len() as u64)
    }

    /// Reads only the n-byte distance column of one source.
    pub fn read_distances_into(
        &mut self,
        s: VertexId,
        out: &mut Vec<Distance>,
    ) -> Result<(), StoreError> {
        let off = self.offset(s)?;
        self.buf.resize(self.n, 0);
        self.file.seek(SeekFrom::Start(off))?;
        self.file.read_exact(&mut self.buf[..self.n])?;
        self.io.reads += 1;
        self.io.bytes_read += self.n as u64;
        out.clear();
        out.extend(self.buf[..self.n].iter().map(|&b| decode_distance(b)));
        Ok(())
    }

    /// Reads the σ and δ columns of one source, pairing them with distances
    /// already fetched by [`read_distances_into`]. Together the two calls
    /// cost exactly one block of input, so an affected source is never read
    /// twice.
    pub fn load_source_with_distances(
        &mut self,
        s: VertexId,
        dist: &[Distance],
    ) -> Result<SourceData, StoreError> {
        let n = self.n;
        if dist.len() != n {
            return Err(StoreError::WrongLength {
                got: dist.len(),
                want: n,
            });
        }
        let off = self.offset(s)?;
        let w = self.width as usize;
        let rest = n * (w + 8);
        self.buf.resize(rest, 0);
        self.file.seek(SeekFrom::Start(off + n as u64))?;
        self.file.read_exact(&mut self.buf[..rest])?;
        self.io.reads += 1;
        self.io.bytes_read += rest as u64;

        let mut bd = SourceData {
            dist: dist.to_vec(),
            sigma: Vec::with_capacity(n),
            delta: Vec::with_capacity(n),
        };
        for i in 0..n {
            let mut cell = [0u8; 8];
            cell[..w].copy_from_slice(&self.buf[i * w..(i + 1) * w]);
            bd.sigma.push(u64::from_le_bytes(cell));
        }
        let del = &self.buf[n * w..rest];
        for i in 0..n {
            let bits = u64::from_le_bytes(del[i * 8..(i + 1) * 8].try_into().unwrap());
            bd.delta.push(f64::from_bits(bits));
        }
        Ok(bd)
    }

    /// Reads one full block back into a record.
    pub fn load_source(&mut self, s: VertexId) -> Result<SourceData, StoreError> {
        let off = self.offset(s)?;
        let len = self.block_len();
        self.buf.resize(len, 0);
        self.file.seek(SeekFrom::Start(off))?;
        self.file.read_exact(&mut self.buf[..len])?;
        self.io.reads += 1;
        self.io.bytes_read += len as u64;

        let n = self.n;
        let w = self.width as usize;
        let mut bd = SourceData {
            dist: Vec::with_capacity(n),
            sigma: Vec::with_capacity(n),
            delta: Vec::with_capacity(n),
        };
        bd.dist
            .extend(self.buf[..n].iter().map(|&b| decode_distance(b)));
        let sig = &self.buf[n..n + n * w];
        for i in 0..n {
            let mut cell = [0u8; 8];
            cell[..w].copy_from_slice(&sig[i * w..(i + 1) * w]);
            bd.sigma.push(u64::from_le_bytes(cell));
        }
        let del = &self.buf[n + n * w..len];
        for i in 0..n {
            let bits = u64::from_le_bytes(del[i * 8..(i + 1) * 8].try_into().unwrap());
            bd.delta.push(f64::from_bits(bits));
        }
        Ok(bd)
    }

    /// Rewrites exactly one block in place.
    pub fn write_source(&mut self, s: VertexId, bd: &SourceData) -> Result<(), StoreError> {
        let off = self.offset(s)?;
        self.encode_block(s, bd)?;
        let len = self.block_len();
        self.file.seek(SeekFrom::Start(off))?;
        self.file.write_all(&self.buf[..len])?;
        self.io.writes += 1;
        self.io.bytes_written += len as u64;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), StoreError> {
        self.file.flush()?;
        Ok(())
    }

    fn encode_block(&mut self, s: VertexId, bd: &SourceData) -> Result<(), StoreError> {
        let n = self.n;
        if bd.dist.len() != n || bd.sigma.len() != n || bd.delta.len() != n {
            return Err(StoreError::WrongLength {
                got: bd.dist.len(),
                want: n,
            });
        }
        let w = self.width as usize;
        let len = self.block_len();
        self.buf.resize(len, 0);
        for (v, &d) in bd.dist.iter().enumerate() {
            self.buf[v] = if d == UNREACHABLE {
                0xFF
            } else if d <= MAX_STORED_DISTANCE {
                d as u8
            } else {
                return Err(StoreError::DistanceOverflow {
                    source_id: s,
                    vertex: v as VertexId,
                    value: d,
                });
            };
        }
        let cap = sigma_cap(self.width);
        for (v, &sig) in bd.sigma.iter().enumerate() {
            if sig > cap {
                return Err(StoreError::SigmaOverflow {
                    source_id: s,
                    vertex: v as VertexId,
                    value: sig,
                    width: self.width,
                });
            }
            let bytes = sig.to_le_bytes();
            self.buf[n + v * w..n + (v + 1) * w].copy_from_slice(&bytes[..w]);
        }
        for (v, &d) in bd.delta.iter().enumerate() {
            let at = n + n * w + v * 8;
            self.buf[at..at + 8].copy_from_slice(&d.to_bits().to_le_bytes());
        }
        Ok(())
    }
}

/// Verifies that a record fits the column widths without writing anything.
/// Lets an updated record be rejected while an event can still be rolled
/// back, instead of failing halfway through a commit.
pub fn check_encodable(bd: &SourceData, width: u8, source_id: VertexId) -> Result<(), StoreError> {
    for (v, &d) in bd.dist.iter().enumerate() {
        if d != UNREACHABLE && d > MAX_STORED_DISTANCE {
            return Err(StoreError::DistanceOverflow {
                source_id,
                vertex: v as VertexId,
                value: d,
            });
        }
    }
    let cap = sigma_cap(width);
    for (v, &sig) in bd.sigma.iter().enumerate() {
        if sig > cap {
            return Err(StoreError::SigmaOverflow {
                source_id,
                vertex: v as VertexId,
                value: sig,
                width,
            });
        }
    }
    Ok(())
}

fn sigma_cap(width: u8) -> u64 {
    match width {
        2 => u16::MAX as u64,
        4 => u32::MAX as u64,
        _ => u64::MAX,
    }
}

fn decode_distance(b: u8) -> Distance {
    if b == 0xFF {
        UNREACHABLE
    } else {
        b as Distance
    }
}
