//! On-disk artifacts: a small binary field-dump format and CSV tables.
//!
//! Binary layout (all little-endian):
//!
//! ```text
//! bytes 0..6   magic "WEMHD1"
//! u32          n_space
//! u32          n_time
//! u32          n_components
//! f64 × n_time · n_components · n_space³   samples
//! ```
//!
//! Samples are ordered by time slice, then component, then lattice point
//! with the first axis fastest (x-fastest), so fixed-time planes are
//! contiguous per component.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::grid::TorusGrid;

const MAGIC: &[u8; 6] = b"WEMHD1";

/// Streams sample blocks to a binary dump as they are produced.
pub struct FieldDumpWriter {
    out: BufWriter<File>,
    n_space: usize,
    remaining: usize,
}

impl FieldDumpWriter {
    pub fn create(
        path: &Path,
        n_space: usize,
        n_time: usize,
        n_components: usize,
    ) -> std::io::Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(MAGIC)?;
        for v in [n_space as u32, n_time as u32, n_components as u32] {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(FieldDumpWriter {
            out,
            n_space,
            remaining: n_time * n_components,
        })
    }

    /// Writes one component block (natural field layout, axis 2 fastest);
    /// the block is transposed to x-fastest order on the way out.
    pub fn write_block(&mut self, grid: &TorusGrid, samples: &[f64]) -> std::io::Result<()> {
        assert_eq!(grid.n, self.n_space, "dump grid mismatch");
        assert_eq!(samples.len(), grid.len());
        assert!(self.remaining > 0, "more blocks than declared");
        let n = grid.n;
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let v = samples[grid.physical_index([i, j, k])];
                    self.out.write_all(&v.to_le_bytes())?;
                }
            }
        }
        self.remaining -= 1;
        Ok(())
    }

    pub fn finish(mut self) -> std::io::Result<()> {
        assert_eq!(self.remaining, 0, "fewer blocks than declared");
        self.out.flush()
    }
}

/// Reads a dump back fully into memory (test-sized inputs only).
pub struct FieldDump {
    pub n_space: usize,
    pub n_time: usize,
    pub n_components: usize,
    /// Blocks in write order, each in natural field layout.
    pub blocks: Vec<Vec<f64>>,
}

pub fn read_field_dump(path: &Path) -> std::io::Result<FieldDump> {
    let mut input = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 6];
    input.read_exact(&mut magic)?;
    assert_eq!(&magic, MAGIC, "not a field dump");
    let mut word = [0u8; 4];
    let mut dims = [0usize; 3];
    for d in &mut dims {
        input.read_exact(&mut word)?;
        *d = u32::from_le_bytes(word) as usize;
    }
    let [n_space, n_time, n_components] = dims;
    let grid = TorusGrid::new(n_space);
    let mut blocks = Vec::with_capacity(n_time * n_components);
    let mut buf = [0u8; 8];
    for _ in 0..n_time * n_components {
        let mut block = vec![0.0f64; grid.len()];
        for k in 0..n_space {
            for j in 0..n_space {
                for i in 0..n_space {
                    input.read_exact(&mut buf)?;
                    block[grid.physical_index([i, j, k])] = f64::from_le_bytes(buf);
                }
            }
        }
        blocks.push(block);
    }
    Ok(FieldDump {
        n_space,
        n_time,
        n_components,
        blocks,
    })
}

/// Writes a CSV table with a header row; fields are written verbatim, so
/// callers must not embed commas or newlines.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        assert_eq!(row.len(), header.len(), "ragged CSV row");
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()
}
