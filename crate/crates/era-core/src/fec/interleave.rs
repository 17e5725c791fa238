//! Block interleaver: write column-wise, read row-wise with alternate row
//! direction reversed.
//!
//! Any run of up to `cols` adjacent post-interleave bits maps to input
//! positions pairwise at least `rows` apart, which spreads the burst errors
//! an OFDM symbol hit produces across the codeword. Reading the input rows
//! in descending index keeps that spread across row boundaries (a plain
//! transpose drops to `rows - 1` there).

use super::FecError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interleaver {
    pub rows: usize,
    pub cols: usize,
}

impl Interleaver {
    pub fn new(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1);
        Self { rows, cols }
    }

    /// Sizes the block for one OFDM symbol's coded bits
    /// (`data_subcarriers * bits_per_symbol`): the largest divisor `rows`
    /// of the block with `rows * (rows + 1) <= block`.
    pub fn for_symbol(data_subcarriers: usize, bits_per_symbol: usize) -> Self {
        let block = data_subcarriers * bits_per_symbol;
        let mut rows = 1;
        for r in 1..=block {
            if r * (r + 1) > block {
                break;
            }
            if block % r == 0 {
                rows = r;
            }
        }
        Self::new(rows, block / rows)
    }

    pub fn block_len(&self) -> usize {
        self.rows * self.cols
    }

    /// Permutes one block: `out[r * cols + c] = in[c * rows + (rows-1-r)]`.
    pub fn interleave<T: Copy>(&self, block: &[T]) -> Result<Vec<T>, FecError> {
        self.check(block.len())?;
        let mut out = Vec::with_capacity(block.len());
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.push(block[c * self.rows + (self.rows - 1 - r)]);
            }
        }
        Ok(out)
    }

    /// Exact inverse of [`Interleaver::interleave`].
    pub fn deinterleave<T: Copy + Default>(&self, block: &[T]) -> Result<Vec<T>, FecError> {
        self.check(block.len())?;
        let mut out = vec![T::default(); block.len()];
        let mut src = block.iter();
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[c * self.rows + (self.rows - 1 - r)] = *src.next().unwrap();
            }
        }
        Ok(out)
    }

    fn check(&self, len: usize) -> Result<(), FecError> {
        if len != self.block_len() {
            return Err(FecError::BlockSize {
                got: len,
                expected: self.block_len(),
            });
        }
        Ok(())
    }
}
