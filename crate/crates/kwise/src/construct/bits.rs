//! Bit-packed matrices over GF(2).

use super::ConstructError;
use crate::comb::SubsetIter;

/// Row-major bit matrix over GF(2). Rows are padded to whole 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.words[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.words_per_row + c / 64;
        let mask = 1u64 << (c % 64);
        if bit {
            self.words[idx] |= mask;
        } else {
            self.words[idx] &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// XOR row `src` of this matrix into the external word buffer.
    pub(crate) fn xor_row_into(&self, src: usize, acc: &mut [u64]) {
        for (a, w) in acc.iter_mut().zip(self.row_words(src)) {
            *a ^= w;
        }
    }

    pub(crate) fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    /// Rank over GF(2) by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|r| self.row_words(r).to_vec()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let word = c / 64;
            let mask = 1u64 << (c % 64);
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][word] & mask != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[word] & mask != 0 {
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// First (lexicographically) size-d column subset that is linearly
    /// dependent over GF(2), or None when every d columns are independent.
    pub fn first_dependent_column_subset(&self, d: usize) -> Option<Vec<usize>> {
        assert!(d >= 1 && d <= self.cols);
        // Columns as bit vectors over the rows.
        let col_words = self.rows.div_ceil(64).max(1);
        let mut cols: Vec<Vec<u64>> = vec![vec![0u64; col_words]; self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    cols[c][r / 64] |= 1u64 << (r % 64);
                }
            }
        }
        let mut iter = SubsetIter::new(self.cols, d);
        let mut basis: Vec<Vec<u64>> = Vec::with_capacity(d);
        while iter.advance() {
            let subset = iter.current();
            basis.clear();
            let mut independent = true;
            'cols: for &c in subset {
                let mut v = cols[c].clone();
                for b in &basis {
                    let hi = highest_bit(&v);
                    match hi {
                        None => break,
                        Some(h) => {
                            if highest_bit(b) == Some(h) {
                                for (x, y) in v.iter_mut().zip(b) {
                                    *x ^= y;
                                }
                            }
                        }
                    }
                }
                if v.iter().all(|&w| w == 0) {
                    independent = false;
                    break 'cols;
                }
                basis.push(v);
                basis.sort_by_key(|b| std::cmp::Reverse(highest_bit(b)));
            }
            if !independent {
                return Some(subset.to_vec());
            }
        }
        None
    }

    /// Text form: `rows cols` on the first line, then one 0/1 string per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.push(if self.get(r, c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(s: &str) -> Result<Self, ConstructError> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| ConstructError::MatrixParse("empty input".into()))?;
        let mut dims = header.split_whitespace();
        let rows: usize = dims
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ConstructError::MatrixParse("bad header".into()))?;
        let cols: usize = dims
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ConstructError::MatrixParse("bad header".into()))?;
        if dims.next().is_some() {
            return Err(ConstructError::MatrixParse("bad header".into()));
        }
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| ConstructError::MatrixParse(format!("missing row {r}")))?;
            let line = line.trim();
            if line.len() != cols {
                return Err(ConstructError::MatrixParse(format!(
                    "row {r} has {} columns, expected {cols}",
                    line.len()
                )));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    _ => {
                        return Err(ConstructError::MatrixParse(format!(
                            "row {r} contains '{ch}'"
                        )))
                    }
                }
            }
        }
        if lines.next().is_some() {
            return Err(ConstructError::MatrixParse("trailing rows".into()));
        }
        Ok(m)
    }
}

fn highest_bit(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate().rev() {
        if w != 0 {
            return Some(i * 64 + 63 - w.leading_zeros() as usize);
        }
    }
    None
}
