//! Square boolean matrices packed into 64-bit words.

/// A square boolean matrix with row-major bit packing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct BitMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn zero(n: usize) -> BitMatrix {
        let words_per_row = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words_per_row,
            bits: vec![0; words_per_row * n.max(1)],
        }
    }

    pub(crate) fn identity(n: usize) -> BitMatrix {
        let mut m = BitMatrix::zero(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub(crate) fn set(&mut self, row: usize, col: usize) {
        debug_assert!(row < self.n && col < self.n);
        self.bits[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    pub(crate) fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.n && col < self.n);
        self.bits[row * self.words_per_row + col / 64] >> (col % 64) & 1 == 1
    }

    /// Boolean matrix product: `(self * rhs)[i][j]` iff some `k` has
    /// `self[i][k]` and `rhs[k][j]`.
    pub(crate) fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = BitMatrix::zero(self.n);
        for i in 0..self.n {
            let row_out = &mut out.bits[i * out.words_per_row..(i + 1) * out.words_per_row];
            for k in 0..self.n {
                if self.bits[i * self.words_per_row + k / 64] >> (k % 64) & 1 == 1 {
                    let row_rhs = &rhs.bits[k * rhs.words_per_row..(k + 1) * rhs.words_per_row];
                    for (o, r) in row_out.iter_mut().zip(row_rhs) {
                        *o |= r;
                    }
                }
            }
        }
        out
    }
}
