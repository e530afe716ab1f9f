//! Small dense matrices over GF(2) and CNOT-network synthesis.
//!
//! Vectors are `u64` bit sets where bit `j` is coordinate `j` (wire `j`).
//! Row `i` of a matrix is a `u64` whose bit `j` is the entry `(i, j)`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    pub fn identity(n: usize) -> BitMatrix {
        assert!(n <= 64, "BitMatrix supports at most 64 coordinates");
        BitMatrix {
            n,
            rows: (0..n).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn zero(n: usize) -> BitMatrix {
        assert!(n <= 64, "BitMatrix supports at most 64 coordinates");
        BitMatrix { n, rows: vec![0; n] }
    }

    /// Matrix of the linear map `f`, read off its images of the unit vectors.
    pub fn from_linear_fn(n: usize, f: impl Fn(u64) -> u64) -> BitMatrix {
        let mut m = BitMatrix::zero(n);
        for j in 0..n {
            let col = f(1 << j);
            for i in 0..n {
                if (col >> i) & 1 == 1 {
                    m.rows[i] |= 1 << j;
                }
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// The `size x size` block whose top-left entry is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, size: usize) -> BitMatrix {
        let mut m = BitMatrix::zero(size);
        for i in 0..size {
            for j in 0..size {
                m.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        m
    }

    pub fn apply(&self, v: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (((r & v).count_ones() as u64 & 1) << i))
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(p) = (rank..self.n).find(|&r| (rows[r] >> col) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && (*row >> col) & 1 == 1 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    pub fn is_identity(&self) -> bool {
        *self == BitMatrix::identity(self.n)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let line: String = (0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// CNOT network realizing an invertible linear map in place.
///
/// Returns `(control, target)` pairs in time order. Applying them to wires
/// holding `x` leaves `m * x`. Returns `None` for singular matrices.
pub fn synthesize_cnots(m: &BitMatrix) -> Option<Vec<(usize, usize)>> {
    let n = m.n;
    let mut rows = m.rows.clone();
    let mut ops = Vec::new();
    let mut add = |rows: &mut Vec<u64>, target: usize, control: usize| {
        rows[target] ^= rows[control];
        ops.push((control, target));
    };
    for col in 0..n {
        if (rows[col] >> col) & 1 == 0 {
            let p = (col + 1..n).find(|&r| (rows[r] >> col) & 1 == 1)?;
            add(&mut rows, col, p);
        }
        for r in 0..n {
            if r != col && (rows[r] >> col) & 1 == 1 {
                add(&mut rows, r, col);
            }
        }
    }
    // Row operations reduce m to I; each is its own inverse, so replaying
    // them backwards in time rebuilds m from I.
    ops.reverse();
    Some(ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(ops: &[(usize, usize)], mut v: u64) -> u64 {
        for &(c, t) in ops {
            if (v >> c) & 1 == 1 {
                v ^= 1 << t;
            }
        }
        v
    }

    #[test]
    fn identity_needs_no_gates() {
        assert_eq!(synthesize_cnots(&BitMatrix::identity(5)).unwrap(), vec![]);
    }

    #[test]
    fn singular_is_rejected() {
        let mut m = BitMatrix::identity(3);
        m.set(2, 2, false);
        assert!(!m.is_invertible());
        assert!(synthesize_cnots(&m).is_none());
    }

    #[test]
    fn zero_pivot_is_repaired() {
        // A permutation matrix forces the row-addition repair on column 0.
        let m = BitMatrix::from_linear_fn(3, |v| ((v << 1) | (v >> 2)) & 0b111);
        let ops = synthesize_cnots(&m).unwrap();
        for v in 0..8 {
            assert_eq!(run(&ops, v), m.apply(v));
        }
    }

    #[test]
    fn random_invertible_matrices_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut found = 0;
        while found < 50 {
            let n = rng.gen_range(1..=8);
            let mut m = BitMatrix::zero(n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, rng.gen());
                }
            }
            if !m.is_invertible() {
                continue;
            }
            found += 1;
            let ops = synthesize_cnots(&m).unwrap();
            for v in 0..1u64 << n {
                assert_eq!(run(&ops, v), m.apply(v));
            }
        }
    }

    #[test]
    fn block_extraction() {
        let m = BitMatrix::from_linear_fn(4, |v| v ^ ((v & 0b11) << 2));
        let b = m.block(2, 0, 2);
        assert!(b.is_identity());
    }
}
