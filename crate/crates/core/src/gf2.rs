//! Parity systems over GF(2) solved by Gauss-Jordan elimination, with row
//! provenance tracking for contradiction certificates.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> BitRow {
        BitRow { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// Outcome of solving `A x = b` over GF(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Solution {
    /// One solution, free variables set to 0.
    Solution(Vec<bool>),
    /// Indices of original equations whose sum reads `0 = 1`.
    Contradiction(Vec<usize>),
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: BitRow,
    rhs: bool,
    origin: BitRow,
}

/// Solves the system where equation `r` is `XOR_{v in vars[r]} x_v = rhs[r]`.
///
/// Columns are processed in increasing variable index; the pivot for a column
/// is the first remaining row holding it. A variable listed twice in one
/// equation cancels.
pub fn solve(num_vars: usize, equations: &[(Vec<usize>, bool)]) -> Gf2Solution {
    let r = equations.len();
    let mut rows: Vec<Row> = equations
        .iter()
        .enumerate()
        .map(|(i, (vars, rhs))| {
            let mut coeffs = BitRow::zeros(num_vars);
            for &v in vars {
                coeffs.flip(v);
            }
            let mut origin = BitRow::zeros(r);
            origin.set(i);
            Row { coeffs, rhs: *rhs, origin }
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..num_vars {
        let Some(p) = (rank..r).find(|&i| rows[i].coeffs.get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.coeffs.get(col) {
                row.coeffs.xor_assign(&pivot.coeffs);
                row.rhs ^= pivot.rhs;
                row.origin.xor_assign(&pivot.origin);
            }
        }
        pivots.push(col);
        rank += 1;
    }

    if let Some(bad) = rows[rank..].iter().find(|row| row.rhs) {
        debug_assert!(bad.coeffs.is_zero());
        return Gf2Solution::Contradiction(bad.origin.ones().collect());
    }
    let mut x = vec![false; num_vars];
    for (row, &col) in rows.iter().zip(&pivots) {
        x[col] = row.rhs;
    }
    Gf2Solution::Solution(x)
}
