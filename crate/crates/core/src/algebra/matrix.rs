use std::fmt;

use super::bits::BitVec;

/// Dense binary matrix stored as packed rows.
///
/// All elimination routines pivot deterministically: columns are scanned left
/// to right and the lowest-index candidate row is chosen, so ranks, bases and
/// pivot sets are reproducible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from packed rows. Every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "all rows must have {cols} columns");
        Self { cols, rows }
    }

    /// Builds a matrix from 0/1 entries given row by row.
    pub fn from_bits(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let packed = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix");
                let bools: Vec<bool> = r.iter().map(|&b| b != 0).collect();
                BitVec::from_bools(&bools)
            })
            .collect();
        Self::from_rows(cols, packed)
    }

    #[inline]
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn num_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Submatrix keeping the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut v = BitVec::zeros(cols.len());
                for (j, &c) in cols.iter().enumerate() {
                    if row.get(c) {
                        v.set(j, true);
                    }
                }
                v
            })
            .collect();
        Self::from_rows(cols.len(), rows)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_rows(self.cols, rows.iter().map(|&r| self.rows[r].clone()).collect())
    }

    /// `self · v` for a column vector `v` of length `num_cols`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    /// Row vector times matrix: `v · self`, with `v` of length `num_rows`.
    pub fn vec_mul(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.rows.len(), "dimension mismatch");
        let mut out = BitVec::zeros(self.cols);
        for r in v.iter_ones() {
            out.xor_assign(&self.rows[r]);
        }
        out
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.num_rows(), "dimension mismatch");
        let rows = self.rows.iter().map(|row| other.vec_mul(row)).collect();
        Self::from_rows(other.cols, rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(BitVec::weight).collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for c in row.iter_ones() {
                w[c] += 1;
            }
        }
        w
    }

    /// Dimension of the row space over GF(2).
    pub fn rank2(&self) -> usize {
        let mut work = self.rows.clone();
        eliminate(&mut work, self.cols, false).len()
    }

    /// Reduced row-echelon form and the (strictly increasing) pivot columns.
    pub fn rref2(&self) -> (BitMatrix, Vec<usize>) {
        let mut work = self.rows.clone();
        let pivots = eliminate(&mut work, self.cols, true);
        (Self::from_rows(self.cols, work), pivots)
    }

    /// Basis of `{ v : self · vᵀ = 0 }`, one vector per row.
    ///
    /// Row `j` of the result is the unique kernel vector that has a one at the
    /// `j`-th free (non-pivot) column and zeros at every other free column.
    pub fn nullspace2(&self) -> BitMatrix {
        let (reduced, pivots) = self.rref2();
        let free = free_columns(self.cols, &pivots);
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = BitVec::zeros(self.cols);
                v.set(f, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if reduced.get(r, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        Self::from_rows(self.cols, basis)
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitVec) -> bool {
        let (reduced, pivots) = self.rref2();
        let mut rest = v.clone();
        for (r, &p) in pivots.iter().enumerate() {
            if rest.get(p) {
                rest.xor_assign(reduced.row(r));
            }
        }
        rest.is_zero()
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return None;
        }
        // Augment [A | I] and reduce.
        let mut aug: Vec<BitVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut v = BitVec::zeros(2 * n);
                for c in row.iter_ones() {
                    v.set(c, true);
                }
                v.set(n + r, true);
                v
            })
            .collect();
        let pivots = eliminate(&mut aug, n, true);
        if pivots.len() < n {
            return None;
        }
        let rows = aug
            .iter()
            .map(|row| {
                let mut v = BitVec::zeros(n);
                for c in row.iter_ones().filter(|&c| c >= n) {
                    v.set(c - n, true);
                }
                v
            })
            .collect();
        Some(Self::from_rows(n, rows))
    }
}

/// Gaussian elimination in place over the first `cols` columns. Returns the
/// pivot columns. With `reduce`, entries above each pivot are cleared too.
fn eliminate(rows: &mut [BitVec], cols: usize, reduce: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(rank, found);
        let pivot_row = rows[rank].clone();
        let start = if reduce { 0 } else { rank + 1 };
        for (r, row) in rows.iter_mut().enumerate().skip(start) {
            if r != rank && row.get(c) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(c);
        rank += 1;
    }
    pivots
}

pub(crate) fn free_columns(cols: usize, pivots: &[usize]) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for row in &self.rows {
            for c in 0..self.cols {
                f.write_str(if row.get(c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Rank by elimination on plain byte rows; shares no code with `eliminate`.
    fn naive_rank(rows: &[Vec<u8>]) -> usize {
        let mut m: Vec<Vec<u8>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) {
                m.swap(rank, p);
                let pivot = m[rank].clone();
                for (r, row) in m.iter_mut().enumerate() {
                    if r != rank && row[c] == 1 {
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn grid2_incidence() -> Vec<Vec<u8>> {
        // 3x3 grid, points r*3+c; three row lines then three column lines.
        let mut rows = Vec::new();
        for r in 0..3 {
            let mut v = vec![0u8; 9];
            for c in 0..3 {
                v[r * 3 + c] = 1;
            }
            rows.push(v);
        }
        for c in 0..3 {
            let mut v = vec![0u8; 9];
            for r in 0..3 {
                v[r * 3 + c] = 1;
            }
            rows.push(v);
        }
        rows
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank2(), 3);
        assert_eq!(BitMatrix::from_bits(&vec![vec![1; 4]; 4]).rank2(), 1);
        let grid = grid2_incidence();
        assert_eq!(naive_rank(&grid), 5);
        assert_eq!(BitMatrix::from_bits(&grid).rank2(), 5);
    }

    #[test]
    fn rref_examples() {
        let (r, p) = BitMatrix::identity(3).rref2();
        assert_eq!(r, BitMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = BitMatrix::zeros(2, 3).rref2();
        assert!(r.is_zero());
        assert!(p.is_empty());

        let m = BitMatrix::from_bits(&[vec![1, 1, 0], vec![1, 1, 1]]);
        let (r, p) = m.rref2();
        assert_eq!(r, BitMatrix::from_bits(&[vec![1, 1, 0], vec![0, 0, 1]]));
        assert_eq!(p, vec![0, 2]);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(BitMatrix::identity(4).nullspace2().num_rows(), 0);

        let ns = BitMatrix::from_bits(&[vec![1, 1]]).nullspace2();
        assert_eq!(ns, BitMatrix::from_bits(&[vec![1, 1]]));

        let grid = BitMatrix::from_bits(&grid2_incidence());
        let ns = grid.nullspace2();
        assert_eq!(ns.num_rows(), 4);
        for v in ns.rows() {
            assert!(grid.mul_vec(v).is_zero());
        }
        assert_eq!(ns.rank2(), 4);
    }

    #[test]
    fn inverse_round_trip() {
        let m = BitMatrix::from_bits(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), BitMatrix::identity(3));
        assert!(BitMatrix::from_bits(&[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    #[test]
    fn row_space_membership() {
        let grid = BitMatrix::from_bits(&grid2_incidence());
        // Sum of the three row lines is the all-ones vector.
        assert!(grid.row_space_contains(&BitVec::from_indices(9, &(0..9).collect::<Vec<_>>())));
        assert!(!grid.row_space_contains(&BitVec::from_indices(9, &[0])));
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<u8>>> {
        (1usize..9, 1usize..12)
            .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(0u8..2, c), r))
    }

    proptest! {
        #[test]
        fn rank_matches_naive_and_transpose(bits in arb_matrix()) {
            let m = BitMatrix::from_bits(&bits);
            prop_assert_eq!(m.rank2(), naive_rank(&bits));
            prop_assert_eq!(m.rank2(), m.transpose().rank2());
            prop_assert!(m.rank2() <= m.num_rows().min(m.num_cols()));
        }

        #[test]
        fn nullspace_dimension_and_orthogonality(bits in arb_matrix()) {
            let m = BitMatrix::from_bits(&bits);
            let ns = m.nullspace2();
            prop_assert_eq!(ns.num_rows(), m.num_cols() - m.rank2());
            for v in ns.rows() {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            prop_assert_eq!(ns.rank2(), ns.num_rows());
        }

        #[test]
        fn rref_is_idempotent_and_row_equivalent(bits in arb_matrix()) {
            let m = BitMatrix::from_bits(&bits);
            let (r, pivots) = m.rref2();
            prop_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(pivots.len(), m.rank2());
            let (again, pivots_again) = r.rref2();
            prop_assert_eq!(&again, &r);
            prop_assert_eq!(pivots_again, pivots);
            for row in m.rows() {
                prop_assert!(r.row_space_contains(row));
            }
            for row in r.rows() {
                prop_assert!(m.row_space_contains(row));
            }
        }
    }
}
