//! Binary codes whose parity checks are the lines of a partial geometry.
//!
//! The parity-check matrix `H` holds the first `rank₂(N)` linearly independent
//! rows of the incidence matrix `N`, taken in line order. Coordinates stay
//! aligned with geometry points; instead of permuting columns into
//! `H = [I | Q]`, the code records an information set (the non-pivot columns of
//! `rref(H)`) on which the generator is the identity.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{free_columns, BitMatrix, BitVec};
use crate::geometry::{incidence_matrix, validate_pg, GeometryError, IncidenceStructure, PgParams};

#[derive(Debug, Error)]
pub enum CodeError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degenerate code (full-rank incidence): rank {rank} equals length {n}")]
    Degenerate { rank: usize, n: usize },
    #[error("coordinate {coordinate} is identically zero (all-zero row in Q)")]
    ZeroQRow { coordinate: usize },
    #[error("expected a vector of length {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("coordinate {0} is out of range")]
    CoordinateOutOfRange(usize),
    #[error("not an information set: {0:?}")]
    NotInformationSet(Vec<usize>),
    #[error("instance too large for exhaustive MDS check: C({n},{k}) exceeds {limit}")]
    GuardExceeded { n: usize, k: usize, limit: u64 },
}

pub type Result<T, E = CodeError> = std::result::Result<T, E>;

pub const DEFAULT_MDS_GUARD: u64 = 10_000_000;

/// A pg-BLRC code.
#[derive(Clone, Debug)]
pub struct BlrcCode {
    n: usize,
    k: usize,
    incidence: BitMatrix,
    parity_check: BitMatrix,
    parity_rows: Vec<usize>,
    generator: BitMatrix,
    info_set: Vec<usize>,
    geometry: IncidenceStructure,
    params: PgParams,
}

impl BlrcCode {
    pub fn build(inc: &IncidenceStructure) -> Result<Self> {
        let params = validate_pg(inc)?;
        let incidence = incidence_matrix(inc);
        let n = inc.num_points();

        // Greedy scan of N's rows: keep a row when it is independent of the
        // rows kept so far. `basis` is an echelon form keyed by leading column.
        let mut basis: Vec<Option<BitVec>> = vec![None; n];
        let mut parity_rows = Vec::new();
        for (li, row) in incidence.rows().iter().enumerate() {
            let mut rest = row.clone();
            while let Some(lead) = rest.first_one() {
                match &basis[lead] {
                    Some(b) => rest.xor_assign(b),
                    None => {
                        basis[lead] = Some(rest);
                        parity_rows.push(li);
                        break;
                    }
                }
            }
        }
        let rank = parity_rows.len();
        if rank >= n {
            return Err(CodeError::Degenerate { rank, n });
        }
        let parity_check = incidence.select_rows(&parity_rows);

        let (reduced, pivots) = parity_check.rref2();
        let info_set = free_columns(n, &pivots);
        // Row r of the systematic Q-part is row r of `reduced` restricted to
        // the information set; an all-zero one forces coordinate pivots[r] to 0.
        for (r, &p) in pivots.iter().enumerate() {
            if info_set.iter().all(|&f| !reduced.get(r, f)) {
                return Err(CodeError::ZeroQRow { coordinate: p });
            }
        }
        let generator = parity_check.nullspace2();
        debug_assert_eq!(generator.num_rows(), info_set.len());

        Ok(Self {
            n,
            k: info_set.len(),
            incidence,
            parity_check,
            parity_rows,
            generator,
            info_set,
            geometry: inc.clone(),
            params,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity checks, `m = rank₂(N) = n − k`.
    pub fn m(&self) -> usize {
        self.n - self.k
    }

    pub fn incidence(&self) -> &BitMatrix {
        &self.incidence
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// Indices of the lines whose incidence rows make up `H`.
    pub fn parity_rows(&self) -> &[usize] {
        &self.parity_rows
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn geometry(&self) -> &IncidenceStructure {
        &self.geometry
    }

    pub fn params(&self) -> &PgParams {
        &self.params
    }

    /// `c = o·G`.
    pub fn encode(&self, message: &BitVec) -> Result<BitVec> {
        if message.len() != self.k {
            return Err(CodeError::WrongLength { expected: self.k, actual: message.len() });
        }
        Ok(self.generator.vec_mul(message))
    }

    /// Whether `H·cᵀ = 0`.
    pub fn is_codeword(&self, word: &BitVec) -> bool {
        word.len() == self.n && self.parity_check.mul_vec(word).is_zero()
    }

    /// Recovers the message from the symbols at `coords` by solving
    /// `o = c_I · G_I⁻¹`.
    pub fn reconstruct(&self, coords: &[usize], values: &BitVec) -> Result<BitVec> {
        if coords.len() != self.k {
            return Err(CodeError::WrongLength { expected: self.k, actual: coords.len() });
        }
        if values.len() != self.k {
            return Err(CodeError::WrongLength { expected: self.k, actual: values.len() });
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= self.n) {
            return Err(CodeError::CoordinateOutOfRange(c));
        }
        let inverse = self
            .generator
            .select_columns(coords)
            .inverse()
            .ok_or_else(|| CodeError::NotInformationSet(coords.to_vec()))?;
        Ok(inverse.vec_mul(values))
    }

    /// Whether `G_I` is invertible.
    pub fn is_information_set(&self, coords: &[usize]) -> bool {
        coords.len() == self.k
            && coords.iter().all(|&c| c < self.n)
            && self.generator.select_columns(coords).rank2() == self.k
    }

    /// Exhaustive MDS check over all `k`-subsets; refuses when `C(n, k)`
    /// exceeds `guard`.
    pub fn is_mds(&self, guard: u64) -> Result<bool> {
        let count = binomial(self.n as u64, self.k as u64);
        if count.is_none_or(|c| c > guard) {
            return Err(CodeError::GuardExceeded { n: self.n, k: self.k, limit: guard });
        }
        let columns: Vec<BitVec> = (0..self.n).map(|c| self.generator.column(c)).collect();
        let mut subset: Vec<usize> = (0..self.k).collect();
        loop {
            if !independent(&subset, &columns) {
                return Ok(false);
            }
            if !next_combination(&mut subset, self.n) {
                return Ok(true);
            }
        }
    }

    pub fn rate(&self) -> Rate {
        Rate { rate: Ratio::new(self.k as i64, self.n as i64), footprint: Ratio::new(self.n as i64, self.k as i64) }
    }

    pub fn export(&self) -> CodeExport {
        CodeExport {
            n: self.n,
            k: self.k,
            info_set: self.info_set.clone(),
            parity_check: self.parity_check.rows().iter().map(BitVec::to_hex).collect(),
            generator: self.generator.rows().iter().map(BitVec::to_hex).collect(),
        }
    }
}

/// Exact rate `k/n` and storage footprint `n/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rate {
    pub rate: Ratio<i64>,
    pub footprint: Ratio<i64>,
}

/// JSON export of a code. Matrix rows are hex strings with bits packed
/// MSB-first (coordinate 0 is the top bit of the first byte).
#[derive(Clone, Debug, Serialize)]
pub struct CodeExport {
    pub n: usize,
    pub k: usize,
    pub info_set: Vec<usize>,
    pub parity_check: Vec<String>,
    pub generator: Vec<String>,
}

fn independent(subset: &[usize], columns: &[BitVec]) -> bool {
    let mut basis: Vec<BitVec> = Vec::with_capacity(subset.len());
    for &c in subset {
        let mut v = columns[c].clone();
        for b in &basis {
            if let Some(lead) = b.first_one() {
                if v.get(lead) {
                    v.xor_assign(b);
                }
            }
        }
        if v.is_zero() {
            return false;
        }
        // Keep basis reduced at each new leading bit.
        let lead = v.first_one().expect("nonzero");
        for b in basis.iter_mut() {
            if b.get(lead) {
                b.xor_assign(&v);
            }
        }
        basis.push(v);
    }
    true
}

/// Advances `subset` (strictly increasing, values < n) to the next
/// combination in lexicographic order. Returns false after the last one.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
        return false;
    };
    subset[i] += 1;
    for j in i + 1..k {
        subset[j] = subset[j - 1] + 1;
    }
    true
}

pub(crate) fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}
