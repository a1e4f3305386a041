//! Single-symbol repair from a parity-check vector.

use serde::Serialize;

use crate::code::BlrcCode;

use super::{RepairError, RepairSets, RepairVector, Result};

/// Result of repairing one symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairOutcome {
    pub coordinate: usize,
    pub value: bool,
    /// Position of the chosen vector in the coordinate's preference order.
    pub alternative: usize,
    pub line: Option<usize>,
    pub support: Vec<usize>,
    /// Symbols read to perform the repair: `w(v) − 1`.
    pub retrieved: usize,
}

/// `c(i) = Σ_{j ≠ i} v(j) c(j)` over GF(2). Every other symbol on the support
/// must be present in `word`.
pub fn repair_with(vector: &RepairVector, word: &[Option<bool>], i: usize) -> Result<bool> {
    if !vector.support().contains(&i) {
        return Err(RepairError::VectorMissesCoordinate(i));
    }
    let mut value = false;
    for j in vector.repair_set(i) {
        match word.get(j).copied().flatten() {
            Some(bit) => value ^= bit,
            None => return Err(RepairError::MissingSymbol { needed: j }),
        }
    }
    Ok(value)
}

/// Repairs `c(i)` using the lines through `i`. Erased symbols (`None`) count
/// as unavailable.
pub fn repair_symbol(code: &BlrcCode, word: &[Option<bool>], i: usize, unavailable: &[usize]) -> Result<RepairOutcome> {
    RepairSets::geometric(code).repair(word, i, unavailable)
}

impl RepairSets {
    /// Repairs `c(i)` with the most preferred vector whose other support
    /// avoids `unavailable` and the erasures in `word`.
    pub fn repair(&self, word: &[Option<bool>], i: usize, unavailable: &[usize]) -> Result<RepairOutcome> {
        if word.len() != self.len() {
            return Err(RepairError::WrongLength { expected: self.len(), actual: word.len() });
        }
        if i >= self.len() {
            return Err(RepairError::CoordinateOutOfRange(i));
        }
        if let Some(&j) = unavailable.iter().find(|&&j| j >= self.len()) {
            return Err(RepairError::CoordinateOutOfRange(j));
        }
        let blocked = |j: usize| word[j].is_none() || unavailable.contains(&j);
        let alternative =
            self.first_available(i, blocked).ok_or(RepairError::NotLocallyRepairable { coordinate: i })?;
        let vector = &self.for_symbol(i)[alternative];
        Ok(RepairOutcome {
            coordinate: i,
            value: repair_with(vector, word, i)?,
            alternative,
            line: vector.line(),
            support: vector.support().to_vec(),
            retrieved: vector.weight() - 1,
        })
    }

    /// Index of the first vector for `i` none of whose other coordinates is
    /// blocked.
    pub fn first_available(&self, i: usize, blocked: impl Fn(usize) -> bool) -> Option<usize> {
        self.for_symbol(i).iter().position(|v| v.support().iter().all(|&j| j == i || !blocked(j)))
    }
}
