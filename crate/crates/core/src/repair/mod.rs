//! Repair metrics for a code.
//!
//! For coordinate `i`, `Ω(i)` is the set of dual codewords `v` with `v(i) ≠ 0`
//! and `Ω_r(i)` those of weight at most `r + 1`. Then
//!
//! - the repair degree `r(i)` is `min w(v) − 1` over `Ω(i)` (overall: max),
//! - the alternativity `a(i)` is `|Ω_r(i)|` (overall: min),
//! - the local repair tolerance `δ(i)` is the size of the smallest set of
//!   other coordinates meeting every support in `Ω_r(i)` (overall: min).
//!
//! A code is balanced when all `δ(i)` agree. Since `δ(i)` is the smallest
//! blocking set, local repair of `i` is guaranteed with up to `δ(i) − 1`
//! unavailable nodes, and some set of `δ(i)` unavailable nodes defeats it.
//!
//! Two modes are available. [`Mode::Geometric`] takes `Ω_r(i)` to be the
//! lines through `i` (the designed values). [`Mode::Exhaustive`] enumerates
//! every dual codeword of weight ≤ `r + 1` through `i`, bounded by a
//! [`SearchGuard`].

mod executor;
mod hitting_set;
mod search;
mod simulate;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::BitVec;
use crate::code::BlrcCode;

pub use executor::{repair_symbol, repair_with, RepairOutcome};
pub use hitting_set::min_hitting_set;
pub use simulate::{simulate_availability, AvailabilityModel, SimulationConfig, SimulationReport};

use search::{check_guard, dual_supports, min_dual_weight, ColumnTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepairError {
    #[error("exhaustive search needs {required} candidate supports, above the guard of {limit}; use geometric mode or raise the guard")]
    GuardExceeded { required: u64, limit: u64 },
    #[error("coordinate {0} is out of range")]
    CoordinateOutOfRange(usize),
    #[error("expected a word of length {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("not locally repairable under this availability (coordinate {coordinate})")]
    NotLocallyRepairable { coordinate: usize },
    #[error("coordinate {coordinate} lies on no dual codeword of weight at most {max_weight}")]
    NoRepairVector { coordinate: usize, max_weight: usize },
    #[error("repair vector does not cover coordinate {0}")]
    VectorMissesCoordinate(usize),
    #[error("symbol {needed} needed for repair is erased")]
    MissingSymbol { needed: usize },
    #[error("coordinate {0} can never be blocked (weight-one dual codeword)")]
    Unblockable(usize),
}

pub type Result<T, E = RepairError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Geometric,
    Exhaustive,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Geometric => "geometric",
            Self::Exhaustive => "exhaustive",
        }
    }
}

/// Upper limit on the number of candidate supports an exhaustive search may
/// examine per coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchGuard {
    pub max_candidates: u64,
}

impl Default for SearchGuard {
    fn default() -> Self {
        Self { max_candidates: 100_000_000 }
    }
}

/// A parity-check vector used to repair one coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairVector {
    support: Vec<usize>,
    /// Index of the geometry line with this support, if any.
    line: Option<usize>,
    #[serde(skip)]
    vector: BitVec,
}

impl RepairVector {
    pub fn new(n: usize, support: Vec<usize>, line: Option<usize>) -> Self {
        let vector = BitVec::from_indices(n, &support);
        Self { support, line, vector }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn line(&self) -> Option<usize> {
        self.line
    }

    pub fn vector(&self) -> &BitVec {
        &self.vector
    }

    /// Support with coordinate `i` removed: the nodes contacted to repair `i`.
    pub fn repair_set(&self, i: usize) -> Vec<usize> {
        self.support.iter().copied().filter(|&j| j != i).collect()
    }

    fn preference_key(&self) -> (usize, usize, &[usize]) {
        (self.weight(), self.line.unwrap_or(usize::MAX), &self.support)
    }
}

/// The `t + 1` incidence rows through point `i`.
pub fn line_repair_sets(code: &BlrcCode, i: usize) -> Result<Vec<RepairVector>> {
    let n = code.n();
    if i >= n {
        return Err(RepairError::CoordinateOutOfRange(i));
    }
    let geometry = code.geometry();
    Ok(geometry
        .lines()
        .iter()
        .enumerate()
        .filter(|(_, line)| line.binary_search(&i).is_ok())
        .map(|(li, line)| RepairVector::new(n, line.clone(), Some(li)))
        .collect())
}

/// Every dual codeword through `i` of weight at most `r + 1`, found by
/// exhaustive support enumeration.
pub fn omega_r(code: &BlrcCode, i: usize, r: usize, guard: SearchGuard) -> Result<Vec<RepairVector>> {
    let table = ColumnTable::new(code);
    omega_with_table(code, &table, i, r, guard)
}

fn omega_with_table(
    code: &BlrcCode,
    table: &ColumnTable,
    i: usize,
    r: usize,
    guard: SearchGuard,
) -> Result<Vec<RepairVector>> {
    let n = code.n();
    if i >= n {
        return Err(RepairError::CoordinateOutOfRange(i));
    }
    check_guard(n, r + 1, guard)?;
    let lines = code.geometry().lines();
    Ok(dual_supports(table, i, r + 1)
        .into_iter()
        .map(|support| {
            let line = lines.iter().position(|l| *l == support);
            RepairVector::new(n, support, line)
        })
        .collect())
}

/// Candidate repair vectors per coordinate, ordered by preference: lower
/// weight first, then lower line index, then support.
#[derive(Clone, Debug)]
pub struct RepairSets {
    mode: Mode,
    radius: usize,
    per_symbol: Vec<Vec<RepairVector>>,
}

impl RepairSets {
    /// `Ω_r(i)` restricted to lines, with `r = s` (the designed degree).
    pub fn geometric(code: &BlrcCode) -> Self {
        let s = code.params().s;
        Self::geometric_with_radius(code, s)
    }

    pub fn geometric_with_radius(code: &BlrcCode, radius: usize) -> Self {
        let per_symbol = (0..code.n())
            .map(|i| {
                let mut v = line_repair_sets(code, i).expect("coordinate in range");
                v.retain(|rv| rv.weight() <= radius + 1);
                v
            })
            .collect();
        Self { mode: Mode::Geometric, radius, per_symbol }.sorted()
    }

    /// Exact `Ω_r(i)` for every coordinate.
    pub fn exhaustive(code: &BlrcCode, radius: usize, guard: SearchGuard) -> Result<Self> {
        check_guard(code.n(), radius + 1, guard)?;
        let table = ColumnTable::new(code);
        let per_symbol = (0..code.n())
            .into_par_iter()
            .map(|i| omega_with_table(code, &table, i, radius, guard))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { mode: Mode::Exhaustive, radius, per_symbol }.sorted())
    }

    pub fn build(code: &BlrcCode, mode: Mode, radius: usize, guard: SearchGuard) -> Result<Self> {
        match mode {
            Mode::Geometric => Ok(Self::geometric_with_radius(code, radius)),
            Mode::Exhaustive => Self::exhaustive(code, radius, guard),
        }
    }

    /// Test hook: same sets with one vector removed from coordinate `i`.
    pub fn without(&self, i: usize, index: usize) -> Self {
        let mut out = self.clone();
        out.per_symbol[i].remove(index);
        out
    }

    fn sorted(mut self) -> Self {
        for v in &mut self.per_symbol {
            v.sort_by(|a, b| a.preference_key().cmp(&b.preference_key()));
        }
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.per_symbol.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_symbol.is_empty()
    }

    pub fn for_symbol(&self, i: usize) -> &[RepairVector] {
        &self.per_symbol[i]
    }

    /// `a(i) = |Ω_r(i)|`.
    pub fn alternativity(&self, i: usize) -> usize {
        self.per_symbol[i].len()
    }

    /// `δ(i)` with a minimum blocking set as witness.
    pub fn tolerance(&self, i: usize) -> Result<Tolerance> {
        let sets: Vec<Vec<usize>> = self.per_symbol[i].iter().map(|v| v.repair_set(i)).collect();
        let blocking_set = min_hitting_set(&sets).ok_or(RepairError::Unblockable(i))?;
        Ok(Tolerance { size: blocking_set.len(), blocking_set })
    }
}

/// Local repair tolerance of one coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tolerance {
    pub size: usize,
    pub blocking_set: Vec<usize>,
}

/// `r(i)`. In geometric mode this is `s` (the line weight minus one); in
/// exhaustive mode the search runs over increasing weights up to `n`.
pub fn repair_degree(code: &BlrcCode, i: usize, mode: Mode, guard: SearchGuard) -> Result<usize> {
    if i >= code.n() {
        return Err(RepairError::CoordinateOutOfRange(i));
    }
    match mode {
        Mode::Geometric => Ok(code.params().s),
        Mode::Exhaustive => {
            let table = ColumnTable::new(code);
            exhaustive_degree(code, &table, i, guard)
        }
    }
}

fn exhaustive_degree(code: &BlrcCode, table: &ColumnTable, i: usize, guard: SearchGuard) -> Result<usize> {
    // Lines have weight s + 1, so the search never needs to go further.
    let cap = code.params().s + 1;
    check_guard(code.n(), cap, guard)?;
    min_dual_weight(table, i, cap).map(|w| w - 1).ok_or(RepairError::NoRepairVector { coordinate: i, max_weight: cap })
}

pub fn overall_repair_degree(code: &BlrcCode, mode: Mode, guard: SearchGuard) -> Result<usize> {
    let table = ColumnTable::new(code);
    let degrees = (0..code.n())
        .into_par_iter()
        .map(|i| match mode {
            Mode::Geometric => Ok(code.params().s),
            Mode::Exhaustive => exhaustive_degree(code, &table, i, guard),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(degrees.into_iter().max().unwrap_or(0))
}

/// `a(i)` for the given radius `r`.
pub fn alternativity(code: &BlrcCode, i: usize, r: usize, mode: Mode, guard: SearchGuard) -> Result<usize> {
    Ok(symbol_sets(code, i, r, mode, guard)?.len())
}

pub fn overall_alternativity(code: &BlrcCode, r: usize, mode: Mode, guard: SearchGuard) -> Result<usize> {
    let sets = RepairSets::build(code, mode, r, guard)?;
    Ok((0..code.n()).map(|i| sets.alternativity(i)).min().unwrap_or(0))
}

/// `δ(i)` for the given radius `r`.
pub fn tolerance(code: &BlrcCode, i: usize, r: usize, mode: Mode, guard: SearchGuard) -> Result<Tolerance> {
    let vectors = symbol_sets(code, i, r, mode, guard)?;
    let sets: Vec<Vec<usize>> = vectors.iter().map(|v| v.repair_set(i)).collect();
    let blocking_set = min_hitting_set(&sets).ok_or(RepairError::Unblockable(i))?;
    Ok(Tolerance { size: blocking_set.len(), blocking_set })
}

pub fn overall_tolerance(code: &BlrcCode, r: usize, mode: Mode, guard: SearchGuard) -> Result<usize> {
    let sets = RepairSets::build(code, mode, r, guard)?;
    let sizes = (0..code.n()).map(|i| sets.tolerance(i).map(|t| t.size)).collect::<Result<Vec<_>>>()?;
    Ok(sizes.into_iter().min().unwrap_or(0))
}

/// True iff every coordinate has the same `δ(i)`.
pub fn is_balanced(code: &BlrcCode, r: usize, mode: Mode, guard: SearchGuard) -> Result<bool> {
    let sets = RepairSets::build(code, mode, r, guard)?;
    let sizes = (0..code.n()).map(|i| sets.tolerance(i).map(|t| t.size)).collect::<Result<Vec<_>>>()?;
    Ok(sizes.windows(2).all(|w| w[0] == w[1]))
}

fn symbol_sets(code: &BlrcCode, i: usize, r: usize, mode: Mode, guard: SearchGuard) -> Result<Vec<RepairVector>> {
    match mode {
        Mode::Geometric => {
            let mut v = line_repair_sets(code, i)?;
            v.retain(|rv| rv.weight() <= r + 1);
            Ok(v)
        }
        Mode::Exhaustive => omega_r(code, i, r, guard),
    }
}

/// Per-symbol and overall `(r, a, δ)` of a code, computed in one mode.
#[derive(Clone, Debug, Serialize)]
pub struct RepairProfile {
    pub mode: Mode,
    /// The `r` used to form `Ω_r(i)` for alternativity and tolerance.
    pub radius: usize,
    pub repair_degree: Vec<usize>,
    pub alternativity: Vec<usize>,
    pub tolerance: Vec<usize>,
    pub overall: OverallMetrics,
    pub balanced: bool,
    /// For each coordinate, the repair sets `supp(v) \ {i}` of `Ω_r(i)`.
    pub repair_supports: Vec<Vec<Vec<usize>>>,
    /// For each coordinate, a minimum blocking set (size `δ(i)`).
    pub blocking_sets: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OverallMetrics {
    pub r: usize,
    pub a: usize,
    pub delta: usize,
    /// Unavailable nodes under which every symbol is still locally
    /// repairable: `δ − 1`.
    pub guaranteed_unavailable: usize,
}

impl RepairProfile {
    /// Profile with `Ω_r` taken at `radius`, or at the designed degree `s`
    /// when `radius` is `None`.
    pub fn compute(code: &BlrcCode, mode: Mode, radius: Option<usize>, guard: SearchGuard) -> Result<Self> {
        let radius = radius.unwrap_or(code.params().s);
        let sets = RepairSets::build(code, mode, radius, guard)?;
        Self::from_sets(code, &sets, guard)
    }

    pub fn from_sets(code: &BlrcCode, sets: &RepairSets, guard: SearchGuard) -> Result<Self> {
        let n = code.n();
        let table = ColumnTable::new(code);
        let repair_degree = (0..n)
            .into_par_iter()
            .map(|i| {
                // Ω_r(i) already holds every vector of weight ≤ radius + 1,
                // so a nonempty one gives r(i) directly in either mode.
                match (sets.mode, sets.for_symbol(i).first()) {
                    (Mode::Exhaustive, Some(v)) => Ok(v.weight() - 1),
                    (Mode::Exhaustive, None) => exhaustive_degree(code, &table, i, guard),
                    (Mode::Geometric, _) => Ok(code.params().s),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let alternativity: Vec<usize> = (0..n).map(|i| sets.alternativity(i)).collect();
        let tolerances = (0..n).into_par_iter().map(|i| sets.tolerance(i)).collect::<Result<Vec<_>>>()?;
        let tolerance: Vec<usize> = tolerances.iter().map(|t| t.size).collect();
        let delta = tolerance.iter().copied().min().unwrap_or(0);
        let overall = OverallMetrics {
            r: repair_degree.iter().copied().max().unwrap_or(0),
            a: alternativity.iter().copied().min().unwrap_or(0),
            delta,
            guaranteed_unavailable: delta.saturating_sub(1),
        };
        Ok(Self {
            mode: sets.mode,
            radius: sets.radius,
            balanced: tolerance.windows(2).all(|w| w[0] == w[1]),
            repair_supports: (0..n).map(|i| sets.for_symbol(i).iter().map(|v| v.repair_set(i)).collect()).collect(),
            blocking_sets: tolerances.into_iter().map(|t| t.blocking_set).collect(),
            repair_degree,
            alternativity,
            tolerance,
            overall,
        })
    }
}
