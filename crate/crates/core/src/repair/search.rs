//! Exhaustive search for low-weight dual codewords through a coordinate.
//!
//! Over GF(2) a dual codeword is determined by its support `S`, and it lies in
//! C⊥ exactly when the columns of the generator indexed by `S` sum to zero.
//! The search walks supports `{i} ∪ T` with `T` drawn from the other
//! coordinates in lexicographic order, carrying the running column sum down
//! the recursion.

use crate::algebra::words_for;
use crate::code::{binomial, BlrcCode};

use super::{RepairError, SearchGuard};

/// Generator columns packed contiguously, `words` u64s per column.
pub(crate) struct ColumnTable {
    words: usize,
    data: Vec<u64>,
    n: usize,
}

impl ColumnTable {
    pub(crate) fn new(code: &BlrcCode) -> Self {
        let k = code.k();
        let words = words_for(k).max(1);
        let n = code.n();
        let mut data = vec![0u64; n * words];
        for (r, row) in code.generator().rows().iter().enumerate() {
            for c in row.iter_ones() {
                data[c * words + r / 64] |= 1 << (r % 64);
            }
        }
        Self { words, data, n }
    }

    fn column(&self, c: usize) -> &[u64] {
        &self.data[c * self.words..(c + 1) * self.words]
    }
}

/// Number of supports containing `i` with at most `max_weight` elements.
pub(crate) fn candidate_count(n: usize, max_weight: usize) -> u64 {
    (0..max_weight.min(n))
        .map(|extra| binomial(n as u64 - 1, extra as u64).unwrap_or(u64::MAX))
        .fold(0u64, u64::saturating_add)
}

pub(crate) fn check_guard(n: usize, max_weight: usize, guard: SearchGuard) -> Result<(), RepairError> {
    let required = candidate_count(n, max_weight);
    if required > guard.max_candidates {
        return Err(RepairError::GuardExceeded { required, limit: guard.max_candidates });
    }
    Ok(())
}

/// All supports `S ∋ i` with `|S| ≤ max_weight` whose indicator is a dual
/// codeword, sorted by weight and then lexicographically.
pub(crate) fn dual_supports(table: &ColumnTable, i: usize, max_weight: usize) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    let mut walker = Walker::new(table, i);
    walker.run(
        max_weight.saturating_sub(1),
        &mut |support: &[usize]| {
            found.push(support.to_vec());
        },
        None,
    );
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
}

/// Smallest weight of a dual codeword through `i`, searching weights
/// `1..=max_weight`; `None` if there is none in that range.
pub(crate) fn min_dual_weight(table: &ColumnTable, i: usize, max_weight: usize) -> Option<usize> {
    let mut walker = Walker::new(table, i);
    for weight in 1..=max_weight.min(table.n) {
        let mut hit = false;
        walker.run(weight - 1, &mut |_| hit = true, Some(weight - 1));
        if hit {
            return Some(weight);
        }
    }
    None
}

struct Walker<'a> {
    table: &'a ColumnTable,
    others: Vec<usize>,
    i: usize,
    /// acc[d] is the column sum after choosing d extra coordinates.
    acc: Vec<u64>,
    chosen: Vec<usize>,
}

impl<'a> Walker<'a> {
    fn new(table: &'a ColumnTable, i: usize) -> Self {
        Self { table, others: (0..table.n).filter(|&c| c != i).collect(), i, acc: Vec::new(), chosen: Vec::new() }
    }

    /// Visits every support with up to `max_extra` extra coordinates (or
    /// exactly `only` of them) whose column sum vanishes.
    fn run(&mut self, max_extra: usize, visit: &mut dyn FnMut(&[usize]), only: Option<usize>) {
        let w = self.table.words;
        self.acc = vec![0; w * (max_extra + 1)];
        self.acc[..w].copy_from_slice(self.table.column(self.i));
        self.chosen.clear();
        self.chosen.push(self.i);
        self.descend(0, 0, max_extra, visit, only);
    }

    fn descend(
        &mut self,
        depth: usize,
        start: usize,
        max_extra: usize,
        visit: &mut dyn FnMut(&[usize]),
        only: Option<usize>,
    ) {
        let w = self.table.words;
        if only.is_none_or(|d| d == depth) && self.acc[depth * w..(depth + 1) * w].iter().all(|&x| x == 0) {
            let mut support = self.chosen.clone();
            support.sort_unstable();
            visit(&support);
        }
        if depth == max_extra {
            return;
        }
        for pos in start..self.others.len() {
            let c = self.others[pos];
            let (head, tail) = self.acc.split_at_mut((depth + 1) * w);
            let cur = &head[depth * w..];
            let col = self.table.column(c);
            for j in 0..w {
                tail[j] = cur[j] ^ col[j];
            }
            self.chosen.push(c);
            self.descend(depth + 1, pos + 1, max_extra, visit, only);
            self.chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::grid;

    #[test]
    fn candidate_counts() {
        assert_eq!(candidate_count(9, 3), 1 + 8 + 28);
        assert_eq!(candidate_count(4, 10), 8);
    }

    #[test]
    fn grid2_supports_are_lines() {
        let code = BlrcCode::build(&grid(2).unwrap()).unwrap();
        let table = ColumnTable::new(&code);
        assert_eq!(dual_supports(&table, 0, 3), vec![vec![0, 1, 2], vec![0, 3, 6]]);
        assert_eq!(min_dual_weight(&table, 4, 9), Some(3));
        assert_eq!(min_dual_weight(&table, 4, 2), None);
    }

    #[test]
    fn repetition_code_pairs() {
        let code = BlrcCode::build(&grid(1).unwrap()).unwrap();
        let table = ColumnTable::new(&code);
        assert_eq!(dual_supports(&table, 0, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert!(dual_supports(&table, 0, 1).is_empty());
    }
}
