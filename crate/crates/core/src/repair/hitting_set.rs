//! Exact minimum hitting set by branch and bound.
//!
//! Instances here are tiny (at most a few dozen sets of size ≤ r), so a plain
//! search with a greedy upper bound and a disjoint-packing lower bound is
//! plenty.

/// A smallest set of elements meeting every set in `sets`, sorted ascending.
/// Returns `None` if some set is empty (nothing can hit it). Ties between
/// optimal solutions are broken deterministically.
pub fn min_hitting_set(sets: &[Vec<usize>]) -> Option<Vec<usize>> {
    if sets.iter().any(Vec::is_empty) {
        return None;
    }
    if sets.is_empty() {
        return Some(Vec::new());
    }
    let mut best = greedy(sets);
    let mut chosen = Vec::new();
    let mut hit = vec![false; sets.len()];
    branch(sets, &mut hit, &mut chosen, &mut best);
    best.sort_unstable();
    Some(best)
}

/// Greedy cover: repeatedly take the element meeting the most unhit sets
/// (smallest element on ties).
fn greedy(sets: &[Vec<usize>]) -> Vec<usize> {
    let mut hit = vec![false; sets.len()];
    let mut picked = Vec::new();
    while hit.iter().any(|h| !h) {
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        for (s, set) in sets.iter().enumerate() {
            if !hit[s] {
                for &e in set {
                    *counts.entry(e).or_default() += 1;
                }
            }
        }
        let (&e, _) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).expect("an unhit set is nonempty");
        picked.push(e);
        for (s, set) in sets.iter().enumerate() {
            if set.contains(&e) {
                hit[s] = true;
            }
        }
    }
    picked
}

/// Number of pairwise disjoint unhit sets found greedily; each needs its own
/// element, so this bounds the remaining cost from below.
fn packing_bound(sets: &[Vec<usize>], hit: &[bool]) -> usize {
    let mut used: Vec<usize> = Vec::new();
    let mut count = 0;
    for (s, set) in sets.iter().enumerate() {
        if hit[s] || set.iter().any(|e| used.contains(e)) {
            continue;
        }
        used.extend_from_slice(set);
        count += 1;
    }
    count
}

fn branch(sets: &[Vec<usize>], hit: &mut [bool], chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
    // Branch on the smallest unhit set.
    let Some(target) = (0..sets.len()).filter(|&s| !hit[s]).min_by_key(|&s| (sets[s].len(), s)) else {
        if chosen.len() < best.len() {
            best.clone_from(chosen);
        }
        return;
    };
    if chosen.len() + packing_bound(sets, hit) >= best.len() {
        return;
    }
    for &e in &sets[target] {
        let newly: Vec<usize> = (0..sets.len()).filter(|&s| !hit[s] && sets[s].contains(&e)).collect();
        for &s in &newly {
            hit[s] = true;
        }
        chosen.push(e);
        branch(sets, hit, chosen, best);
        chosen.pop();
        for &s in &newly {
            hit[s] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Smallest hitting set size by trying subsets of the union in order of size.
    fn brute_force(sets: &[Vec<usize>]) -> usize {
        let mut universe: Vec<usize> = sets.iter().flatten().copied().collect();
        universe.sort_unstable();
        universe.dedup();
        let u = universe.len();
        (0u32..(1 << u))
            .filter(|mask| {
                sets.iter().all(|set| {
                    set.iter().any(|e| {
                        let pos = universe.binary_search(e).unwrap();
                        mask >> pos & 1 == 1
                    })
                })
            })
            .map(u32::count_ones)
            .min()
            .unwrap() as usize
    }

    #[test]
    fn disjoint_pairs_need_one_each() {
        let sets = vec![vec![1, 2], vec![3, 6]];
        assert_eq!(min_hitting_set(&sets), Some(vec![1, 3]));
    }

    #[test]
    fn shared_element() {
        let sets = vec![vec![1, 2], vec![2, 3], vec![2, 4]];
        assert_eq!(min_hitting_set(&sets), Some(vec![2]));
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(min_hitting_set(&[]), Some(vec![]));
        assert_eq!(min_hitting_set(&[vec![1], vec![]]), None);
    }

    #[test]
    fn greedy_is_not_optimal_here() {
        // Greedy takes 0 first (hits 3 sets) then needs two more; optimum is 2.
        let sets = vec![vec![0, 1], vec![0, 2], vec![0, 5], vec![1, 3], vec![2, 4], vec![3, 4], vec![5, 4]];
        let best = min_hitting_set(&sets).unwrap();
        assert_eq!(best.len(), brute_force(&sets));
    }

    #[test]
    fn removing_a_set_never_increases_size() {
        let sets = vec![vec![1, 2], vec![3, 4], vec![5, 6]];
        assert_eq!(min_hitting_set(&sets).unwrap().len(), 3);
        assert_eq!(min_hitting_set(&sets[..2]).unwrap().len(), 2);
    }

    proptest! {
        #[test]
        fn matches_brute_force(sets in proptest::collection::vec(
            proptest::collection::btree_set(0usize..12, 1..4), 0..8)) {
            let sets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
            let best = min_hitting_set(&sets).unwrap();
            prop_assert_eq!(best.len(), brute_force(&sets));
            for set in &sets {
                prop_assert!(set.iter().any(|e| best.contains(e)));
            }
        }
    }
}
