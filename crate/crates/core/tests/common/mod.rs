//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's elimination, search or hitting-set code.

#![allow(dead_code)]

use std::path::PathBuf;

use pgblrc::geometry::{dual, elliptic_quadric_gq, grid, hyperoval_gq, symplectic_gq, IncidenceStructure};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Named instances with their advertised (s, t, alpha).
pub fn instances() -> Vec<(&'static str, IncidenceStructure, (usize, usize, usize))> {
    let mut out = Vec::new();
    for s in 1..=9 {
        let name: &'static str = Box::leak(format!("grid({s})").into_boxed_str());
        out.push((name, grid(s).unwrap(), (s, 1, 1)));
    }
    for q in [2, 3, 4] {
        let name: &'static str = Box::leak(format!("W({q})").into_boxed_str());
        out.push((name, symplectic_gq(q).unwrap(), (q, q, 1)));
    }
    let q2 = elliptic_quadric_gq(2).unwrap();
    out.push(("dual Q-(5,2)", dual(&q2), (4, 2, 1)));
    out.push(("Q-(5,2)", q2, (2, 4, 1)));
    let h4 = hyperoval_gq(4).unwrap();
    out.push(("dual T2*(O,4)", dual(&h4), (5, 3, 1)));
    out.push(("T2*(O,4)", h4, (3, 5, 1)));
    out
}

/// Line-indicator rows packed into u64 words.
pub fn incidence_words(inc: &IncidenceStructure) -> Vec<Vec<u64>> {
    let words = inc.num_points().div_ceil(64);
    inc.lines()
        .iter()
        .map(|line| {
            let mut row = vec![0u64; words];
            for &p in line {
                row[p / 64] |= 1 << (p % 64);
            }
            row
        })
        .collect()
}

/// GF(2) rank by plain forward elimination.
pub fn rank_words(mut rows: Vec<Vec<u64>>) -> usize {
    let Some(width) = rows.first().map(|r| r.len() * 64) else { return 0 };
    let mut rank = 0;
    for col in 0..width {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn incidence_rank(inc: &IncidenceStructure) -> usize {
    rank_words(incidence_words(inc))
}

pub fn mask(support: &[usize]) -> u128 {
    support.iter().fold(0u128, |m, &p| m | 1 << p)
}

pub fn support(mask: u128) -> Vec<usize> {
    (0..128).filter(|&i| mask >> i & 1 == 1).collect()
}

/// A basis of the line space (the dual code), for n ≤ 128.
pub fn dual_basis(inc: &IncidenceStructure) -> Vec<u128> {
    assert!(inc.num_points() <= 128);
    let mut basis: Vec<u128> = Vec::new();
    for line in inc.lines() {
        let mut v = mask(line);
        for &b in &basis {
            let lead = 127 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            // keep basis sorted by decreasing leading bit
            basis.push(v);
            basis.sort_by_key(|b| std::cmp::Reverse(127 - b.leading_zeros()));
        }
    }
    basis
}

/// Calls `f` on every nonzero dual codeword (Gray-code walk of the span).
pub fn for_each_dual_codeword(inc: &IncidenceStructure, mut f: impl FnMut(u128)) {
    let basis = dual_basis(inc);
    let m = basis.len();
    assert!(m < 30, "dual too large to enumerate");
    let mut cur = 0u128;
    for g in 1u64..(1u64 << m) {
        cur ^= basis[g.trailing_zeros() as usize];
        f(cur);
    }
}

pub struct OracleProfile {
    pub repair_degree: Vec<usize>,
    pub alternativity: Vec<usize>,
    pub tolerance: Vec<usize>,
    /// Supports of Ω_r(i), sorted.
    pub omega: Vec<Vec<Vec<usize>>>,
}

/// Repair metrics from the full dual code, with Ω taken at `radius`.
pub fn oracle_profile(inc: &IncidenceStructure, radius: usize) -> OracleProfile {
    let n = inc.num_points();
    let mut min_weight = vec![usize::MAX; n];
    let mut omega: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for_each_dual_codeword(inc, |c| {
        let w = c.count_ones() as usize;
        for i in support(c) {
            min_weight[i] = min_weight[i].min(w);
            if w <= radius + 1 {
                omega[i].push(support(c));
            }
        }
    });
    for o in &mut omega {
        o.sort();
    }
    let tolerance = (0..n)
        .map(|i| {
            let sets: Vec<Vec<usize>> =
                omega[i].iter().map(|s| s.iter().copied().filter(|&j| j != i).collect()).collect();
            brute_hitting_set(&sets).len()
        })
        .collect();
    OracleProfile {
        repair_degree: min_weight.iter().map(|w| w - 1).collect(),
        alternativity: omega.iter().map(Vec::len).collect(),
        tolerance,
        omega,
    }
}

/// Smallest hitting set by trying subsets of the union in order of size.
pub fn brute_hitting_set(sets: &[Vec<usize>]) -> Vec<usize> {
    let mut universe: Vec<usize> = sets.iter().flatten().copied().collect();
    universe.sort_unstable();
    universe.dedup();
    assert!(universe.len() < 24);
    let u = universe.len();
    let mut best: Option<u32> = None;
    for m in 0u32..(1 << u) {
        if best.is_some_and(|b| b.count_ones() <= m.count_ones()) {
            continue;
        }
        let hits = sets.iter().all(|s| s.iter().any(|e| m >> universe.binary_search(e).unwrap() & 1 == 1));
        if hits {
            best = Some(m);
        }
    }
    let best = best.expect("the full universe hits every nonempty set");
    (0..u).filter(|&k| best >> k & 1 == 1).map(|k| universe[k]).collect()
}

/// Exactly α points of each non-incident line are collinear with a point,
/// checked pair by pair. Returns the set of counts seen.
pub fn alpha_counts(inc: &IncidenceStructure) -> Vec<usize> {
    let n = inc.num_points();
    let mut collinear = vec![vec![false; n]; n];
    for line in inc.lines() {
        for &a in line {
            for &b in line {
                collinear[a][b] = a != b;
            }
        }
    }
    let mut seen: Vec<usize> = Vec::new();
    for line in inc.lines() {
        for (p, near) in collinear.iter().enumerate() {
            if line.contains(&p) {
                continue;
            }
            let c = line.iter().filter(|&&q| near[q]).count();
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
    }
    seen.sort_unstable();
    seen
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
