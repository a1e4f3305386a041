mod common;

use std::sync::OnceLock;

use common::{alpha_counts, fixture_path, incidence_rank, instances};
use num_rational::Ratio;
use pgblrc::algebra::BitVec;
use pgblrc::bounds::{pg_rate_lower, pg_rate_upper, rate_lower, rate_upper, vartheta};
use pgblrc::code::BlrcCode;
use pgblrc::geometry::{dual, grid, hyperoval_gq, load, symplectic_gq, validate_pg, IncidenceStructure};
use proptest::prelude::*;

fn codes() -> &'static Vec<(&'static str, BlrcCode)> {
    static CODES: OnceLock<Vec<(&'static str, BlrcCode)>> = OnceLock::new();
    CODES.get_or_init(|| {
        instances()
            .into_iter()
            .filter(|(_, inc, _)| inc.num_points() <= 100)
            .map(|(name, inc, _)| (name, BlrcCode::build(&inc).unwrap()))
            .collect()
    })
}

fn fixtures() -> Vec<(&'static str, IncidenceStructure)> {
    let mut out: Vec<(&'static str, IncidenceStructure)> =
        instances().into_iter().filter(|(_, g, _)| g.num_points() <= 45).map(|(n, g, _)| (n, g)).collect();
    out.push(("fano", load(fixture_path("fano.txt")).unwrap()));
    out
}

#[test]
fn constructors_have_advertised_parameters() {
    for (name, inc, (s, t, alpha)) in instances() {
        let p = validate_pg(&inc).unwrap();
        assert_eq!((p.s, p.t, p.alpha), (s, t, alpha), "{name}");
        assert_eq!(p.num_points * (t + 1), p.num_lines * (s + 1), "{name}");
        assert_eq!(p.num_points, (s + 1) * (s * t + alpha) / alpha, "{name}");
        assert_eq!(p.num_lines, (t + 1) * (s * t + alpha) / alpha, "{name}");
        assert_eq!(alpha_counts(&inc), vec![alpha], "{name}");
    }
}

#[test]
fn dual_is_an_involution() {
    for (name, inc) in fixtures() {
        assert_eq!(dual(&dual(&inc)).canonical(), inc.canonical(), "{name}");
    }
}

#[test]
fn invalid_fixture_is_rejected() {
    let broken = load(fixture_path("broken_grid.txt")).unwrap();
    let err = validate_pg(&broken).unwrap_err();
    assert!(err.to_string().contains("non-uniform line size"), "{err}");
}

#[test]
fn rank_matches_independent_elimination() {
    for (name, code) in codes() {
        assert_eq!(code.m(), incidence_rank(code.geometry()), "{name}");
        assert_eq!(code.k(), code.n() - code.m());
        assert_eq!(code.rate().rate, Ratio::new(code.k() as i64, code.n() as i64));
    }
}

#[test]
fn rank_sandwich() {
    for (name, code) in codes() {
        let p = code.params();
        let theta = vartheta(p.s, p.t, p.alpha).unwrap();
        let m = Ratio::from_integer(code.m() as i64);
        assert!(m <= theta + 1, "{name}");
        // Guaranteed for odd parity; the small even-parity instances here also
        // meet it.
        assert!(theta <= m, "{name}");
    }
}

#[test]
fn even_parity_rank_can_fall_below_vartheta() {
    // (instance, rank from independent elimination, vartheta)
    let fano = load(fixture_path("fano.txt")).unwrap();
    let cases = [
        ("fano", fano, 4, 6),
        ("W(8)", symplectic_gq(8).unwrap(), 298, 324),
        ("T2*(O,8)", hyperoval_gq(8).unwrap(), 299, 315),
    ];
    for (name, inc, rank, theta) in cases {
        let p = validate_pg(&inc).unwrap();
        assert!(p.rank_parity_even(), "{name}");
        assert_eq!(vartheta(p.s, p.t, p.alpha).unwrap(), Ratio::from_integer(theta), "{name}");
        assert_eq!(incidence_rank(&inc), rank as usize, "{name}");
        assert_eq!(BlrcCode::build(&inc).unwrap().m(), rank as usize, "{name}");
    }
    let code = BlrcCode::build(&symplectic_gq(8).unwrap()).unwrap();
    assert!(code.rate().rate > rate_upper(8, 9).unwrap().unwrap());
}

/// The affine plane of order 3: points of Z3², lines `{p + k·d}` for the
/// four directions.
fn affine_plane_3() -> IncidenceStructure {
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for (dx, dy) in [(1, 0), (0, 1), (1, 1), (1, 2)] {
        for x in 0..3 {
            for y in 0..3 {
                let mut l: Vec<usize> = (0..3).map(|k| (x + k * dx) % 3 * 3 + (y + k * dy) % 3).collect();
                l.sort_unstable();
                if !lines.contains(&l) {
                    lines.push(l);
                }
            }
        }
    }
    IncidenceStructure::new(9, lines).unwrap()
}

#[test]
fn odd_parity_rank_meets_vartheta() {
    let mut cases = vec![("AG(2,3)".to_string(), affine_plane_3())];
    for s in [2, 4, 6, 8] {
        let g = grid(s).unwrap();
        cases.push((format!("dual grid({s})"), dual(&g)));
        cases.push((format!("grid({s})"), g));
    }
    for (name, inc) in cases {
        let p = validate_pg(&inc).unwrap();
        assert!(!p.rank_parity_even(), "{name}");
        let theta = vartheta(p.s, p.t, p.alpha).unwrap();
        let m = Ratio::from_integer(incidence_rank(&inc) as i64);
        assert!(theta <= m && m <= theta + 1, "{name}: theta {theta}, rank {m}");
    }
}

#[test]
fn generator_is_orthogonal_to_parity_checks() {
    for (name, code) in codes() {
        let g = code.generator();
        let gh = g.mul(&code.parity_check().transpose());
        assert!(gh.is_zero(), "{name}");
        let gn = g.mul(&code.incidence().transpose());
        assert!(gn.is_zero(), "{name}");
    }
}

#[test]
fn alpha_one_maximizes_the_general_rate_bounds() {
    for s in 1..15 {
        for t in 1..15 {
            let best = pg_rate_lower(s, t, 1).unwrap();
            for alpha in 2..=(s.min(t) + 1) {
                assert!(pg_rate_lower(s, t, alpha).unwrap() <= best, "s={s} t={t} alpha={alpha}");
            }
        }
    }
}

fn code_strategy() -> impl Strategy<Value = usize> {
    0..codes().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encode_then_reconstruct(idx in code_strategy(), bits in proptest::collection::vec(any::<bool>(), 64), seed in any::<u64>()) {
        let (name, code) = &codes()[idx];
        let msg = BitVec::from_bools(&bits[..code.k().min(bits.len())].iter().copied()
            .chain(std::iter::repeat(false)).take(code.k()).collect::<Vec<_>>());
        let c = code.encode(&msg).unwrap();
        prop_assert!(code.is_codeword(&c), "{}", name);
        prop_assert!(code.incidence().mul_vec(&c).is_zero());
        // A pseudo-random coordinate permutation; its first k entries are an
        // information set whenever the submatrix is invertible.
        let n = code.n();
        let mut order: Vec<usize> = (0..n).collect();
        let mut x = seed | 1;
        for i in (1..n).rev() {
            x ^= x << 13; x ^= x >> 7; x ^= x << 17;
            order.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let mut coords: Vec<usize> = order[..code.k()].to_vec();
        coords.sort_unstable();
        let info = code.info_set().to_vec();
        for set in [info, coords] {
            if code.is_information_set(&set) {
                let values = BitVec::from_bools(&set.iter().map(|&j| c.get(j)).collect::<Vec<_>>());
                prop_assert_eq!(code.reconstruct(&set, &values).unwrap(), msg.clone());
            } else {
                let values = BitVec::zeros(set.len());
                prop_assert!(code.reconstruct(&set, &values).is_err());
            }
        }
    }

    #[test]
    fn single_incidence_mutations_are_rejected(idx in 0usize..17, line_seed in any::<usize>(), point_seed in any::<usize>()) {
        let all = fixtures();
        let (name, inc) = &all[idx % all.len()];
        let line = line_seed % inc.num_lines();
        let point = point_seed % inc.num_points();
        if let Ok(mutant) = inc.toggle_incidence(line, point) {
            prop_assert!(validate_pg(&mutant).is_err(), "{} line {} point {}", name, line, point);
        }
    }

    #[test]
    fn repair_bounds_are_the_general_bounds_at_alpha_one(r in 2usize..40, a in 2usize..40) {
        // The closed forms equal (n - theta - 1)/n and (n - theta)/n with
        // n = (r+1)(r(a-1)+1) and theta = r(a-1)(r+1)a/(a+r-1).
        let n = Ratio::from_integer(((r + 1) * (r * (a - 1) + 1)) as i64);
        let theta = Ratio::new((r * (a - 1) * (r + 1) * a) as i64, (a + r - 1) as i64);
        prop_assert_eq!(rate_lower(r, a).unwrap(), (n - theta - 1) / n);
        prop_assert_eq!(pg_rate_lower(r, a - 1, 1).unwrap(), (n - theta - 1) / n);
        let upper = rate_upper(r, a).unwrap();
        prop_assert_eq!(upper.is_some(), (r + a - 1) % 2 == 0);
        if let Some(u) = upper {
            prop_assert_eq!(u, (n - theta) / n);
            prop_assert_eq!(pg_rate_upper(r, a - 1, 1).unwrap(), Some(u));
            prop_assert!(rate_lower(r, a).unwrap() <= u);
        }
        let lower = rate_lower(r, a).unwrap();
        prop_assert!(Ratio::from_integer(0) < lower && lower < Ratio::from_integer(1));
    }
}
