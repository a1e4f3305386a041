//! Rank and rate bounds for partial-geometry codes, and the catalog of
//! practical `(r, a)` parameters from known generalized quadrangles.
//!
//! With `n = |P|` points and `ϑ = st(s+1)(t+1) / (α(t+s+1−α))`, the 2-rank of
//! the incidence matrix is at most `ϑ + 1` (its rank over the rationals).
//! Substituting `rank = ϑ + 1` into `R = (n − rank)/n` gives a lower rate
//! bound; substituting `rank = ϑ` gives an upper rate bound, stated for
//! `s + t + 1 − α` even. Both are largest at `α = 1`, and with `s = r`,
//! `t = a − 1` they become [`rate_lower`] and [`rate_upper`].
//!
//! The upper bound relies on `ϑ ≤ rank`. That inequality is guaranteed when
//! `s + t + 1 − α` is odd (the eigenvalue `s + t + 1 − α` of `NᵀN` then
//! survives reduction mod 2), but not when it is even: W(8) has 2-rank 298
//! against `ϑ = 324`, and the T₂*(O) quadrangles for q = 8, 16 fall short too.
//! [`rate_upper`] is nevertheless evaluated under the even condition, since
//! the catalog filter is defined in those terms.
//!
//! All arithmetic is exact.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::code::BlrcCode;
use crate::geometry::{dual, elliptic_quadric_gq, grid, hyperoval_gq, symplectic_gq, IncidenceStructure};

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid parameters (s, t, alpha) = ({s}, {t}, {alpha}): need s, t >= 1 and 1 <= alpha <= min(s+1, t+1)")]
    InvalidGeometry { s: usize, t: usize, alpha: usize },
    #[error("invalid parameters (r, a) = ({r}, {a}): need r >= 2 and a >= 2")]
    InvalidRepair { r: usize, a: usize },
    #[error("unknown estimator {0:?}; expected theorem-lower-bound, theorem-upper-bound or exact-rank")]
    UnknownEstimator(String),
    #[error("empty range")]
    EmptyRange,
}

pub type Result<T, E = BoundsError> = std::result::Result<T, E>;

fn q(n: usize) -> Rational {
    Rational::from_integer(n as i64)
}

fn check_geometry(s: usize, t: usize, alpha: usize) -> Result<()> {
    if s == 0 || t == 0 || alpha == 0 || alpha > s.min(t) + 1 {
        return Err(BoundsError::InvalidGeometry { s, t, alpha });
    }
    Ok(())
}

fn check_repair(r: usize, a: usize) -> Result<()> {
    if r < 2 || a < 2 {
        return Err(BoundsError::InvalidRepair { r, a });
    }
    Ok(())
}

/// `ϑ(s, t, α)`.
pub fn vartheta(s: usize, t: usize, alpha: usize) -> Result<Rational> {
    check_geometry(s, t, alpha)?;
    Ok(q(s * t * (s + 1) * (t + 1)) / q(alpha * (t + s + 1 - alpha)))
}

/// Number of points `(s+1)(st+α)/α` of a `pg(s, t, α)`.
pub fn num_points(s: usize, t: usize, alpha: usize) -> Result<Rational> {
    check_geometry(s, t, alpha)?;
    Ok(q((s + 1) * (s * t + alpha)) / q(alpha))
}

/// True when `s + t + 1 − α` is even.
pub fn rank_parity_even(s: usize, t: usize, alpha: usize) -> bool {
    (s + t + 1 - alpha).is_multiple_of(2)
}

/// `1 − (ϑ + 1)/n` for a general `pg(s, t, α)`.
pub fn pg_rate_lower(s: usize, t: usize, alpha: usize) -> Result<Rational> {
    let n = num_points(s, t, alpha)?;
    Ok((n - vartheta(s, t, alpha)? - 1) / n)
}

/// `1 − ϑ/n` for a general `pg(s, t, α)`, or `None` when the parity
/// condition fails.
pub fn pg_rate_upper(s: usize, t: usize, alpha: usize) -> Result<Option<Rational>> {
    let n = num_points(s, t, alpha)?;
    let theta = vartheta(s, t, alpha)?;
    Ok(rank_parity_even(s, t, alpha).then(|| (n - theta) / n))
}

/// `r² / ((a + r − 1)(r + 1))`.
pub fn rate_lower(r: usize, a: usize) -> Result<Rational> {
    check_repair(r, a)?;
    Ok(q(r * r) / q((a + r - 1) * (r + 1)))
}

/// `(a(r² − r + 1) − (r − 1)²) / ((a + r − 1)(r(a − 1) + 1))` when `r + a − 1`
/// is even; `None` otherwise.
pub fn rate_upper(r: usize, a: usize) -> Result<Option<Rational>> {
    check_repair(r, a)?;
    if !(r + a - 1).is_multiple_of(2) {
        return Ok(None);
    }
    let num = q(a * (r * r - r + 1)) - q((r - 1) * (r - 1));
    Ok(Some(num / q((a + r - 1) * (r * (a - 1) + 1))))
}

fn ser_ratio<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

fn ser_opt_ratio<S: Serializer>(value: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn to_f64(value: Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// Rate bounds of an `(r, a)` code built from a `pg(r, a − 1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RateBounds {
    pub r: usize,
    pub a: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub upper: Option<Rational>,
    #[serde(serialize_with = "ser_ratio")]
    pub vartheta: Rational,
}

impl RateBounds {
    pub fn new(r: usize, a: usize) -> Result<Self> {
        Ok(Self { r, a, lower: rate_lower(r, a)?, upper: rate_upper(r, a)?, vartheta: vartheta(r, a - 1, 1)? })
    }
}

/// Bounds for every `(r, a)` in the ranges, ordered by `r` then `a`.
pub fn bounds_table(
    r_range: std::ops::RangeInclusive<usize>,
    a_range: std::ops::RangeInclusive<usize>,
) -> Result<Vec<RateBounds>> {
    if r_range.is_empty() || a_range.is_empty() {
        return Err(BoundsError::EmptyRange);
    }
    r_range.flat_map(|r| a_range.clone().map(move |a| RateBounds::new(r, a))).collect()
}

/// CSV with exact `p/q` columns followed by decimal columns rounded to six
/// places. An inapplicable upper bound is `NA`.
pub fn bounds_csv(rows: &[RateBounds]) -> String {
    let mut out = String::from("r,a,rate_lower,rate_upper,applicable,rate_lower_decimal,rate_upper_decimal\n");
    for row in rows {
        let (upper, upper_dec) = match row.upper {
            Some(u) => (u.to_string(), format!("{:.6}", to_f64(u))),
            None => ("NA".to_string(), "NA".to_string()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6},{}",
            row.r,
            row.a,
            row.lower,
            upper,
            row.upper.is_some(),
            to_f64(row.lower),
            upper_dec
        );
    }
    out
}

/// How the catalog estimates the rate of an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    TheoremLowerBound,
    /// Falls back to the lower bound when the upper bound does not apply.
    #[default]
    TheoremUpperBound,
    /// Builds the code when a constructor exists; otherwise falls back to the
    /// upper bound (then the lower bound).
    ExactRank,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TheoremLowerBound => "theorem-lower-bound",
            Self::TheoremUpperBound => "theorem-upper-bound",
            Self::ExactRank => "exact-rank",
        }
    }
}

impl FromStr for Estimator {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem-lower-bound" | "lower" => Ok(Self::TheoremLowerBound),
            "theorem-upper-bound" | "upper" => Ok(Self::TheoremUpperBound),
            "exact-rank" | "exact" => Ok(Self::ExactRank),
            other => Err(BoundsError::UnknownEstimator(other.to_string())),
        }
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a GQ parameter pair comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GqSource {
    Sporadic,
    /// `(1, z)` and its dual, the `(z + 1) × (z + 1)` grid.
    Trivial,
    /// `(q − 1, q + 1)`.
    QMinusOneQPlusOne,
    /// `(q, q)`.
    QQ,
    /// `(q, q²)`.
    QQSquared,
    /// `(q², q³)`.
    QSquaredQCubed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Retained,
    RateTooLow,
    TooLong,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub s: usize,
    pub t: usize,
    pub r: usize,
    pub a: usize,
    /// True when `(s, t)` is the dual of a listed pair.
    pub dual: bool,
    pub source: GqSource,
    pub n: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub rate: Rational,
    pub rate_decimal: String,
    /// Estimator that actually produced `rate`.
    pub estimator: Estimator,
    pub verdict: Verdict,
}

impl CatalogEntry {
    pub fn passes_filter(&self) -> bool {
        self.verdict == Verdict::Retained
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Catalog {
    pub max_n: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub min_rate: Rational,
    pub estimator: Estimator,
    pub entries: Vec<CatalogEntry>,
    /// Surviving `(r, a)` pairs, deduplicated, ordered by `r` then `a`.
    pub retained: Vec<(usize, usize)>,
    /// Range of `r` over surviving `(r, 2)` pairs, reported as one family.
    pub grid_family: Option<(usize, usize)>,
    /// Surviving pairs with `a > 2`.
    pub other_pairs: Vec<(usize, usize)>,
}

const SPORADIC: [(usize, usize); 9] = [(2, 2), (2, 4), (3, 3), (3, 9), (3, 5), (4, 4), (4, 6), (4, 8), (4, 16)];

fn prime_powers_up_to(limit: usize) -> Vec<usize> {
    (2..=limit).filter(|&q| crate::algebra::is_prime_power(q)).collect()
}

fn gq_points(s: usize, t: usize) -> usize {
    (s + 1) * (s * t + 1)
}

/// Known GQ parameter pairs `(s, t, source, dual)`: the sporadic list in full,
/// and members of the infinite families while either orientation has at most
/// `max_n` points. Pairs with `s = 1` are dropped (no locality beyond
/// replication); their duals are kept.
pub fn known_gq_pairs(max_n: usize) -> Vec<(usize, usize, GqSource, bool)> {
    let mut out: Vec<(usize, usize, GqSource, bool)> = Vec::new();
    let mut push = |s: usize, t: usize, source: GqSource| {
        for (s, t, is_dual) in [(s, t, false), (t, s, true)] {
            if s >= 2 && !out.iter().any(|e| e.0 == s && e.1 == t) {
                out.push((s, t, source, is_dual));
            }
        }
    };
    let small = |s: usize, t: usize| gq_points(s, t).min(gq_points(t, s)) <= max_n;
    for z in 1..=max_n {
        if small(1, z) {
            push(1, z, GqSource::Trivial);
        }
    }
    for q in prime_powers_up_to(max_n) {
        let candidates = [
            (q - 1, q + 1, GqSource::QMinusOneQPlusOne),
            (q, q, GqSource::QQ),
            (q, q * q, GqSource::QQSquared),
            (q * q, q * q * q, GqSource::QSquaredQCubed),
        ];
        for (s, t, source) in candidates {
            if small(s, t) {
                push(s, t, source);
            }
        }
    }
    // Last, so that pairs also covered by a family keep the family label.
    for (s, t) in SPORADIC {
        push(s, t, GqSource::Sporadic);
    }
    out.sort_by_key(|e| (e.0, e.1 + 1));
    out
}

/// A construction for `GQ(s, t)` when one is available here.
pub fn construct_gq(s: usize, t: usize) -> Option<IncidenceStructure> {
    let primal = |s: usize, t: usize| -> Option<IncidenceStructure> {
        if t == 1 {
            return grid(s).ok();
        }
        if s == t {
            return symplectic_gq(s).ok();
        }
        if t == s * s {
            return elliptic_quadric_gq(s).ok();
        }
        if s + 2 == t {
            return hyperoval_gq(s + 1).ok();
        }
        None
    };
    primal(s, t).or_else(|| primal(t, s).map(|g| dual(&g)))
}

fn estimate(s: usize, t: usize, n: usize, max_n: usize, estimator: Estimator) -> (Rational, Estimator) {
    let r = s;
    let a = t + 1;
    let lower = rate_lower(r, a).expect("s >= 2, t >= 1");
    let upper = rate_upper(r, a).expect("s >= 2, t >= 1");
    let by_bounds = |pref: Estimator| match (pref, upper) {
        (Estimator::TheoremUpperBound, Some(u)) => (u, Estimator::TheoremUpperBound),
        _ => (lower, Estimator::TheoremLowerBound),
    };
    match estimator {
        Estimator::TheoremLowerBound => by_bounds(Estimator::TheoremLowerBound),
        Estimator::TheoremUpperBound => by_bounds(Estimator::TheoremUpperBound),
        Estimator::ExactRank => {
            let built = if n <= max_n { construct_gq(s, t) } else { None };
            match built.and_then(|g| BlrcCode::build(&g).ok()) {
                Some(code) => (Rational::new(code.k() as i64, code.n() as i64), Estimator::ExactRank),
                None => by_bounds(Estimator::TheoremUpperBound),
            }
        }
    }
}

/// Known GQ parameter sets filtered to `n ≤ max_n` and estimated rate
/// strictly above `min_rate`.
pub fn catalog(max_n: usize, min_rate: Rational, estimator: Estimator) -> Catalog {
    let entries: Vec<CatalogEntry> = known_gq_pairs(max_n)
        .into_iter()
        .map(|(s, t, source, is_dual)| {
            let n = gq_points(s, t);
            let (rate, used) = estimate(s, t, n, max_n, estimator);
            let verdict = if n > max_n {
                Verdict::TooLong
            } else if rate <= min_rate {
                Verdict::RateTooLow
            } else {
                Verdict::Retained
            };
            CatalogEntry {
                s,
                t,
                r: s,
                a: t + 1,
                dual: is_dual,
                source,
                n,
                rate,
                rate_decimal: format!("{:.6}", to_f64(rate)),
                estimator: used,
                verdict,
            }
        })
        .collect();
    let mut retained: Vec<(usize, usize)> = entries.iter().filter(|e| e.passes_filter()).map(|e| (e.r, e.a)).collect();
    retained.sort_unstable();
    retained.dedup();
    let grid_rs: Vec<usize> = retained.iter().filter(|p| p.1 == 2).map(|p| p.0).collect();
    Catalog {
        max_n,
        min_rate,
        estimator,
        grid_family: grid_rs.first().map(|&lo| (lo, *grid_rs.last().unwrap())),
        other_pairs: retained.iter().copied().filter(|p| p.1 != 2).collect(),
        retained,
        entries,
    }
}

impl Catalog {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,r,a,dual,source,n,rate,rate_decimal,estimator,verdict\n");
        for e in &self.entries {
            let source = serde_json::to_value(e.source).expect("enum serializes");
            let verdict = serde_json::to_value(e.verdict).expect("enum serializes");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                e.s,
                e.t,
                e.r,
                e.a,
                e.dual,
                source.as_str().unwrap_or_default(),
                e.n,
                e.rate,
                e.rate_decimal,
                e.estimator,
                verdict.as_str().unwrap_or_default()
            );
        }
        out
    }
}
