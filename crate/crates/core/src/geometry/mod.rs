//! Partial geometries pg(s, t, α): incidence structures, the axiom validator,
//! duality, and constructors for the generalized quadrangles used by the code
//! catalog.
//!
//! Points are indexed `0..num_points`; each line is a strictly increasing list
//! of point indices. A structure is a pg(s, t, α) when
//!
//! 1. every line has `s + 1` points,
//! 2. every point lies on `t + 1` lines,
//! 3. two distinct lines share at most one point, and
//! 4. for every point `P` off a line `B`, exactly `α` points of `B` are
//!    collinear with `P`.
//!
//! [`validate_pg`] checks these in the order line size, point degree, line
//! intersections, α, and reports the first violation with a witness.

mod construct;
mod io;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BitMatrix, BitVec, FieldError};

pub use construct::{elliptic_quadric_gq, grid, hyperoval_gq, symplectic_gq, GeometryKind};
pub use io::{load, parse, save, to_text};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("line {line} references point {point}, but there are only {num_points} points")]
    PointOutOfRange { line: usize, point: usize, num_points: usize },
    #[error("line {line} lists point {point} more than once")]
    DuplicatePointInLine { line: usize, point: usize },
    #[error("lines {first} and {second} are identical")]
    DuplicateLine { first: usize, second: usize },
    #[error("incidence structure has no lines")]
    NoLines,
    #[error("non-uniform line size: line {line} has {size} points, expected {expected}")]
    NonUniformLineSize { line: usize, size: usize, expected: usize },
    #[error("lines must have at least 2 points (s >= 1), found {size}")]
    LineTooSmall { size: usize },
    #[error("point {point} lies on no line")]
    IsolatedPoint { point: usize },
    #[error("non-uniform point degree: point {point} lies on {degree} lines, expected {expected}")]
    NonUniformPointDegree { point: usize, degree: usize, expected: usize },
    #[error("points must lie on at least 2 lines (t >= 1), found {degree}")]
    PointDegreeTooSmall { degree: usize },
    #[error("lines {first} and {second} share at least two points ({}, {})", .points.0, .points.1)]
    LinesShareTwoPoints { first: usize, second: usize, points: (usize, usize) },
    #[error(
        "non-uniform alpha: point {point} off line {line} is collinear with {count} of its points, expected {expected}"
    )]
    NonUniformAlpha { point: usize, line: usize, count: usize, expected: usize },
    #[error("alpha must be at least 1: point {point} is collinear with no point of line {line}")]
    ZeroAlpha { point: usize, line: usize },
    #[error("every point lies on every line; alpha is undefined")]
    NoNonIncidentPair,
    #[error("cardinalities ({num_points} points, {num_lines} lines) do not match pg({s},{t},{alpha})")]
    CardinalityMismatch { num_points: usize, num_lines: usize, s: usize, t: usize, alpha: usize },
    #[error("invalid parameters pg({s},{t},{alpha}): {reason}")]
    InvalidParameters { s: usize, t: usize, alpha: usize, reason: String },
    #[error("{constructor}: unsupported order q = {q} ({reason})")]
    UnsupportedOrder { constructor: &'static str, q: usize, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl GeometryError {
    /// True for violations of the pg axioms (as opposed to I/O or parameter
    /// errors).
    pub fn is_axiom_violation(&self) -> bool {
        matches!(
            self,
            Self::NoLines
                | Self::NonUniformLineSize { .. }
                | Self::LineTooSmall { .. }
                | Self::IsolatedPoint { .. }
                | Self::NonUniformPointDegree { .. }
                | Self::PointDegreeTooSmall { .. }
                | Self::LinesShareTwoPoints { .. }
                | Self::NonUniformAlpha { .. }
                | Self::ZeroAlpha { .. }
                | Self::NoNonIncidentPair
                | Self::CardinalityMismatch { .. }
        )
    }
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

/// A finite set of points together with a family of lines (point subsets).
#[derive(Clone, Debug, Eq)]
pub struct IncidenceStructure {
    num_points: usize,
    lines: Vec<Vec<usize>>,
    label: Option<String>,
}

impl PartialEq for IncidenceStructure {
    /// Structural equality; the label is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.num_points == other.num_points && self.lines == other.lines
    }
}

impl IncidenceStructure {
    /// Checks the structural invariants: indices in range, no repeated point
    /// within a line, no repeated line. Each line is stored sorted.
    pub fn new(num_points: usize, lines: Vec<Vec<usize>>) -> Result<Self> {
        let mut sorted_lines = Vec::with_capacity(lines.len());
        for (li, mut line) in lines.into_iter().enumerate() {
            if let Some(&point) = line.iter().find(|&&p| p >= num_points) {
                return Err(GeometryError::PointOutOfRange { line: li, point, num_points });
            }
            line.sort_unstable();
            if let Some(w) = line.windows(2).find(|w| w[0] == w[1]) {
                return Err(GeometryError::DuplicatePointInLine { line: li, point: w[0] });
            }
            sorted_lines.push(line);
        }
        let mut seen: HashMap<&[usize], usize> = HashMap::new();
        for (li, line) in sorted_lines.iter().enumerate() {
            if let Some(&first) = seen.get(line.as_slice()) {
                return Err(GeometryError::DuplicateLine { first, second: li });
            }
            seen.insert(line, li);
        }
        Ok(Self { num_points, lines: sorted_lines, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn line(&self, index: usize) -> &[usize] {
        &self.lines[index]
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// For every point, the ascending list of lines through it.
    pub fn lines_through_points(&self) -> Vec<Vec<usize>> {
        let mut through = vec![Vec::new(); self.num_points];
        for (li, line) in self.lines.iter().enumerate() {
            for &p in line {
                through[p].push(li);
            }
        }
        through
    }

    pub fn point_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_points];
        for line in &self.lines {
            for &p in line {
                deg[p] += 1;
            }
        }
        deg
    }

    /// Same structure with lines in lexicographic order.
    pub fn canonical(&self) -> Self {
        let mut lines = self.lines.clone();
        lines.sort();
        Self { num_points: self.num_points, lines, label: self.label.clone() }
    }

    /// Copy with one incidence toggled: the point is removed from the line if
    /// present, otherwise added. Used to build mutation fixtures.
    pub fn toggle_incidence(&self, line: usize, point: usize) -> Result<Self> {
        let mut lines = self.lines.clone();
        let target = &mut lines[line];
        match target.binary_search(&point) {
            Ok(pos) => {
                target.remove(pos);
            }
            Err(pos) => target.insert(pos, point),
        }
        let mut out = Self::new(self.num_points, lines)?;
        out.label = self.label.clone();
        Ok(out)
    }
}

/// The four classes of partial geometries. A generalized quadrangle with
/// `s = 1` or `t = 1` is additionally flagged grid-degenerate in
/// [`PgParams::grid_degenerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PgClass {
    Steiner2Design,
    Net,
    GeneralizedQuadrangle,
    Proper,
}

impl PgClass {
    /// α = 1 takes precedence, so grids (where also α = t) classify as
    /// generalized quadrangles.
    pub fn classify(s: usize, t: usize, alpha: usize) -> Self {
        if alpha == 1 {
            Self::GeneralizedQuadrangle
        } else if alpha == s + 1 || alpha == t + 1 {
            Self::Steiner2Design
        } else if alpha == s || alpha == t {
            Self::Net
        } else {
            Self::Proper
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Steiner2Design => "steiner-2-design",
            Self::Net => "net",
            Self::GeneralizedQuadrangle => "generalized-quadrangle",
            Self::Proper => "proper",
        }
    }
}

/// Validated pg(s, t, α) parameters with derived cardinalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PgParams {
    pub s: usize,
    pub t: usize,
    pub alpha: usize,
    pub num_points: usize,
    pub num_lines: usize,
    pub class: PgClass,
}

impl PgParams {
    /// Parameters of a hypothetical pg(s, t, α): checks the range of α and that
    /// both cardinalities are integers.
    pub fn from_parameters(s: usize, t: usize, alpha: usize) -> Result<Self> {
        let invalid = |reason: &str| GeometryError::InvalidParameters { s, t, alpha, reason: reason.to_string() };
        if s < 1 || t < 1 {
            return Err(invalid("s and t must be at least 1"));
        }
        if alpha < 1 || alpha > (s + 1).min(t + 1) {
            return Err(invalid("alpha must satisfy 1 <= alpha <= min(s+1, t+1)"));
        }
        let base = s * t + alpha;
        if !((s + 1) * base).is_multiple_of(alpha) || !((t + 1) * base).is_multiple_of(alpha) {
            return Err(invalid("point or line count is not an integer"));
        }
        Ok(Self {
            s,
            t,
            alpha,
            num_points: (s + 1) * base / alpha,
            num_lines: (t + 1) * base / alpha,
            class: PgClass::classify(s, t, alpha),
        })
    }

    pub fn grid_degenerate(&self) -> bool {
        self.class == PgClass::GeneralizedQuadrangle && (self.s == 1 || self.t == 1)
    }

    pub fn dual(&self) -> Self {
        Self {
            s: self.t,
            t: self.s,
            alpha: self.alpha,
            num_points: self.num_lines,
            num_lines: self.num_points,
            class: PgClass::classify(self.t, self.s, self.alpha),
        }
    }

    /// True when `s + t + 1 − α` is even, the condition under which the rate
    /// upper bound is stated.
    pub fn rank_parity_even(&self) -> bool {
        (self.s + self.t + 1 - self.alpha).is_multiple_of(2)
    }
}

/// Checks the four pg axioms and returns the parameters.
pub fn validate_pg(inc: &IncidenceStructure) -> Result<PgParams> {
    let lines = inc.lines();
    let first = lines.first().ok_or(GeometryError::NoLines)?;

    // Axiom 2: uniform line size.
    let line_size = first.len();
    if let Some((line, l)) = lines.iter().enumerate().find(|(_, l)| l.len() != line_size) {
        return Err(GeometryError::NonUniformLineSize { line, size: l.len(), expected: line_size });
    }
    if line_size < 2 {
        return Err(GeometryError::LineTooSmall { size: line_size });
    }
    let s = line_size - 1;

    // Axiom 1: uniform point degree.
    let degrees = inc.point_degrees();
    if let Some(point) = degrees.iter().position(|&d| d == 0) {
        return Err(GeometryError::IsolatedPoint { point });
    }
    let degree = degrees[0];
    if let Some((point, &d)) = degrees.iter().enumerate().find(|(_, &d)| d != degree) {
        return Err(GeometryError::NonUniformPointDegree { point, degree: d, expected: degree });
    }
    if degree < 2 {
        return Err(GeometryError::PointDegreeTooSmall { degree });
    }
    let t = degree - 1;

    // Axiom 3: two lines share at most one point.
    let n = inc.num_points();
    let mut pair_line: HashMap<(usize, usize), usize> = HashMap::new();
    let mut collinear: Vec<BitVec> = vec![BitVec::zeros(n); n];
    for (li, line) in lines.iter().enumerate() {
        for (a_pos, &a) in line.iter().enumerate() {
            for &b in &line[a_pos + 1..] {
                if let Some(&other) = pair_line.get(&(a, b)) {
                    return Err(GeometryError::LinesShareTwoPoints { first: other, second: li, points: (a, b) });
                }
                pair_line.insert((a, b), li);
                collinear[a].set(b, true);
                collinear[b].set(a, true);
            }
        }
    }

    // Axiom 4: for each P and each line B off P, count points of B collinear
    // with P by walking the lines through the neighbours of P.
    let through = inc.lines_through_points();
    let mut alpha: Option<usize> = None;
    let mut counts = vec![0usize; lines.len()];
    let mut on_p = vec![false; lines.len()];
    for p in 0..n {
        counts.iter_mut().for_each(|c| *c = 0);
        on_p.iter_mut().for_each(|x| *x = false);
        for &l in &through[p] {
            on_p[l] = true;
        }
        for q in collinear[p].iter_ones() {
            for &l in &through[q] {
                if !on_p[l] {
                    counts[l] += 1;
                }
            }
        }
        for (line, &count) in counts.iter().enumerate() {
            if on_p[line] {
                continue;
            }
            if count == 0 {
                return Err(GeometryError::ZeroAlpha { point: p, line });
            }
            match alpha {
                None => alpha = Some(count),
                Some(expected) if expected != count => {
                    return Err(GeometryError::NonUniformAlpha { point: p, line, count, expected });
                }
                Some(_) => {}
            }
        }
    }
    let alpha = alpha.ok_or(GeometryError::NoNonIncidentPair)?;

    let params = PgParams::from_parameters(s, t, alpha)?;
    if params.num_points != n || params.num_lines != lines.len() {
        return Err(GeometryError::CardinalityMismatch { num_points: n, num_lines: lines.len(), s, t, alpha });
    }
    Ok(params)
}

/// Interchanges points and lines. Point `j` of the dual is line `j` of the
/// input; line `p` of the dual is the set of lines through point `p`.
pub fn dual(inc: &IncidenceStructure) -> IncidenceStructure {
    let lines = inc.lines_through_points();
    IncidenceStructure { num_points: inc.num_lines(), lines, label: inc.label().map(|l| format!("dual({l})")) }
}

/// The `num_lines × num_points` incidence matrix N.
pub fn incidence_matrix(inc: &IncidenceStructure) -> BitMatrix {
    let rows = inc.lines().iter().map(|line| BitVec::from_indices(inc.num_points(), line)).collect();
    BitMatrix::from_rows(inc.num_points(), rows)
}

/// Points of `line` that are collinear with `point` (the point itself excluded).
pub fn collinear_on_line(inc: &IncidenceStructure, point: usize, line: usize) -> Vec<usize> {
    let through = inc.lines_through_points();
    let neighbours: BTreeSet<usize> =
        through[point].iter().flat_map(|&l| inc.line(l).iter().copied()).filter(|&q| q != point).collect();
    inc.line(line).iter().copied().filter(|q| neighbours.contains(q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> IncidenceStructure {
        IncidenceStructure::new(
            7,
            vec![
                vec![0, 1, 2],
                vec![0, 3, 4],
                vec![0, 5, 6],
                vec![1, 3, 5],
                vec![1, 4, 6],
                vec![2, 3, 6],
                vec![2, 4, 5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn structural_checks() {
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 3]]),
            Err(GeometryError::PointOutOfRange { point: 3, .. })
        ));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 0]]),
            Err(GeometryError::DuplicatePointInLine { point: 0, .. })
        ));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 0]]),
            Err(GeometryError::DuplicateLine { first: 0, second: 1 })
        ));
    }

    #[test]
    fn grid2_is_gq() {
        let p = validate_pg(&grid(2).unwrap()).unwrap();
        assert_eq!((p.s, p.t, p.alpha), (2, 1, 1));
        assert_eq!(p.class, PgClass::GeneralizedQuadrangle);
        assert!(p.grid_degenerate());
    }

    #[test]
    fn fano_is_steiner_design() {
        let p = validate_pg(&fano()).unwrap();
        assert_eq!((p.s, p.t, p.alpha), (2, 2, 3));
        assert_eq!(p.class, PgClass::Steiner2Design);
        assert!(!p.grid_degenerate());
    }

    #[test]
    fn deleted_incidence_reports_line_size() {
        let g = grid(2).unwrap().toggle_incidence(0, 0).unwrap();
        let err = validate_pg(&g).unwrap_err();
        assert!(matches!(err, GeometryError::NonUniformLineSize { .. }), "{err}");
        assert!(err.to_string().starts_with("non-uniform line size"));
        assert!(err.is_axiom_violation());
    }

    #[test]
    fn distinct_axiom_errors() {
        // Uniform line size, non-uniform degree.
        let s = IncidenceStructure::new(4, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2]]).unwrap();
        assert!(matches!(validate_pg(&s), Err(GeometryError::NonUniformPointDegree { .. })));

        // Two lines through the same pair.
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert!(matches!(validate_pg(&s), Err(GeometryError::LinesShareTwoPoints { .. })));

        // Two disjoint grids: α = 0 for pairs in different components.
        let g = grid(1).unwrap();
        let mut lines = g.lines().to_vec();
        lines.extend(g.lines().iter().map(|l| l.iter().map(|p| p + 4).collect::<Vec<_>>()));
        let s = IncidenceStructure::new(8, lines).unwrap();
        assert!(matches!(validate_pg(&s), Err(GeometryError::ZeroAlpha { .. })));

        // Isolated point.
        let s = IncidenceStructure::new(5, grid(1).unwrap().lines().to_vec()).unwrap();
        assert!(matches!(validate_pg(&s), Err(GeometryError::IsolatedPoint { point: 4 })));
    }

    #[test]
    fn non_uniform_alpha_detected() {
        // K6 minus the matching {0,1},{2,3},{4,5} as lines of size 2: a point
        // off an edge is adjacent to one or both of its endpoints.
        let matching = |a: usize, b: usize| a / 2 == b / 2;
        let edges: Vec<Vec<usize>> =
            (0..6).flat_map(|a| ((a + 1)..6).map(move |b| vec![a, b])).filter(|e| !matching(e[0], e[1])).collect();
        let s = IncidenceStructure::new(6, edges).unwrap();
        let err = validate_pg(&s).unwrap_err();
        assert!(matches!(err, GeometryError::NonUniformAlpha { .. }), "{err}");
    }

    #[test]
    fn class_precedence() {
        assert_eq!(PgClass::classify(2, 1, 1), PgClass::GeneralizedQuadrangle);
        assert_eq!(PgClass::classify(2, 2, 3), PgClass::Steiner2Design);
        assert_eq!(PgClass::classify(3, 5, 3), PgClass::Net);
        assert_eq!(PgClass::classify(4, 4, 2), PgClass::Proper);
    }

    #[test]
    fn parameter_ranges() {
        assert!(PgParams::from_parameters(2, 2, 4).is_err());
        assert!(PgParams::from_parameters(0, 2, 1).is_err());
        let p = PgParams::from_parameters(2, 4, 1).unwrap();
        assert_eq!((p.num_points, p.num_lines), (27, 45));
        assert_eq!(p.dual().num_points, 45);
    }

    #[test]
    fn dual_of_grid() {
        let d = dual(&grid(2).unwrap());
        assert_eq!((d.num_points(), d.num_lines()), (6, 9));
        let p = validate_pg(&d).unwrap();
        assert_eq!((p.s, p.t, p.alpha), (1, 2, 1));
        let g3 = grid(3).unwrap();
        assert_eq!(dual(&dual(&g3)).canonical(), g3.canonical());
    }

    #[test]
    fn incidence_weights() {
        let m = incidence_matrix(&grid(1).unwrap());
        assert_eq!((m.num_rows(), m.num_cols()), (4, 4));
        assert!(m.row_weights().iter().all(|&w| w == 2));
        let m = incidence_matrix(&grid(2).unwrap());
        assert_eq!((m.num_rows(), m.num_cols()), (6, 9));
        assert!(m.row_weights().iter().all(|&w| w == 3));
        assert!(m.column_weights().iter().all(|&w| w == 2));
    }

    #[test]
    fn collinear_points_on_a_line() {
        let g = grid(2).unwrap();
        // Point 0 = (0,0); line [3,4,5] is row 1; only (1,0) = 3 is collinear.
        let row1 = g.lines().iter().position(|l| l == &vec![3, 4, 5]).unwrap();
        assert_eq!(collinear_on_line(&g, 0, row1), vec![3]);
    }
}
