//! Built-in constructions. Points are ordered lexicographically by their
//! normalized coordinate vectors (field elements compared by their integer
//! encoding) and lines lexicographically by their sorted point indices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{dual, GeometryError, IncidenceStructure, Result};
use crate::algebra::{Element, SmallField};

/// Named constructor plus its order parameter, as used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometryKind {
    /// `(s+1) × (s+1)` grid, pg(s, 1, 1).
    Grid { s: usize },
    /// W(q), pg(q, q, 1).
    Symplectic { q: usize },
    /// Q⁻(5, q), pg(q, q², 1).
    EllipticQuadric { q: usize },
    /// T₂*(O) for a regular hyperoval O, pg(q−1, q+1, 1).
    Hyperoval { q: usize },
}

impl GeometryKind {
    pub fn build(self) -> Result<IncidenceStructure> {
        match self {
            Self::Grid { s } => grid(s),
            Self::Symplectic { q } => symplectic_gq(q),
            Self::EllipticQuadric { q } => elliptic_quadric_gq(q),
            Self::Hyperoval { q } => hyperoval_gq(q),
        }
    }

    pub fn build_with_dual(self, take_dual: bool) -> Result<IncidenceStructure> {
        let inc = self.build()?;
        Ok(if take_dual { dual(&inc) } else { inc })
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Grid { s } => write!(f, "grid({s})"),
            Self::Symplectic { q } => write!(f, "W({q})"),
            Self::EllipticQuadric { q } => write!(f, "Q-(5,{q})"),
            Self::Hyperoval { q } => write!(f, "T2*(O,{q})"),
        }
    }
}

/// `(s+1) × (s+1)` grid: point `(r, c)` has index `r·(s+1) + c`; lines are the
/// rows and the columns.
pub fn grid(s: usize) -> Result<IncidenceStructure> {
    if s < 1 {
        return Err(GeometryError::InvalidParameters { s, t: 1, alpha: 1, reason: "grid needs s >= 1".into() });
    }
    let side = s + 1;
    let mut lines: Vec<Vec<usize>> = Vec::with_capacity(2 * side);
    for r in 0..side {
        lines.push((0..side).map(|c| r * side + c).collect());
    }
    for c in 0..side {
        lines.push((0..side).map(|r| r * side + c).collect());
    }
    lines.sort();
    Ok(IncidenceStructure::new(side * side, lines)?.with_label(format!("grid({s})")))
}

/// Symplectic quadrangle W(q): all points of PG(3, q) and the lines totally
/// isotropic for `x₁y₂ − x₂y₁ + x₃y₄ − x₄y₃`.
pub fn symplectic_gq(q: usize) -> Result<IncidenceStructure> {
    let field = SmallField::new(q)?;
    let points = projective_points(&field, 4);
    let form = |x: &[Element], y: &[Element]| {
        let a = field.sub(field.mul(x[0], y[1]), field.mul(x[1], y[0]));
        let b = field.sub(field.mul(x[2], y[3]), field.mul(x[3], y[2]));
        field.add(a, b)
    };
    let lines = lines_from_pairs(&field, &points, |x, y| form(x, y) == 0);
    Ok(IncidenceStructure::new(points.len(), lines)?.with_label(format!("W({q})")))
}

/// Elliptic quadric Q⁻(5, q) for q ∈ {2, 3}: singular points of
/// `x₁x₂ + x₃x₄ + f(x₅, x₆)` with `f` irreducible, and the totally singular
/// lines.
pub fn elliptic_quadric_gq(q: usize) -> Result<IncidenceStructure> {
    if q != 2 && q != 3 {
        return Err(GeometryError::UnsupportedOrder {
            constructor: "elliptic_quadric_gq",
            q,
            reason: "only q = 2 and q = 3 are built in".into(),
        });
    }
    let field = SmallField::new(q)?;
    // f(u, v) = u² + uv + v² over GF(2), u² + v² over GF(3); both anisotropic.
    let cross: Element = if q == 2 { 1 } else { 0 };
    let quad = |x: &[Element]| {
        let hyperbolic = field.add(field.mul(x[0], x[1]), field.mul(x[2], x[3]));
        let f =
            field.add(field.add(field.mul(x[4], x[4]), field.mul(x[5], x[5])), field.mul(cross, field.mul(x[4], x[5])));
        field.add(hyperbolic, f)
    };
    let singular: Vec<Vec<Element>> = projective_points(&field, 6).into_iter().filter(|x| quad(x) == 0).collect();
    let polar = |x: &[Element], y: &[Element]| {
        let sum: Vec<Element> = x.iter().zip(y).map(|(&a, &b)| field.add(a, b)).collect();
        field.sub(field.sub(quad(&sum), quad(x)), quad(y))
    };
    let lines = lines_from_pairs(&field, &singular, |x, y| polar(x, y) == 0);
    Ok(IncidenceStructure::new(singular.len(), lines)?.with_label(format!("Q-(5,{q})")))
}

/// T₂*(O): points of AG(3, q), lines are the affine lines whose direction lies
/// on the regular hyperoval `{(x, y, z) : yz = x²} ∪ {(1, 0, 0)}` of the plane
/// at infinity. Requires q ∈ {4, 8, 16}.
pub fn hyperoval_gq(q: usize) -> Result<IncidenceStructure> {
    if !matches!(q, 4 | 8 | 16) {
        return Err(GeometryError::UnsupportedOrder {
            constructor: "hyperoval_gq",
            q,
            reason: "q must be an even prime power with 4 <= q <= 16".into(),
        });
    }
    let field = SmallField::new(q)?;
    let mut directions: Vec<[Element; 3]> = field.elements().map(|t| [t, field.mul(t, t), 1]).collect();
    directions.push([0, 1, 0]);
    directions.push([1, 0, 0]);

    let index = |p: [Element; 3]| (p[0] as usize * q + p[1] as usize) * q + p[2] as usize;
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for x in field.elements() {
        for y in field.elements() {
            for z in field.elements() {
                let base = [x, y, z];
                for d in &directions {
                    let mut line: Vec<usize> = field
                        .elements()
                        .map(|l| {
                            index([
                                field.add(base[0], field.mul(l, d[0])),
                                field.add(base[1], field.mul(l, d[1])),
                                field.add(base[2], field.mul(l, d[2])),
                            ])
                        })
                        .collect();
                    line.sort_unstable();
                    lines.insert(line);
                }
            }
        }
    }
    Ok(IncidenceStructure::new(q * q * q, lines.into_iter().collect())?.with_label(format!("T2*(O,{q})")))
}

/// Normalized representatives (first nonzero coordinate one) of the points of
/// PG(dim − 1, q), sorted lexicographically.
fn projective_points(field: &SmallField, dim: usize) -> Vec<Vec<Element>> {
    let q = field.order();
    let mut out = Vec::new();
    let mut v = vec![0 as Element; dim];
    for _ in 0..q.pow(dim as u32) {
        // Odometer increment, last coordinate fastest, so `out` is sorted.
        for c in (0..dim).rev() {
            v[c] += 1;
            if (v[c] as usize) < q {
                break;
            }
            v[c] = 0;
        }
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v.clone());
        }
    }
    out.sort();
    out
}

/// Lines spanned by pairs of `points` accepted by `joinable`, keeping only
/// lines whose every point is in `points`. Each line is returned as sorted
/// indices into `points`.
fn lines_from_pairs(
    field: &SmallField,
    points: &[Vec<Element>],
    joinable: impl Fn(&[Element], &[Element]) -> bool,
) -> Vec<Vec<usize>> {
    let index: HashMap<&[Element], usize> = points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let n = points.len();
    let mut covered = vec![vec![false; n]; n];
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if covered[a][b] || !joinable(&points[a], &points[b]) {
                continue;
            }
            let mut line = vec![a];
            let mut complete = true;
            for l in field.elements() {
                let combo: Vec<Element> =
                    points[a].iter().zip(&points[b]).map(|(&x, &y)| field.add(field.mul(l, x), y)).collect();
                let normal = field.normalize(&combo).expect("distinct points span a line");
                match index.get(normal.as_slice()) {
                    Some(&i) => line.push(i),
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if !complete {
                continue;
            }
            line.sort_unstable();
            for (i, &x) in line.iter().enumerate() {
                for &y in &line[i + 1..] {
                    covered[x][y] = true;
                }
            }
            lines.insert(line);
        }
    }
    lines.into_iter().collect()
}
