//! Exact 2-d and n-d polytope primitives.
//!
//! Polygons are kept closed, counterclockwise, without repeated or collinear
//! vertices, and rotated to start at their lexicographically smallest vertex,
//! so structural equality is geometric equality.

use std::fmt;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

pub type VecN = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(Rational::zero(), Rational::zero())
    }

    pub fn dot(&self, other: &Point2) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    /// z-component of the 2-d cross product.
    pub fn cross(&self, other: &Point2) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn sub(&self, other: &Point2) -> Point2 {
        Point2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point2) -> Point2 {
        Point2::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, s: &Rational) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    pub fn lerp(&self, other: &Point2, t: &Rational) -> Point2 {
        self.add(&other.sub(self).scale(t))
    }

    pub fn to_vec(&self) -> VecN {
        vec![self.x.clone(), self.y.clone()]
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_rational(&self.x),
            format_rational(&self.y)
        )
    }
}

/// Orientation of `c` relative to the directed line `a -> b`.
fn orient(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    b.sub(a).cross(&c.sub(a))
}

fn on_segment(p: &Point2, a: &Point2, b: &Point2) -> bool {
    orient(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

fn segments_touch(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let strictly_opposite = |u: &Rational, v: &Rational| {
        (u.is_positive() && v.is_negative()) || (u.is_negative() && v.is_positive())
    };
    if strictly_opposite(&o1, &o2) && strictly_opposite(&o3, &o4) {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Twice the signed area (positive for counterclockwise order).
pub fn signed_double_area(points: &[Point2]) -> Rational {
    let n = points.len();
    (0..n).fold(Rational::zero(), |acc, i| {
        acc + points[i].cross(&points[(i + 1) % n])
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon2D {
    vertices: Vec<Point2>,
}

impl Polygon2D {
    /// Normalizes and validates a vertex loop (either orientation).
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let mut vs = vertices;
        vs.dedup();
        while vs.len() > 1 && vs.first() == vs.last() {
            vs.pop();
        }
        if vs.len() < 3 {
            return Err(Error::Degenerate(format!("{} distinct vertices", vs.len())));
        }
        let area2 = signed_double_area(&vs);
        if area2.is_zero() {
            return Err(Error::Degenerate("zero area".into()));
        }
        if area2.is_negative() {
            vs.reverse();
        }
        loop {
            let n = vs.len();
            let drop =
                (0..n).find(|&i| orient(&vs[(i + n - 1) % n], &vs[i], &vs[(i + 1) % n]).is_zero());
            match drop {
                Some(i) if n > 3 => {
                    vs.remove(i);
                }
                Some(_) => return Err(Error::Degenerate("collinear vertices".into())),
                None => break,
            }
        }
        let poly = Polygon2D::from_normalized(vs);
        if !poly.is_simple() {
            return Err(Error::Degenerate("self-intersecting boundary".into()));
        }
        Ok(poly)
    }

    fn from_normalized(mut vs: Vec<Point2>) -> Self {
        let start = (0..vs.len())
            .min_by(|&i, &j| vs[i].cmp(&vs[j]))
            .unwrap_or(0);
        vs.rotate_left(start);
        Polygon2D { vertices: vs }
    }

    pub fn from_pairs(pairs: &[(Rational, Rational)]) -> Result<Self> {
        Polygon2D::new(
            pairs
                .iter()
                .map(|(x, y)| Point2::new(x.clone(), y.clone()))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point2, &Point2)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
                let (c, d) = (&self.vertices[j], &self.vertices[(j + 1) % n]);
                if segments_touch(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    pub fn area(&self) -> Rational {
        signed_double_area(&self.vertices) / Rational::from_integer(2.into())
    }

    pub fn support_max(&self, v: &[Rational]) -> Result<Rational> {
        check_dim(2, v.len())?;
        let dir = Point2::new(v[0].clone(), v[1].clone());
        Ok(self
            .vertices
            .iter()
            .map(|p| p.dot(&dir))
            .max()
            .expect("polygon has vertices"))
    }

    /// Closed point-in-polygon test.
    pub fn contains_point(&self, p: &Point2) -> bool {
        if self.edges().any(|(a, b)| on_segment(p, a, b)) {
            return true;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = &a.x + (&p.y - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Closed containment `other ⊆ self`.
    ///
    /// Every edge of `other` is cut at its intersections with the boundary of
    /// `self`; each piece lies entirely inside or outside, so testing the
    /// piece midpoints decides boundary containment. A simple polygon whose
    /// boundary lies in a simply connected region lies in that region.
    pub fn contains_polygon(&self, other: &Polygon2D) -> bool {
        if !other.vertices.iter().all(|p| self.contains_point(p)) {
            return false;
        }
        let two = Rational::from_integer(2.into());
        for (p, q) in other.edges() {
            let d = q.sub(p);
            let dd = d.dot(&d);
            let mut cuts = vec![Rational::zero(), Rational::from_integer(1.into())];
            for (r, s) in self.edges() {
                let e = s.sub(r);
                let rp = r.sub(p);
                let denom = d.cross(&e);
                if !denom.is_zero() {
                    let t = rp.cross(&e) / &denom;
                    let u = rp.cross(&d) / &denom;
                    if in_unit(&t) && in_unit(&u) {
                        cuts.push(t);
                    }
                } else if rp.cross(&d).is_zero() {
                    for end in [r, s] {
                        let t = end.sub(p).dot(&d) / &dd;
                        if in_unit(&t) {
                            cuts.push(t);
                        }
                    }
                }
            }
            cuts.sort();
            cuts.dedup();
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / &two;
                if !self.contains_point(&p.lerp(q, &mid)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn scale(&self, s: &Rational) -> Result<Polygon2D> {
        Polygon2D::new(self.vertices.iter().map(|p| p.scale(s)).collect())
    }
}

fn in_unit(t: &Rational) -> bool {
    !t.is_negative() && *t <= Rational::from_integer(1.into())
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// `max ⟨v, x⟩` over a finite vertex set in ℝⁿ.
pub fn support_max(vertices: &[VecN], v: &[Rational]) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for x in vertices {
        check_dim(x.len(), v.len())?;
        let val = x
            .iter()
            .zip(v)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
        if best.as_ref().is_none_or(|b| val > *b) {
            best = Some(val);
        }
    }
    best.ok_or_else(|| Error::Degenerate("empty vertex set".into()))
}

/// `min ⟨v, x⟩` over the vertices of a boundary chain.
pub fn boundary_min(chain: &[Point2], v: &[Rational]) -> Result<Rational> {
    check_dim(2, v.len())?;
    let dir = Point2::new(v[0].clone(), v[1].clone());
    chain
        .iter()
        .map(|p| p.dot(&dir))
        .min()
        .ok_or_else(|| Error::InvalidRegion("empty positive boundary".into()))
}

pub fn polygon_area(p: &Polygon2D) -> Rational {
    p.area()
}

/// `x ↦ M x + t` with an integer matrix of determinant one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularAffine2D {
    matrix: [[i64; 2]; 2],
    translation: Point2,
}

impl UnimodularAffine2D {
    pub fn new(matrix: [[i64; 2]; 2], translation: Point2) -> Result<Self> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det != 1 {
            return Err(Error::OutOfRange(format!(
                "affine map has determinant {det}, expected 1"
            )));
        }
        Ok(UnimodularAffine2D {
            matrix,
            translation,
        })
    }

    pub fn identity() -> Self {
        UnimodularAffine2D {
            matrix: [[1, 0], [0, 1]],
            translation: Point2::origin(),
        }
    }

    /// Translate by `shift` first, then apply `matrix`.
    pub fn shift_then(matrix: [[i64; 2]; 2], shift: &Point2) -> Result<Self> {
        let linear = UnimodularAffine2D::new(matrix, Point2::origin())?;
        let t = linear.apply(shift);
        Ok(UnimodularAffine2D {
            translation: t,
            ..linear
        })
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn translation(&self) -> &Point2 {
        &self.translation
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        let m = |i: usize, j: usize| Rational::from_integer(self.matrix[i][j].into());
        Point2::new(
            m(0, 0) * &p.x + m(0, 1) * &p.y + &self.translation.x,
            m(1, 0) * &p.x + m(1, 1) * &p.y + &self.translation.y,
        )
    }
}

pub fn affine_image(p: &Polygon2D, a: &UnimodularAffine2D) -> Polygon2D {
    // det = 1 keeps orientation, simplicity and collinearity-freeness.
    Polygon2D::from_normalized(p.vertices.iter().map(|v| a.apply(v)).collect())
}

/// Convex hull (Andrew's monotone chain), counterclockwise, no collinear points.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}
