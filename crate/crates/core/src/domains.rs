//! Toric domains represented by their moment images.
//!
//! A 2-d region is stored as a polygon `(0,0), (a,0), …, (0,b)` whose
//! positive boundary is the vertex chain from `(a,0)` to `(0,b)`. Ellipsoids
//! and polydisks are kept as axis tuples in any dimension.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, signed_double_area, Point2, Polygon2D, VecN};
use crate::rational::{format_rational, parse_rational, rat, Rational};

fn check_axes(axes: &[Rational]) -> Result<()> {
    if axes.is_empty() {
        return Err(Error::EmptyAxes);
    }
    if let Some(bad) = axes.iter().find(|a| !a.is_positive()) {
        return Err(Error::NonPositive(bad.clone()));
    }
    Ok(())
}

/// `E(a_1, …, a_n)` with finite positive axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipsoidSpec {
    axes: Vec<Rational>,
}

impl EllipsoidSpec {
    pub fn new(axes: Vec<Rational>) -> Result<Self> {
        check_axes(&axes)?;
        Ok(EllipsoidSpec { axes })
    }

    pub fn ball(n: usize, r: Rational) -> Result<Self> {
        EllipsoidSpec::new(vec![r; n])
    }

    pub fn axes(&self) -> &[Rational] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Vertices of the moment simplex: the origin and `a_i e_i`.
    pub fn moment_vertices(&self) -> Vec<VecN> {
        let n = self.dim();
        let mut out = vec![vec![Rational::zero(); n]];
        for (i, a) in self.axes.iter().enumerate() {
            let mut v = vec![Rational::zero(); n];
            v[i] = a.clone();
            out.push(v);
        }
        out
    }

    /// Closed moment-image membership: `Σ x_i / a_i ≤ 1`.
    pub fn contains_moment_point(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let s = x
            .iter()
            .zip(&self.axes)
            .fold(Rational::zero(), |acc, (xi, ai)| acc + xi / ai);
        Ok(s <= Rational::one())
    }
}

/// `P(a_1, …, a_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolydiskSpec {
    axes: Vec<Rational>,
}

impl PolydiskSpec {
    pub fn new(axes: Vec<Rational>) -> Result<Self> {
        check_axes(&axes)?;
        Ok(PolydiskSpec { axes })
    }

    pub fn cube(n: usize) -> Self {
        PolydiskSpec {
            axes: vec![Rational::one(); n],
        }
    }

    pub fn axes(&self) -> &[Rational] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// The `2^n` corners of the moment box.
    pub fn moment_vertices(&self) -> Vec<VecN> {
        let n = self.dim();
        (0..1usize << n)
            .map(|mask| {
                (0..n)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            self.axes[i].clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `P ⊆ E` holds iff the far corner of the box lies in the simplex.
    pub fn is_inside_ellipsoid(&self, e: &EllipsoidSpec) -> Result<bool> {
        e.contains_moment_point(&self.axes)
    }
}

/// Moment-image inclusion `E ⊆ P`: every simplex vertex lies in the box.
pub fn ellipsoid_inside_polydisk(e: &EllipsoidSpec, p: &PolydiskSpec) -> Result<bool> {
    if e.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: e.dim(),
        });
    }
    Ok(e.axes.iter().zip(&p.axes).all(|(a, b)| a <= b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub monotone: bool,
    pub concave: bool,
    pub convex: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisData {
    pub a: Rational,
    pub b: Rational,
    /// `max (x + y)` over the positive boundary; the smallest ball containing the domain.
    pub w: Rational,
}

/// A 2-d moment image `Ω` with its positive boundary and classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricRegion2D {
    polygon: Polygon2D,
    flags: Classification,
}

impl ToricRegion2D {
    pub fn new(polygon: Polygon2D) -> Result<Self> {
        validate_moment_polygon(&polygon)?;
        let flags = classify_chain(&polygon);
        Ok(ToricRegion2D { polygon, flags })
    }

    pub fn from_vertices(vertices: Vec<Point2>) -> Result<Self> {
        ToricRegion2D::new(Polygon2D::new(vertices)?)
    }

    /// The triangle `T(a, b)`, i.e. the moment image of `E(a, b)`.
    pub fn triangle(a: Rational, b: Rational) -> Result<Self> {
        check_axes(&[a.clone(), b.clone()])?;
        ToricRegion2D::from_vertices(vec![
            Point2::origin(),
            Point2::new(a, Rational::zero()),
            Point2::new(Rational::zero(), b),
        ])
    }

    pub fn rectangle(a: Rational, b: Rational) -> Result<Self> {
        check_axes(&[a.clone(), b.clone()])?;
        ToricRegion2D::from_vertices(vec![
            Point2::origin(),
            Point2::new(a.clone(), Rational::zero()),
            Point2::new(a, b.clone()),
            Point2::new(Rational::zero(), b),
        ])
    }

    pub fn polygon(&self) -> &Polygon2D {
        &self.polygon
    }

    /// Closed positive boundary, from `(a,0)` to `(0,b)`.
    pub fn positive_boundary(&self) -> &[Point2] {
        &self.polygon.vertices()[1..]
    }

    pub fn flags(&self) -> Classification {
        self.flags
    }

    pub fn intercepts(&self) -> (Rational, Rational) {
        let chain = self.positive_boundary();
        (chain[0].x.clone(), chain[chain.len() - 1].y.clone())
    }

    pub fn area(&self) -> Rational {
        self.polygon.area()
    }

    pub fn scale(&self, s: &Rational) -> Result<Self> {
        ToricRegion2D::new(self.polygon.scale(s)?)
    }
}

fn validate_moment_polygon(p: &Polygon2D) -> Result<()> {
    let vs = p.vertices();
    if vs.iter().any(|v| v.x.is_negative() || v.y.is_negative()) {
        return Err(Error::InvalidRegion(
            "vertex outside the closed positive quadrant".into(),
        ));
    }
    // Canonical rotation puts the smallest vertex first; for a region in the
    // quadrant containing the origin that is the origin itself.
    if vs[0] != Point2::origin() {
        return Err(Error::InvalidRegion(
            "region must contain the origin as a corner".into(),
        ));
    }
    let first = &vs[1];
    let last = &vs[vs.len() - 1];
    if !first.y.is_zero() || !first.x.is_positive() {
        return Err(Error::InvalidRegion("no edge along the first axis".into()));
    }
    if !last.x.is_zero() || !last.y.is_positive() {
        return Err(Error::InvalidRegion("no edge along the second axis".into()));
    }
    if vs[2..vs.len() - 1]
        .iter()
        .any(|v| !v.x.is_positive() || !v.y.is_positive())
    {
        return Err(Error::InvalidRegion(
            "positive boundary touches an axis away from its endpoints".into(),
        ));
    }
    Ok(())
}

fn classify_chain(p: &Polygon2D) -> Classification {
    let chain = &p.vertices()[1..];
    let dirs: Vec<Point2> = chain.windows(2).map(|w| w[1].sub(&w[0])).collect();
    // Outward normal of a counterclockwise edge (dx, dy) is (dy, -dx).
    let monotone = dirs
        .iter()
        .all(|d| !d.x.is_positive() && !d.y.is_negative());
    let reflex = dirs.windows(2).all(|w| !w[0].cross(&w[1]).is_positive());
    let concave = monotone && reflex;
    let convex = monotone && reflected_region_is_convex(p);
    Classification {
        monotone,
        concave,
        convex,
    }
}

/// Convexity of `Ω̂`, the union of the four reflections of `Ω`: it is convex
/// exactly when its convex hull has the same area `4·area(Ω)`.
fn reflected_region_is_convex(p: &Polygon2D) -> bool {
    let mut pts = Vec::with_capacity(4 * p.len());
    for v in p.vertices() {
        for (sx, sy) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
            pts.push(Point2::new(
                &v.x * Rational::from_integer(sx.into()),
                &v.y * Rational::from_integer(sy.into()),
            ));
        }
    }
    let hull = convex_hull(&pts);
    signed_double_area(&hull) == p.area() * Rational::from_integer(8.into())
}

pub fn classify(p: &Polygon2D) -> Result<Classification> {
    validate_moment_polygon(p)?;
    Ok(classify_chain(p))
}

pub fn axis_data(region: &ToricRegion2D) -> AxisData {
    let (a, b) = region.intercepts();
    let w = region
        .positive_boundary()
        .iter()
        .map(|p| &p.x + &p.y)
        .max()
        .expect("chain is non-empty");
    AxisData { a, b, w }
}

/// The quadrilateral `Q_ε` with vertices `(0,0), (1,0), (ε,ε), (0,1)`.
pub fn make_veps(eps: &Rational) -> Result<ToricRegion2D> {
    if !eps.is_positive() || *eps >= rat(1, 2) {
        return Err(Error::OutOfRange(format!(
            "eps must lie in (0, 1/2), got {}",
            format_rational(eps)
        )));
    }
    ToricRegion2D::from_vertices(vec![
        Point2::origin(),
        Point2::new(Rational::one(), Rational::zero()),
        Point2::new(eps.clone(), eps.clone()),
        Point2::new(Rational::zero(), Rational::one()),
    ])
}

/// Anything that has a 2-d moment image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MomentRegion {
    Toric(ToricRegion2D),
    Ellipsoid(EllipsoidSpec),
    Polydisk(PolydiskSpec),
    Ball(Rational),
}

impl MomentRegion {
    pub fn to_region(&self) -> Result<ToricRegion2D> {
        match self {
            MomentRegion::Toric(r) => Ok(r.clone()),
            MomentRegion::Ellipsoid(e) => {
                if e.dim() != 2 {
                    return Err(Error::UnsupportedDimension(e.dim()));
                }
                ToricRegion2D::triangle(e.axes[0].clone(), e.axes[1].clone())
            }
            MomentRegion::Polydisk(p) => {
                if p.dim() != 2 {
                    return Err(Error::UnsupportedDimension(p.dim()));
                }
                ToricRegion2D::rectangle(p.axes[0].clone(), p.axes[1].clone())
            }
            MomentRegion::Ball(r) => ToricRegion2D::triangle(r.clone(), r.clone()),
        }
    }
}

impl From<ToricRegion2D> for MomentRegion {
    fn from(r: ToricRegion2D) -> Self {
        MomentRegion::Toric(r)
    }
}

/// Closed inclusion of moment images, `inner ⊆ outer`.
pub fn region_contains(inner: &MomentRegion, outer: &MomentRegion) -> Result<bool> {
    let inner = inner.to_region()?;
    let outer = outer.to_region()?;
    Ok(outer.polygon().contains_polygon(inner.polygon()))
}

/// A parsed domain description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    Ellipsoid(EllipsoidSpec),
    Polydisk(PolydiskSpec),
    Polygon(ToricRegion2D),
    Veps {
        eps: Rational,
        region: ToricRegion2D,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum DomainJson {
    Ellipsoid { axes: Vec<String> },
    Polydisk { axes: Vec<String> },
    Polygon2d { vertices: Vec<[String; 2]> },
    Veps { eps: String },
}

fn parse_all(xs: &[String]) -> Result<Vec<Rational>> {
    xs.iter().map(|s| parse_rational(s)).collect()
}

impl Domain {
    pub fn from_json(value: &Value) -> Result<Self> {
        let raw: DomainJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        Ok(match raw {
            DomainJson::Ellipsoid { axes } => {
                Domain::Ellipsoid(EllipsoidSpec::new(parse_all(&axes)?)?)
            }
            DomainJson::Polydisk { axes } => {
                Domain::Polydisk(PolydiskSpec::new(parse_all(&axes)?)?)
            }
            DomainJson::Polygon2d { vertices } => {
                let pts = vertices
                    .iter()
                    .map(|[x, y]| Ok(Point2::new(parse_rational(x)?, parse_rational(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                Domain::Polygon(ToricRegion2D::from_vertices(pts)?)
            }
            DomainJson::Veps { eps } => {
                let eps = parse_rational(&eps)?;
                let region = make_veps(&eps)?;
                Domain::Veps { eps, region }
            }
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        Domain::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        let strs = |xs: &[Rational]| xs.iter().map(format_rational).collect::<Vec<_>>();
        match self {
            Domain::Ellipsoid(e) => json!({"type": "ellipsoid", "axes": strs(e.axes())}),
            Domain::Polydisk(p) => json!({"type": "polydisk", "axes": strs(p.axes())}),
            Domain::Polygon(r) => json!({
                "type": "polygon2d",
                "vertices": r.polygon().vertices().iter()
                    .map(|v| [format_rational(&v.x), format_rational(&v.y)])
                    .collect::<Vec<_>>(),
            }),
            Domain::Veps { eps, .. } => json!({"type": "veps", "eps": format_rational(eps)}),
        }
    }

    /// The 2-d moment region, when the domain is four-dimensional.
    pub fn region_2d(&self) -> Result<ToricRegion2D> {
        match self {
            Domain::Ellipsoid(e) => MomentRegion::Ellipsoid(e.clone()).to_region(),
            Domain::Polydisk(p) => MomentRegion::Polydisk(p.clone()).to_region(),
            Domain::Polygon(r) | Domain::Veps { region: r, .. } => Ok(r.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Ellipsoid(e) => e.dim(),
            Domain::Polydisk(p) => p.dim(),
            _ => 2,
        }
    }
}
