//! Weight expansions of 4-d concave toric domains.
//!
//! The largest corner triangle `T(w)` is peeled off the moment image; what
//! is left splits into a piece along the first axis and a piece along the
//! second. Each piece is moved so its corner sits at the origin and sheared
//! back into the quadrant, and the process repeats on both.

use num::{Signed, Zero};

use crate::domains::ToricRegion2D;
use crate::error::{Error, Result};
use crate::geometry::{affine_image, Point2, Polygon2D, UnimodularAffine2D};
use crate::rational::Rational;

pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Which remainder a node came from, read from the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// The piece along the first axis, sheared by `[[1,1],[0,1]]`.
    Lower,
    /// The piece along the second axis, sheared by `[[1,0],[1,1]]`.
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionNode {
    /// The remainder in canonical corner position.
    pub region: Polygon2D,
    /// Side of the largest corner triangle contained in `region`.
    pub peeled: Rational,
    pub path: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSequence {
    /// Sorted descending.
    pub weights: Vec<Rational>,
    /// Expansion tree in visiting order.
    pub nodes: Vec<ExpansionNode>,
}

impl WeightSequence {
    pub fn sum_of_squares(&self) -> Rational {
        self.weights
            .iter()
            .fold(Rational::zero(), |acc, w| acc + w * w)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

const LOWER_SHEAR: [[i64; 2]; 2] = [[1, 1], [0, 1]];
const UPPER_SHEAR: [[i64; 2]; 2] = [[1, 0], [1, 1]];

/// One peel: the weight and the (possibly empty) lower and upper remainders.
fn peel(region: &Polygon2D) -> Result<(Rational, Option<Polygon2D>, Option<Polygon2D>)> {
    let chain = &region.vertices()[1..];
    let level = |p: &Point2| &p.x + &p.y;
    let w = chain.iter().map(level).min().expect("chain is non-empty");
    let first = chain
        .iter()
        .position(|p| level(p) == w)
        .expect("minimum attained");
    let last = chain
        .iter()
        .rposition(|p| level(p) == w)
        .expect("minimum attained");

    let lower = if first > 0 {
        let corner = Point2::new(w.clone(), Rational::zero());
        let mut pts = vec![corner.clone()];
        pts.extend(chain[..=first].iter().cloned());
        let poly = Polygon2D::new(pts)?;
        let map = UnimodularAffine2D::shift_then(LOWER_SHEAR, &Point2::new(-&w, Rational::zero()))?;
        Some(affine_image(&poly, &map))
    } else {
        None
    };
    let upper = if last + 1 < chain.len() {
        let corner = Point2::new(Rational::zero(), w.clone());
        let mut pts = vec![corner];
        pts.extend(chain[last..].iter().cloned());
        let poly = Polygon2D::new(pts)?;
        let map = UnimodularAffine2D::shift_then(UPPER_SHEAR, &Point2::new(Rational::zero(), -&w))?;
        Some(affine_image(&poly, &map))
    } else {
        None
    };
    Ok((w, lower, upper))
}

/// Weight expansion of a concave region.
///
/// Fails with [`Error::Nontermination`] if pieces of positive area remain
/// after `max_steps` peels.
pub fn weights_concave(region: &ToricRegion2D, max_steps: usize) -> Result<WeightSequence> {
    if !region.flags().concave {
        return Err(Error::NotConcave);
    }
    let mut stack: Vec<(Polygon2D, Vec<Branch>)> = vec![(region.polygon().clone(), Vec::new())];
    let mut nodes = Vec::new();
    let mut steps = 0;
    while let Some((poly, path)) = stack.pop() {
        if steps == max_steps {
            let residual = stack.iter().fold(poly.area(), |acc, (p, _)| acc + p.area());
            return Err(Error::Nontermination {
                steps,
                residual_area: residual,
            });
        }
        steps += 1;
        let (w, lower, upper) = peel(&poly)?;
        // Push upper first so the lower branch is expanded first.
        for (piece, branch) in [(upper, Branch::Upper), (lower, Branch::Lower)] {
            if let Some(p) = piece {
                let mut child = path.clone();
                child.push(branch);
                stack.push((p, child));
            }
        }
        nodes.push(ExpansionNode {
            region: poly,
            peeled: w,
            path,
        });
    }
    let mut weights: Vec<Rational> = nodes.iter().map(|n| n.peeled.clone()).collect();
    weights.sort_by(|a, b| b.cmp(a));
    Ok(WeightSequence { weights, nodes })
}

/// Continued-fraction weights of `E(a, b)`: with `a ≤ b`, `a` repeated
/// `⌊b/a⌋` times followed by the weights of `E(b − ⌊b/a⌋a, a)`.
pub fn weights_ellipsoid(a: &Rational, b: &Rational) -> Result<WeightSequence> {
    for x in [a, b] {
        if !x.is_positive() {
            return Err(Error::NonPositive(x.clone()));
        }
    }
    let (mut small, mut big) = if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut weights = Vec::new();
    let mut nodes = Vec::new();
    loop {
        let q = (&big / &small).floor();
        let region = ToricRegion2D::triangle(big.clone(), small.clone())?
            .polygon()
            .clone();
        nodes.push(ExpansionNode {
            region,
            peeled: small.clone(),
            path: Vec::new(),
        });
        let count = q.to_integer();
        let mut i = num::BigInt::zero();
        while i < count {
            weights.push(small.clone());
            i += 1;
        }
        let rem = &big - &q * &small;
        if rem.is_zero() {
            break;
        }
        big = small;
        small = rem;
    }
    Ok(WeightSequence { weights, nodes })
}
