//! p-adic Newton polygons.
//!
//! The polygon of `f = sum a_i X^i` is the lower convex hull of the points
//! `(i, v_p(a_i))` over the nonzero coefficients. Throughout the crate a
//! segment of slope `s` and horizontal length `l` is read as `l` roots of
//! valuation `-s`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_p_integral, rat_int, vp, Prime, Valuation};
use crate::error::{domain, Result};
use crate::{PolyRat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "crate::arith::serde_rat")]
    pub slope: Rational,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// Points `(i, height)` the hull was built from, sorted by `i`.
    #[serde(with = "crate::arith::serde_rat::indexed")]
    pub anchors: Vec<(usize, Rational)>,
    /// Hull vertices, left to right.
    #[serde(with = "crate::arith::serde_rat::indexed")]
    pub vertices: Vec<(usize, Rational)>,
    /// Slopes strictly increase left to right.
    pub segments: Vec<Segment>,
}

fn cross(o: &(usize, Rational), a: &(usize, Rational), b: &(usize, Rational)) -> Rational {
    let ax = rat_int(a.0 as i64 - o.0 as i64);
    let bx = rat_int(b.0 as i64 - o.0 as i64);
    ax * (&b.1 - &o.1) - bx * (&a.1 - &o.1)
}

impl NewtonPolygon {
    /// Lower hull of arbitrary anchor points. Heights may be rational, which
    /// lets callers work directly with valuations of unknown quantities.
    pub fn from_anchors(mut anchors: Vec<(usize, Rational)>) -> Self {
        anchors.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        anchors.dedup_by(|later, earlier| later.0 == earlier.0);

        let mut hull: Vec<(usize, Rational)> = Vec::new();
        for pt in &anchors {
            while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], pt).is_positive() {
                hull.pop();
            }
            hull.push(pt.clone());
        }
        let segments = hull
            .windows(2)
            .map(|w| {
                let length = w[1].0 - w[0].0;
                Segment {
                    slope: (&w[1].1 - &w[0].1) / rat_int(length as i64),
                    length,
                }
            })
            .collect();
        NewtonPolygon {
            anchors,
            vertices: hull,
            segments,
        }
    }

    /// `(slope, length)` pairs.
    pub fn shape(&self) -> Vec<(Rational, usize)> {
        self.segments
            .iter()
            .map(|s| (s.slope.clone(), s.length))
            .collect()
    }

    /// Root valuations with multiplicity, as `(valuation, count)` in
    /// decreasing order of valuation.
    pub fn root_valuation_counts(&self) -> Vec<(Rational, usize)> {
        self.segments
            .iter()
            .map(|s| (-s.slope.clone(), s.length))
            .collect()
    }

    pub fn total_length(&self) -> usize {
        self.segments.iter().map(|s| s.length).sum()
    }
}

pub fn newton_polygon(f: &PolyRat, p: &Prime) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return domain("Newton polygon of the zero polynomial");
    }
    let anchors = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match vp(c, p) {
            Valuation::Finite(v) => Some((i, rat_int(v))),
            Valuation::Infinity => None,
        })
        .collect();
    Ok(NewtonPolygon::from_anchors(anchors))
}

/// Nonzero roots by valuation, plus the multiplicity of the root `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootValuations {
    /// Sorted ascending, one entry per root.
    pub valuations: Vec<Rational>,
    pub zero_root_multiplicity: usize,
}

pub fn root_valuations(f: &PolyRat, p: &Prime) -> Result<RootValuations> {
    let polygon = newton_polygon(f, p)?;
    let mut valuations: Vec<Rational> = polygon
        .root_valuation_counts()
        .into_iter()
        .flat_map(|(v, n)| std::iter::repeat_n(v, n))
        .collect();
    valuations.sort();
    Ok(RootValuations {
        valuations,
        zero_root_multiplicity: f.zero_root_multiplicity(),
    })
}

pub fn is_eisenstein(f: &PolyRat, p: &Prime) -> Result<bool> {
    let Some(d) = f.degree() else {
        return domain("Eisenstein test of the zero polynomial");
    };
    if !f.leading().is_one() {
        return domain("Eisenstein test needs a monic polynomial");
    }
    if let Some(c) = f.coeffs().iter().find(|c| !is_p_integral(c, p.value())) {
        return domain(format!("coefficient {c} is not {p}-integral"));
    }
    if d == 0 {
        return Ok(false);
    }
    let lower_divisible = f.coeffs()[..d]
        .iter()
        .all(|c| vp(c, p) >= Valuation::Finite(1));
    Ok(lower_divisible && vp(&f.coeff(0), p) == Valuation::Finite(1))
}
