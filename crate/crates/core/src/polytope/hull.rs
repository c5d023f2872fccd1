//! Exact rational polygons: hulls, containment and Hausdorff distances.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rational(&self.x), fmt_rational(&self.y))
    }
}

/// Coordinate system a polygon lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// The simplex through its `(α₀, α₂)` coordinates.
    Delta,
    /// The plane of rotation vectors.
    Pi,
}

/// Twice the signed area of the triangle `o, a, b`.
fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

/// A convex polygon with exact vertices listed counterclockwise from the
/// lexicographically smallest one. Degenerate hulls (a point, a segment)
/// are allowed; no three retained vertices are collinear.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPolygon {
    chart: Chart,
    vertices: Vec<Point>,
}

impl RatPolygon {
    /// Convex hull of a point set (Andrew's monotone chain).
    pub fn hull(chart: Chart, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let pts: Vec<Point> = points
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if pts.is_empty() {
            return Err(Error::Domain("convex hull of an empty point set".into()));
        }
        if pts.len() <= 2 {
            return Ok(Self {
                chart,
                vertices: pts,
            });
        }
        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Rational::zero()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Rational::zero()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Ok(Self {
            chart,
            vertices: lower,
        })
    }

    /// Validates an explicit vertex list: it must already be in canonical
    /// strictly convex counterclockwise form.
    pub fn from_vertices(chart: Chart, vertices: Vec<Point>) -> Result<Self> {
        let hull = Self::hull(chart, vertices.clone())?;
        if hull.vertices != vertices {
            return Err(Error::Domain(
                "vertex list is not a canonical strictly convex polygon".into(),
            ));
        }
        Ok(hull)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges `(a, b)` in counterclockwise order (one edge for a segment).
    pub fn edges(&self) -> Vec<(&Point, &Point)> {
        let n = self.vertices.len();
        match n {
            0 | 1 => Vec::new(),
            2 => vec![(&self.vertices[0], &self.vertices[1])],
            _ => (0..n)
                .map(|i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
                .collect(),
        }
    }

    /// Closed containment test.
    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => on_segment(&self.vertices[0], &self.vertices[1], p),
            _ => self
                .edges()
                .into_iter()
                .all(|(a, b)| cross(a, b, p) >= Rational::zero()),
        }
    }

    pub fn contains_polygon(&self, other: &RatPolygon) -> bool {
        self.chart == other.chart && other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn map_vertices(&self, chart: Chart, f: impl Fn(&Point) -> Point) -> Result<Self> {
        Self::hull(chart, self.vertices.iter().map(f))
    }

    /// Max-norm distance from `p` to the polygon (zero inside).
    pub fn distance_max_norm(&self, p: &Point) -> Rational {
        if self.contains(p) {
            return Rational::zero();
        }
        match self.vertices.len() {
            1 => max_norm(&self.vertices[0], p),
            _ => self
                .edges()
                .into_iter()
                .map(|(a, b)| segment_distance_max_norm(a, b, p))
                .min()
                .expect("nonempty edge list"),
        }
    }

    /// Squared Euclidean distance from `p` to the polygon (zero inside).
    pub fn distance_sq(&self, p: &Point) -> Rational {
        if self.contains(p) {
            return Rational::zero();
        }
        match self.vertices.len() {
            1 => dist_sq(&self.vertices[0], p),
            _ => self
                .edges()
                .into_iter()
                .map(|(a, b)| segment_distance_sq(a, b, p))
                .min()
                .expect("nonempty edge list"),
        }
    }
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

fn max_norm(a: &Point, b: &Point) -> Rational {
    (&a.x - &b.x).abs().max((&a.y - &b.y).abs())
}

fn dist_sq(a: &Point, b: &Point) -> Rational {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    &dx * &dx + &dy * &dy
}

fn lerp(a: &Point, b: &Point, s: &Rational) -> Point {
    Point::new(&a.x + (&b.x - &a.x) * s, &a.y + (&b.y - &a.y) * s)
}

/// The max-norm distance along the segment is convex and piecewise linear
/// in the parameter; its minimum sits at an endpoint or a breakpoint.
fn segment_distance_max_norm(a: &Point, b: &Point, p: &Point) -> Rational {
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    let ex = &p.x - &a.x;
    let ey = &p.y - &a.y;
    let mut params = vec![Rational::zero(), num_traits::One::one()];
    // X(s) = s·dx − ex, Y(s) = s·dy − ey; breakpoints at X = 0, Y = 0, X = ±Y.
    let candidates = [
        (dx.clone(), ex.clone()),
        (dy.clone(), ey.clone()),
        (&dx - &dy, &ex - &ey),
        (&dx + &dy, &ex + &ey),
    ];
    for (coef, rhs) in candidates {
        if !coef.is_zero() {
            let s = rhs / coef;
            if s > Rational::zero() && s < num_traits::One::one() {
                params.push(s);
            }
        }
    }
    params
        .iter()
        .map(|s| max_norm(&lerp(a, b, s), p))
        .min()
        .expect("endpoints present")
}

fn segment_distance_sq(a: &Point, b: &Point, p: &Point) -> Rational {
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    let len_sq = &dx * &dx + &dy * &dy;
    if len_sq.is_zero() {
        return dist_sq(a, p);
    }
    let t = ((&p.x - &a.x) * &dx + (&p.y - &a.y) * &dy) / len_sq;
    let t = t.max(Rational::zero()).min(num_traits::One::one());
    dist_sq(&lerp(a, b, &t), p)
}

/// Exact Hausdorff distance between convex polygons in the max-norm of the
/// chart. Distance to a convex set is convex, so vertices suffice.
pub fn hausdorff(p: &RatPolygon, q: &RatPolygon) -> Result<Rational> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::Domain(
            "Hausdorff distance of an empty polygon".into(),
        ));
    }
    let one_way = |a: &RatPolygon, b: &RatPolygon| {
        a.vertices
            .iter()
            .map(|v| b.distance_max_norm(v))
            .max()
            .unwrap_or_else(Rational::zero)
    };
    Ok(one_way(p, q).max(one_way(q, p)))
}

/// Squared Euclidean Hausdorff distance.
pub fn hausdorff_sq(p: &RatPolygon, q: &RatPolygon) -> Result<Rational> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::Domain(
            "Hausdorff distance of an empty polygon".into(),
        ));
    }
    let one_way = |a: &RatPolygon, b: &RatPolygon| {
        a.vertices
            .iter()
            .map(|v| b.distance_sq(v))
            .max()
            .unwrap_or_else(Rational::zero)
    };
    Ok(one_way(p, q).max(one_way(q, p)))
}

#[derive(Serialize, Deserialize)]
struct PolygonJson {
    chart: Chart,
    vertices: Vec<[String; 2]>,
}

impl Serialize for RatPolygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonJson {
            chart: self.chart,
            vertices: self
                .vertices
                .iter()
                .map(|v| [fmt_rational(&v.x), fmt_rational(&v.y)])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPolygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolygonJson::deserialize(d)?;
        let vertices = raw
            .vertices
            .iter()
            .map(|[x, y]| Ok(Point::new(parse_rational(x)?, parse_rational(y)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RatPolygon::from_vertices(raw.chart, vertices).map_err(D::Error::custom)
    }
}

impl fmt::Display for RatPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", vs.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn pt(x: (i64, i64), y: (i64, i64)) -> Point {
        Point::new(rat(x.0, x.1), rat(y.0, y.1))
    }

    fn simplex() -> RatPolygon {
        RatPolygon::hull(
            Chart::Delta,
            [pt((1, 1), (0, 1)), pt((0, 1), (0, 1)), pt((0, 1), (1, 1))],
        )
        .unwrap()
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let h = RatPolygon::hull(
            Chart::Delta,
            [
                pt((0, 1), (0, 1)),
                pt((1, 2), (0, 1)),
                pt((1, 1), (0, 1)),
                pt((0, 1), (1, 1)),
                pt((1, 4), (1, 4)),
            ],
        )
        .unwrap();
        assert_eq!(
            h.vertices(),
            &[pt((0, 1), (0, 1)), pt((1, 1), (0, 1)), pt((0, 1), (1, 1))]
        );
    }

    #[test]
    fn degenerate_hulls() {
        let seg = RatPolygon::hull(
            Chart::Pi,
            [pt((0, 1), (0, 1)), pt((1, 2), (0, 1)), pt((1, 1), (0, 1))],
        )
        .unwrap();
        assert_eq!(seg.len(), 2);
        assert!(seg.contains(&pt((1, 3), (0, 1))));
        assert!(!seg.contains(&pt((1, 3), (1, 9))));
        let single = RatPolygon::hull(Chart::Pi, [pt((1, 2), (1, 2))]).unwrap();
        assert_eq!(single.len(), 1);
        assert!(RatPolygon::hull(Chart::Pi, Vec::new()).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let d = simplex();
        assert!(hausdorff(&d, &d).unwrap().is_zero());

        let seg = RatPolygon::hull(Chart::Pi, [pt((0, 1), (0, 1)), pt((1, 1), (0, 1))]).unwrap();
        let mid = RatPolygon::hull(Chart::Pi, [pt((1, 2), (0, 1))]).unwrap();
        assert_eq!(hausdorff(&seg, &mid).unwrap(), rat(1, 2));
        assert_eq!(hausdorff_sq(&seg, &mid).unwrap(), rat(1, 4));

        // Simplex against the cut at α₂ ≤ 1/2: the far vertex e₂ = (0,1)
        // sits at Euclidean distance 1/2 and max-norm distance 1/2 from the
        // cut edge joining (1/2,1/2) and (0,1/2).
        let cut = RatPolygon::hull(
            Chart::Delta,
            [
                pt((1, 1), (0, 1)),
                pt((0, 1), (0, 1)),
                pt((1, 2), (1, 2)),
                pt((0, 1), (1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(hausdorff_sq(&d, &cut).unwrap(), rat(1, 4));
        assert_eq!(hausdorff(&d, &cut).unwrap(), rat(1, 2));
    }

    #[test]
    fn max_norm_distance_to_slanted_edge() {
        // Distance from (1,1) to the edge x + y = 1 in max norm is 1/2
        // (attained at (1/2,1/2)); Euclidean squared distance is 1/2.
        let d = simplex();
        let p = Point::new(int(1), int(1));
        assert_eq!(d.distance_max_norm(&p), rat(1, 2));
        assert_eq!(d.distance_sq(&p), rat(1, 2));
    }

    #[test]
    fn json_round_trip_and_rejects_nonconvex() {
        let d = simplex();
        let js = serde_json::to_string(&d).unwrap();
        assert_eq!(
            js,
            r#"{"chart":"delta","vertices":[["0","0"],["1","0"],["0","1"]]}"#
        );
        let back: RatPolygon = serde_json::from_str(&js).unwrap();
        assert_eq!(back, d);
        let clockwise = r#"{"chart":"delta","vertices":[["0","0"],["0","1"],["1","0"]]}"#;
        assert!(serde_json::from_str::<RatPolygon>(clockwise).is_err());
    }
}
