//! Rotation sets ρ(t) as Π-images of digit frequency sets of kneading words,
//! and plateau scans over the parameter interval.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::eight::{kneading_prefix, KneadingResult};
use crate::error::{domain, Error, Result};
use crate::polytope::{df_approx, hausdorff, Chart, Point, RatPolygon, Witness};
use crate::rational::Rational;
use crate::word::FreqVector;

/// Π(α) = (α₂/(1+α₀), α₀/(1+α₀)).
pub fn project_pi(alpha: &FreqVector) -> Point {
    let (a0, a2) = alpha.chart();
    project_chart(&Point::new(a0, a2))
}

/// Π on chart coordinates `(α₀, α₂)`.
pub fn project_chart(p: &Point) -> Point {
    let d = Rational::one() + &p.x;
    Point::new(&p.y / &d, &p.x / d)
}

/// Π⁻¹(x, y) = (y/(1−y), (1−x−2y)/(1−y), x/(1−y)), validated to lie in Δ.
pub fn pi_inverse(p: &Point) -> Result<FreqVector> {
    let one = Rational::one();
    let d = &one - &p.y;
    if d <= Rational::from_integer(BigInt::from(0)) {
        return domain(format!("{p} is outside the image of the simplex"));
    }
    let a0 = &p.y / &d;
    let a1 = (&one - &p.x - &p.y * Rational::from_integer(BigInt::from(2))) / &d;
    let a2 = &p.x / &d;
    FreqVector::new(a0, a1, a2)
        .map_err(|_| Error::Domain(format!("{p} is outside the image of the simplex")))
}

/// Π-image of a simplex-chart polygon. Π is projective, so the image of the
/// hull is the hull of the vertex images.
pub fn project_polygon(p: &RatPolygon) -> Result<RatPolygon> {
    if p.chart() != Chart::Delta {
        return domain("projection expects a simplex-chart polygon");
    }
    p.map_vertices(Chart::Pi, project_chart)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// Inner and outer agree: a certified polygon with rational vertices.
    RationalRegular,
    /// Still open at this depth; no claim about the limit.
    OpenIrrational { depth: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct RotsetReport {
    #[serde(with = "crate::rational::serde_str")]
    pub t: Rational,
    pub order: usize,
    pub max_period: usize,
    pub kneading: KneadingResult,
    /// The outer model presents the β-shift exactly.
    pub exact_model: bool,
    pub inner: RatPolygon,
    pub outer: RatPolygon,
    pub closed: bool,
    pub classification: Classification,
    /// Max-norm Hausdorff distance between inner and outer in the Π chart.
    #[serde(with = "crate::rational::serde_str")]
    pub gap: Rational,
    pub inner_witnesses: Vec<Witness>,
}

/// ρ(t) = Π(DF(K(t))) at order `n`, certified by an inner/outer pair.
pub fn rotation_set(t: &Rational, n: usize, max_period: usize) -> Result<RotsetReport> {
    let kneading = kneading_prefix(t, n)?;
    let approx = df_approx(&kneading.kneading, n, max_period)?;
    let inner = project_polygon(&approx.inner)?;
    let outer = project_polygon(&approx.outer)?;
    if !outer.contains_polygon(&inner) {
        return Err(Error::Internal(format!(
            "inner {inner} escapes outer {outer}"
        )));
    }
    let closed = approx.is_closed();
    let gap = hausdorff(&inner, &outer)?;
    let classification = if closed {
        Classification::RationalRegular
    } else {
        Classification::OpenIrrational { depth: n }
    };
    Ok(RotsetReport {
        t: t.clone(),
        order: n,
        max_period,
        kneading,
        exact_model: approx.exact_model,
        inner,
        outer,
        closed,
        classification,
        gap,
        inner_witnesses: approx.inner_witnesses,
    })
}

pub fn hausdorff_pi(p: &RatPolygon, q: &RatPolygon) -> Result<Rational> {
    if p.chart() != Chart::Pi || q.chart() != Chart::Pi {
        return domain("hausdorff_pi expects polygons in the rotation-vector chart");
    }
    hausdorff(p, q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanPoint {
    #[serde(with = "crate::rational::serde_str")]
    pub t: Rational,
    pub plateau_id: usize,
    pub n_vertices: usize,
    pub closed: bool,
}

/// A maximal run of consecutive grid points with the same outer polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Plateau {
    pub id: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub t_start: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub t_end: Rational,
    pub points: usize,
    pub outer: RatPolygon,
    /// Every grid point in the run certified its polygon.
    pub closed: bool,
}

impl Plateau {
    /// Width in grid steps.
    pub fn steps(&self) -> usize {
        self.points - 1
    }

    pub fn contains(&self, t: &Rational) -> bool {
        &self.t_start <= t && t <= &self.t_end
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlateauList {
    #[serde(with = "crate::rational::serde_str")]
    pub step: Rational,
    pub order: usize,
    pub points: Vec<ScanPoint>,
    pub plateaus: Vec<Plateau>,
}

/// Worker cap from `ROTKIT_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("ROTKIT_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n: &usize| n > 0)
}

/// Evaluates `steps` evenly spaced parameters in `[t0, t1]` and groups
/// neighbours with identical outer polygons.
pub fn scan(
    t0: &Rational,
    t1: &Rational,
    steps: usize,
    n: usize,
    max_period: usize,
) -> Result<PlateauList> {
    if t0 > t1 {
        return domain("scan range must satisfy from ≤ to");
    }
    if steps < 2 {
        return domain("scan needs at least two grid points");
    }
    let step = (t1 - t0) / Rational::from_integer(BigInt::from(steps - 1));
    let grid: Vec<Rational> = (0..steps)
        .map(|i| t0 + &step * Rational::from_integer(BigInt::from(i)))
        .collect();
    let eval = || -> Result<Vec<RotsetReport>> {
        grid.par_iter()
            .map(|t| rotation_set(t, n, max_period))
            .collect()
    };
    let reports = match thread_cap() {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(eval)?,
        None => eval()?,
    };

    let mut points = Vec::with_capacity(steps);
    let mut plateaus: Vec<Plateau> = Vec::new();
    for rep in reports {
        match plateaus.last_mut() {
            Some(p) if p.outer == rep.outer => {
                p.t_end = rep.t.clone();
                p.points += 1;
                p.closed &= rep.closed;
            }
            _ => plateaus.push(Plateau {
                id: plateaus.len(),
                t_start: rep.t.clone(),
                t_end: rep.t.clone(),
                points: 1,
                outer: rep.outer.clone(),
                closed: rep.closed,
            }),
        }
        points.push(ScanPoint {
            t: rep.t,
            plateau_id: plateaus.len() - 1,
            n_vertices: rep.outer.len(),
            closed: rep.closed,
        });
    }
    Ok(PlateauList {
        step,
        order: n,
        points,
        plateaus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn pi_poly(pts: &[(i64, i64, i64, i64)]) -> RatPolygon {
        RatPolygon::hull(
            Chart::Pi,
            pts.iter()
                .map(|&(a, b, c, d)| Point::new(rat(a, b), rat(c, d))),
        )
        .unwrap()
    }

    #[test]
    fn projection_examples() {
        let f = |s: &str| s.parse::<FreqVector>().unwrap();
        assert_eq!(project_pi(&f("0,1,0")), Point::new(int(0), int(0)));
        assert_eq!(project_pi(&f("0,0,1")), Point::new(int(1), int(0)));
        assert_eq!(project_pi(&f("1,0,0")), Point::new(int(0), rat(1, 2)));
        assert_eq!(
            pi_inverse(&Point::new(rat(2, 3), int(0))).unwrap(),
            f("0,1/3,2/3")
        );
        assert_eq!(
            pi_inverse(&Point::new(rat(3, 5), rat(1, 5))).unwrap(),
            f("1/4,0,3/4")
        );
        assert_eq!(
            pi_inverse(&Point::new(int(0), rat(1, 2))).unwrap(),
            f("1,0,0")
        );
        assert!(pi_inverse(&Point::new(int(1), rat(1, 2))).is_err());
    }

    #[test]
    fn triangle_at_one() {
        let rep = rotation_set(&int(1), 4, 4).unwrap();
        assert!(rep.closed);
        assert_eq!(
            rep.outer,
            pi_poly(&[(0, 1, 0, 1), (1, 1, 0, 1), (0, 1, 1, 2)])
        );
        assert_eq!(rep.classification, Classification::RationalRegular);
    }

    #[test]
    fn quadrilateral_at_three_quarters() {
        let rep = rotation_set(&rat(3, 4), 8, 8).unwrap();
        assert!(rep.closed);
        assert_eq!(
            rep.outer,
            pi_poly(&[(0, 1, 0, 1), (2, 3, 0, 1), (3, 5, 1, 5), (0, 1, 1, 2)])
        );
    }

    #[test]
    fn scan_edge_cases() {
        let one = scan(&rat(3, 4), &rat(3, 4), 2, 6, 6).unwrap();
        assert_eq!(one.plateaus.len(), 1);
        let ends = scan(&int(0), &int(1), 2, 6, 6).unwrap();
        assert_eq!(ends.plateaus.len(), 2);
        assert!(scan(&int(1), &int(0), 4, 6, 6).is_err());
        assert!(scan(&int(0), &int(1), 1, 6, 6).is_err());
    }
}
