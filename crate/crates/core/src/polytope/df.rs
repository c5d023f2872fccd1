//! Certified inner/outer polygons for digit frequency sets.
//!
//! The outer polygon is the hull of cycle-mean frequency vectors of a
//! finite presentation, found by directional refinement with exact
//! maximum-mean-cycle probes. The inner polygon is the hull of frequencies
//! of periodic words verified to lie in the β-shift.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::polytope::graph::{BetaAutomaton, DigitGraph};
use crate::polytope::hull::{Chart, Point, RatPolygon};
use crate::polytope::mmc::{cycle_counts, max_mean_cycle_int};
use crate::rational::Rational;
use crate::word::{
    beta_member, is_maximal, lyndon_words, max_rotation, DigitWord, FreqVector, Maximality,
    Membership,
};

/// Periods up to this length are enumerated exhaustively as inner candidates;
/// longer witnesses come from cycles of the presentation.
pub const EXHAUSTIVE_PERIOD_LIMIT: usize = 8;

/// A periodic word together with its digit frequencies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub word: DigitWord,
    pub freq: FreqVector,
}

impl Witness {
    /// Canonical witness for a cycle block: its largest rotation.
    pub fn from_block(block: &[u8]) -> Result<Self> {
        let word = DigitWord::periodic(max_rotation(block))?;
        let freq = FreqVector::from_counts(cycle_counts(word.period()))?;
        Ok(Self { word, freq })
    }

    pub fn chart_point(&self) -> Point {
        let (a0, a2) = self.freq.chart();
        Point::new(a0, a2)
    }
}

/// Hull of the cycle means of a presentation, with one cycle per vertex.
#[derive(Clone, Debug)]
pub struct OuterPolytope {
    pub polygon: RatPolygon,
    pub cycles: Vec<Witness>,
}

fn support(g: &DigitGraph, dir: (i64, i64)) -> Result<Witness> {
    let best = max_mean_cycle_int(g, [dir.0, 0, dir.1])?;
    Witness::from_block(&best.digits)
}

fn dot(dir: (i64, i64), p: &Point) -> Rational {
    &p.x * Rational::from_integer(BigInt::from(dir.0))
        + &p.y * Rational::from_integer(BigInt::from(dir.1))
}

/// Primitive integer outward normal of the counterclockwise edge `a → b`.
fn outward_normal(a: &Point, b: &Point) -> Result<(i64, i64)> {
    let nx = &b.y - &a.y;
    let ny = &a.x - &b.x;
    let lcm = nx.denom().lcm(ny.denom());
    let ix = (nx * Rational::from_integer(lcm.clone())).to_integer();
    let iy = (ny * Rational::from_integer(lcm)).to_integer();
    let g = ix.gcd(&iy);
    if g.is_zero() {
        return Err(Error::Internal("degenerate edge".into()));
    }
    match ((ix / &g).to_i64(), (iy / &g).to_i64()) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(Error::Domain(
            "edge normal too large for integer weights".into(),
        )),
    }
}

/// Exact vertex list of the hull of cycle-mean frequency vectors of `g`,
/// in the `(α₀, α₂)` chart.
pub fn outer_polytope(g: &DigitGraph) -> Result<OuterPolytope> {
    let mut found: BTreeMap<Point, Witness> = BTreeMap::new();
    for dir in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
        let w = support(g, dir)?;
        found.entry(w.chart_point()).or_insert(w);
    }
    let mut settled: BTreeSet<(Point, Point)> = BTreeSet::new();
    loop {
        let hull = RatPolygon::hull(Chart::Delta, found.keys().cloned())?;
        let vs = hull.vertices();
        let edges: Vec<(Point, Point)> = match vs.len() {
            1 => Vec::new(),
            2 => vec![
                (vs[0].clone(), vs[1].clone()),
                (vs[1].clone(), vs[0].clone()),
            ],
            _ => hull
                .edges()
                .into_iter()
                .map(|(a, b)| (a.clone(), b.clone()))
                .collect(),
        };
        let mut grew = false;
        for (a, b) in edges {
            if settled.contains(&(a.clone(), b.clone())) {
                continue;
            }
            let normal = outward_normal(&a, &b)?;
            let w = support(g, normal)?;
            let p = w.chart_point();
            if dot(normal, &p) > dot(normal, &a) {
                found.entry(p).or_insert(w);
                grew = true;
            } else {
                settled.insert((a, b));
            }
        }
        if !grew {
            let cycles = hull.vertices().iter().map(|v| found[v].clone()).collect();
            return Ok(OuterPolytope {
                polygon: hull,
                cycles,
            });
        }
    }
}

fn lyndon_cache() -> &'static [Vec<u8>] {
    static CACHE: OnceLock<Vec<Vec<u8>>> = OnceLock::new();
    CACHE.get_or_init(|| lyndon_words(EXHAUSTIVE_PERIOD_LIMIT))
}

/// Inner polygon from a candidate list: keeps the candidates whose periodic
/// word is certified in B(w) and hulls their frequencies.
fn inner_from_candidates<'a>(
    w: &DigitWord,
    max_period: usize,
    extra: impl IntoIterator<Item = &'a [u8]>,
) -> Result<(RatPolygon, Vec<Witness>)> {
    if max_period == 0 {
        return domain("max_period must be positive");
    }
    let exhaustive = lyndon_cache()
        .iter()
        .filter(|b| b.len() <= max_period)
        .map(|b| b.as_slice());
    let mut accepted: BTreeMap<Point, Witness> = BTreeMap::new();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    for block in exhaustive.chain(extra) {
        if block.len() > max_period {
            continue;
        }
        let witness = Witness::from_block(block)?;
        if !seen.insert(witness.word.period().to_vec()) {
            continue;
        }
        let point = witness.chart_point();
        if accepted.contains_key(&point) {
            continue;
        }
        if beta_member(&witness.word, w)? == Membership::In {
            accepted.insert(point, witness);
        }
    }
    let polygon = RatPolygon::hull(Chart::Delta, accepted.keys().cloned())?;
    let witnesses = polygon
        .vertices()
        .iter()
        .map(|v| accepted[v].clone())
        .collect();
    Ok((polygon, witnesses))
}

/// Hull of frequencies of periodic words of period ≤ `max_period` that lie
/// in B(w): all short periods exhaustively, plus the vertex cycles of `g`.
pub fn inner_polytope(
    g: &DigitGraph,
    w: &DigitWord,
    max_period: usize,
) -> Result<(RatPolygon, Vec<Witness>)> {
    let outer = outer_polytope(g)?;
    inner_from_candidates(w, max_period, outer.cycles.iter().map(|c| c.word.period()))
}

/// Paired inner and outer approximations of DF(w) at a given order.
#[derive(Clone, Debug, Serialize)]
pub struct DfApprox {
    pub order: usize,
    /// The outer model presents B(w) exactly, so `outer` is DF(w) itself.
    pub exact_model: bool,
    pub inner: RatPolygon,
    pub outer: RatPolygon,
    pub inner_witnesses: Vec<Witness>,
    pub outer_cycles: Vec<Witness>,
}

impl DfApprox {
    pub fn is_closed(&self) -> bool {
        self.inner == self.outer
    }
}

/// The finite presentation used at order `n`: the exact automaton when the
/// whole preperiod and period of `w` fit in `n` symbols, otherwise the
/// order-`n` window model of its prefix.
pub fn presentation(w: &DigitWord, n: usize) -> Result<BetaAutomaton> {
    if !w.is_finite() && w.cycle_bound() <= n {
        BetaAutomaton::exact(w)
    } else {
        BetaAutomaton::window(w, n)
    }
}

pub fn df_approx(w: &DigitWord, n: usize, max_period: usize) -> Result<DfApprox> {
    if let Maximality::No(r) = is_maximal(w) {
        return Err(Error::NotMaximal(r));
    }
    let model = presentation(w, n)?;
    let outer = outer_polytope(model.graph())?;
    let (inner, inner_witnesses) =
        inner_from_candidates(w, max_period, outer.cycles.iter().map(|c| c.word.period()))?;
    if !outer.polygon.contains_polygon(&inner) {
        return Err(Error::Internal(format!(
            "inner {inner} escapes outer {}",
            outer.polygon
        )));
    }
    Ok(DfApprox {
        order: n,
        exact_model: model.is_exact(),
        inner,
        outer: outer.polygon,
        inner_witnesses,
        outer_cycles: outer.cycles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::graph::build_sft;
    use crate::rational::rat;

    fn w(s: &str) -> DigitWord {
        s.parse().unwrap()
    }

    type Frac = (i64, i64);

    fn poly(pts: &[(Frac, Frac)]) -> RatPolygon {
        RatPolygon::hull(
            Chart::Delta,
            pts.iter()
                .map(|&(x, y)| Point::new(rat(x.0, x.1), rat(y.0, y.1))),
        )
        .unwrap()
    }

    fn simplex() -> RatPolygon {
        poly(&[((1, 1), (0, 1)), ((0, 1), (0, 1)), ((0, 1), (1, 1))])
    }

    #[test]
    fn outer_of_full_shift_is_the_simplex() {
        let g = build_sft(&w("222"), 3).unwrap();
        assert_eq!(outer_polytope(g.graph()).unwrap().polygon, simplex());
    }

    #[test]
    fn outer_with_forbidden_double_two() {
        let g = build_sft(&w("21"), 2).unwrap();
        let expected = poly(&[
            ((1, 1), (0, 1)),
            ((0, 1), (0, 1)),
            ((1, 2), (1, 2)),
            ((0, 1), (1, 2)),
        ]);
        assert_eq!(outer_polytope(g.graph()).unwrap().polygon, expected);
    }

    #[test]
    fn inner_examples() {
        let g = build_sft(&w("22"), 2).unwrap();
        let (inner, wit) = inner_polytope(g.graph(), &w("(2)"), 3).unwrap();
        assert_eq!(inner, simplex());
        let words: Vec<String> = wit.iter().map(|x| x.word.to_string()).collect();
        assert_eq!(words, ["(1)", "(0)", "(2)"]);

        let k0 = w("2(1)");
        let g = build_sft(&w("2111"), 4).unwrap();
        let (inner, _) = inner_polytope(g.graph(), &k0, 4).unwrap();
        let half = Point::new(rat(1, 2), rat(1, 2));
        assert!(inner.contains(&half));
        assert!(inner.contains(&Point::new(rat(1, 3), rat(1, 3))));
        // (21) is not in B(21̄), and nothing reaches (0,1/2,1/2).
        assert!(!inner.contains(&Point::new(rat(0, 1), rat(1, 2))));
    }

    #[test]
    fn df_approx_closes_for_eventually_periodic_words() {
        let full = df_approx(&w("(2)"), 3, 3).unwrap();
        assert!(full.is_closed() && full.exact_model);
        assert_eq!(full.outer, simplex());

        let k0 = df_approx(&w("2(1)"), 6, 6).unwrap();
        assert!(k0.is_closed());
        // Every 2 needs a later 0 before the next 2: α₂ ≤ α₀.
        assert_eq!(
            k0.outer,
            poly(&[((0, 1), (0, 1)), ((1, 1), (0, 1)), ((1, 2), (1, 2))])
        );
    }

    #[test]
    fn window_model_cannot_close_on_an_eventually_periodic_tail() {
        // With only the prefix 2111 the cycle (2111) is admissible.
        let a = df_approx(&w("2111"), 4, 6).unwrap();
        assert!(!a.exact_model);
        assert!(!a.is_closed());
        assert!(a.outer.contains(&Point::new(rat(0, 1), rat(1, 4))));
    }

    #[test]
    fn df_approx_rejects_non_maximal() {
        assert!(df_approx(&w("211(2)"), 4, 4).is_err());
    }
}
