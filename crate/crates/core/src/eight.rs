//! The figure-eight maps f and f_t, their displacement cocycle and the
//! kneading words of the clip points.
//!
//! S₁ has length 5 with edges C, c, 1, 2, 2r on the unit intervals
//! [0,1) … [4,5); S₂ has length 3 with edges A, B, b. The wedge point is
//! position 0 on either circle, stored as `(S1, 0)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::rational::{fmt_rational, int, parse_rational, rat, Rational};
use crate::word::{is_maximal, max_maximal_below, DigitWord, Maximality};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Circle {
    S1,
    S2,
}

impl Circle {
    pub fn length(self) -> i64 {
        match self {
            Circle::S1 => 5,
            Circle::S2 => 3,
        }
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Circle::S1 => "S1",
            Circle::S2 => "S2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EightPoint {
    circle: Circle,
    pos: Rational,
}

impl EightPoint {
    /// Validates `0 ≤ pos < length` and folds the wedge point onto S1.
    pub fn new(circle: Circle, pos: Rational) -> Result<Self> {
        if pos.is_negative() || pos >= int(circle.length()) {
            return domain(format!("position {} outside {circle}", fmt_rational(&pos)));
        }
        let circle = if pos.is_zero() { Circle::S1 } else { circle };
        Ok(Self { circle, pos })
    }

    /// Reduces `pos` modulo the circle length first.
    fn wrapped(circle: Circle, pos: Rational) -> Self {
        let len = int(circle.length());
        let mut p = &pos - (&pos / &len).floor() * &len;
        if p.is_negative() {
            p += len;
        }
        Self::new(circle, p).expect("reduced position")
    }

    pub fn wedge() -> Self {
        Self {
            circle: Circle::S1,
            pos: Rational::zero(),
        }
    }

    pub fn circle(&self) -> Circle {
        self.circle
    }

    pub fn pos(&self) -> &Rational {
        &self.pos
    }

    pub fn edge(&self) -> Edge {
        let k = self
            .pos
            .floor()
            .to_integer()
            .to_usize()
            .expect("position in range");
        match self.circle {
            Circle::S1 => [Edge::C, Edge::LowerC, Edge::One, Edge::Two, Edge::TwoRev][k],
            Circle::S2 => [Edge::A, Edge::B, Edge::LowerB][k],
        }
    }
}

impl fmt::Display for EightPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.circle, fmt_rational(&self.pos))
    }
}

impl FromStr for EightPoint {
    type Err = Error;

    /// `"S1:149/40"`.
    fn from_str(s: &str) -> Result<Self> {
        let (c, p) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected CIRCLE:POS, got {s:?}")))?;
        let circle = match c.trim() {
            "S1" | "s1" => Circle::S1,
            "S2" | "s2" => Circle::S2,
            other => return Err(Error::Parse(format!("unknown circle {other:?}"))),
        };
        EightPoint::new(circle, parse_rational(p)?)
    }
}

impl Serialize for EightPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Edges of the figure eight; lower case names run backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Edge {
    C,
    LowerC,
    One,
    Two,
    TwoRev,
    A,
    B,
    LowerB,
}

/// One affine branch: on `[start, start + 1)` of `circle`, the image is
/// `slope·x + offset` taken modulo the length of `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Branch {
    pub edge: Edge,
    pub circle: Circle,
    pub start: i64,
    pub slope: i64,
    pub offset: i64,
    pub target: Circle,
}

pub const BRANCHES: [Branch; 8] = [
    Branch {
        edge: Edge::C,
        circle: Circle::S1,
        start: 0,
        slope: 3,
        offset: 0,
        target: Circle::S2,
    },
    Branch {
        edge: Edge::LowerC,
        circle: Circle::S1,
        start: 1,
        slope: -3,
        offset: 6,
        target: Circle::S2,
    },
    Branch {
        edge: Edge::One,
        circle: Circle::S1,
        start: 2,
        slope: 5,
        offset: -10,
        target: Circle::S1,
    },
    Branch {
        edge: Edge::Two,
        circle: Circle::S1,
        start: 3,
        slope: 5,
        offset: -15,
        target: Circle::S1,
    },
    Branch {
        edge: Edge::TwoRev,
        circle: Circle::S1,
        start: 4,
        slope: -5,
        offset: 25,
        target: Circle::S1,
    },
    Branch {
        edge: Edge::A,
        circle: Circle::S2,
        start: 0,
        slope: 3,
        offset: 0,
        target: Circle::S2,
    },
    Branch {
        edge: Edge::B,
        circle: Circle::S2,
        start: 1,
        slope: 5,
        offset: -5,
        target: Circle::S1,
    },
    Branch {
        edge: Edge::LowerB,
        circle: Circle::S2,
        start: 2,
        slope: -5,
        offset: 15,
        target: Circle::S1,
    },
];

pub fn branch(edge: Edge) -> &'static Branch {
    BRANCHES
        .iter()
        .find(|b| b.edge == edge)
        .expect("every edge has a branch")
}

pub fn apply_f(x: &EightPoint) -> EightPoint {
    let b = branch(x.edge());
    EightPoint::wrapped(b.target, int(b.slope) * &x.pos + int(b.offset))
}

fn check_t(t: &Rational) -> Result<()> {
    if t.is_negative() || t > &Rational::one() {
        return domain(format!("parameter t = {} outside [0, 1]", fmt_rational(t)));
    }
    Ok(())
}

fn half_width(t: &Rational) -> Rational {
    (int(5) - int(3) * t) / int(10)
}

/// Left clip point ℓ(t) = 4 − (5−3t)/10 on S1.
pub fn ell(t: &Rational) -> Result<EightPoint> {
    check_t(t)?;
    EightPoint::new(Circle::S1, int(4) - half_width(t))
}

/// Right clip point r(t) = 4 + (5−3t)/10 on S1.
pub fn r_pt(t: &Rational) -> Result<EightPoint> {
    check_t(t)?;
    EightPoint::new(Circle::S1, int(4) + half_width(t))
}

/// The point p = (S1, 4) at the centre of the clip interval.
pub fn p_point() -> EightPoint {
    EightPoint {
        circle: Circle::S1,
        pos: int(4),
    }
}

/// f_t: the closed interval I_t = [ℓ(t), r(t)] collapses onto f(ℓ(t)).
pub fn apply_ft(t: &Rational, x: &EightPoint) -> Result<EightPoint> {
    let l = ell(t)?;
    let r = r_pt(t)?;
    if x.circle == Circle::S1 && x.pos >= l.pos && x.pos <= r.pos {
        Ok(apply_f(&l))
    } else {
        Ok(apply_f(x))
    }
}

/// Displacement Γ: (0,1) on B and b, (1,0) on 2 and 2r, zero elsewhere.
pub fn gamma(x: &EightPoint) -> (i64, i64) {
    edge_gamma(x.edge())
}

fn edge_gamma(e: Edge) -> (i64, i64) {
    match e {
        Edge::B | Edge::LowerB => (0, 1),
        Edge::Two | Edge::TwoRev => (1, 0),
        _ => (0, 0),
    }
}

/// Orbit arithmetic over a fixed common denominator: positions are
/// integers `k` standing for `k / den`.
struct ScaledOrbit {
    den: i128,
    lo: i128,
    hi: i128,
    clip_image: (Circle, i128),
}

impl ScaledOrbit {
    fn new(t: &Rational, x: &EightPoint) -> Result<Self> {
        let l = ell(t)?;
        let r = r_pt(t)?;
        let den = x.pos.denom().lcm(l.pos.denom()).lcm(r.pos.denom());
        let den_i = den
            .to_i128()
            .filter(|&d| d < 1 << 40)
            .ok_or_else(|| Error::Domain("denominator too large".into()))?;
        let scale = |q: &Rational| {
            (q * Rational::from_integer(den.clone()))
                .to_integer()
                .to_i128()
                .expect("scaled")
        };
        let (lo, hi) = (scale(&l.pos), scale(&r.pos));
        let mut me = Self {
            den: den_i,
            lo,
            hi,
            clip_image: (Circle::S1, 0),
        };
        me.clip_image = me.f(Circle::S1, lo);
        Ok(me)
    }

    fn edge(&self, c: Circle, k: i128) -> Edge {
        let i = (k / self.den) as usize;
        match c {
            Circle::S1 => [Edge::C, Edge::LowerC, Edge::One, Edge::Two, Edge::TwoRev][i],
            Circle::S2 => [Edge::A, Edge::B, Edge::LowerB][i],
        }
    }

    fn f(&self, c: Circle, k: i128) -> (Circle, i128) {
        let b = branch(self.edge(c, k));
        let len = b.target.length() as i128 * self.den;
        let y = (b.slope as i128 * k + b.offset as i128 * self.den).rem_euclid(len);
        (if y == 0 { Circle::S1 } else { b.target }, y)
    }

    fn ft(&self, c: Circle, k: i128) -> (Circle, i128) {
        if c == Circle::S1 && k >= self.lo && k <= self.hi {
            self.clip_image
        } else {
            self.f(c, k)
        }
    }

    fn point(&self, c: Circle, k: i128) -> EightPoint {
        EightPoint::new(c, Rational::new(BigInt::from(k), BigInt::from(self.den)))
            .expect("in range")
    }

    fn scale(&self, x: &EightPoint) -> i128 {
        (&x.pos * Rational::from_integer(BigInt::from(self.den)))
            .to_integer()
            .to_i128()
            .expect("scaled")
    }
}

/// Result of iterating f_t with the cocycle Γ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCocycle {
    pub end: EightPoint,
    pub sum: (i64, i64),
    pub steps: u64,
}

impl OrbitCocycle {
    /// Birkhoff average `sum / steps`.
    pub fn estimate(&self) -> (Rational, Rational) {
        let r = Rational::from_integer(BigInt::from(self.steps));
        (int(self.sum.0) / &r, int(self.sum.1) / r)
    }
}

/// Γ summed over the first `r` points of the f_t-orbit of `x`.
pub fn orbit_cocycle(t: &Rational, x: &EightPoint, r: u64) -> Result<OrbitCocycle> {
    if r == 0 {
        return domain("orbit length must be positive");
    }
    let orbit = ScaledOrbit::new(t, x)?;
    let (mut c, mut k) = (x.circle, orbit.scale(x));
    let mut sum = (0i64, 0i64);
    for _ in 0..r {
        let g = edge_gamma(orbit.edge(c, k));
        sum = (sum.0 + g.0, sum.1 + g.1);
        (c, k) = orbit.ft(c, k);
    }
    Ok(OrbitCocycle {
        end: orbit.point(c, k),
        sum,
        steps: r,
    })
}

/// One row of an orbit trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStep {
    pub step: u64,
    pub point: EightPoint,
    pub gamma: (i64, i64),
}

/// The points x, f_t(x), …, f_t^{r−1}(x) with their displacements.
pub fn orbit_trace(t: &Rational, x: &EightPoint, r: u64) -> Result<Vec<OrbitStep>> {
    let orbit = ScaledOrbit::new(t, x)?;
    let (mut c, mut k) = (x.circle, orbit.scale(x));
    let mut out = Vec::with_capacity(r as usize);
    for step in 0..r {
        out.push(OrbitStep {
            step,
            point: orbit.point(c, k),
            gamma: edge_gamma(orbit.edge(c, k)),
        });
        (c, k) = orbit.ft(c, k);
    }
    Ok(out)
}

/// Domain pieces of the return map on S1, in increasing order, with the
/// affine map F(x) = slope·x + offset on each.
fn pieces() -> [(Rational, Rational, i64, i64); 3] {
    [
        (rat(1, 3), rat(3, 5), 15, -5),
        (int(2), rat(14, 5), 5, -10),
        (int(3), int(4), 5, -15),
    ]
}

/// The value of F as a real number in [0, 5], with its piece index.
fn return_value(x: &Rational) -> Option<(u8, Rational)> {
    pieces()
        .iter()
        .enumerate()
        .find(|(_, (a, b, _, _))| x >= a && x <= b)
        .map(|(d, (_, _, s, o))| (d as u8, int(*s) * x + int(*o)))
}

/// Return map F on C′ ∪ 1′ ∪ 2: f² on C′ and f on 1′ ∪ 2.
pub fn return_f(x: &EightPoint) -> Result<EightPoint> {
    if x.circle != Circle::S1 {
        return domain(format!("{x} is outside the return domain"));
    }
    match return_value(&x.pos) {
        Some((_, y)) => Ok(EightPoint::wrapped(Circle::S1, y)),
        None => domain(format!("{x} is outside the return domain")),
    }
}

/// Smallest point of the invariant Cantor set: the fixed point of F on C′.
pub fn z1_min() -> Rational {
    rat(5, 14)
}

/// Iteration cap for the exact kneading search.
pub const KNEADING_STEP_LIMIT: usize = 1 << 16;

/// How the greedy extraction of θ(t) ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThetaStop {
    /// The orbit of the clip point returned to an earlier value.
    Cycle { start: usize, period: usize },
    /// The orbit left all pieces through the gap above `piece`.
    Gap { step: usize, piece: u8 },
    /// The next value fell below the invariant set; the last digit dropped.
    Below { step: usize },
    /// No closure within the step limit; the word is a finite prefix.
    Limit { steps: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theta {
    pub word: DigitWord,
    pub stop: ThetaStop,
}

/// θ(t): the supremum of itineraries of points of the invariant set lying
/// at or below ℓ(t), extracted greedily along the F-orbit of ℓ(t).
pub fn theta(t: &Rational, depth: usize) -> Result<Theta> {
    let mut x = ell(t)?.pos;
    let limit = depth.max(KNEADING_STEP_LIMIT);
    let mut digits: Vec<u8> = Vec::new();
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let top = |digits: Vec<u8>| DigitWord::eventually_periodic(digits, vec![2]);
    loop {
        let step = digits.len();
        if let Some(&start) = seen.get(&x) {
            let period = digits.split_off(start);
            let len = period.len();
            return Ok(Theta {
                word: DigitWord::eventually_periodic(digits, period)?,
                stop: ThetaStop::Cycle { start, period: len },
            });
        }
        if step >= limit {
            return Ok(Theta {
                word: DigitWord::finite(digits)?,
                stop: ThetaStop::Limit { steps: step },
            });
        }
        match return_value(&x) {
            Some((d, y)) if y >= z1_min() => {
                seen.insert(x, step);
                digits.push(d);
                x = y;
            }
            Some((d, _)) => {
                if d == 0 {
                    return Err(Error::Internal(format!(
                        "clip orbit fell below the invariant set at step {step}"
                    )));
                }
                digits.push(d - 1);
                return Ok(Theta {
                    word: top(digits)?,
                    stop: ThetaStop::Below { step },
                });
            }
            None => {
                let Some(piece) = pieces().iter().rposition(|(a, _, _, _)| &x >= a) else {
                    return Err(Error::Internal(format!(
                        "clip orbit below every piece at step {step}"
                    )));
                };
                digits.push(piece as u8);
                return Ok(Theta {
                    word: top(digits)?,
                    stop: ThetaStop::Gap {
                        step,
                        piece: piece as u8,
                    },
                });
            }
        }
    }
}

/// Kneading data at parameter `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KneadingResult {
    #[serde(with = "crate::rational::serde_str")]
    pub t: Rational,
    pub theta: Theta,
    /// The largest maximal word at or below θ(t).
    pub kneading: DigitWord,
    pub depth: usize,
    /// The kneading word is exact rather than a certified finite prefix.
    pub exact: bool,
}

impl KneadingResult {
    pub fn prefix(&self) -> Vec<u8> {
        self.kneading.prefix(self.depth)
    }
}

pub fn kneading_prefix(t: &Rational, depth: usize) -> Result<KneadingResult> {
    let th = theta(t, depth)?;
    let kneading = max_maximal_below(&th.word)?;
    if let Maximality::No(r) = is_maximal(&kneading) {
        return Err(Error::Internal(format!(
            "kneading word {kneading} fails maximality at shift {r}"
        )));
    }
    let exact = !kneading.is_finite();
    Ok(KneadingResult {
        t: t.clone(),
        theta: th,
        kneading,
        depth,
        exact,
    })
}
