//! Infimax words, substitutions and deviation growth.
//!
//! Rational infimaxes come from an exhaustive necklace search; irrational
//! ones appear only as substitution fixed-point prefixes. Cocycle sums are
//! exact integer counts, and floats enter only through eigen data, Sturmian
//! slopes and the reported deviations.

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::word::{
    is_maximal, lex_cmp, max_rotation, DigitWord, FreqVector, LexOrder, Maximality, TOP_DIGIT,
};

/// Largest common denominator accepted by [`infimax_rational`].
pub const INFIMAX_DENOMINATOR_BOUND: u64 = 12;

fn necklace_counts(alpha: &FreqVector, bound: u64) -> Result<[usize; 3]> {
    if alpha.get(2).is_zero() {
        return domain("infimax needs a positive frequency of the digit 2");
    }
    let q = alpha.denominator();
    let q_small = q.to_u64().filter(|&q| q <= bound);
    let Some(q) = q_small else {
        return domain(format!("denominator {q} exceeds the oracle bound {bound}"));
    };
    let qr = Rational::from_integer(q.into());
    let mut counts = [0usize; 3];
    for (i, c) in counts.iter_mut().enumerate() {
        *c = (alpha.get(i) * &qr)
            .to_integer()
            .to_usize()
            .expect("count below the bound");
    }
    Ok(counts)
}

/// Smallest maximal rotation among words with the given digit counts whose
/// first symbol is 2.
fn min_max_rotation(counts: [usize; 3]) -> Option<Vec<u8>> {
    fn rec(cur: &mut Vec<u8>, left: &mut [usize; 3], best: &mut Option<Vec<u8>>) {
        if left.iter().all(|&c| c == 0) {
            if *cur == max_rotation(cur) && best.as_ref().is_none_or(|b| *cur < *b) {
                *best = Some(cur.clone());
            }
            return;
        }
        for d in 0..=TOP_DIGIT {
            if left[d as usize] == 0 {
                continue;
            }
            // A rotation-maximal word never has a digit above its first.
            if d > cur[0] {
                continue;
            }
            left[d as usize] -= 1;
            cur.push(d);
            // Prune once the prefix already exceeds the incumbent.
            if best
                .as_ref()
                .is_none_or(|b| cur.as_slice() <= &b[..cur.len()])
            {
                rec(cur, left, best);
            }
            cur.pop();
            left[d as usize] += 1;
        }
    }
    let mut left = counts;
    if left[2] == 0 {
        return None;
    }
    left[2] -= 1;
    let mut cur = vec![TOP_DIGIT];
    let mut best = None;
    rec(&mut cur, &mut left, &mut best);
    best
}

/// I(α) for rational α with α₂ > 0 and denominator at most
/// [`INFIMAX_DENOMINATOR_BOUND`].
pub fn infimax_rational(alpha: &FreqVector) -> Result<DigitWord> {
    infimax_rational_bounded(alpha, INFIMAX_DENOMINATOR_BOUND)
}

pub fn infimax_rational_bounded(alpha: &FreqVector, bound: u64) -> Result<DigitWord> {
    let counts = necklace_counts(alpha, bound)?;
    let block =
        min_max_rotation(counts).ok_or_else(|| Error::Internal("no maximal necklace".into()))?;
    let w = DigitWord::periodic(block)?;
    if is_maximal(&w) != Maximality::Yes {
        return Err(Error::Internal(format!(
            "infimax candidate {w} is not maximal"
        )));
    }
    Ok(w)
}

/// α ∈ DF(w) decided through I(α) ≤ w.
pub fn df_char_test(alpha: &FreqVector, w: &DigitWord) -> Result<bool> {
    let inf = infimax_rational(alpha)?;
    match lex_cmp(&inf, w) {
        LexOrder::Less | LexOrder::Equal => Ok(true),
        LexOrder::Greater => Ok(false),
        LexOrder::Undecided(d) => Err(Error::TooShort {
            needed: d + 1,
            available: d,
        }),
    }
}

/// A substitution on {0,1,2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    images: [Vec<u8>; 3],
}

impl Substitution {
    pub fn new(images: [Vec<u8>; 3]) -> Result<Self> {
        for img in &images {
            if img.is_empty() {
                return domain("substitution images must be nonempty");
            }
            if let Some(&d) = img.iter().find(|&&d| d > TOP_DIGIT) {
                return Err(Error::InvalidDigit(d));
            }
        }
        Ok(Self { images })
    }

    /// Λ_n: 0 ↦ 1, 1 ↦ 2·0^{n+1}, 2 ↦ 2·0^n.
    pub fn lambda(n: usize) -> Self {
        let mut one = vec![2];
        one.extend(std::iter::repeat_n(0, n + 1));
        let mut two = vec![2];
        two.extend(std::iter::repeat_n(0, n));
        Self {
            images: [vec![1], one, two],
        }
    }

    pub fn image(&self, d: u8) -> &[u8] {
        &self.images[d as usize]
    }

    pub fn apply(&self, word: &[u8]) -> Vec<u8> {
        word.iter()
            .flat_map(|&d| self.images[d as usize].iter().copied())
            .collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        Substitution {
            images: [0, 1, 2].map(|d| self.apply(other.image(d))),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..3)
            .map(|d| {
                let img: String = self.images[d]
                    .iter()
                    .map(|&c| char::from(b'0' + c))
                    .collect();
                format!("{d}>{img}")
            })
            .collect();
        f.write_str(&parts.join(";"))
    }
}

impl FromStr for Substitution {
    type Err = Error;

    /// `"0>1;1>200;2>20"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut images: [Option<Vec<u8>>; 3] = [None, None, None];
        for rule in s.split(';').map(str::trim).filter(|r| !r.is_empty()) {
            let (lhs, rhs) = rule
                .split_once('>')
                .ok_or_else(|| Error::Parse(format!("rule {rule:?} lacks '>'")))?;
            let d = match lhs.trim() {
                "0" => 0,
                "1" => 1,
                "2" => 2,
                other => return Err(Error::Parse(format!("bad source digit {other:?}"))),
            };
            let img = rhs
                .trim()
                .bytes()
                .map(|b| match b {
                    b'0'..=b'2' => Ok(b - b'0'),
                    _ => Err(Error::Parse(format!("bad image {rhs:?}"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            if images[d].replace(img).is_some() {
                return Err(Error::Parse(format!("digit {d} defined twice")));
            }
        }
        let [Some(a), Some(b), Some(c)] = images else {
            return Err(Error::Parse(format!(
                "substitution {s:?} must define 0, 1 and 2"
            )));
        };
        Substitution::new([a, b, c])
    }
}

/// First `len` symbols of the fixed point of `sub` grown from `seed`.
pub fn subst_fixed_prefix(sub: &Substitution, seed: u8, len: usize) -> Result<DigitWord> {
    if seed > TOP_DIGIT {
        return Err(Error::InvalidDigit(seed));
    }
    let img = sub.image(seed);
    if img.len() < 2 || img[0] != seed {
        return domain(format!(
            "image of {seed} must start with {seed} and have length at least 2"
        ));
    }
    let mut out = img.to_vec();
    let mut i = 1;
    while out.len() < len {
        let d = out[i];
        out.extend_from_slice(sub.image(d));
        i += 1;
    }
    out.truncate(len);
    DigitWord::finite(out)
}

/// Abelianization: entry `(i, j)` counts digit `i` in the image of `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AbelMatrix(pub [[u64; 3]; 3]);

impl AbelMatrix {
    pub fn identity() -> Self {
        Self([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn multiply(&self, other: &AbelMatrix) -> AbelMatrix {
        let mut m = [[0u64; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        AbelMatrix(m)
    }

    pub fn pow(&self, k: u32) -> AbelMatrix {
        (0..k).fold(Self::identity(), |acc, _| acc.multiply(self))
    }

    pub fn apply(&self, v: [u64; 3]) -> [u64; 3] {
        [0, 1, 2].map(|i| (0..3).map(|k| self.0[i][k] * v[k]).sum())
    }

    pub fn is_primitive(&self) -> bool {
        let mut p = *self;
        for _ in 0..6 {
            if p.0.iter().flatten().all(|&x| x > 0) {
                return true;
            }
            p = p.multiply(self);
        }
        false
    }

    fn as_f64(&self) -> [[f64; 3]; 3] {
        self.0.map(|row| row.map(|x| x as f64))
    }

    /// Coefficients `(c₂, c₁, c₀)` of det(λI − A) = λ³ + c₂λ² + c₁λ + c₀.
    pub fn char_poly(&self) -> [i128; 3] {
        let a = self.0.map(|r| r.map(|x| x as i128));
        let tr = a[0][0] + a[1][1] + a[2][2];
        let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0]
            + a[1][1] * a[2][2]
            - a[1][2] * a[2][1];
        let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        [-tr, minors, -det]
    }
}

pub fn abelianization(sub: &Substitution) -> AbelMatrix {
    let mut m = [[0u64; 3]; 3];
    for j in 0..3u8 {
        for &d in sub.image(j) {
            m[d as usize][j as usize] += 1;
        }
    }
    AbelMatrix(m)
}

/// Perron–Frobenius data of a primitive matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PfData {
    pub lambda1: f64,
    /// Positive eigenvector with unit ℓ¹ norm.
    pub alpha: [f64; 3],
    /// Modulus of the second eigenvalue.
    pub lambda2_abs: f64,
}

impl PfData {
    /// Deviation growth exponent log|λ₂| / log λ₁.
    pub fn nu(&self) -> f64 {
        self.lambda2_abs.ln() / self.lambda1.ln()
    }
}

pub fn pf_eigen(a: &AbelMatrix) -> Result<PfData> {
    if !a.is_primitive() {
        return domain("matrix is not primitive");
    }
    let [c2, c1, c0] = a.char_poly().map(|c| c as f64);
    let p = |x: f64| ((x + c2) * x + c1) * x + c0;
    let dp = |x: f64| (3.0 * x + 2.0 * c2) * x + c1;
    // Newton from the largest column sum, an upper bound for λ₁, descends
    // monotonically onto the largest real root.
    let mut x = (0..3)
        .map(|j| (0..3).map(|i| a.0[i][j]).sum::<u64>())
        .max()
        .unwrap_or(1) as f64
        + 1.0;
    for _ in 0..200 {
        let step = p(x) / dp(x);
        x -= step;
        if step.abs() < 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    let lambda1 = x;

    let m = a.as_f64();
    let rows: Vec<[f64; 3]> = (0..3)
        .map(|i| [0, 1, 2].map(|j| m[i][j] - if i == j { lambda1 } else { 0.0 }))
        .collect();
    let cross = |u: [f64; 3], v: [f64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let norm = |v: &[f64; 3]| v.iter().map(|x| x.abs()).sum::<f64>();
    let v = [(0, 1), (0, 2), (1, 2)]
        .map(|(i, j)| cross(rows[i], rows[j]))
        .into_iter()
        .max_by(|u, w| norm(u).total_cmp(&norm(w)))
        .expect("three candidates");
    let s: f64 = v.iter().sum();
    let alpha = v.map(|x| x / s);
    if alpha.iter().any(|&x| x <= 0.0) {
        return Err(Error::Internal("Perron eigenvector is not positive".into()));
    }

    // The other two roots solve μ² − (tr − λ₁)μ + det/λ₁ = 0.
    let sum = -c2 - lambda1;
    let prod = -c0 / lambda1;
    let disc = sum * sum - 4.0 * prod;
    let lambda2_abs = if disc >= 0.0 {
        let r = disc.sqrt();
        ((sum + r) / 2.0).abs().max(((sum - r) / 2.0).abs())
    } else {
        prod.sqrt()
    };
    Ok(PfData {
        lambda1,
        alpha,
        lambda2_abs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeviationSample {
    pub r: usize,
    /// ‖κ(s, r) − rα‖∞.
    pub dev: f64,
    /// Largest deviation over every r' ≤ r, not just checkpoints.
    pub max_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationProfile {
    pub alpha: [f64; 3],
    pub samples: Vec<DeviationSample>,
}

impl DeviationProfile {
    pub fn max_deviation(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.max_dev)
    }

    /// True when the deviation at successive checkpoints strictly grows,
    /// starting from checkpoint index `from`.
    pub fn strictly_increasing_from(&self, from: usize) -> bool {
        self.samples
            .iter()
            .skip(from)
            .zip(self.samples.iter().skip(from + 1))
            .all(|(a, b)| b.dev > a.dev)
    }
}

/// Deviation of the digit counts of `s` from linear drift `rα`.
pub fn deviation_profile(
    s: &[u8],
    alpha: [f64; 3],
    checkpoints: &[usize],
) -> Result<DeviationProfile> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return domain("checkpoints must be strictly increasing");
    }
    if let Some(&last) = checkpoints.last() {
        if last > s.len() {
            return Err(Error::TooShort {
                needed: last,
                available: s.len(),
            });
        }
    }
    let mut counts = [0u64; 3];
    let mut running = 0.0f64;
    let mut samples = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    let dev = |counts: &[u64; 3], r: usize| {
        (0..3)
            .map(|i| (counts[i] as f64 - r as f64 * alpha[i]).abs())
            .fold(0.0, f64::max)
    };
    if next.peek() == Some(&&0) {
        samples.push(DeviationSample {
            r: 0,
            dev: 0.0,
            max_dev: 0.0,
        });
        next.next();
    }
    for (i, &d) in s.iter().enumerate() {
        let Some(&&target) = next.peek() else { break };
        counts[d as usize] += 1;
        let r = i + 1;
        let here = dev(&counts, r);
        running = running.max(here);
        if r == target {
            samples.push(DeviationSample {
                r,
                dev: here,
                max_dev: running,
            });
            next.next();
        }
    }
    Ok(DeviationProfile { alpha, samples })
}

/// Least-squares slope of log deviation against log r, skipping the first
/// two (transient) checkpoints.
pub fn estimate_nu(profile: &DeviationProfile) -> Result<f64> {
    let pts: Vec<(f64, f64)> = profile
        .samples
        .iter()
        .skip(2)
        .filter(|s| s.r > 0 && s.dev > 0.0)
        .map(|s| ((s.r as f64).ln(), s.dev.ln()))
        .collect();
    if pts.len() < 2 {
        return domain("need at least two usable checkpoints after the transient");
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Checkpoints ‖Aⁱ e_seed‖₁ for i = 0, 1, … up to `len`: the lengths of the
/// iterated images of the seed.
pub fn substitution_checkpoints(a: &AbelMatrix, seed: u8, len: usize) -> Vec<usize> {
    let mut v = [0u64; 3];
    v[seed as usize] = 1;
    let mut out: Vec<usize> = Vec::new();
    loop {
        let r = v.iter().sum::<u64>() as usize;
        if r > len || out.last().is_some_and(|&l| l >= r) {
            return out;
        }
        out.push(r);
        v = a.apply(v);
    }
}

/// s_r = ⌊(r+1)λ⌋ − ⌊rλ⌋ for 0 ≤ r < len.
pub fn sturmian(lambda: f64, len: usize) -> Result<Vec<u8>> {
    if !(0.0..=1.0).contains(&lambda) {
        return domain(format!("slope {lambda} outside [0, 1]"));
    }
    Ok((0..len)
        .map(|r| (((r as f64 + 1.0) * lambda).floor() - (r as f64 * lambda).floor()) as u8)
        .collect())
}

/// A substituted Sturmian word with its target drift.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Goober {
    pub word: DigitWord,
    /// Common block length |W₀^{k₀}| = |W₁^{k₁}|.
    pub q: usize,
    pub target: [f64; 3],
}

pub fn build_goober(
    w0: &[u8],
    w1: &[u8],
    k0: usize,
    k1: usize,
    lambda: f64,
    len: usize,
) -> Result<Goober> {
    let b0 = w0.repeat(k0);
    let b1 = w1.repeat(k1);
    if b0.is_empty() || b0.len() != b1.len() {
        return domain(format!(
            "block lengths differ: {} vs {}",
            b0.len(),
            b1.len()
        ));
    }
    if let Some(&d) = b0.iter().chain(&b1).find(|&&d| d > TOP_DIGIT) {
        return Err(Error::InvalidDigit(d));
    }
    let q = b0.len();
    let base = sturmian(lambda, len.div_ceil(q))?;
    let mut digits = Vec::with_capacity(base.len() * q);
    for bit in base {
        digits.extend_from_slice(if bit == 0 { &b0 } else { &b1 });
    }
    let count = |b: &[u8], i: u8| b.iter().filter(|&&d| d == i).count() as f64;
    let target =
        [0u8, 1, 2].map(|i| ((1.0 - lambda) * count(&b0, i) + lambda * count(&b1, i)) / q as f64);
    Ok(Goober {
        word: DigitWord::finite(digits)?,
        q,
        target,
    })
}
