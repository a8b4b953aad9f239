//! Integer-relation search among π and a list of angles.
//!
//! Angles are evaluated in binary fixed point (a `BigInt` scaled by 2^bits),
//! scaled to integers, and fed to an exact LLL reduction of the lattice spanned
//! by rows (eᵣ | round(10^D · xᵣ)). A short reduced row whose integer part
//! satisfies |Σ qᵣ xᵣ| < 10^(−D/2) is reported as a relation.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Digits carried by an `f64` angle.
const F64_DIGITS: u32 = 15;

/// An angle (radians) given exactly or approximately.
#[derive(Debug, Clone, PartialEq)]
pub enum AngleSpec {
    /// A double-precision value; treated as accurate to 15 digits.
    Float(f64),
    /// (p/q)·π.
    PiMultiple(i64, i64),
    /// arccos(p/q).
    Arccos(i64, i64),
    /// A decimal literal, accurate to the digits written.
    Decimal(String),
}

impl AngleSpec {
    /// Significant digits the value is known to; `None` for exact specs.
    pub fn accuracy_digits(&self) -> Option<u32> {
        match self {
            AngleSpec::Float(_) => Some(F64_DIGITS),
            AngleSpec::PiMultiple(..) | AngleSpec::Arccos(..) => None,
            AngleSpec::Decimal(s) => {
                let mantissa = s.split(['e', 'E']).next().unwrap_or("");
                let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
                let significant = digits.trim_start_matches('0').len().max(1);
                Some(significant as u32)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            AngleSpec::Float(v) => *v,
            AngleSpec::PiMultiple(p, q) => *p as f64 / *q as f64 * std::f64::consts::PI,
            AngleSpec::Arccos(p, q) => (*p as f64 / *q as f64).acos(),
            AngleSpec::Decimal(s) => s.parse().unwrap_or(f64::NAN),
        }
    }

    fn to_fixed(&self, bits: u32) -> Result<BigInt> {
        match self {
            AngleSpec::Float(v) => float_to_fixed(*v, bits),
            AngleSpec::PiMultiple(p, q) => {
                if *q == 0 {
                    return Err(Error::InvalidArgument("zero denominator".into()));
                }
                Ok(pi_fixed(bits) * BigInt::from(*p) / BigInt::from(*q))
            }
            AngleSpec::Arccos(p, q) => acos_fixed(*p, *q, bits),
            AngleSpec::Decimal(s) => decimal_to_fixed(s, bits),
        }
    }
}

impl fmt::Display for AngleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleSpec::Float(v) => write!(f, "{v}"),
            AngleSpec::PiMultiple(p, q) => write!(f, "{p}/{q}*pi"),
            AngleSpec::Arccos(p, q) => write!(f, "acos({p}/{q})"),
            AngleSpec::Decimal(s) => f.write_str(s),
        }
    }
}

fn parse_ratio(s: &str) -> Option<(i64, i64)> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => Some((p.trim().parse().ok()?, q.trim().parse().ok()?)),
        None => Some((s.parse().ok()?, 1)),
    }
}

impl FromStr for AngleSpec {
    type Err = Error;

    /// Accepts `acos(p/q)`, `arccos(p/q)`, `pi`, `pi/q`, `p*pi/q`, `p/q*pi` and
    /// plain decimals.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(' ', "");
        let bad = || Error::InvalidArgument(format!("cannot parse angle '{s}'"));
        for prefix in ["arccos(", "acos("] {
            if let Some(rest) = t.strip_prefix(prefix) {
                let inner = rest.strip_suffix(')').ok_or_else(bad)?;
                let (p, q) = parse_ratio(inner).ok_or_else(bad)?;
                if q <= 0 || p.abs() > q {
                    return Err(Error::OutOfRange(inner.to_string()));
                }
                return Ok(AngleSpec::Arccos(p, q));
            }
        }
        if t.contains("pi") {
            // forms: pi, pi/q, p*pi, p*pi/q, p/q*pi
            let (num_part, den_part) = match t.split_once("pi") {
                Some((a, b)) => (a.trim_end_matches('*'), b),
                None => return Err(bad()),
            };
            let (p, q1) = if num_part.is_empty() {
                (1, 1)
            } else if num_part == "-" {
                (-1, 1)
            } else {
                parse_ratio(num_part).ok_or_else(bad)?
            };
            let q2 = if den_part.is_empty() {
                1
            } else {
                den_part.strip_prefix('/').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
            };
            let q = q1.checked_mul(q2).ok_or_else(bad)?;
            if q <= 0 {
                return Err(bad());
            }
            return Ok(AngleSpec::PiMultiple(p, q));
        }
        t.parse::<f64>().map_err(|_| bad())?;
        Ok(AngleSpec::Decimal(t))
    }
}

impl From<f64> for AngleSpec {
    fn from(v: f64) -> Self {
        AngleSpec::Float(v)
    }
}

fn one(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn float_to_fixed(v: f64, bits: u32) -> Result<BigInt> {
    if !v.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite angle {v}")));
    }
    if v == 0.0 {
        return Ok(BigInt::zero());
    }
    let raw = v.to_bits();
    let exp = ((raw >> 52) & 0x7ff) as i64;
    let frac = raw & ((1u64 << 52) - 1);
    let (mantissa, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let mut m = BigInt::from(mantissa);
    if v < 0.0 {
        m = -m;
    }
    let shift = bits as i64 + e;
    Ok(if shift >= 0 { m << shift as usize } else { m >> (-shift) as usize })
}

fn decimal_to_fixed(s: &str, bits: u32) -> Result<BigInt> {
    let bad = || Error::InvalidArgument(format!("cannot parse decimal '{s}'"));
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        (num * ten.pow(scale as u32)) << bits
    } else {
        (num << bits) / ten.pow((-scale) as u32)
    })
}

/// arctan(1/m) by its Taylor series.
fn atan_inv(m: u64, bits: u32) -> BigInt {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut power = one(bits) / &m;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &m2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// π by Machin's formula.
pub(crate) fn pi_fixed(bits: u32) -> BigInt {
    let guard = 16;
    let b = bits + guard;
    ((atan_inv(5, b) * 16) - (atan_inv(239, b) * 4)) >> guard
}

fn mul(a: &BigInt, b: &BigInt, bits: u32) -> BigInt {
    (a * b) >> bits
}

/// arctan of a fixed-point value, halving the argument until the series converges fast.
fn atan_fixed(x: &BigInt, bits: u32) -> BigInt {
    if x.is_negative() {
        return -atan_fixed(&-x, bits);
    }
    let unit = one(bits);
    if x > &unit {
        let inv = (&unit << bits) / x;
        return (pi_fixed(bits) >> 1) - atan_fixed(&inv, bits);
    }
    let small = &unit >> 8;
    let mut y = x.clone();
    let mut doublings = 0u32;
    while y > small {
        // atan(y) = 2 atan(y / (1 + sqrt(1 + y²)))
        let root = ((&unit << bits) + (&y * &y)).sqrt();
        y = (&y << bits) / (&unit + root);
        doublings += 1;
    }
    let y2 = mul(&y, &y, bits);
    let mut power = y.clone();
    let mut sum = y;
    let mut k = 1u64;
    loop {
        power = mul(&power, &y2, bits);
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum << doublings
}

fn acos_fixed(p: i64, q: i64, bits: u32) -> Result<BigInt> {
    if q <= 0 || p.abs() > q {
        return Err(Error::OutOfRange(format!("{p}/{q}")));
    }
    let pi = pi_fixed(bits);
    if p == 0 {
        return Ok(pi >> 1);
    }
    let (pb, qb) = (BigInt::from(p.abs()), BigInt::from(q));
    let s = ((&qb * &qb - &pb * &pb) << (2 * bits)).sqrt();
    let t = s / &pb;
    let a = atan_fixed(&t, bits);
    Ok(if p > 0 { a } else { pi - a })
}

/// Exact LLL with δ = 3/4 on integer row vectors. Returns `false` on timeout.
fn lll(rows: &mut [Vec<BigInt>], deadline: Option<Instant>) -> bool {
    let d = rows.len();
    if d < 2 {
        return true;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let (mut mu, mut norms) = gram_schmidt(rows);
    let mut k = 1;
    while k < d {
        if deadline.is_some_and(|t| Instant::now() >= t) {
            return false;
        }
        for j in (0..k).rev() {
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let (head, tail) = rows.split_at_mut(k);
                for (a, b) in tail[0].iter_mut().zip(&head[j]) {
                    *a -= &q * b;
                }
                let qr = BigRational::from_integer(q);
                let (mu_head, mu_tail) = mu.split_at_mut(k);
                for (a, b) in mu_tail[0].iter_mut().zip(&mu_head[j]).take(j) {
                    *a -= &qr * b;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            rows.swap(k, k - 1);
            let (m, n) = gram_schmidt(rows);
            mu = m;
            norms = n;
            k = (k - 1).max(1);
        }
    }
    true
}

fn gram_schmidt(rows: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let d = rows.len();
    let as_rat: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let dot = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
    };
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(d);
    let mut mu = vec![vec![BigRational::zero(); d]; d];
    let mut norms = Vec::with_capacity(d);
    for i in 0..d {
        let mut v = as_rat[i].clone();
        for j in 0..i {
            if norms[j] == BigRational::zero() {
                continue;
            }
            let m = dot(&as_rat[i], &star[j]) / &norms[j];
            for (a, b) in v.iter_mut().zip(&star[j]) {
                *a -= &m * b;
            }
            mu[i][j] = m;
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndependenceStatus {
    /// No relation with coefficients up to the bound; supports independence, never proves it.
    NoRelationFound,
    RelationFound,
    /// The search hit its deadline.
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceVerdict {
    /// π followed by the angles, as doubles.
    pub values: Vec<f64>,
    /// (q₀, q₁, …) with q₀ the coefficient of π; first nonzero entry positive.
    pub relation_found: Option<Vec<i64>>,
    pub searched_bound: i64,
    /// Precision the search actually ran at: the requested digits, capped by
    /// the accuracy of inexact inputs.
    pub precision_digits: u32,
    pub status: IndependenceStatus,
}

/// Search for an integer relation q₀π + Σ qⱼαⱼ = 0 with max |q| ≤ `bound`.
pub fn heuristic_independence(
    angles: &[AngleSpec],
    bound: i64,
    precision_digits: u32,
    deadline: Option<Duration>,
) -> Result<IndependenceVerdict> {
    if precision_digits < 16 {
        return Err(Error::PrecisionTooLow(precision_digits));
    }
    if angles.is_empty() {
        return Err(Error::InvalidArgument("no angles supplied".into()));
    }
    if bound < 1 {
        return Err(Error::InvalidArgument(format!("bound must be >= 1, got {bound}")));
    }
    let deadline = deadline.map(|d| Instant::now() + d);
    let digits = angles
        .iter()
        .filter_map(AngleSpec::accuracy_digits)
        .fold(precision_digits, u32::min);
    let bits = (f64::from(precision_digits) * std::f64::consts::LOG2_10).ceil() as u32 + 64;

    let mut fixed = vec![pi_fixed(bits)];
    for a in angles {
        fixed.push(a.to_fixed(bits)?);
    }
    let values: Vec<f64> = std::iter::once(std::f64::consts::PI)
        .chain(angles.iter().map(AngleSpec::to_f64))
        .collect();

    let d = fixed.len();
    let scale = BigInt::from(10).pow(digits);
    let mut rows: Vec<Vec<BigInt>> = fixed
        .iter()
        .enumerate()
        .map(|(r, x)| {
            let mut row = vec![BigInt::zero(); d + 1];
            row[r] = BigInt::one();
            // round(x · 10^digits)
            let y = (x * &scale + (one(bits) >> 1)) >> bits;
            row[d] = y;
            row
        })
        .collect();
    let finished = lll(&mut rows, deadline);

    let threshold_sq = one(2 * bits);
    let ten_d = BigInt::from(10).pow(digits);
    let mut best: Option<Vec<i64>> = None;
    for row in &rows {
        let coeffs = &row[..d];
        if coeffs.iter().all(Zero::is_zero) {
            continue;
        }
        let Some(q): Option<Vec<i64>> = coeffs.iter().map(ToPrimitive::to_i64).collect() else {
            continue;
        };
        if q.iter().any(|c| c.abs() > bound) {
            continue;
        }
        let residual: BigInt = q.iter().zip(&fixed).map(|(c, x)| BigInt::from(*c) * x).sum();
        // |residual / 2^bits| < 10^(−digits/2)  ⇔  residual² · 10^digits < 2^(2·bits)
        if &residual * &residual * &ten_d < threshold_sq {
            let better = best
                .as_ref()
                .is_none_or(|b| q.iter().map(|c| c.abs()).max() < b.iter().map(|c| c.abs()).max());
            if better {
                best = Some(normalize_sign(q));
            }
        }
    }
    let status = match (&best, finished) {
        (Some(_), _) => IndependenceStatus::RelationFound,
        (None, true) => IndependenceStatus::NoRelationFound,
        (None, false) => IndependenceStatus::Unknown,
    };
    Ok(IndependenceVerdict {
        values,
        relation_found: best,
        searched_bound: bound,
        precision_digits: digits,
        status,
    })
}

fn normalize_sign(mut q: Vec<i64>) -> Vec<i64> {
    if q.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
        q.iter_mut().for_each(|c| *c = -*c);
    }
    q
}

#[allow(dead_code)]
fn fixed_to_f64(x: &BigInt, bits: u32) -> f64 {
    let (sign, mag) = (x.sign(), x.magnitude());
    let shift = mag.bits().saturating_sub(60);
    let top = (mag >> shift).to_f64().unwrap_or(0.0);
    let v = top * 2f64.powi(shift as i32 - bits as i32);
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}
