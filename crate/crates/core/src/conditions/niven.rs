//! Exact certificates for "θ is an irrational multiple of π" when cos θ is rational.
//!
//! By Niven's theorem the only rational cosines of rational multiples of π are
//! 0, ±1/2 and ±1, so a table lookup decides the question exactly.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction p/q with q > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    p: i64,
    q: i64,
}

impl Rational {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = p.gcd(&q).max(1);
        let sign = if q < 0 { -1 } else { 1 };
        Ok(Self { p: sign * p / g, q: sign * q / g })
    }

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> i64 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("expected p/q, got '{s}'"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Rational::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "multiple", rename_all = "snake_case")]
pub enum CertificateStatus {
    CertifiedIrrationalMultipleOfPi,
    /// arccos(cosine) = multiple · π.
    CertifiedRationalMultipleOfPi(Rational),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleCertificate {
    pub cosine: Rational,
    pub status: CertificateStatus,
}

impl AngleCertificate {
    pub fn is_irrational(&self) -> bool {
        self.status == CertificateStatus::CertifiedIrrationalMultipleOfPi
    }
}

/// Certify whether arccos(cosine) is an irrational multiple of π.
pub fn certify_irrational_angle(cosine: Rational) -> Result<AngleCertificate> {
    let (p, q) = (cosine.p, cosine.q);
    if p.unsigned_abs() > q.unsigned_abs() {
        return Err(Error::OutOfRange(cosine.to_string()));
    }
    let multiple = match (p, q) {
        (1, 1) => Some((0, 1)),
        (1, 2) => Some((1, 3)),
        (0, 1) => Some((1, 2)),
        (-1, 2) => Some((2, 3)),
        (-1, 1) => Some((1, 1)),
        _ => None,
    };
    let status = match multiple {
        Some((a, b)) => CertificateStatus::CertifiedRationalMultipleOfPi(Rational::new(a, b)?),
        None => CertificateStatus::CertifiedIrrationalMultipleOfPi,
    };
    Ok(AngleCertificate { cosine, status })
}
