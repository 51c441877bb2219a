//! The exact rational deformation parameter of the oscillator algebra.
//!
//! The sign of kappa decides everything downstream: kappa >= 0 gives an
//! infinite-dimensional representation, kappa < 0 a finite one of dimension
//! d = 1 - 1/kappa, which is an integer exactly when -1/kappa is a positive
//! integer. Storing kappa as a reduced rational keeps the dimension
//! constraint and the degeneracy pattern integer-exact; floats enter only
//! when matrices are materialized.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced rational deformation parameter kappa = num/den, den >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KappaParam {
    num: i64,
    den: i64,
}

/// Representation-space dimension selected by the sign of kappa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Finite(usize),
    Infinite,
}

impl KappaParam {
    /// Build kappa = num/den in reduced form. The denominator must be nonzero;
    /// its sign is absorbed into the numerator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidKappa("zero denominator".into()));
        }
        let r = Rational64::new(num, den);
        Ok(Self {
            num: *r.numer(),
            den: *r.denom(),
        })
    }

    /// kappa = 0, the harmonic-oscillator point.
    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    /// The finite-regime kappa = -1/(d-1) for a d-dimensional space, d >= 2.
    pub fn from_dimension(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidKappa(format!(
                "finite regime needs d >= 2, got {d}"
            )));
        }
        Self::new(-1, (d - 1) as i64)
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn as_rational(&self) -> Rational64 {
        Rational64::new_raw(self.num, self.den)
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    /// Dimension of the representation space: infinite for kappa >= 0,
    /// d = 1 - 1/kappa for kappa < 0. Negative kappa whose reciprocal is not
    /// a negative integer admits no consistent finite representation (the
    /// trace of the commutator cannot vanish) and is rejected.
    pub fn dimension(&self) -> Result<Dimension> {
        if self.num >= 0 {
            return Ok(Dimension::Infinite);
        }
        if self.num != -1 {
            return Err(Error::InvalidKappa(format!(
                "kappa = {self} < 0 requires -1/kappa to be a positive integer; \
                 -1/kappa = {}/{} is not",
                self.den, -self.num
            )));
        }
        // kappa = -1/(d-1)  =>  d = 1 + den
        Ok(Dimension::Finite(1 + self.den as usize))
    }

    /// True when 1/kappa is a (nonzero) integer, the integrality assumption
    /// behind the truncated-route basis quantization.
    pub fn reciprocal_is_integer(&self) -> bool {
        self.num != 0 && self.num.abs() == 1
    }

    /// delta = 1 - 1/kappa as an integer, available exactly when 1/kappa is
    /// an integer. Coincides with the finite dimension d when kappa < 0.
    pub fn delta(&self) -> Option<i64> {
        self.reciprocal_is_integer()
            .then(|| 1 - self.den * self.num.signum())
    }
}

impl fmt::Display for KappaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for KappaParam {
    type Err = Error;

    /// Accepts `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad kappa component {t:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse_int(n)?, parse_int(d)?),
            None => Self::new(parse_int(s)?, 1),
        }
    }
}
