//! Real numbers stored as `sign * exp(log_abs)`.
//!
//! Sector partition functions overflow `f64` long before the tori of
//! interest get large, and `Z_00` can be negative, so every exact value is
//! carried in this form.

use std::fmt;
use std::ops::{Add, Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub log_abs: f64,
    pub sign: i8,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };

    pub fn new(log_abs: f64, sign: i8) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog {
                log_abs,
                sign: sign.signum(),
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog::new(x.abs().ln(), if x > 0.0 { 1 } else { -1 })
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Multiply by `exp(log_factor)` (a positive scale).
    pub fn scale_log(self, log_factor: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            SignedLog::new(self.log_abs + log_factor, self.sign)
        }
    }

    pub fn sum<I: IntoIterator<Item = SignedLog>>(items: I) -> Self {
        items.into_iter().fold(SignedLog::ZERO, |acc, x| acc + x)
    }

    /// `self / other` as a plain float; both must be nonzero for a finite result.
    pub fn ratio(self, other: SignedLog) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        f64::from(self.sign * other.sign) * (self.log_abs - other.log_abs).exp()
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;

    fn neg(self) -> Self {
        SignedLog {
            log_abs: self.log_abs,
            sign: -self.sign,
        }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, other: SignedLog) -> Self {
        SignedLog::new(self.log_abs + other.log_abs, self.sign * other.sign)
    }
}

impl Add for SignedLog {
    type Output = SignedLog;

        /// Signed log-sum-exp.
        fn add(self, other: SignedLog) -> Self {
            if self.is_zero() {
                return other;
            }
            if other.is_zero() {
                return self;
            }
            let (big, small) = if self.log_abs >= other.log_abs {
                (self, other)
            } else {
                (other, self)
            };
            let ratio = (small.log_abs - big.log_abs).exp();
            if big.sign == small.sign {
                SignedLog::new(big.log_abs + ratio.ln_1p(), big.sign)
            } else if ratio == 1.0 {
                SignedLog::ZERO
            } else {
                SignedLog::new(big.log_abs + (-ratio).ln_1p(), big.sign)
            }
        }
}

impl fmt::Display for SignedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "+exp({})", self.log_abs),
            _ => write!(f, "-exp({})", self.log_abs),
        }
    }
}
