use std::fmt;

/// Extended real value used for integrals whose finiteness is decided analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
    /// Neither finite nor `+∞` (for example `∞ - ∞`).
    Undefined,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn value(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Value as `f64`, mapping `+∞` to `f64::INFINITY` and undefined to NaN.
    /// Only for display and CSV output.
    pub fn to_f64_lossy(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
            ExtReal::Undefined => f64::NAN,
        }
    }

    /// Product of nonnegative quantities with the measure-theoretic convention `0 · ∞ = 0`.
    pub fn mul_nonneg(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Undefined, _) | (_, ExtReal::Undefined) => ExtReal::Undefined,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a * b),
            (ExtReal::Finite(a), ExtReal::PosInf) | (ExtReal::PosInf, ExtReal::Finite(a)) => {
                if a == 0.0 {
                    ExtReal::ZERO
                } else {
                    ExtReal::PosInf
                }
            }
            (ExtReal::PosInf, ExtReal::PosInf) => ExtReal::PosInf,
        }
    }

    pub fn scale(self, c: f64) -> ExtReal {
        self.mul_nonneg(ExtReal::Finite(c))
    }
}

impl std::ops::Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            (ExtReal::Undefined, _) | (_, ExtReal::Undefined) => ExtReal::Undefined,
            _ => ExtReal::PosInf,
        }
    }
}

impl std::iter::Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, |acc, x| acc + x)
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v.is_nan() {
            ExtReal::Undefined
        } else if v == f64::INFINITY {
            ExtReal::PosInf
        } else if v == f64::NEG_INFINITY {
            ExtReal::Undefined
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Undefined => write!(f, "undefined"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(ExtReal::ZERO.mul_nonneg(ExtReal::PosInf), ExtReal::ZERO);
        assert_eq!(ExtReal::Finite(2.0).mul_nonneg(ExtReal::PosInf), ExtReal::PosInf);
    }

    #[test]
    fn sums_propagate() {
        let s: ExtReal = [ExtReal::Finite(1.0), ExtReal::PosInf].into_iter().sum();
        assert_eq!(s, ExtReal::PosInf);
        let u = ExtReal::PosInf + ExtReal::Undefined;
        assert_eq!(u, ExtReal::Undefined);
    }
}
