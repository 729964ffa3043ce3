//! Configurable-precision real scalars.
//!
//! Every number flowing through the iteration engine is a [`Real`]: an
//! arbitrary-precision binary float tagged with the number of mantissa bits it
//! was requested at. Precision is specified in decimal digits ([`Precision`])
//! and mapped to bits internally, so callers never reason about the radix.
//! The deep coefficient recursion multiplies quantities that grow
//! combinatorially with the iteration index and then cancels them against each
//! other; plain doubles lose the sign of that difference long before the
//! eigenvalue tolerances are reached, which is why the digit count is
//! configurable upward from 15.

use alloc::string::String;

use astro_float_num::{BigFloat, RoundingMode, Sign};
use core::cmp::Ordering;
use core::fmt;

/// Rounding used for every inexact operation. Fixed so that identical inputs
/// always produce bitwise-identical results.
const RM: RoundingMode = RoundingMode::ToEven;

/// log2(10), used to convert decimal digits to mantissa bits.
const LOG2_10: f64 = 3.321928094887362;

/// Number of significant decimal digits carried by every scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    decimal_digits: u32,
}

/// Error raised when a precision below the supported floor is requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionTooLow {
    pub requested: u32,
}

impl fmt::Display for PrecisionTooLow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "precision of {} decimal digits is below the supported minimum of {}",
            self.requested,
            Precision::MIN_DIGITS
        )
    }
}

impl core::error::Error for PrecisionTooLow {}

impl Precision {
    /// Smallest supported digit count; also the default.
    pub const MIN_DIGITS: u32 = 15;

    /// Build a precision of `decimal_digits` significant digits.
    pub fn new(decimal_digits: u32) -> Result<Self, PrecisionTooLow> {
        if decimal_digits < Self::MIN_DIGITS {
            Err(PrecisionTooLow {
                requested: decimal_digits,
            })
        } else {
            Ok(Self { decimal_digits })
        }
    }

    #[must_use]
    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    /// Mantissa bits backing this precision. Floored at 64 so that every f64
    /// embeds exactly (53 mantissa bits) with headroom.
    #[must_use]
    pub fn bits(&self) -> usize {
        let bits = (self.decimal_digits as f64 * LOG2_10).ceil() as usize;
        bits.max(64)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            decimal_digits: Self::MIN_DIGITS,
        }
    }
}

/// An arbitrary-precision real number.
///
/// Binary operations round to the larger of the two operand precisions; all
/// values produced by this module are finite (division guards against zero
/// divisors at the call sites that can encounter them).
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    bits: u32,
}

impl Real {
    /// Embed an `f64` exactly (the bit floor of 64 guarantees losslessness).
    #[must_use]
    pub fn from_f64(value: f64, precision: Precision) -> Self {
        let bits = precision.bits();
        Self {
            v: BigFloat::from_f64(value, bits),
            bits: bits as u32,
        }
    }

    /// Embed an integer exactly.
    #[must_use]
    pub fn from_i64(value: i64, precision: Precision) -> Self {
        let bits = precision.bits();
        Self {
            v: BigFloat::from_i64(value, bits),
            bits: bits as u32,
        }
    }

    #[must_use]
    pub fn zero(precision: Precision) -> Self {
        Self::from_i64(0, precision)
    }

    #[must_use]
    pub fn one(precision: Precision) -> Self {
        Self::from_i64(1, precision)
    }

    /// Mantissa bits this value carries.
    #[must_use]
    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    /// Decimal digits corresponding to this value's mantissa width.
    #[must_use]
    pub fn decimal_digits(&self) -> u32 {
        (self.bits as f64 / LOG2_10).floor() as u32
    }

    fn op_bits(&self, rhs: &Self) -> (usize, u32) {
        let bits = self.bits.max(rhs.bits);
        (bits as usize, bits)
    }

    #[must_use]
    pub fn add(&self, rhs: &Self) -> Self {
        let (p, bits) = self.op_bits(rhs);
        Self {
            v: self.v.add(&rhs.v, p, RM),
            bits,
        }
    }

    #[must_use]
    pub fn sub(&self, rhs: &Self) -> Self {
        let (p, bits) = self.op_bits(rhs);
        Self {
            v: self.v.sub(&rhs.v, p, RM),
            bits,
        }
    }

    #[must_use]
    pub fn mul(&self, rhs: &Self) -> Self {
        let (p, bits) = self.op_bits(rhs);
        Self {
            v: self.v.mul(&rhs.v, p, RM),
            bits,
        }
    }

    /// Divide; the caller is responsible for `rhs` being nonzero.
    #[must_use]
    pub fn div(&self, rhs: &Self) -> Self {
        let (p, bits) = self.op_bits(rhs);
        Self {
            v: self.v.div(&rhs.v, p, RM),
            bits,
        }
    }

    #[must_use]
    pub fn neg(&self) -> Self {
        Self {
            v: self.v.neg(),
            bits: self.bits,
        }
    }

    #[must_use]
    pub fn abs(&self) -> Self {
        Self {
            v: self.v.abs(),
            bits: self.bits,
        }
    }

    /// Multiply by a small integer (used for derivative coefficient shifts).
    #[must_use]
    pub fn scale_i64(&self, k: i64) -> Self {
        let f = BigFloat::from_i64(k, self.bits as usize);
        Self {
            v: self.v.mul(&f, self.bits as usize, RM),
            bits: self.bits,
        }
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    #[must_use]
    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    /// Sign as -1, 0, +1.
    #[must_use]
    pub fn signum_i(&self) -> i8 {
        if self.v.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }

    /// `10^exp` at the given precision (exp may be negative). Deterministic
    /// binary exponentiation; used for precision-floor thresholds.
    #[must_use]
    pub fn pow10(exp: i32, precision: Precision) -> Self {
        let ten = Self::from_i64(10, precision);
        let mut acc = Self::one(precision);
        let mut base = ten;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        if exp < 0 {
            Self::one(precision).div(&acc)
        } else {
            acc
        }
    }

    /// Round to the nearest `f64`.
    ///
    /// The backing crate exposes no direct conversion in this version, so the
    /// top two mantissa words are folded down by hand; the result is within
    /// one ulp of correctly rounded, far below every tolerance used here.
    #[must_use]
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        match self.v.as_raw_parts() {
            None => f64::NAN,
            Some((words, _n, sign, e, _inexact)) => {
                if words.is_empty() {
                    return 0.0;
                }
                // Words are little-endian; the top word is normalized (MSB set),
                // and the value is 0.mantissa × 2^e.
                let msw = words[words.len() - 1];
                let next = if words.len() >= 2 {
                    words[words.len() - 2]
                } else {
                    0
                };
                let frac =
                    libm::scalbn(msw as f64, -64) + libm::scalbn(next as f64, -128);
                let mag = libm::scalbn(frac, e);
                if sign == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    fn cmp_inner(&self, rhs: &Self) -> Ordering {
        match self.v.cmp(&rhs.v) {
            Some(s) if s < 0 => Ordering::Less,
            Some(s) if s > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => unreachable!("non-finite Real encountered in comparison"),
        }
    }

    /// The larger of two values by magnitude.
    #[must_use]
    pub fn max_abs(&self, rhs: &Self) -> Self {
        if self.abs().cmp_inner(&rhs.abs()) == Ordering::Less {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    /// Render with full stored precision in decimal (diagnostics only).
    #[must_use]
    pub fn to_decimal_string(&self) -> String {
        let mut cc = astro_float_num::Consts::new().expect("constant cache");
        self.v
            .format(astro_float_num::Radix::Dec, RM, &mut cc)
            .unwrap_or_else(|_| String::from("<unrepresentable>"))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_inner(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_inner(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_inner(other)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e} @{}b)", self.to_f64(), self.bits)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl core::ops::$trait for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real::$method(self, rhs)
            }
        }
        impl core::ops::$trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                Real::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl core::ops::Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::neg(self)
    }
}

/// Sum of pairwise products `Σ a_i · b_i` over equal-length slices, rounded
/// once per accumulation step. This is the inner loop of the truncated Cauchy
/// product, kept here so the jet layer stays allocation-light.
#[must_use]
pub fn dot(a: &[Real], b: &[Real]) -> Real {
    debug_assert_eq!(a.len(), b.len());
    debug_assert!(!a.is_empty());
    let mut acc = a[0].mul(&b[0]);
    for i in 1..a.len() {
        acc = acc.add(&a[i].mul(&b[i]));
    }
    acc
}

/// Convenience used by tests and floor computations: `10^(-digits+offset)`
/// relative threshold for a given precision.
#[must_use]
pub fn relative_floor(precision: Precision, offset: i32) -> Real {
    Real::pow10(-(precision.decimal_digits() as i32) + offset, precision)
}
