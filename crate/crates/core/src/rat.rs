//! Arbitrary-precision rational numbers and 2-adic valuations.
//!
//! `BigRat` is the coefficient domain for the whole crate. It is backed by
//! `num_rational::BigRational`, which keeps fractions reduced with a positive
//! denominator, exactly the invariants we rely on.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

/// Reduced arbitrary-precision rational; denominator always positive.
pub type BigRat = num_rational::BigRational;

/// `Z ∪ {±∞}`, the codomain of 2-adic valuations and Newton-polygon bounds.
///
/// `Inf` absorbs addition and wins `max` comparisons; `NegInf` is the empty-max
/// sentinel. Ordering is `NegInf < Finite(_) < Inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtOrd {
    NegInf,
    Finite(i64),
    Inf,
}

impl ExtOrd {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtOrd::Finite(_))
    }

    /// Finite value, panicking on infinities.
    pub fn finite(self) -> i64 {
        match self {
            ExtOrd::Finite(v) => v,
            other => panic!("expected finite valuation, got {other:?}"),
        }
    }

    /// Addition with absorbing infinities. `Inf + NegInf` is meaningless and
    /// panics.
    pub fn add(self, rhs: ExtOrd) -> ExtOrd {
        use ExtOrd::*;
        match (self, rhs) {
            (Inf, NegInf) | (NegInf, Inf) => panic!("ExtOrd: Inf + NegInf is undefined"),
            (Inf, _) | (_, Inf) => Inf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}

impl std::fmt::Display for ExtOrd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtOrd::NegInf => write!(f, "-inf"),
            ExtOrd::Finite(v) => write!(f, "{v}"),
            ExtOrd::Inf => write!(f, "+inf"),
        }
    }
}

/// 2-adic valuation of an integer; `Inf` for zero.
pub fn ord2_int(n: &BigInt) -> ExtOrd {
    match n.trailing_zeros() {
        Some(k) => ExtOrd::Finite(k as i64),
        None => ExtOrd::Inf,
    }
}

/// 2-adic valuation of a rational. `ord2(0) = +∞` by convention, so that a
/// vanishing coefficient never constrains a Newton-polygon maximum.
pub fn ord2(q: &BigRat) -> ExtOrd {
    if q.is_zero() {
        return ExtOrd::Inf;
    }
    let vn = ord2_int(q.numer()).finite();
    let vd = ord2_int(q.denom()).finite();
    ExtOrd::Finite(vn - vd)
}

/// 2^e as an exact rational, for any sign of `e`.
pub fn pow2(e: i64) -> BigRat {
    let one = BigInt::one();
    if e >= 0 {
        BigRat::from_integer(one << (e as usize))
    } else {
        BigRat::new(one.clone(), one << ((-e) as usize))
    }
}

/// Height of a rational: max(|numerator|, |denominator|), as a bit length.
pub fn height_bits(q: &BigRat) -> u64 {
    q.numer().magnitude().bits().max(q.denom().magnitude().bits())
}

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Exact square root of a rational, when it is a perfect square of a rational.
pub fn rat_sqrt(q: &BigRat) -> Option<BigRat> {
    if q.is_negative() {
        return None;
    }
    let sn = int_sqrt_exact(q.numer())?;
    let sd = int_sqrt_exact(q.denom())?;
    Some(BigRat::new(sn, sd))
}

/// Exact integer square root; `None` unless `n` is a perfect square.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Ceiling of a rational as an integer.
pub fn ceil_rat(q: &BigRat) -> BigInt {
    q.ceil().to_integer()
}
