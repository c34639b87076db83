//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree with a nonzero leading
//! coefficient (the zero polynomial is the empty vector). All arithmetic is
//! exact.

use crate::rat::BigRat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// Dense univariate polynomial over `BigRat`, ascending degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRat>,
}

impl RatPoly {
    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        RatPoly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigRat, k: usize) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRat::zero(); k + 1];
        coeffs[k] = c;
        RatPoly { coeffs }
    }

    /// `x` itself.
    pub fn x() -> Self {
        RatPoly::monomial(BigRat::one(), 1)
    }

    /// Convenience constructor from i64 coefficients, ascending degree.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| crate::rat::int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a polynomial known to be nonzero.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn constant_term(&self) -> BigRat {
        self.coeff(0)
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRat::from_integer(BigInt::from(i)))
            .collect();
        RatPoly::new(coeffs)
    }

    /// Scale by a rational constant.
    pub fn scale(&self, s: &BigRat) -> RatPoly {
        if s.is_zero() {
            return RatPoly::zero();
        }
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    /// Monic multiple (divide by the leading coefficient).
    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let lc = self.lc();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&(BigRat::one() / lc))
    }

    pub fn pow(&self, mut e: u32) -> RatPoly {
        let mut base = self.clone();
        let mut acc = RatPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder of division over the field of rationals.
    pub fn divrem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = divisor.deg();
        let lc_inv = BigRat::one() / divisor.lc();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![BigRat::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[i + j] -= t;
            }
            quot[i] = c;
        }
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Exact quotient; panics if the division leaves a remainder. Used where a
    /// nonzero remainder signals an internal invariant violation.
    pub fn exact_div(&self, divisor: &RatPoly) -> RatPoly {
        let (q, r) = self.divrem(divisor).expect("exact_div by zero");
        assert!(r.is_zero(), "exact division left a remainder");
        q
    }

    pub fn rem(&self, divisor: &RatPoly) -> Result<RatPoly, PolyError> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic greatest common divisor (Euclid with monic renormalization).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = std::mem::replace(&mut b, r.monic());
        }
        a
    }

    /// Extended gcd: returns (g, u, v) with `u*self + v*other = g`, g monic.
    pub fn extended_gcd(&self, other: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = RatPoly::one();
        let mut s1 = RatPoly::zero();
        let mut t0 = RatPoly::zero();
        let mut t1 = RatPoly::one();
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("r1 nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let ns = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, ns);
            let nt = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, nt);
        }
        if r0.is_zero() {
            return (RatPoly::zero(), RatPoly::zero(), RatPoly::zero());
        }
        let lc = r0.lc();
        let inv = BigRat::one() / lc;
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Positive rational `c` with `self = c * (primitive integer polynomial)`;
    /// zero for the zero polynomial.
    pub fn content(&self) -> BigRat {
        if self.is_zero() {
            return BigRat::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        BigRat::new(num_gcd, den_lcm)
    }

    /// The primitive integer polynomial `self / content`, as BigInt
    /// coefficients, sign of the leading coefficient preserved.
    pub fn primitive_integer(&self) -> (BigRat, Vec<BigInt>) {
        let c = self.content();
        if c.is_zero() {
            return (BigRat::zero(), Vec::new());
        }
        let prim = self.scale(&(BigRat::one() / &c));
        let ints = prim
            .coeffs
            .iter()
            .map(|q| {
                debug_assert!(q.is_integer());
                q.to_integer()
            })
            .collect();
        (c, ints)
    }

    /// Coefficient-reversed polynomial `x^d * f(1/x)` relative to `deg f`.
    pub fn reciprocal(&self) -> RatPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        RatPoly::new(coeffs)
    }

    /// Substitute `x -> x + a`.
    pub fn shift_arg(&self, a: &BigRat) -> RatPoly {
        let shift = RatPoly::new(vec![a.clone(), BigRat::one()]);
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &shift) + &RatPoly::constant(c.clone());
        }
        acc
    }

    /// Substitute `x -> s*x`.
    pub fn scale_arg(&self, s: &BigRat) -> RatPoly {
        let mut pow = BigRat::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * &pow;
                pow *= s;
                out
            })
            .collect();
        RatPoly::new(coeffs)
    }

    /// Maximum coefficient height in bits.
    pub fn height_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(crate::rat::height_bits)
            .max()
            .unwrap_or(0)
    }

    /// Canonical text form: descending degree, `num/den` coefficients.
    /// `parse_poly` inverts this exactly.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coefficient = !mag.is_one() || k == 0;
            if show_coefficient {
                out.push_str(&mag.to_string());
            }
            if k > 0 {
                if show_coefficient {
                    out.push('*');
                }
                out.push('x');
                if k > 1 {
                    out.push_str(&format!("^{k}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        RatPoly::new(coeffs)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        RatPoly::new(coeffs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::new(coeffs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: RatPoly) -> RatPoly {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: &RatPoly) -> RatPoly {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<RatPoly> for &RatPoly {
            type Output = RatPoly;
            fn $method(self, rhs: RatPoly) -> RatPoly {
                $trait::$method(self, &rhs)
            }
        }
    )*};
}
forward_value_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

/// Sum of squares of a slice of polynomials.
pub fn sum_of_squares(polys: &[RatPoly]) -> RatPoly {
    let mut acc = RatPoly::zero();
    for p in polys {
        acc = &acc + &(p * p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn ring_ops_examples() {
        let f = RatPoly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let g = RatPoly::from_ints(&[-1, 1]); // x - 1
        assert_eq!(f.gcd(&g), g.monic());

        let num = RatPoly::from_ints(&[0, 0, 0, 1]); // x^3
        let den = RatPoly::from_ints(&[1, 0, 1]); // x^2 + 1
        let (q, r) = num.divrem(&den).unwrap();
        assert_eq!(q, RatPoly::from_ints(&[0, 1]));
        assert_eq!(r, RatPoly::from_ints(&[0, -1]));

        let h = RatPoly::from_ints(&[1, 1, 2]); // 2x^2 + x + 1
        assert_eq!(h.eval(&rat(-1, 4)), rat(7, 8));

        assert_eq!(
            RatPoly::from_ints(&[0, 0, 1]).divrem(&RatPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn derivative_and_eval() {
        let f = RatPoly::from_ints(&[5, 3, 0, 2]); // 2x^3 + 3x + 5
        assert_eq!(f.derivative(), RatPoly::from_ints(&[3, 0, 6]));
        assert_eq!(RatPoly::constant(int(5)).derivative(), RatPoly::zero());
        assert_eq!(f.eval(&int(2)), int(27));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(
            RatPoly::from_ints(&[1, 2, 3]).reciprocal(),
            RatPoly::from_ints(&[3, 2, 1])
        );
        assert_eq!(
            RatPoly::from_ints(&[14, 0, 1]).reciprocal(),
            RatPoly::from_ints(&[1, 0, 14])
        );
        assert_eq!(
            RatPoly::constant(int(5)).reciprocal(),
            RatPoly::constant(int(5))
        );
        // f_*(x) = x^d f(1/x) pointwise when c0 != 0
        let f = RatPoly::from_ints(&[7, -3, 0, 2]);
        let d = f.deg() as i32;
        let rec = f.reciprocal();
        for x in [int(1), int(2), rat(3, 5), int(-2)] {
            let inv = BigRat::one() / &x;
            let rhs = x.pow(d) * f.eval(&inv);
            assert_eq!(rec.eval(&x), rhs);
        }
        assert_eq!(f.reciprocal().reciprocal(), f);
    }

    #[test]
    fn extended_gcd_bezout() {
        let f = RatPoly::from_ints(&[2, 0, 1]); // x^2 + 2
        let g = RatPoly::from_ints(&[0, 1]); // x
        let (d, u, v) = f.extended_gcd(&g);
        assert!(d.is_one());
        assert_eq!(&(&u * &f) + &(&v * &g), RatPoly::one());
    }

    #[test]
    fn content_and_primitive() {
        let f = RatPoly::new(vec![rat(2, 3), rat(4, 9), int(2)]);
        let (c, ints) = f.primitive_integer();
        assert_eq!(c, rat(2, 9));
        assert_eq!(ints, vec![BigInt::from(3), BigInt::from(2), BigInt::from(9)]);
    }

    #[test]
    fn shift_and_scale_arg() {
        let f = RatPoly::from_ints(&[7, 0, 1]); // x^2 + 7
        assert_eq!(f.shift_arg(&int(1)), RatPoly::from_ints(&[8, 2, 1]));
        assert_eq!(f.scale_arg(&int(2)), RatPoly::from_ints(&[7, 0, 4]));
        assert_eq!(f.shift_arg(&int(0)), f);
    }

    #[test]
    fn pow_and_monomial() {
        let x1 = RatPoly::from_ints(&[1, 1]);
        assert_eq!(x1.pow(3), RatPoly::from_ints(&[1, 3, 3, 1]));
        assert_eq!(
            RatPoly::monomial(int(2), 3),
            RatPoly::from_ints(&[0, 0, 0, 2])
        );
    }

    #[test]
    fn text_form() {
        assert_eq!(RatPoly::from_ints(&[7, 0, 1]).to_text(), "x^2 + 7");
        assert_eq!(
            RatPoly::new(vec![int(0), int(-1), int(0), int(0), rat(2, 3)]).to_text(),
            "2/3*x^4 - x"
        );
        assert_eq!(RatPoly::zero().to_text(), "0");
        assert_eq!(RatPoly::from_ints(&[0, 2]).to_text(), "2*x");
    }
}
