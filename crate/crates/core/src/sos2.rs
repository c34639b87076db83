//! Existence test and construction for decompositions into two polynomial
//! squares: the leading coefficient must be a rational sum of two squares
//! and every odd-multiplicity irreducible factor must split over Q(i). Split
//! factors are recombined with the two-square product identity, updating
//! both components simultaneously.

use crate::intsos::two_squares_rational;
use crate::numfield::{nf_sqrt, trager_factor, KPoly, NumberField};
use crate::poly::RatPoly;
use crate::qfactor::factor_q;
use crate::rat::BigRat;
use crate::sturm::{is_psd, sqf_triple};
use num_traits::{One, Signed};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Sos2Error {
    #[error("-1 is not a square modulo this factor; it does not split over Q(i)")]
    NotSplit,
    #[error("polynomial is not a sum of two squares")]
    NotTwoSquareRepresentable,
}

/// A candidate pair; consumers check `a^2 + b^2 = f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSquarePair {
    pub a: RatPoly,
    pub b: RatPoly,
}

fn gaussian_rationals() -> NumberField {
    NumberField::new_unchecked(RatPoly::from_ints(&[1, 0, 1]))
}

/// Decide whether `f` is a sum of two squares in Q[x]: psd, leading
/// coefficient a rational two-square sum, and -1 a square in the residue
/// field of every odd-multiplicity irreducible factor.
pub fn exists_two_square(f: &RatPoly) -> bool {
    assert!(!f.is_zero());
    if !is_psd(f) {
        return false;
    }
    let triple = sqf_triple(f).expect("nonzero");
    if two_squares_rational(&triple.lc).is_none() {
        return false;
    }
    if triple.g.is_constant() {
        return true;
    }
    let fac = factor_q(&triple.g).expect("nonzero");
    for (p, _) in &fac.factors {
        let k = NumberField::new_unchecked(p.clone());
        if nf_sqrt(&k.scalar(-BigRat::one())).is_none() {
            return false;
        }
    }
    true
}

/// Split a monic irreducible `p` with -1 square in its residue field into
/// `p = a^2 + b^2` via its conjugate factor pair over Q(i).
pub fn gaussian_split(p: &RatPoly) -> Result<(RatPoly, RatPoly), Sos2Error> {
    let ki = gaussian_rationals();
    let pk = KPoly::from_ratpoly(&ki, p);
    let factors = trager_factor(&pk);
    if factors.len() != 2 {
        return Err(Sos2Error::NotSplit);
    }
    let g = &factors[0].0;
    // coefficients of g are u + v*i; collect the rational and i-parts
    let mut a = Vec::with_capacity(g.coeffs().len());
    let mut b = Vec::with_capacity(g.coeffs().len());
    for c in g.coeffs() {
        a.push(c.rep().coeff(0));
        b.push(c.rep().coeff(1));
    }
    let a = RatPoly::new(a);
    let b = RatPoly::new(b);
    if &(&a * &a) + &(&b * &b) != *p {
        return Err(Sos2Error::NotSplit);
    }
    Ok((a, b))
}

/// Decompose `f` into two squares. The two components are updated
/// simultaneously across factors; both are finally multiplied by the square
/// part `h` of `f = lc * g * h^2`.
pub fn decompose_two(f: &RatPoly) -> Result<TwoSquarePair, Sos2Error> {
    assert!(!f.is_zero());
    if !exists_two_square(f) {
        return Err(Sos2Error::NotTwoSquareRepresentable);
    }
    let triple = sqf_triple(f).expect("nonzero");
    let (la, lb) =
        two_squares_rational(&triple.lc).ok_or(Sos2Error::NotTwoSquareRepresentable)?;
    let mut a = RatPoly::constant(la);
    let mut b = RatPoly::constant(lb);
    if !triple.g.is_constant() {
        let fac = factor_q(&triple.g).expect("nonzero");
        for (p, e) in &fac.factors {
            debug_assert_eq!(*e, 1, "odd part is squarefree");
            let (aj, bj) = gaussian_split(p)?;
            let new_a = &(&a * &aj) + &(&b * &bj);
            let new_b = &(&a * &bj) - &(&b * &aj);
            a = new_a;
            b = new_b;
        }
    }
    a = &a * &triple.h;
    b = &b * &triple.h;
    // canonical signs
    if a.lc().is_negative() {
        a = -a;
    }
    if b.lc().is_negative() {
        b = -b;
    }
    debug_assert_eq!(&(&a * &a) + &(&b * &b), *f);
    Ok(TwoSquarePair { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn exists_examples() {
        assert!(exists_two_square(&RatPoly::from_ints(&[1, 0, 0, 0, 1])));
        assert!(!exists_two_square(&RatPoly::from_ints(&[3, 0, 3])));
        assert!(!exists_two_square(&RatPoly::from_ints(&[7, 0, 1])));
        assert!(exists_two_square(&RatPoly::from_ints(&[1, 0, 1])));
        assert!(exists_two_square(&RatPoly::constant(int(5))));
        assert!(!exists_two_square(&RatPoly::from_ints(&[-1, 0, 1])));
    }

    #[test]
    fn gaussian_split_examples() {
        let (a, b) = gaussian_split(&RatPoly::from_ints(&[1, 0, 1])).unwrap();
        let p = &(&a * &a) + &(&b * &b);
        assert_eq!(p, RatPoly::from_ints(&[1, 0, 1]));

        let (a, b) = gaussian_split(&RatPoly::from_ints(&[2, 2, 1])).unwrap();
        assert_eq!(&(&a * &a) + &(&b * &b), RatPoly::from_ints(&[2, 2, 1]));

        let (a, b) = gaussian_split(&RatPoly::from_ints(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(&(&a * &a) + &(&b * &b), RatPoly::from_ints(&[1, 0, 0, 0, 1]));
        assert!(a.deg().max(b.degree().unwrap_or(0)) == 2);

        assert_eq!(
            gaussian_split(&RatPoly::from_ints(&[7, 0, 1])),
            Err(Sos2Error::NotSplit)
        );
    }

    #[test]
    fn decompose_examples() {
        for f in [
            RatPoly::from_ints(&[1, 0, 0, 0, 1]),
            RatPoly::from_ints(&[1, 2, 2]), // x^2 + (x+1)^2
            RatPoly::from_ints(&[1, 0, 1]).pow(3),
            RatPoly::constant(int(5)),
            RatPoly::from_ints(&[2, 0, 2]),
        ] {
            let pair = decompose_two(&f).unwrap();
            assert_eq!(&(&pair.a * &pair.a) + &(&pair.b * &pair.b), f);
            // degree bound: max degree <= deg f / 2
            let bound = f.deg() / 2;
            assert!(pair.a.degree().unwrap_or(0) <= bound);
            assert!(pair.b.degree().unwrap_or(0) <= bound);
        }
        assert!(decompose_two(&RatPoly::from_ints(&[7, 0, 1])).is_err());
    }

    #[test]
    fn cubed_factor_example() {
        // (x^2+1)^3 = (x^3+x)^2 + (x^2+1)^2
        let f = RatPoly::from_ints(&[1, 0, 1]).pow(3);
        let pair = decompose_two(&f).unwrap();
        let expect_a = RatPoly::from_ints(&[0, 1, 0, 1]);
        let expect_b = RatPoly::from_ints(&[1, 0, 1]);
        assert!(
            (pair.a == expect_a && pair.b == expect_b)
                || (pair.a == expect_b && pair.b == expect_a)
        );
    }

    #[test]
    fn random_two_square_products_verify() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        for _ in 0..40 {
            let da = rng.gen_range(0..=3);
            let db = rng.gen_range(0..=3);
            let a = RatPoly::new((0..=da).map(|_| int(rng.gen_range(-4..=4))).collect());
            let b = RatPoly::new((0..=db).map(|_| int(rng.gen_range(-4..=4))).collect());
            let f = &(&a * &a) + &(&b * &b);
            if f.is_zero() {
                continue;
            }
            assert!(exists_two_square(&f), "f = {f}");
            let pair = decompose_two(&f).unwrap();
            assert_eq!(&(&pair.a * &pair.a) + &(&pair.b * &pair.b), f);
        }
    }
}
