//! Decomposition into at most four polynomial squares: the modular initial
//! solution from the norm equation, the degree-lowering descent through
//! Euler's identity, and the assembly over a squarefree factorization.

use crate::cas::CasConfig;
use crate::intsos::{euler_product, four_squares_rational};
use crate::numfield::NumberField;
use crate::poly::{sum_of_squares, RatPoly};
use crate::qfactor::factor_q;
use crate::rat::BigRat;
use crate::sturm::{is_psd, sqf_triple};
use crate::units::{field_level, solve_minus_one_two_squares, Level, MinusOneOutcome};
use num_traits::{One, Signed};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Sos4Error {
    #[error("a factor field has level 4: the polynomial is not a sum of four squares")]
    LevelObstruction,
    #[error("norm-equation engines were inconclusive; a CAS backend is required here")]
    Inconclusive,
    #[error("descent produced a non-divisible Euler component; this is a bug")]
    InternalNonDivisible,
    #[error(transparent)]
    IntSos(#[from] crate::intsos::IntSosError),
}

/// Three-valued existence verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeValued {
    True,
    False,
    Unknown,
}

thread_local! {
    static DESCENT_ITERATIONS: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

/// Total Euler-descent loop passes on this thread; every pass re-checks the
/// `f*h_k = sum g_kj^2` invariant and the degree drop.
pub fn descent_iterations() -> u64 {
    DESCENT_ITERATIONS.with(|c| c.get())
}

/// `f*h = g1^2 + g2^2 + g3^2 + g4^2` with `deg h <= deg f - 2`.
#[derive(Clone, Debug)]
pub struct ModularSolution {
    pub h: RatPoly,
    pub g1: RatPoly,
    pub g2: RatPoly,
    pub g3: RatPoly,
    pub g4: RatPoly,
}

/// Four polynomials whose squares sum to the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourSquarePolys {
    pub polys: [RatPoly; 4],
}

impl FourSquarePolys {
    pub fn sum(&self) -> RatPoly {
        sum_of_squares(&self.polys)
    }
}

/// Is `f` a sum of at most four squares? True requires psd plus level <= 2
/// for every odd-multiplicity factor field; False requires an authoritative
/// level-4 verdict on some factor; anything weaker is Unknown.
pub fn exists_four_square(f: &RatPoly, cfg: &CasConfig) -> ThreeValued {
    if f.is_zero() {
        return ThreeValued::True;
    }
    if !is_psd(f) {
        return ThreeValued::False;
    }
    let triple = sqf_triple(f).expect("nonzero");
    if triple.g.is_constant() {
        return ThreeValued::True;
    }
    let fac = factor_q(&triple.g).expect("nonzero");
    let mut unknown = false;
    for (p, _) in &fac.factors {
        let k = NumberField::new_unchecked(p.clone());
        match field_level(&k, cfg) {
            Level::One | Level::Two => {}
            Level::Four => return ThreeValued::False,
            Level::Unknown => unknown = true,
        }
    }
    if unknown {
        ThreeValued::Unknown
    } else {
        ThreeValued::True
    }
}

/// Modular initial solution for a monic irreducible `f` of level <= 2:
/// lifts of a solution of `-1 = a^2 + b^2` in `Q[x]/(f)`, with `g3 = 1`,
/// `g4 = 0` and `h = (g1^2 + g2^2 + 1)/f` an exact quotient.
pub fn initial_modular(f: &RatPoly, cfg: &CasConfig) -> Result<ModularSolution, Sos4Error> {
    debug_assert!(f.lc().is_one());
    let field = NumberField::new_unchecked(f.clone());
    let (a, b) = match solve_minus_one_two_squares(&field, cfg) {
        MinusOneOutcome::SomePair(a, b) => (a, b),
        MinusOneOutcome::NoSolution => return Err(Sos4Error::LevelObstruction),
        MinusOneOutcome::Inconclusive => return Err(Sos4Error::Inconclusive),
    };
    let g1 = a.rep().clone();
    let g2 = b.rep().clone();
    let g3 = RatPoly::one();
    let g4 = RatPoly::zero();
    let num = sum_of_squares(&[g1.clone(), g2.clone(), g3.clone(), g4.clone()]);
    let (h, rem) = num.divrem(f).expect("f nonzero");
    if !rem.is_zero() {
        return Err(Sos4Error::InternalNonDivisible);
    }
    debug_assert!(h.degree().unwrap_or(0) <= f.deg().saturating_sub(2));
    Ok(ModularSolution { h, g1, g2, g3, g4 })
}

/// Decompose a monic irreducible `f` (known to be a sum of <= 4 squares)
/// into four squares: start from the modular solution and run the Euler
/// descent until the cofactor `h` is a positive rational, then merge a
/// four-square decomposition of that rational.
///
/// Loop invariants are asserted on every pass: `f*h_k = sum g_kj^2`, exact
/// divisibility of each Euler component by `h_k`, and a degree drop of at
/// least 2.
pub fn descent_four(
    f: &RatPoly,
    cfg: &CasConfig,
    rng: &mut (impl Rng + ?Sized),
) -> Result<FourSquarePolys, Sos4Error> {
    let init = initial_modular(f, cfg)?;
    let mut h = init.h;
    let mut g = [init.g1, init.g2, init.g3, init.g4];
    while h.degree().map_or(false, |d| d > 0) {
        DESCENT_ITERATIONS.with(|c| c.set(c.get() + 1));
        assert_eq!(f * &h, sum_of_squares(&g), "f*h_k = sum g_kj^2");
        let r: [RatPoly; 4] = [
            g[0].rem(&h).expect("h nonzero"),
            g[1].rem(&h).expect("h nonzero"),
            g[2].rem(&h).expect("h nonzero"),
            g[3].rem(&h).expect("h nonzero"),
        ];
        let prod = euler_product(&g, &r);
        let mut next = Vec::with_capacity(4);
        for comp in prod {
            let (q, rem) = comp.divrem(&h).expect("h nonzero");
            if !rem.is_zero() {
                return Err(Sos4Error::InternalNonDivisible);
            }
            next.push(q);
        }
        let g_next: [RatPoly; 4] = next.try_into().expect("four components");
        let sum = sum_of_squares(&g_next);
        let (h_next, rem) = sum.divrem(f).expect("f nonzero");
        if !rem.is_zero() {
            return Err(Sos4Error::InternalNonDivisible);
        }
        assert!(
            h_next.degree().unwrap_or(0) + 2 <= h.deg() + 2
                && h_next.degree().unwrap_or(0) <= h.deg().saturating_sub(2),
            "descent must lower deg h by at least 2"
        );
        h = h_next;
        g = g_next;
    }
    let h_const = h.constant_term();
    assert!(h_const.is_positive(), "terminal cofactor must be positive");
    let fs = four_squares_rational(&h_const, rng)?;
    let h_inv = BigRat::one() / &h_const;
    let b: [RatPoly; 4] = [
        RatPoly::constant(&fs.a * &h_inv),
        RatPoly::constant(&fs.b * &h_inv),
        RatPoly::constant(&fs.c * &h_inv),
        RatPoly::constant(&fs.d * &h_inv),
    ];
    let polys = euler_product(&g, &b);
    let out = FourSquarePolys { polys };
    debug_assert_eq!(out.sum(), *f);
    Ok(out)
}

/// Decompose an arbitrary polynomial known to be a sum of <= 4 squares:
/// squarefree split, a rational four-square decomposition of the leading
/// coefficient, per-factor descents merged by Euler's identity, and a final
/// scale by the square part.
pub fn four_squares(
    f: &RatPoly,
    cfg: &CasConfig,
    rng: &mut (impl Rng + ?Sized),
) -> Result<FourSquarePolys, Sos4Error> {
    assert!(!f.is_zero());
    let triple = sqf_triple(f).expect("nonzero");
    let lcfs = four_squares_rational(&triple.lc, rng)?;
    let mut acc: [RatPoly; 4] = [
        RatPoly::constant(lcfs.a),
        RatPoly::constant(lcfs.b),
        RatPoly::constant(lcfs.c),
        RatPoly::constant(lcfs.d),
    ];
    if !triple.g.is_constant() {
        let fac = factor_q(&triple.g).expect("nonzero");
        for (p, e) in &fac.factors {
            debug_assert_eq!(*e, 1);
            let part = descent_four(p, cfg, rng)?;
            acc = euler_product(&acc, &part.polys);
        }
    }
    let polys: [RatPoly; 4] = [
        &acc[0] * &triple.h,
        &acc[1] * &triple.h,
        &acc[2] * &triple.h,
        &acc[3] * &triple.h,
    ];
    let out = FourSquarePolys { polys };
    assert_eq!(out.sum(), *f, "four-square output must expand to the input");
    Ok(out)
}
