//! Reduction of a positive squarefree polynomial to the four-square case by
//! subtracting a tiny perturbation h^2 chosen so that f - h^2 stays positive
//! and becomes irreducible over the 2-adic numbers (certified by its Newton
//! polygon), plus the conjectural variant that searches perturbations in both
//! the constant and the leading direction.

use crate::cas::{cas_padic_irreducible, CasConfig};
use crate::poly::RatPoly;
use crate::rat::{ord2, pow2, BigRat, ExtOrd};
use crate::sturm::{epsilon_exponent, is_strictly_positive};
use crate::zpoly::irreducible_mod_2;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("input must be positive, squarefree, of even degree >= 2 ({0})")]
    PreconditionViolated(String),
    #[error("Newton polygon requires nonzero constant and leading coefficients")]
    ZeroEndpoint,
    #[error("no certified perturbation found within {0} iterations")]
    IterationCapExceeded(u64),
    #[error(transparent)]
    Cas(#[from] crate::cas::CasError),
}

/// Lower convex hull of the points (j, ord2 c_j) over the nonzero
/// coefficients; collinear interior points are not vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
}

impl NewtonPolygon {
    pub fn is_single_segment(&self) -> bool {
        self.vertices.len() == 2
    }
}

/// Output of the general reduction: `f - g1^2 - g2^2` is a sum of at most
/// four squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOut {
    pub g1: RatPoly,
    pub g2: RatPoly,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b - 1).div_euclid(b)
}

/// Newton polygon of `f` (lower hull of 2-adic coefficient valuations).
pub fn np_lower_hull(f: &RatPoly) -> Result<NewtonPolygon, ReduceError> {
    if f.is_zero() || f.constant_term().is_zero() {
        return Err(ReduceError::ZeroEndpoint);
    }
    let points: Vec<(usize, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, ord2(c).finite()))
        .collect();
    // monotone chain; pop the middle point when it lies on or above the
    // chord, so collinear points collapse into one segment
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 as i128 - a.0 as i128) * (p.1 as i128 - a.1 as i128)
                - (b.1 as i128 - a.1 as i128) * (p.0 as i128 - a.0 as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(NewtonPolygon { vertices: hull })
}

/// Sufficient 2-adic irreducibility: a single hull segment from (0, v0) to
/// (d, vd) whose rise is coprime to the degree.
pub fn np_irreducible_sufficient(f: &RatPoly) -> bool {
    let Ok(hull) = np_lower_hull(f) else {
        return false;
    };
    if !hull.is_single_segment() {
        return false;
    }
    let (j0, v0) = hull.vertices[0];
    let (j1, v1) = hull.vertices[1];
    debug_assert_eq!(j0, 0);
    debug_assert_eq!(j1, f.deg());
    let rise = (v1 - v0).unsigned_abs();
    let run = (j1 - j0) as u64;
    run.gcd(&rise) == 1
}

/// The Newton-polygon bound l3: ceiling of
/// `max over interior j with c_j != 0 of (j*k_d - d*k_j)/(2d - 2j)`;
/// `NegInf` when every interior coefficient vanishes.
pub fn newton_l3(f: &RatPoly) -> ExtOrd {
    let d = f.deg();
    debug_assert!(d >= 2);
    let kd = ord2(&f.lc()).finite();
    let mut best: Option<BigRat> = None;
    for j in 1..d {
        let c = f.coeff(j);
        if c.is_zero() {
            continue;
        }
        let kj = ord2(&c).finite();
        let num = (j as i64) * kd - (d as i64) * kj;
        let den = 2 * (d as i64) - 2 * (j as i64);
        let q = crate::rat::rat(num, den);
        best = Some(match best {
            Some(b) if b >= q => b,
            _ => q,
        });
    }
    match best {
        None => ExtOrd::NegInf,
        Some(q) => ExtOrd::Finite(i64::try_from(crate::rat::ceil_rat(&q)).expect("small")),
    }
}

fn check_reduce_pre(f: &RatPoly) -> Result<(), ReduceError> {
    if f.degree().map_or(true, |d| d < 2 || d % 2 != 0) {
        return Err(ReduceError::PreconditionViolated(
            "degree must be even and at least 2".into(),
        ));
    }
    if !is_strictly_positive(f) {
        return Err(ReduceError::PreconditionViolated(
            "polynomial must be strictly positive".into(),
        ));
    }
    if !f.monic().gcd(&f.derivative()).is_one() {
        return Err(ReduceError::PreconditionViolated(
            "polynomial must be squarefree".into(),
        ));
    }
    Ok(())
}

/// Odd-valuation reduction: for positive squarefree `f` with odd
/// `ord2(lc f)`, returns `h = 2^-l` such that `f - h^2` is positive and
/// 2-adically irreducible with a single coprime-slope Newton segment. Both
/// facts are re-checked exactly on every call.
pub fn reduce_odd(f: &RatPoly) -> Result<BigRat, ReduceError> {
    check_reduce_pre(f)?;
    let d = f.deg();
    let kd = ord2(&f.lc()).finite();
    if kd.rem_euclid(2) != 1 {
        return Err(ReduceError::PreconditionViolated(
            "ord2 of the leading coefficient must be odd".into(),
        ));
    }
    let e = epsilon_exponent(f).expect("strictly positive");
    let l1 = ceil_div(-e, 2);
    let k0 = ord2(&f.constant_term()).finite();
    let l2 = ceil_div(-k0, 2) + 1;
    let l3 = newton_l3(f);
    let mut l = match l3 {
        ExtOrd::Finite(v) => l1.max(l2).max(v),
        _ => l1.max(l2),
    };
    let mut bumps = 0usize;
    while BigInt::from(d).gcd(&BigInt::from(2 * l + kd)) != BigInt::one() {
        l += 1;
        bumps += 1;
        assert!(bumps <= d, "gcd bump loop must terminate within d steps");
    }
    let h = pow2(-l);
    // postcondition self-checks
    let fh = f - &RatPoly::constant(&h * &h);
    assert!(
        is_strictly_positive(&fh),
        "f - h^2 must remain strictly positive"
    );
    let hull = np_lower_hull(&fh).expect("nonzero endpoints");
    assert!(
        hull.is_single_segment(),
        "Newton polygon of f - h^2 must be a single segment"
    );
    let rise = hull.vertices[1].1 - hull.vertices[0].1;
    assert_eq!(rise, 2 * l + kd, "hull slope must be (2l + kd)/d");
    assert!(np_irreducible_sufficient(&fh));
    Ok(h)
}

/// General reduction: branches on the parities of `ord2` of the constant and
/// leading coefficients, so that `f - g1^2 - g2^2` is positive and a sum of
/// at most four squares.
pub fn reduce_general(f: &RatPoly) -> Result<ReductionOut, ReduceError> {
    check_reduce_pre(f)?;
    let kd = ord2(&f.lc()).finite();
    let k0 = ord2(&f.constant_term()).finite();
    let out = if kd.rem_euclid(2) == 1 {
        let h = reduce_odd(f)?;
        ReductionOut {
            g1: RatPoly::constant(h),
            g2: RatPoly::zero(),
        }
    } else if k0.rem_euclid(2) == 1 {
        let fs = f.reciprocal();
        let h = reduce_odd(&fs)?;
        let d = f.deg();
        let g1 = RatPoly::monomial(h.clone(), d / 2);
        // exact identity check: f - g1^2 = x^d * (f_* - h^2)(1/x)
        let g = &fs - &RatPoly::constant(&h * &h);
        debug_assert_eq!(g.deg(), d);
        assert_eq!(
            &(f - &(&g1 * &g1)),
            &g.reciprocal(),
            "reciprocal-branch identity must hold exactly"
        );
        ReductionOut {
            g1,
            g2: RatPoly::zero(),
        }
    } else {
        let f2 = f.scale(&crate::rat::int(2));
        let h = reduce_odd(&f2)?;
        let half = h / crate::rat::int(2);
        ReductionOut {
            g1: RatPoly::constant(half.clone()),
            g2: RatPoly::constant(half),
        }
    };
    let remainder = f - &(&out.g1 * &out.g1) - (&out.g2 * &out.g2);
    assert!(
        is_strictly_positive(&remainder),
        "reduction remainder must be positive"
    );
    Ok(out)
}

// ---- 2-adic irreducibility beyond the raw Newton polygon ----

/// Reduce a rational polynomial to a primitive integer model and test
/// irreducibility mod 2 (valid when the leading coefficient stays odd).
fn mod2_irreducible_test(g: &RatPoly) -> bool {
    let (_, ints) = g.primitive_integer();
    if ints.is_empty() {
        return false;
    }
    if ints.last().unwrap().is_even() {
        return false;
    }
    let bits: Vec<bool> = ints.iter().map(|c| c.is_odd()).collect();
    irreducible_mod_2(&bits)
}

/// Complete 2-adic irreducibility test for quadratics: irreducible iff the
/// discriminant is not a square in Q_2, i.e. its 2-adic valuation is odd or
/// its odd part is not 1 mod 8.
fn quadratic_q2_irreducible(g: &RatPoly) -> bool {
    let a = g.coeff(2);
    let b = g.coeff(1);
    let c = g.coeff(0);
    let disc = &b * &b - crate::rat::int(4) * &a * &c;
    if disc.is_zero() {
        return false; // a rational double root
    }
    let v = ord2(&disc).finite();
    if v.rem_euclid(2) == 1 {
        return true;
    }
    let odd_part = &disc / pow2(v);
    debug_assert!(ord2(&odd_part) == ExtOrd::Finite(0));
    let numer_mod8 = num_integer::Integer::mod_floor(odd_part.numer(), &BigInt::from(8));
    let denom_mod8 = num_integer::Integer::mod_floor(odd_part.denom(), &BigInt::from(8));
    // u = numer/denom with both odd; u = 1 mod 8 iff numer = denom mod 8
    numer_mod8 != denom_mod8
}

/// Try to prove 2-adic irreducibility using the Newton polygon or mod-2
/// irreducibility after a battery of field-preserving transforms (integer and
/// half-integer argument shifts, dyadic argument scalings, reciprocal).
/// Complete for degrees 1 and 2; sound but incomplete above, where `false`
/// means "not proven".
pub fn padic_irreducible_proven(g: &RatPoly) -> bool {
    let Some(d) = g.degree() else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if d == 2 {
        return quadratic_q2_irreducible(g);
    }
    if g.constant_term().is_zero() {
        return false; // divisible by x
    }
    if np_irreducible_sufficient(g) || mod2_irreducible_test(g) {
        return true;
    }
    let shifts: [BigRat; 8] = [
        crate::rat::int(1),
        crate::rat::int(2),
        crate::rat::int(3),
        crate::rat::rat(1, 2),
        crate::rat::rat(3, 2),
        crate::rat::rat(1, 4),
        crate::rat::rat(3, 4),
        crate::rat::rat(5, 2),
    ];
    let scales: [BigRat; 5] = [
        crate::rat::int(1),
        crate::rat::int(2),
        crate::rat::rat(1, 2),
        crate::rat::int(4),
        crate::rat::rat(1, 4),
    ];
    for recip in [false, true] {
        let base = if recip { g.reciprocal() } else { g.clone() };
        if base.deg() != d {
            continue;
        }
        for s in &scales {
            let scaled = base.scale_arg(s);
            for a in &shifts {
                if recip == false && s.is_one() && a.is_zero() {
                    continue; // already tested raw
                }
                let cand = scaled.shift_arg(a);
                if cand.constant_term().is_zero() {
                    // rational root found: reducible for d >= 2
                    return false;
                }
                if np_irreducible_sufficient(&cand) || mod2_irreducible_test(&cand) {
                    return true;
                }
            }
        }
    }
    false
}

/// Decide 2-adic irreducibility: native sufficient machinery first, then the
/// backend when configured. `Ok(None)` means undecided.
pub fn padic_irreducible_decide(
    g: &RatPoly,
    cfg: &CasConfig,
) -> Result<Option<bool>, ReduceError> {
    if padic_irreducible_proven(g) {
        return Ok(Some(true));
    }
    if cfg.enabled {
        match cas_padic_irreducible(g, cfg) {
            Ok(v) => return Ok(Some(v)),
            Err(crate::cas::CasError::BackendUnavailable(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}

/// Conjectural reduction: search `h` among `2^-l` and `2^-l x^{d/2}` with
/// `f - h^2` certified irreducible over the 2-adics; positivity of both
/// candidates is guaranteed by starting below `inf f` and `inf f_*`. The
/// loop is capped; termination is only conjectural.
pub fn conjectural_reduce(
    f: &RatPoly,
    cfg: &CasConfig,
    max_iters: u64,
) -> Result<RatPoly, ReduceError> {
    check_reduce_pre(f)?;
    if crate::sos4::exists_four_square(f, cfg) == crate::sos4::ThreeValued::True {
        return Ok(RatPoly::zero());
    }
    let d = f.deg();
    let fs = f.reciprocal();
    let e = epsilon_exponent(f)
        .expect("positive")
        .min(epsilon_exponent(&fs).expect("reciprocal of positive is positive"));
    let mut l = ceil_div(-e, 2);
    for _ in 0..max_iters {
        let h2 = pow2(-2 * l);
        let cand = f - &RatPoly::constant(h2.clone());
        debug_assert!(is_strictly_positive(&cand));
        if padic_irreducible_decide(&cand, cfg)? == Some(true) {
            return Ok(RatPoly::constant(pow2(-l)));
        }
        let cand_top = f - &RatPoly::monomial(h2, d);
        debug_assert!(is_strictly_positive(&cand_top));
        if padic_irreducible_decide(&cand_top, cfg)? == Some(true) {
            return Ok(RatPoly::monomial(pow2(-l), d / 2));
        }
        l += 1;
    }
    Err(ReduceError::IterationCapExceeded(max_iters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn newton_l3_examples() {
        assert_eq!(newton_l3(&RatPoly::from_ints(&[1, 1, 2])), ExtOrd::Finite(1));
        assert_eq!(newton_l3(&RatPoly::from_ints(&[14, 0, 2])), ExtOrd::NegInf);
        assert_eq!(
            newton_l3(&RatPoly::from_ints(&[1, 0, 8, 0, 1])),
            ExtOrd::Finite(-3)
        );
    }

    #[test]
    fn np_hull_examples() {
        let hull = np_lower_hull(&RatPoly::new(vec![rat(3, 4), int(1), int(2)])).unwrap();
        assert_eq!(hull.vertices, vec![(0, -2), (2, 1)]);

        let hull = np_lower_hull(&RatPoly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(hull.vertices, vec![(0, 0), (2, 0)]);

        // collinear points collapse to one segment of slope -1
        let hull = np_lower_hull(&RatPoly::from_ints(&[4, 2, 1])).unwrap();
        assert_eq!(hull.vertices, vec![(0, 2), (2, 0)]);

        assert!(np_lower_hull(&RatPoly::from_ints(&[0, 1, 1])).is_err());
    }

    #[test]
    fn np_sufficient_examples() {
        assert!(np_irreducible_sufficient(&RatPoly::new(vec![
            rat(3, 4),
            int(1),
            int(2)
        ])));
        assert!(!np_irreducible_sufficient(&RatPoly::from_ints(&[-1, 0, 1])));
        let f = RatPoly::new(vec![rat(55, 8), int(0), int(1)]);
        assert!(np_irreducible_sufficient(&f));
    }

    #[test]
    fn reduce_odd_examples() {
        assert_eq!(reduce_odd(&RatPoly::from_ints(&[1, 1, 2])).unwrap(), rat(1, 2));
        assert_eq!(reduce_odd(&RatPoly::from_ints(&[14, 0, 2])).unwrap(), rat(1, 2));
        assert_eq!(reduce_odd(&RatPoly::from_ints(&[1, 0, 14])).unwrap(), rat(1, 2));
    }

    #[test]
    fn reduce_odd_preconditions() {
        // not positive
        assert!(reduce_odd(&RatPoly::from_ints(&[-1, 0, 2])).is_err());
        // even leading valuation
        assert!(reduce_odd(&RatPoly::from_ints(&[7, 0, 1])).is_err());
        // not squarefree
        let f = RatPoly::from_ints(&[1, 0, 1]).pow(2).scale(&int(2));
        assert!(reduce_odd(&f).is_err());
        // odd degree is rejected before positivity
        assert!(reduce_odd(&RatPoly::from_ints(&[1, 1])).is_err());
    }

    #[test]
    fn reduce_general_branches() {
        // branch 1: kd odd
        let out = reduce_general(&RatPoly::from_ints(&[1, 1, 2])).unwrap();
        assert_eq!(out.g1, RatPoly::constant(rat(1, 2)));
        assert!(out.g2.is_zero());

        // branch 2: k0 odd -> monomial x^(d/2) * h
        let out = reduce_general(&RatPoly::from_ints(&[14, 0, 1])).unwrap();
        assert_eq!(out.g1, RatPoly::monomial(rat(1, 2), 1));
        assert!(out.g2.is_zero());
        let rem = RatPoly::from_ints(&[14, 0, 1]) - &out.g1 * &out.g1;
        assert_eq!(rem, RatPoly::new(vec![int(14), int(0), rat(3, 4)]));

        // branch 3: both even
        let out = reduce_general(&RatPoly::from_ints(&[7, 0, 1])).unwrap();
        assert_eq!(out.g1, RatPoly::constant(rat(1, 4)));
        assert_eq!(out.g2, RatPoly::constant(rat(1, 4)));
        let rem = RatPoly::from_ints(&[7, 0, 1])
            - &(&out.g1 * &out.g1)
            - (&out.g2 * &out.g2);
        assert_eq!(rem, RatPoly::new(vec![rat(55, 8), int(0), int(1)]));
    }

    #[test]
    fn padic_proving_layers() {
        // raw Newton polygon
        assert!(padic_irreducible_proven(&RatPoly::new(vec![
            rat(3, 4),
            int(1),
            int(2)
        ])));
        // x^2 + 27/4 needs the half-integer shift to x^2 + x + 7, which is
        // irreducible mod 2
        assert!(padic_irreducible_proven(&RatPoly::new(vec![
            rat(27, 4),
            int(0),
            int(1)
        ])));
        // rational root: certainly reducible and never proven
        assert!(!padic_irreducible_proven(&RatPoly::from_ints(&[-1, 0, 1])));
        // x^2 + 1 is 2-adically irreducible (-1 is not a square in Q_2) and
        // the shifted Newton polygon sees it
        assert!(padic_irreducible_proven(&RatPoly::from_ints(&[1, 0, 1])));
        // x^2 + x + 2 has discriminant -7, a 2-adic square, so it splits
        // over Q_2; soundness demands it is never "proven" irreducible
        assert!(!padic_irreducible_proven(&RatPoly::from_ints(&[2, 1, 1])));
    }

    #[test]
    fn conjectural_reduce_terminates_on_quadratics() {
        let cfg = CasConfig::default();
        // 2x^2 + x + 1: already reducible by the odd-valuation machinery
        let h = conjectural_reduce(&RatPoly::from_ints(&[1, 1, 2]), &cfg, 64).unwrap();
        let rem = RatPoly::from_ints(&[1, 1, 2]) - &h * &h;
        assert!(is_strictly_positive(&rem));
        assert!(padic_irreducible_proven(&rem) || h.is_zero());

        // x^2 + 7 is not a sum of four squares; the search must still certify
        // some perturbation natively
        let f = RatPoly::from_ints(&[7, 0, 1]);
        let h = conjectural_reduce(&f, &cfg, 64).unwrap();
        assert!(!h.is_zero());
        let rem = &f - &(&h * &h);
        assert!(is_strictly_positive(&rem));
    }

    #[test]
    fn conjectural_reduce_shortcircuits_four_square_inputs() {
        let cfg = CasConfig::default();
        // x^2 + 5 is a sum of four squares (level 2 field)
        let h = conjectural_reduce(&RatPoly::from_ints(&[5, 0, 1]), &cfg, 64).unwrap();
        assert!(h.is_zero());
    }
}
