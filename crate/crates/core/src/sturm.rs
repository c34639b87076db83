//! Squarefree decomposition, Sturm chains, positivity testing, the epsilon
//! search for lower bounds of positive polynomials, and scalar resultants.
//!
//! Everything here runs over exact rationals; sign computations are never
//! delegated to floating point.

use crate::poly::RatPoly;
use crate::rat::{pow2, BigRat};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SturmError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not strictly positive")]
    NotStrictlyPositive,
}

/// `f = lc * g * h^2` with `g` monic squarefree (odd-multiplicity part) and
/// `h` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqfTriple {
    pub lc: BigRat,
    pub g: RatPoly,
    pub h: RatPoly,
}

/// Yun's squarefree decomposition: `f = lc * prod a_i^i` with the `a_i`
/// monic, squarefree and pairwise coprime.
pub fn yun_decomposition(f: &RatPoly) -> Result<(BigRat, Vec<(RatPoly, u32)>), SturmError> {
    if f.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    let lc = f.lc();
    let fm = f.monic();
    if fm.is_constant() {
        return Ok((lc, Vec::new()));
    }
    let df = fm.derivative();
    let a0 = fm.gcd(&df);
    let mut parts = Vec::new();
    let mut b = fm.exact_div(&a0);
    let mut c = df.exact_div(&a0);
    let mut i = 1u32;
    loop {
        let d = &c - &b.derivative();
        if d.is_zero() {
            if b.deg() > 0 {
                parts.push((b.monic(), i));
            }
            break;
        }
        let a = b.gcd(&d);
        if a.deg() > 0 {
            parts.push((a.clone(), i));
        }
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        if b.is_constant() {
            break;
        }
        i += 1;
    }
    Ok((lc, parts))
}

/// Squarefree triple `f = lc * g * h^2`, `g` collecting the odd-multiplicity
/// factors.
pub fn sqf_triple(f: &RatPoly) -> Result<SqfTriple, SturmError> {
    let (lc, parts) = yun_decomposition(f)?;
    let mut g = RatPoly::one();
    let mut h = RatPoly::one();
    for (a, i) in &parts {
        if i % 2 == 1 {
            g = &g * a;
        }
        h = &h * &a.pow(i / 2);
    }
    Ok(SqfTriple { lc, g, h })
}

/// The squarefree radical `f / gcd(f, f')`, monic: all distinct roots, each
/// once.
pub fn radical(f: &RatPoly) -> Result<RatPoly, SturmError> {
    if f.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    let fm = f.monic();
    if fm.is_constant() {
        return Ok(RatPoly::one());
    }
    let g = fm.gcd(&fm.derivative());
    Ok(fm.exact_div(&g).monic())
}

fn sign(q: &BigRat) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a squarefree polynomial, remainders negated and rescaled by
/// positive constants to tame coefficient growth.
fn sturm_chain(f: &RatPoly) -> Vec<RatPoly> {
    let normalize = |p: RatPoly| -> RatPoly {
        if p.is_zero() {
            return p;
        }
        let c = p.content();
        p.scale(&(BigRat::one() / c))
    };
    let mut chain = vec![normalize(f.clone()), normalize(f.derivative())];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        chain.push(normalize(-r));
    }
    chain
}

fn sign_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots, via a Sturm chain on the squarefree
/// radical. Exact arithmetic throughout.
pub fn real_root_count(f: &RatPoly) -> Result<usize, SturmError> {
    let s = radical(f)?;
    if s.is_constant() {
        return Ok(0);
    }
    let chain = sturm_chain(&s);
    let at_plus_inf = sign_variations(chain.iter().map(|p| sign(&p.lc())));
    let at_minus_inf = sign_variations(chain.iter().map(|p| {
        let d = p.degree().unwrap_or(0);
        let s = sign(&p.lc());
        if d % 2 == 0 {
            s
        } else {
            -s
        }
    }));
    Ok(at_minus_inf - at_plus_inf)
}

/// True iff `f(t) >= 0` for all real `t`.
///
/// Zero polynomial: true. Constants: sign test. Otherwise: positive leading
/// coefficient, even degree, and no real root of odd multiplicity (the
/// squarefree odd part has no real roots).
pub fn is_psd(f: &RatPoly) -> bool {
    if f.is_zero() {
        return true;
    }
    if f.is_constant() {
        return !f.lc().is_negative();
    }
    if f.lc().is_negative() || f.deg() % 2 != 0 {
        return false;
    }
    let triple = sqf_triple(f).expect("nonzero");
    if triple.g.is_constant() {
        return true;
    }
    real_root_count(&triple.g).expect("nonzero") == 0
}

/// True iff `f(t) > 0` for all real `t` (psd and without real roots).
pub fn is_strictly_positive(f: &RatPoly) -> bool {
    if f.is_zero() {
        return false;
    }
    if f.is_constant() {
        return f.lc().is_positive();
    }
    is_psd(f) && real_root_count(f).expect("nonzero") == 0
}

/// Largest integer `e` such that `f - 2^e` is still strictly positive, i.e.
/// `2^e < inf f`. Exponential expansion then bisection, one root count per
/// probe. Requires `f` strictly positive.
pub fn epsilon_exponent(f: &RatPoly) -> Result<i64, SturmError> {
    if !is_strictly_positive(f) {
        return Err(SturmError::NotStrictlyPositive);
    }
    let below_inf = |e: i64| -> bool {
        let fe = f - &RatPoly::constant(pow2(e));
        if fe.is_zero() {
            return false;
        }
        if fe.is_constant() {
            return fe.lc().is_positive();
        }
        // lc and degree are unchanged, so "no real roots" means positive
        real_root_count(&fe).expect("nonzero") == 0 && fe.lc().is_positive()
    };
    let (mut lo, mut hi);
    if below_inf(0) {
        // grow until false
        let mut step = 1i64;
        lo = 0;
        loop {
            let cand = lo + step;
            if below_inf(cand) {
                lo = cand;
                step *= 2;
            } else {
                hi = cand;
                break;
            }
        }
    } else {
        let mut step = 1i64;
        hi = 0;
        loop {
            let cand = hi - step;
            if below_inf(cand) {
                lo = cand;
                break;
            } else {
                hi = cand;
                step *= 2;
            }
        }
    }
    // invariant: below_inf(lo) && !below_inf(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below_inf(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Exact polynomial square root with positive leading coefficient, when `f`
/// is a perfect square in `Q[x]`.
pub fn poly_sqrt(f: &RatPoly) -> Option<RatPoly> {
    if f.is_zero() {
        return Some(RatPoly::zero());
    }
    let d = f.deg();
    if d % 2 != 0 {
        return None;
    }
    let m = d / 2;
    let lead = crate::rat::rat_sqrt(&f.lc())?;
    let mut s = vec![BigRat::zero(); m + 1];
    s[m] = lead.clone();
    let two_lead = &lead + &lead;
    for k in (0..m).rev() {
        // coefficient of x^(m+k) in s^2: 2*s_m*s_k + sum over i+j = m+k, k < i,j < m
        let mut acc = f.coeff(m + k);
        for i in (k + 1)..m {
            let j = m + k - i;
            if j <= i && j > k {
                let prod = &s[i] * &s[j];
                if i == j {
                    acc -= prod;
                } else {
                    acc -= &prod + &prod;
                }
            }
        }
        s[k] = acc / &two_lead;
    }
    let cand = RatPoly::new(s);
    if &cand * &cand == *f {
        Some(cand)
    } else {
        None
    }
}

/// Classical resultant Res(f, g) = lc(f)^deg(g) * prod g(alpha_i) over the
/// roots of f, computed by a Euclidean remainder recursion.
pub fn resultant(f: &RatPoly, g: &RatPoly) -> Result<BigRat, SturmError> {
    if f.is_zero() || g.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    Ok(resultant_rec(f.clone(), g.clone()))
}

fn resultant_rec(a: RatPoly, b: RatPoly) -> BigRat {
    // Res(a, b) with both nonzero at entry; zero is returned for common roots.
    let m = a.deg();
    let n = b.deg();
    if n == 0 {
        return num_traits::pow::pow(b.lc(), m);
    }
    if m == 0 {
        return num_traits::pow::pow(a.lc(), n);
    }
    if m < n {
        let sgn = if (m * n) % 2 == 1 {
            -BigRat::one()
        } else {
            BigRat::one()
        };
        return sgn * resultant_rec(b, a);
    }
    let r = a.rem(&b).expect("b nonzero");
    if r.is_zero() {
        return BigRat::zero();
    }
    let p = r.deg();
    // Res(a, b) = (-1)^(mn) lc(b)^(m-p) Res(b, r)
    let mut out = num_traits::pow::pow(b.lc(), m - p) * resultant_rec(b, r);
    if (m * n) % 2 == 1 {
        out = -out;
    }
    out
}
