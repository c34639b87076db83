//! Factorization over Q: Zassenhaus with distinct-degree/equal-degree
//! splitting mod p, multifactor Hensel lifting, and subset recombination
//! bounded by a Mignotte-style coefficient bound. Degrees here are desk
//! scale, so exponential recombination is acceptable.

use crate::poly::RatPoly;
use crate::rat::BigRat;
use crate::sturm::yun_decomposition;
use crate::zpoly::{factor_mod_p, from_int_coeffs, hensel_lift, ZnPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QFactorError {
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
}

/// `lc * prod p_i^{e_i}` with the `p_i` monic irreducible and pairwise
/// coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFactorization {
    pub lc: BigRat,
    pub factors: Vec<(RatPoly, u32)>,
}

impl QFactorization {
    pub fn remultiply(&self) -> RatPoly {
        let mut acc = RatPoly::constant(self.lc.clone());
        for (p, e) in &self.factors {
            acc = &acc * &p.pow(*e);
        }
        acc
    }
}

/// Squarefree part factorization: monic squarefree primitive integer input.
///
/// Internal randomness is seeded from a constant so the output is a pure
/// function of the input.
fn factor_squarefree_monic_z(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let deg = f.len() - 1;
    debug_assert!(f[deg].is_one());
    if deg <= 1 {
        return vec![f.to_vec()];
    }
    let mut rng = ChaCha12Rng::seed_from_u64(0x5eed_fac7);
    // smallest odd prime with squarefree reduction and unit leading coeff
    let mut p = BigInt::from(3);
    let (prime, factors_mod_p) = loop {
        if crate::intsos::is_prime(&p) {
            let fp = from_int_coeffs(f, &p);
            if fp.degree() == Some(deg) {
                let der = fp.derivative(&p);
                if !der.is_zero() && fp.gcd(&der, &p).is_one() {
                    let (_, fac) = factor_mod_p(f, &p, &mut rng).expect("good prime");
                    break (p, fac);
                }
            }
        }
        p += 2;
    };
    let seeds: Vec<ZnPoly> = factors_mod_p.into_iter().map(|(g, _)| g).collect();
    if seeds.len() == 1 {
        return vec![f.to_vec()];
    }
    // Mignotte-style bound: any monic factor of f has coefficients bounded by
    // 2^deg * ||f||_2; lift beyond twice that so centered coefficients are exact.
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm2 = norm2_sq.sqrt() + BigInt::one();
    let bound: BigInt = (BigInt::one() << deg) * norm2;
    let mut target = prime.clone();
    while target < (&bound << 1) {
        target = &target * &prime;
    }
    let lifted = hensel_lift(&seeds, f, &prime, &target).expect("coprime seeds");

    // subset recombination
    let mut available: Vec<ZnPoly> = lifted;
    let mut remaining: Vec<BigInt> = f.to_vec();
    let mut found: Vec<Vec<BigInt>> = Vec::new();
    let mut size = 1usize;
    'outer: while !available.is_empty() {
        if size > available.len() / 2 {
            // the rest is irreducible
            found.push(remaining.clone());
            break;
        }
        for combo in combinations(available.len(), size) {
            let mut prod = ZnPoly::one();
            for &i in &combo {
                prod = prod.mul(&available[i], &target);
            }
            let cand = prod.centered_lift(&target);
            if coeff_bound_ok(&cand, &bound) && divides_exact(&remaining, &cand) {
                let quotient = exact_quotient(&remaining, &cand);
                found.push(cand);
                remaining = quotient;
                let keep: Vec<ZnPoly> = available
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, g)| g.clone())
                    .collect();
                available = keep;
                if remaining.len() - 1 == 0 {
                    break 'outer;
                }
                continue 'outer;
            }
        }
        size += 1;
    }
    debug_assert_eq!(found.iter().map(|g| g.len() - 1).sum::<usize>(), deg);
    found
}

fn coeff_bound_ok(f: &[BigInt], bound: &BigInt) -> bool {
    f.iter().all(|c| c.abs() <= *bound)
}

/// Iterator over k-subsets of 0..n, lexicographic.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact divisibility test for monic integer polynomials.
fn divides_exact(num: &[BigInt], den: &[BigInt]) -> bool {
    if den.len() > num.len() {
        return false;
    }
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    for i in (0..num.len() - dd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
    }
    rem.iter().all(|c| c.is_zero())
}

fn exact_quotient(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// Factor a monic squarefree rational polynomial into monic irreducibles.
fn factor_squarefree_monic_q(f: &RatPoly) -> Vec<RatPoly> {
    let deg = f.deg();
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![f.clone()];
    }
    // monicize over Z: with f = x^d + (c_{d-1}/den..)..., clear denominators
    // via x -> x/m: m^d f(x/m) is monic integral for m = lcm of denominators
    // times adjustments; simplest exact route: f integral already when content
    // denominators are 1, else substitute.
    let den_lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    if den_lcm.is_one() {
        let ints: Vec<BigInt> = f.coeffs().iter().map(|c| c.to_integer()).collect();
        return factor_squarefree_monic_z(&ints)
            .into_iter()
            .map(|g| RatPoly::new(g.iter().map(|c| BigRat::from_integer(c.clone())).collect()).monic())
            .collect();
    }
    // g(x) = m^d f(x/m) is monic with integer coefficients
    let m = BigRat::from_integer(den_lcm.clone());
    let scaled = f
        .scale_arg(&(BigRat::one() / &m))
        .scale(&num_traits::pow::pow(m.clone(), deg));
    let ints: Vec<BigInt> = scaled.coeffs().iter().map(|c| c.to_integer()).collect();
    factor_squarefree_monic_z(&ints)
        .into_iter()
        .map(|g| {
            let gp = RatPoly::new(g.iter().map(|c| BigRat::from_integer(c.clone())).collect());
            // undo the substitution: factor of f is gp(m x) normalized monic
            gp.scale_arg(&m).monic()
        })
        .collect()
}

/// Full factorization over Q into monic irreducibles with multiplicities.
pub fn factor_q(f: &RatPoly) -> Result<QFactorization, QFactorError> {
    if f.is_zero() {
        return Err(QFactorError::ZeroPolynomial);
    }
    let (lc, parts) = yun_decomposition(f).map_err(|_| QFactorError::ZeroPolynomial)?;
    let mut factors: Vec<(RatPoly, u32)> = Vec::new();
    for (sqfree, mult) in parts {
        for irr in factor_squarefree_monic_q(&sqfree) {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|a, b| {
        (a.0.deg(), a.0.coeffs(), a.1).cmp(&(b.0.deg(), b.0.coeffs(), b.1))
    });
    Ok(QFactorization { lc, factors })
}

/// True iff `f` (deg >= 1) is irreducible over Q.
pub fn is_irreducible_q(f: &RatPoly) -> bool {
    debug_assert!(f.degree().map_or(false, |d| d >= 1));
    match factor_q(f) {
        Ok(fac) => fac.factors.len() == 1 && fac.factors[0].1 == 1,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn factor_q_examples() {
        let f = factor_q(&RatPoly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(f.lc, int(1));
        assert_eq!(
            f.factors,
            vec![
                (RatPoly::from_ints(&[-1, 1]), 1),
                (RatPoly::from_ints(&[1, 1]), 1)
            ]
        );

        let f = factor_q(&RatPoly::from_ints(&[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0], (RatPoly::from_ints(&[1, 0, 0, 0, 1]), 1));

        let f = factor_q(&RatPoly::from_ints(&[2, 0, 2])).unwrap();
        assert_eq!(f.lc, int(2));
        assert_eq!(f.factors, vec![(RatPoly::from_ints(&[1, 0, 1]), 1)]);

        assert_eq!(factor_q(&RatPoly::zero()), Err(QFactorError::ZeroPolynomial));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible_q(&RatPoly::from_ints(&[7, 0, 1])));
        assert!(!is_irreducible_q(&RatPoly::from_ints(&[-1, 0, 1])));
        assert!(is_irreducible_q(&RatPoly::from_ints(&[1, 0, 6, 0, 1])));
        // cyclotomic sanity
        assert!(is_irreducible_q(&RatPoly::from_ints(&[1, 0, 0, 0, 1])));
        assert!(is_irreducible_q(&RatPoly::from_ints(&[1, 0, -1, 0, 1])));
    }

    #[test]
    fn refactors_products_with_multiplicity() {
        let p = RatPoly::from_ints(&[3, 1, 1]); // irreducible: disc < 0
        let q = RatPoly::from_ints(&[1, -1, 2]).monic(); // x^2 - x/2 + 1/2
        let f = (&p * &q.pow(2)).scale(&rat(3, 4));
        let fac = factor_q(&f).unwrap();
        assert_eq!(fac.lc, rat(3, 4));
        assert_eq!(fac.factors.len(), 2);
        assert!(fac.factors.contains(&(p.clone(), 1)));
        assert!(fac.factors.contains(&(q.clone(), 2)));
        assert_eq!(fac.remultiply(), f);
    }

    #[test]
    fn factors_are_irreducible_and_coprime() {
        let f = RatPoly::from_ints(&[-2, 1]) // x - 2
            * RatPoly::from_ints(&[5, 0, 1]) // x^2 + 5
            * RatPoly::from_ints(&[1, 1, 0, 0, 1]); // x^4 + x + 1
        let fac = factor_q(&f).unwrap();
        assert_eq!(fac.remultiply(), f);
        for (p, _) in &fac.factors {
            assert!(is_irreducible_q(p), "{p} must be irreducible");
        }
        for i in 0..fac.factors.len() {
            for j in (i + 1)..fac.factors.len() {
                assert!(fac.factors[i].0.gcd(&fac.factors[j].0).is_one());
            }
        }
    }

    #[test]
    fn non_monic_rational_coefficients() {
        // 2/3 (x^2 + 1/4)(x^2 + 9) with non-integral coefficients
        let a = RatPoly::new(vec![rat(1, 4), int(0), int(1)]);
        let b = RatPoly::from_ints(&[9, 0, 1]);
        let f = (&a * &b).scale(&rat(2, 3));
        let fac = factor_q(&f).unwrap();
        assert_eq!(fac.lc, rat(2, 3));
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.remultiply(), f);
    }

    #[test]
    fn high_degree_cyclotomic_product() {
        // x^8 - 1 = (x-1)(x+1)(x^2+1)(x^4+1)
        let f = RatPoly::from_ints(&[-1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fac = factor_q(&f).unwrap();
        assert_eq!(fac.factors.len(), 4);
        assert_eq!(fac.remultiply(), f);
        let degrees: Vec<usize> = fac.factors.iter().map(|(p, _)| p.deg()).collect();
        assert_eq!(degrees, vec![1, 1, 2, 4]);
    }
}
