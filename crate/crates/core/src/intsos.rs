//! Integer and rational sums of squares: factoring, modular square roots,
//! two-square decompositions of primes (Cornacchia) and rationals
//! (Brahmagupta–Fibonacci recombination), and Las Vegas four-square
//! decompositions in the Rabin–Shallit style with a deterministic,
//! factorization-based fallback.

use crate::rat::BigRat;
use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntSosError {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("prime {0} is congruent to 3 mod 4 and has no two-square representation")]
    NoRepresentation(BigInt),
    #[error("input must be nonnegative")]
    NegativeInput,
}

/// Four numbers whose squares are meant to sum to a target; the consumer
/// checks the sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourSquares {
    pub a: BigRat,
    pub b: BigRat,
    pub c: BigRat,
    pub d: BigRat,
}

impl FourSquares {
    pub fn new(a: BigRat, b: BigRat, c: BigRat, d: BigRat) -> Self {
        FourSquares { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        FourSquares::new(
            crate::rat::int(a),
            crate::rat::int(b),
            crate::rat::int(c),
            crate::rat::int(d),
        )
    }

    pub fn sum_of_squares(&self) -> BigRat {
        &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d
    }

    pub fn as_array(&self) -> [BigRat; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    fn scale(&self, s: &BigRat) -> Self {
        FourSquares::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }

    /// Canonical form: absolute values sorted in descending order.
    fn normalized(&self) -> Self {
        let mut v = [self.a.abs(), self.b.abs(), self.c.abs(), self.d.abs()];
        v.sort();
        v.reverse();
        let [a, b, c, d] = v;
        FourSquares::new(a, b, c, d)
    }
}

/// Sign and prime-power decomposition of a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFactorization {
    pub sign: i8,
    /// Sorted by prime, each exponent >= 1.
    pub factors: Vec<(BigInt, u32)>,
}

impl IntFactorization {
    pub fn remultiply(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign as i64);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }
}

// ---- primality ----

/// Strong probable-prime test to base `a`.
fn miller_rabin_witness(n: &BigUint, a: &BigUint) -> bool {
    // n odd >= 3
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap();
    let d = &nm1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for `n < 3.317e24` via the 13-base Miller–Rabin
/// witness set; above that bound, 40 extra bases derived deterministically
/// from `n` leave a negligible error probability while keeping the function
/// pure.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() == Sign::Minus {
        return false;
    }
    let n = n.magnitude().clone();
    if n < BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let p = BigUint::from(p);
        if n == p {
            return true;
        }
        if (&n % &p).is_zero() {
            return false;
        }
    }
    // deterministic for n < 3_317_044_064_679_887_385_961_981
    let bases: Vec<BigUint> = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]
        .iter()
        .map(|&b| BigUint::from(b))
        .collect();
    for a in &bases {
        if !miller_rabin_witness(&n, a) {
            return false;
        }
    }
    let det_bound = BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap();
    if n < det_bound {
        return true;
    }
    // Extra rounds with bases seeded from n itself (pure, no RNG argument).
    let mut state = BigUint::from(0x9e3779b97f4a7c15u64);
    for _ in 0..40 {
        state = (&state * BigUint::from(6364136223846793005u64) + BigUint::from(1442695040888963407u64))
            % (&n - BigUint::from(3u32));
        let a = &state + BigUint::from(2u32);
        if !miller_rabin_witness(&n, &a) {
            return false;
        }
    }
    true
}

// ---- factoring ----

fn pollard_rho(n: &BigUint) -> BigUint {
    // Brent's variant; n odd composite, not a prime power of small primes.
    let one = BigUint::one();
    let mut c = BigUint::from(1u32);
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = one.clone();
        let f = |v: &BigUint| (v * v + &c) % n;
        let mut count: u64 = 0;
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != one && &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn factor_magnitude(n: &BigUint, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    let n_int = BigInt::from(n.clone());
    if is_prime(&n_int) {
        out.push(n_int);
        return;
    }
    // trial division first; inputs are coefficient-sized
    let mut m = n.clone();
    let mut p = BigUint::from(2u32);
    let limit = BigUint::from(1u32 << 16);
    while &(&p * &p) <= &m && p <= limit {
        while (&m % &p).is_zero() {
            out.push(BigInt::from(p.clone()));
            m /= &p;
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    if m.is_one() {
        return;
    }
    let m_int = BigInt::from(m.clone());
    if is_prime(&m_int) {
        out.push(m_int);
        return;
    }
    let d = pollard_rho(&m);
    let q = &m / &d;
    factor_magnitude(&d, out);
    factor_magnitude(&q, out);
}

/// Factor a nonzero integer into sign and sorted prime powers.
///
/// Trial division plus Pollard rho; sized for coefficient-scale inputs.
pub fn factor_integer(n: &BigInt) -> Result<IntFactorization, IntSosError> {
    if n.is_zero() {
        return Err(IntSosError::ZeroInput);
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut primes = Vec::new();
    factor_magnitude(n.magnitude(), &mut primes);
    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(IntFactorization { sign, factors })
}

// ---- modular square roots ----

/// Tonelli–Shanks. Returns `r` with `r^2 ≡ a (mod p)` or `None` for
/// non-residues. Requires `p` prime and `0 <= a < p`.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.magnitude().clone();
    let p = p.magnitude().clone();
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if p == BigUint::from(2u32) {
        return Some(BigInt::from(&a % &p));
    }
    let one = BigUint::one();
    let pm1 = &p - &one;
    let legendre = a.modpow(&(&pm1 >> 1), &p);
    if legendre != one {
        return None;
    }
    // p ≡ 3 (mod 4): direct exponentiation
    if (&p % BigUint::from(4u32)) == BigUint::from(3u32) {
        let r = a.modpow(&((&p + &one) >> 2), &p);
        return Some(BigInt::from(r));
    }
    // general Tonelli–Shanks
    let s = pm1.trailing_zeros().unwrap();
    let q = &pm1 >> s;
    // find a quadratic non-residue
    let mut z = BigUint::from(2u32);
    while z.modpow(&(&pm1 >> 1), &p) == one {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, &p);
    let mut t = a.modpow(&q, &p);
    let mut r = a.modpow(&((&q + &one) >> 1), &p);
    while t != one {
        let mut i = 0u64;
        let mut tt = t.clone();
        while tt != one {
            tt = &tt * &tt % &p;
            i += 1;
            if i == m {
                return None; // unreachable for valid inputs
            }
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = &b * &b % &p;
        }
        m = i;
        c = &b * &b % &p;
        t = &t * &c % &p;
        r = &r * &b % &p;
    }
    Some(BigInt::from(r))
}

/// Two squares of a prime (`p = 2` or `p ≡ 1 mod 4`) via a square root of -1
/// followed by the descending-Euclid step of Cornacchia's algorithm.
pub fn two_squares_prime(p: &BigInt) -> Result<(BigInt, BigInt), IntSosError> {
    if *p == BigInt::from(2) {
        return Ok((BigInt::one(), BigInt::one()));
    }
    if (p % BigInt::from(4)) != BigInt::one() {
        return Err(IntSosError::NoRepresentation(p.clone()));
    }
    let x = sqrt_mod_prime(&(p - BigInt::one()), p).expect("-1 is a residue for p = 1 mod 4");
    let mut a = p.clone();
    let mut b = x;
    while &b * &b > *p {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    let rest = p - &b * &b;
    let c = crate::rat::int_sqrt_exact(&rest).expect("Cornacchia residual is a perfect square");
    Ok((b, c))
}

/// Brahmagupta–Fibonacci identity: `(a^2+b^2)(c^2+d^2) = (ac-bd)^2 + (ad+bc)^2`.
pub fn brahmagupta(a: &BigRat, b: &BigRat, c: &BigRat, d: &BigRat) -> (BigRat, BigRat) {
    (a * c - b * d, a * d + b * c)
}

/// Two-square decomposition of a rational.
///
/// Present iff q > 0 and every prime ≡ 3 (mod 4) divides the reduced
/// numerator·denominator with even exponent; the per-prime solutions are
/// combined with the Brahmagupta–Fibonacci identity.
pub fn two_squares_rational(q: &BigRat) -> Option<(BigRat, BigRat)> {
    if !q.is_positive() {
        return None;
    }
    let n = q.numer() * q.denom();
    let fac = factor_integer(&n).expect("nonzero by positivity");
    let mut a = BigRat::one();
    let mut b = BigRat::zero();
    for (p, e) in &fac.factors {
        let rem3 = (p % BigInt::from(4)) == BigInt::from(3);
        if rem3 {
            if e % 2 != 0 {
                return None;
            }
            let scale = BigRat::from_integer(p.pow(e / 2));
            a *= &scale;
            b *= &scale;
        } else {
            let scale = BigRat::from_integer(p.pow(e / 2));
            a *= &scale;
            b *= &scale;
            if e % 2 == 1 {
                let (c, d) = two_squares_prime(p).expect("p = 2 or 1 mod 4");
                let (na, nb) = brahmagupta(
                    &a,
                    &b,
                    &BigRat::from_integer(c),
                    &BigRat::from_integer(d),
                );
                a = na;
                b = nb;
            }
        }
    }
    let den = BigRat::from_integer(q.denom().clone());
    a /= &den;
    b /= &den;
    Some((a.abs(), b.abs()))
}

/// Euler's four-square identity with the sign convention that keeps the
/// polynomial descent exact:
///
/// `(A²+B²+C²+D²)(a²+b²+c²+d²) = (Aa+Bb+Cc+Dd)² + (−Ab+Ba−Cd+Dc)²
///                             + (−Ac+Bd+Ca−Db)² + (−Ad−Bc+Cb+Da)²`
pub fn euler_product<T>(lhs: &[T; 4], rhs: &[T; 4]) -> [T; 4]
where
    T: Clone,
    for<'a> &'a T: Mul<&'a T, Output = T>,
    T: Add<T, Output = T> + Sub<T, Output = T>,
{
    let [a_, b_, c_, d_] = lhs;
    let [a, b, c, d] = rhs;
    [
        a_ * a + b_ * b + c_ * c + d_ * d,
        b_ * a - a_ * b + d_ * c - c_ * d,
        c_ * a - a_ * c + b_ * d - d_ * b,
        d_ * a - a_ * d + c_ * b - b_ * c,
    ]
}

/// `euler_product` on `FourSquares` values.
pub fn euler_product_fs(lhs: &FourSquares, rhs: &FourSquares) -> FourSquares {
    let [a, b, c, d] = euler_product(&lhs.as_array(), &rhs.as_array());
    FourSquares::new(a, b, c, d)
}

// ---- four squares ----

fn isqrt_floor(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Exhaustive four squares for small n, descending greedy order.
fn four_squares_small(n: u64) -> FourSquares {
    let lim = (n as f64).sqrt() as u64 + 1;
    for a in (0..=lim).rev() {
        let ra = n.checked_sub(a * a);
        let ra = match ra {
            Some(v) => v,
            None => continue,
        };
        for b in 0..=a {
            if b * b > ra {
                break;
            }
            let rb = ra - b * b;
            for c in 0..=b {
                if c * c > rb {
                    break;
                }
                let rc = rb - c * c;
                let d = (rc as f64).sqrt() as u64;
                for dd in d.saturating_sub(1)..=d + 1 {
                    if dd <= c && dd * dd == rc {
                        return FourSquares::from_ints(a as i64, b as i64, c as i64, dd as i64);
                    }
                }
            }
        }
    }
    unreachable!("Lagrange's theorem")
}

const SMALL_LIMIT: u64 = 10_000;

/// Random odd x in [0, bound] (inclusive-ish), parity forced.
fn random_with_parity<R: Rng + ?Sized>(rng: &mut R, bound: &BigUint, parity: u8, modulus: u8) -> BigUint {
    loop {
        let x = rng.gen_biguint_below(&(bound + BigUint::one()));
        if (&x % BigUint::from(modulus)).to_u8().unwrap() == parity {
            return x;
        }
    }
}

/// Two squares of `p` where `p` is 1 or a prime allowed by `two_squares_prime`.
fn two_squares_prime_or_one(p: &BigUint) -> Option<(BigInt, BigInt)> {
    if p.is_one() {
        return Some((BigInt::one(), BigInt::zero()));
    }
    let p = BigInt::from(p.clone());
    two_squares_prime(&p).ok()
}

/// Las Vegas four-square decomposition of a nonnegative integer
/// (Rabin–Shallit style: subtract a random square or two, hope the rest is a
/// representable prime).
fn four_squares_random(n: &BigUint, rng: &mut (impl Rng + ?Sized)) -> FourSquares {
    if let Some(small) = n.to_u64() {
        if small <= SMALL_LIMIT {
            return four_squares_small(small);
        }
    }
    let four = BigUint::from(4u32);
    let r4 = (n % &four).to_u8().unwrap();
    if r4 == 0 {
        let quarter = n >> 2;
        let inner = four_squares_random(&quarter, rng);
        return inner.scale(&crate::rat::int(2));
    }
    if r4 == 2 {
        // n = 2m, m odd: 2(a²+b²+c²+d²) = (a+b)²+(a-b)²+(c+d)²+(c-d)²
        let half = n >> 1;
        let inner = four_squares_random(&half, rng);
        let fs = FourSquares::new(
            &inner.a + &inner.b,
            &inner.a - &inner.b,
            &inner.c + &inner.d,
            &inner.c - &inner.d,
        );
        return fs.normalized();
    }
    let sqrt_n = isqrt_floor(n);
    if r4 == 1 {
        // pick x even, p = n - x² ≡ 1 (mod 4); p = 1 or prime gives two squares
        loop {
            let x = random_with_parity(rng, &sqrt_n, 0, 2);
            let p = n - &x * &x;
            if p.is_zero() {
                return FourSquares::new(
                    BigRat::from_integer(BigInt::from(x)),
                    BigRat::zero(),
                    BigRat::zero(),
                    BigRat::zero(),
                )
                .normalized();
            }
            if p.is_one() || is_prime(&BigInt::from(p.clone())) {
                if let Some((a, b)) = two_squares_prime_or_one(&p) {
                    return FourSquares::new(
                        BigRat::from_integer(BigInt::from(x)),
                        BigRat::from_integer(a),
                        BigRat::from_integer(b),
                        BigRat::zero(),
                    )
                    .normalized();
                }
            }
        }
    }
    let r8 = (n % BigUint::from(8u32)).to_u8().unwrap();
    if r8 == 3 {
        // x odd, q = (n - x²)/2 ≡ 1 (mod 4)
        loop {
            let x = random_with_parity(rng, &sqrt_n, 1, 2);
            let q: BigUint = (n - &x * &x) >> 1;
            if q.is_one() || is_prime(&BigInt::from(q.clone())) {
                if let Some((a, b)) = two_squares_prime_or_one(&q) {
                    // 2q = (a+b)² + (a-b)²
                    return FourSquares::new(
                        BigRat::from_integer(BigInt::from(x)),
                        BigRat::from_integer(&a + &b),
                        BigRat::from_integer(&a - &b),
                        BigRat::zero(),
                    )
                    .normalized();
                }
            }
        }
    }
    // r8 == 7: subtract x² with x ≡ 2 (mod 4), leaving 3 (mod 8)
    debug_assert_eq!(r8, 7);
    loop {
        let x = random_with_parity(rng, &sqrt_n, 2, 4);
        let m = n - &x * &x;
        if (&m % BigUint::from(8u32)).to_u8().unwrap() != 3 {
            continue;
        }
        // reuse the 3 (mod 8) path on m with one inner attempt loop
        let sqrt_m = isqrt_floor(&m);
        for _ in 0..64 {
            let y = random_with_parity(rng, &sqrt_m, 1, 2);
            let q: BigUint = (&m - &y * &y) >> 1;
            if q.is_one() || is_prime(&BigInt::from(q.clone())) {
                if let Some((a, b)) = two_squares_prime_or_one(&q) {
                    return FourSquares::new(
                        BigRat::from_integer(BigInt::from(x)),
                        BigRat::from_integer(BigInt::from(y)),
                        BigRat::from_integer(&a + &b),
                        BigRat::from_integer(&a - &b),
                    )
                    .normalized();
                }
            }
        }
    }
}

/// Deterministic per-prime four squares: ascending search over the same
/// residue classes the random routine samples from.
fn four_squares_prime_det(p: &BigUint) -> FourSquares {
    if let Some(small) = p.to_u64() {
        if small <= SMALL_LIMIT {
            return four_squares_small(small);
        }
    }
    let r4 = (p % BigUint::from(4u32)).to_u8().unwrap();
    if r4 == 1 {
        if let Some((a, b)) = two_squares_prime_or_one(p) {
            return FourSquares::new(
                BigRat::from_integer(a),
                BigRat::from_integer(b),
                BigRat::zero(),
                BigRat::zero(),
            )
            .normalized();
        }
    }
    // p ≡ 3 (mod 4): walk x upward in the parity class that leaves
    // (p - x²)/2 ≡ 1 (mod 4), so the remainder can be a two-square prime.
    let mut x = BigUint::one();
    loop {
        debug_assert!(&x * &x < *p);
        let q: BigUint = (p - &x * &x) >> 1;
        if q.is_one() || is_prime(&BigInt::from(q.clone())) {
            if let Some((a, b)) = two_squares_prime_or_one(&q) {
                return FourSquares::new(
                    BigRat::from_integer(BigInt::from(x)),
                    BigRat::from_integer(&a + &b),
                    BigRat::from_integer(&a - &b),
                    BigRat::zero(),
                )
                .normalized();
            }
        }
        x += 2u32;
    }
}

/// Four-square decomposition of `n >= 0`.
///
/// Randomized (Las Vegas) by default; `deterministic` switches to
/// factor-then-recombine: factor `n`, decompose each prime, and merge with
/// Euler's identity.
pub fn four_squares_integer_with(
    n: &BigInt,
    rng: &mut (impl Rng + ?Sized),
    deterministic: bool,
) -> Result<FourSquares, IntSosError> {
    if n.sign() == Sign::Minus {
        return Err(IntSosError::NegativeInput);
    }
    if n.is_zero() {
        return Ok(FourSquares::from_ints(0, 0, 0, 0));
    }
    if !deterministic {
        return Ok(four_squares_random(n.magnitude(), rng));
    }
    let fac = factor_integer(n)?;
    let mut acc = FourSquares::from_ints(1, 0, 0, 0);
    for (p, e) in &fac.factors {
        let scale = BigRat::from_integer(p.pow(e / 2));
        acc = acc.scale(&scale);
        if e % 2 == 1 {
            let fs = four_squares_prime_det(p.magnitude());
            acc = euler_product_fs(&acc, &fs);
        }
    }
    Ok(acc.normalized())
}

/// Randomized four squares with the default route.
pub fn four_squares_integer(
    n: &BigInt,
    rng: &mut (impl Rng + ?Sized),
) -> Result<FourSquares, IntSosError> {
    four_squares_integer_with(n, rng, false)
}

/// Four squares of a nonnegative rational via `q = (num·den)/den²`.
pub fn four_squares_rational(
    q: &BigRat,
    rng: &mut (impl Rng + ?Sized),
) -> Result<FourSquares, IntSosError> {
    if q.is_negative() {
        return Err(IntSosError::NegativeInput);
    }
    let n = q.numer() * q.denom();
    let fs = four_squares_integer(&n, rng)?;
    let den = BigRat::from_integer(q.denom().clone());
    Ok(FourSquares::new(
        fs.a / &den,
        fs.b / &den,
        fs.c / &den,
        fs.d / &den,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng() -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(0x5eed)
    }

    #[test]
    fn is_prime_examples() {
        assert!(is_prime(&BigInt::from(2)));
        assert!(!is_prime(&BigInt::from(91))); // 7 * 13
        let mersenne31 = BigInt::from((1u64 << 31) - 1);
        assert!(is_prime(&mersenne31));
        // cross-check the Mersenne prime by trial division to sqrt(n)
        let n = (1u64 << 31) - 1;
        let mut divisor_found = false;
        let mut d = 3u64;
        while d * d <= n {
            if n % d == 0 {
                divisor_found = true;
                break;
            }
            d += 2;
        }
        assert!(!divisor_found);
        assert!(!is_prime(&BigInt::from(1)));
        assert!(!is_prime(&BigInt::from(0)));
        assert!(!is_prime(&BigInt::from(-7)));
    }

    #[test]
    fn factor_examples() {
        let f = factor_integer(&BigInt::from(12)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]);
        let f = factor_integer(&BigInt::from(97)).unwrap();
        assert_eq!(f.factors, vec![(BigInt::from(97), 1)]);
        let f = factor_integer(&BigInt::from(-18)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, vec![(BigInt::from(2), 1), (BigInt::from(3), 2)]);
        assert_eq!(factor_integer(&BigInt::zero()), Err(IntSosError::ZeroInput));
    }

    #[test]
    fn factor_remultiplies() {
        for n in (1..=10_000i64).chain([999_983, 1_000_000, 65_537 * 3]) {
            for s in [n, -n] {
                let b = BigInt::from(s);
                assert_eq!(factor_integer(&b).unwrap().remultiply(), b);
            }
        }
        let mut r = rng();
        for _ in 0..40 {
            let n: u64 = r.gen();
            let b = BigInt::from(n.max(1));
            let f = factor_integer(&b).unwrap();
            assert_eq!(f.remultiply(), b);
            for (p, _) in &f.factors {
                assert!(is_prime(p), "claimed prime {p} fails is_prime");
            }
        }
    }

    #[test]
    fn sqrt_mod_examples() {
        let r = sqrt_mod_prime(&BigInt::from(4), &BigInt::from(7)).unwrap();
        assert!(r == BigInt::from(2) || r == BigInt::from(5));
        let r = sqrt_mod_prime(&BigInt::from(12), &BigInt::from(13)).unwrap();
        assert!(r == BigInt::from(5) || r == BigInt::from(8));
        assert_eq!(sqrt_mod_prime(&BigInt::from(3), &BigInt::from(7)), None);
        // exhaustive non-residue check mod 7
        let residues: Vec<i64> = (0..7).map(|x| (x * x) % 7).collect();
        assert!(!residues.contains(&3));
    }

    #[test]
    fn two_squares_prime_examples() {
        let check = |p: i64| {
            let (a, b) = two_squares_prime(&BigInt::from(p)).unwrap();
            assert_eq!(&a * &a + &b * &b, BigInt::from(p));
        };
        check(2);
        check(5);
        check(13);
        check(97);
        check(1_000_033);
        assert!(two_squares_prime(&BigInt::from(7)).is_err());
    }

    #[test]
    fn two_squares_rational_examples() {
        let (a, b) = two_squares_rational(&int(5)).unwrap();
        assert_eq!(&a * &a + &b * &b, int(5));
        let (a, b) = two_squares_rational(&int(9)).unwrap();
        assert_eq!(&a * &a + &b * &b, int(9));
        assert_eq!(two_squares_rational(&int(3)), None);
        assert_eq!(two_squares_rational(&int(0)), None);
        assert_eq!(two_squares_rational(&int(-5)), None);
        let (a, b) = two_squares_rational(&rat(5, 2)).unwrap();
        assert_eq!(&a * &a + &b * &b, rat(5, 2));
    }

    #[test]
    fn two_squares_rational_presence_criterion() {
        // presence iff q > 0 and every prime = 3 mod 4 has even exponent
        for num in -60i64..=60 {
            for den in 1i64..=20 {
                let q = rat(num, den);
                let present = two_squares_rational(&q).is_some();
                let expected = if num <= 0 {
                    false
                } else {
                    let n = BigInt::from(num) * BigInt::from(den);
                    factor_integer(&n)
                        .unwrap()
                        .factors
                        .iter()
                        .all(|(p, e)| (p % BigInt::from(4)) != BigInt::from(3) || e % 2 == 0)
                };
                assert_eq!(present, expected, "q = {num}/{den}");
            }
        }
    }

    #[test]
    fn brahmagupta_examples() {
        assert_eq!(
            brahmagupta(&int(1), &int(0), &int(7), &int(9)),
            (int(7), int(9))
        );
        assert_eq!(
            brahmagupta(&int(1), &int(1), &int(1), &int(1)),
            (int(0), int(2))
        );
        assert_eq!(
            brahmagupta(&int(1), &int(2), &int(2), &int(3)),
            (int(-4), int(7))
        );
    }

    #[test]
    fn euler_identity_examples() {
        let e = euler_product(
            &[int(1), int(0), int(0), int(0)],
            &[int(3), int(4), int(5), int(6)],
        );
        assert_eq!(e, [int(3), int(-4), int(-5), int(-6)]);
        let e = euler_product(
            &[int(1), int(1), int(0), int(0)],
            &[int(1), int(1), int(0), int(0)],
        );
        assert_eq!(e, [int(2), int(0), int(0), int(0)]);
        let e = euler_product(
            &[int(2), int(1), int(1), int(1)],
            &[int(1), int(1), int(1), int(1)],
        );
        assert_eq!(e, [int(5), int(-1), int(-1), int(-1)]);
    }

    #[test]
    fn four_squares_examples() {
        let mut r = rng();
        let fs = four_squares_integer(&BigInt::from(7), &mut r).unwrap();
        assert_eq!(fs.sum_of_squares(), int(7));
        let fs = four_squares_integer(&BigInt::zero(), &mut r).unwrap();
        assert_eq!(fs, FourSquares::from_ints(0, 0, 0, 0));
        let fs = four_squares_integer(&BigInt::from(4), &mut r).unwrap();
        assert_eq!(fs.sum_of_squares(), int(4));
        assert!(four_squares_integer(&BigInt::from(-1), &mut r).is_err());
    }

    #[test]
    fn four_squares_rational_examples() {
        let mut r = rng();
        for q in [rat(7, 9), int(1), rat(3, 2), rat(16, 109), int(0)] {
            let fs = four_squares_rational(&q, &mut r).unwrap();
            assert_eq!(fs.sum_of_squares(), q);
        }
        assert!(four_squares_rational(&rat(-1, 2), &mut r).is_err());
    }

    #[test]
    fn four_squares_matches_exhaustive_oracle_small() {
        let mut r = rng();
        for n in 0..=5000u64 {
            let fs = four_squares_integer(&BigInt::from(n), &mut r).unwrap();
            assert_eq!(fs.sum_of_squares(), int(n as i64), "n = {n}");
        }
    }

    #[test]
    fn four_squares_deterministic_route() {
        let mut r = rng();
        for n in [7i64, 11, 1000, 9999, 123_456, 1_048_573, 7 * 7 * 3] {
            let fs = four_squares_integer_with(&BigInt::from(n), &mut r, true).unwrap();
            assert_eq!(fs.sum_of_squares(), int(n), "n = {n}");
            let fs2 = four_squares_integer_with(&BigInt::from(n), &mut r, true).unwrap();
            assert_eq!(fs, fs2, "deterministic route must not depend on rng");
        }
    }

    #[test]
    fn four_squares_larger_random() {
        let mut r = rng();
        for _ in 0..25 {
            let n: u64 = r.gen::<u64>() >> 8;
            let fs = four_squares_integer(&BigInt::from(n), &mut r).unwrap();
            assert_eq!(fs.sum_of_squares(), int(n as i64));
        }
    }
}
