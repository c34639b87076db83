//! Polynomial arithmetic modulo an integer, factorization over prime fields
//! (distinct-degree plus Cantor–Zassenhaus equal-degree splitting), Berlekamp
//! factorization over F_2, and multifactor Hensel lifting.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZPolyError {
    #[error("prime must not divide the leading coefficient and the image must be nonzero")]
    BadPrime,
    #[error("seed factors are not coprime modulo p")]
    NotCoprimeSeeds,
}

/// Polynomial with coefficients in `Z/m`, ascending degree, coefficients
/// canonically in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZnPoly {
    pub coeffs: Vec<BigInt>,
}

fn norm_coeff(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    r
}

impl ZnPoly {
    pub fn new(coeffs: Vec<BigInt>, m: &BigInt) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.iter().map(|c| norm_coeff(c, m)).collect();
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        ZnPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZnPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZnPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn x() -> Self {
        ZnPoly {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        }
    }

    pub fn constant(c: BigInt, m: &BigInt) -> Self {
        ZnPoly::new(vec![c], m)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, rhs: &ZnPoly, m: &BigInt) -> ZnPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        ZnPoly::new(coeffs, m)
    }

    pub fn sub(&self, rhs: &ZnPoly, m: &BigInt) -> ZnPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        ZnPoly::new(coeffs, m)
    }

    pub fn mul(&self, rhs: &ZnPoly, m: &BigInt) -> ZnPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZnPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ZnPoly::new(coeffs, m)
    }

    pub fn scale(&self, s: &BigInt, m: &BigInt) -> ZnPoly {
        ZnPoly::new(self.coeffs.iter().map(|c| c * s).collect(), m)
    }

    pub fn derivative(&self, m: &BigInt) -> ZnPoly {
        if self.coeffs.len() <= 1 {
            return ZnPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        ZnPoly::new(coeffs, m)
    }

    /// Division by a divisor whose leading coefficient is invertible mod m.
    pub fn divrem(&self, divisor: &ZnPoly, m: &BigInt) -> (ZnPoly, ZnPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.deg();
        let lc_inv = mod_inverse(&divisor.lc(), m).expect("leading coefficient not invertible");
        if self.coeffs.len() < divisor.coeffs.len() {
            return (ZnPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = norm_coeff(&(&rem[i + dd] * &lc_inv), m);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[i + j] = norm_coeff(&(&rem[i + j] - t), m);
            }
            quot[i] = c;
        }
        (ZnPoly::new(quot, m), ZnPoly::new(rem, m))
    }

    pub fn rem(&self, divisor: &ZnPoly, m: &BigInt) -> ZnPoly {
        self.divrem(divisor, m).1
    }

    /// Monic gcd over a prime field.
    pub fn gcd(&self, other: &ZnPoly, p: &BigInt) -> ZnPoly {
        let mut a = self.monic(p);
        let mut b = other.monic(p);
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = std::mem::replace(&mut b, r.monic(p));
        }
        a
    }

    pub fn monic(&self, m: &BigInt) -> ZnPoly {
        if self.is_zero() {
            return ZnPoly::zero();
        }
        if self.lc().is_one() {
            return self.clone();
        }
        let inv = mod_inverse(&self.lc(), m).expect("leading coefficient not invertible");
        self.scale(&inv, m)
    }

    /// `self^e mod (f, m)` by square and multiply.
    pub fn modpow(&self, e: &BigInt, f: &ZnPoly, m: &BigInt) -> ZnPoly {
        let mut base = self.rem(f, m);
        let mut acc = ZnPoly::one();
        let mut e = e.clone();
        while e.is_positive() {
            if e.is_odd() {
                acc = acc.mul(&base, m).rem(f, m);
            }
            e >>= 1;
            if e.is_positive() {
                base = base.mul(&base, m).rem(f, m);
            }
        }
        acc
    }

    /// Centered lift to integer coefficients in `(-m/2, m/2]`.
    pub fn centered_lift(&self, m: &BigInt) -> Vec<BigInt> {
        let half = m >> 1;
        self.coeffs
            .iter()
            .map(|c| if c > &half { c - m } else { c.clone() })
            .collect()
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Reduce integer coefficients mod m.
pub fn from_int_coeffs(coeffs: &[BigInt], m: &BigInt) -> ZnPoly {
    ZnPoly::new(coeffs.to_vec(), m)
}

// ---- factorization over F_p ----

/// Squarefree decomposition over F_p, handling p-th-power collapse.
fn squarefree_parts_mod_p(f: &ZnPoly, p: &BigInt) -> Vec<(ZnPoly, u32)> {
    let mut out: Vec<(ZnPoly, u32)> = Vec::new();
    collect_squarefree(f.monic(p), 1, p, &mut out);
    out
}

fn collect_squarefree(f: ZnPoly, mult: u32, p: &BigInt, out: &mut Vec<(ZnPoly, u32)>) {
    if f.deg() == 0 {
        return;
    }
    let df = f.derivative(p);
    if df.is_zero() {
        // f = g(x^p) = g(x)^p over F_p
        let pu = p.to_biguint().unwrap();
        let step: usize = usize::try_from(&pu % usize::MAX as u64).unwrap_or(usize::MAX);
        let step = if pu <= num_bigint::BigUint::from(usize::MAX as u64) {
            usize::try_from(pu.clone()).unwrap()
        } else {
            step
        };
        let mut g_coeffs = Vec::new();
        let mut k = 0usize;
        while k < f.coeffs.len() {
            g_coeffs.push(f.coeff(k));
            k += step;
        }
        let g = ZnPoly::new(g_coeffs, p);
        collect_squarefree(g, mult * step as u32, p, out);
        return;
    }
    let a0 = f.gcd(&df, p);
    let mut w = f.divrem(&a0, p).0; // product of squarefree factors, each once
    let mut rest = a0;
    let mut i = mult;
    while !w.is_one() {
        let y = w.gcd(&rest, p);
        let part = w.divrem(&y, p).0;
        if part.deg() > 0 {
            out.push((part.monic(p), i));
        }
        w = y;
        rest = rest.divrem(&w, p).0;
        i += mult;
    }
    if rest.deg() > 0 {
        collect_squarefree(rest, mult, p, out);
    }
}

/// Distinct-degree factorization of a squarefree monic f over F_p:
/// returns (product of irreducibles of degree d, d) pairs.
fn distinct_degree(f: &ZnPoly, p: &BigInt) -> Vec<(ZnPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = ZnPoly::x();
    let mut d = 0usize;
    while f.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.modpow(p, &f, p); // h = x^(p^d) mod f
        let g = f.gcd(&h.sub(&ZnPoly::x(), p), p);
        if g.deg() > 0 {
            out.push((g.clone(), d));
            f = f.divrem(&g, p).0;
            h = h.rem(&f, p);
        }
    }
    if f.deg() > 0 {
        let d = f.deg();
        out.push((f, d));
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting for odd p.
fn equal_degree_split(
    f: &ZnPoly,
    d: usize,
    p: &BigInt,
    rng: &mut (impl Rng + ?Sized),
    out: &mut Vec<ZnPoly>,
) {
    if f.deg() == d {
        out.push(f.monic(p));
        return;
    }
    let exp: BigInt = (p.pow(d as u32) - BigInt::one()) >> 1;
    loop {
        let deg = f.deg();
        let coeffs: Vec<BigInt> = (0..deg)
            .map(|_| rng.gen_bigint_range(&BigInt::zero(), p))
            .collect();
        let a = ZnPoly::new(coeffs, p);
        if a.deg() == 0 {
            continue;
        }
        let g1 = f.gcd(&a, p);
        if g1.deg() > 0 && g1.deg() < f.deg() {
            equal_degree_split(&g1, d, p, rng, out);
            equal_degree_split(&f.divrem(&g1, p).0, d, p, rng, out);
            return;
        }
        let b = a.modpow(&exp, f, p);
        let g2 = f.gcd(&b.sub(&ZnPoly::one(), p), p);
        if g2.deg() > 0 && g2.deg() < f.deg() {
            equal_degree_split(&g2, d, p, rng, out);
            equal_degree_split(&f.divrem(&g2, p).0, d, p, rng, out);
            return;
        }
    }
}

/// Factor `f` over F_p (odd prime p not dividing the leading coefficient)
/// into monic irreducibles with multiplicities; the leading coefficient is
/// returned separately.
pub fn factor_mod_p(
    f_int: &[BigInt],
    p: &BigInt,
    rng: &mut (impl Rng + ?Sized),
) -> Result<(BigInt, Vec<(ZnPoly, u32)>), ZPolyError> {
    assert!(p > &BigInt::from(2), "factor_mod_p requires an odd prime");
    let f = from_int_coeffs(f_int, p);
    if f.is_zero() {
        return Err(ZPolyError::BadPrime);
    }
    if f_int.last().map_or(true, |lc| lc.mod_floor(p).is_zero()) {
        return Err(ZPolyError::BadPrime);
    }
    let lc = f.lc();
    let mut factors: Vec<(ZnPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_parts_mod_p(&f, p) {
        for (prod, d) in distinct_degree(&part, p) {
            let mut irreducibles = Vec::new();
            equal_degree_split(&prod, d, p, rng, &mut irreducibles);
            for irr in irreducibles {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|a, b| (a.0.deg(), &a.0.coeffs).cmp(&(b.0.deg(), &b.0.coeffs)));
    Ok((lc, factors))
}

// ---- Berlekamp over F_2 ----

/// Factor a nonzero polynomial over F_2 into irreducibles with multiplicity.
/// Deterministic Berlekamp; degrees here are tiny.
pub fn factor_mod_2(f_bits: &[bool]) -> Vec<(Vec<bool>, u32)> {
    let two = BigInt::from(2);
    let coeffs: Vec<BigInt> = f_bits
        .iter()
        .map(|&b| if b { BigInt::one() } else { BigInt::zero() })
        .collect();
    let f = ZnPoly::new(coeffs, &two);
    assert!(!f.is_zero());
    let mut out: Vec<(Vec<bool>, u32)> = Vec::new();
    for (part, mult) in squarefree_parts_mod_p(&f, &two) {
        let mut stack = vec![part];
        while let Some(g) = stack.pop() {
            if g.deg() == 0 {
                continue;
            }
            match berlekamp_split_f2(&g) {
                Some((a, b)) => {
                    stack.push(a);
                    stack.push(b);
                }
                None => {
                    let bits = (0..=g.deg()).map(|i| g.coeff(i).is_one()).collect();
                    out.push((bits, mult));
                }
            }
        }
    }
    out.sort();
    // merge duplicates (possible when squarefree parts share structure)
    let mut merged: Vec<(Vec<bool>, u32)> = Vec::new();
    for (bits, m) in out {
        match merged.last_mut() {
            Some((b, acc)) if *b == bits => *acc += m,
            _ => merged.push((bits, m)),
        }
    }
    merged
}

/// One Berlekamp splitting step over F_2; `None` when irreducible.
fn berlekamp_split_f2(f: &ZnPoly) -> Option<(ZnPoly, ZnPoly)> {
    let two = BigInt::from(2);
    let n = f.deg();
    if n <= 1 {
        return None;
    }
    // Build Q - I where Q_ij = coeff_j(x^(2i) mod f)
    let mut rows: Vec<Vec<bool>> = Vec::with_capacity(n);
    for i in 0..n {
        let xi = ZnPoly::x().modpow(&BigInt::from(2 * i as u64), f, &two);
        let mut row: Vec<bool> = (0..n).map(|j| xi.coeff(j).is_one()).collect();
        row[i] ^= true; // subtract identity
        rows.push(row);
    }
    // kernel basis of (Q - I)^T over F_2: use row space of transpose
    let mut mat: Vec<Vec<bool>> = (0..n)
        .map(|j| (0..n).map(|i| rows[i][j]).collect())
        .collect();
    // Gaussian elimination, tracking free columns
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut r = 0usize;
    for c in 0..n {
        if let Some(pr) = (r..n).find(|&i| mat[i][c]) {
            mat.swap(r, pr);
            for i in 0..n {
                if i != r && mat[i][c] {
                    let (row_r, row_i) = if i < r {
                        let (lo, hi) = mat.split_at_mut(r);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = mat.split_at_mut(i);
                        (&lo[r], &mut hi[0])
                    };
                    for k in 0..n {
                        row_i[k] ^= row_r[k];
                    }
                }
            }
            pivot_of_col[c] = Some(r);
            r += 1;
        }
    }
    if r == n - 0 {
        // full rank can't happen since v = constants is always in the kernel
    }
    // kernel vectors: one per free column
    let mut kernel: Vec<Vec<bool>> = Vec::new();
    for c in 0..n {
        if pivot_of_col[c].is_none() {
            let mut v = vec![false; n];
            v[c] = true;
            for cc in 0..n {
                if let Some(pr) = pivot_of_col[cc] {
                    if mat[pr][c] {
                        v[cc] = true;
                    }
                }
            }
            kernel.push(v);
        }
    }
    if kernel.len() <= 1 {
        return None; // irreducible
    }
    // try non-constant kernel vectors as splitting polynomials
    for v in &kernel {
        let vp = ZnPoly::new(
            v.iter()
                .map(|&b| if b { BigInt::one() } else { BigInt::zero() })
                .collect(),
            &two,
        );
        if vp.deg() == 0 {
            continue;
        }
        for s in [BigInt::zero(), BigInt::one()] {
            let g = f.gcd(&vp.sub(&ZnPoly::constant(s.clone(), &two), &two), &two);
            if g.deg() > 0 && g.deg() < f.deg() {
                let h = f.divrem(&g, &two).0;
                return Some((g, h));
            }
        }
    }
    None
}

/// True iff the F_2 polynomial given by its coefficient bits is irreducible.
pub fn irreducible_mod_2(f_bits: &[bool]) -> bool {
    let n = f_bits.len().saturating_sub(1);
    if n == 0 {
        return false;
    }
    let fac = factor_mod_2(f_bits);
    fac.len() == 1 && fac[0].1 == 1 && fac[0].0.len() == n + 1
}

// ---- Hensel lifting ----

/// Lift a factorization `f = g*h (mod p)` with gcd(g, h) = 1 mod p to mod
/// p^(2^k) >= target, f monic, g and h monic.
fn hensel_pair(
    f: &[BigInt],
    g: &ZnPoly,
    h: &ZnPoly,
    p: &BigInt,
    target: &BigInt,
) -> Result<(ZnPoly, ZnPoly), ZPolyError> {
    // Bezout: a*g + b*h = 1 mod p
    let (gg, a, b) = ext_gcd_poly(g, h, p);
    if !gg.is_one() {
        return Err(ZPolyError::NotCoprimeSeeds);
    }
    let mut m = p.clone();
    let mut g = g.clone();
    let mut h = h.clone();
    let mut a = a;
    let mut b = b;
    while &m < target {
        let m2 = &m * &m;
        let fm = from_int_coeffs(f, &m2);
        // e = f - g*h mod m^2
        let e = fm.sub(&g.mul(&h, &m2), &m2);
        // q, r = (a*e) / h ; g' = g + b*e + q*g... (standard monic variant)
        let ae = a.mul(&e, &m2);
        let (q, r) = ae.divrem(&h, &m2);
        let h_new = h.add(&r, &m2);
        let be = b.mul(&e, &m2);
        let qg = q.mul(&g, &m2);
        let g_new = g.add(&be.add(&qg, &m2), &m2);
        // lift Bezout relation
        let gn = g_new.clone();
        let hn = h_new.clone();
        let bez_err = a.mul(&gn, &m2).add(&b.mul(&hn, &m2), &m2).sub(&ZnPoly::one(), &m2);
        let ab_err = a.mul(&bez_err, &m2);
        let (qq, rr) = ab_err.divrem(&hn, &m2);
        let a_new = a.sub(&rr, &m2);
        let b_new = b
            .sub(&b.mul(&bez_err, &m2).add(&qq.mul(&gn, &m2), &m2), &m2);
        g = gn;
        h = hn;
        a = a_new;
        b = b_new;
        m = m2;
    }
    Ok((ZnPoly::new(g.coeffs, target), ZnPoly::new(h.coeffs, target)))
}

fn ext_gcd_poly(a: &ZnPoly, b: &ZnPoly, p: &BigInt) -> (ZnPoly, ZnPoly, ZnPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = ZnPoly::one();
    let mut s1 = ZnPoly::zero();
    let mut t0 = ZnPoly::zero();
    let mut t1 = ZnPoly::one();
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let ns = s0.sub(&q.mul(&s1, p), p);
        s0 = std::mem::replace(&mut s1, ns);
        let nt = t0.sub(&q.mul(&t1, p), p);
        t0 = std::mem::replace(&mut t1, nt);
    }
    if r0.is_zero() {
        return (ZnPoly::zero(), ZnPoly::zero(), ZnPoly::zero());
    }
    let inv = mod_inverse(&r0.lc(), p).expect("prime field");
    (r0.scale(&inv, p), s0.scale(&inv, p), t0.scale(&inv, p))
}

/// Multifactor Hensel lifting: given monic `f` over Z and pairwise-coprime
/// monic factors of `f mod p`, return monic lifts whose product is `f mod
/// p^k` with each lift congruent to its seed mod p.
pub fn hensel_lift(
    seeds: &[ZnPoly],
    f: &[BigInt],
    p: &BigInt,
    target: &BigInt,
) -> Result<Vec<ZnPoly>, ZPolyError> {
    if seeds.is_empty() {
        return Ok(Vec::new());
    }
    if seeds.len() == 1 {
        return Ok(vec![from_int_coeffs(f, target)]);
    }
    let mid = seeds.len() / 2;
    let (left, right) = seeds.split_at(mid);
    let mut gl = ZnPoly::one();
    for s in left {
        gl = gl.mul(s, p);
    }
    let mut gr = ZnPoly::one();
    for s in right {
        gr = gr.mul(s, p);
    }
    let (gl_lift, gr_lift) = hensel_pair(f, &gl, &gr, p, target)?;
    let mut out = hensel_lift(left, &gl_lift.centered_lift(target), p, target)?;
    out.extend(hensel_lift(right, &gr_lift.centered_lift(target), p, target)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng() -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(7)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn factor_mod_p_examples() {
        let p = BigInt::from(5);
        let (lc, f) = factor_mod_p(&ints(&[1, 0, 1]), &p, &mut rng()).unwrap();
        assert!(lc.is_one());
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].0.coeffs, ints(&[2, 1]));
        assert_eq!(f[1].0.coeffs, ints(&[3, 1]));

        let p3 = BigInt::from(3);
        let (_, f) = factor_mod_p(&ints(&[1, 0, 1]), &p3, &mut rng()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.deg(), 2);
        assert_eq!(f[0].1, 1);

        let (_, f) = factor_mod_p(&ints(&[0, 0, 1]), &p3, &mut rng()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.coeffs, ints(&[0, 1]));
        assert_eq!(f[0].1, 2);

        assert_eq!(
            factor_mod_p(&ints(&[1, 5]), &p, &mut rng()),
            Err(ZPolyError::BadPrime)
        );
    }

    #[test]
    fn factor_mod_p_reconstructs() {
        let mut r = rng();
        for p in [3i64, 5, 7, 13] {
            let p = BigInt::from(p);
            for coeffs in [
                ints(&[2, 3, 0, 1, 1]),
                ints(&[1, 1, 1, 1, 1, 1]),
                ints(&[4, 0, 0, 0, 1]),
                ints(&[0, 2, 0, 1]),
            ] {
                let f = from_int_coeffs(&coeffs, &p);
                if f.is_zero() || f.lc().is_zero() {
                    continue;
                }
                let (lc, factors) = factor_mod_p(&coeffs, &p, &mut r).unwrap();
                let mut prod = ZnPoly::constant(lc, &p);
                for (g, e) in &factors {
                    for _ in 0..*e {
                        prod = prod.mul(g, &p);
                    }
                }
                assert_eq!(prod, f, "mod {p}: {coeffs:?}");
            }
        }
    }

    #[test]
    fn hensel_example() {
        let p = BigInt::from(5);
        let target = BigInt::from(25);
        let seeds = vec![
            ZnPoly::new(ints(&[2, 1]), &p),
            ZnPoly::new(ints(&[3, 1]), &p),
        ];
        let f = ints(&[1, 0, 1]);
        let lifted = hensel_lift(&seeds, &f, &p, &target).unwrap();
        assert_eq!(lifted.len(), 2);
        assert_eq!(lifted[0].coeffs, ints(&[7, 1]));
        assert_eq!(lifted[1].coeffs, ints(&[18, 1]));
        let prod = lifted[0].mul(&lifted[1], &target);
        assert_eq!(prod, from_int_coeffs(&f, &target));
        // single factor lifts to f itself
        let one = hensel_lift(&[ZnPoly::new(ints(&[1, 0, 1]), &p)], &f, &p, &target).unwrap();
        assert_eq!(one[0], from_int_coeffs(&f, &target));
        // k = 1 is the identity
        let same = hensel_lift(&seeds, &f, &p, &p).unwrap();
        assert_eq!(same[0].coeffs, ints(&[2, 1]));
    }

    #[test]
    fn hensel_high_precision() {
        let p = BigInt::from(7);
        let target = p.pow(8);
        // f = (x+1)(x+2)(x^2+x+3) is squarefree mod 7
        let f = ints(&[6, 11, 8, 4, 1]);
        let mut r = rng();
        let (_, seeds) = factor_mod_p(&f, &p, &mut r).unwrap();
        let seeds: Vec<ZnPoly> = seeds.into_iter().map(|(g, _)| g).collect();
        let lifted = hensel_lift(&seeds, &f, &p, &target).unwrap();
        let mut prod = ZnPoly::one();
        for g in &lifted {
            prod = prod.mul(g, &target);
        }
        assert_eq!(prod, from_int_coeffs(&f, &target));
        for (g, s) in lifted.iter().zip(&seeds) {
            assert_eq!(ZnPoly::new(g.coeffs.clone(), &p), *s, "seed congruence");
        }
    }

    #[test]
    fn hensel_rejects_non_coprime() {
        let p = BigInt::from(5);
        let seeds = vec![
            ZnPoly::new(ints(&[2, 1]), &p),
            ZnPoly::new(ints(&[2, 1]), &p),
        ];
        let f = ints(&[4, 4, 1]);
        assert_eq!(
            hensel_lift(&seeds, &f, &p, &BigInt::from(25)),
            Err(ZPolyError::NotCoprimeSeeds)
        );
    }

    #[test]
    fn f2_factorization() {
        // x^2 + x + 1 irreducible over F_2
        assert!(irreducible_mod_2(&[true, true, true]));
        // x^2 + 1 = (x+1)^2
        assert!(!irreducible_mod_2(&[true, false, true]));
        let f = factor_mod_2(&[true, false, true]);
        assert_eq!(f, vec![(vec![true, true], 2)]);
        // x^4 + x + 1 irreducible
        assert!(irreducible_mod_2(&[true, true, false, false, true]));
        // x^4 + x^2 + 1 = (x^2+x+1)^2
        let f = factor_mod_2(&[true, false, true, false, true]);
        assert_eq!(f, vec![(vec![true, true, true], 2)]);
        // x^5 + x + 1 = (x^2+x+1)(x^3+x^2+1)
        let f = factor_mod_2(&[true, true, false, false, false, true]);
        assert_eq!(f.len(), 2);
        for d in [2usize, 3] {
            assert!(f.iter().any(|(bits, e)| bits.len() == d + 1 && *e == 1));
        }
    }
}
