//! Number fields Q[x]/(f), their arithmetic, norms, square roots, Trager
//! factorization over a field, and the relative extension L = K(i) carried in
//! both a pair representation (a + b·i with a, b in K) and an absolute model
//! Q[x]/(u) of degree 2d, with exact basis changes between the two.

use crate::linalg::QMatrix;
use crate::poly::RatPoly;
use crate::qfactor::{factor_q, is_irreducible_q};
use crate::rat::BigRat;
use crate::sturm::resultant;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero in a number field")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("no shift c with |c| <= d^2 produced a degree-2d generator")]
    ExhaustedShifts,
}

#[derive(Debug, PartialEq, Eq)]
struct NfInner {
    gen: RatPoly,
    degree: usize,
}

/// `Q[x]/(gen)` for a monic irreducible generator. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField(Rc<NfInner>);

impl NumberField {
    /// Construct, verifying monicity and irreducibility.
    pub fn new(gen: RatPoly) -> Self {
        assert!(gen.degree().map_or(false, |d| d >= 1), "generator must be nonconstant");
        assert!(gen.lc().is_one(), "generator must be monic");
        assert!(is_irreducible_q(&gen), "generator must be irreducible");
        NumberField(Rc::new(NfInner {
            degree: gen.deg(),
            gen,
        }))
    }

    /// Construct without the irreducibility check, for generators that are
    /// irreducible by construction (e.g. minimal polynomials).
    pub fn new_unchecked(gen: RatPoly) -> Self {
        assert!(gen.lc().is_one());
        NumberField(Rc::new(NfInner {
            degree: gen.deg(),
            gen,
        }))
    }

    pub fn gen_poly(&self) -> &RatPoly {
        &self.0.gen
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Element from a representative polynomial (reduced mod the generator).
    pub fn elem(&self, rep: RatPoly) -> NFElem {
        let rep = rep.rem(&self.0.gen).expect("generator nonzero");
        NFElem {
            field: self.clone(),
            rep,
        }
    }

    pub fn scalar(&self, q: BigRat) -> NFElem {
        self.elem(RatPoly::constant(q))
    }

    pub fn zero(&self) -> NFElem {
        self.scalar(BigRat::zero())
    }

    pub fn one(&self) -> NFElem {
        self.scalar(BigRat::one())
    }

    /// The class of `x`, i.e. the distinguished root of the generator.
    pub fn theta(&self) -> NFElem {
        self.elem(RatPoly::x())
    }

    fn same(&self, other: &NumberField) -> bool {
        Rc::ptr_eq(&self.0, &other.0) || self.0.gen == other.0.gen
    }
}

/// Element of a number field: a residue polynomial of degree < deg(gen).
#[derive(Clone, PartialEq, Eq)]
pub struct NFElem {
    field: NumberField,
    rep: RatPoly,
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

impl NFElem {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn rep(&self) -> &RatPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    /// Rational value when the element is a scalar.
    pub fn as_rational(&self) -> Option<BigRat> {
        if self.rep.is_constant() {
            Some(self.rep.constant_term())
        } else {
            None
        }
    }

    fn check_field(&self, other: &NFElem) -> Result<(), FieldError> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &NFElem) -> NFElem {
        self.check_field(other).expect("field mismatch");
        self.field.elem(&self.rep + &other.rep)
    }

    pub fn sub(&self, other: &NFElem) -> NFElem {
        self.check_field(other).expect("field mismatch");
        self.field.elem(&self.rep - &other.rep)
    }

    pub fn neg(&self) -> NFElem {
        self.field.elem(-&self.rep)
    }

    pub fn mul(&self, other: &NFElem) -> NFElem {
        self.check_field(other).expect("field mismatch");
        self.field.elem(&self.rep * &other.rep)
    }

    pub fn scale(&self, s: &BigRat) -> NFElem {
        self.field.elem(self.rep.scale(s))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inverse(&self) -> Result<NFElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let (g, u, _) = self.rep.extended_gcd(self.field.gen_poly());
        debug_assert!(g.is_one(), "generator is irreducible");
        Ok(self.field.elem(u))
    }

    pub fn div(&self, other: &NFElem) -> Result<NFElem, FieldError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn square(&self) -> NFElem {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> NFElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Field norm `N_{K/Q}` = Res(gen, rep) for a monic generator.
    pub fn norm(&self) -> BigRat {
        if self.is_zero() {
            return BigRat::zero();
        }
        resultant(self.field.gen_poly(), &self.rep).expect("nonzero")
    }

    /// Coefficient vector of the representative, padded to the field degree.
    pub fn coords(&self) -> Vec<BigRat> {
        (0..self.field.degree()).map(|i| self.rep.coeff(i)).collect()
    }

    /// Multiplicative order when the element is a root of unity; `None` for
    /// elements of infinite order (searched up to the given bound).
    pub fn torsion_order(&self, bound: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }
}

/// Relative norm `N_{L/K}(a + b i) = a^2 + b^2` for the extension L = K(i).
pub fn rel_norm(a: &NFElem, b: &NFElem) -> Result<NFElem, FieldError> {
    a.check_field(b)?;
    Ok(a.square().add(&b.square()))
}

// ---- polynomials over a number field ----

/// Dense polynomial with `NFElem` coefficients, ascending degree.
#[derive(Clone, PartialEq, Eq)]
pub struct KPoly {
    pub field: NumberField,
    coeffs: Vec<NFElem>,
}

impl fmt::Debug for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KPoly{:?}", self.coeffs)
    }
}

impl KPoly {
    pub fn new(field: &NumberField, mut coeffs: Vec<NFElem>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        KPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &NumberField) -> Self {
        KPoly::new(field, Vec::new())
    }

    pub fn one(field: &NumberField) -> Self {
        KPoly::new(field, vec![field.one()])
    }

    pub fn x(field: &NumberField) -> Self {
        KPoly::new(field, vec![field.zero(), field.one()])
    }

    /// Base change of a rational polynomial.
    pub fn from_ratpoly(field: &NumberField, f: &RatPoly) -> Self {
        KPoly::new(
            field,
            f.coeffs().iter().map(|c| field.scalar(c.clone())).collect(),
        )
    }

    pub fn coeffs(&self) -> &[NFElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> NFElem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("zero polynomial")
    }

    pub fn lc(&self) -> NFElem {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, rhs: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        KPoly::new(
            &self.field,
            (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, rhs: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        KPoly::new(
            &self.field,
            (0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect(),
        )
    }

    pub fn mul(&self, rhs: &KPoly) -> KPoly {
        if self.is_zero() || rhs.is_zero() {
            return KPoly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        KPoly::new(&self.field, out)
    }

    pub fn scale(&self, s: &NFElem) -> KPoly {
        KPoly::new(
            &self.field,
            self.coeffs.iter().map(|c| c.mul(s)).collect(),
        )
    }

    pub fn monic(&self) -> KPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inverse().expect("nonzero lc");
        self.scale(&inv)
    }

    pub fn derivative(&self) -> KPoly {
        if self.coeffs.len() <= 1 {
            return KPoly::zero(&self.field);
        }
        KPoly::new(
            &self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&BigRat::from_integer(i.into())))
                .collect(),
        )
    }

    pub fn divrem(&self, divisor: &KPoly) -> (KPoly, KPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial over K");
        let dd = divisor.deg();
        let lc_inv = divisor.lc().inverse().expect("nonzero lc");
        if self.coeffs.len() < divisor.coeffs.len() {
            return (KPoly::zero(&self.field), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![self.field.zero(); qlen];
        for i in (0..qlen).rev() {
            let c = rem[i + dd].mul(&lc_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].sub(&c.mul(dc));
            }
            quot[i] = c;
        }
        (KPoly::new(&self.field, quot), KPoly::new(&self.field, rem))
    }

    pub fn gcd(&self, other: &KPoly) -> KPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = std::mem::replace(&mut b, r.monic());
        }
        a
    }

    /// Substitute `x -> x + e`.
    pub fn shift_arg(&self, e: &NFElem) -> KPoly {
        let shift = KPoly::new(&self.field, vec![e.clone(), self.field.one()]);
        let mut acc = KPoly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(&shift)
                .add(&KPoly::new(&self.field, vec![c.clone()]));
        }
        acc
    }

    /// Rational polynomial with the same coefficients, when all coefficients
    /// are scalars.
    pub fn to_ratpoly(&self) -> Option<RatPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.as_rational()?);
        }
        Some(RatPoly::new(out))
    }
}

/// Norm of a monic polynomial over K down to Q[x]:
/// `N(g)(x) = Res_t(gen(t), g_t(x))` where `g_t` substitutes t for theta.
/// Computed by evaluation at d·m+1 rational points and exact Lagrange
/// interpolation.
pub fn norm_of_kpoly(g: &KPoly) -> RatPoly {
    let field = &g.field;
    let d = field.degree();
    let m = g.deg();
    let n_points = d * m + 1;
    let mut xs = Vec::with_capacity(n_points);
    let mut vs = Vec::with_capacity(n_points);
    let mut next = 0i64;
    while xs.len() < n_points {
        let x = BigRat::from_integer(next.into());
        // G(x0, t) = sum_j rep_j(t) * x0^j as a polynomial in t
        let mut in_t = RatPoly::zero();
        let mut pow = BigRat::one();
        for c in g.coeffs() {
            in_t = &in_t + &c.rep().scale(&pow);
            pow *= &x;
        }
        let v = if in_t.is_zero() {
            BigRat::zero()
        } else {
            resultant(field.gen_poly(), &in_t).expect("nonzero inputs")
        };
        xs.push(x);
        vs.push(v);
        next = if next > 0 { -next } else { -next + 1 };
    }
    lagrange_interpolate(&xs, &vs)
}

fn lagrange_interpolate(xs: &[BigRat], vs: &[BigRat]) -> RatPoly {
    // full product prod (x - x_k)
    let mut full = RatPoly::one();
    for x in xs {
        full = &full * &RatPoly::new(vec![-x.clone(), BigRat::one()]);
    }
    let mut acc = RatPoly::zero();
    for (j, xj) in xs.iter().enumerate() {
        if vs[j].is_zero() {
            continue;
        }
        let base = full.exact_div(&RatPoly::new(vec![-xj.clone(), BigRat::one()]));
        let denom = base.eval(xj);
        acc = &acc + &base.scale(&(&vs[j] / &denom));
    }
    acc
}

/// Factor a polynomial over a number field into monic irreducibles with
/// multiplicities (Trager's norm method: shift until the norm is squarefree,
/// factor the norm over Q, recover the factors by gcds over K).
pub fn trager_factor(g: &KPoly) -> Vec<(KPoly, u32)> {
    assert!(!g.is_zero());
    let mut out: Vec<(KPoly, u32)> = Vec::new();
    let mut rest = g.monic();
    if rest.is_constant() {
        return out;
    }
    // the radical carries every irreducible factor once; exact multiplicities
    // come from repeated division
    let der = rest.derivative();
    let gcd = rest.gcd(&der);
    let radical = rest.divrem(&gcd).0;
    for (factor, _) in trager_factor_squarefree(&radical) {
        let mut e = 0u32;
        loop {
            let (q, r) = rest.divrem(&factor);
            if r.is_zero() {
                rest = q;
                e += 1;
            } else {
                break;
            }
        }
        debug_assert!(e >= 1);
        out.push((factor, e));
    }
    debug_assert!(rest.is_constant());
    out.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()));
    out
}

fn trager_factor_squarefree(g: &KPoly) -> Vec<(KPoly, u32)> {
    let field = g.field.clone();
    if g.deg() == 0 {
        return Vec::new();
    }
    if g.deg() == 1 {
        return vec![(g.monic(), 1)];
    }
    let theta = field.theta();
    let mut shift_mag = 0i64;
    loop {
        for sgn in [1i64, -1] {
            let s = shift_mag * sgn;
            if s == 0 && sgn == -1 {
                continue;
            }
            let shift = theta.scale(&BigRat::from_integer((-s).into()));
            let shifted = g.shift_arg(&shift); // g(x - s*theta)
            let norm = norm_of_kpoly(&shifted.monic());
            if norm.is_zero() {
                continue;
            }
            let rad_test = norm.gcd(&norm.derivative());
            if !rad_test.is_one() {
                continue;
            }
            let qfac = factor_q(&norm).expect("nonzero norm");
            let mut found = Vec::new();
            for (ni, _) in &qfac.factors {
                let ni_k = KPoly::from_ratpoly(&field, ni);
                let h = shifted.gcd(&ni_k);
                if h.is_constant() {
                    continue;
                }
                // shift back: factor of g is h(x + s*theta)
                let back = h.shift_arg(&shift.neg()).monic();
                found.push((back, 1u32));
            }
            // re-expansion check
            let mut prod = KPoly::one(&field);
            for (h, _) in &found {
                prod = prod.mul(h);
            }
            assert!(
                prod == g.monic(),
                "Trager factors must re-expand to the input"
            );
            return found;
        }
        shift_mag += 1;
        assert!(
            shift_mag < 1000,
            "no squarefree norm found within the shift budget"
        );
    }
}

/// Square root in a number field, via the factorization of `x^2 - a`.
///
/// The returned root is canonical: its highest-degree nonzero coordinate is
/// positive.
pub fn nf_sqrt(a: &NFElem) -> Option<NFElem> {
    if a.is_zero() {
        return Some(a.clone());
    }
    let field = a.field().clone();
    let quad = KPoly::new(&field, vec![a.neg(), field.zero(), field.one()]);
    let factors = trager_factor(&quad);
    for (h, _) in &factors {
        if h.deg() == 1 {
            let root = h.coeff(0).neg(); // monic linear: x + c -> root -c
            debug_assert!(root.square() == *a);
            // canonical sign
            let rep = root.rep();
            let lead = rep.lc();
            let canonical = if lead.is_negative() { root.neg() } else { root };
            return Some(canonical);
        }
    }
    None
}

// ---- the relative extension L = K(i) ----

/// L = K(i) with an absolute model of degree 2d.
///
/// Elements move between the pair view (a + b·i, a and b in K) and the
/// absolute view (residue polynomials in gamma = c·theta + i) by exact linear
/// algebra.
#[derive(Clone, Debug)]
pub struct RelKiExt {
    pub base: NumberField,
    pub shift: i64,
    pub abs: NumberField,
    /// Columns are gamma^j written in the basis
    /// (theta^0..theta^{d-1}, i·theta^0..i·theta^{d-1}).
    to_pairs: QMatrix,
    to_powers: QMatrix,
    pub i_abs: NFElem,
    pub theta_abs: NFElem,
}

/// One element of L in the pair representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KiPair {
    pub re: NFElem,
    pub im: NFElem,
}

impl KiPair {
    pub fn new(re: NFElem, im: NFElem) -> Self {
        KiPair { re, im }
    }

    pub fn mul(&self, rhs: &KiPair) -> KiPair {
        KiPair {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }
}

impl RelKiExt {
    fn pair_to_vector(&self, p: &KiPair) -> Vec<BigRat> {
        let mut v = p.re.coords();
        v.extend(p.im.coords());
        v
    }

    /// Absolute element from a pair (a, b) = a + b·i.
    pub fn to_abs(&self, p: &KiPair) -> NFElem {
        let v = self.pair_to_vector(p);
        let coords = self.to_powers.mul_vec(&v);
        self.abs.elem(RatPoly::new(coords))
    }

    /// Pair (a, b) from an absolute element.
    pub fn to_rel(&self, e: &NFElem) -> KiPair {
        let d2 = self.abs.degree();
        let v: Vec<BigRat> = (0..d2).map(|i| e.rep().coeff(i)).collect();
        let w = self.to_pairs.mul_vec(&v);
        let d = self.base.degree();
        let re = self.base.elem(RatPoly::new(w[..d].to_vec()));
        let im = self.base.elem(RatPoly::new(w[d..].to_vec()));
        KiPair::new(re, im)
    }
}

/// Build L = K(i) for a base field in which -1 is not a square: search
/// gamma = c·theta + i for c = 1, 2, ... until its powers span the whole
/// degree-2d space, which certifies that the minimal polynomial of gamma has
/// degree 2d (hence is irreducible and defines L).
pub fn build_ki(base: &NumberField) -> Result<RelKiExt, FieldError> {
    let d = base.degree();
    let theta = base.theta();
    let max_shift = (d * d) as i64;
    for c in 1..=max_shift {
        let gamma = KiPair::new(theta.scale(&BigRat::from_integer(c.into())), base.one());
        // columns gamma^0 .. gamma^{2d-1}, plus gamma^{2d} for the minpoly
        let mut pows: Vec<KiPair> = Vec::with_capacity(2 * d + 1);
        let mut acc = KiPair::new(base.one(), base.zero());
        for _ in 0..=(2 * d) {
            pows.push(acc.clone());
            acc = acc.mul(&gamma);
        }
        let cols: Vec<Vec<BigRat>> = pows[..2 * d]
            .iter()
            .map(|p| {
                let mut v = p.re.coords();
                v.extend(p.im.coords());
                v
            })
            .collect();
        let to_pairs = QMatrix::from_columns(&cols);
        let Some(to_powers) = to_pairs.inverse() else {
            continue;
        };
        // minimal polynomial: gamma^{2d} = sum coords_j gamma^j
        let mut top = pows[2 * d].re.coords();
        top.extend(pows[2 * d].im.coords());
        let coords = to_powers.mul_vec(&top);
        let mut u_coeffs: Vec<BigRat> = coords.iter().map(|q| -q.clone()).collect();
        u_coeffs.push(BigRat::one());
        let u = RatPoly::new(u_coeffs);
        let abs = NumberField::new_unchecked(u);
        let ext = RelKiExt {
            base: base.clone(),
            shift: c,
            abs: abs.clone(),
            i_abs: abs.zero(),    // placeholder, fixed below
            theta_abs: abs.zero(),
            to_pairs,
            to_powers,
        };
        let i_abs = ext.to_abs(&KiPair::new(base.zero(), base.one()));
        let theta_abs = ext.to_abs(&KiPair::new(theta.clone(), base.zero()));
        assert!(
            i_abs.square().add(&abs.one()).is_zero(),
            "image of i must square to -1"
        );
        return Ok(RelKiExt {
            i_abs,
            theta_abs,
            ..ext
        });
    }
    Err(FieldError::ExhaustedShifts)
}

// ---- quadratic subfields of even quartics ----

/// For a quartic field with an even generator `x^4 + p x^2 + q`, return
/// (D, w) pairs with `w^2 = D` rational: the quadratic subfields Q(sqrt(D)).
/// Always includes Q(sqrt(p^2 - 4q)); when q is a rational square s^2, also
/// Q(sqrt(-p + 2s)) and Q(sqrt(-p - 2s)) via w = theta ± s/theta.
pub fn quadratic_subfields_even_quartic(field: &NumberField) -> Vec<(BigRat, NFElem)> {
    let gen = field.gen_poly();
    if field.degree() != 4 || !gen.coeff(1).is_zero() || !gen.coeff(3).is_zero() {
        return Vec::new();
    }
    let p = gen.coeff(2);
    let q = gen.coeff(0);
    let theta = field.theta();
    let mut out = Vec::new();
    let two = BigRat::from_integer(2.into());
    // (2 theta^2 + p)^2 = p^2 - 4q
    let d1 = &p * &p - &q * BigRat::from_integer(4.into());
    let w1 = theta.square().scale(&two).add(&field.scalar(p.clone()));
    debug_assert!(w1.square() == field.scalar(d1.clone()));
    out.push((d1, w1));
    if let Some(s) = crate::rat::rat_sqrt(&q) {
        if !s.is_zero() {
            // s/theta = -(theta^3 + p*theta)/s
            let t3 = theta.pow(3);
            let pt = theta.scale(&p);
            let s_over_theta = t3.add(&pt).scale(&(-BigRat::one() / &s));
            for (sign, w) in [
                (BigRat::one(), theta.add(&s_over_theta)),
                (-BigRat::one(), theta.sub(&s_over_theta)),
            ] {
                let d = &sign * &two * &s - &p;
                debug_assert!(w.square() == field.scalar(d.clone()));
                out.push((d, w));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn qfield(c0: i64) -> NumberField {
        NumberField::new(RatPoly::from_ints(&[c0, 0, 1]))
    }

    #[test]
    fn nf_arith_examples() {
        let k = qfield(1); // Q(i)
        let x = k.theta();
        assert_eq!(x.mul(&x), k.scalar(int(-1)));

        let k2 = qfield(2); // Q(sqrt(-2))
        let x = k2.theta();
        let a = k2.one().add(&x);
        let b = k2.one().sub(&x);
        assert_eq!(a.mul(&b), k2.scalar(int(3)));

        let inv = x.inverse().unwrap();
        assert_eq!(inv, x.scale(&rat(-1, 2)));
        assert!(k2.zero().inverse().is_err());
        assert!(x.mul(&inv).is_one());
    }

    #[test]
    fn field_mismatch_detected() {
        let a = qfield(1).theta();
        let b = qfield(2).theta();
        assert_eq!(a.check_field(&b), Err(FieldError::FieldMismatch));
    }

    #[test]
    fn norm_examples() {
        let k2 = qfield(2);
        assert_eq!(k2.theta().norm(), int(2));
        assert_eq!(k2.one().norm(), int(1));
        assert_eq!(k2.scalar(int(2)).norm(), int(4));
        assert_eq!(k2.zero().norm(), int(0));
    }

    #[test]
    fn norm_is_multiplicative() {
        let k = NumberField::new(RatPoly::from_ints(&[1, 0, 6, 0, 1]));
        let a = k.elem(RatPoly::from_ints(&[1, 2, 0, 1]));
        let b = k.elem(RatPoly::new(vec![rat(1, 2), int(0), int(-3), int(1)]));
        assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
        // scalar to the d
        assert_eq!(k.scalar(rat(3, 5)).norm(), num_traits::pow::pow(rat(3, 5), 4));
    }

    #[test]
    fn nf_sqrt_examples() {
        let ki = qfield(1);
        let r = nf_sqrt(&ki.scalar(int(-1))).unwrap();
        assert_eq!(r.square(), ki.scalar(int(-1)));

        let k2 = qfield(2);
        assert_eq!(nf_sqrt(&k2.scalar(int(-1))), None);
        assert_eq!(nf_sqrt(&k2.scalar(int(9))).unwrap(), k2.scalar(int(3)));
        // sqrt(-2) = ±theta, canonical sign positive leading coordinate
        let r = nf_sqrt(&k2.scalar(int(-2))).unwrap();
        assert_eq!(r, k2.theta());
    }

    #[test]
    fn trager_examples() {
        let ki = qfield(1);
        // x^2 + 1 over Q(i) splits into two conjugate linear factors
        let f = KPoly::from_ratpoly(&ki, &RatPoly::from_ints(&[1, 0, 1]));
        let fac = trager_factor(&f);
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(h, e)| h.deg() == 1 && *e == 1));

        // x^4 + 1 over Q(i) = (x^2 - i)(x^2 + i)
        let f = KPoly::from_ratpoly(&ki, &RatPoly::from_ints(&[1, 0, 0, 0, 1]));
        let fac = trager_factor(&f);
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(h, e)| h.deg() == 2 && *e == 1));
        let prod = fac[0].0.mul(&fac[1].0);
        assert_eq!(prod, f);

        // x^2 + 2 over Q(sqrt(-2)) = (x - theta)(x + theta)
        let k2 = qfield(2);
        let f = KPoly::from_ratpoly(&k2, &RatPoly::from_ints(&[2, 0, 1]));
        let fac = trager_factor(&f);
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(h, _)| h.deg() == 1));
    }

    #[test]
    fn trager_with_multiplicity() {
        let ki = qfield(1);
        let f = KPoly::from_ratpoly(&ki, &RatPoly::from_ints(&[1, 0, 1]));
        let g = f.mul(&f); // (x^2+1)^2 = (x-i)^2 (x+i)^2
        let fac = trager_factor(&g);
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(h, e)| h.deg() == 1 && *e == 2));
    }

    #[test]
    fn build_ki_examples() {
        let k2 = qfield(2);
        let ext = build_ki(&k2).unwrap();
        assert_eq!(ext.shift, 1);
        assert_eq!(ext.abs.gen_poly(), &RatPoly::from_ints(&[1, 0, 6, 0, 1]));
        assert!(ext.i_abs.square().add(&ext.abs.one()).is_zero());

        let k7 = qfield(7);
        let ext = build_ki(&k7).unwrap();
        assert_eq!(ext.shift, 1);
        assert_eq!(ext.abs.gen_poly(), &RatPoly::from_ints(&[36, 0, 16, 0, 1]));

        // minimal polynomial of theta_abs is the base generator
        let theta_sq = ext.theta_abs.square();
        assert_eq!(theta_sq, ext.abs.scalar(int(-7)));
    }

    #[test]
    fn ki_roundtrip_and_norm() {
        let k5 = qfield(5);
        let ext = build_ki(&k5).unwrap();
        let samples = [
            KiPair::new(k5.elem(RatPoly::from_ints(&[1, 2])), k5.scalar(rat(1, 3))),
            KiPair::new(k5.zero(), k5.one()),
            KiPair::new(k5.theta(), k5.theta()),
        ];
        for p in &samples {
            let e = ext.to_abs(p);
            let back = ext.to_rel(&e);
            assert_eq!(&back, p);
        }
        // rel_norm(a, b) = a^2 + b^2
        let n = rel_norm(&k5.one(), &k5.theta()).unwrap();
        assert_eq!(n, k5.scalar(int(-4)));
    }

    #[test]
    fn even_quartic_subfields() {
        // minimal polynomial of sqrt(-2) + sqrt(-5): x^4 + 14x^2 + 9
        let k = NumberField::new(RatPoly::from_ints(&[9, 0, 14, 0, 1]));
        let subs = quadratic_subfields_even_quartic(&k);
        let ds: Vec<BigRat> = subs.iter().map(|(d, _)| d.clone()).collect();
        assert!(ds.contains(&int(160))); // Q(sqrt(10))
        assert!(ds.contains(&int(-8))); // Q(sqrt(-2))
        assert!(ds.contains(&int(-20))); // Q(sqrt(-5))
        for (d, w) in &subs {
            assert_eq!(w.square(), k.scalar(d.clone()));
        }
    }
}
