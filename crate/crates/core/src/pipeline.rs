//! End-to-end decomposition pipeline: mode dispatch over the two-, four- and
//! six-square paths, exact certificate verification, the polynomial text
//! grammar, corpus generation, and the benchmark runner.

use crate::cas::CasConfig;
use crate::poly::RatPoly;
use crate::rat::BigRat;
use crate::reduce::{conjectural_reduce, reduce_general, ReduceError};
use crate::sos2::{decompose_two, exists_two_square};
use crate::sos4::{exists_four_square, four_squares, Sos4Error, ThreeValued};
use crate::sturm::{is_psd, poly_sqrt, sqf_triple};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input polynomial is not nonnegative on the real line")]
    NotPsd,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("a CAS backend is required for this input: {0}")]
    BackendRequired(String),
    #[error("experimental reduction exceeded its iteration cap ({0})")]
    IterationCap(u64),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<Sos4Error> for PipelineError {
    fn from(e: Sos4Error) -> Self {
        match e {
            Sos4Error::Inconclusive => {
                PipelineError::BackendRequired("norm equation engines were inconclusive".into())
            }
            other => PipelineError::Internal(other.to_string()),
        }
    }
}

impl From<ReduceError> for PipelineError {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::IterationCapExceeded(n) => PipelineError::IterationCap(n),
            ReduceError::Cas(c) => PipelineError::BackendRequired(c.to_string()),
            other => PipelineError::Internal(other.to_string()),
        }
    }
}

/// Decomposition mode, matching the CLI spellings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "six")]
    Six,
    #[serde(rename = "weighted5")]
    Weighted5,
    #[serde(rename = "weighted5-nofactor")]
    Weighted5NoFactor,
    #[serde(rename = "experimental5")]
    Experimental5,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "six" => Some(Mode::Six),
            "weighted5" => Some(Mode::Weighted5),
            "weighted5-nofactor" => Some(Mode::Weighted5NoFactor),
            "experimental5" => Some(Mode::Experimental5),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Six => "six",
            Mode::Weighted5 => "weighted5",
            Mode::Weighted5NoFactor => "weighted5-nofactor",
            Mode::Experimental5 => "experimental5",
        }
    }

    fn term_cap(&self) -> usize {
        match self {
            Mode::Six => 6,
            _ => 5,
        }
    }
}

/// Pipeline configuration: RNG seed, backend, and the iteration cap for the
/// experimental mode.
#[derive(Clone, Debug)]
pub struct DecomposeConfig {
    pub cas: CasConfig,
    pub seed: u64,
    pub experimental_cap: u64,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            cas: CasConfig::default(),
            seed: 0,
            experimental_cap: 64,
        }
    }
}

impl DecomposeConfig {
    /// Environment-driven defaults: `SOS_CAS_CMD` and `SOS_SEED`.
    pub fn from_env() -> Self {
        let mut cfg = DecomposeConfig {
            cas: CasConfig::from_env(),
            ..DecomposeConfig::default()
        };
        if let Ok(seed) = std::env::var("SOS_SEED") {
            if let Ok(seed) = seed.parse() {
                cfg.seed = seed;
            }
        }
        cfg
    }
}

/// A weighted sum-of-squares certificate with exact verification contract:
/// `sum weight_i * poly_i^2 = input`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SosCertificate {
    pub input: RatPoly,
    pub mode: Mode,
    pub terms: Vec<(BigRat, RatPoly)>,
    pub metadata: CertMetadata,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertMetadata {
    pub seed: u64,
    pub backend: String,
    /// Wall-clock stage timings; populated only in benchmark reports so that
    /// certificate files stay byte-identical across repeated runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_micros: Option<Vec<(String, u64)>>,
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    input: String,
    mode: Mode,
    weights: Vec<String>,
    polys: Vec<Vec<String>>,
    metadata: CertMetadata,
}

fn rat_to_string(q: &BigRat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rat_from_string(s: &str, position: usize) -> Result<BigRat, PipelineError> {
    s.parse::<BigRat>().map_err(|e| PipelineError::Parse {
        position,
        message: format!("bad rational {s:?}: {e}"),
    })
}

impl SosCertificate {
    /// Canonical JSON encoding; deterministic for identical inputs.
    pub fn to_json(&self) -> String {
        let file = CertificateFile {
            input: self.input.to_text(),
            mode: self.mode,
            weights: self.terms.iter().map(|(w, _)| rat_to_string(w)).collect(),
            polys: self
                .terms
                .iter()
                .map(|(_, p)| p.coeffs().iter().map(rat_to_string).collect())
                .collect(),
            metadata: self.metadata.clone(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<SosCertificate, PipelineError> {
        let file: CertificateFile =
            serde_json::from_str(text).map_err(|e| PipelineError::Parse {
                position: 0,
                message: format!("bad certificate JSON: {e}"),
            })?;
        if file.weights.len() != file.polys.len() {
            return Err(PipelineError::Parse {
                position: 0,
                message: "weights and polys must have equal length".into(),
            });
        }
        let input = parse_poly(&file.input)?;
        let mut terms = Vec::with_capacity(file.weights.len());
        for (w, coeffs) in file.weights.iter().zip(&file.polys) {
            let weight = rat_from_string(w, 0)?;
            let mut cs = Vec::with_capacity(coeffs.len());
            for c in coeffs {
                cs.push(rat_from_string(c, 0)?);
            }
            terms.push((weight, RatPoly::new(cs)));
        }
        Ok(SosCertificate {
            input,
            mode: file.mode,
            terms,
            metadata: file.metadata,
        })
    }

    /// Total size of the certificate in bits (numerators and denominators of
    /// every weight and coefficient).
    pub fn bit_size(&self) -> u64 {
        let rat_bits = |q: &BigRat| -> u64 {
            q.numer().magnitude().bits() + q.denom().magnitude().bits()
        };
        self.terms
            .iter()
            .map(|(w, p)| rat_bits(w) + p.coeffs().iter().map(rat_bits).sum::<u64>())
            .sum()
    }

    pub fn square_count(&self) -> usize {
        self.terms.len()
    }
}

/// Exact verification: weighted squares re-expand to the input, weights are
/// positive, and the term count obeys the mode.
pub fn verify(cert: &SosCertificate) -> bool {
    verify_detailed(cert).is_ok()
}

pub fn verify_detailed(cert: &SosCertificate) -> Result<(), String> {
    let mut acc = RatPoly::zero();
    for (w, p) in &cert.terms {
        if !w.is_positive() {
            return Err(format!("nonpositive weight {w}"));
        }
        acc = &acc + &(p * p).scale(w);
    }
    if acc != cert.input {
        return Err("weighted squares do not expand to the input".into());
    }
    if cert.terms.len() > cert.mode.term_cap() {
        return Err(format!(
            "{} terms exceed the cap for mode {}",
            cert.terms.len(),
            cert.mode.as_str()
        ));
    }
    if cert.mode == Mode::Weighted5 {
        let big = cert
            .terms
            .iter()
            .filter(|(w, _)| *w == crate::rat::int(2))
            .count();
        let ones = cert
            .terms
            .iter()
            .filter(|(w, _)| w.is_one())
            .count();
        if big > 1 || big + ones != cert.terms.len() {
            return Err("weighted5 weights must be (1,...,1) with at most one 2".into());
        }
    }
    if cert.mode == Mode::Experimental5 {
        if !cert.terms.iter().all(|(w, _)| w.is_one()) {
            return Err("experimental5 weights must all be 1".into());
        }
    }
    Ok(())
}

// ---- the decomposition pipeline ----

/// Wall-clock stage timings and backend call counts for one decomposition.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DecomposeStats {
    pub stages_micros: Vec<(String, u64)>,
    pub backend_calls: u64,
}

/// Decompose a nonnegative polynomial in the requested mode.
pub fn decompose(
    f: &RatPoly,
    mode: Mode,
    cfg: &DecomposeConfig,
) -> Result<SosCertificate, PipelineError> {
    decompose_with_stats(f, mode, cfg).map(|(c, _)| c)
}

pub fn decompose_with_stats(
    f: &RatPoly,
    mode: Mode,
    cfg: &DecomposeConfig,
) -> Result<(SosCertificate, DecomposeStats), PipelineError> {
    let mut stats = DecomposeStats::default();
    let calls_before = crate::cas::backend_call_count();
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let t0 = Instant::now();
    if !is_psd(f) {
        return Err(PipelineError::NotPsd);
    }
    stats.push_stage("psd-check", t0);
    let terms = decompose_terms(f, mode, cfg, &mut rng, &mut stats)?;
    let cert = SosCertificate {
        input: f.clone(),
        mode,
        terms,
        metadata: CertMetadata {
            seed: cfg.seed,
            backend: cfg.cas.backend_id(),
            timings_micros: None,
        },
    };
    let tv = Instant::now();
    verify_detailed(&cert).map_err(PipelineError::Internal)?;
    stats.push_stage("verify", tv);
    stats.backend_calls = crate::cas::backend_call_count() - calls_before;
    Ok((cert, stats))
}

impl DecomposeStats {
    fn push_stage(&mut self, name: &str, since: Instant) {
        self.stages_micros
            .push((name.to_string(), since.elapsed().as_micros() as u64));
    }
}

fn nonzero_terms(weight_polys: Vec<(BigRat, RatPoly)>) -> Vec<(BigRat, RatPoly)> {
    weight_polys.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

fn decompose_terms(
    f: &RatPoly,
    mode: Mode,
    cfg: &DecomposeConfig,
    rng: &mut ChaCha12Rng,
    stats: &mut DecomposeStats,
) -> Result<Vec<(BigRat, RatPoly)>, PipelineError> {
    if f.is_zero() {
        return Ok(Vec::new());
    }
    let one = BigRat::one();
    // perfect square
    let t = Instant::now();
    if let Some(s) = poly_sqrt(f) {
        stats.push_stage("square", t);
        return Ok(vec![(one, s)]);
    }
    stats.push_stage("square", t);
    let nofactor = mode == Mode::Weighted5NoFactor;
    let lc = f.lc();
    // two squares (weights absorb the leading coefficient in nofactor mode,
    // so its integer factorization is never consulted there)
    let t = Instant::now();
    if nofactor {
        let monic_part = f.scale(&(BigRat::one() / &lc));
        if exists_two_square(&monic_part) {
            let pair = decompose_two(&monic_part)
                .map_err(|e| PipelineError::Internal(e.to_string()))?;
            stats.push_stage("two", t);
            return Ok(nonzero_terms(vec![
                (lc.clone(), pair.a),
                (lc.clone(), pair.b),
            ]));
        }
    } else if exists_two_square(f) {
        let pair =
            decompose_two(f).map_err(|e| PipelineError::Internal(e.to_string()))?;
        stats.push_stage("two", t);
        return Ok(nonzero_terms(vec![(one.clone(), pair.a), (one, pair.b)]));
    }
    stats.push_stage("two", t);
    // four squares; Unknown existence falls through to the reduction, which
    // stays sound because the reduced remainder is four-square representable
    let t = Instant::now();
    let four_target = if nofactor {
        f.scale(&(BigRat::one() / &lc))
    } else {
        f.clone()
    };
    if exists_four_square(&four_target, &cfg.cas) == ThreeValued::True {
        match four_squares(&four_target, &cfg.cas, rng) {
            Ok(out) => {
                stats.push_stage("four", t);
                let w = if nofactor { lc.clone() } else { one.clone() };
                return Ok(nonzero_terms(
                    out.polys.into_iter().map(|p| (w.clone(), p)).collect(),
                ));
            }
            Err(Sos4Error::Inconclusive) => {} // fall through to the reduction
            Err(e) => return Err(e.into()),
        }
    }
    stats.push_stage("four", t);
    // six-square path: f = g * h^2 with g squarefree (leading coefficient
    // folded into g), reduce, then four squares on the remainder
    let t = Instant::now();
    let triple = sqf_triple(f).map_err(|e| PipelineError::Internal(e.to_string()))?;
    let g = triple.g.scale(&triple.lc);
    let h = triple.h;
    if g.is_constant() {
        // f = lc * h^2 with lc not a two-square sum; four rational squares
        let fs = crate::intsos::four_squares_rational(&triple.lc, rng)
            .map_err(|e| PipelineError::Internal(e.to_string()))?;
        stats.push_stage("reduce", t);
        return Ok(nonzero_terms(
            fs.as_array()
                .into_iter()
                .map(|c| (BigRat::one(), h.scale(&c)))
                .collect(),
        ));
    }
    let (red_g1, red_g2) = if mode == Mode::Experimental5 {
        let hp = conjectural_reduce(&g, &cfg.cas, cfg.experimental_cap)?;
        (hp, RatPoly::zero())
    } else {
        let red = reduce_general(&g)?;
        (red.g1, red.g2)
    };
    let remainder = &g - &(&red_g1 * &red_g1) - (&red_g2 * &red_g2);
    stats.push_stage("reduce", t);
    let t = Instant::now();
    let (rem_weight, rem_target) = if nofactor {
        (lc.clone(), remainder.scale(&(BigRat::one() / &lc)))
    } else {
        (BigRat::one(), remainder)
    };
    let four = four_squares(&rem_target, &cfg.cas, rng)?;
    stats.push_stage("final-four", t);
    let mut terms: Vec<(BigRat, RatPoly)> = Vec::new();
    let merge_weighted = matches!(
        mode,
        Mode::Weighted5 | Mode::Weighted5NoFactor
    );
    if merge_weighted && !red_g1.is_zero() && red_g1 == red_g2 {
        terms.push((crate::rat::int(2), &red_g1 * &h));
    } else {
        terms.push((BigRat::one(), &red_g1 * &h));
        terms.push((BigRat::one(), &red_g2 * &h));
    }
    for p in four.polys {
        terms.push((rem_weight.clone(), &p * &h));
    }
    Ok(nonzero_terms(terms))
}

/// The weighted no-factorization variant as a standalone entry point.
pub fn decompose_weighted_nofactor(
    f: &RatPoly,
    cfg: &DecomposeConfig,
) -> Result<SosCertificate, PipelineError> {
    decompose(f, Mode::Weighted5NoFactor, cfg)
}

// ---- polynomial text grammar ----

/// Parse `[coef][*][x[^exp]]` terms joined by `+`/`-`, whitespace-insensitive,
/// coefficients integers or `num/den`. Repeated powers merge. Inverts the
/// canonical printer.
pub fn parse_poly(text: &str) -> Result<RatPoly, PipelineError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    let n = bytes.len();
    let err = |pos: usize, message: &str| PipelineError::Parse {
        position: pos,
        message: message.to_string(),
    };
    let mut coeffs: Vec<BigRat> = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < n && bytes[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos == n {
        return Err(err(pos, "empty input"));
    }
    let mut first = true;
    while pos < n {
        skip_ws(&mut pos);
        if pos == n {
            break;
        }
        // sign
        let mut negative = false;
        if bytes[pos] == '+' || bytes[pos] == '-' {
            negative = bytes[pos] == '-';
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(err(pos, "expected '+' or '-' between terms"));
        }
        first = false;
        // coefficient
        let num_start = pos;
        while pos < n && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coef = if pos > num_start {
            let numer: String = bytes[num_start..pos].iter().collect();
            let numer: BigInt = numer.parse().map_err(|_| err(num_start, "bad integer"))?;
            let mut c = BigRat::from_integer(numer);
            skip_ws(&mut pos);
            if pos < n && bytes[pos] == '/' {
                pos += 1;
                skip_ws(&mut pos);
                let den_start = pos;
                while pos < n && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == den_start {
                    return Err(err(pos, "expected denominator digits after '/'"));
                }
                let denom: String = bytes[den_start..pos].iter().collect();
                let denom: BigInt = denom.parse().map_err(|_| err(den_start, "bad integer"))?;
                if denom.is_zero() {
                    return Err(err(den_start, "zero denominator"));
                }
                c /= BigRat::from_integer(denom);
            }
            Some(c)
        } else {
            None
        };
        skip_ws(&mut pos);
        if pos < n && bytes[pos] == '*' {
            if coef.is_none() {
                return Err(err(pos, "'*' requires a coefficient"));
            }
            pos += 1;
            skip_ws(&mut pos);
            if pos >= n || bytes[pos] != 'x' {
                return Err(err(pos, "expected 'x' after '*'"));
            }
        }
        // variable part
        let mut exp = 0usize;
        if pos < n && bytes[pos] == 'x' {
            pos += 1;
            exp = 1;
            skip_ws(&mut pos);
            if pos < n && bytes[pos] == '^' {
                pos += 1;
                skip_ws(&mut pos);
                let e_start = pos;
                while pos < n && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == e_start {
                    return Err(err(pos, "expected exponent digits after '^'"));
                }
                let e: String = bytes[e_start..pos].iter().collect();
                exp = e.parse().map_err(|_| err(e_start, "exponent too large"))?;
            }
        } else if coef.is_none() {
            return Err(err(pos, "expected a coefficient or 'x'"));
        }
        let mut c = coef.unwrap_or_else(BigRat::one);
        if negative {
            c = -c;
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigRat::zero());
        }
        coeffs[exp] += c;
        skip_ws(&mut pos);
        if pos < n && bytes[pos] != '+' && bytes[pos] != '-' {
            return Err(err(pos, "unexpected character"));
        }
    }
    Ok(RatPoly::new(coeffs))
}

// ---- corpus generation ----

/// Family labels for corpus polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `a^2 + b^2` for random polynomials a, b.
    #[serde(rename = "two-squares")]
    TwoSquares,
    /// Sums of four squares built to keep factor fields within native reach:
    /// positive quadratics, products of level-<=2 quadratics, biquadratic
    /// quartics with an imaginary quadratic subfield.
    #[serde(rename = "four-squares")]
    FourSquares,
    /// Products of negative-discriminant quadratics times h^2 and a positive
    /// leading coefficient.
    #[serde(rename = "quadratic-products")]
    QuadraticProducts,
    /// `x^2 + (8m+7) 4^t` and scaled variants: the classical five-square
    /// witnesses.
    #[serde(rename = "x2-8m7-4t")]
    LevelFourQuadratics,
}

/// Deterministic corpus specification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub degree_max: usize,
    /// Height bound on random integer coefficients, in bits.
    pub coeff_bits: u32,
    pub seed: u64,
    pub families: Vec<Family>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            count: 100,
            degree_max: 8,
            coeff_bits: 16,
            seed: 1,
            families: vec![
                Family::TwoSquares,
                Family::FourSquares,
                Family::QuadraticProducts,
                Family::LevelFourQuadratics,
            ],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusItem {
    pub label: Family,
    pub poly: String,
}

fn rand_coeff(rng: &mut ChaCha12Rng, bits: u32) -> BigRat {
    let bound = 1i64 << bits.min(32);
    crate::rat::int(rng.gen_range(-(bound - 1)..bound))
}

fn rand_poly(rng: &mut ChaCha12Rng, deg: usize, bits: u32) -> RatPoly {
    loop {
        let coeffs: Vec<BigRat> = (0..=deg).map(|_| rand_coeff(rng, bits)).collect();
        let p = RatPoly::new(coeffs);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Squarefree negative-discriminant values whose quadratic fields have level
/// at most two (not 7 mod 8 after squarefree reduction).
const SAFE_QUADRATIC_CONSTANTS: [i64; 8] = [1, 2, 3, 5, 6, 10, 13, 17];

fn random_level2_quadratic(rng: &mut ChaCha12Rng, bits: u32) -> RatPoly {
    // (x + u)^2 + v with v > 0 from the safe list times a square scale
    let u = rand_coeff(rng, bits.min(8));
    let scale = 1 + rng.gen_range(0..4i64);
    let v = SAFE_QUADRATIC_CONSTANTS[rng.gen_range(0..SAFE_QUADRATIC_CONSTANTS.len())];
    let base = RatPoly::new(vec![u, BigRat::one()]);
    &(&base * &base) + &RatPoly::constant(crate::rat::int(v * scale * scale))
}

fn generate_one(family: Family, rng: &mut ChaCha12Rng, spec: &CorpusSpec) -> RatPoly {
    let bits = spec.coeff_bits;
    match family {
        Family::TwoSquares => loop {
            let half = (spec.degree_max / 2).max(1);
            let da = rng.gen_range(0..=half);
            let db = rng.gen_range(0..=half);
            let a = rand_poly(rng, da, bits);
            let b = rand_poly(rng, db, bits);
            let f = &(&a * &a) + &(&b * &b);
            if !f.is_zero() {
                return f;
            }
        },
        Family::FourSquares => {
            match rng.gen_range(0..3u8) {
                0 => {
                    // positive quadratic: c(x+u)^2 + v
                    let c = 1 + rng.gen_range(0..(1i64 << bits.min(8)));
                    let u = rand_coeff(rng, bits.min(8));
                    let v = 1 + rng.gen_range(0..(1i64 << bits.min(12)));
                    let base = RatPoly::new(vec![u, BigRat::one()]);
                    &(&base * &base).scale(&crate::rat::int(c))
                        + &RatPoly::constant(crate::rat::int(v))
                }
                1 => {
                    // biquadratic quartic with imaginary quadratic subfields:
                    // minimal polynomial of sqrt(-a) + sqrt(-b)
                    let idx = rng.gen_range(0..SAFE_QUADRATIC_CONSTANTS.len());
                    let jdx = (idx + 1 + rng.gen_range(0..SAFE_QUADRATIC_CONSTANTS.len() - 1))
                        % SAFE_QUADRATIC_CONSTANTS.len();
                    let a = SAFE_QUADRATIC_CONSTANTS[idx].max(2);
                    let b = SAFE_QUADRATIC_CONSTANTS[jdx].max(2);
                    if a == b {
                        return generate_one(family, rng, spec);
                    }
                    let lc = 1 + rng.gen_range(0..16i64);
                    RatPoly::from_ints(&[(a - b) * (a - b), 0, 2 * (a + b), 0, 1])
                        .scale(&crate::rat::int(lc))
                }
                _ => {
                    // product of level-<=2 quadratics, positive lc
                    let k = 1 + rng.gen_range(0..(spec.degree_max / 2).max(1)).min(3);
                    let mut f = RatPoly::constant(crate::rat::int(
                        1 + rng.gen_range(0..(1i64 << bits.min(8))),
                    ));
                    for _ in 0..k {
                        f = &f * &random_level2_quadratic(rng, bits);
                    }
                    f
                }
            }
        }
        Family::QuadraticProducts => {
            // product of negative-discriminant quadratics; any level-4 factor
            // appears in the squarefree odd part alone (others squared)
            let use_level4 = rng.gen_bool(0.4);
            let lc = 1 + rng.gen_range(0..(1i64 << bits.min(8)));
            let mut f = RatPoly::constant(crate::rat::int(lc));
            if use_level4 {
                let m = rng.gen_range(0..4i64);
                let t = rng.gen_range(0..2u32);
                let c = (8 * m + 7) * 4i64.pow(t);
                f = &f * &RatPoly::from_ints(&[c, 0, 1]);
                // keep the remaining factors at even multiplicity
                let extra = random_level2_quadratic(rng, bits);
                if rng.gen_bool(0.5) && 2 + 2 * extra.deg() + f.deg() <= spec.degree_max {
                    f = &f * &(&extra * &extra);
                }
            } else {
                let k = 1 + rng.gen_range(0..(spec.degree_max / 2).max(1)).min(3);
                for _ in 0..k {
                    f = &f * &random_level2_quadratic(rng, bits);
                }
            }
            f
        }
        Family::LevelFourQuadratics => {
            let m = rng.gen_range(0..(1i64 << bits.min(10)));
            let t = rng.gen_range(0..3u32);
            let c = (8 * m + 7) * 4i64.pow(t);
            let mut f = RatPoly::from_ints(&[c, 0, 1]);
            if rng.gen_bool(0.3) {
                f = f.scale(&crate::rat::int(2)); // odd leading valuation branch
            }
            if rng.gen_bool(0.3) {
                let h = RatPoly::new(vec![rand_coeff(rng, 4), BigRat::one()]);
                f = &f * &(&h * &h);
            }
            f
        }
    }
}

/// Deterministic corpus: every output is checked nonnegative at generation.
pub fn corpus_generate(spec: &CorpusSpec) -> Vec<(Family, RatPoly)> {
    assert!(!spec.families.is_empty(), "family mix must be nonempty");
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let family = spec.families[i % spec.families.len()];
        let f = generate_one(family, &mut rng, spec);
        assert!(is_psd(&f), "corpus generator must produce psd polynomials");
        out.push((family, f));
    }
    out
}

// ---- benchmark runner ----

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub index: usize,
    pub label: Family,
    pub input: String,
    pub mode: Mode,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub squares: usize,
    pub cert_bits: u64,
    pub total_micros: u64,
    pub stages_micros: Vec<(String, u64)>,
    pub backend_calls: u64,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchAggregate {
    pub mode: Mode,
    pub instances: usize,
    pub failures: usize,
    pub median_micros: u64,
    pub median_cert_bits: u64,
    pub median_squares: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<BenchAggregate>,
}

fn median<T: Copy + Ord>(values: &mut Vec<T>) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    Some(values[values.len() / 2])
}

/// Run every corpus instance under every mode; per-instance failures are
/// recorded, never fatal.
pub fn run_bench(
    corpus: &[(Family, RatPoly)],
    modes: &[Mode],
    cfg: &DecomposeConfig,
) -> BenchReport {
    let mut rows = Vec::new();
    for mode in modes {
        for (index, (label, poly)) in corpus.iter().enumerate() {
            let started = Instant::now();
            let outcome = decompose_with_stats(poly, *mode, cfg);
            let total_micros = started.elapsed().as_micros() as u64;
            let row = match outcome {
                Ok((cert, stats)) => BenchRow {
                    index,
                    label: *label,
                    input: poly.to_text(),
                    mode: *mode,
                    ok: true,
                    error: None,
                    squares: cert.square_count(),
                    cert_bits: cert.bit_size(),
                    total_micros,
                    stages_micros: stats.stages_micros,
                    backend_calls: stats.backend_calls,
                    verified: verify(&cert),
                },
                Err(e) => BenchRow {
                    index,
                    label: *label,
                    input: poly.to_text(),
                    mode: *mode,
                    ok: false,
                    error: Some(e.to_string()),
                    squares: 0,
                    cert_bits: 0,
                    total_micros,
                    stages_micros: Vec::new(),
                    backend_calls: 0,
                    verified: false,
                },
            };
            rows.push(row);
        }
    }
    let mut aggregates = Vec::new();
    for mode in modes {
        let sel: Vec<&BenchRow> = rows
            .iter()
            .filter(|r| r.mode == *mode && r.ok)
            .collect();
        let failures = rows
            .iter()
            .filter(|r| r.mode == *mode && !r.ok)
            .count();
        let mut times: Vec<u64> = sel.iter().map(|r| r.total_micros).collect();
        let mut bits: Vec<u64> = sel.iter().map(|r| r.cert_bits).collect();
        let mut squares: Vec<usize> = sel.iter().map(|r| r.squares).collect();
        aggregates.push(BenchAggregate {
            mode: *mode,
            instances: sel.len() + failures,
            failures,
            median_micros: median(&mut times).unwrap_or(0),
            median_cert_bits: median(&mut bits).unwrap_or(0),
            median_squares: median(&mut squares).unwrap_or(0),
        });
    }
    BenchReport { rows, aggregates }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn cfg() -> DecomposeConfig {
        DecomposeConfig {
            seed: 7,
            ..DecomposeConfig::default()
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_poly("x^2 + 7").unwrap(), RatPoly::from_ints(&[7, 0, 1]));
        assert_eq!(
            parse_poly("2/3*x^4 - x").unwrap(),
            RatPoly::new(vec![int(0), int(-1), int(0), int(0), rat(2, 3)])
        );
        assert_eq!(parse_poly("x + x").unwrap(), RatPoly::from_ints(&[0, 2]));
        assert_eq!(parse_poly("-x^2").unwrap(), RatPoly::from_ints(&[0, 0, -1]));
        assert_eq!(parse_poly(" 5 ").unwrap(), RatPoly::constant(int(5)));
        assert_eq!(parse_poly("3x").unwrap(), RatPoly::from_ints(&[0, 3]));
        assert_eq!(parse_poly("x^2-x^2").unwrap(), RatPoly::zero());
    }

    #[test]
    fn parse_errors_carry_positions() {
        for (text, badpos) in [("x^", 2usize), ("2*", 2), ("x + ?", 4), ("", 0), ("1/0", 2)] {
            match parse_poly(text) {
                Err(PipelineError::Parse { position, .. }) => {
                    assert_eq!(position, badpos, "position for {text:?}")
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn print_parse_roundtrip() {
        let polys = [
            RatPoly::from_ints(&[7, 0, 1]),
            RatPoly::new(vec![rat(-3, 4), int(0), rat(1, 2), int(5)]),
            RatPoly::zero(),
            RatPoly::from_ints(&[0, -1]),
            RatPoly::constant(rat(22, 7)),
        ];
        for p in polys {
            assert_eq!(parse_poly(&p.to_text()).unwrap(), p, "roundtrip {p}");
        }
    }

    #[test]
    fn decompose_square() {
        let f = RatPoly::from_ints(&[1, 2, 1]);
        let cert = decompose(&f, Mode::Six, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 1);
        assert_eq!(cert.terms[0].1, RatPoly::from_ints(&[1, 1]));
        assert!(verify(&cert));
    }

    #[test]
    fn decompose_two_square_path() {
        let f = RatPoly::from_ints(&[1, 0, 0, 0, 1]);
        let cert = decompose(&f, Mode::Six, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 2);
        assert!(verify(&cert));
    }

    #[test]
    fn decompose_four_square_path() {
        let f = RatPoly::from_ints(&[5, 0, 1]);
        let cert = decompose(&f, Mode::Six, &cfg()).unwrap();
        assert!(cert.terms.len() <= 4);
        assert!(verify(&cert));
    }

    #[test]
    fn decompose_six_and_weighted5_on_x2_plus_7() {
        let f = RatPoly::from_ints(&[7, 0, 1]);
        let cert6 = decompose(&f, Mode::Six, &cfg()).unwrap();
        assert_eq!(cert6.square_count(), 6);
        assert!(verify(&cert6));
        let cert5 = decompose(&f, Mode::Weighted5, &cfg()).unwrap();
        assert_eq!(cert5.square_count(), 5);
        let twos: Vec<&BigRat> = cert5
            .terms
            .iter()
            .map(|(w, _)| w)
            .filter(|w| **w == int(2))
            .collect();
        assert_eq!(twos.len(), 1, "exactly one weight-2 term");
        assert!(verify(&cert5));
    }

    #[test]
    fn decompose_nofactor_examples() {
        let f = RatPoly::from_ints(&[3, 0, 3]);
        let cert = decompose(&f, Mode::Weighted5NoFactor, &cfg()).unwrap();
        assert!(verify(&cert));
        assert_eq!(cert.terms.len(), 2);
        for (w, _) in &cert.terms {
            assert_eq!(*w, int(3));
        }
        let f = RatPoly::from_ints(&[1, 0, 1]);
        let cert = decompose(&f, Mode::Weighted5NoFactor, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 2);
        assert!(cert.terms.iter().all(|(w, _)| w.is_one()));
        let f = RatPoly::from_ints(&[7, 0, 7]);
        let cert = decompose(&f, Mode::Weighted5NoFactor, &cfg()).unwrap();
        assert!(verify(&cert));
        assert!(cert.terms.iter().all(|(w, _)| *w == int(7)));
    }

    #[test]
    fn decompose_rejects_negative() {
        let f = RatPoly::from_ints(&[-1, 0, 1]);
        assert!(matches!(
            decompose(&f, Mode::Six, &cfg()),
            Err(PipelineError::NotPsd)
        ));
        assert!(matches!(
            decompose(&RatPoly::constant(int(-3)), Mode::Six, &cfg()),
            Err(PipelineError::NotPsd)
        ));
    }

    #[test]
    fn decompose_constants_and_zero() {
        let cert = decompose(&RatPoly::zero(), Mode::Six, &cfg()).unwrap();
        assert!(cert.terms.is_empty());
        assert!(verify(&cert));
        let cert = decompose(&RatPoly::constant(int(5)), Mode::Six, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 2);
        assert!(verify(&cert));
        let cert = decompose(&RatPoly::constant(int(7)), Mode::Six, &cfg()).unwrap();
        assert_eq!(cert.terms.len(), 4);
        assert!(verify(&cert));
    }

    #[test]
    fn verify_rejects_tampering() {
        let f = RatPoly::from_ints(&[5, 0, 1]);
        let mut cert = decompose(&f, Mode::Six, &cfg()).unwrap();
        assert!(verify(&cert));
        // perturb one coefficient by 1e-9-ish rational
        let (w, p) = cert.terms[0].clone();
        let mut coeffs: Vec<BigRat> = p.coeffs().to_vec();
        coeffs[0] += rat(1, 1_000_000_000);
        cert.terms[0] = (w, RatPoly::new(coeffs));
        assert!(!verify(&cert));
        // zero weight
        let mut cert2 = decompose(&f, Mode::Six, &cfg()).unwrap();
        cert2.terms[0].0 = int(0);
        assert!(!verify(&cert2));
    }

    #[test]
    fn certificate_json_roundtrip_and_determinism() {
        let f = RatPoly::from_ints(&[7, 0, 1]);
        let a = decompose(&f, Mode::Weighted5, &cfg()).unwrap();
        let b = decompose(&f, Mode::Weighted5, &cfg()).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "byte-identical for same seed");
        let parsed = SosCertificate::from_json(&a.to_json()).unwrap();
        assert_eq!(parsed.input, a.input);
        assert_eq!(parsed.terms, a.terms);
        assert!(verify(&parsed));
        // different seed can change the certificate but never its validity
        let cfg2 = DecomposeConfig {
            seed: 8,
            ..DecomposeConfig::default()
        };
        let c = decompose(&f, Mode::Weighted5, &cfg2).unwrap();
        assert!(verify(&c));
    }

    #[test]
    fn experimental_mode_on_easy_inputs() {
        let f = RatPoly::from_ints(&[5, 0, 1]);
        let cert = decompose(&f, Mode::Experimental5, &cfg()).unwrap();
        assert!(verify(&cert));
        assert!(cert.terms.len() <= 5);
        let f = RatPoly::from_ints(&[7, 0, 1]);
        let cert = decompose(&f, Mode::Experimental5, &cfg()).unwrap();
        assert!(verify(&cert));
        assert!(cert.terms.len() <= 5);
        assert!(cert.terms.iter().all(|(w, _)| w.is_one()));
    }

    #[test]
    fn corpus_is_deterministic_and_psd() {
        let spec = CorpusSpec {
            count: 40,
            seed: 123,
            ..CorpusSpec::default()
        };
        let a = corpus_generate(&spec);
        let b = corpus_generate(&spec);
        assert_eq!(
            a.iter().map(|(_, p)| p.to_text()).collect::<Vec<_>>(),
            b.iter().map(|(_, p)| p.to_text()).collect::<Vec<_>>()
        );
        for (_, p) in &a {
            assert!(is_psd(p));
        }
        // the level-four family contains x^2 + 7 for m = 0, t = 0
        let spec = CorpusSpec {
            count: 200,
            seed: 5,
            families: vec![Family::LevelFourQuadratics],
            ..CorpusSpec::default()
        };
        let items = corpus_generate(&spec);
        assert!(items.iter().all(|(f, _)| *f == Family::LevelFourQuadratics));
    }

    #[test]
    fn bench_runner_smoke() {
        let corpus = vec![
            (Family::TwoSquares, RatPoly::from_ints(&[1, 0, 0, 0, 1])),
            (Family::LevelFourQuadratics, RatPoly::from_ints(&[7, 0, 1])),
            (Family::FourSquares, RatPoly::from_ints(&[5, 0, 1])),
        ];
        let report = run_bench(&corpus, &[Mode::Six, Mode::Weighted5], &cfg());
        assert_eq!(report.rows.len(), 6);
        assert!(report.rows.iter().all(|r| r.ok && r.verified));
        let six_row = report
            .rows
            .iter()
            .find(|r| r.mode == Mode::Six && r.input == "x^2 + 7")
            .unwrap();
        assert_eq!(six_row.squares, 6);
        let w5_row = report
            .rows
            .iter()
            .find(|r| r.mode == Mode::Weighted5 && r.input == "x^2 + 7")
            .unwrap();
        assert_eq!(w5_row.squares, 5);
        // empty corpus gives an empty report
        let empty = run_bench(&[], &[Mode::Six], &cfg());
        assert!(empty.rows.is_empty());
    }
}
