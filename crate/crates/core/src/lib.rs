//! Exact decomposition of nonnegative univariate polynomials over the
//! rationals into sums of at most six polynomial squares (or weighted sums
//! of five), with machine-verifiable certificates.
//!
//! Everything is computed in exact rational arithmetic; no certificate is
//! ever emitted without an exact expansion check.

pub mod cas;
pub mod intsos;
pub mod linalg;
pub mod numfield;
pub mod pipeline;
pub mod poly;
pub mod qfactor;
pub mod rat;
pub mod reduce;
pub mod sos2;
pub mod sos4;
pub mod sturm;
pub mod units;
pub mod zpoly;

pub use cas::{cas_padic_irreducible, CasConfig, CasError};
pub use intsos::{
    brahmagupta, euler_product, factor_integer, four_squares_integer,
    four_squares_integer_with, four_squares_rational, is_prime, sqrt_mod_prime,
    two_squares_prime, two_squares_rational, FourSquares, IntFactorization,
};
pub use numfield::{
    build_ki, nf_sqrt, norm_of_kpoly, rel_norm, trager_factor, KPoly, NFElem, NumberField,
    RelKiExt,
};
pub use pipeline::{
    corpus_generate, decompose, decompose_weighted_nofactor, decompose_with_stats, parse_poly,
    run_bench, verify, verify_detailed, BenchReport, CorpusSpec, DecomposeConfig, Family, Mode,
    PipelineError, SosCertificate,
};
pub use poly::RatPoly;
pub use qfactor::{factor_q, is_irreducible_q, QFactorization};
pub use rat::{ord2, BigRat, ExtOrd};
pub use reduce::{
    conjectural_reduce, newton_l3, np_irreducible_sufficient, np_lower_hull,
    padic_irreducible_proven, reduce_general, reduce_odd, NewtonPolygon, ReductionOut,
};
pub use sos2::{decompose_two, exists_two_square, gaussian_split, TwoSquarePair};
pub use sos4::{
    descent_four, exists_four_square, four_squares, initial_modular, FourSquarePolys,
    ModularSolution, ThreeValued,
};
pub use sturm::{
    epsilon_exponent, is_psd, poly_sqrt, real_root_count, resultant, sqf_triple, SqfTriple,
};
pub use units::{
    f2_solve, field_level, solve_minus_one_two_squares, square_class_coords, unit_group,
    F2System, Level, MinusOneOutcome, SquareClassBasis, UnitGroupPresentation,
};
