//! Exact integer, rational, polynomial and finite-field arithmetic.

pub mod bernoulli;
pub mod factor;
pub mod ffpoly;
pub mod finite_field;
pub mod integer;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod sturm;

pub use bernoulli::{bernoulli, incomplete_zeta_quantity};
pub use factor::{
    factor_poly_mod, factor_poly_rational, format_poly_mod, reduce_poly_mod, RationalFactorization,
};
pub use finite_field::{ff_pow_is_one, FFElement, FiniteField, PrimeField, ResidueField};
pub use integer::{divisors, factor_biguint, is_prime, primes_up_to, sigma, Factorization};
pub use poly::PolyOverQ;
pub use rational::{
    format_rational, ord_at, parse_rational, rat, rat_int, reduce_mod, ExactRational,
};
