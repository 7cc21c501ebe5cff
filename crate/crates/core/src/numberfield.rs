//! Number fields `Q[x]/(m(x))` in the power basis, primes above `ell` read
//! off from the factorization of `m mod ell`, and reduction into residue
//! fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactmath::factor::{factor_poly_mod, factor_poly_rational, format_poly_mod};
use crate::exactmath::ffpoly;
use crate::exactmath::finite_field::{FFElement, ResidueField};
use crate::exactmath::linalg::{self, Field, Matrix, Rationals};
use crate::exactmath::poly::PolyOverQ;
use crate::exactmath::rational::{format_rational, reduce_mod as reduce_rational, ExactRational};

/// The field `Q(theta)` with `theta` a root of a monic irreducible integral
/// polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberFieldCtx {
    minpoly: PolyOverQ,
}

impl NumberFieldCtx {
    pub fn new(minpoly: PolyOverQ) -> Result<Arc<Self>> {
        if minpoly.degree().unwrap_or(0) == 0 {
            return invalid("defining polynomial must have positive degree");
        }
        if !minpoly.is_monic() || !minpoly.is_integral() {
            return invalid(format!(
                "defining polynomial {minpoly} must be monic with integer coefficients"
            ));
        }
        if !factor_poly_rational(&minpoly)?.is_irreducible() {
            return invalid(format!("defining polynomial {minpoly} is reducible over Q"));
        }
        Ok(Arc::new(NumberFieldCtx { minpoly }))
    }

    /// Q itself, presented as `Q[x]/(x)`.
    pub fn rationals() -> Arc<Self> {
        Arc::new(NumberFieldCtx {
            minpoly: PolyOverQ::x(),
        })
    }

    pub fn minpoly(&self) -> &PolyOverQ {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Discriminant of the defining polynomial,
    /// `(-1)^(n(n-1)/2) N(m'(theta))`.
    pub fn discriminant(self: &Arc<Self>) -> BigInt {
        let n = self.degree();
        let d = NFElement::from_poly(self.clone(), &self.minpoly.derivative()).norm();
        let d = d.to_integer();
        if (n * (n - 1) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }
}

impl fmt::Debug for NumberFieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({})", self.minpoly)
    }
}

/// Element of a number field, as rational coordinates on `1, theta, ...`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NFElement {
    ctx: Arc<NumberFieldCtx>,
    coords: Vec<ExactRational>,
}

impl NFElement {
    pub fn from_coords(ctx: Arc<NumberFieldCtx>, coords: Vec<ExactRational>) -> Result<Self> {
        if coords.len() != ctx.degree() {
            return invalid(format!(
                "expected {} coordinates, got {}",
                ctx.degree(),
                coords.len()
            ));
        }
        Ok(NFElement { ctx, coords })
    }

    /// The class of an arbitrary rational polynomial.
    pub fn from_poly(ctx: Arc<NumberFieldCtx>, p: &PolyOverQ) -> Self {
        let r = p.rem(&ctx.minpoly).expect("nonzero modulus");
        let coords = (0..ctx.degree()).map(|i| r.coeff(i)).collect();
        NFElement { ctx, coords }
    }

    pub fn from_rational(ctx: Arc<NumberFieldCtx>, x: ExactRational) -> Self {
        let mut coords = vec![BigRational::zero(); ctx.degree()];
        coords[0] = x;
        NFElement { ctx, coords }
    }

    pub fn from_int(ctx: Arc<NumberFieldCtx>, n: impl Into<BigInt>) -> Self {
        Self::from_rational(ctx, BigRational::from_integer(n.into()))
    }

    pub fn zero(ctx: Arc<NumberFieldCtx>) -> Self {
        Self::from_int(ctx, 0)
    }

    pub fn one(ctx: Arc<NumberFieldCtx>) -> Self {
        Self::from_int(ctx, 1)
    }

    /// The root `theta` of the defining polynomial.
    pub fn generator(ctx: Arc<NumberFieldCtx>) -> Self {
        Self::from_poly(ctx, &PolyOverQ::x())
    }

    pub fn ctx(&self) -> &Arc<NumberFieldCtx> {
        &self.ctx
    }

    pub fn coords(&self) -> &[ExactRational] {
        &self.coords
    }

    pub fn to_poly(&self) -> PolyOverQ {
        PolyOverQ::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The value when the element is rational.
    pub fn as_rational(&self) -> Option<ExactRational> {
        self.coords[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coords[0].clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = self.to_poly().ext_gcd(&self.ctx.minpoly);
        debug_assert_eq!(g, PolyOverQ::one());
        Ok(Self::from_poly(self.ctx.clone(), &s))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        NFElement {
            ctx: self.ctx.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// Matrix of multiplication by `self` on the power basis (columns are
    /// images of basis vectors).
    pub fn multiplication_matrix(&self) -> Matrix<ExactRational> {
        let n = self.ctx.degree();
        let mut cols = Vec::with_capacity(n);
        let mut basis = Self::one(self.ctx.clone());
        let theta = Self::generator(self.ctx.clone());
        for _ in 0..n {
            cols.push((self * &basis).coords);
            basis = &basis * &theta;
        }
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    pub fn norm(&self) -> ExactRational {
        linalg::det(&Rationals, &self.multiplication_matrix())
    }

    pub fn trace(&self) -> ExactRational {
        let m = self.multiplication_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Characteristic polynomial of multiplication by `self`.
    pub fn charpoly(&self) -> PolyOverQ {
        linalg::charpoly(&self.multiplication_matrix())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        let s = self.to_poly().to_string().replace('x', "a");
        write!(f, "{s}")
    }
}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NFElement({self} in {:?})", self.ctx)
    }
}

fn check_ctx(a: &NFElement, b: &NFElement) {
    assert!(
        Arc::ptr_eq(&a.ctx, &b.ctx) || a.ctx == b.ctx,
        "number field elements from different fields"
    );
}

impl Add for &NFElement {
    type Output = NFElement;
    fn add(self, rhs: &NFElement) -> NFElement {
        check_ctx(self, rhs);
        NFElement {
            ctx: self.ctx.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &NFElement {
    type Output = NFElement;
    fn sub(self, rhs: &NFElement) -> NFElement {
        check_ctx(self, rhs);
        NFElement {
            ctx: self.ctx.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &NFElement {
    type Output = NFElement;
    fn mul(self, rhs: &NFElement) -> NFElement {
        check_ctx(self, rhs);
        if self.ctx.is_rational() {
            return NFElement {
                ctx: self.ctx.clone(),
                coords: vec![&self.coords[0] * &rhs.coords[0]],
            };
        }
        NFElement::from_poly(self.ctx.clone(), &(&self.to_poly() * &rhs.to_poly()))
    }
}

impl Neg for &NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        NFElement {
            ctx: self.ctx.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// Field operations on a number field, for the generic linear algebra.
#[derive(Clone, Debug)]
pub struct NumberFieldOps(pub Arc<NumberFieldCtx>);

impl Field for NumberFieldOps {
    type E = NFElement;
    fn zero(&self) -> NFElement {
        NFElement::zero(self.0.clone())
    }
    fn one(&self) -> NFElement {
        NFElement::one(self.0.clone())
    }
    fn add(&self, a: &NFElement, b: &NFElement) -> NFElement {
        a + b
    }
    fn sub(&self, a: &NFElement, b: &NFElement) -> NFElement {
        a - b
    }
    fn mul(&self, a: &NFElement, b: &NFElement) -> NFElement {
        a * b
    }
    fn inv(&self, a: &NFElement) -> Option<NFElement> {
        a.inv().ok()
    }
    fn is_zero(&self, a: &NFElement) -> bool {
        a.is_zero()
    }
}

/// A prime above `ell`, given by an irreducible factor of the defining
/// polynomial mod `ell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdealData {
    pub ell: u64,
    /// Monic irreducible factor over `Z/ell`, constant term first.
    pub factor: Vec<u64>,
    pub e: u32,
    pub f: u32,
    pub residue: Arc<ResidueField>,
    /// Set when the defining polynomial is not squarefree mod `ell` and
    /// `ell^2` divides its discriminant: `Z[theta]` may then fail to be
    /// maximal at `ell`, and `e`, `f` are only heuristic.
    pub order_may_be_nonmaximal: bool,
}

impl PrimeIdealData {
    pub fn describe(&self) -> String {
        let mut s = format!(
            "({}, {}) e={} f={}",
            self.ell,
            format_poly_mod(&self.factor),
            self.e,
            self.f
        );
        if self.order_may_be_nonmaximal {
            s.push_str(&format!(
                " [order may be non-maximal at {}; e/f heuristic]",
                self.ell
            ));
        }
        s
    }
}

pub fn primes_above(ctx: &Arc<NumberFieldCtx>, ell: u64) -> Result<Vec<PrimeIdealData>> {
    let factors = factor_poly_mod(&ctx.minpoly, ell)?;
    let squarefree = factors.iter().all(|(_, e)| *e == 1);
    let flagged = !squarefree && {
        let disc = ctx.discriminant();
        let ell2 = BigInt::from(ell) * BigInt::from(ell);
        disc.is_zero() || (disc.abs() % ell2).is_zero()
    };
    factors
        .into_iter()
        .map(|(factor, e)| {
            let residue = Arc::new(ResidueField::new(ell, factor.clone())?);
            Ok(PrimeIdealData {
                ell,
                f: (factor.len() - 1) as u32,
                factor,
                e,
                residue,
                order_may_be_nonmaximal: flagged,
            })
        })
        .collect()
}

/// Image of `a` in the residue field of `prime`: `theta` maps to the class
/// of `x` modulo the prime's factor.
pub fn reduce_mod(a: &NFElement, prime: &PrimeIdealData) -> Result<FFElement> {
    let red: Vec<u64> = a
        .coords
        .iter()
        .map(|c| reduce_rational(c, prime.ell))
        .collect::<Result<_>>()?;
    Ok(FFElement::new(prime.residue.clone(), &red))
}

/// True iff `a` and `b` coincide under some embeddings of their residue
/// fields into a common extension of `F_ell`; equivalently, iff they have
/// the same minimal polynomial over `F_ell`.
pub fn residue_match(a: &FFElement, b: &FFElement) -> Result<bool> {
    if a.field().ell() != b.field().ell() {
        return invalid(format!(
            "residues over different primes {} and {}",
            a.field().ell(),
            b.field().ell()
        ));
    }
    Ok(a.minimal_polynomial() == b.minimal_polynomial())
}

/// All embeddings `src -> dst` over `F_ell`, as images of the generator of
/// `src`. Empty when `deg src` does not divide `deg dst`.
pub fn embeddings(src: &ResidueField, dst: &Arc<ResidueField>) -> Result<Vec<FFElement>> {
    if src.ell() != dst.ell() {
        return invalid("embedding between fields of different characteristic");
    }
    let lifted: Vec<Vec<u64>> = src
        .modulus()
        .iter()
        .map(|&c| dst.reduce_poly(&[c]))
        .collect();
    Ok(ffpoly::roots(&**dst, &lifted)
        .into_iter()
        .map(|r| FFElement::from_repr(dst.clone(), r))
        .collect())
}

/// The standard field `F_{ell^L}` with `L = lcm` of the given degrees.
pub fn common_extension(ell: u64, degrees: &[u32]) -> Result<Arc<ResidueField>> {
    let l = degrees.iter().fold(1u32, |acc, &d| acc.lcm(&d));
    Ok(Arc::new(ResidueField::standard(ell, l)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::finite_field::FiniteField;
    use crate::exactmath::rational::rat;
    use proptest::prelude::*;

    fn field(c: &[i64]) -> Arc<NumberFieldCtx> {
        NumberFieldCtx::new(PolyOverQ::from_ints(c.iter().copied())).unwrap()
    }

    #[test]
    fn construction_rejects_reducible() {
        assert!(NumberFieldCtx::new(PolyOverQ::from_ints([-1, 0, 1])).is_err());
        assert!(NumberFieldCtx::new(PolyOverQ::from_ints([1, 0, 2])).is_err());
        assert_eq!(field(&[-5, 0, 1]).discriminant(), BigInt::from(20));
    }

    #[test]
    fn prime_splitting() {
        let k = field(&[-5, 0, 1]);
        let p11 = primes_above(&k, 11).unwrap();
        assert_eq!(p11.len(), 2);
        assert!(p11.iter().all(|p| p.e == 1 && p.f == 1));
        let p3 = primes_above(&k, 3).unwrap();
        assert_eq!((p3.len(), p3[0].e, p3[0].f), (1, 1, 2));
        assert_eq!(p3[0].residue.order(), 9u32.into());
        let p5 = primes_above(&k, 5).unwrap();
        assert_eq!(
            (p5[0].e, p5[0].f, p5[0].order_may_be_nonmaximal),
            (2, 1, false)
        );
        // ell = 2 divides disc 20 to the second power: flagged
        let p2 = primes_above(&k, 2).unwrap();
        assert!(p2[0].order_may_be_nonmaximal);
        let q = NumberFieldCtx::rationals();
        let pq = primes_above(&q, 691).unwrap();
        assert_eq!((pq.len(), pq[0].e, pq[0].f), (1, 1, 1));
    }

    #[test]
    fn ef_sum_to_degree() {
        let k = field(&[-98304, -2048, 24, 1]);
        for ell in [3u64, 5, 7, 11, 13, 691] {
            let ps = primes_above(&k, ell).unwrap();
            assert_eq!(ps.iter().map(|p| p.e * p.f).sum::<u32>(), 3);
        }
    }

    #[test]
    fn reduction_examples() {
        let k = field(&[-5, 0, 1]);
        let theta = NFElement::generator(k.clone());
        let p11 = primes_above(&k, 11).unwrap();
        let over4 = p11.iter().find(|p| p.factor == vec![7, 1]).unwrap();
        assert_eq!(reduce_mod(&theta, over4).unwrap().as_prime_field(), Some(4));
        let p3 = &primes_above(&k, 3).unwrap()[0];
        let r = reduce_mod(&theta, p3).unwrap();
        assert_eq!(r.repr(), &[0, 1]);
        let n = NFElement::from_int(k.clone(), 23);
        assert_eq!(reduce_mod(&n, over4).unwrap().as_prime_field(), Some(1));
        let bad = NFElement::from_rational(k, rat(1, 11));
        assert_eq!(reduce_mod(&bad, over4), Err(Error::NotIntegral { ell: 11 }));
    }

    #[test]
    fn residue_match_examples() {
        let f7 = Arc::new(ResidueField::prime(7).unwrap());
        let five = FFElement::from_i64(f7.clone(), 5);
        assert!(residue_match(&five, &five).unwrap());
        assert!(!residue_match(
            &FFElement::from_i64(f7.clone(), 1),
            &FFElement::from_i64(f7.clone(), 2)
        )
        .unwrap());
        // square roots of 2 in two presentations of F_9
        let k1 = Arc::new(ResidueField::new(3, vec![1, 0, 1]).unwrap()); // x^2 = -1
        let k2 = Arc::new(ResidueField::new(3, vec![2, 1, 1]).unwrap()); // x^2 + x + 2
        let sqrt2 = |k: &Arc<ResidueField>| {
            k.elements()
                .map(|e| FFElement::from_repr(k.clone(), e))
                .find(|e| (e * e) == FFElement::from_i64(k.clone(), 2))
                .unwrap()
        };
        let (a, b) = (sqrt2(&k1), sqrt2(&k2));
        assert!(residue_match(&a, &b).unwrap());
        assert!(residue_match(&a.frobenius(), &b).unwrap());
        let f5 = Arc::new(ResidueField::prime(5).unwrap());
        assert!(residue_match(&five, &FFElement::from_i64(f5, 0)).is_err());
    }

    #[test]
    fn embeddings_count() {
        let f4 = ResidueField::standard(2, 2).unwrap();
        let f16 = Arc::new(ResidueField::standard(2, 4).unwrap());
        assert_eq!(embeddings(&f4, &f16).unwrap().len(), 2);
        let f8 = ResidueField::standard(2, 3).unwrap();
        assert!(embeddings(&f8, &f16).unwrap().is_empty());
        let big = common_extension(2, &[2, 3]).unwrap();
        assert_eq!(big.degree(), 6);
    }

    fn arb_element(k: Arc<NumberFieldCtx>) -> impl Strategy<Value = NFElement> {
        let n = k.degree();
        prop::collection::vec((-30i64..30, prop::sample::select(vec![1i64, 2, 4])), n).prop_map(
            move |v| {
                NFElement::from_coords(k.clone(), v.into_iter().map(|(a, b)| rat(a, b)).collect())
                    .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(k in Just(field(&[-1, -1, 0, 1])).prop_flat_map(|k| (arb_element(k.clone()), arb_element(k.clone()), arb_element(k)))) {
            let (a, b, c) = k;
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
                prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
            }
        }

        #[test]
        fn reduction_is_a_ring_homomorphism(
            pair in Just(field(&[-5, 0, 1])).prop_flat_map(|k| (arb_element(k.clone()), arb_element(k))),
            li in 0usize..3,
        ) {
            let (a, b) = pair;
            let ell = [11u64, 3, 7][li];
            for p in primes_above(a.ctx(), ell).unwrap() {
                let (ra, rb) = (reduce_mod(&a, &p).unwrap(), reduce_mod(&b, &p).unwrap());
                prop_assert_eq!(reduce_mod(&(&a + &b), &p).unwrap(), &ra + &rb);
                prop_assert_eq!(reduce_mod(&(&a * &b), &p).unwrap(), &ra * &rb);
            }
        }

        #[test]
        fn residue_match_symmetry(n in -1000i64..1000, m in -1000i64..1000) {
            let k = field(&[-5, 0, 1]);
            for ell in [11u64, 3] {
                let ps = primes_above(&k, ell).unwrap();
                for p1 in &ps {
                    for p2 in &ps {
                        let a = reduce_mod(&NFElement::from_int(k.clone(), n), p1).unwrap();
                        let b = reduce_mod(&NFElement::from_int(k.clone(), n), p2).unwrap();
                        prop_assert!(residue_match(&a, &b).unwrap());
                        let c = reduce_mod(&NFElement::from_int(k.clone(), m), p2).unwrap();
                        prop_assert_eq!(residue_match(&a, &c).unwrap(), residue_match(&c, &a).unwrap());
                        prop_assert_eq!(residue_match(&a.frobenius(), &c).unwrap(), residue_match(&a, &c).unwrap());
                    }
                }
            }
        }
    }
}
