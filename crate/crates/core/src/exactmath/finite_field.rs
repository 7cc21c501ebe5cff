//! Finite fields `F_ell` and `F_{ell^f} = F_ell[x]/(m(x))`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::ffpoly;
use super::integer::{is_prime, mul_mod, pow_mod};
use crate::error::{invalid, Error, Result};

/// Arithmetic of a finite field, with elements of type `Elem`.
pub trait FiniteField {
    type Elem: Clone + Eq + Ord + fmt::Debug;

    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn extension_degree(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_u64(&self, n: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.extension_degree())
    }

    #[allow(clippy::wrong_self_convention)]
    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        let p = BigInt::from(self.characteristic());
        let r = n
            .mod_floor(&p)
            .to_u64()
            .expect("reduced below characteristic");
        self.from_u64(r)
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let e = self.order() - BigUint::from(2u32);
        Some(self.pow(a, &e))
    }
}

/// The prime field `Z/pZ` on machine words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn extension_degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| pow_mod(*a, self.p - 2, self.p))
    }
}

/// The residue field `F_ell[x]/(modulus)` of a prime above `ell`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueField {
    base: u64,
    modulus: Vec<u64>,
}

impl ResidueField {
    /// Field defined by a monic irreducible `modulus` over `F_ell`, given low
    /// degree first. Irreducibility is verified.
    pub fn new(ell: u64, modulus: Vec<u64>) -> Result<Self> {
        let fp = PrimeField::new(ell)?;
        let m: Vec<u64> = modulus.iter().map(|c| c % ell).collect();
        let m = ffpoly::trimmed(&fp, m);
        if m.len() < 2 || m.last() != Some(&1) {
            return invalid("residue field modulus must be monic of positive degree");
        }
        if !ffpoly::is_irreducible(&fp, &m) {
            return invalid(format!("modulus {m:?} is reducible over F_{ell}"));
        }
        Ok(ResidueField {
            base: ell,
            modulus: m,
        })
    }

    /// `F_ell` presented with modulus `x`.
    pub fn prime(ell: u64) -> Result<Self> {
        Self::new(ell, vec![0, 1])
    }

    /// `F_{ell^f}` with the smallest irreducible monic modulus in
    /// lexicographic order of (constant, linear, ...) coefficients.
    pub fn standard(ell: u64, f: u32) -> Result<Self> {
        if f == 0 {
            return invalid("extension degree must be positive");
        }
        if f == 1 {
            return Self::prime(ell);
        }
        let fp = PrimeField::new(ell)?;
        let f = f as usize;
        let mut digits = vec![0u64; f];
        loop {
            let mut cand = digits.clone();
            cand.push(1);
            if digits[0] != 0 && ffpoly::is_irreducible(&fp, &cand) {
                return Ok(ResidueField {
                    base: ell,
                    modulus: cand,
                });
            }
            // increment base-ell counter
            let mut i = 0;
            loop {
                if i == f {
                    return Err(Error::Internal(format!(
                        "no irreducible polynomial of degree {f} over F_{ell}"
                    )));
                }
                digits[i] += 1;
                if digits[i] < ell {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    pub fn ell(&self) -> u64 {
        self.base
    }

    pub fn degree(&self) -> u32 {
        (self.modulus.len() - 1) as u32
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn prime_field(&self) -> PrimeField {
        PrimeField { p: self.base }
    }

    fn width(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Reduce an arbitrary polynomial over `F_ell` into the field.
    pub fn reduce_poly(&self, poly: &[u64]) -> Vec<u64> {
        let fp = self.prime_field();
        let p: Vec<u64> = poly.iter().map(|c| c % self.base).collect();
        let r = ffpoly::rem(&fp, &ffpoly::trimmed(&fp, p), &self.modulus);
        let mut out = r;
        out.resize(self.width(), 0);
        out
    }

    /// Class of `x`, the root of the modulus.
    pub fn generator(&self) -> Vec<u64> {
        self.reduce_poly(&[0, 1])
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let n = self
            .order()
            .to_u64()
            .expect("field small enough to enumerate");
        let w = self.width();
        let ell = self.base;
        (0..n).map(move |mut i| {
            let mut v = vec![0u64; w];
            for slot in v.iter_mut() {
                *slot = i % ell;
                i /= ell;
            }
            v
        })
    }
}

impl FiniteField for ResidueField {
    type Elem = Vec<u64>;

    fn characteristic(&self) -> u64 {
        self.base
    }
    fn extension_degree(&self) -> u32 {
        self.degree()
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.width()]
    }
    fn one(&self) -> Vec<u64> {
        self.from_u64(1)
    }
    fn from_u64(&self, n: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = n % self.base;
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let fp = self.prime_field();
        a.iter().zip(b).map(|(x, y)| fp.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let fp = self.prime_field();
        a.iter().zip(b).map(|(x, y)| fp.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let fp = self.prime_field();
        a.iter().map(|x| fp.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        if self.width() == 1 {
            return vec![mul_mod(a[0], b[0], self.base)];
        }
        let fp = self.prime_field();
        let prod = ffpoly::mul(
            &fp,
            &ffpoly::trimmed(&fp, a.clone()),
            &ffpoly::trimmed(&fp, b.clone()),
        );
        let mut r = ffpoly::rem(&fp, &prod, &self.modulus);
        r.resize(self.width(), 0);
        r
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn random<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.width())
            .map(|_| rng.gen_range(0..self.base))
            .collect()
    }
}

/// Element of a residue field, carrying its field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFElement {
    field: Arc<ResidueField>,
    repr: Vec<u64>,
}

impl FFElement {
    pub fn new(field: Arc<ResidueField>, poly: &[u64]) -> Self {
        let repr = field.reduce_poly(poly);
        FFElement { field, repr }
    }

    pub fn from_int(field: Arc<ResidueField>, n: &BigInt) -> Self {
        let repr = field.from_bigint(n);
        FFElement { field, repr }
    }

    pub fn from_i64(field: Arc<ResidueField>, n: i64) -> Self {
        Self::from_int(field, &BigInt::from(n))
    }

    pub fn zero(field: Arc<ResidueField>) -> Self {
        let repr = field.zero();
        FFElement { field, repr }
    }

    pub fn one(field: Arc<ResidueField>) -> Self {
        let repr = field.one();
        FFElement { field, repr }
    }

    pub fn generator(field: Arc<ResidueField>) -> Self {
        let repr = field.generator();
        FFElement { field, repr }
    }

    pub fn from_repr(field: Arc<ResidueField>, repr: Vec<u64>) -> Self {
        debug_assert_eq!(repr.len(), field.width());
        FFElement { field, repr }
    }

    pub fn field(&self) -> &Arc<ResidueField> {
        &self.field
    }

    pub fn repr(&self) -> &[u64] {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.repr)
    }

    pub fn is_one(&self) -> bool {
        self.repr == self.field.one()
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        FFElement {
            field: self.field.clone(),
            repr: self.field.pow(&self.repr, e),
        }
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        self.pow(&BigUint::from(e))
    }

    pub fn inv(&self) -> Result<Self> {
        let repr = self.field.inv(&self.repr).ok_or(Error::DivisionByZero)?;
        Ok(FFElement {
            field: self.field.clone(),
            repr,
        })
    }

    /// Frobenius `x -> x^ell`.
    pub fn frobenius(&self) -> Self {
        self.pow_u64(self.field.ell())
    }

    /// The distinct Frobenius conjugates `a, a^ell, a^(ell^2), ...`.
    pub fn conjugates(&self) -> Vec<FFElement> {
        let mut out = vec![self.clone()];
        let mut cur = self.frobenius();
        while cur != *self {
            out.push(cur.clone());
            cur = cur.frobenius();
        }
        out
    }

    /// Minimal polynomial over `F_ell`, monic, low degree first.
    pub fn minimal_polynomial(&self) -> Vec<u64> {
        let field = &*self.field;
        let mut poly: Vec<Vec<u64>> = vec![field.one()];
        for c in self.conjugates() {
            // poly *= (x - c)
            let mut next = vec![field.zero(); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i + 1] = field.add(&next[i + 1], a);
                next[i] = field.sub(&next[i], &field.mul(a, &c.repr));
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                debug_assert!(c[1..].iter().all(|&v| v == 0));
                c[0]
            })
            .collect()
    }

    /// Image under the field map sending the generator of this element's
    /// field to `image_of_generator`.
    pub fn map_via(&self, image_of_generator: &FFElement) -> FFElement {
        let target = image_of_generator.field.clone();
        let mut acc = FFElement::zero(target.clone());
        for &c in self.repr.iter().rev() {
            acc = &(&acc * image_of_generator)
                + &FFElement::from_int(target.clone(), &BigInt::from(c));
        }
        acc
    }

    /// The value as an integer when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.repr[1..].iter().all(|&c| c == 0).then(|| self.repr[0])
    }
}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_prime_field() {
            return write!(f, "{v}");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.repr.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}*t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{c}*t^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FFElement({self} in F_{}^{})",
            self.field.ell(),
            self.field.degree()
        )
    }
}

fn same_field(a: &FFElement, b: &FFElement) {
    assert!(
        Arc::ptr_eq(&a.field, &b.field) || a.field == b.field,
        "finite field elements from different fields"
    );
}

impl Add for &FFElement {
    type Output = FFElement;
    fn add(self, rhs: &FFElement) -> FFElement {
        same_field(self, rhs);
        FFElement {
            field: self.field.clone(),
            repr: self.field.add(&self.repr, &rhs.repr),
        }
    }
}

impl Sub for &FFElement {
    type Output = FFElement;
    fn sub(self, rhs: &FFElement) -> FFElement {
        same_field(self, rhs);
        FFElement {
            field: self.field.clone(),
            repr: self.field.sub(&self.repr, &rhs.repr),
        }
    }
}

impl Mul for &FFElement {
    type Output = FFElement;
    fn mul(self, rhs: &FFElement) -> FFElement {
        same_field(self, rhs);
        FFElement {
            field: self.field.clone(),
            repr: self.field.mul(&self.repr, &rhs.repr),
        }
    }
}

impl Neg for &FFElement {
    type Output = FFElement;
    fn neg(self) -> FFElement {
        FFElement {
            field: self.field.clone(),
            repr: self.field.neg(&self.repr),
        }
    }
}

/// True iff `base^exp = 1` in `field`. `embed`, when given, is the image of
/// `base` in the field and must agree with the reduction of `base`.
pub fn ff_pow_is_one(
    base: i64,
    exp: u64,
    field: &Arc<ResidueField>,
    embed: Option<&FFElement>,
) -> Result<bool> {
    let b = FFElement::from_i64(field.clone(), base);
    if let Some(e) = embed {
        if *e != b {
            return invalid(format!(
                "embedding {e} does not match {base} mod {}",
                field.ell()
            ));
        }
    }
    if b.is_zero() {
        return invalid(format!(
            "{base} vanishes in F_{}^{}",
            field.ell(),
            field.degree()
        ));
    }
    Ok(b.pow_u64(exp).is_one())
}
