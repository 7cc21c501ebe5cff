//! Factorization of rational polynomials, modulo a prime and over Q.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::ffpoly;
use super::finite_field::PrimeField;
use super::integer::primes_up_to;
use super::poly::PolyOverQ;
use super::rational::{reduce_mod, ExactRational};
use crate::error::{invalid, Error, Result};

/// Largest degree accepted by [`factor_poly_rational`].
pub const MAX_RATIONAL_FACTOR_DEGREE: usize = 16;

/// Reduce a polynomial with `ell`-integral coefficients into `Z/ell`.
pub fn reduce_poly_mod(p: &PolyOverQ, ell: u64) -> Result<Vec<u64>> {
    p.coeffs().iter().map(|c| reduce_mod(c, ell)).collect()
}

/// Factor `p mod ell` into monic irreducibles, ordered by degree and then
/// lexicographically on coefficient lists (constant term first).
pub fn factor_poly_mod(p: &PolyOverQ, ell: u64) -> Result<Vec<(Vec<u64>, u32)>> {
    let fp = PrimeField::new(ell)?;
    if p.is_zero() {
        return invalid("cannot factor the zero polynomial");
    }
    let red = reduce_poly_mod(p, ell)?;
    if red.last() == Some(&0) {
        return Err(Error::BadReduction { ell });
    }
    let mut out = ffpoly::factor(&fp, &red);
    out.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Render a polynomial over `Z/ell`, e.g. `x^2 + 1`, with coefficients in `[0, ell)`.
pub fn format_poly_mod(coeffs: &[u64]) -> String {
    PolyOverQ::from_ints(coeffs.iter().copied()).to_string()
}

/// Factorization of a nonzero rational polynomial as `unit * prod g^e`
/// with each `g` monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFactorization {
    pub unit: ExactRational,
    pub factors: Vec<(PolyOverQ, u32)>,
}

impl RationalFactorization {
    pub fn expand(&self) -> PolyOverQ {
        let mut acc = PolyOverQ::constant(self.unit.clone());
        for (g, e) in &self.factors {
            acc = &acc * &g.pow(*e);
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Factor over Q: squarefree decomposition, modular factorization at the
/// best of several good primes, Hensel lifting past the Mignotte bound and
/// recombination of lifted factors.
pub fn factor_poly_rational(p: &PolyOverQ) -> Result<RationalFactorization> {
    let Some(n) = p.degree() else {
        return invalid("cannot factor the zero polynomial");
    };
    if n > MAX_RATIONAL_FACTOR_DEGREE {
        return Err(Error::Unsupported(format!(
            "rational factorization of degree {n} exceeds {MAX_RATIONAL_FACTOR_DEGREE}"
        )));
    }
    let unit = p.leading();
    let mut factors = Vec::new();
    for (g, e) in squarefree_q(&p.monic()) {
        for h in factor_squarefree_q(&g) {
            factors.push((h, e));
        }
    }
    factors.sort_by(|(a, _), (b, _)| a.lex_cmp(b));
    Ok(RationalFactorization { unit, factors })
}

/// Yun's squarefree decomposition over Q of a monic polynomial.
fn squarefree_q(a: &PolyOverQ) -> Vec<(PolyOverQ, u32)> {
    let mut out = Vec::new();
    if a.degree().unwrap_or(0) == 0 {
        return out;
    }
    let da = a.derivative();
    let mut c = a.gcd(&da);
    let mut w = a.div_rem(&c).unwrap().0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).unwrap().0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(), i));
        }
        w = y.clone();
        c = c.div_rem(&y).unwrap().0;
        i += 1;
    }
    out
}

fn factor_squarefree_q(g: &PolyOverQ) -> Vec<PolyOverQ> {
    let n = g.degree().unwrap();
    if n == 1 {
        return vec![g.monic()];
    }
    let (_, prim) = g.primitive_part();
    let lc = prim[n].clone();
    // monic integral transform G(y) = lc^(n-1) F(y / lc)
    let big: Vec<BigInt> = (0..=n)
        .map(|i| {
            if i == n {
                BigInt::one()
            } else {
                &prim[i] * lc.pow((n - 1 - i) as u32)
            }
        })
        .collect();
    factor_monic_squarefree_z(&big)
        .into_iter()
        .map(|h| {
            // undo the transform: h(lc x), then make monic
            let coeffs: Vec<ExactRational> = h
                .iter()
                .enumerate()
                .map(|(i, c)| BigRational::from_integer(c * lc.pow(i as u32)))
                .collect();
            PolyOverQ::new(coeffs).monic()
        })
        .collect()
}

type ZPoly = Vec<BigInt>;

fn ztrim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

/// Division by a monic polynomial over Z.
fn zdivrem_monic(a: &ZPoly, b: &ZPoly) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let mut rem = a.clone();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..a.len() - db).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= &c * y;
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (ztrim(quot), ztrim(rem))
}

fn to_z(p: &[u64]) -> ZPoly {
    ztrim(p.iter().map(|&c| BigInt::from(c)).collect())
}

fn to_fp(p: &ZPoly, ell: u64) -> Vec<u64> {
    let m = BigInt::from(ell);
    let fp = PrimeField::new(ell).unwrap();
    ffpoly::trimmed(
        &fp,
        p.iter()
            .map(|c| c.mod_floor(&m).to_u64().unwrap())
            .collect(),
    )
}

/// Extended gcd over `F_ell`: `(s, t)` with `s a + t b = 1`.
fn ext_gcd_fp(fp: &PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = ffpoly::div_rem(fp, &r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = ffpoly::sub(fp, &s0, &ffpoly::mul(fp, &q, &s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = ffpoly::sub(fp, &t0, &ffpoly::mul(fp, &q, &t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    use super::finite_field::FiniteField;
    let inv = fp.inv(&r0[0]).expect("coprime inputs");
    (ffpoly::scale(fp, &s0, &inv), ffpoly::scale(fp, &t0, &inv))
}

/// Lift `f = g h mod ell` (all monic, `g`, `h` coprime) to `f = g* h* mod m`
/// where `m = ell^(2^k) >= bound`. Returns the lifted pair and the modulus.
fn hensel_pair(
    f: &ZPoly,
    g: &[u64],
    h: &[u64],
    ell: u64,
    bound: &BigInt,
) -> (ZPoly, ZPoly, BigInt) {
    let fp = PrimeField::new(ell).unwrap();
    let (s, t) = ext_gcd_fp(&fp, g, h);
    let (mut g, mut h, mut s, mut t) = (to_z(g), to_z(h), to_z(&s), to_z(&t));
    let mut m = BigInt::from(ell);
    while &m < bound {
        let m2 = &m * &m;
        let e = zmod(&zsub(f, &zmul(&g, &h)), &m2);
        let (q, r) = zdivrem_monic(&zmod(&zmul(&s, &e), &m2), &h);
        let q = zmod(&q, &m2);
        let r = zmod(&r, &m2);
        let g2 = zmod(&zadd(&zadd(&g, &zmul(&t, &e)), &zmul(&q, &g)), &m2);
        let h2 = zmod(&zadd(&h, &r), &m2);
        let b = zmod(
            &zsub(&zadd(&zmul(&s, &g2), &zmul(&t, &h2)), &vec![BigInt::one()]),
            &m2,
        );
        let (c, d) = zdivrem_monic(&zmod(&zmul(&s, &b), &m2), &h2);
        let s2 = zmod(&zsub(&s, &d), &m2);
        let t2 = zmod(&zsub(&zsub(&t, &zmul(&t, &b)), &zmul(&c, &g2)), &m2);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = m2;
    }
    (g, h, m)
}

/// Lift a full modular factorization of monic `f` to precision `>= bound`.
fn hensel_multi(f: &ZPoly, parts: &[Vec<u64>], ell: u64, bound: &BigInt) -> (Vec<ZPoly>, BigInt) {
    if parts.len() == 1 {
        let mut m = BigInt::from(ell);
        while &m < bound {
            m = &m * &m;
        }
        return (vec![zmod(f, &m)], m);
    }
    let fp = PrimeField::new(ell).unwrap();
    let mid = parts.len() / 2;
    let prod = |ps: &[Vec<u64>]| {
        ps.iter()
            .fold(vec![1u64], |acc, p| ffpoly::mul(&fp, &acc, p))
    };
    let g0 = prod(&parts[..mid]);
    let h0 = prod(&parts[mid..]);
    let (g, h, m) = hensel_pair(f, &g0, &h0, ell, bound);
    let (mut left, _) = hensel_multi(&g, &parts[..mid], ell, bound);
    let (right, _) = hensel_multi(&h, &parts[mid..], ell, bound);
    left.extend(right);
    // sub-lifts reach the same ell^(2^k) since the bound is shared
    (left.into_iter().map(|p| zmod(&p, &m)).collect(), m)
}

fn symmetric(p: &ZPoly, m: &BigInt) -> ZPoly {
    let half: BigInt = m >> 1;
    ztrim(
        p.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

fn factor_monic_squarefree_z(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    // choose the good prime with fewest modular factors among the first few
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for ell in primes_up_to(2000).into_iter().skip(1) {
        let fp = PrimeField::new(ell).unwrap();
        let red = to_fp(f, ell);
        if red.len() != n + 1 {
            continue;
        }
        let g = ffpoly::gcd(&fp, &red, &ffpoly::derivative(&fp, &red));
        if g.len() != 1 {
            continue;
        }
        let parts: Vec<Vec<u64>> = ffpoly::factor(&fp, &red)
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        if parts.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| parts.len() < b.len()) {
            best = Some((ell, parts));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (ell, parts) = best.expect("a squarefree polynomial has good primes");

    // Mignotte: coefficients of a factor of degree <= n are at most 2^n |f|_2
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = BigInt::from_biguint(Sign::Plus, norm2.magnitude().sqrt()) + 1;
    let bound = (norm << (n + 1)) + 1;
    let (lifted, m) = hensel_multi(f, &parts, ell, &bound);

    let mut remaining: Vec<ZPoly> = lifted;
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for subset in subsets(remaining.len(), size) {
            let cand = subset.iter().fold(vec![BigInt::one()], |acc, &i| {
                zmod(&zmul(&acc, &remaining[i]), &m)
            });
            let cand = symmetric(&cand, &m);
            let (q, r) = zdivrem_monic(&rest, &cand);
            if r.is_empty() {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, p)| p)
                    .collect();
            }
            None => size += 1,
        }
    }
    found.push(rest);
    found
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}
