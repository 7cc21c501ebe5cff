//! Dense polynomials over a finite field and their factorization.
//!
//! Polynomials are `Vec<F::Elem>`, lowest degree first, with no trailing
//! zeros; the zero polynomial is the empty vector. Factorization runs
//! squarefree decomposition, distinct-degree splitting and Cantor-Zassenhaus
//! with a fixed-seed generator, so results are reproducible.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::finite_field::FiniteField;

pub type FPoly<F> = Vec<<F as FiniteField>::Elem>;

pub fn trimmed<F: FiniteField>(f: &F, mut p: FPoly<F>) -> FPoly<F> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn degree<F: FiniteField>(p: &FPoly<F>) -> Option<usize> {
    p.len().checked_sub(1)
}

fn is_one<F: FiniteField>(f: &F, p: &FPoly<F>) -> bool {
    p.len() == 1 && p[0] == f.one()
}

pub fn add<F: FiniteField>(f: &F, a: &FPoly<F>, b: &FPoly<F>) -> FPoly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(f, out)
}

pub fn sub<F: FiniteField>(f: &F, a: &FPoly<F>, b: &FPoly<F>) -> FPoly<F> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(f, out)
}

pub fn scale<F: FiniteField>(f: &F, a: &FPoly<F>, c: &F::Elem) -> FPoly<F> {
    trimmed(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: FiniteField>(f: &F, a: &FPoly<F>, b: &FPoly<F>) -> FPoly<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trimmed(f, out)
}

/// Quotient and remainder; panics on a zero divisor.
pub fn div_rem<F: FiniteField>(f: &F, a: &FPoly<F>, b: &FPoly<F>) -> (FPoly<F>, FPoly<F>) {
    let db = degree::<F>(b).expect("division by zero polynomial");
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv_lc = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut rem = a.clone();
    let mut quot = vec![f.zero(); a.len() - db];
    for i in (0..a.len() - db).rev() {
        let c = f.mul(&rem[i + db], &inv_lc);
        if f.is_zero(&c) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            rem[i + j] = f.sub(&rem[i + j], &f.mul(&c, y));
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (trimmed(f, quot), trimmed(f, rem))
}

pub fn rem<F: FiniteField>(f: &F, a: &FPoly<F>, b: &FPoly<F>) -> FPoly<F> {
    div_rem(f, a, b).1
}

pub fn monic<F: FiniteField>(f: &F, a: &FPoly<F>) -> FPoly<F> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(f, a, &f.inv(lc).expect("nonzero")),
    }
}

/// Monic gcd.
pub fn gcd<F: FiniteField>(f: &F, a: &FPoly<F>, b: &FPoly<F>) -> FPoly<F> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = std::mem::replace(&mut b, r);
    }
    monic(f, &a)
}

pub fn derivative<F: FiniteField>(f: &F, a: &FPoly<F>) -> FPoly<F> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &f.from_u64(i as u64 % f.characteristic())))
        .collect();
    trimmed(f, out)
}

pub fn eval<F: FiniteField>(f: &F, a: &FPoly<F>, x: &F::Elem) -> F::Elem {
    a.iter()
        .rev()
        .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// `base^e mod m`.
pub fn pow_mod<F: FiniteField>(f: &F, base: &FPoly<F>, e: &BigUint, m: &FPoly<F>) -> FPoly<F> {
    let base = rem(f, base, m);
    let mut acc = rem(f, &vec![f.one()], m);
    for i in (0..e.bits()).rev() {
        acc = rem(f, &mul(f, &acc, &acc), m);
        if e.bit(i) {
            acc = rem(f, &mul(f, &acc, &base), m);
        }
    }
    acc
}

fn x_poly<F: FiniteField>(f: &F) -> FPoly<F> {
    vec![f.zero(), f.one()]
}

/// Rabin's test: `m` of degree `n` is irreducible iff `x^(q^n) = x mod m`
/// and `gcd(x^(q^(n/r)) - x, m) = 1` for each prime `r | n`.
pub fn is_irreducible<F: FiniteField>(f: &F, m: &FPoly<F>) -> bool {
    let Some(n) = degree::<F>(m) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let q = f.order();
    let x = x_poly(f);
    // frob[i] = x^(q^i) mod m
    let mut frob = vec![rem(f, &x, m)];
    for i in 1..=n {
        let next = pow_mod(f, &frob[i - 1], &q, m);
        frob.push(next);
    }
    if !sub(f, &frob[n], &rem(f, &x, m)).is_empty() {
        return false;
    }
    for (r, _) in super::integer::factor_u64(n as u64) {
        let k = n / r as usize;
        let g = gcd(f, &sub(f, &frob[k], &x), m);
        if !is_one(f, &g) {
            return false;
        }
    }
    true
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with
/// `a = prod g^e` and each `g` squarefree.
pub fn squarefree<F: FiniteField>(f: &F, a: &FPoly<F>) -> Vec<(FPoly<F>, u32)> {
    let mut out = Vec::new();
    if degree::<F>(a).unwrap_or(0) == 0 {
        return out;
    }
    let a = monic(f, a);
    let p = f.characteristic();
    let mut c = gcd(f, &a, &derivative(f, &a));
    let mut w = div_rem(f, &a, &c).0;
    let mut i = 1u32;
    while !is_one(f, &w) {
        let y = gcd(f, &w, &c);
        let fac = div_rem(f, &w, &y).0;
        if !is_one(f, &fac) {
            out.push((fac, i));
        }
        w = y.clone();
        c = div_rem(f, &c, &y).0;
        i += 1;
    }
    if !is_one(f, &c) {
        // c is a p-th power: take p-th roots of the coefficients
        let root_exp = f.order() / BigUint::from(p);
        let root: FPoly<F> = c
            .iter()
            .step_by(p as usize)
            .map(|x| f.pow(x, &root_exp))
            .collect();
        for (g, e) in squarefree(f, &root) {
            out.push((g, e * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree<F: FiniteField>(f: &F, a: &FPoly<F>) -> Vec<(FPoly<F>, usize)> {
    let q = f.order();
    let x = x_poly(f);
    let mut out = Vec::new();
    let mut rest = a.clone();
    let mut h = rem(f, &x, &rest);
    let mut d = 0;
    while degree::<F>(&rest).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = pow_mod(f, &h, &q, &rest);
        let g = gcd(f, &sub(f, &h, &x), &rest);
        if !is_one(f, &g) {
            rest = div_rem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
    }
    if degree::<F>(&rest).unwrap_or(0) > 0 {
        let d = degree::<F>(&rest).unwrap();
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus splitting of a monic squarefree product of degree-`d`
/// irreducibles.
pub fn equal_degree<F: FiniteField>(
    f: &F,
    a: &FPoly<F>,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<FPoly<F>> {
    let n = degree::<F>(a).unwrap_or(0);
    if n <= d {
        return vec![a.clone()];
    }
    let q = f.order();
    let qd = q.pow(d as u32);
    let even = f.characteristic() == 2;
    loop {
        let r: FPoly<F> = trimmed(f, (0..n).map(|_| f.random(rng)).collect());
        if degree::<F>(&r).unwrap_or(0) == 0 {
            continue;
        }
        let b = if even {
            // absolute trace map sum r^(2^i), i < log2(q^d)
            let bits = qd.bits() - 1;
            let mut t = rem(f, &r, a);
            let mut acc = t.clone();
            for _ in 1..bits {
                t = rem(f, &mul(f, &t, &t), a);
                acc = add(f, &acc, &t);
            }
            acc
        } else {
            let e = (&qd - BigUint::one()) / BigUint::from(2u32);
            sub(f, &pow_mod(f, &r, &e, a), &vec![f.one()])
        };
        let g = gcd(f, &b, a);
        let dg = degree::<F>(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = div_rem(f, a, &g).0;
            let mut out = equal_degree(f, &g, d, rng);
            out.extend(equal_degree(f, &monic(f, &h), d, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree then coefficients (highest first).
pub fn factor<F: FiniteField>(f: &F, a: &FPoly<F>) -> Vec<(FPoly<F>, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut out = Vec::new();
    for (g, e) in squarefree(f, a) {
        for (h, d) in distinct_degree(f, &g) {
            for irr in equal_degree(f, &h, d, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().rev().cmp(b.iter().rev()))
    });
    out
}

/// Distinct roots in the field, sorted.
pub fn roots<F: FiniteField>(f: &F, a: &FPoly<F>) -> Vec<F::Elem> {
    if degree::<F>(a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0007_0075);
    let a = monic(f, a);
    let q = f.order();
    let x = x_poly(f);
    // product of the distinct linear factors
    let h = pow_mod(f, &x, &q, &a);
    let lin = gcd(f, &sub(f, &h, &x), &a);
    if degree::<F>(&lin).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out: Vec<F::Elem> = equal_degree(f, &lin, 1, &mut rng)
        .into_iter()
        .map(|l| f.neg(&l[0]))
        .collect();
    out.sort();
    out
}
