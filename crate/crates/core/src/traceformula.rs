//! Eichler-Selberg trace formula for `T_m` on `S_k(Gamma_0(N))`, trivial
//! character, `N` equal to one or a prime, `gcd(m, N) = 1`, even `k >= 4`.
//!
//! The formula is `Tr T_m = A1 + A2 + A3` with
//!
//! * `A1 = m^(k/2-1) (k-1)/12 psi(N)` when `m` is a square,
//! * `A2 = -1/2 sum_{t^2 < 4m} P_k(t, m) sum_f h_w((t^2-4m)/f^2) mu(t, f, m)`,
//! * `A3 = -1/2 sum_{d | m} min(d, m/d)^(k-1) c(N)`,
//!
//! where `P_k(t, m)` is the coefficient of `x^(k-2)` in `1/(1 - t x + m x^2)`,
//! `h_w` is the weighted class number of primitive forms, `c(N)` is the number
//! of cusps and `mu(t, f, m) = psi(N)/psi(N/N_f) #{x mod N : x^2 - t x + m = 0
//! mod N N_f}` with `N_f = gcd(N, f)`. The weight-two correction term is not
//! needed for `k >= 4`. Hurwitz numbers use `H(0) = -1/12`.

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactmath::integer::{divisors, factor_u64, is_prime};
use crate::exactmath::poly::PolyOverQ;
use crate::exactmath::rational::ExactRational;

/// Hurwitz class numbers `H(0..=maxn)`, stored as the integers `12 H(n)`.
#[derive(Clone, Debug)]
pub struct HurwitzTable {
    twelve_h: Vec<i64>,
}

impl HurwitzTable {
    /// Enumerate reduced forms `(a, b, c)`, `|b| <= a <= c`, of discriminant
    /// `b^2 - 4ac >= -maxn`. Multiples of `x^2 + y^2` count 1/2 and multiples
    /// of `x^2 + xy + y^2` count 1/3.
    pub fn new(maxn: usize) -> Self {
        let mut t = vec![0i64; maxn + 1];
        t[0] = -1;
        let n = maxn as i64;
        let mut a = 1i64;
        while 3 * a * a <= n {
            for b in -a..=a {
                // smallest c >= a with 4ac - b^2 > 0
                let mut c = a;
                loop {
                    let disc = 4 * a * c - b * b;
                    if disc > n {
                        break;
                    }
                    let boundary = b.abs() == a || a == c;
                    if !(boundary && b < 0) {
                        let w = if b == 0 && a == c {
                            6
                        } else if b == a && a == c {
                            4
                        } else {
                            12
                        };
                        t[disc as usize] += w;
                    }
                    c += 1;
                }
            }
            a += 1;
        }
        HurwitzTable { twelve_h: t }
    }

    /// Shared table covering at least `0..=maxn`, grown on demand.
    pub fn shared(maxn: usize) -> Arc<HurwitzTable> {
        static CACHE: OnceLock<Mutex<Option<Arc<HurwitzTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(None));
        let mut guard = cache.lock().unwrap();
        if let Some(t) = guard.as_ref() {
            if t.maxn() >= maxn {
                return t.clone();
            }
        }
        let size = maxn.max(guard.as_ref().map_or(0, |t| 2 * t.maxn()));
        let t = Arc::new(HurwitzTable::new(size));
        *guard = Some(t.clone());
        t
    }

    pub fn maxn(&self) -> usize {
        self.twelve_h.len() - 1
    }

    pub fn twelve_h(&self, n: usize) -> i64 {
        self.twelve_h[n]
    }

    pub fn get(&self, n: usize) -> ExactRational {
        BigRational::new(BigInt::from(self.twelve_h[n]), BigInt::from(12))
    }

    /// `12 h_w(n)`: weighted count of primitive reduced forms of
    /// discriminant `-n`, by Moebius inversion of `H(n) = sum_{f^2 | n} h_w(n/f^2)`.
    pub fn twelve_h_primitive(&self, n: usize) -> i64 {
        let mut acc = 0i64;
        let mut f = 1usize;
        while f * f <= n {
            if n.is_multiple_of(f * f) {
                acc += moebius(f as u64) * self.twelve_h[n / (f * f)];
            }
            f += 1;
        }
        acc
    }
}

fn moebius(n: u64) -> i64 {
    let mut s = 1;
    for (_, e) in factor_u64(n) {
        if e > 1 {
            return 0;
        }
        s = -s;
    }
    s
}

/// Hurwitz class number `H(n)`.
pub fn hurwitz(n: usize) -> ExactRational {
    HurwitzTable::shared(n.max(16)).get(n)
}

/// `P_k(t, m)`: coefficient of `x^(k-2)` in `1/(1 - t x + m x^2)`.
pub fn gegenbauer_weight(k: i64, t: i64, m: u64) -> BigInt {
    let (t, m) = (BigInt::from(t), BigInt::from(m));
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for _ in 0..k - 2 {
        let next = &t * &cur - &m * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn psi(n: u64) -> u64 {
    factor_u64(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

fn check_args(k: i64, level: u64, m: u64) -> Result<()> {
    if k < 4 || k % 2 != 0 {
        return invalid(format!("trace formula needs even weight >= 4, got {k}"));
    }
    if m == 0 {
        return invalid("Hecke index must be positive");
    }
    if level != 1 && !is_prime(level) {
        return Err(Error::Unsupported(format!(
            "level {level} is neither 1 nor prime"
        )));
    }
    if num_integer::gcd(m, level) != 1 {
        return Err(Error::Unsupported(format!(
            "not implemented for m sharing factors with N (m = {m}, N = {level})"
        )));
    }
    Ok(())
}

/// Trace of `T_m` on `S_k(Gamma_0(N))`.
pub fn trace_tm(k: i64, level: u64, m: u64) -> Result<ExactRational> {
    check_args(k, level, m)?;
    let table = HurwitzTable::shared(4 * m as usize);
    Ok(trace_with_table(&table, k, level, m))
}

fn trace_with_table(table: &HurwitzTable, k: i64, level: u64, m: u64) -> ExactRational {
    let psi_n = psi(level);
    // everything is accumulated times 24 to stay integral
    let mut acc24 = BigInt::zero();

    let r = m.sqrt();
    if r * r == m {
        // 24 * m^(k/2-1) (k-1)/12 psi(N)
        acc24 +=
            BigInt::from(r).pow((k - 2) as u32) * BigInt::from(2 * (k - 1)) * BigInt::from(psi_n);
    }

    let mut t: i64 = 0;
    while (t * t) < (4 * m) as i64 {
        let n = (4 * m) as i64 - t * t;
        let mut inner12 = BigInt::zero();
        let mut f = 1i64;
        while f * f <= n {
            if n % (f * f) == 0 {
                let hw = table.twelve_h_primitive((n / (f * f)) as usize);
                if hw != 0 {
                    inner12 += BigInt::from(hw) * BigInt::from(mu(level, psi_n, t, f as u64, m));
                }
            }
            f += 1;
        }
        if !inner12.is_zero() {
            let mult = if t == 0 { 1 } else { 2 };
            // P_k(-t, m) = P_k(t, m) for even k
            let contrib = gegenbauer_weight(k, t, m) * inner12 * mult;
            // -1/2 * (inner12 / 12) * 24 = -inner12
            acc24 -= contrib;
        }
        t += 1;
    }

    let cusps: i64 = if level == 1 { 1 } else { 2 };
    let mut a3 = BigInt::zero();
    for d in divisors(m) {
        let e = d.min(m / d);
        a3 += BigInt::from(e).pow((k - 1) as u32);
    }
    acc24 -= a3 * 12 * cusps;

    BigRational::new(acc24, BigInt::from(24))
}

fn mu(level: u64, psi_n: u64, t: i64, f: u64, m: u64) -> u64 {
    if level == 1 {
        return 1;
    }
    let nf = num_integer::gcd(level, f);
    let modulus = (level * nf) as i128;
    let count = (0..level as i128)
        .filter(|&x| (x * x - t as i128 * x + m as i128).rem_euclid(modulus) == 0)
        .count() as u64;
    psi_n / psi(level / nf) * count
}

/// Trace of `T_m` on the new subspace `S_k^new(Gamma_0(p))`, from
/// `Tr_p - 2 Tr_1`.
pub fn trace_tm_new(k: i64, p: u64, m: u64) -> Result<ExactRational> {
    if !is_prime(p) {
        return invalid(format!("level {p} is not prime"));
    }
    check_args(k, p, m)?;
    let table = HurwitzTable::shared(4 * m as usize);
    Ok(trace_with_table(&table, k, p, m)
        - trace_with_table(&table, k, 1, m) * BigRational::from_integer(2.into()))
}

/// Dimension of `S_k^new(Gamma_0(p))`.
pub fn new_dim(k: i64, p: u64) -> Result<usize> {
    let t = trace_tm_new(k, p, 1)?;
    t.to_integer()
        .to_usize()
        .filter(|_| t.is_integer())
        .ok_or_else(|| Error::Internal(format!("non-integral dimension {t}")))
}

/// Largest new-space dimension handled by [`charpoly_tq_new`].
pub const MAX_NEW_DIM: usize = 12;

/// Characteristic polynomial of `T_q` on `S_k^new(Gamma_0(p))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewSpaceCharPoly {
    pub weight: i64,
    pub level: u64,
    pub hecke_prime: u64,
    pub poly: PolyOverQ,
}

/// Power sums `Tr(T_q^i)`, `i = 1..=d`, from traces of `T_(q^j)` via
/// `T_q T_(q^j) = T_(q^(j+1)) + q^(k-1) T_(q^(j-1))`, then Newton's identities.
pub fn charpoly_tq_new(k: i64, p: u64, q: u64) -> Result<NewSpaceCharPoly> {
    if q == p || !is_prime(q) {
        return invalid(format!(
            "Hecke index {q} must be a prime different from the level {p}"
        ));
    }
    let d = new_dim(k, p)?;
    if d > MAX_NEW_DIM {
        return Err(Error::Unsupported(format!(
            "new space of dimension {d} exceeds the supported {MAX_NEW_DIM}"
        )));
    }
    let traces: Vec<ExactRational> = {
        let qd = q
            .checked_pow(d as u32)
            .ok_or_else(|| Error::Unsupported(format!("{q}^{d} overflows")))?;
        let table = HurwitzTable::shared(4 * qd as usize);
        let mut v = Vec::with_capacity(d + 1);
        let mut qj = 1u64;
        for _ in 0..=d {
            v.push(
                trace_with_table(&table, k, p, qj)
                    - trace_with_table(&table, k, 1, qj) * BigRational::from_integer(2.into()),
            );
            qj *= q;
        }
        v
    };
    let power_sums = power_sums_from_hecke_traces(k, q, &traces, d);
    let poly = newton_charpoly(&power_sums)?;
    Ok(NewSpaceCharPoly {
        weight: k,
        level: p,
        hecke_prime: q,
        poly,
    })
}

/// `Tr(T_q^i)` for `i = 1..=d`, given `traces[j] = Tr T_(q^j)`.
pub fn power_sums_from_hecke_traces(
    k: i64,
    q: u64,
    traces: &[ExactRational],
    d: usize,
) -> Vec<ExactRational> {
    let qk = BigInt::from(q).pow((k - 1) as u32);
    // coefficients of T_q^i in the basis T_(q^j)
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    let mut out = Vec::with_capacity(d);
    for _ in 1..=d {
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (j, cj) in c.iter().enumerate() {
            next[j + 1] += cj;
            if j >= 1 {
                next[j - 1] += cj * &qk;
            }
        }
        c = next;
        let s = c
            .iter()
            .zip(traces)
            .map(|(cj, t)| BigRational::from_integer(cj.clone()) * t)
            .fold(BigRational::zero(), |a, b| a + b);
        out.push(s);
    }
    out
}

/// Monic polynomial with the given power sums of its roots.
pub fn newton_charpoly(power_sums: &[ExactRational]) -> Result<PolyOverQ> {
    let d = power_sums.len();
    let mut e = vec![BigRational::one()];
    for i in 1..=d {
        let mut acc = BigRational::zero();
        for j in 1..=i {
            let term = &e[i - j] * &power_sums[j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(i)));
    }
    let coeffs: Vec<ExactRational> = (0..=d)
        .map(|deg| {
            let i = d - deg;
            if i.is_multiple_of(2) {
                e[i].clone()
            } else {
                -e[i].clone()
            }
        })
        .collect();
    let poly = PolyOverQ::new(coeffs);
    if !poly.is_integral() {
        return Err(Error::Internal(format!(
            "non-integral characteristic polynomial {poly}"
        )));
    }
    Ok(poly)
}
