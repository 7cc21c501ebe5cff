//! Completed L-functions of elliptic eigenforms at critical integers, exact
//! reconstruction of same-parity critical ratios, and the Euler-factor and
//! incomplete-zeta divisibility tests.
//!
//! With `c = 2 pi / sqrt(N)` and any `t > 0`,
//! `Lambda(s) = sum_n a_n [ (cn)^-s G(s, cnt) + eps (cn)^-(k-s) G(k-s, cn/t) ]`
//! where `G` is the upper incomplete gamma function. At integer `s` the
//! closed form `G(s, x) = (s-1)! e^-x sum_{i<s} x^i / i!` is used. The value
//! is independent of `t` exactly when `eps` and the coefficients are right,
//! which is what the functional-equation residual measures.

pub mod real;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use astro_float::BigFloat;
pub use real::{format_rational_sci, format_sci, to_rational, RealCtx};

use crate::error::{invalid, Error, Result};
use crate::exactmath::sturm::isolate_real_roots;
use crate::exactmath::{
    factor_biguint, incomplete_zeta_quantity, is_prime, primes_up_to, ExactRational,
};
use crate::modforms::EigenSystem;
use crate::numberfield::{NFElement, NumberFieldCtx};
use crate::traceformula::{charpoly_tq_new, new_dim};

/// Flag attached to every prime reported by [`candidate_congruence_primes`].
pub const CANDIDATE_FLAG: &str = "candidate - period-normalization dependent";

/// Extra terms beyond the point where the tail drops below `10^-D`.
const CUTOFF_MARGIN: u64 = 50;

/// The second splitting point used by the functional-equation check.
fn t_alt() -> ExactRational {
    BigRational::new(11.into(), 10.into())
}

/// `Lambda(f, s)` at a critical integer, in one real embedding.
#[derive(Clone, Debug)]
pub struct CompletedLValue {
    pub weight: i64,
    pub level: u64,
    pub s: i64,
    pub value: BigFloat,
    pub sign: i8,
    pub digits: u32,
    /// Index of the real root of the coefficient field's minimal polynomial
    /// (increasing order) used to embed the coefficients.
    pub embedding: usize,
    pub n_max: u64,
}

impl CompletedLValue {
    pub fn to_rational(&self) -> ExactRational {
        to_rational(&self.value).expect("finite value")
    }
}

/// Exact reconstruction of `Lambda(f, m) / Lambda(f, m')`.
#[derive(Clone, Debug)]
pub struct RatioReport {
    pub m: i64,
    pub m_prime: i64,
    pub ratio: NFElement,
    /// Largest relative gap between the reconstructed ratio and the
    /// numerical one over all embeddings.
    pub residual: ExactRational,
    pub stable: bool,
    pub digits: u32,
}

/// A rational prime dividing the numerator norm of a critical ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidatePrime {
    pub ell: BigUint,
    pub flag: &'static str,
}

#[derive(Clone, Debug)]
pub struct CandidateReport {
    pub j: i64,
    pub k: i64,
    pub m0: i64,
    pub ratio: RatioReport,
    pub numerator_norm: BigInt,
    pub primes: Vec<CandidatePrime>,
    /// Part of the numerator norm that could not be factored.
    pub unfactored: Option<BigUint>,
}

fn check_critical(weight: i64, s: i64) -> Result<()> {
    if s < 1 || s > weight - 1 {
        return invalid(format!("s = {s} is not critical for weight {weight}"));
    }
    Ok(())
}

/// Atkin-Lehner eigenvalue `w_p = -a_p / p^(k/2-1)` of a prime-level newform.
pub fn atkin_lehner_sign(sys: &EigenSystem) -> Result<i8> {
    let p = sys.level;
    if p == 1 || !is_prime(p) {
        return invalid(format!("level {p} is not prime"));
    }
    let not_newform = || Error::InvalidInput("not a prime-level newform datum".into());
    let ap = sys.eigenvalue(p)?.as_rational().ok_or_else(not_newform)?;
    let scale = BigRational::from_integer(BigInt::from(p).pow((sys.weight / 2 - 1) as u32));
    let w = -(ap / scale);
    if w.is_one() {
        Ok(1)
    } else if (-&w).is_one() {
        Ok(-1)
    } else {
        Err(not_newform())
    }
}

/// Sign `eps` of `Lambda(k - s) = eps Lambda(s)`: `(-1)^(k/2)`, times the
/// Atkin-Lehner eigenvalue at prime level.
pub fn root_number(sys: &EigenSystem) -> Result<i8> {
    if sys.weight % 2 != 0 || sys.weight < 2 {
        return invalid(format!("weight {} must be even and positive", sys.weight));
    }
    let base: i8 = if (sys.weight / 2) % 2 == 0 { 1 } else { -1 };
    if sys.level == 1 {
        Ok(base)
    } else {
        Ok(base * atkin_lehner_sign(sys)?)
    }
}

/// Number of series terms so that `exp(-c n t_min)` is below `10^-D`, plus a
/// fixed margin.
pub fn series_cutoff(level: u64, digits: u32, t_min: f64) -> u64 {
    let c = 2.0 * std::f64::consts::PI / (level as f64).sqrt();
    (digits as f64 * std::f64::consts::LN_10 / (c * t_min)).ceil() as u64 + CUTOFF_MARGIN
}

fn guard_bits(weight: i64, n_max: u64) -> usize {
    64 + 2 * weight as usize * (64 - n_max.leading_zeros() as usize)
}

/// Rational approximations, to `bits` bits, of the real roots of the
/// coefficient field's defining polynomial.
fn real_embeddings(ctx: &Arc<NumberFieldCtx>, bits: u64) -> Result<Vec<ExactRational>> {
    if ctx.is_rational() {
        return Ok(vec![BigRational::zero()]);
    }
    let mut roots = isolate_real_roots(ctx.minpoly());
    if roots.len() != ctx.degree() {
        return Err(Error::Unsupported(
            "coefficient field is not totally real".into(),
        ));
    }
    Ok(roots
        .iter_mut()
        .map(|r| {
            r.refine(bits);
            r.midpoint()
        })
        .collect())
}

fn embed(rc: &RealCtx, a: &NFElement, theta: &BigFloat) -> BigFloat {
    let mut acc = rc.small(0);
    for c in a.coords().iter().rev() {
        acc = rc.add(&rc.mul(&acc, theta), &rc.rational(c));
    }
    acc
}

/// Coefficients `a_1 .. a_nmax` of `sys` in the chosen real embedding.
struct Series {
    weight: i64,
    level: u64,
    eps: i8,
    coeffs: Vec<BigFloat>,
}

impl Series {
    fn new(rc: &RealCtx, sys: &EigenSystem, n_max: u64, theta: &BigFloat) -> Result<Self> {
        if let Some(q) = primes_up_to(n_max)
            .into_iter()
            .find(|q| !sys.values.contains_key(q))
        {
            return Err(Error::InsufficientPrecision(format!(
                "eigenvalue a_{q} missing; the series needs all primes up to n_max = {n_max}"
            )));
        }
        let eps = root_number(sys)?;
        let mut coeffs = Vec::with_capacity(n_max as usize);
        for n in 1..=n_max {
            coeffs.push(embed(rc, &sys.coefficient(n)?, theta));
        }
        Ok(Self {
            weight: sys.weight,
            level: sys.level,
            eps,
            coeffs,
        })
    }

    /// `Lambda(s)` split at `t`, using terms up to `n_max`.
    fn lambda(&self, rc: &mut RealCtx, s: i64, t: &ExactRational, n_max: u64) -> Result<BigFloat> {
        let pi = rc.pi();
        let two_pi = rc.mul(&rc.small(2), &pi);
        let c = rc.div(&two_pi, &rc.sqrt(&rc.small(self.level as i64)));
        let tf = rc.rational(t);
        let tinv = rc.rational(&t.recip());
        let first = self.half(rc, &c, s, &tf, n_max)?;
        let second = self.half(rc, &c, self.weight - s, &tinv, n_max)?;
        let second = if self.eps < 0 { second.neg() } else { second };
        let out = rc.add(&first, &second);
        rc.check(&out, "Lambda")?;
        Ok(out)
    }

    /// `sum_n a_n (cn)^-s G(s, cnt)` for integer `s >= 1`.
    fn half(
        &self,
        rc: &mut RealCtx,
        c: &BigFloat,
        s: i64,
        t: &BigFloat,
        n_max: u64,
    ) -> Result<BigFloat> {
        let s = s as usize;
        let mut fact = rc.small(1);
        for i in 1..s {
            fact = rc.mul(&fact, &rc.small(i as i64));
        }
        let step = rc.exp(&rc.mul(c, t).neg());
        let mut decay = rc.small(1);
        let mut acc = rc.small(0);
        for n in 1..=n_max as usize {
            decay = rc.mul(&decay, &step);
            let a = &self.coeffs[n - 1];
            if a.is_zero() {
                continue;
            }
            let x = rc.mul(c, &rc.small(n as i64));
            let xt = rc.mul(&x, t);
            // sum_{i<s} (xt)^i / i!  by Horner
            let mut poly = rc.small(1);
            for i in (1..s).rev() {
                poly = rc.add(
                    &rc.small(1),
                    &rc.div(&rc.mul(&poly, &xt), &rc.small(i as i64)),
                );
            }
            let term = rc.div(&rc.mul(&poly, &decay), &rc.powi(&x, s));
            acc = rc.add(&acc, &rc.mul(a, &term));
        }
        Ok(rc.mul(&acc, &fact))
    }
}

struct Evaluator {
    rc: RealCtx,
    series: Series,
    n_max: u64,
}

impl Evaluator {
    /// Coefficients are prepared for both split points used by the residual.
    fn new(sys: &EigenSystem, digits: u32, embedding: usize) -> Result<Self> {
        if sys.level != 1 && !is_prime(sys.level) {
            return Err(Error::Unsupported(format!(
                "level {} is neither 1 nor prime",
                sys.level
            )));
        }
        let n_max = series_cutoff(sys.level, digits, 10.0 / 11.0);
        let rc = RealCtx::new(digits + 10, guard_bits(sys.weight, n_max))?;
        let roots = real_embeddings(&sys.ctx, rc.bits() as u64 + 32)?;
        let theta = roots.get(embedding).ok_or_else(|| {
            Error::InvalidInput(format!(
                "embedding {embedding} out of range 0..{}",
                roots.len()
            ))
        })?;
        let theta = rc.rational(theta);
        let series = Series::new(&rc, sys, n_max, &theta)?;
        Ok(Self { rc, series, n_max })
    }

    fn at(&mut self, s: i64, t: &ExactRational) -> Result<BigFloat> {
        self.series.lambda(&mut self.rc, s, t, self.n_max)
    }
}

/// `Lambda(f, s)` to at least `digits - 10` correct digits, with the
/// coefficients embedded via the `embedding`-th real root.
pub fn lambda_value(
    sys: &EigenSystem,
    s: i64,
    digits: u32,
    embedding: usize,
) -> Result<CompletedLValue> {
    check_critical(sys.weight, s)?;
    let mut ev = Evaluator::new(sys, digits, embedding)?;
    let value = ev.at(s, &BigRational::one())?;
    Ok(CompletedLValue {
        weight: sys.weight,
        level: sys.level,
        s,
        value,
        sign: ev.series.eps,
        digits,
        embedding,
        n_max: ev.n_max,
    })
}

/// Relative gap between the evaluations split at `t = 1` and `t = 11/10`.
pub fn functional_equation_residual(
    sys: &EigenSystem,
    s: i64,
    digits: u32,
    embedding: usize,
) -> Result<ExactRational> {
    check_critical(sys.weight, s)?;
    let mut ev = Evaluator::new(sys, digits, embedding)?;
    let a = to_rational(&ev.at(s, &BigRational::one())?).expect("finite");
    let b = to_rational(&ev.at(s, &t_alt())?).expect("finite");
    if a.is_zero() {
        return Ok((a - b).abs());
    }
    Ok(((a.clone() - b) / a).abs())
}

/// Best continued-fraction convergent of `x` with denominator at most `bound`.
pub fn rationalize(x: &ExactRational, bound: &BigInt) -> ExactRational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    let mut best = BigRational::from_integer(x.floor().to_integer());
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > bound {
            return best;
        }
        best = BigRational::new(h2.clone(), k2.clone());
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return best;
        }
        rest = frac.recip();
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
}

/// Gaussian elimination with partial pivoting on floats.
fn solve_real(
    rc: &RealCtx,
    mut m: Vec<Vec<BigFloat>>,
    mut b: Vec<BigFloat>,
) -> Result<Vec<BigFloat>> {
    let n = m.len();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs_cmp(&m[j][c]).unwrap_or(0).cmp(&0))
            .expect("nonempty");
        if m[p][c].is_zero() {
            return Err(Error::Numerical("singular Vandermonde system".into()));
        }
        m.swap(p, c);
        b.swap(p, c);
        for i in c + 1..n {
            let f = rc.div(&m[i][c], &m[c][c]);
            for j in c..n {
                m[i][j] = rc.sub(&m[i][j], &rc.mul(&f, &m[c][j]));
            }
            b[i] = rc.sub(&b[i], &rc.mul(&f, &b[c]));
        }
    }
    let mut x = vec![rc.small(0); n];
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for j in i + 1..n {
            acc = rc.sub(&acc, &rc.mul(&m[i][j], &x[j]));
        }
        x[i] = rc.div(&acc, &m[i][i]);
    }
    Ok(x)
}

/// One reconstruction attempt at `digits`; `None` when no element with
/// coordinate denominators below `10^(digits/3)` reproduces every embedded
/// ratio to `digits - 12` digits.
fn ratio_attempt(
    sys: &EigenSystem,
    m: i64,
    mp: i64,
    digits: u32,
) -> Result<Option<(NFElement, ExactRational)>> {
    let d = sys.degree();
    let mut ratios = Vec::with_capacity(d);
    let mut thetas = Vec::with_capacity(d);
    for e in 0..d {
        let mut ev = Evaluator::new(sys, digits, e)?;
        let num = ev.at(m, &BigRational::one())?;
        let den = ev.at(mp, &BigRational::one())?;
        let den_q = to_rational(&den).expect("finite");
        let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits - 20));
        if den_q.abs() < tiny {
            return Err(Error::Numerical(format!(
                "Lambda(f, {mp}) is numerically zero"
            )));
        }
        ratios.push(ev.rc.div(&num, &den));
        let roots = real_embeddings(&sys.ctx, ev.rc.bits() as u64 + 32)?;
        thetas.push(ev.rc.rational(&roots[e]));
        if e + 1 == d {
            let coords_f = if d == 1 {
                ratios.clone()
            } else {
                let rc = &ev.rc;
                let vand = thetas
                    .iter()
                    .map(|th| (0..d).map(|i| rc.powi(th, i)).collect())
                    .collect();
                solve_real(rc, vand, ratios.clone())?
            };
            let bound = BigInt::from(10).pow(digits / 3);
            let coords: Vec<ExactRational> = coords_f
                .iter()
                .map(|c| rationalize(&to_rational(c).expect("finite"), &bound))
                .collect();
            let cand = NFElement::from_coords(sys.ctx.clone(), coords)?;
            let mut residual = BigRational::zero();
            for (th, r) in thetas.iter().zip(&ratios) {
                let v = to_rational(&embed(&ev.rc, &cand, th)).expect("finite");
                let r = to_rational(r).expect("finite");
                let gap = if r.is_zero() {
                    (v - r).abs()
                } else {
                    ((v - &r) / &r).abs()
                };
                if gap > residual {
                    residual = gap;
                }
            }
            let tol = BigRational::new(
                BigInt::one(),
                BigInt::from(10).pow(digits.saturating_sub(12)),
            );
            return Ok((residual < tol).then_some((cand, residual)));
        }
    }
    unreachable!("degree is positive")
}

/// `Lambda(f, m) / Lambda(f, m')` as an element of the coefficient field,
/// reconstructed at `digits` and `2 digits`.
pub fn ratio_rationalize(sys: &EigenSystem, m: i64, mp: i64, digits: u32) -> Result<RatioReport> {
    check_critical(sys.weight, m)?;
    check_critical(sys.weight, mp)?;
    if (m - mp) % 2 != 0 {
        return invalid(format!("m = {m} and m' = {mp} have different parity"));
    }
    if digits < 40 {
        return invalid("ratio reconstruction needs at least 40 digits");
    }
    if m == mp {
        return Ok(RatioReport {
            m,
            m_prime: mp,
            ratio: NFElement::one(sys.ctx.clone()),
            residual: BigRational::zero(),
            stable: true,
            digits,
        });
    }
    let lo = ratio_attempt(sys, m, mp, digits)?;
    let hi = ratio_attempt(sys, m, mp, 2 * digits)?;
    let report = |(ratio, residual): (NFElement, ExactRational), stable| RatioReport {
        m,
        m_prime: mp,
        ratio,
        residual,
        stable,
        digits,
    };
    match (lo, hi) {
        (None, None) => Err(Error::InsufficientPrecision(format!(
            "ratio Lambda({m})/Lambda({mp}) did not reconstruct at {digits} or {} digits; increase precision",
            2 * digits
        ))),
        (Some(a), Some(b)) if a.0 == b.0 => Ok(report(a, true)),
        (_, Some(b)) => Ok(report(b, false)),
        (Some(a), None) => Ok(report(a, false)),
    }
}

/// Primes `ell > k'`, `ell != p`, dividing the numerator of the norm of
/// `Lambda(f, j+k) / Lambda(f, m0)`, where `m0` is the smallest critical
/// integer of the parity of `j+k` with `Lambda(f, m0) != 0`.
pub fn candidate_congruence_primes(
    sys: &EigenSystem,
    j: i64,
    k: i64,
    digits: u32,
) -> Result<CandidateReport> {
    let kp = j + 2 * k - 2;
    if kp != sys.weight {
        return invalid(format!(
            "(j, k) = ({j}, {k}) needs weight {kp}, system has weight {}",
            sys.weight
        ));
    }
    let s = j + k;
    check_critical(kp, s)?;
    let tiny = BigRational::new(
        BigInt::one(),
        BigInt::from(10).pow(digits.saturating_sub(20)),
    );
    let mut m0 = None;
    let mut m = if s % 2 == 0 { 2 } else { 1 };
    while m < kp {
        if m != s && lambda_value(sys, m, digits, 0)?.to_rational().abs() > tiny {
            m0 = Some(m);
            break;
        }
        m += 2;
    }
    let m0 = m0.ok_or_else(|| {
        Error::Numerical("no nonzero reference value; choose different m0".into())
    })?;
    let ratio = ratio_rationalize(sys, s, m0, digits)?;
    if ratio.ratio.is_zero() {
        return Err(Error::Numerical(format!(
            "Lambda(f, {s}) vanishes numerically"
        )));
    }
    let numerator_norm = ratio.ratio.norm().numer().clone();
    let fac = factor_biguint(numerator_norm.magnitude());
    let primes = fac
        .factors
        .iter()
        .map(|(q, _)| q.clone())
        .filter(|q| *q > BigUint::from(kp as u64) && *q != BigUint::from(sys.level))
        .map(|ell| CandidatePrime {
            ell,
            flag: CANDIDATE_FLAG,
        })
        .collect();
    Ok(CandidateReport {
        j,
        k,
        m0,
        ratio,
        numerator_norm,
        primes,
        unfactored: fac.cofactor,
    })
}

/// Level-one eigen-systems of weight `k` carrying enough eigenvalues for
/// every evaluation at up to `2 * digits` digits, which covers the doubled
/// attempt of [`ratio_rationalize`].
pub fn level1_systems(k: i64, digits: u32) -> Result<Vec<EigenSystem>> {
    let n_max = series_cutoff(1, 2 * digits, 10.0 / 11.0);
    crate::modforms::eigen_systems_level1(k, &primes_up_to(n_max), n_max as usize + 60)
}

/// Primes `ell > 3` dividing the numerator of `(B_k / 2k) prod_{p in Sigma} (p^k - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaPrimes {
    pub quantity: ExactRational,
    pub primes: Vec<BigUint>,
    pub unfactored: Option<BigUint>,
}

pub fn zeta_sigma_primes(k: u32, sigma: &[u64]) -> Result<ZetaPrimes> {
    if k < 4 || !k.is_multiple_of(2) {
        return invalid(format!("k = {k} must be even and at least 4"));
    }
    if let Some(p) = sigma.iter().find(|&&p| !is_prime(p)) {
        return invalid(format!("{p} in Sigma is not prime"));
    }
    let quantity = incomplete_zeta_quantity(k, sigma);
    let fac = factor_biguint(quantity.numer().magnitude());
    let primes = fac
        .primes()
        .into_iter()
        .filter(|q| *q > BigUint::from(3u32))
        .collect();
    Ok(ZetaPrimes {
        quantity,
        primes,
        unfactored: fac.cofactor,
    })
}

/// `p^(2(j+k)) - a_p p^(j+k) + p^(k'-1)` with `k' = j + 2k - 2`.
pub fn local_euler_quantity(p: u64, ap: &NFElement, j: i64, k: i64) -> Result<NFElement> {
    if j < 0 || k < 1 {
        return invalid(format!("(j, k) = ({j}, {k}) out of range"));
    }
    let kp = (j + 2 * k - 2) as u32;
    let s = (j + k) as u32;
    let pb = BigInt::from(p);
    let ctx = ap.ctx().clone();
    let constant = NFElement::from_int(ctx, pb.pow(2 * s) + pb.pow(kp - 1));
    Ok(&constant - &ap.scale(&BigRational::from_integer(pb.pow(s))))
}

/// The same quantity for an integer `a_p`.
pub fn local_euler_quantity_int(p: u64, ap: &BigInt, j: i64, k: i64) -> Result<BigInt> {
    let a = NFElement::from_int(NumberFieldCtx::rationals(), ap.clone());
    Ok(local_euler_quantity(p, &a, j, k)?
        .as_rational()
        .expect("rational")
        .to_integer())
}

/// Whether some prime above `ell` divides the Euler-factor quantity at `p`,
/// decided through its norm (the quantity is an algebraic integer).
pub fn local_euler_divisor(sys: &EigenSystem, p: u64, j: i64, k: i64, ell: u64) -> Result<bool> {
    if !is_prime(ell) || !is_prime(p) || ell == p {
        return invalid(format!("need distinct primes p = {p}, ell = {ell}"));
    }
    let kp = j + 2 * k - 2;
    if kp != sys.weight {
        return invalid(format!(
            "(j, k) = ({j}, {k}) needs weight {kp}, system has weight {}",
            sys.weight
        ));
    }
    let q = local_euler_quantity(p, sys.eigenvalue(p)?, j, k)?;
    let norm = q.norm();
    if !norm.is_integer() {
        return Err(Error::Internal("Euler quantity is not integral".into()));
    }
    Ok(norm.to_integer().is_multiple_of(&BigInt::from(ell)))
}

/// A rational newform on `Gamma_0(p)` assembled from trace-formula data.
#[derive(Clone, Debug)]
pub struct LevelPNewform {
    pub system: EigenSystem,
    /// Functional-equation residuals for `a_p = -p^(k/2-1)` and `+p^(k/2-1)`.
    pub residual_minus_sign: ExactRational,
    pub residual_plus_sign: ExactRational,
    pub test_point: i64,
}

/// The eigen-system of the unique newform in a one-dimensional
/// `S_k^new(Gamma_0(p))`, with `a_q` for every prime up to the series cutoff
/// at `digits`. The sign of `a_p = +-p^(k/2-1)` is the one whose
/// functional-equation residual vanishes.
pub fn level_p_newform_from_traces(k: i64, p: u64, digits: u32) -> Result<LevelPNewform> {
    let d = new_dim(k, p)?;
    if d != 1 {
        return Err(Error::Unsupported(format!(
            "S_{k}^new(Gamma_0({p})) has dimension {d}; only dimension 1 is assembled from traces"
        )));
    }
    let n_max = series_cutoff(p, digits, 10.0 / 11.0);
    let ctx = NumberFieldCtx::rationals();
    let mut values = BTreeMap::new();
    for q in primes_up_to(n_max) {
        if q == p {
            continue;
        }
        let cp = charpoly_tq_new(k, p, q)?;
        values.insert(q, NFElement::from_rational(ctx.clone(), -cp.poly.coeff(0)));
    }
    let ap_abs = BigInt::from(p).pow((k / 2 - 1) as u32);
    let test_point = if k >= 6 { k / 2 + 1 } else { k - 1 };
    let mut residuals = Vec::new();
    for sign in [-1, 1] {
        let mut vals = values.clone();
        vals.insert(p, NFElement::from_int(ctx.clone(), &ap_abs * sign));
        let sys = EigenSystem {
            weight: k,
            level: p,
            ctx: ctx.clone(),
            values: vals,
            normalized: true,
        };
        let r = functional_equation_residual(&sys, test_point, digits, 0)?;
        residuals.push((r, sys));
    }
    let tol = BigRational::new(
        BigInt::one(),
        BigInt::from(10).pow(digits.saturating_sub(10)),
    );
    let (rm, sm) = residuals.remove(0);
    let (rp, sp) = residuals.remove(0);
    let system = match (rm < tol, rp < tol) {
        (true, false) => sm,
        (false, true) => sp,
        _ => {
            return Err(Error::Numerical(format!(
                "functional equation does not single out the sign of a_{p} (residuals {} and {})",
                format_rational_sci(&rm, 3),
                format_rational_sci(&rp, 3)
            )))
        }
    };
    Ok(LevelPNewform {
        system,
        residual_minus_sign: rm,
        residual_plus_sign: rp,
        test_point,
    })
}
