//! Checking Eisenstein-type congruences on supplied eigenvalue data.
//!
//! All statements quantify over primes `q <= qmax` with `q != p` and
//! `q != ell`; a positive answer means "verified up to qmax".

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::exactmath::{
    incomplete_zeta_quantity, is_prime, ord_at, primes_up_to, FFElement, ResidueField,
};
use crate::modforms::EigenSystem;
use crate::numberfield::{
    common_extension, embeddings, primes_above, reduce_mod, NFElement, PrimeIdealData,
};
use crate::traceformula::NewSpaceCharPoly;

/// Default bound on the primes `q` tested.
pub const DEFAULT_QMAX: u64 = 50;

/// Shape of the congruence `b_q ≡ q^a + a_q + q^b` for a level-`p` form of
/// weight `j + 2k - 2` and a genus-2 form of weight `(j, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceTarget {
    pub j: i64,
    pub k: i64,
    pub twist_exponents: (i64, i64),
    pub excluded_prime: u64,
}

impl CongruenceTarget {
    /// Twist exponents `(k - 2, j + k - 1)`.
    pub fn new(j: i64, k: i64, p: u64) -> Result<Self> {
        if j < 0 || j % 2 != 0 {
            return invalid(format!("j = {j} must be even and non-negative"));
        }
        if k < 3 {
            return invalid(format!("k = {k} must be at least 3"));
        }
        if !is_prime(p) {
            return invalid(format!("p = {p} is not prime"));
        }
        Ok(Self {
            j,
            k,
            twist_exponents: (k - 2, j + k - 1),
            excluded_prime: p,
        })
    }

    /// `k' = j + 2k - 2`.
    pub fn elliptic_weight(&self) -> i64 {
        self.j + 2 * self.k - 2
    }

    /// Equal twist exponents put the data in the Saito-Kurokawa regime.
    pub fn is_degenerate(&self) -> bool {
        self.twist_exponents.0 == self.twist_exponents.1
    }

    /// `q^a + q^b` as an integer.
    pub fn twist(&self, q: u64) -> BigInt {
        let (a, b) = self.twist_exponents;
        BigInt::from(q).pow(a as u32) + BigInt::from(q).pow(b as u32)
    }
}

/// A (lambda, Lambda) pair for which the congruence held at every tested `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruencePair {
    /// Index into [`CongruenceReport::lambdas`].
    pub lambda: usize,
    /// Index into [`CongruenceReport::big_lambdas`].
    pub big_lambda: usize,
    /// Index of the embedding of the residue field of `lambda` into the
    /// common extension, with the one of `Lambda` fixed to the first.
    pub embedding: usize,
}

/// First failing prime for a pair, under the embedding that survived
/// longest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceFailure {
    pub lambda: usize,
    pub big_lambda: usize,
    pub q: u64,
    /// `b_q - a_q - q^a - q^b` in the common residue field.
    pub gap: String,
}

#[derive(Clone, Debug)]
pub struct CongruenceReport {
    pub ell: u64,
    pub qmax: u64,
    pub lambdas: Vec<PrimeIdealData>,
    pub big_lambdas: Vec<PrimeIdealData>,
    pub pairs: Vec<CongruencePair>,
    pub verified_primes: Vec<u64>,
    pub failures: Vec<CongruenceFailure>,
    pub saito_kurokawa_regime: bool,
}

fn tested_primes(qmax: u64, p: u64, ell: u64) -> Vec<u64> {
    primes_up_to(qmax)
        .into_iter()
        .filter(|&q| q != p && q != ell)
        .collect()
}

fn check_ell(ell: u64, p: u64) -> Result<()> {
    if !is_prime(ell) {
        return invalid(format!("ell = {ell} is not prime"));
    }
    if ell == p {
        return invalid(format!("ell = {ell} equals the level prime"));
    }
    Ok(())
}

fn values_at<'a>(sys: &'a EigenSystem, qs: &[u64]) -> Result<Vec<&'a NFElement>> {
    qs.iter().map(|&q| sys.eigenvalue(q)).collect()
}

/// Test `b_q ≡ a_q + q^a + q^b` for every prime `lambda | ell` of the field
/// of `f_sys` and every `Lambda | ell` of the field of `big_sys`, with one
/// embedding of residue fields used for all `q`.
pub fn check_harder(
    f_sys: &EigenSystem,
    big_sys: &EigenSystem,
    target: &CongruenceTarget,
    ell: u64,
    qmax: u64,
) -> Result<CongruenceReport> {
    if target.j <= 0 {
        return invalid("the genus-2 weight needs j > 0");
    }
    let p = target.excluded_prime;
    check_ell(ell, p)?;
    if f_sys.weight != target.elliptic_weight() {
        return invalid(format!(
            "elliptic weight {} does not equal j + 2k - 2 = {}",
            f_sys.weight,
            target.elliptic_weight()
        ));
    }
    if big_sys.weight != target.k {
        return invalid(format!(
            "genus-2 weight {} does not equal k = {}",
            big_sys.weight, target.k
        ));
    }
    let qs = tested_primes(qmax, p, ell);
    let a = values_at(f_sys, &qs)?;
    let b = values_at(big_sys, &qs)?;
    let lambdas = primes_above(&f_sys.ctx, ell)?;
    let big_lambdas = primes_above(&big_sys.ctx, ell)?;
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for (li, lam) in lambdas.iter().enumerate() {
        let a_red: Vec<FFElement> = a
            .iter()
            .map(|x| reduce_mod(x, lam))
            .collect::<Result<_>>()?;
        for (bi, big) in big_lambdas.iter().enumerate() {
            let b_red: Vec<FFElement> = b
                .iter()
                .map(|x| reduce_mod(x, big))
                .collect::<Result<_>>()?;
            let common = common_extension(ell, &[lam.f, big.f])?;
            let tau = embeddings(&big.residue, &common)?.remove(0);
            // b_q - q^a - q^b, embedded once
            let lhs: Vec<FFElement> = qs
                .iter()
                .zip(&b_red)
                .map(|(&q, bq)| {
                    &bq.map_via(&tau) - &FFElement::from_int(common.clone(), &target.twist(q))
                })
                .collect();
            let mut best: Option<(usize, FFElement)> = None;
            let mut matched = None;
            for (si, sigma) in embeddings(&lam.residue, &common)?.iter().enumerate() {
                let first_bad = lhs
                    .iter()
                    .zip(&a_red)
                    .position(|(l, aq)| *l != aq.map_via(sigma));
                match first_bad {
                    None => {
                        matched = Some(si);
                        break;
                    }
                    Some(i) if best.as_ref().is_none_or(|(j, _)| i > *j) => {
                        best = Some((i, &lhs[i] - &a_red[i].map_via(sigma)));
                    }
                    Some(_) => {}
                }
            }
            match (matched, best) {
                (Some(embedding), _) => pairs.push(CongruencePair {
                    lambda: li,
                    big_lambda: bi,
                    embedding,
                }),
                (None, Some((i, gap))) => failures.push(CongruenceFailure {
                    lambda: li,
                    big_lambda: bi,
                    q: qs[i],
                    gap: gap.to_string(),
                }),
                (None, None) => {
                    return Err(Error::Internal("no embedding into the common field".into()))
                }
            }
        }
    }
    Ok(CongruenceReport {
        ell,
        qmax,
        lambdas,
        big_lambdas,
        pairs,
        verified_primes: qs,
        failures,
        saito_kurokawa_regime: target.is_degenerate(),
    })
}

#[derive(Clone, Debug)]
pub struct RamanujanResult {
    pub lambda: PrimeIdealData,
    pub holds: bool,
    pub first_failure: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct RamanujanReport {
    pub ell: u64,
    pub qmax: u64,
    pub verified_primes: Vec<u64>,
    pub results: Vec<RamanujanResult>,
}

impl RamanujanReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.holds)
    }
}

/// Per prime `lambda | ell`: whether `a_q ≡ 1 + q^(k'-1) mod lambda` for the
/// tested `q`, excluding the level's prime.
pub fn check_ramanujan(f_sys: &EigenSystem, ell: u64, qmax: u64) -> Result<RamanujanReport> {
    check_ell(ell, f_sys.level)?;
    let qs = tested_primes(qmax, f_sys.level, ell);
    let a = values_at(f_sys, &qs)?;
    let results = primes_above(&f_sys.ctx, ell)?
        .into_iter()
        .map(|lam| {
            let mut first_failure = None;
            for (&q, aq) in qs.iter().zip(&a) {
                let want = BigInt::from(1) + BigInt::from(q).pow((f_sys.weight - 1) as u32);
                let gap = &reduce_mod(aq, &lam)? - &FFElement::from_int(lam.residue.clone(), &want);
                if !gap.is_zero() {
                    first_failure = Some(q);
                    break;
                }
            }
            Ok(RamanujanResult {
                lambda: lam,
                holds: first_failure.is_none(),
                first_failure,
            })
        })
        .collect::<Result<_>>()?;
    Ok(RamanujanReport {
        ell,
        qmax,
        verified_primes: qs,
        results,
    })
}

/// `ord_ell(B_k' (p^k' - 1) / 2k')`.
pub fn bernoulli_criterion(kprime: u32, p: u64, ell: u64) -> Result<i64> {
    if kprime < 4 || !kprime.is_multiple_of(2) {
        return invalid(format!("k' = {kprime} must be even and at least 4"));
    }
    if !is_prime(p) || !is_prime(ell) {
        return invalid(format!("{p} and {ell} must both be prime"));
    }
    ord_at(&incomplete_zeta_quantity(kprime, &[p]), ell)
}

#[derive(Clone, Debug)]
pub struct CompatResult {
    pub big_lambda: PrimeIdealData,
    pub holds: bool,
    pub first_failure: Option<u64>,
}

/// Outcome of [`charpoly_compat`]; a necessary condition for the
/// congruence, not a sufficient one.
#[derive(Clone, Debug)]
pub struct CompatReport {
    pub ell: u64,
    pub qset: Vec<u64>,
    pub results: Vec<CompatResult>,
}

impl fmt::Display for CompatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "charpoly compatibility mod {} (necessary, not sufficient)",
            self.ell
        )?;
        for r in &self.results {
            let state = match r.first_failure {
                None => "compatible".to_string(),
                Some(q) => format!("fails at q = {q}"),
            };
            writeln!(f, "  {}: {state}", r.big_lambda.describe())?;
        }
        Ok(())
    }
}

/// Evaluate a rational polynomial, reduced mod `ell`, at `x`.
fn eval_reduced(poly: &crate::exactmath::PolyOverQ, x: &FFElement) -> Result<FFElement> {
    let field: Arc<ResidueField> = x.field().clone();
    let mut acc = FFElement::zero(field.clone());
    for c in poly.coeffs().iter().rev() {
        let c = crate::exactmath::reduce_mod(c, field.ell())?;
        acc = &(&acc * x) + &FFElement::from_i64(field.clone(), c as i64);
    }
    Ok(acc)
}

/// Per prime `Lambda | ell`: whether for every `q` in `qset` the level-`p`
/// characteristic polynomial of `T_q` vanishes at `b_q - q^a - q^b`.
pub fn charpoly_compat(
    big_sys: &EigenSystem,
    charpolys: &BTreeMap<u64, NewSpaceCharPoly>,
    target: &CongruenceTarget,
    ell: u64,
    qset: &[u64],
) -> Result<CompatReport> {
    check_ell(ell, target.excluded_prime)?;
    let qs: Vec<u64> = qset
        .iter()
        .copied()
        .filter(|&q| q != target.excluded_prime && q != ell)
        .collect();
    for &q in &qs {
        if !charpolys.contains_key(&q) {
            return invalid(format!("no characteristic polynomial for q = {q}"));
        }
    }
    let b = values_at(big_sys, &qs)?;
    let results = primes_above(&big_sys.ctx, ell)?
        .into_iter()
        .map(|big| {
            let mut first_failure = None;
            for (&q, bq) in qs.iter().zip(&b) {
                let x = &reduce_mod(bq, &big)?
                    - &FFElement::from_int(big.residue.clone(), &target.twist(q));
                if !eval_reduced(&charpolys[&q].poly, &x)?.is_zero() {
                    first_failure = Some(q);
                    break;
                }
            }
            Ok(CompatResult {
                big_lambda: big,
                holds: first_failure.is_none(),
                first_failure,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CompatReport {
        ell,
        qset: qs,
        results,
    })
}

#[cfg(test)]
mod tests;
