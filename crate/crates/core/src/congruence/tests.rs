use super::*;
use crate::exactmath::{rat_int, PolyOverQ};
use crate::modforms::eigen_systems_level1;
use crate::numberfield::NumberFieldCtx;
use crate::traceformula::charpoly_tq_new;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The rational newform of weight `k` and level `p`, from traces of Hecke
/// operators on the new space.
fn level_p_system(k: i64, p: u64, qmax: u64) -> EigenSystem {
    let ctx = NumberFieldCtx::rationals();
    let values = primes_up_to(qmax)
        .into_iter()
        .filter(|&q| q != p)
        .map(|q| {
            let cp = charpoly_tq_new(k, p, q).unwrap();
            assert_eq!(cp.poly.degree(), Some(1));
            (q, NFElement::from_rational(ctx.clone(), -cp.poly.coeff(0)))
        })
        .collect();
    EigenSystem {
        weight: k,
        level: p,
        ctx,
        values,
        normalized: true,
    }
}

fn tau_system(qmax: u64) -> EigenSystem {
    eigen_systems_level1(12, &primes_up_to(qmax), qmax as usize + 1)
        .unwrap()
        .remove(0)
}

/// Genus-2 data in `Q(i)` congruent to `f` plus the twists modulo the prime
/// `(13, i - 5)` only.
fn synthetic_genus2(f: &EigenSystem, target: &CongruenceTarget, seed: u64) -> EigenSystem {
    let ctx = NumberFieldCtx::new(PolyOverQ::from_ints([1, 0, 1])).unwrap();
    let pi = &NFElement::generator(ctx.clone()) - &NFElement::from_int(ctx.clone(), 5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = f
        .values
        .iter()
        .map(|(&q, aq)| {
            let base = NFElement::from_rational(
                ctx.clone(),
                aq.as_rational().unwrap() + rat_int(target.twist(q)),
            );
            let noise = NFElement::from_int(ctx.clone(), rng.gen_range(1..1000));
            (q, &base + &(&pi * &noise))
        })
        .collect();
    EigenSystem {
        weight: target.k,
        level: target.excluded_prime,
        ctx,
        values,
        normalized: true,
    }
}

#[test]
fn harder_finds_exactly_the_constructed_pair() {
    let target = CongruenceTarget::new(2, 4, 2).unwrap();
    let f = level_p_system(8, 2, 50);
    let big = synthetic_genus2(&f, &target, 7);
    let report = check_harder(&f, &big, &target, 13, 50).unwrap();
    let expected = report
        .big_lambdas
        .iter()
        .position(|l| l.factor == vec![8, 1])
        .unwrap();
    assert_eq!(
        report.pairs,
        vec![CongruencePair {
            lambda: 0,
            big_lambda: expected,
            embedding: 0
        }]
    );
    assert_eq!(report.failures.len(), 1);
    assert_eq!(report.verified_primes.len(), 13);
    assert!(!report.saito_kurokawa_regime);
}

#[test]
fn a_single_perturbation_breaks_the_pair() {
    let target = CongruenceTarget::new(2, 4, 2).unwrap();
    let f = level_p_system(8, 2, 50);
    let mut big = synthetic_genus2(&f, &target, 11);
    let one = NFElement::one(big.ctx.clone());
    let v = big.values.get_mut(&29).unwrap();
    *v = &*v + &one;
    let report = check_harder(&f, &big, &target, 13, 50).unwrap();
    assert!(report.pairs.is_empty());
    assert!(report.failures.iter().any(|x| x.q == 29 && x.gap == "1"));
}

#[test]
fn harder_preconditions() {
    let f = level_p_system(8, 2, 50);
    let target = CongruenceTarget::new(2, 4, 2).unwrap();
    let big = synthetic_genus2(&f, &target, 1);
    let zero = CongruenceTarget::new(0, 5, 2).unwrap();
    assert!(check_harder(&f, &big, &zero, 13, 50).is_err());
    assert!(check_harder(&f, &big, &target, 2, 50).is_err());
    let err = check_harder(&f, &big, &target, 13, 60).unwrap_err();
    assert_eq!(err, Error::MissingEigenvalue { q: 53 });

    let degenerate = CongruenceTarget {
        twist_exponents: (3, 3),
        ..target
    };
    assert!(
        check_harder(&f, &big, &degenerate, 13, 50)
            .unwrap()
            .saito_kurokawa_regime
    );
}

#[test]
fn ramanujan_691() {
    let tau = tau_system(100);
    let ok = check_ramanujan(&tau, 691, 100).unwrap();
    assert!(ok.all_hold());
    assert_eq!(ok.verified_primes.len(), 25);
    let bad = check_ramanujan(&tau, 683, 100).unwrap();
    assert_eq!(bad.results[0].first_failure, Some(2));

    let mut shifted = tau.clone();
    let v = shifted.values.get_mut(&37).unwrap();
    *v = &*v + &NFElement::from_int(tau.ctx.clone(), 5);
    assert_eq!(
        check_ramanujan(&shifted, 691, 100).unwrap().results[0].first_failure,
        Some(37)
    );
    assert!(check_ramanujan(&tau, 689, 100).is_err());
}

#[test]
fn bernoulli_criterion_examples() {
    assert_eq!(bernoulli_criterion(12, 2, 691).unwrap(), 1);
    assert_eq!(bernoulli_criterion(22, 2, 41).unwrap(), 0);
    // 2^22 - 1 = 3 * 23 * 89 * 683
    assert!(bernoulli_criterion(22, 2, 683).unwrap() >= 1);
    assert!(bernoulli_criterion(11, 2, 691).is_err());
}

#[test]
fn ramanujan_implies_bernoulli() {
    let cases = [
        (tau_system(50), 2u64),
        (level_p_system(8, 2, 50), 2),
        (level_p_system(6, 3, 50), 3),
    ];
    let mut hits = 0;
    for (sys, p) in &cases {
        for ell in primes_up_to(1000)
            .into_iter()
            .filter(|&l| l as i64 > sys.weight && l != *p)
        {
            if check_ramanujan(sys, ell, 50).unwrap().all_hold() {
                hits += 1;
                assert!(
                    bernoulli_criterion(sys.weight as u32, *p, ell).unwrap() >= 1,
                    "weight {} ell {ell}",
                    sys.weight
                );
            }
        }
    }
    assert!(hits >= 1);
}

fn charpolys(k: i64, p: u64, qs: &[u64]) -> BTreeMap<u64, NewSpaceCharPoly> {
    qs.iter()
        .map(|&q| (q, charpoly_tq_new(k, p, q).unwrap()))
        .collect()
}

#[test]
fn compat_is_implied_by_harder() {
    let target = CongruenceTarget::new(2, 4, 2).unwrap();
    let f = level_p_system(8, 2, 50);
    let big = synthetic_genus2(&f, &target, 3);
    let qs = [3, 5, 7, 11, 17];
    let cps = charpolys(8, 2, &qs);
    let harder = check_harder(&f, &big, &target, 13, 50).unwrap();
    let compat = check_compat(&big, &cps, &target, &qs);
    for pair in &harder.pairs {
        assert!(compat.results[pair.big_lambda].holds);
    }
    assert_eq!(compat.results.iter().filter(|r| r.holds).count(), 1);
    assert!(compat.to_string().contains("necessary, not sufficient"));

    let mut shifted = big.clone();
    let v = shifted.values.get_mut(&7).unwrap();
    *v = &*v + &NFElement::one(big.ctx.clone());
    let after = check_compat(&shifted, &cps, &target, &qs);
    assert!(after.results.iter().all(|r| !r.holds));
    assert!(charpoly_compat(&big, &cps, &target, 13, &[3, 19]).is_err());
}

fn check_compat(
    big: &EigenSystem,
    cps: &BTreeMap<u64, NewSpaceCharPoly>,
    t: &CongruenceTarget,
    qs: &[u64],
) -> CompatReport {
    charpoly_compat(big, cps, t, 13, qs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compat_agrees_with_root_enumeration(seed in any::<u64>()) {
        let ell = 7u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = CongruenceTarget::new(2, 4, 2).unwrap();
        let ctx = NumberFieldCtx::rationals();
        let qs = [3u64, 5];
        let mut cps = BTreeMap::new();
        let mut values = BTreeMap::new();
        let mut expected = true;
        for &q in &qs {
            let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-20..20)).collect();
            let poly = PolyOverQ::from_ints([c[0], c[1], c[2], 1]);
            cps.insert(q, NewSpaceCharPoly { weight: 8, level: 2, hecke_prime: q, poly });
            let b: i64 = rng.gen_range(-50..50);
            values.insert(q, NFElement::from_int(ctx.clone(), b));
            let roots: Vec<i64> = (0..ell as i64)
                .filter(|x| (c[0] + c[1] * x + c[2] * x * x + x * x * x).rem_euclid(ell as i64) == 0)
                .collect();
            let shift = (target.twist(q) % BigInt::from(ell)).to_string().parse::<i64>().unwrap();
            expected &= roots.contains(&(b - shift).rem_euclid(ell as i64));
        }
        let big = EigenSystem { weight: 4, level: 2, ctx, values, normalized: true };
        let report = charpoly_compat(&big, &cps, &target, ell, &qs).unwrap();
        prop_assert_eq!(report.results[0].holds, expected);
    }
}
