//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eiscong::congruence::{bernoulli_criterion, check_harder, CongruencePair};
use eiscong::exactmath::{bernoulli, divisors, factor_biguint, primes_up_to, rat, rat_int};
use eiscong::lfunction::{
    candidate_congruence_primes, functional_equation_residual, level1_systems,
    level_p_newform_from_traces, ratio_rationalize, zeta_sigma_primes,
};
use eiscong::modforms::{cusp_dim_level1, hecke_matrix, miller_basis};
use eiscong::satake::{
    admissible_types, gl4_order_bound, local_origin_rarity, obstruction_predicts, target_quadruple,
    type_match, witness_prime, Family, Rarity, TargetSource, TypeId, TYPE_TABLE,
};
use eiscong::traceformula::{trace_tm, HurwitzTable};
use eiscong::{CongruenceTarget, EigenSystem, NFElement, NumberFieldCtx, PolyOverQ, ResidueField};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eiscong-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

/// Run the binary; returns (exit code, stdout).
fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eiscong"))
        .args(args)
        .output()
        .expect("run eiscong");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn value<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("{key}: ");
    report.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

fn criterion_1() -> Outcome {
    let dir = scratch_dir();
    let tau = dir.join("tau.eig");
    let tau_s = tau.to_str().unwrap();
    let (code, _) = cli(&[
        "eigenforms",
        "--weight",
        "12",
        "--qmax",
        "100",
        "--write",
        tau_s,
    ]);
    check(code == 0, "could not generate the tau system")?;
    let args = |ell: &'static str| {
        [
            "ramanujan-check",
            "--input",
            tau_s,
            "--ell",
            ell,
            "--qmax",
            "100",
            "--format",
            "structured",
        ]
    };
    let (c1, ok) = cli(&args("691"));
    check(
        c1 == 0 && value(&ok, "result") == Some("pass"),
        format!("691 did not pass:\n{ok}"),
    )?;
    let (c2, bad) = cli(&args("683"));
    check(
        c2 == 0 && value(&bad, "lambda0.result") == Some("fails at q = 2"),
        format!("683 did not fail at 2:\n{bad}"),
    )?;
    Ok("mod 691 holds for q <= 100; mod 683 fails at q = 2".into())
}

fn criterion_2() -> Outcome {
    check(bernoulli(12) == rat(-691, 2730), "B_12")?;
    let z = zeta_sigma_primes(12, &[]).map_err(|e| e.to_string())?;
    check(
        z.primes == vec![BigUint::from(691u32)],
        format!("zeta primes {:?}", z.primes),
    )?;
    check(
        bernoulli_criterion(12, 2, 691) == Ok(1),
        "criterion (12, 2, 691)",
    )?;
    check(
        bernoulli_criterion(22, 2, 41) == Ok(0),
        "criterion (22, 2, 41)",
    )?;
    let (_, out) = cli(&["bernoulli", "12", "--format", "structured"]);
    check(value(&out, "value") == Some("-691/2730"), "cli bernoulli")?;
    let (_, out) = cli(&[
        "zeta-primes",
        "--weight",
        "12",
        "--sigma",
        "2",
        "--format",
        "structured",
    ]);
    check(value(&out, "primes") == Some("691"), "cli zeta-primes")?;
    Ok("B_12 = -691/2730, primes {691}, valuations 1 and 0".into())
}

fn criterion_3() -> Outcome {
    let mut count = 0;
    for k in (12..=28).step_by(2) {
        let d = cusp_dim_level1(k);
        let basis = miller_basis(k, 20 * (d + 2) + 1).map_err(|e| e.to_string())?;
        check(basis.len() == d, format!("basis size at weight {k}"))?;
        for m in 1..=20u64 {
            let mat = hecke_matrix(&basis, m).map_err(|e| e.to_string())?;
            let tr: BigRational = (0..d).map(|i| mat[i][i].clone()).sum();
            let formula = trace_tm(k, 1, m).map_err(|e| e.to_string())?;
            check(
                tr == formula,
                format!("k = {k}, m = {m}: matrix {tr} vs formula {formula}"),
            )?;
            count += 1;
        }
    }
    let table = HurwitzTable::new(400);
    for n in 1..=100usize {
        let mut lhs = BigRational::zero();
        let mut t = 0usize;
        while t * t <= 4 * n {
            let h = table.get(4 * n - t * t);
            lhs += if t == 0 { h } else { h * rat(2, 1) };
            t += 1;
        }
        let rhs: u64 = divisors(n as u64)
            .iter()
            .map(|&d| d.max(n as u64 / d))
            .sum();
        check(
            lhs == rat_int(rhs),
            format!("class number relation at n = {n}"),
        )?;
    }
    Ok(format!(
        "{count} traces equal; class number relation holds for n <= 100"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_401);
    let primes: Vec<u64> = primes_up_to(60);
    let (mut samples, mut checks, mut unsound, mut slack) = (0, 0, 0, 0);
    while samples < 240 {
        let j = 2 * rng.gen_range(0..8i64);
        let k = rng.gen_range(3..14i64);
        let p = primes[rng.gen_range(0..primes.len())];
        let ell = primes[rng.gen_range(1..primes.len())];
        let f = rng.gen_range(1..=2u32);
        if p == ell {
            continue;
        }
        samples += 1;
        let field = Arc::new(ResidueField::standard(ell, f).map_err(|e| e.to_string())?);
        let targets = target_quadruple(j, k, p, TargetSource::LevelPNewform, &field)
            .map_err(|e| e.to_string())?;
        for t in &targets {
            let e = t.steinberg_sign.unwrap();
            for fam in [Family::III, Family::IV, Family::V, Family::VI] {
                let rec = TYPE_TABLE
                    .iter()
                    .find(|r| r.type_id.family() == fam)
                    .unwrap();
                let possible = type_match(rec, t).map_err(|e| e.to_string())?.is_possible();
                let predicted =
                    obstruction_predicts(fam, j, p, &field, e).map_err(|e| e.to_string())?;
                checks += 1;
                if possible && !predicted {
                    unsound += 1;
                }
                if predicted && !possible {
                    slack += 1;
                }
            }
        }
    }
    check(
        unsound == 0,
        format!("{unsound} matches without any obstruction congruence"),
    )?;
    let f41 = Arc::new(ResidueField::standard(41, 1).unwrap());
    let (set, _) =
        admissible_types(4, 10, 2, &f41, TargetSource::LevelPNewform).map_err(|e| e.to_string())?;
    check(
        set == [TypeId::I, TypeId::IIa, TypeId::IIb].into_iter().collect(),
        format!("admissible mod 41: {set:?}"),
    )?;
    let f5 = Arc::new(ResidueField::standard(5, 1).unwrap());
    let (set5, _) =
        admissible_types(4, 10, 2, &f5, TargetSource::LevelPNewform).map_err(|e| e.to_string())?;
    let extra = set5
        .iter()
        .any(|t| !matches!(t.family(), Family::I | Family::II));
    check(extra, format!("admissible mod 5: {set5:?}"))?;
    Ok(format!(
        "{samples} samples, {checks} family checks, 0 unpredicted matches, {slack} predicted but impossible; admissible mod 41 = {{I, IIa, IIb}}, mod 5 admits {}",
        set5.iter().filter(|t| !matches!(t.family(), Family::I | Family::II)).map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
    ))
}

fn criterion_5() -> Outcome {
    let (code, out) = cli(&[
        "verdict",
        "--j",
        "4",
        "--k",
        "10",
        "--p",
        "2",
        "--ell",
        "41",
        "--e",
        "1",
        "--f",
        "1",
        "--format",
        "structured",
    ]);
    check(code == 0, "verdict exit code")?;
    check(value(&out, "borel_guard") == Some("pass"), "guard")?;
    for t in 0..4 {
        let v = value(&out, &format!("power_condition[t={t}]")).unwrap_or("");
        check(v.starts_with("pass"), format!("power condition t = {t}"))?;
    }
    check(value(&out, "bernoulli_valuation") == Some("0"), "valuation")?;
    check(
        value(&out, "conclusion") == Some("type IIa or level-1 replacement"),
        "conclusion",
    )?;
    Ok("guard pass, 4 power conditions pass, valuation 0, type IIa or level-1 replacement".into())
}

fn criterion_6() -> Outcome {
    let l = witness_prime(41, 1).map_err(|e| e.to_string())?;
    check(l == 2, format!("witness {l}"))?;
    let bound = gl4_order_bound(l, 1);
    check(
        !(&bound % BigInt::from(41)).is_zero(),
        "41 divides the bound",
    )?;
    Ok(format!("l' = 2, 41 does not divide {bound}"))
}

fn criterion_7() -> Outcome {
    let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(90));
    let delta = level1_systems(12, 100)
        .map_err(|e| e.to_string())?
        .remove(0);
    for s in [1, 6, 11] {
        let r = functional_equation_residual(&delta, s, 100, 0).map_err(|e| e.to_string())?;
        check(r < tol, format!("Delta residual at s = {s}"))?;
    }
    let newform = level_p_newform_from_traces(8, 2, 100).map_err(|e| e.to_string())?;
    for s in [1, 4, 7] {
        let r =
            functional_equation_residual(&newform.system, s, 100, 0).map_err(|e| e.to_string())?;
        check(r < tol, format!("level-2 residual at s = {s}"))?;
    }
    let ratio = ratio_rationalize(&delta, 3, 5, 100).map_err(|e| e.to_string())?;
    check(
        ratio.stable && ratio.ratio.as_rational() == Some(rat(14, 9)),
        "Delta ratio not stable",
    )?;
    // (2, 6) has numerator 25, so 5 <= k' must be dropped; (4, 5) has 691
    let mut seen = Vec::new();
    for (j, k) in [(2, 6), (4, 5)] {
        let rep = candidate_congruence_primes(&delta, j, k, 100).map_err(|e| e.to_string())?;
        let norm = rep.numerator_norm.magnitude().clone();
        let kept: Vec<BigUint> = rep.primes.iter().map(|c| c.ell.clone()).collect();
        for (q, _) in factor_biguint(&norm).factors {
            let admissible = q > BigUint::from(12u32);
            check(
                admissible == kept.contains(&q),
                format!("prime {q} handled wrongly at ({j}, {k})"),
            )?;
            seen.push(format!(
                "{q}{}",
                if admissible { " kept" } else { " dropped" }
            ));
        }
    }
    check(
        seen == ["5 dropped", "691 kept"],
        format!("numerator primes {seen:?}"),
    )?;
    Ok(format!(
        "residuals below 1e-90 at D = 100; Lambda(3)/Lambda(5) = 14/9 stable; candidate filter: {}",
        seen.join(", ")
    ))
}

fn criterion_8() -> Outcome {
    let f5 = Arc::new(ResidueField::standard(5, 1).unwrap());
    let f41 = Arc::new(ResidueField::standard(41, 1).unwrap());
    check(
        local_origin_rarity(4, 2, &f5) == Ok(Rarity::Possible { t: 0 }),
        "F_5",
    )?;
    check(
        local_origin_rarity(4, 2, &f41) == Ok(Rarity::Blocked),
        "F_41",
    )?;
    Ok("F_5 possible (t = 0), F_41 blocked".into())
}

fn criterion_9() -> Outcome {
    let target = CongruenceTarget::new(2, 4, 2).map_err(|e| e.to_string())?;
    let f = level_p_newform_from_traces(8, 2, 30)
        .map_err(|e| e.to_string())?
        .system;
    // Q(i), where 13 = (2 + 3i)(2 - 3i) splits as (13, i - 5)(13, i - 8)
    let ctx = NumberFieldCtx::new(PolyOverQ::from_ints([1, 0, 1])).map_err(|e| e.to_string())?;
    let pi = &NFElement::generator(ctx.clone()) - &NFElement::from_int(ctx.clone(), 5);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let values: BTreeMap<u64, NFElement> = f
        .values
        .iter()
        .filter(|(&q, _)| q != 2 && q <= 50)
        .map(|(&q, aq)| {
            let base = NFElement::from_rational(
                ctx.clone(),
                aq.as_rational().unwrap() + rat_int(target.twist(q)),
            );
            (
                q,
                &base + &(&pi * &NFElement::from_int(ctx.clone(), rng.gen_range(1..10_000))),
            )
        })
        .collect();
    let big = EigenSystem {
        weight: 4,
        level: 2,
        ctx: ctx.clone(),
        values,
        normalized: true,
    };
    let rep = check_harder(&f, &big, &target, 13, 50).map_err(|e| e.to_string())?;
    let expected = rep
        .big_lambdas
        .iter()
        .position(|l| l.factor == vec![8, 1])
        .ok_or("prime (13, i - 5) not found")?;
    check(
        rep.pairs
            == vec![CongruencePair {
                lambda: 0,
                big_lambda: expected,
                embedding: 0,
            }],
        format!("pairs {:?}", rep.pairs),
    )?;
    let mut perturbed = 0;
    // q = ell is excluded from every check
    for &q in big.values.keys().filter(|&&q| q != 13) {
        let mut bad = big.clone();
        let v = bad.values.get_mut(&q).unwrap();
        *v = &*v + &NFElement::one(ctx.clone());
        let r = check_harder(&f, &bad, &target, 13, 50).map_err(|e| e.to_string())?;
        check(
            r.pairs.is_empty(),
            format!("perturbation at q = {q} survived"),
        )?;
        perturbed += 1;
    }
    Ok(format!(
        "exactly one pair found; all {perturbed} single-q perturbations rejected"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Ramanujan 691", criterion_1, Duration::from_secs(5)),
        (
            "Bernoulli and zeta criteria",
            criterion_2,
            Duration::from_secs(1),
        ),
        ("trace formula oracle", criterion_3, Duration::from_secs(60)),
        (
            "Satake engine soundness",
            criterion_4,
            Duration::from_secs(120),
        ),
        ("verdict pipeline", criterion_5, Duration::from_secs(5)),
        ("witness prime", criterion_6, Duration::from_secs(1)),
        (
            "L-function properties",
            criterion_7,
            Duration::from_secs(600),
        ),
        ("local-origin rarity", criterion_8, Duration::from_secs(1)),
        (
            "congruence round trip",
            criterion_9,
            Duration::from_secs(10),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) if took <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took {took:.2?}, budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {} [{tag}] {name} ({took:.2?}): {detail}", i + 1);
    }
    let _ = std::fs::remove_dir_all(scratch_dir());
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
