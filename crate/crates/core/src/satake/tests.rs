use super::*;
use proptest::prelude::*;
use sha2::{Digest, Sha256};

fn field(ell: u64, f: u32) -> Arc<ResidueField> {
    Arc::new(ResidueField::standard(ell, f).unwrap())
}

fn possible(id: TypeId, target: &SatakeQuadruple) -> bool {
    type_match(id.record(), target).unwrap().is_possible()
}

#[test]
fn table_is_frozen() {
    let digest = Sha256::digest(canonical_table_text().as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(
        hex,
        "cab3b3d659cb58321d07b14b3ff804d3d148139c69e716770d1ce508b2c565bd"
    );
    assert_eq!(TYPE_TABLE.len(), 17);
    for (rec, id) in TYPE_TABLE.iter().zip(TypeId::ALL) {
        assert_eq!(rec.type_id, id);
        assert_eq!(id.to_string().parse::<TypeId>().unwrap(), id);
    }
}

#[test]
fn new_paramodular_vectors() {
    use TypeId::*;
    assert_eq!(new_paramodular_types(), vec![IIa, IVc, Vb, Vc, VIc]);
    // A weaker inequality would also admit the spherical types.
    let loose: Vec<TypeId> = TYPE_TABLE
        .iter()
        .filter(|r| r.dim_kp > r.dim_gsp4zp)
        .map(|r| r.type_id)
        .collect();
    assert!(loose.contains(&I) && loose.contains(&IIIb));
}

#[test]
fn level_p_target_example() {
    let f = field(41, 1);
    let ts = target_quadruple(4, 10, 2, TargetSource::LevelPNewform, &f).unwrap();
    assert_eq!(ts.len(), 2);
    let plus = &ts[0];
    let expect: Vec<FFElement> = [11, 10, 8, 13]
        .iter()
        .map(|&e| FFElement::from_i64(f.clone(), 2).pow_u64(e))
        .collect();
    assert!(plus.same_multiset(&expect));
    assert_eq!(
        plus.to_string(),
        "[p^11, p^10, p^8, p^13] = [39, 40, 10, 33]"
    );
    assert_eq!(
        ts[1].symbolic[0],
        SymbolicEntry {
            sign: -1,
            exponent: 11
        }
    );
    assert!(target_quadruple(3, 10, 2, TargetSource::LevelPNewform, &f).is_err());
    assert!(target_quadruple(4, 2, 2, TargetSource::LevelPNewform, &f).is_err());
    assert!(target_quadruple(4, 10, 41, TargetSource::LevelPNewform, &f).is_err());
}

#[test]
fn admissible_at_forty_one() {
    use TypeId::*;
    let (set, witnesses) =
        admissible_types(4, 10, 2, &field(41, 1), TargetSource::LevelPNewform).unwrap();
    assert_eq!(set, [I, IIa, IIb].into_iter().collect());
    assert_eq!(witnesses[&IIa][0].parameters, "w = 1, X = 10");
}

#[test]
fn type_iv_survives_at_five() {
    let f = field(5, 1);
    let ts = target_quadruple(4, 10, 2, TargetSource::LevelPNewform, &f).unwrap();
    assert!(ts.iter().any(|t| possible(TypeId::IVc, t)));
    let ts41 = target_quadruple(4, 10, 2, TargetSource::LevelPNewform, &field(41, 1)).unwrap();
    for id in [
        TypeId::VIa,
        TypeId::VIc,
        TypeId::IVc,
        TypeId::Vb,
        TypeId::IIIa,
    ] {
        assert!(ts41.iter().all(|t| !possible(id, t)), "{id}");
    }
}

#[test]
fn obstructions_are_not_sufficient() {
    // p = 7 ≡ 1 mod 3, so the first type VI condition holds, yet with
    // e = -1 the target {-1, -1, 1, 1} is not of the form w{1, 1, 1, 1}.
    let f = field(3, 1);
    let ts = target_quadruple(2, 4, 7, TargetSource::LevelPNewform, &f).unwrap();
    let minus = ts.iter().find(|t| t.steinberg_sign == Some(-1)).unwrap();
    assert!(obstruction_predicts(Family::VI, 2, 7, &f, -1).unwrap());
    assert!(!possible(TypeId::VIc, minus));
    assert!(obstruction_congruences(Family::I, 2).is_err());
    assert!(obstruction_congruences(Family::II, 2).is_err());
    assert_eq!(obstruction_congruences(Family::III, 4).unwrap().len(), 7);
    let v: Vec<String> = obstruction_congruences(Family::V, 4)
        .unwrap()
        .iter()
        .map(|c| c.to_string())
        .collect();
    assert_eq!(v, ["p^1 ≡ -1", "p^3 ≡ -e", "p^2 ≡ -e"]);
}

#[test]
fn witness_primes() {
    for (ell, f, expect) in [(41, 1, 2), (11, 1, 2), (13, 1, 2)] {
        let l = witness_prime(ell, f).unwrap();
        assert_eq!(l, expect);
        assert_ne!(gl4_order_bound(l, f) % BigInt::from(ell), BigInt::zero());
    }
    assert!(witness_prime(11, 2)
        .unwrap_err()
        .to_string()
        .contains("guard violated"));
    assert!(borel_guard(41, 1, 1));
    assert!(!borel_guard(7, 1, 1));
    assert!(!borel_guard(41, 40, 1));
}

#[test]
fn rarity_examples() {
    assert_eq!(
        local_origin_rarity(4, 2, &field(5, 1)).unwrap(),
        Rarity::Possible { t: 0 }
    );
    assert_eq!(
        local_origin_rarity(4, 2, &field(41, 1)).unwrap(),
        Rarity::Blocked
    );
    assert_eq!(
        local_origin_rarity(2, 2, &field(7, 1)).unwrap(),
        Rarity::Possible { t: 2 }
    );
    assert!(local_origin_rarity(0, 2, &field(41, 1)).is_err());
}

#[test]
fn verdict_examples() {
    let v = verdict(4, 10, 2, 41, 1, 1).unwrap();
    assert_eq!(v.conclusion, Conclusion::NewParamodularForcedIIa);
    assert_eq!(v.conclusion.to_string(), "type IIa or level-1 replacement");
    assert_eq!(v.power_conditions, Some([true; 4]));
    assert_eq!(v.bernoulli_valuation, Some(0));

    let guard = verdict(2, 3, 2, 7, 1, 1).unwrap();
    assert_eq!(guard.conclusion, Conclusion::Inconclusive);
    assert!(guard.power_conditions.is_none() && guard.admissible_types.is_none());

    // 11^2 ≡ -1 mod 61, so 11^4 ≡ 1 and the second and fourth power conditions fail.
    let pw = verdict(4, 10, 11, 61, 1, 1).unwrap();
    assert_eq!(pw.power_conditions, Some([true, false, true, false]));
    assert_eq!(pw.conclusion, Conclusion::Inconclusive);
    assert!(!pw.witnesses.is_empty());

    // 683 divides 2^22 - 1.
    let ram = verdict(4, 10, 2, 683, 1, 1).unwrap();
    assert_eq!(ram.bernoulli_valuation, Some(1));
    assert_eq!(ram.conclusion, Conclusion::RamanujanCongruence);

    assert!(verdict(4, 10, 2, 19, 1, 1).is_err());
    assert!(verdict(4, 10, 2, 42, 1, 1).is_err());
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![
        2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn targets_have_the_expected_product(j in 0i64..12, k in 3i64..14, p in small_prime(), ell in small_prime()) {
        prop_assume!(p != ell && ell > 2);
        let f = field(ell, 1);
        for source in [TargetSource::LevelPNewform, TargetSource::LocalOrigin] {
            for t in target_quadruple(2 * j, k, p, source, &f).unwrap() {
                prop_assert_eq!(t.product(), t.p_power(1, 2 * t.weight - 2));
            }
        }
    }

    #[test]
    fn matches_imply_an_obstruction(j in 0i64..10, k in 3i64..12, p in small_prime(), ell in small_prime(), f in 1u32..3) {
        prop_assume!(p != ell && ell > 2);
        let fld = field(ell, f);
        for t in target_quadruple(2 * j, k, p, TargetSource::LevelPNewform, &fld).unwrap() {
            let e = t.steinberg_sign.unwrap();
            for fam in [Family::III, Family::IV, Family::V, Family::VI] {
                let id = TYPE_TABLE.iter().find(|r| r.type_id.family() == fam).unwrap();
                if type_match(id, &t).unwrap().is_possible() {
                    prop_assert!(obstruction_predicts(fam, 2 * j, p, &fld, e).unwrap(), "{:?} at e = {}", fam, e);
                }
            }
        }
    }

    #[test]
    fn new_vectors_at_local_origin_need_small_order(j in 1i64..10, k in 3i64..12, p in small_prime(), ell in small_prime(), f in 1u32..3) {
        prop_assume!(p != ell && ell > 2);
        let fld = field(ell, f);
        let t = &target_quadruple(2 * j, k, p, TargetSource::LocalOrigin, &fld).unwrap()[0];
        let reached = new_paramodular_types().into_iter().any(|id| type_match(id.record(), t).unwrap().is_possible());
        if reached {
            prop_assert!(local_origin_rarity(2 * j, p, &fld).unwrap() != Rarity::Blocked);
        }
    }
}
