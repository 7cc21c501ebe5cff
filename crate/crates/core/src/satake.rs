//! Borel-induced representations of GSp(4, Q_p) and the elimination of
//! types by comparing Satake parameters modulo a prime.
//!
//! All parameters are scaled by `p^((k'-1)/2)`, so `nu^(1/2)` becomes
//! `p^(k'/2)` and every entry is an integral power of `p` up to sign or a
//! free character value. Type families share their L-parameter, so matching
//! is decided per family and reported per type.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::exactmath::{incomplete_zeta_quantity, is_prime, ord_at, FFElement, ResidueField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeId {
    I,
    IIa,
    IIb,
    IIIa,
    IIIb,
    IVa,
    IVb,
    IVc,
    IVd,
    Va,
    Vb,
    Vc,
    Vd,
    VIa,
    VIb,
    VIc,
    VId,
}

impl TypeId {
    pub const ALL: [TypeId; 17] = [
        TypeId::I,
        TypeId::IIa,
        TypeId::IIb,
        TypeId::IIIa,
        TypeId::IIIb,
        TypeId::IVa,
        TypeId::IVb,
        TypeId::IVc,
        TypeId::IVd,
        TypeId::Va,
        TypeId::Vb,
        TypeId::Vc,
        TypeId::Vd,
        TypeId::VIa,
        TypeId::VIb,
        TypeId::VIc,
        TypeId::VId,
    ];

    pub fn family(self) -> Family {
        use TypeId::*;
        match self {
            I => Family::I,
            IIa | IIb => Family::II,
            IIIa | IIIb => Family::III,
            IVa | IVb | IVc | IVd => Family::IV,
            Va | Vb | Vc | Vd => Family::V,
            VIa | VIb | VIc | VId => Family::VI,
        }
    }

    pub fn record(self) -> &'static ReprTypeRecord {
        &TYPE_TABLE[TypeId::ALL.iter().position(|&t| t == self).expect("listed")]
    }
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for TypeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TypeId::ALL
            .iter()
            .copied()
            .find(|t| format!("{t:?}").eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown representation type {s:?}")))
    }
}

/// One character `nu^(nu_twice/2)` times a product of free symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharacterEntry {
    pub nu_twice: i8,
    pub symbols: &'static str,
}

impl fmt::Display for CharacterEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.nu_twice {
            0 => write!(f, "{}", self.symbols),
            n if n % 2 == 0 => write!(f, "ν^{}{}", n / 2, self.symbols),
            n => write!(f, "ν^({n}/2){}", self.symbols),
        }
    }
}

/// A row of the classification of Borel-induced representations, with its
/// L-parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReprTypeRecord {
    pub type_id: TypeId,
    pub inducing_data: &'static str,
    pub conditions: &'static str,
    pub dim_gsp4zp: u8,
    pub dim_kp: u8,
    pub char_pattern: [CharacterEntry; 4],
    pub central_char: &'static str,
}

impl ReprTypeRecord {
    /// Whether the `K(p)`-fixed space is larger than what the two
    /// level-raising maps produce from the spherical vectors.
    pub fn has_new_paramodular_vector(&self) -> bool {
        self.dim_kp > 2 * self.dim_gsp4zp
    }

    /// One line per record, used for the golden-data checksum.
    pub fn canonical_line(&self) -> String {
        let chars: Vec<String> = self.char_pattern.iter().map(|c| c.to_string()).collect();
        format!(
            "{}|{}|{}|{}|{}|{}|{}",
            self.type_id,
            self.inducing_data,
            self.conditions,
            self.dim_gsp4zp,
            self.dim_kp,
            chars.join(", "),
            self.central_char
        )
    }
}

const fn ch(nu_twice: i8, symbols: &'static str) -> CharacterEntry {
    CharacterEntry { nu_twice, symbols }
}

const PAT_I: [CharacterEntry; 4] = [ch(0, "χ1χ2σ"), ch(0, "χ1σ"), ch(0, "χ2σ"), ch(0, "σ")];
const PAT_II: [CharacterEntry; 4] = [ch(0, "χ²σ"), ch(1, "χσ"), ch(-1, "χσ"), ch(0, "σ")];
const PAT_III: [CharacterEntry; 4] = [ch(1, "χσ"), ch(-1, "χσ"), ch(1, "σ"), ch(-1, "σ")];
const PAT_IV: [CharacterEntry; 4] = [ch(3, "σ"), ch(1, "σ"), ch(-1, "σ"), ch(-3, "σ")];
const PAT_V: [CharacterEntry; 4] = [ch(1, "σ"), ch(1, "ξσ"), ch(-1, "ξσ"), ch(-1, "σ")];
const PAT_VI: [CharacterEntry; 4] = [ch(1, "σ"), ch(1, "σ"), ch(-1, "σ"), ch(-1, "σ")];

const IND_I: &str = "χ1 × χ2 ⋊ σ";
const IND_II: &str = "ν^(1/2)χ × ν^(-1/2)χ ⋊ σ";
const IND_III: &str = "χ × ν ⋊ ν^(-1/2)σ";
const IND_IV: &str = "ν^2 × ν ⋊ ν^(-3/2)σ";
const IND_V: &str = "νξ × ξ ⋊ ν^(-1/2)σ";
const IND_VI: &str = "ν × 1_F× ⋊ ν^(-1/2)σ";

const COND_I: &str = "χ1, χ2 ≠ ν^±1, χ1 ≠ ν^±1 χ2^±1";
const COND_II: &str = "χ ≠ ν^±3/2, χ² ≠ ν^±1";
const COND_III: &str = "χ ≠ 1, ν^±2";
const COND_V: &str = "ξ² = 1, ξ ≠ 1";

const fn rec(
    type_id: TypeId,
    inducing_data: &'static str,
    conditions: &'static str,
    dim_gsp4zp: u8,
    dim_kp: u8,
    char_pattern: [CharacterEntry; 4],
    central_char: &'static str,
) -> ReprTypeRecord {
    ReprTypeRecord {
        type_id,
        inducing_data,
        conditions,
        dim_gsp4zp,
        dim_kp,
        char_pattern,
        central_char,
    }
}

/// The classification table, in the order of [`TypeId::ALL`].
pub static TYPE_TABLE: [ReprTypeRecord; 17] = [
    rec(TypeId::I, IND_I, COND_I, 1, 2, PAT_I, "χ1χ2σ²"),
    rec(TypeId::IIa, IND_II, COND_II, 0, 1, PAT_II, "(χσ)²"),
    rec(TypeId::IIb, IND_II, COND_II, 1, 1, PAT_II, "(χσ)²"),
    rec(TypeId::IIIa, IND_III, COND_III, 0, 0, PAT_III, "χσ²"),
    rec(TypeId::IIIb, IND_III, COND_III, 1, 2, PAT_III, "χσ²"),
    rec(TypeId::IVa, IND_IV, "", 0, 0, PAT_IV, "σ²"),
    rec(TypeId::IVb, IND_IV, "", 0, 0, PAT_IV, "σ²"),
    rec(TypeId::IVc, IND_IV, "", 0, 1, PAT_IV, "σ²"),
    rec(TypeId::IVd, IND_IV, "", 1, 1, PAT_IV, "σ²"),
    rec(TypeId::Va, IND_V, COND_V, 0, 0, PAT_V, "σ²"),
    rec(TypeId::Vb, IND_V, COND_V, 0, 1, PAT_V, "σ²"),
    rec(TypeId::Vc, IND_V, COND_V, 0, 1, PAT_V, "σ²"),
    rec(TypeId::Vd, IND_V, COND_V, 1, 0, PAT_V, "σ²"),
    rec(TypeId::VIa, IND_VI, "", 0, 0, PAT_VI, "σ²"),
    rec(TypeId::VIb, IND_VI, "", 0, 0, PAT_VI, "σ²"),
    rec(TypeId::VIc, IND_VI, "", 0, 1, PAT_VI, "σ²"),
    rec(TypeId::VId, IND_VI, "", 1, 1, PAT_VI, "σ²"),
];

/// Serialization of [`TYPE_TABLE`], one record per line.
pub fn canonical_table_text() -> String {
    TYPE_TABLE
        .iter()
        .map(|r| r.canonical_line() + "\n")
        .collect()
}

/// Types whose `K(p)`-fixed space contains a new vector.
pub fn new_paramodular_types() -> Vec<TypeId> {
    TYPE_TABLE
        .iter()
        .filter(|r| r.has_new_paramodular_vector())
        .map(|r| r.type_id)
        .collect()
}

/// What the genus-2 Satake parameters are compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetSource {
    /// Steinberg parameters of a level-`p` newform plus the two cyclotomic
    /// twists.
    LevelPNewform,
    /// Euler-factor congruence for a level-one form plus the twists.
    LocalOrigin,
}

/// `sign * p^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolicEntry {
    pub sign: i8,
    pub exponent: i64,
}

impl fmt::Display for SymbolicEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        write!(f, "{s}p^{}", self.exponent)
    }
}

/// Four scaled Satake parameters, compared as a multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatakeQuadruple {
    pub p: u64,
    /// `k' = j + 2k - 2`.
    pub weight: i64,
    pub source: TargetSource,
    /// Sign of the Steinberg parameters for [`TargetSource::LevelPNewform`].
    pub steinberg_sign: Option<i8>,
    pub symbolic: [SymbolicEntry; 4],
    pub entries: [FFElement; 4],
    pub scaled: bool,
}

fn signed_power(field: &Arc<ResidueField>, p: u64, sign: i8, exponent: i64) -> Result<FFElement> {
    let base = FFElement::from_i64(field.clone(), p as i64);
    let x = if exponent >= 0 {
        base.pow_u64(exponent as u64)
    } else {
        base.inv()?.pow_u64((-exponent) as u64)
    };
    Ok(if sign < 0 { -&x } else { x })
}

fn sorted_reprs(v: &[FFElement]) -> Vec<Vec<u64>> {
    let mut r: Vec<Vec<u64>> = v.iter().map(|x| x.repr().to_vec()).collect();
    r.sort();
    r
}

impl SatakeQuadruple {
    pub fn field(&self) -> &Arc<ResidueField> {
        self.entries[0].field()
    }

    /// `p^e` in the target's field.
    pub fn p_power(&self, sign: i8, exponent: i64) -> FFElement {
        signed_power(self.field(), self.p, sign, exponent).expect("p is a unit")
    }

    pub fn same_multiset(&self, other: &[FFElement]) -> bool {
        sorted_reprs(&self.entries) == sorted_reprs(other)
    }

    pub fn product(&self) -> FFElement {
        let mut acc = FFElement::one(self.field().clone());
        for e in &self.entries {
            acc = &acc * e;
        }
        acc
    }
}

impl fmt::Display for SatakeQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym: Vec<String> = self.symbolic.iter().map(|s| s.to_string()).collect();
        let val: Vec<String> = self.entries.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}] = [{}]", sym.join(", "), val.join(", "))
    }
}

fn check_jk(j: i64, k: i64) -> Result<()> {
    if k < 3 {
        return invalid(format!("k = {k} must be at least 3"));
    }
    if j < 0 || j % 2 != 0 {
        return invalid(format!("j = {j} must be even and non-negative"));
    }
    Ok(())
}

fn check_p(p: u64, field: &ResidueField) -> Result<()> {
    if !is_prime(p) {
        return invalid(format!("p = {p} is not prime"));
    }
    if p == field.ell() {
        return invalid(format!("p = {p} equals the residue characteristic"));
    }
    Ok(())
}

/// Scaled Satake parameters the genus-2 form must reproduce modulo the
/// prime. A level-`p` newform gives one quadruple per Steinberg sign:
/// `[e p^(k'/2), e p^(k'/2-1), p^(k-2), p^(j+k-1)]`. The local-origin case
/// gives `[p^(j+k), p^(k-3), p^(j+k-1), p^(k-2)]`.
pub fn target_quadruple(
    j: i64,
    k: i64,
    p: u64,
    source: TargetSource,
    field: &Arc<ResidueField>,
) -> Result<Vec<SatakeQuadruple>> {
    check_jk(j, k)?;
    check_p(p, field)?;
    let weight = j + 2 * k - 2;
    let half = weight / 2;
    let build = |sign: Option<i8>, symbolic: [SymbolicEntry; 4]| -> Result<SatakeQuadruple> {
        let mut entries = Vec::with_capacity(4);
        for s in &symbolic {
            entries.push(signed_power(field, p, s.sign, s.exponent)?);
        }
        Ok(SatakeQuadruple {
            p,
            weight,
            source,
            steinberg_sign: sign,
            symbolic,
            entries: entries.try_into().expect("four entries"),
            scaled: true,
        })
    };
    let e = |sign: i8, exponent: i64| SymbolicEntry { sign, exponent };
    match source {
        TargetSource::LevelPNewform => [1i8, -1]
            .iter()
            .map(|&s| {
                build(
                    Some(s),
                    [e(s, half), e(s, half - 1), e(1, k - 2), e(1, j + k - 1)],
                )
            })
            .collect(),
        TargetSource::LocalOrigin => Ok(vec![build(
            None,
            [e(1, j + k), e(1, k - 3), e(1, j + k - 1), e(1, k - 2)],
        )?]),
    }
}

/// Values of the free parameters realizing a match, with the pattern's
/// entries listed in the order of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub type_id: TypeId,
    pub parameters: String,
    pub values: [FFElement; 4],
}

/// Witnesses per admissible type.
pub type WitnessMap = BTreeMap<TypeId, Vec<Witness>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchOutcome {
    Impossible,
    Possible(Witness),
}

impl MatchOutcome {
    pub fn is_possible(&self) -> bool {
        matches!(self, MatchOutcome::Possible(_))
    }
}

/// The three ways to split four positions into two pairs.
const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];

/// Reorder `pattern` to line up with `target` when they agree as multisets.
fn align(target: &[FFElement; 4], pattern: &[FFElement]) -> Option<[FFElement; 4]> {
    let mut pool: Vec<FFElement> = pattern.to_vec();
    let mut out = Vec::with_capacity(4);
    for t in target {
        let i = pool.iter().position(|x| x == t)?;
        out.push(pool.swap_remove(i));
    }
    Some(out.try_into().expect("four entries"))
}

/// Decide whether the record's L-parameter, with trivial central character
/// and free unramified values in the target's field, reduces to the target.
pub fn type_match(record: &ReprTypeRecord, target: &SatakeQuadruple) -> Result<MatchOutcome> {
    let t = &target.entries;
    let field = target.field().clone();
    let half = target.weight / 2;
    let pk = target.p_power(1, half);
    let pk1 = target.p_power(1, half - 1);
    let p_sq = target.p_power(1, target.weight - 1);
    let id = record.type_id;
    let signs = [
        (1i8, FFElement::one(field.clone())),
        (-1i8, -&FFElement::one(field.clone())),
    ];
    let found = |parameters: String, values: [FFElement; 4]| {
        Ok(MatchOutcome::Possible(Witness {
            type_id: id,
            parameters,
            values,
        }))
    };
    match id.family() {
        Family::I => {
            // {S, P^2/S, U, P^2/U}
            for q in PAIRINGS {
                if &t[q[0]] * &t[q[1]] == p_sq && &t[q[2]] * &t[q[3]] == p_sq {
                    return found(format!("S = {}, U = {}", t[q[0]], t[q[2]]), t.clone());
                }
            }
        }
        Family::II => {
            // {X, P^2/X, w p^K, w p^(K-1)} with w = chi sigma (p) = +-1
            for (w, wf) in &signs {
                let fixed = [wf * &pk, wf * &pk1];
                for q in PAIRINGS {
                    for (a, b) in [(0, 2), (2, 0)] {
                        let (fa, fb) = ((q[a], q[a + 1]), (q[b], q[b + 1]));
                        let pair_ok = (t[fa.0] == fixed[0] && t[fa.1] == fixed[1])
                            || (t[fa.0] == fixed[1] && t[fa.1] == fixed[0]);
                        if pair_ok && &t[fb.0] * &t[fb.1] == p_sq {
                            return found(format!("w = {w}, X = {}", t[fb.0]), t.clone());
                        }
                    }
                }
            }
        }
        Family::III => {
            // {p^K / beta, p^(K-1) / beta, p^K beta, p^(K-1) beta}
            for repr in field.elements() {
                let beta = FFElement::from_repr(field.clone(), repr);
                if beta.is_zero() {
                    continue;
                }
                let bi = beta.inv()?;
                let pattern = [&pk * &bi, &pk1 * &bi, &pk * &beta, &pk1 * &beta];
                if let Some(values) = align(t, &pattern) {
                    return found(format!("beta = {beta}"), values);
                }
            }
        }
        Family::IV | Family::V | Family::VI => {
            for (w, wf) in &signs {
                let pattern: Vec<FFElement> = match id.family() {
                    Family::IV => [half + 1, half, half - 1, half - 2]
                        .iter()
                        .map(|&e| wf * &target.p_power(1, e))
                        .collect(),
                    Family::V => vec![wf * &pk, -&(wf * &pk), -&(wf * &pk1), wf * &pk1],
                    _ => vec![wf * &pk, wf * &pk, wf * &pk1, wf * &pk1],
                };
                if let Some(values) = align(t, &pattern) {
                    return found(format!("w = {w}"), values);
                }
            }
        }
    }
    Ok(MatchOutcome::Impossible)
}

/// Right-hand side of an obstruction congruence `p^exponent ≡ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rhs {
    One,
    MinusOne,
    /// The Steinberg sign `e` of the target.
    SteinbergSign,
    /// `-e`.
    MinusSteinbergSign,
    /// Either `1` or `-1`.
    PlusMinusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObstructionCondition {
    pub exponent: i64,
    pub rhs: Rhs,
}

impl ObstructionCondition {
    /// Whether `p^exponent ≡ rhs` in `field`, for Steinberg sign `e`.
    pub fn holds(&self, p: u64, field: &Arc<ResidueField>, e: i8) -> Result<bool> {
        let x = signed_power(field, p, 1, self.exponent)?;
        let one = FFElement::one(field.clone());
        let minus = -&one;
        Ok(match self.rhs {
            Rhs::One => x == one,
            Rhs::MinusOne => x == minus,
            Rhs::SteinbergSign => x == if e > 0 { one } else { minus },
            Rhs::MinusSteinbergSign => x == if e > 0 { minus } else { one },
            Rhs::PlusMinusOne => x == one || x == minus,
        })
    }
}

impl fmt::Display for ObstructionCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rhs = match self.rhs {
            Rhs::One => "1",
            Rhs::MinusOne => "-1",
            Rhs::SteinbergSign => "e",
            Rhs::MinusSteinbergSign => "-e",
            Rhs::PlusMinusOne => "±1",
        };
        write!(f, "p^{} ≡ {rhs}", self.exponent)
    }
}

/// Necessary conditions for a type III-VI parameter to match the level-`p`
/// newform target, one per case of the comparison.
pub fn obstruction_congruences(family: Family, j: i64) -> Result<Vec<ObstructionCondition>> {
    if j % 2 != 0 {
        return invalid(format!("j = {j} must be even"));
    }
    let c = |exponent: i64, rhs: Rhs| ObstructionCondition { exponent, rhs };
    let vi = vec![
        c(1, Rhs::One),
        c((j + 2) / 2, Rhs::SteinbergSign),
        c(j / 2, Rhs::SteinbergSign),
    ];
    let iv = vec![
        c((j + 4) / 2, Rhs::PlusMinusOne),
        c((j + 2) / 2, Rhs::PlusMinusOne),
        c(j / 2, Rhs::PlusMinusOne),
        c((j - 2) / 2, Rhs::PlusMinusOne),
    ];
    match family {
        Family::I | Family::II => Err(Error::InvalidInput(format!(
            "type {family:?} is unconditional"
        ))),
        Family::VI => Ok(vi),
        Family::V => Ok(vec![
            c(1, Rhs::MinusOne),
            c((j + 2) / 2, Rhs::MinusSteinbergSign),
            c(j / 2, Rhs::MinusSteinbergSign),
        ]),
        Family::IV => Ok(iv),
        Family::III => Ok(vi.into_iter().chain(iv).collect()),
    }
}

/// Whether some obstruction congruence of `family` holds for the target
/// with Steinberg sign `e`.
pub fn obstruction_predicts(
    family: Family,
    j: i64,
    p: u64,
    field: &Arc<ResidueField>,
    e: i8,
) -> Result<bool> {
    for c in obstruction_congruences(family, j)? {
        if c.holds(p, field, e)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `ell >= max(6f + 2, e + 2)`.
pub fn borel_guard(ell: u64, e: u32, f: u32) -> bool {
    ell >= (6 * f as u64 + 2).max(e as u64 + 2)
}

/// Smallest prime `l' != ell` with `l'^(3f)` and `l'^(4f)` both `≢ 1 mod ell`.
pub fn witness_prime(ell: u64, f: u32) -> Result<u64> {
    if !is_prime(ell) {
        return invalid(format!("{ell} is not prime"));
    }
    if ell < 6 * f as u64 + 2 {
        return invalid(format!("guard violated: {ell} < 6*{f} + 2"));
    }
    let m = BigInt::from(ell);
    let not_one = |l: u64, e: u64| BigInt::from(l).modpow(&BigInt::from(e), &m) != BigInt::from(1);
    (2u64..)
        .filter(|&l| l != ell && is_prime(l))
        .find(|&l| l % ell != 0 && not_one(l, 3 * f as u64) && not_one(l, 4 * f as u64))
        .ok_or_else(|| Error::Internal("no witness prime".into()))
}

/// `l'^(6f) (l'^f - 1)(l'^(2f) - 1)(l'^(3f) - 1)(l'^(4f) - 1)`, the order
/// bound for `GL_4` over `F_(l'^f)`.
pub fn gl4_order_bound(l: u64, f: u32) -> BigInt {
    let lf = BigInt::from(l).pow(f);
    let mut acc = lf.pow(6);
    for i in 1..=4u32 {
        acc *= lf.pow(i) - 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rarity {
    Blocked,
    Possible { t: u32 },
}

/// Whether `p^(j+2t) ≡ 1` in `field` for some `t = 0..=3`; the smallest
/// such `t` is reported.
pub fn local_origin_rarity(j: i64, p: u64, field: &Arc<ResidueField>) -> Result<Rarity> {
    if j <= 0 || j % 2 != 0 {
        return invalid(format!("j = {j} must be even and positive"));
    }
    check_p(p, field)?;
    for t in 0..=3u32 {
        if signed_power(field, p, 1, j + 2 * t as i64)?.is_one() {
            return Ok(Rarity::Possible { t });
        }
    }
    Ok(Rarity::Blocked)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// Either the local type is IIa or a level-one form replaces `f`.
    NewParamodularForcedIIa,
    Level1ReplacementPossible,
    RamanujanCongruence,
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::NewParamodularForcedIIa => "type IIa or level-1 replacement",
            Conclusion::Level1ReplacementPossible => "level-1 replacement possible",
            Conclusion::RamanujanCongruence => "Ramanujan congruence",
            Conclusion::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub j: i64,
    pub k: i64,
    pub p: u64,
    pub ell: u64,
    pub e: u32,
    pub f: u32,
    pub borel_guard: bool,
    /// `p^(j+2t-2) ≢ 1` for `t = 0..=3`; absent when the guard fails.
    pub power_conditions: Option<[bool; 4]>,
    /// `ord_ell(B_k' (p^k' - 1) / 2k')`; absent when the guard fails.
    pub bernoulli_valuation: Option<i64>,
    pub admissible_types: Option<BTreeSet<TypeId>>,
    pub conclusion: Conclusion,
    pub witnesses: BTreeMap<TypeId, Vec<Witness>>,
}

/// Types whose parameters can match either Steinberg-sign target in
/// `F_(ell^f)`, with witnesses.
pub fn admissible_types(
    j: i64,
    k: i64,
    p: u64,
    field: &Arc<ResidueField>,
    source: TargetSource,
) -> Result<(BTreeSet<TypeId>, WitnessMap)> {
    let targets = target_quadruple(j, k, p, source, field)?;
    let mut set = BTreeSet::new();
    let mut witnesses: BTreeMap<TypeId, Vec<Witness>> = BTreeMap::new();
    for rec in TYPE_TABLE.iter() {
        for t in &targets {
            if let MatchOutcome::Possible(w) = type_match(rec, t)? {
                set.insert(rec.type_id);
                witnesses.entry(rec.type_id).or_default().push(w);
            }
        }
    }
    Ok((set, witnesses))
}

/// Run the three gates in order: the Borel guard, the power conditions and
/// the Bernoulli valuation, then assemble the admissible types.
pub fn verdict(j: i64, k: i64, p: u64, ell: u64, e: u32, f: u32) -> Result<Verdict> {
    check_jk(j, k)?;
    if j == 0 {
        return invalid("j must be positive");
    }
    if !is_prime(ell) {
        return invalid(format!("ell = {ell} is not prime"));
    }
    if e == 0 || f == 0 {
        return invalid("e and f must be positive");
    }
    let weight = j + 2 * k - 2;
    if ell as i64 <= weight {
        return invalid(format!("ell = {ell} must exceed k' = {weight}"));
    }
    let field = Arc::new(ResidueField::standard(ell, f)?);
    check_p(p, &field)?;
    let mut out = Verdict {
        j,
        k,
        p,
        ell,
        e,
        f,
        borel_guard: borel_guard(ell, e, f),
        power_conditions: None,
        bernoulli_valuation: None,
        admissible_types: None,
        conclusion: Conclusion::Inconclusive,
        witnesses: BTreeMap::new(),
    };
    if !out.borel_guard {
        return Ok(out);
    }
    let mut powers = [false; 4];
    for (t, slot) in powers.iter_mut().enumerate() {
        *slot = !signed_power(&field, p, 1, j + 2 * t as i64 - 2)?.is_one();
    }
    out.power_conditions = Some(powers);
    let q = incomplete_zeta_quantity(weight as u32, &[p]);
    let val = if q.is_zero() {
        i64::MAX
    } else {
        ord_at(&q, ell)?
    };
    out.bernoulli_valuation = Some(val);
    let (set, witnesses) = admissible_types(j, k, p, &field, TargetSource::LevelPNewform)?;
    out.admissible_types = Some(set);
    out.witnesses = witnesses;
    out.conclusion = if !powers.iter().all(|&b| b) {
        Conclusion::Inconclusive
    } else if val > 0 {
        Conclusion::RamanujanCongruence
    } else {
        Conclusion::NewParamodularForcedIIa
    };
    Ok(out)
}

#[cfg(test)]
mod tests;
