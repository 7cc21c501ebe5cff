//! Level-one modular forms as exact q-expansions: Eisenstein series, the
//! discriminant, the echelon cusp basis, Hecke operators and eigen-systems.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactmath::bernoulli::bernoulli;
use crate::exactmath::factor::factor_poly_rational;
use crate::exactmath::integer::{divisors, is_prime, sigma};
use crate::exactmath::linalg::{self, Matrix};
use crate::exactmath::rational::{format_rational, ExactRational};
use crate::numberfield::{NFElement, NumberFieldCtx, NumberFieldOps};

/// Truncated q-expansion `sum_{n < prec} a_n q^n` of a form of the given
/// weight and level.
#[derive(Clone, PartialEq, Eq)]
pub struct QExpansion {
    weight: i64,
    level: u64,
    coeffs: Vec<ExactRational>,
}

impl QExpansion {
    pub fn new(weight: i64, level: u64, coeffs: Vec<ExactRational>) -> Self {
        QExpansion {
            weight,
            level,
            coeffs,
        }
    }

    pub fn from_ints(weight: i64, level: u64, coeffs: Vec<BigInt>) -> Self {
        Self::new(
            weight,
            level,
            coeffs.into_iter().map(BigRational::from_integer).collect(),
        )
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// The coefficient of `q^n`; panics beyond the precision.
    pub fn coeff(&self, n: usize) -> &ExactRational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(prec);
        Self::new(self.weight, self.level, c)
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::new(
            self.weight,
            self.level,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(
        &self,
        other: &Self,
        op: impl Fn(&ExactRational, &ExactRational) -> ExactRational,
    ) -> Result<Self> {
        if self.weight != other.weight {
            return invalid(format!(
                "cannot add weights {} and {}",
                self.weight, other.weight
            ));
        }
        let prec = self.prec().min(other.prec());
        let coeffs = (0..prec)
            .map(|i| op(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Ok(Self::new(self.weight, self.level.max(other.level), coeffs))
    }

    /// Product, truncated to the smaller precision.
    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec().min(other.prec());
        let mut out = vec![BigRational::zero(); prec];
        for (i, a) in self.coeffs.iter().enumerate().take(prec) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(prec - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(self.weight + other.weight, self.level.max(other.level), out)
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = format_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (n, c.abs().is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{mag}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}

impl fmt::Debug for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QExpansion(k={}, N={}: {self})", self.weight, self.level)
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt], prec: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Normalized Eisenstein series `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n`.
pub fn eisenstein(k: i64, prec: usize) -> Result<QExpansion> {
    if k < 4 || k % 2 != 0 {
        return invalid(format!("Eisenstein series needs even weight >= 4, got {k}"));
    }
    let factor = -BigRational::from_integer(BigInt::from(2 * k)) / bernoulli(k as usize);
    let coeffs = (0..prec)
        .map(|n| {
            if n == 0 {
                BigRational::one()
            } else {
                &factor * BigRational::from_integer(sigma(n as u64, (k - 1) as u32))
            }
        })
        .collect();
    Ok(QExpansion::new(k, 1, coeffs))
}

/// `prod_{n >= 1} (1 - q^n)` from Euler's pentagonal number theorem.
fn euler_product(prec: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); prec];
    for j in 0i64.. {
        let mut hit = false;
        for g in [j * (3 * j - 1) / 2, j * (3 * j + 1) / 2] {
            if (g as usize) < prec {
                hit = true;
                out[g as usize] = if j % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
            }
        }
        if !hit {
            break;
        }
    }
    out
}

fn delta_ints(prec: usize) -> Vec<BigInt> {
    let p1 = euler_product(prec);
    let p2 = int_mul(&p1, &p1, prec);
    let p4 = int_mul(&p2, &p2, prec);
    let p8 = int_mul(&p4, &p4, prec);
    let p16 = int_mul(&p8, &p8, prec);
    let p24 = int_mul(&p16, &p8, prec);
    let mut out = vec![BigInt::zero(); prec];
    out[1..].clone_from_slice(&p24[..prec - 1]);
    out
}

/// The discriminant `q prod (1 - q^n)^24`.
pub fn delta(prec: usize) -> Result<QExpansion> {
    if prec < 2 {
        return invalid("delta needs precision at least 2");
    }
    Ok(QExpansion::from_ints(12, 1, delta_ints(prec)))
}

/// `tau(n)` for `1 <= n < prec`, index 0 unused.
pub fn ramanujan_tau(prec: usize) -> Vec<BigInt> {
    delta_ints(prec)
}

/// Dimension of `S_k(SL_2(Z))`.
pub fn cusp_dim_level1(k: i64) -> usize {
    if k < 12 || k % 2 != 0 {
        return 0;
    }
    let d = (k / 12) as usize;
    if k % 12 == 2 {
        d - 1
    } else {
        d
    }
}

/// Integer q-expansion of `E_4^a E_6^b` with `4a + 6b = w`.
fn e4e6_product(w: i64, prec: usize) -> Vec<BigInt> {
    let (a, b) = if w % 4 == 0 {
        (w / 4, 0)
    } else {
        ((w - 6) / 4, 1)
    };
    let e4 = eisenstein(4, prec).unwrap().to_integers().unwrap();
    let e6 = eisenstein(6, prec).unwrap().to_integers().unwrap();
    let mut acc = vec![BigInt::zero(); prec];
    acc[0] = BigInt::one();
    for _ in 0..a {
        acc = int_mul(&acc, &e4, prec);
    }
    for _ in 0..b {
        acc = int_mul(&acc, &e6, prec);
    }
    acc
}

/// Echelon basis `g_i = q^i + O(q^(d+1))`, `i = 1..d`, of `S_k(SL_2(Z))`,
/// built from `Delta^i E_4^a E_6^b`. Coefficients are integers.
pub fn miller_basis(k: i64, prec: usize) -> Result<Vec<QExpansion>> {
    if k % 2 != 0 {
        return invalid(format!("odd weight {k} has no level-one forms"));
    }
    let d = cusp_dim_level1(k);
    if d == 0 {
        return Ok(Vec::new());
    }
    if prec <= d {
        return Err(Error::InsufficientPrecision(format!(
            "precision {prec} must exceed the dimension {d} of S_{k}"
        )));
    }
    let delta = delta_ints(prec);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    let mut delta_pow = delta.clone();
    for i in 1..=d {
        if i > 1 {
            delta_pow = int_mul(&delta_pow, &delta, prec);
        }
        rows.push(int_mul(
            &delta_pow,
            &e4e6_product(k - 12 * i as i64, prec),
            prec,
        ));
    }
    // rows[i] = q^(i+1) + ...; clear entries above the diagonal
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = rows[i][j + 1].clone();
            if c.is_zero() {
                continue;
            }
            let rj = rows[j].clone();
            for (x, y) in rows[i].iter_mut().zip(&rj) {
                *x -= &c * y;
            }
        }
    }
    Ok(rows
        .into_iter()
        .map(|r| QExpansion::from_ints(k, 1, r))
        .collect())
}

/// `T_m` on a level-one form: `b_n = sum_{d | gcd(m, n)} d^(k-1) a_(mn/d^2)`,
/// returned at precision `floor(prec / m)`.
pub fn hecke_op(g: &QExpansion, m: u64) -> Result<QExpansion> {
    if m == 0 {
        return invalid("Hecke index must be positive");
    }
    if g.level() != 1 {
        return Err(Error::Unsupported(format!(
            "Hecke operators at level {}",
            g.level()
        )));
    }
    let out_prec = g.prec() / m as usize;
    if out_prec == 0 {
        return Err(Error::InsufficientPrecision(format!(
            "T_{m} needs precision at least {m}, have {}",
            g.prec()
        )));
    }
    let k = g.weight();
    let coeffs = (0..out_prec as u64)
        .map(|n| {
            let g_mn = num_integer::gcd(m, n);
            divisors(g_mn)
                .into_iter()
                .map(|d| {
                    let idx = (m * n / (d * d)) as usize;
                    g.coeff(idx) * BigRational::from_integer(BigInt::from(d).pow((k - 1) as u32))
                })
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect();
    Ok(QExpansion::new(k, 1, coeffs))
}

/// Matrix of `T_m` on the echelon basis; column `j` holds the coordinates of
/// `T_m g_j`.
pub fn hecke_matrix(basis: &[QExpansion], m: u64) -> Result<Matrix<ExactRational>> {
    let d = basis.len();
    let images = basis
        .iter()
        .map(|g| hecke_op(g, m))
        .collect::<Result<Vec<_>>>()?;
    if images.iter().any(|t| t.prec() <= d) {
        return Err(Error::InsufficientPrecision(format!(
            "T_{m} matrix needs precision at least {}",
            m as usize * (d + 1)
        )));
    }
    Ok((0..d)
        .map(|i| (0..d).map(|j| images[j].coeff(i + 1).clone()).collect())
        .collect())
}

/// Hecke eigenvalues `a_q` of a normalized eigenform, in its coefficient
/// field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenSystem {
    pub weight: i64,
    pub level: u64,
    pub ctx: Arc<NumberFieldCtx>,
    pub values: BTreeMap<u64, NFElement>,
    pub normalized: bool,
}

impl EigenSystem {
    pub fn degree(&self) -> usize {
        self.ctx.degree()
    }

    pub fn eigenvalue(&self, q: u64) -> Result<&NFElement> {
        self.values.get(&q).ok_or(Error::MissingEigenvalue { q })
    }

    pub fn primes(&self) -> Vec<u64> {
        self.values.keys().copied().collect()
    }

    /// `a_n` from the stored prime eigenvalues via multiplicativity and
    /// `a_(p^(e+1)) = a_p a_(p^e) - chi(p) p^(k-1) a_(p^(e-1))`, with
    /// `chi(p) = 0` for `p | level`.
    pub fn coefficient(&self, n: u64) -> Result<NFElement> {
        if n == 0 {
            return invalid("a_0 is not determined by eigenvalues");
        }
        let mut acc = NFElement::one(self.ctx.clone());
        for (p, e) in crate::exactmath::integer::factor_u64(n) {
            let ap = self.eigenvalue(p)?;
            let chi_pk = if self.level.is_multiple_of(p) {
                BigRational::zero()
            } else {
                BigRational::from_integer(BigInt::from(p).pow((self.weight - 1) as u32))
            };
            let mut prev = NFElement::one(self.ctx.clone());
            let mut cur = ap.clone();
            for _ in 1..e {
                let next = &(ap * &cur) - &prev.scale(&chi_pk);
                prev = cur;
                cur = next;
            }
            acc = &acc * &cur;
        }
        Ok(acc)
    }
}

/// A normalized eigenform with coefficients `a_0 .. a_(prec-1)` in its
/// coefficient field.
#[derive(Clone, Debug)]
pub struct Eigenform {
    pub weight: i64,
    pub ctx: Arc<NumberFieldCtx>,
    pub coeffs: Vec<NFElement>,
}

impl Eigenform {
    pub fn to_system(&self, primes: &[u64]) -> Result<EigenSystem> {
        let mut values = BTreeMap::new();
        for &q in primes {
            let a = self.coeffs.get(q as usize).ok_or_else(|| {
                Error::InsufficientPrecision(format!(
                    "a_{q} beyond precision {}",
                    self.coeffs.len()
                ))
            })?;
            values.insert(q, a.clone());
        }
        Ok(EigenSystem {
            weight: self.weight,
            level: 1,
            ctx: self.ctx.clone(),
            values,
            normalized: true,
        })
    }
}

/// One eigen-system per Galois orbit of newforms in `S_k(SL_2(Z))`, with
/// `a_q` for each requested prime.
pub fn eigen_systems_level1(k: i64, primes: &[u64], prec: usize) -> Result<Vec<EigenSystem>> {
    if let Some(&q) = primes.iter().find(|&&q| !is_prime(q)) {
        return invalid(format!("{q} is not prime"));
    }
    let d = cusp_dim_level1(k);
    let qmax = primes.iter().copied().max().unwrap_or(2) as usize;
    let needed = (qmax + 1).max(3 * (d + 1) + 1);
    if d > 0 && prec < needed {
        return Err(Error::InsufficientPrecision(format!(
            "weight {k} with primes up to {qmax} needs precision {needed}, have {prec}"
        )));
    }
    eigenforms_level1(k, prec)?
        .iter()
        .map(|f| f.to_system(primes))
        .collect()
}

/// Representatives of the Galois orbits of normalized eigenforms in
/// `S_k(SL_2(Z))`, to precision `prec`. The orbit field is generated by the
/// eigenvalue of `T_2`, or of `T_2 + c T_3` when `T_2` has a repeated
/// eigenvalue.
pub fn eigenforms_level1(k: i64, prec: usize) -> Result<Vec<Eigenform>> {
    let d = cusp_dim_level1(k);
    if d == 0 {
        return Ok(Vec::new());
    }
    let basis = miller_basis(k, prec)?;
    let t2 = hecke_matrix(&basis, 2)?;
    let mut op = t2.clone();
    let mut cp = linalg::charpoly(&op);
    let mut c = 0i64;
    let mut t3: Option<Matrix<ExactRational>> = None;
    while !factor_poly_rational(&cp)?
        .factors
        .iter()
        .all(|(_, e)| *e == 1)
    {
        c += 1;
        if c > 20 {
            return Err(Error::Numerical(format!(
                "no separating T_2 + c T_3 at weight {k}"
            )));
        }
        if t3.is_none() {
            t3 = Some(hecke_matrix(&basis, 3)?);
        }
        let t3m = t3.as_ref().unwrap();
        let cc = BigRational::from_integer(BigInt::from(c));
        op = (0..d)
            .map(|i| (0..d).map(|j| &t2[i][j] + &cc * &t3m[i][j]).collect())
            .collect();
        cp = linalg::charpoly(&op);
    }
    let mut out = Vec::new();
    for (factor, _) in factor_poly_rational(&cp)?.factors {
        let ctx = NumberFieldCtx::new(factor)?;
        let v = eigenvector(k, &op, ctx.clone())?;
        let coeffs = (0..prec)
            .map(|n| {
                (0..d).fold(NFElement::zero(ctx.clone()), |acc, i| {
                    &acc + &v[i].scale(basis[i].coeff(n))
                })
            })
            .collect();
        out.push(Eigenform {
            weight: k,
            ctx,
            coeffs,
        });
    }
    Ok(out)
}

/// Kernel vector of `op - theta` over `Q(theta)`, scaled so the first
/// coordinate (the `q^1` coefficient) is one.
fn eigenvector(
    k: i64,
    op: &Matrix<ExactRational>,
    ctx: Arc<NumberFieldCtx>,
) -> Result<Vec<NFElement>> {
    let d = op.len();
    let theta = NFElement::generator(ctx.clone());
    let lift = |x: &ExactRational| NFElement::from_rational(ctx.clone(), x.clone());
    let shifted: Matrix<NFElement> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let a = lift(&op[i][j]);
                    if i == j {
                        &a - &theta
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect();
    let kernel = linalg::nullspace(&NumberFieldOps(ctx.clone()), &shifted);
    if kernel.len() != 1 {
        return Err(Error::Numerical(format!(
            "eigenspace of dimension {} at weight {k}",
            kernel.len()
        )));
    }
    let v = &kernel[0];
    let a1_inv = v[0]
        .inv()
        .map_err(|_| Error::Numerical("eigenform with a_1 = 0".into()))?;
    Ok(v.iter().map(|x| x * &a1_inv).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::poly::PolyOverQ;
    use crate::exactmath::rational::{rat, rat_int};

    fn ints(v: &[i64]) -> Vec<ExactRational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(
            eisenstein(4, 3).unwrap().coeffs(),
            ints(&[1, 240, 2160]).as_slice()
        );
        assert_eq!(
            eisenstein(12, 2).unwrap().coeffs(),
            &[rat(1, 1), rat(65520, 691)]
        );
        assert!(eisenstein(5, 3).is_err());
        assert!(eisenstein(2, 3).is_err());
        for k in (4..40).step_by(2) {
            assert!(eisenstein(k, 1).unwrap().coeff(0).is_one());
        }
    }

    #[test]
    fn delta_from_eisenstein_identity() {
        let prec = 100;
        let e4 = eisenstein(4, prec).unwrap();
        let e6 = eisenstein(6, prec).unwrap();
        let lhs = delta(prec).unwrap().scale(&rat_int(1728));
        let rhs = e4.mul(&e4).mul(&e4).sub(&e6.mul(&e6)).unwrap();
        assert_eq!(lhs.coeffs(), rhs.coeffs());
        let d = delta(3).unwrap();
        assert_eq!(d.coeffs(), ints(&[0, 1, -24]).as_slice());
    }

    #[test]
    fn tau_from_identity_up_to_200() {
        let prec = 201;
        let e4 = eisenstein(4, prec).unwrap();
        let e6 = eisenstein(6, prec).unwrap();
        let rhs = e4
            .mul(&e4)
            .mul(&e4)
            .sub(&e6.mul(&e6))
            .unwrap()
            .scale(&rat(1, 1728));
        let tau = ramanujan_tau(prec);
        for (n, t) in tau.iter().enumerate().skip(1) {
            assert_eq!(rat_int(t.clone()), *rhs.coeff(n));
        }
    }

    #[test]
    fn miller_basis_shapes() {
        assert_eq!(miller_basis(12, 10).unwrap(), vec![delta(10).unwrap()]);
        assert!(miller_basis(10, 10).unwrap().is_empty());
        let b = miller_basis(24, 10).unwrap();
        assert_eq!(b.len(), 2);
        for (i, g) in b.iter().enumerate() {
            for j in 0..=2 {
                assert_eq!(g.coeff(j).is_one(), j == i + 1);
                if j != i + 1 {
                    assert!(g.coeff(j).is_zero());
                }
            }
        }
        assert_eq!(
            miller_basis(24, 2),
            Err(Error::InsufficientPrecision(
                "precision 2 must exceed the dimension 2 of S_24".into()
            ))
        );
        for k in (12..=60).step_by(2) {
            assert_eq!(miller_basis(k, 20).unwrap().len(), cusp_dim_level1(k));
        }
    }

    #[test]
    fn hecke_on_delta() {
        let d = delta(60).unwrap();
        let t2 = hecke_op(&d, 2).unwrap();
        assert_eq!(t2.prec(), 30);
        assert_eq!(t2.coeffs(), d.truncate(30).scale(&rat_int(-24)).coeffs());
        assert_eq!(hecke_op(&d, 1).unwrap(), d);
        let t6 = hecke_op(&d, 6).unwrap();
        let t2t3 = hecke_op(&hecke_op(&d, 3).unwrap(), 2).unwrap();
        assert_eq!(t6.coeffs(), t2t3.truncate(t6.prec()).coeffs());
        assert!(hecke_op(&delta(2).unwrap(), 3).is_err());
    }

    #[test]
    fn hecke_operators_commute() {
        for k in (12..=28).step_by(2) {
            let basis = miller_basis(k, 5 * 25 + 5).unwrap();
            if basis.is_empty() {
                continue;
            }
            let ms: Vec<_> = [2u64, 3, 5]
                .iter()
                .map(|&m| hecke_matrix(&basis, m).unwrap())
                .collect();
            for a in &ms {
                for b in &ms {
                    let f = linalg::Rationals;
                    assert_eq!(
                        linalg::mat_mul(&f, a, b),
                        linalg::mat_mul(&f, b, a),
                        "k = {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn weight_12_is_tau() {
        let sys = eigen_systems_level1(12, &[2, 3, 5, 7, 11, 13], 50).unwrap();
        assert_eq!(sys.len(), 1);
        let tau = ramanujan_tau(50);
        for q in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(
                sys[0].eigenvalue(q).unwrap().as_rational().unwrap(),
                rat_int(tau[q as usize].clone())
            );
        }
        assert!(eigen_systems_level1(10, &[2], 50).unwrap().is_empty());
    }

    #[test]
    fn weight_24_orbit() {
        let sys = eigen_systems_level1(24, &[2, 3, 5, 7], 60).unwrap();
        assert_eq!(sys.len(), 1);
        assert_eq!(
            *sys[0].ctx.minpoly(),
            PolyOverQ::from_ints([-20468736i64, -1080, 1])
        );
        assert!(matches!(
            eigen_systems_level1(24, &[2, 3, 5, 7], 9),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn eigen_systems_satisfy_hecke_recursion() {
        for k in [12i64, 16, 24, 30, 36] {
            let forms = eigenforms_level1(k, 30).unwrap();
            assert_eq!(
                forms.iter().map(|f| f.ctx.degree()).sum::<usize>(),
                cusp_dim_level1(k)
            );
            for f in &forms {
                // a_(q^2) read off the q-expansion, against the recursion
                for q in [2u64, 3, 5] {
                    let aq = &f.coeffs[q as usize];
                    let pk =
                        NFElement::from_int(f.ctx.clone(), BigInt::from(q).pow((k - 1) as u32));
                    assert_eq!(f.coeffs[(q * q) as usize], &(aq * aq) - &pk);
                }
                assert_eq!(f.coeffs[6], &f.coeffs[2] * &f.coeffs[3]);
                let sys = f.to_system(&[2, 3, 5, 7]).unwrap();
                for n in 1..30u64 {
                    if n.is_power_of_two()
                        || n % 7 == 0
                        || n % 11 == 0
                        || n % 13 == 0
                        || n % 17 == 0
                        || n % 19 == 0
                        || n % 23 == 0
                        || n % 29 == 0
                    {
                        continue;
                    }
                    assert_eq!(sys.coefficient(n).unwrap(), f.coeffs[n as usize], "n = {n}");
                }
            }
        }
    }
}
