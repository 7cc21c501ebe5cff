use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::integer::{mul_mod, pow_mod, valuation_bigint};
use crate::error::{Error, Result};

/// Exact rational number in lowest terms with positive denominator.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(n.into())
}

/// `ell`-adic valuation of a nonzero rational.
pub fn ord_at(x: &ExactRational, ell: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    Ok(valuation_bigint(x.numer(), ell) as i64 - valuation_bigint(x.denom(), ell) as i64)
}

/// Parse `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            s.trim().parse().map_err(|_| bad())?,
        )),
    }
}

pub fn format_rational(x: &ExactRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Image of an `ell`-integral rational in `Z/ell`.
pub fn reduce_mod(x: &ExactRational, ell: u64) -> Result<u64> {
    let m = BigInt::from(ell);
    let d = x.denom().mod_floor(&m);
    if d.is_zero() {
        return Err(Error::NotIntegral { ell });
    }
    let n = x.numer().mod_floor(&m).to_u64().unwrap();
    let d = d.to_u64().unwrap();
    Ok(mul_mod(n, pow_mod(d, ell - 2, ell), ell))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(ord_at(&rat(-691, 16), 691).unwrap(), 1);
        assert_eq!(ord_at(&rat(1, 1), 7).unwrap(), 0);
        assert_eq!(ord_at(&rat(49, 3), 7).unwrap(), 2);
        assert_eq!(ord_at(&rat(49, 3), 3).unwrap(), -1);
        assert_eq!(ord_at(&rat(0, 3), 3), Err(Error::ValuationOfZero));
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce_mod(&rat(1, 2), 7).unwrap(), 4);
        assert_eq!(reduce_mod(&rat(-5, 1), 11).unwrap(), 6);
        assert_eq!(
            reduce_mod(&rat(1, 7), 7),
            Err(Error::NotIntegral { ell: 7 })
        );
    }

    proptest::proptest! {
        #[test]
        fn valuation_is_additive(a in 1i64..100_000, b in 1i64..100_000, c in 1i64..5000, d in 1i64..5000, li in 0usize..4) {
            let ell = [2u64, 3, 5, 691][li];
            let x = rat(a, c);
            let y = rat(-b, d);
            proptest::prop_assert_eq!(
                ord_at(&(&x * &y), ell).unwrap(),
                ord_at(&x, ell).unwrap() + ord_at(&y, ell).unwrap()
            );
        }
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["-691/2730", "5", "0", "-3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
