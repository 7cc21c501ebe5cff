//! Thin helpers over `astro_float` with a fixed working precision.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::ExactRational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Bits per decimal digit, rounded up.
const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Working-precision context: a bit length and a constants cache.
pub struct RealCtx {
    bits: usize,
    cc: Consts,
}

impl RealCtx {
    /// Context carrying `digits` decimal digits plus `guard_bits`.
    pub fn new(digits: u32, guard_bits: usize) -> Result<Self> {
        let bits = (digits as f64 * BITS_PER_DIGIT).ceil() as usize + guard_bits;
        // mantissas are whole 64-bit words
        let bits = bits.div_ceil(64) * 64;
        let cc = Consts::new().map_err(|e| Error::Numerical(format!("constants cache: {e:?}")))?;
        Ok(Self { bits, cc })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn int(&self, n: &BigInt) -> BigFloat {
        if n.is_zero() {
            return BigFloat::from_word(0, self.bits);
        }
        let (sign, digits) = n.to_u64_digits();
        let s = if sign == BigSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let x = BigFloat::from_words(&digits, s, (64 * digits.len()) as i32);
        self.round(&x)
    }

    pub fn small(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.bits)
    }

    pub fn rational(&self, q: &ExactRational) -> BigFloat {
        self.div(&self.int(q.numer()), &self.int(q.denom()))
    }

    fn round(&self, x: &BigFloat) -> BigFloat {
        let mut y = x.clone();
        let _ = y.set_precision(self.bits, RM);
        y
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    /// Fail on NaN or infinity.
    pub fn check(&self, x: &BigFloat, what: &str) -> Result<()> {
        if x.is_nan() || x.is_inf() {
            return Err(Error::Numerical(format!("{what} is not finite")));
        }
        Ok(())
    }
}

/// Exact value of a finite float.
pub fn to_rational(x: &BigFloat) -> Option<ExactRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _, sign, exp, _) = x.as_raw_parts()?;
    let mut m = BigInt::from_slice(
        num_bigint::Sign::Plus,
        &words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect::<Vec<_>>(),
    );
    if sign == Sign::Neg {
        m = -m;
    }
    let shift = exp as i64 - 64 * words.len() as i64;
    Some(if shift >= 0 {
        BigRational::from_integer(m << shift as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-shift) as usize)
    })
}

/// `floor(log10 |q|)` for nonzero `q`.
fn decimal_exponent(q: &ExactRational) -> i64 {
    let n = q.numer().abs();
    let d = q.denom().clone();
    let mut e = n.to_string().len() as i64 - d.to_string().len() as i64;
    // adjust by at most one in each direction
    let ten = BigInt::from(10);
    let scaled = |e: i64| -> (BigInt, BigInt) {
        if e >= 0 {
            (n.clone(), &d * ten.pow(e as u32))
        } else {
            (&n * ten.pow((-e) as u32), d.clone())
        }
    };
    loop {
        let (a, b) = scaled(e);
        if a < b {
            e -= 1;
        } else if a >= &b * &ten {
            e += 1;
        } else {
            return e;
        }
    }
}

/// Scientific notation with `digits` significant digits (truncated).
pub fn format_sci(x: &BigFloat, digits: usize) -> String {
    let Some(q) = to_rational(x) else {
        return "NaN".into();
    };
    format_rational_sci(&q, digits)
}

pub fn format_rational_sci(q: &ExactRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let e = decimal_exponent(q);
    let shift = digits as i64 - 1 - e;
    let ten = BigInt::from(10);
    let a = q.abs();
    let scaled = if shift >= 0 {
        &a * BigRational::from_integer(ten.pow(shift as u32))
    } else {
        &a / BigRational::from_integer(ten.pow((-shift) as u32))
    };
    let mantissa = scaled.numer().div_floor(scaled.denom()).to_string();
    let sign = if q.is_negative() { "-" } else { "" };
    let (head, tail) = mantissa.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Number of leading decimal digits on which `a` and `b` agree, measured
/// as `-log10(|a - b| / |a|)`, capped at `cap`.
pub fn agreeing_digits(a: &ExactRational, b: &ExactRational, cap: i64) -> i64 {
    let diff = a - b;
    if diff.is_zero() {
        return cap;
    }
    if a.is_zero() {
        return 0;
    }
    let rel = (diff / a).abs();
    (-decimal_exponent(&rel) - 1).clamp(0, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn exact_round_trips() {
        let ctx = RealCtx::new(50, 0).unwrap();
        let big = BigInt::from(3).pow(100) * -7;
        assert_eq!(
            to_rational(&ctx.int(&big)).unwrap(),
            BigRational::from_integer(big)
        );
        assert_eq!(to_rational(&ctx.small(-5)).unwrap(), rat(-5, 1));
        let third = to_rational(&ctx.rational(&rat(1, 3))).unwrap();
        assert!(
            (third - rat(1, 3)).abs()
                < rat(1, 1) / BigRational::from_integer(BigInt::from(10).pow(50))
        );
    }

    #[test]
    fn pi_digits() {
        let mut ctx = RealCtx::new(40, 16).unwrap();
        let s = format_sci(&ctx.pi(), 30);
        assert_eq!(s, "3.14159265358979323846264338327e0");
        assert_eq!(format_rational_sci(&rat(-1, 800), 3), "-1.25e-3");
        assert_eq!(agreeing_digits(&rat(1, 1), &rat(1001, 1000), 50), 2);
    }
}
