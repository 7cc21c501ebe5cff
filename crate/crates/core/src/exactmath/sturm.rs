//! Exact real-root counting and isolation with Sturm sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::PolyOverQ;
use super::rational::ExactRational;

/// Sturm sequence of the squarefree part of `f`.
pub fn sturm_sequence(f: &PolyOverQ) -> Vec<PolyOverQ> {
    let g = f.gcd(&f.derivative());
    let sf = f.div_rem(&g).expect("nonzero gcd").0;
    let mut seq = vec![sf.clone(), sf.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero");
        seq.push(-&r);
    }
    seq.pop();
    seq
}

fn sign_changes(seq: &[PolyOverQ], x: &ExactRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots_in(f: &PolyOverQ, a: &ExactRational, b: &ExactRational) -> usize {
    let seq = sturm_sequence(f);
    sign_changes(&seq, a) - sign_changes(&seq, b)
}

/// Bound exceeding the absolute value of every complex root.
pub fn root_bound(f: &PolyOverQ) -> ExactRational {
    let lc = f.leading().abs();
    let m = f
        .coeffs()
        .iter()
        .take(f.coeffs().len() - 1)
        .map(|c| c.abs() / &lc)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    m + BigRational::one()
}

/// A real root located in the interval `(lo, hi]` of a squarefree polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub poly: PolyOverQ,
    pub lo: ExactRational,
    pub hi: ExactRational,
}

impl RealRoot {
    /// Bisect until `hi - lo <= 2^-bits`.
    pub fn refine(&mut self, bits: u64) {
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        if (&self.hi - &self.lo) <= width {
            return;
        }
        if self.poly.eval(&self.hi).is_zero() {
            self.lo = &self.hi - &width;
            return;
        }
        let hi_sign = self.poly.eval(&self.hi).is_positive();
        let two = BigRational::from_integer(2.into());
        while (&self.hi - &self.lo) > width {
            let mid = (&self.lo + &self.hi) / &two;
            let v = self.poly.eval(&mid);
            if v.is_zero() {
                self.hi = mid.clone();
                self.lo = &mid - &width;
                return;
            }
            if v.is_positive() == hi_sign {
                self.hi = mid;
            } else {
                self.lo = mid;
            }
        }
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }
}

/// Isolating intervals for the distinct real roots, in increasing order.
pub fn isolate_real_roots(f: &PolyOverQ) -> Vec<RealRoot> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = sturm_sequence(f);
    let sf = seq[0].clone();
    let r = root_bound(f);
    let two = BigRational::from_integer(2.into());
    let mut out = Vec::new();
    let mut stack = vec![(-r.clone(), r)];
    while let Some((a, b)) = stack.pop() {
        let n = sign_changes(&seq, &a) - sign_changes(&seq, &b);
        match n {
            0 => {}
            1 => out.push(RealRoot {
                poly: sf.clone(),
                lo: a,
                hi: b,
            }),
            _ => {
                let mid = (&a + &b) / &two;
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}
