//! Bernoulli numbers and the divisibility quantities built from them.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::ExactRational;

fn cache() -> &'static Mutex<Vec<ExactRational>> {
    static CACHE: OnceLock<Mutex<Vec<ExactRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// `B_k` with the convention `B_1 = -1/2`, from the recurrence
/// `sum_{i=0}^{k} C(k+1, i) B_i = 0`.
pub fn bernoulli(k: usize) -> ExactRational {
    let mut table = cache().lock().expect("bernoulli cache poisoned");
    while table.len() <= k {
        let n = table.len();
        // binomials C(n+1, i) for i = 0..n
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (i, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += BigRational::from_integer(binom.clone()) * b;
            }
            binom = binom * BigInt::from(n + 1 - i) / BigInt::from(i + 1);
        }
        let next = -acc / BigRational::from_integer(BigInt::from(n + 1));
        table.push(next);
    }
    table[k].clone()
}

/// `B_k * prod_{p in sigma} (p^k - 1) / (2k)`, the rational whose numerator
/// carries the primes of the incomplete zeta value `zeta_Sigma(k) / pi^k`.
pub fn incomplete_zeta_quantity(k: u32, sigma: &[u64]) -> ExactRational {
    let mut x = bernoulli(k as usize) / BigRational::from_integer(BigInt::from(2 * k));
    for &p in sigma {
        let euler = BigInt::from(p).pow(k) - 1;
        x *= BigRational::from_integer(euler);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::integer::is_prime;
    use crate::exactmath::rational::rat;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(22), rat(854513, 138));
    }

    #[test]
    fn von_staudt_clausen() {
        for k in (2..=40).step_by(2) {
            let expected: u64 = (2..=k as u64 + 1)
                .filter(|&q| is_prime(q) && (k as u64).is_multiple_of(q - 1))
                .product();
            assert_eq!(bernoulli(k).denom(), &BigInt::from(expected), "k = {k}");
        }
    }

    #[test]
    fn ramanujan_quantity() {
        assert_eq!(incomplete_zeta_quantity(12, &[2]), rat(-691, 16));
        assert_eq!(incomplete_zeta_quantity(4, &[]), rat(-1, 240));
    }
}
