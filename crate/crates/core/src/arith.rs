//! Small exact helpers over machine integers: primality, modular powers,
//! Legendre symbols, multiplicative orders.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // deterministic witness set for 64-bit inputs
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m))
}

/// Legendre symbol (a | p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        _ => -1,
    }
}

/// Multiplicative order of `a` modulo `p`; `a` must be coprime to `p`.
pub fn mult_order(a: u64, p: u64) -> u64 {
    let a = a % p;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, a, p);
        k += 1;
    }
    k
}

/// Smallest positive primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    (2..p).find(|&g| mult_order(g, p) == p - 1).unwrap_or(1)
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn non_residue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).unwrap_or(1)
}

/// ℓ-adic valuation of a nonzero integer.
pub fn val_u64(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero big integer; `None` for zero.
pub fn val_big(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn factorial_big(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn ipow_i128(base: i128, exp: u32) -> Option<i128> {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_small() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime_u64(14731));
        assert!(!is_prime_u64(15953673));
    }

    #[test]
    fn legendre_and_orders() {
        assert_eq!(legendre(8, 11), -1);
        assert_eq!(legendre(4, 3), 1);
        assert_eq!(mult_order(8, 11), 10);
        assert_eq!(mult_order(2, 5), 4);
        assert_eq!(primitive_root(23), 5);
        assert_eq!(inv_mod(3, 11), Some(4));
        assert_eq!(inv_mod(3, 9), None);
    }

    #[test]
    fn valuations() {
        assert_eq!(val_u64(32769, 11), 1);
        assert_eq!(val_big(&BigInt::from(-18), 3), Some(2));
        assert_eq!(binomial(8, 2), 28);
    }
}
