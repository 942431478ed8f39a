//! Integer factorization by trial division, Miller–Rabin and Pollard rho.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division bound used before switching to rho.
pub const TRIAL_BOUND: u64 = 100_000;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin with the first 13 prime bases; deterministic below
/// `3.3·10^24`, a strong probable-prime test beyond.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for &p in &MR_BASES {
        if *n == BigInt::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let nm1: BigInt = n - 1;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `None` when the iteration budget runs
/// out. `n` must be odd and composite.
fn rho(n: &BigInt, c: u64, budget: &mut u64) -> Option<BigInt> {
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let mut y = BigInt::from(2);
    let mut r = 1u64;
    let mut q = BigInt::one();
    let m = 64u64;
    loop {
        let x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r {
            let ys = y.clone();
            let steps = m.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                q = q * (&x - &y).abs() % n;
            }
            if *budget < steps {
                return None;
            }
            *budget -= steps;
            let g = q.gcd(n);
            if !g.is_one() {
                if g != *n {
                    return Some(g);
                }
                // backtrack one step at a time
                let mut ys = ys;
                loop {
                    ys = f(&ys);
                    let g = (&x - &ys).abs().gcd(n);
                    if !g.is_one() {
                        return (g != *n).then_some(g);
                    }
                }
            }
            k += steps;
        }
        r *= 2;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// Sign of the factored integer.
    pub sign: i32,
    /// `(prime, exponent)` pairs sorted by prime.
    #[serde(with = "pairs")]
    pub factors: Vec<(BigInt, u32)>,
    /// Unfactored composite cofactor, coprime to every listed prime.
    #[serde(with = "opt")]
    pub remainder: Option<BigInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.remainder.is_none()
    }

    pub fn valuation(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }
}

mod pairs {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(BigInt, u32)], s: S) -> Result<S::Ok, S::Error> {
        let out: Vec<(String, u32)> = v.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigInt, u32)>, D::Error> {
        let v = Vec::<(String, u32)>::deserialize(d)?;
        v.into_iter()
            .map(|(p, e)| p.parse().map(|p| (p, e)).map_err(serde::de::Error::custom))
            .collect()
    }
}

mod opt {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|x| x.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

fn strip(n: &mut BigInt, p: &BigInt) -> u32 {
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        *n = q;
        e += 1;
    }
}

/// Factors `n ≠ 0`, spending at most `budget` rho iterations.
pub fn factorize(n: &BigInt, budget: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::arg("cannot factor zero"));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut found: Vec<(BigInt, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND && !m.is_one() {
        if BigInt::from(p) * BigInt::from(p) > m {
            break;
        }
        let pb = BigInt::from(p);
        let e = strip(&mut m, &pb);
        if e > 0 {
            found.push((pb, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut pending = Vec::new();
    let mut remainder: Vec<BigInt> = Vec::new();
    if !m.is_one() {
        pending.push(m);
    }
    let mut budget = budget;
    while let Some(x) = pending.pop() {
        if is_probable_prime(&x) {
            found.push((x, 1));
            continue;
        }
        if x.to_u64().is_some_and(|v| v <= TRIAL_BOUND * TRIAL_BOUND) && p > TRIAL_BOUND {
            // trial division already covered every prime below √x
            found.push((x, 1));
            continue;
        }
        let split = (1..=20u64).find_map(|c| rho(&x, c, &mut budget));
        match split {
            Some(d) => {
                let e = x.clone() / &d;
                pending.push(d);
                pending.push(e);
            }
            None => remainder.push(x),
        }
    }
    // merge repeated primes
    found.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for (q, e) in found {
        match factors.last_mut() {
            Some((last, k)) if *last == q => *k += e,
            _ => factors.push((q, e)),
        }
    }
    let remainder = if remainder.is_empty() {
        None
    } else {
        Some(remainder.iter().product())
    };
    Ok(Factorization { sign, factors, remainder })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SimplePrime {
    Found {
        #[serde(with = "crate::bigser")]
        prime: BigInt,
    },
    /// Full factorization shows there is none.
    ProvenAbsent,
    /// No simple prime among the factors found; part of the integer is
    /// still unfactored.
    BudgetExhausted,
}

impl SimplePrime {
    pub fn prime(&self) -> Option<&BigInt> {
        match self {
            SimplePrime::Found { prime } => Some(prime),
            _ => None,
        }
    }
}

/// The largest prime `p ∉ exclude` with `ord_p(disc) = 1`.
pub fn find_simple_prime(disc: &BigInt, exclude: &[u64], budget: u64) -> Result<(SimplePrime, Factorization)> {
    if disc.is_zero() {
        return Err(Error::Inseparable);
    }
    let fac = factorize(disc, budget)?;
    let hit = fac
        .factors
        .iter()
        .filter(|(p, e)| *e == 1 && !exclude.iter().any(|&x| *p == BigInt::from(x)))
        .map(|(p, _)| p.clone())
        .max();
    let out = match hit {
        Some(p) => {
            if (disc % (&p * &p)).is_zero() || !(disc % &p).is_zero() {
                return Err(Error::internal(format!("{p} is not a simple prime of {disc}")));
            }
            SimplePrime::Found { prime: p }
        }
        None if fac.is_complete() => SimplePrime::ProvenAbsent,
        None => SimplePrime::BudgetExhausted,
    };
    Ok((out, fac))
}
