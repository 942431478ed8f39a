//! Factorization patterns modulo primes, factorization over the integers,
//! and a sampling certificate for `Gal(f) = S_r`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Polynomials over `F_p`, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(
            p,
            f.coeffs().iter().map(|a| a.mod_floor(&pb).to_u64().expect("reduced")).collect(),
        )
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn x(p: u64) -> Self {
        FpPoly { p, c: vec![0, 1] }
    }

    fn one(p: u64) -> Self {
        FpPoly { p, c: vec![1] }
    }

    fn inv(&self, a: u64) -> u64 {
        crate::arith::pow_mod(a, self.p - 2, self.p)
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&lc) => {
                let i = self.inv(lc);
                Self::new(self.p, self.c.iter().map(|&a| a * i % self.p).collect())
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&0) + o.c.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&0) + self.p - o.c.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.degree();
        let li = self.inv(*d.c.last().expect("nonzero"));
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::new(p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd] * li % p;
            if c == 0 {
                continue;
            }
            q[k] = c;
            for (i, &b) in d.c.iter().enumerate() {
                r[k + i] = (r[k + i] + p - c * b % p) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::new(p, vec![]));
        let (mut t0, mut t1) = (Self::new(p, vec![]), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let li = self.inv(*r0.c.last().expect("nonzero gcd"));
        let sc = |x: &Self| Self::new(p, x.c.iter().map(|&a| a * li % p).collect());
        (sc(&r0), sc(&s0), sc(&t0))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| (i as u64 % self.p) * a % self.p)
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(d, product of the irreducible factors of degree d)`.
pub fn ddf(f: &FpPoly) -> Vec<(usize, FpPoly)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 0;
    while rest.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&pe, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() > 0 {
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
            out.push((d, g));
        }
    }
    if rest.degree() > 0 {
        out.push((rest.degree(), rest));
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus) for odd `p`.
pub fn edf(g: &FpPoly, d: usize, rng: &mut impl Rng) -> Vec<FpPoly> {
    let p = g.p;
    let n = g.degree();
    if n == d {
        return vec![g.monic()];
    }
    let e: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() == 0 {
            continue;
        }
        let b = a.pow_mod(&e, g).sub(&FpPoly::one(p));
        let h = g.gcd(&b);
        if h.degree() > 0 && h.degree() < n {
            let other = g.divrem(&h).0;
            let mut out = edf(&h, d, rng);
            out.extend(edf(&other, d, rng));
            return out;
        }
    }
}

/// Degrees of the irreducible factors of `f mod p`, sorted descending;
/// `None` when the reduction is not squarefree of full degree.
pub fn factor_degrees_mod(f: &IntPoly, p: u64) -> Option<Vec<usize>> {
    let fp = FpPoly::from_int_poly(f, p);
    if fp.degree() != f.degree()? || !fp.is_squarefree() {
        return None;
    }
    let mut out = Vec::new();
    for (d, g) in ddf(&fp) {
        out.extend(std::iter::repeat_n(d, g.degree() / d));
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Some(out)
}

/// Full factorization of `f mod p` into monic irreducibles.
pub fn factor_mod(f: &FpPoly, seed: u64) -> Vec<FpPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ f.p);
    let mut out = Vec::new();
    for (d, g) in ddf(f) {
        out.extend(edf(&g, d, &mut rng));
    }
    out
}

// ---- Hensel lifting and recombination over Z ----

fn sym_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn to_int(f: &FpPoly) -> IntPoly {
    IntPoly::new(f.c.iter().map(|&a| BigInt::from(a)).collect())
}

fn reduce_int(f: &IntPoly, m: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|a| a.mod_floor(m)).collect())
}

/// Lifts `f ≡ g·h (mod p)` with `g, h` monic and coprime to modulus `p^k`.
fn hensel_pair(f: &IntPoly, g: &FpPoly, h: &FpPoly, k: u32) -> (IntPoly, IntPoly) {
    let p = g.p;
    let pb = BigInt::from(p);
    let (_, _, t) = g.ext_gcd(h);
    let (mut gz, mut hz) = (to_int(g), to_int(h));
    let mut pk = pb.clone();
    for _ in 1..k {
        let diff = f.sub(&gz.mul(&hz));
        let e_int = IntPoly::new(diff.coeffs().iter().map(|a| a / &pk).collect());
        let e = FpPoly::from_int_poly(&e_int, p);
        // δg = t·e mod g, δh = (e − δg·h) / g
        let dg = t.mul(&e).rem(g);
        let dh = e.sub(&dg.mul(h)).divrem(g).0;
        gz = gz.add(&to_int(&dg).scale(&pk));
        hz = hz.add(&to_int(&dh).scale(&pk));
        pk *= &pb;
        gz = reduce_int(&gz, &pk);
        hz = reduce_int(&hz, &pk);
    }
    (gz, hz)
}

fn hensel_lift(f: &IntPoly, factors: &[FpPoly], k: u32) -> Vec<IntPoly> {
    if factors.len() == 1 {
        let m = BigInt::from(factors[0].p).pow(k);
        return vec![reduce_int(f, &m)];
    }
    let p = factors[0].p;
    let g = &factors[0];
    let h = factors[1..].iter().fold(FpPoly::one(p), |acc, u| acc.mul(u));
    let (gz, hz) = hensel_pair(f, g, &h, k);
    let mut out = vec![gz];
    out.extend(hensel_lift(&hz, &factors[1..], k));
    out
}

fn choose_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Factors a monic squarefree integer polynomial into monic irreducibles
/// over `Z` (Zassenhaus: factor modulo a good prime, Hensel lift,
/// recombine).
pub fn factor_over_z(f: &IntPoly) -> Result<Vec<IntPoly>> {
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    if f.discriminant()?.is_zero() {
        return Err(Error::NotSquarefree);
    }
    // among the first few good primes, use the one with fewest factors
    let mut best: Option<(usize, u64)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 8 {
        if is_prime_u64(p) {
            if let Some(degs) = factor_degrees_mod(f, p) {
                tried += 1;
                if best.is_none_or(|(c, _)| degs.len() < c) {
                    best = Some((degs.len(), p));
                }
            }
        }
        p += 2;
    }
    let (count, p) = best.expect("some good prime");
    if count == 1 {
        return Ok(vec![f.clone()]);
    }
    let local = factor_mod(&FpPoly::from_int_poly(f, p), 0x5eed);
    let norm1: BigInt = f.coeffs().iter().map(|a| a.abs()).sum();
    let bound = (BigInt::one() << (n + 1)) * norm1;
    let mut k = 1u32;
    while BigInt::from(p).pow(k) <= bound {
        k += 1;
    }
    let m = BigInt::from(p).pow(k);
    let mut lifted = hensel_lift(f, &local, k);
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut hit = None;
        for subset in choose_subsets(lifted.len(), s) {
            let prod = subset.iter().fold(IntPoly::one(), |acc, &i| acc.mul(&lifted[i]));
            let g = IntPoly::new(prod.coeffs().iter().map(|a| sym_mod(a, &m)).collect());
            let (q, r) = rest.divrem_monic(&g)?;
            if r.is_zero() {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                rest = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u)
                    .collect();
            }
            None => s += 1,
        }
    }
    found.push(rest);
    found.sort_by_key(|g| g.degree());
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaloisVerdict {
    SrCertified,
    Inconclusive,
    Reducible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub prime: u64,
    pub cycle_type: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisCertificate {
    pub verdict: GaloisVerdict,
    pub degree: usize,
    pub primes_sampled: usize,
    pub irreducible: Option<Witness>,
    pub transposition: Option<Witness>,
    pub prime_cycle: Option<Witness>,
    /// Rational factors when the verdict is `reducible`.
    pub factors: Vec<IntPoly>,
}

/// Some power of a permutation with this cycle type is a transposition:
/// exactly one 2-cycle, every other cycle of odd length.
fn gives_transposition(ct: &[usize]) -> bool {
    ct.iter().filter(|&&c| c == 2).count() == 1 && ct.iter().all(|&c| c == 2 || c % 2 == 1)
}

/// A prime `q` with `r/2 < q ≤ r` occurring as a cycle length; a power of
/// the permutation is then a `q`-cycle.
fn prime_cycle(ct: &[usize], r: usize) -> Option<usize> {
    ct.iter().copied().find(|&c| 2 * c > r && is_prime_u64(c as u64))
}

/// Samples cycle types of `f mod p` over the first `budget` good odd
/// primes. A transitive group containing a transposition and a `q`-cycle
/// with `q > r/2` prime is `S_r`.
pub fn galois_certificate(f: &IntPoly, budget: usize) -> Result<GaloisCertificate> {
    if !f.is_monic() {
        return Err(Error::NonMonic);
    }
    let r = f.degree().unwrap_or(0);
    if r < 2 {
        return Err(Error::arg("degree must be at least 2"));
    }
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let factors = factor_over_z(f)?;
    let mut cert = GaloisCertificate {
        verdict: GaloisVerdict::Inconclusive,
        degree: r,
        primes_sampled: 0,
        irreducible: None,
        transposition: None,
        prime_cycle: None,
        factors: Vec::new(),
    };
    if factors.len() > 1 {
        cert.verdict = GaloisVerdict::Reducible;
        cert.factors = factors;
        return Ok(cert);
    }
    const CHUNK: usize = 64;
    let mut p = 3u64;
    while cert.primes_sampled < budget {
        let mut chunk = Vec::with_capacity(CHUNK);
        while chunk.len() < CHUNK.min(budget - cert.primes_sampled) {
            if is_prime_u64(p) && !(&disc % p).is_zero() {
                chunk.push(p);
            }
            p += 2;
        }
        let types: Vec<(u64, Option<Vec<usize>>)> =
            chunk.par_iter().map(|&q| (q, factor_degrees_mod(f, q))).collect();
        for (q, ct) in types {
            cert.primes_sampled += 1;
            let Some(ct) = ct else { continue };
            let w = || Witness { prime: q, cycle_type: ct.clone() };
            if cert.irreducible.is_none() && ct.len() == 1 {
                cert.irreducible = Some(w());
            }
            if cert.transposition.is_none() && gives_transposition(&ct) {
                cert.transposition = Some(w());
            }
            if cert.prime_cycle.is_none() && prime_cycle(&ct, r).is_some() {
                cert.prime_cycle = Some(w());
            }
            if cert.irreducible.is_some() && cert.transposition.is_some() && cert.prime_cycle.is_some() {
                cert.verdict = GaloisVerdict::SrCertified;
                return Ok(cert);
            }
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn ddf_degrees() {
        // x^4 + 1 splits into linear factors mod 17, quadratics mod 3
        let f = parse_poly("x^4 + 1").unwrap();
        assert_eq!(factor_degrees_mod(&f, 17), Some(vec![1, 1, 1, 1]));
        assert_eq!(factor_degrees_mod(&f, 3), Some(vec![2, 2]));
        let g = parse_poly("x^2 - 2*x + 1").unwrap();
        assert_eq!(factor_degrees_mod(&g, 5), None);
    }

    #[test]
    fn edf_recovers_factors() {
        let f = FpPoly::from_int_poly(&parse_poly("x^6 - 1").unwrap(), 7);
        let fs = factor_mod(&f, 1);
        assert_eq!(fs.len(), 6);
        let prod = fs.iter().fold(FpPoly::one(7), |a, g| a.mul(g));
        assert_eq!(prod, f);
    }

    #[test]
    fn zassenhaus() {
        let f = parse_poly("x^4 + 1").unwrap();
        assert_eq!(factor_over_z(&f).unwrap(), vec![f.clone()]);
        let g = parse_poly("x^2 + x + 1").unwrap().mul(&parse_poly("x^3 - 2").unwrap());
        let fs = factor_over_z(&g).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].mul(&fs[1]), g);
        // x^2 + x + 1 divides x^8 + x + 1
        let h = parse_poly("x^8 + x + 1").unwrap();
        assert_eq!(
            factor_over_z(&h).unwrap(),
            vec![parse_poly("x^2 + x + 1").unwrap(), parse_poly("x^6 - x^5 + x^3 - x^2 + 1").unwrap()]
        );
        assert_eq!(factor_over_z(&parse_poly("x^8 - x - 1").unwrap()).unwrap().len(), 1);
        let c = IntPoly::cyclotomic(5).mul(&IntPoly::cyclotomic(7)).mul(&IntPoly::cyclotomic(9));
        assert_eq!(factor_over_z(&c).unwrap().len(), 3);
    }

    #[test]
    fn certificates() {
        let f = parse_poly("x^8 - x - 1").unwrap();
        let c = galois_certificate(&f, 500).unwrap();
        assert_eq!(c.verdict, GaloisVerdict::SrCertified);
        let f = parse_poly("x^8 + x + 1").unwrap();
        let c = galois_certificate(&f, 500).unwrap();
        assert_eq!(c.verdict, GaloisVerdict::Reducible);
        assert_eq!(c.factors.len(), 2);
        let f = parse_poly("x^4 + x + 1").unwrap();
        assert_eq!(galois_certificate(&f, 500).unwrap().verdict, GaloisVerdict::SrCertified);
        // Galois group of x^4 + 1 is V4
        let f = parse_poly("x^4 + 1").unwrap();
        assert_eq!(galois_certificate(&f, 300).unwrap().verdict, GaloisVerdict::Inconclusive);
        let f = parse_poly("x^4 + 2*x^2 + 1").unwrap();
        assert_eq!(galois_certificate(&f, 10).unwrap_err(), Error::NotSquarefree);
        let f = parse_poly("x^4 - 1").unwrap();
        assert_eq!(galois_certificate(&f, 10).unwrap().verdict, GaloisVerdict::Reducible);
    }
}
