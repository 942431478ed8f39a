//! The twisted Demjanenko matrix `[n′(i·j⁻¹)]`, the constants `r_ℓ` and
//! `c_{ℓ,r}`, the relative class number `h_ℓ⁻`, and the exponents derived
//! from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime_u64, mult_order, primitive_root, val_big};
use crate::error::{Error, Result};
use crate::intmat::bareiss_det;
use crate::poly::IntPoly;

/// Largest `ℓ` accepted by [`h_minus`].
pub const H_MINUS_BOUND: u32 = 67;

fn check_pair(ell: u32, r: usize) -> Result<()> {
    if ell < 3 || !is_prime_u64(ell as u64) {
        return Err(Error::arg(format!("ℓ = {ell} is not an odd prime")));
    }
    if r < 2 {
        return Err(Error::arg(format!("r = {r} must be at least 2")));
    }
    if r % ell as usize == 0 {
        return Err(Error::arg(format!("ℓ = {ell} divides r = {r}")));
    }
    Ok(())
}

/// `2·n′(j) = 2⌊(ℓ−j)r/ℓ⌋ − (r−1)`, always an integer.
pub fn n_prime_twice(ell: u32, r: usize, j: u32) -> Result<i64> {
    check_pair(ell, r)?;
    if j == 0 || j >= ell {
        return Err(Error::arg(format!("j = {j} outside 1..{}", ell - 1)));
    }
    let fl = ((ell - j) as i64 * r as i64) / ell as i64;
    Ok(2 * fl - (r as i64 - 1))
}

/// `n′(j) = ⌊(ℓ−j)r/ℓ⌋ − (r−1)/2`.
pub fn n_prime(ell: u32, r: usize, j: u32) -> Result<BigRational> {
    let twice = n_prime_twice(ell, r, j)?;
    Ok(BigRational::new(BigInt::from(twice), BigInt::from(2)))
}

/// `n(j) = ⌊r(ℓ−j)/ℓ⌋`, the exponent of `σ_j` in the infinity type.
pub fn n_infinity(ell: u32, r: usize, j: u32) -> Result<i64> {
    check_pair(ell, r)?;
    if j == 0 || j >= ell {
        return Err(Error::arg(format!("j = {j} outside 1..{}", ell - 1)));
    }
    Ok(((ell - j) as i64 * r as i64) / ell as i64)
}

/// `(r_ℓ, c_{ℓ,r})` with `r_ℓ` the order of `r` modulo `ℓ`.
pub fn c_lr(ell: u32, r: usize) -> Result<(u64, BigInt)> {
    check_pair(ell, r)?;
    let r_ell = mult_order(r as u64 % ell as u64, ell as u64);
    let rb = BigInt::from(r);
    let c = if r_ell % 2 == 1 {
        let base: BigInt = Pow::pow(&rb, r_ell) - 1;
        Pow::pow(&base, (ell as u64 - 1) / (2 * r_ell))
    } else {
        let base: BigInt = Pow::pow(&rb, r_ell / 2) + 1;
        Pow::pow(&base, (ell as u64 - 1) / r_ell)
    };
    Ok((r_ell, c))
}

/// Multiplication in `Z[x]/(x^n − 1)`.
fn cyclic_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[(i + j) % n] += x * y;
        }
    }
    out
}

/// Relative class number of `Q(ζ_ℓ)` from the generalized Bernoulli
/// numbers of the odd characters, `h⁻ = 2ℓ ∏ (−B_{1,χ}/2)`.
pub fn h_minus(ell: u32) -> Result<BigInt> {
    h_minus_bounded(ell, H_MINUS_BOUND)
}

pub fn h_minus_bounded(ell: u32, bound: u32) -> Result<BigInt> {
    if ell < 3 || !is_prime_u64(ell as u64) {
        return Err(Error::arg(format!("ℓ = {ell} is not an odd prime")));
    }
    if ell > bound {
        return Err(Error::arg(format!("ℓ = {ell} exceeds the configured bound {bound}")));
    }
    let n = (ell - 1) as usize;
    let g = primitive_root(ell as u64);
    // powers g^i mod ℓ
    let mut pw = Vec::with_capacity(n);
    let mut x = 1u64;
    for _ in 0..n {
        pw.push(x);
        x = x * g % ell as u64;
    }
    // S_a = Σ_i (g^i mod ℓ) ζ_{ℓ−1}^{a i}, so B_{1,χ_a} = S_a / ℓ
    let mut prod = vec![BigInt::zero(); n];
    prod[0] = BigInt::one();
    let mut k = 0u32;
    for a in (1..n).step_by(2) {
        let mut s = vec![BigInt::zero(); n];
        for (i, &p) in pw.iter().enumerate() {
            s[(a * i) % n] += BigInt::from(p);
        }
        prod = cyclic_mul(&prod, &s, n);
        k += 1;
    }
    let (_, rem) = IntPoly::new(prod).divrem_monic(&IntPoly::cyclotomic(n))?;
    if rem.degree().unwrap_or(0) > 0 {
        return Err(Error::internal(format!("Bernoulli product for ℓ = {ell} is not rational")));
    }
    let p = rem.coeff(0);
    let two_ell = BigInt::from(2 * ell);
    let num = if k % 2 == 1 { -p } else { p } * &two_ell;
    let den: BigInt = Pow::pow(&two_ell, k);
    let (h, rest) = num.div_rem(&den);
    if !rest.is_zero() || !h.is_positive() {
        return Err(Error::internal(format!(
            "Bernoulli product for ℓ = {ell} gives the non-integral or non-positive value {num}/{den}"
        )));
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemjanenkoReport {
    pub ell: u32,
    pub r: usize,
    pub reps: Vec<u32>,
    #[serde(with = "crate::bigser::matrix")]
    pub matrix: Vec<Vec<BigRational>>,
    #[serde(with = "crate::bigser")]
    pub det: BigRational,
    pub det_sign: i32,
    /// Sign of `(−1)^{(ℓ−1)/2}`, the sign carried by the closed formula.
    pub formula_sign: i32,
    pub sign_matches_formula: bool,
    pub r_ell: u64,
    #[serde(with = "crate::bigser")]
    pub c_lr: BigInt,
    #[serde(with = "crate::bigser")]
    pub h_minus: BigInt,
    pub kappa_bound: i64,
    pub t: u32,
}

pub fn default_reps(ell: u32) -> Vec<u32> {
    (1..=(ell - 1) / 2).collect()
}

fn check_reps(ell: u32, reps: &[u32]) -> Result<()> {
    let half = ((ell - 1) / 2) as usize;
    if reps.len() != half {
        return Err(Error::arg(format!("need {half} representatives, got {}", reps.len())));
    }
    let mut seen = vec![false; ell as usize];
    for &c in reps {
        if c == 0 || c >= ell {
            return Err(Error::arg(format!("representative {c} outside 1..{}", ell - 1)));
        }
        for x in [c, ell - c] {
            if seen[x as usize] {
                return Err(Error::arg(format!("representatives overlap modulo ±1 at {c}")));
            }
            seen[x as usize] = true;
        }
    }
    Ok(())
}

/// Builds `[n′(i·j⁻¹)]_{i,j∈C}`, takes its exact determinant and checks
/// `|det| = h⁻·c/(2ℓ)`.
pub fn demjanenko_det(ell: u32, r: usize, reps: Option<&[u32]>) -> Result<DemjanenkoReport> {
    check_pair(ell, r)?;
    let reps: Vec<u32> = reps.map_or_else(|| default_reps(ell), |c| c.to_vec());
    check_reps(ell, &reps)?;
    let l = ell as i128;
    let mut twice: Vec<Vec<BigInt>> = Vec::with_capacity(reps.len());
    for &i in &reps {
        let mut row = Vec::with_capacity(reps.len());
        for &j in &reps {
            let jinv = inv_mod(j as i128, l).expect("unit");
            let idx = (i as i128 * jinv).rem_euclid(l) as u32;
            row.push(BigInt::from(n_prime_twice(ell, r, idx)?));
        }
        twice.push(row);
    }
    let k = reps.len() as u32;
    let det2 = bareiss_det(&twice);
    let det = BigRational::new(det2.clone(), Pow::pow(&BigInt::from(2), k));
    let (r_ell, c) = c_lr(ell, r)?;
    let h = h_minus(ell)?;
    let hc = &h * &c;
    let lhs = det2.abs() * BigInt::from(2 * ell);
    let rhs: BigInt = Pow::pow(&BigInt::from(2), k) * &hc;
    if lhs != rhs {
        return Err(Error::internal(format!(
            "|det| = {} but h⁻·c/(2ℓ) = {hc}/{}",
            det.abs(),
            2 * ell
        )));
    }
    let t = val_big(&det2, ell as u64).ok_or_else(|| Error::internal("zero determinant"))?;
    let v = val_big(&hc, ell as u64).ok_or_else(|| Error::internal("h⁻·c vanishes"))?;
    let det_sign = if det2.is_negative() { -1 } else { 1 };
    let formula_sign = if ((ell - 1) / 2) % 2 == 1 { -1 } else { 1 };
    Ok(DemjanenkoReport {
        ell,
        r,
        reps,
        matrix: twice
            .iter()
            .map(|row| row.iter().map(|x| BigRational::new(x.clone(), BigInt::from(2))).collect())
            .collect(),
        det,
        det_sign,
        formula_sign,
        sign_matches_formula: det_sign == formula_sign,
        r_ell,
        c_lr: c,
        h_minus: h,
        kappa_bound: v as i64 - 1,
        t,
    })
}

/// `(ord_ℓ(h⁻·c) − 1, ord_ℓ det 2[n′])`.
pub fn kappa_and_t(ell: u32, r: usize) -> Result<(i64, u32)> {
    let rep = demjanenko_det(ell, r, None)?;
    Ok((rep.kappa_bound, rep.t))
}

/// All admissible pairs `ℓ ∈ ells`, `r ∈ rs`, computed in parallel and
/// returned in grid order.
pub fn demjanenko_grid(ells: &[u32], rs: &[usize]) -> Vec<((u32, usize), Result<DemjanenkoReport>)> {
    let pairs: Vec<(u32, usize)> = ells
        .iter()
        .flat_map(|&l| rs.iter().filter(move |&&r| r % l as usize != 0).map(move |&r| (l, r)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(l, r)| ((l, r), demjanenko_det(l, r, None)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn n_prime_values() {
        assert_eq!(n_prime(11, 8, 1).unwrap(), q(7, 2));
        assert_eq!(n_infinity(11, 8, 1).unwrap(), 7);
        for ell in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for r in 2..=20usize {
                if r % ell as usize == 0 {
                    assert!(n_prime(ell, r, 1).is_err());
                    continue;
                }
                for j in 1..ell {
                    let a = n_prime(ell, r, j).unwrap();
                    assert_eq!(a, -n_prime(ell, r, ell - j).unwrap());
                    if r % 2 == 1 {
                        assert!(a.is_integer());
                    }
                }
            }
        }
    }

    #[test]
    fn c_values() {
        assert_eq!(c_lr(11, 8).unwrap(), (10, BigInt::from(32769)));
        assert_eq!(c_lr(3, 2).unwrap(), (2, BigInt::from(3)));
        assert_eq!(c_lr(3, 4).unwrap(), (1, BigInt::from(3)));
        assert!(c_lr(3, 6).is_err());
    }

    #[test]
    fn relative_class_numbers() {
        for ell in [3u32, 5, 7, 11, 13, 17, 19] {
            assert_eq!(h_minus(ell).unwrap(), BigInt::one(), "ℓ = {ell}");
        }
        assert_eq!(h_minus(23).unwrap(), BigInt::from(3));
        assert_eq!(h_minus(29).unwrap(), BigInt::from(8));
        assert_eq!(h_minus(31).unwrap(), BigInt::from(9));
        assert_eq!(h_minus(37).unwrap(), BigInt::from(37));
        assert!(h_minus(71).is_err());
    }

    #[test]
    fn determinant_examples() {
        let rep = demjanenko_det(3, 2, None).unwrap();
        assert_eq!(rep.matrix, vec![vec![q(1, 2)]]);
        assert_eq!(rep.det, q(1, 2));
        assert_eq!(rep.t, 0);
        assert!(!rep.sign_matches_formula);
        let rep = demjanenko_det(5, 2, None).unwrap();
        assert_eq!(rep.det.abs(), q(1, 2));
        assert_eq!(kappa_and_t(11, 8).unwrap(), (0, 0));
        let rep = demjanenko_det(11, 8, Some(&[1, 9, 3, 4, 6])).unwrap();
        assert_eq!(rep.t, 0);
        assert!(demjanenko_det(5, 2, Some(&[1, 4])).is_err());
        let json = serde_json::to_string(&rep).unwrap();
        let back: DemjanenkoReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn congruent_one_case() {
        // r ≡ 1 mod ℓ gives c = (r−1)^{(ℓ−1)/2}
        let (k, _) = kappa_and_t(5, 6).unwrap();
        assert_eq!(k, 2 - 1);
        let (k, _) = kappa_and_t(3, 10).unwrap();
        assert_eq!(k, 2 - 1);
    }
}
