//! Exact arithmetic in the truncated local ring `O / λ^n`, where
//! `O = Z[ζ_ℓ]` and `λ = 1 - ζ_ℓ`.
//!
//! Elements are stored by their canonical λ-adic digits
//! `x = d_0 + d_1 λ + ... + d_{n-1} λ^{n-1}` with `0 <= d_i < ℓ`.
//! Arithmetic works directly in the λ-power basis: integer coefficient
//! vectors are normalised by carrying multiples of ℓ upward using the
//! Eisenstein relation satisfied by λ,
//!
//! ```text
//! ℓ = Σ_{k=2}^{ℓ} (-1)^k C(ℓ,k) λ^{k-1},
//! ```
//!
//! and a coefficient at position `i` only matters modulo `ℓ^⌈(n-i)/(ℓ-1)⌉`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, inv_mod, is_prime_u64, val_u64};
use crate::error::{Error, Result};

/// Largest prime ℓ accepted by [`RingCtx`].
pub const MAX_ELL: u32 = 97;

/// Truncation data for `O / λ^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingCtx {
    ell: u32,
    precision: usize,
}

impl RingCtx {
    pub fn new(ell: u32, precision: usize) -> Result<Self> {
        if ell < 3 || !is_prime_u64(ell as u64) {
            return Err(Error::arg(format!("ell = {ell} must be an odd prime")));
        }
        if ell > MAX_ELL {
            return Err(Error::arg(format!("ell = {ell} exceeds supported bound {MAX_ELL}")));
        }
        if precision == 0 {
            return Err(Error::arg("precision must be at least 1"));
        }
        let ctx = RingCtx { ell, precision };
        // carries are bounded by ℓ^{m} · max C(ℓ,k); keep them inside i128
        let m = ctx.int_precision() as u32 + 1;
        let bound = (ell as f64).ln() * (m as f64 + 2.0)
            + (binomial(ell as u64, ell as u64 / 2) as f64).ln();
        if bound > 118.0 * std::f64::consts::LN_2 {
            return Err(Error::arg(format!(
                "precision {precision} too large for ell = {ell}"
            )));
        }
        Ok(ctx)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Same prime, different precision.
    pub fn with_precision(&self, precision: usize) -> Result<Self> {
        RingCtx::new(self.ell, precision)
    }

    /// `⌈n / (ℓ-1)⌉`: rational integers are determined modulo `ℓ^this`.
    pub fn int_precision(&self) -> usize {
        self.precision.div_ceil(self.ell as usize - 1)
    }

    fn check_same(&self, other: &RingCtx) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }

    /// Canonical digits of an integer coefficient vector in the λ-power basis.
    fn normalize(&self, mut coeffs: Vec<i128>) -> Vec<u32> {
        let n = self.precision;
        let ell = self.ell as i128;
        coeffs.resize(n.max(coeffs.len()), 0);
        coeffs.truncate(n);
        let carry_row: Vec<i128> = (2..=self.ell as u64)
            .map(|k| {
                let c = binomial(self.ell as u64, k) as i128;
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let mut digits = vec![0u32; n];
        for i in 0..n {
            let m = (n - i).div_ceil(self.ell as usize - 1) as u32;
            let modulus = ell.pow(m);
            let c = coeffs[i].rem_euclid(modulus);
            digits[i] = (c % ell) as u32;
            let q = c / ell;
            if q != 0 {
                for (off, b) in carry_row.iter().enumerate() {
                    let pos = i + off + 1;
                    if pos >= n {
                        break;
                    }
                    coeffs[pos] += q * b;
                }
            }
        }
        digits
    }
}

impl fmt::Display for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O/λ^{} (ℓ = {})", self.precision, self.ell)
    }
}

/// An element of `O / λ^n` in canonical λ-adic digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CycloEltRepr", into = "CycloEltRepr")]
pub struct CycloElt {
    ctx: RingCtx,
    digits: Vec<u32>,
}

/// Wire form: `{"ell": .., "precision": .., "digits": [..]}`.
#[derive(Serialize, Deserialize)]
struct CycloEltRepr {
    ell: u32,
    precision: usize,
    digits: Vec<u32>,
}

impl From<CycloElt> for CycloEltRepr {
    fn from(x: CycloElt) -> Self {
        CycloEltRepr {
            ell: x.ctx.ell,
            precision: x.ctx.precision,
            digits: x.digits,
        }
    }
}

impl TryFrom<CycloEltRepr> for CycloElt {
    type Error = Error;

    fn try_from(r: CycloEltRepr) -> Result<Self> {
        let ctx = RingCtx::new(r.ell, r.precision)?;
        CycloElt::from_digits(ctx, r.digits)
    }
}

impl CycloElt {
    /// Builds an element from explicit digits, which must already be canonical.
    pub fn from_digits(ctx: RingCtx, digits: Vec<u32>) -> Result<Self> {
        if digits.len() != ctx.precision {
            return Err(Error::arg(format!(
                "expected {} digits, got {}",
                ctx.precision,
                digits.len()
            )));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= ctx.ell) {
            return Err(Error::arg(format!("digit {d} out of range for ell = {}", ctx.ell)));
        }
        Ok(CycloElt { ctx, digits })
    }

    /// Reduces an arbitrary integer combination `Σ c_i λ^i`.
    pub fn from_lambda_coeffs(ctx: RingCtx, coeffs: &[i128]) -> Self {
        CycloElt {
            digits: ctx.normalize(coeffs.to_vec()),
            ctx,
        }
    }

    pub fn zero(ctx: RingCtx) -> Self {
        CycloElt {
            ctx,
            digits: vec![0; ctx.precision],
        }
    }

    pub fn one(ctx: RingCtx) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: RingCtx, z: i128) -> Self {
        Self::from_lambda_coeffs(ctx, &[z])
    }

    /// The uniformiser `λ = 1 - ζ`.
    pub fn lambda(ctx: RingCtx) -> Self {
        Self::from_lambda_coeffs(ctx, &[0, 1])
    }

    /// `λ^k` (zero once `k >= n`).
    pub fn lambda_pow(ctx: RingCtx, k: usize) -> Self {
        let mut coeffs = vec![0i128; k + 1];
        coeffs[k] = 1;
        Self::from_lambda_coeffs(ctx, &coeffs)
    }

    pub fn zeta(ctx: RingCtx) -> Self {
        Self::from_lambda_coeffs(ctx, &[1, -1])
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(ctx: RingCtx, k: i64) -> Self {
        let e = k.rem_euclid(ctx.ell as i64) as usize;
        // (1 - λ)^e expanded binomially
        let coeffs: Vec<i128> = (0..=e)
            .map(|i| {
                let c = binomial(e as u64, i as u64) as i128;
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        Self::from_lambda_coeffs(ctx, &coeffs)
    }

    /// Canonical form of an integer polynomial `Σ a_k ζ^k`.
    ///
    /// Any degree is accepted; the reduction uses `ζ = 1 - λ`.
    pub fn canonicalize(ctx: RingCtx, zeta_coeffs: &[i64]) -> Self {
        let zeta = Self::zeta(ctx);
        let mut acc = Self::zero(ctx);
        for &a in zeta_coeffs.iter().rev() {
            acc = acc.mul_unchecked(&zeta).add_unchecked(&Self::from_int(ctx, a as i128));
        }
        acc
    }

    pub fn random<R: Rng + ?Sized>(ctx: RingCtx, rng: &mut R) -> Self {
        let digits = (0..ctx.precision).map(|_| rng.gen_range(0..ctx.ell)).collect();
        CycloElt { ctx, digits }
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn ell(&self) -> u32 {
        self.ctx.ell
    }

    pub fn precision(&self) -> usize {
        self.ctx.precision
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit(&self, i: usize) -> u32 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    /// λ-adic valuation, `n` for the zero element.
    pub fn ord(&self) -> usize {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .unwrap_or(self.ctx.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn is_one(&self) -> bool {
        self.digits[0] == 1 && self.digits[1..].iter().all(|&d| d == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.digits[0] != 0
    }

    fn coeffs(&self) -> Vec<i128> {
        self.digits.iter().map(|&d| d as i128).collect()
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| a as i128 + b as i128)
            .collect();
        CycloElt {
            ctx: self.ctx,
            digits: self.ctx.normalize(coeffs),
        }
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        let coeffs = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| a as i128 - b as i128)
            .collect();
        CycloElt {
            ctx: self.ctx,
            digits: self.ctx.normalize(coeffs),
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.ctx.precision;
        let mut coeffs = vec![0i128; n];
        let (oa, ob) = (self.ord(), other.ord());
        for i in oa..n {
            let a = self.digits[i];
            if a == 0 {
                continue;
            }
            for j in ob..n - i {
                coeffs[i + j] += a as i128 * other.digits[j] as i128;
            }
        }
        CycloElt {
            ctx: self.ctx,
            digits: self.ctx.normalize(coeffs),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs().into_iter().map(|c| -c).collect();
        CycloElt {
            ctx: self.ctx,
            digits: self.ctx.normalize(coeffs),
        }
    }

    pub fn scale(&self, k: i128) -> Self {
        self.mul_unchecked(&Self::from_int(self.ctx, k))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Newton iteration `x ← x(2 - ax)`.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit { ord: self.ord() });
        }
        let ell = self.ctx.ell as i128;
        let d0 = inv_mod(self.digits[0] as i128, ell).expect("nonzero residue");
        let mut x = Self::from_int(self.ctx, d0);
        let two = Self::from_int(self.ctx, 2);
        let one = Self::one(self.ctx);
        for _ in 0..=usize::BITS {
            let ax = self.mul_unchecked(&x);
            if ax == one {
                return Ok(x);
            }
            x = x.mul_unchecked(&two.sub_unchecked(&ax));
        }
        Err(Error::internal("Newton inversion did not converge"))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.ctx.check_same(&other.ctx)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// Truncation to a lower precision.
    pub fn reduce_to(&self, precision: usize) -> Result<Self> {
        if precision > self.ctx.precision {
            return Err(Error::arg(format!(
                "cannot reduce precision {} to {precision}",
                self.ctx.precision
            )));
        }
        let ctx = self.ctx.with_precision(precision)?;
        Ok(CycloElt {
            ctx,
            digits: self.digits[..precision].to_vec(),
        })
    }

    /// The lift with zero digits above the current precision.
    pub fn lift_to(&self, precision: usize) -> Result<Self> {
        if precision < self.ctx.precision {
            return self.reduce_to(precision);
        }
        let ctx = self.ctx.with_precision(precision)?;
        let mut digits = self.digits.clone();
        digits.resize(precision, 0);
        Ok(CycloElt { ctx, digits })
    }

    /// Exact division by `λ^s`; the result has precision `n - s`.
    pub fn shift_down(&self, s: usize) -> Result<Self> {
        if self.ord() < s {
            return Err(Error::Domain(format!(
                "element of ord {} is not divisible by λ^{s}",
                self.ord()
            )));
        }
        if s >= self.ctx.precision {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by λ^{s} leaves no digits at precision {}",
                self.ctx.precision
            )));
        }
        let ctx = self.ctx.with_precision(self.ctx.precision - s)?;
        Ok(CycloElt {
            ctx,
            digits: self.digits[s..].to_vec(),
        })
    }

    /// Multiplication by `λ^s` at the same precision.
    pub fn shift_up(&self, s: usize) -> Self {
        let mut coeffs = vec![0i128; s];
        coeffs.extend(self.coeffs());
        CycloElt {
            ctx: self.ctx,
            digits: self.ctx.normalize(coeffs),
        }
    }

    /// Evaluates `Σ d_i μ^i` for the digits of `self`, by Horner's rule.
    fn substitute_lambda(&self, image: &Self) -> Self {
        let mut acc = Self::zero(self.ctx);
        for &d in self.digits.iter().rev() {
            acc = acc
                .mul_unchecked(image)
                .add_unchecked(&Self::from_int(self.ctx, d as i128));
        }
        acc
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        let image = Self::one(self.ctx).sub_unchecked(&Self::zeta_pow(self.ctx, -1));
        self.substitute_lambda(&image)
    }

    /// The Galois automorphism `σ_j : ζ ↦ ζ^j`.
    ///
    /// Precision is preserved since `σ_j(λ)` is λ times a unit.
    pub fn galois_apply(&self, j: i64) -> Result<Self> {
        let ell = self.ctx.ell as i64;
        if j.rem_euclid(ell) == 0 {
            return Err(Error::arg(format!("σ_j needs j prime to ℓ, got j = {j}")));
        }
        let image = Self::one(self.ctx).sub_unchecked(&Self::zeta_pow(self.ctx, j));
        Ok(self.substitute_lambda(&image))
    }

    /// `N(x) = Π_j σ_j(x)`, an element of the rational subring.
    pub fn norm(&self) -> Self {
        (1..self.ctx.ell as i64).fold(Self::one(self.ctx), |acc, j| {
            acc.mul_unchecked(&self.galois_apply(j).expect("j prime to ℓ"))
        })
    }

    /// `true` when every `σ_j` fixes the element modulo `λ^n`.
    pub fn is_galois_stable(&self) -> bool {
        (2..self.ctx.ell as i64).all(|j| self.galois_apply(j).expect("j prime to ℓ") == *self)
    }

    /// `ℓ / λ^{ℓ-1}` at this precision.
    pub(crate) fn ell_unit(ctx: RingCtx) -> Result<Self> {
        let e = ctx.ell as usize - 1;
        let wide = ctx.with_precision(ctx.precision + e)?;
        Self::from_int(wide, ctx.ell as i128).shift_down(e)
    }

    /// Reads the element as a rational integer, if it is one modulo `λ^n`.
    ///
    /// Returns `(value, modulus)` with `0 <= value < modulus = ℓ^⌈n/(ℓ-1)⌉`.
    pub fn as_rational_integer(&self) -> Option<(i128, i128)> {
        let ell = self.ctx.ell as i128;
        let e = self.ctx.ell as usize - 1;
        let mut x = self.clone();
        let mut value: i128 = 0;
        let mut scale: i128 = 1;
        loop {
            let c0 = x.digits[0] as i128;
            value += c0 * scale;
            scale *= ell;
            let rest = x.sub_unchecked(&Self::from_int(x.ctx, c0));
            let p = rest.precision();
            if p <= e {
                return rest.is_zero().then_some((value, scale));
            }
            if rest.ord() < e {
                return None;
            }
            let u = Self::ell_unit(rest.ctx.with_precision(p - e).ok()?).ok()?;
            x = rest.shift_down(e).ok()?.mul_unchecked(&u.inv().ok()?);
        }
    }

    /// Exact quotient `self / k` for a nonzero integer `k`, losing
    /// `(ℓ-1)·v_ℓ(k)` digits of precision.
    pub(crate) fn div_int_exact(&self, k: u64) -> Result<Self> {
        let v = val_u64(k, self.ctx.ell as u64) as usize;
        let s = v * (self.ctx.ell as usize - 1);
        let num = self.shift_down(s)?;
        let wide = self.ctx.with_precision(self.ctx.precision + s)?;
        let den = CycloElt::from_int(wide, k as i128).shift_down(s)?.reduce_to(num.precision())?;
        Ok(num.mul_unchecked(&den.inv()?))
    }

    /// ℓ-adic logarithm on `1 + λ^2 O`.
    pub fn log(&self) -> Result<Self> {
        let one = Self::one(self.ctx);
        let y = self.sub_unchecked(&one);
        if y.ord() < 2 {
            return Err(Error::Domain(format!(
                "log needs ord_λ(x - 1) >= 2, got {}",
                y.ord()
            )));
        }
        let n = self.ctx.precision;
        let ell = self.ctx.ell as u64;
        let e = ell as usize - 1;
        // term k has ord >= 2k - (ℓ-1) v_ℓ(k) >= k
        let useful = |k: u64| 2 * k as usize >= n + e * val_u64(k, ell) as usize;
        let ks: Vec<u64> = (1..n.max(2) as u64).filter(|&k| !useful(k)).collect();
        let guard = ks.iter().map(|&k| e * val_u64(k, ell) as usize).max().unwrap_or(0);
        let wide = self.ctx.with_precision(n + guard)?;
        let yw = y.lift_to(n + guard)?;
        let mut acc = Self::zero(self.ctx);
        let mut power = Self::one(wide);
        let mut last = 0;
        for &k in &ks {
            while last < k {
                power = power.mul_unchecked(&yw);
                last += 1;
            }
            let term = power.div_int_exact(k)?.reduce_to(n)?;
            acc = if k % 2 == 1 {
                acc.add_unchecked(&term)
            } else {
                acc.sub_unchecked(&term)
            };
        }
        Ok(acc)
    }

    /// ℓ-adic exponential on `λ^2 O`.
    pub fn exp(&self) -> Result<Self> {
        if self.ord() < 2 {
            return Err(Error::Domain(format!(
                "exp needs ord_λ(x) >= 2, got {}",
                self.ord()
            )));
        }
        let n = self.ctx.precision;
        let ell = self.ctx.ell as u64;
        let e = ell as usize - 1;
        let a = self.ord();
        let fact_val = |k: u64| -> usize {
            let mut v = 0;
            let mut p = ell;
            while p <= k {
                v += (k / p) as usize;
                p *= ell;
            }
            v
        };
        let ks: Vec<u64> = (1..n as u64)
            .filter(|&k| a * (k as usize) < n + e * fact_val(k))
            .collect();
        let guard = ks.iter().map(|&k| e * fact_val(k)).max().unwrap_or(0);
        let wide = self.ctx.with_precision(n + guard)?;
        let xw = self.lift_to(n + guard)?;
        let mut acc = Self::one(self.ctx);
        let mut power = Self::one(wide);
        let mut last = 0;
        for &k in &ks {
            while last < k {
                power = power.mul_unchecked(&xw);
                last += 1;
            }
            let mut term = power.clone();
            for i in 2..=k {
                term = term.div_int_exact(i)?;
            }
            acc = acc.add_unchecked(&term.reduce_to(n)?);
        }
        Ok(acc)
    }

    /// Integer coordinates `Σ d_i (1-ζ)^i` in the basis `1, ζ, …, ζ^{ℓ-2}`.
    ///
    /// Any representative works for lattice computations modulo `λ^n`.
    pub fn zeta_coordinates(&self) -> Vec<num_bigint::BigInt> {
        lambda_digits_to_zeta(self.ctx.ell, &self.digits)
    }
}

/// Expands `Σ c_i (1-ζ)^i` and reduces modulo `Φ_ℓ(ζ)` over the integers.
pub(crate) fn lambda_digits_to_zeta(ell: u32, coeffs: &[u32]) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let l = ell as usize;
    // running power (1-ζ)^i modulo Φ_ℓ, length ℓ-1
    let mut power = vec![BigInt::zero(); l - 1];
    power[0] = BigInt::from(1);
    let mut out = vec![BigInt::zero(); l - 1];
    for &c in coeffs {
        if c != 0 {
            for (o, p) in out.iter_mut().zip(&power) {
                *o += p * c;
            }
        }
        // multiply by (1 - ζ): shift, then reduce ζ^{ℓ-1} = -(1 + ζ + … + ζ^{ℓ-2})
        let top = power[l - 2].clone();
        let mut next = power.clone();
        for k in (1..l - 1).rev() {
            next[k] = &power[k] - &power[k - 1];
        }
        for v in next.iter_mut() {
            *v += &top;
        }
        power = next;
    }
    out
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]_{}", self.ctx.ell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(ell: u32, n: usize) -> RingCtx {
        RingCtx::new(ell, n).unwrap()
    }

    #[test]
    fn ctx_validation() {
        assert!(RingCtx::new(2, 3).is_err());
        assert!(RingCtx::new(9, 3).is_err());
        assert!(RingCtx::new(5, 0).is_err());
        assert!(RingCtx::new(3, 100).is_ok());
    }

    #[test]
    fn canonicalize_examples() {
        let l = CycloElt::canonicalize(ctx(3, 2), &[1, -1]);
        assert_eq!(l.digits(), &[0, 1]);
        assert_eq!(l.ord(), 1);
        assert_eq!(CycloElt::canonicalize(ctx(5, 2), &[0, 1]).digits(), &[1, 4]);
        assert_eq!(CycloElt::from_int(ctx(3, 3), 3).digits(), &[0, 0, 2]);
    }

    #[test]
    fn lambda_times_conjugate_is_three() {
        let c = ctx(3, 3);
        let a = CycloElt::canonicalize(c, &[1, -1]);
        let b = CycloElt::canonicalize(c, &[1, 0, -1]);
        assert_eq!(a.mul(&b).unwrap().digits(), &[0, 0, 2]);
    }

    #[test]
    fn zeta_has_order_ell() {
        for ell in [3, 5, 7, 11] {
            for n in [1, 4, 13] {
                let c = ctx(ell, n);
                assert!(CycloElt::zeta(c).pow(ell as u64).is_one());
                assert!(CycloElt::canonicalize(c, &{
                    let mut v = vec![0; ell as usize + 1];
                    v[ell as usize] = 1;
                    v
                })
                .is_one());
            }
        }
    }

    #[test]
    fn inverses() {
        let c = ctx(3, 2);
        assert_eq!(CycloElt::from_int(c, 2).inv().unwrap().digits(), &[2, 0]);
        let c = ctx(7, 9);
        let z = CycloElt::zeta(c);
        let zi = z.inv().unwrap();
        assert!(z.mul(&zi).unwrap().is_one());
        assert_eq!(zi, CycloElt::zeta_pow(c, 6));
        assert_eq!(
            CycloElt::lambda(c).inv(),
            Err(Error::NotAUnit { ord: 1 })
        );
    }

    #[test]
    fn conjugation_basics() {
        for ell in [3u32, 5, 7, 11] {
            let c = ctx(ell, 6);
            let lam = CycloElt::lambda(c);
            let s = lam.add(&lam.conjugate()).unwrap();
            assert!(s.ord() >= 2, "λ + λ̄ ≡ 0 mod λ² for ℓ = {ell}");
            assert_eq!(lam.conjugate().digit(1), ell - 1);
            let three = CycloElt::from_int(c, 3);
            assert_eq!(three.conjugate(), three);
        }
    }

    #[test]
    fn galois_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = ctx(7, 8);
        for _ in 0..10 {
            let x = CycloElt::random(c, &mut rng);
            assert_eq!(x.galois_apply(1).unwrap(), x);
            assert_eq!(x.galois_apply(6).unwrap(), x.conjugate());
            let ab = x.galois_apply(3).unwrap().galois_apply(5).unwrap();
            assert_eq!(ab, x.galois_apply(15).unwrap());
        }
        assert!(CycloElt::one(c).galois_apply(7).is_err());
    }

    #[test]
    fn rational_integers_round_trip() {
        let c = ctx(5, 9);
        let (v, m) = CycloElt::from_int(c, 1234).as_rational_integer().unwrap();
        assert_eq!(m, 125);
        assert_eq!(v, 1234 % 125);
        assert!(CycloElt::lambda(c).as_rational_integer().is_none());
        let (v, _) = CycloElt::from_int(c, -1).as_rational_integer().unwrap();
        assert_eq!(v, 124);
    }

    #[test]
    fn log_exp_examples() {
        let c = ctx(5, 7);
        assert!(CycloElt::one(c).log().unwrap().is_zero());
        let x = CycloElt::one(c).add(&CycloElt::lambda_pow(c, 2)).unwrap();
        assert_eq!(x.log().unwrap().exp().unwrap(), x);
        assert!(CycloElt::lambda(c).exp().is_err());
        assert!(CycloElt::zeta(c).log().is_err());
    }

    #[test]
    fn zeta_coordinates_of_lambda() {
        let c = ctx(5, 3);
        let coords = CycloElt::lambda(c).zeta_coordinates();
        let as_i64: Vec<i64> = coords.iter().map(|b| b.try_into().unwrap()).collect();
        assert_eq!(as_i64, vec![1, -1, 0, 0]);
    }

    #[test]
    fn json_round_trip() {
        let c = ctx(11, 5);
        let x = CycloElt::canonicalize(c, &[3, 1, 4, 1, 5]);
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with("{\"ell\":11,\"precision\":5,\"digits\":["));
        let y: CycloElt = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<CycloElt>(r#"{"ell":3,"precision":2,"digits":[0,3]}"#).is_err());
    }
}
