//! Square matrices over `O / λ^n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycloElt, RingCtx};
use crate::error::{Error, Result};
use crate::fp::FMat;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatRepr", into = "MatRepr")]
pub struct MatLocal {
    ctx: RingCtx,
    dim: usize,
    entries: Vec<CycloElt>,
}

#[derive(Serialize, Deserialize)]
struct MatRepr {
    ell: u32,
    precision: usize,
    dim: usize,
    entries: Vec<Vec<u32>>,
}

impl From<MatLocal> for MatRepr {
    fn from(m: MatLocal) -> Self {
        MatRepr {
            ell: m.ctx.ell(),
            precision: m.ctx.precision(),
            dim: m.dim,
            entries: m.entries.iter().map(|e| e.digits().to_vec()).collect(),
        }
    }
}

impl TryFrom<MatRepr> for MatLocal {
    type Error = Error;

    fn try_from(r: MatRepr) -> Result<Self> {
        let ctx = RingCtx::new(r.ell, r.precision)?;
        if r.entries.len() != r.dim * r.dim {
            return Err(Error::arg(format!(
                "{} entries for a {}x{} matrix",
                r.entries.len(),
                r.dim,
                r.dim
            )));
        }
        let entries = r
            .entries
            .into_iter()
            .map(|d| CycloElt::from_digits(ctx, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatLocal {
            ctx,
            dim: r.dim,
            entries,
        })
    }
}

impl MatLocal {
    pub fn from_fn(ctx: RingCtx, dim: usize, mut f: impl FnMut(usize, usize) -> CycloElt) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let e = f(i, j);
                debug_assert_eq!(e.ctx(), ctx);
                entries.push(e);
            }
        }
        MatLocal { ctx, dim, entries }
    }

    pub fn from_entries(ctx: RingCtx, dim: usize, entries: Vec<CycloElt>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::arg("entry count does not match dimension"));
        }
        if let Some(e) = entries.iter().find(|e| e.ctx() != ctx) {
            return Err(Error::ContextMismatch {
                left: ctx.to_string(),
                right: e.ctx().to_string(),
            });
        }
        Ok(MatLocal { ctx, dim, entries })
    }

    pub fn zero(ctx: RingCtx, dim: usize) -> Self {
        Self::from_fn(ctx, dim, |_, _| CycloElt::zero(ctx))
    }

    pub fn identity(ctx: RingCtx, dim: usize) -> Self {
        Self::scalar(ctx, dim, &CycloElt::one(ctx))
    }

    pub fn scalar(ctx: RingCtx, dim: usize, c: &CycloElt) -> Self {
        Self::from_fn(ctx, dim, |i, j| if i == j { c.clone() } else { CycloElt::zero(ctx) })
    }

    pub fn diag(ctx: RingCtx, entries: &[CycloElt]) -> Self {
        let d = entries.len();
        Self::from_fn(ctx, d, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                CycloElt::zero(ctx)
            }
        })
    }

    /// Lifts an `F_ℓ` matrix using digit representatives.
    pub fn from_fmat(ctx: RingCtx, m: &FMat) -> Self {
        Self::from_fn(ctx, m.rows(), |i, j| CycloElt::from_int(ctx, m.get(i, j) as i128))
    }

    /// `Σ λ^i D_i` for a sequence of digit matrices.
    pub fn from_digit_matrices(ctx: RingCtx, digits: &[FMat]) -> Self {
        let dim = digits.first().map_or(0, |m| m.rows());
        Self::from_fn(ctx, dim, |i, j| {
            let coeffs: Vec<i128> = digits.iter().map(|m| m.get(i, j) as i128).collect();
            CycloElt::from_lambda_coeffs(ctx, &coeffs)
        })
    }

    /// Uniformly random matrix congruent to `I` modulo `λ^level`; level 0 gives
    /// an arbitrary matrix.
    pub fn random_level<R: Rng + ?Sized>(ctx: RingCtx, dim: usize, level: usize, rng: &mut R) -> Self {
        let n = ctx.precision();
        Self::from_fn(ctx, dim, |i, j| {
            let mut digits: Vec<u32> = (0..n)
                .map(|k| if k >= level { rng.gen_range(0..ctx.ell()) } else { 0 })
                .collect();
            if level > 0 && i == j {
                digits[0] = 1;
            }
            CycloElt::from_digits(ctx, digits).expect("digits in range")
        })
    }

    pub fn ctx(&self) -> RingCtx {
        self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloElt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloElt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[CycloElt] {
        &self.entries
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx.to_string(),
                right: other.ctx.to_string(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::arg(format!("dimensions {} and {} differ", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a.add_unchecked(b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip(other, |a, b| a.sub_unchecked(b)))
    }

    fn zip(&self, other: &Self, f: impl Fn(&CycloElt, &CycloElt) -> CycloElt) -> Self {
        MatLocal {
            ctx: self.ctx,
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&CycloElt) -> CycloElt) -> Self {
        MatLocal {
            ctx: self.ctx,
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let d = self.dim;
        Ok(Self::from_fn(self.ctx, d, |i, j| {
            (0..d).fold(CycloElt::zero(self.ctx), |acc, k| {
                acc.add_unchecked(&self.get(i, k).mul_unchecked(other.get(k, j)))
            })
        }))
    }

    pub fn scale(&self, c: &CycloElt) -> Self {
        self.map(|a| a.mul_unchecked(c))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ctx, self.dim, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose `A†`.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.ctx, self.dim, |i, j| self.get(j, i).conjugate())
    }

    pub fn trace(&self) -> CycloElt {
        (0..self.dim).fold(CycloElt::zero(self.ctx), |acc, i| acc.add_unchecked(self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.ctx, self.dim)
    }

    /// The digit matrix `A_k` of the λ-adic expansion.
    pub fn digit(&self, k: usize) -> FMat {
        FMat::from_fn(self.ctx.ell() as u64, self.dim, self.dim, |i, j| {
            self.get(i, j).digit(k) as i64
        })
    }

    pub fn digit_matrices(&self) -> Vec<FMat> {
        (0..self.ctx.precision()).map(|k| self.digit(k)).collect()
    }

    /// Largest `k <= n` with `A ≡ I (mod λ^k)`.
    pub fn level(&self) -> usize {
        let id = Self::identity(self.ctx, self.dim);
        let diff = self.sub(&id).expect("same shape");
        diff.entries.iter().map(|e| e.ord()).min().unwrap_or(self.ctx.precision())
    }

    pub fn min_ord(&self) -> usize {
        self.entries.iter().map(|e| e.ord()).min().unwrap_or(self.ctx.precision())
    }

    pub fn reduce_to(&self, precision: usize) -> Result<Self> {
        let ctx = self.ctx.with_precision(precision)?;
        let entries = self
            .entries
            .iter()
            .map(|e| e.reduce_to(precision))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatLocal { ctx, dim: self.dim, entries })
    }

    pub fn lift_to(&self, precision: usize) -> Result<Self> {
        let ctx = self.ctx.with_precision(precision)?;
        let entries = self
            .entries
            .iter()
            .map(|e| e.lift_to(precision))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatLocal { ctx, dim: self.dim, entries })
    }

    /// Determinant over `O/λ^n`, eliminating with pivots of minimal ord_λ.
    pub fn det_local(&self) -> CycloElt {
        let ctx = self.ctx;
        let n = ctx.precision();
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut det = CycloElt::one(ctx);
        let mut negate = false;
        for k in 0..d {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..d {
                for j in k..d {
                    let o = a[i * d + j].ord();
                    if o < n && best.is_none_or(|(bo, _, _)| o < bo) {
                        best = Some((o, i, j));
                    }
                }
            }
            let Some((v, pi, pj)) = best else {
                return CycloElt::zero(ctx);
            };
            if pi != k {
                for j in 0..d {
                    a.swap(pi * d + j, k * d + j);
                }
                negate = !negate;
            }
            if pj != k {
                for i in 0..d {
                    a.swap(i * d + pj, i * d + k);
                }
                negate = !negate;
            }
            let pivot = a[k * d + k].clone();
            det = det.mul_unchecked(&pivot);
            let unit_inv = pivot
                .shift_down(v)
                .and_then(|u| u.lift_to(n))
                .and_then(|u| u.inv())
                .expect("pivot has exact ord v");
            for i in k + 1..d {
                let e = &a[i * d + k];
                if e.is_zero() {
                    continue;
                }
                let q = e
                    .shift_down(v)
                    .and_then(|x| x.lift_to(n))
                    .expect("entries below the pivot have ord >= v")
                    .mul_unchecked(&unit_inv);
                for j in k..d {
                    let t = q.mul_unchecked(&a[k * d + j]);
                    a[i * d + j] = a[i * d + j].sub_unchecked(&t);
                }
            }
        }
        if negate {
            det.neg()
        } else {
            det
        }
    }

    /// `det_{Z_ℓ} A = N(det_O A)` as an integer modulo `ℓ^⌈n/(ℓ-1)⌉`.
    pub fn det_base(&self) -> (i128, i128) {
        self.det_local()
            .norm()
            .as_rational_integer()
            .expect("a norm is Galois stable, hence rational")
    }

    /// Inverse by Gauss-Jordan elimination on unit pivots.
    pub fn inverse(&self) -> Result<Self> {
        let ctx = self.ctx;
        let d = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(ctx, d);
        for k in 0..d {
            let Some(p) = (k..d).find(|&i| a.get(i, k).is_unit()) else {
                return Err(Error::NotAUnit { ord: self.det_local().ord() });
            };
            if p != k {
                for j in 0..d {
                    a.entries.swap(p * d + j, k * d + j);
                    inv.entries.swap(p * d + j, k * d + j);
                }
            }
            let s = a.get(k, k).inv()?;
            for j in 0..d {
                a.entries[k * d + j] = a.entries[k * d + j].mul_unchecked(&s);
                inv.entries[k * d + j] = inv.entries[k * d + j].mul_unchecked(&s);
            }
            for i in 0..d {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k).clone();
                for j in 0..d {
                    let t = f.mul_unchecked(a.get(k, j));
                    a.entries[i * d + j] = a.entries[i * d + j].sub_unchecked(&t);
                    let t = f.mul_unchecked(inv.get(k, j));
                    inv.entries[i * d + j] = inv.entries[i * d + j].sub_unchecked(&t);
                }
            }
        }
        Ok(inv)
    }

    /// Inverse of `I + X` with `X ≡ 0 (mod λ)` by the finite Neumann series.
    pub fn inverse_neumann(&self) -> Result<Self> {
        let level = self.level();
        if level == 0 {
            return Err(Error::Level("Neumann inverse needs A ≡ I (mod λ)".into()));
        }
        let id = Self::identity(self.ctx, self.dim);
        let x = self.sub(&id)?;
        let minus_x = x.map(|e| e.neg());
        let mut acc = id.clone();
        let mut power = id;
        for _ in 0..self.ctx.precision().div_ceil(level) {
            power = power.mul(&minus_x)?;
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    /// Group commutator `A B A^{-1} B^{-1}`.
    pub fn group_commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.mul(&self.inverse()?)?.mul(&other.inverse()?)
    }

    /// Multiplication-by-`A` as an integer `d(ℓ-1)` square matrix on the
    /// basis `ζ^k e_j`, using integral representatives of the entries.
    pub fn base_ring_matrix(&self) -> Vec<Vec<num_bigint::BigInt>> {
        use num_bigint::BigInt;
        use num_traits::Zero;
        let l = self.ctx.ell() as usize - 1;
        let d = self.dim;
        let size = d * l;
        let mut out = vec![vec![BigInt::zero(); size]; size];
        for i in 0..d {
            for j in 0..d {
                let coords = self.get(i, j).zeta_coordinates();
                // column (j, k) is a_ij · ζ^k expanded in row block i
                let mut col = coords.clone();
                for k in 0..l {
                    for (s, c) in col.iter().enumerate() {
                        out[i * l + s][j * l + k] = c.clone();
                    }
                    col = mul_by_zeta(&col);
                }
            }
        }
        out
    }
}

/// Multiplies ζ-coordinates by ζ, reducing with `Φ_ℓ`.
fn mul_by_zeta(v: &[num_bigint::BigInt]) -> Vec<num_bigint::BigInt> {
    let l = v.len();
    let top = v[l - 1].clone();
    let mut out = Vec::with_capacity(l);
    out.push(-top.clone());
    for k in 1..l {
        out.push(&v[k - 1] - &top);
    }
    out
}

impl std::fmt::Display for MatLocal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
