//! Diagonal Hermitian forms over `O/λ^n`, the groups GU ⊇ U ⊇ SU they
//! define, and the congruence filtration `SU(V/λ^n)_k`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime_u64, legendre, non_residue};
use crate::cyclotomic::{CycloElt, RingCtx};
use crate::error::{Error, Result};
use crate::fp::FMat;
use crate::matrix::MatLocal;

/// `Γ = diag(α_1, …, α_d)` with rational units `α_i`.
///
/// The form is stored independently of a truncation level; `gram` realises
/// it in any `O/λ^n` with the same ℓ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HermitianForm {
    ell: u32,
    gamma: Vec<i64>,
    sign: i32,
}

impl HermitianForm {
    pub fn new(ell: u32, gamma: Vec<i64>) -> Result<Self> {
        if ell < 3 || !is_prime_u64(ell as u64) {
            return Err(Error::arg(format!("ell = {ell} must be an odd prime")));
        }
        if gamma.is_empty() {
            return Err(Error::arg("a form needs at least one diagonal entry"));
        }
        if let Some(a) = gamma.iter().find(|&&a| a.rem_euclid(ell as i64) == 0) {
            return Err(Error::arg(format!("α = {a} is not a unit at ℓ = {ell}")));
        }
        let prod = gamma
            .iter()
            .fold(1i64, |acc, &a| acc * a.rem_euclid(ell as i64) % ell as i64);
        let sign = legendre(prod, ell as u64);
        Ok(HermitianForm { ell, gamma, sign })
    }

    /// `e^+ = I_d` or `e^- = diag(1, …, 1, α)` with the least non-residue α.
    pub fn standard(ell: u32, dim: usize, sign: i32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::arg("dimension must be positive"));
        }
        let mut gamma = vec![1i64; dim];
        if sign < 0 {
            gamma[dim - 1] = non_residue(ell as u64) as i64;
        }
        Self::new(ell, gamma)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[i64] {
        &self.gamma
    }

    /// Legendre class of `Π α_i`.
    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn gram(&self, ctx: RingCtx) -> MatLocal {
        let diag: Vec<CycloElt> = self
            .gamma
            .iter()
            .map(|&a| CycloElt::from_int(ctx, a as i128))
            .collect();
        MatLocal::diag(ctx, &diag)
    }

    pub fn gamma_mod_ell(&self) -> FMat {
        FMat::diag(self.ell as u64, &self.gamma)
    }

    pub fn gamma_inv_mod_ell(&self) -> FMat {
        let l = self.ell as i128;
        let inv: Vec<i64> = self
            .gamma
            .iter()
            .map(|&a| inv_mod(a as i128, l).expect("unit") as i64)
            .collect();
        FMat::diag(self.ell as u64, &inv)
    }

    fn check(&self, a: &MatLocal) -> Result<()> {
        if a.ctx().ell() != self.ell {
            return Err(Error::arg(format!(
                "matrix over ℓ = {} but form over ℓ = {}",
                a.ctx().ell(),
                self.ell
            )));
        }
        if a.dim() != self.dim() {
            return Err(Error::arg(format!(
                "matrix of size {} but form of rank {}",
                a.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Strongest group among GU ⊇ U ⊇ SU containing a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    Su,
    U { det: CycloElt },
    Gu { mu: CycloElt, det: CycloElt },
    /// First entry (zero-based) where `A†ΓA = μΓ` fails.
    NotMember { row: usize, col: usize },
}

impl Membership {
    pub fn is_su(&self) -> bool {
        matches!(self, Membership::Su)
    }

    pub fn is_unitary(&self) -> bool {
        matches!(self, Membership::Su | Membership::U { .. })
    }
}

/// The multiplier `μ` with `A†ΓA = μΓ`, or the first failing position.
pub fn multiplier(a: &MatLocal, f: &HermitianForm) -> Result<std::result::Result<CycloElt, (usize, usize)>> {
    f.check(a)?;
    let ctx = a.ctx();
    let g = f.gram(ctx);
    let m = a.dagger().mul(&g)?.mul(a)?;
    let mu = m.get(0, 0).mul(&CycloElt::from_int(ctx, f.gamma[0] as i128).inv()?)?;
    if !mu.is_unit() {
        return Ok(Err((0, 0)));
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let expect = if i == j {
                mu.mul(g.get(i, i))?
            } else {
                CycloElt::zero(ctx)
            };
            if *m.get(i, j) != expect {
                return Ok(Err((i, j)));
            }
        }
    }
    Ok(Ok(mu))
}

pub fn classify_membership(a: &MatLocal, f: &HermitianForm) -> Result<Membership> {
    let mu = match multiplier(a, f)? {
        Ok(mu) => mu,
        Err((row, col)) => return Ok(Membership::NotMember { row, col }),
    };
    let det = a.det_local();
    let lhs = det.conjugate().mul(&det)?;
    if lhs != mu.pow(a.dim() as u64) {
        return Err(Error::internal(format!(
            "conj(det)·det = {lhs} differs from μ^d for μ = {mu}"
        )));
    }
    Ok(if !mu.is_one() {
        Membership::Gu { mu, det }
    } else if det.is_one() {
        Membership::Su
    } else {
        Membership::U { det }
    })
}

/// The Gram matrix of the reduced Weil pairing on the root basis and the
/// sign it determines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilGram {
    pub ell: u32,
    pub r: usize,
    pub c: i64,
    /// `c·(E - r·I_{r-1})` over `F_ℓ`.
    pub gram: FMat,
    pub det: u64,
    /// Legendre class of `det`.
    pub det_class: i32,
    /// Legendre class of `r`.
    pub r_class: i32,
    pub matches_r_class: bool,
    pub epsilon: i32,
}

pub fn epsilon(ell: u32, r: usize) -> Result<i32> {
    if ell < 3 || !is_prime_u64(ell as u64) {
        return Err(Error::arg(format!("ell = {ell} must be an odd prime")));
    }
    if r % ell as usize == 0 {
        return Err(Error::arg(format!("ell = {ell} divides r = {r}")));
    }
    Ok(legendre(r as i64, ell as u64))
}

pub fn weil_gram_and_epsilon(ell: u32, r: usize, c: i64) -> Result<WeilGram> {
    let eps = epsilon(ell, r)?;
    if r < 2 {
        return Err(Error::arg("r must be at least 2"));
    }
    if c.rem_euclid(ell as i64) == 0 {
        return Err(Error::arg(format!("c = {c} is not a unit mod {ell}")));
    }
    let p = ell as u64;
    let gram = FMat::from_fn(p, r - 1, r - 1, |i, j| {
        let e = if i == j { 1 - r as i64 } else { 1 };
        (e.rem_euclid(p as i64) * c.rem_euclid(p as i64)) % p as i64
    });
    let det = gram.det();
    let det_class = legendre(det as i64, p);
    Ok(WeilGram {
        ell,
        r,
        c,
        gram,
        det,
        det_class,
        r_class: eps,
        matches_r_class: det_class == eps,
        epsilon: eps,
    })
}

/// Which group the filtration is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupVariant {
    Su,
    U,
}

/// `dim su^{(n)}(F_ℓ)`: `C(d,2)` for odd n, `C(d+1,2) - 1` for even n.
pub fn su_dimension(d: usize, n: usize) -> usize {
    if n % 2 == 1 {
        d * d.saturating_sub(1) / 2
    } else {
        d * (d + 1) / 2 - 1
    }
}

/// Same without the trace condition.
pub fn u_dimension(d: usize, n: usize) -> usize {
    if n % 2 == 1 {
        d * d.saturating_sub(1) / 2
    } else {
        d * (d + 1) / 2
    }
}

/// `E_ij^{(n)} = E_ij + (-1)^n E_ji` (zero-based indices).
pub fn e_ij_n(p: u64, d: usize, i: usize, j: usize, n: usize) -> FMat {
    let sign = if n % 2 == 0 { 1 } else { -1 };
    FMat::unit(p, d, i, j).add(&FMat::unit(p, d, j, i).scale(sign))
}

/// `ΓA = (-1)^n AᵀΓ` and `tr A = 0`.
pub fn in_su_algebra(f: &HermitianForm, n: usize, a: &FMat) -> bool {
    let g = f.gamma_mod_ell();
    let sign = if n % 2 == 0 { 1 } else { -1 };
    g.mul(a) == a.transpose().mul(&g).scale(sign) && a.trace() == 0
}

/// The basis `Γ^{-1}E_ij^{(n)}` (i < j), plus `E_ii - E_dd` for even n.
pub fn su_basis(f: &HermitianForm, n: usize) -> Result<Vec<FMat>> {
    let d = f.dim();
    if d < 2 {
        return Err(Error::arg("su basis needs d >= 2"));
    }
    let p = f.ell as u64;
    let gi = f.gamma_inv_mod_ell();
    let mut out = Vec::with_capacity(su_dimension(d, n));
    for i in 0..d {
        for j in i + 1..d {
            out.push(gi.mul(&e_ij_n(p, d, i, j, n)));
        }
    }
    if n % 2 == 0 {
        for i in 0..d - 1 {
            out.push(FMat::unit(p, d, i, i).sub(&FMat::unit(p, d, d - 1, d - 1)));
        }
    }
    for b in &out {
        if !in_su_algebra(f, n, b) {
            return Err(Error::internal(format!("basis element fails su^({n}):\n{b}")));
        }
    }
    Ok(out)
}

/// `e` with `|G(V/λ^n)_k| = ℓ^e`, where G is SU or U.
pub fn filtration_order_exponent(
    ell: u32,
    d: usize,
    n: usize,
    k: usize,
    variant: GroupVariant,
) -> Result<usize> {
    if ell < 3 || !is_prime_u64(ell as u64) {
        return Err(Error::arg(format!("ell = {ell} must be an odd prime")));
    }
    if k == 0 || k > n {
        return Err(Error::arg(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let dim = match variant {
        GroupVariant::Su => su_dimension,
        GroupVariant::U => u_dimension,
    };
    Ok((k..n).map(|i| dim(d, i + 1)).sum())
}

/// Lifts `A ∈ SU(V/λ^{n-1})_1` to an element of `SU(V/λ^n)` reducing to it.
pub fn lift_su(a: &MatLocal, f: &HermitianForm) -> Result<MatLocal> {
    if !classify_membership(a, f)?.is_su() {
        return Err(Error::Membership("input is not in SU".into()));
    }
    if a.level() < 1 {
        return Err(Error::Membership("input is not congruent to I mod λ".into()));
    }
    let n = a.ctx().precision() + 1;
    let a1 = a.lift_to(n)?;
    let ctx = a1.ctx();
    let g = f.gram(ctx);
    let defect = a1.dagger().mul(&g)?.mul(&a1)?.sub(&g)?;
    if defect.min_ord() < n - 1 {
        return Err(Error::internal("lift defect below level n-1"));
    }
    let x = defect.digit(n - 1);
    let det_defect = a1.det_local().sub(&CycloElt::one(ctx))?;
    if det_defect.ord() < n - 1 {
        return Err(Error::internal("determinant defect below level n-1"));
    }
    let p = f.ell as u64;
    let c = det_defect.digit(n - 1) as u64;
    let half = inv_mod(2, p as i128).expect("odd prime") as i64;
    let mut y = f.gamma_inv_mod_ell().mul(&x).scale(half);
    let tr = y.trace();
    if n % 2 == 0 {
        let v = y.get(0, 0) as i64 + c as i64 - tr as i64;
        y.set(0, 0, v);
    } else if tr != c {
        return Err(Error::internal(format!("tr Y = {tr} but det defect is {c}")));
    }
    let correction = MatLocal::from_fmat(ctx, &y).scale(&CycloElt::lambda_pow(ctx, n - 1));
    let lifted = a1.sub(&correction)?;
    if !classify_membership(&lifted, f)?.is_su() {
        return Err(Error::internal("lift is not in SU"));
    }
    Ok(lifted)
}

/// Repeated [`lift_su`] up to the given precision.
pub fn lift_su_to(a: &MatLocal, f: &HermitianForm, precision: usize) -> Result<MatLocal> {
    let mut cur = a.clone();
    while cur.ctx().precision() < precision {
        cur = lift_su(&cur, f)?;
    }
    Ok(cur)
}

/// Uniform random element of `SU(V/λ^n)_1` built level by level.
pub fn random_su_member<R: Rng + ?Sized>(
    f: &HermitianForm,
    precision: usize,
    rng: &mut R,
) -> Result<MatLocal> {
    let d = f.dim();
    let p = f.ell as u64;
    let mut cur = MatLocal::identity(RingCtx::new(f.ell, 1)?, d);
    for k in 2..=precision {
        cur = lift_su(&cur, f)?;
        let ctx = cur.ctx();
        let mut s = FMat::zeros(p, d, d);
        for b in su_basis(f, k)? {
            s = s.add(&b.scale(rng.gen_range(0..p) as i64));
        }
        let step = MatLocal::identity(ctx, d)
            .add(&MatLocal::from_fmat(ctx, &s).scale(&CycloElt::lambda_pow(ctx, k - 1)))?;
        cur = cur.mul(&step)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn membership_examples() {
        let ctx = RingCtx::new(5, 6).unwrap();
        let f = HermitianForm::standard(5, 2, 1).unwrap();
        assert_eq!(classify_membership(&MatLocal::identity(ctx, 2), &f).unwrap(), Membership::Su);
        let z = CycloElt::zeta(ctx);
        let m = MatLocal::diag(ctx, &[z.clone(), z.inv().unwrap()]);
        assert_eq!(classify_membership(&m, &f).unwrap(), Membership::Su);
        let c = CycloElt::from_int(ctx, 3);
        let s = MatLocal::scalar(ctx, 2, &c);
        match classify_membership(&s, &f).unwrap() {
            Membership::Gu { mu, .. } => assert_eq!(mu, CycloElt::from_int(ctx, 9)),
            v => panic!("unexpected {v:?}"),
        }
        let bad = MatLocal::diag(ctx, &[CycloElt::one(ctx), CycloElt::from_int(ctx, 2)]);
        assert_eq!(
            classify_membership(&bad, &f).unwrap(),
            Membership::NotMember { row: 1, col: 1 }
        );
    }

    #[test]
    fn weil_examples() {
        assert_eq!(weil_gram_and_epsilon(11, 8, 1).unwrap().epsilon, -1);
        assert_eq!(weil_gram_and_epsilon(3, 4, 1).unwrap().epsilon, 1);
        let w = weil_gram_and_epsilon(5, 4, 1).unwrap();
        assert_eq!(w.det, 4);
        assert!(w.matches_r_class);
        assert!(weil_gram_and_epsilon(5, 10, 1).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(su_dimension(7, 1), 21);
        assert_eq!(su_dimension(7, 2), 27);
        assert_eq!(su_dimension(2, 3), 1);
        let f = HermitianForm::standard(7, 4, -1).unwrap();
        for n in 1..5 {
            let basis = su_basis(&f, n).unwrap();
            assert_eq!(basis.len(), su_dimension(4, n));
            assert_eq!(crate::fp::span_rank(7, &basis), basis.len());
        }
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(filtration_order_exponent(11, 7, 10, 1, GroupVariant::Su).unwrap(), 219);
        assert_eq!(filtration_order_exponent(3, 2, 3, 1, GroupVariant::Su).unwrap(), 3);
        assert_eq!(filtration_order_exponent(3, 2, 3, 3, GroupVariant::Su).unwrap(), 0);
        assert!(filtration_order_exponent(3, 2, 3, 4, GroupVariant::Su).is_err());
        assert_eq!(filtration_order_exponent(11, 7, 10, 1, GroupVariant::U).unwrap(), 84 + 140);
    }

    #[test]
    fn lifts_reduce_to_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = HermitianForm::new(5, vec![1, 1, 2]).unwrap();
        for _ in 0..5 {
            let a = random_su_member(&f, 3, &mut rng).unwrap();
            let b = lift_su(&a, &f).unwrap();
            assert_eq!(b.reduce_to(3).unwrap(), a);
            assert!(classify_membership(&b, &f).unwrap().is_su());
        }
        let id = MatLocal::identity(RingCtx::new(5, 3).unwrap(), 3);
        assert!(lift_su(&id, &f).unwrap().is_identity());
    }
}
