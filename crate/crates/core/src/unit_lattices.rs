//! Units of `O_λ`: the group `U_{ℓ,r}`, its anti-fixed part `U′_ℓ` in
//! logarithmic coordinates, the infinity-type operators, and finite
//! presentations of `O/λ^m` and `(O/λ^m)^×`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, primitive_root, val_u64};
use crate::class_invariants::{kappa_and_t, n_infinity, n_prime_twice};
use crate::cyclotomic::{CycloElt, RingCtx};
use crate::error::{Error, Result};
use crate::intmat::{abelian_order, AbelianPresentation, IntMatrix};
use crate::poly::IntPoly;

fn check_ell(ell: u32) -> Result<()> {
    if ell < 3 || !is_prime_u64(ell as u64) {
        return Err(Error::arg(format!("ℓ = {ell} is not an odd prime")));
    }
    Ok(())
}

/// `v_ℓ` of the modulus in `1 + ℓ(r−1)Z_ℓ`, i.e. `1 + v_ℓ(r−1)`.
fn rational_level(ell: u32, r: usize) -> u32 {
    1 + val_u64(r as u64 - 1, ell as u64)
}

/// Membership in `U_{ℓ,r} = {d : d·d̄ ∈ 1 + ℓ(r−1)Z_ℓ}` modulo `λ^n`.
///
/// Rationality is tested as invariance under every `σ_j`.
pub fn u_lr_member(d: &CycloElt, ell: u32, r: usize) -> Result<bool> {
    check_ell(ell)?;
    if d.ell() != ell {
        return Err(Error::arg(format!("element lives over ℓ = {}, not {ell}", d.ell())));
    }
    if r < 2 || r % ell as usize == 0 {
        return Err(Error::arg(format!("r = {r} must be at least 2 and prime to ℓ")));
    }
    if !d.is_unit() {
        return Err(Error::NotAUnit { ord: d.ord() });
    }
    let m = d.mul(&d.conjugate())?;
    if !m.is_galois_stable() {
        return Ok(false);
    }
    let Some((z, modulus)) = m.as_rational_integer() else {
        return Ok(false);
    };
    let need = (ell as i128).pow(rational_level(ell, r)).min(modulus);
    Ok((z - 1).rem_euclid(need) == 0)
}

/// A `Z_ℓ`-lattice of units given by logarithms, together with a torsion
/// subgroup `⟨(−ζ)^e⟩` of `μ_{2ℓ}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitLattice {
    pub ctx: RingCtx,
    pub log_generators: Vec<CycloElt>,
    pub torsion_generator_exponent: u32,
}

impl UnitLattice {
    pub fn rank(&self) -> usize {
        self.log_generators.len()
    }

    /// `exp(Σ c_i x_i)`.
    pub fn element(&self, coeffs: &[i64]) -> Result<CycloElt> {
        if coeffs.len() != self.rank() {
            return Err(Error::arg("coefficient count differs from the rank"));
        }
        let mut acc = CycloElt::zero(self.ctx);
        for (c, x) in coeffs.iter().zip(&self.log_generators) {
            acc = acc.add(&x.scale(*c as i128))?;
        }
        if acc.is_zero() {
            return Ok(CycloElt::one(self.ctx));
        }
        acc.exp()
    }
}

fn anti_fixed(x: &CycloElt) -> bool {
    x.add_unchecked(&x.conjugate()).is_zero()
}

/// The generators `λ^i − λ̄^i`, `i = 2, …, (ℓ+1)/2`.
pub fn u_prime_basis(ell: u32, precision: usize) -> Result<UnitLattice> {
    check_ell(ell)?;
    if precision < 4 {
        return Err(Error::arg("precision must be at least 4"));
    }
    let ctx = RingCtx::new(ell, precision)?;
    let lam = CycloElt::lambda(ctx);
    let lam_bar = lam.conjugate();
    let mut gens = Vec::new();
    for i in 2..=(ell as u64 + 1) / 2 {
        let x = lam.pow(i).sub(&lam_bar.pow(i))?;
        if !anti_fixed(&x) || (x.ord() < 2 && !x.is_zero()) {
            return Err(Error::internal(format!("λ^{i} − λ̄^{i} is not anti-fixed in λ²O")));
        }
        gens.push(x);
    }
    Ok(UnitLattice { ctx, log_generators: gens, torsion_generator_exponent: 1 })
}

/// `π = ζ^{(ℓ+1)/2} − ζ^{−(ℓ+1)/2}`, a uniformizer with `π̄ = −π`.
pub fn anti_uniformizer(ctx: RingCtx) -> CycloElt {
    let h = (ctx.ell() as i64 + 1) / 2;
    CycloElt::zeta_pow(ctx, h).sub_unchecked(&CycloElt::zeta_pow(ctx, -h))
}

/// A basis of `W = {x ∈ λ²O : x̄ = −x}`, the logarithms of `U′_ℓ`:
/// `ℓπ, π³, π⁵, …, π^{ℓ−2}`.
pub fn u_prime_log_lattice(ell: u32, precision: usize) -> Result<UnitLattice> {
    check_ell(ell)?;
    let ctx = RingCtx::new(ell, precision)?;
    let pi = anti_uniformizer(ctx);
    let mut gens = vec![pi.scale(ell as i128)];
    for k in (3..ell as u64).step_by(2) {
        gens.push(pi.pow(k));
    }
    Ok(UnitLattice { ctx, log_generators: gens, torsion_generator_exponent: 1 })
}

/// `ζ`-coordinates of the exact element `λ^k ζ^i` of `Z[ζ]`.
fn lambda_power_times_zeta(ell: u32, k: usize, i: usize) -> Vec<BigInt> {
    let one_minus_x = IntPoly::from_i64(&[1, -1]);
    let mut p = IntPoly::monomial(i);
    for _ in 0..k {
        p = p.mul(&one_minus_x);
    }
    let phi = IntPoly::cyclotomic(ell as usize);
    let (_, rem) = p.divrem_monic(&phi).expect("monic");
    (0..ell as usize - 1).map(|j| rem.coeff(j)).collect()
}

/// The additive group `O/λ^k` on the basis `1, ζ, …, ζ^{ℓ−2}`.
pub fn additive_presentation(ell: u32, k: usize) -> Result<AbelianPresentation> {
    check_ell(ell)?;
    let g = ell as usize - 1;
    let cols: Vec<Vec<BigInt>> = (0..g).map(|i| lambda_power_times_zeta(ell, k, i)).collect();
    let rel: IntMatrix = (0..g).map(|row| cols.iter().map(|c| c[row].clone()).collect()).collect();
    AbelianPresentation::new(g, rel)
}

/// `(O/λ^m)^× ≅ Z/(ℓ−1) × Z/ℓ × λ²O/λ^m`, the factors being the
/// Teichmüller part, the powers of `ζ`, and `1 + λ²O` through its logarithm.
pub fn unit_group_presentation(ell: u32, m: usize) -> Result<AbelianPresentation> {
    check_ell(ell)?;
    if m == 0 {
        return Err(Error::arg("precision must be positive"));
    }
    let mut blocks: Vec<AbelianPresentation> =
        vec![AbelianPresentation::cyclic(&[BigInt::from(ell - 1)])];
    if m >= 2 {
        blocks.push(AbelianPresentation::cyclic(&[BigInt::from(ell)]));
    }
    if m >= 3 {
        blocks.push(additive_presentation(ell, m - 2)?);
    }
    let g: usize = blocks.iter().map(|b| b.generators).sum();
    let width: usize = blocks.iter().map(|b| b.relations.first().map_or(0, |r| r.len())).sum();
    let mut rel = vec![vec![BigInt::zero(); width]; g];
    let (mut r0, mut c0) = (0, 0);
    for b in &blocks {
        let w = b.relations.first().map_or(0, |r| r.len());
        for (i, row) in b.relations.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                rel[r0 + i][c0 + j] = x.clone();
            }
        }
        r0 += b.generators;
        c0 += w;
    }
    AbelianPresentation::new(g, rel)
}

/// The Teichmüller lift of `c mod ℓ` at the given precision.
fn teichmuller(ctx: RingCtx, c: u64) -> CycloElt {
    let ell = ctx.ell() as u64;
    let mut x = CycloElt::from_int(ctx, c as i128);
    for _ in 0..ctx.int_precision() {
        x = x.pow(ell);
    }
    x
}

/// Coordinates of a unit in [`unit_group_presentation`].
pub fn unit_coordinates(d: &CycloElt) -> Result<Vec<BigInt>> {
    if !d.is_unit() {
        return Err(Error::NotAUnit { ord: d.ord() });
    }
    let ctx = d.ctx();
    let ell = ctx.ell() as u64;
    let m = ctx.precision();
    let g = primitive_root(ell);
    let c = d.digit(0) as u64;
    let mut e = 0u64;
    let mut x = 1u64;
    while x != c {
        x = x * g % ell;
        e += 1;
    }
    let mut out = vec![BigInt::from(e)];
    if m == 1 {
        return Ok(out);
    }
    let d1 = d.mul(&teichmuller(ctx, c).inv()?)?;
    let a = (ell - d1.digit(1) as u64) % ell;
    out.push(BigInt::from(a));
    if m == 2 {
        return Ok(out);
    }
    let u = d1.mul(&CycloElt::zeta_pow(ctx, -(a as i64)))?;
    let lg = u.log()?.shift_down(2)?;
    out.extend(lg.zeta_coordinates());
    Ok(out)
}

fn columns(vectors: &[Vec<BigInt>]) -> IntMatrix {
    let rows = vectors.first().map_or(0, |v| v.len());
    (0..rows).map(|i| vectors.iter().map(|v| v[i].clone()).collect()).collect()
}

/// Order of the subgroup of `(O/λ^m)^×` generated by the given units.
pub fn unit_subgroup_order(units: &[CycloElt]) -> Result<BigInt> {
    let Some(first) = units.first() else {
        return Ok(BigInt::one());
    };
    let ctx = first.ctx();
    let p = unit_group_presentation(ctx.ell(), ctx.precision())?;
    let coords = units.iter().map(unit_coordinates).collect::<Result<Vec<_>>>()?;
    abelian_order(&p, &columns(&coords))
}

/// Order of the subgroup of `O/λ^m` generated by the given elements.
pub fn additive_subgroup_order(elements: &[CycloElt]) -> Result<BigInt> {
    let Some(first) = elements.first() else {
        return Ok(BigInt::one());
    };
    let ctx = first.ctx();
    let p = additive_presentation(ctx.ell(), ctx.precision())?;
    let coords: Vec<Vec<BigInt>> = elements.iter().map(|x| x.zeta_coordinates()).collect();
    abelian_order(&p, &columns(&coords))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfinityType {
    /// `Σ_j n(j) σ_j`
    T,
    /// `Σ_j n′(j) σ_j`
    TPrime,
}

/// The infinity type acting on logarithmic coordinates; half-integral
/// coefficients are realized with `2⁻¹ ∈ Z_ℓ`.
pub(crate) fn infinity_type_linear(ell: u32, r: usize, x: &CycloElt, variant: InfinityType) -> Result<CycloElt> {
    let ctx = x.ctx();
    let mut acc = CycloElt::zero(ctx);
    for j in 1..ell {
        let c = match variant {
            InfinityType::T => 2 * n_infinity(ell, r, j)?,
            InfinityType::TPrime => n_prime_twice(ell, r, j)?,
        };
        if c != 0 {
            acc = acc.add_unchecked(&x.galois_apply(j as i64)?.scale(c as i128));
        }
    }
    acc.mul(&CycloElt::from_int(ctx, 2).inv()?)
}

pub fn infinity_type_apply(ell: u32, r: usize, x: &CycloElt, variant: InfinityType) -> Result<CycloElt> {
    check_ell(ell)?;
    if x.ell() != ell {
        return Err(Error::arg(format!("element lives over ℓ = {}, not {ell}", x.ell())));
    }
    if !x.is_zero() && x.ord() < 2 {
        return Err(Error::Domain(format!("input must lie in λ²O, ord = {}", x.ord())));
    }
    infinity_type_linear(ell, r, x, variant)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeIndex {
    pub ell: u32,
    pub r: usize,
    pub t_prime: u32,
    pub t_expected: u32,
    pub precision: usize,
    /// `t′` at each precision tried, in order.
    pub history: Vec<(usize, u32)>,
}

fn exponent_of(n: &BigInt, ell: u32) -> Result<u32> {
    let mut x = n.clone();
    let mut k = 0;
    let l = BigInt::from(ell);
    while !x.is_one() {
        if (&x % &l) != BigInt::zero() {
            return Err(Error::internal(format!("{n} is not a power of {ell}")));
        }
        x /= &l;
        k += 1;
    }
    Ok(k)
}

/// `t′` with `|W / T″W| = ℓ^{t′}` measured inside `O/λ^m`.
pub fn cokernel_exponent_at(ell: u32, r: usize, m: usize) -> Result<u32> {
    let w = u_prime_log_lattice(ell, m)?;
    let images = w
        .log_generators
        .iter()
        .map(|x| infinity_type_linear(ell, r, x, InfinityType::TPrime))
        .collect::<Result<Vec<_>>>()?;
    if images.iter().any(|y| !anti_fixed(y)) {
        return Err(Error::internal("T″ left the anti-fixed part"));
    }
    let big = additive_subgroup_order(&w.log_generators)?;
    let small = additive_subgroup_order(&images)?;
    if (&big % &small) != BigInt::zero() {
        return Err(Error::internal("T″W is not contained in W"));
    }
    exponent_of(&(big / small), ell)
}

/// Largest precision [`lattice_index_check`] escalates to.
pub const MAX_INDEX_PRECISION: usize = 400;

/// Escalates the precision until `t′` is stable and the precision exceeds
/// `(ℓ−1)(t′+1) + ℓ`, then compares with `ord_ℓ det 2[n′]`.
pub fn lattice_index_check(ell: u32, r: usize, start: usize) -> Result<LatticeIndex> {
    check_ell(ell)?;
    let (_, t) = kappa_and_t(ell, r)?;
    let e = ell as usize - 1;
    let mut m = start.max(ell as usize + 1);
    let mut history: Vec<(usize, u32)> = Vec::new();
    loop {
        if m > MAX_INDEX_PRECISION {
            return Err(Error::PrecisionExhausted(format!(
                "no stable cokernel exponent below λ^{MAX_INDEX_PRECISION}"
            )));
        }
        let tp = cokernel_exponent_at(ell, r, m)?;
        let stable = history.last().is_some_and(|&(_, prev)| prev == tp);
        history.push((m, tp));
        if stable && m >= e * (tp as usize + 1) + ell as usize {
            if tp != t {
                return Err(Error::internal(format!(
                    "cokernel exponent {tp} differs from ord_ℓ det 2[n′] = {t}"
                )));
            }
            return Ok(LatticeIndex { ell, r, t_prime: tp, t_expected: t, precision: m, history });
        }
        m += e;
    }
}

/// `d = s·ζ^a·q·u` with `s = ±1`, `q ∈ 1 + ℓ(r−1)Z_ℓ` and `u·ū = 1`,
/// `u ∈ 1 + λ²O`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitDecomposition {
    pub sign: i32,
    pub zeta_exponent: u32,
    pub rational: CycloElt,
    pub anti: CycloElt,
}

impl UnitDecomposition {
    pub fn recombine(&self) -> Result<CycloElt> {
        let ctx = self.rational.ctx();
        let s = CycloElt::from_int(ctx, self.sign as i128);
        s.mul(&CycloElt::zeta_pow(ctx, self.zeta_exponent as i64))?
            .mul(&self.rational)?
            .mul(&self.anti)
    }
}

/// Splits a member of `U_{ℓ,r}` along `μ_{2ℓ} × (1 + ℓ(r−1)Z_ℓ) × U′_ℓ`.
pub fn decompose(d: &CycloElt, r: usize) -> Result<UnitDecomposition> {
    let ell = d.ell();
    if !u_lr_member(d, ell, r)? {
        return Err(Error::Membership(format!("{d} is not in U_{{{ell},{r}}}")));
    }
    let ctx = d.ctx();
    if ctx.precision() < 3 {
        return Err(Error::arg("decomposition needs precision at least 3"));
    }
    let sign = if d.digit(0) == 1 { 1 } else { -1 };
    let d1 = d.scale(sign as i128);
    let a = (ell - d1.digit(1)) % ell;
    let u = d1.mul(&CycloElt::zeta_pow(ctx, -(a as i64)))?;
    let z = u.mul(&u.conjugate())?;
    let half = CycloElt::from_int(ctx, 2).inv()?;
    let lz = z.log()?;
    let rational = if lz.is_zero() { CycloElt::one(ctx) } else { lz.mul(&half)?.exp()? };
    let anti = u.mul(&rational.inv()?)?;
    Ok(UnitDecomposition { sign, zeta_exponent: a, rational, anti })
}

/// The reduction of `U_{ℓ,r}` modulo `λ^m`, measured by Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedUnits {
    pub ell: u32,
    pub r: usize,
    pub precision: usize,
    #[serde(with = "crate::bigser")]
    pub order: BigInt,
    /// `order = 2 · ℓ^ell_exponent`.
    pub ell_exponent: u32,
    #[serde(with = "crate::bigser::vec")]
    pub invariant_factors: Vec<BigInt>,
}

/// Generators of `U_{ℓ,r}`: `−1`, `ζ`, `1 + ℓ(r−1)` and `exp` of a basis
/// of `log U′_ℓ`.
pub fn u_lr_generators(ell: u32, r: usize, m: usize) -> Result<Vec<CycloElt>> {
    check_ell(ell)?;
    let ctx = RingCtx::new(ell, m)?;
    let mut gens = vec![
        CycloElt::from_int(ctx, -1),
        CycloElt::zeta(ctx),
        CycloElt::from_int(ctx, 1 + ell as i128 * (r as i128 - 1)),
    ];
    for x in u_prime_log_lattice(ell, m)?.log_generators {
        gens.push(if x.is_zero() { CycloElt::one(ctx) } else { x.exp()? });
    }
    Ok(gens)
}

pub fn reduced_u_lr(ell: u32, r: usize, m: usize) -> Result<ReducedUnits> {
    let gens = u_lr_generators(ell, r, m)?;
    let order = unit_subgroup_order(&gens)?;
    let p = unit_group_presentation(ell, m)?;
    let coords = gens.iter().map(unit_coordinates).collect::<Result<Vec<_>>>()?;
    // the subgroup as a group in its own right: Z^k modulo relations
    // pulled back along the coordinate map
    let invariant_factors = subgroup_invariants(&p, &columns(&coords))?;
    let product: BigInt = invariant_factors.iter().product();
    if product != order {
        return Err(Error::internal("subgroup invariants disagree with its order"));
    }
    let mut rest = order.clone();
    rest /= BigInt::from(2);
    let ell_exponent = exponent_of(&rest, ell)?;
    Ok(ReducedUnits { ell, r, precision: m, order, ell_exponent, invariant_factors })
}

/// Invariant factors of the subgroup generated by `gens` inside `p`,
/// computed as the quotient of the subgroup lattice `⟨gens⟩ + ⟨rel⟩` by
/// `⟨rel⟩` after a change to a basis of the former.
fn subgroup_invariants(p: &AbelianPresentation, gens: &IntMatrix) -> Result<Vec<BigInt>> {
    let g = p.generators;
    let joined: IntMatrix = p
        .relations
        .iter()
        .zip(gens)
        .map(|(r, x)| r.iter().chain(x).cloned().collect())
        .collect();
    let basis = lattice_basis(&joined, g)?;
    let coords = solve_in_basis(&basis, &p.relations)?;
    AbelianPresentation::new(g, coords)?.invariant_factors()
}

/// A square basis (columns) of the full-rank lattice spanned by the
/// columns of `m`, by integer column reduction.
fn lattice_basis(m: &IntMatrix, g: usize) -> Result<IntMatrix> {
    use num_integer::Integer;
    use num_traits::Signed;
    let mut cols: Vec<Vec<BigInt>> = (0..m.first().map_or(0, |r| r.len()))
        .map(|j| (0..g).map(|i| m[i][j].clone()).collect())
        .collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(g);
    for row in 0..g {
        // gcd-combine all remaining columns on this row
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for c in cols.drain(..) {
            if c[row].is_zero() {
                rest.push(c);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(c),
                Some(mut p) => {
                    let mut c = c;
                    while !c[row].is_zero() {
                        let q = p[row].div_floor(&c[row]);
                        for i in 0..g {
                            let v = &c[i] * &q;
                            p[i] -= v;
                        }
                        std::mem::swap(&mut p, &mut c);
                    }
                    rest.push(c);
                    pivot = Some(p);
                }
            }
        }
        let Some(mut p) = pivot else {
            return Err(Error::Domain("lattice is not of full rank".into()));
        };
        if p[row].is_negative() {
            for x in p.iter_mut() {
                *x = -x.clone();
            }
        }
        basis.push(p);
        cols = rest;
    }
    Ok((0..g).map(|i| basis.iter().map(|c| c[i].clone()).collect()).collect())
}

/// Solves `basis · X = target` exactly; `basis` is lower triangular with
/// the layout produced by [`lattice_basis`].
fn solve_in_basis(basis: &IntMatrix, target: &IntMatrix) -> Result<IntMatrix> {
    use num_integer::Integer;
    let g = basis.len();
    let width = target.first().map_or(0, |r| r.len());
    let mut x = vec![vec![BigInt::zero(); width]; g];
    for col in 0..width {
        let mut rhs: Vec<BigInt> = (0..g).map(|i| target[i][col].clone()).collect();
        for k in 0..g {
            let (q, rem) = rhs[k].div_rem(&basis[k][k]);
            if !rem.is_zero() {
                return Err(Error::internal("relation outside the subgroup lattice"));
            }
            for (i, v) in rhs.iter_mut().enumerate().skip(k) {
                *v -= &basis[i][k] * &q;
            }
            x[k][col] = q;
        }
    }
    Ok(x)
}
