//! Desk-scale property grid with independent oracles, run by `selftest`.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, pow_mod};
use crate::class_invariants::{demjanenko_det, h_minus};
use crate::commutator::{half_level, matrix_commutator_check, verify_commutator_identity};
use crate::cyclotomic::{CycloElt, RingCtx};
use crate::error::{Error, Result};
use crate::factor::find_simple_prime;
use crate::galois::{galois_certificate, GaloisVerdict};
use crate::hermitian::{
    classify_membership, epsilon, filtration_order_exponent, lift_su, random_su_member, GroupVariant,
    HermitianForm,
};
use crate::intmat::bareiss_det;
use crate::matrix::MatLocal;
use crate::poly::{parse_poly, IntPoly};
use crate::unit_lattices::{lattice_index_check, reduced_u_lr};

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::internal(msg))
}

fn odd_primes_up_to(n: u32) -> Vec<u32> {
    (3..=n).filter(|&p| is_prime_u64(p as u64)).collect()
}

/// `O/λ³` for `ℓ = 3` as `Z[ζ]/λ³` with `λ³O = ⟨3 − 3ζ, 9ζ⟩`: pairs
/// `a + bζ` with `0 ≤ a < 3`, `0 ≤ b < 9`.
fn pair_reduce(a: i64, b: i64) -> (i64, i64) {
    let k = Integer::div_floor(&a, &3);
    (a - 3 * k, (b + 3 * k).rem_euclid(9))
}

fn pair_mul((a, b): (i64, i64), (c, d): (i64, i64)) -> (i64, i64) {
    // ζ² = −1 − ζ
    pair_reduce(a * c - b * d, a * d + b * c - b * d)
}

fn to_pair(x: &CycloElt) -> (i64, i64) {
    let z = x.zeta_coordinates();
    let m = BigInt::from(27);
    let a: i64 = (&z[0] % &m).try_into().expect("small");
    let b: i64 = (&z[1] % &m).try_into().expect("small");
    pair_reduce(a, b)
}

/// Exhaustive comparison of the multiplication and addition tables of
/// `O/λ³` (`ℓ = 3`) with polynomial arithmetic in `Z[ζ]`.
pub fn ring_table_oracle() -> Result<usize> {
    let ctx = RingCtx::new(3, 3)?;
    let elems: Vec<CycloElt> = (0..27u32)
        .map(|v| CycloElt::from_digits(ctx, vec![v % 3, v / 3 % 3, v / 9]))
        .collect::<Result<_>>()?;
    let pairs: Vec<(i64, i64)> = elems.iter().map(to_pair).collect();
    let mut distinct = pairs.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != 27 {
        return fail("digit vectors do not map bijectively onto Z[ζ]/λ³");
    }
    let mut cases = 0;
    for (x, px) in elems.iter().zip(&pairs) {
        for (y, py) in elems.iter().zip(&pairs) {
            if to_pair(&x.mul(y)?) != pair_mul(*px, *py) {
                return fail(format!("{x}·{y} disagrees with the oracle"));
            }
            let s = to_pair(&x.add(y)?);
            if s != pair_reduce(px.0 + py.0, px.1 + py.1) {
                return fail(format!("{x}+{y} disagrees with the oracle"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// `λ + λ̄ ≡ 0 (mod λ²)`.
pub fn conjugate_lambda_check(ell: u32) -> Result<bool> {
    let ctx = RingCtx::new(ell, 6)?;
    let lam = CycloElt::lambda(ctx);
    Ok(lam.add(&lam.conjugate())?.ord() >= 2)
}

/// `ε = (r/ℓ)` against Euler's criterion.
pub fn epsilon_grid() -> Result<usize> {
    let mut cases = 0;
    for ell in odd_primes_up_to(31) {
        for r in 2..=20usize {
            if r % ell as usize == 0 {
                continue;
            }
            let euler = pow_mod(r as u64 % ell as u64, (ell as u64 - 1) / 2, ell as u64);
            let direct = if euler == 1 { 1 } else { -1 };
            let wg = crate::hermitian::weil_gram_and_epsilon(ell, r, 1)?;
            if epsilon(ell, r)? != direct || wg.epsilon != direct {
                return fail(format!("ε disagrees for (ℓ, r) = ({ell}, {r})"));
            }
            if r % 2 == 1 && !wg.matches_r_class {
                return fail(format!("Gram class differs from r for odd r = {r}, ℓ = {ell}"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Brute-force `|SU(V/λ^n)_1|` over all `I + λX`.
pub fn su_level_one_count(f: &HermitianForm, n: usize) -> Result<u64> {
    let ctx = RingCtx::new(f.ell(), n)?;
    let d = f.dim();
    let ell = f.ell() as u64;
    let per_entry = ell.pow(n as u32 - 1);
    let total = per_entry.pow((d * d) as u32);
    let mut count = 0;
    for mut code in 0..total {
        let mut m = MatLocal::identity(ctx, d);
        for i in 0..d {
            for j in 0..d {
                let mut v = code % per_entry;
                code /= per_entry;
                let mut digits = vec![0u32; n];
                for digit in digits.iter_mut().skip(1) {
                    *digit = (v % ell) as u32;
                    v /= ell;
                }
                let x = CycloElt::from_digits(ctx, digits)?;
                m.set(i, j, m.get(i, j).add(&x)?);
            }
        }
        if classify_membership(&m, f)?.is_su() {
            count += 1;
        }
    }
    Ok(count)
}

pub fn su_enumeration_check() -> Result<u64> {
    let f = HermitianForm::new(3, vec![1, 1])?;
    let count = su_level_one_count(&f, 3)?;
    let e = filtration_order_exponent(3, 2, 3, 1, GroupVariant::Su)?;
    if count != 3u64.pow(e as u32) || count != 27 {
        return fail(format!("|SU(V/λ³)_1| = {count}, expected 3^{e}"));
    }
    Ok(count)
}

/// Random instances of the digit formula for commutators.
pub fn commutator_instances(ell: u32, d: usize, n: usize, count: usize, rng: &mut impl Rng) -> Result<usize> {
    let ctx = RingCtx::new(ell, n)?;
    let level = half_level(n);
    for _ in 0..count {
        let a = MatLocal::random_level(ctx, d, level, rng);
        let b = MatLocal::random_level(ctx, d, level, rng);
        if !matrix_commutator_check(&a, &b)? {
            return fail(format!("digit formula fails for ℓ = {ell}, d = {d}, n = {n}"));
        }
    }
    Ok(count)
}

/// Random members of `SU(V/λ^{n−1})_1` lift to members of `SU(V/λ^n)`
/// reducing to them.
pub fn lift_instances(ell: u32, d: usize, n: usize, count: usize, rng: &mut impl Rng) -> Result<usize> {
    let f = HermitianForm::standard(ell, d, 1)?;
    for _ in 0..count {
        let a = random_su_member(&f, n - 1, rng)?;
        let b = lift_su(&a, &f)?;
        if b.ctx().precision() != n || !classify_membership(&b, &f)?.is_su() || b.reduce_to(n - 1)? != a {
            return fail(format!("lift fails for ℓ = {ell}, d = {d}, n = {n}"));
        }
    }
    Ok(count)
}

/// `det_base` against the determinant of the integer multiplication matrix.
pub fn det_base_instances(ell: u32, d: usize, n: usize, count: usize, rng: &mut impl Rng) -> Result<usize> {
    let ctx = RingCtx::new(ell, n)?;
    for _ in 0..count {
        let a = MatLocal::random_level(ctx, d, 0, rng);
        let (v, m) = a.det_base();
        let oracle = bareiss_det(&a.base_ring_matrix()).mod_floor(&BigInt::from(m));
        if oracle != BigInt::from(v) {
            return fail(format!("det_base {v} vs oracle {oracle} (mod {m})"));
        }
    }
    Ok(count)
}

/// `|det[n′(i·j⁻¹)]| = h⁻c/(2ℓ)` over a grid; returns the number of pairs.
pub fn demjanenko_grid_check(max_ell: u32, max_r: usize) -> Result<usize> {
    let ells = odd_primes_up_to(max_ell);
    let rs: Vec<usize> = (2..=max_r).collect();
    let results = crate::class_invariants::demjanenko_grid(&ells, &rs);
    for ((l, r), rep) in &results {
        let rep = rep.as_ref().map_err(|e| Error::internal(format!("({l}, {r}): {e}")))?;
        if rep.t as i64 != rep.kappa_bound {
            return fail(format!("({l}, {r}): t = {} but κ bound = {}", rep.t, rep.kappa_bound));
        }
    }
    Ok(results.len())
}

/// Representatives `±c` chosen at random do not change `|det|`.
pub fn demjanenko_reps_check(rng: &mut impl Rng) -> Result<usize> {
    let mut cases = 0;
    for ell in [5u32, 7, 11, 13] {
        for r in [2usize, 3, 4, 8] {
            if r % ell as usize == 0 {
                continue;
            }
            let base = demjanenko_det(ell, r, None)?;
            let reps: Vec<u32> = (1..=(ell - 1) / 2)
                .map(|c| if rng.gen_bool(0.5) { c } else { ell - c })
                .collect();
            let other = demjanenko_det(ell, r, Some(&reps))?;
            if num_traits::Signed::abs(&base.det) != num_traits::Signed::abs(&other.det) {
                return fail(format!("|det| depends on representatives for ({ell}, {r})"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

pub fn h_minus_table() -> Result<usize> {
    let table = [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (17, 1), (19, 1), (23, 3), (29, 8), (31, 9)];
    for (ell, h) in table {
        if h_minus(ell)? != BigInt::from(h) {
            return fail(format!("h⁻({ell}) ≠ {h}"));
        }
    }
    Ok(table.len())
}

/// `disc(x^n + ax + b)` against the closed trinomial formula.
pub fn trinomial_discriminants() -> Result<usize> {
    let mut cases = 0;
    for n in 2..=10usize {
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let mut c = vec![0i64; n + 1];
                c[0] = b;
                c[1] += a;
                c[n] = 1;
                let f = IntPoly::from_i64(&c);
                let nn = BigInt::from(n);
                let m1 = BigInt::from(n - 1);
                let t1 = num_traits::Pow::pow(&nn, n as u32) * num_traits::Pow::pow(&BigInt::from(b), (n - 1) as u32);
                let t2 = num_traits::Pow::pow(&m1, (n - 1) as u32) * num_traits::Pow::pow(&BigInt::from(a), n as u32);
                let inner = if (n - 1) % 2 == 0 { t1 + t2 } else { t1 - t2 };
                let closed = if (n * (n - 1) / 2) % 2 == 0 { inner } else { -inner };
                if f.discriminant()? != closed {
                    return fail(format!("disc({f}) disagrees with the closed form"));
                }
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// The certificate never claims `S_r` for a product of nonconstant factors.
pub fn certificate_soundness(rng: &mut impl Rng) -> Result<usize> {
    let mut cases = 0;
    let cyclo = IntPoly::cyclotomic(5).mul(&IntPoly::cyclotomic(7));
    let mut polys = vec![cyclo, parse_poly("x^8 + x + 1")?];
    for _ in 0..6 {
        let g = IntPoly::from_i64(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5), 1]);
        let h = IntPoly::from_i64(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5), 0, 1]);
        polys.push(g.mul(&h));
    }
    for f in polys {
        match galois_certificate(&f, 200) {
            Ok(c) if c.verdict == GaloisVerdict::SrCertified => {
                return fail(format!("S_r certified for reducible {f}"))
            }
            Ok(_) | Err(Error::NotSquarefree) => cases += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(cases)
}

pub fn curve_example_check() -> Result<usize> {
    let f = parse_poly("x^8 + x + 1")?;
    let disc = f.discriminant()?;
    if disc != BigInt::from(3 * 19 * 19 * 14731) {
        return fail(format!("disc = {disc}"));
    }
    let (s, _) = find_simple_prime(&disc, &[11, 2], 100_000)?;
    if s.prime() != Some(&BigInt::from(14731)) {
        return fail("simple prime is not 14731");
    }
    for text in ["x^4 + x + 1", "x^8 - x - 1", "x^5 - x - 1"] {
        if galois_certificate(&parse_poly(text)?, 500)?.verdict != GaloisVerdict::SrCertified {
            return fail(format!("S_r not certified for {text}"));
        }
    }
    Ok(4)
}

pub fn lattice_index_grid(ells: &[u32], max_r: usize) -> Result<usize> {
    let pairs: Vec<(u32, usize)> = ells
        .iter()
        .flat_map(|&l| (2..=max_r).filter(move |r| r % l as usize != 0).map(move |r| (l, r)))
        .collect();
    let res: Vec<Result<()>> = pairs
        .par_iter()
        .map(|&(l, r)| lattice_index_check(l, r, l as usize + 1).map(|_| ()))
        .collect();
    for r in res {
        r?;
    }
    Ok(pairs.len())
}

pub fn reduced_units_example() -> Result<usize> {
    let red = reduced_u_lr(11, 8, 10)?;
    let expected = BigInt::from(22) * num_traits::Pow::pow(&BigInt::from(11), 4u32);
    if red.order != expected {
        return fail(format!("|U_red| = {}", red.order));
    }
    Ok(1)
}

/// Exp of integer combinations of the `U′` generators lies in `U_{ℓ,r}`.
pub fn u_prime_membership(rng: &mut impl Rng) -> Result<usize> {
    let mut cases = 0;
    for (ell, r) in [(3u32, 2usize), (5, 3), (7, 4), (11, 8)] {
        let b = crate::unit_lattices::u_prime_basis(ell, 3 * ell as usize)?;
        for _ in 0..5 {
            let coeffs: Vec<i64> = (0..b.rank()).map(|_| rng.gen_range(-20..=20)).collect();
            let u = b.element(&coeffs)?;
            if !crate::unit_lattices::u_lr_member(&u, ell, r)? {
                return fail(format!("exp of a U′ combination leaves U for ℓ = {ell}"));
            }
            cases += 1;
        }
    }
    Ok(cases)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

type Check = (&'static str, fn(&mut ChaCha8Rng) -> Result<usize>);

fn suite() -> Vec<Check> {
    vec![
        ("ring_table_l3_n3", |_| ring_table_oracle()),
        ("conjugate_lambda", |_| {
            for ell in [3, 5, 7, 11] {
                if !conjugate_lambda_check(ell)? {
                    return fail(format!("λ + λ̄ ≢ 0 mod λ² for ℓ = {ell}"));
                }
            }
            Ok(4)
        }),
        ("epsilon_grid", |_| epsilon_grid()),
        ("filtration_exponent", |_| {
            let e = filtration_order_exponent(11, 7, 10, 1, GroupVariant::Su)?;
            if e != 219 {
                return fail(format!("E = {e}"));
            }
            Ok(1)
        }),
        ("su_enumeration", |_| su_enumeration_check().map(|c| c as usize)),
        ("commutator_symbolic", |_| {
            for n in 3..=9 {
                if !verify_commutator_identity(n)?.holds {
                    return fail(format!("identity fails for n = {n}"));
                }
            }
            Ok(7)
        }),
        ("commutator_numeric", |rng| {
            let mut total = 0;
            for ell in [3, 5] {
                for d in [2, 3] {
                    for n in 3..=6 {
                        total += commutator_instances(ell, d, n, 10, rng)?;
                    }
                }
            }
            Ok(total)
        }),
        ("lift_su", |rng| {
            let mut total = 0;
            for ell in [3, 5] {
                for n in 3..=5 {
                    total += lift_instances(ell, 3, n, 3, rng)?;
                }
            }
            Ok(total)
        }),
        ("det_base", |rng| {
            let mut total = 0;
            for (ell, n) in [(3, 4), (5, 5), (7, 3)] {
                total += det_base_instances(ell, 2, n, 5, rng)?;
            }
            Ok(total)
        }),
        ("demjanenko_grid", |_| demjanenko_grid_check(31, 20)),
        ("demjanenko_representatives", |rng| demjanenko_reps_check(rng)),
        ("h_minus_table", |_| h_minus_table()),
        ("trinomial_discriminants", |_| trinomial_discriminants()),
        ("certificate_soundness", |rng| certificate_soundness(rng)),
        ("curve_example", |_| curve_example_check()),
        ("lattice_index", |_| lattice_index_grid(&[3, 5, 7, 11], 12)),
        ("reduced_units", |_| reduced_units_example()),
        ("u_prime_membership", |rng| u_prime_membership(rng)),
    ]
}

pub fn check_names() -> Vec<&'static str> {
    suite().into_iter().map(|(n, _)| n).collect()
}

/// Runs every check with its own generator derived from `seed`; the
/// report lists checks in a fixed order.
pub fn selftest(seed: u64) -> SelftestReport {
    let checks: Vec<CheckOutcome> = suite()
        .into_par_iter()
        .enumerate()
        .map(|(i, (name, run))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            match run(&mut rng) {
                Ok(cases) => CheckOutcome { name: name.into(), passed: true, cases, detail: String::new() },
                Err(e) => CheckOutcome { name: name.into(), passed: false, cases: 0, detail: e.to_string() },
            }
        })
        .collect();
    SelftestReport { seed, passed: checks.iter().all(|c| c.passed), checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_oracle_and_enumeration() {
        assert_eq!(ring_table_oracle().unwrap(), 729);
        assert_eq!(su_enumeration_check().unwrap(), 27);
        for ell in [3, 5, 7, 11] {
            assert!(conjugate_lambda_check(ell).unwrap());
        }
    }

    #[test]
    fn small_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(trinomial_discriminants().unwrap() > 0);
        det_base_instances(3, 2, 4, 5, &mut rng).unwrap();
    }
}
