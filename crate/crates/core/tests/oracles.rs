use std::collections::HashSet;

use num_bigint::BigInt;
use supertorsion::checks;
use supertorsion::class_invariants::{demjanenko_det, h_minus};
use supertorsion::cyclotomic::{CycloElt, RingCtx};
use supertorsion::factor::{find_simple_prime, SimplePrime};
use supertorsion::galois::{galois_certificate, GaloisVerdict};
use supertorsion::hermitian::{filtration_order_exponent, GroupVariant, HermitianForm};
use supertorsion::poly::{parse_poly, IntPoly};
use supertorsion::unit_lattices::{
    reduced_u_lr, u_lr_generators, u_prime_basis, u_prime_log_lattice, unit_subgroup_order,
};

/// Closure of the generators under multiplication in `(O/λ^m)^×`.
fn closure_size(gens: &[CycloElt]) -> usize {
    let one = CycloElt::one(gens[0].ctx());
    let mut seen: HashSet<Vec<u32>> = HashSet::from([one.digits().to_vec()]);
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g).unwrap();
            if seen.insert(y.digits().to_vec()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

#[test]
fn ring_tables_match_polynomial_arithmetic() {
    assert_eq!(checks::ring_table_oracle().unwrap(), 27 * 27);
}

#[test]
fn su_level_one_counts() {
    let f = HermitianForm::new(3, vec![1, 1]).unwrap();
    assert_eq!(checks::su_level_one_count(&f, 3).unwrap(), 27);
    let g = HermitianForm::new(3, vec![1, -1]).unwrap();
    assert_eq!(checks::su_level_one_count(&g, 3).unwrap(), 27);
    for n in [2usize, 3] {
        let e = filtration_order_exponent(3, 2, n, 1, GroupVariant::Su).unwrap();
        assert_eq!(checks::su_level_one_count(&f, n).unwrap(), 3u64.pow(e as u32), "n = {n}");
    }
}

#[test]
fn reduced_units_match_group_closure() {
    for (ell, r) in [(3u32, 2usize), (3, 4), (5, 2), (5, 3), (5, 4), (7, 3), (7, 4), (11, 8)] {
        let m = ell as usize - 1;
        let gens = u_lr_generators(ell, r, m).unwrap();
        let red = reduced_u_lr(ell, r, m).unwrap();
        assert_eq!(BigInt::from(closure_size(&gens)), red.order, "ℓ = {ell}, r = {r}");
    }
}

#[test]
fn difference_basis_generates_the_same_units() {
    for ell in [5u32, 7, 11, 13] {
        for m in [ell as usize + 2, 2 * ell as usize] {
            let a = u_prime_basis(ell, m).unwrap();
            let b = u_prime_log_lattice(ell, m).unwrap();
            let exps = |l: &supertorsion::unit_lattices::UnitLattice| -> Vec<CycloElt> {
                (0..l.rank())
                    .map(|i| {
                        let mut c = vec![0; l.rank()];
                        c[i] = 1;
                        l.element(&c).unwrap()
                    })
                    .collect()
            };
            let ea = exps(&a);
            let eb = exps(&b);
            let both: Vec<CycloElt> = ea.iter().chain(&eb).cloned().collect();
            let oa = unit_subgroup_order(&ea).unwrap();
            assert_eq!(oa, unit_subgroup_order(&eb).unwrap(), "ℓ = {ell}, m = {m}");
            assert_eq!(oa, unit_subgroup_order(&both).unwrap());
        }
    }
}

#[test]
fn h_minus_values() {
    for (ell, h) in [(19u32, 1), (23, 3), (29, 8), (31, 9), (37, 37), (41, 121)] {
        assert_eq!(h_minus(ell).unwrap(), BigInt::from(h), "ℓ = {ell}");
    }
}

#[test]
fn demjanenko_example() {
    let rep = demjanenko_det(11, 8, None).unwrap();
    assert_eq!(rep.t, 0);
    assert_eq!(rep.kappa_bound, 0);
    assert_eq!(rep.h_minus, BigInt::from(1));
}

#[test]
fn simple_primes_reverified() {
    for text in ["x^8 + x + 1", "x^8 - x - 1", "x^5 - x - 1", "x^6 + 2*x + 3", "x^7 - 3*x + 1"] {
        let f = parse_poly(text).unwrap();
        let disc = f.discriminant().unwrap();
        if let (SimplePrime::Found { prime }, _) = find_simple_prime(&disc, &[2, 11], 1_000_000).unwrap() {
            assert!(supertorsion::factor::is_probable_prime(&prime));
            assert!((&disc % &prime) == BigInt::from(0));
            assert!((&disc / &prime % &prime) != BigInt::from(0), "{text}");
        }
    }
}

#[test]
fn certificate_never_claims_products() {
    let mut polys = vec![
        IntPoly::cyclotomic(5).mul(&IntPoly::cyclotomic(9)),
        IntPoly::cyclotomic(3).mul(&IntPoly::cyclotomic(7)),
        parse_poly("x^8 + x + 1").unwrap(),
        parse_poly("x^4 + 4").unwrap(),
    ];
    polys.push(parse_poly("x^2 - 2").unwrap().mul(&parse_poly("x^3 - x - 1").unwrap()));
    for f in polys {
        let c = galois_certificate(&f, 300).unwrap();
        assert_eq!(c.verdict, GaloisVerdict::Reducible, "{f}");
        let prod = c.factors.iter().fold(IntPoly::one(), |a, g| a.mul(g));
        assert_eq!(prod, f);
    }
}

#[test]
fn conjugate_lambda_vanishes_mod_lambda_squared() {
    for ell in [3, 5, 7, 11, 13] {
        assert!(checks::conjugate_lambda_check(ell).unwrap());
        let ctx = RingCtx::new(ell, 5).unwrap();
        let lam = CycloElt::lambda(ctx);
        assert_eq!(lam.add(&lam.conjugate()).unwrap().ord(), 2);
    }
}
