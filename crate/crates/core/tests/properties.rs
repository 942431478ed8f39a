use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use supertorsion::checks;
use supertorsion::class_invariants::demjanenko_det;
use supertorsion::cyclotomic::{CycloElt, RingCtx};
use supertorsion::hermitian::weil_gram_and_epsilon;
use supertorsion::poly::IntPoly;
use supertorsion::unit_lattices::{
    cokernel_exponent_at, decompose, lattice_index_check, u_lr_member, u_prime_log_lattice,
};

const PRIMES: [u32; 5] = [3, 5, 7, 11, 13];

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(PRIMES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn det_base_matches_bareiss(seed in any::<u64>(), ell in prop::sample::select(vec![3u32, 5, 7]), d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        checks::det_base_instances(ell, d, 4, 2, &mut rng).unwrap();
    }

    #[test]
    fn commutators_follow_digit_formula(seed in any::<u64>(), ell in prop::sample::select(vec![3u32, 5, 7]), n in 3usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        checks::commutator_instances(ell, 2, n, 2, &mut rng).unwrap();
    }

    #[test]
    fn lifts_stay_in_su(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        checks::lift_instances(5, 2, n, 1, &mut rng).unwrap();
    }

    #[test]
    fn weil_gram_class_for_odd_r(ell in prime(), half in 1usize..10, c in 1i64..40) {
        let r = 2 * half + 1;
        prop_assume!(r % ell as usize != 0 && c % ell as i64 != 0);
        let wg = weil_gram_and_epsilon(ell, r, c).unwrap();
        prop_assert!(wg.matches_r_class);
    }

    #[test]
    fn demjanenko_independent_of_representatives(ell in prime(), r in 2usize..16, flips in any::<u32>()) {
        prop_assume!(r % ell as usize != 0);
        let reps: Vec<u32> = (1..=(ell - 1) / 2)
            .map(|c| if flips >> c & 1 == 1 { ell - c } else { c })
            .collect();
        let a = demjanenko_det(ell, r, None).unwrap();
        let b = demjanenko_det(ell, r, Some(&reps)).unwrap();
        prop_assert_eq!(a.det.abs(), b.det.abs());
    }

    #[test]
    fn exp_of_lattice_lies_in_u(ell in prime(), r in 2usize..12, coeffs in prop::collection::vec(-50i64..50, 6)) {
        prop_assume!(r % ell as usize != 0);
        let lat = u_prime_log_lattice(ell, 2 * ell as usize).unwrap();
        let u = lat.element(&coeffs[..lat.rank()]).unwrap();
        prop_assert!(u_lr_member(&u, ell, r).unwrap());
        prop_assert!(u.mul(&u.conjugate()).unwrap().is_one());
    }

    #[test]
    fn decomposition_recombines(ell in prime(), r in 2usize..12, a in 0i64..13, k in 0u64..30, neg in any::<bool>(), c in -20i64..20) {
        prop_assume!(r % ell as usize != 0);
        let m = 2 * ell as usize;
        let ctx = RingCtx::new(ell, m).unwrap();
        let lat = u_prime_log_lattice(ell, m).unwrap();
        let mut coeffs = vec![0; lat.rank()];
        coeffs[0] = c;
        let q = CycloElt::from_int(ctx, 1 + ell as i128 * (r as i128 - 1)).pow(k);
        let d = CycloElt::from_int(ctx, if neg { -1 } else { 1 })
            .mul(&CycloElt::zeta_pow(ctx, a)).unwrap()
            .mul(&q).unwrap()
            .mul(&lat.element(&coeffs).unwrap()).unwrap();
        let dec = decompose(&d, r).unwrap();
        prop_assert_eq!(dec.recombine().unwrap(), d);
        prop_assert!(dec.anti.mul(&dec.anti.conjugate()).unwrap().is_one());
        prop_assert!(dec.rational.is_galois_stable());
    }

    #[test]
    fn log_exp_round_trip(ell in prime(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = RingCtx::new(ell, 3 * ell as usize).unwrap();
        let x = CycloElt::random(ctx, &mut rng).shift_up(2);
        prop_assume!(!x.is_zero());
        let u = x.exp().unwrap();
        prop_assert_eq!(u.log().unwrap(), x);
    }

    #[test]
    fn trinomial_discriminant(n in 2usize..11, a in -20i64..20, b in -20i64..20) {
        let mut c = vec![0i64; n + 1];
        c[0] = b;
        c[1] += a;
        c[n] = 1;
        let f = IntPoly::from_i64(&c);
        let (nn, aa, bb) = (BigInt::from(n), BigInt::from(a), BigInt::from(b));
        let t1 = nn.pow(n as u32) * bb.pow(n as u32 - 1);
        let t2 = BigInt::from(n - 1).pow(n as u32 - 1) * aa.pow(n as u32);
        let inner = if n % 2 == 1 { t1 + t2 } else { t1 - t2 };
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(f.discriminant().unwrap(), inner * sign);
    }
}

#[test]
fn lattice_index_is_stable() {
    for ell in [3u32, 5, 7, 11] {
        for r in 2..=12usize {
            if r % ell as usize == 0 {
                continue;
            }
            let li = lattice_index_check(ell, r, ell as usize + 1).unwrap();
            assert_eq!(li.t_prime, li.t_expected);
            let m = li.precision;
            let next = cokernel_exponent_at(ell, r, m + ell as usize - 1).unwrap();
            assert_eq!(next, li.t_prime, "ℓ = {ell}, r = {r}");
        }
    }
}
