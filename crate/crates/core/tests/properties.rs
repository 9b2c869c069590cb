use ktoeplitz::dsl::parse_expr;
use ktoeplitz::ktheory::{kvec_e, kvec_e_by_recursion, proj_e};
use ktoeplitz::numeric::{cross_validate_mul, to_matrix, TruncationSpec};
use ktoeplitz::sampling::{random_homogeneous, random_tensor, random_toeplitz, rng, Bounds};
use ktoeplitz::tensor::SlotKind;
use ktoeplitz::{Signature, Sym, TensorElement, ToeplitzBasis, ToeplitzElement};
use proptest::prelude::*;
use rand::Rng;

fn b() -> Bounds {
    Bounds::default()
}

fn sigs() -> impl Strategy<Value = Signature> {
    prop_oneof![
        Just("T".parse().unwrap()),
        Just("T,T".parse().unwrap()),
        Just("T,C".parse().unwrap()),
        Just("S2".parse().unwrap()),
        Just("S2,T".parse().unwrap()),
        Just("C,S3".parse().unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn toeplitz_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y, z) = (random_toeplitz(&mut r, b()), random_toeplitz(&mut r, b()), random_toeplitz(&mut r, b()));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn tensor_associative(sig in sigs(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y, z) = (random_tensor(&mut r, &sig, b()), random_tensor(&mut r, &sig, b()), random_tensor(&mut r, &sig, b()));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_idempotent(sig in sigs(), seed in any::<u64>()) {
        let x = random_tensor(&mut rng(seed), &sig, b());
        let again = TensorElement::from_terms(&sig, x.terms().map(|(t, c)| (t.clone(), c.clone())));
        prop_assert_eq!(&again, &x);
        prop_assert_eq!(x.cast(&sig).unwrap(), x);
    }

    #[test]
    fn adjoint_reverses_products(sig in sigs(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (random_tensor(&mut r, &sig, b()), random_tensor(&mut r, &sig, b()));
        prop_assert_eq!(x.mul(&y).adjoint(), y.adjoint().mul(&x.adjoint()));
        prop_assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn compacts_form_an_ideal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_toeplitz(&mut r, b()).finite_part();
        let y = random_toeplitz(&mut r, b());
        prop_assert!(a.symbol().is_zero());
        prop_assert!(a.mul(&y).symbol().is_zero());
        prop_assert!(y.mul(&a).symbol().is_zero());
    }

    #[test]
    fn symbol_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (random_toeplitz(&mut r, b()), random_toeplitz(&mut r, b()));
        prop_assert_eq!(x.mul(&y).symbol(), x.symbol().mul(&y.symbol()));
    }

    /// Multiplying canonical representatives agrees with multiplying any
    /// representatives and reducing afterwards.
    #[test]
    fn quotient_sound(seed in any::<u64>(), sig in prop_oneof![Just("S2"), Just("S2,T"), Just("T,S3"), Just("S2,C")]) {
        let sig: Signature = sig.parse().unwrap();
        let lifted = sig.lifted();
        let mut r = rng(seed);
        let (x, y) = (random_tensor(&mut r, &sig, b()), random_tensor(&mut r, &sig, b()));
        let noisy = |e: &TensorElement, r: &mut rand_chacha::ChaCha8Rng| {
            let mut raw = e.lift();
            for _ in 0..r.gen_range(1..=3) {
                let mut t = ktoeplitz::sampling::random_tuple(r, &lifted, b());
                for &(lo, hi) in sig.sphere_ranges() {
                    for s in &mut t[lo..hi] {
                        *s = Sym::T(ToeplitzBasis::Unit(r.gen_range(0..3), r.gen_range(0..3)));
                    }
                }
                raw = &raw + &TensorElement::from_terms(&lifted, [(t, ktoeplitz::rational::rat(r.gen_range(1..4)))]);
            }
            raw
        };
        let (rx, ry) = (noisy(&x, &mut r), noisy(&y, &mut r));
        prop_assert_eq!(rx.cast(&sig).unwrap(), x.clone());
        prop_assert_eq!(rx.mul(&ry).cast(&sig).unwrap(), x.mul(&y));
    }

    #[test]
    fn degree_additive(seed in any::<u64>(), p in -3i64..=3, q in -3i64..=3) {
        let sig: Signature = "T,C,T".parse().unwrap();
        let mut r = rng(seed);
        let x = random_homogeneous(&mut r, &sig, b(), p);
        let y = random_homogeneous(&mut r, &sig, b(), q);
        let prod = x.mul(&y);
        prop_assert!(prod.degree_split().keys().all(|d| *d == p + q));
    }

    #[test]
    fn gauge_is_star_automorphism(seed in any::<u64>()) {
        let sig: Signature = "S2,T,C".parse().unwrap();
        let slot = sig.kinds().iter().position(|k| *k == SlotKind::Circle).unwrap();
        let mut r = rng(seed);
        let (x, y) = (random_tensor(&mut r, &sig, b()), random_tensor(&mut r, &sig, b()));
        let g = |e: &TensorElement| e.gauge_move(slot).unwrap();
        prop_assert_eq!(g(&x.mul(&y)), g(&x).mul(&g(&y)));
        prop_assert_eq!(g(&x.adjoint()), g(&x).adjoint());
        prop_assert_eq!(g(&x).gauge_move_inverse(slot).unwrap(), x);
    }

    #[test]
    fn print_parse_round_trip(sig in sigs(), seed in any::<u64>()) {
        let x = random_tensor(&mut rng(seed), &sig, b());
        prop_assert_eq!(parse_expr(&x.to_expr(), &sig).unwrap(), x);
    }

    #[test]
    fn matrix_of_adjoint_is_conjugate_transpose(seed in any::<u64>(), sig in prop_oneof![Just("T"), Just("T,C"), Just("T,T")]) {
        let sig: Signature = sig.parse().unwrap();
        let spec = TruncationSpec::seeded(7, seed).unwrap();
        let x = random_tensor(&mut rng(seed), &sig, b());
        for (a, m) in to_matrix(&x.adjoint(), &spec).unwrap().iter().zip(to_matrix(&x, &spec).unwrap()) {
            prop_assert_eq!(a, &m.conj_transpose());
        }
    }

    #[test]
    fn window_monotone(seed in any::<u64>(), n in 6usize..12) {
        let sig: Signature = "T,C".parse().unwrap();
        let mut r = rng(seed);
        let (x, y) = (random_tensor(&mut r, &sig, b()), random_tensor(&mut r, &sig, b()));
        let at = |n| cross_validate_mul(&x, &y, &TruncationSpec::seeded(n, 42).unwrap(), 1e-10).unwrap().passed();
        prop_assert!(!at(n) || at(n + 1));
        prop_assert!(at(n));
    }

    #[test]
    fn kvec_closed_form_matches_recursion(n in 0usize..=10, j in 0usize..=11, k in 0usize..=10) {
        prop_assume!(j <= n + 1);
        prop_assert_eq!(kvec_e(n, j, k).unwrap(), kvec_e_by_recursion(n, j, k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn e_projections_are_invariant(n in 0usize..=3, j in 0usize..=4, k in 0u32..=4) {
        prop_assume!(j <= n + 1);
        let e = proj_e(n, j, k).unwrap();
        prop_assert!(e.is_projection());
        prop_assert!(e.degree_split().keys().all(|d| *d == 0));
    }
}

#[test]
fn projections_up_to_32() {
    for k in 0..=32 {
        let p = ToeplitzElement::proj_p(k);
        let q = ToeplitzElement::proj_pperp(k);
        assert!(p.is_projection() && q.is_projection(), "k = {k}");
        assert_eq!(q, &ToeplitzElement::proj_pperp(k + 1) + &ToeplitzElement::unit(k, k));
    }
}

#[test]
fn sphere_relations_hold() {
    for n in 0..=3 {
        let sig = Signature::sphere(n + 1);
        let one = TensorElement::one(&sig);
        let s: Vec<TensorElement> = (0..=n).map(|i| TensorElement::t(&sig, i).unwrap()).collect();
        let mut prod = one.clone();
        for (i, si) in s.iter().enumerate() {
            assert_eq!(si.adjoint().mul(si), one);
            for sj in &s[i + 1..] {
                assert_eq!(si.mul(sj), sj.mul(si));
                assert_eq!(si.mul(&sj.adjoint()), sj.adjoint().mul(si));
            }
            prod = prod.mul(&(&one - &si.mul(&si.adjoint())));
        }
        assert!(prod.is_zero(), "n = {n}");
    }
}
