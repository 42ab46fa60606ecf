use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use wreath_core::abelian::{is_prime, AbelianSpec};
use wreath_core::bs::{bs_mul, coset_act, coset_canonical, in_h, BsElement, CosetPoint};
use wreath_core::scalar::{LocalizedInt, ModScalar, Ring, Scalar};
use wreath_core::wreath::{BsAction, ModuleVector, WreathElement, WreathProduct};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn localized(k: u64) -> impl Strategy<Value = LocalizedInt> {
    (-500i64..500, 0u32..5).prop_map(move |(n, e)| LocalizedInt::new(n, e, k).unwrap())
}

fn bs_elem(k: u64) -> impl Strategy<Value = BsElement> {
    (localized(k), -6i64..=6).prop_map(|(a, n)| BsElement::new(a, n))
}

fn coset(k: u64) -> impl Strategy<Value = CosetPoint> {
    bs_elem(k).prop_map(|g| coset_canonical(&g))
}

fn scalar_triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    let q = || (-40i64..40, 1i64..20).prop_map(|(p, d)| Scalar::Rational(BigRational::new(p.into(), d.into())));
    let rational = (q(), q(), q());
    let modular = (2u64..40).prop_flat_map(|n| {
        let r = move || (0u64..n).prop_map(move |v| Scalar::Modular(ModScalar::new(v, n).unwrap()));
        (r(), r(), r())
    });
    prop_oneof![rational, modular]
}

proptest! {
    #![proptest_config(cfg(500))]

    #[test]
    fn scalar_ring_axioms((a, b, c) in scalar_triple()) {
        let add = |x: &Scalar, y: &Scalar| x.checked_add(y).unwrap();
        let mul = |x: &Scalar, y: &Scalar| x.checked_mul(y).unwrap();
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        prop_assert_eq!(mul(&add(&a, &b), &c), add(&mul(&a, &c), &mul(&b, &c)));
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert!(add(&a, &a.neg()).is_zero());
        let one = a.ring().one();
        prop_assert_eq!(mul(&a, &one), a.clone());
    }

    #[test]
    fn localized_ring_axioms(k in 2u64..8, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut r = || LocalizedInt::new(rng.random_range(-300i64..300), rng.random_range(0..4), k).unwrap();
        let (a, b, c) = (r(), r(), r());
        let add = |x: &LocalizedInt, y: &LocalizedInt| x.checked_add(y).unwrap();
        let mul = |x: &LocalizedInt, y: &LocalizedInt| x.checked_mul(y).unwrap();
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        // the same identities in ℚ
        prop_assert_eq!(mul(&a, &add(&b, &c)).to_rational(), a.to_rational() * (b.to_rational() + c.to_rational()));
    }

    #[test]
    fn k_is_a_unit_mod_m(m in 2u64..1000) {
        let ring = Ring::modular(m).unwrap();
        let k = ring.from_int(m + 1);
        prop_assert_eq!(&k, &ring.one());
        prop_assert_eq!(k.inverse().unwrap(), ring.one());
    }

    #[test]
    fn canonicalization_is_idempotent(k in 2u64..10, n in -10_000i64..10_000, e in 0u32..8) {
        let x = LocalizedInt::new(n, e, k).unwrap();
        let again = LocalizedInt::new(x.numerator().clone(), x.exponent(), k).unwrap();
        prop_assert_eq!(&again, &x);
        // canonical form: no factor k left to cancel
        prop_assert!(x.exponent() == 0 || x.numerator() % BigInt::from(k) != BigInt::from(0));
        prop_assert_eq!(x.to_rational(), BigRational::new(n.into(), BigInt::from(k).pow(e)));
    }

    #[test]
    fn coset_canonical_is_idempotent(x in coset(3)) {
        prop_assert_eq!(coset_canonical(&x.representative()), x);
    }

    #[test]
    fn coset_constant_on_left_cosets(g in bs_elem(4), z in -50i64..50) {
        let h = BsElement::new(LocalizedInt::integer(z, 4).unwrap(), 0);
        prop_assert_eq!(coset_canonical(&bs_mul(&g, &h).unwrap()), coset_canonical(&g));
    }

    #[test]
    fn stabilizer_of_base_point_is_h(g in bs_elem(3)) {
        let v = CosetPoint::base_point(3).unwrap();
        prop_assert_eq!(coset_act(&g, &v).unwrap() == v, in_h(&g));
    }
}

proptest! {
    #![proptest_config(cfg(1000))]

    #[test]
    fn coset_action_is_a_left_action(g in bs_elem(3), h in bs_elem(3), x in coset(3)) {
        let gh = bs_mul(&g, &h).unwrap();
        prop_assert_eq!(
            coset_act(&gh, &x).unwrap(),
            coset_act(&g, &coset_act(&h, &x).unwrap()).unwrap()
        );
        prop_assert_eq!(coset_act(&BsElement::identity(3).unwrap(), &x).unwrap(), x);
    }

    #[test]
    fn wreath_group_axioms(g in wreath_elem(), h in wreath_elem(), f in wreath_elem()) {
        let action = BsAction::new(3).unwrap();
        let wr = WreathProduct::new(&action, AbelianSpec::new(vec![2, 0]));
        let mul = |x: &Elem, y: &Elem| wr.mul(x, y).unwrap();
        prop_assert_eq!(mul(&mul(&g, &h), &f), mul(&g, &mul(&h, &f)));
        prop_assert_eq!(mul(&g, &wr.identity()), g.clone());
        prop_assert_eq!(mul(&wr.identity(), &g), g.clone());
        prop_assert!(wr.is_identity(&mul(&g, &wr.inverse(&g))));
        prop_assert!(wr.is_identity(&mul(&wr.inverse(&g), &g)));
        // π is a homomorphism onto B
        prop_assert_eq!(wr.pi(&mul(&g, &h)), bs_mul(&g.b, &h.b).unwrap());
    }

    #[test]
    fn mv_act_distributes(b in bs_elem(3), m in module_vec(), n in module_vec()) {
        let action = BsAction::new(3).unwrap();
        let wr = WreathProduct::new(&action, AbelianSpec::new(vec![2, 0]));
        let lhs = wr.mv_act(&b, &wr.mv_add(&m, &n));
        let rhs = wr.mv_add(&wr.mv_act(&b, &m), &wr.mv_act(&b, &n));
        prop_assert_eq!(lhs, rhs);
    }
}

type Elem = WreathElement<CosetPoint, BsElement>;

fn module_vec() -> impl Strategy<Value = ModuleVector<CosetPoint>> {
    prop::collection::vec((coset(3), 0i64..2, -5i64..5), 0..5).prop_map(|terms| {
        let spec = AbelianSpec::new(vec![2, 0]);
        let mut mv = ModuleVector::zero();
        for (x, a, b) in terms {
            mv.add_term(&spec, x, &spec.element_from_i64(&[a, b]).unwrap());
        }
        mv
    })
}

fn wreath_elem() -> impl Strategy<Value = Elem> {
    (module_vec(), bs_elem(3)).prop_map(|(mv, b)| WreathElement { mv, b })
}

#[test]
fn presentation_relation() {
    for k in 3..=10 {
        let t = BsElement::t(k).unwrap();
        let h = BsElement::h(k).unwrap();
        let lhs = bs_mul(&t.inverse(), &bs_mul(&h, &t).unwrap()).unwrap();
        assert_eq!(lhs, h.pow(k as i64), "k = {k}");
    }
}

/// `dim_{𝔽_p} A/pA` by counting the solutions of `p·x = 0` in `A`, which has
/// the same size as `A/pA` for finite `A`; the free part adds one per `ℤ`.
fn np_oracle(invariants: &[u64], p: u64) -> usize {
    let torsion: Vec<u64> = invariants.iter().copied().filter(|&d| d != 0).collect();
    let free = invariants.len() - torsion.len();
    let mut count: u128 = 1;
    for &d in &torsion {
        count *= (0..d).filter(|x| (x * p) % d == 0).count() as u128;
    }
    let mut dim = 0;
    while count > 1 {
        assert_eq!(count % p as u128, 0);
        count /= p as u128;
        dim += 1;
    }
    dim + free
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn n_p_matches_oracle(invariants in prop::collection::vec(prop_oneof![Just(0u64), 1u64..60], 0..6)) {
        let spec = AbelianSpec::new(invariants.clone());
        for p in (2..60).filter(|&p| is_prime(p)) {
            // n_p counts p-power summands; the oracle counts dim A/pA, which
            // also sees the free rank
            prop_assert_eq!(spec.n_p(p) + spec.rank(), np_oracle(&invariants, p), "p = {}", p);
        }
    }

    #[test]
    fn decompose_then_recombine(invariants in prop::collection::vec(prop_oneof![Just(0u64), 1u64..200], 0..6)) {
        let spec = AbelianSpec::new(invariants);
        let back = AbelianSpec::recombine(&spec.primary_decompose());
        prop_assert_eq!(back.isomorphism_type(), spec.isomorphism_type());
        prop_assert_eq!(back.order(), spec.order());
    }
}
