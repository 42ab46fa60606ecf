use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wreath_core::abelian::AbelianSpec;
use wreath_core::finite::automorphisms::{
    aut_brute_wreath, aut_order_formula, decomposition_hypotheses, theta_decompose, FiniteWreath,
};
use wreath_core::finite::cohomology::{derivations_h1, is_derivation, principal_derivation, shapiro_oracle, CocycleSolver};
use wreath_core::finite::intertwiner::{
    commutant_dimension, commutes_with_action, direct_finiteness_probe, idempotent_split, intertwiner_basis, ProbeMode,
};
use wreath_core::finite::module::FiniteModule;
use wreath_core::finite::{bundled_action, bundled_actions, FiniteAction};
use wreath_core::linalg::{PrimeField, Rationals};

/// `(1/|B|) Σ_b fix(b)²`, computed directly.
fn burnside(action: &FiniteAction) -> usize {
    let g = action.group();
    let total: usize = (0..g.order()).map(|b| action.fixed_points(b).pow(2)).sum();
    assert_eq!(total % g.order(), 0);
    total / g.order()
}

#[test]
fn intertwiner_dimension_is_burnside_count() {
    for (name, a) in bundled_actions() {
        let expected = burnside(&a);
        assert_eq!(commutant_dimension(&Rationals, &a), expected, "{name} over Q");
        for p in [2, 3, 5] {
            let f = PrimeField::new(p).unwrap();
            let basis = intertwiner_basis(&f, &a);
            assert_eq!(basis.len(), expected, "{name} over F{p}");
            assert_eq!(commutant_dimension(&f, &a), expected, "{name} over F{p}");
            assert!(basis.iter().all(|m| commutes_with_action(&f, &a, m)), "{name}");
        }
    }
}

#[test]
fn derivations_satisfy_the_cocycle_law() {
    for name in ["S3-natural", "C3-regular", "C2-fixed-plus-regular", "S3-sign", "C4-halves-plus-fixed"] {
        let a = bundled_action(name).unwrap();
        let solver = CocycleSolver::new(&a);
        for d in [2, 3] {
            let ders = solver.enumerate(d, 1 << 16).unwrap();
            assert_eq!(ders.len() as u128, solver.component(d).unwrap().der.unwrap(), "{name} mod {d}");
            assert!(ders.iter().all(|g| is_derivation(&a, d, g)), "{name} mod {d}");
            // PDer ⊆ Der, and |PDer| = d^{|X|}/|M^B|
            let module = FiniteModule::new(a.num_points(), &AbelianSpec::cyclic(d)).unwrap();
            let mut pder = std::collections::BTreeSet::new();
            for m in module.elements(1 << 16).unwrap() {
                let pd = principal_derivation(&a, d, &m);
                assert!(is_derivation(&a, d, &pd));
                assert!(ders.contains(&pd), "{name} mod {d}");
                pder.insert(pd);
            }
            assert_eq!(pder.len() as u128, solver.component(d).unwrap().pder.unwrap(), "{name} mod {d}");
        }
    }
}

#[test]
fn h1_of_transitive_actions_matches_shapiro() {
    for (name, a) in bundled_actions() {
        if a.orbits_stabs().orbits.len() != 1 {
            continue;
        }
        let h = a.stabilizer(0);
        for p in [2, 3] {
            let r = derivations_h1(&a, &AbelianSpec::cyclic(p)).unwrap();
            assert_eq!(r.h1_size, shapiro_oracle(a.group(), &h, p), "{name} over F{p}");
        }
    }
}

/// Cases where conditions 1-4 hold but an automorphism moves the base `AX`.
const BASE_MOVING: [(&str, u64); 2] = [("C2-regular", 2), ("C2-fixed-plus-regular", 2)];

#[test]
fn aut_formula_against_brute_force() {
    let mut compared = 0;
    for (name, a) in bundled_actions() {
        for d in [2, 3, 4] {
            let coeff = AbelianSpec::cyclic(d);
            let w = FiniteWreath::new(a.clone(), coeff.clone()).unwrap();
            if w.order() > 200 {
                continue;
            }
            let auts = a.group().aut_brute(200).unwrap();
            let hyps = decomposition_hypotheses(&a, &coeff, &auts);
            let formula = aut_order_formula(&a, &coeff);
            if !hyps.iter().all(|h| h.holds) {
                assert!(formula.is_err(), "{name} mod {d}: formula without hypotheses");
                continue;
            }
            let f = formula.unwrap().order;
            let b = aut_brute_wreath(&w, 200).unwrap();
            assert_eq!(f, b.base_preserving as u128, "{name} mod {d}");
            if BASE_MOVING.contains(&(name, d)) {
                assert_eq!(b.aut, 2 * b.base_preserving, "{name} mod {d}");
            } else {
                assert_eq!(f, b.aut as u128, "{name} mod {d}");
            }
            compared += 1;
        }
    }
    assert!(compared >= 8, "only {compared} cases compared");
}

#[test]
fn every_automorphism_of_small_wreaths_decomposes() {
    for (name, d) in [("C3-regular", 2), ("S3-natural", 2), ("C2-regular", 3)] {
        let a = bundled_action(name).unwrap();
        let w = FiniteWreath::new(a, AbelianSpec::cyclic(d)).unwrap();
        let g = w.cayley_group(200).unwrap();
        for theta in g.aut_brute(200).unwrap() {
            let dec = theta_decompose(&w, &theta).unwrap();
            assert!(dec.recomposes && dec.module_map_equivariant && dec.gamma_is_derivation, "{name} mod {d}");
        }
    }
}

#[test]
fn random_automorphisms_of_z3_wr_s3_decompose() {
    let w = FiniteWreath::new(bundled_action("S3-natural").unwrap(), AbelianSpec::cyclic(3)).unwrap();
    let auts = w.cayley_group(200).unwrap().aut_brute(200).unwrap();
    assert_eq!(auts.len(), 324);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let theta = &auts[rng.random_range(0..auts.len())];
        let dec = theta_decompose(&w, theta).unwrap();
        assert!(dec.recomposes && dec.module_map_equivariant && dec.gamma_is_derivation);
    }
}

#[test]
fn base_is_normal_closure_of_one_coordinate() {
    for (name, d) in [("S3-natural", 3), ("C3-regular", 2), ("C4-regular", 2)] {
        let a = bundled_action(name).unwrap();
        let w = FiniteWreath::new(a, AbelianSpec::cyclic(d)).unwrap();
        let g = w.cayley_group(200).unwrap();
        let mut e0 = w.module().zero();
        e0[0] = 1;
        let seed = w.embed_module(&e0);
        let conjugates: Vec<usize> = (0..g.order()).map(|x| g.conj(x, seed)).collect();
        let closure = g.closure(&conjugates);
        let kernel: Vec<usize> = (0..g.order()).filter(|&x| w.base_part(x) == 0).collect();
        assert_eq!(closure, kernel, "{name} mod {d}");
    }
}

#[test]
fn probes_find_no_one_sided_inverses() {
    for (name, a) in bundled_actions() {
        for p in [2, 3] {
            let f = PrimeField::new(p).unwrap();
            let basis = intertwiner_basis(&f, &a);
            let elems: Vec<u64> = (0..p).collect();
            let mode = if (p as u128).pow(basis.len() as u32) <= 1 << 12 {
                ProbeMode::Exhaustive
            } else {
                ProbeMode::Sampled { trials: 200, seed: 5 }
            };
            let r = direct_finiteness_probe(&f, "F", &basis, 1, mode, Some(&elems)).unwrap();
            assert_eq!(r.violations, 0, "{name} over F{p}");
            let r2 = direct_finiteness_probe(&f, "F", &basis, 2, ProbeMode::Sampled { trials: 50, seed: 9 }, Some(&elems)).unwrap();
            assert_eq!(r2.violations, 0, "{name} over F{p}, 2x2");
        }
        let basis = intertwiner_basis(&Rationals, &a);
        let r = direct_finiteness_probe(&Rationals, "Q", &basis, 2, ProbeMode::Sampled { trials: 20, seed: 1 }, None).unwrap();
        assert_eq!(r.violations, 0, "{name} over Q");
    }
}

#[test]
fn stabilizer_idempotents_have_the_right_rank() {
    for (name, a) in bundled_actions() {
        let orbits = a.orbits_stabs().orbits.len();
        for i in 0..orbits {
            let r = idempotent_split(&Rationals, "Q", &a, i).unwrap();
            assert!(r.idempotent, "{name}");
            assert_eq!(r.rank, r.index, "{name}");
        }
    }
}

#[test]
fn group_files_round_trip() {
    for (name, a) in bundled_actions() {
        let back = FiniteAction::parse(&a.to_text()).unwrap();
        assert_eq!(back.num_points(), a.num_points(), "{name}");
        assert_eq!(back.group().order(), a.group().order(), "{name}");
        assert_eq!(burnside(&back), burnside(&a), "{name}");
        assert_eq!(back.orbits_stabs().orbits, a.orbits_stabs().orbits, "{name}");
    }
}

#[test]
fn data_directory_files_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let read = |f: &str| std::fs::read_to_string(dir.join(f)).unwrap();
    let s3 = FiniteAction::parse(&read("s3_natural.txt")).unwrap();
    assert_eq!((s3.group().order(), s3.num_points()), (6, 3));
    let c2 = FiniteAction::parse(&read("c2_trivial_2.txt")).unwrap();
    assert_eq!((c2.group().order(), c2.kernel().len()), (2, 2));
    assert_eq!(FiniteAction::parse(&read("d4_square.txt")).unwrap().group().order(), 8);
    assert!(FiniteAction::parse(&read("no_generators.txt")).is_err());
}
