use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use verlinde_lab::exactla::Mat;
use verlinde_lab::ffield::gf;
use verlinde_lab::repe::*;

fn random_map(h: &HomSpace, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<u32> = (0..h.dim()).map(|_| h.target.field.random(&mut rng)).collect();
    h.combine(&c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructed_modules_satisfy_relations(seed in 0u64..10_000, budget in 1usize..10) {
        let f = gf(2, 2);
        let m = random_module(&f, 2, budget, seed);
        prop_assert!(ERep::new(&f, 2, m.gens.clone(), None).is_ok());
        let t = tensor(&m, &dual(&m));
        prop_assert!(ERep::new(&f, 2, t.gens.clone(), None).is_ok());
        let w = omega(&m, 1);
        prop_assert!(ERep::new(&f, 2, w.gens.clone(), None).is_ok() || w.dim == 0);
    }

    #[test]
    fn hom_dimension_is_dual_symmetric(s1 in 0u64..10_000, s2 in 0u64..10_000) {
        let f = gf(2, 2);
        let a = random_module(&f, 2, 7, s1);
        let b = random_module(&f, 2, 7, s2);
        prop_assert_eq!(hom_space(&a, &b).dim(), hom_space(&dual(&b), &dual(&a)).dim());
    }

    #[test]
    fn h_lambda_inside_invariants(seed in 0u64..10_000, l in 2u32..16) {
        let f = gf(2, 4);
        let lv = LambdaVec::from_codes(&f, &[1, l]).unwrap();
        let m = random_module(&f, 2, 9, seed);
        prop_assert!(invariants(&m).contains_space(&h_lambda(&m, &lv)));
        let fr = free(&f, 2, 1 + (seed % 2) as usize);
        prop_assert_eq!(h_lambda(&fr, &lv), invariants(&fr));
    }

    #[test]
    fn k_is_a_tensor_ideal(s in 0u64..10_000) {
        let f = gf(2, 2);
        let lv = LambdaVec::from_codes(&f, &[1, 2]).unwrap();
        let x = random_module(&f, 2, 5, s);
        let y = random_module(&f, 2, 5, s + 1);
        let x2 = random_module(&f, 2, 4, s + 2);
        let y2 = random_module(&f, 2, 4, s + 3);
        let z = random_module(&f, 2, 3, s + 4);
        let k = k_ideal(&x, &y, &lv);
        let kmaps = k.maps();
        prop_assume!(!kmaps.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut kk = Mat::zeros(&f, y.dim, x.dim);
        for m in &kmaps {
            kk.add_scaled(f.random(&mut rng), m);
        }
        let a = random_map(&hom_space(&x2, &x), s + 5);
        let b = random_map(&hom_space(&y, &y2), s + 6);
        let outer = k_ideal(&x2, &y2, &lv);
        let comp = b.mul(&kk).mul(&a);
        let c = outer.hom.coords(&comp).unwrap();
        prop_assert!(outer.sub.contains(&c));
        let kz = k_ideal(&tensor(&x, &z), &tensor(&y, &z), &lv);
        let t = kk.kron(&Mat::identity(&f, z.dim));
        let c = kz.hom.coords(&t).unwrap();
        prop_assert!(kz.sub.contains(&c));
    }

    #[test]
    fn tensor_with_unit_is_identity(seed in 0u64..10_000) {
        let f = gf(2, 2);
        let m = random_module(&f, 2, 8, seed);
        let t = tensor(&m, &trivial(&f, 2));
        let id = Mat::identity(&f, m.dim);
        prop_assert!(m.is_intertwiner(&t, &id));
        prop_assert!(t.is_intertwiner(&m, &id));
    }
}
