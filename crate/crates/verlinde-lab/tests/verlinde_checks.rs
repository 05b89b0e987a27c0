use proptest::prelude::*;
use verlinde_lab::exactla::Subspace;
use verlinde_lab::krull::{decompose, iso_test, OperatorModule};
use verlinde_lab::repe::{dual, h_lambda, invariants, make_V, random_module, strip_projective, tensor, trivial, ERep};
use verlinde_lab::sl2tilt::*;
use verlinde_lab::verlinde::*;

const CASES: [(u32, u32); 3] = [(2, 2), (2, 3), (3, 2)];

#[test]
fn quotient_homs_from_the_unit() {
    for (p, n) in CASES {
        let q = p.pow(n) as usize;
        let cat = prime_catalog(p, q - 1).unwrap();
        for lv in sample_lvs(p, n, 3, 21) {
            let one = trivial(lv.field(), n as usize);
            for t in &cat[..q - 1] {
                let r = restrict(&t.hyper, &lv).unwrap();
                let qh = quot_hom(&one, &r, &lv);
                assert_eq!(qh.quotient_dim, t.sl2_inv_dim, "p={p} n={n} i={}", t.i);
                assert_eq!(qh.full.dim() - qh.ideal_dim(), t.sl2_inv_dim);
            }
            let st = restrict(&cat[q - 1].hyper, &lv).unwrap();
            assert_eq!(quot_hom(&one, &st, &lv).quotient_dim, 0, "St_n dies");
        }
    }
}

#[test]
fn restrictions_are_distinct_stable_indecomposables() {
    for (p, n) in CASES {
        let q = p.pow(n) as usize;
        let cat = prime_catalog(p, q - 1).unwrap();
        let lv = &sample_lvs(p, n, 2, 4)[1];
        let cores: Vec<OperatorModule> = cat[..q - 1]
            .iter()
            .map(|t| OperatorModule::from_erep(&strip_projective(&restrict(&t.hyper, lv).unwrap()).core))
            .collect();
        for (i, c) in cores.iter().enumerate() {
            assert!(c.dim > 0, "R(T_{i}) is not projective");
            assert_eq!(decompose(c, i as u64).num_summands(), 1, "R(T_{i}) is stably indecomposable");
            for (j, d) in cores.iter().enumerate().skip(i + 1) {
                assert!(iso_test(c, d, 0).is_none(), "R(T_{i}) and R(T_{j})");
            }
        }
    }
}

#[test]
fn basic_algebras_are_consistent() {
    for (p, n) in CASES {
        for lv in sample_lvs(p, n, 2, 8) {
            let alg = basic_algebra(p, n, &lv, 2).unwrap();
            let nv = alg.num_vertices();
            assert_eq!(nv, (p.pow(n - 1) * (p - 1)) as usize);
            let rc = alg.range_check.as_ref().unwrap();
            assert!(rc.past_end_vanishes && rc.vertices_distinct);
            assert!(rc.vertices_indecomposable);
            for a in 0..nv {
                assert!(alg.hom_dims[a][a] > 0, "identity survives");
                for b in 0..nv {
                    assert_eq!(alg.hom_dims[a][b], alg.hom_dims[b][a], "self-dual vertices");
                }
            }
        }
    }
}

// Independent route: Hom(P, M) = H^0(P* ⊗ M), and K(P, M) corresponds to H_lambda(P* ⊗ M).
fn oracle_dims(m: &ERep, alg: &BasicAlgebra) -> Vec<usize> {
    alg.vertices
        .iter()
        .map(|v| {
            let pm = tensor(&dual(v), m);
            let h0: Subspace = invariants(&pm);
            h0.dim() - h_lambda(&pm, alg.lv.as_ref().unwrap()).dim()
        })
        .collect()
}

#[test]
fn vertex_spaces_match_invariants_oracle() {
    for (p, n) in [(2, 2), (2, 3)] {
        let lv = basis_lv(p, n);
        let alg = basic_algebra(p, n, &lv, 0).unwrap();
        let f = alg.field.clone();
        let mut ms = vec![trivial(&f, n as usize), make_V(&lv)];
        for s in 0..6 {
            ms.push(random_module(&f, n as usize, 9, s));
        }
        for m in &ms {
            let b = to_bmodule(m, &alg);
            b.check(&alg).unwrap();
            assert_eq!(b.dims, oracle_dims(m, &alg));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ver4_modules_satisfy_relations(seed in 0u64..10_000, budget in 1usize..10) {
        let lv = basis_lv(2, 2);
        let alg = basic_algebra(2, 2, &lv, 0).unwrap();
        let m = random_module(&alg.field, 2, budget, seed);
        let b = to_bmodule(&m, &alg);
        prop_assert!(b.check(&alg).is_ok());
        prop_assert_eq!(b.dims.clone(), oracle_dims(&m, &alg));
        let table = name_table(&alg, seed);
        let c = classify_bmodule(&b, &table, seed);
        prop_assert!(c.unmatched.is_empty());
        let total = c.get("1") + c.get("V") + c.get("P(1)") * 2;
        prop_assert_eq!(total, b.total_dim());
    }
}
