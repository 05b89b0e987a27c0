use verlinde_lab::ffield::gf;
use verlinde_lab::krull::{decompose, iso_test};
use verlinde_lab::repe::{make_V, trivial};
use verlinde_lab::sl2tilt::*;

const CASES: [(u32, u32); 3] = [(2, 2), (2, 3), (3, 2)];

#[test]
fn costandard_hom_dimensions() {
    for (p, n) in CASES {
        let q = p.pow(n) as usize;
        for lv in sample_lvs(p, n, 3, 11) {
            let one = trivial(lv.field(), n as usize);
            let v = make_V(&lv);
            for i in 0..q {
                let w = weyl_module(i, &gf(p, 1));
                assert_eq!(hom_u_invariants(&w, &lv, &one).unwrap(), 1, "p={p} n={n} i={i}");
                let expect = if i == 0 { 1 } else { 2 };
                assert_eq!(hom_u_invariants(&w, &lv, &v).unwrap(), expect, "p={p} n={n} i={i}");
            }
        }
        let lv = basis_lv(p, n);
        let w = weyl_module(q, &gf(p, 1));
        let a = hom_u_invariants(&w, &lv, &trivial(lv.field(), n as usize)).unwrap();
        let b = hom_u_invariants(&w, &lv, &make_V(&lv)).unwrap();
        assert!(a != 1 || b != 2, "bound is sharp at i = {q}");
    }
}

#[test]
fn tilting_hom_dimensions() {
    for (p, n) in CASES {
        let q = p.pow(n) as usize;
        let cat = prime_catalog(p, q).unwrap();
        for lv in sample_lvs(p, n, 3, 5) {
            let one = trivial(lv.field(), n as usize);
            let v = make_V(&lv);
            for t in &cat[..q] {
                let h1 = hom_u_invariants(&t.hyper, &lv, &one).unwrap();
                let hv = hom_u_invariants(&t.hyper, &lv, &v).unwrap();
                assert_eq!(h1, t.nabla_length, "p={p} n={n} i={}", t.i);
                assert_eq!(hv, 2 * t.nabla_length - t.sl2_inv_dim, "p={p} n={n} i={}", t.i);
            }
        }
    }
}

#[test]
fn tensor_powers_split_into_catalog_entries() {
    for (p, mmax) in [(2u32, 6usize), (3, 5)] {
        let cat = prime_catalog(p, mmax).unwrap();
        for m in 0..=mmax {
            let t = tensor_power_hyper(m, &gf(p, 1));
            let d = decompose(&t.operator_module(), 3);
            let mut total = 0;
            for part in &d.parts {
                let h = t.summand(&part.embeddings[0], &part.projections[0]).unwrap();
                let hw = h.highest_weight().unwrap() as usize;
                let entry = &cat[hw];
                assert_eq!(h.character(), entry.character, "p={p} m={m}");
                assert!(iso_test(&h.operator_module(), &entry.hyper.operator_module(), 1).is_some());
                total += h.dim * part.mult;
            }
            assert_eq!(total, 1 << m);
        }
    }
}

#[test]
fn both_routes_agree() {
    for (p, n) in CASES {
        let q = p.pow(n) as usize;
        let cat = prime_catalog(p, q).unwrap();
        for lv in sample_lvs(p, n, 2, 9) {
            let peel = peeling_recursion(&lv, q - 1, 2).unwrap();
            for (t, nmod) in cat.iter().zip(&peel) {
                let r = verlinde_lab::repe::strip_projective(&restrict(&t.hyper, &lv).unwrap()).core;
                let a = verlinde_lab::krull::OperatorModule::from_erep(&r);
                let b = verlinde_lab::krull::OperatorModule::from_erep(nmod);
                assert!(iso_test(&a, &b, 0).is_some(), "p={p} n={n} i={}", t.i);
            }
        }
    }
}
