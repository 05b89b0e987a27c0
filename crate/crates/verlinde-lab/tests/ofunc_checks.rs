use proptest::prelude::*;
use verlinde_lab::exactla::Mat;
use verlinde_lab::ffield::{gf, FqField, PP1Point};
use verlinde_lab::klein::{classify, KleinLabel, KleinMultiset};
use verlinde_lab::ofunc::*;
use verlinde_lab::repe::{random_module, trivial, LambdaVec};
use verlinde_lab::sl2tilt::{basis_lv, sample_lvs};
use verlinde_lab::verlinde::basic_algebra;

fn alpha_pair(f: &FqField) -> (PP1Point, PP1Point) {
    let al = f.alpha().unwrap();
    (PP1Point::finite(f, al), PP1Point::finite(f, f.add(al, 1)))
}

fn ver4_lvs() -> Vec<LambdaVec> {
    let f64 = gf(2, 6);
    let mut lvs = sample_lvs(2, 2, 3, 11);
    lvs.push(LambdaVec::from_codes(&f64, &[1, f64.alpha().unwrap()]).unwrap());
    lvs
}

fn expected_calc(f: &FqField) -> KleinMultiset {
    let (a, b) = alpha_pair(f);
    let mut m = KleinMultiset::default();
    m.add(KleinLabel::a(1, a), 1);
    m.add(KleinLabel::a(1, b), 1);
    m
}

#[test]
fn ver4_power_module_is_two_alpha_lines() {
    for lv in ver4_lvs() {
        let alg = basic_algebra(2, 2, &lv, 0).unwrap();
        let p1 = vertex_of(&alg, 2).unwrap();
        let v = vertex_of(&alg, 1).unwrap();
        let sq = square_split(&alg, v).unwrap();
        let h = hom_power_ver(&alg, p1, v, &sq).unwrap();
        let want = expected_calc(&alg.field);
        assert!(classify(&h.module, 0).unwrap().same_labels(&want), "over {:?}", alg.field);
        assert!(classify(&swap_generators(&h.module), 0).unwrap().same_labels(&want));
        let d = hom_power_direct(&alg, p1, v, 1 << 12).unwrap();
        assert!(classify(&d.module, 0).unwrap().same_labels(&want));
    }
}

#[test]
fn split_and_direct_routes_agree() {
    for (n, lv) in [(2, basis_lv(2, 2)), (2, sample_lvs(2, 2, 2, 5)[1].clone()), (3, basis_lv(2, 3))] {
        let alg = basic_algebra(2, n, &lv, 0).unwrap();
        for base in 0..alg.num_vertices() {
            if alg.vertices[base].dim.pow(4) > 256 {
                continue;
            }
            let sq = square_split(&alg, base).unwrap();
            for src in 0..alg.num_vertices() {
                let a = classify(&hom_power_ver(&alg, src, base, &sq).unwrap().module, 1).unwrap();
                let b = classify(&hom_power_direct(&alg, src, base, 256).unwrap().module, 1).unwrap();
                assert!(a.same_labels(&b), "n={n} base={base} src={src}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn ver4_exactness_boundary() {
    for lv in [basis_lv(2, 2), sample_lvs(2, 2, 2, 9)[1].clone()] {
        let h = PhiHarness::new(&CategorySpec::Ver { p: 2, n: 2 }, Some(&lv), &PhiOptions::default(), 0).unwrap();
        let f16 = gf(2, 4);
        let (a, b) = alpha_pair(&f16);
        let lams = [
            PP1Point::finite(&f16, 0),
            PP1Point::finite(&f16, 1),
            PP1Point::Infinity,
            a,
            b,
            PP1Point::finite(&f16, 2),
        ];
        for lam in &lams {
            for m in 1..=3 {
                let v = h.verdict(lam, m, 0).unwrap();
                let expect = m == 1 && in_f4(lam);
                assert_eq!(v.exact, expect, "lam={} m={m}", v.lam);
                assert_eq!(v.witness.is_some(), v.exact);
            }
        }
    }
}

fn in_f4(lam: &PP1Point) -> bool {
    match lam {
        PP1Point::Finite(e) => e.field.degree_of(e.code) == 2,
        PP1Point::Infinity => false,
    }
}

#[test]
fn ver8_is_never_exact() {
    let f64 = gf(2, 6);
    let (a, b) = alpha_pair(&f64);
    let lams = [PP1Point::finite(&f64, 0), PP1Point::finite(&f64, 1), PP1Point::Infinity, a, b, PP1Point::finite(&f64, f64.gen())];
    for spec in [CategorySpec::Ver { p: 2, n: 3 }, CategorySpec::VerPlus { p: 2, n: 3 }] {
        let h = PhiHarness::new(&spec, None, &PhiOptions::default(), 0).unwrap();
        for lam in &lams {
            for m in 1..=3 {
                assert!(!h.verdict(lam, m, 0).unwrap().exact, "{spec} lam={lam:?} m={m}");
            }
        }
        let c = ver4_conditions_of(&h);
        assert!(c.permutation_only && c.cond3_hits.is_empty() && c.cond4_hits.is_empty());
    }
}

#[test]
fn ver8_power_modules_are_permutation_modules() {
    let alg = basic_algebra(2, 3, &basis_lv(2, 3), 0).unwrap();
    for base in 0..alg.num_vertices() {
        let sq = square_split(&alg, base).unwrap();
        for i in [3, 4] {
            let src = vertex_of(&alg, i).unwrap();
            let c = classify(&hom_power_ver(&alg, src, base, &sq).unwrap().module, 0).unwrap();
            for (l, _) in &c.entries {
                let ok = match l {
                    KleinLabel::Proj => true,
                    KleinLabel::A { m, lam } => *m == 1 && lam.is_prime_rational(),
                    KleinLabel::Omega(_) => false,
                };
                assert!(ok, "Q=T{i}, P={}: {l}", alg.vertex_label(base));
            }
        }
    }
}

#[test]
fn group_categories() {
    let f2 = gf(2, 1);
    let f4 = gf(2, 2);
    let (a, _) = alpha_pair(&f4);
    let h = PhiHarness::new(&CategorySpec::rep_trivial(&f2), None, &PhiOptions::default(), 0).unwrap();
    assert_eq!(h.pairs[0].klein.entries, vec![(KleinLabel::Omega(0), 1)]);
    for m in 1..=3 {
        assert!(h.verdict(&a, m, 0).unwrap().exact);
        assert!(h.verdict(&PP1Point::Infinity, m, 0).unwrap().exact);
    }
    let c2 = PhiHarness::new(&CategorySpec::rep_c2(&f4), None, &PhiOptions::default(), 0).unwrap();
    let cond = ver4_conditions_of(&c2);
    assert!(cond.cond4_hits.contains(&"Omega(0)".to_string()), "{cond:?}");
    assert!(c2.verdict(&a, 1, 0).unwrap().exact);
    // S_3 over F_2: two projective indecomposables, four pairs
    let s3 = CategorySpec::RepH {
        field: f2.clone(),
        gens: vec![Mat::from_rows(&f2, &[vec![0, 1], vec![1, 0]]), Mat::from_rows(&f2, &[vec![0, 1], vec![1, 1]])],
    };
    let h = PhiHarness::new(&s3, None, &PhiOptions::default(), 0).unwrap();
    assert_eq!(h.pairs.len(), 4);
    assert!(ver4_conditions_of(&h).cond4_hits.contains(&"Omega(0)".to_string()));
}

#[test]
fn ver4_conditions() {
    let c = thmver4_conditions(&CategorySpec::Ver { p: 2, n: 2 }, None, 0).unwrap();
    assert!(c.cond4_hits.contains(&"A(1,alpha)".to_string()), "{c:?}");
    assert!(c.cond3_hits.contains(&"A(1,alpha+1)".to_string()));
    assert!(!c.permutation_only);
}

#[test]
fn conjecture_scan_small() {
    let r = conjecture_scan(2, 2, &basis_lv(2, 2), 60, 10, 4).unwrap();
    assert_eq!(r.failed, 0);
    assert_eq!(r.results[0].dim, 1);
    assert_eq!(r.results[0].summands.get("R(T1)"), Some(&1));
    for (p, n) in [(2, 3), (3, 2)] {
        let r = conjecture_scan(p, n, &basis_lv(p, n), 12, 8, 2).unwrap();
        assert!(r.results[0].pass, "R(St_(n-1)) itself is in the catalog");
        for s in &r.results {
            assert_eq!(s.pass, s.certificate.is_none());
        }
    }
    assert!(conjecture_scan(2, 4, &basis_lv(2, 4), 1, 4, 0).is_err());
}

#[test]
fn scan_certificates_name_the_sample() {
    // An empty catalog fails every non-projective summand.
    let lv = basis_lv(2, 2);
    let st = verlinde_lab::sl2tilt::restrict(&verlinde_lab::sl2tilt::natural(&gf(2, 1)), &lv).unwrap();
    let empty = DCatalog { imax: 0, entries: vec![] };
    let r = scan_one(&st, &trivial(&lv.field().clone(), 2), &empty, 0, 0);
    assert!(!r.pass);
    let cert = r.certificate.unwrap();
    assert_eq!(cert["unmatched"].as_array().unwrap().len(), 1);
    assert_eq!(cert["sample"]["n"], 2);
}

fn random_h_module(f: &FqField, seed: u64, budget: usize) -> HModule {
    let m = random_module(f, 2, budget, seed);
    HModule { name: "M".into(), dim: m.dim, gens: m.gens.clone() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn factor_permutations_commute_with_the_diagonal_action(seed in 0u64..10_000, budget in 1usize..4) {
        let f = gf(2, 2);
        let m = random_h_module(&f, seed, budget);
        let e = perm_embedding(2, 2);
        for perm in &e.perms {
            let pm = factor_permutation(&f, m.dim, perm);
            for g in &m.gens {
                let g4 = g.kron(g).kron(g).kron(g);
                prop_assert_eq!(pm.mul(&g4), g4.mul(&pm));
            }
        }
    }

    #[test]
    fn hom_powers_are_klein_modules(s1 in 0u64..10_000, s2 in 0u64..10_000) {
        let f = gf(2, 1);
        let q = random_h_module(&f, s1, 3);
        let p = random_h_module(&f, s2, 3);
        let h = hom_power_group(&f, &q, &p, 1 << 10).unwrap();
        let c = classify(&h.module, s1).unwrap();
        prop_assert_eq!(c.dim(), h.module.dim);
    }

    #[test]
    fn regular_embeddings(p in prop::sample::select(vec![2u32, 3, 5]), n in 1u32..4) {
        let e = perm_embedding(p, n);
        prop_assert!(e.check());
        prop_assert_eq!(e.perms.len(), n as usize);
    }
}
