use proptest::prelude::*;
use verlinde_lab::ffield::{gf, FqField, PP1Point};
use verlinde_lab::klein::*;
use verlinde_lab::repe::{random_module, tensor};

fn lambdas(f: &FqField) -> Vec<PP1Point> {
    let al = f.alpha().unwrap();
    vec![
        PP1Point::finite(f, 0),
        PP1Point::finite(f, 1),
        PP1Point::Infinity,
        PP1Point::finite(f, al),
        PP1Point::finite(f, f.add(al, 1)),
    ]
}

#[test]
fn round_trip_over_gf16() {
    let f = gf(2, 4);
    let mut labels: Vec<KleinLabel> = (-4..=4).map(KleinLabel::Omega).collect();
    labels.push(KleinLabel::Proj);
    for m in 1..=6 {
        for l in lambdas(&f) {
            labels.push(KleinLabel::a(m, l));
        }
    }
    for l in labels {
        let c = classify(&l.construct(&f), 0).unwrap();
        assert_eq!(c.entries, vec![(l.clone(), 1)], "{l}");
    }
}

#[test]
fn tensor_products_match_fusion_rules() {
    let f = gf(2, 4);
    let mut labels: Vec<KleinLabel> = vec![KleinLabel::Omega(1), KleinLabel::Omega(-2), KleinLabel::Proj];
    for m in 1..=4 {
        for l in lambdas(&f) {
            labels.push(KleinLabel::a(m, l));
        }
    }
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i..] {
            let t = tensor(&a.construct(&f), &b.construct(&f));
            let got = classify(&t, 7).unwrap();
            let (stable, proj) = fuse_oracle(a, b);
            assert!(got.stable().same_labels(&stable), "{a} x {b}: {got} vs {stable}");
            assert_eq!(got.get(&KleinLabel::Proj), proj, "{a} x {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn every_summand_gets_a_label(seed in 0u64..100_000, budget in 1usize..12) {
        let f = gf(2, 2);
        let m = random_module(&f, 2, budget, seed);
        let c = classify_detailed(&m, seed).unwrap();
        prop_assert_eq!(c.multiset.dim(), m.dim);
        for (part, l) in c.decomposition.parts.iter().zip(&c.labels) {
            match l {
                KleinLabel::Omega(_) => prop_assert_eq!(part.dim() % 2, 1),
                _ => prop_assert_eq!(part.dim() % 2, 0),
            }
        }
    }
}
