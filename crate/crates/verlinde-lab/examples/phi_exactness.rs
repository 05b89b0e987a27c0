// Hom(Q, P^4) as Klein modules and the exactness verdicts built from them.

use verlinde_lab::ffield::{gf, PP1Point};
use verlinde_lab::ofunc::{perm_embedding, thmver4_conditions, CategorySpec, PhiHarness, PhiOptions};

pub fn run_example() {
    let e = perm_embedding(2, 2);
    println!("C2 x C2 in S4: {} and {}", e.cycles(0), e.cycles(1));

    let spec = CategorySpec::Ver { p: 2, n: 2 };
    let h = PhiHarness::new(&spec, None, &PhiOptions::default(), 0).unwrap();
    for pair in &h.pairs {
        println!("  Hom(Q, P^4) for Q={} P={}: {}", pair.hom.source, pair.hom.base, pair.klein);
    }
    let f = gf(2, 4);
    for (name, lam) in [("alpha", PP1Point::finite(&f, f.alpha().unwrap())), ("0", PP1Point::finite(&f, 0))] {
        for m in 1..=2 {
            let v = h.verdict(&lam, m, 0).unwrap();
            println!("{spec} lam={name} level {m}: exact={}", v.exact);
        }
    }
    let c = thmver4_conditions(&spec, None, 0).unwrap();
    println!("condition hits: {:?} / {:?}", c.cond3_hits, c.cond4_hits);

    let h8 = PhiHarness::new(&CategorySpec::Ver { p: 2, n: 3 }, None, &PhiOptions::default(), 0).unwrap();
    let v = h8.verdict(&PP1Point::finite(&f, f.alpha().unwrap()), 1, 0).unwrap();
    println!("Ver(2,3) lam=alpha level 1: exact={}", v.exact);
    assert!(!v.exact);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
