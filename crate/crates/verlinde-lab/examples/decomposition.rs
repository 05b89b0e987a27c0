// Krull-Schmidt decomposition of a random module over C_3 x C_3.

use verlinde_lab::ffield::gf;
use verlinde_lab::krull::{decompose, iso_test, OperatorModule};
use verlinde_lab::repe::{dsum, random_module};

pub fn run_example() {
    let f = gf(3, 1);
    let a = random_module(&f, 2, 5, 11);
    let b = random_module(&f, 2, 4, 12);
    let m = dsum(&dsum(&a, &b), &a);
    let om = OperatorModule::from_erep(&m);
    let d = decompose(&om, 0);
    println!("dim {} splits into {} summands", m.dim, d.num_summands());
    for e in d.report() {
        println!("  dim {} x{} {}", e.dim, e.mult, e.label.unwrap_or_default());
    }
    // the certificate is an invertible change of basis
    assert!(d.certificate(&f).inverse().is_some());

    // another seed finds the same summands
    let d2 = decompose(&om, 99);
    assert_eq!(d.num_summands(), d2.num_summands());
    for p in &d.parts {
        assert!(d2.parts.iter().any(|q| q.mult == p.mult && iso_test(&p.module, &q.module, 0).is_some()));
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
