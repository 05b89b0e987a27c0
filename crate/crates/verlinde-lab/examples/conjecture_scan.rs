// Seeded scan of R(St) x M against the catalog of restricted tilting summands.

use verlinde_lab::ofunc::conjecture_scan;
use verlinde_lab::sl2tilt::basis_lv;

pub fn run_example() {
    for (p, n) in [(2, 2), (2, 3), (3, 2)] {
        let r = conjecture_scan(p, n, &basis_lv(p, n), 30, 8, 1).unwrap();
        println!("({p},{n}) catalog {:?}: {} passed, {} failed", r.catalog, r.passed, r.failed);
        for s in r.results.iter().take(4) {
            println!("  sample {} dim {}: {:?} + free^{}", s.index, s.dim, s.summands, s.free_rank);
        }
        assert!(r.results.iter().all(|s| s.pass == s.certificate.is_none()));
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
