// The basic algebra of Ver(2,3) and the classification of a module in its terms.

use verlinde_lab::repe::{random_module, tensor};
use verlinde_lab::sl2tilt::basis_lv;
use verlinde_lab::verlinde::{basic_algebra, classify_bmodule, name_table, to_bmodule};

pub fn run_example() {
    let lv = basis_lv(2, 3);
    let alg = basic_algebra(2, 3, &lv, 0).unwrap();
    println!("{} vertices over GF({})", alg.num_vertices(), alg.field.order());
    for a in 0..alg.num_vertices() {
        println!("  {} core dim {}  homs {:?}", alg.vertex_label(a), alg.vertices[a].dim, alg.hom_dims[a]);
    }
    let rc = alg.range_check.as_ref().unwrap();
    assert!(rc.past_end_vanishes && rc.vertices_distinct);

    let table = name_table(&alg, 0);
    let sq = tensor(&alg.vertices[1], &alg.vertices[1]);
    let b = to_bmodule(&sq, &alg);
    b.check(&alg).unwrap();
    println!("{0} x {0}: vertex dims {1:?}, class {2}", alg.vertex_label(1), b.dims, classify_bmodule(&b, &table, 0));
    for seed in 0..3 {
        let m = random_module(&alg.field, 3, 9, seed);
        let b = to_bmodule(&m, &alg);
        println!("random module of dim {}: class {}", m.dim, classify_bmodule(&b, &table, seed));
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
