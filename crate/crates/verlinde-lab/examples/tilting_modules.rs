// Tilting modules for SL2 in characteristic 3 and their restrictions to C_3 x C_3.

use verlinde_lab::repe::{make_V, strip_projective, trivial};
use verlinde_lab::sl2tilt::{basis_lv, hom_u_invariants, prime_catalog, restrict, steinberg};
use verlinde_lab::ffield::gf;

pub fn run_example() {
    let (p, n) = (3u32, 2u32);
    let q = p.pow(n) as usize;
    let cat = prime_catalog(p, q).unwrap();
    let lv = basis_lv(p, n);
    let one = trivial(lv.field(), n as usize);
    let v = make_V(&lv);
    println!(" i  dim  nabla  inv  hom(1,R)  hom(V,R)");
    for t in &cat[..q] {
        let h1 = hom_u_invariants(&t.hyper, &lv, &one).unwrap();
        let hv = hom_u_invariants(&t.hyper, &lv, &v).unwrap();
        println!("{:>2} {:>4} {:>6} {:>4} {:>9} {:>9}", t.i, t.dim(), t.nabla_length, t.sl2_inv_dim, h1, hv);
        assert_eq!(h1, t.nabla_length);
        assert_eq!(hv, 2 * t.nabla_length - t.sl2_inv_dim);
    }
    let st = strip_projective(&restrict(&steinberg(p, n, &gf(p, 1)), &lv).unwrap());
    println!("Steinberg restricts to a free module of rank {}", st.free_rank);
    assert_eq!((st.free_rank, st.core.dim), (1, 0));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
