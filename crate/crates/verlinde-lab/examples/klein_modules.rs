// Constructing Klein four group modules, tensoring them and reading off labels.

use verlinde_lab::ffield::{gf, PP1Point};
use verlinde_lab::klein::{classify, fuse_oracle, KleinLabel};
use verlinde_lab::repe::{make_A, omega, tensor, trivial};

pub fn run_example() {
    let f = gf(2, 4);
    let al = PP1Point::finite(&f, f.alpha().unwrap());
    let zero = PP1Point::finite(&f, 0);

    let a2 = make_A(2, &al, &f);
    let t = tensor(&a2, &a2);
    let c = classify(&t, 0).unwrap();
    println!("A(2,alpha) x A(2,alpha) = {c}");
    assert_eq!(c.get(&KleinLabel::a(2, al.clone())), 2);
    assert_eq!(c.get(&KleinLabel::Proj), 2);

    let a1 = KleinLabel::a(1, al.clone());
    let (stable, proj) = fuse_oracle(&a1, &a1);
    let got = classify(&tensor(&a1.construct(&f), &a1.construct(&f)), 0).unwrap();
    println!("A(1,alpha) x A(1,alpha) = {got}, closed form {stable} + Proj^{proj}");
    assert!(got.stable().same_labels(&stable));

    // lines through different points are orthogonal
    let c = classify(&tensor(&make_A(1, &zero, &f), &make_A(3, &al, &f)), 0).unwrap();
    println!("A(1,0) x A(3,alpha) = {c}");
    assert!(c.stable().entries.is_empty());

    let om = omega(&trivial(&f, 2), -2);
    println!("Omega^-2 of the unit: dim {}, label {}", om.dim, classify(&om, 0).unwrap());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
