// Arithmetic in GF(16) and points of the projective line.

use verlinde_lab::ffield::{gf, PP1Point};
use verlinde_lab::klein::render_lambda;

pub fn run_example() {
    let f = gf(2, 4);
    let a = f.alpha().unwrap();
    // alpha is a root of x^2 + x + 1
    assert_eq!(f.add(f.mul(a, a), f.add(a, 1)), 0);
    println!("GF(16): alpha = {}, alpha^3 = {}", f.fmt_code(a), f.fmt_code(f.pow(a, 3)));

    let g = f.gen();
    println!("generator {} has degree {}", f.fmt_code(g), f.degree_of(g));
    assert_eq!(f.mul(g, f.inv(g)), 1);

    // the same point rendered in two fields
    let f4 = gf(2, 2);
    let p4 = PP1Point::finite(&f4, f4.alpha().unwrap());
    let p16 = p4.embed(&f).unwrap();
    assert_eq!(p4, p16);
    for p in [PP1Point::Infinity, PP1Point::finite(&f, 1), p16, PP1Point::finite(&f, g)] {
        println!("point {}", render_lambda(&p));
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
