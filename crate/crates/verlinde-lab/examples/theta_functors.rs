// Values of the functors Theta on indecomposable Klein four group modules.

use verlinde_lab::ffield::{gf, PP1Point};
use verlinde_lab::repe::{make_A, omega, random_module, tensor, trivial};
use verlinde_lab::theta::{theta0, theta_object, ver4_fuse, Level, Theta1};

pub fn run_example() {
    let f = gf(2, 4);
    let al = PP1Point::finite(&f, f.alpha().unwrap());
    let t = Theta1::new(&al, &f, 0).unwrap();
    for j in 1..=4 {
        println!("theta1(A({j},alpha)) = {}", t.value(&make_A(j, &al, &f)).unwrap());
    }
    let one = PP1Point::finite(&f, 1);
    println!("theta1(A(1,1)) = {}", t.value(&make_A(1, &one, &f)).unwrap());
    println!("theta0 at 1 of A(1,1) = {}", theta0(&make_A(1, &one, &f), &one).unwrap());
    let om = omega(&trivial(&f, 2), 1);
    println!("graded theta of Omega(1) = {}", theta_object(&om, &al, Level::Graded, 0).unwrap());

    let f4 = gf(2, 2);
    let al4 = PP1Point::finite(&f4, f4.alpha().unwrap());
    let t4 = Theta1::new(&al4, &f4, 0).unwrap();
    let m = random_module(&f4, 2, 4, 1);
    let n = random_module(&f4, 2, 3, 2);
    let lhs = t4.value(&tensor(&m, &n)).unwrap();
    let rhs = ver4_fuse(&t4.value(&m).unwrap(), &t4.value(&n).unwrap()).unwrap();
    println!("theta1(M x N) = {lhs} = theta1(M) x theta1(N)");
    assert_eq!(lhs, rhs);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
