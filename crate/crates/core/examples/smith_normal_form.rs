//! Exact integer linear algebra: Smith form, kernels, cokernels.

use solk::intlin::{cokernel, column_hermite_form, kernel_basis, smith_normal_form, IntMatrix};

fn main() {
    let a = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let s = smith_normal_form(&a);
    println!("A = {a}");
    println!("D = {}", s.d);
    println!("U = {}", s.u);
    println!("V = {}", s.v);
    assert_eq!(&(&s.u * &a) * &s.v, s.d);
    println!("coker A = {}", cokernel(&a));

    let delta = IntMatrix::from_rows(&[[-1, 1, 0], [1, -1, 0]]);
    println!();
    println!("ker {delta} = {}", kernel_basis(&delta));
    println!("coker = {}", cokernel(&delta));

    let b = IntMatrix::from_rows(&[[4, 6], [2, 8]]);
    println!();
    println!("hermite form of {b}: {}", column_hermite_form(&b));
}
