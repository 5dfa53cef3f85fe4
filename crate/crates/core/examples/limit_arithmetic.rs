//! Working with elements of stationary limits.

use num_bigint::BigInt;
use solk::intlin::IntMatrix;
use solk::limits::make_limit;

fn v(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn main() {
    // Z[1/6]: stage k holds v / 6^k
    let z6 = make_limit(&IntMatrix::from_rows(&[[6]])).unwrap();
    let a = z6.element(1, v(&[3])).unwrap();
    let b = z6.element(2, v(&[4])).unwrap();
    let sum = &a + &b;
    let (num, den) = z6.as_fraction(&sum).unwrap();
    println!("{} = {a}, {} = {b}", fmt_frac(&z6.as_fraction(&a).unwrap()), fmt_frac(&z6.as_fraction(&b).unwrap()));
    println!("sum {sum} = {num}/{den}, positive: {:?}", z6.is_positive(&sum));
    println!("(2, [72]) canonicalizes to {}", z6.element(2, v(&[72])).unwrap());

    // a singular system: only the eventual image survives
    let t = IntMatrix::from_rows(&[[2, 1, 0], [0, 2, 0], [0, 0, 0]]);
    let g = make_limit(&t).unwrap();
    println!();
    println!("T = {t}");
    println!("eventual basis {} reduced {}", g.eventual_basis(), g.reduced_endomorphism());
    println!("lim = {}", g.classify());
    let x = g.element_from_ambient(0, &v(&[0, 0, 5])).unwrap();
    println!("(0, [0, 0, 5]) is zero in the limit: {}", x.is_zero());

    let cat = make_limit(&IntMatrix::from_rows(&[[2, 1], [1, 1]])).unwrap();
    println!();
    println!("lim(Z^2, [[2,1],[1,1]]) = {}", cat.classify());
}

fn fmt_frac((n, d): &(BigInt, BigInt)) -> String {
    format!("{n}/{d}")
}
