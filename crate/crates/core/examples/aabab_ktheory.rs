//! Full pipeline on the aab/ab substitution over a wedge of two circles.
//!
//! ```text
//! cargo run --example aabab_ktheory
//! ```

use solk::germs::ClassOrder;
use solk::ktheory::ktheory_report;
use solk::model::parse_presentation;

const AABAB: &str = include_str!("../data/aabab.sol");

fn main() {
    let p = parse_presentation(AABAB).expect("bundled presentation parses");
    let report = ktheory_report(&p, ClassOrder::Paper).expect("presentation is valid");
    print!("{report}");

    println!();
    println!("stable algebra: K0 = {}, K1 = {}", report.k0_class, report.k1_class);
}
