//! A two-edge circle covered three times. Every vertex has one germ, the
//! quotient is a circle and g~ has constant degree, so K0 of the stable
//! algebra is Z[1/3] through the trace.

use solk::germs::{occurring_classes, quotient_summary, ClassOrder};
use solk::ktheory::ktheory_report;
use solk::model::parse_presentation;

fn main() {
    let p = parse_presentation(include_str!("../data/circle_triple.sol")).unwrap();
    let q = occurring_classes(&p).unwrap();
    let summary = quotient_summary(&p, &q).unwrap();
    print!("{summary}");

    let r = ktheory_report(&p, ClassOrder::Lex).unwrap();
    println!("psi0 = {}", r.psi0);
    println!("trace target: {}", r.diagnostics.trace_target.as_deref().unwrap_or("none"));
    println!("K0 = {}, K1 = {}", r.k0_class, r.k1_class);
}
