//! Germ classes of the Fibonacci substitution a -> ab, b -> a, traced by hand.

use solk::germs::{occurring_classes, periodic_germs, junction_germs, ClassOrder};
use solk::ktheory::{k_theory_of_g0, psi_star_k0, trace_pullback_matrix};
use solk::model::parse_presentation;

fn main() {
    let p = parse_presentation(include_str!("../data/fibonacci.sol")).unwrap();

    let label = |c: &solk::germs::GermClass| c.label(&p);
    let junctions: Vec<String> = junction_germs(&p).iter().map(label).collect();
    let periodic: Vec<String> = periodic_germs(&p).iter().map(label).collect();
    println!("junction germs: {}", junctions.join(" "));
    println!("periodic germs: {}", periodic.join(" "));

    let q = occurring_classes(&p).unwrap().with_order(ClassOrder::Paper);
    let labels = q.labels(&p);
    for (i, l) in labels.iter().enumerate() {
        let interior: Vec<String> = q.interior_preimages[i]
            .iter()
            .map(|(f, k)| format!("{}@{k}", p.graph().edge_name(*f)))
            .collect();
        println!("  g~({l}) = {}   interior preimages: [{}]", labels[q.gtilde[i]], interior.join(", "));
    }

    println!("trace pullback: {}", trace_pullback_matrix(&q));
    let (basis, k1) = k_theory_of_g0(&p, &q);
    println!("K0(G0) basis: {basis}");
    println!("K1(G0) = {k1}");
    println!("psi0: {}", psi_star_k0(&p, &q).unwrap());
}
