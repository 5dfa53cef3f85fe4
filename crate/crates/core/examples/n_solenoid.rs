//! The n-solenoid: one loop wrapped n times around itself.
//!
//! ```text
//! cargo run --example n_solenoid -- 7
//! ```

use solk::germs::ClassOrder;
use solk::ktheory::ktheory_report;
use solk::model::{Dart, EdgePath, Graph, Presentation};

fn n_solenoid(n: usize) -> Presentation {
    let mut g = Graph::default();
    g.add_vertex("p").unwrap();
    let a = g.add_edge("a", "p", "p").unwrap();
    let image = EdgePath::new(&g, vec![Dart::forward(a); n]).unwrap();
    Presentation::new(g, vec![image], vec![None]).unwrap()
}

fn main() {
    let ns: Vec<usize> = match std::env::args().nth(1) {
        Some(s) => vec![s.parse().expect("usage: n_solenoid [n]")],
        None => (2..=6).collect(),
    };
    println!("{:>3}  {:<8} {:<8} {:<10} K1", "n", "classes", "psi0", "K0");
    for n in ns {
        let r = ktheory_report(&n_solenoid(n), ClassOrder::Lex).expect("n >= 2");
        println!(
            "{n:>3}  {:<8} {:<8} {:<10} {}",
            r.classes.join(","),
            r.psi0.to_string(),
            r.k0_class.to_string(),
            r.k1_class
        );
    }
}
