//! Dimension groups of shifts of finite type, before and after recoding on
//! transitions.
//!
//! ```text
//! cargo run --example sft_dimension_group -- "1,1;1,0"
//! ```

use solk::cli::parse_matrix_arg;
use solk::intlin::IntMatrix;
use solk::sft::{sft_dimension_group, validate_sft, SftPresentation};

fn show(name: &str, a: IntMatrix) {
    let s = SftPresentation::from_matrix(a);
    let report = validate_sft(&s);
    if !report.ok() {
        print!("{name}: {report}");
        return;
    }
    let k0 = sft_dimension_group(&s).unwrap().k0.classify().to_string();
    let recoded = s.edge_shift();
    let k0_edges = sft_dimension_group(&recoded).unwrap().k0.classify();
    println!(
        "{name:<12} K0 = {k0:<10} edge shift ({} states): {k0_edges}",
        recoded.states.len()
    );
}

fn main() {
    if let Some(arg) = std::env::args().nth(1) {
        show("input", parse_matrix_arg(&arg).expect("rows split by ';', entries by ','"));
        return;
    }
    for n in [2, 3, 5] {
        show(&format!("full {n}"), IntMatrix::from_rows(&[[n]]));
    }
    show("golden mean", IntMatrix::from_rows(&[[1, 1], [1, 0]]));
    show("[[2,1],[1,1]]", IntMatrix::from_rows(&[[2, 1], [1, 1]]));
    show("[[1,1],[1,1]]", IntMatrix::from_rows(&[[1, 1], [1, 1]]));
}
