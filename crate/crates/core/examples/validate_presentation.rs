//! Reports findings for a presentation file, or for a few built-in
//! problem cases when no path is given.
//!
//! ```text
//! cargo run --example validate_presentation -- crates/core/data/aabab.sol
//! ```

use solk::model::{parse_presentation, validate};

const CASES: &[(&str, &str)] = &[
    ("homeomorphism", "map a -> b\nmap b -> a\n"),
    ("orientation reversing", "map a -> a ~b a\nmap b -> a b\n"),
    ("not primitive", "map a -> a a\nmap b -> a b\n"),
    ("thue-morse", "map a -> a b\nmap b -> b a\n"),
];

fn main() {
    if let Some(path) = std::env::args().nth(1) {
        let text = std::fs::read_to_string(&path).expect("readable file");
        match parse_presentation(&text) {
            Ok(p) => print!("{}", validate(&p)),
            Err(e) => println!("parse error: {e}"),
        }
        return;
    }
    for (name, maps) in CASES {
        let text = format!("solenoid v1\nvertex p\nedge a p p\nedge b p p\n{maps}");
        let p = parse_presentation(&text).unwrap();
        print!("{name}:\n{}", validate(&p));
    }
}
