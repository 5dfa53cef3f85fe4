//! Exact K-theory for the stable algebras of one-dimensional graph solenoids.
//!
//! Input is a finite combinatorial presentation: a directed graph and a
//! substitution sending each edge to an edge path. From it the crate
//! computes the germ classes of the quotient of the unstable set, the
//! boundary map δ₀, the K-groups of the germ groupoid's Fell algebra, the
//! connecting maps ψ* on K₀ and K₁, and the stationary limits that give the
//! K-theory of the stable algebra. Dimension groups of shifts of finite
//! type are covered by [`sft`].
//!
//! ```
//! use solk::{germs::ClassOrder, ktheory::ktheory_report, model::parse_presentation};
//!
//! let p = parse_presentation(
//!     "solenoid v1\nvertex p\nedge a p p\nedge b p p\nmap a -> a a b\nmap b -> a b\n",
//! )
//! .unwrap();
//! let report = ktheory_report(&p, ClassOrder::Paper).unwrap();
//! assert_eq!(report.classes, ["ba", "ab", "aa"]);
//! assert_eq!(report.k0_class.to_string(), "Z^2");
//! assert_eq!(report.k1_class, "Z");
//! ```
//!
//! All arithmetic is over arbitrary-precision integers.

pub mod cli;
pub mod germs;
pub mod intlin;
pub mod ktheory;
pub mod limits;
pub mod model;
pub mod sft;
