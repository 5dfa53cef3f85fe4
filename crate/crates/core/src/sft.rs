//! Dimension groups of one-sided shifts of finite type.
//!
//! The shift is a local homeomorphism, so K₀ of the stable algebra is the
//! limit of `C(Ξ, ℤ)` under the preimage-summing map. On indicator
//! functions of length-one cylinders that map is `Aᵀ`, and the level-one
//! system already computes the limit.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::intlin::IntMatrix;
use crate::limits::{make_limit, LimitError, StationaryLimitGroup};
use crate::model::{codes, is_irreducible, Severity, ValidationReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SftPresentation {
    pub states: Vec<String>,
    /// `adjacency[(i, j)]` counts the allowed transitions i → j.
    pub adjacency: IntMatrix,
}

impl SftPresentation {
    /// States are named `s0`, `s1`, ….
    pub fn from_matrix(adjacency: IntMatrix) -> Self {
        let states = (0..adjacency.rows()).map(|i| format!("s{i}")).collect();
        Self { states, adjacency }
    }

    /// Recodes the shift on its transitions: one state per transition, with
    /// `e → f` allowed when `e` ends where `f` starts.
    pub fn edge_shift(&self) -> Self {
        let a = &self.adjacency;
        let mut transitions = Vec::new();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let count = u64::try_from(&a[(i, j)]).unwrap_or(0);
                for k in 0..count {
                    transitions.push((i, j, format!("{}>{}#{k}", self.states[i], self.states[j])));
                }
            }
        }
        let n = transitions.len();
        let mut b = IntMatrix::zeros(n, n);
        for (x, (_, t, _)) in transitions.iter().enumerate() {
            for (y, (s, _, _)) in transitions.iter().enumerate() {
                if t == s {
                    b[(x, y)] = BigInt::from(1);
                }
            }
        }
        Self {
            states: transitions.into_iter().map(|(_, _, name)| name).collect(),
            adjacency: b,
        }
    }
}

pub fn validate_sft(s: &SftPresentation) -> ValidationReport {
    let a = &s.adjacency;
    let mut report = ValidationReport::default();
    if !a.is_square() || a.rows() != s.states.len() {
        report.push(
            Severity::Error,
            codes::NOT_SQUARE,
            format!("adjacency is {}x{} for {} states", a.rows(), a.cols(), s.states.len()),
        );
        return report;
    }
    if a.rows() == 0 {
        report.push(Severity::Error, codes::EMPTY, "no states");
        return report;
    }
    if a.entries().iter().any(Signed::is_negative) {
        report.push(Severity::Error, codes::NEGATIVE_ENTRY, "adjacency has a negative entry");
        return report;
    }
    for i in 0..a.rows() {
        let row_dead = (0..a.cols()).all(|j| a[(i, j)].is_zero());
        let col_dead = (0..a.rows()).all(|j| a[(j, i)].is_zero());
        if row_dead || col_dead {
            report.push(
                Severity::Error,
                codes::DEAD_STATE,
                format!(
                    "state `{}` has no {} transitions",
                    s.states[i],
                    if row_dead { "outgoing" } else { "incoming" }
                ),
            );
        }
    }
    if report.ok() && !is_irreducible(a) {
        report.push(Severity::Warning, codes::REDUCIBLE, "adjacency matrix is reducible");
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SftKTheory {
    pub k0: StationaryLimitGroup,
    /// Always `"trivial"`: the Cantor set has no K¹.
    pub k1: &'static str,
}

pub fn sft_dimension_group(s: &SftPresentation) -> Result<SftKTheory, LimitError> {
    Ok(SftKTheory {
        k0: make_limit(&s.adjacency.transpose())?,
        k1: "trivial",
    })
}
