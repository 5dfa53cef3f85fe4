//! K-theory of the Fell algebra of the germ groupoid and of the stable algebra.
//!
//! The edge interiors form an ideal whose K₁ is ℤ^edges (one winding number
//! per open interval); the vertex classes form the quotient with K₀ =
//! ℤ^classes. The exponential map δ₀ between them gives
//! K₀ = ker δ₀ and K₁ = coker δ₀. The connecting map ψ acts on K₀ through
//! the trace pullback and on K₁ through the first-edge rule; the K-theory
//! of the stable algebra is the stationary limit under these maps.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::germs::{
    occurring_classes, quotient_summary, ClassOrder, GermError, QuotientModel, QuotientSummary,
};
use crate::intlin::{
    cokernel, kernel_basis, restrict_endomorphism, smith_normal_form, CokernelStructure, IntMatrix,
    LinalgError,
};
use crate::limits::{finite_limit, make_limit, Descriptor, LimitError, StationaryLimitGroup};
use crate::model::{validate, EdgeId, Presentation, ValidationReport};

#[derive(Debug, Error)]
pub enum KTheoryError {
    #[error("presentation failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Germs(#[from] GermError),
    #[error("trace pullback does not preserve ker δ₀")]
    NotInvariant,
    #[error("first-edge rule is not well defined on coker δ₀ at class {0}")]
    NotWellDefined(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Limit(#[from] LimitError),
}

/// δ₀ with rows indexed by edges and columns by occurring classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub matrix: IntMatrix,
}

/// Class (l, r) ↦ e_l − e_r.
pub fn boundary_matrix(p: &Presentation, q: &QuotientModel) -> BoundaryMatrix {
    let mut m = IntMatrix::zeros(p.graph().edge_count(), q.len());
    for (j, c) in q.classes.iter().enumerate() {
        m[(c.in_edge().0, j)] += BigInt::one();
        m[(c.out_edge().0, j)] -= BigInt::one();
    }
    BoundaryMatrix { matrix: m }
}

/// A functional on ℤ^classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFunctional {
    pub row: Vec<BigInt>,
}

impl TraceFunctional {
    pub fn apply(&self, v: &[BigInt]) -> BigInt {
        self.row.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            row: self.row.iter().zip(&other.row).map(|(a, b)| a - b).collect(),
        }
    }

    fn indicator(len: usize, hits: impl Iterator<Item = usize>) -> Self {
        let mut row = vec![BigInt::zero(); len];
        for i in hits {
            row[i] += BigInt::one();
        }
        Self { row }
    }
}

/// Trace on the open edge `e`, as the limit at its source end: the sum of
/// the class traces whose outgoing edge is `e`.
pub fn edge_trace_row(q: &QuotientModel, e: EdgeId) -> TraceFunctional {
    TraceFunctional::indicator(
        q.len(),
        q.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.out_edge() == e)
            .map(|(i, _)| i),
    )
}

/// The same trace approached from the target end.
pub fn edge_trace_row_target(q: &QuotientModel, e: EdgeId) -> TraceFunctional {
    TraceFunctional::indicator(
        q.len(),
        q.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.in_edge() == e)
            .map(|(i, _)| i),
    )
}

/// Row c: Σ over g̃-preimages of c, vertex classes as unit rows and interior
/// points as the trace of the edge they lie on.
pub fn trace_pullback_matrix(q: &QuotientModel) -> IntMatrix {
    let n = q.len();
    let mut t = IntMatrix::zeros(n, n);
    for c in 0..n {
        for pre in q.vertex_preimages(c) {
            t[(c, pre)] += BigInt::one();
        }
        for &(f, _) in &q.interior_preimages[c] {
            for (j, x) in edge_trace_row(q, f).row.iter().enumerate() {
                t[(c, j)] += x;
            }
        }
    }
    t
}

/// K₀ basis (columns in class coordinates) and K₁ structure of the Fell algebra.
pub fn k_theory_of_g0(p: &Presentation, q: &QuotientModel) -> (IntMatrix, CokernelStructure) {
    let delta = boundary_matrix(p, q).matrix;
    (kernel_basis(&delta), cokernel(&delta))
}

/// ψ* on K₀ in the canonical kernel basis.
pub fn psi_star_k0(p: &Presentation, q: &QuotientModel) -> Result<IntMatrix, KTheoryError> {
    let (basis, _) = k_theory_of_g0(p, q);
    let t = trace_pullback_matrix(q);
    match restrict_endomorphism(&t, &basis) {
        Ok(s) => Ok(s),
        Err(LinalgError::NotInvariant) => Err(KTheoryError::NotInvariant),
        Err(e) => Err(e.into()),
    }
}

/// Edge-level K₁ map: column e is the unit vector of the first edge of g(e).
pub fn first_edge_matrix(p: &Presentation) -> IntMatrix {
    let n = p.graph().edge_count();
    let mut f = IntMatrix::zeros(n, n);
    for e in p.graph().edge_ids() {
        f[(p.image(e).first().edge.0, e.0)] = BigInt::one();
    }
    f
}

/// ψ* on K₁ = coker δ₀, written on cokernel generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K1Map {
    pub structure: CokernelStructure,
    /// Generators in edge coordinates: torsion generators first, then free ones.
    pub generators: IntMatrix,
    /// Action on the free quotient of coker δ₀.
    pub free_part: IntMatrix,
    /// Action on the torsion generators, entries reduced modulo their orders.
    pub torsion_part: IntMatrix,
}

pub fn psi_star_k1(p: &Presentation, q: &QuotientModel) -> Result<K1Map, KTheoryError> {
    let delta = boundary_matrix(p, q).matrix;
    let f = first_edge_matrix(p);

    // Each class (l, r) must satisfy [first g(l)] − [first g(r)] ∈ im δ₀.
    let image_of_delta = &f * &delta;
    let snf = smith_normal_form(&delta);
    let rank = snf.rank();
    let diag = snf.diagonal();
    let in_image = |v: &[BigInt]| -> bool {
        let y = snf.u.mul_vec(v);
        y.iter().enumerate().all(|(i, x)| {
            if i < rank {
                (x % &diag[i]).is_zero()
            } else {
                x.is_zero()
            }
        })
    };
    for (j, c) in q.classes.iter().enumerate() {
        if !in_image(&image_of_delta.column(j)) {
            return Err(KTheoryError::NotWellDefined(c.label(p)));
        }
    }

    // coordinates y = U x identify coker δ₀ with ⊕ ℤ/dᵢ ⊕ ℤ^free
    let m = delta.rows();
    let u_inv = crate::intlin::solve_integral(&snf.u, &IntMatrix::identity(m))?
        .expect("U is unimodular");
    let induced = &(&snf.u * &f) * &u_inv;
    let torsion_idx: Vec<usize> = (0..rank).filter(|&i| diag[i] > BigInt::one()).collect();
    let free_idx: Vec<usize> = (rank..m).collect();
    let mut torsion_part = induced.submatrix(&torsion_idx, &torsion_idx);
    for (a, &i) in torsion_idx.iter().enumerate() {
        for b in 0..torsion_idx.len() {
            let x = &torsion_part[(a, b)] % &diag[i];
            torsion_part[(a, b)] = if x < BigInt::zero() { x + &diag[i] } else { x };
        }
    }
    let gen_idx: Vec<usize> = torsion_idx.iter().chain(&free_idx).copied().collect();
    let all_rows: Vec<usize> = (0..m).collect();
    Ok(K1Map {
        structure: cokernel(&delta),
        generators: u_inv.submatrix(&all_rows, &gen_idx),
        free_part: induced.submatrix(&free_idx, &free_idx),
        torsion_part,
    })
}

/// K₁ of the stable algebra: a torsion-free limit plus a finite torsion part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K1Limit {
    pub free: StationaryLimitGroup,
    pub torsion: Vec<BigInt>,
}

impl K1Limit {
    pub fn describe(&self) -> String {
        let free = self.free.classify();
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if !matches!(free, Descriptor::FreeAbelian(0)) || parts.is_empty() {
            parts.push(free.to_string());
        }
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub quotient: QuotientSummary,
    pub validation: ValidationReport,
    /// Target of the trace surjection on K₀ when the quotient is Hausdorff and connected.
    pub trace_target: Option<String>,
    /// Labels of two classes sharing a dart, when the quotient is not Hausdorff.
    pub hausdorff_witness: Option<(String, String)>,
    pub k1_rule: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheoryReport {
    pub order: ClassOrder,
    pub edges: Vec<String>,
    pub classes: Vec<String>,
    pub gtilde: Vec<String>,
    pub delta0: IntMatrix,
    pub trace_pullback: IntMatrix,
    pub k0_basis: IntMatrix,
    pub psi0: IntMatrix,
    pub k1: K1Map,
    pub k0_limit: StationaryLimitGroup,
    pub k1_limit: K1Limit,
    pub k0_class: Descriptor,
    pub k1_class: String,
    pub diagnostics: Diagnostics,
}

pub const K1_RULE: &str = "first-edge (validated)";

pub fn ktheory_report(p: &Presentation, order: ClassOrder) -> Result<KTheoryReport, KTheoryError> {
    let validation = validate(p);
    if !validation.ok() {
        return Err(KTheoryError::Invalid(validation));
    }
    let q = occurring_classes(p)?.with_order(order);
    let quotient = quotient_summary(p, &q)?;
    let delta0 = boundary_matrix(p, &q).matrix;
    let trace_pullback = trace_pullback_matrix(&q);
    let (k0_basis, _) = k_theory_of_g0(p, &q);
    let psi0 = psi_star_k0(p, &q)?;
    let k1 = psi_star_k1(p, &q)?;

    let k0_limit = make_limit(&psi0)?;
    let k1_limit = K1Limit {
        free: make_limit(&k1.free_part)?,
        torsion: finite_limit(&k1.structure.torsion, &k1.torsion_part),
    };
    let k0_class = k0_limit.classify();
    let k1_class = k1_limit.describe();
    let trace_target = quotient.degree.map(|n| format!("Z[1/{n}]"));
    let labels = q.labels(p);
    let hausdorff_witness = quotient
        .hausdorff
        .witness
        .map(|(a, b)| (a.label(p), b.label(p)));
    Ok(KTheoryReport {
        order,
        edges: p.graph().edges().iter().map(|e| e.name.clone()).collect(),
        gtilde: q.gtilde.iter().map(|&i| labels[i].clone()).collect(),
        classes: labels,
        delta0,
        trace_pullback,
        k0_basis,
        psi0,
        k1,
        k0_limit,
        k1_limit,
        k0_class,
        k1_class,
        diagnostics: Diagnostics {
            quotient,
            validation,
            trace_target,
            hausdorff_witness,
            k1_rule: K1_RULE,
        },
    })
}

/// Integers as JSON numbers when they fit in i64, decimal strings otherwise.
pub(crate) fn int_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub(crate) fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int_json).collect()))
            .collect(),
    )
}

pub(crate) fn limit_json(g: &StationaryLimitGroup) -> Value {
    json!({
        "ambient_rank": g.ambient_rank(),
        "endomorphism": matrix_json(g.endomorphism()),
        "eventual_rank": g.eventual_rank(),
        "eventual_basis": matrix_json(g.eventual_basis()),
        "reduced_endomorphism": matrix_json(g.reduced_endomorphism()),
        "classification": g.classify().to_string(),
    })
}

impl KTheoryReport {
    /// One object with sorted keys; no floating point anywhere.
    pub fn to_json(&self) -> Value {
        let d = &self.diagnostics;
        let mut diagnostics = Map::new();
        diagnostics.insert("hausdorff".into(), json!(d.quotient.hausdorff.hausdorff));
        diagnostics.insert("connected".into(), json!(d.quotient.connected));
        diagnostics.insert("degree".into(), json!(d.quotient.degree));
        diagnostics.insert(
            "nuclear_dimension_bound".into(),
            json!(d.quotient.nuclear_dimension_bound),
        );
        diagnostics.insert("k1_rule".into(), json!(d.k1_rule));
        diagnostics.insert("trace_target".into(), json!(d.trace_target));
        diagnostics.insert(
            "hausdorff_witness".into(),
            json!(d.hausdorff_witness.as_ref().map(|(a, b)| [a, b])),
        );
        diagnostics.insert(
            "warnings".into(),
            Value::Array(
                d.validation
                    .findings
                    .iter()
                    .map(|f| json!(format!("{}: {}", f.code, f.message)))
                    .collect(),
            ),
        );
        json!({
            "order": match self.order { ClassOrder::Lex => "lex", ClassOrder::Paper => "paper" },
            "edges": self.edges,
            "classes": self.classes,
            "gtilde": self.gtilde,
            "delta0": matrix_json(&self.delta0),
            "trace_pullback": matrix_json(&self.trace_pullback),
            "k0_basis": matrix_json(&self.k0_basis),
            "psi0": matrix_json(&self.psi0),
            "k1": {
                "free_rank": self.k1.structure.free_rank,
                "torsion": self.k1.structure.torsion.iter().map(int_json).collect::<Vec<_>>(),
                "generators": matrix_json(&self.k1.generators),
            },
            "psi1": {
                "free": matrix_json(&self.k1.free_part),
                "torsion": matrix_json(&self.k1.torsion_part),
            },
            "k0_limit": limit_json(&self.k0_limit),
            "k1_limit": {
                "free": limit_json(&self.k1_limit.free),
                "torsion": self.k1_limit.torsion.iter().map(int_json).collect::<Vec<_>>(),
                "classification": self.k1_class,
            },
            "diagnostics": Value::Object(diagnostics),
        })
    }
}

fn write_matrix(
    f: &mut fmt::Formatter<'_>,
    title: &str,
    m: &IntMatrix,
    row_labels: &[String],
    col_labels: &[String],
) -> fmt::Result {
    writeln!(f, "{title}")?;
    if m.rows() == 0 || m.cols() == 0 {
        return writeln!(f, "  (empty {}x{})", m.rows(), m.cols());
    }
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let label_w = row_labels.iter().map(|s| s.len()).max().unwrap_or(0);
    let col_w = cells
        .iter()
        .flatten()
        .chain(col_labels)
        .map(|s| s.len())
        .max()
        .unwrap_or(1);
    write!(f, "  {:label_w$} ", "")?;
    for c in col_labels {
        write!(f, " {c:>col_w$}")?;
    }
    writeln!(f)?;
    for (l, r) in row_labels.iter().zip(&cells) {
        write!(f, "  {l:label_w$} ")?;
        for x in r {
            write!(f, " {x:>col_w$}")?;
        }
        writeln!(f)?;
    }
    Ok(())
}

fn indexed(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl fmt::Display for KTheoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "classes: {}", self.classes.join(" "))?;
        let map: Vec<String> = self
            .classes
            .iter()
            .zip(&self.gtilde)
            .map(|(c, d)| format!("{c}->{d}"))
            .collect();
        writeln!(f, "gtilde: {}", map.join(" "))?;
        write_matrix(f, "delta0 (edges x classes):", &self.delta0, &self.edges, &self.classes)?;
        write_matrix(f, "trace pullback (classes x classes):", &self.trace_pullback, &self.classes, &self.classes)?;
        let k0_gens = indexed("k", self.k0_basis.cols());
        write_matrix(f, "K0(G0) basis (columns):", &self.k0_basis, &self.classes, &k0_gens)?;
        write_matrix(f, "psi0 on K0(G0):", &self.psi0, &k0_gens, &k0_gens)?;
        writeln!(f, "K1(G0) = {}", self.k1.structure)?;
        let k1_free = indexed("w", self.k1.free_part.rows());
        let gens: Vec<String> = indexed("t", self.k1.torsion_part.rows())
            .into_iter()
            .chain(k1_free.iter().cloned())
            .collect();
        write_matrix(f, "K1(G0) generators (columns):", &self.k1.generators, &self.edges, &gens)?;
        write_matrix(f, "psi1 on free part of K1(G0):", &self.k1.free_part, &k1_free, &k1_free)?;
        writeln!(f, "K0(Gs) = {}", self.k0_class)?;
        writeln!(f, "K1(Gs) = {}", self.k1_class)?;
        let q = &self.diagnostics.quotient;
        match &self.diagnostics.hausdorff_witness {
            Some((a, b)) => writeln!(f, "hausdorff: false (classes {a} and {b} share a dart)")?,
            None => writeln!(f, "hausdorff: true")?,
        }
        writeln!(f, "connected: {}", q.connected)?;
        if let Some(n) = q.degree {
            writeln!(f, "degree: {n}")?;
        }
        if let Some(t) = &self.diagnostics.trace_target {
            writeln!(f, "trace surjects K0(Gs) onto {t}")?;
        }
        writeln!(f, "nuclear dimension bound: {}", q.nuclear_dimension_bound)?;
        writeln!(f, "K1 rule: {}", self.diagnostics.k1_rule)?;
        for w in &self.diagnostics.validation.findings {
            writeln!(f, "{} [{}]: {}", w.severity, w.code, w.message)?;
        }
        Ok(())
    }
}
