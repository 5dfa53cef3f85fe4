//! Finite model of the quotient of the unstable set by the germ relation.
//!
//! Points of the solenoid's unstable set that project into the interior of
//! an edge form one Hausdorff cell per edge. Points projecting to a vertex
//! are classified by their germ: the edge arriving from the left and the
//! edge leaving to the right. Only finitely many germs occur; they are
//! found as the forward closure, under the induced map, of the germs seen
//! at interior junctions of image paths together with the periodic germs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::model::{Dart, EdgeId, Presentation, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GermError {
    #[error("vertex `{0}` carries no occurring germ class; the presentation is not reduced")]
    UnreachableVertex(String),
    #[error("quotient is Hausdorff and connected but preimage counts vary: {0:?}")]
    DegreeNotConstant(Vec<usize>),
}

/// A germ class `(in, out)` at a vertex: `in` arrives, `out` departs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GermClass {
    pub vertex: VertexId,
    pub in_dart: Dart,
    pub out_dart: Dart,
}

impl GermClass {
    pub fn new(p: &Presentation, in_dart: Dart, out_dart: Dart) -> Self {
        let g = p.graph();
        let vertex = in_dart.end(g);
        debug_assert_eq!(vertex, out_dart.start(g), "germ darts do not meet");
        debug_assert_ne!(in_dart.reversed(), out_dart, "germ folds back on itself");
        Self {
            vertex,
            in_dart,
            out_dart,
        }
    }

    pub fn in_edge(&self) -> EdgeId {
        self.in_dart.edge
    }

    pub fn out_edge(&self) -> EdgeId {
        self.out_dart.edge
    }

    /// `ba` for single-character edge names, `b|a` otherwise.
    pub fn label(&self, p: &Presentation) -> String {
        let g = p.graph();
        let l = self.in_dart.label(g);
        let r = self.out_dart.label(g);
        if g.edges().iter().all(|e| e.name.chars().count() == 1) {
            format!("{l}{r}")
        } else {
            format!("{l}|{r}")
        }
    }
}

/// Every germ `(d_i, d_{i+1})` at an interior junction of some g(f).
pub fn junction_germs(p: &Presentation) -> BTreeSet<GermClass> {
    p.graph()
        .edge_ids()
        .flat_map(|f| {
            p.image(f)
                .darts()
                .windows(2)
                .map(|w| GermClass::new(p, w[0], w[1]))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// g̃ on a vertex class: last dart of g(in), first dart of g(out).
pub fn gtilde_on_class(p: &Presentation, c: &GermClass) -> GermClass {
    let in_image = p.dart_image(c.in_dart);
    let out_image = p.dart_image(c.out_dart);
    GermClass {
        vertex: p.vertex_image(c.vertex),
        in_dart: in_image.last(),
        out_dart: out_image.first(),
    }
}

/// All forward germs a vertex could carry: (arriving edge, departing edge).
pub fn all_forward_germs(p: &Presentation) -> Vec<GermClass> {
    let g = p.graph();
    let mut out = Vec::new();
    for v in g.vertex_ids() {
        for i in g.edge_ids().filter(|&e| g.edge(e).target == v) {
            for o in g.edge_ids().filter(|&e| g.edge(e).source == v) {
                out.push(GermClass {
                    vertex: v,
                    in_dart: Dart::forward(i),
                    out_dart: Dart::forward(o),
                });
            }
        }
    }
    out
}

/// Germs lying on a cycle of g̃ acting on the full forward germ set.
pub fn periodic_germs(p: &Presentation) -> BTreeSet<GermClass> {
    let all = all_forward_germs(p);
    let bound = all.len();
    all.iter()
        .filter(|c| {
            let mut x = gtilde_on_class(p, c);
            for _ in 0..bound {
                if x == **c {
                    return true;
                }
                x = gtilde_on_class(p, &x);
            }
            false
        })
        .copied()
        .collect()
}

/// Order in which classes are listed in reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClassOrder {
    /// Ascending by (vertex, in-edge, out-edge).
    #[default]
    Lex,
    /// Descending lexicographic order; for the aab/ab substitution this
    /// lists the classes as ba, ab, aa.
    Paper,
}

/// The occurring germ classes with their induced map and preimage tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientModel {
    pub classes: Vec<GermClass>,
    pub edge_points: Vec<EdgeId>,
    /// `gtilde[i]` is the index of g̃(classes[i]).
    pub gtilde: Vec<usize>,
    /// Interior points `(f, i)` mapped onto each class, junction index 1-based.
    pub interior_preimages: Vec<Vec<(EdgeId, usize)>>,
}

impl QuotientModel {
    pub fn index_of(&self, c: &GermClass) -> Option<usize> {
        self.classes.iter().position(|x| x == c)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn labels(&self, p: &Presentation) -> Vec<String> {
        self.classes.iter().map(|c| c.label(p)).collect()
    }

    /// Vertex classes c′ with g̃(c′) = classes[i].
    pub fn vertex_preimages(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.gtilde[j] == i).collect()
    }

    pub fn with_order(&self, order: ClassOrder) -> Self {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| self.classes[i]);
        if order == ClassOrder::Paper {
            idx.reverse();
        }
        let mut position = vec![0; self.len()];
        for (new, &old) in idx.iter().enumerate() {
            position[old] = new;
        }
        Self {
            classes: idx.iter().map(|&i| self.classes[i]).collect(),
            edge_points: self.edge_points.clone(),
            gtilde: idx.iter().map(|&i| position[self.gtilde[i]]).collect(),
            interior_preimages: idx.iter().map(|&i| self.interior_preimages[i].clone()).collect(),
        }
    }
}

/// All `(f, i)` such that the junction of g(f) after its i-th dart is `c`.
pub fn interior_preimages(p: &Presentation, c: &GermClass) -> Vec<(EdgeId, usize)> {
    let mut out = Vec::new();
    for f in p.graph().edge_ids() {
        for (i, w) in p.image(f).darts().windows(2).enumerate() {
            if GermClass::new(p, w[0], w[1]) == *c {
                out.push((f, i + 1));
            }
        }
    }
    out
}

fn closure(p: &Presentation, seeds: impl IntoIterator<Item = GermClass>) -> BTreeSet<GermClass> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<GermClass> = seeds.into_iter().collect();
    while let Some(c) = queue.pop_front() {
        if seen.insert(c) {
            queue.push_back(gtilde_on_class(p, &c));
        }
    }
    seen
}

/// Builds the quotient model in lexicographic class order.
pub fn occurring_classes(p: &Presentation) -> Result<QuotientModel, GermError> {
    let seeds = junction_germs(p).into_iter().chain(periodic_germs(p));
    let set = closure(p, seeds);
    let g = p.graph();
    for v in g.vertex_ids() {
        if !set.iter().any(|c| c.vertex == v) {
            return Err(GermError::UnreachableVertex(g.vertex_name(v).to_string()));
        }
    }
    let classes: Vec<GermClass> = set.into_iter().collect();
    let index: BTreeMap<GermClass, usize> = classes.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let gtilde = classes
        .iter()
        .map(|c| index[&gtilde_on_class(p, c)])
        .collect();
    let interior_preimages = classes.iter().map(|c| interior_preimages(p, c)).collect();
    Ok(QuotientModel {
        classes,
        edge_points: g.edge_ids().collect(),
        gtilde,
        interior_preimages,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HausdorffCheck {
    pub hausdorff: bool,
    /// Two distinct classes at one vertex that share an incoming or outgoing dart.
    pub witness: Option<(GermClass, GermClass)>,
}

pub fn is_quotient_hausdorff(q: &QuotientModel) -> HausdorffCheck {
    for (i, a) in q.classes.iter().enumerate() {
        for b in &q.classes[i + 1..] {
            if a.vertex == b.vertex && (a.in_dart == b.in_dart || a.out_dart == b.out_dart) {
                return HausdorffCheck {
                    hausdorff: false,
                    witness: Some((*a, *b)),
                };
            }
        }
    }
    HausdorffCheck {
        hausdorff: true,
        witness: None,
    }
}

/// Cells (edges and classes) linked when a class has the edge as its in- or
/// out-edge; the quotient is connected iff this incidence graph is.
pub fn is_quotient_connected(p: &Presentation, q: &QuotientModel) -> bool {
    let n_edges = p.graph().edge_count();
    let n = n_edges + q.len();
    if n == 0 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for (i, c) in q.classes.iter().enumerate() {
        for e in [c.in_edge(), c.out_edge()] {
            adj[n_edges + i].push(e.0);
            adj[e.0].push(n_edges + i);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Number of g̃-preimages of every class, then of every edge cell.
pub fn preimage_counts(p: &Presentation, q: &QuotientModel) -> (Vec<usize>, Vec<usize>) {
    let classes = (0..q.len())
        .map(|i| q.vertex_preimages(i).len() + q.interior_preimages[i].len())
        .collect();
    let m = p.abelianization();
    let edges = p
        .graph()
        .edge_ids()
        .map(|e| {
            (0..m.cols())
                .map(|f| usize::try_from(&m[(e.0, f)]).expect("small occurrence count"))
                .sum()
        })
        .collect();
    (classes, edges)
}

/// Upper bound on the nuclear dimension of the stable algebra: the covering
/// dimension of the unstable set, which is one for graph solenoids.
pub const NUCLEAR_DIMENSION_BOUND: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSummary {
    pub classes_per_vertex: Vec<(String, usize)>,
    pub hausdorff: HausdorffCheck,
    pub connected: bool,
    /// Constant g̃-degree, present when Hausdorff and connected.
    pub degree: Option<usize>,
    pub nuclear_dimension_bound: usize,
}

pub fn quotient_summary(p: &Presentation, q: &QuotientModel) -> Result<QuotientSummary, GermError> {
    let g = p.graph();
    let classes_per_vertex = g
        .vertex_ids()
        .map(|v| {
            let n = q.classes.iter().filter(|c| c.vertex == v).count();
            (g.vertex_name(v).to_string(), n)
        })
        .collect();
    let hausdorff = is_quotient_hausdorff(q);
    let connected = is_quotient_connected(p, q);
    let mut degree = None;
    if hausdorff.hausdorff && connected {
        let (cls, edges) = preimage_counts(p, q);
        let counts: Vec<usize> = cls.into_iter().chain(edges).collect();
        match counts.first() {
            Some(&n) if n >= 2 && counts.iter().all(|&c| c == n) => degree = Some(n),
            _ => return Err(GermError::DegreeNotConstant(counts)),
        }
    }
    Ok(QuotientSummary {
        classes_per_vertex,
        hausdorff,
        connected,
        degree,
        nuclear_dimension_bound: NUCLEAR_DIMENSION_BOUND,
    })
}

impl fmt::Display for QuotientSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, n) in &self.classes_per_vertex {
            writeln!(f, "vertex {v}: {n} class(es)")?;
        }
        writeln!(f, "hausdorff: {}", self.hausdorff.hausdorff)?;
        writeln!(f, "connected: {}", self.connected)?;
        match self.degree {
            Some(n) => writeln!(f, "degree: {n}")?,
            None => writeln!(f, "degree: n/a")?,
        }
        writeln!(f, "nuclear dimension bound: {}", self.nuclear_dimension_bound)
    }
}
