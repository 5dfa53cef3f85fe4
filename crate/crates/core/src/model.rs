//! Combinatorial presentations of one-dimensional solenoids.
//!
//! A presentation is a finite directed graph together with a substitution
//! that sends every edge to a nonempty edge path and every vertex to a
//! vertex. The inverse limit of the induced self-map of the graph is the
//! solenoid; everything downstream only looks at this finite data.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::intlin::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId, String> {
        if self.vertex_id(name).is_some() {
            return Err(format!("duplicate vertex `{name}`"));
        }
        self.vertices.push(name.to_string());
        Ok(VertexId(self.vertices.len() - 1))
    }

    pub fn add_edge(&mut self, name: &str, source: &str, target: &str) -> Result<EdgeId, String> {
        if self.edge_id(name).is_some() {
            return Err(format!("duplicate edge `{name}`"));
        }
        let s = self
            .vertex_id(source)
            .ok_or_else(|| format!("unknown vertex `{source}`"))?;
        let t = self
            .vertex_id(target)
            .ok_or_else(|| format!("unknown vertex `{target}`"))?;
        self.edges.push(Edge {
            name: name.to_string(),
            source: s,
            target: t,
        });
        Ok(EdgeId(self.edges.len() - 1))
    }
}

/// An edge traversed in one direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Dart {
    pub fn forward(edge: EdgeId) -> Self {
        Self {
            edge,
            forward: true,
        }
    }

    pub fn reversed(self) -> Self {
        Self {
            edge: self.edge,
            forward: !self.forward,
        }
    }

    pub fn start(self, g: &Graph) -> VertexId {
        let e = g.edge(self.edge);
        if self.forward {
            e.source
        } else {
            e.target
        }
    }

    pub fn end(self, g: &Graph) -> VertexId {
        self.reversed().start(g)
    }

    pub fn label(self, g: &Graph) -> String {
        let name = g.edge_name(self.edge);
        if self.forward {
            name.to_string()
        } else {
            format!("~{name}")
        }
    }
}

/// A nonempty sequence of composable darts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePath {
    darts: Vec<Dart>,
}

impl EdgePath {
    /// Fails with the index of the first junction that does not compose.
    pub fn new(g: &Graph, darts: Vec<Dart>) -> Result<Self, PathError> {
        if darts.is_empty() {
            return Err(PathError::Empty);
        }
        for (i, w) in darts.windows(2).enumerate() {
            if w[0].end(g) != w[1].start(g) {
                return Err(PathError::Discontinuous { junction: i + 1 });
            }
        }
        Ok(Self { darts })
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn first(&self) -> Dart {
        self.darts[0]
    }

    pub fn last(&self) -> Dart {
        self.darts[self.darts.len() - 1]
    }

    pub fn start(&self, g: &Graph) -> VertexId {
        self.first().start(g)
    }

    pub fn end(&self, g: &Graph) -> VertexId {
        self.last().end(g)
    }

    pub fn reversed(&self) -> Self {
        Self {
            darts: self.darts.iter().rev().map(|d| d.reversed()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("empty path")]
    Empty,
    #[error("path is discontinuous at junction {junction}")]
    Discontinuous { junction: usize },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

impl ParseError {
    fn new(line: usize, reason: impl Into<String>) -> Self {
        Self {
            line,
            reason: reason.into(),
        }
    }
}

/// Graph plus substitution: `edge_map[e]` is g(e), `vertex_map[v]` is g(v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    graph: Graph,
    edge_map: Vec<EdgePath>,
    vertex_map: Vec<VertexId>,
}

impl Presentation {
    /// Assembles a presentation; a missing vertex image is inferred from the
    /// endpoints of image paths.
    pub fn new(
        graph: Graph,
        edge_map: Vec<EdgePath>,
        vertex_map: Vec<Option<VertexId>>,
    ) -> Result<Self, String> {
        if edge_map.len() != graph.edge_count() || vertex_map.len() != graph.vertex_count() {
            return Err("edge or vertex map does not cover the graph".into());
        }
        let mut resolved = vertex_map;
        for (e, path) in graph.edges().iter().zip(&edge_map) {
            for (v, image) in [(e.source, path.start(&graph)), (e.target, path.end(&graph))] {
                // first inference wins; conflicts surface in validation
                resolved[v.0].get_or_insert(image);
            }
        }
        let vertex_map = resolved
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    format!(
                        "cannot infer image of isolated vertex `{}`; add a vmap line",
                        graph.vertices[i]
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            graph,
            edge_map,
            vertex_map,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn image(&self, e: EdgeId) -> &EdgePath {
        &self.edge_map[e.0]
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    /// g applied to a dart: the image path, reversed for backward darts.
    pub fn dart_image(&self, d: Dart) -> EdgePath {
        let p = self.image(d.edge);
        if d.forward {
            p.clone()
        } else {
            p.reversed()
        }
    }

    /// The substitution iterated `k ≥ 1` times.
    pub fn iterate(&self, k: usize) -> Self {
        assert!(k >= 1, "iterate needs k >= 1");
        let mut current = self.clone();
        for _ in 1..k {
            let edge_map = current
                .edge_map
                .iter()
                .map(|path| EdgePath {
                    darts: path
                        .darts()
                        .iter()
                        .flat_map(|&d| self.dart_image(d).darts)
                        .collect(),
                })
                .collect();
            let vertex_map = current
                .vertex_map
                .iter()
                .map(|&v| self.vertex_image(v))
                .collect();
            current = Self {
                graph: self.graph.clone(),
                edge_map,
                vertex_map,
            };
        }
        current
    }

    /// Entry (f, e) counts occurrences of edge f in g(e), in either direction.
    pub fn abelianization(&self) -> IntMatrix {
        let n = self.graph.edge_count();
        let mut m = IntMatrix::zeros(n, n);
        for (e, path) in self.edge_map.iter().enumerate() {
            for d in path.darts() {
                m[(d.edge.0, e)] += BigInt::from(1);
            }
        }
        m
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.edge_map
            .iter()
            .all(|p| p.darts().iter().all(|d| d.forward))
    }

    /// Renders the presentation in the `solenoid v1` text format.
    pub fn to_text(&self) -> String {
        let g = &self.graph;
        let mut out = String::from("solenoid v1\n");
        for v in g.vertices() {
            out.push_str(&format!("vertex {v}\n"));
        }
        for e in g.edges() {
            out.push_str(&format!(
                "edge {} {} {}\n",
                e.name,
                g.vertex_name(e.source),
                g.vertex_name(e.target)
            ));
        }
        for (e, path) in g.edges().iter().zip(&self.edge_map) {
            let labels: Vec<String> = path.darts().iter().map(|d| d.label(g)).collect();
            out.push_str(&format!("map {} -> {}\n", e.name, labels.join(" ")));
        }
        for (v, image) in g.vertex_ids().zip(&self.vertex_map) {
            out.push_str(&format!(
                "vmap {} -> {}\n",
                g.vertex_name(v),
                g.vertex_name(*image)
            ));
        }
        out
    }
}

fn valid_name(tok: &str) -> bool {
    !tok.is_empty() && !tok.starts_with('~') && tok != "->"
}

/// Parses the line-oriented `solenoid v1` format.
///
/// Declarations (`vertex`, `edge`) are read first so that `map` and `vmap`
/// lines may appear anywhere after the header.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .map(|(n, l)| (n, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, toks)| !toks.is_empty())
        .collect();

    let Some((header_line, header)) = lines.first() else {
        return Err(ParseError::new(1, "empty input; expected `solenoid v1`"));
    };
    if header.as_slice() != ["solenoid", "v1"] {
        return Err(ParseError::new(*header_line, "expected header `solenoid v1`"));
    }

    let mut graph = Graph::default();
    let mut edge_lines = Vec::new();
    for (line, toks) in &lines[1..] {
        match toks[0] {
            "vertex" => {
                if toks.len() != 2 || !valid_name(toks[1]) {
                    return Err(ParseError::new(*line, "malformed vertex line"));
                }
                graph
                    .add_vertex(toks[1])
                    .map_err(|r| ParseError::new(*line, r))?;
            }
            "edge" | "map" | "vmap" => {}
            other => return Err(ParseError::new(*line, format!("unknown directive `{other}`"))),
        }
    }
    for (line, toks) in &lines[1..] {
        if toks[0] == "edge" {
            if toks.len() != 4 || !valid_name(toks[1]) {
                return Err(ParseError::new(*line, "malformed edge line"));
            }
            graph
                .add_edge(toks[1], toks[2], toks[3])
                .map_err(|r| ParseError::new(*line, r))?;
            edge_lines.push(*line);
        }
    }

    let mut edge_map: Vec<Option<EdgePath>> = vec![None; graph.edge_count()];
    let mut vertex_map: Vec<Option<VertexId>> = vec![None; graph.vertex_count()];
    for (line, toks) in &lines[1..] {
        match toks[0] {
            "map" => {
                if toks.len() < 4 || toks[2] != "->" {
                    return Err(ParseError::new(*line, "malformed map line"));
                }
                let e = graph
                    .edge_id(toks[1])
                    .ok_or_else(|| ParseError::new(*line, format!("unknown edge `{}`", toks[1])))?;
                if edge_map[e.0].is_some() {
                    return Err(ParseError::new(*line, format!("duplicate map for edge `{}`", toks[1])));
                }
                let darts = toks[3..]
                    .iter()
                    .map(|t| {
                        let (name, forward) = match t.strip_prefix('~') {
                            Some(rest) => (rest, false),
                            None => (*t, true),
                        };
                        graph
                            .edge_id(name)
                            .map(|edge| Dart { edge, forward })
                            .ok_or_else(|| ParseError::new(*line, format!("unknown edge `{name}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let path = EdgePath::new(&graph, darts).map_err(|e| ParseError::new(*line, e.to_string()))?;
                edge_map[e.0] = Some(path);
            }
            "vmap" => {
                if toks.len() != 4 || toks[2] != "->" {
                    return Err(ParseError::new(*line, "malformed vmap line"));
                }
                let lookup = |name: &str| {
                    graph
                        .vertex_id(name)
                        .ok_or_else(|| ParseError::new(*line, format!("unknown vertex `{name}`")))
                };
                let (v, w) = (lookup(toks[1])?, lookup(toks[3])?);
                if vertex_map[v.0].is_some() {
                    return Err(ParseError::new(*line, format!("duplicate vmap for vertex `{}`", toks[1])));
                }
                vertex_map[v.0] = Some(w);
            }
            _ => {}
        }
    }

    let edge_map = edge_map
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| {
                ParseError::new(edge_lines[i], format!("edge `{}` has no map line", graph.edges[i].name))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let last_line = lines.last().map_or(1, |(l, _)| *l);
    Presentation::new(graph, edge_map, vertex_map).map_err(|r| ParseError::new(last_line, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.findings.iter().all(|f| f.severity != Severity::Error)
    }

    pub fn has(&self, code: &str) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }

    pub fn push(&mut self, severity: Severity, code: &'static str, message: impl Into<String>) {
        self.findings.push(Finding {
            severity,
            code,
            message: message.into(),
        });
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.findings.is_empty() {
            return writeln!(f, "ok");
        }
        for x in &self.findings {
            writeln!(f, "{} [{}]: {}", x.severity, x.code, x.message)?;
        }
        Ok(())
    }
}

pub mod codes {
    pub const EMPTY: &str = "empty-graph";
    pub const PATH_CONTINUITY: &str = "path-continuity";
    pub const ENDPOINTS: &str = "endpoint-mismatch";
    pub const HOMEOMORPHISM: &str = "homeomorphism";
    pub const ORIENTATION: &str = "orientation-reversing";
    pub const NOT_PRIMITIVE: &str = "not-primitive";
    pub const NOT_EXPANDING: &str = "not-expanding";
    pub const REDUCIBLE: &str = "reducible";
    pub const NEGATIVE_ENTRY: &str = "negative-entry";
    pub const DEAD_STATE: &str = "dead-state";
    pub const NOT_SQUARE: &str = "not-square";
    pub const UNREDUCED: &str = "unreduced-vertex";
}

/// Boolean pattern of a nonnegative matrix.
pub(crate) fn support(m: &IntMatrix) -> Vec<Vec<bool>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x > BigInt::from(0)).collect())
        .collect()
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).any(|k| a[i][k] && b[k][j])).collect())
        .collect()
}

/// Some power `M^k` with `k ≤ n²` is strictly positive.
pub fn is_primitive(m: &IntMatrix) -> bool {
    let n = m.rows();
    if n == 0 {
        return false;
    }
    let base = support(m);
    let mut power = base.clone();
    for _ in 0..n * n {
        if power.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        power = bool_mul(&power, &base);
    }
    false
}

/// `(I + M)^(n-1)` is strictly positive.
pub fn is_irreducible(m: &IntMatrix) -> bool {
    let n = m.rows();
    if n == 0 {
        return false;
    }
    let mut base = support(m);
    for (i, row) in base.iter_mut().enumerate() {
        row[i] = true;
    }
    let mut reach = base.clone();
    for _ in 1..n {
        reach = bool_mul(&reach, &base);
    }
    reach.iter().all(|r| r.iter().all(|&x| x))
}

/// Combinatorial sanity checks standing in for the metric hypotheses.
pub fn validate(p: &Presentation) -> ValidationReport {
    let g = p.graph();
    let mut report = ValidationReport::default();
    if g.edge_count() == 0 {
        report.push(Severity::Error, codes::EMPTY, "presentation has no edges");
        return report;
    }

    for e in g.edge_ids() {
        let path = p.image(e);
        if let Err(err) = EdgePath::new(g, path.darts().to_vec()) {
            report.push(
                Severity::Error,
                codes::PATH_CONTINUITY,
                format!("image of `{}`: {err}", g.edge_name(e)),
            );
            continue;
        }
        let edge = g.edge(e);
        for (end, v, w) in [
            ("start", edge.source, path.start(g)),
            ("end", edge.target, path.end(g)),
        ] {
            if p.vertex_image(v) != w {
                report.push(
                    Severity::Error,
                    codes::ENDPOINTS,
                    format!(
                        "image of `{}` has {end} vertex `{}` but `{}` maps to `{}`",
                        g.edge_name(e),
                        g.vertex_name(w),
                        g.vertex_name(v),
                        g.vertex_name(p.vertex_image(v))
                    ),
                );
            }
        }
    }

    let all_length_one = g.edge_ids().all(|e| p.image(e).len() == 1);
    if all_length_one {
        let mut hit = vec![false; g.edge_count()];
        for e in g.edge_ids() {
            hit[p.image(e).first().edge.0] = true;
        }
        if hit.iter().all(|&h| h) {
            report.push(
                Severity::Error,
                codes::HOMEOMORPHISM,
                "substitution permutes edges; the induced map is a homeomorphism",
            );
        }
    }

    for e in g.edge_ids() {
        if let Some(d) = p.image(e).darts().iter().find(|d| !d.forward) {
            report.push(
                Severity::Error,
                codes::ORIENTATION,
                format!(
                    "unsupported: orientation-reversing dart `{}` in image of `{}`",
                    d.label(g),
                    g.edge_name(e)
                ),
            );
        }
    }

    let m = p.abelianization();
    if !is_primitive(&m) {
        report.push(
            Severity::Warning,
            codes::NOT_PRIMITIVE,
            "abelianized substitution matrix is not primitive; mixing is not verified",
        );
    }

    // lengths of g^k(e): l_k = l_{k-1} · M
    let n = g.edge_count();
    let mut lengths = vec![BigInt::from(1); n];
    let mut expanded = vec![false; n];
    for _ in 0..n {
        lengths = (0..n)
            .map(|e| (0..n).map(|f| &lengths[f] * &m[(f, e)]).sum())
            .collect();
        for e in 0..n {
            expanded[e] |= lengths[e] >= BigInt::from(2);
        }
    }
    for e in g.edge_ids() {
        if !expanded[e.0] {
            report.push(
                Severity::Error,
                codes::NOT_EXPANDING,
                format!(
                    "edge `{}` is never expanded: |g^k| < 2 for all k ≤ {n}",
                    g.edge_name(e)
                ),
            );
        }
    }

    if report.ok() {
        if let Err(e) = crate::germs::occurring_classes(p) {
            report.push(Severity::Error, codes::UNREDUCED, e.to_string());
        }
    }
    report
}
