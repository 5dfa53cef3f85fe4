#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use solk::intlin::{kernel_basis, saturation, smith_normal_form, IntMatrix};
use solk::limits::{make_limit, Descriptor};
use solk::model::{parse_presentation, validate, Presentation};

pub fn data(name: &str) -> String {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn load(name: &str) -> Presentation {
    parse_presentation(&data(name)).expect("bundled data parses")
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn bigs(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// A forward-only graph substitution kept as plain indices, independent of
/// the library's own types.
#[derive(Clone, Debug)]
pub struct RawSubstitution {
    pub vertices: usize,
    /// (source, target) per edge.
    pub edges: Vec<(usize, usize)>,
    pub vmap: Vec<usize>,
    pub images: Vec<Vec<usize>>,
}

impl RawSubstitution {
    pub fn edge_name(i: usize) -> String {
        ((b'a' + i as u8) as char).to_string()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("solenoid v1\n");
        for v in 0..self.vertices {
            s += &format!("vertex v{v}\n");
        }
        for (i, (a, b)) in self.edges.iter().enumerate() {
            s += &format!("edge {} v{a} v{b}\n", Self::edge_name(i));
        }
        for (i, img) in self.images.iter().enumerate() {
            let w: Vec<String> = img.iter().map(|&e| Self::edge_name(e)).collect();
            s += &format!("map {} -> {}\n", Self::edge_name(i), w.join(" "));
        }
        for (v, w) in self.vmap.iter().enumerate() {
            s += &format!("vmap v{v} -> v{w}\n");
        }
        s
    }

    pub fn presentation(&self) -> Presentation {
        parse_presentation(&self.to_text()).expect("generated text parses")
    }

    pub fn label(&self, (l, r): (usize, usize)) -> String {
        format!("{}{}", Self::edge_name(l), Self::edge_name(r))
    }
}

fn random_walk(rng: &mut StdRng, edges: &[(usize, usize)], from: usize, to: usize, max_len: usize) -> Option<Vec<usize>> {
    for _ in 0..64 {
        let len = rng.gen_range(1..=max_len);
        let mut at = from;
        let mut walk = Vec::with_capacity(len);
        for _ in 0..len {
            let out: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].0 == at).collect();
            if out.is_empty() {
                break;
            }
            let e = out[rng.gen_range(0..out.len())];
            walk.push(e);
            at = edges[e].1;
        }
        if walk.len() == len && at == to {
            return Some(walk);
        }
    }
    None
}

/// Random substitution with at most 3 vertices, 4 edges and image length 4;
/// `None` when the draw does not close up.
pub fn random_substitution(rng: &mut StdRng) -> Option<RawSubstitution> {
    let vertices = rng.gen_range(1..=3);
    let n_edges = rng.gen_range(vertices.max(1)..=4);
    let edges: Vec<(usize, usize)> = (0..n_edges)
        .map(|_| (rng.gen_range(0..vertices), rng.gen_range(0..vertices)))
        .collect();
    let vmap: Vec<usize> = (0..vertices).map(|_| rng.gen_range(0..vertices)).collect();
    let mut images = Vec::new();
    for &(s, t) in &edges {
        images.push(random_walk(rng, &edges, vmap[s], vmap[t], 4)?);
    }
    Some(RawSubstitution {
        vertices,
        edges,
        vmap,
        images,
    })
}

/// Valid presentations with a primitive matrix and no findings at all.
pub fn valid_primitive_corpus(rng: &mut StdRng, count: usize) -> Vec<RawSubstitution> {
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 200_000, "generator starved after {} instances", out.len());
        let Some(raw) = random_substitution(rng) else {
            continue;
        };
        let p = raw.presentation();
        if validate(&p).findings.is_empty() {
            out.push(raw);
        }
    }
    out
}

/// Cycle of `k` vertices, edge i from i to i+1, vertices rotated by `shift`;
/// every vertex has one incoming and one outgoing edge, so the quotient is
/// Hausdorff.
pub fn random_cycle_substitution(rng: &mut StdRng) -> RawSubstitution {
    loop {
        let k = rng.gen_range(1..=3);
        let shift = rng.gen_range(0..k);
        let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        let vmap: Vec<usize> = (0..k).map(|v| (v + shift) % k).collect();
        let images: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                let laps = rng.gen_range(0..=(6 / k));
                let len = 1 + laps * k;
                (0..len).map(|j| (i + shift + j) % k).collect()
            })
            .collect();
        let raw = RawSubstitution {
            vertices: k,
            edges,
            vmap,
            images,
        };
        if validate(&raw.presentation()).findings.is_empty() {
            return raw;
        }
    }
}

/// Germ classes and trace pullback computed by brute force from the raw
/// images: closure of junction germs under g̃ plus every forward germ that
/// returns to itself, preimages found by scanning image paths.
#[derive(Debug)]
pub struct GermOracle {
    /// Classes as (in-edge, out-edge), sorted by (vertex, in, out).
    pub classes: Vec<(usize, usize)>,
    pub gtilde: BTreeMap<(usize, usize), (usize, usize)>,
    /// Interior preimages (f, 1-based junction index) per class.
    pub interior: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    pub pullback: Vec<Vec<i64>>,
}

pub fn germ_oracle(raw: &RawSubstitution) -> GermOracle {
    let gt = |(l, r): (usize, usize)| -> (usize, usize) {
        (*raw.images[l].last().unwrap(), raw.images[r][0])
    };
    let mut all = Vec::new();
    for l in 0..raw.edges.len() {
        for r in 0..raw.edges.len() {
            if raw.edges[l].1 == raw.edges[r].0 {
                all.push((l, r));
            }
        }
    }
    let mut seeds: BTreeSet<(usize, usize)> = BTreeSet::new();
    for img in &raw.images {
        for w in img.windows(2) {
            seeds.insert((w[0], w[1]));
        }
    }
    for &c in &all {
        let mut x = gt(c);
        for _ in 0..=all.len() {
            if x == c {
                seeds.insert(c);
                break;
            }
            x = gt(x);
        }
    }
    let mut set = BTreeSet::new();
    let mut queue: VecDeque<_> = seeds.into_iter().collect();
    while let Some(c) = queue.pop_front() {
        if set.insert(c) {
            queue.push_back(gt(c));
        }
    }
    let mut classes: Vec<(usize, usize)> = set.into_iter().collect();
    classes.sort_by_key(|&(l, r)| (raw.edges[l].1, l, r));
    let gtilde: BTreeMap<_, _> = classes.iter().map(|&c| (c, gt(c))).collect();
    let mut interior: BTreeMap<(usize, usize), Vec<(usize, usize)>> =
        classes.iter().map(|&c| (c, Vec::new())).collect();
    for (f, img) in raw.images.iter().enumerate() {
        for (i, w) in img.windows(2).enumerate() {
            interior.get_mut(&(w[0], w[1])).unwrap().push((f, i + 1));
        }
    }
    let n = classes.len();
    let index: BTreeMap<_, _> = classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut pullback = vec![vec![0i64; n]; n];
    for (ci, c) in classes.iter().enumerate() {
        for (x, y) in &gtilde {
            if y == c {
                pullback[ci][index[x]] += 1;
            }
        }
        for &(f, _) in &interior[c] {
            for (j, d) in classes.iter().enumerate() {
                if d.1 == f {
                    pullback[ci][j] += 1;
                }
            }
        }
    }
    GermOracle {
        classes,
        gtilde,
        interior,
        pullback,
    }
}

pub fn random_matrix(rng: &mut StdRng, max_dim: usize, bound: i64) -> IntMatrix {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&rows)
}

pub fn random_unimodular(rng: &mut StdRng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..6 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k = big(rng.gen_range(-2..=2));
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = k;
        u = &u * &e;
    }
    u
}

pub fn check_snf(a: &IntMatrix) -> Result<(), String> {
    let s = smith_normal_form(a);
    let uav = &(&s.u * a) * &s.v;
    if uav != s.d {
        return Err(format!("U·A·V ≠ D for {a}"));
    }
    if !s.u.is_unimodular() || !s.v.is_unimodular() {
        return Err(format!("non-unimodular transform for {a}"));
    }
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j && !s.d[(i, j)].is_zero() {
                return Err(format!("D not diagonal for {a}"));
            }
        }
    }
    let diag = s.diagonal();
    for (i, x) in diag.iter().enumerate() {
        if *x < BigInt::zero() {
            return Err(format!("negative invariant factor for {a}"));
        }
        if let Some(next) = diag.get(i + 1) {
            let divides = if x.is_zero() { next.is_zero() } else { (next % x).is_zero() };
            if !divides {
                return Err(format!("divisibility fails for {a}: {diag:?}"));
            }
        }
    }
    if s.rank() != a.rank() {
        return Err(format!("SNF rank disagrees with rank for {a}"));
    }
    Ok(())
}

pub fn check_kernel(a: &IntMatrix) -> Result<(), String> {
    let k = kernel_basis(a);
    if k.rows() != a.cols() || k.cols() + a.rank() != a.cols() {
        return Err(format!("rank–nullity fails for {a}"));
    }
    if k.cols() == 0 {
        return Ok(());
    }
    if !(a * &k).is_zero() {
        return Err(format!("A·K ≠ 0 for {a}"));
    }
    if smith_normal_form(&k).diagonal().iter().any(|d| !d.is_one()) {
        return Err(format!("kernel basis of {a} is not saturated"));
    }
    if saturation(&k) != k {
        return Err(format!("kernel basis of {a} is not its own saturation"));
    }
    Ok(())
}

/// (kind, rank, characteristic polynomial of T′) for comparing limits whose
/// reduced matrices are only conjugate.
pub fn limit_signature(t: &IntMatrix) -> (String, usize, Vec<BigInt>) {
    let g = make_limit(t).unwrap();
    let kind = match g.classify() {
        Descriptor::Generic { .. } => "generic".to_string(),
        d => d.to_string(),
    };
    (kind, g.eventual_rank(), g.reduced_endomorphism().charpoly())
}
