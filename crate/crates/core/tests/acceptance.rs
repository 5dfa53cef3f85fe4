//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use solk::germs::{occurring_classes, quotient_summary, ClassOrder};
use solk::intlin::{kernel_basis, restrict_endomorphism, solve_integral, IntMatrix};
use solk::ktheory::{
    boundary_matrix, edge_trace_row, k_theory_of_g0, ktheory_report, psi_star_k1,
    trace_pullback_matrix, TraceFunctional,
};
use solk::limits::{make_limit, Descriptor};
use solk::model::parse_presentation;
use solk::sft::{sft_dimension_group, SftPresentation};

const SINGLE_CASE_LIMIT: Duration = Duration::from_secs(1);
const SUITE_LIMIT: Duration = Duration::from_secs(60);
const SNF_SAMPLES: usize = 600;
const PRESENTATION_SAMPLES: usize = 150;
const HAUSDORFF_SAMPLES: usize = 60;
const LIMIT_SAMPLES: usize = 300;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Column lattices are equal when each basis solves integrally in the other.
fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    let inside = |x: &IntMatrix, y: &IntMatrix| matches!(solve_integral(x, y), Ok(Some(_)));
    a.rows() == b.rows() && a.rank() == b.rank() && inside(a, b) && inside(b, a)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let p = load("aabab.sol");
    let r = ktheory_report(&p, ClassOrder::Paper).map_err(|e| e.to_string())?;
    ensure(r.classes == ["ba", "ab", "aa"], || format!("classes {:?}", r.classes))?;
    ensure(r.delta0 == IntMatrix::from_rows(&[[-1, 1, 0], [1, -1, 0]]), || {
        format!("δ₀ = {}", r.delta0)
    })?;
    ensure(r.k0_basis.cols() == 2, || "K₀ rank ≠ 2".into())?;
    ensure(r.k1.structure.to_string() == "Z", || format!("K₁ = {}", r.k1.structure))?;
    let alpha_beta = IntMatrix::from_rows(&[[1, 0], [1, 0], [0, 1]]);
    ensure(same_lattice(&r.k0_basis, &alpha_beta), || {
        format!("kernel basis {} does not span ⟨α, β⟩", r.k0_basis)
    })?;
    // ψ*₀ in the α, β basis itself
    let t = trace_pullback_matrix(&occurring_classes(&p).unwrap().with_order(ClassOrder::Paper));
    let psi_ab = restrict_endomorphism(&t, &alpha_beta).map_err(|e| e.to_string())?;
    ensure(psi_ab == IntMatrix::from_rows(&[[2, 1], [1, 1]]), || format!("ψ*₀ on α, β = {psi_ab}"))?;
    ensure(r.psi0 == IntMatrix::from_rows(&[[2, 1], [1, 1]]), || format!("ψ*₀ = {}", r.psi0))?;
    ensure(r.k1.free_part == IntMatrix::identity(1), || format!("ψ*₁ = {}", r.k1.free_part))?;
    ensure(r.k0_class == Descriptor::FreeAbelian(2), || format!("K₀ limit {}", r.k0_class))?;
    ensure(r.k1_class == "Z", || format!("K₁ limit {}", r.k1_class))?;
    let took = start.elapsed();
    ensure(took < SINGLE_CASE_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("classes ba ab aa, K0 = Z^2, K1 = Z, {took:.1?}"))
}

fn criterion_2() -> Outcome {
    let p = load("aabab.sol");
    let q = occurring_classes(&p).unwrap().with_order(ClassOrder::Paper);
    let labels = q.labels(&p);
    for (i, l) in labels.iter().enumerate() {
        let image = &labels[q.gtilde[i]];
        ensure(image == "ba", || format!("g̃({l}) = {image}"))?;
    }
    let g = p.graph();
    let pre = |label: &str| -> Vec<(String, usize)> {
        let i = labels.iter().position(|l| l == label).unwrap();
        q.interior_preimages[i]
            .iter()
            .map(|(f, k)| (g.edge_name(*f).to_string(), *k))
            .collect()
    };
    let expect = [
        ("aa", vec![("a".to_string(), 1)]),
        ("ab", vec![("a".to_string(), 2), ("b".to_string(), 1)]),
        ("ba", vec![]),
    ];
    for (label, want) in expect {
        let got = pre(label);
        ensure(got == want, || format!("interior preimages of {label}: {got:?}"))?;
    }
    Ok("g̃ ≡ ba, interior preimages match".into())
}

fn criterion_3() -> Outcome {
    let mut worst = Duration::ZERO;
    for n in 2..=6usize {
        let start = Instant::now();
        let text = format!("solenoid v1\nvertex p\nedge a p p\nmap a -> {}\n", vec!["a"; n].join(" "));
        let p = parse_presentation(&text).map_err(|e| e.to_string())?;
        let r = ktheory_report(&p, ClassOrder::Lex).map_err(|e| e.to_string())?;
        ensure(r.classes == ["aa"], || format!("n = {n}: classes {:?}", r.classes))?;
        ensure(r.delta0.is_zero(), || format!("n = {n}: δ₀ = {}", r.delta0))?;
        ensure(r.psi0 == IntMatrix::from_rows(&[[n as i64]]), || format!("n = {n}: ψ*₀ = {}", r.psi0))?;
        ensure(r.k0_class == Descriptor::ZOneOver(BigInt::from(n)), || {
            format!("n = {n}: K₀ limit {}", r.k0_class)
        })?;
        ensure(r.k1.structure.to_string() == "Z" && r.k1.free_part == IntMatrix::identity(1), || {
            format!("n = {n}: K₁ {} with ψ*₁ = {}", r.k1.structure, r.k1.free_part)
        })?;
        ensure(r.k1_class == "Z", || format!("n = {n}: K₁ limit {}", r.k1_class))?;
        let took = start.elapsed();
        ensure(took < SINGLE_CASE_LIMIT, || format!("n = {n} took {took:?}"))?;
        worst = worst.max(took);
    }
    Ok(format!("n = 2..6 give Z[1/n], slowest {worst:.1?}"))
}

fn criterion_4() -> Outcome {
    let p = load("aabab.sol");
    let q = occurring_classes(&p).unwrap().with_order(ClassOrder::Paper);
    let g = p.graph();
    let unit = |label: &str| -> Vec<BigInt> {
        let labels = q.labels(&p);
        (0..q.len()).map(|i| BigInt::from((labels[i] == label) as i64)).collect()
    };
    let add = |x: Vec<BigInt>, y: Vec<BigInt>| -> Vec<BigInt> { x.into_iter().zip(y).map(|(a, b)| a + b).collect() };
    let tau_a = edge_trace_row(&q, g.edge_id("a").unwrap());
    let tau_b = edge_trace_row(&q, g.edge_id("b").unwrap());
    ensure(tau_a.row == add(unit("ba"), unit("aa")), || format!("τ_a = {:?}", tau_a.row))?;
    ensure(tau_b.row == unit("ab"), || format!("τ_b = {:?}", tau_b.row))?;
    let diff = TraceFunctional { row: tau_b.row.clone() }
        .sub(&TraceFunctional { row: unit("ba") });
    let (basis, _) = k_theory_of_g0(&p, &q);
    for col in basis.columns() {
        ensure(diff.apply(&col).is_zero(), || "τ_b − τ_ba is nonzero on ker δ₀".into())?;
    }
    // over ℚ, annihilating ker δ₀ is the same as lying in the row space of δ₀
    let delta = boundary_matrix(&p, &q).matrix;
    let mut rows = delta.to_rows();
    rows.push(diff.row.clone());
    let stacked = IntMatrix::new(rows.len(), q.len(), rows.into_iter().flatten().collect()).unwrap();
    ensure(stacked.rank() == delta.rank(), || "τ_b − τ_ba outside the row space of δ₀".into())?;
    Ok("τ_a = τ_ba + τ_aa, τ_b = τ_ab, τ_b − τ_ba ∈ rowspace δ₀".into())
}

fn criterion_5() -> Outcome {
    let classify = |a: &IntMatrix| sft_dimension_group(&SftPresentation::from_matrix(a.clone())).unwrap().k0.classify();
    for n in [2i64, 3, 5] {
        let a = IntMatrix::from_rows(&[[n]]);
        let d = classify(&a);
        ensure(d == Descriptor::ZOneOver(BigInt::from(n)), || format!("full {n}-shift gives {d}"))?;
        let ones = IntMatrix::from_rows(&vec![vec![1i64; n as usize]; n as usize]);
        let d = classify(&ones);
        ensure(d == Descriptor::ZOneOver(BigInt::from(n)), || format!("all-ones {n}x{n} gives {d}"))?;
    }
    let golden = IntMatrix::from_rows(&[[1, 1], [1, 0]]);
    ensure(classify(&golden) == Descriptor::FreeAbelian(2), || format!("golden mean gives {}", classify(&golden)))?;
    let cases = [
        IntMatrix::from_rows(&[[2]]),
        IntMatrix::from_rows(&[[1, 1], [1, 1]]),
        IntMatrix::from_rows(&[[1, 1, 1], [1, 1, 1], [1, 1, 1]]),
        golden,
        IntMatrix::from_rows(&[[5]]),
    ];
    for a in cases {
        let s = SftPresentation::from_matrix(a.clone());
        let before = sft_dimension_group(&s).unwrap().k0.classify();
        let refined = s.edge_shift();
        let after = sft_dimension_group(&refined).unwrap().k0.classify();
        ensure(before == after, || format!("edge-shift recoding of {a}: {before} vs {after}"))?;
        let twice = sft_dimension_group(&refined.edge_shift()).unwrap().k0.classify();
        ensure(before == twice, || format!("double recoding of {a}: {before} vs {twice}"))?;
    }
    Ok("full shifts Z[1/n], golden mean Z^2, recoding invariant".into())
}

fn criterion_6() -> Outcome {
    let raw = RawSubstitution {
        vertices: 1,
        edges: vec![(0, 0), (0, 0)],
        vmap: vec![0],
        images: vec![vec![0, 1], vec![0]],
    };
    let oracle = germ_oracle(&raw);
    let oracle_labels: Vec<String> = oracle.classes.iter().map(|&c| raw.label(c)).collect();
    let mut sorted = oracle_labels.clone();
    sorted.sort();
    ensure(sorted == ["aa", "ab", "ba"], || format!("oracle classes {oracle_labels:?}"))?;

    let p = load("fibonacci.sol");
    let q = occurring_classes(&p).map_err(|e| e.to_string())?;
    ensure(q.labels(&p) == oracle_labels, || format!("library classes {:?}", q.labels(&p)))?;
    let t = trace_pullback_matrix(&q);
    ensure(t == IntMatrix::from_rows(&oracle.pullback), || {
        format!("pullback {t} vs oracle {:?}", oracle.pullback)
    })?;
    let r = ktheory_report(&p, ClassOrder::Paper).map_err(|e| e.to_string())?;
    ensure(r.classes == ["ba", "ab", "aa"], || format!("descending order {:?}", r.classes))?;
    ensure(r.trace_pullback == IntMatrix::from_rows(&[[0, 1, 1], [1, 0, 1], [1, 0, 0]]), || {
        format!("descending-order pullback {}", r.trace_pullback)
    })?;
    let reference = IntMatrix::from_rows(&[[1, 0], [1, 0], [0, 1]]);
    ensure(same_lattice(&r.k0_basis, &reference), || {
        format!("kernel basis {} does not span ⟨(1,1,0), (0,0,1)⟩", r.k0_basis)
    })?;
    let s = restrict_endomorphism(&r.trace_pullback, &reference).map_err(|e| e.to_string())?;
    ensure(s == IntMatrix::from_rows(&[[1, 1], [1, 0]]), || format!("ψ*₀ in reference basis {s}"))?;
    ensure(r.psi0.det() == s.det() && r.psi0.charpoly() == s.charpoly(), || format!("ψ*₀ = {}", r.psi0))?;
    ensure(r.k0_class == Descriptor::FreeAbelian(2), || format!("K₀ limit {}", r.k0_class))?;
    Ok("oracle and pipeline agree; ψ*₀ ≅ [[1,1],[1,0]], K0 = Z^2".into())
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);

    // (i) Smith normal form
    for _ in 0..SNF_SAMPLES {
        check_snf(&random_matrix(&mut rng, 6, 5))?;
    }
    // (ii) kernels
    for _ in 0..SNF_SAMPLES {
        check_kernel(&random_matrix(&mut rng, 6, 3))?;
    }

    // (iii) kernel invariance and ψ*₁ on random presentations
    let corpus = valid_primitive_corpus(&mut rng, PRESENTATION_SAMPLES);
    let mut hausdorff_from_corpus = 0;
    for raw in &corpus {
        let p = raw.presentation();
        let q = occurring_classes(&p).map_err(|e| format!("{e}\n{}", raw.to_text()))?;
        let oracle = germ_oracle(raw);
        ensure(q.labels(&p) == oracle.classes.iter().map(|&c| raw.label(c)).collect::<Vec<_>>(), || {
            format!("class set disagrees with oracle\n{}", raw.to_text())
        })?;
        ensure(trace_pullback_matrix(&q) == IntMatrix::from_rows(&oracle.pullback), || {
            format!("pullback disagrees with oracle\n{}", raw.to_text())
        })?;
        let delta = boundary_matrix(&p, &q).matrix;
        let k = kernel_basis(&delta);
        let t = trace_pullback_matrix(&q);
        if k.cols() > 0 {
            let image = &t * &k;
            ensure((&delta * &image).is_zero(), || format!("T(ker δ₀) ⊄ ker δ₀\n{}", raw.to_text()))?;
        }
        psi_star_k1(&p, &q).map_err(|e| format!("{e}\n{}", raw.to_text()))?;
        if check_hausdorff_trace(raw)? {
            hausdorff_from_corpus += 1;
        }
    }

    // (iv) limit groups
    let endos = [
        IntMatrix::from_rows(&[[2]]),
        IntMatrix::from_rows(&[[-3]]),
        IntMatrix::from_rows(&[[1, 1], [1, 0]]),
        IntMatrix::from_rows(&[[2, 1], [1, 1]]),
        IntMatrix::from_rows(&[[2, 0], [0, 3]]),
        IntMatrix::from_rows(&[[1, 1], [1, 1]]),
        IntMatrix::from_rows(&[[0, 1, 1], [1, 0, 1], [0, 1, 0]]),
        IntMatrix::from_rows(&[[2, 1, 0], [0, 2, 0], [0, 0, 0]]),
    ];
    for _ in 0..LIMIT_SAMPLES {
        let t = &endos[rng.gen_range(0..endos.len())];
        check_limit_axioms(&mut rng, t)?;
    }

    // (v) Hausdorff instances
    let mut hausdorff = hausdorff_from_corpus;
    for _ in 0..HAUSDORFF_SAMPLES {
        let raw = random_cycle_substitution(&mut rng);
        ensure(check_hausdorff_trace(&raw)?, || format!("cycle instance not Hausdorff\n{}", raw.to_text()))?;
        hausdorff += 1;
    }
    Ok(format!(
        "{SNF_SAMPLES} SNF + {SNF_SAMPLES} kernels, {} presentations, {LIMIT_SAMPLES} limit samples, {hausdorff} Hausdorff instances",
        corpus.len()
    ))
}

fn random_vec(rng: &mut StdRng, n: usize) -> Vec<BigInt> {
    (0..n).map(|_| BigInt::from(rng.gen_range(-6..=6))).collect()
}

fn check_limit_axioms(rng: &mut StdRng, t: &IntMatrix) -> Result<(), String> {
    let g = make_limit(t).map_err(|e| e.to_string())?;
    let r = g.eventual_rank();
    let elt = |rng: &mut StdRng| g.element(rng.gen_range(0..4), random_vec(rng, r)).unwrap();
    let (a, b, c) = (elt(rng), elt(rng), elt(rng));
    let zero = g.zero();
    ensure(&(&a + &b) + &c == &a + &(&b + &c), || format!("associativity fails in lim {t}"))?;
    ensure(&a + &b == &b + &a, || format!("commutativity fails in lim {t}"))?;
    ensure(&a + &zero == a, || format!("identity fails in lim {t}"))?;
    ensure((&a + &(-&a)).is_zero() && &(&a - &b) + &b == a, || format!("inverse fails in lim {t}"))?;
    let again = g.element(a.stage(), a.vector().to_vec()).unwrap();
    ensure(again == a, || format!("canonical form not idempotent in lim {t}"))?;
    let pushed = g.element(a.stage() + 1, g.reduced_endomorphism().mul_vec(a.vector())).unwrap();
    ensure(pushed == a && pushed.element_equal(&a), || format!("(k, v) ≠ (k+1, T′v) in lim {t}"))?;
    Ok(())
}

/// Returns whether `raw` is Hausdorff and connected; when it is, checks the
/// constant degree and τ∘ψ* = n·τ on K₀.
fn check_hausdorff_trace(raw: &RawSubstitution) -> Result<bool, String> {
    let p = raw.presentation();
    let q = occurring_classes(&p).map_err(|e| e.to_string())?;
    let s = match quotient_summary(&p, &q) {
        Ok(s) => s,
        Err(e) => return Err(format!("{e}\n{}", raw.to_text())),
    };
    if !(s.hausdorff.hausdorff && s.connected) {
        return Ok(false);
    }
    let n = s.degree.ok_or_else(|| format!("no degree\n{}", raw.to_text()))?;
    ensure(n >= 2, || format!("degree {n} < 2\n{}", raw.to_text()))?;
    let (basis, _) = k_theory_of_g0(&p, &q);
    let t = trace_pullback_matrix(&q);
    for col in basis.columns() {
        let image = t.mul_vec(&col);
        for (x, y) in image.iter().zip(&col) {
            ensure(*x == BigInt::from(n) * y, || format!("τ∘ψ* ≠ {n}·τ\n{}", raw.to_text()))?;
        }
    }
    Ok(true)
}

fn main() {
    let suite = Instant::now();
    let criteria: [Criterion; 7] = [
        ("1 aab/ab golden values", criterion_1),
        ("2 g̃ table", criterion_2),
        ("3 n-solenoids", criterion_3),
        ("4 trace identities", criterion_4),
        ("5 SFT dimension groups", criterion_5),
        ("6 Fibonacci with closure oracle", criterion_6),
        ("7 property suites", criterion_7),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    let took = suite.elapsed();
    if took < SUITE_LIMIT {
        println!("PASS suite time {took:.1?} < {SUITE_LIMIT:?}");
    } else {
        failed += 1;
        println!("FAIL suite time {took:.1?} ≥ {SUITE_LIMIT:?}");
    }
    if failed > 0 {
        println!("{failed} acceptance check(s) failed");
        std::process::exit(1);
    }
}
