//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances and time budgets are fixed below.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gpsofic_algnum::{
    certify, crossed_product_generators, crossed_product_microstate, diagonal_is_constant,
    liminf_certificate, tensor_microstates, AlgError, CrossedElement, CycInt, CycMatrix,
    RankThreshold,
};
use gpsofic_combinat::{Partition, PartitionTuple, SetPartitions};
use gpsofic_digraphs::{
    colour_quotient, gcc, induced_walk, is_g_reduced, pi_colour, quotient, rho, string_quotient,
    two_edge_connected, ColourGraph, Edge, GccVertex, StringAssignment, TestDigraph,
};
use gpsofic_fixtures::{load_appendix_example, partition_of, tuple_of, QuotientKind, WalkStep};
use gpsofic_freeprob::{
    build_df, crossed_product_presentation, free_difference_quotient, Letter, NcBiPoly, NcPoly,
    Variables, Word,
};
use gpsofic_permmodel::{independence_experiment, two_free_m2_config, TWO_FREE_M2_WORD};
use gpsofic_traffic::{
    build_centered_product_graph, check_inconsistency, expected_trace, expected_trace_brute_force,
    gamma, leafcount_exponent, moebius_injective, trace_tau, trace_tau_injective,
    tuples_above_floor, unnormalized_sum, Complex, DenseMatrix, Labels, Mode, Model, Operand,
    SumKind,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KERNEL_EXPANSION_TOL: f64 = 1e-10;
const BRUTE_FORCE_TOL: f64 = 1e-12;
const MOEBIUS_TOL: f64 = 1e-10;
const FINITE_DIFFERENCE_TOL: f64 = 1e-4;
const FINITE_DIFFERENCE_STEP: f64 = 1e-6;
/// Largest total chain length of an enumerated glued-cycle word; the digraph
/// has `2 * total - 1` vertices.
const MAX_GLUED_CHAIN_TOTAL: usize = 4;
/// Largest number of permutation tuples averaged by the exhaustive oracle.
const BRUTE_FORCE_TUPLES: usize = 50_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_assignment(r: &mut ChaCha8Rng, n_strings: usize, n_colours: usize) -> StringAssignment {
    let mut inc = Vec::new();
    for c in 0..n_colours {
        let mask = r.random_range(1..(1u32 << n_strings));
        for s in 0..n_strings {
            if mask >> s & 1 == 1 {
                inc.push((s, c));
            }
        }
    }
    StringAssignment::new(
        (1..=n_strings).map(|s| s.to_string()).collect(),
        (0..n_colours).map(|c| format!("c{c}")).collect(),
        &inc,
    )
    .unwrap()
}

fn random_digraph(
    r: &mut ChaCha8Rng,
    n: usize,
    n_edges: usize,
    n_colours: usize,
    connected: bool,
) -> TestDigraph {
    loop {
        let edges = (0..n_edges)
            .map(|id| Edge {
                id,
                source: r.random_range(0..n),
                target: r.random_range(0..n),
                colour: r.random_range(0..n_colours),
                label: format!("E{id}"),
            })
            .collect();
        let t = TestDigraph::new(n, edges).unwrap();
        if !connected || t.is_connected() {
            return t;
        }
    }
}

fn random_complex(r: &mut ChaCha8Rng) -> Complex {
    Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

fn random_matrix(r: &mut ChaCha8Rng, d: usize) -> DenseMatrix {
    DenseMatrix::from_fn(d, d, |_, _| random_complex(r))
}

/// Edge labels plus random diagonal loops on some vertices when `loops`.
fn random_labels(
    r: &mut ChaCha8Rng,
    t: &mut TestDigraph,
    a: &StringAssignment,
    n: usize,
    loops: bool,
) -> Labels {
    let mut labels = Labels::new();
    for e in t.edges() {
        let support = a.strings_of(e.colour).to_vec();
        let d = n.pow(support.len() as u32);
        labels.insert(
            e.label.clone(),
            Operand::new(support, random_matrix(r, d)).unwrap(),
        );
    }
    if loops {
        let all: Vec<usize> = (0..a.n_strings()).collect();
        let d = n.pow(a.n_strings() as u32);
        for v in 0..t.n_vertices() {
            if r.random_bool(0.6) {
                let h = format!("L{v}");
                let diag = nalgebra::DVector::from_fn(d, |_, _| random_complex(r));
                labels.insert(
                    h.clone(),
                    Operand::new(all.clone(), DenseMatrix::from_diagonal(&diag)).unwrap(),
                );
                t.set_loop_labels(v, vec![h]);
            }
        }
    }
    labels
}

fn random_permutations(r: &mut ChaCha8Rng, a: &StringAssignment, n: usize) -> Vec<Vec<usize>> {
    (0..a.n_colours())
        .map(|c| {
            let mut p: Vec<usize> = (0..n.pow(a.strings_of(c).len() as u32)).collect();
            p.shuffle(r);
            p
        })
        .collect()
}

fn relative_gap(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn all_tuples(n_vertices: usize, n_strings: usize) -> Vec<PartitionTuple> {
    let parts: Vec<Partition> = SetPartitions::new(n_vertices).collect();
    let mut out: Vec<Vec<Partition>> = vec![Vec::new()];
    for _ in 0..n_strings {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                parts.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|v| PartitionTuple::new(v).unwrap())
        .collect()
}

fn names(t: &TestDigraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| t.vertex_names()[v].clone()).collect()
}

fn owned(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| (*s).to_string()).collect()
}

fn position(list: &[String], name: &str) -> usize {
    list.iter().position(|x| x == name).unwrap()
}

fn floor_tuple(t: &TestDigraph, a: &StringAssignment) -> PartitionTuple {
    PartitionTuple::new((0..a.n_strings()).map(|s| rho(t, a, s).unwrap()).collect()).unwrap()
}

fn appendix_golden() -> Outcome {
    let (_, a, t, e) = load_appendix_example().map_err(|e| e.to_string())?;
    let s_idx = |s: &str| position(a.strings(), s);
    let c_idx = |c: &str| position(a.colours(), c);
    for (s, blocks) in &e.rho {
        ensure!(
            rho(&t, &a, s_idx(s)).unwrap() == partition_of(&t, blocks),
            "floor of string {s}"
        );
    }
    let pi = floor_tuple(&t, &a);
    for (c, blocks) in &e.pi_colour {
        ensure!(
            pi_colour(&pi, &a, c_idx(c)).unwrap() == partition_of(&t, blocks),
            "colour partition {c}"
        );
    }
    for shape in &e.quotients {
        let (q, p) = match shape.kind {
            QuotientKind::Colour(c) => (
                colour_quotient(&t, &a, &pi, c_idx(c)).unwrap(),
                pi_colour(&pi, &a, c_idx(c)).unwrap(),
            ),
            QuotientKind::String(s) => (
                string_quotient(&t, &a, &pi, s_idx(s)).unwrap(),
                pi.get(s_idx(s)).clone(),
            ),
        };
        let got: Vec<Vec<String>> = p.blocks().iter().map(|b| names(&t, b)).collect();
        let want: Vec<Vec<String>> = shape.vertices.iter().map(|b| owned(b)).collect();
        ensure!(got == want, "{:?}: vertex blocks", shape.kind);
        let mut got: Vec<(String, usize, usize)> = q
            .edges()
            .iter()
            .map(|x| (x.label.clone(), x.source, x.target))
            .collect();
        let mut want: Vec<(String, usize, usize)> = shape
            .edges
            .iter()
            .map(|&(l, s, d)| (l.to_string(), s, d))
            .collect();
        got.sort();
        want.sort();
        ensure!(
            q.n_vertices() == shape.vertices.len() && got == want,
            "{:?}: edges",
            shape.kind
        );
    }
    for want in &e.gccs {
        let g = gcc(&t, &a, &pi, s_idx(want.string)).unwrap();
        let mut got = BTreeMap::new();
        for x in &g.edges {
            *got.entry((
                a.colours()[x.colour].clone(),
                names(&t, &g.components[x.component].vertices),
                names(&t, &g.quotient_vertices[x.quotient_vertex]),
            ))
            .or_insert(0) += 1;
        }
        let expected: BTreeMap<_, _> = want
            .edges
            .iter()
            .map(|m| {
                (
                    (
                        m.colour.to_string(),
                        owned(&m.component),
                        owned(&m.quotient_vertex),
                    ),
                    m.multiplicity,
                )
            })
            .collect();
        ensure!(
            got == expected,
            "GCC multiplicities on string {}",
            want.string
        );
    }
    for (s, tree) in &e.rho_trees {
        ensure!(
            gcc(&t, &a, &pi, s_idx(s)).unwrap().is_tree() == *tree,
            "tree verdict at the floor, string {s}"
        );
    }
    let sigma = tuple_of(&t, &a, &e.sigma);
    for s in 0..a.n_strings() {
        ensure!(
            gcc(&t, &a, &sigma, s).unwrap().is_tree(),
            "coarser tuple: string {s} is not a tree"
        );
    }
    let ids: Vec<usize> = e
        .walk
        .iter()
        .map(|l| t.edges().iter().find(|x| x.label == *l).unwrap().id)
        .collect();
    for want in &e.walks {
        let (g, walk) = induced_walk(&t, &a, &pi, s_idx(want.string), &ids).unwrap();
        let got: Vec<(Option<String>, Vec<String>)> = walk
            .vertices
            .iter()
            .map(|v| match *v {
                GccVertex::Quotient(q) => (None, names(&t, &g.quotient_vertices[q])),
                GccVertex::Component(k) => (
                    Some(a.colours()[g.components[k].colour].clone()),
                    names(&t, &g.components[k].vertices),
                ),
            })
            .collect();
        let expected: Vec<(Option<String>, Vec<String>)> = want
            .vertices
            .iter()
            .map(|w| match w {
                WalkStep::Quotient(v) => (None, owned(v)),
                WalkStep::Component(c, v) => (Some((*c).to_string()), owned(v)),
            })
            .collect();
        ensure!(got == expected, "walk vertices on string {}", want.string);
        let got_edges: Vec<(String, Vec<String>)> = walk
            .edges
            .iter()
            .map(|&k| {
                (
                    a.colours()[g.edges[k].colour].clone(),
                    names(&t, &g.edges[k].block),
                )
            })
            .collect();
        let want_edges: Vec<(String, Vec<String>)> = want
            .edges
            .iter()
            .map(|(c, b)| ((*c).to_string(), owned(b)))
            .collect();
        ensure!(
            got_edges == want_edges,
            "walk edges on string {}",
            want.string
        );
    }
    Ok(format!(
        "{} quotients, {} GCCs, {} walks",
        e.quotients.len(),
        e.gccs.len(),
        e.walks.len()
    ))
}

fn kernel_expansion() -> Outcome {
    let mut r = rng(11);
    let (mut worst, mut vanishing) = (0.0f64, 0usize);
    let rounds = 24;
    for round in 0..rounds {
        let n_strings = 1 + round % 2;
        let n_colours = 1 + (round / 2) % 2;
        let n = 2 + (round / 4) % 2;
        let a = random_assignment(&mut r, n_strings, n_colours);
        let nv: usize = r.random_range(1..=4);
        let ne = r.random_range(0..=4);
        let mut t = random_digraph(&mut r, nv, ne, n_colours, false);
        let labels = random_labels(&mut r, &mut t, &a, n, true);
        let perms = random_permutations(&mut r, &a, n);
        let model = Model::new(&a, n, &labels).with_permutations(&perms);
        let total = trace_tau(&t, &model).unwrap();
        let floors: Vec<Partition> = (0..n_strings).map(|s| rho(&t, &a, s).unwrap()).collect();
        let mut sum = Complex::new(0.0, 0.0);
        for pi in all_tuples(nv, n_strings) {
            let g = gamma(&t, &model, &pi).unwrap();
            if !(0..n_strings).all(|s| floors[s].leq(pi.get(s)).unwrap()) {
                ensure!(
                    g == Complex::new(0.0, 0.0),
                    "round {round}: nonzero term at {pi}"
                );
                vanishing += 1;
            }
            sum += g;
        }
        worst = worst.max(relative_gap(sum, total));
    }
    ensure!(worst <= KERNEL_EXPANSION_TOL, "relative gap {worst:e}");
    Ok(format!(
        "{rounds} digraphs, max relative gap {worst:.1e}, {vanishing} terms below the floor are 0"
    ))
}

fn brute_force_tuples(a: &StringAssignment, n: usize) -> Option<usize> {
    (0..a.n_colours()).try_fold(1usize, |acc, c| {
        let m = n.pow(a.strings_of(c).len() as u32);
        (1..=m).try_fold(acc, |x, k| x.checked_mul(k))
    })
}

fn expected_moment_oracle() -> Outcome {
    let n: usize = 2;
    let mut cases: Vec<(String, StringAssignment, TestDigraph, Labels)> = Vec::new();
    let mut r = rng(17);
    let (_, a, mut t, _) = load_appendix_example().map_err(|e| e.to_string())?;
    let fits = |a: &StringAssignment| {
        n.pow(a.n_strings() as u32) <= 16
            && brute_force_tuples(a, n).is_some_and(|k| k <= BRUTE_FORCE_TUPLES)
    };
    let mut skipped = Vec::new();
    if fits(&a) {
        let labels = random_labels(&mut r, &mut t, &a, n, false);
        cases.push(("worked example".into(), a, t, labels));
    } else {
        skipped.push("worked example");
    }
    while cases.len() < 40 {
        let n_strings = r.random_range(1..=4);
        let n_colours = r.random_range(1..=3);
        let a = random_assignment(&mut r, n_strings, n_colours);
        if !fits(&a) {
            continue;
        }
        let nv: usize = r.random_range(1..=3);
        let ne = r.random_range(nv - 1..=3).max(1);
        let mut t = random_digraph(&mut r, nv, ne, n_colours, true);
        let loops = cases.len() % 2 == 1;
        let labels = random_labels(&mut r, &mut t, &a, n, loops);
        cases.push((format!("random {}", cases.len()), a, t, labels));
    }
    let mut worst = 0.0f64;
    for (name, a, t, labels) in &cases {
        let model = Model::new(a, n, labels);
        let exact = expected_trace(t, &model, Mode::Exact)
            .map_err(|e| format!("{name}: {e}"))?
            .value;
        let brute = expected_trace_brute_force(t, &model, BRUTE_FORCE_TUPLES)
            .map_err(|e| format!("{name}: {e}"))?;
        let gap = (exact - brute).norm() / (1.0 + brute.norm());
        ensure!(gap <= BRUTE_FORCE_TOL, "{name}: {exact} vs {brute}");
        worst = worst.max(gap);
    }
    let mut detail = format!("{} fixtures at N = 2, max gap {worst:.1e}", cases.len());
    if !skipped.is_empty() {
        detail += &format!("; over the tuple budget: {}", skipped.join(", "));
    }
    Ok(detail)
}

fn check_leafcount(t: &TestDigraph, a: &StringAssignment, name: &str) -> Result<usize, String> {
    let mut equal = 0;
    for pi in tuples_above_floor(t, a).unwrap() {
        let rep = leafcount_exponent(t, a, &pi).unwrap();
        ensure!(rep.twice_exponent <= 0, "{name} {pi}: {rep:?}");
        ensure!(
            (rep.twice_exponent == 0) == rep.all_trees,
            "{name} {pi}: {rep:?}"
        );
        if rep.twice_exponent == 0 {
            ensure!(rep.leaves_match_components, "{name} {pi}: {rep:?}");
            equal += 1;
        }
    }
    Ok(equal)
}

fn leafcount() -> Outcome {
    let (_, a, t, _) = load_appendix_example().map_err(|e| e.to_string())?;
    let mut equal = check_leafcount(&t, &a, "worked example")?;
    let mut r = rng(31);
    let mut found = 0;
    while found < 50 {
        let nv = r.random_range(1..=5);
        let n_colours = r.random_range(1..=3);
        let ne = r.random_range(nv..=nv + 3);
        let t = random_digraph(&mut r, nv, ne, n_colours, true);
        if !two_edge_connected(&t).cut_edges.is_empty() {
            continue;
        }
        let ns = r.random_range(1..=2);
        let a = random_assignment(&mut r, ns, n_colours);
        equal += check_leafcount(&t, &a, &format!("random {found}"))?;
        found += 1;
    }
    Ok(format!(
        "worked example + {found} two-edge-connected digraphs, {equal} equality cases"
    ))
}

fn glued_cycle_inconsistency() -> Outcome {
    let graph = |names: &[&str], edges: &[(usize, usize)]| {
        ColourGraph::new(names.iter().map(|s| (*s).to_string()).collect(), edges).unwrap()
    };
    let assignment = |strings: usize, colours: &[&str], inc: &[(usize, usize)]| {
        StringAssignment::new(
            (1..=strings).map(|s| s.to_string()).collect(),
            colours.iter().map(|s| (*s).to_string()).collect(),
            inc,
        )
        .unwrap()
    };
    let instances = [
        (
            graph(&["a", "b"], &[]),
            assignment(1, &["a", "b"], &[(0, 0), (0, 1)]),
        ),
        (
            graph(&["a", "b"], &[]),
            assignment(2, &["a", "b"], &[(0, 0), (1, 0), (1, 1)]),
        ),
        (
            graph(&["a", "b", "c"], &[(0, 2)]),
            assignment(2, &["a", "b", "c"], &[(0, 0), (0, 1), (1, 1), (1, 2)]),
        ),
    ];
    let (mut words, mut tuples) = (0usize, 0usize);
    for (g, a) in &instances {
        a.validate_for(g).map_err(|e| e.to_string())?;
        let m = a.n_colours();
        for k in [2usize, 3] {
            for code in 0..(2 * m).pow(k as u32) {
                let mut rest = code;
                let word: Vec<(usize, usize)> = (0..k)
                    .map(|_| {
                        let x = rest % (2 * m);
                        rest /= 2 * m;
                        (x / 2, 1 + x % 2)
                    })
                    .collect();
                let colours: Vec<usize> = word.iter().map(|w| w.0).collect();
                let total: usize = word.iter().map(|w| w.1).sum();
                if total > MAX_GLUED_CHAIN_TOTAL || !is_g_reduced(&colours, g) {
                    continue;
                }
                words += 1;
                let glued = build_centered_product_graph(&word, false).unwrap();
                for pi in tuples_above_floor(&glued.digraph, a).unwrap() {
                    tuples += 1;
                    ensure!(
                        !check_inconsistency(&glued, a, &pi).unwrap(),
                        "word {word:?}: tuple {pi} satisfies all three conditions"
                    );
                }
            }
        }
    }
    Ok(format!(
        "{words} reduced words, {tuples} tuples, no exceptions"
    ))
}

fn permutation_model_decay() -> Outcome {
    let cfg = two_free_m2_config().map_err(|e| e.to_string())?;
    ensure!(cfg.trials >= 20, "only {} trials", cfg.trials);
    ensure!(
        cfg.n_schedule == [4, 8, 16, 32],
        "schedule {:?}",
        cfg.n_schedule
    );
    let report = independence_experiment(&cfg).map_err(|e| e.to_string())?;
    let m = report.medians(TWO_FREE_M2_WORD);
    ensure!(m.len() == 4, "medians {m:?}");
    ensure!(
        m.windows(2).all(|w| w[1] < w[0]),
        "medians not strictly decreasing: {m:?}"
    );
    ensure!(
        m[3] < 0.25 * m[0],
        "N=32 median {} not below a quarter of {}",
        m[3],
        m[0]
    );
    Ok(format!("{} trials, medians {m:?}", cfg.trials))
}

fn moebius_inversion() -> Outcome {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    let rounds = 30;
    for round in 0..rounds {
        let a = random_assignment(&mut r, 1 + round % 2, 2);
        let n = 2;
        let nv: usize = r.random_range(1..=4);
        let ne = r.random_range(nv.saturating_sub(1)..=4);
        let mut t = random_digraph(&mut r, nv, ne, 2, round % 3 != 0);
        let labels = random_labels(&mut r, &mut t, &a, n, round % 2 == 0);
        let model = Model::new(&a, n, &labels);
        let all = unnormalized_sum(&t, &model, SumKind::All).unwrap();
        let mut forward = Complex::new(0.0, 0.0);
        for p in SetPartitions::new(nv) {
            forward +=
                unnormalized_sum(&quotient(&t, &p).unwrap(), &model, SumKind::Injective).unwrap();
        }
        worst = worst.max(relative_gap(forward, all));
        let inj = unnormalized_sum(&t, &model, SumKind::Injective).unwrap();
        worst = worst.max(relative_gap(moebius_injective(&t, &model).unwrap(), inj));
        if t.is_connected() {
            let tau = trace_tau(&t, &model).unwrap();
            let mut normalized = Complex::new(0.0, 0.0);
            for p in SetPartitions::new(nv) {
                normalized += trace_tau_injective(&quotient(&t, &p).unwrap(), &model).unwrap();
            }
            worst = worst.max(relative_gap(normalized, tau));
        }
    }
    ensure!(worst <= MOEBIUS_TOL, "relative gap {worst:e}");
    Ok(format!("{rounds} digraphs, max relative gap {worst:.1e}"))
}

fn random_cyc_matrix(r: &mut ChaCha8Rng, n: usize, m: u32) -> CycMatrix {
    CycMatrix::from_fn(n, n, |_, _| {
        let coeffs: Vec<i64> = (0..m).map(|_| r.random_range(-2..=2)).collect();
        CycInt::from_coeffs(m, &coeffs).unwrap()
    })
    .unwrap()
}

type PolyFn = Box<dyn Fn(&[CycMatrix]) -> Result<CycMatrix, AlgError>>;

fn determinant_certificates() -> Outcome {
    let th = RankThreshold::default();
    let mut r = rng(2024);
    let mut violations = Vec::new();
    for trial in 0..100 {
        let m = [1u32, 2, 3, 4, 6][trial % 5];
        let n = r.random_range(1..=6);
        let mut a = random_cyc_matrix(&mut r, n, m);
        if trial % 4 == 3 && n > 1 {
            let drop_last =
                CycMatrix::from_fn(n, n, |i, j| CycInt::from_int((i == j && i + 1 != n) as i64))
                    .unwrap();
            a = &a * &drop_last;
        }
        let c = certify(&a, th).map_err(|e| e.to_string())?;
        if !c.holds {
            violations.push(trial);
        }
    }
    ensure!(violations.is_empty(), "violations at trials {violations:?}");
    let mut entries = 0;
    for n in [2u32, 3] {
        let (u, v) = crossed_product_generators(n).map_err(|e| e.to_string())?;
        let sequence: Vec<Vec<CycMatrix>> = (1..=4)
            .map(|k| {
                tensor_microstates(&[u.clone(), v.clone()], &[CycMatrix::identity(k)]).unwrap()[..2]
                    .to_vec()
            })
            .collect();
        let zeta_inv = CycInt::root_of_unity(n, -1).unwrap();
        let power_sum = move |x: &CycMatrix| -> Result<CycMatrix, AlgError> {
            let mut acc = CycMatrix::identity(x.rows());
            let mut p = CycMatrix::identity(x.rows());
            for _ in 1..n {
                p = p.try_mul(x)?;
                acc = acc.try_add(&p)?;
            }
            Ok(acc)
        };
        // n times the spectral projections of u and v, and the defining relations
        let polys: Vec<(&str, PolyFn)> = vec![
            ("projection of u", Box::new(move |x| power_sum(&x[0]))),
            ("projection of v", Box::new(move |x| power_sum(&x[1]))),
            (
                "product of projections",
                Box::new(move |x| power_sum(&x[0])?.try_mul(&power_sum(&x[1])?)),
            ),
            (
                "u - 1",
                Box::new(|x| x[0].try_sub(&CycMatrix::identity(x[0].rows()))),
            ),
            (
                "uv - vu",
                Box::new(|x| x[0].try_mul(&x[1])?.try_sub(&x[1].try_mul(&x[0])?)),
            ),
            (
                "vu - zeta^-1 uv",
                Box::new(move |x| {
                    x[1].try_mul(&x[0])?
                        .try_sub(&x[0].try_mul(&x[1])?.scale(&zeta_inv)?)
                }),
            ),
        ];
        for (name, p) in polys {
            let table = liminf_certificate(&sequence, p, th).map_err(|e| e.to_string())?;
            for row in &table.rows {
                ensure!(
                    row.certificate.holds,
                    "n={n} {name} k={}: {:?}",
                    row.index + 1,
                    row.certificate
                );
                entries += 1;
            }
        }
    }
    Ok(format!(
        "100 random matrices, no violations; {entries} table entries above their bounds"
    ))
}

fn crossed_product_exactness() -> Outcome {
    let mut r = rng(3);
    for n in [2u32, 3, 4] {
        let gens = crossed_product_microstate(n).map_err(|e| e.to_string())?;
        ensure!(
            gens.len() == (n * n) as usize,
            "n={n}: {} matrices",
            gens.len()
        );
        let roots: Vec<CycInt> = (0..n as i64)
            .map(|k| CycInt::root_of_unity(n, k).unwrap())
            .collect();
        let dim = (n * n) as usize;
        for (idx, x) in gens.iter().enumerate() {
            for i in 0..dim {
                for j in 0..dim {
                    let e = x.get(i, j);
                    ensure!(e.is_zero() || roots.contains(&e), "n={n}: entry {e}");
                }
            }
            let tau = if idx == 0 {
                CycInt::one()
            } else {
                CycInt::zero()
            };
            ensure!(
                x.diagonal().iter().all(|d| *d == tau) && diagonal_is_constant(x),
                "n={n}: diagonal of matrix {idx}"
            );
        }
        let (u, v) = crossed_product_generators(n).map_err(|e| e.to_string())?;
        let one = CycMatrix::identity(dim);
        let pow = |x: &CycMatrix, e: u32| (0..e).fold(one.clone(), |acc, _| &acc * x);
        ensure!(pow(&u, n) == one && pow(&v, n) == one, "n={n}: order");
        ensure!(
            &u * &u.adjoint() == one && &v * &v.adjoint() == one,
            "n={n}: unitarity"
        );
        for chi in 0..n {
            for g in 0..n {
                let lhs = &(&pow(&v, g) * &pow(&u, chi)) * &pow(&v, g).adjoint();
                let rhs = pow(&u, chi)
                    .scale(&CycInt::root_of_unity(n, -((chi * g) as i64)).unwrap())
                    .unwrap();
                ensure!(lhs == rhs, "n={n}: action at chi={chi} g={g}");
                ensure!(
                    gens[(chi * n + g) as usize] == &pow(&u, chi) * &pow(&v, g),
                    "n={n}: basis element chi={chi} g={g}"
                );
            }
        }
        let size = CycInt::from_int(dim as i64);
        for _ in 0..200 {
            let mut word = CrossedElement::identity(n);
            let mut m = one.clone();
            for _ in 0..r.random_range(1..=6) {
                let (chi, g) = (r.random_range(0..n), r.random_range(0..n));
                let mut e = CrossedElement::new(n, 0, chi as i64, g as i64);
                let mut x = gens[(chi * n + g) as usize].clone();
                if r.random_bool(0.5) {
                    e = e.adjoint();
                    x = x.adjoint();
                }
                word = word.mul(&e);
                m = &m * &x;
            }
            ensure!(m.trace() == &word.trace() * &size, "n={n}: monomial trace");
            ensure!(diagonal_is_constant(&m), "n={n}: monomial diagonal");
        }
    }
    Ok("n = 2, 3, 4: relations, entries, diagonals and 600 monomial traces exact".into())
}

fn random_poly(r: &mut ChaCha8Rng, max_degree: usize, terms: usize) -> NcPoly {
    let mut p = NcPoly::zero();
    for _ in 0..terms {
        let word: Word = (0..r.random_range(0..=max_degree))
            .map(|_| Letter::new(r.random_range(0..2)))
            .collect();
        let c = if r.random_bool(0.3) {
            CycInt::from_coeffs(3, &[r.random_range(-2..=2), r.random_range(-2..=2)]).unwrap()
        } else {
            CycInt::from_int(r.random_range(-3..=3))
        };
        p.add_term(word, c);
    }
    p
}

fn random_hermitian(r: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
    });
    (&a + a.adjoint()).unscale(2.0 * n as f64)
}

fn free_difference_quotients() -> Outcome {
    let mut r = rng(11);
    let one = NcPoly::one();
    for case in 0..200 {
        // products of two factors of degree at most 2 keep the total at most 4
        let p = random_poly(&mut r, 2, 3);
        let q = random_poly(&mut r, 2, 3);
        ensure!(p.mul(&q).degree() <= 4, "degree");
        for i in 0..2 {
            let lhs = free_difference_quotient(&p.mul(&q), i).unwrap();
            let rhs = free_difference_quotient(&p, i)
                .unwrap()
                .act(&one, &q)
                .add(&free_difference_quotient(&q, i).unwrap().act(&p, &one));
            ensure!(
                lhs == rhs,
                "case {case}: derivation identity fails for {p} and {q}"
            );
        }
    }
    let h = FINITE_DIFFERENCE_STEP;
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let p = random_poly(&mut r, 4, 4);
        let x = vec![random_hermitian(&mut r, 3), random_hermitian(&mut r, 3)];
        let e = random_hermitian(&mut r, 3);
        for i in 0..2 {
            let mut moved = x.clone();
            moved[i] += &e * Complex64::new(h, 0.0);
            let numeric = (p.evaluate(&moved).unwrap() - p.evaluate(&x).unwrap()).unscale(h);
            let exact = free_difference_quotient(&p, i)
                .unwrap()
                .contract(&x, &e)
                .unwrap();
            worst = (numeric - exact)
                .iter()
                .map(|z| z.norm())
                .fold(worst, f64::max);
        }
    }
    ensure!(
        worst <= FINITE_DIFFERENCE_TOL,
        "finite-difference gap {worst:e}"
    );
    let vars = Variables::self_adjoint(1);
    let s = NcPoly::var(0);
    let square = NcPoly::parse("s1^2 - 1", &vars).unwrap();
    let df = build_df(std::slice::from_ref(&square), 1).unwrap();
    ensure!(
        (df.rows(), df.cols()) == (2, 1),
        "shape {}x{}",
        df.rows(),
        df.cols()
    );
    ensure!(
        df.entries[0][0] == NcBiPoly::elementary(&s, &one).sub(&NcBiPoly::elementary(&one, &s)),
        "commutator row is {}",
        df.entries[0][0]
    );
    ensure!(
        df.entries[1][0] == NcBiPoly::elementary(&one, &s).add(&NcBiPoly::elementary(&s, &one)),
        "relation row is {}",
        df.entries[1][0]
    );
    for n in [2u32, 3] {
        let p = crossed_product_presentation(n).map_err(|e| e.to_string())?;
        let df = build_df(&p.relations, 4).map_err(|e| e.to_string())?;
        ensure!(
            (df.rows(), df.cols()) == (p.relations.len() + 1, 4),
            "n={n}: shape {}x{}",
            df.rows(),
            df.cols()
        );
    }
    Ok(format!(
        "identity exact on 400 products, finite-difference gap {worst:.1e}, forced rows match"
    ))
}

/// Runs every shipped config twice, single- and multi-threaded, comparing
/// all written bytes.
fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_gpsofic");
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut entries: Vec<_> = std::fs::read_dir(&configs)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    entries.sort();
    let snapshot = |out: &Path| -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<_> = std::fs::read_dir(out.parent().unwrap())
            .unwrap()
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        files.sort();
        files
            .into_iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(&p).unwrap(),
                )
            })
            .collect()
    };
    for cfg in &entries {
        let text = std::fs::read_to_string(cfg).map_err(|e| e.to_string())?;
        let kind = text
            .lines()
            .find_map(|l| l.strip_prefix("kind = "))
            .map(|k| k.trim().trim_matches('"').to_string())
            .ok_or_else(|| format!("{}: no kind", cfg.display()))?;
        let stem = cfg.file_stem().unwrap().to_string_lossy().into_owned();
        let ext = if kind == "assign-strings" {
            "json"
        } else {
            "csv"
        };
        let mut runs = Vec::new();
        for threads in ["1", "4"] {
            let sub = dir.path().join(format!("{stem}-{threads}"));
            std::fs::create_dir_all(&sub).map_err(|e| e.to_string())?;
            // same relative output name in both runs so the manifests agree
            let out = sub.join(format!("{stem}.{ext}"));
            let status = Command::new(bin)
                .current_dir(&sub)
                .env("GPSOFIC_THREADS", threads)
                .args([kind.as_str(), "--config"])
                .arg(cfg)
                .args(["--out", &format!("{stem}.{ext}")])
                .output()
                .map_err(|e| e.to_string())?;
            ensure!(
                status.status.success(),
                "{stem} with {threads} threads: {}",
                String::from_utf8_lossy(&status.stderr)
            );
            runs.push((snapshot(&out), status.stdout));
        }
        ensure!(
            runs[0] == runs[1],
            "{stem}: outputs differ between thread counts"
        );
    }
    Ok(format!(
        "{} configs byte-identical at 1 and 4 threads",
        entries.len()
    ))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            name: "worked-example golden suite",
            budget: secs(1),
            run: appendix_golden,
        },
        Criterion {
            name: "partition expansion",
            budget: secs(10),
            run: kernel_expansion,
        },
        Criterion {
            name: "expected-moment oracle",
            budget: secs(60),
            run: expected_moment_oracle,
        },
        Criterion {
            name: "leafcount inequality",
            budget: secs(120),
            run: leafcount,
        },
        Criterion {
            name: "glued-cycle inconsistency",
            budget: secs(120),
            run: glued_cycle_inconsistency,
        },
        Criterion {
            name: "permutation-model decay",
            budget: secs(300),
            run: permutation_model_decay,
        },
        Criterion {
            name: "Moebius inversion",
            budget: secs(10),
            run: moebius_inversion,
        },
        Criterion {
            name: "determinant certificates",
            budget: secs(60),
            run: determinant_certificates,
        },
        Criterion {
            name: "crossed-product microstates",
            budget: secs(10),
            run: crossed_product_exactness,
        },
        Criterion {
            name: "free difference quotient",
            budget: secs(10),
            run: free_difference_quotients,
        },
        Criterion {
            name: "CLI determinism",
            budget: secs(600),
            run: cli_determinism,
        },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let result = result.and_then(|d| {
            if elapsed > c.budget {
                Err(format!("{d}; took {elapsed:.1?}, budget {:?}", c.budget))
            } else {
                Ok(d)
            }
        });
        match result {
            Ok(d) => println!("PASS {:>2} {} ({elapsed:.2?}): {d}", i + 1, c.name),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {} ({elapsed:.2?}): {d}", i + 1, c.name);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
