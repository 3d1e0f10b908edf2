#![allow(dead_code)]

use gpsofic_digraphs::{Edge, StringAssignment, TestDigraph};
use gpsofic_traffic::{all_permutations, Complex, DenseMatrix, Labels, Operand};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random assignment of up to `max_colours` colours to nonempty subsets of
/// `n_strings` strings.
pub fn random_assignment(
    r: &mut ChaCha8Rng,
    n_strings: usize,
    n_colours: usize,
) -> StringAssignment {
    let strings = (1..=n_strings).map(|s| s.to_string()).collect();
    let colours = (0..n_colours).map(|c| format!("c{c}")).collect();
    let mut inc = Vec::new();
    for c in 0..n_colours {
        let mask = r.random_range(1..(1u32 << n_strings));
        for s in 0..n_strings {
            if mask >> s & 1 == 1 {
                inc.push((s, c));
            }
        }
    }
    StringAssignment::new(strings, colours, &inc).unwrap()
}

pub fn random_digraph(
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

pub fn random_complex(r: &mut ChaCha8Rng) -> Complex {
    Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn random_matrix(r: &mut ChaCha8Rng, d: usize) -> DenseMatrix {
    DenseMatrix::from_fn(d, d, |_, _| random_complex(r))
}

/// Labels for every edge of `t` and a random diagonal loop on some vertices.
pub fn random_labels(
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

pub fn random_permutations(r: &mut ChaCha8Rng, a: &StringAssignment, n: usize) -> Vec<Vec<usize>> {
    (0..a.n_colours())
        .map(|c| {
            let m = n.pow(a.strings_of(c).len() as u32);
            let mut p: Vec<usize> = (0..m).collect();
            rand::seq::SliceRandom::shuffle(p.as_mut_slice(), r);
            p
        })
        .collect()
}

pub fn pick<'a, T>(r: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(r).unwrap()
}

pub fn perms_of(m: usize) -> Vec<Vec<usize>> {
    all_permutations(m)
}

pub fn close(a: Complex, b: Complex, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + a.norm().max(b.norm()))
}
