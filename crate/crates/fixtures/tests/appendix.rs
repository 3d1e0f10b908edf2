use std::collections::BTreeMap;

use gpsofic_combinat::PartitionTuple;
use gpsofic_digraphs::{
    colour_quotient, gcc, induced_walk, pi_colour, rho, string_quotient, Gcc, GccVertex,
    StringAssignment, TestDigraph,
};
use gpsofic_fixtures::{load_appendix_example, partition_of, tuple_of, QuotientKind, WalkStep};

fn names(t: &TestDigraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| t.vertex_names()[v].clone()).collect()
}

fn owned(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| (*s).to_string()).collect()
}

fn string_index(a: &StringAssignment, s: &str) -> usize {
    a.strings().iter().position(|x| x == s).unwrap()
}

fn colour_index(a: &StringAssignment, c: &str) -> usize {
    a.colours().iter().position(|x| x == c).unwrap()
}

fn rho_tuple(t: &TestDigraph, a: &StringAssignment) -> PartitionTuple {
    PartitionTuple::new((0..a.n_strings()).map(|s| rho(t, a, s).unwrap()).collect()).unwrap()
}

#[test]
fn floors_match() {
    let (_, a, t, e) = load_appendix_example().unwrap();
    for (s, blocks) in &e.rho {
        assert_eq!(
            rho(&t, &a, string_index(&a, s)).unwrap(),
            partition_of(&t, blocks),
            "string {s}"
        );
    }
}

#[test]
fn colour_partitions_match() {
    let (_, a, t, e) = load_appendix_example().unwrap();
    let pi = rho_tuple(&t, &a);
    for (c, blocks) in &e.pi_colour {
        assert_eq!(
            pi_colour(&pi, &a, colour_index(&a, c)).unwrap(),
            partition_of(&t, blocks),
            "colour {c}"
        );
    }
}

#[test]
fn all_six_quotients_match() {
    let (_, a, t, e) = load_appendix_example().unwrap();
    let pi = rho_tuple(&t, &a);
    for shape in &e.quotients {
        let (q, p) = match shape.kind {
            QuotientKind::Colour(c) => {
                let ci = colour_index(&a, c);
                (
                    colour_quotient(&t, &a, &pi, ci).unwrap(),
                    pi_colour(&pi, &a, ci).unwrap(),
                )
            }
            QuotientKind::String(s) => {
                let si = string_index(&a, s);
                (
                    string_quotient(&t, &a, &pi, si).unwrap(),
                    pi.get(si).clone(),
                )
            }
        };
        let got_blocks: Vec<Vec<String>> = p.blocks().iter().map(|b| names(&t, b)).collect();
        let want_blocks: Vec<Vec<String>> = shape.vertices.iter().map(|b| owned(b)).collect();
        assert_eq!(got_blocks, want_blocks, "{:?}", shape.kind);
        assert_eq!(q.n_vertices(), shape.vertices.len());
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
        assert_eq!(got, want, "{:?}", shape.kind);
    }
}

fn multiplicities(
    t: &TestDigraph,
    a: &StringAssignment,
    g: &Gcc,
) -> BTreeMap<(String, Vec<String>, Vec<String>), usize> {
    let mut out = BTreeMap::new();
    for e in &g.edges {
        let key = (
            a.colours()[e.colour].clone(),
            names(t, &g.components[e.component].vertices),
            names(t, &g.quotient_vertices[e.quotient_vertex]),
        );
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

#[test]
fn gcc_multiplicities_match() {
    let (_, a, t, e) = load_appendix_example().unwrap();
    let pi = rho_tuple(&t, &a);
    for want in &e.gccs {
        let g = gcc(&t, &a, &pi, string_index(&a, want.string)).unwrap();
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
        assert_eq!(
            multiplicities(&t, &a, &g),
            expected,
            "string {}",
            want.string
        );
    }
}

#[test]
fn tree_claims_hold() {
    let (_, a, t, e) = load_appendix_example().unwrap();
    let pi = rho_tuple(&t, &a);
    for (s, tree) in &e.rho_trees {
        assert_eq!(
            gcc(&t, &a, &pi, string_index(&a, s)).unwrap().is_tree(),
            *tree,
            "floor, string {s}"
        );
    }
    let sigma = tuple_of(&t, &a, &e.sigma);
    for s in 0..a.n_strings() {
        assert!(
            gcc(&t, &a, &sigma, s).unwrap().is_tree(),
            "sigma, string {s}"
        );
    }
}

#[test]
fn induced_walks_match() {
    let (_, a, t, e) = load_appendix_example().unwrap();
    let pi = rho_tuple(&t, &a);
    let ids: Vec<usize> = e
        .walk
        .iter()
        .map(|l| t.edges().iter().find(|x| x.label == *l).unwrap().id)
        .collect();
    for want in &e.walks {
        let s = string_index(&a, want.string);
        let (g, walk) = induced_walk(&t, &a, &pi, s, &ids).unwrap();
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
        assert_eq!(got, expected, "string {}", want.string);
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
        assert_eq!(got_edges, want_edges, "string {}", want.string);
    }

    let (s, c, block) = &e.repeated_edge;
    let (g, walk) = induced_walk(&t, &a, &pi, string_index(&a, s), &ids).unwrap();
    let target = g
        .edges
        .iter()
        .position(|x| a.colours()[x.colour] == *c && names(&t, &x.block) == owned(block))
        .unwrap();
    assert_eq!(walk.edges.iter().filter(|&&k| k == target).count(), 2);
    let mut counts = BTreeMap::new();
    for k in &walk.edges {
        *counts.entry(k).or_insert(0) += 1;
    }
    assert_eq!(counts.values().filter(|&&n| n > 1).count(), 1);
}

#[test]
fn tree_gcc_implies_injective_on_components() {
    // For every tuple above the floor whose GCCs are all trees, each
    // component of each colour quotient meets every pi_s block (s in S_c) at
    // most once through distinct pi_c blocks.
    let (_, a, t, _) = load_appendix_example().unwrap();
    let floors: Vec<_> = (0..a.n_strings())
        .map(|s| rho(&t, &a, s).unwrap())
        .collect();
    let choices: Vec<Vec<_>> = floors
        .iter()
        .map(|f| f.enumerate_above().collect())
        .collect();
    let mut checked = 0;
    for p0 in &choices[0] {
        for p1 in &choices[1] {
            for p2 in &choices[2] {
                let pi = PartitionTuple::new(vec![p0.clone(), p1.clone(), p2.clone()]).unwrap();
                let gccs: Vec<_> = (0..3).map(|s| gcc(&t, &a, &pi, s).unwrap()).collect();
                if !gccs.iter().all(Gcc::is_tree) {
                    continue;
                }
                checked += 1;
                for c in 0..a.n_colours() {
                    let pc = pi_colour(&pi, &a, c).unwrap();
                    let comps =
                        gpsofic_digraphs::components(&colour_quotient(&t, &a, &pi, c).unwrap());
                    for &s in a.strings_of(c) {
                        let ps = pi.get(s);
                        for u in 0..t.n_vertices() {
                            for v in 0..t.n_vertices() {
                                let same_comp = comps.same_block(pc.block_of(u), pc.block_of(v));
                                if same_comp && ps.same_block(u, v) {
                                    assert!(pc.same_block(u, v), "{pi}: colour {c} string {s}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}
