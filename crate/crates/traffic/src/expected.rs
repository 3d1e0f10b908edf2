use std::collections::HashMap;

use gpsofic_combinat::{moebius_coefficient, Partition, PartitionTuple, SetPartitions};
use gpsofic_digraphs::{
    colour_quotient, gcc, quotient, rho, two_edge_connected, Edge, StringAssignment, TestDigraph,
};

use crate::eval::{check_tuple, falling, Prepared};
use crate::{
    lambda_weight, trace_tau, unnormalized_sum, Complex, Labels, Model, Operand, SumKind,
    TrafficError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every admissible tuple with its exact expected term.
    Exact,
    /// Only tuples whose graphs of coloured components are all trees, each
    /// weighted by its limiting value; the total carries an `O(1/N)` error.
    Leading,
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub value: Complex,
    /// Terms in enumeration order.
    pub terms: Vec<(PartitionTuple, Complex)>,
    /// `(reason, count)` for tuples left out of `terms`.
    pub dropped: Vec<(String, usize)>,
    /// True when `value` is a leading-order approximation.
    pub approximate: bool,
}

/// All tuples `pi` with `pi_s >= rho_s` for every string, as the
/// lexicographic product of the per-string enumerations.
pub fn tuples_above_floor(
    t: &TestDigraph,
    a: &StringAssignment,
) -> Result<impl Iterator<Item = PartitionTuple>, TrafficError> {
    let lists: Vec<Vec<Partition>> = (0..a.n_strings())
        .map(|s| Ok(rho(t, a, s)?.enumerate_above().collect()))
        .collect::<Result<_, TrafficError>>()?;
    let mut odometer = vec![0usize; lists.len()];
    let mut done = lists.iter().any(Vec::is_empty);
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let tuple = PartitionTuple::new(
            odometer
                .iter()
                .zip(&lists)
                .map(|(&i, l)| l[i].clone())
                .collect(),
        )
        .expect("same ground set");
        done = true;
        for k in (0..odometer.len()).rev() {
            odometer[k] += 1;
            if odometer[k] < lists[k].len() {
                done = false;
                break;
            }
            odometer[k] = 0;
        }
        Some(tuple)
    }))
}

/// Per-colour data of `T_{pi,c}` on `[M_c]` with `M_c = N^{#S_c}`.
#[derive(Clone, Copy, Debug)]
struct ColourTerm {
    /// Unnormalized injective sum over the vertices that carry an edge.
    injective: Complex,
    active: usize,
    isolated: usize,
    active_components: usize,
    m: usize,
}

impl ColourTerm {
    /// Expected product of the conjugated entries of this colour.
    fn exact_factor(&self) -> Complex {
        let f = falling(self.m as f64, self.active);
        if f == 0.0 {
            Complex::new(0.0, 0.0)
        } else {
            self.injective / f
        }
    }

    /// Normalized injective trace of `T_{pi,c}` (isolated vertices included).
    fn injective_trace(&self) -> Complex {
        let m = self.m as f64;
        let comps = (self.active_components + self.isolated) as i32;
        self.injective * falling(m - self.active as f64, self.isolated) / m.powi(comps)
    }
}

struct Engine<'a, 'm> {
    t: &'a TestDigraph,
    model: &'a Model<'m>,
    cache: HashMap<(usize, Vec<usize>), ColourTerm>,
}

impl<'a, 'm> Engine<'a, 'm> {
    fn new(t: &'a TestDigraph, model: &'a Model<'m>) -> Result<Self, TrafficError> {
        if t.n_components() != 1 {
            return Err(TrafficError::Disconnected);
        }
        Ok(Engine {
            t,
            model,
            cache: HashMap::new(),
        })
    }

    fn colour_term(&mut self, pi: &PartitionTuple, c: usize) -> Result<ColourTerm, TrafficError> {
        let a = self.model.assignment;
        let pc = gpsofic_digraphs::pi_colour(pi, a, c)?;
        let key = (c, pc.labels().to_vec());
        if let Some(hit) = self.cache.get(&key) {
            return Ok(*hit);
        }
        let q = colour_quotient(self.t, a, pi, c)?;
        let mut active_index = vec![None; q.n_vertices()];
        let mut active = 0;
        for e in q.edges() {
            for v in [e.source, e.target] {
                if active_index[v].is_none() {
                    active_index[v] = Some(active);
                    active += 1;
                }
            }
        }
        let m = self.model.colour_dim(c);
        let single = StringAssignment::new(vec!["c".into()], vec!["c".into()], &[(0, 0)])?;
        let mut labels = Labels::new();
        let mut edges = Vec::new();
        for (k, e) in q.edges().iter().enumerate() {
            let op = self.model.labels.get(&e.label)?;
            let handle = format!("e{k}");
            labels.insert(handle.clone(), Operand::new(vec![0], op.matrix)?);
            edges.push(Edge {
                id: k,
                source: active_index[e.source].expect("endpoint"),
                target: active_index[e.target].expect("endpoint"),
                colour: 0,
                label: handle,
            });
        }
        let sub = TestDigraph::new(active, edges)?;
        let local = Model::new(&single, m, &labels);
        let injective = Prepared::new(&sub, &local, true)?.sum(SumKind::Injective);
        let term = ColourTerm {
            injective,
            active,
            isolated: q.n_vertices() - active,
            active_components: sub.n_components(),
            m,
        };
        self.cache.insert(key, term);
        Ok(term)
    }

    fn check_floor(&self, pi: &PartitionTuple) -> Result<(), TrafficError> {
        check_tuple(self.t, self.model, pi)?;
        for s in 0..pi.len() {
            if !rho(self.t, self.model.assignment, s)?.leq(pi.get(s))? {
                return Err(TrafficError::BelowFloor(s));
            }
        }
        Ok(())
    }

    fn exact(&mut self, pi: &PartitionTuple) -> Result<Complex, TrafficError> {
        let n = self.model.ambient.n as f64;
        let exponent: i32 = pi.parts().iter().map(|p| p.n_blocks() as i32 - 1).sum();
        let mut value = lambda_weight(self.t, self.model, pi)? * n.powi(exponent);
        for c in 0..self.model.assignment.n_colours() {
            value *= self.colour_term(pi, c)?.exact_factor();
        }
        Ok(value)
    }

    fn leading(&mut self, pi: &PartitionTuple) -> Result<Complex, TrafficError> {
        let mut value = lambda_weight(self.t, self.model, pi)?;
        for c in 0..self.model.assignment.n_colours() {
            value *= self.colour_term(pi, c)?.injective_trace();
        }
        Ok(value)
    }
}

/// Exact expectation of `gamma_N(T, pi)` over independent uniform
/// permutations, one per colour.  `T` must be connected and every `pi_s`
/// above its floor; the model's own permutations are ignored.
pub fn expected_gamma(
    t: &TestDigraph,
    model: &Model<'_>,
    pi: &PartitionTuple,
) -> Result<Complex, TrafficError> {
    let mut engine = Engine::new(t, model)?;
    engine.check_floor(pi)?;
    engine.exact(pi)
}

/// Expectation of `tau_N` (loop labels included) as a sum over admissible
/// tuples.
pub fn expected_trace(
    t: &TestDigraph,
    model: &Model<'_>,
    mode: Mode,
) -> Result<MomentReport, TrafficError> {
    let mut engine = Engine::new(t, model)?;
    let a = model.assignment;
    if mode == Mode::Leading && !two_edge_connected(t).cut_edges.is_empty() {
        return Err(TrafficError::NotTwoEdgeConnected);
    }
    let mut terms = Vec::new();
    let mut not_tree = 0;
    let mut value = Complex::new(0.0, 0.0);
    for pi in tuples_above_floor(t, a)? {
        let term = match mode {
            Mode::Exact => engine.exact(&pi)?,
            Mode::Leading => {
                let mut trees = true;
                for s in 0..a.n_strings() {
                    trees &= gcc(t, a, &pi, s)?.is_tree();
                }
                if !trees {
                    not_tree += 1;
                    continue;
                }
                engine.leading(&pi)?
            }
        };
        value += term;
        terms.push((pi, term));
    }
    let dropped = if mode == Mode::Leading {
        vec![("gcc not a tree".to_string(), not_tree)]
    } else {
        Vec::new()
    };
    Ok(MomentReport {
        value,
        terms,
        dropped,
        approximate: mode == Mode::Leading,
    })
}

/// Every permutation of `0..m` in lexicographic order.
#[must_use]
pub fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..m).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..m)
            .rev()
            .find(|&j| p[j] > p[i - 1])
            .expect("pivot exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Average of `tau_N(T)` over every tuple of permutations; refuses more than
/// `max_tuples` tuples.
pub fn expected_trace_brute_force(
    t: &TestDigraph,
    model: &Model<'_>,
    max_tuples: usize,
) -> Result<Complex, TrafficError> {
    let a = model.assignment;
    let per_colour: Vec<Vec<Vec<usize>>> = (0..a.n_colours())
        .map(|c| {
            let m = model.colour_dim(c);
            if m > 10 {
                return Err(TrafficError::Resource(format!(
                    "{m}! permutations for colour {c}"
                )));
            }
            Ok(all_permutations(m))
        })
        .collect::<Result<_, _>>()?;
    let total = per_colour
        .iter()
        .try_fold(1usize, |acc, l| acc.checked_mul(l.len()));
    match total {
        Some(n) if n <= max_tuples => {}
        _ => return Err(TrafficError::Resource("too many permutation tuples".into())),
    }
    let mut idx = vec![0usize; per_colour.len()];
    let mut sum = Complex::new(0.0, 0.0);
    let mut count = 0usize;
    loop {
        let perms: Vec<Vec<usize>> = idx
            .iter()
            .zip(&per_colour)
            .map(|(&i, l)| l[i].clone())
            .collect();
        sum += trace_tau(t, &model.with_permutations(&perms))?;
        count += 1;
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(sum / count as f64);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_colour[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LeafcountReport {
    /// Twice the power of `N` bounding the expected term.
    pub twice_exponent: i64,
    pub all_trees: bool,
    /// Whether every colour quotient has leaf count equal to twice its
    /// number of components.
    pub leaves_match_components: bool,
}

/// `2 sum_s (#pi_s - 1) + sum_c #S_c (f(T_{pi,c}) - 2 #V(T_{pi,c}))`, with `f`
/// the leaf count of the two-edge-connected component forest.
pub fn leafcount_exponent(
    t: &TestDigraph,
    a: &StringAssignment,
    pi: &PartitionTuple,
) -> Result<LeafcountReport, TrafficError> {
    let mut twice: i64 = pi
        .parts()
        .iter()
        .map(|p| 2 * (p.n_blocks() as i64 - 1))
        .sum();
    let mut match_all = true;
    for c in 0..a.n_colours() {
        let q = colour_quotient(t, a, pi, c)?;
        let report = two_edge_connected(&q);
        let sc = a.strings_of(c).len() as i64;
        twice += sc * (report.leaf_count as i64 - 2 * q.n_vertices() as i64);
        match_all &= report.leaf_count == 2 * q.n_components();
    }
    let mut all_trees = true;
    for s in 0..a.n_strings() {
        all_trees &= gcc(t, a, pi, s)?.is_tree();
    }
    Ok(LeafcountReport {
        twice_exponent: twice,
        all_trees,
        leaves_match_components: match_all,
    })
}

/// `dim^{f(T)/2 - #Comp(T)} prod ||A_e||` with edge norms in edge order.
pub fn mingo_speicher_bound(
    t: &TestDigraph,
    dim: f64,
    edge_norms: &[f64],
) -> Result<f64, TrafficError> {
    if edge_norms.len() != t.edges().len() {
        return Err(TrafficError::Dimension(format!(
            "{} norms for {} edges",
            edge_norms.len(),
            t.edges().len()
        )));
    }
    if let Some(x) = edge_norms.iter().find(|x| !(**x >= 0.0)) {
        return Err(TrafficError::Dimension(format!(
            "edge norm {x} is not nonnegative"
        )));
    }
    let leaves = two_edge_connected(t).leaf_count as f64;
    let exponent = leaves / 2.0 - t.n_components() as f64;
    Ok(dim.powf(exponent) * edge_norms.iter().product::<f64>())
}

/// Unnormalized injective sum recovered from plain sums of all quotients
/// through Moebius inversion on the partition lattice.
pub fn moebius_injective(t: &TestDigraph, model: &Model<'_>) -> Result<Complex, TrafficError> {
    let bottom = Partition::bottom(t.n_vertices());
    let mut total = Complex::new(0.0, 0.0);
    for p in SetPartitions::new(t.n_vertices()) {
        let mu = moebius_coefficient(&bottom, &p)? as f64;
        total += unnormalized_sum(&quotient(t, &p)?, model, SumKind::All)? * mu;
    }
    Ok(total)
}
