use gpsofic_combinat::PartitionTuple;
use gpsofic_digraphs::{StringAssignment, TestDigraph};

use crate::{Ambient, Complex, Labels, TrafficError};

/// Everything needed to turn a test digraph into numbers: strings and their
/// colours, the per-string dimension, label payloads, and optionally one
/// permutation of `[N^{#S_c}]` per colour (identity when absent).
#[derive(Clone, Copy, Debug)]
pub struct Model<'a> {
    pub assignment: &'a StringAssignment,
    pub ambient: Ambient,
    pub labels: &'a Labels,
    pub permutations: Option<&'a [Vec<usize>]>,
}

impl<'a> Model<'a> {
    #[must_use]
    pub fn new(assignment: &'a StringAssignment, n: usize, labels: &'a Labels) -> Self {
        Model {
            assignment,
            ambient: Ambient::new(n, assignment.n_strings()),
            labels,
            permutations: None,
        }
    }

    #[must_use]
    pub fn with_permutations(self, perms: &'a [Vec<usize>]) -> Self {
        Model {
            permutations: Some(perms),
            ..self
        }
    }

    /// `N^{#S_c}`.
    #[must_use]
    pub fn colour_dim(&self, c: usize) -> usize {
        self.ambient
            .n
            .pow(self.assignment.strings_of(c).len() as u32)
    }

    fn check_permutations(&self) -> Result<(), TrafficError> {
        let Some(perms) = self.permutations else {
            return Ok(());
        };
        if perms.len() != self.assignment.n_colours() {
            return Err(TrafficError::Dimension(format!(
                "{} permutations for {} colours",
                perms.len(),
                self.assignment.n_colours()
            )));
        }
        for (c, p) in perms.iter().enumerate() {
            let m = self.colour_dim(c);
            let mut seen = vec![false; m];
            if p.len() != m
                || p.iter()
                    .any(|&x| x >= m || std::mem::replace(&mut seen[x], true))
            {
                return Err(TrafficError::Dimension(format!(
                    "colour {c} needs a permutation of {m} points"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    All,
    Injective,
}

/// Dense per-edge and per-vertex tables over the ambient index set.
pub(crate) struct Prepared {
    dim: usize,
    diag: Vec<Vec<Complex>>,
    /// Edges checked once both endpoints are assigned: at vertex `v`,
    /// `(source, target, table)` with `max(source, target) == v`.
    edges_at: Vec<Vec<(usize, usize, usize)>>,
    tables: Vec<Vec<Complex>>,
}

impl Prepared {
    pub(crate) fn new(
        t: &TestDigraph,
        model: &Model<'_>,
        with_edges: bool,
    ) -> Result<Self, TrafficError> {
        model.check_permutations()?;
        let amb = model.ambient;
        let dim = amb.dim();
        let a = model.assignment;
        let mut tables = Vec::new();
        let mut edges_at = vec![Vec::new(); t.n_vertices()];
        if with_edges {
            for e in t.edges() {
                if e.colour >= a.n_colours() {
                    return Err(TrafficError::Graph(
                        gpsofic_digraphs::GraphError::UnknownColour(e.colour),
                    ));
                }
                let op = model.labels.get(&e.label)?;
                op.check(&amb)?;
                if op.support != a.strings_of(e.colour) {
                    return Err(TrafficError::Dimension(format!(
                        "label `{}` must act on the strings of colour {}",
                        e.label, e.colour
                    )));
                }
                let perm = model.permutations.map(|p| p[e.colour].as_slice());
                let mut table = vec![Complex::new(0.0, 0.0); dim * dim];
                for x in 0..dim {
                    for y in 0..dim {
                        table[x * dim + y] = op.entry(&amb, x, y, perm);
                    }
                }
                edges_at[e.source.max(e.target)].push((e.source, e.target, tables.len()));
                tables.push(table);
            }
        }
        let mut diag = Vec::with_capacity(t.n_vertices());
        for v in 0..t.n_vertices() {
            let mut d = vec![Complex::new(1.0, 0.0); dim];
            for handle in t.loop_labels(v) {
                let op = model.labels.get(handle)?;
                op.check(&amb)?;
                for (x, slot) in d.iter_mut().enumerate() {
                    *slot *= op.entry(&amb, x, x, None);
                }
            }
            diag.push(d);
        }
        Ok(Prepared {
            dim,
            diag,
            edges_at,
            tables,
        })
    }

    fn weight(&self, v: usize, assign: &[usize]) -> Complex {
        let mut w = self.diag[v][assign[v]];
        for &(s, t, k) in &self.edges_at[v] {
            w *= self.tables[k][assign[t] * self.dim + assign[s]];
        }
        w
    }

    fn n_vertices(&self) -> usize {
        self.diag.len()
    }

    pub(crate) fn sum(&self, kind: SumKind) -> Complex {
        let mut assign = vec![0; self.n_vertices()];
        let mut used = vec![false; self.dim];
        self.dfs(0, &mut assign, &mut used, Complex::new(1.0, 0.0), kind)
    }

    fn dfs(
        &self,
        v: usize,
        assign: &mut [usize],
        used: &mut [bool],
        acc: Complex,
        kind: SumKind,
    ) -> Complex {
        if v == self.n_vertices() {
            return acc;
        }
        let mut total = Complex::new(0.0, 0.0);
        for x in 0..self.dim {
            if kind == SumKind::Injective && used[x] {
                continue;
            }
            assign[v] = x;
            let next = acc * self.weight(v, assign);
            if next == Complex::new(0.0, 0.0) {
                continue;
            }
            used[x] = true;
            total += self.dfs(v + 1, assign, used, next, kind);
            used[x] = false;
        }
        total
    }

    /// Sum over maps whose string coordinates have kernels exactly `pi`.
    pub(crate) fn kernel_sum(&self, amb: &Ambient, pi: &PartitionTuple) -> Complex {
        let mut state = KernelState {
            values: pi
                .parts()
                .iter()
                .map(|p| vec![None; p.n_blocks()])
                .collect(),
            used: vec![vec![false; amb.n]; pi.len()],
            coords: vec![0; pi.len()],
            assign: vec![0; self.n_vertices()],
        };
        self.kernel_dfs(amb, pi, 0, 0, &mut state, Complex::new(1.0, 0.0))
    }

    fn kernel_dfs(
        &self,
        amb: &Ambient,
        pi: &PartitionTuple,
        v: usize,
        s: usize,
        st: &mut KernelState,
        acc: Complex,
    ) -> Complex {
        if v == self.n_vertices() {
            return acc;
        }
        if s == pi.len() {
            for (k, c) in st.coords.iter_mut().enumerate() {
                *c = st.values[k][pi.get(k).block_of(v)].expect("assigned above");
            }
            st.assign[v] = amb.compose(&st.coords);
            let next = acc * self.weight(v, &st.assign);
            if next == Complex::new(0.0, 0.0) {
                return next;
            }
            return self.kernel_dfs(amb, pi, v + 1, 0, st, next);
        }
        let b = pi.get(s).block_of(v);
        if st.values[s][b].is_some() {
            return self.kernel_dfs(amb, pi, v, s + 1, st, acc);
        }
        let mut total = Complex::new(0.0, 0.0);
        for x in 0..amb.n {
            if st.used[s][x] {
                continue;
            }
            st.used[s][x] = true;
            st.values[s][b] = Some(x);
            total += self.kernel_dfs(amb, pi, v, s + 1, st, acc);
            st.values[s][b] = None;
            st.used[s][x] = false;
        }
        total
    }
}

struct KernelState {
    values: Vec<Vec<Option<usize>>>,
    used: Vec<Vec<bool>>,
    coords: Vec<usize>,
    assign: Vec<usize>,
}

fn normalizer(t: &TestDigraph, amb: &Ambient) -> f64 {
    (amb.dim() as f64).powi(t.n_components() as i32)
}

pub(crate) fn check_tuple(
    t: &TestDigraph,
    model: &Model<'_>,
    pi: &PartitionTuple,
) -> Result<(), TrafficError> {
    if pi.len() != model.assignment.n_strings() {
        return Err(gpsofic_digraphs::GraphError::TupleLength {
            got: pi.len(),
            expected: model.assignment.n_strings(),
        }
        .into());
    }
    if pi.ground_size() != t.n_vertices() {
        return Err(TrafficError::Dimension(format!(
            "partitions of {} points for {} vertices",
            pi.ground_size(),
            t.n_vertices()
        )));
    }
    Ok(())
}

/// Sum over all (or all injective) index maps `V -> [N]^S` of the loop and
/// edge entries, without normalization.
pub fn unnormalized_sum(
    t: &TestDigraph,
    model: &Model<'_>,
    kind: SumKind,
) -> Result<Complex, TrafficError> {
    Ok(Prepared::new(t, model, true)?.sum(kind))
}

/// `tau_N(T)`: the sum over all index maps divided by `(N^{#S})^{#Comp}`.
/// Loop labels on vertices are included.
pub fn trace_tau(t: &TestDigraph, model: &Model<'_>) -> Result<Complex, TrafficError> {
    Ok(unnormalized_sum(t, model, SumKind::All)? / normalizer(t, &model.ambient))
}

pub fn trace_tau_injective(t: &TestDigraph, model: &Model<'_>) -> Result<Complex, TrafficError> {
    Ok(unnormalized_sum(t, model, SumKind::Injective)? / normalizer(t, &model.ambient))
}

/// The part of `tau_N` coming from index maps whose string-`s` coordinate
/// has kernel exactly `pi_s` for every `s`.
pub fn gamma(
    t: &TestDigraph,
    model: &Model<'_>,
    pi: &PartitionTuple,
) -> Result<Complex, TrafficError> {
    check_tuple(t, model, pi)?;
    let p = Prepared::new(t, model, true)?;
    Ok(p.kernel_sum(&model.ambient, pi) / normalizer(t, &model.ambient))
}

/// Average of the loop-label products over kernel-constrained index maps,
/// normalized by `N^{sum #pi_s}`; vertices without loops contribute 1.
pub fn lambda_weight(
    t: &TestDigraph,
    model: &Model<'_>,
    pi: &PartitionTuple,
) -> Result<Complex, TrafficError> {
    check_tuple(t, model, pi)?;
    let n = model.ambient.n;
    let scale: f64 = pi
        .parts()
        .iter()
        .map(|p| (n as f64).powi(p.n_blocks() as i32))
        .product();
    if !t.has_loop_labels() {
        let count: f64 = pi
            .parts()
            .iter()
            .map(|p| falling(n as f64, p.n_blocks()))
            .product();
        return Ok(Complex::new(count / scale, 0.0));
    }
    let p = Prepared::new(t, model, false)?;
    Ok(p.kernel_sum(&model.ambient, pi) / scale)
}

/// `m (m-1) ... (m-k+1)`; zero once a factor hits zero.
pub(crate) fn falling(m: f64, k: usize) -> f64 {
    (0..k)
        .map(|j| m - j as f64)
        .fold(1.0, |acc, x| if x <= 0.0 { 0.0 } else { acc * x })
}
