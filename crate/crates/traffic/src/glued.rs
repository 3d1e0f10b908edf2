use gpsofic_combinat::{Partition, PartitionTuple};
use gpsofic_digraphs::{gcc, quotient, rho, Edge, StringAssignment, TestDigraph};

use crate::{trace_tau, Complex, DenseMatrix, Model, TrafficError};

/// Two cycles sharing one vertex: the first reads the chains of `X_{i,j}`
/// for `i = 1..k`, the second the chains of their adjoints in mirror order.
///
/// Chain `i` runs `u_{i,1} <- u_{i,2} <- ... <- u_{i,len+1}` with
/// `u_{i,len+1} = u_{i+1,1}` (indices mod `k`); the edge into `u_{i,j}` is
/// labelled `X{i}_{j}` and has the colour of letter `i`.  Mirror vertices
/// `u'_{i,j}` carry `X{i}_{j}*` edges in the forward direction, and
/// `u'_{1,1} = u_{1,1}`.  Loop handles are `L{i}_{j}` and `L{i}_{j}*`.
#[derive(Clone, Debug)]
pub struct GluedCycles {
    pub digraph: TestDigraph,
    /// `(colour, chain length)` per letter.
    pub word: Vec<(usize, usize)>,
    /// Vertex of `u_{i,1}` for each letter.
    pub first: Vec<usize>,
    /// Vertex of `u'_{i,1}` for each letter.
    pub first_mirror: Vec<usize>,
}

#[must_use]
pub fn edge_handle(i: usize, j: usize) -> String {
    format!("X{}_{}", i + 1, j + 1)
}

#[must_use]
pub fn loop_handle(i: usize, j: usize) -> String {
    format!("L{}_{}", i + 1, j + 1)
}

/// Builds the glued-cycle digraph for a word of `(colour, length)` letters.
pub fn build_centered_product_graph(
    word: &[(usize, usize)],
    with_loops: bool,
) -> Result<GluedCycles, TrafficError> {
    if word.is_empty() {
        return Err(TrafficError::EmptyWord);
    }
    if word.iter().any(|&(_, len)| len == 0) {
        return Err(TrafficError::Dimension("chain of length zero".into()));
    }
    let total: usize = word.iter().map(|&(_, l)| l).sum();
    // unprimed u_{i,j} get 0..total; mirrors get total..2*total-1 with
    // u'_{1,1} sharing vertex 0
    let mut offset = vec![0; word.len()];
    for i in 1..word.len() {
        offset[i] = offset[i - 1] + word[i - 1].1;
    }
    let plain = |i: usize, j: usize| -> usize {
        if j == word[i].1 {
            offset[(i + 1) % word.len()]
        } else {
            offset[i] + j
        }
    };
    let mirror = |i: usize, j: usize| -> usize {
        let v = plain(i, j);
        if v == 0 {
            0
        } else {
            total + v - 1
        }
    };
    let n = 2 * total - 1;
    let mut names = vec![String::new(); n];
    let mut loops = vec![Vec::new(); n];
    for (i, &(_, len)) in word.iter().enumerate() {
        for j in 0..len {
            let (u, w) = (plain(i, j), mirror(i, j));
            names[u] = format!("u{}_{}", i + 1, j + 1);
            if w != u {
                names[w] = format!("u'{}_{}", i + 1, j + 1);
            }
            if with_loops {
                loops[u].push(loop_handle(i, j));
                loops[w].push(format!("{}*", loop_handle(i, j)));
            }
        }
    }
    let mut edges = Vec::new();
    for (i, &(colour, len)) in word.iter().enumerate() {
        for j in 0..len {
            let id = edges.len();
            edges.push(Edge {
                id,
                source: plain(i, j + 1),
                target: plain(i, j),
                colour,
                label: edge_handle(i, j),
            });
        }
    }
    for (i, &(colour, len)) in word.iter().enumerate() {
        for j in 0..len {
            let id = edges.len();
            edges.push(Edge {
                id,
                source: mirror(i, j),
                target: mirror(i, j + 1),
                colour,
                label: format!("{}*", edge_handle(i, j)),
            });
        }
    }
    let digraph = TestDigraph::with_names(names, edges, loops)?;
    Ok(GluedCycles {
        digraph,
        word: word.to_vec(),
        first: (0..word.len()).map(|i| plain(i, 0)).collect(),
        first_mirror: (0..word.len()).map(|i| mirror(i, 0)).collect(),
    })
}

impl GluedCycles {
    #[must_use]
    pub fn k(&self) -> usize {
        self.word.len()
    }

    /// Partition merging `u_{i,1}` with `u_{i+1,1}` for each positive
    /// `i` in `subset` (1-based) and the mirror pair for each negative one.
    #[must_use]
    pub fn rho_subset(&self, subset: &[i64]) -> Partition {
        let n = self.digraph.n_vertices();
        let k = self.k();
        let mut labels: Vec<usize> = (0..n).collect();
        let mut merge = |x: usize, y: usize| {
            let (from, to) = (labels[x].max(labels[y]), labels[x].min(labels[y]));
            for l in labels.iter_mut() {
                if *l == from {
                    *l = to;
                }
            }
        };
        for &i in subset {
            let idx = (i.unsigned_abs() as usize) - 1;
            let list = if i > 0 {
                &self.first
            } else {
                &self.first_mirror
            };
            merge(list[idx], list[(idx + 1) % k]);
        }
        Partition::from_labels(&labels)
    }

    /// Signed letters `i` (positive) and `-i` (mirror) whose consecutive
    /// first vertices are identified by `meet`.
    #[must_use]
    pub fn j_set(&self, meet: &Partition) -> Vec<i64> {
        let k = self.k();
        let mut out = Vec::new();
        for i in 0..k {
            if meet.same_block(self.first[i], self.first[(i + 1) % k]) {
                out.push(i as i64 + 1);
            }
        }
        for i in 0..k {
            if meet.same_block(self.first_mirror[i], self.first_mirror[(i + 1) % k]) {
                out.push(-(i as i64 + 1));
            }
        }
        out
    }
}

/// True iff `pi` is above every floor, all graphs of coloured components are
/// trees, and no consecutive first vertices are identified by the meet.
pub fn check_inconsistency(
    g: &GluedCycles,
    a: &StringAssignment,
    pi: &PartitionTuple,
) -> Result<bool, TrafficError> {
    let t = &g.digraph;
    for s in 0..a.n_strings() {
        if !rho(t, a, s)?.leq(pi.get(s))? {
            return Ok(false);
        }
    }
    for s in 0..a.n_strings() {
        if !gcc(t, a, pi, s)?.is_tree() {
            return Ok(false);
        }
    }
    Ok(g.j_set(&pi.meet_all()).is_empty())
}

fn signed_subsets(k: usize) -> impl Iterator<Item = Vec<i64>> {
    (0u64..1 << (2 * k)).map(move |mask| {
        (0..2 * k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| {
                if b < k {
                    b as i64 + 1
                } else {
                    -((b - k) as i64 + 1)
                }
            })
            .collect()
    })
}

/// `sum_I (-1)^{|I|} tau(T_I)` over signed subsets `I`.
pub fn centered_norm_expansion(
    g: &GluedCycles,
    model: &Model<'_>,
) -> Result<Complex, TrafficError> {
    let mut total = Complex::new(0.0, 0.0);
    for subset in signed_subsets(g.k()) {
        let ti = quotient(&g.digraph, &g.rho_subset(&subset))?;
        let sign = if subset.len() % 2 == 0 { 1.0 } else { -1.0 };
        total += trace_tau(&ti, model)? * sign;
    }
    Ok(total)
}

/// Squared normalized Hilbert-Schmidt norm of the diagonal of the product of
/// centered letters, computed with ambient matrices.
pub fn centered_norm_direct(g: &GluedCycles, model: &Model<'_>) -> Result<f64, TrafficError> {
    let amb = model.ambient;
    let d = amb.dim();
    let with_loops = g.digraph.has_loop_labels();
    let mut z = DenseMatrix::identity(d, d);
    for (i, &(colour, len)) in g.word.iter().enumerate() {
        let mut y = DenseMatrix::identity(d, d);
        for j in 0..len {
            if with_loops {
                let l = model.labels.get(&loop_handle(i, j))?;
                l.check(&amb)?;
                let diag = DenseMatrix::from_diagonal(&l.embed(&amb, None).diagonal());
                y *= diag;
            }
            let x = model.labels.get(&edge_handle(i, j))?;
            x.check(&amb)?;
            let perm = model.permutations.map(|p| p[colour].as_slice());
            y *= x.embed(&amb, perm);
        }
        let centered = &y - DenseMatrix::from_diagonal(&y.diagonal());
        z *= centered;
    }
    Ok(z.diagonal().iter().map(|x| x.norm_sqr()).sum::<f64>() / d as f64)
}
