use std::collections::BTreeMap;

use crate::GraphError;

/// Simple undirected graph on colours.  Adjacent colours commute; non-adjacent
/// colours are free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourGraph {
    names: Vec<String>,
    adj: Vec<Vec<bool>>,
}

impl ColourGraph {
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = names.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::UnknownColour(a.max(b)));
            }
            if a == b {
                return Err(GraphError::InvalidColourGraph(format!(
                    "self-loop at `{}`",
                    names[a]
                )));
            }
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Self::check_names(&names)?;
        Ok(ColourGraph { names, adj })
    }

    /// Builds from adjacency lists; the lists must be symmetric and irreflexive.
    pub fn from_adjacency(
        names: Vec<String>,
        adjacency: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, GraphError> {
        Self::check_names(&names)?;
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| GraphError::UnknownName(s.to_string()))
        };
        let n = names.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, list) in adjacency {
            let ia = idx(a)?;
            for b in list {
                let ib = idx(b)?;
                if ia == ib {
                    return Err(GraphError::InvalidColourGraph(format!(
                        "self-loop at `{a}`"
                    )));
                }
                adj[ia][ib] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                if adj[a][b] && !adj[b][a] {
                    return Err(GraphError::InvalidColourGraph(format!(
                        "`{}` lists `{}` but not conversely",
                        names[a], names[b]
                    )));
                }
            }
        }
        Ok(ColourGraph { names, adj })
    }

    fn check_names(names: &[String]) -> Result<(), GraphError> {
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(GraphError::InvalidColourGraph(format!(
                    "duplicate colour `{a}`"
                )));
            }
        }
        Ok(())
    }

    #[must_use]
    pub fn complete(names: Vec<String>) -> Self {
        let n = names.len();
        let adj = (0..n).map(|a| (0..n).map(|b| a != b).collect()).collect();
        ColourGraph { names, adj }
    }

    #[must_use]
    pub fn edgeless(names: Vec<String>) -> Self {
        let n = names.len();
        ColourGraph {
            names,
            adj: vec![vec![false; n]; n],
        }
    }

    #[must_use]
    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    #[must_use]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    #[must_use]
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Unordered edges `(a, b)` with `a < b`.
    #[must_use]
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adj[a][b])
            .collect()
    }
}

/// The relation between strings and colours.  `S_c` lists the strings on which
/// colour `c` acts, `C_s` the colours acting on string `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringAssignment {
    strings: Vec<String>,
    colours: Vec<String>,
    strings_of: Vec<Vec<usize>>,
    colours_of: Vec<Vec<usize>>,
}

impl StringAssignment {
    /// `incidence` holds `(string, colour)` pairs.  Every colour must act on at
    /// least one string.
    pub fn new(
        strings: Vec<String>,
        colours: Vec<String>,
        incidence: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut strings_of = vec![Vec::new(); colours.len()];
        let mut colours_of = vec![Vec::new(); strings.len()];
        for &(s, c) in incidence {
            if s >= strings.len() {
                return Err(GraphError::UnknownString(s));
            }
            if c >= colours.len() {
                return Err(GraphError::UnknownColour(c));
            }
            strings_of[c].push(s);
            colours_of[s].push(c);
        }
        for v in strings_of.iter_mut().chain(colours_of.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        if let Some(c) = strings_of.iter().position(Vec::is_empty) {
            return Err(GraphError::InvalidAssignment(format!(
                "colour `{}` acts on no string",
                colours[c]
            )));
        }
        Ok(StringAssignment {
            strings,
            colours,
            strings_of,
            colours_of,
        })
    }

    /// Builds from a map colour name -> string names.
    pub fn from_names(
        strings: Vec<String>,
        colours: Vec<String>,
        map: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, GraphError> {
        let mut inc = Vec::new();
        for (c, list) in map {
            let ci = colours
                .iter()
                .position(|x| x == c)
                .ok_or_else(|| GraphError::UnknownName(c.clone()))?;
            for s in list {
                let si = strings
                    .iter()
                    .position(|x| x == s)
                    .ok_or_else(|| GraphError::UnknownName(s.clone()))?;
                inc.push((si, ci));
            }
        }
        Self::new(strings, colours, &inc)
    }

    #[must_use]
    pub fn strings(&self) -> &[String] {
        &self.strings
    }

    #[must_use]
    pub fn colours(&self) -> &[String] {
        &self.colours
    }

    #[must_use]
    pub fn n_strings(&self) -> usize {
        self.strings.len()
    }

    #[must_use]
    pub fn n_colours(&self) -> usize {
        self.colours.len()
    }

    /// `S_c`, ascending.
    #[must_use]
    pub fn strings_of(&self, c: usize) -> &[usize] {
        &self.strings_of[c]
    }

    /// `C_s`, ascending.
    #[must_use]
    pub fn colours_of(&self, s: usize) -> &[usize] {
        &self.colours_of[s]
    }

    #[must_use]
    pub fn acts_on(&self, c: usize, s: usize) -> bool {
        self.strings_of[c].binary_search(&s).is_ok()
    }

    #[must_use]
    pub fn share_string(&self, a: usize, b: usize) -> bool {
        self.strings_of[a]
            .iter()
            .any(|s| self.strings_of[b].binary_search(s).is_ok())
    }

    /// `(string, colour)` pairs in string-major order.
    #[must_use]
    pub fn incidence(&self) -> Vec<(usize, usize)> {
        self.colours_of
            .iter()
            .enumerate()
            .flat_map(|(s, cs)| cs.iter().map(move |&c| (s, c)))
            .collect()
    }

    /// Checks `S_a and S_b are disjoint  iff  (a, b) is an edge`.
    pub fn validate_for(&self, g: &ColourGraph) -> Result<(), GraphError> {
        if g.names() != self.colours.as_slice() {
            return Err(GraphError::InvalidAssignment(
                "colour lists differ from the colour graph".into(),
            ));
        }
        for a in 0..self.n_colours() {
            for b in a + 1..self.n_colours() {
                let disjoint = !self.share_string(a, b);
                if disjoint != g.adjacent(a, b) {
                    return Err(GraphError::InvalidAssignment(format!(
                        "colours `{}` and `{}` are {} but their string sets are {}",
                        self.colours[a],
                        self.colours[b],
                        if g.adjacent(a, b) {
                            "adjacent"
                        } else {
                            "not adjacent"
                        },
                        if disjoint { "disjoint" } else { "overlapping" },
                    )));
                }
            }
        }
        Ok(())
    }

    /// Keeps only the listed strings (in the given order).
    pub fn restrict_strings(&self, keep: &[usize]) -> Result<Self, GraphError> {
        let strings = keep.iter().map(|&s| self.strings[s].clone()).collect();
        let inc: Vec<(usize, usize)> = keep
            .iter()
            .enumerate()
            .flat_map(|(new, &old)| self.colours_of[old].iter().map(move |&c| (new, c)))
            .collect();
        Self::new(strings, self.colours.clone(), &inc)
    }
}

/// One private string per colour plus one shared string per non-adjacent pair.
#[must_use]
pub fn build_string_assignment(g: &ColourGraph) -> StringAssignment {
    let n = g.len();
    let mut strings: Vec<String> = g.names().iter().map(|c| format!("p:{c}")).collect();
    let mut inc: Vec<(usize, usize)> = (0..n).map(|c| (c, c)).collect();
    for a in 0..n {
        for b in a + 1..n {
            if !g.adjacent(a, b) {
                let s = strings.len();
                strings.push(format!("s:{}|{}", g.names()[a], g.names()[b]));
                inc.push((s, a));
                inc.push((s, b));
            }
        }
    }
    StringAssignment::new(strings, g.names().to_vec(), &inc)
        .expect("every colour has a private string")
}

/// Greedily drops strings (last first) while the assignment stays valid for `g`.
pub fn minimize_strings(
    a: &StringAssignment,
    g: &ColourGraph,
) -> Result<StringAssignment, GraphError> {
    a.validate_for(g)?;
    let mut keep: Vec<usize> = (0..a.n_strings()).collect();
    for s in (0..a.n_strings()).rev() {
        let trial: Vec<usize> = keep.iter().copied().filter(|&x| x != s).collect();
        if let Ok(candidate) = a.restrict_strings(&trial) {
            if candidate.validate_for(g).is_ok() {
                keep = trial;
            }
        }
    }
    a.restrict_strings(&keep)
}

/// A word is reduced when between any two equal letters some letter is not
/// adjacent to them.
#[must_use]
pub fn is_g_reduced(word: &[usize], g: &ColourGraph) -> bool {
    for i in 0..word.len() {
        for k in i + 1..word.len() {
            if word[i] == word[k] && !(i + 1..k).any(|j| !g.adjacent(word[i], word[j])) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn complete_graph_gets_disjoint_strings() {
        let g = ColourGraph::complete(names(&["a", "b"]));
        let a = build_string_assignment(&g);
        assert_eq!(a.n_strings(), 2);
        assert!(!a.share_string(0, 1));
        a.validate_for(&g).unwrap();
    }

    #[test]
    fn free_colours_share_a_string() {
        let g = ColourGraph::edgeless(names(&["a", "b"]));
        let a = build_string_assignment(&g);
        assert!(a.share_string(0, 1));
        a.validate_for(&g).unwrap();
        let m = minimize_strings(&a, &g).unwrap();
        assert_eq!(m.n_strings(), 1);
        m.validate_for(&g).unwrap();
    }

    #[test]
    fn default_construction_is_valid_on_all_graphs_of_four_colours() {
        let pairs: Vec<(usize, usize)> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
            .collect();
        for mask in 0..(1u32 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = ColourGraph::new(names(&["a", "b", "c", "d"]), &edges).unwrap();
            let a = build_string_assignment(&g);
            a.validate_for(&g).unwrap();
            let m = minimize_strings(&a, &g).unwrap();
            m.validate_for(&g).unwrap();
            assert!(m.n_strings() <= a.n_strings());
        }
    }

    #[test]
    fn empty_string_set_is_rejected() {
        let err = StringAssignment::new(names(&["1"]), names(&["a", "b"]), &[(0, 0)]).unwrap_err();
        assert!(matches!(err, GraphError::InvalidAssignment(_)));
    }

    #[test]
    fn asymmetric_adjacency_is_rejected() {
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), vec!["b".to_string()]);
        assert!(ColourGraph::from_adjacency(names(&["a", "b"]), &m).is_err());
        m.insert("b".to_string(), vec!["a".to_string()]);
        assert!(ColourGraph::from_adjacency(names(&["a", "b"]), &m)
            .unwrap()
            .adjacent(0, 1));
        assert!(ColourGraph::new(names(&["a"]), &[(0, 0)]).is_err());
    }

    #[test]
    fn reduced_words() {
        let commuting = ColourGraph::complete(names(&["c", "d"]));
        let free = ColourGraph::edgeless(names(&["c", "d"]));
        assert!(is_g_reduced(&[0], &commuting));
        assert!(!is_g_reduced(&[0, 1, 0], &commuting));
        assert!(is_g_reduced(&[0, 1, 0], &free));
        assert!(!is_g_reduced(&[0, 0], &free));
    }
}
