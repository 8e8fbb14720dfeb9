//! Intersection graphs of chord diagrams.
//!
//! Each chord becomes a vertex labelled by the unordered pair of strands it
//! joins. For every ordered pair of chords we count the endpoint pairs that
//! share a strand with the first endpoint lower; the count is kept mod 2, and
//! two surviving opposite arrows merge into one undirected edge.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::json;

use crate::diagram::{chord_name, ChordDiagram};
use crate::error::{Error, Result};

/// How two vertices are joined, seen from the first one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    None,
    /// An arrow from the first vertex to the second.
    Out,
    /// An arrow from the second vertex to the first.
    In,
    Undirected,
}

impl Relation {
    fn reversed(self) -> Self {
        match self {
            Relation::Out => Relation::In,
            Relation::In => Relation::Out,
            r => r,
        }
    }

    fn token(self) -> char {
        match self {
            Relation::None => '.',
            Relation::Out => '>',
            Relation::In => '<',
            Relation::Undirected => '-',
        }
    }
}

/// Which graph to test for connectivity in [`is_connected_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Connectivity {
    /// Edges of the intersection graph after mod-2 cancellation.
    #[default]
    AfterCancellation,
    /// Raw endpoint-interleaving multigraph: any two chords that share a
    /// strand are adjacent.
    Interleaving,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    names: Vec<String>,
    labels: Vec<(usize, usize)>,
    /// Adjacency matrix, `rel[a][b]` seen from `a`.
    rel: Vec<Vec<Relation>>,
}

impl IntersectionGraph {
    /// Graph with the given vertex names and labels and no edges.
    pub fn with_vertices(names: Vec<String>, labels: Vec<(usize, usize)>) -> Self {
        assert_eq!(names.len(), labels.len());
        let n = labels.len();
        let labels = labels.into_iter().map(|(i, j)| (i.min(j), i.max(j))).collect();
        Self {
            names,
            labels,
            rel: vec![vec![Relation::None; n]; n],
        }
    }

    pub fn of(d: &ChordDiagram) -> Self {
        Self::from_strands(d.strands(), d.degree())
    }

    /// Works on raw strand sequences so callers can keep their own chord ids.
    pub(crate) fn from_strands(strands: &[Vec<usize>], degree: usize) -> Self {
        let mut parity = vec![vec![false; degree]; degree];
        let mut first_strand = vec![usize::MAX; degree];
        let mut labels = vec![(0, 0); degree];
        for (s, strand) in strands.iter().enumerate() {
            for (i, &x) in strand.iter().enumerate() {
                if first_strand[x] == usize::MAX {
                    first_strand[x] = s;
                } else {
                    labels[x] = (first_strand[x] + 1, s + 1);
                }
                for &y in &strand[i + 1..] {
                    if x != y {
                        parity[x][y] ^= true;
                    }
                }
            }
        }
        let names = (0..degree).map(chord_name).collect();
        let mut g = Self::with_vertices(names, labels);
        for a in 0..degree {
            for b in a + 1..degree {
                let r = match (parity[a][b], parity[b][a]) {
                    (true, true) => Relation::Undirected,
                    (true, false) => Relation::Out,
                    (false, true) => Relation::In,
                    (false, false) => Relation::None,
                };
                g.set(a, b, r);
            }
        }
        g
    }

    /// Sets the relation between `a` and `b` as seen from `a`, replacing any
    /// previous edge.
    pub fn set(&mut self, a: usize, b: usize, r: Relation) {
        assert_ne!(a, b, "no loops in an intersection graph");
        self.rel[a][b] = r;
        self.rel[b][a] = r.reversed();
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn label(&self, v: usize) -> (usize, usize) {
        self.labels[v]
    }

    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    pub fn is_marked(&self, v: usize) -> bool {
        let (i, j) = self.labels[v];
        i != j
    }

    pub fn relation(&self, a: usize, b: usize) -> Relation {
        self.rel[a][b]
    }

    /// Neighbours in the undirected support.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rel[v]
            .iter()
            .enumerate()
            .filter(|(_, r)| **r != Relation::None)
            .map(|(u, _)| u)
    }

    pub fn degree_of(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// Arrows `(from, to)` that are not part of an undirected edge.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.rel[a][b] == Relation::Out {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Undirected edges `(a, b)` with `a < b`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.rel[a][b] == Relation::Undirected {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.directed_edges().len() + self.undirected_edges().len()
    }

    /// Every unmarked vertex has only undirected incidences.
    pub fn is_semisymmetric(&self) -> bool {
        (0..self.vertex_count())
            .filter(|v| !self.is_marked(*v))
            .all(|v| {
                self.rel[v]
                    .iter()
                    .all(|r| matches!(r, Relation::None | Relation::Undirected))
            })
    }

    /// Connectivity of the undirected support. The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        self.component_of(0, None).len() == n
    }

    pub fn is_tree(&self) -> bool {
        let n = self.vertex_count();
        n > 0 && self.is_connected() && self.edge_count() == n - 1
    }

    /// Vertices reachable from `start` without passing through `removed`.
    pub fn component_of(&self, start: usize, removed: Option<usize>) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if Some(u) != removed && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// The subgraph on `keep`, with vertices renumbered in increasing order.
    pub fn induced(&self, keep: &[usize]) -> IntersectionGraph {
        let names = keep.iter().map(|v| self.names[*v].clone()).collect();
        let labels = keep.iter().map(|v| self.labels[*v]).collect();
        let mut g = Self::with_vertices(names, labels);
        for (i, a) in keep.iter().enumerate() {
            for (j, b) in keep.iter().enumerate().skip(i + 1) {
                g.set(i, j, self.rel[*a][*b]);
            }
        }
        g
    }

    /// Applies `perm` (1-based colour `c` becomes `perm[c - 1]`) to every label.
    pub fn relabeled(&self, perm: &[usize]) -> IntersectionGraph {
        let mut g = self.clone();
        for l in &mut g.labels {
            let (a, b) = (perm[l.0 - 1], perm[l.1 - 1]);
            *l = (a.min(b), a.max(b));
        }
        g
    }

    fn signature(&self, v: usize) -> ((usize, usize), [usize; 3]) {
        let mut counts = [0; 3];
        for r in &self.rel[v] {
            match r {
                Relation::Out => counts[0] += 1,
                Relation::In => counts[1] += 1,
                Relation::Undirected => counts[2] += 1,
                Relation::None => {}
            }
        }
        (self.labels[v], counts)
    }

    /// Exact isomorphism test preserving labels, arrow directions and edge
    /// types. Backtracking search; meant for small graphs.
    pub fn is_isomorphic(&self, other: &IntersectionGraph) -> bool {
        self.isomorphism(other).is_some()
    }

    /// A vertex bijection `self -> other` realizing an isomorphism.
    pub fn isomorphism(&self, other: &IntersectionGraph) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        if n != other.vertex_count() {
            return None;
        }
        let sig_a: Vec<_> = (0..n).map(|v| self.signature(v)).collect();
        let sig_b: Vec<_> = (0..n).map(|v| other.signature(v)).collect();
        let (mut sa, mut sb) = (sig_a.clone(), sig_b.clone());
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
        // visit vertices so that each (after the first of a component) has a mapped neighbour
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        for s in 0..n {
            if !placed[s] {
                for v in self.component_of(s, None) {
                    placed[v] = true;
                    order.push(v);
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            g: &IntersectionGraph,
            h: &IntersectionGraph,
            order: &[usize],
            sig_a: &[((usize, usize), [usize; 3])],
            sig_b: &[((usize, usize), [usize; 3])],
            depth: usize,
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            let Some(&v) = order.get(depth) else {
                return true;
            };
            for w in 0..h.vertex_count() {
                if used[w] || sig_a[v] != sig_b[w] {
                    continue;
                }
                let consistent = order[..depth]
                    .iter()
                    .all(|&u| g.rel[v][u] == h.rel[w][map[u]]);
                if !consistent {
                    continue;
                }
                map[v] = w;
                used[w] = true;
                if go(g, h, order, sig_a, sig_b, depth + 1, map, used) {
                    return true;
                }
                used[w] = false;
                map[v] = usize::MAX;
            }
            false
        }
        go(self, other, &order, &sig_a, &sig_b, 0, &mut map, &mut used).then_some(map)
    }

    /// Canonical code of the tree rooted at `root`; equal codes mean rooted
    /// isomorphism.
    pub fn rooted_code(&self, root: usize) -> String {
        self.subtree_code(root, None)
    }

    /// Code of the subtree hanging from `v` away from `parent`.
    pub fn subtree_code(&self, v: usize, parent: Option<usize>) -> String {
        let mut children: Vec<String> = self
            .neighbors(v)
            .filter(|u| Some(*u) != parent)
            .map(|u| format!("{}{}", self.rel[v][u].token(), self.subtree_code(u, Some(v))))
            .collect();
        children.sort();
        let (i, j) = self.labels[v];
        format!("({i},{j}{})", children.concat())
    }

    /// Isomorphism-invariant code for trees (`None` if not a tree): the
    /// smaller rooted code over the one or two centres.
    pub fn tree_code(&self) -> Option<String> {
        if !self.is_tree() {
            return None;
        }
        self.centers().into_iter().map(|c| self.rooted_code(c)).min()
    }

    fn centers(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree_of(v)).collect();
        let mut alive = n;
        let mut layer: Vec<usize> = (0..n).filter(|v| deg[*v] <= 1).collect();
        let mut removed = vec![false; n];
        while alive > 2 {
            let mut next = Vec::new();
            for &v in &layer {
                removed[v] = true;
                alive -= 1;
                for u in self.neighbors(v) {
                    if !removed[u] {
                        deg[u] -= 1;
                        if deg[u] == 1 {
                            next.push(u);
                        }
                    }
                }
            }
            layer = next;
        }
        (0..n).filter(|v| !removed[*v]).collect()
    }

    /// Graphviz rendering: arrows for directed edges, `dir=none` for
    /// undirected ones, marked vertices with a double border.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for v in 0..self.vertex_count() {
            let (i, j) = self.labels[v];
            let extra = if self.is_marked(v) { ", peripheries=2" } else { "" };
            let _ = writeln!(out, "  \"{}\" [label=\"{{{i},{j}}}\"{extra}];", self.names[v]);
        }
        for (a, b) in self.directed_edges() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", self.names[a], self.names[b]);
        }
        for (a, b) in self.undirected_edges() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [dir=none];", self.names[a], self.names[b]);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<_> = (0..self.vertex_count())
            .map(|v| {
                json!({
                    "id": self.names[v],
                    "label": [self.labels[v].0, self.labels[v].1],
                    "marked": self.is_marked(v),
                })
            })
            .collect();
        let pair = |(a, b): (usize, usize)| json!([self.names[a], self.names[b]]);
        json!({
            "vertices": vertices,
            "directed": self.directed_edges().into_iter().map(pair).collect::<Vec<_>>(),
            "undirected": self.undirected_edges().into_iter().map(pair).collect::<Vec<_>>(),
        })
    }

    /// Line-oriented tree file: `v <id> <i> <j>`, `e <a> -> <b>`, `e <a> -- <b>`.
    pub fn to_tree_file(&self) -> String {
        let mut out = String::new();
        for v in 0..self.vertex_count() {
            let (i, j) = self.labels[v];
            let _ = writeln!(out, "v {} {i} {j}", self.names[v]);
        }
        for (a, b) in self.directed_edges() {
            let _ = writeln!(out, "e {} -> {}", self.names[a], self.names[b]);
        }
        for (a, b) in self.undirected_edges() {
            let _ = writeln!(out, "e {} -- {}", self.names[a], self.names[b]);
        }
        out
    }

    pub fn parse_tree_file(text: &str) -> Result<IntersectionGraph> {
        let mut names: Vec<String> = Vec::new();
        let mut labels = Vec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<(usize, usize, Relation, usize)> = Vec::new();
        let mut pending: Vec<(String, String, Relation, usize)> = Vec::new();
        let bad = |line: usize, msg: &str| Error::Parse {
            pos: line,
            msg: format!("line {line}: {msg}"),
        };
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["v", id, i, j] => {
                    let i: usize = i.parse().map_err(|_| bad(line_no, "bad colour"))?;
                    let j: usize = j.parse().map_err(|_| bad(line_no, "bad colour"))?;
                    if i == 0 || j == 0 {
                        return Err(bad(line_no, "colours are 1-based"));
                    }
                    if ids.insert(id.to_string(), names.len()).is_some() {
                        return Err(bad(line_no, "duplicate vertex"));
                    }
                    names.push(id.to_string());
                    labels.push((i, j));
                }
                ["e", a, op, b] => {
                    let r = match *op {
                        "->" => Relation::Out,
                        "--" => Relation::Undirected,
                        _ => return Err(bad(line_no, "edge operator must be `->` or `--`")),
                    };
                    pending.push((a.to_string(), b.to_string(), r, line_no));
                }
                _ => return Err(bad(line_no, "expected `v <id> <i> <j>` or `e <a> -> <b>`")),
            }
        }
        for (a, b, r, line_no) in pending {
            let a = *ids.get(&a).ok_or(Error::UnknownVertex(a))?;
            let b = *ids.get(&b).ok_or(Error::UnknownVertex(b))?;
            if a == b {
                return Err(bad(line_no, "self loop"));
            }
            edges.push((a, b, r, line_no));
        }
        let mut g = IntersectionGraph::with_vertices(names, labels);
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (a, b, r, line_no) in edges {
            if seen.insert((a.min(b), a.max(b)), line_no).is_some() {
                return Err(bad(line_no, "a pair of vertices may carry only one edge"));
            }
            g.set(a, b, r);
        }
        Ok(g)
    }
}

/// Connected in the requested sense, with every strand carrying an endpoint.
pub fn is_connected_with(d: &ChordDiagram, rule: Connectivity) -> bool {
    if d.strands().iter().any(Vec::is_empty) {
        return false;
    }
    match rule {
        Connectivity::AfterCancellation => IntersectionGraph::of(d).is_connected(),
        Connectivity::Interleaving => {
            // chords are adjacent iff they share a strand; connected iff strands
            // are linked through marked chords
            let k = d.strand_count();
            let mut parent: Vec<usize> = (0..k).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for (i, j) in d.chord_labels() {
                let (a, b) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
                parent[a] = b;
            }
            let root = find(&mut parent, 0);
            (0..k).all(|s| find(&mut parent, s) == root)
        }
    }
}

/// [`is_connected_with`] under the default post-cancellation rule.
pub fn is_connected(d: &ChordDiagram) -> bool {
    is_connected_with(d, Connectivity::AfterCancellation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> IntersectionGraph {
        IntersectionGraph::of(&s.parse().unwrap())
    }

    #[test]
    fn examples() {
        let one = g("k=1 [a a]");
        assert_eq!(one.vertex_count(), 1);
        assert!(!one.is_marked(0));
        assert_eq!(one.edge_count(), 0);

        let cross = g("k=2 [a b][b a]");
        assert!(cross.is_marked(0) && cross.is_marked(1));
        assert_eq!(cross.undirected_edges(), vec![(0, 1)]);
        assert!(cross.directed_edges().is_empty());

        let cancel = g("k=2 [a b][a b]");
        assert_eq!(cancel.edge_count(), 0);

        let knot = g("k=1 [a b a b]");
        assert_eq!(knot.undirected_edges(), vec![(0, 1)]);
        assert_eq!(g("k=1 [a b b a]").edge_count(), 0);

        let arrow = g("k=3 [a][a b][b]");
        assert_eq!(arrow.directed_edges(), vec![(0, 1)]);
        assert_eq!(arrow.label(0), (1, 2));
        assert_eq!(arrow.label(1), (2, 3));
    }

    #[test]
    fn semisymmetry() {
        assert!(g("k=2 [a b a][b]").is_semisymmetric());
        let mut h = IntersectionGraph::with_vertices(vec!["u".into(), "m".into()], vec![(1, 1), (1, 2)]);
        h.set(0, 1, Relation::Out);
        assert!(!h.is_semisymmetric());
        assert!(IntersectionGraph::with_vertices(vec![], vec![]).is_semisymmetric());
    }

    #[test]
    fn connectivity() {
        let d = |s: &str| s.parse::<ChordDiagram>().unwrap();
        assert!(is_connected(&d("k=2 [a][a]")));
        assert!(!is_connected(&d("k=1 [a a b b]")));
        assert!(!is_connected(&d("k=2 [a b][a b]")));
        assert!(is_connected_with(&d("k=2 [a b][a b]"), Connectivity::Interleaving));
        assert!(!is_connected(&d("k=2 [a a][]")));
    }

    #[test]
    fn isomorphism_basics() {
        let a = g("k=2 [b c v c b][v]");
        assert!(a.is_isomorphic(&a));
        let b = g("k=2 [v][b c v c b]");
        assert!(!a.is_isomorphic(&b));
        let star20 = g(&ChordDiagram::build_star(2, 0).to_string());
        let star02 = g(&ChordDiagram::build_star(0, 2).to_string());
        assert!(!star20.is_isomorphic(&star02));
        assert_ne!(star20.tree_code(), star02.tree_code());
        // renaming invariance
        assert!(g("k=2 [x y x][y]").is_isomorphic(&g("k=2 [b a b][a]")));
    }

    #[test]
    fn tree_file_roundtrip() {
        let text = "# a path\nv x 1 2\nv y 2 3\n\ne x -> y\n";
        let t = IntersectionGraph::parse_tree_file(text).unwrap();
        assert_eq!(t.directed_edges(), vec![(0, 1)]);
        let again = IntersectionGraph::parse_tree_file(&t.to_tree_file()).unwrap();
        assert_eq!(t, again);
        assert!(IntersectionGraph::parse_tree_file("v a 1 2\ne a -> b\n").is_err());
        assert!(IntersectionGraph::parse_tree_file("v a 1 2\nv b 1 2\ne a -> b\ne b -- a\n").is_err());
    }

    #[test]
    fn dot_output() {
        let dot = g("k=2 [a b][b a]").to_dot();
        assert!(dot.contains("\"a\" [label=\"{1,2}\", peripheries=2];"));
        assert!(dot.contains("\"a\" -> \"b\" [dir=none];"));
        let dot = g("k=3 [a][a b][b]").to_dot();
        assert!(dot.contains("\"a\" -> \"b\";"));
    }
}
