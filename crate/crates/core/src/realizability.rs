//! Deciding whether a labelled directed tree is the intersection graph of a
//! connected diagram.
//!
//! For three or more colours the six structural conditions are checked under
//! every relabelling of the colours. With fewer colours the question is
//! settled by exhaustive search.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::ChordDiagram;
use crate::enumerate::{enumerate_diagrams, Limits};
use crate::error::{Error, Result};
use crate::graph::{IntersectionGraph, Relation};
use crate::tree::MarkedTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Conditions,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Condition number, 1 to 6.
    pub condition: u8,
    /// Vertex names witnessing the failure.
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizabilityReport {
    pub accepted: bool,
    pub method: Method,
    /// Colour `c` is renamed `relabeling[c - 1]`; present when accepted.
    pub relabeling: Option<Vec<usize>>,
    /// Failures under the identity labelling; empty when accepted.
    pub violations: Vec<Violation>,
    /// A diagram realizing the tree, when the brute-force route found one.
    pub witness: Option<ChordDiagram>,
}

/// All six conditions for one labelling.
pub fn violations(g: &IntersectionGraph, n: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let name = |v: usize| g.name(v).to_string();
    let vc = g.vertex_count();
    let pairs = || (0..vc).flat_map(move |a| (a + 1..vc).map(move |b| (a, b)));

    for (a, b) in pairs() {
        if g.relation(a, b) != Relation::None {
            let (la, lb) = (g.label(a), g.label(b));
            let share = la.0 == lb.0 || la.0 == lb.1 || la.1 == lb.0 || la.1 == lb.1;
            if !share {
                out.push(Violation { condition: 1, witnesses: vec![name(a), name(b)] });
            }
        }
    }

    for v in 0..vc {
        if !g.is_marked(v) {
            for u in g.neighbors(v) {
                if g.relation(v, u) != Relation::Undirected {
                    out.push(Violation { condition: 2, witnesses: vec![name(v), name(u)] });
                }
            }
        }
    }

    for (a, b) in pairs() {
        let (la, lb) = (g.label(a), g.label(b));
        if !g.is_marked(a) || !g.is_marked(b) || la == lb {
            continue;
        }
        let common = [la.0, la.1].into_iter().filter(|c| *c == lb.0 || *c == lb.1).count();
        if common == 1 && !matches!(g.relation(a, b), Relation::Out | Relation::In) {
            out.push(Violation { condition: 3, witnesses: vec![name(a), name(b)] });
        }
    }

    let mut m: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for v in (0..vc).filter(|v| g.is_marked(*v)) {
        m.entry(g.label(v)).or_default().push(v);
    }
    for (&(i, j), vs) in &m {
        if j - i > 1 {
            out.push(Violation { condition: 4, witnesses: vs.iter().map(|v| name(*v)).collect() });
        }
    }

    let count = |i: usize| m.get(&(i, i + 1)).map_or(0, Vec::len);
    for i in 1..n {
        let ok = if i == 1 || i == n - 1 { count(i) >= 1 } else { count(i) == 1 };
        if !ok {
            let w = m.get(&(i, i + 1)).map(|vs| vs.iter().map(|v| name(*v)).collect()).unwrap_or_default();
            out.push(Violation { condition: 5, witnesses: w });
        }
    }

    // components of the undirected-edge subgraph hold at most one marked vertex
    let mut comp = vec![usize::MAX; vc];
    for s in 0..vc {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = s;
        let mut marked = Vec::new();
        while let Some(v) = stack.pop() {
            if g.is_marked(v) {
                marked.push(v);
            }
            for u in g.neighbors(v) {
                if g.relation(v, u) == Relation::Undirected && comp[u] == usize::MAX {
                    comp[u] = s;
                    stack.push(u);
                }
            }
        }
        if marked.len() > 1 {
            marked.sort_unstable();
            out.push(Violation { condition: 6, witnesses: marked.into_iter().map(name).collect() });
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                cur.push(c + 1);
                go(cur, used, out);
                cur.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Applies the six conditions for `n >= 3`, searching relabellings in
/// lexicographic order. Smaller colour counts go to the brute-force oracle
/// with the given limits.
pub fn check_realizable(t: &MarkedTree, limits: &Limits) -> Result<RealizabilityReport> {
    let n = t.colors();
    if n < 3 {
        let witness = brute_force_realizable(t, limits)?;
        return Ok(RealizabilityReport {
            accepted: witness.is_some(),
            method: Method::BruteForce,
            relabeling: witness.as_ref().map(|_| (1..=n).collect()),
            violations: Vec::new(),
            witness,
        });
    }
    let g = t.graph();
    for perm in permutations(n) {
        if violations(&g.relabeled(&perm), n).is_empty() {
            return Ok(RealizabilityReport {
                accepted: true,
                method: Method::Conditions,
                relabeling: Some(perm),
                violations: Vec::new(),
                witness: None,
            });
        }
    }
    Ok(RealizabilityReport {
        accepted: false,
        method: Method::Conditions,
        relabeling: None,
        violations: violations(g, n),
        witness: None,
    })
}

/// Every strand carries at least one endpoint.
fn uses_all_strands(d: &ChordDiagram) -> bool {
    d.strands().iter().all(|s| !s.is_empty())
}

/// First diagram in enumeration order, among those using every strand, whose
/// intersection graph is isomorphic to the tree.
pub fn brute_force_realizable(t: &MarkedTree, limits: &Limits) -> Result<Option<ChordDiagram>> {
    let g = t.graph();
    let all = enumerate_diagrams(g.vertex_count(), t.colors(), limits)?;
    Ok(all
        .into_par_iter()
        .filter(uses_all_strands)
        .find_first(|d| IntersectionGraph::of(d).is_isomorphic(g)))
}

/// Tree codes of all realizable trees of one degree and colour count, each
/// with its first witness.
#[derive(Clone, Debug)]
pub struct RealizationIndex {
    degree: usize,
    colors: usize,
    witnesses: HashMap<String, ChordDiagram>,
}

impl RealizationIndex {
    pub fn build(degree: usize, colors: usize, limits: &Limits) -> Result<Self> {
        let all = enumerate_diagrams(degree, colors, limits)?;
        let coded: Vec<(String, ChordDiagram)> = all
            .into_par_iter()
            .filter(uses_all_strands)
            .filter_map(|d| IntersectionGraph::of(&d).tree_code().map(|c| (c, d)))
            .collect();
        let mut witnesses = HashMap::new();
        for (c, d) in coded {
            witnesses.entry(c).or_insert(d);
        }
        Ok(Self { degree, colors, witnesses })
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn witness(&self, t: &MarkedTree) -> Result<Option<&ChordDiagram>> {
        if t.colors() != self.colors || t.graph().vertex_count() != self.degree {
            return Err(Error::Constraint(format!(
                "index covers degree {} on {} colours",
                self.degree, self.colors
            )));
        }
        let code = t.graph().tree_code().ok_or(Error::NotATree)?;
        Ok(self.witnesses.get(&code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(text: &str, n: usize) -> MarkedTree {
        MarkedTree::parse(text, Some(n)).unwrap()
    }

    #[test]
    fn arrow_accepted() {
        let t = tree("v x 1 2\nv y 2 3\ne x -> y\n", 3);
        let r = check_realizable(&t, &Limits::default()).unwrap();
        assert!(r.accepted);
        assert_eq!(r.relabeling, Some(vec![1, 2, 3]));
        let w = brute_force_realizable(&t, &Limits::default()).unwrap().unwrap();
        assert!(IntersectionGraph::of(&w).is_isomorphic(t.graph()));
    }

    #[test]
    fn undirected_marked_pair_rejected() {
        let t = tree("v x 1 2\nv y 2 3\ne x -- y\n", 3);
        let r = check_realizable(&t, &Limits::default()).unwrap();
        assert!(!r.accepted);
        assert!(r.violations.iter().any(|v| v.condition == 6));
    }

    #[test]
    fn single_long_chord_rejected() {
        let t = tree("v x 1 3\n", 3);
        assert!(!check_realizable(&t, &Limits::default()).unwrap().accepted);
        assert_eq!(brute_force_realizable(&t, &Limits::default()).unwrap(), None);
    }

    #[test]
    fn brute_force_examples() {
        let lim = Limits::default();
        let w = brute_force_realizable(&tree("v a 1 2\n", 2), &lim).unwrap().unwrap();
        assert_eq!(w.to_string(), "k=2 [a][a]");
        let w = brute_force_realizable(&tree("v a 1 1\nv b 1 1\ne a -- b\n", 1), &lim)
            .unwrap()
            .unwrap();
        assert_eq!(w.to_string(), "k=1 [a b a b]");
        let none = brute_force_realizable(&tree("v a 1 2\nv b 1 2\ne a -> b\n", 2), &lim).unwrap();
        assert_eq!(none, None);
    }

    #[test]
    fn two_colours_use_brute_force() {
        let t = tree("v x 1 2\nv y 1 2\ne x -- y\n", 2);
        let r = check_realizable(&t, &Limits::default()).unwrap();
        assert_eq!(r.method, Method::BruteForce);
        assert!(r.accepted);
    }

    #[test]
    fn index_matches_scan() {
        let lim = Limits::default();
        let idx = RealizationIndex::build(2, 3, &lim).unwrap();
        let t = tree("v x 1 2\nv y 2 3\ne y -> x\n", 3);
        assert!(idx.witness(&t).unwrap().is_some());
        assert_eq!(permutations(3).len(), 6);
    }
}
