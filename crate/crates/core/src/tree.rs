//! Boughs, trunks and trimmed trees.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::IntersectionGraph;

/// A labelled directed tree with a fixed number of colours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedTree {
    graph: IntersectionGraph,
    colors: usize,
}

impl MarkedTree {
    pub fn new(graph: IntersectionGraph, colors: usize) -> Result<Self> {
        if !graph.is_tree() {
            return Err(Error::NotATree);
        }
        for &(i, j) in graph.labels() {
            if i == 0 || j > colors {
                return Err(Error::LabelOutOfRange(i, j, colors));
            }
        }
        Ok(Self { graph, colors })
    }

    /// Uses the largest colour that appears in a label.
    pub fn infer_colors(graph: IntersectionGraph) -> Result<Self> {
        let colors = graph.labels().iter().map(|l| l.1).max().unwrap_or(1);
        Self::new(graph, colors)
    }

    pub fn parse(text: &str, colors: Option<usize>) -> Result<Self> {
        let g = IntersectionGraph::parse_tree_file(text)?;
        match colors {
            Some(n) => Self::new(g, n),
            None => Self::infer_colors(g),
        }
    }

    pub fn graph(&self) -> &IntersectionGraph {
        &self.graph
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.graph
            .vertex_by_name(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn bough_report(&self, v: usize) -> Result<BoughReport> {
        if v >= self.graph.vertex_count() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(bough_report(&self.graph, v))
    }

    pub fn trunks(&self) -> Vec<usize> {
        trunks(&self.graph)
    }

    pub fn is_trimmed(&self) -> bool {
        !self.trunks().is_empty()
    }

    pub fn chosen_trunk(&self) -> Option<usize> {
        chosen_trunk(&self.graph)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bough {
    pub vertices: BTreeSet<usize>,
    pub light: bool,
    /// Number of marked vertices in the bough.
    pub marked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoughReport {
    pub vertex: usize,
    /// Ordered by smallest vertex.
    pub boughs: Vec<Bough>,
}

impl BoughReport {
    pub fn all_light(&self) -> bool {
        self.boughs.iter().all(|b| b.light)
    }

    pub fn heavy(&self) -> Vec<&Bough> {
        self.boughs.iter().filter(|b| !b.light).collect()
    }
}

/// Components of `g` minus `v`. A bough is light when it holds at most one
/// marked vertex and that vertex is adjacent to `v`.
pub fn bough_report(g: &IntersectionGraph, v: usize) -> BoughReport {
    let mut boughs = Vec::new();
    let mut seen = BTreeSet::from([v]);
    let mut starts: Vec<usize> = g.neighbors(v).collect();
    starts.sort_unstable();
    for s in starts {
        if seen.contains(&s) {
            continue;
        }
        let vertices = g.component_of(s, Some(v));
        seen.extend(vertices.iter().copied());
        let marked: Vec<usize> = vertices.iter().copied().filter(|u| g.is_marked(*u)).collect();
        let light = match marked.as_slice() {
            [] => true,
            [m] => g.relation(v, *m) != crate::graph::Relation::None,
            _ => false,
        };
        boughs.push(Bough {
            vertices,
            light,
            marked: marked.len(),
        });
    }
    boughs.sort_by_key(|b| *b.vertices.first().expect("nonempty"));
    BoughReport { vertex: v, boughs }
}

/// Vertices all of whose boughs are light.
pub fn trunks(g: &IntersectionGraph) -> Vec<usize> {
    (0..g.vertex_count())
        .filter(|&v| bough_report(g, v).all_light())
        .collect()
}

pub fn is_trimmed_tree(g: &IntersectionGraph) -> bool {
    g.is_tree() && !trunks(g).is_empty()
}

/// The trunk whose rooted code is smallest; ties go to the lower index.
pub fn chosen_trunk(g: &IntersectionGraph) -> Option<usize> {
    if !g.is_tree() {
        return None;
    }
    trunks(g)
        .into_iter()
        .map(|v| (g.rooted_code(v), v))
        .min()
        .map(|(_, v)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Relation;

    fn tree(text: &str) -> MarkedTree {
        MarkedTree::parse(text, None).unwrap()
    }

    #[test]
    fn star_report() {
        let t = tree("v u1 1 1\nv m 1 2\nv u2 2 2\ne u1 -- m\ne m -- u2\n");
        let r = t.bough_report(0).unwrap();
        assert_eq!(r.boughs.len(), 1);
        assert_eq!(r.boughs[0].vertices, BTreeSet::from([1, 2]));
        assert!(r.boughs[0].light);
        assert_eq!(t.trunks(), vec![0, 1, 2]);
    }

    #[test]
    fn heavy_bough() {
        let t = tree("v u1 1 1\nv m 1 2\nv u2 2 2\nv u3 2 2\ne u1 -- m\ne m -- u2\ne u2 -- u3\n");
        let r = t.bough_report(3).unwrap();
        assert_eq!(r.boughs.len(), 1);
        assert!(!r.boughs[0].light);
        for leaf in [0, 3] {
            assert_eq!(t.bough_report(leaf).unwrap().boughs.len(), 1);
        }
    }

    #[test]
    fn untrimmed_path() {
        // m1 - u1 - u2 - u3 - m2: every vertex sees a marked vertex at distance two
        let t = tree(
            "v m1 1 2\nv u1 1 1\nv u2 1 1\nv u3 2 2\nv m2 1 2\n\
             e m1 -- u1\ne u1 -- u2\ne u2 -- u3\ne u3 -- m2\n",
        );
        assert!(t.trunks().is_empty());
        assert!(!t.is_trimmed());
        assert_eq!(t.chosen_trunk(), None);
    }

    #[test]
    fn marked_center() {
        let mut g = IntersectionGraph::with_vertices(
            vec!["v".into(), "b".into(), "c".into()],
            vec![(1, 2), (1, 1), (2, 2)],
        );
        g.set(0, 1, Relation::Undirected);
        g.set(0, 2, Relation::Undirected);
        let t = MarkedTree::new(g, 2).unwrap();
        assert!(t.trunks().contains(&0));
        assert!(MarkedTree::new(t.graph().clone(), 1).is_err());
    }
}
