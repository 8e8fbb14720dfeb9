//! Building a diagram from a realizable tree.
//!
//! Two-strand trees are assembled around their trunk: unmarked boughs nest
//! around the endpoint of their parent chord, innermost first in rooted-code
//! order, and marked neighbours of the trunk form one block. Trees on three
//! or more strands are cut along their directed edges; each piece is a
//! two-strand tree around its marked vertex, and the pieces are stacked in
//! the order the directed edges dictate.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::ChordDiagram;
use crate::enumerate::Limits;
use crate::error::{Error, Result};
use crate::graph::{IntersectionGraph, Relation};
use crate::realizability::{brute_force_realizable, check_realizable};
use crate::tree::{chosen_trunk, MarkedTree};

/// Children of `v` away from `parent`, sorted by subtree code then index.
fn children(g: &IntersectionGraph, v: usize, parent: Option<usize>, keep: &dyn Fn(usize) -> bool) -> Vec<usize> {
    let mut c: Vec<(String, usize)> = g
        .neighbors(v)
        .filter(|u| Some(*u) != parent && keep(*u))
        .map(|u| (g.subtree_code(u, Some(v)), u))
        .collect();
    c.sort();
    c.into_iter().map(|(_, u)| u).collect()
}

/// Endpoint of `x` wrapped by `kids`: the outermost kid's block comes first,
/// each kid's lower endpoint is wrapped by its own children and its upper
/// endpoint is bare.
fn wrap(g: &IntersectionGraph, x: usize, kids: &[usize], out: &mut Vec<usize>) {
    for &c in kids.iter().rev() {
        let grand = children(g, c, Some(x), &|_| true);
        wrap(g, c, &grand, out);
    }
    out.push(x);
    out.extend(kids.iter().copied());
}

/// Unmarked children of `v` on colour `color`.
fn unmarked_on(g: &IntersectionGraph, v: usize, parent: Option<usize>, color: usize) -> Vec<usize> {
    children(g, v, parent, &|u| !g.is_marked(u) && g.label(u).0 == color)
}

/// Strands for the piece of `g` reachable from `root` through `members`,
/// keyed by colour. Chord ids are vertex indices of `g`.
fn build_piece(g: &IntersectionGraph, root: usize, members: &BTreeSet<usize>) -> Result<BTreeMap<usize, Vec<usize>>> {
    let mut strands: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let in_piece = |u: usize| members.contains(&u);
    let (ci, cj) = g.label(root);
    for u in g.neighbors(root).filter(|u| in_piece(*u)) {
        if g.relation(root, u) != Relation::Undirected {
            return Err(Error::Infeasible(format!(
                "edge {}-{} inside a piece must be undirected",
                g.name(root),
                g.name(u)
            )));
        }
        let (a, b) = g.label(u);
        if g.is_marked(u) && g.is_marked(root) && g.label(u) != g.label(root) {
            return Err(Error::Infeasible("marked neighbours of a marked trunk must join the same strands".into()));
        }
        let touches = a == ci || a == cj || b == ci || b == cj;
        if !touches {
            return Err(Error::Infeasible(format!("{} shares no colour with the trunk", g.name(u))));
        }
    }
    let marked_nb: Vec<usize> = children(g, root, None, &|u| in_piece(u) && g.is_marked(u));
    if ci != cj {
        let u1 = unmarked_on(g, root, None, ci);
        let u2 = unmarked_on(g, root, None, cj);
        // v below its marked neighbours on one strand, above them on the other
        let lower = strands.entry(ci).or_default();
        wrap(g, root, &u1, lower);
        for &y in &marked_nb {
            wrap(g, y, &unmarked_on(g, y, Some(root), ci), lower);
        }
        let upper = strands.entry(cj).or_default();
        for &y in &marked_nb {
            wrap(g, y, &unmarked_on(g, y, Some(root), cj), upper);
        }
        wrap(g, root, &u2, upper);
        let extra: Vec<usize> = g
            .neighbors(root)
            .filter(|u| in_piece(*u) && !u1.contains(u) && !u2.contains(u) && !marked_nb.contains(u))
            .collect();
        if let Some(u) = extra.first() {
            return Err(Error::Infeasible(format!("{} cannot cross the trunk", g.name(*u))));
        }
        return Ok(strands);
    }
    // unmarked trunk on colour s
    let s = ci;
    let u = unmarked_on(g, root, None, s);
    let mut main = Vec::new();
    wrap(g, root, &u, &mut main);
    let mut other: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &y in &marked_nb {
        let (a, b) = g.label(y);
        let o = if a == s { b } else { a };
        wrap(g, y, &unmarked_on(g, y, Some(root), s), &mut main);
        wrap(g, y, &unmarked_on(g, y, Some(root), o), other.entry(o).or_default());
    }
    main.push(root);
    let covered = u.len() + marked_nb.len();
    if covered != g.neighbors(root).filter(|x| in_piece(*x)).count() {
        return Err(Error::Infeasible("a neighbour of the trunk lies on the wrong strand".into()));
    }
    strands.insert(s, main);
    for (c, seq) in other {
        strands.entry(c).or_default().extend(seq);
    }
    Ok(strands)
}

/// Diagram realizing a trimmed tree on one or two colours.
pub fn reconstruct_2strand(t: &MarkedTree) -> Result<ChordDiagram> {
    let g = t.graph();
    let k = t.colors();
    if k > 2 {
        return Err(Error::Constraint(format!("two-strand reconstruction needs at most 2 colours, got {k}")));
    }
    if !g.directed_edges().is_empty() {
        return Err(Error::Infeasible("directed edges cannot occur on two strands".into()));
    }
    let trunk = chosen_trunk(g).ok_or(Error::NotTrimmed)?;
    let all: BTreeSet<usize> = (0..g.vertex_count()).collect();
    let pieces = build_piece(g, trunk, &all)?;
    let strands: Vec<Vec<usize>> = (1..=k).map(|c| pieces.get(&c).cloned().unwrap_or_default()).collect();
    finish(g, strands)
}

fn finish(g: &IntersectionGraph, strands: Vec<Vec<usize>>) -> Result<ChordDiagram> {
    let placed: usize = strands.iter().map(Vec::len).sum();
    if placed != 2 * g.vertex_count() {
        return Err(Error::Infeasible("some vertices could not be placed".into()));
    }
    let d = ChordDiagram::from_strands(strands)?;
    if IntersectionGraph::of(&d).is_isomorphic(g) {
        Ok(d)
    } else {
        Err(Error::Infeasible(format!("construction {d} does not realize the tree")))
    }
}

/// Pieces of an accepted n-strand tree, ready to be stacked.
struct Plan {
    sigma: Vec<usize>,
    built: Vec<BTreeMap<usize, Vec<usize>>>,
    /// `after[i]` holds the pieces that must sit above piece `i`.
    after: Vec<BTreeSet<usize>>,
    /// Tie-break key per piece.
    rank: Vec<(String, usize)>,
}

fn plan(t: &MarkedTree, limits: &Limits) -> Result<Plan> {
    let n = t.colors();
    if n < 3 {
        return Err(Error::TooFewColors { min: 3, got: n });
    }
    let report = check_realizable(t, limits)?;
    let Some(sigma) = report.relabeling.filter(|_| report.accepted) else {
        let why: Vec<String> = report
            .violations
            .iter()
            .map(|v| format!("condition {} ({})", v.condition, v.witnesses.join(",")))
            .collect();
        return Err(Error::Rejected(why.join("; ")));
    };
    let g = t.graph().relabeled(&sigma);
    let vc = g.vertex_count();

    // pieces: components of the undirected-edge forest
    let mut piece = vec![usize::MAX; vc];
    let mut pieces: Vec<BTreeSet<usize>> = Vec::new();
    for s in 0..vc {
        if piece[s] != usize::MAX {
            continue;
        }
        let id = pieces.len();
        let mut set = BTreeSet::from([s]);
        let mut stack = vec![s];
        piece[s] = id;
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if g.relation(v, u) == Relation::Undirected && piece[u] == usize::MAX {
                    piece[u] = id;
                    set.insert(u);
                    stack.push(u);
                }
            }
        }
        pieces.push(set);
    }
    let roots: Vec<usize> = pieces
        .iter()
        .map(|p| {
            let marked: Vec<usize> = p.iter().copied().filter(|v| g.is_marked(*v)).collect();
            match marked.as_slice() {
                [m] => Ok(*m),
                _ => Err(Error::Infeasible("each undirected piece needs exactly one marked vertex".into())),
            }
        })
        .collect::<Result<_>>()?;
    let built: Vec<BTreeMap<usize, Vec<usize>>> = pieces
        .iter()
        .zip(&roots)
        .map(|(p, r)| build_piece(&g, *r, p))
        .collect::<Result<_>>()?;

    // x -> y puts the piece of x below the piece of y
    let mut after: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); pieces.len()];
    for (x, y) in g.directed_edges() {
        after[piece[x]].insert(piece[y]);
    }
    let rank = roots.iter().enumerate().map(|(i, r)| (g.rooted_code(*r), i)).collect();
    Ok(Plan { sigma, built, after, rank })
}

impl Plan {
    fn indegrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.built.len()];
        for a in &self.after {
            for &j in a {
                d[j] += 1;
            }
        }
        d
    }

    /// Topological order with ties broken by rooted code.
    fn default_order(&self) -> Result<Vec<usize>> {
        let mut indegree = self.indegrees();
        let mut ready: BTreeSet<(String, usize)> =
            self.rank.iter().filter(|(_, i)| indegree[*i] == 0).cloned().collect();
        let mut order = Vec::with_capacity(self.built.len());
        while let Some((_, i)) = ready.pop_first() {
            order.push(i);
            for &j in &self.after[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.insert(self.rank[j].clone());
                }
            }
        }
        if order.len() != self.built.len() {
            return Err(Error::Infeasible("directed edges form a cycle in the stacking order".into()));
        }
        Ok(order)
    }

    /// Every topological order, up to `cap` of them.
    fn all_orders(&self, cap: usize) -> Vec<Vec<usize>> {
        fn go(p: &Plan, indegree: &mut Vec<usize>, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) {
            if out.len() >= cap {
                return;
            }
            if cur.len() == used.len() {
                out.push(cur.clone());
                return;
            }
            for i in 0..used.len() {
                if used[i] || indegree[i] > 0 {
                    continue;
                }
                used[i] = true;
                cur.push(i);
                for &j in &p.after[i] {
                    indegree[j] -= 1;
                }
                go(p, indegree, used, cur, out, cap);
                for &j in &p.after[i] {
                    indegree[j] += 1;
                }
                cur.pop();
                used[i] = false;
            }
        }
        let mut out = Vec::new();
        let n = self.built.len();
        go(self, &mut self.indegrees(), &mut vec![false; n], &mut Vec::new(), &mut out, cap);
        out
    }

    fn assemble(&self, original: &IntersectionGraph, order: &[usize]) -> Result<ChordDiagram> {
        let n = self.sigma.len();
        let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for &i in order {
            for (c, seq) in &self.built[i] {
                by_color[*c].extend(seq.iter().copied());
            }
        }
        // original colour c was renamed sigma(c)
        let strands: Vec<Vec<usize>> = (1..=n).map(|c| by_color[self.sigma[c - 1]].clone()).collect();
        finish(original, strands)
    }
}

/// Diagram realizing a tree accepted by the realizability conditions on
/// three or more colours.
pub fn reconstruct_nstrand(t: &MarkedTree, limits: &Limits) -> Result<ChordDiagram> {
    let p = plan(t, limits)?;
    p.assemble(t.graph(), &p.default_order()?)
}

/// Distinct diagrams from every admissible stacking order of the pieces,
/// sorted by canonical code. At most `cap` orders are tried.
pub fn stacking_variants(t: &MarkedTree, limits: &Limits, cap: usize) -> Result<Vec<ChordDiagram>> {
    let p = plan(t, limits)?;
    let mut out: Vec<ChordDiagram> = p
        .all_orders(cap)
        .iter()
        .filter_map(|o| p.assemble(t.graph(), o).ok())
        .collect();
    out.sort_by_key(|d| d.code());
    out.dedup();
    Ok(out)
}

/// Dispatches on the colour count. On one or two colours a tree that is not
/// trimmed falls back to exhaustive search.
pub fn reconstruct(t: &MarkedTree, limits: &Limits) -> Result<ChordDiagram> {
    if t.colors() > 2 {
        return reconstruct_nstrand(t, limits);
    }
    match reconstruct_2strand(t) {
        Err(Error::NotTrimmed) => brute_force_realizable(t, limits)?
            .ok_or_else(|| Error::Rejected("no diagram realizes this tree".into())),
        other => other,
    }
}

/// Reconstructs and checks that the intersection graph comes back.
/// Trees that cannot be realized are errors.
pub fn round_trip_check(t: &MarkedTree, limits: &Limits) -> Result<bool> {
    let d = reconstruct(t, limits)?;
    Ok(IntersectionGraph::of(&d).is_isomorphic(t.graph()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(text: &str, n: usize) -> MarkedTree {
        MarkedTree::parse(text, Some(n)).unwrap()
    }

    fn d(s: &str) -> ChordDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn two_strand_examples() {
        assert_eq!(reconstruct_2strand(&tree("v a 1 2\n", 2)).unwrap(), d("k=2 [a][a]"));
        let star = tree("v a 1 2\nv b 1 1\ne a -- b\n", 2);
        assert_eq!(reconstruct_2strand(&star).unwrap(), d("k=2 [b a b][a]"));
        let path = tree("v u 1 1\nv m 1 2\nv w 2 2\ne u -- m\ne m -- w\n", 2);
        assert_eq!(reconstruct_2strand(&path).unwrap(), d("k=2 [u m u][w m w]"));
    }

    #[test]
    fn n_strand_examples() {
        let lim = Limits::default();
        let up = tree("v x 1 2\nv y 2 3\ne x -> y\n", 3);
        assert_eq!(reconstruct_nstrand(&up, &lim).unwrap(), d("k=3 [x][x y][y]"));
        let down = tree("v x 1 2\nv y 2 3\ne y -> x\n", 3);
        assert_eq!(reconstruct_nstrand(&down, &lim).unwrap(), d("k=3 [x][y x][y]"));
        let two = tree("v x1 1 2\nv x2 1 2\nv y 2 3\ne x1 -> y\ne x2 -> y\n", 3);
        assert_eq!(reconstruct_nstrand(&two, &lim).unwrap(), d("k=3 [a b][a b c][c]"));
    }

    #[test]
    fn rejected_is_error() {
        let lim = Limits::default();
        let bad = tree("v x 1 2\nv y 2 3\ne x -- y\n", 3);
        assert!(matches!(round_trip_check(&bad, &lim), Err(Error::Rejected(_))));
        assert!(round_trip_check(&tree("v a 1 2\n", 2), &lim).unwrap());
    }

    #[test]
    fn untrimmed_is_error() {
        let t = tree(
            "v m1 1 2\nv u1 1 1\nv u2 1 1\nv u3 2 2\nv m2 1 2\n\
             e m1 -- u1\ne u1 -- u2\ne u2 -- u3\ne u3 -- m2\n",
            2,
        );
        assert_eq!(reconstruct_2strand(&t), Err(Error::NotTrimmed));
    }
}
