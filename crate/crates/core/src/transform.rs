//! Elementary transformations of diagrams whose intersection graph is a tree.
//!
//! A light bough of a chord is a share: its chords fill two runs of slots and
//! nothing else lives there. Every move here lifts such a bough out and puts
//! its runs back elsewhere, keeping the intersection graph identical with
//! chord identities preserved.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::diagram::{endpoint_table, runs_of, ChordDiagram};
use crate::error::{Error, Result};
use crate::graph::{IntersectionGraph, Relation};
use crate::tree::{bough_report, chosen_trunk, is_trimmed_tree, trunks};

/// Default node cap for [`orbit`].
pub const DEFAULT_ORBIT_CAP: usize = 100_000;

/// DFS budget for [`permute_boughs`] placements.
const PLACEMENT_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoughInfo {
    pub chords: BTreeSet<usize>,
    /// The chord of the bough adjacent to `w`.
    pub neighbor: usize,
    pub marked: usize,
    pub light: bool,
    /// 1-based strands carrying endpoints of the bough.
    pub strands: BTreeSet<usize>,
    /// Side class along `w`: for a marked `w` joining strands `a < b`, 0 means
    /// an unmarked bough on `a`, 1 a marked bough, 2 an unmarked bough on `b`.
    /// Always 0 when `w` is unmarked.
    pub group: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoughDecomposition {
    pub chord: usize,
    pub is_trunk: bool,
    /// Boughs in crossing order along the chord.
    pub boughs: Vec<BoughInfo>,
}

impl BoughDecomposition {
    pub fn heavy(&self) -> Option<usize> {
        self.boughs.iter().position(|b| !b.light)
    }
}

type Key = (u8, i64);

/// Position of the neighbour `u` along `w`.
fn crossing_key(ends: &[[(usize, usize); 2]], w: usize, u: usize) -> Key {
    let [(sw0, pw0), (sw1, pw1)] = ends[w];
    let [(su0, pu0), (su1, pu1)] = ends[u];
    if sw0 == sw1 {
        // the endpoint of u that lies inside w
        let inside = [(su0, pu0), (su1, pu1)]
            .into_iter()
            .find(|&(s, p)| s == sw0 && p > pw0 && p < pw1)
            .or_else(|| [(su0, pu0), (su1, pu1)].into_iter().find(|&(s, _)| s == sw0))
            .unwrap_or((su0, pu0));
        return (0, inside.1 as i64);
    }
    let (a, b) = (sw0.min(sw1), sw0.max(sw1));
    if su0 == su1 {
        let span = (pu1 - pu0) as i64;
        return if su0 == a { (0, span) } else if su0 == b { (2, -span) } else { (1, pu0 as i64) };
    }
    let pos = [(su0, pu0), (su1, pu1)]
        .into_iter()
        .find(|&(s, _)| s == a)
        .or_else(|| [(su0, pu0), (su1, pu1)].into_iter().find(|&(s, _)| s == b))
        .map_or(0, |(_, p)| p as i64);
    (1, pos)
}

fn layout(strands: &[Vec<usize>], g: &IntersectionGraph, w: usize) -> Vec<(Key, BoughInfo)> {
    let ends = endpoint_table(strands, g.vertex_count());
    let report = bough_report(g, w);
    let mut out: Vec<(Key, BoughInfo)> = report
        .boughs
        .into_iter()
        .map(|b| {
            let neighbor = *b
                .vertices
                .iter()
                .find(|u| g.relation(w, **u) != Relation::None)
                .expect("a bough touches its vertex");
            let key = crossing_key(&ends, w, neighbor);
            let strands_used = b
                .vertices
                .iter()
                .flat_map(|c| ends[*c].iter().map(|(s, _)| s + 1))
                .collect();
            (
                key,
                BoughInfo {
                    chords: b.vertices,
                    neighbor,
                    marked: b.marked,
                    light: b.light,
                    strands: strands_used,
                    group: key.0,
                },
            )
        })
        .collect();
    out.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.neighbor.cmp(&y.1.neighbor)));
    out
}

/// Boughs of chord `w` in crossing order.
pub fn decompose(d: &ChordDiagram, w: usize) -> Result<BoughDecomposition> {
    if w >= d.degree() {
        return Err(Error::UnknownChord(w.to_string()));
    }
    let g = IntersectionGraph::of(d);
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let trunk = chosen_trunk(&g);
    Ok(BoughDecomposition {
        chord: w,
        is_trunk: trunk == Some(w),
        boughs: layout(d.strands(), &g, w).into_iter().map(|(_, b)| b).collect(),
    })
}

/// True when the relations among `present` chords match `target` exactly.
fn consistent(strands: &[Vec<usize>], present: &[bool], target: &IntersectionGraph) -> bool {
    let n = target.vertex_count();
    let mut parity = vec![vec![false; n]; n];
    let mut first = vec![usize::MAX; n];
    for (s, strand) in strands.iter().enumerate() {
        for (i, &x) in strand.iter().enumerate() {
            if first[x] == usize::MAX {
                first[x] = s;
            } else if (first[x].min(s) + 1, first[x].max(s) + 1) != target.label(x) {
                return false;
            }
            for &y in &strand[i + 1..] {
                if x != y {
                    parity[x][y] ^= true;
                }
            }
        }
    }
    for a in (0..n).filter(|a| present[*a]) {
        for b in (a + 1..n).filter(|b| present[*b]) {
            let r = match (parity[a][b], parity[b][a]) {
                (true, true) => Relation::Undirected,
                (true, false) => Relation::Out,
                (false, true) => Relation::In,
                (false, false) => Relation::None,
            };
            if r != target.relation(a, b) {
                return false;
            }
        }
    }
    true
}

/// The chords of `set` lifted out as runs, plus what remains.
struct Lifted {
    base: Vec<Vec<usize>>,
    /// Run contents with the base gap they came from, `(strand, gap)`.
    runs: Vec<(Vec<usize>, (usize, usize))>,
}

fn lift(strands: &[Vec<usize>], set: &BTreeSet<usize>) -> Lifted {
    let arcs = runs_of(strands, |c| set.contains(&c));
    let mut runs = Vec::new();
    for arc in &arcs {
        let s = arc.strand - 1;
        let removed_below = strands[s][..arc.start].iter().filter(|c| set.contains(c)).count();
        let content = strands[s][arc.start..arc.start + arc.len].to_vec();
        runs.push((content, (s, arc.start - removed_below)));
    }
    let base = strands
        .iter()
        .map(|st| st.iter().copied().filter(|c| !set.contains(c)).collect())
        .collect();
    Lifted { base, runs }
}

/// Inserts runs at `(strand, gap)` positions of `base`; gaps refer to `base`.
/// Runs sharing a gap are stacked in the given order.
fn place(base: &[Vec<usize>], runs: &[(&[usize], (usize, usize))]) -> Vec<Vec<usize>> {
    let mut out = base.to_vec();
    let mut order: Vec<usize> = (0..runs.len()).collect();
    // insert from the top so earlier gaps stay valid; ties keep list order
    order.sort_by(|&x, &y| runs[y].1.cmp(&runs[x].1).then(y.cmp(&x)));
    for i in order {
        let (content, (s, gap)) = runs[i];
        out[s].splice(gap..gap, content.iter().copied());
    }
    out
}

fn all_gaps(base: &[Vec<usize>]) -> Vec<(usize, usize)> {
    base.iter()
        .enumerate()
        .flat_map(|(s, st)| (0..=st.len()).map(move |p| (s, p)))
        .collect()
}

/// Every diagram reachable by relocating the light bough `set` of some chord,
/// keeping the intersection graph identical.
fn relocations(strands: &[Vec<usize>], g: &IntersectionGraph, set: &BTreeSet<usize>) -> Vec<Vec<Vec<usize>>> {
    let lifted = lift(strands, set);
    let gaps = all_gaps(&lifted.base);
    let present = vec![true; g.vertex_count()];
    let mut out = Vec::new();
    match lifted.runs.as_slice() {
        [(r, _)] => {
            for &gp in &gaps {
                let s = place(&lifted.base, &[(r, gp)]);
                if consistent(&s, &present, g) {
                    out.push(s);
                }
            }
        }
        [(r1, _), (r2, _)] => {
            for &g1 in &gaps {
                for &g2 in &gaps {
                    for (a, b) in [(r1, r2), (r2, r1)] {
                        let s = place(&lifted.base, &[(a, g1), (b, g2)]);
                        if consistent(&s, &present, g) {
                            out.push(s);
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Chord sets of all light boughs in the graph, each listed once.
fn light_boughs(g: &IntersectionGraph) -> BTreeMap<BTreeSet<usize>, usize> {
    let mut out = BTreeMap::new();
    for w in 0..g.vertex_count() {
        for b in bough_report(g, w).boughs {
            if b.light {
                out.entry(b.vertices).or_insert(w);
            }
        }
    }
    out
}

/// Kind of an elementary move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum MoveKind {
    /// A light bough relocated along the same side of its chord.
    Permute,
    /// An unmarked bough carried from one end of an unmarked chord to the other.
    EndToEnd,
    /// Marked boughs reflected across a marked trunk.
    Reflect,
}

/// One step of an orbit computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub from: ChordDiagram,
    pub to: ChordDiagram,
    pub kind: MoveKind,
    pub description: String,
}

/// Which end of the unmarked chord `w` the outer endpoint of `u` sits past.
fn end_side(strands: &[Vec<usize>], n: usize, w: usize, u: usize) -> Option<bool> {
    let ends = endpoint_table(strands, n);
    let [(s0, p0), (s1, p1)] = ends[w];
    if s0 != s1 {
        return None;
    }
    ends[u].iter().find_map(|&(s, p)| match s == s0 {
        true if p < p0 => Some(false),
        true if p > p1 => Some(true),
        _ => None,
    })
}

/// Every elementary move available from `d`.
pub fn elementary_moves(d: &ChordDiagram) -> Vec<Move> {
    let g = IntersectionGraph::of(d);
    let n = g.vertex_count();
    let mut out = Vec::new();
    for (set, w) in light_boughs(&g) {
        let names: Vec<String> = set.iter().map(|c| g.name(*c).to_string()).collect();
        let u = *set.iter().find(|c| g.relation(w, **c) != Relation::None).expect("bough touches w");
        let unmarked = set.iter().all(|c| !g.is_marked(*c));
        let before = end_side(d.strands(), n, w, u);
        for s in relocations(d.strands(), &g, &set) {
            let kind = match (before, end_side(&s, n, w, u)) {
                (Some(x), Some(y)) if x != y && unmarked => MoveKind::EndToEnd,
                _ => MoveKind::Permute,
            };
            out.push(Move {
                from: d.clone(),
                to: ChordDiagram::from_valid_strands(&s),
                kind,
                description: format!("move bough {{{}}} of {}", names.join(","), g.name(w)),
            });
        }
    }
    if let Ok(r) = reflect_marked(d) {
        out.push(Move { from: d.clone(), to: r, kind: MoveKind::Reflect, description: "reflect marked boughs".into() });
    }
    out.retain(|m| m.to != m.from);
    out
}

/// The result of an orbit computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Sorted.
    pub diagrams: Vec<ChordDiagram>,
    /// The move that first reached each new diagram, in discovery order.
    pub trace: Vec<Move>,
}

/// Breadth-first closure of `{d}` under elementary transformations.
pub fn orbit(d: &ChordDiagram, cap: usize) -> Result<Orbit> {
    let g = IntersectionGraph::of(d);
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    if !is_trimmed_tree(&g) {
        return Err(Error::NotTrimmed);
    }
    let mut seen = BTreeSet::from([d.clone()]);
    let mut queue = VecDeque::from([d.clone()]);
    let mut trace = Vec::new();
    while let Some(x) = queue.pop_front() {
        for m in elementary_moves(&x) {
            debug_assert!(IntersectionGraph::of(&m.to).is_isomorphic(&g));
            if seen.insert(m.to.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "orbit size",
                        needed: seen.len() as u128,
                        cap: cap as u128,
                    });
                }
                queue.push_back(m.to.clone());
                trace.push(m);
            }
        }
    }
    Ok(Orbit { diagrams: seen.into_iter().collect(), trace })
}

/// Reorders the boughs of `w`. `perm[i]` is the index, in the current
/// crossing order of [`decompose`], of the bough that should end up at
/// position `i`.
///
/// Marked boughs of the trunk must stay adjacent, a heavy bough is never
/// moved, and unmarked boughs must stay on their side of a marked `w`.
pub fn permute_boughs(d: &ChordDiagram, w: usize, perm: &[usize]) -> Result<ChordDiagram> {
    let dec = decompose(d, w)?;
    let m = dec.boughs.len();
    let mut check: Vec<usize> = perm.to_vec();
    check.sort_unstable();
    if check != (0..m).collect::<Vec<_>>() {
        return Err(Error::Constraint(format!("expected a permutation of 0..{m}")));
    }
    if dec.is_trunk {
        let pos: Vec<usize> = (0..m).filter(|&i| dec.boughs[perm[i]].marked > 0).collect();
        if let (Some(first), Some(last)) = (pos.first(), pos.last()) {
            if last - first + 1 != pos.len() {
                return Err(Error::Constraint("marked boughs of the trunk must stay adjacent".into()));
            }
        }
    }
    if perm.windows(2).any(|x| dec.boughs[x[0]].group > dec.boughs[x[1]].group) {
        return Err(Error::Constraint("unmarked bough cannot change strand".into()));
    }
    if perm.iter().enumerate().all(|(i, p)| i == *p) {
        return Ok(d.clone());
    }

    let g = IntersectionGraph::of(d);
    let movable: Vec<&BoughInfo> = dec.boughs.iter().filter(|b| b.light).collect();
    let all_moving: BTreeSet<usize> = movable.iter().flat_map(|b| b.chords.iter().copied()).collect();
    let base: Vec<Vec<usize>> = d
        .strands()
        .iter()
        .map(|s| s.iter().copied().filter(|c| !all_moving.contains(c)).collect())
        .collect();
    let pieces: Vec<Vec<Vec<usize>>> = movable
        .iter()
        .map(|b| lift(d.strands(), &b.chords).runs.into_iter().map(|(r, _)| r).collect())
        .collect();
    let target: Vec<usize> = perm.iter().map(|p| dec.boughs[*p].neighbor).collect();

    let mut present = vec![true; g.vertex_count()];
    for c in &all_moving {
        present[*c] = false;
    }
    let mut budget = PLACEMENT_BUDGET;
    let found = search(&base, &pieces, &movable, 0, &mut present, &g, w, &target, &mut budget);
    match found {
        Some(s) => Ok(ChordDiagram::from_valid_strands(&s)),
        None => Err(Error::Infeasible("no placement realizes the requested bough order".into())),
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    cur: &[Vec<usize>],
    pieces: &[Vec<Vec<usize>>],
    boughs: &[&BoughInfo],
    next: usize,
    present: &mut Vec<bool>,
    g: &IntersectionGraph,
    w: usize,
    target: &[usize],
    budget: &mut usize,
) -> Option<Vec<Vec<usize>>> {
    if next == pieces.len() {
        let order: Vec<usize> = layout(cur, g, w).into_iter().map(|(_, b)| b.neighbor).collect();
        return (order == target).then(|| cur.to_vec());
    }
    let gaps = all_gaps(cur);
    let mut candidates: Vec<Vec<Vec<usize>>> = Vec::new();
    match pieces[next].as_slice() {
        [r] => {
            for &gp in &gaps {
                candidates.push(place(cur, &[(r, gp)]));
            }
        }
        [r1, r2] => {
            for &g1 in &gaps {
                for &g2 in &gaps {
                    for (a, b) in [(r1, r2), (r2, r1)] {
                        candidates.push(place(cur, &[(a, g1), (b, g2)]));
                    }
                }
            }
        }
        _ => return None,
    }
    for c in &boughs[next].chords {
        present[*c] = true;
    }
    let mut result = None;
    for cand in candidates {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        if !consistent(&cand, present, g) {
            continue;
        }
        if let Some(s) = search(&cand, pieces, boughs, next + 1, present, g, w, target, budget) {
            result = Some(s);
            break;
        }
    }
    for c in &boughs[next].chords {
        present[*c] = false;
    }
    result
}

/// Moves the marked boughs of a marked trunk to the other side of the trunk
/// on both strands, as close to the trunk as the graph allows. When several
/// trunks exist the marked one with the smallest rooted code is used.
pub fn reflect_marked(d: &ChordDiagram) -> Result<ChordDiagram> {
    let g = IntersectionGraph::of(d);
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let all = trunks(&g);
    if all.is_empty() {
        return Err(Error::NotTrimmed);
    }
    let v = all
        .into_iter()
        .filter(|t| g.is_marked(*t))
        .map(|t| (g.rooted_code(t), t))
        .min()
        .map(|(_, t)| t)
        .ok_or(Error::TrunkUnmarked)?;
    let set: BTreeSet<usize> = bough_report(&g, v)
        .boughs
        .into_iter()
        .filter(|b| b.marked > 0)
        .flat_map(|b| b.vertices)
        .collect();
    if set.is_empty() {
        return Ok(d.clone());
    }
    let lifted = lift(d.strands(), &set);
    let ends = endpoint_table(&lifted.base, g.vertex_count());
    // v's slot on each strand of the base
    let v_at: BTreeMap<usize, usize> = ends[v].iter().copied().collect();
    let mut options: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    let mut strands_seen = BTreeSet::new();
    for (_, (s, gap)) in &lifted.runs {
        if !strands_seen.insert(*s) {
            return Err(Error::Infeasible("marked boughs are not contiguous".into()));
        }
        let Some(&p) = v_at.get(s) else {
            return Err(Error::Infeasible("marked bough off the trunk strands".into()));
        };
        let len = lifted.base[*s].len();
        let opts: Vec<(usize, usize, usize)> = if *gap <= p {
            // was below v: candidate gaps above, nearest first
            (p + 1..=len).map(|q| (q - p, *s, q)).collect()
        } else {
            (0..=p).rev().map(|q| (p + 1 - q, *s, q)).collect()
        };
        options.push(opts);
    }
    let mut combos: Vec<(usize, Vec<(usize, usize)>)> = vec![(0, Vec::new())];
    for opts in &options {
        combos = combos
            .into_iter()
            .flat_map(|(cost, picked)| {
                opts.iter().map(move |&(c, s, q)| {
                    let mut p = picked.clone();
                    p.push((s, q));
                    (cost + c, p)
                })
            })
            .collect();
    }
    combos.sort();
    let present = vec![true; g.vertex_count()];
    for (_, picks) in combos {
        let runs: Vec<(&[usize], (usize, usize))> = lifted
            .runs
            .iter()
            .zip(&picks)
            .map(|((r, _), gp)| (r.as_slice(), *gp))
            .collect();
        let s = place(&lifted.base, &runs);
        if consistent(&s, &present, &g) {
            return Ok(ChordDiagram::from_valid_strands(&s));
        }
    }
    Err(Error::Infeasible("no reflected placement keeps the intersection graph".into()))
}
