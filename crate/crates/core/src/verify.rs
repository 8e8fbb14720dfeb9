//! Desk-scale checks of the structural theorems.
//!
//! Each harness returns a [`VerifyReport`] with one certificate per class or
//! family it inspected, so failures can be audited from the output alone.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::ChordDiagram;
use crate::enumerate::{enumerate_diagrams, Limits};
use crate::error::Result;
use crate::graph::{is_connected, IntersectionGraph, Relation};
use crate::lincomb::LinearCombination;
use crate::realizability::{check_realizable, RealizationIndex};
use crate::reconstruct::{reconstruct_2strand, round_trip_check, stacking_variants};
use crate::relations::{integer_coordinates, integral_presentation, torsion_report, RelationBasis, RelationSet, Ring, TorsionReport};
use crate::transform::{elementary_moves, orbit, MoveKind, DEFAULT_ORBIT_CAP};
use crate::tree::{bough_report, is_trimmed_tree, MarkedTree};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub passed: bool,
    /// Individual assertions evaluated.
    pub cases: usize,
    pub summary: Vec<String>,
    pub certificates: Vec<Certificate>,
}

impl VerifyReport {
    fn new(check: &str) -> Self {
        Self { check: check.into(), passed: true, cases: 0, summary: Vec::new(), certificates: Vec::new() }
    }

    fn push(&mut self, c: Certificate) {
        self.passed &= c.passed;
        self.certificates.push(c);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        writeln!(f, "{}: {verdict} ({} cases)", self.check, self.cases)?;
        for s in &self.summary {
            writeln!(f, "  {s}")?;
        }
        for c in &self.certificates {
            let mark = if c.passed { "ok" } else { "FAIL" };
            writeln!(f, "  [{mark}] {}: {}", c.subject, c.detail)?;
        }
        Ok(())
    }
}

/// Which diagrams are grouped into intersection-graph classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassFilter {
    /// Γ is a trimmed tree.
    TrimmedTree,
    /// Γ is a tree and the diagram is connected.
    ConnectedTree,
    /// Γ is any tree.
    Tree,
}

impl ClassFilter {
    fn admits(self, d: &ChordDiagram, g: &IntersectionGraph) -> bool {
        match self {
            Self::TrimmedTree => is_trimmed_tree(g),
            Self::ConnectedTree => g.is_tree() && is_connected(d),
            Self::Tree => g.is_tree(),
        }
    }
}

/// Diagrams of degree `n` on `k` strands grouped by the isomorphism class of
/// their intersection graph. Members are sorted.
pub fn tree_classes(n: usize, k: usize, filter: ClassFilter, limits: &Limits) -> Result<BTreeMap<String, Vec<ChordDiagram>>> {
    let all = enumerate_diagrams(n, k, limits)?;
    let coded: Vec<(String, ChordDiagram)> = all
        .into_par_iter()
        .filter_map(|d| {
            let g = IntersectionGraph::of(&d);
            if filter.admits(&d, &g) {
                g.tree_code().map(|c| (c, d))
            } else {
                None
            }
        })
        .collect();
    let mut out: BTreeMap<String, Vec<ChordDiagram>> = BTreeMap::new();
    for (c, d) in coded {
        out.entry(c).or_default().push(d);
    }
    for v in out.values_mut() {
        v.sort();
    }
    Ok(out)
}

fn basis(n: usize, k: usize, rels: RelationSet, limits: &Limits) -> Result<RelationBasis> {
    RelationBasis::build(n, k, rels, Ring::Rational, limits)
}

fn residue(b: &RelationBasis, x: &ChordDiagram, y: &ChordDiagram) -> Result<LinearCombination<BigRational>> {
    b.reduce(&LinearCombination::difference(x, y)?)
}

/// Checks that every class collapses to one point modulo 1T+4T over the
/// rationals.
fn class_collapse(report: &mut VerifyReport, n: usize, k: usize, filter: ClassFilter, limits: &Limits) -> Result<()> {
    let classes = tree_classes(n, k, filter, limits)?;
    let b = basis(n, k, RelationSet::ONE_AND_FOUR_TERM, limits)?;
    let certs: Vec<(usize, Certificate)> = classes
        .par_iter()
        .map(|(code, members)| {
            let rep = &members[0];
            let mut detail = format!("size {}, representative {rep}, residue 0", members.len());
            let mut passed = true;
            for m in &members[1..] {
                let r = residue(&b, m, rep)?;
                if !r.is_zero() {
                    passed = false;
                    detail = format!("size {}, {m} minus {rep} reduces to {r}", members.len());
                    break;
                }
            }
            Ok((members.len() - 1, Certificate { subject: format!("n={n} k={k} {code}"), passed, detail }))
        })
        .collect::<Result<_>>()?;
    let failing = certs.iter().filter(|c| !c.1.passed).count();
    report.summary.push(format!(
        "n={n} k={k}: {} classes, {} diagrams, {failing} failing",
        classes.len(),
        classes.values().map(Vec::len).sum::<usize>()
    ));
    for (cases, c) in certs {
        report.cases += cases;
        report.push(c);
    }
    Ok(())
}

/// Diagrams on two strands whose Γ is the same trimmed tree are equal
/// modulo 1T+4T.
pub fn thm_2comp(max_degree: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("thm-2comp");
    for n in 1..=max_degree {
        class_collapse(&mut r, n, 2, ClassFilter::TrimmedTree, limits)?;
    }
    Ok(r)
}

/// Connected tree diagrams on `strands >= 3` strands with the same Γ are
/// equal modulo 1T+4T.
pub fn thm_ncomp(max_degree: usize, strands: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("thm-ncomp");
    for n in 1..=max_degree {
        class_collapse(&mut r, n, strands, ClassFilter::ConnectedTree, limits)?;
    }
    Ok(r)
}

/// Every tree class, trimmed or not, collapses over the rationals.
pub fn tree_collapse(n: usize, k: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("tree-collapse");
    class_collapse(&mut r, n, k, ClassFilter::Tree, limits)?;
    Ok(r)
}

/// A pair of diagrams with isomorphic tree Γ whose difference is torsion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionPair {
    pub class: String,
    pub first: ChordDiagram,
    pub second: ChordDiagram,
    pub order: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionProbe {
    pub report: TorsionReport,
    pub classes: usize,
    /// Pairs equal over the rationals but not over the integers.
    pub pairs: Vec<TorsionPair>,
    /// Pairs not even equal over the rationals.
    pub rational_failures: Vec<TorsionPair>,
}

/// Integral invariant factors plus a search of tree classes for pairs that
/// agree over the rationals but differ over the integers.
pub fn torsion_probe(n: usize, k: usize, limits: &Limits) -> Result<TorsionProbe> {
    let rels = RelationSet::ONE_AND_FOUR_TERM;
    let (index, p) = integral_presentation(n, k, &rels, limits)?;
    let report = torsion_report(&index, &p, &rels);
    let classes = tree_classes(n, k, ClassFilter::Tree, limits)?;
    let found: Vec<(bool, TorsionPair)> = classes
        .par_iter()
        .map(|(code, members)| {
            let rep = &members[0];
            let mut out = Vec::new();
            for m in &members[1..] {
                let x = LinearCombination::<BigInt>::difference(m, rep)?;
                let q = p.classify(&integer_coordinates(&index, &x)?);
                if q.is_zero() {
                    continue;
                }
                let pair = |order: String| TorsionPair { class: code.clone(), first: rep.clone(), second: m.clone(), order };
                match q.order() {
                    Some(o) => out.push((true, pair(o.to_string()))),
                    None => out.push((false, pair("infinite".into()))),
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let (pairs, rational_failures): (Vec<_>, Vec<_>) = found.into_iter().partition(|x| x.0);
    Ok(TorsionProbe {
        report,
        classes: classes.len(),
        pairs: pairs.into_iter().map(|x| x.1).collect(),
        rational_failures: rational_failures.into_iter().map(|x| x.1).collect(),
    })
}

/// Which vertices' boughs [`lemma_share`] inspects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShareScope {
    AllVertices,
    /// Only marked vertices.
    MarkedVertices,
}

/// Light boughs of tree diagrams on two strands are exactly the boughs whose
/// chords form a share.
pub fn lemma_share(max_degree: usize, scope: ShareScope, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new(match scope {
        ShareScope::AllVertices => "lemma-share",
        ShareScope::MarkedVertices => "lemma-share-marked",
    });
    for n in 1..=max_degree {
        let all = enumerate_diagrams(n, 2, limits)?;
        let results: Vec<(usize, usize, Vec<Certificate>)> = all
            .par_iter()
            .filter_map(|d| {
                let g = IntersectionGraph::of(d);
                if !g.is_tree() || !(0..g.vertex_count()).any(|v| g.is_marked(v)) {
                    return None;
                }
                let (mut cases, mut light) = (0, 0);
                let mut bad = Vec::new();
                let vertices: Vec<usize> = match scope {
                    ShareScope::AllVertices => (0..g.vertex_count()).collect(),
                    ShareScope::MarkedVertices => (0..g.vertex_count()).filter(|v| g.is_marked(*v)).collect(),
                };
                for v in vertices {
                    for b in bough_report(&g, v).boughs {
                        cases += 1;
                        light += usize::from(b.light);
                        let share = d.is_share(&b.vertices).expect("chords exist").is_some();
                        if share != b.light {
                            let names: Vec<&str> = b.vertices.iter().map(|c| g.name(*c)).collect();
                            bad.push(Certificate {
                                subject: format!("{d} at {}", g.name(v)),
                                passed: false,
                                detail: format!("bough {{{}}} light={} share={share}", names.join(","), b.light),
                            });
                        }
                    }
                }
                Some((cases, light, bad))
            })
            .collect();
        let diagrams = results.len();
        let cases: usize = results.iter().map(|x| x.0).sum();
        let light: usize = results.iter().map(|x| x.1).sum();
        let bad: Vec<Certificate> = results.into_iter().flat_map(|x| x.2).collect();
        r.summary.push(format!(
            "n={n}: {diagrams} tree diagrams, {cases} boughs ({light} light), {} mismatches",
            bad.len()
        ));
        r.push(Certificate {
            subject: format!("n={n} k=2"),
            passed: bad.is_empty(),
            detail: format!("{cases} boughs checked"),
        });
        r.cases += cases;
        for c in bad {
            r.push(c);
        }
    }
    Ok(r)
}

/// The orbit under elementary transformations equals the Γ-class.
pub fn prop_orbit(max_degree: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("prop-orbit");
    for n in 1..=max_degree {
        let classes = tree_classes(n, 2, ClassFilter::TrimmedTree, limits)?;
        let certs: Vec<Certificate> = classes
            .par_iter()
            .map(|(code, members)| {
                let o = orbit(&members[0], DEFAULT_ORBIT_CAP)?;
                let passed = &o.diagrams == members;
                let detail = if passed {
                    format!("orbit = class, size {}, {} moves", members.len(), o.trace.len())
                } else {
                    let missing: Vec<String> = members
                        .iter()
                        .filter(|d| o.diagrams.binary_search(d).is_err())
                        .map(ToString::to_string)
                        .collect();
                    format!("orbit {} vs class {}; unreached: {}", o.diagrams.len(), members.len(), missing.join(", "))
                };
                Ok(Certificate { subject: format!("n={n} {code}"), passed, detail })
            })
            .collect::<Result<_>>()?;
        r.summary.push(format!("n={n}: {} classes", classes.len()));
        r.cases += certs.len();
        for c in certs {
            r.push(c);
        }
    }
    Ok(r)
}

/// Every elementary move changes a diagram by an element of the 1T+4T span.
pub fn moves(max_degree: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("moves");
    for n in 1..=max_degree {
        let b = basis(n, 2, RelationSet::ONE_AND_FOUR_TERM, limits)?;
        let all = enumerate_diagrams(n, 2, limits)?;
        let found: Vec<(MoveKind, Option<Certificate>)> = all
            .par_iter()
            .filter(|d| is_trimmed_tree(&IntersectionGraph::of(d)))
            .flat_map_iter(|d| elementary_moves(d))
            .map(|m| {
                let res = residue(&b, &m.to, &m.from)?;
                let bad = (!res.is_zero()).then(|| Certificate {
                    subject: format!("{} -> {}", m.from, m.to),
                    passed: false,
                    detail: format!("{} leaves {res}", m.description),
                });
                Ok((m.kind, bad))
            })
            .collect::<Result<_>>()?;
        let mut tally: BTreeMap<MoveKind, (usize, usize)> = BTreeMap::new();
        for (k, bad) in &found {
            let e = tally.entry(*k).or_default();
            e.0 += 1;
            e.1 += usize::from(bad.is_some());
        }
        for (k, (count, failing)) in &tally {
            r.push(Certificate {
                subject: format!("n={n} {k:?}"),
                passed: *failing == 0,
                detail: format!("{count} moves, {failing} outside the span"),
            });
        }
        r.cases += found.len();
        for c in found.into_iter().filter_map(|x| x.1) {
            r.push(c);
        }
    }
    Ok(r)
}

/// Nonempty chord sets of size at most `max` avoiding `c` that are shares.
fn small_shares(d: &ChordDiagram, c: usize, max: usize) -> Vec<BTreeSet<usize>> {
    let n = d.degree();
    let mut out = Vec::new();
    for a in (0..n).filter(|a| *a != c) {
        out.push(BTreeSet::from([a]));
        if max >= 2 {
            for b in (a + 1..n).filter(|b| *b != c) {
                out.push(BTreeSet::from([a, b]));
            }
        }
    }
    out.retain(|s| d.is_share(s).ok().flatten().is_some());
    out
}

/// Generalized 4T combinations for shares of at most two chords reduce to
/// zero modulo the plain 4T relation, and single-chord bough moves are
/// trivial modulo 1T+4T.
pub fn gen4t(max_degree: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("gen4t");
    for n in 2..=max_degree {
        let b4 = basis(n, 2, RelationSet::FOUR_TERM, limits)?;
        let b14 = basis(n, 2, RelationSet::ONE_AND_FOUR_TERM, limits)?;
        let all = enumerate_diagrams(n, 2, limits)?;
        let general: Vec<(usize, Vec<Certificate>)> = all
            .par_iter()
            .map(|d| {
                let mut cases = 0;
                let mut bad = Vec::new();
                for c in 0..n {
                    for s in small_shares(d, c, 2) {
                        for end in 0..2 {
                            let Ok(x) = crate::relations::generalized_four_term(d, c, end, &s) else {
                                continue;
                            };
                            cases += 1;
                            let res = b4.reduce(&x.to_rational())?;
                            if !res.is_zero() {
                                bad.push(Certificate {
                                    subject: format!("{d} chord {c} end {end} share {s:?}"),
                                    passed: false,
                                    detail: format!("reduces to {res}"),
                                });
                            }
                        }
                    }
                }
                Ok((cases, bad))
            })
            .collect::<Result<_>>()?;
        let cases: usize = general.iter().map(|x| x.0).sum();
        let bad: Vec<Certificate> = general.into_iter().flat_map(|x| x.1).collect();
        r.push(Certificate {
            subject: format!("n={n} generalized 4T"),
            passed: bad.is_empty(),
            detail: format!("{cases} instances, {} nonzero mod 4T", bad.len()),
        });
        r.cases += cases;
        for c in bad {
            r.push(c);
        }

        // single-chord boughs moved along a chord: the complexity-zero case
        let simple: Vec<Option<Certificate>> = all
            .par_iter()
            .filter(|d| is_trimmed_tree(&IntersectionGraph::of(d)))
            .flat_map_iter(|d| elementary_moves(d))
            .filter(|m| m.kind != MoveKind::Reflect && m.description.starts_with("move bough {") && !m.description.contains(','))
            .map(|m| {
                let res = residue(&b14, &m.to, &m.from)?;
                Ok((!res.is_zero()).then(|| Certificate {
                    subject: format!("{} -> {}", m.from, m.to),
                    passed: false,
                    detail: format!("{} leaves {res}", m.description),
                }))
            })
            .collect::<Result<_>>()?;
        let bad: Vec<Certificate> = simple.iter().flatten().cloned().collect();
        r.push(Certificate {
            subject: format!("n={n} single-chord moves"),
            passed: bad.is_empty(),
            detail: format!("{} instances, {} nonzero mod 1T+4T", simple.len(), bad.len()),
        });
        r.cases += simple.len();
        for c in bad {
            r.push(c);
        }
    }
    Ok(r)
}

/// Diagrams of degree `1..=max_degree` on `k` strands, plus the empty one.
fn up_to_degree(max_degree: usize, k: usize, limits: &Limits) -> Result<Vec<ChordDiagram>> {
    let mut out = vec![ChordDiagram::empty(k)?];
    for n in 1..=max_degree {
        out.extend(enumerate_diagrams(n, k, limits)?);
    }
    Ok(out)
}

fn splittings(d: &ChordDiagram) -> Result<BTreeMap<(ChordDiagram, ChordDiagram), usize>> {
    let mut m = BTreeMap::new();
    for p in d.coproduct()? {
        *m.entry(p).or_insert(0) += 1;
    }
    Ok(m)
}

/// Δ(D1·D2) = Δ(D1)·Δ(D2) as formal sums of ordered pairs.
pub fn hopf(max_degree: usize, max_strands: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("hopf");
    for k in 1..=max_strands {
        let ds = up_to_degree(max_degree, k, limits)?;
        let mut cases = 0;
        let mut bad = Vec::new();
        for a in &ds {
            let da = a.coproduct()?;
            for b in &ds {
                cases += 1;
                let lhs = splittings(&a.product(b)?)?;
                let mut rhs = BTreeMap::new();
                for (a1, a2) in &da {
                    for (b1, b2) in b.coproduct()? {
                        *rhs.entry((a1.product(&b1)?, a2.product(&b2)?)).or_insert(0) += 1;
                    }
                }
                if lhs != rhs {
                    bad.push(Certificate { subject: format!("{a} * {b}"), passed: false, detail: "coproducts differ".into() });
                }
            }
        }
        r.push(Certificate {
            subject: format!("k={k}"),
            passed: bad.is_empty(),
            detail: format!("{cases} pairs of degree <= {max_degree}"),
        });
        r.cases += cases;
        for c in bad {
            r.push(c);
        }
    }
    Ok(r)
}

/// Gluing a one-strand factor into a strand gives the same class modulo 4T
/// wherever it is glued.
pub fn connect_sum_well_defined(max_degree: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("connect-sum");
    let factors = enumerate_diagrams(1, 1, limits)?;
    let targets = up_to_degree(max_degree, 2, limits)?;
    let mut bases: HashMap<usize, RelationBasis> = HashMap::new();
    for n in 1..=max_degree + 1 {
        bases.insert(n, basis(n, 2, RelationSet::FOUR_TERM, limits)?);
    }
    let mut cases = 0;
    let mut bad = Vec::new();
    for a in &factors {
        for d in &targets {
            let b = &bases[&(d.degree() + a.degree())];
            for i in 1..=2 {
                let len = d.strands()[i - 1].len();
                let glued: Vec<ChordDiagram> =
                    (0..=len).map(|s| d.connect_sum(a, i, s)).collect::<Result<_>>()?;
                for s1 in 0..=len {
                    for s2 in s1 + 1..=len {
                        cases += 1;
                        let res = residue(b, &glued[s1], &glued[s2])?;
                        if !res.is_zero() {
                            bad.push(Certificate {
                                subject: format!("{a} into strand {i} of {d} at {s1} and {s2}"),
                                passed: false,
                                detail: format!("difference reduces to {res}"),
                            });
                        }
                    }
                }
            }
        }
    }
    r.push(Certificate {
        subject: format!("targets of degree <= {max_degree} on 2 strands"),
        passed: bad.is_empty(),
        detail: format!("{cases} slot pairs"),
    });
    r.cases = cases;
    for c in bad {
        r.push(c);
    }
    Ok(r)
}

/// Stars with `p + q <= max_pq` commute with every two-strand diagram of
/// degree at most `max_degree`, modulo 1T+4T, whenever the combined degree is
/// at most `max_combined`.
pub fn centrality(max_pq: usize, max_degree: usize, max_combined: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("centrality");
    let mut bases: HashMap<usize, RelationBasis> = HashMap::new();
    for n in 1..=max_combined {
        bases.insert(n, basis(n, 2, RelationSet::ONE_AND_FOUR_TERM, limits)?);
    }
    let ds = up_to_degree(max_degree, 2, limits)?;
    for total in 0..=max_pq {
        for p in 0..=total {
            let q = total - p;
            let j = ChordDiagram::build_star(p, q);
            let mut cases = 0;
            let mut bad = Vec::new();
            for d in ds.iter().filter(|d| d.degree() + j.degree() <= max_combined) {
                cases += 1;
                let b = &bases[&(d.degree() + j.degree())];
                let res = residue(b, &j.product(d)?, &d.product(&j)?)?;
                if !res.is_zero() {
                    bad.push(Certificate {
                        subject: format!("J={j} D={d}"),
                        passed: false,
                        detail: format!("JD - DJ reduces to {res}"),
                    });
                }
            }
            r.push(Certificate {
                subject: format!("star({p},{q}) = {j}"),
                passed: bad.is_empty(),
                detail: format!("commutes with {} of {cases} diagrams", cases - bad.len()),
            });
            r.cases += cases;
            for c in bad {
                r.push(c);
            }
        }
    }
    Ok(r)
}

/// Labelled directed trees with at most `max_vertices` vertices on
/// `colors` colours, one per isomorphism class, in tree-code order. With
/// `admissible` set, only trees whose adjacent labels share a colour and
/// whose unmarked vertices carry undirected edges are produced.
pub fn labeled_trees(max_vertices: usize, colors: usize, admissible: bool) -> Vec<MarkedTree> {
    let labels: Vec<(usize, usize)> =
        (1..=colors).flat_map(|i| (i..=colors).map(move |j| (i, j))).collect();
    let mut shapes: Vec<Vec<usize>> = Vec::new();
    for v in 1..=max_vertices {
        let mut parents = vec![vec![]];
        for i in 1..v {
            parents = parents
                .into_iter()
                .flat_map(|p: Vec<usize>| (0..i).map(move |x| [p.clone(), vec![x]].concat()))
                .collect();
        }
        shapes.extend(parents);
    }
    fn fill(
        parent: &[usize],
        labels: &[(usize, usize)],
        admissible: bool,
        cur: &mut Vec<((usize, usize), Relation)>,
        out: &mut Vec<Vec<((usize, usize), Relation)>>,
    ) {
        let i = cur.len();
        if i == parent.len() + 1 {
            out.push(cur.clone());
            return;
        }
        for &l in labels {
            let rels: &[Relation] = if i == 0 { &[Relation::None] } else { &[Relation::Out, Relation::In, Relation::Undirected] };
            for &rel in rels {
                if i > 0 && admissible {
                    let pl = cur[parent[i - 1]].0;
                    let shares = l.0 == pl.0 || l.0 == pl.1 || l.1 == pl.0 || l.1 == pl.1;
                    let unmarked = l.0 == l.1 || pl.0 == pl.1;
                    if !shares || (unmarked && rel != Relation::Undirected) {
                        continue;
                    }
                }
                cur.push((l, rel));
                fill(parent, labels, admissible, cur, out);
                cur.pop();
            }
        }
    }
    let found: Vec<(String, IntersectionGraph)> = shapes
        .par_iter()
        .flat_map_iter(|parent| {
            let mut fills = Vec::new();
            fill(parent, &labels, admissible, &mut Vec::new(), &mut fills);
            let parent = parent.clone();
            fills.into_iter().map(move |f| {
                let names = (0..f.len()).map(|i| format!("x{i}")).collect();
                let mut g = IntersectionGraph::with_vertices(names, f.iter().map(|x| x.0).collect());
                for i in 1..f.len() {
                    // relation of vertex i as seen from its parent
                    g.set(parent[i - 1], i, f[i].1);
                }
                let code = g.tree_code().expect("built as a tree");
                (code, g)
            })
        })
        .collect();
    let mut unique: BTreeMap<String, IntersectionGraph> = BTreeMap::new();
    for (c, g) in found {
        unique.entry(c).or_insert(g);
    }
    unique
        .into_values()
        .map(|g| MarkedTree::new(g, colors).expect("labels in range"))
        .collect()
}

/// The six conditions agree with exhaustive search on every labelled tree
/// with at most `max_vertices` vertices.
pub fn realizability_agreement(max_vertices: usize, colors: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("realizability");
    let trees = labeled_trees(max_vertices, colors, false);
    let mut indices = HashMap::new();
    for v in 1..=max_vertices {
        indices.insert(v, RealizationIndex::build(v, colors, limits)?);
    }
    let results: Vec<(usize, bool, bool)> = trees
        .par_iter()
        .map(|t| {
            let checker = check_realizable(t, limits)?.accepted;
            let oracle = indices[&t.graph().vertex_count()].witness(t)?.is_some();
            Ok((t.graph().vertex_count(), checker, oracle))
        })
        .collect::<Result<_>>()?;
    for v in 1..=max_vertices {
        let here: Vec<&(usize, bool, bool)> = results.iter().filter(|x| x.0 == v).collect();
        let accepted = here.iter().filter(|x| x.1).count();
        let disagree: Vec<usize> = results
            .iter()
            .enumerate()
            .filter(|(_, x)| x.0 == v && x.1 != x.2)
            .map(|(i, _)| i)
            .collect();
        r.push(Certificate {
            subject: format!("{v} vertices, {colors} colours"),
            passed: disagree.is_empty(),
            detail: format!("{} trees, {accepted} accepted, {} disagreements", here.len(), disagree.len()),
        });
        for i in disagree {
            r.push(Certificate {
                subject: trees[i].graph().tree_code().unwrap_or_default(),
                passed: false,
                detail: format!("checker {} oracle {}", results[i].1, results[i].2),
            });
        }
    }
    r.cases = trees.len();
    Ok(r)
}

/// Reconstruction returns a diagram with the right Γ for every accepted
/// tree on `colors >= 3` colours with at most `max_vertices` vertices.
pub fn round_trip(max_vertices: usize, colors: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("round-trip");
    let trees = labeled_trees(max_vertices, colors, true);
    let results: Vec<Option<(usize, std::result::Result<bool, String>)>> = trees
        .par_iter()
        .map(|t| {
            if !check_realizable(t, limits)?.accepted {
                return Ok(None);
            }
            let out = round_trip_check(t, limits).map_err(|e| e.to_string());
            Ok(Some((t.graph().vertex_count(), out)))
        })
        .collect::<Result<_>>()?;
    for v in 1..=max_vertices {
        let here: Vec<_> = results.iter().flatten().filter(|x| x.0 == v).collect();
        let ok = here.iter().filter(|x| x.1 == Ok(true)).count();
        r.push(Certificate {
            subject: format!("{v} vertices, {colors} colours"),
            passed: ok == here.len(),
            detail: format!("{ok} of {} accepted trees round-trip", here.len()),
        });
        r.cases += here.len();
    }
    for (t, res) in trees.iter().zip(&results) {
        if let Some((_, out)) = res {
            if *out != Ok(true) {
                r.push(Certificate {
                    subject: t.graph().tree_code().unwrap_or_default(),
                    passed: false,
                    detail: format!("{out:?}"),
                });
            }
        }
    }
    Ok(r)
}

/// Every admissible stacking order of an accepted tree's pieces gives the
/// same element modulo 1T+4T.
pub fn stacking(max_vertices: usize, colors: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("stacking");
    let bases: Vec<RelationBasis> = (1..=max_vertices)
        .into_par_iter()
        .map(|n| RelationBasis::build(n, colors, RelationSet::ONE_AND_FOUR_TERM, Ring::Rational, limits))
        .collect::<Result<_>>()?;
    let trees = labeled_trees(max_vertices, colors, true);
    let found: Vec<Option<Vec<ChordDiagram>>> = trees
        .par_iter()
        .map(|t| {
            if !check_realizable(t, limits)?.accepted {
                return Ok(None);
            }
            Ok(Some(stacking_variants(t, limits, 64)?))
        })
        .collect::<Result<_>>()?;
    let mut multi = 0;
    for (t, variants) in trees.iter().zip(&found) {
        let Some(vs) = variants else { continue };
        r.cases += 1;
        let Some((first, rest)) = vs.split_first() else {
            r.push(Certificate { subject: t.graph().tree_code().unwrap_or_default(), passed: false, detail: "no stacking realizes the tree".into() });
            continue;
        };
        if rest.is_empty() {
            continue;
        }
        multi += 1;
        let b = &bases[first.degree() - 1];
        for other in rest {
            let residue = b.reduce(&LinearCombination::difference(first, other)?)?;
            r.push(Certificate {
                subject: format!("{first} vs {other}"),
                passed: residue.is_zero(),
                detail: format!("residue {residue}"),
            });
        }
    }
    r.summary.push(format!("{} accepted trees, {multi} with more than one stacking", r.cases));
    Ok(r)
}

/// Two-strand reconstruction of every trimmed tree realized by some diagram
/// of degree at most `max_degree`.
pub fn round_trip_2strand(max_degree: usize, limits: &Limits) -> Result<VerifyReport> {
    let mut r = VerifyReport::new("round-trip-2strand");
    for n in 1..=max_degree {
        let classes = tree_classes(n, 2, ClassFilter::TrimmedTree, limits)?;
        let bad: Vec<Certificate> = classes
            .par_iter()
            .filter_map(|(code, members)| {
                let t = MarkedTree::new(IntersectionGraph::of(&members[0]), 2).expect("tree");
                let out = reconstruct_2strand(&t);
                match out {
                    Ok(d) if IntersectionGraph::of(&d).is_isomorphic(t.graph()) => None,
                    other => Some(Certificate { subject: code.clone(), passed: false, detail: format!("{other:?}") }),
                }
            })
            .collect();
        r.push(Certificate {
            subject: format!("n={n}"),
            passed: bad.is_empty(),
            detail: format!("{} trimmed classes, {} failures", classes.len(), bad.len()),
        });
        r.cases += classes.len();
        for c in bad {
            r.push(c);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_harnesses_pass() {
        let lim = Limits::default();
        for r in [
            thm_2comp(3, &lim).unwrap(),
            thm_ncomp(2, 3, &lim).unwrap(),
            lemma_share(4, ShareScope::MarkedVertices, &lim).unwrap(),
            prop_orbit(3, &lim).unwrap(),
            moves(3, &lim).unwrap(),
            gen4t(3, &lim).unwrap(),
            hopf(1, 2, &lim).unwrap(),
            connect_sum_well_defined(1, &lim).unwrap(),
            centrality(1, 1, 3, &lim).unwrap(),
            round_trip_2strand(4, &lim).unwrap(),
        ] {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn stacking_orders_agree() {
        let r = stacking(4, 3, &Limits::default()).unwrap();
        assert!(r.passed, "{r}");
        assert!(r.cases > 0);
    }

    #[test]
    fn light_bough_without_share() {
        // the bough {a,b} of c is light, but c's endpoints separate b's
        let r = lemma_share(3, ShareScope::AllVertices, &Limits::default()).unwrap();
        assert!(!r.passed);
        assert!(r.failures().any(|c| c.subject == "k=2 [a][b c a c b] at c"));
    }

    #[test]
    fn degree_one_is_vacuous() {
        let r = thm_2comp(1, &Limits::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.cases, 0);
    }

    #[test]
    fn tree_counts() {
        // one vertex: the six labels on three colours
        assert_eq!(labeled_trees(1, 3, false).len(), 6);
        // two vertices: 15 distinct label pairs with 3 edge kinds, plus 6
        // equal pairs where the two arrow directions coincide
        assert_eq!(labeled_trees(2, 3, false).len() - 6, 15 * 3 + 6 * 2);
    }

    #[test]
    fn torsion_probe_small() {
        let p = torsion_probe(3, 2, &Limits::default()).unwrap();
        assert!(p.report.is_torsion_free());
        assert!(p.pairs.is_empty() && p.rational_failures.is_empty());
    }
}
