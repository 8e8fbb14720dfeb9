//! Relation families in the space of diagrams of fixed degree and strand
//! count, and exact quotients by them.
//!
//! # The 4-term relation
//!
//! Pick a chord `c`, one of its endpoints `e`, and a second chord `b` with
//! endpoints `x1`, `x2`. Write `D(e < x)` for the diagram with `e` placed just
//! below `x` and `D(e > x)` for `e` just above `x`, everything else fixed.
//! Every strand is oriented upward, so the relation reads
//!
//! | term       | sign |
//! |------------|------|
//! | `D(e < x1)` | `+` |
//! | `D(e > x1)` | `-` |
//! | `D(e < x2)` | `+` |
//! | `D(e > x2)` | `-` |
//!
//! whether or not `x1`, `x2` and `e` share a strand. On one strand this is the
//! familiar four-term relation for knots.
//!
//! The 1-term relation kills every diagram with an isolated chord: one whose
//! endpoints are adjacent on a single strand. The antisymmetry relation
//! compares a diagram with its reversal along one strand; see
//! [`AntisymmetryConvention`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{runs_of, ChordDiagram};
use crate::enumerate::{DiagramIndex, Limits};
use crate::error::{Error, Result};
use crate::linalg::{self, IntegerEchelon, Presentation, RationalEchelon, SparseVec};
use crate::lincomb::LinearCombination;

/// Bumped whenever a generator family changes; part of every cache key.
pub const GENERATOR_VERSION: u32 = 1;

/// Sign used in `reverse(D, i) - sign * D`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AntisymmetryConvention {
    /// `(-1)^m` where `m` is the number of endpoints on strand `i`.
    #[default]
    EndpointParity,
    /// Always `+1`: reversal alone is a relation.
    Trivial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationSet {
    pub one_term: bool,
    pub four_term: bool,
    pub antisymmetry: bool,
    pub convention: AntisymmetryConvention,
}

impl RelationSet {
    pub const FOUR_TERM: Self = Self {
        one_term: false,
        four_term: true,
        antisymmetry: false,
        convention: AntisymmetryConvention::EndpointParity,
    };

    pub const ONE_AND_FOUR_TERM: Self = Self {
        one_term: true,
        four_term: true,
        antisymmetry: false,
        convention: AntisymmetryConvention::EndpointParity,
    };

    pub fn is_empty(&self) -> bool {
        !(self.one_term || self.four_term || self.antisymmetry)
    }
}

/// Comma list such as `1t,4t` or `4t,as`.
impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.one_term {
            parts.push("1t");
        }
        if self.four_term {
            parts.push("4t");
        }
        if self.antisymmetry {
            parts.push(match self.convention {
                AntisymmetryConvention::EndpointParity => "as",
                AntisymmetryConvention::Trivial => "as-trivial",
            });
        }
        f.write_str(&parts.join(","))
    }
}

impl FromStr for RelationSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.to_ascii_lowercase().as_str() {
                "1t" => out.one_term = true,
                "4t" => out.four_term = true,
                "as" => out.antisymmetry = true,
                "as-trivial" => {
                    out.antisymmetry = true;
                    out.convention = AntisymmetryConvention::Trivial;
                }
                other => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("unknown relation `{other}` (expected 1t, 4t, as, as-trivial)"),
                    })
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty relation set".into() });
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "q")]
    Rational,
    #[serde(rename = "z")]
    Integer,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Rational => "q",
            Ring::Integer => "z",
        })
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" => Ok(Ring::Rational),
            "z" | "Z" => Ok(Ring::Integer),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown ring `{s}` (expected q or z)") }),
        }
    }
}

/// Flips the sign so the first coefficient is positive.
fn normalize_sign(v: &mut SparseVec<BigInt>) {
    if v.first().is_some_and(|(_, x)| x.is_negative()) {
        for (_, x) in v.iter_mut() {
            *x = -x.clone();
        }
    }
}

fn sparse_from_terms(terms: impl IntoIterator<Item = (usize, i64)>) -> SparseVec<BigInt> {
    let mut acc = std::collections::BTreeMap::<usize, i64>::new();
    for (c, x) in terms {
        *acc.entry(c).or_default() += x;
    }
    let mut v: SparseVec<BigInt> = acc
        .into_iter()
        .filter(|(_, x)| *x != 0)
        .map(|(c, x)| (c, BigInt::from(x)))
        .collect();
    normalize_sign(&mut v);
    v
}

fn dedup_sorted(rows: impl ParallelIterator<Item = SparseVec<BigInt>>) -> Vec<SparseVec<BigInt>> {
    let set: HashSet<SparseVec<BigInt>> = rows.filter(|r| !r.is_empty()).collect();
    let mut rows: Vec<_> = set.into_iter().collect();
    rows.sort();
    rows
}

fn has_isolated_chord(d: &ChordDiagram) -> bool {
    d.strands().iter().any(|s| s.windows(2).any(|w| w[0] == w[1]))
}

pub(crate) fn one_term_rows(index: &DiagramIndex) -> Vec<SparseVec<BigInt>> {
    index
        .diagrams()
        .iter()
        .enumerate()
        .filter(|(_, d)| has_isolated_chord(d))
        .map(|(i, _)| vec![(i, BigInt::one())])
        .collect()
}

/// The four terms for one seed, as `(diagram, sign)` pairs. `reduced` is the
/// diagram with the moving endpoint of `c` removed.
fn four_term_terms(reduced: &[Vec<usize>], c: usize, b: usize) -> Vec<(Vec<Vec<usize>>, i64)> {
    let mut out = Vec::with_capacity(4);
    for (s, strand) in reduced.iter().enumerate() {
        for (p, &x) in strand.iter().enumerate() {
            if x != b {
                continue;
            }
            for (at, sign) in [(p, 1), (p + 1, -1)] {
                let mut strands = reduced.to_vec();
                strands[s].insert(at, c);
                out.push((strands, sign));
            }
        }
    }
    out
}

pub(crate) fn four_term_rows(index: &DiagramIndex) -> Vec<SparseVec<BigInt>> {
    let col = |strands: &[Vec<usize>]| {
        index
            .position(&ChordDiagram::from_valid_strands(strands))
            .expect("relation terms stay in the coordinate space")
    };
    dedup_sorted(index.diagrams().par_iter().flat_map_iter(|d| {
        let n = d.degree();
        let mut rows = Vec::new();
        for (s, strand) in d.strands().iter().enumerate() {
            for (p, &c) in strand.iter().enumerate() {
                let mut reduced = d.strands().to_vec();
                reduced[s].remove(p);
                for b in (0..n).filter(|b| *b != c) {
                    let terms = four_term_terms(&reduced, c, b);
                    rows.push(sparse_from_terms(terms.iter().map(|(st, x)| (col(st), *x))));
                }
            }
        }
        rows
    }))
}

pub(crate) fn antisymmetry_rows(index: &DiagramIndex, convention: AntisymmetryConvention) -> Vec<SparseVec<BigInt>> {
    dedup_sorted(index.diagrams().par_iter().enumerate().flat_map_iter(|(i, d)| {
        (1..=d.strand_count())
            .map(|s| {
                let r = d.reverse_component(s).expect("strand in range");
                let sign = match convention {
                    AntisymmetryConvention::EndpointParity if d.strands()[s - 1].len() % 2 == 1 => -1,
                    _ => 1,
                };
                let j = index.position(&r).expect("reversal stays in the space");
                sparse_from_terms([(j, 1), (i, -sign)])
            })
            .collect::<Vec<_>>()
    }))
}

/// All generator rows of `rels` in a deterministic order.
pub fn relation_rows(index: &DiagramIndex, rels: &RelationSet) -> Vec<SparseVec<BigInt>> {
    let mut rows = Vec::new();
    if rels.one_term {
        rows.extend(one_term_rows(index));
    }
    if rels.four_term {
        rows.extend(four_term_rows(index));
    }
    if rels.antisymmetry {
        rows.extend(antisymmetry_rows(index, rels.convention));
    }
    rows.sort();
    rows.dedup();
    rows
}

fn as_combinations(index: &DiagramIndex, rows: Vec<SparseVec<BigInt>>) -> Vec<LinearCombination<BigInt>> {
    rows.into_iter()
        .map(|r| {
            LinearCombination::from_terms(r.into_iter().map(|(i, x)| (index.get(i).clone(), x)))
                .expect("homogeneous")
        })
        .collect()
}

pub fn gen_one_term(n: usize, k: usize, limits: &Limits) -> Result<Vec<LinearCombination<BigInt>>> {
    let index = DiagramIndex::new(n, k, limits)?;
    Ok(as_combinations(&index, one_term_rows(&index)))
}

pub fn gen_four_term(n: usize, k: usize, limits: &Limits) -> Result<Vec<LinearCombination<BigInt>>> {
    let index = DiagramIndex::new(n, k, limits)?;
    Ok(as_combinations(&index, four_term_rows(&index)))
}

pub fn gen_antisymmetry(
    n: usize,
    k: usize,
    convention: AntisymmetryConvention,
    limits: &Limits,
) -> Result<Vec<LinearCombination<BigInt>>> {
    let index = DiagramIndex::new(n, k, limits)?;
    Ok(as_combinations(&index, antisymmetry_rows(&index, convention)))
}

/// The generalized 4-term combination for the chord `c`, its endpoint `end`
/// (0 = lower in reading order, 1 = upper) and a share `share` not
/// containing `c`: for each arc of the share, the moving endpoint placed just
/// below the arc minus the endpoint placed just above it. The share is read
/// after the moving endpoint is lifted out.
pub fn generalized_four_term(
    d: &ChordDiagram,
    c: usize,
    end: usize,
    share: &BTreeSet<usize>,
) -> Result<LinearCombination<BigInt>> {
    if c >= d.degree() {
        return Err(Error::UnknownChord(c.to_string()));
    }
    if share.contains(&c) || share.is_empty() {
        return Err(Error::Constraint("the share must be nonempty and avoid the moving chord".into()));
    }
    let (s, p) = d.endpoints()[c][end.min(1)];
    let mut reduced = d.strands().to_vec();
    reduced[s].remove(p);
    let runs = runs_of(&reduced, |x| share.contains(&x));
    if runs.len() > 2 {
        return Err(Error::Constraint("chords do not form a share".into()));
    }
    let mut out = LinearCombination::zero();
    for arc in runs {
        for (at, sign) in [(arc.start, 1), (arc.start + arc.len, -1)] {
            let mut strands = reduced.clone();
            strands[arc.strand - 1].insert(at, c);
            out.add_term(ChordDiagram::from_valid_strands(&strands), BigInt::from(sign))?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Echelon {
    Q(RationalEchelon),
    Z(IntegerEchelon),
}

/// The span (or lattice) of a relation family inside one coordinate space.
#[derive(Clone, Debug)]
pub struct RelationBasis {
    index: DiagramIndex,
    relations: RelationSet,
    ring: Ring,
    echelon: Echelon,
    generators: usize,
}

/// Image of a list of diagrams in the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceReport {
    pub dimension: usize,
    /// A maximal sub-list that stays independent in the quotient.
    pub basis: Vec<ChordDiagram>,
}

impl RelationBasis {
    pub fn build(n: usize, k: usize, relations: RelationSet, ring: Ring, limits: &Limits) -> Result<Self> {
        let index = DiagramIndex::new(n, k, limits)?;
        let rows = relation_rows(&index, &relations);
        Ok(Self::from_rows(index, relations, ring, rows))
    }

    pub(crate) fn from_rows(index: DiagramIndex, relations: RelationSet, ring: Ring, rows: Vec<SparseVec<BigInt>>) -> Self {
        let generators = rows.len();
        let echelon = match ring {
            Ring::Rational => {
                let mut e = RationalEchelon::new();
                for r in rows {
                    e.insert(linalg::to_rational(&r));
                }
                Echelon::Q(e)
            }
            Ring::Integer => {
                let mut e = IntegerEchelon::new();
                for r in rows {
                    e.insert(r);
                }
                Echelon::Z(e)
            }
        };
        Self { index, relations, ring, echelon, generators }
    }

    /// Rebuilds a basis from stored echelon rows; integral rows are expected
    /// for the integer ring.
    pub(crate) fn from_echelon_rows(
        index: DiagramIndex,
        relations: RelationSet,
        ring: Ring,
        rows: Vec<SparseVec<BigRational>>,
        generators: usize,
    ) -> Option<Self> {
        let echelon = match ring {
            Ring::Rational => Echelon::Q(RationalEchelon::from_reduced_rows(rows)?),
            Ring::Integer => Echelon::Z(IntegerEchelon::from_echelon_rows(
                rows.iter().map(|r| linalg::to_integer(r)).collect::<Option<_>>()?,
            )?),
        };
        Some(Self { index, relations, ring, echelon, generators })
    }

    pub(crate) fn echelon_rows(&self) -> Vec<SparseVec<BigRational>> {
        match &self.echelon {
            Echelon::Q(e) => e.rows().cloned().collect(),
            Echelon::Z(e) => e.rows().map(|r| linalg::to_rational(r)).collect(),
        }
    }

    pub fn index(&self) -> &DiagramIndex {
        &self.index
    }

    pub fn degree(&self) -> usize {
        self.index.degree()
    }

    pub fn strands(&self) -> usize {
        self.index.strands()
    }

    pub fn relations(&self) -> RelationSet {
        self.relations
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Number of distinct generator vectors fed to the elimination.
    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn rank(&self) -> usize {
        match &self.echelon {
            Echelon::Q(e) => e.rank(),
            Echelon::Z(e) => e.rank(),
        }
    }

    /// Quotient dimension over the rationals.
    pub fn dimension(&self) -> usize {
        self.index.len() - self.rank()
    }

    fn check_shape(&self, x: &LinearCombination<BigRational>) -> Result<()> {
        if let Some((n, k)) = x.shape() {
            if k != self.strands() {
                return Err(Error::StrandMismatch { left: self.strands(), right: k });
            }
            if n != self.degree() {
                return Err(Error::DegreeMismatch { left: self.degree(), right: n });
            }
        }
        Ok(())
    }

    pub fn coordinates(&self, x: &LinearCombination<BigRational>) -> Result<SparseVec<BigRational>> {
        self.check_shape(x)?;
        let mut v: SparseVec<BigRational> = x
            .iter()
            .map(|(d, c)| (self.index.position(d).expect("shape checked"), c.clone()))
            .collect();
        v.sort_by_key(|(i, _)| *i);
        Ok(v)
    }

    fn from_coordinates(&self, v: SparseVec<BigRational>) -> LinearCombination<BigRational> {
        LinearCombination::from_terms(v.into_iter().map(|(i, c)| (self.index.get(i).clone(), c)))
            .expect("homogeneous")
    }

    /// Normal form modulo the span (rationals) or lattice (integers).
    pub fn reduce(&self, x: &LinearCombination<BigRational>) -> Result<LinearCombination<BigRational>> {
        let v = self.coordinates(x)?;
        let r = match &self.echelon {
            Echelon::Q(e) => e.reduce(&v),
            Echelon::Z(e) => {
                let z = linalg::to_integer(&v).ok_or(Error::NonIntegral)?;
                linalg::to_rational(&e.reduce(&z))
            }
        };
        Ok(self.from_coordinates(r))
    }

    pub fn is_zero_mod(&self, x: &LinearCombination<BigRational>) -> Result<bool> {
        Ok(self.reduce(x)?.is_zero())
    }

    pub fn equal_mod(&self, x: &LinearCombination<BigRational>, y: &LinearCombination<BigRational>) -> Result<bool> {
        self.is_zero_mod(&x.sub(y)?)
    }

    /// Whether two diagrams agree in the quotient.
    pub fn diagrams_equal(&self, a: &ChordDiagram, b: &ChordDiagram) -> Result<bool> {
        self.is_zero_mod(&LinearCombination::difference(a, b)?)
    }

    /// Dimension of the image of `span(s)` in the rational quotient.
    pub fn subspace_dimension(&self, s: &[ChordDiagram]) -> Result<SubspaceReport> {
        let mut e = RationalEchelon::new();
        for row in self.echelon_rows() {
            e.insert(row);
        }
        let mut basis = Vec::new();
        for d in s {
            let v = self.coordinates(&LinearCombination::from_diagram(d.clone()))?;
            if e.insert(v) {
                basis.push(d.clone());
            }
        }
        Ok(SubspaceReport { dimension: basis.len(), basis })
    }
}

/// Invariant factors of the integral relation lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionReport {
    pub degree: usize,
    pub strands: usize,
    pub relations: String,
    pub diagrams: usize,
    pub rank: usize,
    /// Factors greater than one, in divisibility order.
    pub invariant_factors: Vec<String>,
    /// Columns left for the dense Smith normal form after unit pivoting.
    pub dense_columns: usize,
}

impl TorsionReport {
    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

/// Integral presentation of the quotient together with its coordinate space.
pub fn integral_presentation(n: usize, k: usize, rels: &RelationSet, limits: &Limits) -> Result<(DiagramIndex, Presentation)> {
    let index = DiagramIndex::new(n, k, limits)?;
    let rows = relation_rows(&index, rels);
    let p = Presentation::new(index.len(), rows);
    Ok((index, p))
}

pub fn torsion_report(index: &DiagramIndex, p: &Presentation, rels: &RelationSet) -> TorsionReport {
    TorsionReport {
        degree: index.degree(),
        strands: index.strands(),
        relations: rels.to_string(),
        diagrams: index.len(),
        rank: p.rank(),
        invariant_factors: p.torsion().iter().map(ToString::to_string).collect(),
        dense_columns: p.dense_size(),
    }
}

pub fn torsion_invariants(n: usize, k: usize, rels: &RelationSet, limits: &Limits) -> Result<TorsionReport> {
    let (index, p) = integral_presentation(n, k, rels, limits)?;
    Ok(torsion_report(&index, &p, rels))
}

/// Integer coordinates of a combination in `index`.
pub fn integer_coordinates(index: &DiagramIndex, x: &LinearCombination<BigInt>) -> Result<SparseVec<BigInt>> {
    let mut v = Vec::new();
    for (d, c) in x.iter() {
        let i = index.position(d).ok_or_else(|| {
            Error::Constraint(format!("diagram {d} is outside degree {} on {} strands", index.degree(), index.strands()))
        })?;
        v.push((i, c.clone()));
    }
    v.sort_by_key(|(i, _)| *i);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn d(s: &str) -> ChordDiagram {
        s.parse().unwrap()
    }

    fn dim(n: usize, k: usize, rels: RelationSet) -> usize {
        RelationBasis::build(n, k, rels, Ring::Rational, &Limits::default()).unwrap().dimension()
    }

    #[test]
    fn one_term_examples() {
        let lim = Limits::default();
        assert_eq!(gen_one_term(1, 1, &lim).unwrap().len(), 1);
        let two = gen_one_term(2, 1, &lim).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two.iter().all(|r| r.coefficient(&d("k=1 [a b a b]")).is_zero()));
        assert!(gen_one_term(1, 2, &lim).unwrap().iter().all(|r| r.coefficient(&d("k=2 [a][a]")).is_zero()));
    }

    #[test]
    fn four_term_on_one_strand() {
        let rows = gen_four_term(2, 1, &Limits::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].to_string(), "(k=1 [a a b b]) - (k=1 [a b b a])");
        assert_eq!(dim(2, 1, RelationSet::FOUR_TERM), 2);
    }

    #[test]
    fn knot_dimensions() {
        let four: Vec<usize> = (1..=4).map(|n| dim(n, 1, RelationSet::FOUR_TERM)).collect();
        assert_eq!(four, [1, 2, 3, 6]);
        let both: Vec<usize> = (1..=4).map(|n| dim(n, 1, RelationSet::ONE_AND_FOUR_TERM)).collect();
        assert_eq!(both, [0, 1, 1, 3]);
    }

    #[test]
    fn antisymmetry_examples() {
        let rows = gen_antisymmetry(1, 2, AntisymmetryConvention::EndpointParity, &Limits::default()).unwrap();
        let marked = d("k=2 [a][a]");
        assert!(rows.iter().any(|r| r.len() == 1 && r.coefficient(&marked) == BigInt::from(2)));
        let rows = gen_antisymmetry(2, 1, AntisymmetryConvention::EndpointParity, &Limits::default()).unwrap();
        assert!(rows.iter().all(|r| r.coefficient(&d("k=1 [a b a b]")).is_zero()));
    }

    #[test]
    fn reduce_and_equal() {
        let b = RelationBasis::build(2, 1, RelationSet::ONE_AND_FOUR_TERM, Ring::Rational, &Limits::default()).unwrap();
        let one = |s: &str| LinearCombination::from_diagram(d(s));
        assert!(b.reduce(&one("k=1 [a b b a]")).unwrap().is_zero());
        assert!(b.equal_mod(&one("k=1 [a a b b]"), &one("k=1 [a b b a]")).unwrap());
        assert!(!b.is_zero_mod(&one("k=1 [a b a b]")).unwrap());
        assert!(b.reduce(&LinearCombination::zero()).unwrap().is_zero());
        assert!(b.reduce(&one("k=2 [a][a]")).is_err());
    }

    #[test]
    fn subspace() {
        let b = RelationBasis::build(2, 1, RelationSet::ONE_AND_FOUR_TERM, Ring::Rational, &Limits::default()).unwrap();
        let r = b.subspace_dimension(b.index().diagrams()).unwrap();
        assert_eq!(r.dimension, 1);
        assert_eq!(r.basis, vec![d("k=1 [a b a b]")]);
    }

    #[test]
    fn relation_set_text() {
        let r: RelationSet = "1t,4t".parse().unwrap();
        assert_eq!(r, RelationSet::ONE_AND_FOUR_TERM);
        assert_eq!(r.to_string(), "1t,4t");
        assert!("".parse::<RelationSet>().is_err());
        assert!("5t".parse::<RelationSet>().is_err());
    }

    #[test]
    fn small_torsion() {
        let t = torsion_invariants(2, 1, &RelationSet::ONE_AND_FOUR_TERM, &Limits::default()).unwrap();
        assert!(t.is_torsion_free());
        assert_eq!(t.rank, 2);
    }

    #[test]
    fn generalized_relation_single_chord_is_plain() {
        // with a one-chord share the generalized relation is a plain 4-term row
        let x = d("k=1 [a b a b]");
        let g = generalized_four_term(&x, 0, 1, &BTreeSet::from([1])).unwrap();
        let b = RelationBasis::build(2, 1, RelationSet::FOUR_TERM, Ring::Rational, &Limits::default()).unwrap();
        assert!(b.is_zero_mod(&g.to_rational()).unwrap());
    }
}
