//! Chord diagrams on string links.
//!
//! A diagram of degree `n` on `k` strands is stored as `k` sequences of chord
//! labels, each read bottom-to-top along its strand. Every label occurs exactly
//! twice overall. [`ChordDiagram`] values are always kept in canonical form:
//! chords are numbered `0, 1, 2, ...` in order of first appearance when the
//! strands are scanned in order. Two diagrams are therefore equal (as Rust
//! values) exactly when they agree up to renaming of chords.
//!
//! The text form is `k=<strands> [ids][ids]...`, for example `k=2 [a b][b a]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by [`ChordDiagram::coproduct`] (it returns `2^n` pairs).
pub const MAX_COPRODUCT_DEGREE: usize = 20;

/// Canonical chord name for a chord index: `a..z`, then `aa, ab, ...`.
pub fn chord_name(mut index: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Inverse of [`chord_name`]; `None` for anything that is not a canonical name.
pub fn chord_index(name: &str) -> Option<usize> {
    if name.is_empty() || !name.bytes().all(|b| b.is_ascii_lowercase()) {
        return None;
    }
    let mut acc: usize = 0;
    for b in name.bytes() {
        acc = acc.checked_mul(26)?.checked_add((b - b'a') as usize + 1)?;
    }
    Some(acc - 1)
}

/// Relabels chords by first appearance, scanning strand 1 bottom-to-top, then
/// strand 2, and so on.
pub(crate) fn canonical_strands(strands: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut rename: HashMap<usize, usize> = HashMap::new();
    strands
        .iter()
        .map(|s| {
            s.iter()
                .map(|c| {
                    let next = rename.len();
                    *rename.entry(*c).or_insert(next)
                })
                .collect()
        })
        .collect()
}

/// A chord diagram on `k` ordered, upward oriented strands.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ChordDiagram {
    strands: Vec<Vec<usize>>,
}

/// Deterministic text serialization of a diagram with canonical chord names.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalCode(pub String);

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A contiguous run of endpoint slots on one strand. `strand` is 1-based,
/// `start` is the 0-based slot index of the lowest endpoint in the arc.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Arc {
    pub strand: usize,
    pub start: usize,
    pub len: usize,
}

impl Arc {
    pub fn contains(&self, strand: usize, slot: usize) -> bool {
        self.strand == strand && slot >= self.start && slot < self.start + self.len
    }
}

/// A set of chords confined to two arcs that contain no other endpoints.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Share {
    pub chords: BTreeSet<usize>,
    pub arcs: [Arc; 2],
}

impl ChordDiagram {
    /// Builds a diagram from arbitrary chord labels, validating that each
    /// label occurs exactly twice.
    pub fn from_strands(strands: Vec<Vec<usize>>) -> Result<Self> {
        if strands.is_empty() {
            return Err(Error::NoStrands);
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for c in strands.iter().flatten() {
            *counts.entry(*c).or_default() += 1;
        }
        if let Some((id, count)) = counts.iter().find(|(_, n)| **n != 2) {
            return Err(Error::ChordMultiplicity {
                id: id.to_string(),
                count: *count,
            });
        }
        Ok(Self::from_valid_strands(&strands))
    }

    /// Canonicalizes strands already known to be a valid pairing.
    pub(crate) fn from_valid_strands(strands: &[Vec<usize>]) -> Self {
        debug_assert!(!strands.is_empty());
        Self {
            strands: canonical_strands(strands),
        }
    }

    /// The diagram with no chords on `k` strands.
    pub fn empty(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::NoStrands);
        }
        Ok(Self {
            strands: vec![Vec::new(); k],
        })
    }

    pub fn strand_count(&self) -> usize {
        self.strands.len()
    }

    pub fn degree(&self) -> usize {
        self.strands.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Strand sequences, 0-based, with canonical chord indices.
    pub fn strands(&self) -> &[Vec<usize>] {
        &self.strands
    }

    /// `(strand, slot)` pairs (both 0-based) of the two endpoints of every chord.
    pub fn endpoints(&self) -> Vec<[(usize, usize); 2]> {
        endpoint_table(&self.strands, self.degree())
    }

    /// Unordered strand pair `{i, j}` (1-based, `i <= j`) joined by each chord.
    pub fn chord_labels(&self) -> Vec<(usize, usize)> {
        self.endpoints()
            .iter()
            .map(|[(s, _), (t, _)]| (s.min(t) + 1, s.max(t) + 1))
            .collect()
    }

    pub fn code(&self) -> CanonicalCode {
        CanonicalCode(self.to_string())
    }

    /// Resolves a chord given either as a canonical name (`a`, `b`, ...) or a
    /// 0-based index.
    pub fn resolve_chord(&self, id: &str) -> Result<usize> {
        let idx = chord_index(id)
            .or_else(|| id.parse::<usize>().ok())
            .ok_or_else(|| Error::UnknownChord(id.to_string()))?;
        if idx < self.degree() {
            Ok(idx)
        } else {
            Err(Error::UnknownChord(id.to_string()))
        }
    }

    /// Stacks `top` above `self`, strand by strand.
    pub fn product(&self, top: &ChordDiagram) -> Result<ChordDiagram> {
        if self.strand_count() != top.strand_count() {
            return Err(Error::StrandMismatch {
                left: self.strand_count(),
                right: top.strand_count(),
            });
        }
        let shift = self.degree();
        let strands: Vec<Vec<usize>> = self
            .strands
            .iter()
            .zip(&top.strands)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|c| c + shift)).collect())
            .collect();
        Ok(Self::from_valid_strands(&strands))
    }

    /// Keeps only the chords for which `keep` returns true.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> ChordDiagram {
        let strands: Vec<Vec<usize>> = self
            .strands
            .iter()
            .map(|s| s.iter().copied().filter(|c| keep(*c)).collect())
            .collect();
        Self::from_valid_strands(&strands)
    }

    /// All `2^n` splittings `(D'_J, D''_J)`: the first factor drops the chords
    /// in `J`, the second keeps exactly the chords in `J`. Subsets are listed
    /// in increasing bitmask order.
    pub fn coproduct(&self) -> Result<Vec<(ChordDiagram, ChordDiagram)>> {
        let n = self.degree();
        if n > MAX_COPRODUCT_DEGREE {
            return Err(Error::CapExceeded {
                what: "coproduct degree",
                needed: n as u128,
                cap: MAX_COPRODUCT_DEGREE as u128,
            });
        }
        Ok((0u64..1 << n)
            .map(|mask| {
                let in_j = |c: usize| mask >> c & 1 == 1;
                (self.restrict(|c| !in_j(c)), self.restrict(in_j))
            })
            .collect())
    }

    /// Splices the single strand of `factor` into strand `strand` (1-based) of
    /// `self`, just above the first `slot` endpoints.
    pub fn connect_sum(&self, factor: &ChordDiagram, strand: usize, slot: usize) -> Result<ChordDiagram> {
        if factor.strand_count() != 1 {
            return Err(Error::Constraint(
                "connected-sum factor must have exactly one strand".into(),
            ));
        }
        let i = self.check_strand(strand)?;
        let len = self.strands[i].len();
        if slot > len {
            return Err(Error::SlotOutOfRange { slot, len });
        }
        let shift = self.degree();
        let mut strands = self.strands.clone();
        let inserted: Vec<usize> = factor.strands[0].iter().map(|c| c + shift).collect();
        strands[i].splice(slot..slot, inserted);
        Ok(Self::from_valid_strands(&strands))
    }

    /// Reverses the endpoint order on strand `strand` (1-based).
    pub fn reverse_component(&self, strand: usize) -> Result<ChordDiagram> {
        let i = self.check_strand(strand)?;
        let mut strands = self.strands.clone();
        strands[i].reverse();
        Ok(Self::from_valid_strands(&strands))
    }

    /// Finds two arcs witnessing `chords` as a share, if they exist.
    ///
    /// The endpoints of `chords` must split into at most two maximal runs of
    /// consecutive slots. A single run is reported as its lowest slot plus the
    /// remainder.
    pub fn is_share(&self, chords: &BTreeSet<usize>) -> Result<Option<Share>> {
        if let Some(bad) = chords.iter().find(|c| **c >= self.degree()) {
            return Err(Error::UnknownChord(bad.to_string()));
        }
        if chords.is_empty() {
            return Ok(None);
        }
        let runs = runs_of(&self.strands, |c| chords.contains(&c));
        let arcs = match runs.as_slice() {
            [a, b] => [*a, *b],
            [a] => [
                Arc { len: 1, ..*a },
                Arc {
                    strand: a.strand,
                    start: a.start + 1,
                    len: a.len - 1,
                },
            ],
            _ => return Ok(None),
        };
        Ok(Some(Share {
            chords: chords.clone(),
            arcs,
        }))
    }

    /// One marked chord `v` from strand 1 to strand 2, with `p` nested chords
    /// on strand 1 and `q` nested chords on strand 2 crossing it. The
    /// innermost crossing chord sits nearest to `v`.
    pub fn build_star(p: usize, q: usize) -> ChordDiagram {
        let v = 0;
        let lower: Vec<usize> = (1..=p).collect();
        let upper: Vec<usize> = (p + 1..=p + q).collect();
        let nest = |cs: &[usize]| -> Vec<usize> {
            cs.iter()
                .copied()
                .chain(std::iter::once(v))
                .chain(cs.iter().rev().copied())
                .collect()
        };
        Self::from_valid_strands(&[nest(&lower), nest(&upper)])
    }

    fn check_strand(&self, strand: usize) -> Result<usize> {
        if strand == 0 || strand > self.strand_count() {
            return Err(Error::StrandOutOfRange {
                index: strand,
                strands: self.strand_count(),
            });
        }
        Ok(strand - 1)
    }
}

pub(crate) fn endpoint_table(strands: &[Vec<usize>], degree: usize) -> Vec<[(usize, usize); 2]> {
    let mut table = vec![[(usize::MAX, usize::MAX); 2]; degree];
    let mut seen = vec![false; degree];
    for (s, strand) in strands.iter().enumerate() {
        for (pos, &c) in strand.iter().enumerate() {
            let k = usize::from(seen[c]);
            table[c][k] = (s, pos);
            seen[c] = true;
        }
    }
    table
}

/// Maximal runs of consecutive slots whose chord satisfies `member`.
pub(crate) fn runs_of(strands: &[Vec<usize>], member: impl Fn(usize) -> bool) -> Vec<Arc> {
    let mut runs = Vec::new();
    for (s, strand) in strands.iter().enumerate() {
        let mut start = None;
        for (pos, &c) in strand.iter().enumerate() {
            match (member(c), start) {
                (true, None) => start = Some(pos),
                (false, Some(st)) => {
                    runs.push(Arc { strand: s + 1, start: st, len: pos - st });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(st) = start {
            runs.push(Arc { strand: s + 1, start: st, len: strand.len() - st });
        }
    }
    runs
}

impl Serialize for ChordDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ChordDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} ", self.strand_count())?;
        for strand in &self.strands {
            f.write_str("[")?;
            for (i, c) in strand.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(&chord_name(*c))?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl FromStr for ChordDiagram {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Parser::new(text).diagram()
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn take_while(&mut self, pred: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn diagram(&mut self) -> Result<ChordDiagram> {
        self.skip_ws();
        if !self.text[self.pos..].starts_with("k=") {
            return self.err("expected `k=`");
        }
        self.pos += 2;
        let digits = self.take_while(|b| b.is_ascii_digit());
        let k: usize = match digits.parse() {
            Ok(k) => k,
            Err(_) => return self.err("expected a strand count"),
        };
        if k == 0 {
            return Err(Error::NoStrands);
        }
        if !self.skip_ws() {
            return self.err("expected whitespace after the strand count");
        }
        let mut ids: HashMap<&'a str, usize> = HashMap::new();
        let mut strands: Vec<Vec<usize>> = Vec::new();
        while self.peek() == Some(b'[') {
            self.pos += 1;
            let mut strand = Vec::new();
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b']') => {
                        self.pos += 1;
                        break;
                    }
                    Some(b) if b.is_ascii_alphanumeric() => {
                        let id = self.take_while(|b| b.is_ascii_alphanumeric());
                        let next = ids.len();
                        strand.push(*ids.entry(id).or_insert(next));
                    }
                    Some(_) => return self.err("unexpected character in strand"),
                    None => return self.err("unterminated strand"),
                }
            }
            strands.push(strand);
            self.skip_ws();
        }
        if self.pos != self.text.len() {
            return self.err("trailing input");
        }
        if strands.len() != k {
            return Err(Error::StrandCount {
                declared: k,
                found: strands.len(),
            });
        }
        let names: HashMap<usize, &str> = ids.iter().map(|(n, i)| (*i, *n)).collect();
        ChordDiagram::from_strands(strands).map_err(|e| match e {
            Error::ChordMultiplicity { id, count } => Error::ChordMultiplicity {
                id: id
                    .parse::<usize>()
                    .ok()
                    .and_then(|i| names.get(&i))
                    .map_or(id, |s| s.to_string()),
                count,
            },
            e => e,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> ChordDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let one = d("k=2 [a][a]");
        assert_eq!(one.degree(), 1);
        assert_eq!(one.chord_labels(), vec![(1, 2)]);

        let two = d("k=1 [a b a b]");
        assert_eq!(two.degree(), 2);
        assert_eq!(two.strand_count(), 1);

        assert_eq!(
            "k=1 [a b a]".parse::<ChordDiagram>(),
            Err(Error::ChordMultiplicity { id: "b".into(), count: 1 })
        );
        assert_eq!("k=0 ".parse::<ChordDiagram>(), Err(Error::NoStrands));
        assert!(matches!("k=2 [a][a".parse::<ChordDiagram>(), Err(Error::Parse { .. })));
        assert!(matches!("k=2 [a]".parse::<ChordDiagram>(), Err(Error::StrandCount { .. })));
        assert!(matches!("k=1 [a-b a b]".parse::<ChordDiagram>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_codes() {
        assert_eq!(d("k=1 [x y x y]").code(), d("k=1 [a b a b]").code());
        assert_eq!(d("k=2 [a][a]").code().0, "k=2 [a][a]");
        assert_ne!(d("k=1 [a b a b]").code(), d("k=1 [a b b a]").code());
        assert_eq!(d("k=2 [c1 c2][c2 c1]").to_string(), "k=2 [a b][b a]");
        assert_eq!(d("k=3 [][q][q]").to_string(), "k=3 [][a][a]");
    }

    #[test]
    fn chord_names_roundtrip() {
        for i in 0..2000 {
            assert_eq!(chord_index(&chord_name(i)), Some(i));
        }
        assert_eq!(chord_name(25), "z");
        assert_eq!(chord_name(26), "aa");
    }

    #[test]
    fn product_examples() {
        assert_eq!(d("k=1 [a a]").product(&d("k=1 [b b]")).unwrap(), d("k=1 [a a b b]"));
        let x = d("k=2 [a b][b a]");
        assert_eq!(x.product(&ChordDiagram::empty(2).unwrap()).unwrap(), x);
        assert_eq!(d("k=2 [a][a]").product(&d("k=2 [b][b]")).unwrap(), d("k=2 [a b][a b]"));
        assert!(matches!(
            d("k=1 [a a]").product(&d("k=2 [a][a]")),
            Err(Error::StrandMismatch { .. })
        ));
    }

    #[test]
    fn coproduct_examples() {
        let c = d("k=2 [a][a]");
        let e = ChordDiagram::empty(2).unwrap();
        assert_eq!(c.coproduct().unwrap(), vec![(c.clone(), e.clone()), (e, c)]);
        assert_eq!(d("k=1 [a b a b]").coproduct().unwrap().len(), 4);
    }

    #[test]
    fn connect_sum_examples() {
        let a = d("k=1 [b b]");
        let x = d("k=2 [a][a]");
        assert_eq!(x.connect_sum(&a, 1, 0).unwrap(), d("k=2 [b b a][a]"));
        assert_eq!(x.connect_sum(&a, 1, 1).unwrap(), d("k=2 [a b b][a]"));
        assert_eq!(
            x.connect_sum(&a, 1, 2),
            Err(Error::SlotOutOfRange { slot: 2, len: 1 })
        );
        assert!(x.connect_sum(&a, 3, 0).is_err());
    }

    #[test]
    fn reverse_examples() {
        let x = d("k=2 [a b][a b]");
        assert_eq!(x.reverse_component(1).unwrap(), d("k=2 [b a][a b]"));
        assert_eq!(x.reverse_component(1).unwrap().reverse_component(1).unwrap(), x);
        let y = d("k=1 [a b a b]");
        assert_eq!(y.reverse_component(1).unwrap().code(), y.code());
        assert!(x.reverse_component(0).is_err());
    }

    #[test]
    fn share_examples() {
        let x = d("k=1 [a b a b]");
        let s = x.is_share(&BTreeSet::from([1])).unwrap().unwrap();
        assert_eq!(s.arcs[0], Arc { strand: 1, start: 1, len: 1 });
        assert_eq!(s.arcs[1], Arc { strand: 1, start: 3, len: 1 });
        let all = x.is_share(&BTreeSet::from([0, 1])).unwrap().unwrap();
        assert_eq!(all.arcs[0].len + all.arcs[1].len, 4);
        let y = d("k=1 [a b c a b c]");
        assert_eq!(y.is_share(&BTreeSet::from([0, 2])).unwrap(), None);
        assert_eq!(y.is_share(&BTreeSet::from([7])), Err(Error::UnknownChord("7".into())));
    }

    #[test]
    fn stars() {
        assert_eq!(ChordDiagram::build_star(0, 0), d("k=2 [v][v]"));
        assert_eq!(ChordDiagram::build_star(2, 0), d("k=2 [b c v c b][v]"));
        assert_eq!(ChordDiagram::build_star(1, 1), d("k=2 [b v b][c v c]"));
    }
}
