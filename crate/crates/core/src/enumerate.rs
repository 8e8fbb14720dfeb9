//! Exhaustive enumeration of diagrams of a given degree and strand count.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::diagram::ChordDiagram;
use crate::error::{Error, Result};

/// Resource guard shared by every exhaustive computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of diagrams a single coordinate space may hold.
    pub max_diagrams: u128,
}

impl Limits {
    pub const DEFAULT_MAX_DIAGRAMS: u128 = 10_000;

    pub fn new(max_diagrams: u128) -> Self {
        Self { max_diagrams }
    }

    pub fn unbounded() -> Self {
        Self {
            max_diagrams: u128::MAX,
        }
    }

    pub fn check(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_diagrams {
            Err(Error::CapExceeded {
                what,
                needed,
                cap: self.max_diagrams,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self::new(Self::DEFAULT_MAX_DIAGRAMS)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `(2n-1)!! * C(2n+k-1, k-1)`: perfect matchings of `2n` points times weak
/// compositions of `2n` into `k` parts.
pub fn diagram_count(n: usize, k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let matchings: u128 = (1..=n as u128).map(|i| 2 * i - 1).product();
    matchings * binomial((2 * n + k - 1) as u128, (k - 1) as u128)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// All perfect matchings of `0..m`, written as a sequence of chord labels in
/// first-appearance order.
fn matchings(m: usize) -> Vec<Vec<usize>> {
    fn go(seq: &mut Vec<Option<usize>>, next: usize, out: &mut Vec<Vec<usize>>) {
        let Some(i) = seq.iter().position(Option::is_none) else {
            out.push(seq.iter().map(|c| c.expect("filled")).collect());
            return;
        };
        seq[i] = Some(next);
        for j in i + 1..seq.len() {
            if seq[j].is_none() {
                seq[j] = Some(next);
                go(seq, next + 1, out);
                seq[j] = None;
            }
        }
        seq[i] = None;
    }
    let mut out = Vec::new();
    go(&mut vec![None; m], 0, &mut out);
    out
}

/// One representative per canonical code, in sorted order.
pub fn enumerate_diagrams(n: usize, k: usize, limits: &Limits) -> Result<Vec<ChordDiagram>> {
    if k == 0 {
        return Err(Error::NoStrands);
    }
    limits.check("diagram enumeration", diagram_count(n, k))?;
    let words = matchings(2 * n);
    let mut out: Vec<ChordDiagram> = compositions(2 * n, k)
        .into_par_iter()
        .flat_map_iter(|lengths| {
            words.iter().map(move |word| {
                let mut strands = Vec::with_capacity(k);
                let mut at = 0;
                for len in &lengths {
                    strands.push(word[at..at + len].to_vec());
                    at += len;
                }
                ChordDiagram::from_valid_strands(&strands)
            })
        })
        .collect();
    out.par_sort_unstable();
    out.dedup();
    Ok(out)
}

/// Coordinate system for `B_n^k`: diagrams in sorted order and their positions.
#[derive(Clone, Debug)]
pub struct DiagramIndex {
    degree: usize,
    strands: usize,
    diagrams: Vec<ChordDiagram>,
    position: HashMap<ChordDiagram, usize>,
}

impl DiagramIndex {
    pub fn new(n: usize, k: usize, limits: &Limits) -> Result<Self> {
        let diagrams = enumerate_diagrams(n, k, limits)?;
        let position = diagrams.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        Ok(Self {
            degree: n,
            strands: k,
            diagrams,
            position,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn diagrams(&self) -> &[ChordDiagram] {
        &self.diagrams
    }

    pub fn get(&self, i: usize) -> &ChordDiagram {
        &self.diagrams[i]
    }

    pub fn position(&self, d: &ChordDiagram) -> Option<usize> {
        self.position.get(d).copied()
    }
}
