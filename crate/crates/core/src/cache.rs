//! On-disk cache of reduced relation bases.
//!
//! Files are JSON, one per `(n, k, relations, ring, generator version)`. A
//! cache hit is only trusted after a probe: a spread of freshly generated
//! relation vectors must reduce to zero and the stored rows must fit the
//! coordinate space. Anything else triggers a rebuild that overwrites the file.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::enumerate::{DiagramIndex, Limits};
use crate::error::{Error, Result};
use crate::linalg::{self, SparseVec};
use crate::relations::{relation_rows, RelationBasis, RelationSet, Ring, GENERATOR_VERSION};

/// Number of generator vectors re-checked on every cache hit.
const PROBE_SIZE: usize = 64;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    degree: usize,
    strands: usize,
    relations: String,
    ring: String,
    diagrams: usize,
    generators: usize,
    /// Sparse rows as `(column, "p/q")` pairs.
    rows: Vec<Vec<(usize, String)>>,
}

/// How a basis was obtained from [`load_or_build`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheStatus {
    Hit,
    Built,
    /// A file existed but failed validation and was replaced.
    Rebuilt,
}

pub fn cache_path(dir: &Path, n: usize, k: usize, rels: RelationSet, ring: Ring) -> PathBuf {
    let tag = rels.to_string().replace(',', "+");
    dir.join(format!("basis-n{n}-k{k}-{tag}-{ring}-v{GENERATOR_VERSION}.json"))
}

fn encode(b: &RelationBasis) -> CacheFile {
    CacheFile {
        version: GENERATOR_VERSION,
        degree: b.degree(),
        strands: b.strands(),
        relations: b.relations().to_string(),
        ring: b.ring().to_string(),
        diagrams: b.index().len(),
        generators: b.generator_count(),
        rows: b
            .echelon_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|(c, x)| (c, x.to_string())).collect())
            .collect(),
    }
}

fn decode(file: CacheFile, index: DiagramIndex, rels: RelationSet, ring: Ring) -> Option<RelationBasis> {
    let matches = file.version == GENERATOR_VERSION
        && file.degree == index.degree()
        && file.strands == index.strands()
        && file.relations == rels.to_string()
        && file.ring == ring.to_string()
        && file.diagrams == index.len();
    if !matches {
        return None;
    }
    let columns = index.len();
    let mut rows: Vec<SparseVec<BigRational>> = Vec::with_capacity(file.rows.len());
    for r in file.rows {
        let mut row = Vec::with_capacity(r.len());
        for (c, x) in r {
            if c >= columns || row.last().is_some_and(|(p, _): &(usize, BigRational)| *p >= c) {
                return None;
            }
            row.push((c, BigRational::from_str(&x).ok()?));
        }
        rows.push(row);
    }
    RelationBasis::from_echelon_rows(index, rels, ring, rows, file.generators)
}

/// Evenly spaced generator vectors all reduce to zero.
fn probe(b: &RelationBasis, generators: &[SparseVec<num_bigint::BigInt>]) -> bool {
    if generators.len() != b.generator_count() {
        return false;
    }
    let step = (generators.len() / PROBE_SIZE).max(1);
    generators.iter().step_by(step).all(|g| {
        let x = crate::lincomb::LinearCombination::from_terms(
            linalg::to_rational(g).into_iter().map(|(i, c)| (b.index().get(i).clone(), c)),
        );
        x.is_ok_and(|x| b.is_zero_mod(&x).unwrap_or(false))
    })
}

/// Loads the basis from `dir` if a valid file is present, otherwise builds
/// it and writes the file.
pub fn load_or_build(dir: &Path, n: usize, k: usize, rels: RelationSet, ring: Ring, limits: &Limits) -> Result<(RelationBasis, CacheStatus)> {
    let path = cache_path(dir, n, k, rels, ring);
    let index = DiagramIndex::new(n, k, limits)?;
    let generators = relation_rows(&index, &rels);
    let mut status = CacheStatus::Built;
    if let Ok(text) = fs::read_to_string(&path) {
        let cached = serde_json::from_str::<CacheFile>(&text)
            .ok()
            .and_then(|f| decode(f, index.clone(), rels, ring));
        match cached {
            Some(b) if probe(&b, &generators) => return Ok((b, CacheStatus::Hit)),
            _ => status = CacheStatus::Rebuilt,
        }
    }
    let b = RelationBasis::from_rows(index, rels, ring, generators);
    fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
    let text = serde_json::to_string(&encode(&b)).map_err(|e| Error::Cache(e.to_string()))?;
    fs::write(&path, text).map_err(|e| Error::Cache(e.to_string()))?;
    Ok((b, status))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_dir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("chordlink-cache-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn hit_after_build() {
        let dir = temp_dir("hit");
        let lim = Limits::default();
        for ring in [Ring::Rational, Ring::Integer] {
            let (a, s1) = load_or_build(&dir, 3, 2, RelationSet::ONE_AND_FOUR_TERM, ring, &lim).unwrap();
            let (b, s2) = load_or_build(&dir, 3, 2, RelationSet::ONE_AND_FOUR_TERM, ring, &lim).unwrap();
            assert_eq!((s1, s2), (CacheStatus::Built, CacheStatus::Hit));
            assert_eq!(a.rank(), b.rank());
            assert_eq!(a.echelon_rows(), b.echelon_rows());
        }
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn corrupted_file_is_rebuilt() {
        let dir = temp_dir("bad");
        let lim = Limits::default();
        let rels = RelationSet::FOUR_TERM;
        let (good, _) = load_or_build(&dir, 2, 2, rels, Ring::Rational, &lim).unwrap();
        let path = cache_path(&dir, 2, 2, rels, Ring::Rational);
        // drop every row: parses fine but fails the probe
        let mut f: CacheFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        f.rows.clear();
        fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
        let (b, s) = load_or_build(&dir, 2, 2, rels, Ring::Rational, &lim).unwrap();
        assert_eq!(s, CacheStatus::Rebuilt);
        assert_eq!(b.rank(), good.rank());
        fs::write(&path, "not json").unwrap();
        assert_eq!(load_or_build(&dir, 2, 2, rels, Ring::Rational, &lim).unwrap().1, CacheStatus::Rebuilt);
        fs::remove_dir_all(&dir).unwrap();
    }
}
