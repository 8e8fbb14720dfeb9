//! Exact sparse elimination over the rationals and the integers.
//!
//! Vectors are sorted `(column, coefficient)` lists without zeros.
//! [`RationalEchelon`] keeps monic rows keyed by pivot column.
//! [`IntegerEchelon`] keeps a Hermite-style basis of a lattice.
//! [`Presentation`] removes unit pivots from a relation matrix and puts the
//! remainder in Smith normal form, which describes the integral quotient up
//! to isomorphism together with coordinates for any vector.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type SparseVec<R> = Vec<(usize, R)>;

/// `a + c * b`, dropping cancelled entries.
pub fn axpy<R>(a: &[(usize, R)], c: &R, b: &[(usize, R)]) -> SparseVec<R>
where
    R: Clone + Zero + std::ops::Mul<Output = R>,
    for<'x> &'x R: std::ops::Mul<&'x R, Output = R>,
{
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, x.1.clone() + c * &y.1)
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                x.clone()
            }
            (Some(x), None) => {
                i += 1;
                x.clone()
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, c * &y.1)
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    out
}

pub fn scale<R>(v: &[(usize, R)], c: &R) -> SparseVec<R>
where
    R: Zero,
    for<'x> &'x R: std::ops::Mul<&'x R, Output = R>,
{
    v.iter()
        .map(|(i, x)| (*i, c * x))
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

pub fn to_rational(v: &[(usize, BigInt)]) -> SparseVec<BigRational> {
    v.iter().map(|(i, x)| (*i, BigRational::from_integer(x.clone()))).collect()
}

/// Integer vector if every coefficient is integral.
pub fn to_integer(v: &[(usize, BigRational)]) -> Option<SparseVec<BigInt>> {
    v.iter()
        .map(|(i, x)| x.is_integer().then(|| (*i, x.to_integer())))
        .collect()
}

/// Reduced-on-insert echelon basis over the rationals, pivots normalised to 1.
#[derive(Clone, Debug, Default)]
pub struct RationalEchelon {
    rows: BTreeMap<usize, SparseVec<BigRational>>,
}

impl RationalEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a basis from rows already in reduced echelon form. Returns
    /// `None` if a row is empty, not monic, or shares its pivot.
    pub fn from_reduced_rows(rows: Vec<SparseVec<BigRational>>) -> Option<Self> {
        let mut map = BTreeMap::new();
        for r in rows {
            let (lead, x) = r.first()?;
            if !x.is_one() || map.insert(*lead, r).is_some() {
                return None;
            }
        }
        Some(Self { rows: map })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<BigRational>> {
        self.rows.values()
    }

    /// Adds `v` to the span; true when the rank grows.
    pub fn insert(&mut self, mut v: SparseVec<BigRational>) -> bool {
        loop {
            let Some((lead, x)) = v.first().cloned() else {
                return false;
            };
            match self.rows.get(&lead) {
                Some(row) => v = axpy(&v, &-x, row),
                None => {
                    let inv = x.recip();
                    self.rows.insert(lead, scale(&v, &inv));
                    return true;
                }
            }
        }
    }

    /// Normal form: every pivot column is eliminated.
    pub fn reduce(&self, v: &[(usize, BigRational)]) -> SparseVec<BigRational> {
        let mut acc: BTreeMap<usize, BigRational> = v.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((c, x)) = acc.pop_first() {
            match self.rows.get(&c) {
                Some(row) => {
                    for (j, y) in &row[1..] {
                        let e = acc.entry(*j).or_insert_with(BigRational::zero);
                        *e -= &x * y;
                        if e.is_zero() {
                            acc.remove(j);
                        }
                    }
                }
                None => out.push((c, x)),
            }
        }
        out
    }

    pub fn contains(&self, v: &[(usize, BigRational)]) -> bool {
        self.reduce(v).is_empty()
    }
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Hermite-style echelon basis of a lattice in `Z^columns`; pivots positive.
#[derive(Clone, Debug, Default)]
pub struct IntegerEchelon {
    rows: BTreeMap<usize, SparseVec<BigInt>>,
}

impl IntegerEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rebuilds a lattice basis from echelon rows with positive pivots.
    pub fn from_echelon_rows(rows: Vec<SparseVec<BigInt>>) -> Option<Self> {
        let mut map = BTreeMap::new();
        for r in rows {
            let (lead, x) = r.first()?;
            if !x.is_positive() || map.insert(*lead, r).is_some() {
                return None;
            }
        }
        Some(Self { rows: map })
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<BigInt>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.rows.iter().map(|(c, r)| (*c, &r[0].1))
    }

    /// Adds `v` to the lattice; true when the rank grows.
    pub fn insert(&mut self, mut v: SparseVec<BigInt>) -> bool {
        loop {
            let Some((lead, b)) = v.first().cloned() else {
                return false;
            };
            let Some(p) = self.rows.get(&lead) else {
                if b.is_negative() {
                    v = scale(&v, &-BigInt::one());
                }
                self.rows.insert(lead, v);
                return true;
            };
            let a = p[0].1.clone();
            if (&b % &a).is_zero() {
                v = axpy(&v, &-(&b / &a), p);
                continue;
            }
            let (g, s, t) = ext_gcd(&a, &b);
            let new_row = axpy(&scale(p, &s), &t, &v);
            let rest = axpy(&scale(p, &(&b / &g)), &-(&a / &g), &v);
            self.rows.insert(lead, new_row);
            v = rest;
        }
    }

    /// Remainder of `v` modulo the lattice; zero iff `v` lies in it.
    pub fn reduce(&self, v: &[(usize, BigInt)]) -> SparseVec<BigInt> {
        let mut acc: BTreeMap<usize, BigInt> = v.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((c, x)) = acc.pop_first() {
            let Some(row) = self.rows.get(&c) else {
                out.push((c, x));
                continue;
            };
            let a = &row[0].1;
            let q = x.div_floor(a);
            let r = &x - &q * a;
            if !r.is_zero() {
                out.push((c, r));
            }
            if q.is_zero() {
                continue;
            }
            for (j, y) in &row[1..] {
                let e = acc.entry(*j).or_insert_with(BigInt::zero);
                *e -= &q * y;
                if e.is_zero() {
                    acc.remove(j);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[(usize, BigInt)]) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Smith normal form `U * m * V = diag(d)` of a dense matrix, returning the
/// diagonal (length `min(rows, cols)`, nonnegative, each dividing the next
/// nonzero one) and `V`.
pub fn smith_normal_form(mut m: Vec<Vec<BigInt>>, cols: usize) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let rows = m.len();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let col_op = |m: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        // column dst -= q * column src
        for row in m.iter_mut() {
            if !row[src].is_zero() {
                let d = &row[src] * q;
                row[dst] -= d;
            }
        }
        for row in v.iter_mut() {
            if !row[src].is_zero() {
                let d = &row[src] * q;
                row[dst] -= d;
            }
        }
    };
    let swap_cols = |m: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            row.swap(a, b);
        }
    };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            m.swap(t, bi);
            swap_cols(&mut m, &mut v, t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let q = m[i][t].div_floor(&m[t][t]);
                    let (head, tail) = m.split_at_mut(i);
                    for (x, y) in tail[0][t..].iter_mut().zip(&head[t][t..]) {
                        *x -= &q * y;
                    }
                    clean &= m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let q = m[t][j].div_floor(&m[t][t]);
                    col_op(&mut m, &mut v, j, t, &q);
                    clean &= m[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&m[i][j] % &m[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    let (head, tail) = m.split_at_mut(i);
                    for (x, y) in head[t][t..].iter_mut().zip(&tail[0][t..]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if t < rows && !m[t][t].is_zero() && m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -x.clone();
            }
        }
        diag.push(m[t][t].clone());
    }
    (diag, v)
}

/// Where a vector sits in the integral quotient `Z^columns / L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    /// Coordinates against the free part; zero iff the vector lies in the
    /// rational span of `L`.
    pub free: Vec<BigInt>,
    /// `(invariant factor, coordinate reduced into 0..factor)` pairs for
    /// factors greater than one.
    pub torsion: Vec<(BigInt, BigInt)>,
}

impl QuotientClass {
    pub fn is_zero_rational(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_rational() && self.torsion.iter().all(|(_, x)| x.is_zero())
    }

    /// Additive order; `None` for infinite order.
    pub fn order(&self) -> Option<BigInt> {
        if !self.is_zero_rational() {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |acc, (d, x)| {
            let o = d / d.gcd(x);
            acc.lcm(&o)
        }))
    }
}

/// A presentation of `Z^columns / rowspan(rows)`: unit pivots are eliminated
/// sparsely, the rest goes through a dense Smith normal form.
#[derive(Clone, Debug)]
pub struct Presentation {
    columns: usize,
    /// Pivot column and its row, in elimination order; the pivot entry is ±1.
    pivots: Vec<(usize, SparseVec<BigInt>)>,
    /// Columns left after unit elimination, in increasing order.
    rest: Vec<usize>,
    diag: Vec<BigInt>,
    v: Vec<Vec<BigInt>>,
}

impl Presentation {
    pub fn new(columns: usize, rows: Vec<SparseVec<BigInt>>) -> Self {
        let mut rows: Vec<Option<SparseVec<BigInt>>> =
            rows.into_iter().filter(|r| !r.is_empty()).map(Some).collect();
        let mut by_col: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        for (ri, r) in rows.iter().enumerate() {
            for (c, _) in r.as_ref().expect("fresh") {
                by_col.entry(*c).or_default().insert(ri);
            }
        }
        // candidate rows ordered by length so short rows pivot first
        let mut queue: BTreeSet<(usize, usize)> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.as_ref().expect("fresh").len(), i))
            .collect();
        let mut pivots = Vec::new();
        while let Some((len, ri)) = queue.pop_first() {
            let Some(row) = rows[ri].as_ref() else { continue };
            if row.len() != len {
                continue;
            }
            let choice = row
                .iter()
                .filter(|(_, x)| x.abs().is_one())
                .min_by_key(|(c, _)| (by_col.get(c).map_or(0, BTreeSet::len), *c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((pc, px)) = choice else {
                continue;
            };
            let row = rows[ri].take().expect("present");
            for (c, _) in &row {
                if let Some(s) = by_col.get_mut(c) {
                    s.remove(&ri);
                }
            }
            let others: Vec<usize> = by_col.remove(&pc).map(|s| s.into_iter().collect()).unwrap_or_default();
            for oi in others {
                let other = rows[oi].take().expect("indexed rows exist");
                let x = other
                    .iter()
                    .find(|(c, _)| *c == pc)
                    .map(|(_, x)| x.clone())
                    .expect("indexed column present");
                // pivot is ±1, so x / px = x * px
                let updated = axpy(&other, &-(&x * &px), &row);
                for (c, _) in &other {
                    if let Some(s) = by_col.get_mut(c) {
                        s.remove(&oi);
                    }
                }
                for (c, _) in &updated {
                    if *c != pc {
                        by_col.entry(*c).or_default().insert(oi);
                    }
                }
                if !updated.is_empty() {
                    queue.insert((updated.len(), oi));
                    rows[oi] = Some(updated);
                }
            }
            pivots.push((pc, row));
        }
        let pivot_cols: BTreeSet<usize> = pivots.iter().map(|(c, _)| *c).collect();
        let rest: Vec<usize> = (0..columns).filter(|c| !pivot_cols.contains(c)).collect();
        let pos: HashMap<usize, usize> = rest.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let dense: Vec<Vec<BigInt>> = rows
            .into_iter()
            .flatten()
            .map(|r| {
                let mut d = vec![BigInt::zero(); rest.len()];
                for (c, x) in r {
                    d[pos[&c]] = x;
                }
                d
            })
            .collect();
        let (diag, v) = smith_normal_form(dense, rest.len());
        Self { columns, pivots, rest, diag, v }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rank(&self) -> usize {
        self.pivots.len() + self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| **d > BigInt::one()).cloned().collect()
    }

    /// Columns that were not removed by unit pivots.
    pub fn dense_size(&self) -> usize {
        self.rest.len()
    }

    pub fn classify(&self, v: &[(usize, BigInt)]) -> QuotientClass {
        let mut acc: Vec<(usize, BigInt)> = v.to_vec();
        for (pc, row) in &self.pivots {
            let Some(x) = acc.iter().find(|(c, _)| c == pc).map(|(_, x)| x.clone()) else {
                continue;
            };
            let px = &row.iter().find(|(c, _)| c == pc).expect("pivot").1;
            acc = axpy(&acc, &-(&x * px), row);
        }
        let pos: HashMap<usize, usize> = self.rest.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let n = self.rest.len();
        let mut w = vec![BigInt::zero(); n];
        for (c, x) in &acc {
            let i = pos[c];
            for (j, wj) in w.iter_mut().enumerate() {
                if !self.v[i][j].is_zero() {
                    *wj += x * &self.v[i][j];
                }
            }
        }
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for (j, x) in w.into_iter().enumerate() {
            let d = self.diag.get(j).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                free.push(x);
            } else if d > BigInt::one() {
                let r = x.mod_floor(&d);
                torsion.push((d, r));
            }
        }
        QuotientClass { free, torsion }
    }
}
