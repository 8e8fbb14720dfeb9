//! Finite formal sums of diagrams with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::diagram::ChordDiagram;
use crate::error::{Error, Result};

/// Coefficient rings used by the crate.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Signed
    + std::ops::AddAssign
    + std::ops::SubAssign
{
}

impl Scalar for BigInt {}
impl Scalar for BigRational {}

/// A degree-homogeneous combination of diagrams; zero terms are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearCombination<R = BigRational> {
    terms: BTreeMap<ChordDiagram, R>,
}

impl<R: Scalar> Default for LinearCombination<R> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<R: Scalar> LinearCombination<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_diagram(d: ChordDiagram) -> Self {
        Self::from_terms([(d, R::one())]).expect("single term is homogeneous")
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ChordDiagram, R)>) -> Result<Self> {
        let mut out = Self::zero();
        for (d, c) in terms {
            out.add_term(d, c)?;
        }
        Ok(out)
    }

    /// `a - b` as a combination.
    pub fn difference(a: &ChordDiagram, b: &ChordDiagram) -> Result<Self> {
        Self::from_terms([(a.clone(), R::one()), (b.clone(), -R::one())])
    }

    /// `(degree, strands)` of the terms, if any.
    pub fn shape(&self) -> Option<(usize, usize)> {
        self.terms.keys().next().map(|d| (d.degree(), d.strand_count()))
    }

    pub fn add_term(&mut self, d: ChordDiagram, c: R) -> Result<()> {
        if let Some((n, k)) = self.shape() {
            if d.strand_count() != k {
                return Err(Error::StrandMismatch { left: k, right: d.strand_count() });
            }
            if d.degree() != n {
                return Err(Error::DegreeMismatch { left: n, right: d.degree() });
            }
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(d).or_insert_with(R::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(&-R::one()))
    }

    pub fn scaled(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(d, x)| (d.clone(), x.clone() * c.clone())).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &ChordDiagram) -> R {
        self.terms.get(d).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ChordDiagram, &R)> {
        self.terms.iter()
    }
}

impl LinearCombination<BigInt> {
    pub fn to_rational(&self) -> LinearCombination<BigRational> {
        LinearCombination {
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (d.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        }
    }
}

impl LinearCombination<BigRational> {
    pub fn to_integer(&self) -> Result<LinearCombination<BigInt>> {
        let mut terms = BTreeMap::new();
        for (d, c) in &self.terms {
            if !c.is_integer() {
                return Err(Error::NonIntegral);
            }
            terms.insert(d.clone(), c.to_integer());
        }
        Ok(LinearCombination { terms })
    }
}

/// Terms in diagram order, e.g. `(k=1 [a b a b]) - 2 (k=1 [a a b b])`.
impl<R: Scalar> fmt::Display for LinearCombination<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "({d})")?;
        }
        Ok(())
    }
}

/// Reads the [`Display`](fmt::Display) format back, plus a bare diagram or
/// `0`.
impl std::str::FromStr for LinearCombination<BigRational> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        if !s.contains('(') {
            return Ok(Self::from_diagram(s.parse()?));
        }
        let bad = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.into() };
        let mut out = Self::zero();
        let mut rest = s;
        let mut first = true;
        while !rest.trim().is_empty() {
            let pos = s.len() - rest.len();
            let t = rest.trim_start();
            let (negative, t) = match t.as_bytes().first() {
                Some(b'+') => (false, &t[1..]),
                Some(b'-') => (true, &t[1..]),
                _ if first => (false, t),
                _ => return Err(bad(pos, "expected `+` or `-` between terms")),
            };
            let open = t.find('(').ok_or_else(|| bad(pos, "expected `(`"))?;
            let close = t.find(')').ok_or_else(|| bad(pos, "unclosed `(`"))?;
            let coeff = t[..open].trim();
            let mut c = if coeff.is_empty() {
                BigRational::one()
            } else {
                coeff.parse::<BigRational>().map_err(|_| bad(pos, "bad coefficient"))?
            };
            if negative {
                c = -c;
            }
            out.add_term(t[open + 1..close].parse()?, c)?;
            rest = &t[close + 1..];
            first = false;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> ChordDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic() {
        let a = LinearCombination::<BigInt>::from_diagram(d("k=1 [a a]"));
        assert!(a.sub(&a).unwrap().is_zero());
        let x = LinearCombination::<BigInt>::difference(&d("k=1 [a b a b]"), &d("k=1 [a a b b]")).unwrap();
        assert_eq!(x.to_string(), "-(k=1 [a a b b]) + (k=1 [a b a b])");
        assert_eq!(x.scaled(&BigInt::from(2)).to_string(), "-2 (k=1 [a a b b]) + 2 (k=1 [a b a b])");
        assert!(x.add(&a).is_err());
        assert_eq!(LinearCombination::<BigInt>::zero().to_string(), "0");
    }

    #[test]
    fn parse_display_roundtrip() {
        let x = LinearCombination::<BigInt>::difference(&d("k=1 [a b a b]"), &d("k=1 [a a b b]"))
            .unwrap()
            .to_rational()
            .scaled(&BigRational::new(3.into(), 2.into()));
        assert_eq!(x.to_string().parse::<LinearCombination>().unwrap(), x);
        assert!("0".parse::<LinearCombination>().unwrap().is_zero());
        assert_eq!("k=2 [a][a]".parse::<LinearCombination>().unwrap().len(), 1);
        assert!("(k=1 [a a]) (k=1 [a a])".parse::<LinearCombination>().is_err());
    }

    #[test]
    fn ring_conversion() {
        let x = LinearCombination::<BigInt>::from_diagram(d("k=2 [a][a]")).to_rational();
        assert!(x.to_integer().is_ok());
        let half = x.scaled(&BigRational::new(1.into(), 2.into()));
        assert_eq!(half.to_integer(), Err(Error::NonIntegral));
    }
}
