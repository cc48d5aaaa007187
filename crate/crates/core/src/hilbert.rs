//! Finitely supported vectors over an integer-indexed orthonormal basis.
//!
//! A [`SparseVec`] stores only non-zero rational coefficients, so the squared
//! norm is the plain sum of squared coefficients and the inner product runs
//! over the common support.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};

/// Index `n` of the basis vector `e_n`. Arbitrary precision: the tent trains
/// reach indices far beyond `i64` at large horizons.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub BigInt);

impl BasisIndex {
    pub fn new(n: impl Into<BigInt>) -> Self {
        BasisIndex(n.into())
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<i64> for BasisIndex {
    fn from(n: i64) -> Self {
        BasisIndex(BigInt::from(n))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: BTreeMap<BasisIndex, Rational>,
}

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec::default()
    }

    /// `e_n`
    pub fn basis(n: impl Into<BasisIndex>) -> Self {
        Self::scaled_basis(n, rational::int(1))
    }

    /// `c · e_n`, empty when `c == 0`.
    pub fn scaled_basis(n: impl Into<BasisIndex>, c: Rational) -> Self {
        let mut entries = BTreeMap::new();
        if !c.is_zero() {
            entries.insert(n.into(), c);
        }
        SparseVec { entries }
    }

    /// Builds from arbitrary pairs, summing duplicates and pruning zeros.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (BasisIndex, Rational)>,
    {
        let mut v = SparseVec::zero();
        for (n, c) in pairs {
            v.add_term(n, c);
        }
        v
    }

    fn add_term(&mut self, n: BasisIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(n) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn get(&self, n: &BasisIndex) -> Rational {
        self.entries.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> &BTreeMap<BasisIndex, Rational> {
        &self.entries
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm_sq(&self) -> Rational {
        self.entries.values().map(|c| c * c).sum()
    }

    pub fn scale(&self, w: &Rational) -> SparseVec {
        if w.is_zero() {
            return SparseVec::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(k, c)| (k.clone(), c * w)).collect(),
        }
    }

    /// Re-indexes every coordinate `n -> n + shift`.
    pub fn shift_index(&self, shift: &BigInt) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(k, c)| (BasisIndex(&k.0 + shift), c.clone()))
                .collect(),
        }
    }
}

/// Inner product `(u, v)`; runs over the smaller support.
pub fn sv_inner(u: &SparseVec, v: &SparseVec) -> Rational {
    let (small, large) = if u.entries.len() <= v.entries.len() { (u, v) } else { (v, u) };
    small
        .entries
        .iter()
        .filter_map(|(k, a)| large.entries.get(k).map(|b| a * b))
        .sum()
}

/// `Σ w_i · v_i` with zero coefficients pruned. Weights are arbitrary rationals.
pub fn sv_combine<'a, I>(terms: I) -> SparseVec
where
    I: IntoIterator<Item = (&'a Rational, &'a SparseVec)>,
{
    let mut acc: BTreeMap<BasisIndex, Rational> = BTreeMap::new();
    for (w, v) in terms {
        if w.is_zero() {
            continue;
        }
        for (k, c) in &v.entries {
            *acc.entry(k.clone()).or_insert_with(Rational::zero) += w * c;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    SparseVec { entries: acc }
}

impl Serialize for SparseVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (k, c) in &self.entries {
            map.serialize_entry(&k.0.to_string(), &rational::to_pq(c))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for SparseVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut pairs = Vec::with_capacity(raw.len());
        for (k, c) in raw {
            let n: BigInt = k.parse().map_err(D::Error::custom)?;
            let c = rational::parse(&c).map_err(D::Error::custom)?;
            pairs.push((BasisIndex(n), c));
        }
        Ok(SparseVec::from_pairs(pairs))
    }
}
