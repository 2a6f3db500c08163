//! Sparse rational vectors indexed by basis position.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::exact_arith::Rational;

/// Sorted list of `(index, coefficient)` pairs with no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self { entries: vec![(i, Rational::from_integer(1.into()))] }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(it: I) -> Self {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in it {
            *acc.entry(i).or_insert_with(Rational::zero) += c;
        }
        Self { entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Dense coefficients to sparse form.
    pub fn from_dense(coeffs: &[Rational]) -> Self {
        Self {
            entries: coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        for (i, c) in &self.entries {
            v[*i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(k, _)| *k) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    /// Largest stored index, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { entries: self.entries.iter().map(|(i, c)| (*i, c * s)).collect() }
    }

    /// Exact pairing `sum_i self_i * other_i`.
    pub fn dot(&self, other: &SparseVec) -> Rational {
        let (mut p, mut q) = (0, 0);
        let mut acc = Rational::zero();
        while p < self.entries.len() && q < other.entries.len() {
            let (i, a) = &self.entries[p];
            let (j, b) = &other.entries[q];
            match i.cmp(j) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    acc += a * b;
                    p += 1;
                    q += 1;
                }
            }
        }
        acc
    }

    fn merge(&self, other: &SparseVec, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut p, mut q) = (0, 0);
        let take_other = |c: &Rational| if negate_other { -c } else { c.clone() };
        while p < self.entries.len() || q < other.entries.len() {
            let next_self = self.entries.get(p);
            let next_other = other.entries.get(q);
            match (next_self, next_other) {
                (Some((i, a)), Some((j, b))) if i == j => {
                    let s = a + take_other(b);
                    if !s.is_zero() {
                        out.push((*i, s));
                    }
                    p += 1;
                    q += 1;
                }
                (Some((i, a)), Some((j, _))) if i < j => {
                    out.push((*i, a.clone()));
                    p += 1;
                }
                (Some(_), Some((j, b))) | (None, Some((j, b))) => {
                    out.push((*j, take_other(b)));
                    q += 1;
                }
                (Some((i, a)), None) => {
                    out.push((*i, a.clone()));
                    p += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Self { entries: out }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &Rational, other: &SparseVec) {
        if s.is_zero() || other.is_zero() {
            return;
        }
        *self = self.merge(&other.scale(s), false);
    }
}

impl Add for &SparseVec {
    type Output = SparseVec;
    fn add(self, rhs: &SparseVec) -> SparseVec {
        self.merge(rhs, false)
    }
}

impl Sub for &SparseVec {
    type Output = SparseVec;
    fn sub(self, rhs: &SparseVec) -> SparseVec {
        self.merge(rhs, true)
    }
}

impl Neg for &SparseVec {
    type Output = SparseVec;
    fn neg(self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, c)| (*i, -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{frac, rat};
    use proptest::prelude::*;

    fn arb_vec() -> impl Strategy<Value = SparseVec> {
        proptest::collection::vec((0usize..6, -5i64..5), 0..6)
            .prop_map(|v| SparseVec::from_entries(v.into_iter().map(|(i, c)| (i, rat(c)))))
    }

    #[test]
    fn zeros_are_dropped() {
        let v = SparseVec::from_entries([(1, rat(2)), (1, rat(-2)), (0, frac(1, 3))]);
        assert_eq!(v.nnz(), 1);
        assert_eq!(v.get(0), frac(1, 3));
        assert!((&v - &v).is_zero());
    }

    proptest! {
        #[test]
        fn matches_dense(a in arb_vec(), b in arb_vec()) {
            let (da, db) = (a.to_dense(6), b.to_dense(6));
            let sum: Vec<Rational> = da.iter().zip(&db).map(|(x, y)| x + y).collect();
            let diff: Vec<Rational> = da.iter().zip(&db).map(|(x, y)| x - y).collect();
            let dot = da.iter().zip(&db).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
            prop_assert_eq!(&a + &b, SparseVec::from_dense(&sum));
            prop_assert_eq!(&a - &b, SparseVec::from_dense(&diff));
            prop_assert_eq!(a.dot(&b), dot);
            let mut c = a.clone();
            c.add_scaled(&rat(3), &b);
            prop_assert_eq!(c, &a + &(&(&b + &b) + &b));
        }
    }
}
