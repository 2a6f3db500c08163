//! Exact rationals, generalized binomials, Bernoulli numbers and the
//! coefficients `C_{i,j}` weighting the higher multiplications.

use std::collections::BTreeMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact fraction, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p / q` as a reduced rational. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `(-1)^e` as a rational.
pub fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Parses `"p/q"` or `"p"`; rejects zero denominators and stray text.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Renders as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter storing a [`Rational`] as its `"p/q"` string.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `x(x-1)...(x-d+1)/d!` for `d > 0`, `1` for `d = 0` and `0` for `d < 0`.
/// Defined for every integer `x`, negative ones included.
pub fn binomial(x: i64, d: i64) -> Rational {
    if d < 0 {
        return Rational::zero();
    }
    let num = (0..d).fold(BigInt::one(), |acc, i| acc * BigInt::from(x - i));
    Rational::new(num, factorial(d as u64))
}

/// `n!` as a rational.
pub fn factorial_rat(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Fills the Bernoulli memo up to and including index `n`.
pub fn prefill_bernoulli(n: usize) {
    if BERNOULLI.read().expect("bernoulli memo poisoned").len() > n {
        return;
    }
    let mut memo = BERNOULLI.write().expect("bernoulli memo poisoned");
    while memo.len() <= n {
        let m = memo.len() as i64;
        let next = if m == 0 {
            Rational::one()
        } else {
            // sum_{j=0}^{m} binom(m+1, j) B_j = 0
            let s = memo
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (j, b)| acc + binomial(m + 1, j as i64) * b);
            -s / rat(m + 1)
        };
        memo.push(next);
    }
}

/// The `n`-th Bernoulli number with `B_1 = -1/2`. Memoized.
pub fn bernoulli(n: usize) -> Rational {
    prefill_bernoulli(n);
    BERNOULLI.read().expect("bernoulli memo poisoned")[n].clone()
}

fn rat_pow(base: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * base)
}

/// `C_{i,j}` with the Bernoulli number replaced by an arbitrary weight `w`
/// standing in for `B_{i+j-1}`.
pub fn c_coeff_with_weight(i: i64, j: i64, tau: &Rational, w: &Rational) -> Result<Rational> {
    if i < 1 || j < 1 {
        return Err(Error::InvalidArgument(format!("C_{{{i},{j}}} needs positive indices")));
    }
    if (i + j) % 2 == 0 {
        return Err(Error::EvenIndexSum { i, j });
    }
    let l = i + j - 1;
    let half = (l / 2) as u32;
    Ok(binomial(i + j - 2, i - 1) * sign(1 + l / 2) * w / factorial_rat(l as u64)
        * rat_pow(tau, half))
}

/// `C_{i,j}(τ) = binom(i+j-2, i-1) (-1)^{1+(i+j-1)/2} B_{i+j-1}/(i+j-1)! τ^{(i+j-1)/2}`.
pub fn c_coeff(i: i64, j: i64, tau: &Rational) -> Result<Rational> {
    let l = (i + j - 1).max(0) as usize;
    c_coeff_with_weight(i, j, tau, &bernoulli(l))
}

/// Memoized `C_{i,j}` for a fixed `τ` and all `i + j ≤ max_sum`.
#[derive(Debug, Clone)]
pub struct CCoeffTable {
    tau: Rational,
    max_sum: i64,
    entries: BTreeMap<(i64, i64), Rational>,
}

impl CCoeffTable {
    pub fn new(tau: Rational, max_sum: i64) -> Self {
        prefill_bernoulli(max_sum.max(1) as usize);
        let mut entries = BTreeMap::new();
        for s in (3..=max_sum).filter(|s| s % 2 == 1) {
            for i in 1..s {
                let c = c_coeff(i, s - i, &tau).expect("odd index sum");
                entries.insert((i, s - i), c);
            }
        }
        Self { tau, max_sum, entries }
    }

    pub fn tau(&self) -> &Rational {
        &self.tau
    }

    pub fn max_sum(&self) -> i64 {
        self.max_sum
    }

    /// `C_{i,j}`, computed on the fly if outside the prefilled range.
    pub fn get(&self, i: i64, j: i64) -> Result<Rational> {
        match self.entries.get(&(i, j)) {
            Some(c) => Ok(c.clone()),
            None => c_coeff(i, j, &self.tau),
        }
    }

    /// Entries `((i, j), C_{i,j})` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.entries.iter()
    }
}
