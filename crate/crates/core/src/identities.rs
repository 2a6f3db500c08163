//! Combinatorial identities behind the odd Stasheff identities: the
//! `C`-coefficient relations `𝔈q(ℓ,ℓ′,ℓ″)`, the Bernoulli identities
//! `Eq(a,b,c)` with their `μ` coefficients, and the linear combination
//! expressing the former through the latter.
//!
//! Every quantity accepts a [`WeightSequence`] standing in for the Bernoulli
//! numbers, so identities that hold at the level of bilinear forms can be
//! checked with arbitrary weights.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{bernoulli, binomial, c_coeff_with_weight, factorial_rat, frac, rat, sign, Rational};
use crate::stasheff::CheckTally;

/// `𝔦(x)`: 1 for even `x`, 0 for odd `x`.
pub fn parity_i(x: i64) -> i64 {
    i64::from(x.rem_euclid(2) == 0)
}

/// `𝔭(x)`: 1 for odd `x`, 0 for even `x`.
pub fn parity_p(x: i64) -> i64 {
    1 - parity_i(x)
}

/// Weights `W_m` at even indices `2 ≤ m ≤ bound`; absent indices read as 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightSequence {
    bound: i64,
    weights: BTreeMap<i64, Rational>,
}

impl WeightSequence {
    /// `W_{2i} = B_{2i}`.
    pub fn bernoulli(bound: i64) -> Self {
        let weights = (2..=bound).step_by(2).map(|m| (m, bernoulli(m as usize))).collect();
        Self { bound, weights }
    }

    /// Seeded weights with numerators in `[-50, 50]` and denominators in `[1, 7]`.
    pub fn random(bound: i64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = (2..=bound)
            .step_by(2)
            .map(|m| (m, frac(rng.gen_range(-50..=50), rng.gen_range(1..=7))))
            .collect();
        Self { bound, weights }
    }

    /// `W_m = 1` at the given even indices, 0 elsewhere.
    pub fn indicator(bound: i64, hot: &[i64]) -> Self {
        let weights = hot.iter().map(|&m| (m, Rational::one())).collect();
        Self { bound, weights }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// `W_m`; zero at odd or out-of-range indices.
    pub fn get(&self, m: i64) -> Rational {
        self.weights.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `W_m / m!`.
    fn scaled(&self, m: i64) -> Rational {
        self.get(m) / factorial_rat(m as u64)
    }
}

/// Source of `C_{i,j}` built from a weight sequence, with an optional
/// perturbation of one unordered index pair for negative controls.
#[derive(Debug, Clone)]
pub struct CoeffSource<'a> {
    pub tau: Rational,
    pub weights: &'a WeightSequence,
    pub corrupt: Option<Corruption>,
}

/// Adds `delta` to `C_{i,j}` and `C_{j,i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corruption {
    pub i: i64,
    pub j: i64,
    #[serde(with = "crate::exact_arith::serde_rational")]
    pub delta: Rational,
}

impl<'a> CoeffSource<'a> {
    pub fn new(tau: Rational, weights: &'a WeightSequence) -> Self {
        Self { tau, weights, corrupt: None }
    }

    pub fn c(&self, i: i64, j: i64) -> Result<Rational> {
        let mut v = c_coeff_with_weight(i, j, &self.tau, &self.weights.get(i + j - 1))?;
        if let Some(cr) = &self.corrupt {
            if (cr.i, cr.j) == (i, j) || (cr.i, cr.j) == (j, i) {
                v += &cr.delta;
            }
        }
        Ok(v)
    }
}

fn check_cgen_args(l1: i64, l2: i64, l3: i64) -> Result<i64> {
    let s = l1 + l2 + l3;
    if l1 < 1 || l2 < 1 || l3 < 1 || s % 2 == 0 || s < 5 {
        return Err(Error::Parity(format!("({l1},{l2},{l3}) needs positive entries with odd sum ≥ 5")));
    }
    Ok((s - 1) / 2)
}

/// `Σ_{j=1}^{⌊l2/2⌋+𝔦(l1)𝔦(l3)} C_{l1,2j−𝔦(l1)} C_{l3,l2−2j+1+𝔦(l1)}`.
fn cross_sum(src: &CoeffSource<'_>, l1: i64, l2: i64, l3: i64) -> Result<Rational> {
    let i1 = parity_i(l1);
    let upper = l2 / 2 + i1 * parity_i(l3);
    (1..=upper).try_fold(Rational::zero(), |acc, j| {
        Ok(acc + src.c(l1, 2 * j - i1)? * src.c(l3, l2 - 2 * j + 1 + i1)?)
    })
}

/// LHS − RHS of `𝔈q(ℓ,ℓ′,ℓ″)` with the `C` coefficients supplied by `src`.
pub fn residual_cgen_with(src: &CoeffSource<'_>, l: i64, lp: i64, lpp: i64) -> Result<Rational> {
    check_cgen_args(l, lp, lpp)?;
    let lhs = sign(l + 1) * src.c(l, lp + lpp)?
        + sign(lpp + 1) * src.c(lpp, lp + l)?
        + sign(lp + 1) * src.c(lp, l + lpp)?;
    let rhs = sign(lp + 1) * cross_sum(src, l, lp, lpp)?
        + sign(lpp + 1) * cross_sum(src, lp, lpp, l)?
        + sign(l + 1) * cross_sum(src, lpp, l, lp)?;
    Ok(lhs - rhs)
}

/// LHS − RHS of `𝔈q(ℓ,ℓ′,ℓ″)` for the given `τ` and weights.
pub fn residual_cgen(l: i64, lp: i64, lpp: i64, tau: &Rational, weights: &WeightSequence) -> Result<Rational> {
    residual_cgen_with(&CoeffSource::new(tau.clone(), weights), l, lp, lpp)
}

/// LHS − RHS of the bilinear normal form of `𝔈q(ℓ₁,ℓ₂,ℓ₃)` in the weights;
/// equals `(−1)^k` times [`residual_cgen`] at `τ = 1`.
pub fn residual_cgenex(l: [i64; 3], weights: &WeightSequence) -> Result<Rational> {
    let k = check_cgen_args(l[0], l[1], l[2])?;
    let mut lhs = Rational::zero();
    let mut rhs = Rational::zero();
    for p in 0..3 {
        let (q, r) = match p {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (lp, lq, lr) = (l[p], l[q], l[r]);
        lhs += sign(lp) * binomial(2 * k - 1, lp - 1) * weights.scaled(2 * k);
        let mut bracket = Rational::zero();
        for i in 1..=(k - 1) / 2 {
            let b = binomial(2 * i - 1, lq - 1) * binomial(2 * k - 2 * i - 1, lr - 1)
                + binomial(2 * i - 1, lr - 1) * binomial(2 * k - 2 * i - 1, lq - 1);
            bracket += b * weights.scaled(2 * i) * weights.scaled(2 * k - 2 * i);
        }
        if k % 2 == 0 {
            let wk = weights.scaled(k);
            bracket += binomial(k - 1, lq - 1) * binomial(k - 1, lr - 1) * &wk * &wk;
        }
        rhs += sign(lp + 1) * bracket;
    }
    Ok(lhs - rhs)
}

/// `𝓔(ℓ₁,ℓ₂,ℓ₃)` as the direct sum of `C`-products.
pub fn script_e_direct(src: &CoeffSource<'_>, l1: i64, l2: i64, l3: i64) -> Result<Rational> {
    check_cgen_args(l1, l2, l3)?;
    cross_sum(src, l1, l2, l3)
}

/// `𝓔(ℓ₁,ℓ₂,ℓ₃) = (−1)^k Σ_{i=1}^{k−1} binom(2i−1,ℓ₁−1) binom(2k−2i−1,ℓ₃−1) W_{2i}/(2i)! W_{2k−2i}/(2k−2i)!`.
pub fn script_e(l1: i64, l2: i64, l3: i64, weights: &WeightSequence) -> Result<Rational> {
    let k = check_cgen_args(l1, l2, l3)?;
    let s = (1..k).fold(Rational::zero(), |acc, i| {
        acc + binomial(2 * i - 1, l1 - 1)
            * binomial(2 * k - 2 * i - 1, l3 - 1)
            * weights.scaled(2 * i)
            * weights.scaled(2 * k - 2 * i)
    });
    Ok(sign(k) * s)
}

/// `𝓔(ℓ₁,ℓ₂,ℓ₃)` split into `i ≤ ⌊(k−1)/2⌋`, the middle term `i = k/2`, and the mirrored half.
pub fn script_e_split(l1: i64, l2: i64, l3: i64, weights: &WeightSequence) -> Result<Rational> {
    let k = check_cgen_args(l1, l2, l3)?;
    let half = |x: i64, y: i64| {
        (1..=(k - 1) / 2).fold(Rational::zero(), |acc, i| {
            acc + binomial(2 * i - 1, x - 1)
                * binomial(2 * k - 2 * i - 1, y - 1)
                * weights.scaled(2 * i)
                * weights.scaled(2 * k - 2 * i)
        })
    };
    let mut total = sign(k) * (half(l1, l3) + half(l3, l1));
    if k % 2 == 0 {
        let wk = weights.scaled(k);
        total += binomial(k - 1, l1 - 1) * binomial(k - 1, l3 - 1) * &wk * &wk;
    }
    Ok(total)
}

fn check_abc(k: i64, a: i64, b: i64, c: i64) -> Result<()> {
    if k < 2 || a < 0 || b < 0 || c < 0 || a + b + c != 2 * k - 1 {
        return Err(Error::InvalidArgument(format!("(a,b,c) = ({a},{b},{c}) must be nonnegative with sum 2k-1 = {}", 2 * k - 1)));
    }
    Ok(())
}

/// `Σ_{d=max(0,m−b)}^{min(x,m)} (−1)^d binom(m,d)`.
fn alt_sum(m: i64, b: i64, x: i64) -> Rational {
    ((m - b).max(0)..=x.min(m)).fold(Rational::zero(), |acc, d| acc + sign(d) * binomial(m, d))
}

/// `μ_{2j}(a,b,c)` by its defining double sum, `0 ≤ j ≤ ⌊k/2⌋`.
pub fn mu_raw(k: i64, j: i64, a: i64, b: i64, c: i64) -> Result<Rational> {
    check_abc(k, a, b, c)?;
    if j < 0 || j > k / 2 {
        return Err(Error::InvalidArgument(format!("j = {j} outside [0, {}]", k / 2)));
    }
    let (m, mm) = (2 * j, 2 * k - 2 * j);
    let inner = sign(c) * binomial(mm, c) * alt_sum(m, b, a) + sign(c) * binomial(m, c) * alt_sum(mm, b, a)
        - sign(a) * binomial(mm, a) * alt_sum(m, b, c)
        - sign(a) * binomial(m, a) * alt_sum(mm, b, c);
    Ok(binomial(2 * k, m) * inner)
}

/// `μ°_{2j} = μ_{2j} / binom(2k,2j)` from the defining double sum.
pub fn mu_circ_raw(k: i64, j: i64, a: i64, b: i64, c: i64) -> Result<Rational> {
    Ok(mu_raw(k, j, a, b, c)? / binomial(2 * k, 2 * j))
}

/// `μ°₀(a,b,c) = (−1)^c binom(2k,c) − (−1)^a binom(2k,a)`.
pub fn mu0_reduced(k: i64, a: i64, b: i64, c: i64) -> Result<Rational> {
    check_abc(k, a, b, c)?;
    Ok(sign(c) * binomial(2 * k, c) - sign(a) * binomial(2 * k, a))
}

fn check_reduced_j(k: i64, j: i64) -> Result<()> {
    if j < 1 || j > k / 2 {
        return Err(Error::InvalidArgument(format!("j = {j} outside [1, {}]", k / 2)));
    }
    Ok(())
}

/// `μ°_{2j}(a,b,c)` after telescoping the alternating sums, `1 ≤ j ≤ ⌊k/2⌋`.
pub fn mu_telescoped(k: i64, j: i64, a: i64, b: i64, c: i64) -> Result<Rational> {
    check_abc(k, a, b, c)?;
    check_reduced_j(k, j)?;
    let (m, mm) = (2 * j, 2 * k - 2 * j);
    let bin = binomial;
    let ac = (bin(mm, c) * bin(m - 1, a) - bin(mm - 1, c) * bin(m, a))
        + (bin(m, c) * bin(mm - 1, a) - bin(m - 1, c) * bin(mm, a));
    let bc = bin(mm, c) * bin(m - 1, b) + bin(m, c) * bin(mm - 1, b);
    let ab = bin(mm, a) * bin(m - 1, b) + bin(m, a) * bin(mm - 1, b);
    Ok(sign(a + c) * ac + sign(b + c) * bc - sign(a + b) * ab)
}

/// `μ°_{2j}(a,b,c)` in its closed form with the factors `1/c`; needs `c > 0`.
pub fn mu_reduced(k: i64, j: i64, a: i64, b: i64, c: i64) -> Result<Rational> {
    check_abc(k, a, b, c)?;
    check_reduced_j(k, j)?;
    if c == 0 {
        return Err(Error::InvalidArgument("reduced form needs c > 0".into()));
    }
    let (m, mm) = (2 * j, 2 * k - 2 * j);
    let bin = binomial;
    let cc = rat(c);
    let ac = bin(mm - 1, c - 1) * (rat(mm) / &cc * bin(m - 1, a) - rat(mm - c) / &cc * bin(m, a))
        + bin(m - 1, c - 1) * (rat(m) / &cc * bin(mm - 1, a) - rat(m - c) / &cc * bin(mm, a));
    let bc = bin(mm - 1, c - 1) * bin(m - 1, b) * rat(mm) / &cc + bin(m - 1, c - 1) * bin(mm - 1, b) * rat(m) / &cc;
    let ab = bin(mm - 1, b) * bin(m, a) + bin(m - 1, b) * bin(mm, a);
    Ok(sign(a + c) * ac + sign(b + c) * bc - sign(a + b) * ab)
}

/// LHS − RHS of `Eq(a,b,c)`:
/// `−μ₀W_{2k} − (μ_k/2)W_k² − Σ_{j=1}^{⌊(k−1)/2⌋} μ_{2j} W_{2j} W_{2k−2j}`, the `W_k²` term only for even `k`.
pub fn residual_bcm(k: i64, a: i64, b: i64, c: i64, weights: &WeightSequence) -> Result<Rational> {
    check_abc(k, a, b, c)?;
    let mut r = -mu_raw(k, 0, a, b, c)? * weights.get(2 * k);
    if k % 2 == 0 {
        let wk = weights.get(k);
        r -= mu_raw(k, k / 2, a, b, c)? / rat(2) * &wk * &wk;
    }
    for j in 1..=(k - 1) / 2 {
        r -= mu_raw(k, j, a, b, c)? * weights.get(2 * j) * weights.get(2 * k - 2 * j);
    }
    Ok(r)
}

/// Residuals of the two relations `c·μ°(a,b,c) + (b+1)·μ°(a,c−1,b+1) = 2k[…]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaincompResiduals {
    pub mu0: Rational,
    /// `(j, residual)` for `1 ≤ j ≤ ⌊k/2⌋`.
    pub mu: Vec<(i64, Rational)>,
}

impl MaincompResiduals {
    pub fn all_zero(&self) -> bool {
        self.mu0.is_zero() && self.mu.iter().all(|(_, r)| r.is_zero())
    }
}

/// Both sides evaluated from the raw `μ` coefficients; needs `c > 0`.
pub fn check_maincomp(k: i64, a: i64, b: i64, c: i64) -> Result<MaincompResiduals> {
    check_abc(k, a, b, c)?;
    if c == 0 {
        return Err(Error::InvalidArgument("needs c > 0".into()));
    }
    let bin = binomial;
    let two_k = rat(2 * k);
    let lhs0 = rat(c) * mu_circ_raw(k, 0, a, b, c)? + rat(b + 1) * mu_circ_raw(k, 0, a, c - 1, b + 1)?;
    let rhs0 = &two_k
        * (sign(c) * bin(2 * k - 1, c - 1) - sign(b) * bin(2 * k - 1, b) - sign(a) * bin(2 * k - 1, a));
    let mut mu = Vec::new();
    for j in 1..=k / 2 {
        let (m1, mm1) = (2 * j - 1, 2 * k - 2 * j - 1);
        let lhs = rat(c) * mu_circ_raw(k, j, a, b, c)? + rat(b + 1) * mu_circ_raw(k, j, a, c - 1, b + 1)?;
        let rhs = &two_k
            * (sign(a + c) * (bin(mm1, c - 1) * bin(m1, a) + bin(m1, c - 1) * bin(mm1, a))
                + sign(b + c) * (bin(mm1, c - 1) * bin(m1, b) + bin(m1, c - 1) * bin(mm1, b))
                - sign(a + b) * (bin(mm1, b) * bin(m1, a) + bin(m1, b) * bin(mm1, a)));
        mu.push((j, lhs - rhs));
    }
    Ok(MaincompResiduals { mu0: lhs0 - rhs0, mu })
}

/// `𝔈q(ℓ,ℓ′,ℓ″) + (−1)^k/(2k)! · ((ℓ/2k)·Eq(ℓ″−1,ℓ′−1,ℓ) + (ℓ′/2k)·Eq(ℓ″−1,ℓ−1,ℓ′))` at `τ = 1`.
pub fn check_ide_with(src: &CoeffSource<'_>, l: i64, lp: i64, lpp: i64) -> Result<Rational> {
    let k = check_cgen_args(l, lp, lpp)?;
    if k < 2 {
        return Err(Error::InvalidArgument("needs k ≥ 2".into()));
    }
    let eq = residual_cgen_with(src, l, lp, lpp)?;
    let w = src.weights;
    let two_k = rat(2 * k);
    let comb = rat(l) / &two_k * residual_bcm(k, lpp - 1, lp - 1, l, w)?
        + rat(lp) / &two_k * residual_bcm(k, lpp - 1, l - 1, lp, w)?;
    Ok(eq + sign(k) / factorial_rat(2 * k as u64) * comb)
}

/// [`check_ide_with`] with uncorrupted `C` coefficients at `τ = 1`.
pub fn check_ide(l: i64, lp: i64, lpp: i64, weights: &WeightSequence) -> Result<Rational> {
    check_ide_with(&CoeffSource::new(Rational::one(), weights), l, lp, lpp)
}

/// All `(ℓ₁,ℓ₂,ℓ₃)` with positive entries summing to `2k+1`.
pub fn cgen_triples(k: i64) -> Vec<(i64, i64, i64)> {
    let s = 2 * k + 1;
    (1..s).flat_map(|a| (1..s - a).map(move |b| (a, b, s - a - b))).collect()
}

/// All `(a,b,c)` with nonnegative entries summing to `2k−1`.
pub fn bcm_triples(k: i64) -> Vec<(i64, i64, i64)> {
    let s = 2 * k - 1;
    (0..=s).flat_map(|a| (0..=s - a).map(move |b| (a, b, s - a - b))).collect()
}

/// Settings for [`run_identities`].
#[derive(Debug, Clone)]
pub struct IdentitiesConfig {
    pub max_even_n: i64,
    pub bcm_max_k: i64,
    pub reduction_max_k: i64,
    pub generalized_trials: usize,
    pub seed: u64,
    pub corrupt: Option<Corruption>,
}

impl Default for IdentitiesConfig {
    fn default() -> Self {
        Self { max_even_n: 24, bcm_max_k: 12, reduction_max_k: 8, generalized_trials: 0, seed: 0, corrupt: None }
    }
}

/// Per-identity tallies.
#[derive(Debug, Clone, Serialize)]
pub struct IdentitiesReport {
    pub holds: bool,
    pub corruption: Option<Corruption>,
    pub cgen: CheckTally,
    pub cgen_symmetry: CheckTally,
    pub bcm: CheckTally,
    pub mu_reduced: CheckTally,
    pub maincomp: CheckTally,
    pub script_e: CheckTally,
    pub ide_bernoulli: CheckTally,
    pub ide_indicator: CheckTally,
    pub ide_random: CheckTally,
}

fn tally_grid<T, F>(items: Vec<T>, f: F) -> CheckTally
where
    T: Sync,
    F: Fn(&T) -> std::result::Result<(), String> + Sync,
{
    items
        .par_iter()
        .fold(CheckTally::default, |mut t, item| {
            let res = f(item);
            let ok = res.is_ok();
            t.record(ok, || res.err().unwrap_or_default());
            t
        })
        .reduce(CheckTally::default, CheckTally::merge)
}

fn zero_or(label: String, r: Result<Rational>) -> std::result::Result<(), String> {
    match r {
        Ok(v) if v.is_zero() => Ok(()),
        Ok(v) => Err(format!("{label}: residual {v}")),
        Err(e) => Err(format!("{label}: {e}")),
    }
}

/// Weight sequences with one or two entries set to 1, covering every monomial
/// `W_{2i}W_{2k−2i}` and `W_{2k}`.
pub fn indicator_sequences(k: i64) -> Vec<WeightSequence> {
    let idx: Vec<i64> = (1..=k).map(|i| 2 * i).collect();
    let mut out: Vec<WeightSequence> = idx.iter().map(|&m| WeightSequence::indicator(2 * k, &[m])).collect();
    for (p, &x) in idx.iter().enumerate() {
        for &y in &idx[p + 1..] {
            out.push(WeightSequence::indicator(2 * k, &[x, y]));
        }
    }
    out
}

/// Runs every identity grid described by `cfg`.
pub fn run_identities(cfg: &IdentitiesConfig) -> IdentitiesReport {
    let bern = WeightSequence::bernoulli(cfg.max_even_n.max(2 * cfg.bcm_max_k).max(2 * cfg.reduction_max_k));
    let one = Rational::one();
    let src = CoeffSource { tau: one.clone(), weights: &bern, corrupt: cfg.corrupt.clone() };

    let cgen_items: Vec<(i64, i64, i64)> =
        (2..=(cfg.max_even_n - 2) / 2).flat_map(cgen_triples).collect();
    let cgen = tally_grid(cgen_items.clone(), |&(a, b, c)| {
        zero_or(format!("Eq({a},{b},{c})"), residual_cgen_with(&src, a, b, c))
    });
    let cgen_symmetry = tally_grid(cgen_items, |&(a, b, c)| {
        let base = residual_cgen_with(&src, a, b, c).map_err(|e| e.to_string())?;
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            let v = residual_cgen_with(&src, x, y, z).map_err(|e| e.to_string())?;
            if v != base {
                return Err(format!("Eq({a},{b},{c}) = {base} but Eq({x},{y},{z}) = {v}"));
            }
        }
        Ok(())
    });

    let bcm_items: Vec<(i64, (i64, i64, i64))> =
        (2..=cfg.bcm_max_k).flat_map(|k| bcm_triples(k).into_iter().map(move |t| (k, t))).collect();
    let bcm = tally_grid(bcm_items, |&(k, (a, b, c))| {
        zero_or(format!("k={k} Eq({a},{b},{c})"), residual_bcm(k, a, b, c, &bern))
    });

    let red_items: Vec<(i64, (i64, i64, i64))> = (2..=cfg.reduction_max_k)
        .flat_map(|k| bcm_triples(k).into_iter().map(move |t| (k, t)))
        .collect();
    let mu_reduced_tally = tally_grid(red_items.clone(), |&(k, (a, b, c))| {
        if mu_circ_raw(k, 0, a, b, c).ok() != mu0_reduced(k, a, b, c).ok() {
            return Err(format!("k={k} ({a},{b},{c}) j=0"));
        }
        for j in 1..=k / 2 {
            let raw = mu_circ_raw(k, j, a, b, c).map_err(|e| e.to_string())?;
            let tel = mu_telescoped(k, j, a, b, c).map_err(|e| e.to_string())?;
            if raw != tel {
                return Err(format!("k={k} ({a},{b},{c}) j={j}: raw {raw} telescoped {tel}"));
            }
            if c > 0 {
                let red = mu_reduced(k, j, a, b, c).map_err(|e| e.to_string())?;
                if raw != red {
                    return Err(format!("k={k} ({a},{b},{c}) j={j}: raw {raw} reduced {red}"));
                }
            }
        }
        Ok(())
    });
    let maincomp = tally_grid(red_items.into_iter().filter(|(_, (_, _, c))| *c > 0).collect(), |&(k, (a, b, c))| {
        let r = check_maincomp(k, a, b, c).map_err(|e| e.to_string())?;
        if r.all_zero() {
            Ok(())
        } else {
            Err(format!("k={k} ({a},{b},{c}): {r:?}"))
        }
    });

    let ide_items: Vec<(i64, i64, i64)> = (2..=cfg.reduction_max_k).flat_map(cgen_triples).collect();
    let script_e_tally = tally_grid(ide_items.clone(), |&(a, b, c)| {
        let full = script_e(a, b, c, &bern).map_err(|e| e.to_string())?;
        let split = script_e_split(a, b, c, &bern).map_err(|e| e.to_string())?;
        let direct = script_e_direct(&src, a, b, c).map_err(|e| e.to_string())?;
        let mirror = script_e(c, b, a, &bern).map_err(|e| e.to_string())?;
        if full == split && full == direct && full == mirror {
            Ok(())
        } else {
            Err(format!("E({a},{b},{c}): full {full} split {split} direct {direct} mirrored {mirror}"))
        }
    });
    let ide_bernoulli = tally_grid(ide_items.clone(), |&(a, b, c)| {
        zero_or(format!("ide({a},{b},{c})"), check_ide_with(&src, a, b, c))
    });
    let ind_items: Vec<(WeightSequence, (i64, i64, i64))> = (2..=cfg.reduction_max_k)
        .flat_map(|k| {
            let triples = cgen_triples(k);
            indicator_sequences(k)
                .into_iter()
                .flat_map(move |w| triples.clone().into_iter().map(move |t| (w.clone(), t)))
        })
        .collect();
    let ide_indicator = tally_grid(ind_items, |(w, (a, b, c))| {
        let s = CoeffSource { tau: Rational::one(), weights: w, corrupt: cfg.corrupt.clone() };
        zero_or(format!("ide({a},{b},{c}) indicator {w:?}"), check_ide_with(&s, *a, *b, *c))
    });
    let rnd_items: Vec<(u64, (i64, i64, i64))> = (0..cfg.generalized_trials as u64)
        .flat_map(|t| ide_items.iter().map(move |&x| (t, x)))
        .collect();
    let randoms: Vec<WeightSequence> = (0..cfg.generalized_trials as u64)
        .map(|t| WeightSequence::random(2 * cfg.reduction_max_k, cfg.seed.wrapping_add(t)))
        .collect();
    let ide_random = tally_grid(rnd_items, |&(t, (a, b, c))| {
        let s = CoeffSource { tau: Rational::one(), weights: &randoms[t as usize], corrupt: cfg.corrupt.clone() };
        zero_or(format!("ide({a},{b},{c}) trial {t}"), check_ide_with(&s, a, b, c))
    });

    let holds = [
        &cgen,
        &cgen_symmetry,
        &bcm,
        &mu_reduced_tally,
        &maincomp,
        &script_e_tally,
        &ide_bernoulli,
        &ide_indicator,
        &ide_random,
    ]
    .iter()
    .all(|t| t.holds());
    IdentitiesReport {
        holds,
        corruption: cfg.corrupt.clone(),
        cgen,
        cgen_symmetry,
        bcm,
        mu_reduced: mu_reduced_tally,
        maincomp,
        script_e: script_e_tally,
        ide_bernoulli,
        ide_indicator,
        ide_random,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::c_coeff;
    use proptest::prelude::*;

    fn bern() -> WeightSequence {
        WeightSequence::bernoulli(24)
    }

    #[test]
    fn parity_helpers() {
        for x in -6..=6 {
            assert_eq!(parity_i(x) + parity_p(x), 1);
            assert_eq!(parity_p(x), x.rem_euclid(2));
        }
        assert_eq!((parity_i(0), parity_i(-1), parity_i(4)), (1, 0, 1));
    }

    #[test]
    fn smallest_instance() {
        let one = Rational::one();
        let lhs = c_coeff(2, 3, &one).unwrap() + rat(2) * c_coeff(1, 4, &one).unwrap();
        assert_eq!(lhs, frac(1, 144));
        assert_eq!(c_coeff(1, 2, &one).unwrap().pow(2), frac(1, 144));
        assert!(residual_cgen(1, 1, 3, &one, &bern()).unwrap().is_zero());
    }

    #[test]
    fn cgen_grid_and_errors() {
        for k in 2..=8 {
            for (a, b, c) in cgen_triples(k) {
                assert!(residual_cgen(a, b, c, &frac(-3, 5), &bern()).unwrap().is_zero(), "({a},{b},{c})");
            }
        }
        assert!(residual_cgen(1, 1, 2, &Rational::one(), &bern()).is_err());
        assert!(residual_cgen(0, 2, 3, &Rational::one(), &bern()).is_err());
        assert!(residual_cgen(1, 1, 1, &Rational::one(), &bern()).is_err());
    }

    #[test]
    fn normal_form_relation() {
        for seed in 0..4 {
            let w = WeightSequence::random(16, seed);
            for k in 2..=8 {
                for (a, b, c) in cgen_triples(k) {
                    let direct = residual_cgen(a, b, c, &Rational::one(), &w).unwrap();
                    assert_eq!(direct, sign(k) * residual_cgenex([a, b, c], &w).unwrap(), "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn bcm_small_k() {
        for k in 2..=7 {
            for (a, b, c) in bcm_triples(k) {
                assert!(residual_bcm(k, a, b, c, &bern()).unwrap().is_zero(), "k={k} ({a},{b},{c})");
                assert_eq!(mu_circ_raw(k, 0, a, b, c).unwrap(), mu0_reduced(k, a, b, c).unwrap());
            }
        }
        assert!(residual_bcm(3, 1, 1, 1, &bern()).is_err());
        for k in (3..=11).step_by(2) {
            assert!(bernoulli(k as usize).is_zero());
        }
        // odd k: W_k never enters, matching a middle term with W_k = 0
        for k in [3, 5, 7] {
            let mut w = WeightSequence::bernoulli(2 * k);
            w.weights.insert(k, rat(7));
            assert_eq!(w.get(k), rat(7));
            for (a, b, c) in bcm_triples(k) {
                assert!(residual_bcm(k, a, b, c, &w).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn reduced_mu_matches_raw() {
        for k in 2..=8 {
            for (a, b, c) in bcm_triples(k) {
                for j in 1..=k / 2 {
                    let raw = mu_circ_raw(k, j, a, b, c).unwrap();
                    assert_eq!(mu_telescoped(k, j, a, b, c).unwrap(), raw);
                    if c > 0 {
                        assert_eq!(mu_reduced(k, j, a, b, c).unwrap(), raw, "k={k} j={j} ({a},{b},{c})");
                    } else {
                        assert!(mu_reduced(k, j, a, b, c).is_err());
                    }
                }
            }
        }
        assert!(mu_raw(4, 3, 1, 3, 3).is_err());
    }

    #[test]
    fn maincomp_edges() {
        for k in 2..=8 {
            for (a, b, c) in bcm_triples(k).into_iter().filter(|t| t.2 > 0) {
                let r = check_maincomp(k, a, b, c).unwrap();
                assert!(r.all_zero(), "k={k} ({a},{b},{c}) {r:?}");
                assert_eq!(r.mu.len() as i64, k / 2);
            }
        }
        assert!(check_maincomp(3, 5, 0, 0).is_err());
    }

    #[test]
    fn script_e_forms() {
        let w = WeightSequence::random(16, 77);
        let src = CoeffSource::new(Rational::one(), &w);
        for k in 2..=8 {
            for (a, b, c) in cgen_triples(k) {
                let full = script_e(a, b, c, &w).unwrap();
                assert_eq!(full, script_e_split(a, b, c, &w).unwrap());
                assert_eq!(full, script_e_direct(&src, a, b, c).unwrap());
                assert_eq!(full, script_e(c, b, a, &w).unwrap());
                if b == 1 && a % 2 == 1 && c % 2 == 1 {
                    assert!(full.is_zero());
                }
            }
        }
    }

    #[test]
    fn ide_on_indicators() {
        for k in 2..=5 {
            for w in indicator_sequences(k) {
                for (a, b, c) in cgen_triples(k) {
                    assert!(check_ide(a, b, c, &w).unwrap().is_zero(), "k={k} ({a},{b},{c}) {w:?}");
                }
            }
        }
        assert_eq!(indicator_sequences(3).len(), 6);
    }

    #[test]
    fn corruption_is_detected() {
        let cfg = IdentitiesConfig {
            max_even_n: 10,
            bcm_max_k: 3,
            reduction_max_k: 3,
            generalized_trials: 1,
            seed: 0,
            corrupt: Some(Corruption { i: 1, j: 2, delta: frac(1, 1000) }),
        };
        let r = run_identities(&cfg);
        assert!(!r.holds);
        assert!(!r.cgen.holds() && r.bcm.holds());
        assert!(!r.cgen.witnesses.is_empty());
        assert!(run_identities(&IdentitiesConfig { corrupt: None, ..cfg }).holds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn cgen_symmetric_under_permutation(seed in any::<u64>(), k in 2i64..=7, pick in any::<prop::sample::Index>(), tn in -5i64..5) {
            let w = WeightSequence::random(2 * k, seed);
            let tau = frac(tn, 3);
            let triples = cgen_triples(k);
            let (a, b, c) = triples[pick.index(triples.len())];
            let base = residual_cgen(a, b, c, &tau, &w).unwrap();
            for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                prop_assert_eq!(&residual_cgen(x, y, z, &tau, &w).unwrap(), &base);
            }
        }

        #[test]
        fn ide_holds_for_random_weights(seed in any::<u64>(), k in 2i64..=6, pick in any::<prop::sample::Index>()) {
            let w = WeightSequence::random(2 * k, seed);
            let triples = cgen_triples(k);
            let (a, b, c) = triples[pick.index(triples.len())];
            prop_assert!(check_ide(a, b, c, &w).unwrap().is_zero());
        }
    }
}
