//! Stasheff identities paired with the natural form, cyclicity, and the
//! pre-Calabi-Yau conditions for a [`Structure`].

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::ainfty::Structure;
use crate::algebra::{AlgElem, DualElem, MixedTuple, Slot};
use crate::bracket::TensorElem;
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, frac, sign, Rational};
use crate::sparse::SparseVec;

/// Most witnesses retained per check; the full count is always reported.
pub const WITNESS_CAP: usize = 32;

/// `SI(N)_𝔤(x₁,…,x_{N+1})` on homogeneous slots:
/// `Σ_{r+s+t=N} (−1)^{r+st+s(|x₁|+…+|x_r|)} 𝔤(m_{r+1+t}(x₁,…,x_r, m_s(x_{r+1},…,x_{r+s}), …, x_N), x_{N+1})`.
pub fn si_gamma_slots(st: &Structure, n: usize, tup: &[&Slot]) -> Rational {
    assert_eq!(tup.len(), n + 1, "SI(N) takes N+1 slots");
    let mut prefix = vec![0usize; n + 1];
    for r in 0..n {
        prefix[r + 1] = prefix[r] + usize::from(tup[r].parity());
    }
    let mut total = Rational::zero();
    for s in 1..=n {
        if Structure::vanishes_identically(s) {
            continue;
        }
        for r in 0..=n - s {
            let t = n - r - s;
            let outer = r + 1 + t;
            if Structure::vanishes_identically(outer) {
                continue;
            }
            let inner = st.apply(s, &tup[r..r + s]);
            if inner.is_zero() {
                continue;
            }
            let e = (r + s * t + s * prefix[r]) as i64;
            for part in inner.parts() {
                let mut args: Vec<&Slot> = Vec::with_capacity(n + 1);
                args.extend_from_slice(&tup[..r]);
                args.push(&part);
                args.extend_from_slice(&tup[r + s..]);
                let v = st.pair(outer, &args);
                if !v.is_zero() {
                    total += sign(e) * v;
                }
            }
        }
    }
    total
}

/// `SI(N)_𝔤` on a tuple of length `N+1`.
pub fn si_gamma(st: &Structure, n: usize, tup: &MixedTuple) -> Result<Rational> {
    if tup.len() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: tup.len() });
    }
    let refs: Vec<&Slot> = tup.slots.iter().collect();
    Ok(si_gamma_slots(st, n, &refs))
}

/// Enumeration strategy for one value of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SiMode {
    Exhaustive,
    Sampled,
}

/// Mode requested by the caller; `Auto` picks per `N` from the budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeChoice {
    Exhaustive,
    Sampled,
    Auto { budget: u128 },
}

/// Default slot-evaluation budget for [`ModeChoice::Auto`].
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Configuration of [`verify_si`].
#[derive(Debug, Clone)]
pub struct SiConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub mode: ModeChoice,
    pub samples: usize,
    pub seed: u64,
    /// Random tuples with `|ī| ≠ N−2` evaluated per `N`.
    pub off_degree_samples: usize,
    /// Check one parity pattern per cyclic orbit; honoured only after
    /// [`verify_cyclic_reduction`] passes for that `N`.
    pub orbit_pruning: bool,
}

impl Default for SiConfig {
    fn default() -> Self {
        Self {
            n_min: 1,
            n_max: 5,
            mode: ModeChoice::Auto { budget: DEFAULT_BUDGET },
            samples: 1000,
            seed: 0,
            off_degree_samples: 16,
            orbit_pruning: false,
        }
    }
}

/// A tuple on which a checked quantity failed to vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiViolation {
    pub tuple: MixedTuple,
    pub rendered: Vec<String>,
    pub value: Rational,
}

impl Serialize for SiViolation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SiViolation", 3)?;
        st.serialize_field("parity", &self.tuple.parity())?;
        st.serialize_field("tuple", &self.rendered)?;
        st.serialize_field("value", &format_rational(&self.value))?;
        st.end()
    }
}

/// Result of checking `SI(N)_𝔤` for one `N`.
#[derive(Debug, Clone, Serialize)]
pub struct SIReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub mode: SiMode,
    pub tuples_checked: u64,
    pub off_degree_checked: u64,
    pub patterns_checked: usize,
    pub orbit_pruned: bool,
    pub violation_count: u64,
    pub violations: Vec<SiViolation>,
    pub elapsed_ms: u128,
}

impl SIReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// All parity vectors of length `len` with exactly `ones` entries equal to 1.
pub fn patterns_with_degree(len: usize, ones: usize) -> Vec<Vec<u8>> {
    (0..1u64 << len)
        .filter(|m| m.count_ones() as usize == ones)
        .map(|m| (0..len).map(|p| ((m >> (len - 1 - p)) & 1) as u8).collect())
        .collect()
}

/// Keeps the lexicographically smallest rotation of each cyclic orbit.
pub fn orbit_representatives(patterns: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let mut reps: Vec<Vec<u8>> = patterns
        .iter()
        .map(|p| {
            (0..p.len())
                .map(|r| {
                    let mut q = p[r..].to_vec();
                    q.extend_from_slice(&p[..r]);
                    q
                })
                .min()
                .unwrap_or_default()
        })
        .collect();
    reps.sort();
    reps.dedup();
    reps
}

/// Basis slots `e_i` and `t(e_i*)` for enumeration.
pub(crate) struct BasisSlots {
    pub alg: Vec<Slot>,
    pub dual: Vec<Slot>,
}

impl BasisSlots {
    pub fn new(dim: usize) -> Self {
        Self {
            alg: (0..dim).map(|i| Slot::Alg(AlgElem::basis(i))).collect(),
            dual: (0..dim).map(|i| Slot::Dual(DualElem::basis(i))).collect(),
        }
    }

    /// Slots of the `code`-th basis tuple of a pattern (mixed radix `dim`).
    pub fn tuple<'a>(&'a self, pattern: &[u8], mut code: u64, out: &mut Vec<&'a Slot>) {
        let dim = self.alg.len() as u64;
        out.clear();
        out.resize(pattern.len(), &self.alg[0]);
        for p in (0..pattern.len()).rev() {
            let i = (code % dim) as usize;
            code /= dim;
            out[p] = if pattern[p] == 0 { &self.alg[i] } else { &self.dual[i] };
        }
    }

    /// Slots of the `code`-th tuple of `∂A` basis elements (radix `2·dim`).
    pub fn phi_tuple<'a>(&'a self, len: usize, mut code: u64, out: &mut Vec<&'a Slot>) {
        let dim = self.alg.len() as u64;
        out.clear();
        out.resize(len, &self.alg[0]);
        for p in (0..len).rev() {
            let i = (code % (2 * dim)) as usize;
            code /= 2 * dim;
            out[p] = if (i as u64) < dim { &self.alg[i] } else { &self.dual[i - dim as usize] };
        }
    }
}

/// Random element with coefficients in `{−9,…,9}/d`, `d ∈ {1,2,3}`, in every coordinate.
pub fn random_slot(rng: &mut ChaCha8Rng, dim: usize, parity: u8) -> Slot {
    let v = SparseVec::from_entries((0..dim).map(|i| {
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(1i64..=3);
        (i, frac(num, den))
    }));
    if parity == 0 {
        Slot::Alg(AlgElem(v))
    } else {
        Slot::Dual(DualElem(v))
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn render(st: &Structure, slots: &[&Slot]) -> (MixedTuple, Vec<String>) {
    let tuple = MixedTuple::new(slots.iter().map(|&s| s.clone()).collect());
    let rendered = slots.iter().map(|s| st.algebra().render_slot(s)).collect();
    (tuple, rendered)
}

/// Chooses the mode for `N` under the auto budget `(2·dim)^{N+1} × #patterns`.
pub fn choose_mode(choice: ModeChoice, dim: usize, n: usize) -> SiMode {
    match choice {
        ModeChoice::Exhaustive => SiMode::Exhaustive,
        ModeChoice::Sampled => SiMode::Sampled,
        ModeChoice::Auto { budget } => {
            let patterns = if n >= 2 { patterns_with_degree(n + 1, n - 2).len() as u128 } else { 0 };
            let work = (2 * dim as u128).checked_pow(n as u32 + 1).map(|w| w * patterns);
            match work {
                Some(w) if w <= budget => SiMode::Exhaustive,
                _ => SiMode::Sampled,
            }
        }
    }
}

fn evaluate_tuples(st: &Structure, n: usize, tuples: &[Vec<Slot>]) -> (u64, Vec<SiViolation>) {
    let hits: Vec<(usize, Rational)> = tuples
        .par_iter()
        .enumerate()
        .filter_map(|(k, t)| {
            let refs: Vec<&Slot> = t.iter().collect();
            let v = si_gamma_slots(st, n, &refs);
            (!v.is_zero()).then_some((k, v))
        })
        .collect();
    let count = hits.len() as u64;
    let violations = hits
        .into_iter()
        .take(WITNESS_CAP)
        .map(|(k, value)| {
            let refs: Vec<&Slot> = tuples[k].iter().collect();
            let (tuple, rendered) = render(st, &refs);
            SiViolation { tuple, rendered, value }
        })
        .collect();
    (count, violations)
}

/// Exhaustive check of `SI(N)` over every basis tuple of the given patterns.
pub fn si_exhaustive(st: &Structure, n: usize, patterns: &[Vec<u8>]) -> (u64, Vec<SiViolation>) {
    let dim = st.dim();
    let basis = BasisSlots::new(dim);
    let per = (dim as u64).pow(n as u32 + 1);
    let total = per * patterns.len() as u64;
    let hits: Vec<(u64, Rational)> = (0..total)
        .into_par_iter()
        .map_init(Vec::new, |buf, idx| {
            let pattern = &patterns[(idx / per) as usize];
            basis.tuple(pattern, idx % per, buf);
            let v = si_gamma_slots(st, n, buf);
            (idx, v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let count = hits.len() as u64;
    let violations = hits
        .into_iter()
        .take(WITNESS_CAP)
        .map(|(idx, value)| {
            let mut buf = Vec::new();
            basis.tuple(&patterns[(idx / per) as usize], idx % per, &mut buf);
            let (tuple, rendered) = render(st, &buf);
            SiViolation { tuple, rendered, value }
        })
        .collect();
    (count, violations)
}

fn random_tuples(rng: &mut ChaCha8Rng, dim: usize, patterns: &[Vec<u8>], count: usize) -> Vec<Vec<Slot>> {
    if patterns.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let p = &patterns[rng.gen_range(0..patterns.len())];
            p.iter().map(|&par| random_slot(rng, dim, par)).collect()
        })
        .collect()
}

/// Checks `SI(N)_𝔤 = 0` for every `N` in the configured range.
pub fn verify_si(st: &Structure, cfg: &SiConfig) -> Vec<SIReport> {
    (cfg.n_min.max(1)..=cfg.n_max).map(|n| verify_si_at(st, n, cfg)).collect()
}

fn verify_si_at(st: &Structure, n: usize, cfg: &SiConfig) -> SIReport {
    let start = Instant::now();
    let dim = st.dim();
    let mode = choose_mode(cfg.mode, dim, n);
    let degree_patterns = if n >= 2 { patterns_with_degree(n + 1, n - 2) } else { Vec::new() };
    let mut orbit_pruned = false;
    let patterns = if cfg.orbit_pruning && mode == SiMode::Exhaustive {
        let red = verify_cyclic_reduction(st, n, 8, cfg.seed);
        if red.holds {
            orbit_pruned = true;
            orbit_representatives(&degree_patterns)
        } else {
            degree_patterns.clone()
        }
    } else {
        degree_patterns.clone()
    };
    let (tuples_checked, mut violation_count, mut violations) = match mode {
        SiMode::Exhaustive => {
            let (c, v) = si_exhaustive(st, n, &patterns);
            ((dim as u64).pow(n as u32 + 1) * patterns.len() as u64, c, v)
        }
        SiMode::Sampled => {
            let mut rng = rng_for(cfg.seed, n as u64);
            let tuples = random_tuples(&mut rng, dim, &degree_patterns, cfg.samples);
            let (c, v) = evaluate_tuples(st, n, &tuples);
            (tuples.len() as u64, c, v)
        }
    };
    let off: Vec<Vec<u8>> = (0..=n + 1)
        .filter(|&d| n < 2 || d != n - 2)
        .flat_map(|d| patterns_with_degree(n + 1, d))
        .collect();
    let mut rng = rng_for(cfg.seed, 1000 + n as u64);
    let off_tuples = random_tuples(&mut rng, dim, &off, cfg.off_degree_samples);
    let (oc, ov) = evaluate_tuples(st, n, &off_tuples);
    violation_count += oc;
    violations.extend(ov);
    violations.truncate(WITNESS_CAP);
    SIReport {
        n,
        mode,
        tuples_checked,
        off_degree_checked: off_tuples.len() as u64,
        patterns_checked: patterns.len(),
        orbit_pruned,
        violation_count,
        violations,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// Pass/fail tally with a few rendered witnesses.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<String>,
}

impl CheckTally {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }

    pub(crate) fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(witness());
            }
        }
    }

    pub(crate) fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        self.failures += other.failures;
        self.witnesses.extend(other.witnesses);
        self.witnesses.truncate(WITNESS_CAP);
        self
    }
}

/// Cyclicity of one `mₙ`.
#[derive(Debug, Clone, Serialize)]
pub struct CyclicityEntry {
    pub n: usize,
    pub tally: CheckTally,
}

/// Result of [`verify_cyclicity`].
#[derive(Debug, Clone, Serialize)]
pub struct CyclicityReport {
    pub holds: bool,
    pub entries: Vec<CyclicityEntry>,
}

/// Checks `𝔤(mₙ(a₁,…,aₙ),a₀) = (−1)^{n+|a₀|Σ|aᵢ|} 𝔤(mₙ(a₀,…,a_{n−1}),aₙ)`
/// on all basis tuples of `∂A`, for the given arities.
pub fn verify_cyclicity_for(st: &Structure, arities: &[usize]) -> CyclicityReport {
    let basis = BasisSlots::new(st.dim());
    let entries: Vec<CyclicityEntry> = arities
        .iter()
        .map(|&n| {
            let total = (2 * st.dim() as u64).pow(n as u32 + 1);
            let tally = (0..total)
                .into_par_iter()
                .fold(
                    || (CheckTally::default(), Vec::new(), Vec::new()),
                    |(mut tally, mut buf, mut rot), code| {
                        basis.phi_tuple(n + 1, code, &mut buf);
                        rot.clear();
                        rot.extend_from_slice(&buf[1..]);
                        rot.push(buf[0]);
                        let lhs = st.pair(n, &rot);
                        let rhs = st.pair(n, &buf);
                        let others: usize = buf[1..].iter().map(|s| usize::from(s.parity())).sum();
                        let e = (n + usize::from(buf[0].parity()) * others) as i64;
                        let ok = lhs == sign(e) * &rhs;
                        tally.record(ok, || {
                            let names: Vec<String> = buf.iter().map(|s| st.algebra().render_slot(s)).collect();
                            format!("m{n} ({}) lhs={lhs} rhs={rhs}", names.join(", "))
                        });
                        (tally, buf, rot)
                    },
                )
                .map(|(t, _, _)| t)
                .reduce(CheckTally::default, CheckTally::merge);
            CyclicityEntry { n, tally }
        })
        .collect();
    CyclicityReport { holds: entries.iter().all(|e| e.tally.holds()), entries }
}

/// [`verify_cyclicity_for`] on every arity `2 ≤ n ≤ n_max`.
pub fn verify_cyclicity(st: &Structure, n_max: usize) -> CyclicityReport {
    verify_cyclicity_for(st, &(2..=n_max).collect::<Vec<_>>())
}

/// Result of [`verify_cyclic_reduction`].
#[derive(Debug, Clone, Serialize)]
pub struct CyclicReductionReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub holds: bool,
    /// Trials in which both sides were nonzero, so the check was not vacuous.
    pub nonzero_trials: u64,
    pub tally: CheckTally,
}

/// Checks `SI(N)(a₁,…,a_N,a₀) = (−1)^{N+|a₀|Σ|aᵢ|} SI(N)(a₀,…,a_N)` on random tuples of every parity.
pub fn verify_cyclic_reduction(st: &Structure, n: usize, trials: usize, seed: u64) -> CyclicReductionReport {
    let mut rng = rng_for(seed, 2000 + n as u64);
    let patterns: Vec<Vec<u8>> = (0..=n + 1).flat_map(|d| patterns_with_degree(n + 1, d)).collect();
    let degree: Vec<Vec<u8>> = if n >= 2 { patterns_with_degree(n + 1, n - 2) } else { Vec::new() };
    let mut tuples = random_tuples(&mut rng, st.dim(), &degree, trials);
    tuples.extend(random_tuples(&mut rng, st.dim(), &patterns, trials.div_ceil(4)));
    let mut tally = CheckTally::default();
    let mut nonzero = 0;
    for t in &tuples {
        let fwd: Vec<&Slot> = t.iter().collect();
        let mut rot: Vec<&Slot> = t[1..].iter().collect();
        rot.push(&t[0]);
        let lhs = si_gamma_slots(st, n, &rot);
        let rhs = si_gamma_slots(st, n, &fwd);
        let others: usize = t[1..].iter().map(|s| usize::from(s.parity())).sum();
        let e = (n + usize::from(t[0].parity()) * others) as i64;
        if !rhs.is_zero() {
            nonzero += 1;
        }
        let ok = lhs == sign(e) * &rhs;
        tally.record(ok, || format!("parity {:?}: lhs={lhs} rhs={rhs}", t.iter().map(Slot::parity).collect::<Vec<_>>()));
    }
    CyclicReductionReport { n, holds: tally.holds(), nonzero_trials: nonzero, tally }
}

/// Result of [`verify_pcy`].
#[derive(Debug, Clone, Serialize)]
pub struct PcyReport {
    pub n_max: usize,
    pub holds: bool,
    /// `mₙ(A^{⊗n}) ⊆ A`.
    pub pcy1: CheckTally,
    /// Agreement of `𝔤(mₙ(a,tf₁,…,b,…),tf_{n−1})` with `(f₁⊗…⊗f_{n−1})(b_j̄(a,b))`.
    pub eq_cy: CheckTally,
    /// `𝔤(mₙ(…),1_A) = 0` for `n ≠ 2`.
    pub unit_pairing: CheckTally,
    /// `m₂` unital and `mₙ` (`n ≠ 2`) vanishing when an argument is `1_A`.
    pub strict_unit: CheckTally,
}

/// Runs `check` on every code in `0..total` in parallel and merges the tallies.
fn tally_codes<F>(total: u64, check: F) -> CheckTally
where
    F: Fn(u64, &mut CheckTally) + Sync,
{
    (0..total)
        .into_par_iter()
        .fold(CheckTally::default, |mut t, code| {
            check(code, &mut t);
            t
        })
        .reduce(CheckTally::default, CheckTally::merge)
}

/// Checks the pre-Calabi-Yau conditions and strict unitality up to arity `n_max`.
pub fn verify_pcy(st: &Structure, n_max: usize) -> PcyReport {
    let alg = st.algebra();
    let dim = st.dim();
    let basis = BasisSlots::new(dim);
    let unit = Slot::Alg(alg.unit().clone());
    let names = |s: &[&Slot]| s.iter().map(|x| alg.render_slot(x)).collect::<Vec<_>>().join(", ");
    let pow = |e: usize| (dim as u64).pow(e as u32);
    let phi_pow = |e: usize| (2 * dim as u64).pow(e as u32);

    let pcy1 = (1..=n_max)
        .map(|n| {
            let pattern = vec![0u8; n];
            tally_codes(pow(n), |code, t| {
                let mut buf = Vec::new();
                basis.tuple(&pattern, code, &mut buf);
                let out = st.apply(n, &buf);
                let ok = out.dual.is_zero() && (n == 2 || out.alg.is_zero());
                t.record(ok, || format!("m{n}({})", names(&buf)));
            })
        })
        .fold(CheckTally::default(), CheckTally::merge);

    let mut eq_cy = CheckTally::default();
    for n in 3..=n_max {
        for ell in 0..=n - 2 {
            let mut pattern = vec![0u8];
            pattern.extend(std::iter::repeat_n(1, ell));
            pattern.push(0);
            pattern.extend(std::iter::repeat_n(1, n - 1 - ell));
            let tensors: Vec<Option<TensorElem>> = (0..dim * dim)
                .map(|ab| st.b_bar(n, ell, &AlgElem::basis(ab / dim), &AlgElem::basis(ab % dim)).ok())
                .collect();
            let tally = tally_codes(pow(n + 1), |code, t| {
                let mut buf = Vec::new();
                basis.tuple(&pattern, code, &mut buf);
                let a = (code / pow(n)) as usize;
                let b = ((code / pow(n - 1 - ell)) % dim as u64) as usize;
                let lhs = st.pair(n, &buf);
                let fs: Vec<&DualElem> = buf.iter().filter_map(|s| s.as_dual()).collect();
                let rhs = tensors[a * dim + b].as_ref().map_or_else(Rational::zero, |x| x.eval_functionals(&fs));
                t.record(lhs == rhs, || format!("n={n} ell={ell} ({}) pairing={lhs} b_bar={rhs}", names(&buf)));
            });
            eq_cy = eq_cy.merge(tally);
        }
    }

    let mut unit_pairing = CheckTally::default();
    let mut strict_unit = CheckTally::default();
    for n in (1..=n_max).filter(|&n| n != 2) {
        unit_pairing = unit_pairing.merge(tally_codes(phi_pow(n), |code, t| {
            let mut buf = Vec::new();
            basis.phi_tuple(n, code, &mut buf);
            buf.push(&unit);
            let v = st.pair(n, &buf);
            t.record(v.is_zero(), || format!("m{n}({}) paired with 1", names(&buf[..n])));
        }));
        strict_unit = strict_unit.merge(tally_codes(phi_pow(n - 1), |code, t| {
            let mut rest = Vec::new();
            basis.phi_tuple(n - 1, code, &mut rest);
            for p in 0..n {
                let mut args = rest.clone();
                args.insert(p, &unit);
                let out = st.apply(n, &args);
                t.record(out.is_zero(), || format!("m{n}({}) with 1 at {p}", names(&args)));
            }
        }));
    }
    if n_max >= 2 {
        strict_unit = strict_unit.merge(tally_codes(2 * dim as u64, |code, t| {
            let mut buf = Vec::new();
            basis.phi_tuple(1, code, &mut buf);
            let x = buf[0].clone().into_phi();
            let u = unit.clone().into_phi();
            let ok = alg.m2_phi(&u, &x) == x && alg.m2_phi(&x, &u) == x;
            t.record(ok, || format!("m2 unit at {}", names(&buf)));
        }));
    }

    let holds = pcy1.holds() && eq_cy.holds() && unit_pairing.holds() && strict_unit.holds();
    PcyReport { n_max, holds, pcy1, eq_cy, unit_pairing, strict_unit }
}
