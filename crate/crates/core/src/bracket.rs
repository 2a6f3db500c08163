//! Double brackets as basis tables, their axioms, the associated triple
//! bracket and the `E³` correction term of the quasi-Poisson condition.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::algebra::{AlgElem, Algebra, DualElem};
use crate::error::{Error, Result};
use crate::exact_arith::{format_rational, frac, Rational};

/// Sparse element of `A^{⊗n}` keyed by basis multi-indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElem {
    order: usize,
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl TensorElem {
    pub fn zero(order: usize) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: &[usize]) -> Rational {
        self.terms.get(idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &Rational)> + '_ {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn add_term(&mut self, idx: Vec<usize>, c: Rational) {
        debug_assert_eq!(idx.len(), self.order);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (Vec<usize>, Rational)>) -> Self {
        let mut t = Self::zero(order);
        for (k, c) in terms {
            t.add_term(k, c);
        }
        t
    }

    /// `x₁ ⊗ … ⊗ xₙ`.
    pub fn product(factors: &[&AlgElem]) -> Self {
        let mut acc: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::one())];
        for f in factors {
            acc = acc
                .iter()
                .flat_map(|(k, c)| {
                    f.0.iter().map(move |(i, x)| {
                        let mut k2 = k.clone();
                        k2.push(i);
                        (k2, c * x)
                    })
                })
                .collect();
        }
        Self::from_terms(factors.len(), acc)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        assert_eq!(self.order, o.order, "tensor order mismatch");
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.order);
        }
        Self { order: self.order, terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect() }
    }

    /// Moves factor `i` to position `sigma[i]` (all factors have degree 0, so no sign).
    pub fn permute(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.order);
        Self::from_terms(
            self.order,
            self.terms.iter().map(|(k, c)| {
                let mut out = vec![0; k.len()];
                for (i, &s) in sigma.iter().enumerate() {
                    out[s] = k[i];
                }
                (out, c.clone())
            }),
        )
    }

    /// `u⊗v ↦ v⊗u`.
    pub fn flip(&self) -> Self {
        self.permute(&[1, 0])
    }

    /// The cycle sending position 1 to 2: `v₁⊗v₂⊗v₃ ↦ v₃⊗v₁⊗v₂`.
    pub fn cycle3(&self) -> Self {
        self.permute(&[1, 2, 0])
    }

    /// Outer left action on the first factor: `x·(u⊗…) = xu⊗…`.
    pub fn left_mul(&self, alg: &Algebra, x: &AlgElem) -> Self {
        let mut out = Self::zero(self.order);
        for (k, c) in &self.terms {
            let prod = alg.mul_raw(x, &AlgElem::basis(k[0]));
            for (i, p) in prod.0.iter() {
                let mut k2 = k.clone();
                k2[0] = i;
                out.add_term(k2, c * p);
            }
        }
        out
    }

    /// Outer right action on the last factor: `(…⊗v)·x = …⊗vx`.
    pub fn right_mul(&self, alg: &Algebra, x: &AlgElem) -> Self {
        let last = self.order - 1;
        let mut out = Self::zero(self.order);
        for (k, c) in &self.terms {
            let prod = alg.mul_raw(&AlgElem::basis(k[last]), x);
            for (i, p) in prod.0.iter() {
                let mut k2 = k.clone();
                k2[last] = i;
                out.add_term(k2, c * p);
            }
        }
        out
    }

    /// `(f₁⊗…⊗fₙ)(T)`.
    pub fn eval_functionals(&self, fs: &[&DualElem]) -> Rational {
        assert_eq!(fs.len(), self.order);
        self.terms.iter().fold(Rational::zero(), |acc, (k, c)| {
            let mut p = c.clone();
            for (f, &i) in fs.iter().zip(k) {
                if p.is_zero() {
                    break;
                }
                p *= f.0.get(i);
            }
            acc + p
        })
    }
}

impl Serialize for TensorElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            let mut row: Vec<serde_json::Value> = k.iter().map(|&i| i.into()).collect();
            row.push(format_rational(c).into());
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// A double bracket on an algebra: values `⦃e_i, e_j⦄ ∈ A⊗A` plus the parameter `τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleBracket {
    alg: Algebra,
    table: Vec<TensorElem>,
    tau: Rational,
}

/// Witness of a failed triple-bracket comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleWitness {
    pub triple: (usize, usize, usize),
    pub lhs: TensorElem,
    pub rhs: TensorElem,
}

/// Outcome of a decision procedure over all basis triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionReport {
    pub holds: bool,
    pub triples_checked: usize,
    pub witness: Option<TripleWitness>,
}

impl DoubleBracket {
    /// Builds from `(i, j, k, l, c)` entries meaning `⦃e_i,e_j⦄` has coefficient `c` on `e_k⊗e_l`.
    pub fn new(
        alg: Algebra,
        entries: impl IntoIterator<Item = (usize, usize, usize, usize, Rational)>,
        tau: Rational,
    ) -> Result<Self> {
        let dim = alg.dim();
        let mut table = vec![TensorElem::zero(2); dim * dim];
        for (i, j, k, l, c) in entries {
            for idx in [i, j, k, l] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            table[i * dim + j].add_term(vec![k, l], c);
        }
        Ok(Self { alg, table, tau })
    }

    pub fn zero(alg: Algebra, tau: Rational) -> Self {
        Self::new(alg, std::iter::empty(), tau).expect("empty table")
    }

    /// Leibniz extension of `⦃t,t⦄` over the monomial basis of `𝕜[t]/(t^m)`.
    ///
    /// Convenience only: the resulting table is certified by [`check_db1`](Self::check_db1)
    /// and [`check_db2`](Self::check_db2), not by this construction.
    pub fn monogenic_truncated(m: usize, tt: &TensorElem, tau: Rational) -> Self {
        let alg = Algebra::truncated_polynomial(m);
        let pow = |p: usize| if p < m { AlgElem::basis(p) } else { AlgElem::zero() };
        // ⦃t, t^q⦄ = Σ_s t^s ⦃t,t⦄ t^{q-1-s}
        let t_left: Vec<TensorElem> = (0..m)
            .map(|q| {
                (0..q).fold(TensorElem::zero(2), |acc, s| {
                    acc.add(&tt.left_mul(&alg, &pow(s)).right_mul(&alg, &pow(q - 1 - s)))
                })
            })
            .collect();
        let mut table = vec![TensorElem::zero(2); m * m];
        for p in 1..m {
            let p_t = t_left[p].flip().scale(&-Rational::one());
            for q in 0..m {
                table[p * m + q] = (0..q).fold(TensorElem::zero(2), |acc, s| {
                    acc.add(&p_t.left_mul(&alg, &pow(s)).right_mul(&alg, &pow(q - 1 - s)))
                });
            }
        }
        Self { alg, table, tau }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn tau(&self) -> &Rational {
        &self.tau
    }

    /// Same table with a different `τ`.
    pub fn with_tau(&self, tau: Rational) -> Self {
        Self { tau, ..self.clone() }
    }

    /// `⦃e_i, e_j⦄`.
    pub fn basis_value(&self, i: usize, j: usize) -> &TensorElem {
        &self.table[i * self.alg.dim() + j]
    }

    /// Nonzero table entries `(i, j, k, l, c)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, usize, &Rational)> + '_ {
        let dim = self.alg.dim();
        self.table
            .iter()
            .enumerate()
            .flat_map(move |(ij, t)| t.iter().map(move |(k, c)| (ij / dim, ij % dim, k[0], k[1], c)))
    }

    /// Bilinear extension of the table.
    pub fn eval(&self, a: &AlgElem, b: &AlgElem) -> TensorElem {
        let mut out = TensorElem::zero(2);
        for (i, x) in a.0.iter() {
            for (j, y) in b.0.iter() {
                out.add_assign(&self.basis_value(i, j).scale(&(x * y)));
            }
        }
        out
    }

    /// `(f⊗g)(⦃a,b⦄)` without materializing the tensor.
    pub fn eval_paired(&self, a: &AlgElem, b: &AlgElem, f: &DualElem, g: &DualElem) -> Rational {
        let mut acc = Rational::zero();
        for (i, x) in a.0.iter() {
            for (j, y) in b.0.iter() {
                let v = self.basis_value(i, j).eval_functionals(&[f, g]);
                if !v.is_zero() {
                    acc += v * x * y;
                }
            }
        }
        acc
    }

    /// Basis pairs violating `⦃a,b⦄ = −flip⦃b,a⦄`.
    pub fn check_db1(&self) -> Vec<(usize, usize)> {
        let d = self.alg.dim();
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.basis_value(i, j).add(&self.basis_value(j, i).flip()).is_zero())
            .collect()
    }

    /// Basis triples violating `⦃a,bc⦄ = b⦃a,c⦄ + ⦃a,b⦄c`.
    pub fn check_db2(&self) -> Vec<(usize, usize, usize)> {
        let d = self.alg.dim();
        let triples: Vec<_> =
            (0..d).flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k)))).collect();
        triples
            .into_par_iter()
            .filter(|&(i, j, k)| {
                let (ei, ej, ek) = (AlgElem::basis(i), AlgElem::basis(j), AlgElem::basis(k));
                let lhs = self.eval(&ei, &self.alg.mul_raw(&ej, &ek));
                let rhs = self
                    .basis_value(i, k)
                    .left_mul(&self.alg, &ej)
                    .add(&self.basis_value(i, j).right_mul(&self.alg, &ek));
                lhs != rhs
            })
            .collect()
    }

    /// `⦃a, x₁⊗x₂⊗…⦄_L = ⦃a,x₁⦄⊗x₂⊗…`.
    pub fn left_extension(&self, a: &AlgElem, t: &TensorElem) -> TensorElem {
        let mut out = TensorElem::zero(t.order() + 1);
        for (k, c) in t.iter() {
            let br = self.eval(a, &AlgElem::basis(k[0]));
            for (kb, cb) in br.iter() {
                let mut idx = kb.to_vec();
                idx.extend_from_slice(&k[1..]);
                out.add_term(idx, c * cb);
            }
        }
        out
    }

    /// `⦃c,b,a⦄ = ⦃c,⦃b,a⦄⦄_L + σ⦃b,⦃a,c⦄⦄_L + σ²⦃a,⦃c,b⦄⦄_L`.
    pub fn triple_bracket(&self, c: &AlgElem, b: &AlgElem, a: &AlgElem) -> TensorElem {
        let t0 = self.left_extension(c, &self.eval(b, a));
        let t1 = self.left_extension(b, &self.eval(a, c)).cycle3();
        let t2 = self.left_extension(a, &self.eval(c, b)).cycle3().cycle3();
        t0.add(&t1).add(&t2)
    }

    fn decide<F>(&self, rhs: F) -> DecisionReport
    where
        F: Fn(&AlgElem, &AlgElem, &AlgElem) -> TensorElem + Sync,
    {
        let d = self.alg.dim();
        let triples: Vec<_> =
            (0..d).flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k)))).collect();
        let witness = triples.par_iter().find_map_first(|&(i, j, k)| {
            let (c, b, a) = (AlgElem::basis(i), AlgElem::basis(j), AlgElem::basis(k));
            let lhs = self.triple_bracket(&c, &b, &a);
            let rhs = rhs(&c, &b, &a);
            (lhs != rhs).then_some(TripleWitness { triple: (i, j, k), lhs, rhs })
        });
        DecisionReport { holds: witness.is_none(), triples_checked: triples.len(), witness }
    }

    /// The triple bracket vanishes on all basis triples.
    pub fn is_double_poisson(&self) -> DecisionReport {
        self.decide(|_, _, _| TensorElem::zero(3))
    }

    /// `⦃c,b,a⦄ = τ · (1/12)⦃c,b,a⦄_{E³}` on all basis triples.
    pub fn is_quasi_poisson(&self) -> DecisionReport {
        self.decide(|c, b, a| e3_closed_form(&self.alg, c, b, a).scale(&self.tau))
    }
}

/// `E(a) = a⊗1 − 1⊗a`.
pub fn e_derivation(alg: &Algebra, a: &AlgElem) -> TensorElem {
    let one = alg.unit();
    TensorElem::product(&[a, one]).sub(&TensorElem::product(&[one, a]))
}

/// Sweedler components of `E(a)` as `(coefficient, first, second)`.
fn e_sweedler(alg: &Algebra, a: &AlgElem) -> [(Rational, AlgElem, AlgElem); 2] {
    let one = alg.unit().clone();
    [(Rational::one(), a.clone(), one.clone()), (-Rational::one(), one, a.clone())]
}

/// `⦃a₁,a₂,a₃⦄~ = E′(a₃)E″(a₁) ⊗ E′(a₁)E″(a₂) ⊗ E′(a₂)E″(a₃)`.
fn e3_tilde(alg: &Algebra, a1: &AlgElem, a2: &AlgElem, a3: &AlgElem) -> TensorElem {
    let mut out = TensorElem::zero(3);
    for (c1, p1, q1) in e_sweedler(alg, a1) {
        for (c2, p2, q2) in e_sweedler(alg, a2) {
            for (c3, p3, q3) in e_sweedler(alg, a3) {
                let x = alg.mul_raw(&p3, &q1);
                let y = alg.mul_raw(&p1, &q2);
                let z = alg.mul_raw(&p2, &q3);
                out.add_assign(&TensorElem::product(&[&x, &y, &z]).scale(&(&c1 * &c2 * &c3)));
            }
        }
    }
    out
}

/// `⦃c,b,a⦄_{E³} = Σ_{i=0}^{2} σ^i ∘ ⦃…⦄~ ∘ σ^{−i}` at `c⊗b⊗a`.
pub fn mu_e3_bracket(alg: &Algebra, c: &AlgElem, b: &AlgElem, a: &AlgElem) -> TensorElem {
    // σ^{-1}(v₁⊗v₂⊗v₃) = v₂⊗v₃⊗v₁
    let t0 = e3_tilde(alg, c, b, a);
    let t1 = e3_tilde(alg, b, a, c).cycle3();
    let t2 = e3_tilde(alg, a, c, b).cycle3().cycle3();
    t0.add(&t1).add(&t2)
}

/// `(1/4)(ac⊗b⊗1 − ac⊗1⊗b − a⊗cb⊗1 + a⊗c⊗b + c⊗1⊗ba − c⊗b⊗a + 1⊗cb⊗a − 1⊗c⊗ba)`.
pub fn e3_closed_form(alg: &Algebra, c: &AlgElem, b: &AlgElem, a: &AlgElem) -> TensorElem {
    let one = alg.unit();
    let ac = alg.mul_raw(a, c);
    let cb = alg.mul_raw(c, b);
    let ba = alg.mul_raw(b, a);
    let p = TensorElem::product;
    let sum = p(&[&ac, b, one])
        .sub(&p(&[&ac, one, b]))
        .sub(&p(&[a, &cb, one]))
        .add(&p(&[a, c, b]))
        .add(&p(&[c, one, &ba]))
        .sub(&p(&[c, b, a]))
        .add(&p(&[one, &cb, a]))
        .sub(&p(&[one, c, &ba]));
    sum.scale(&frac(1, 4))
}

/// Order-2 tensor from `(k, l, c)` terms.
pub fn tensor2(terms: &[(usize, usize, Rational)]) -> TensorElem {
    TensorElem::from_terms(2, terms.iter().map(|(k, l, c)| (vec![*k, *l], c.clone())))
}
