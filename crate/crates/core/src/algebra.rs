//! Finite-dimensional unital associative algebras, their duals and the
//! graded space `∂A = A ⊕ A^#[-1]` with its natural form and product `m₂`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::Rational;
use crate::sparse::SparseVec;

/// Element of `A` in basis coordinates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AlgElem(pub SparseVec);

/// Functional on `A` in dual-basis coordinates; appears shifted as `tf`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DualElem(pub SparseVec);

impl AlgElem {
    pub fn zero() -> Self {
        Self(SparseVec::zero())
    }
    pub fn basis(i: usize) -> Self {
        Self(SparseVec::basis(i))
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.scale(s))
    }
    pub fn add(&self, o: &Self) -> Self {
        Self(&self.0 + &o.0)
    }
    pub fn sub(&self, o: &Self) -> Self {
        Self(&self.0 - &o.0)
    }
}

impl DualElem {
    pub fn zero() -> Self {
        Self(SparseVec::zero())
    }
    pub fn basis(i: usize) -> Self {
        Self(SparseVec::basis(i))
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    pub fn scale(&self, s: &Rational) -> Self {
        Self(self.0.scale(s))
    }
    pub fn add(&self, o: &Self) -> Self {
        Self(&self.0 + &o.0)
    }
    pub fn sub(&self, o: &Self) -> Self {
        Self(&self.0 - &o.0)
    }
    /// `f(a)`.
    pub fn eval(&self, a: &AlgElem) -> Rational {
        self.0.dot(&a.0)
    }
}

/// Element `(a, tf)` of `∂A`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhiElem {
    pub alg: AlgElem,
    pub dual: DualElem,
}

impl PhiElem {
    pub fn from_alg(a: AlgElem) -> Self {
        Self { alg: a, dual: DualElem::zero() }
    }
    pub fn from_dual(f: DualElem) -> Self {
        Self { alg: AlgElem::zero(), dual: f }
    }
    pub fn is_zero(&self) -> bool {
        self.alg.is_zero() && self.dual.is_zero()
    }
    pub fn add(&self, o: &Self) -> Self {
        Self { alg: self.alg.add(&o.alg), dual: self.dual.add(&o.dual) }
    }
    pub fn scale(&self, s: &Rational) -> Self {
        Self { alg: self.alg.scale(s), dual: self.dual.scale(s) }
    }
    /// Nonzero homogeneous components as slots.
    pub fn parts(&self) -> impl Iterator<Item = Slot> + '_ {
        let a = (!self.alg.is_zero()).then(|| Slot::Alg(self.alg.clone()));
        let f = (!self.dual.is_zero()).then(|| Slot::Dual(self.dual.clone()));
        a.into_iter().chain(f)
    }
}

/// A homogeneous slot of `∂A`: parity 0 holds `A`, parity 1 holds `A^#[-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slot {
    Alg(AlgElem),
    Dual(DualElem),
}

impl Slot {
    pub fn parity(&self) -> u8 {
        match self {
            Slot::Alg(_) => 0,
            Slot::Dual(_) => 1,
        }
    }
    pub fn is_zero(&self) -> bool {
        match self {
            Slot::Alg(a) => a.is_zero(),
            Slot::Dual(f) => f.is_zero(),
        }
    }
    pub fn as_alg(&self) -> Option<&AlgElem> {
        match self {
            Slot::Alg(a) => Some(a),
            Slot::Dual(_) => None,
        }
    }
    pub fn as_dual(&self) -> Option<&DualElem> {
        match self {
            Slot::Dual(f) => Some(f),
            Slot::Alg(_) => None,
        }
    }
    pub fn scale(&self, s: &Rational) -> Self {
        match self {
            Slot::Alg(a) => Slot::Alg(a.scale(s)),
            Slot::Dual(f) => Slot::Dual(f.scale(s)),
        }
    }
    /// Basis slot: indices `0..dim` are `e_i`, `dim..2dim` are `t(e_i*)`.
    pub fn from_phi_basis(idx: usize, dim: usize) -> Self {
        if idx < dim {
            Slot::Alg(AlgElem::basis(idx))
        } else {
            Slot::Dual(DualElem::basis(idx - dim))
        }
    }
    pub fn into_phi(self) -> PhiElem {
        match self {
            Slot::Alg(a) => PhiElem::from_alg(a),
            Slot::Dual(f) => PhiElem::from_dual(f),
        }
    }
}

/// Sequence of homogeneous slots; the parity vector is read off the slots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedTuple {
    pub slots: Vec<Slot>,
}

impl MixedTuple {
    pub fn new(slots: Vec<Slot>) -> Self {
        Self { slots }
    }
    pub fn len(&self) -> usize {
        self.slots.len()
    }
    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
    pub fn parity(&self) -> Vec<u8> {
        self.slots.iter().map(Slot::parity).collect()
    }
    /// `|ī|`, the number of parity-1 slots.
    pub fn degree(&self) -> usize {
        self.slots.iter().filter(|s| s.parity() == 1).count()
    }
    /// Basis tuple from `∂A` basis indices.
    pub fn from_phi_basis(indices: &[usize], dim: usize) -> Self {
        Self::new(indices.iter().map(|&i| Slot::from_phi_basis(i, dim)).collect())
    }
}

/// Koszul-signed action `σ(v₁⊗…⊗vₙ) = ± v_{σ⁻¹(1)}⊗…⊗v_{σ⁻¹(n)}`.
///
/// `sigma[i]` is the image of position `i`. The sign is
/// `(-1)^ε` with `ε = Σ_{p<q, σ⁻¹(p)>σ⁻¹(q)} |v_{σ⁻¹(p)}||v_{σ⁻¹(q)}|`.
pub fn permute_graded(sigma: &[usize], tup: &MixedTuple) -> Result<(MixedTuple, i8)> {
    let n = tup.len();
    if sigma.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: sigma.len() });
    }
    let mut inv = vec![usize::MAX; n];
    for (i, &s) in sigma.iter().enumerate() {
        if s >= n || inv[s] != usize::MAX {
            return Err(Error::InvalidArgument(format!("not a permutation: {sigma:?}")));
        }
        inv[s] = i;
    }
    let par = tup.parity();
    let mut eps = 0u32;
    for p in 0..n {
        for q in p + 1..n {
            if inv[p] > inv[q] {
                eps += u32::from(par[inv[p]] * par[inv[q]]);
            }
        }
    }
    let slots = inv.iter().map(|&i| tup.slots[i].clone()).collect();
    Ok((MixedTuple::new(slots), if eps.is_multiple_of(2) { 1 } else { -1 }))
}

/// Failures found by [`validate_algebra`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub associativity_failures: Vec<(usize, usize, usize)>,
    pub unit_failures: Vec<usize>,
}

impl AlgebraReport {
    pub fn is_ok(&self) -> bool {
        self.associativity_failures.is_empty() && self.unit_failures.is_empty()
    }
}

/// Finite-dimensional unital associative algebra over ℚ given by structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    dim: usize,
    basis_names: Vec<String>,
    /// `table[i * dim + j] = e_i · e_j`.
    table: Vec<SparseVec>,
    unit: AlgElem,
}

impl Algebra {
    /// Builds from `(i, j, k, c)` entries meaning `e_i·e_j` has coefficient `c` on `e_k`.
    /// Duplicate entries are summed.
    pub fn new(
        basis_names: Vec<String>,
        constants: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        unit: SparseVec,
    ) -> Result<Self> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("algebra must have positive dimension".into()));
        }
        let mut raw: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); dim * dim];
        for (i, j, k, c) in constants {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            raw[i * dim + j].push((k, c));
        }
        if let Some(m) = unit.max_index() {
            if m >= dim {
                return Err(Error::IndexOutOfRange { index: m, dim });
            }
        }
        let table = raw.into_iter().map(SparseVec::from_entries).collect();
        Ok(Self { dim, basis_names, table, unit: AlgElem(unit) })
    }

    /// `𝕜[t]/(t^m)` with monomial basis `1, t, …, t^{m-1}`.
    pub fn truncated_polynomial(m: usize) -> Self {
        let names = (0..m)
            .map(|p| match p {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t{p}"),
            })
            .collect();
        let consts = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|(i, j)| i + j < m)
            .map(|(i, j)| (i, j, i + j, Rational::one()));
        Self::new(names, consts, SparseVec::basis(0)).expect("valid truncated polynomial ring")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn unit(&self) -> &AlgElem {
        &self.unit
    }

    /// `e_i · e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.dim + j]
    }

    /// Nonzero structure constants `(i, j, k, c)`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        self.table.iter().enumerate().flat_map(move |(ij, v)| {
            v.iter().map(move |(k, c)| (ij / self.dim, ij % self.dim, k, c))
        })
    }

    fn check(&self, v: &SparseVec) -> Result<()> {
        match v.max_index() {
            Some(m) if m >= self.dim => Err(Error::DimensionMismatch { expected: self.dim, found: m + 1 }),
            _ => Ok(()),
        }
    }

    /// Product with index checks.
    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        self.check(&a.0)?;
        self.check(&b.0)?;
        Ok(self.mul_raw(a, b))
    }

    /// Product assuming both operands are in range.
    pub fn mul_raw(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = SparseVec::zero();
        for (i, x) in a.0.iter() {
            for (j, y) in b.0.iter() {
                out.add_scaled(&(x * y), self.basis_product(i, j));
            }
        }
        AlgElem(out)
    }

    /// `tf·x`, the functional `c ↦ f(x c)`.
    pub fn right_act(&self, f: &DualElem, x: &AlgElem) -> DualElem {
        if f.is_zero() || x.is_zero() {
            return DualElem::zero();
        }
        let coeffs = (0..self.dim).map(|k| {
            let v = x.0.iter().fold(Rational::zero(), |acc, (i, xi)| {
                acc + xi * f.0.dot(self.basis_product(i, k))
            });
            (k, v)
        });
        DualElem(SparseVec::from_entries(coeffs))
    }

    /// `x·tf`, the functional `c ↦ f(c x)`.
    pub fn left_act(&self, x: &AlgElem, f: &DualElem) -> DualElem {
        if f.is_zero() || x.is_zero() {
            return DualElem::zero();
        }
        let coeffs = (0..self.dim).map(|k| {
            let v = x.0.iter().fold(Rational::zero(), |acc, (i, xi)| {
                acc + xi * f.0.dot(self.basis_product(k, i))
            });
            (k, v)
        });
        DualElem(SparseVec::from_entries(coeffs))
    }

    /// `a·tf·b`, the functional `c ↦ f(b c a)`.
    pub fn dual_action(&self, a: &AlgElem, f: &DualElem, b: &AlgElem) -> Result<DualElem> {
        self.check(&a.0)?;
        self.check(&f.0)?;
        self.check(&b.0)?;
        Ok(self.left_act(a, &self.right_act(f, b)))
    }

    /// `f(1_A)`.
    pub fn eval_at_unit(&self, f: &DualElem) -> Rational {
        f.eval(&self.unit)
    }

    /// `(a,tf)·(a',tf') = (aa', tf·a' + a·tf')`.
    pub fn m2_phi(&self, x: &PhiElem, y: &PhiElem) -> PhiElem {
        PhiElem {
            alg: self.mul_raw(&x.alg, &y.alg),
            dual: self.right_act(&x.dual, &y.alg).add(&self.left_act(&x.alg, &y.dual)),
        }
    }

    /// `𝔤(m₂(x, y), z)` on homogeneous slots.
    pub fn pair_m2(&self, x: &Slot, y: &Slot, z: &Slot) -> Rational {
        match (x, y, z) {
            (Slot::Alg(a), Slot::Alg(b), Slot::Dual(f)) => f.eval(&self.mul_raw(a, b)),
            (Slot::Alg(a), Slot::Dual(f), Slot::Alg(c)) => f.eval(&self.mul_raw(c, a)),
            (Slot::Dual(f), Slot::Alg(a), Slot::Alg(c)) => f.eval(&self.mul_raw(a, c)),
            _ => Rational::zero(),
        }
    }

    fn render_coeffs(&self, v: &SparseVec, suffix: &str) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        v.iter()
            .map(|(i, c)| {
                let name = format!("{}{suffix}", self.basis_names[i]);
                if c.is_one() {
                    name
                } else {
                    format!("{c}*{name}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Human-readable form such as `t` or `t(t2*)`.
    pub fn render_slot(&self, s: &Slot) -> String {
        match s {
            Slot::Alg(a) => self.render_coeffs(&a.0, ""),
            Slot::Dual(f) => format!("t({})", self.render_coeffs(&f.0, "*")),
        }
    }

    /// Every failing associativity triple and every basis index where the unit fails.
    pub fn validate(&self) -> AlgebraReport {
        let mut report = AlgebraReport::default();
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let eij = AlgElem(self.basis_product(i, j).clone());
                for k in 0..d {
                    let ejk = AlgElem(self.basis_product(j, k).clone());
                    let lhs = self.mul_raw(&eij, &AlgElem::basis(k));
                    let rhs = self.mul_raw(&AlgElem::basis(i), &ejk);
                    if lhs != rhs {
                        report.associativity_failures.push((i, j, k));
                    }
                }
            }
        }
        for i in 0..d {
            let e = AlgElem::basis(i);
            if self.mul_raw(&self.unit, &e) != e || self.mul_raw(&e, &self.unit) != e {
                report.unit_failures.push(i);
            }
        }
        report
    }
}

/// Associativity and unit report for `alg`.
pub fn validate_algebra(alg: &Algebra) -> AlgebraReport {
    alg.validate()
}

/// `𝔤(x, y)`: pairs the dual part of each argument with the algebra part of the other.
pub fn natural_form(x: &PhiElem, y: &PhiElem) -> Rational {
    x.dual.eval(&y.alg) + y.dual.eval(&x.alg)
}

/// `𝔤` on homogeneous slots.
pub fn natural_form_slots(x: &Slot, y: &Slot) -> Rational {
    match (x, y) {
        (Slot::Alg(a), Slot::Dual(f)) | (Slot::Dual(f), Slot::Alg(a)) => f.eval(a),
        _ => Rational::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{frac, rat, sign};
    use proptest::prelude::*;

    fn phi_basis(idx: usize, dim: usize) -> PhiElem {
        Slot::from_phi_basis(idx, dim).into_phi()
    }

    #[test]
    fn truncated_cubic_is_valid() {
        assert!(validate_algebra(&Algebra::truncated_polynomial(3)).is_ok());
        assert!(validate_algebra(&Algebra::truncated_polynomial(1)).is_ok());
    }

    #[test]
    fn perturbed_table_reports_triple() {
        let good = Algebra::truncated_polynomial(3);
        let mut consts = good.structure_constants().map(|(i, j, k, c)| (i, j, k, c.clone())).collect::<Vec<_>>();
        consts.push((1, 2, 2, rat(1)));
        let bad = Algebra::new(good.basis_names().to_vec(), consts, SparseVec::basis(0)).unwrap();
        let report = validate_algebra(&bad);
        assert!(report.associativity_failures.contains(&(1, 1, 1)));
    }

    #[test]
    fn wrong_unit_reported() {
        let good = Algebra::truncated_polynomial(2);
        let consts = good.structure_constants().map(|(i, j, k, c)| (i, j, k, c.clone())).collect::<Vec<_>>();
        let bad = Algebra::new(good.basis_names().to_vec(), consts, SparseVec::basis(1)).unwrap();
        assert!(!validate_algebra(&bad).unit_failures.is_empty());
    }

    #[test]
    fn products_in_cubic() {
        let alg = Algebra::truncated_polynomial(3);
        let t = AlgElem::basis(1);
        assert_eq!(alg.mul(&t, &t).unwrap(), AlgElem::basis(2));
        assert!(alg.mul(&t, &AlgElem::basis(2)).unwrap().is_zero());
        let a = AlgElem(SparseVec::from_entries([(0, frac(1, 2)), (2, rat(-3))]));
        assert_eq!(alg.mul(alg.unit(), &a).unwrap(), a);
        assert!(alg.mul(&AlgElem::basis(5), &t).is_err());
    }

    #[test]
    fn dual_action_examples() {
        let alg = Algebra::truncated_polynomial(3);
        let one = alg.unit().clone();
        let t = AlgElem::basis(1);
        let f = DualElem(SparseVec::from_entries([(0, rat(2)), (1, frac(-1, 3))]));
        assert_eq!(alg.dual_action(&one, &f, &one).unwrap(), f);
        assert_eq!(alg.dual_action(&t, &DualElem::basis(2), &one).unwrap(), DualElem::basis(1));
        assert!(alg.dual_action(&t, &DualElem::zero(), &t).unwrap().is_zero());
    }

    #[test]
    fn dual_action_formula_on_basis() {
        let alg = Algebra::truncated_polynomial(3);
        for a in 0..3 {
            for b in 0..3 {
                for f in 0..3 {
                    let g = alg
                        .dual_action(&AlgElem::basis(a), &DualElem::basis(f), &AlgElem::basis(b))
                        .unwrap();
                    for c in 0..3 {
                        let bca = alg.mul_raw(
                            &alg.mul_raw(&AlgElem::basis(b), &AlgElem::basis(c)),
                            &AlgElem::basis(a),
                        );
                        assert_eq!(g.eval(&AlgElem::basis(c)), DualElem::basis(f).eval(&bca));
                    }
                }
            }
        }
    }

    #[test]
    fn natural_form_examples() {
        let t = AlgElem::basis(1);
        let tstar = PhiElem::from_dual(DualElem::basis(1));
        assert_eq!(natural_form(&tstar, &PhiElem::from_alg(t.clone())), rat(1));
        assert_eq!(natural_form(&PhiElem::from_alg(t.clone()), &PhiElem::from_alg(t)), rat(0));
        assert_eq!(natural_form(&tstar, &tstar), rat(0));
    }

    #[test]
    fn m2_examples() {
        let alg = Algebra::truncated_polynomial(3);
        let unit = PhiElem::from_alg(alg.unit().clone());
        let x = PhiElem { alg: AlgElem::basis(1), dual: DualElem::basis(2) };
        assert_eq!(alg.m2_phi(&unit, &x), x);
        assert_eq!(alg.m2_phi(&x, &unit), x);
        let a = PhiElem::from_alg(AlgElem::basis(1));
        let f = PhiElem::from_dual(DualElem::basis(2));
        assert_eq!(alg.m2_phi(&a, &f), PhiElem::from_dual(alg.left_act(&a.alg, &f.dual)));
        assert!(alg.m2_phi(&f, &f).is_zero());
    }

    #[test]
    fn m2_associative_on_basis() {
        for m in 1..=4 {
            let alg = Algebra::truncated_polynomial(m);
            let n = 2 * m;
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let (x, y, z) = (phi_basis(x, m), phi_basis(y, m), phi_basis(z, m));
                        let l = alg.m2_phi(&alg.m2_phi(&x, &y), &z);
                        let r = alg.m2_phi(&x, &alg.m2_phi(&y, &z));
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn natural_form_symmetric_and_m2_cyclic() {
        let m = 3;
        let alg = Algebra::truncated_polynomial(m);
        let n = 2 * m;
        for x in 0..n {
            for y in 0..n {
                let (px, py) = (phi_basis(x, m), phi_basis(y, m));
                assert_eq!(natural_form(&px, &py), natural_form(&py, &px));
                for z in 0..n {
                    let s = [x, y, z].map(|i| Slot::from_phi_basis(i, m));
                    let deg = |s: &Slot| i64::from(s.parity());
                    let lhs = alg.pair_m2(&s[1], &s[2], &s[0]);
                    let rhs = alg.pair_m2(&s[0], &s[1], &s[2]);
                    let e = 2 + deg(&s[0]) * (deg(&s[1]) + deg(&s[2]));
                    assert_eq!(lhs, sign(e) * rhs);
                    let direct = natural_form(&alg.m2_phi(&px, &py), &phi_basis(z, m));
                    assert_eq!(direct, alg.pair_m2(&s[0], &s[1], &s[2]));
                }
            }
        }
    }

    #[test]
    fn permute_examples() {
        let dim = 2;
        let tup = MixedTuple::from_phi_basis(&[2, 3, 0], dim);
        let (same, s) = permute_graded(&[0, 1, 2], &tup).unwrap();
        assert_eq!((same, s), (tup.clone(), 1));
        let (_, s) = permute_graded(&[1, 0, 2], &tup).unwrap();
        assert_eq!(s, -1);
        let (_, s) = permute_graded(&[0, 2, 1], &tup).unwrap();
        assert_eq!(s, 1);
        assert!(permute_graded(&[0, 1], &tup).is_err());
        assert!(permute_graded(&[0, 0, 1], &tup).is_err());
    }

    fn compose(s: &[usize], r: &[usize]) -> Vec<usize> {
        r.iter().map(|&i| s[i]).collect()
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle()
    }

    /// `(f₁⊗…⊗fₙ)(v₁⊗…⊗vₙ)` on basis functionals and basis vectors with the Koszul sign
    /// from moving each `f_i` past `v_1, …, v_{i-1}`.
    fn eval_tensor(fs: &MixedTuple, fidx: &[usize], vs: &MixedTuple, vidx: &[usize]) -> i64 {
        let fp = fs.parity();
        let vp = vs.parity();
        let mut e = 0;
        for i in 0..fidx.len() {
            if fidx[i] != vidx[i] {
                return 0;
            }
            e += vp[..i].iter().map(|&v| i64::from(fp[i] * v)).sum::<i64>();
        }
        if e % 2 == 0 { 1 } else { -1 }
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative(
            (s, r, idx) in (1usize..=4).prop_flat_map(|n| {
                (arb_perm(n), arb_perm(n), proptest::collection::vec(0usize..4, n))
            })
        ) {
            let tup = MixedTuple::from_phi_basis(&idx, 2);
            let (t1, s1) = permute_graded(&r, &tup).unwrap();
            let (t2, s2) = permute_graded(&s, &t1).unwrap();
            let (t3, s3) = permute_graded(&compose(&s, &r), &tup).unwrap();
            prop_assert_eq!(t2, t3);
            prop_assert_eq!(s1 * s2, s3);
        }

        #[test]
        fn duality_of_permutation_action(
            (s, idx) in (1usize..=4).prop_flat_map(|n| {
                (arb_perm(n), proptest::collection::vec(0usize..4, n))
            })
        ) {
            let n = idx.len();
            let vs = MixedTuple::from_phi_basis(&idx, 2);
            let (pv, sv) = permute_graded(&s, &vs).unwrap();
            let pidx: Vec<usize> = (0..n).map(|p| idx[s.iter().position(|&x| x == p).unwrap()]).collect();
            let mut inv = vec![0; n];
            for (i, &x) in s.iter().enumerate() { inv[x] = i; }
            // Functionals of matching parity indexed like the permuted vectors.
            for fidx in [pidx.clone(), idx.clone()] {
                let fs = MixedTuple::from_phi_basis(&fidx, 2);
                let lhs = i64::from(sv) * eval_tensor(&fs, &fidx, &pv, &pidx);
                let (pf, sf) = permute_graded(&inv, &fs).unwrap();
                let pfidx: Vec<usize> = (0..n).map(|p| fidx[inv.iter().position(|&x| x == p).unwrap()]).collect();
                let rhs = i64::from(sf) * eval_tensor(&pf, &pfidx, &vs, &idx);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
