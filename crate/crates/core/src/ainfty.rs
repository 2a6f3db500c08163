//! The higher multiplications on `∂A`: `m₂`, `m₃` from the double bracket and
//! the even `mₙ` defined through the natural form, cyclic words and `C_{i,j}`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{AlgElem, Algebra, DualElem, MixedTuple, PhiElem, Slot};
use crate::bracket::{DoubleBracket, TensorElem};
use crate::error::{Error, Result};
use crate::exact_arith::{CCoeffTable, Rational};
use crate::sparse::SparseVec;

/// Cyclic word of homogeneous entries, stored through a linear representative.
#[derive(Debug, Clone)]
pub struct CyclicWord {
    pub entries: Vec<Slot>,
}

impl CyclicWord {
    pub fn new(entries: Vec<Slot>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dual_count(&self) -> usize {
        self.entries.iter().filter(|s| s.parity() == 1).count()
    }

    /// Left rotation by `r` together with its Koszul sign.
    pub fn rotate(&self, r: usize) -> (Self, i8) {
        let n = self.len();
        if n == 0 {
            return (self.clone(), 1);
        }
        let r = r % n;
        let moved: usize = self.entries[..r].iter().map(|s| usize::from(s.parity())).sum();
        let rest: usize = self.entries[r..].iter().map(|s| usize::from(s.parity())).sum();
        let mut entries = self.entries[r..].to_vec();
        entries.extend_from_slice(&self.entries[..r]);
        (Self { entries }, if (moved * rest).is_multiple_of(2) { 1 } else { -1 })
    }

    /// Whether `self` and `other` represent the same class (some rotation with sign `+1`).
    pub fn same_class(&self, other: &Self) -> bool {
        self.len() == other.len()
            && (0..self.len().max(1)).any(|r| {
                let (w, s) = self.rotate(r);
                s == 1 && w.entries == other.entries
            })
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.same_class(other)
    }
}

/// Normal form `⟨tf₁,…,tf_i, a, tg₁,…,tg_j, b⟩` of a word with two algebra entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalSplit {
    pub i: usize,
    pub j: usize,
    pub f_block: Vec<DualElem>,
    pub a: AlgElem,
    pub g_block: Vec<DualElem>,
    pub b: AlgElem,
    /// The canonical word is the input rotated left by this offset.
    pub rotation: usize,
}

impl CanonicalSplit {
    /// `⟨f_block, a, g_block, b⟩` as a linear word.
    pub fn reassemble(&self) -> CyclicWord {
        let mut e: Vec<Slot> = self.f_block.iter().cloned().map(Slot::Dual).collect();
        e.push(Slot::Alg(self.a.clone()));
        e.extend(self.g_block.iter().cloned().map(Slot::Dual));
        e.push(Slot::Alg(self.b.clone()));
        CyclicWord::new(e)
    }
}

/// Positions of the two algebra entries and the resulting canonical rotation data.
fn split_positions(parities: &[u8]) -> Result<(usize, usize, usize, usize, usize)> {
    let n = parities.len();
    let algs: Vec<usize> = (0..n).filter(|&p| parities[p] == 0).collect();
    if algs.len() != 2 || (n - 2).is_multiple_of(2) {
        return Err(Error::Parity(format!(
            "need exactly two algebra entries and an odd number of duals, got {parities:?}"
        )));
    }
    let (p, q) = (algs[0], algs[1]);
    let inner = q - p - 1;
    let outer = n - 2 - inner;
    // (i, j, start of f-block, position of a, position of b)
    Ok(if inner > outer {
        (outer, inner, (q + 1) % n, p, q)
    } else {
        (inner, outer, (p + 1) % n, q, p)
    })
}

/// Rotates a word with exactly two algebra entries and odd dual count into normal form.
pub fn canonicalize_cycle(word: &CyclicWord) -> Result<CanonicalSplit> {
    let parities: Vec<u8> = word.entries.iter().map(Slot::parity).collect();
    let (i, j, start, pa, pb) = split_positions(&parities)?;
    let n = word.len();
    let dual_at = |k: usize| word.entries[k % n].as_dual().cloned().expect("dual entry");
    let f_block = (0..i).map(|m| dual_at(start + m)).collect();
    let g_block = (0..j).map(|m| dual_at(pa + 1 + m)).collect();
    let rotation = if i == 0 { pa } else { start };
    Ok(CanonicalSplit {
        i,
        j,
        f_block,
        a: word.entries[pa].as_alg().cloned().expect("algebra entry"),
        g_block,
        b: word.entries[pb].as_alg().cloned().expect("algebra entry"),
        rotation,
    })
}

/// `ev⟨tf₁,…,tf_k⟩ = ∏ f_i(1_A)` on an all-dual word of odd length.
pub fn ev(alg: &Algebra, word: &CyclicWord) -> Result<Rational> {
    if word.len().is_multiple_of(2) {
        return Err(Error::Parity(format!("ev needs odd length, got {}", word.len())));
    }
    let mut acc = Rational::one();
    for s in &word.entries {
        let f = s.as_dual().ok_or_else(|| Error::Parity("ev needs all-dual words".into()))?;
        if acc.is_zero() {
            continue;
        }
        acc *= alg.eval_at_unit(f);
    }
    Ok(acc)
}

/// `𝓜_k` on a canonical split: `C_{i,j}` times the four-term combination
/// (zero when `i = 0`), with algebra entries absorbed into neighbouring functionals.
pub fn script_m(alg: &Algebra, split: &CanonicalSplit, coeffs: &CCoeffTable) -> Result<Vec<(Rational, CyclicWord)>> {
    let (i, j) = (split.i, split.j);
    if (i + j) % 2 == 0 || i + j < 3 {
        return Err(Error::Parity(format!("script_m needs i + j odd and at least 3, got ({i}, {j})")));
    }
    if i == 0 {
        return Ok(Vec::new());
    }
    let c = coeffs.get(i as i64, j as i64)?;
    let (a, b) = (&split.a, &split.b);
    let word = |fs: Vec<DualElem>, gs: Vec<DualElem>| {
        CyclicWord::new(fs.into_iter().chain(gs).map(Slot::Dual).collect())
    };
    let f = &split.f_block;
    let g = &split.g_block;

    let mut f1 = f.clone();
    f1[i - 1] = alg.right_act(&f[i - 1], a);
    let mut g1 = g.clone();
    g1[j - 1] = alg.right_act(&g[j - 1], b);

    let mut f2 = f.clone();
    f2[0] = alg.left_act(b, &f[0]);
    let mut g2 = g.clone();
    g2[0] = alg.left_act(a, &g[0]);

    let mut g3 = g.clone();
    g3[0] = alg.left_act(a, &g[0]);
    g3[j - 1] = alg.right_act(&g3[j - 1], b);

    let mut f4 = f.clone();
    f4[0] = alg.left_act(b, &f[0]);
    f4[i - 1] = alg.right_act(&f4[i - 1], a);

    Ok(vec![
        (c.clone(), word(f1, g1)),
        (c.clone(), word(f2, g2)),
        (-c.clone(), word(f.clone(), g3)),
        (-c, word(f4, g.clone())),
    ])
}

/// Output parity of `mₙ` on the given input parities, if it can be nonzero.
fn output_parity(n: usize, parities: &[u8]) -> Option<u8> {
    let duals = parities.iter().filter(|&&p| p == 1).count();
    match n {
        2 => (duals <= 1).then_some(duals as u8),
        3 => match parities {
            [0, 1, 0] => Some(0),
            [1, 0, 1] => Some(1),
            _ => None,
        },
        _ if n >= 4 && n.is_multiple_of(2) => match n - duals {
            2 => Some(0),
            1 => Some(1),
            _ => None,
        },
        _ => None,
    }
}

/// Support report for [`Structure::is_acceptable`] and [`Structure::is_good`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub n: usize,
    pub holds: bool,
    pub patterns_checked: usize,
    /// `(pattern, output parities observed)` for every pattern with nonzero output.
    pub supported: Vec<(Vec<u8>, Vec<u8>)>,
    pub violations: Vec<Vec<u8>>,
}

/// The A∞-structure on `∂A` built from a double bracket.
#[derive(Debug, Clone)]
pub struct Structure {
    db: DoubleBracket,
    coeffs: CCoeffTable,
}

impl Structure {
    pub fn new(db: DoubleBracket) -> Self {
        let coeffs = CCoeffTable::new(db.tau().clone(), 25);
        Self { db, coeffs }
    }

    pub fn algebra(&self) -> &Algebra {
        self.db.algebra()
    }

    pub fn bracket(&self) -> &DoubleBracket {
        &self.db
    }

    pub fn tau(&self) -> &Rational {
        self.db.tau()
    }

    pub fn coeffs(&self) -> &CCoeffTable {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.algebra().dim()
    }

    /// `mₙ` is identically zero for `n = 1` and odd `n ≥ 5`.
    pub fn vanishes_identically(n: usize) -> bool {
        n == 0 || n == 1 || (n % 2 == 1 && n >= 5)
    }

    /// `𝔤(m₃(x₁,x₂,x₃), x₄)`.
    pub fn pair_m3(&self, s: &[&Slot]) -> Rational {
        match s {
            [Slot::Alg(b), Slot::Dual(g), Slot::Alg(a), Slot::Dual(f)]
            | [Slot::Dual(f), Slot::Alg(b), Slot::Dual(g), Slot::Alg(a)] => self.db.eval_paired(a, b, f, g),
            _ => Rational::zero(),
        }
    }

    /// `m₃` on `(b, tg, a)` or `(tf, b, tg)`; zero on every other pattern.
    pub fn m3_component(&self, args: &[&Slot]) -> PhiElem {
        let alg = self.algebra();
        match args {
            [Slot::Alg(b), Slot::Dual(g), Slot::Alg(a)] => {
                let br = self.db.eval(a, b);
                let mut out = SparseVec::zero();
                for (k, c) in br.iter() {
                    let gv = g.0.get(k[1]);
                    if !gv.is_zero() {
                        out.add_scaled(&(c * gv), &SparseVec::basis(k[0]));
                    }
                }
                PhiElem::from_alg(AlgElem(out))
            }
            [Slot::Dual(f), Slot::Alg(b), Slot::Dual(g)] => {
                let coeffs = (0..alg.dim()).map(|i| (i, self.db.eval_paired(&AlgElem::basis(i), b, f, g)));
                PhiElem::from_dual(DualElem(SparseVec::from_entries(coeffs)))
            }
            _ => PhiElem::default(),
        }
    }

    /// `𝔤(mₙ(x₁,…,xₙ), x_{n+1})` for even `n ≥ 4` through `ev ∘ 𝓜_{n-1}` on the cyclic word.
    pub fn pair_mn(&self, n: usize, s: &[&Slot]) -> Result<Rational> {
        if n < 4 || n % 2 == 1 {
            return Err(Error::InvalidArgument(format!("pair_mn needs even n ≥ 4, got {n}")));
        }
        if s.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, found: s.len() });
        }
        if s.iter().filter(|x| x.parity() == 0).count() != 2 {
            return Ok(Rational::zero());
        }
        let word = CyclicWord::new(s.iter().map(|&x| x.clone()).collect());
        let split = canonicalize_cycle(&word)?;
        let alg = self.algebra();
        let mut acc = Rational::zero();
        for (c, w) in script_m(alg, &split, &self.coeffs)? {
            acc += c * ev(alg, &w)?;
        }
        Ok(acc)
    }

    /// `𝔤(mₙ(s₀,…,s_{n-1}), sₙ)` for any `n`.
    pub fn pair(&self, n: usize, s: &[&Slot]) -> Rational {
        debug_assert_eq!(s.len(), n + 1);
        match n {
            2 => self.algebra().pair_m2(s[0], s[1], s[2]),
            3 => self.pair_m3(s),
            _ if Self::vanishes_identically(n) => Rational::zero(),
            _ => self.pair_mn(n, s).expect("even arity"),
        }
    }

    /// Reconstructs `mₙ(args)` from its pairings against the dual basis of `∂A`.
    pub fn reconstruct(&self, n: usize, args: &[&Slot]) -> PhiElem {
        let dim = self.dim();
        let parities: Vec<u8> = args.iter().map(|s| s.parity()).collect();
        let Some(out) = output_parity(n, &parities) else {
            return PhiElem::default();
        };
        if args.iter().any(|s| s.is_zero()) {
            return PhiElem::default();
        }
        let mut buf: Vec<&Slot> = args.to_vec();
        let partners: Vec<Slot> = (0..dim)
            .map(|i| if out == 0 { Slot::Dual(DualElem::basis(i)) } else { Slot::Alg(AlgElem::basis(i)) })
            .collect();
        let coeffs = partners.iter().enumerate().map(|(i, p)| {
            buf.push(p);
            let v = self.pair(n, &buf);
            buf.pop();
            (i, v)
        });
        let v = SparseVec::from_entries(coeffs.collect::<Vec<_>>());
        if out == 0 {
            PhiElem::from_alg(AlgElem(v))
        } else {
            PhiElem::from_dual(DualElem(v))
        }
    }

    /// `mₙ(args)` on homogeneous slots.
    pub fn apply(&self, n: usize, args: &[&Slot]) -> PhiElem {
        debug_assert_eq!(args.len(), n);
        match n {
            2 => self.algebra().m2_phi(&args[0].clone().into_phi(), &args[1].clone().into_phi()),
            3 => self.m3_component(args),
            _ if Self::vanishes_identically(n) => PhiElem::default(),
            _ => self.reconstruct(n, args),
        }
    }

    /// `mₙ` on a mixed tuple for even `n ≥ 4`.
    pub fn mn(&self, n: usize, args: &MixedTuple) -> Result<PhiElem> {
        if n < 4 || n % 2 == 1 {
            return Err(Error::InvalidArgument(format!("mn needs even n ≥ 4, got {n}")));
        }
        if args.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: args.len() });
        }
        let refs: Vec<&Slot> = args.slots.iter().collect();
        Ok(self.reconstruct(n, &refs))
    }

    /// The maps `b_j̄` of the finiteness condition, with `j̄` supported on positions `1` and `ℓ+1`.
    pub fn b_bar(&self, n: usize, ell: usize, a: &AlgElem, b: &AlgElem) -> Result<TensorElem> {
        if n < 3 || ell > n - 2 {
            return Err(Error::InvalidArgument(format!("b_bar needs n ≥ 3 and ℓ ≤ n-2, got ({n}, {ell})")));
        }
        let alg = self.algebra();
        let one = alg.unit();
        let order = n - 1;
        if ell == 0 || Self::vanishes_identically(n) {
            return Ok(TensorElem::zero(order));
        }
        if n == 3 {
            return Ok(self.db.eval(a, b).scale(&-Rational::one()));
        }
        let ones = |k: usize| vec![one; k];
        let word = |parts: Vec<Vec<&AlgElem>>| {
            let flat: Vec<&AlgElem> = parts.into_iter().flatten().collect();
            TensorElem::product(&flat)
        };
        let ab = alg.mul_raw(a, b);
        let ba = alg.mul_raw(b, a);
        let (c, t) = if ell == 1 {
            let t = word(vec![vec![a, b], ones(n - 3)])
                .sub(&word(vec![vec![&ba], ones(n - 2)]))
                .add(&word(vec![vec![b], ones(n - 3), vec![a]]))
                .sub(&word(vec![vec![one, b], ones(n - 4), vec![a]]));
            (self.coeffs.get(1, n as i64 - 2)?, t)
        } else if ell == n - 2 {
            let t = word(vec![vec![a], ones(n - 3), vec![b]])
                .sub(&word(vec![vec![a], ones(n - 4), vec![b, one]]))
                .add(&word(vec![ones(n - 3), vec![b, a]]))
                .sub(&word(vec![ones(n - 2), vec![&ab]]));
            (self.coeffs.get(1, n as i64 - 2)?, t)
        } else {
            let pair = |pre: Vec<&AlgElem>, post: Vec<&AlgElem>| {
                word(vec![pre.clone(), vec![one, b], post.clone()]).sub(&word(vec![pre, vec![b, one], post]))
            };
            let mut pre1 = vec![a];
            pre1.extend(ones(ell - 2));
            let t1 = pair(pre1, ones(n - ell - 2));
            let mut post2 = ones(n - ell - 3);
            post2.push(a);
            let t2 = pair(ones(ell - 1), post2);
            (self.coeffs.get(ell as i64, (n - ell - 1) as i64)?, t1.sub(&t2))
        };
        Ok(t.scale(&c))
    }

    fn support_scan(&self, n: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
        let dim = self.dim();
        let mut out = Vec::new();
        for mask in 0..(1u32 << n) {
            let pattern: Vec<u8> = (0..n).map(|p| ((mask >> (n - 1 - p)) & 1) as u8).collect();
            let mut seen = [false, false];
            let total = dim.pow(n as u32);
            for code in 0..total {
                let slots: Vec<Slot> = (0..n)
                    .map(|p| {
                        let idx = (code / dim.pow((n - 1 - p) as u32)) % dim;
                        if pattern[p] == 0 {
                            Slot::Alg(AlgElem::basis(idx))
                        } else {
                            Slot::Dual(DualElem::basis(idx))
                        }
                    })
                    .collect();
                let refs: Vec<&Slot> = slots.iter().collect();
                let v = self.apply(n, &refs);
                seen[0] |= !v.alg.is_zero();
                seen[1] |= !v.dual.is_zero();
                if seen[0] && seen[1] {
                    break;
                }
            }
            let parities: Vec<u8> = (0..2u8).filter(|&p| seen[p as usize]).collect();
            if !parities.is_empty() {
                out.push((pattern, parities));
            }
        }
        out
    }

    /// `mₙ` vanishes on patterns with two adjacent algebra slots, and on patterns with
    /// `n-1` duals whose first or last slot is an algebra slot.
    pub fn is_acceptable(&self, n: usize) -> SupportReport {
        let supported = self.support_scan(n);
        let violations = supported
            .iter()
            .filter(|(p, _)| {
                let adjacent = p.windows(2).any(|w| w == [0, 0]);
                let duals = p.iter().filter(|&&x| x == 1).count();
                adjacent || (n >= 2 && duals == n - 1 && p[0] * p[n - 1] == 0)
            })
            .map(|(p, _)| p.clone())
            .collect::<Vec<_>>();
        SupportReport { n, holds: violations.is_empty(), patterns_checked: 1 << n, supported, violations }
    }

    /// For odd `n`: `mₙ` vanishes off alternating patterns and maps an alternating
    /// pattern into the summand of its first slot.
    pub fn is_good(&self, n: usize) -> SupportReport {
        let supported = self.support_scan(n);
        let violations = supported
            .iter()
            .filter(|(p, out)| {
                let alternating = p.windows(2).all(|w| w[0] != w[1]);
                !alternating || out.iter().any(|&o| o != p[0])
            })
            .map(|(p, _)| p.clone())
            .collect::<Vec<_>>();
        let holds = n % 2 == 1 && violations.is_empty();
        SupportReport { n, holds, patterns_checked: 1 << n, supported, violations }
    }
}

/// Closed forms of `m₄` used as an independent oracle.
pub mod m4_closed {
    use super::*;

    fn scale(s: &Structure) -> Rational {
        s.tau() / Rational::from_integer(12.into())
    }

    /// `𝔤(m₄(a,tf,b,tg), th) = τ/12 (f(b)g(1)h(a) + f(a)g(b)h(1) − f(1)g(b)h(a) − f(ba)g(1)h(1))`.
    pub fn pair_a_f_b_g(s: &Structure, a: &AlgElem, f: &DualElem, b: &AlgElem, g: &DualElem, h: &DualElem) -> Rational {
        let alg = s.algebra();
        let one = alg.unit();
        let ba = alg.mul_raw(b, a);
        scale(s)
            * (f.eval(b) * g.eval(one) * h.eval(a) + f.eval(a) * g.eval(b) * h.eval(one)
                - f.eval(one) * g.eval(b) * h.eval(a)
                - f.eval(&ba) * g.eval(one) * h.eval(one))
    }

    /// `m₄(tf,b,tg,c) = τ/12 (f(b)g(c)·1 + f(1)g(b)·c − f(b)g(1)·c − f(1)g(cb)·1)`.
    pub fn f_b_g_c(s: &Structure, f: &DualElem, b: &AlgElem, g: &DualElem, c: &AlgElem) -> AlgElem {
        let alg = s.algebra();
        let one = alg.unit();
        let cb = alg.mul_raw(c, b);
        let k1 = f.eval(b) * g.eval(c) - f.eval(one) * g.eval(&cb);
        let k2 = f.eval(one) * g.eval(b) - f.eval(b) * g.eval(one);
        one.scale(&k1).add(&c.scale(&k2)).scale(&scale(s))
    }

    /// `m₄(a,tf,tg,c) = τ/12 (f(1)g(c)·a + f(a)g(1)·c − f(a)g(c)·1 − f(1)g(1)·ac)`.
    pub fn a_f_g_c(s: &Structure, a: &AlgElem, f: &DualElem, g: &DualElem, c: &AlgElem) -> AlgElem {
        let alg = s.algebra();
        let one = alg.unit();
        let ac = alg.mul_raw(a, c);
        a.scale(&(f.eval(one) * g.eval(c)))
            .add(&c.scale(&(f.eval(a) * g.eval(one))))
            .sub(&one.scale(&(f.eval(a) * g.eval(c))))
            .sub(&ac.scale(&(f.eval(one) * g.eval(one))))
            .scale(&scale(s))
    }
}
