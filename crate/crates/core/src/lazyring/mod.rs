//! Countable rings described by finite data: finitely supported functions
//! `ℕ → R₀` and finite matrices over a finite unital base `R₀`.
//!
//! Both families share one sparse representation. A function `f` is stored
//! as the diagonal matrix with entries `f(i)` at `(i, i)`, so pointwise
//! multiplication is the matrix product. Statements about infinite objects
//! are checked on explicit probes inside a declared support window.

mod limit;
mod oracle;
mod sigma;
mod tietze;

pub use limit::{constant_ideal_analysis, multiplier_as_limit, ConstantDecision, ConstantIdealReport, LimitMaps, LimitString};
pub use oracle::{extend_proper_lazy, strict_continuity, strict_probe, LazyMorphism, MorphismKind, MultiplierOracle, ProperExtension, Stabilization, StrictContinuity};
pub use sigma::{even_odd_extension, invlimsigma_probe, sigma_unit_of_extension, InvLimShape, InvLimVerdict, SigmaExtension, SigmaUnit};
pub use tietze::{tietze_lift, TietzeLift};

use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{make_product, Elem, FiniteRing, TABLE_CAP};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Finitely supported functions `ℕ → R₀`, pointwise operations.
    FinSupport,
    /// `M_∞(R₀)`: finitely supported `ℕ × ℕ` matrices.
    FinMatrix,
}

#[derive(Clone, Debug)]
pub struct LazyRing {
    family: Family,
    base: FiniteRing,
}

/// A finitely supported element; only nonzero entries are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LazyElem {
    entries: BTreeMap<(usize, usize), Elem>,
}

impl LazyElem {
    pub fn zero() -> Self {
        LazyElem::default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries `(row, column, value)` in order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Elem)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Smallest `n` with the support inside `[0, n) × [0, n)`.
    pub fn window(&self) -> usize {
        self.entries.keys().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0)
    }

    /// Rows (or, for functions, points) carrying a nonzero entry.
    pub fn support(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self.entries.keys().flat_map(|&(i, j)| [i, j]).collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }

    fn row(&self, k: usize) -> impl Iterator<Item = (usize, Elem)> + '_ {
        self.entries.range((k, 0)..(k + 1, 0)).map(|(&(_, j), &v)| (j, v))
    }
}

impl fmt::Display for LazyElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let diagonal = self.entries.keys().all(|&(i, j)| i == j);
        let parts: Vec<String> = self
            .entries()
            .map(|(i, j, v)| if diagonal { format!("{i}:{v}") } else { format!("({i},{j}):{v}") })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl LazyRing {
    fn new(family: Family, base: &FiniteRing) -> Result<Self> {
        if !base.is_unital() {
            return Err(Error::NotUnital(base.name().to_string()));
        }
        Ok(LazyRing { family, base: base.clone() })
    }

    pub fn finsupport(base: &FiniteRing) -> Result<Self> {
        Self::new(Family::FinSupport, base)
    }

    pub fn finmatrix(base: &FiniteRing) -> Result<Self> {
        Self::new(Family::FinMatrix, base)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn base(&self) -> &FiniteRing {
        &self.base
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::FinSupport => format!("finsupport({})", self.base.name()),
            Family::FinMatrix => format!("finmatrix({})", self.base.name()),
        }
    }

    pub fn same(&self, other: &LazyRing) -> bool {
        self.family == other.family && self.base.same(&other.base)
    }

    /// Build an element from `(row, column, value)` triples; repeated
    /// positions are added.
    pub fn element(&self, entries: impl IntoIterator<Item = (usize, usize, Elem)>) -> Result<LazyElem> {
        let mut out = LazyElem::zero();
        for (i, j, v) in entries {
            if v >= self.base.size() {
                return Err(Error::pre("LazyRing::element", format!("{v} is not an element of {}", self.base.name())));
            }
            if self.family == Family::FinSupport && i != j {
                return Err(Error::pre("LazyRing::element", format!("({i}, {j}) is off the diagonal of a function ring")));
            }
            self.accumulate(&mut out, (i, j), v);
        }
        Ok(out)
    }

    /// The function `k ↦ values[k]` on `[0, values.len())`.
    pub fn function(&self, values: &[Elem]) -> Result<LazyElem> {
        self.element(values.iter().enumerate().map(|(k, &v)| (k, k, v)))
    }

    /// `r·δ_i`, or the diagonal matrix unit `r·E_ii`.
    pub fn point(&self, i: usize, r: Elem) -> LazyElem {
        self.element([(i, i, r)]).expect("diagonal entry")
    }

    /// `δ_i`, or `E_ii`.
    pub fn delta(&self, i: usize) -> LazyElem {
        self.point(i, self.base.unit().expect("unital base"))
    }

    /// `r·E_ij`; off-diagonal positions need the matrix family.
    pub fn matrix_unit(&self, i: usize, j: usize, r: Elem) -> Result<LazyElem> {
        self.element([(i, j, r)])
    }

    /// Indicator of `[0, n)`, or the identity block of size `n`.
    pub fn block(&self, n: usize) -> LazyElem {
        let one = self.base.unit().expect("unital base");
        self.element((0..n).map(|k| (k, k, one))).expect("diagonal entries")
    }

    /// Indicator of the listed points.
    pub fn indicator(&self, points: impl IntoIterator<Item = usize>) -> LazyElem {
        let one = self.base.unit().expect("unital base");
        let mut out = LazyElem::zero();
        for k in points {
            out.entries.insert((k, k), one);
        }
        out
    }

    fn accumulate(&self, out: &mut LazyElem, at: (usize, usize), v: Elem) {
        let cur = out.entries.get(&at).copied().unwrap_or(0);
        let next = self.base.add(cur, v);
        if next == 0 {
            out.entries.remove(&at);
        } else {
            out.entries.insert(at, next);
        }
    }

    pub fn add(&self, a: &LazyElem, b: &LazyElem) -> LazyElem {
        let mut out = a.clone();
        for (&at, &v) in &b.entries {
            self.accumulate(&mut out, at, v);
        }
        out
    }

    pub fn neg(&self, a: &LazyElem) -> LazyElem {
        LazyElem { entries: a.entries.iter().map(|(&at, &v)| (at, self.base.neg(v))).collect() }
    }

    pub fn sub(&self, a: &LazyElem, b: &LazyElem) -> LazyElem {
        self.add(a, &self.neg(b))
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a LazyElem>) -> LazyElem {
        items.into_iter().fold(LazyElem::zero(), |acc, x| self.add(&acc, x))
    }

    pub fn mul(&self, a: &LazyElem, b: &LazyElem) -> LazyElem {
        let mut out = LazyElem::zero();
        for (&(i, k), &x) in &a.entries {
            for (j, y) in b.row(k) {
                let p = self.base.mul(x, y);
                if p != 0 {
                    self.accumulate(&mut out, (i, j), p);
                }
            }
        }
        out
    }

    /// `abc`.
    pub fn mul3(&self, a: &LazyElem, b: &LazyElem, c: &LazyElem) -> LazyElem {
        self.mul(&self.mul(a, b), c)
    }

    /// The entry of `x` at `(i, i)`: the value `x(i)` of a function.
    pub fn value(&self, x: &LazyElem, i: usize) -> Elem {
        x.get(i, i)
    }

    /// All elements supported in `[0, w)` (functions) or a spread of
    /// matrix units and blocks (matrices), used as default probes.
    pub fn probes(&self, w: usize, limit: usize) -> Vec<LazyElem> {
        let mut out = vec![LazyElem::zero()];
        let nonzero: Vec<Elem> = self.base.elements().skip(1).collect();
        for k in 0..w {
            for &r in &nonzero {
                out.push(self.point(k, r));
            }
        }
        if self.family == Family::FinMatrix {
            for i in 0..w {
                for j in 0..w {
                    if i != j {
                        out.push(self.matrix_unit(i, j, self.base.unit().expect("unital")).expect("matrix family"));
                    }
                }
            }
        }
        for n in 1..=w {
            out.push(self.block(n));
        }
        // Mixed elements from deterministic bit patterns.
        let mut state = 0x9e37_79b9_u64;
        while out.len() < limit {
            let mut entries = Vec::new();
            for i in 0..w {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let v = (state >> 33) as usize % self.base.size();
                let j = if self.family == Family::FinMatrix { (state >> 45) as usize % w } else { i };
                entries.push((i, j, v));
            }
            out.push(self.element(entries).expect("valid entries"));
        }
        out.truncate(limit.max(1));
        out
    }
}

/// `e_n`: the indicator of `[0, n)`, or the identity block of size `n`.
#[derive(Clone, Debug)]
pub struct ApproxUnit {
    ring: LazyRing,
}

pub fn approx_unit(ring: &LazyRing) -> ApproxUnit {
    ApproxUnit { ring: ring.clone() }
}

impl ApproxUnit {
    pub fn ring(&self) -> &LazyRing {
        &self.ring
    }

    pub fn e(&self, n: usize) -> LazyElem {
        self.ring.block(n)
    }

    /// Least `n` with `e_n x = x e_n = x`.
    pub fn index_for(&self, x: &LazyElem) -> usize {
        x.window()
    }

    /// `e_{n+1}e_n = e_ne_{n+1} = e_n` for `n < upto`.
    pub fn verify_nesting(&self, upto: usize) -> Result<()> {
        let r = &self.ring;
        for n in 0..upto {
            let (a, b) = (self.e(n), self.e(n + 1));
            if r.mul(&b, &a) != a || r.mul(&a, &b) != a {
                return Err(Error::Verification(format!("nesting fails at n = {n}")));
            }
        }
        Ok(())
    }

    /// `e_n x = x e_n = x` holds from [`index_for`](Self::index_for) on and fails just before it.
    pub fn verify_index(&self, x: &LazyElem) -> Result<()> {
        let r = &self.ring;
        let n = self.index_for(x);
        let fixes = |m: usize| r.mul(&self.e(m), x) == *x && r.mul(x, &self.e(m)) == *x;
        if !fixes(n) || (n > 0 && fixes(n - 1)) {
            return Err(Error::Verification(format!("index {n} is not the least index fixing {x}")));
        }
        Ok(())
    }
}

/// `I_n` (support in `[0, n)`) and `J_n` (support disjoint from `[0, n)`)
/// in a function ring, with `R_n = R/J_n`.
#[derive(Clone, Debug)]
pub struct IdealChain {
    ring: LazyRing,
}

impl IdealChain {
    pub fn new(ring: &LazyRing) -> Result<Self> {
        if ring.family() != Family::FinSupport {
            return Err(Error::Unsupported(format!("{} has no ideal chain with unital quotients", ring.name())));
        }
        Ok(IdealChain { ring: ring.clone() })
    }

    pub fn ring(&self) -> &LazyRing {
        &self.ring
    }

    pub fn in_i(&self, n: usize, x: &LazyElem) -> bool {
        x.window() <= n
    }

    pub fn in_j(&self, n: usize, x: &LazyElem) -> bool {
        x.support().iter().all(|&k| k >= n)
    }

    /// The representative of `x + J_n` supported in `[0, n)`.
    pub fn project(&self, n: usize, x: &LazyElem) -> LazyElem {
        self.ring.mul(x, &self.ring.block(n))
    }

    /// `R/J_n ≅ R₀ⁿ` as an explicit finite ring; coordinate `k` of the
    /// product is the value at `k`.
    pub fn stage_ring(&self, n: usize) -> Result<FiniteRing> {
        let base = self.ring.base();
        let size = budget::pow(base.size(), n);
        if size > TABLE_CAP as u128 {
            return Err(Error::SizeBound { what: format!("stage {n} of {}", self.ring.name()), size, cap: TABLE_CAP as u128 });
        }
        let mut out = crate::finring::make_cyclic(1)?;
        for _ in 0..n {
            out = if out.size() == 1 { base.clone() } else { make_product(&out, base)? };
        }
        Ok(out.renamed(format!("{}^{n}", base.name())))
    }

    /// Index of `x + J_n` in [`stage_ring`](Self::stage_ring).
    pub fn stage_index(&self, n: usize, x: &LazyElem) -> Elem {
        let b = self.ring.base().size();
        (0..n).fold(0, |acc, k| acc * b + self.ring.value(x, k))
    }

    /// The chain invariants on probes: `I_n ⊆ I_{n+1}`, `J_{n+1} ⊆ J_n`,
    /// `I_n ∩ J_n = 0`, the ideal property, and `e_n` a unit modulo `J_n`.
    pub fn verify(&self, probes: &[LazyElem], upto: usize) -> Result<()> {
        let r = &self.ring;
        for n in 0..upto {
            let e = r.block(n);
            for x in probes {
                if self.in_i(n, x) && !self.in_i(n + 1, x) || self.in_j(n + 1, x) && !self.in_j(n, x) {
                    return Err(Error::Verification(format!("chain is not monotone at {n} on {x}")));
                }
                if self.in_i(n, x) && self.in_j(n, x) && !x.is_zero() {
                    return Err(Error::Verification(format!("{x} lies in I_{n} ∩ J_{n}")));
                }
                let d = r.sub(&r.mul(&e, x), x);
                if !self.in_j(n, &d) || !self.in_j(n, &r.sub(&r.mul(x, &e), x)) {
                    return Err(Error::Verification(format!("e_{n} is not a unit modulo J_{n} at {x}")));
                }
                for y in probes {
                    let p = r.mul(x, y);
                    if self.in_i(n, x) && !self.in_i(n, &p) || self.in_j(n, y) && !self.in_j(n, &p) {
                        return Err(Error::Verification(format!("I_{n} or J_{n} is not an ideal at ({x}, {y})")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_cyclic;

    fn f2() -> LazyRing {
        LazyRing::finsupport(&make_cyclic(2).unwrap()).unwrap()
    }

    #[test]
    fn approximate_unit_basics() {
        let r = f2();
        let u = approx_unit(&r);
        assert_eq!(r.mul(&u.e(2), &r.delta(1)), r.delta(1));
        assert_eq!(r.mul(&u.e(3), &u.e(2)), u.e(2));
        assert_eq!(u.index_for(&r.delta(5)), 6);
        u.verify_nesting(40).unwrap();
        u.verify_index(&r.delta(5)).unwrap();
    }

    #[test]
    fn matrices_multiply() {
        let r = LazyRing::finmatrix(&make_cyclic(3).unwrap()).unwrap();
        let a = r.matrix_unit(0, 1, 1).unwrap();
        let b = r.matrix_unit(1, 4, 2).unwrap();
        assert_eq!(r.mul(&a, &b), r.matrix_unit(0, 4, 2).unwrap());
        assert!(r.mul(&b, &a).is_zero());
        assert_eq!(r.mul(&r.block(5), &b), b);
        assert!(f2().matrix_unit(0, 1, 1).is_err());
    }

    #[test]
    fn stage_rings() {
        let c = IdealChain::new(&f2()).unwrap();
        let s = c.stage_ring(3).unwrap();
        assert_eq!(s.size(), 8);
        let x = f2().function(&[1, 0, 1, 1]).unwrap();
        let y = f2().function(&[1, 1, 0]).unwrap();
        let p = f2().mul(&x, &y);
        assert_eq!(c.stage_index(3, &p), s.mul(c.stage_index(3, &x), c.stage_index(3, &y)));
        assert_eq!(c.stage_index(3, &f2().add(&x, &y)), s.add(c.stage_index(3, &x), c.stage_index(3, &y)));
        c.verify(&f2().probes(5, 60), 6).unwrap();
    }
}
