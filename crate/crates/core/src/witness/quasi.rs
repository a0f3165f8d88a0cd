use super::Verdict;
use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing};
use serde::Serialize;

/// Precomputed orthogonality `α ⊥ β`, i.e. `αRβ = 0 = βRα`.
#[derive(Clone, Debug)]
pub struct PerpTable {
    n: usize,
    bits: Vec<bool>,
}

impl PerpTable {
    pub fn new(ring: &FiniteRing) -> Result<Self> {
        let n = ring.size();
        budget::charge(2 * (n as u128).pow(3))?;
        let mut bits = vec![false; n * n];
        // αRβ for every α, β: row of products α·r first.
        let left: Vec<Vec<Elem>> = ring.elements().map(|a| ring.elements().map(|r| ring.mul(a, r)).collect()).collect();
        let one_sided = |a: usize, b: usize| left[a].iter().all(|&ar| ring.mul(ar, b) == 0);
        for a in 0..n {
            for b in a..n {
                let p = one_sided(a, b) && one_sided(b, a);
                bits[a * n + b] = p;
                bits[b * n + a] = p;
            }
        }
        Ok(PerpTable { n, bits })
    }

    #[inline]
    pub fn perp(&self, a: Elem, b: Elem) -> bool {
        self.bits[a * self.n + b]
    }
}

/// `(v, w)` with `(1 − vu) ⊥ (1 − uw)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiInverseWitness {
    pub u: Elem,
    pub v: Elem,
    pub w: Elem,
}

impl QuasiInverseWitness {
    pub fn verify(&self, ring: &FiniteRing) -> Result<()> {
        let one = ring.one()?;
        let p = ring.sub(one, ring.mul(self.v, self.u));
        let q = ring.sub(one, ring.mul(self.u, self.w));
        for r in ring.elements() {
            if ring.mul(ring.mul(p, r), q) != 0 || ring.mul(ring.mul(q, r), p) != 0 {
                return Err(Error::Verification(format!("quasi-inverse pair for {} fails at r = {r}", self.u)));
            }
        }
        Ok(())
    }

    /// `u = uvu` and `v = vuv`, as produced by the symmetric search.
    pub fn is_symmetric(&self, ring: &FiniteRing) -> bool {
        let (u, v) = (self.u, self.v);
        self.v == self.w && ring.mul(ring.mul(u, v), u) == u && ring.mul(ring.mul(v, u), v) == v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QiMode {
    /// Smallest `(v, w)` pair.
    General,
    /// Smallest `v = w` that is also a partial inverse of `u` and vice versa.
    Symmetric,
}

/// Smallest quasi-inverse data for `u` in the chosen mode.
pub fn quasi_invertible_witness(ring: &FiniteRing, u: Elem, mode: QiMode) -> Result<Option<QuasiInverseWitness>> {
    let table = PerpTable::new(ring)?;
    quasi_invertible_witness_with(ring, &table, u, mode)
}

pub(crate) fn quasi_invertible_witness_with(ring: &FiniteRing, table: &PerpTable, u: Elem, mode: QiMode) -> Result<Option<QuasiInverseWitness>> {
    let one = ring.one()?;
    let found = match mode {
        QiMode::General => ring
            .elements()
            .flat_map(|v| ring.elements().map(move |w| (v, w)))
            .find(|&(v, w)| table.perp(ring.sub(one, ring.mul(v, u)), ring.sub(one, ring.mul(u, w)))),
        QiMode::Symmetric => ring
            .elements()
            .find(|&v| {
                ring.mul(ring.mul(u, v), u) == u
                    && ring.mul(ring.mul(v, u), v) == v
                    && table.perp(ring.sub(one, ring.mul(v, u)), ring.sub(one, ring.mul(u, v)))
            })
            .map(|v| (v, v)),
    };
    let Some((v, w)) = found else { return Ok(None) };
    let wit = QuasiInverseWitness { u, v, w };
    wit.verify(ring)?;
    Ok(Some(wit))
}

pub fn is_quasi_invertible(ring: &FiniteRing, table: &PerpTable, u: Elem) -> bool {
    let Some(one) = ring.unit() else { return false };
    let left: Vec<Elem> = ring.elements().map(|v| ring.sub(one, ring.mul(v, u))).collect();
    let right: Vec<Elem> = ring.elements().map(|w| ring.sub(one, ring.mul(u, w))).collect();
    left.iter().any(|&p| right.iter().any(|&q| table.perp(p, q)))
}

/// All quasi-invertible elements, ascending.
pub fn quasi_invertibles(ring: &FiniteRing) -> Result<Vec<Elem>> {
    ring.one()?;
    let table = PerpTable::new(ring)?;
    budget::charge((ring.size() as u128).pow(3))?;
    Ok(ring.elements().filter(|&u| is_quasi_invertible(ring, &table, u)).collect())
}

/// Which side the Bass equation is written on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Handedness {
    /// `xa + b = 1` asks for `a + yb` quasi-invertible.
    Left,
    /// `ax + b = 1` asks for `a + by` quasi-invertible.
    Right,
}

/// One instance of the Bass equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QbEquation {
    pub a: Elem,
    pub x: Elem,
    pub b: Elem,
}

/// Smallest `y` correcting `a` into a quasi-invertible element.
pub fn qb_solution(ring: &FiniteRing, qi: &[bool], side: Handedness, eq: &QbEquation) -> Option<Elem> {
    ring.elements().find(|&y| {
        let c = match side {
            Handedness::Left => ring.add(eq.a, ring.mul(y, eq.b)),
            Handedness::Right => ring.add(eq.a, ring.mul(eq.b, y)),
        };
        qi[c]
    })
}

/// The QB property, equation by equation in `(a, x)` index order.
///
/// Only unital rings are accepted.
pub fn is_qb(ring: &FiniteRing, side: Handedness) -> Result<Verdict<QbEquation>> {
    let one = ring.one().map_err(|_| Error::Unsupported(format!("QB check needs a unital ring; `{}` has no unit", ring.name())))?;
    let table = PerpTable::new(ring)?;
    let n = ring.size();
    budget::charge((n as u128).pow(3) * 2)?;
    let qi: Vec<bool> = ring.elements().map(|u| is_quasi_invertible(ring, &table, u)).collect();
    for a in 0..n {
        for x in 0..n {
            let b = match side {
                Handedness::Left => ring.sub(one, ring.mul(x, a)),
                Handedness::Right => ring.sub(one, ring.mul(a, x)),
            };
            let eq = QbEquation { a, x, b };
            if qb_solution(ring, &qi, side, &eq).is_none() {
                return Ok(Verdict::Fails(eq));
            }
        }
    }
    Ok(Verdict::Holds)
}
