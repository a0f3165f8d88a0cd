use super::Verdict;
use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing};
use serde::Serialize;

/// Every `e` with `e² = e`, ascending.
pub fn idempotents(ring: &FiniteRing) -> Vec<Elem> {
    ring.idempotent_list()
}

/// Smallest `y` with `xyx = x`.
pub fn partial_inverse(ring: &FiniteRing, x: Elem) -> Option<Elem> {
    ring.elements().find(|&y| ring.mul(ring.mul(x, y), x) == x)
}

/// Smallest `y` among `candidates` with `xyx = x`.
pub fn partial_inverse_in(ring: &FiniteRing, x: Elem, candidates: &[Elem]) -> Option<Elem> {
    candidates.iter().copied().find(|&y| ring.mul(ring.mul(x, y), x) == x)
}

/// Every element has a partial inverse; the first element without one otherwise.
pub fn is_regular_ring(ring: &FiniteRing) -> Result<Verdict<Elem>> {
    budget::charge(ring.size() as u128 * ring.size() as u128 * 2)?;
    Ok(match ring.elements().find(|&x| partial_inverse(ring, x).is_none()) {
        Some(x) => Verdict::Fails(x),
        None => Verdict::Holds,
    })
}

/// Which formulation of the exchange condition to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExchangeMode {
    /// `1 − e = (1 − x)(1 − y)`; needs a unit.
    Unital,
    /// `e = x + y − xy`, meaningful without a unit.
    NonUnital,
}

/// An idempotent `e = x·r` together with `y` satisfying the chosen exchange identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeWitness {
    pub x: Elem,
    pub e: Elem,
    pub r: Elem,
    pub y: Elem,
}

impl ExchangeWitness {
    /// Re-check every defining identity; `Err` names the first that fails.
    pub fn verify(&self, ring: &FiniteRing, mode: ExchangeMode) -> Result<()> {
        let Self { x, e, r, y } = *self;
        let fail = |what: &str| Err(Error::Verification(format!("exchange witness for {x} in {}: {what}", ring.name())));
        if ring.mul(e, e) != e {
            return fail("e is not idempotent");
        }
        if ring.mul(x, r) != e {
            return fail("e is not x·r");
        }
        let expected = x_plus_y_minus_xy(ring, x, y);
        if mode == ExchangeMode::Unital {
            let one = ring.one()?;
            if ring.sub(one, e) != ring.mul(ring.sub(one, x), ring.sub(one, y)) {
                return fail("1 - e differs from (1 - x)(1 - y)");
            }
        }
        if expected != e {
            return fail("e differs from x + y - xy");
        }
        Ok(())
    }
}

fn x_plus_y_minus_xy(ring: &FiniteRing, x: Elem, y: Elem) -> Elem {
    ring.sub(ring.add(x, y), ring.mul(x, y))
}

/// Smallest `(e, y)` pair witnessing the exchange condition for `x`.
///
/// The two modes agree on unital rings, since `1 − e = (1 − x)(1 − y)`
/// expands to `e = x + y − xy`.
pub fn exchange_witness(ring: &FiniteRing, x: Elem, mode: ExchangeMode) -> Result<Option<ExchangeWitness>> {
    if mode == ExchangeMode::Unital && !ring.is_unital() {
        return Err(Error::pre("exchange_witness", format!("unital mode requested but `{}` has no unit", ring.name())));
    }
    let n = ring.size();
    budget::charge(3 * n as u128 * n as u128)?;
    let mut factor = vec![usize::MAX; n];
    for r in ring.elements().rev() {
        factor[ring.mul(x, r)] = r;
    }
    for e in ring.elements() {
        if factor[e] == usize::MAX || ring.mul(e, e) != e {
            continue;
        }
        if let Some(y) = ring.elements().find(|&y| x_plus_y_minus_xy(ring, x, y) == e) {
            let w = ExchangeWitness { x, e, r: factor[e], y };
            w.verify(ring, mode)?;
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Exchange data `(y, z)` for `x` in the form carried up a surjection:
/// `e = xy`, `y = ye`, `e = x + z − xz`, `e = ze`.
///
/// From the smallest witness `e = xr`, `e = x + y' − xy'` this takes
/// `y = re` and `z = y' + e − y'e`.
pub fn exchange_data(ring: &FiniteRing, x: Elem) -> Result<Option<(Elem, Elem)>> {
    let Some(w) = exchange_witness(ring, x, ExchangeMode::NonUnital)? else { return Ok(None) };
    let (e, r, yw) = (ring.el(w.e), ring.el(w.r), ring.el(w.y));
    Ok(Some(((r * e).index(), (yw + e - yw * e).index())))
}

/// Exchange condition for every element; first failing element otherwise.
pub fn is_exchange(ring: &FiniteRing, mode: ExchangeMode) -> Result<Verdict<Elem>> {
    for x in ring.elements() {
        if exchange_witness(ring, x, mode)?.is_none() {
            return Ok(Verdict::Fails(x));
        }
    }
    Ok(Verdict::Holds)
}
