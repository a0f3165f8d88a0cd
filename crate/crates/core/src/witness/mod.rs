//! Decision procedures and witness search for the ring properties studied
//! here: regularity, exchange, stable rank, quasi-invertibility, QB,
//! non-degeneracy and units for ideals.
//!
//! Every search runs in carrier-index order, so the witness returned is
//! always the smallest one.

mod exchange;
mod quasi;
mod rank;

pub use exchange::{exchange_data, exchange_witness, idempotents, is_exchange, is_regular_ring, partial_inverse, partial_inverse_in, ExchangeMode, ExchangeWitness};
pub(crate) use quasi::quasi_invertible_witness_with;
pub use quasi::{is_qb, is_quasi_invertible, qb_solution, quasi_invertible_witness, quasi_invertibles, Handedness, PerpTable, QbEquation, QiMode, QuasiInverseWitness};
pub use rank::{bsr, bsr_at, reduce_row, right_certificate, Bsr, UnimodularRow};
pub(crate) use rank::increment as increment_row;

use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing, Ideal};
use serde::Serialize;

/// Outcome of an exhaustive check, with the first counterexample on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict<C> {
    Holds,
    Fails(C),
}

impl<C> Verdict<C> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&C> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }
}

/// `xR = 0` or `Rx = 0` forces `x = 0`.
pub fn is_nondegenerate(ring: &FiniteRing) -> Result<Verdict<Elem>> {
    let n = ring.size();
    budget::charge(2 * n as u128 * n as u128)?;
    for x in 1..n {
        let left_dead = ring.elements().all(|r| ring.mul(x, r) == 0);
        let right_dead = ring.elements().all(|r| ring.mul(r, x) == 0);
        if left_dead || right_dead {
            return Ok(Verdict::Fails(x));
        }
    }
    Ok(Verdict::Holds)
}

/// `xRx = 0` forces `x = 0`.
pub fn is_semiprime(ring: &FiniteRing) -> Result<Verdict<Elem>> {
    let n = ring.size();
    budget::charge(2 * n as u128 * n as u128)?;
    for x in 1..n {
        if ring.elements().all(|r| ring.mul(ring.mul(x, r), x) == 0) {
            return Ok(Verdict::Fails(x));
        }
    }
    Ok(Verdict::Holds)
}

/// Smallest `e` with `ex = xe = x` for every `x` in the ideal.
pub fn has_unit_in(ring: &FiniteRing, ideal: &Ideal) -> Result<Option<Elem>> {
    if !ideal.ring().same(ring) {
        return Err(Error::pre("has_unit_in", "ideal belongs to another ring"));
    }
    budget::charge(2 * ring.size() as u128 * ideal.len() as u128)?;
    Ok(ring.elements().find(|&e| ideal.members().iter().all(|&x| ring.mul(e, x) == x && ring.mul(x, e) == x)))
}

/// The two-sided annihilator `I^⊥`, checked to meet `I` only in zero.
pub fn annihilator(ring: &FiniteRing, ideal: &Ideal) -> Result<Ideal> {
    if !ideal.ring().same(ring) {
        return Err(Error::pre("annihilator", "ideal belongs to another ring"));
    }
    budget::charge(2 * ring.size() as u128 * ideal.len() as u128)?;
    let left: Vec<Elem> = ring.elements().filter(|&x| ideal.members().iter().all(|&i| ring.mul(x, i) == 0)).collect();
    let right: Vec<Elem> = ring.elements().filter(|&x| ideal.members().iter().all(|&i| ring.mul(i, x) == 0)).collect();
    let meets = left.iter().any(|&x| x != 0 && ideal.contains(x));
    if left != right || meets {
        return Err(Error::NotSemiprime { ring: ring.name().to_string(), left, right });
    }
    Ideal::new(ring, left)
}
