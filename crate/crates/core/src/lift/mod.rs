//! Lifting certificates along a surjection `π: R → S`.
//!
//! Each operation follows an explicit chain of formulas. Where that chain
//! calls for an element whose existence is only known abstractly (an
//! idempotent preimage, a quasi-invertible preimage, and so on), a bounded
//! search over the relevant set takes its place; such steps are reported as
//! search-realized. Every result is re-verified before it is returned.

mod exchange;
mod qb;
mod regular;
mod unimodular;

pub use exchange::{ara_decomposition, exchange_relations, lift_exchange, lift_idempotent, AraDecomposition, DecompositionRoute, ExchangeLift};
pub use qb::{lift_quasi_invertible, qb_lift_step, qblem_witness, QbLift, QbRoute, QbSetup};
pub use regular::{lift_regular, RegularLift};
pub use unimodular::{jarl_completion, lift_unimodular, JarlCompletion, UnimodularLift};

use crate::error::{Error, Result};
use crate::finring::{unitalize_with_exponent, Elem, FiniteRing, Ideal, RingMorphism};
use crate::witness::{bsr_at, PerpTable};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// A surjection together with its kernel and fibres.
#[derive(Clone, Debug)]
pub struct LiftContext {
    pi: RingMorphism,
    kernel: Ideal,
    fibres: Arc<Vec<Vec<Elem>>>,
    cache: Arc<Cache>,
}

#[derive(Debug, Default)]
struct Cache {
    work: OnceLock<std::result::Result<(LiftContext, bool), Error>>,
    kernel_regular: OnceLock<bool>,
    kernel_exchange: OnceLock<bool>,
    kernel_sr1: OnceLock<bool>,
    source_perp: OnceLock<Arc<PerpTable>>,
    target_perp: OnceLock<Arc<PerpTable>>,
    bsr: Mutex<HashMap<usize, bool>>,
}

impl LiftContext {
    pub fn new(pi: RingMorphism) -> Result<Self> {
        if !pi.is_surjective() {
            return Err(Error::pre("LiftContext", format!("{} -> {} is not surjective", pi.source().name(), pi.target().name())));
        }
        let kernel = pi.kernel();
        let fibres = Arc::new(pi.fibres());
        Ok(LiftContext { pi, kernel, fibres, cache: Arc::default() })
    }

    pub fn identity(ring: &FiniteRing) -> Self {
        Self::new(RingMorphism::identity(ring)).expect("identity is surjective")
    }

    pub fn pi(&self) -> &RingMorphism {
        &self.pi
    }

    pub fn source(&self) -> &FiniteRing {
        self.pi.source()
    }

    pub fn target(&self) -> &FiniteRing {
        self.pi.target()
    }

    pub fn kernel(&self) -> &Ideal {
        &self.kernel
    }

    /// Preimages of `t`, ascending.
    pub fn fibre(&self, t: Elem) -> &[Elem] {
        &self.fibres[t]
    }

    /// Smallest preimage.
    pub fn lift(&self, t: Elem) -> Elem {
        self.fibres[t][0]
    }

    pub fn lift_row(&self, row: &[Elem]) -> Vec<Elem> {
        row.iter().map(|&t| self.lift(t)).collect()
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.pi.apply(x)
    }

    /// A unital surjection to compute in: `π` itself when the source is
    /// unital, otherwise `π⁺: R⁺ → S⁺` over the scalars `ℤ/e_R`.
    ///
    /// The flag tells whether unitalization happened. In `R⁺` the elements of
    /// `R` keep their indices, and so do those of `S` in `S⁺`.
    pub fn work(&self) -> Result<(LiftContext, bool)> {
        self.cache
            .work
            .get_or_init(|| {
                if self.source().is_unital() {
                    return Ok((self.clone(), false));
                }
                let e = self.source().exponent();
                let rp = unitalize_with_exponent(self.source(), e)?;
                let sp = unitalize_with_exponent(self.target(), e)?;
                let (nr, ns) = (self.source().size(), self.target().size());
                let map: Vec<Elem> = rp.elements().map(|i| (i / nr) * ns + self.apply(i % nr)).collect();
                let pi = RingMorphism::new(&rp, &sp, map, true)?;
                Ok((LiftContext::new(pi)?, true))
            })
            .clone()
    }

    /// Every kernel element has a partial inverse inside the kernel.
    pub fn kernel_is_regular(&self) -> bool {
        *self.cache.kernel_regular.get_or_init(|| {
            let r = self.source();
            let m = self.kernel.members();
            m.iter().all(|&u| m.iter().any(|&v| r.mul(r.mul(u, v), u) == u))
        })
    }

    /// The kernel satisfies the exchange condition as a ring in its own right.
    pub fn kernel_is_exchange(&self) -> bool {
        *self.cache.kernel_exchange.get_or_init(|| ideal_is_exchange(&self.kernel))
    }

    /// The kernel has stable rank one, tested inside the (unital) source.
    pub fn kernel_has_stable_rank_one(&self) -> bool {
        *self.cache.kernel_sr1.get_or_init(|| {
            let r = self.source();
            let Some(one) = r.unit() else { return false };
            let m = self.kernel.members();
            let units: Vec<bool> = r.elements().map(|u| is_unit(r, u)).collect();
            m.iter().all(|&x| {
                m.iter().all(|&a| {
                    let b = r.sub(one, r.mul(r.sub(one, x), r.sub(one, a)));
                    m.iter().any(|&y| units[r.add(r.sub(one, a), r.mul(y, b))])
                })
            })
        })
    }

    pub(crate) fn source_perp(&self) -> Result<Arc<PerpTable>> {
        if let Some(t) = self.cache.source_perp.get() {
            return Ok(t.clone());
        }
        let t = Arc::new(PerpTable::new(self.source())?);
        Ok(self.cache.source_perp.get_or_init(|| t).clone())
    }

    pub(crate) fn target_perp(&self) -> Result<Arc<PerpTable>> {
        if let Some(t) = self.cache.target_perp.get() {
            return Ok(t.clone());
        }
        let t = Arc::new(PerpTable::new(self.target())?);
        Ok(self.cache.target_perp.get_or_init(|| t).clone())
    }

    /// `bsr_at(source, d)`, memoised.
    pub(crate) fn source_bsr_at(&self, d: usize) -> Result<bool> {
        if let Some(&b) = self.cache.bsr.lock().expect("cache lock").get(&d) {
            return Ok(b);
        }
        let b = bsr_at(self.source(), d)?.holds();
        self.cache.bsr.lock().expect("cache lock").insert(d, b);
        Ok(b)
    }
}

pub(crate) fn is_unit(r: &FiniteRing, u: Elem) -> bool {
    let Some(one) = r.unit() else { return false };
    r.elements().any(|v| r.mul(u, v) == one && r.mul(v, u) == one)
}

pub(crate) fn inverse(r: &FiniteRing, u: Elem) -> Option<Elem> {
    let one = r.unit()?;
    r.elements().find(|&v| r.mul(u, v) == one && r.mul(v, u) == one)
}

/// Exchange condition on an ideal viewed as a ring: for each `x ∈ I` an
/// idempotent `e = xr` with `r ∈ I` and `e = x + y − xy` for some `y ∈ I`.
pub(crate) fn ideal_is_exchange(ideal: &Ideal) -> bool {
    let r = ideal.ring();
    let m = ideal.members();
    m.iter().all(|&x| {
        m.iter().map(|&c| r.mul(x, c)).filter(|&e| r.mul(e, e) == e).any(|e| m.iter().any(|&y| r.sub(r.add(x, y), r.mul(x, y)) == e))
    })
}

/// Named values computed along a lifting chain, in work-ring indices.
pub type Trace = Vec<(String, Elem)>;
