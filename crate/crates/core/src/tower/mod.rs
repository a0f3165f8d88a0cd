//! Finite towers `R₁ ← R₂ ← … ← R_N` of surjections and the stagewise
//! harnesses that build coherent witness strings one stage at a time.
//!
//! Stage 1 is the bottom. The limit of a finite tower is its top stage, and a
//! string is determined by its top coordinate.

mod harness;
mod pullback;
mod random;

pub use harness::{stagewise_bsr, stagewise_bsr_rows, stagewise_exchange, stagewise_qb, stagewise_regular, BsrEntry, ExchangeEntry, QbEntry, RegularEntry, RowString};
pub use pullback::{check_pullback_limit_commute, limit_extension, pullback, Extension, PullbackComparison, PullbackRing, PullbackSquares, StageExtensions};
pub use random::{random_tower, RandomTower};

use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing, RingMorphism};
use crate::lift::LiftContext;
use serde::Serialize;
use std::sync::{Arc, OnceLock};

#[derive(Clone, Debug)]
pub struct Tower {
    stages: Vec<FiniteRing>,
    /// `connectors[0]` is the identity of `R₁`; `connectors[n - 1]` maps `R_n → R_{n−1}`.
    connectors: Vec<RingMorphism>,
    contexts: Arc<OnceLock<Vec<LiftContext>>>,
}

/// True when the two rings have the same carrier and tables.
pub(crate) fn identical(a: &FiniteRing, b: &FiniteRing) -> Result<bool> {
    if a.same(b) {
        return Ok(true);
    }
    if a.size() != b.size() || a.unit() != b.unit() {
        return Ok(false);
    }
    let n = a.size();
    budget::charge(2 * n as u128 * n as u128)?;
    Ok(a.elements().all(|x| a.elements().all(|y| a.add(x, y) == b.add(x, y) && a.mul(x, y) == b.mul(x, y))))
}

impl Tower {
    /// `connectors[i]` must map `stages[i + 1]` onto `stages[i]`.
    pub fn new(stages: Vec<FiniteRing>, connectors: Vec<RingMorphism>) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::pre("Tower::new", "a tower needs at least one stage"));
        }
        if connectors.len() + 1 != stages.len() {
            return Err(Error::pre("Tower::new", format!("{} stages need {} connectors, got {}", stages.len(), stages.len() - 1, connectors.len())));
        }
        for (i, m) in connectors.iter().enumerate() {
            let n = i + 2;
            if !identical(m.source(), &stages[i + 1])? || !identical(m.target(), &stages[i])? {
                return Err(Error::pre("Tower::new", format!("connector {n} does not map stage {n} to stage {}", n - 1)));
            }
            if !m.is_surjective() {
                return Err(Error::pre("Tower::new", format!("connector {n} is not surjective")));
            }
        }
        let mut all = vec![RingMorphism::identity(&stages[0])];
        for (i, m) in connectors.into_iter().enumerate() {
            // Equal tables in a separate allocation: rebind to the stage rings.
            let m = if m.source().same(&stages[i + 1]) && m.target().same(&stages[i]) {
                m
            } else {
                RingMorphism::new(&stages[i + 1], &stages[i], m.map().to_vec(), m.is_unital())?
            };
            all.push(m);
        }
        Ok(Tower { stages, connectors: all, contexts: Arc::default() })
    }

    pub fn single(ring: &FiniteRing) -> Self {
        Tower::new(vec![ring.clone()], Vec::new()).expect("one stage is a tower")
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn stages(&self) -> &[FiniteRing] {
        &self.stages
    }

    /// Stage `n`, counted from 1.
    pub fn stage(&self, n: usize) -> &FiniteRing {
        &self.stages[n - 1]
    }

    pub fn top(&self) -> &FiniteRing {
        self.stages.last().expect("non-empty")
    }

    /// `π_n: R_n → R_{n−1}`, with `π₁` the identity of `R₁`.
    pub fn connector(&self, n: usize) -> &RingMorphism {
        &self.connectors[n - 1]
    }

    /// The genuine connectors `π₂, …, π_N`.
    pub fn connectors(&self) -> &[RingMorphism] {
        &self.connectors[1..]
    }

    /// `π_n` as a lifting context, for `n ≥ 2`.
    pub fn context(&self, n: usize) -> &LiftContext {
        let all = self.contexts.get_or_init(|| {
            self.connectors[1..].iter().map(|m| LiftContext::new(m.clone()).expect("connectors are surjective")).collect()
        });
        &all[n - 2]
    }

    /// Coordinate `n` of the string with top coordinate `top`.
    pub fn project(&self, top: Elem, n: usize) -> Elem {
        let mut x = top;
        for k in (n + 1..=self.depth()).rev() {
            x = self.connector(k).apply(x);
        }
        x
    }

    pub fn project_row(&self, top: &[Elem], n: usize) -> Vec<Elem> {
        top.iter().map(|&x| self.project(x, n)).collect()
    }

    /// Names of the stages, bottom first, as `[R₁ <- … <- R_N]`.
    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.stages.iter().map(|r| r.name()).collect();
        format!("[{}]", names.join(" <- "))
    }
}

/// One coordinate per stage, bottom first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CoherentString {
    pub coords: Vec<Elem>,
}

impl CoherentString {
    pub fn top(&self) -> Elem {
        *self.coords.last().expect("non-empty")
    }

    /// Coordinate at stage `n`, counted from 1.
    pub fn at(&self, n: usize) -> Elem {
        self.coords[n - 1]
    }
}

/// Push `top` down through the connectors.
pub fn string(tower: &Tower, top: Elem) -> CoherentString {
    let mut coords = vec![top; tower.depth()];
    for n in (1..tower.depth()).rev() {
        coords[n - 1] = tower.connector(n + 1).apply(coords[n]);
    }
    CoherentString { coords }
}

pub fn is_coherent(tower: &Tower, coords: &[Elem]) -> bool {
    coords.len() == tower.depth()
        && coords.iter().zip(tower.stages()).all(|(&x, r)| x < r.size())
        && (2..=tower.depth()).all(|n| tower.connector(n).apply(coords[n - 1]) == coords[n - 2])
}

/// The limit of the tower with its coordinate evaluations `ρ₁, …, ρ_N`.
pub fn truncated_limit(tower: &Tower) -> Result<(FiniteRing, Vec<RingMorphism>)> {
    let limit = tower.top().clone();
    let mut rhos = vec![RingMorphism::identity(&limit)];
    for n in (2..=tower.depth()).rev() {
        let next = rhos.last().expect("non-empty").then(tower.connector(n))?;
        rhos.push(next);
    }
    rhos.reverse();
    Ok((limit, rhos))
}

/// The unique `σ: S → lim R_n` with `ρ_n ∘ σ = σ_n` for every stage.
pub fn universal_factorization(tower: &Tower, sigmas: &[RingMorphism]) -> Result<RingMorphism> {
    if sigmas.len() != tower.depth() {
        return Err(Error::pre("universal_factorization", format!("expected {} maps, got {}", tower.depth(), sigmas.len())));
    }
    let source = sigmas[0].source().clone();
    for (i, s) in sigmas.iter().enumerate() {
        if !identical(s.source(), &source)? || !identical(s.target(), &tower.stages[i])? {
            return Err(Error::pre("universal_factorization", format!("map {} does not go from the common source to stage {}", i + 1, i + 1)));
        }
    }
    for n in 2..=tower.depth() {
        let down = sigmas[n - 1].then(tower.connector(n))?;
        if down.map() != sigmas[n - 2].map() {
            return Err(Error::pre("universal_factorization", format!("π_{n} ∘ σ_{n} differs from σ_{}", n - 1)));
        }
    }
    let (limit, rhos) = truncated_limit(tower)?;
    let top = sigmas.last().expect("non-empty");
    let sigma = RingMorphism::new(&source, &limit, top.map().to_vec(), top.is_unital())?;
    // Any factorization τ has ρ_N ∘ τ = σ_N, and ρ_N is the identity.
    for (n, rho) in rhos.iter().enumerate() {
        if sigma.then(rho)?.map() != sigmas[n].map() {
            return Err(Error::Internal(format!("ρ_{} ∘ σ differs from σ_{}", n + 1, n + 1)));
        }
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_cyclic;

    fn z(n: usize) -> FiniteRing {
        make_cyclic(n).unwrap()
    }

    fn canon(a: &FiniteRing, b: &FiniteRing) -> RingMorphism {
        let m = b.size();
        RingMorphism::from_fn(a, b, |x| x % m, true).unwrap()
    }

    fn z248() -> Tower {
        let (z2, z4, z8) = (z(2), z(4), z(8));
        Tower::new(vec![z2.clone(), z4.clone(), z8.clone()], vec![canon(&z4, &z2), canon(&z8, &z4)]).unwrap()
    }

    #[test]
    fn strings_push_down() {
        let (z2, z4) = (z(2), z(4));
        let t = Tower::new(vec![z2.clone(), z4.clone()], vec![canon(&z4, &z2)]).unwrap();
        assert_eq!(string(&t, 3).coords, vec![1, 3]);
        assert!(is_coherent(&t, &[0, 2]));
        assert!(!is_coherent(&t, &[1, 2]));
    }

    #[test]
    fn kernel_of_first_evaluation() {
        let (_, rhos) = truncated_limit(&z248()).unwrap();
        assert_eq!(rhos[0].kernel().members(), &[0, 2, 4, 6]);
        assert_eq!(rhos[2].map(), RingMorphism::identity(&z(8)).map());
    }

    #[test]
    fn factorization_through_the_limit() {
        let (z2, z4, z8) = (z(2), z(4), z(8));
        let t = Tower::new(vec![z2.clone(), z4.clone()], vec![canon(&z4, &z2)]).unwrap();
        let sigma = universal_factorization(&t, &[canon(&z8, &z2), canon(&z8, &z4)]).unwrap();
        assert_eq!(sigma.map(), canon(&z8, &z4).map());
        let zero = universal_factorization(&t, &[RingMorphism::zero_map(&z8, &z2), RingMorphism::zero_map(&z8, &z4)]).unwrap();
        assert!(zero.map().iter().all(|&v| v == 0));
        assert!(universal_factorization(&t, &[RingMorphism::zero_map(&z8, &z2), canon(&z8, &z4)]).is_err());
    }

    #[test]
    fn rejects_non_surjective_connector() {
        let (z2, z4) = (z(2), z(4));
        let err = Tower::new(vec![z4.clone(), z2.clone()], vec![RingMorphism::zero_map(&z2, &z4)]).unwrap_err();
        assert!(matches!(err, Error::Precondition { .. }));
    }
}
