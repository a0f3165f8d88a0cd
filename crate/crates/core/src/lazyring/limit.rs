use super::{approx_unit, ApproxUnit, Family, IdealChain, LazyElem, LazyRing, MultiplierOracle};
use crate::error::{Error, Result};
use serde::Serialize;

/// `levels[n - 1] = (x·e_n, e_n·x)` for `n = 1 ..= precision`.
///
/// For functions both entries are the restriction `x|[0, n)`, the canonical
/// representative of `x` in `R/J_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitString {
    pub levels: Vec<(LazyElem, LazyElem)>,
}

impl LimitString {
    pub fn precision(&self) -> usize {
        self.levels.len()
    }

    /// The stage-`n` coordinate.
    pub fn at(&self, n: usize) -> &(LazyElem, LazyElem) {
        &self.levels[n - 1]
    }
}

/// The two maps between multipliers and coherent strings at a fixed precision.
#[derive(Clone, Debug)]
pub struct LimitMaps {
    ring: LazyRing,
    unit: ApproxUnit,
    precision: usize,
    chain: Option<IdealChain>,
}

pub fn multiplier_as_limit(ring: &LazyRing, precision: usize) -> Result<LimitMaps> {
    if precision == 0 {
        return Err(Error::OutOfRange("precision 0".into()));
    }
    let chain = match ring.family() {
        Family::FinSupport => {
            let chain = IdealChain::new(ring)?;
            chain.verify(&ring.probes(precision.min(6), 40), precision.min(8))?;
            Some(chain)
        }
        Family::FinMatrix => None,
    };
    Ok(LimitMaps { ring: ring.clone(), unit: approx_unit(ring), precision, chain })
}

impl LimitMaps {
    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn chain(&self) -> Option<&IdealChain> {
        self.chain.as_ref()
    }

    pub fn forward(&self, x: &MultiplierOracle) -> Result<LimitString> {
        if !x.ring().same(&self.ring) {
            return Err(Error::pre("multiplier_as_limit", "multiplier lives over another ring"));
        }
        let levels = (1..=self.precision).map(|n| Ok((x.act_left(&self.unit.e(n))?, x.act_right(&self.unit.e(n))?))).collect::<Result<_>>()?;
        let s = LimitString { levels };
        self.check_coherent(&s)?;
        Ok(s)
    }

    /// `L_n e_{n−1} = L_{n−1}`, `e_{n−1} R_n = R_{n−1}`, `L_n e_n = L_n`,
    /// `e_n R_n = R_n` and `e_n L_n = R_n e_n`; for functions also `L_n = R_n`.
    pub fn check_coherent(&self, s: &LimitString) -> Result<()> {
        let r = &self.ring;
        if s.precision() != self.precision {
            return Err(Error::pre("multiplier_as_limit", format!("string has {} levels, expected {}", s.precision(), self.precision)));
        }
        for n in 1..=self.precision {
            let e = self.unit.e(n);
            let (l, rt) = s.at(n);
            let fail = |what: &str| Err(Error::pre("multiplier_as_limit", format!("string is incoherent at level {n}: {what}")));
            if r.mul(l, &e) != *l || r.mul(&e, rt) != *rt || r.mul(&e, l) != r.mul(rt, &e) {
                return fail("corner relations");
            }
            if self.chain.is_some() && l != rt {
                return fail("left and right restrictions differ");
            }
            if n >= 2 {
                let (pl, pr) = s.at(n - 1);
                let e1 = self.unit.e(n - 1);
                if r.mul(l, &e1) != *pl || r.mul(&e1, rt) != *pr {
                    return fail("projection to the previous level");
                }
            }
        }
        Ok(())
    }

    /// The multiplier `a ↦ L_N a`, `a ↦ a R_N` on probes in `[0, N)`.
    pub fn backward(&self, s: &LimitString) -> Result<MultiplierOracle> {
        self.check_coherent(s)?;
        let (l, rt) = s.at(self.precision).clone();
        let (r1, r2) = (self.ring.clone(), self.ring.clone());
        Ok(MultiplierOracle::new(&self.ring, "limit", move |a| Ok(r1.mul(&l, a)), move |a| Ok(r2.mul(a, &rt))).windowed(self.precision))
    }

    /// `backward ∘ forward` is the identity on the probes and `forward ∘ backward`
    /// returns the string. Returns the first failing probe.
    pub fn round_trip(&self, x: &MultiplierOracle, probes: &[LazyElem]) -> Result<Option<String>> {
        let s = self.forward(x)?;
        let back = self.backward(&s)?;
        let inside: Vec<LazyElem> = probes.iter().filter(|p| p.window() <= self.precision).cloned().collect();
        if let Some(p) = back.disagreement(x, &inside)? {
            return Ok(Some(format!("backward(forward({})) differs on {p}", x.label())));
        }
        if self.forward(&back)? != s {
            return Ok(Some(format!("forward(backward(s)) differs from s for {}", x.label())));
        }
        Ok(None)
    }
}

/// Whether `I_k ∩ ker ρ_m = 0`, with a witness when it is not.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantDecision {
    pub k: usize,
    pub constant: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantIdealReport {
    pub m: usize,
    pub decisions: Vec<ConstantDecision>,
    /// `(ker ρ_m)^⊥ = I_perp`: points whose multiples kill `J_m` inside the window.
    pub perp: usize,
    pub window: usize,
    /// Every probe lies in `(ker ρ_n)^⊥` for its own window `n`.
    pub union_covers: bool,
}

/// `m`-constancy of `I_1 … I_{k_max}` and the annihilator `(ker ρ_m)^⊥`,
/// computed on the window `[0, window)`.
pub fn constant_ideal_analysis(chain: &IdealChain, m: usize, k_max: usize, window: usize) -> Result<ConstantIdealReport> {
    let r = chain.ring();
    if window <= m.max(k_max) {
        return Err(Error::OutOfRange(format!("window {window} must exceed both m = {m} and k = {k_max}")));
    }
    let base = r.base();
    let nonzero: Vec<usize> = base.elements().skip(1).collect();
    let mut decisions = Vec::new();
    for k in 1..=k_max {
        // I_k ∩ J_m is spanned by the points of [m, k).
        let meets: Vec<usize> = (m..k).collect();
        let witness = meets.first().map(|&p| r.delta(p));
        if let Some(w) = &witness {
            if !chain.in_i(k, w) || !chain.in_j(m, w) || w.is_zero() {
                return Err(Error::Internal(format!("{w} does not witness I_{k} ∩ J_{m} ≠ 0")));
            }
        }
        for p in 0..k.min(m) {
            for &v in &nonzero {
                if chain.in_j(m, &r.point(p, v)) {
                    return Err(Error::Internal(format!("point {p} of I_{k} lies in J_{m}")));
                }
            }
        }
        decisions.push(ConstantDecision { k, constant: witness.is_none(), witness: witness.map(|w| w.to_string()) });
    }
    // x kills J_m on both sides iff every point of x is below m.
    let kills = |p: usize, v: usize| (m..window).all(|q| nonzero.iter().all(|&s| r.mul(&r.point(p, v), &r.point(q, s)).is_zero() && r.mul(&r.point(q, s), &r.point(p, v)).is_zero()));
    let perp_points: Vec<usize> = (0..window).filter(|&p| nonzero.iter().all(|&v| kills(p, v))).collect();
    if perp_points != (0..m).collect::<Vec<_>>() {
        return Err(Error::Internal(format!("annihilator of J_{m} on the window is {perp_points:?}")));
    }
    let union_covers = r.probes(window.min(6), 40).iter().all(|x| {
        let n = x.window();
        (n..n + 3).all(|q| r.mul(x, &r.delta(q)).is_zero() && r.mul(&r.delta(q), x).is_zero())
    });
    Ok(ConstantIdealReport { m, decisions, perp: m, window, union_covers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_cyclic;

    fn f2() -> LazyRing {
        LazyRing::finsupport(&make_cyclic(2).unwrap()).unwrap()
    }

    #[test]
    fn functions_become_restrictions() {
        let r = f2();
        let maps = multiplier_as_limit(&r, 8).unwrap();
        let f = MultiplierOracle::from_function(&r, "k mod 3 = 0", |k| usize::from(k % 3 == 0)).unwrap();
        let s = maps.forward(&f).unwrap();
        assert_eq!(s.at(5).0, r.indicator([0, 3]));
        let back = maps.backward(&s).unwrap();
        assert_eq!(back.act_left(&r.delta(3)).unwrap(), r.delta(3));
        assert!(back.act_left(&r.delta(4)).unwrap().is_zero());
        assert_eq!(maps.round_trip(&f, &r.probes(8, 60)).unwrap(), None);
        let unit = maps.forward(&MultiplierOracle::unit(&r)).unwrap();
        assert!(unit.levels.iter().enumerate().all(|(i, (l, _))| *l == r.block(i + 1)));
    }

    #[test]
    fn incoherent_strings_are_rejected() {
        let r = f2();
        let maps = multiplier_as_limit(&r, 3).unwrap();
        let levels = vec![(r.delta(0), r.delta(0)), (r.delta(1), r.delta(1)), (r.delta(1), r.delta(1))];
        assert!(maps.backward(&LimitString { levels }).is_err());
    }

    #[test]
    fn matrices_round_trip() {
        let r = LazyRing::finmatrix(&make_cyclic(2).unwrap()).unwrap();
        let maps = multiplier_as_limit(&r, 6).unwrap();
        let shift = MultiplierOracle::from_matrix(&r, "shift", |i, j| usize::from(i == j + 1), |k| k + 2);
        assert_eq!(maps.round_trip(&shift, &r.probes(5, 60)).unwrap(), None);
    }

    #[test]
    fn constant_ideals() {
        let c = IdealChain::new(&f2()).unwrap();
        let rep = constant_ideal_analysis(&c, 3, 2, 8).unwrap();
        assert!(rep.decisions[1].constant);
        let rep = constant_ideal_analysis(&c, 2, 5, 8).unwrap();
        assert!(!rep.decisions[4].constant);
        assert_eq!(rep.decisions[4].witness.as_deref(), Some("{2:1}"));
        assert_eq!(rep.perp, 2);
        assert!(rep.union_covers);
    }
}
