use super::{approx_unit, Family, LazyElem, LazyMorphism, LazyRing, MultiplierOracle};
use crate::budget;
use crate::error::{Error, Result};
use crate::finring::FiniteRing;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

type Seq = Arc<dyn Fn(usize) -> LazyElem + Send + Sync>;

/// An ideal `I` of a lazy ring with an approximate unit `(e_m)` of `I` and
/// elements `(f_n)` whose images form an approximate unit of `R/I`.
#[derive(Clone)]
pub struct SigmaExtension {
    pub ring: LazyRing,
    pub label: String,
    e: Seq,
    f: Seq,
    in_ideal: Arc<dyn Fn(&LazyElem) -> bool + Send + Sync>,
}

impl fmt::Debug for SigmaExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigmaExtension").field("ring", &self.ring.name()).field("label", &self.label).finish()
    }
}

/// `I` = functions supported on the evens, `e_m` = evens below `2m`,
/// `f_n` = odds below `2n`.
pub fn even_odd_extension(ring: &LazyRing) -> Result<SigmaExtension> {
    if ring.family() != Family::FinSupport {
        return Err(Error::pre("even_odd_extension", "needs the function family"));
    }
    let (r1, r2) = (ring.clone(), ring.clone());
    Ok(SigmaExtension {
        ring: ring.clone(),
        label: "even/odd".into(),
        e: Arc::new(move |m| r1.indicator((0..m).map(|k| 2 * k))),
        f: Arc::new(move |n| r2.indicator((0..n).map(|k| 2 * k + 1))),
        in_ideal: Arc::new(|x| x.support().iter().all(|p| p % 2 == 0)),
    })
}

impl SigmaExtension {
    pub fn new(
        ring: &LazyRing,
        label: impl Into<String>,
        e: impl Fn(usize) -> LazyElem + Send + Sync + 'static,
        f: impl Fn(usize) -> LazyElem + Send + Sync + 'static,
        in_ideal: impl Fn(&LazyElem) -> bool + Send + Sync + 'static,
    ) -> Self {
        SigmaExtension { ring: ring.clone(), label: label.into(), e: Arc::new(e), f: Arc::new(f), in_ideal: Arc::new(in_ideal) }
    }

    /// `I = 0`: the `f_n` are the approximate unit of the ring.
    pub fn zero_ideal(ring: &LazyRing) -> Self {
        let r = ring.clone();
        Self::new(ring, "I = 0", |_| LazyElem::zero(), move |n| r.block(n), LazyElem::is_zero)
    }

    /// `I = R`: the quotient is zero and `f_n = 0`.
    pub fn whole(ring: &LazyRing) -> Self {
        let r = ring.clone();
        Self::new(ring, "I = R", move |m| r.block(m), |_| LazyElem::zero(), |_| true)
    }

    pub fn e(&self, m: usize) -> LazyElem {
        (self.e)(m)
    }

    pub fn f(&self, n: usize) -> LazyElem {
        (self.f)(n)
    }

    /// `u_{nm}` from `1 − u = (1 − f_n)(1 − e_m)(1 − f_n)`, expanded so
    /// that no unit is needed: `u = 2f + e − fe − f² − ef + fef`.
    pub fn u(&self, n: usize, m: usize) -> LazyElem {
        let r = &self.ring;
        let (f, e) = (self.f(n), self.e(m));
        let fe = r.mul(&f, &e);
        let ef = r.mul(&e, &f);
        let plus = r.sum([&f, &f, &e, &r.mul(&fe, &f)]);
        let minus = r.sum([&fe, &r.mul(&f, &f), &ef]);
        r.sub(&plus, &minus)
    }
}

/// The inductively chosen σ-unit `v_i = u_{n(i) m(i)}`.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaUnit {
    /// `(n(i), m(i))` for `i = 1 ..= count`.
    pub indices: Vec<(usize, usize)>,
    #[serde(serialize_with = "display_all")]
    pub v: Vec<LazyElem>,
    /// `(probe, (n, m) with u_{nm} fixing it, first i with v_i fixing it)`.
    pub certified: Vec<(String, (usize, usize), usize)>,
}

fn display_all<S: serde::Serializer>(v: &[LazyElem], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn fixes(r: &LazyRing, u: &LazyElem, x: &LazyElem) -> bool {
    r.mul(u, x) == *x && r.mul(x, u) == *x
}

/// Pairs `(n, m)` with `n, m ≥ lo` in order of `n + m`, within `search`.
fn pairs(lo: usize, search: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=2 * search).flat_map(move |t| (0..=t.min(search)).filter(move |a| t - a <= search).map(move |a| (lo + a, lo + t - a)))
}

pub fn sigma_unit_of_extension(ext: &SigmaExtension, count: usize, probes: &[LazyElem], search: usize) -> Result<SigmaUnit> {
    let r = &ext.ring;
    for m in 0..=count + search {
        if !(ext.in_ideal)(&ext.e(m)) {
            return Err(Error::pre("sigma_unit_of_extension", format!("e_{m} is not in the ideal")));
        }
    }
    let mut indices: Vec<(usize, usize)> = Vec::new();
    let mut v: Vec<LazyElem> = Vec::new();
    for i in 1..=count {
        budget::charge((search as u128 + 1).pow(2) * (i as u128).pow(2))?;
        let earlier: Vec<LazyElem> = (0..=i).flat_map(|k| (0..=i).map(move |l| (k, l))).map(|(k, l)| ext.u(k, l)).collect();
        let (lo_n, lo_m) = indices.last().copied().unwrap_or((i, i));
        let lo = i.max(lo_n).max(lo_m);
        let found = pairs(lo, search).find(|&(n, m)| {
            let cand = ext.u(n, m);
            earlier.iter().all(|u| fixes(r, &cand, u)) && v.last().is_none_or(|prev| fixes(r, &cand, prev))
        });
        let (n, m) = found.ok_or_else(|| Error::exhausted("sigma_unit_of_extension", format!("no (n, m) in [{lo}, {}]² absorbs the u_kl with k, l ≤ {i}", lo + search)))?;
        indices.push((n, m));
        v.push(ext.u(n, m));
    }
    for i in 1..v.len() {
        if !fixes(r, &v[i], &v[i - 1]) {
            return Err(Error::Internal(format!("v_{} v_{i} = v_{i} fails", i + 1)));
        }
    }
    let mut certified = Vec::new();
    for x in probes {
        let (n, m) = pairs(0, search)
            .find(|&(n, m)| fixes(r, &ext.u(n, m), x))
            .ok_or_else(|| Error::exhausted("sigma_unit_of_extension", format!("no u_nm with n, m ≤ {search} fixes {x}")))?;
        let from = n.max(m).max(1);
        if from > count {
            return Err(Error::pre("sigma_unit_of_extension", format!("{x} is fixed by u_({n},{m}) only past the {count} computed terms")));
        }
        if let Some(i) = (from..=count).find(|&i| !fixes(r, &v[i - 1], x)) {
            return Err(Error::Verification(format!("v_{i} does not fix {x} although u_({n},{m}) does")));
        }
        let first = (1..=count).find(|&i| (i..=count).all(|j| fixes(r, &v[j - 1], x))).expect("from is a candidate");
        certified.push((x.to_string(), (n, m), first));
    }
    Ok(SigmaUnit { indices, v, certified })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvLimShape {
    /// `R_n = R/J_n` with restriction maps; the limit is all functions.
    Truncations,
    /// Every stage is the function ring and every connector the identity.
    Identity,
    /// Every stage is the function ring and `π_n(f)(k) = f(2k)`.
    EvenCollapse,
}

impl std::str::FromStr for InvLimShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncations" => Ok(InvLimShape::Truncations),
            "identity" => Ok(InvLimShape::Identity),
            "even-collapse" => Ok(InvLimShape::EvenCollapse),
            other => Err(Error::Unsupported(format!("tower shape `{other}`"))),
        }
    }
}

/// Decision for a tower of lazy rings, with the unit of each `ker ρ_n` or a
/// refutation.
#[derive(Clone, Debug, Serialize)]
pub struct InvLimVerdict {
    pub shape: InvLimShape,
    pub depth: usize,
    pub stages_sigma_unital: bool,
    pub kernels_have_units: bool,
    pub sigma_unital: bool,
    /// One line per stage or construction step.
    pub trace: Vec<String>,
    /// For the collapse tower: `(step, stage, position)` of the diagonal string.
    pub diagonal: Vec<(usize, usize, usize)>,
}

pub fn invlimsigma_probe(shape: InvLimShape, base: &FiniteRing, depth: usize) -> Result<InvLimVerdict> {
    if depth < 2 {
        return Err(Error::OutOfRange(format!("tower depth {depth} must be at least 2")));
    }
    let ring = LazyRing::finsupport(base)?;
    let unit = approx_unit(&ring);
    unit.verify_nesting(4 * depth)?;
    let mut trace = vec![format!("stages carry the approximate unit e_n = 1_[0,n), nesting checked to {}", 4 * depth)];
    let probe_window = 4 * depth;
    match shape {
        InvLimShape::Truncations => {
            for n in 1..=depth {
                // The unit of ker ρ_n in the limit is the function 1_[n,∞).
                let one = base.one()?;
                let u = MultiplierOracle::from_function(&ring, format!("1_[{n},∞)"), move |k| if k >= n { one } else { 0 })?;
                for x in ring.probes(probe_window, 40) {
                    let s = ring.sub(&x, &ring.mul(&ring.block(n), &x));
                    if u.act_left(&s)? != s || u.act_right(&s)? != s {
                        return Err(Error::Internal(format!("1_[{n},∞) does not fix {s}")));
                    }
                }
                trace.push(format!("stage {n}: R/J_{n} has unit e_{n}; ker ρ_{n} has unit 1_[{n},∞) in the limit"));
            }
            trace.push("limit is the ring of all functions, unital with unit the constant 1".into());
            Ok(InvLimVerdict { shape, depth, stages_sigma_unital: true, kernels_have_units: true, sigma_unital: true, trace, diagonal: Vec::new() })
        }
        InvLimShape::Identity => {
            for n in 1..=depth {
                trace.push(format!("stage {n}: ker ρ_{n} = 0 has unit 0"));
            }
            Ok(InvLimVerdict { shape, depth, stages_sigma_unital: true, kernels_have_units: true, sigma_unital: true, trace, diagonal: Vec::new() })
        }
        InvLimShape::EvenCollapse => {
            let pi = LazyMorphism::evens(&ring)?;
            pi.verify(&ring.probes(8, 40), &ring.probes(4, 20))?;
            // Support refutation: a candidate unit of ker π_n misses an odd point past its window.
            for w in 0..=probe_window {
                let cand = ring.block(w);
                let p = 2 * w + 1;
                let d = ring.delta(p);
                if !pi.apply(&d).is_zero() || ring.mul(&cand, &d) == d {
                    return Err(Error::Internal(format!("δ_{p} does not refute 1_[0,{w})")));
                }
            }
            trace.push(format!("ker π_n is the odd-supported functions; each candidate 1_[0,w), w ≤ {probe_window}, fails on δ_(2w+1)"));
            let diagonal = diagonal_string(&ring, &pi, depth, &mut trace)?;
            trace.push("verdict: the kernels have no unit, so the limit is not σ-unital".into());
            Ok(InvLimVerdict { shape, depth, stages_sigma_unital: true, kernels_have_units: false, sigma_unital: false, trace, diagonal })
        }
    }
}

/// The candidate approximate unit `E_n` of the collapse limit, at stage `s`:
/// the indicator of `[0, n·2^(s−1))`.
fn candidate(ring: &LazyRing, n: usize, stage: usize) -> LazyElem {
    ring.block(n << (stage - 1))
}

/// Build `x = (x_s)` with `E_s x_s ≠ x_s` at every stage `s ≥ 2`, adding an
/// odd point past the support of `E_s` at each step.
fn diagonal_string(ring: &LazyRing, pi: &LazyMorphism, depth: usize, trace: &mut Vec<String>) -> Result<Vec<(usize, usize, usize)>> {
    let mut xs = vec![LazyElem::zero()];
    let mut steps = Vec::new();
    for stage in 2..=depth {
        let prev = xs.last().expect("non-empty");
        let lifted = pi.lift(prev);
        let e = candidate(ring, stage, stage);
        let p = (e.window().max(lifted.window()) | 1) + 2;
        let x = ring.add(&lifted, &ring.delta(p));
        if pi.apply(&x) != *prev {
            return Err(Error::Internal(format!("step {stage} breaks coherence")));
        }
        if ring.mul(&e, &x) == x {
            return Err(Error::Internal(format!("E_{stage} fixes the diagonal element at stage {stage}")));
        }
        trace.push(format!("step {stage}: E_{stage} = 1_[0,{}) at stage {stage}; x gains δ_{p}, and (E_{stage}x)({p}) = 0 ≠ x({p})", e.window()));
        steps.push((stage, stage, p));
        xs.push(x);
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_cyclic;

    fn f2() -> LazyRing {
        LazyRing::finsupport(&make_cyclic(2).unwrap()).unwrap()
    }

    #[test]
    fn even_odd_sigma_unit_is_an_interval() {
        let r = f2();
        let ext = even_odd_extension(&r).unwrap();
        let probes = r.probes(10, 60);
        let s = sigma_unit_of_extension(&ext, 8, &probes, 8).unwrap();
        for (i, v) in s.v.iter().enumerate() {
            assert_eq!(*v, r.block(2 * (i + 1)));
        }
        assert_eq!(s.certified.len(), 60);
    }

    #[test]
    fn degenerate_extensions() {
        let r = f2();
        let probes = r.probes(5, 20);
        let zero = sigma_unit_of_extension(&SigmaExtension::zero_ideal(&r), 6, &probes, 6).unwrap();
        assert_eq!(zero.v[2], r.block(3));
        let whole = sigma_unit_of_extension(&SigmaExtension::whole(&r), 6, &probes, 6).unwrap();
        assert_eq!(whole.v[4], r.block(5));
    }

    #[test]
    fn collapse_tower_is_refuted() {
        let f2 = make_cyclic(2).unwrap();
        let v = invlimsigma_probe(InvLimShape::EvenCollapse, &f2, 5).unwrap();
        assert!(!v.sigma_unital && !v.kernels_have_units);
        assert_eq!(v.diagonal.len(), 4);
        assert!(invlimsigma_probe(InvLimShape::Truncations, &f2, 4).unwrap().sigma_unital);
        assert!(invlimsigma_probe(InvLimShape::Identity, &f2, 4).unwrap().sigma_unital);
    }
}
