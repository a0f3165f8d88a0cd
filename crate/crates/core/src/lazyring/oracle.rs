use super::{approx_unit, Family, LazyElem, LazyRing};
use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{Elem, RingMorphism};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

type Action = Arc<dyn Fn(&LazyElem) -> Result<LazyElem> + Send + Sync>;

/// A multiplier given by its two actions `a ↦ xa` and `a ↦ ax` on
/// finitely supported elements.
#[derive(Clone)]
pub struct MultiplierOracle {
    ring: LazyRing,
    label: String,
    /// Probes must be supported in `[0, window)` when set.
    window: Option<usize>,
    left: Action,
    right: Action,
}

impl fmt::Debug for MultiplierOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierOracle").field("ring", &self.ring.name()).field("label", &self.label).field("window", &self.window).finish()
    }
}

impl MultiplierOracle {
    pub fn new(
        ring: &LazyRing,
        label: impl Into<String>,
        left: impl Fn(&LazyElem) -> Result<LazyElem> + Send + Sync + 'static,
        right: impl Fn(&LazyElem) -> Result<LazyElem> + Send + Sync + 'static,
    ) -> Self {
        MultiplierOracle { ring: ring.clone(), label: label.into(), window: None, left: Arc::new(left), right: Arc::new(right) }
    }

    pub fn from_element(ring: &LazyRing, x: &LazyElem) -> Self {
        let (r1, r2) = (ring.clone(), ring.clone());
        let (x1, x2) = (x.clone(), x.clone());
        Self::new(ring, format!("{x}"), move |a| Ok(r1.mul(&x1, a)), move |a| Ok(r2.mul(a, &x2)))
    }

    pub fn unit(ring: &LazyRing) -> Self {
        Self::new(ring, "1", |a| Ok(a.clone()), |a| Ok(a.clone()))
    }

    pub fn zero(ring: &LazyRing) -> Self {
        Self::new(ring, "0", |_| Ok(LazyElem::zero()), |_| Ok(LazyElem::zero()))
    }

    /// Pointwise multiplication by an arbitrary function `f: ℕ → R₀`.
    pub fn from_function(ring: &LazyRing, label: impl Into<String>, f: impl Fn(usize) -> Elem + Send + Sync + 'static) -> Result<Self> {
        if ring.family() != Family::FinSupport {
            return Err(Error::pre("MultiplierOracle::from_function", "functions act on the function family only"));
        }
        let f = Arc::new(f);
        let (r1, r2, f1, f2) = (ring.clone(), ring.clone(), f.clone(), f);
        let base = ring.base().size();
        let check = move |v: Elem, k: usize| {
            if v >= base {
                return Err(Error::pre("MultiplierOracle::from_function", format!("value {v} at {k} is not a base element")));
            }
            Ok(v)
        };
        Ok(Self::new(
            ring,
            label,
            move |a| r1.element(a.entries().map(|(k, _, v)| check(f1(k), k).map(|fk| (k, k, r1.base().mul(fk, v)))).collect::<Result<Vec<_>>>()?),
            move |a| r2.element(a.entries().map(|(k, _, v)| check(f2(k), k).map(|fk| (k, k, r2.base().mul(v, fk)))).collect::<Result<Vec<_>>>()?),
        ))
    }

    /// A row- and column-finite matrix: `entry(i, j)` vanishes whenever
    /// `i ≥ extent(j)` or `j ≥ extent(i)`.
    pub fn from_matrix(
        ring: &LazyRing,
        label: impl Into<String>,
        entry: impl Fn(usize, usize) -> Elem + Send + Sync + 'static,
        extent: impl Fn(usize) -> usize + Send + Sync + 'static,
    ) -> Self {
        let entry = Arc::new(entry);
        let extent = Arc::new(extent);
        let (r1, r2) = (ring.clone(), ring.clone());
        let (e1, e2, x1, x2) = (entry.clone(), entry, extent.clone(), extent);
        Self::new(
            ring,
            label,
            move |a| {
                let mut out = Vec::new();
                for (k, j, v) in a.entries() {
                    for i in 0..x1(k) {
                        out.push((i, j, r1.base().mul(e1(i, k), v)));
                    }
                }
                r1.element(out)
            },
            move |a| {
                let mut out = Vec::new();
                for (i, k, v) in a.entries() {
                    for j in 0..x2(k) {
                        out.push((i, j, r2.base().mul(v, e2(k, j))));
                    }
                }
                r2.element(out)
            },
        )
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Restrict to probes supported in `[0, w)`.
    pub fn windowed(mut self, w: usize) -> Self {
        self.window = Some(self.window.map_or(w, |v| v.min(w)));
        self
    }

    pub fn ring(&self) -> &LazyRing {
        &self.ring
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn window(&self) -> Option<usize> {
        self.window
    }

    fn admit(&self, a: &LazyElem) -> Result<()> {
        match self.window {
            Some(w) if a.window() > w => Err(Error::OutsideWindow { probe: a.to_string(), window: w }),
            _ => Ok(()),
        }
    }

    /// `xa`.
    pub fn act_left(&self, a: &LazyElem) -> Result<LazyElem> {
        self.admit(a)?;
        (self.left)(a)
    }

    /// `ax`.
    pub fn act_right(&self, a: &LazyElem) -> Result<LazyElem> {
        self.admit(a)?;
        (self.right)(a)
    }

    /// `x − y`.
    pub fn minus(&self, other: &MultiplierOracle) -> MultiplierOracle {
        let (a, b, c, d) = (self.clone(), other.clone(), self.clone(), other.clone());
        let (r1, r2) = (self.ring.clone(), self.ring.clone());
        let mut out = Self::new(
            &self.ring,
            format!("{} - {}", self.label, other.label),
            move |p| Ok(r1.sub(&a.act_left(p)?, &b.act_left(p)?)),
            move |p| Ok(r2.sub(&c.act_right(p)?, &d.act_right(p)?)),
        );
        out.window = match (self.window, other.window) {
            (Some(u), Some(v)) => Some(u.min(v)),
            (u, v) => u.or(v),
        };
        out
    }

    /// Additivity and the centralizer identities on every pair of probes.
    pub fn verify(&self, probes: &[LazyElem]) -> Result<()> {
        let r = &self.ring;
        budget::charge(8 * (probes.len() as u128).pow(2))?;
        for a in probes {
            for b in probes {
                let fail = |what: &str| Err(Error::Verification(format!("multiplier {} fails {what} at ({a}, {b})", self.label)));
                let ab = r.mul(a, b);
                let sum = r.add(a, b);
                if self.act_left(&sum)? != r.add(&self.act_left(a)?, &self.act_left(b)?) || self.act_right(&sum)? != r.add(&self.act_right(a)?, &self.act_right(b)?) {
                    return fail("additivity");
                }
                if self.act_left(&ab)? != r.mul(&self.act_left(a)?, b) {
                    return fail("x(ab) = (xa)b");
                }
                if self.act_right(&ab)? != r.mul(a, &self.act_right(b)?) {
                    return fail("(ab)x = a(bx)");
                }
                if r.mul(a, &self.act_left(b)?) != r.mul(&self.act_right(a)?, b) {
                    return fail("a(xb) = (ax)b");
                }
            }
        }
        Ok(())
    }

    /// First probe on which the two multipliers act differently.
    pub fn disagreement(&self, other: &MultiplierOracle, probes: &[LazyElem]) -> Result<Option<LazyElem>> {
        for a in probes {
            if self.act_left(a)? != other.act_left(a)? || self.act_right(a)? != other.act_right(a)? {
                return Ok(Some(a.clone()));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug)]
pub enum MorphismKind {
    Identity,
    /// `f ↦ (k ↦ f(stride·k + offset))` on function rings.
    Restriction { stride: usize, offset: usize },
    /// A surjective unital morphism of bases applied entrywise.
    Coefficients(RingMorphism),
}

/// A surjective morphism between lazy rings with coordinatewise lifts.
#[derive(Clone, Debug)]
pub struct LazyMorphism {
    source: LazyRing,
    target: LazyRing,
    kind: MorphismKind,
    lifts: Vec<Elem>,
}

impl LazyMorphism {
    pub fn identity(ring: &LazyRing) -> Self {
        LazyMorphism { source: ring.clone(), target: ring.clone(), kind: MorphismKind::Identity, lifts: ring.base().elements().collect() }
    }

    pub fn restriction(source: &LazyRing, stride: usize, offset: usize) -> Result<Self> {
        if source.family() != Family::FinSupport {
            return Err(Error::pre("LazyMorphism::restriction", "restriction needs the function family"));
        }
        if stride == 0 {
            return Err(Error::OutOfRange("stride 0".into()));
        }
        Ok(LazyMorphism { source: source.clone(), target: source.clone(), kind: MorphismKind::Restriction { stride, offset }, lifts: source.base().elements().collect() })
    }

    /// Restriction to the even points.
    pub fn evens(source: &LazyRing) -> Result<Self> {
        Self::restriction(source, 2, 0)
    }

    pub fn coefficients(source: &LazyRing, target: &LazyRing, m: &RingMorphism) -> Result<Self> {
        if source.family() != target.family() || !m.source().same(source.base()) || !m.target().same(target.base()) {
            return Err(Error::pre("LazyMorphism::coefficients", "base morphism does not match the two rings"));
        }
        if !m.is_surjective() || !m.is_unital() {
            return Err(Error::pre("LazyMorphism::coefficients", "base morphism must be surjective and unital"));
        }
        let lifts = m.fibres().iter().map(|f| f[0]).collect();
        Ok(LazyMorphism { source: source.clone(), target: target.clone(), kind: MorphismKind::Coefficients(m.clone()), lifts })
    }

    pub fn source(&self) -> &LazyRing {
        &self.source
    }

    pub fn target(&self) -> &LazyRing {
        &self.target
    }

    pub fn kind(&self) -> &MorphismKind {
        &self.kind
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            MorphismKind::Identity => format!("id on {}", self.source.name()),
            MorphismKind::Restriction { stride, offset } => format!("restriction to {stride}k+{offset} on {}", self.source.name()),
            MorphismKind::Coefficients(m) => format!("{} -> {} entrywise", m.source().name(), m.target().name()),
        }
    }

    pub fn apply(&self, x: &LazyElem) -> LazyElem {
        match &self.kind {
            MorphismKind::Identity => x.clone(),
            MorphismKind::Restriction { stride, offset } => self
                .target
                .element(x.entries().filter(|&(k, _, _)| k >= *offset && (k - offset) % stride == 0).map(|(k, _, v)| {
                    let t = (k - offset) / stride;
                    (t, t, v)
                }))
                .expect("restriction of a function"),
            MorphismKind::Coefficients(m) => self.target.element(x.entries().map(|(i, j, v)| (i, j, m.apply(v)))).expect("entrywise image"),
        }
    }

    /// A preimage, built coordinate by coordinate.
    pub fn lift(&self, y: &LazyElem) -> LazyElem {
        match &self.kind {
            MorphismKind::Restriction { stride, offset } => self
                .source
                .element(y.entries().map(|(k, _, v)| {
                    let s = stride * k + offset;
                    (s, s, v)
                }))
                .expect("lift of a function"),
            _ => self.source.element(y.entries().map(|(i, j, v)| (i, j, self.lifts[v]))).expect("entrywise lift"),
        }
    }

    /// A source window whose image covers the target window `w`.
    pub fn source_window(&self, w: usize) -> usize {
        match &self.kind {
            MorphismKind::Restriction { stride, offset } if w > 0 => stride * (w - 1) + offset + 1,
            _ => w,
        }
    }

    /// Window of the image of the source window `n`.
    pub fn target_window(&self, n: usize) -> usize {
        match &self.kind {
            MorphismKind::Restriction { stride, offset } => {
                if n > *offset {
                    (n - offset).div_ceil(*stride)
                } else {
                    0
                }
            }
            _ => n,
        }
    }

    /// `π(xy) = π(x)π(y)`, `π(x + y) = π(x) + π(y)` and `π(lift(y)) = y` on probes.
    pub fn verify(&self, source_probes: &[LazyElem], target_probes: &[LazyElem]) -> Result<()> {
        let (r, s) = (&self.source, &self.target);
        for a in source_probes {
            for b in source_probes {
                if self.apply(&r.mul(a, b)) != s.mul(&self.apply(a), &self.apply(b)) || self.apply(&r.add(a, b)) != s.add(&self.apply(a), &self.apply(b)) {
                    return Err(Error::Verification(format!("{} is not a morphism at ({a}, {b})", self.describe())));
                }
            }
        }
        for y in target_probes {
            if self.apply(&self.lift(y)) != *y {
                return Err(Error::Verification(format!("lift of {y} does not map back")));
            }
        }
        Ok(())
    }
}

/// Where `a·seq(n)` and `seq(n)·a` stop changing.
#[derive(Clone, Debug, Serialize)]
pub struct Stabilization {
    pub probe: String,
    pub probe_window: usize,
    /// First index from which both products are constant up to the horizon.
    pub index: Option<usize>,
    pub horizon: usize,
}

/// Stabilization index of `seq(n)` against each probe, scanning
/// `start..=horizon`. At least three equal terms are required.
pub fn strict_probe(seq: &dyn Fn(usize) -> Result<MultiplierOracle>, probes: &[LazyElem], start: usize, horizon: usize) -> Result<Vec<Stabilization>> {
    let terms: Vec<MultiplierOracle> = (start..=horizon).map(seq).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for a in probes {
        let values: Vec<(LazyElem, LazyElem)> = terms.iter().map(|x| Ok((x.act_left(a)?, x.act_right(a)?))).collect::<Result<_>>()?;
        let last = values.last().expect("non-empty range");
        let first_equal = values.iter().rposition(|v| v != last).map_or(0, |p| p + 1);
        let index = (first_equal + 2 < values.len()).then_some(start + first_equal);
        out.push(Stabilization { probe: a.to_string(), probe_window: a.window(), index, horizon });
    }
    Ok(out)
}

/// `π̄(m)` with `π̄(m)y = π(m·u)y` for `y = π(u)y`.
#[derive(Clone, Debug)]
pub struct ProperExtension {
    pub oracle: MultiplierOracle,
    /// Probes on which properness and independence of the decomposition were checked.
    pub checked: Vec<LazyElem>,
}

pub fn extend_proper_lazy(pi: &LazyMorphism, m: &MultiplierOracle, probes: &[LazyElem]) -> Result<ProperExtension> {
    let (r, s) = (pi.source().clone(), pi.target().clone());
    if !m.ring().same(&r) {
        return Err(Error::pre("extend_proper_lazy", "multiplier lives over another ring"));
    }
    let unit = approx_unit(&r);
    let evaluate = {
        let (pi, m, unit, s) = (pi.clone(), m.clone(), unit.clone(), s.clone());
        move |y: &LazyElem, extra: usize, left: bool| -> Result<LazyElem> {
            let u = unit.e(pi.source_window(y.window()) + extra);
            let pu = pi.apply(&u);
            if s.mul(&pu, y) != *y || s.mul(y, &pu) != *y {
                return Err(Error::pre("extend_proper_lazy", format!("{y} is not in π(R)S ∩ Sπ(R) on window {}", u.window())));
            }
            Ok(if left { s.mul(&pi.apply(&m.act_left(&u)?), y) } else { s.mul(y, &pi.apply(&m.act_right(&u)?)) })
        }
    };
    for y in probes {
        for left in [true, false] {
            if evaluate(y, 0, left)? != evaluate(y, 1, left)? {
                return Err(Error::Internal(format!("extension of {} depends on the decomposition of {y}", m.label())));
            }
        }
    }
    let e1 = Arc::new(evaluate);
    let e3 = e1.clone();
    let mut oracle = MultiplierOracle::new(&s, format!("ext({})", m.label()), move |y| e1(y, 0, true), move |y| e3(y, 0, false));
    if let Some(w) = m.window() {
        oracle = oracle.windowed(pi.target_window(w));
    }
    Ok(ProperExtension { oracle, checked: probes.to_vec() })
}

/// `m_k → 0` on lifted probes forces `π̄(m_k) → 0` on the probes, no later.
#[derive(Clone, Debug, Serialize)]
pub struct StrictContinuity {
    /// `(probe, source vanishing index, image vanishing index)`.
    pub rows: Vec<(String, Option<usize>, Option<usize>)>,
    pub holds: bool,
}

pub fn strict_continuity(pi: &LazyMorphism, seq: &dyn Fn(usize) -> Result<MultiplierOracle>, probes: &[LazyElem], horizon: usize) -> Result<StrictContinuity> {
    let r = pi.source();
    let unit = approx_unit(r);
    let vanish = |x: &MultiplierOracle, a: &LazyElem| -> Result<bool> { Ok(x.act_left(a)?.is_zero() && x.act_right(a)?.is_zero()) };
    let first_vanishing = |values: Vec<bool>| values.iter().rposition(|&v| !v).map_or(Some(0), |p| (p + 1 < values.len()).then_some(p + 1));
    let mut rows = Vec::new();
    let mut holds = true;
    for y in probes {
        let u = unit.e(pi.source_window(y.window()));
        let mut src = Vec::new();
        let mut img = Vec::new();
        for k in 0..=horizon {
            let m = seq(k)?;
            src.push(vanish(&m, &u)?);
            let ext = extend_proper_lazy(pi, &m, std::slice::from_ref(y))?;
            img.push(vanish(&ext.oracle, y)?);
        }
        let (a, b) = (first_vanishing(src), first_vanishing(img));
        if let Some(a) = a {
            holds &= b.is_some_and(|b| b <= a);
        }
        rows.push((y.to_string(), a, b));
    }
    Ok(StrictContinuity { rows, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_cyclic;

    fn f2() -> LazyRing {
        LazyRing::finsupport(&make_cyclic(2).unwrap()).unwrap()
    }

    #[test]
    fn function_multipliers_are_centralizers() {
        let r = f2();
        let m = MultiplierOracle::from_function(&r, "k mod 2", |k| k % 2).unwrap();
        m.verify(&r.probes(6, 30)).unwrap();
        assert_eq!(m.act_left(&r.block(4)).unwrap(), r.indicator([1, 3]));
    }

    #[test]
    fn matrix_multipliers_are_centralizers() {
        let r = LazyRing::finmatrix(&make_cyclic(2).unwrap()).unwrap();
        // The shift k ↦ k + 1, as a matrix with ones at (k + 1, k).
        let shift = MultiplierOracle::from_matrix(&r, "shift", |i, j| usize::from(i == j + 1), |k| k + 2);
        shift.verify(&r.probes(4, 40)).unwrap();
        assert_eq!(shift.act_left(&r.delta(0)).unwrap(), r.matrix_unit(1, 0, 1).unwrap());
    }

    #[test]
    fn restriction_is_a_morphism() {
        let r = f2();
        let pi = LazyMorphism::evens(&r).unwrap();
        pi.verify(&r.probes(7, 40), &r.probes(4, 20)).unwrap();
        assert_eq!(pi.apply(&r.indicator([0, 1, 4])), r.indicator([0, 2]));
        assert_eq!(pi.source_window(3), 5);
        assert_eq!(pi.target_window(5), 3);
    }

    #[test]
    fn extension_along_restriction() {
        let r = f2();
        let pi = LazyMorphism::evens(&r).unwrap();
        let probes = r.probes(6, 40);
        let odd = MultiplierOracle::from_function(&r, "k mod 2", |k| k % 2).unwrap();
        let ext = extend_proper_lazy(&pi, &odd, &probes).unwrap();
        assert_eq!(ext.oracle.disagreement(&MultiplierOracle::zero(&r), &probes).unwrap(), None);
        let one = extend_proper_lazy(&pi, &MultiplierOracle::unit(&r), &probes).unwrap();
        assert_eq!(one.oracle.disagreement(&MultiplierOracle::unit(&r), &probes).unwrap(), None);
    }

    #[test]
    fn approximate_unit_stabilizes() {
        let r = f2();
        let seq = |n: usize| Ok(MultiplierOracle::from_element(&r, &r.block(n)));
        let report = strict_probe(&seq, &[r.delta(0)], 0, 10).unwrap();
        assert_eq!(report[0].index, Some(1));
        let constant = |_: usize| Ok(MultiplierOracle::unit(&r));
        assert_eq!(strict_probe(&constant, &[r.delta(3)], 0, 5).unwrap()[0].index, Some(0));
    }
}
