use super::{inverse, is_unit, LiftContext, Trace};
use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing, Ideal};
use crate::witness::{is_quasi_invertible, quasi_invertible_witness_with, PerpTable, QiMode};
use serde::Serialize;

/// Smallest quasi-invertible preimage of `ū`.
pub fn lift_quasi_invertible(ctx: &LiftContext, ubar: Elem) -> Result<Elem> {
    let (r, s) = (ctx.source(), ctx.target());
    r.one().map_err(|_| Error::pre("lift_quasi_invertible", format!("`{}` has no unit", r.name())))?;
    if !is_quasi_invertible(s, &*ctx.target_perp()?, ubar) {
        return Err(Error::pre("lift_quasi_invertible", format!("{ubar} is not quasi-invertible in `{}`", s.name())));
    }
    let table = ctx.source_perp()?;
    budget::charge(ctx.fibre(ubar).len() as u128 * (r.size() as u128).pow(2))?;
    ctx.fibre(ubar)
        .iter()
        .copied()
        .find(|&u| is_quasi_invertible(r, &table, u))
        .ok_or_else(|| Error::exhausted("lift_quasi_invertible", format!("no preimage of {ubar} is quasi-invertible")))
}

/// Which chain `qb_lift_step` follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QbRoute {
    /// The easy case when the kernel has stable rank one, else the general route.
    Auto,
    /// Explicit formulas relying on stable rank one of the kernel.
    EasyCase,
    /// Corner decomposition followed by a final correction inside the kernel.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QbLift {
    pub y: Elem,
    pub u: Elem,
    /// `EasyCase` or `General`, never `Auto`.
    pub route: QbRoute,
    pub trace: Trace,
}

/// Lift a solution `ā + ȳb̄ = ū` of the Bass equation `xa + b = 1`.
pub fn qb_lift_step(ctx: &LiftContext, x: Elem, a: Elem, b: Elem, ybar: Elem, ubar: Elem, route: QbRoute) -> Result<QbLift> {
    let (r, s) = (ctx.source(), ctx.target());
    let one = r.one().map_err(|_| Error::pre("qb_lift_step", format!("`{}` has no unit", r.name())))?;
    if r.add(r.mul(x, a), b) != one {
        return Err(Error::pre("qb_lift_step", "xa + b differs from 1"));
    }
    let (ab, bb) = (ctx.apply(a), ctx.apply(b));
    if s.add(ab, s.mul(ybar, bb)) != ubar {
        return Err(Error::pre("qb_lift_step", "π(a) + ȳπ(b) differs from ū"));
    }
    let u1 = lift_quasi_invertible(ctx, ubar)?;
    let y1 = ctx.lift(ybar);
    let t = r.sub(r.add(a, r.mul(y1, b)), u1);
    let table = ctx.source_perp()?;
    let v1 = quasi_invertible_witness_with(r, &table, u1, QiMode::Symmetric)?
        .ok_or_else(|| Error::exhausted("quasi-inverse of u1", format!("{u1} has no symmetric quasi-inverse")))?
        .v;
    let start = Start { x, b, y1, u1, v1, t };
    let out = match route {
        QbRoute::EasyCase => easy_case(ctx, &start)?,
        QbRoute::General => general(ctx, &table, &start)?,
        QbRoute::Auto if ctx.kernel_has_stable_rank_one() => match easy_case(ctx, &start) {
            Err(Error::SearchExhausted { .. }) => general(ctx, &table, &start)?,
            other => other?,
        },
        QbRoute::Auto => general(ctx, &table, &start)?,
    };
    let (y, u) = (out.y, out.u);
    if r.add(a, r.mul(y, b)) != u {
        return Err(Error::Internal(format!("a + yb differs from u = {u}")));
    }
    if ctx.apply(y) != ybar || ctx.apply(u) != ubar {
        return Err(Error::Internal("lifted pair does not map onto (ȳ, ū)".into()));
    }
    if !is_quasi_invertible(r, &table, u) {
        return Err(Error::Internal(format!("lifted u = {u} is not quasi-invertible")));
    }
    Ok(out)
}

struct Start {
    x: Elem,
    b: Elem,
    y1: Elem,
    u1: Elem,
    v1: Elem,
    t: Elem,
}

fn easy_case(ctx: &LiftContext, st: &Start) -> Result<QbLift> {
    let r = ctx.source();
    if !ctx.kernel_has_stable_rank_one() {
        return Err(Error::pre("qb_lift_step", "the kernel does not have stable rank one"));
    }
    let (one, ker) = (r.one()?, ctx.kernel().members());
    let (x, b, u1, v1, t) = (r.el(st.x), r.el(st.b), r.el(st.u1), r.el(st.v1), r.el(st.t));
    let (e, y1) = (r.one_el()?, r.el(st.y1));
    let c = u1 * (e - x * y1) * b * v1 + (e - u1 * x) * (e - u1 * v1);
    let left = e + t * v1;
    budget::charge((ker.len() as u128).pow(2))?;
    let (t1, s1) = ker
        .iter()
        .flat_map(|&t1| ker.iter().map(move |&s1| (t1, s1)))
        .find(|&(t1, s1)| ((e + r.el(t1)) * left + r.el(s1) * c).index() == one)
        .ok_or_else(|| Error::exhausted("(t1, s1)", "no kernel pair with (1 + t1)(1 + tv1) + s1c = 1"))?;
    let s1 = r.el(s1);
    budget::charge(ker.len() as u128 * r.size() as u128)?;
    let (s2, w) = ker
        .iter()
        .map(|&s2| (s2, left + r.el(s2) * s1 * c))
        .find(|&(_, w)| is_unit(r, w.index()))
        .ok_or_else(|| Error::exhausted("s2", "no kernel element makes w invertible"))?;
    let s = r.el(s2) * s1 * u1 * (e - x * y1);
    let u = w * u1 + (t + s * b) * (e - v1 * u1);
    let y = y1 + s;
    let trace = vec![
        ("u1".into(), st.u1),
        ("y1".into(), st.y1),
        ("t".into(), st.t),
        ("v1".into(), st.v1),
        ("c".into(), c.index()),
        ("t1".into(), t1),
        ("s1".into(), s1.index()),
        ("s2".into(), s2),
        ("w".into(), w.index()),
        ("s".into(), s.index()),
    ];
    Ok(QbLift { y: y.index(), u: u.index(), route: QbRoute::EasyCase, trace })
}

/// Idempotents and quasi-inverse data around a quasi-invertible `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QbSetup {
    pub u: Elem,
    pub v: Elem,
    pub w: Elem,
    pub w_prime: Elem,
    pub p: Elem,
    pub q: Elem,
    pub p1: Elem,
    pub p2: Elem,
    pub q1: Elem,
    pub q2: Elem,
}

impl QbSetup {
    /// Derive `p, q, p₁, p₂, q₁, q₂` from `u, v, w, w'`.
    pub fn new(ring: &FiniteRing, u: Elem, v: Elem, w: Elem, w_prime: Elem) -> Result<Self> {
        let e = ring.one_el()?;
        let (ue, ve, we, wpe) = (ring.el(u), ring.el(v), ring.el(w), ring.el(w_prime));
        let (p, q) = (ue * ve, ve * ue);
        Ok(QbSetup {
            u,
            v,
            w,
            w_prime,
            p: p.index(),
            q: q.index(),
            p1: (e - p).index(),
            p2: (p - ue * we * wpe * ve).index(),
            q1: (q - wpe * we).index(),
            q2: (e - q).index(),
        })
    }

    /// Check every setup identity; the error names the first one violated.
    pub fn verify(&self, ring: &FiniteRing, ideal: &Ideal, table: &PerpTable) -> Result<()> {
        let fail = |what: &str| Err(Error::pre("qblem_witness", format!("setup identity violated: {what}")));
        let m = |a: Elem, b: Elem| ring.mul(a, b);
        let m3 = |a: Elem, b: Elem, c: Elem| m(m(a, b), c);
        let (u, v, w, wp, p, q) = (self.u, self.v, self.w, self.w_prime, self.p, self.q);
        let one = ring.one()?;
        if m3(u, v, u) != u || m3(v, u, v) != v {
            return fail("u = uvu, v = vuv");
        }
        if !table.perp(ring.sub(one, p), ring.sub(one, q)) {
            return fail("(1 - p) ⊥ (1 - q)");
        }
        if m3(q, w, q) != w || m3(q, wp, q) != wp {
            return fail("w, w' ∈ qRq");
        }
        if m3(w, wp, w) != w || m3(wp, w, wp) != wp {
            return fail("w = ww'w, w' = w'ww'");
        }
        if !table.perp(ring.sub(q, m(w, wp)), ring.sub(q, m(wp, w))) {
            return fail("(q - ww') ⊥ (q - w'w)");
        }
        if !ideal.contains(ring.sub(q, w)) {
            return fail("q - w ∈ I");
        }
        let derived = QbSetup::new(ring, u, v, w, wp)?;
        if derived != *self {
            return fail("p, q, p1, p2, q1, q2 derived from u, v, w, w'");
        }
        if !ideal.contains(self.p2) || !ideal.contains(self.q1) {
            return fail("p2, q1 ∈ I");
        }
        for (pi, qi, name) in [(self.p1, self.q1, "p1Rq1 ⊆ I"), (self.p2, self.q2, "p2Rq2 ⊆ I")] {
            if !ring.elements().all(|c| ideal.contains(m3(pi, c, qi))) {
                return fail(name);
            }
        }
        Ok(())
    }

    /// Split `a − uw` as `t₁ + t₂` with `tᵢ ∈ pᵢRqᵢ`, smallest `t₁` first.
    pub fn split(&self, ring: &FiniteRing, a: Elem) -> Option<(Elem, Elem)> {
        let rest = ring.sub(a, ring.mul(self.u, self.w));
        split_corners(ring, rest, (self.p1, self.q1), (self.p2, self.q2))
    }
}

fn corner_elements(ring: &FiniteRing, p: Elem, q: Elem) -> Vec<Elem> {
    let mut out: Vec<Elem> = ring.elements().map(|c| ring.mul(ring.mul(p, c), q)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn split_corners(ring: &FiniteRing, total: Elem, (p1, q1): (Elem, Elem), (p2, q2): (Elem, Elem)) -> Option<(Elem, Elem)> {
    corner_elements(ring, p1, q1).into_iter().find_map(|t1| {
        let t2 = ring.sub(total, t1);
        (ring.mul(ring.mul(p2, t2), q2) == t2).then_some((t1, t2))
    })
}

/// Smallest `y ∈ I` with `a + yb` quasi-invertible, after checking the setup
/// and the equation `xa + b = 1`.
pub fn qblem_witness(ring: &FiniteRing, ideal: &Ideal, setup: &QbSetup, a: Elem, x: Elem, b: Elem) -> Result<Elem> {
    let one = ring.one().map_err(|_| Error::pre("qblem_witness", format!("`{}` has no unit", ring.name())))?;
    let table = PerpTable::new(ring)?;
    qblem_with(ring, &table, ideal, setup, a, x, b, one)
}

#[allow(clippy::too_many_arguments)]
fn qblem_with(ring: &FiniteRing, table: &PerpTable, ideal: &Ideal, setup: &QbSetup, a: Elem, x: Elem, b: Elem, one: Elem) -> Result<Elem> {
    setup.verify(ring, ideal, table)?;
    if setup.split(ring, a).is_none() {
        return Err(Error::pre("qblem_witness", "a is not uw + t1 + t2 with ti ∈ piRqi"));
    }
    if ring.add(ring.mul(x, a), b) != one {
        return Err(Error::pre("qblem_witness", "xa + b differs from 1"));
    }
    budget::charge(ideal.len() as u128 * (ring.size() as u128).pow(2))?;
    ideal
        .members()
        .iter()
        .copied()
        .find(|&y| is_quasi_invertible(ring, table, ring.add(a, ring.mul(y, b))))
        .ok_or_else(|| Error::exhausted("qblem", "no y in I makes a + yb quasi-invertible"))
}

fn general(ctx: &LiftContext, table: &PerpTable, st: &Start) -> Result<QbLift> {
    let r = ctx.source();
    let (one, e) = (r.one()?, r.one_el()?);
    let ideal = ctx.kernel();
    let ker = ideal.members();
    let (x, u1, v1, t, y1) = (r.el(st.x), r.el(st.u1), r.el(st.v1), r.el(st.t), r.el(st.y1));
    let b1 = (e - x * y1) * r.el(st.b);
    let (p, q) = (u1 * v1, v1 * u1);
    let units: Vec<Elem> = r.elements().filter(|&c| is_unit(r, c)).collect();

    // w ∈ q + qIq quasi-invertible in qRq, with a symmetric quasi-inverse w'.
    let mut ws: Vec<(Elem, Elem)> = Vec::new();
    let mut seen = vec![false; r.size()];
    for &i in ker {
        let w = (q + q * r.el(i) * q).index();
        if std::mem::replace(&mut seen[w], true) {
            continue;
        }
        let wp = corner_elements(r, q.index(), q.index()).into_iter().find(|&wp| {
            let (we, wpe) = (r.el(w), r.el(wp));
            we * wpe * we == we && wpe * we * wpe == wpe && table.perp((q - we * wpe).index(), (q - wpe * we).index())
        });
        if let Some(wp) = wp {
            ws.push((w, wp));
        }
    }
    ws.sort_unstable();
    budget::charge(ws.len() as u128 * ker.len() as u128 * (units.len() as u128).pow(2) * r.size() as u128)?;

    // u1 + t + u1·z·q·b1 = w1·a1·w2 with a1 = u1w + t1 + t2.
    let base = u1 + t;
    let mut found = None;
    'search: for &(w, wp) in &ws {
        let setup = QbSetup::new(r, st.u1, st.v1, w, wp)?;
        for &z in ker {
            let lhs = base + u1 * r.el(z) * q * b1;
            for &w1 in &units {
                let w1inv = r.el(inverse(r, w1).expect("unit"));
                for &w2 in &units {
                    let w2inv = r.el(inverse(r, w2).expect("unit"));
                    let a1 = w1inv * lhs * w2inv;
                    if let Some((t1, t2)) = setup.split(r, a1.index()) {
                        found = Some((setup.clone(), z, w1, w2, a1.index(), t1, t2));
                        break 'search;
                    }
                }
            }
        }
    }
    let (setup, z, w1, w2, a1, t1, t2) =
        found.ok_or_else(|| Error::exhausted("(w, z)", "no corner element and kernel element give the required decomposition"))?;
    let (z, w1e, w2e) = (r.el(z), r.el(w1), r.el(w2));
    let w2inv = r.el(inverse(r, w2).expect("unit"));
    let g = e - x * u1 * z * q;
    let xp = (w2e * x * w1e).index();
    let bp = (w2e * g * b1 * w2inv).index();
    let y2 = qblem_with(r, table, ideal, &setup, a1, xp, bp, one).map_err(|err| match err {
        Error::Precondition { msg, .. } => Error::Internal(format!("qblem setup: {msg}")),
        other => other,
    })?;
    let y2e = r.el(y2);
    let u = u1 + t + u1 * z * q * b1 + w1e * y2e * w2e * g * b1;
    let y = y1 + u1 * z * q * (e - x * y1) + w1e * y2e * w2e * g * (e - x * y1);
    let trace = vec![
        ("u1".into(), st.u1),
        ("y1".into(), st.y1),
        ("t".into(), st.t),
        ("v1".into(), st.v1),
        ("b1".into(), b1.index()),
        ("p".into(), p.index()),
        ("q".into(), q.index()),
        ("w".into(), setup.w),
        ("w'".into(), setup.w_prime),
        ("z".into(), z.index()),
        ("w1".into(), w1),
        ("w2".into(), w2),
        ("a1".into(), a1),
        ("t1".into(), t1),
        ("t2".into(), t2),
        ("y2".into(), y2),
    ];
    Ok(QbLift { y: y.index(), u: u.index(), route: QbRoute::General, trace })
}
