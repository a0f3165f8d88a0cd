use super::{ideal_is_exchange, LiftContext, Trace};
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing, Ideal, RingElement};
use serde::Serialize;

/// Output of the corner-exchange construction for `p − xy ∈ I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AraDecomposition {
    /// Idempotent in `I`.
    pub q: Elem,
    /// Element of `pRp` with `p − r ∈ I`.
    pub r: Elem,
    /// `(p − q)x`.
    pub a: Elem,
    /// `yr`; `a` and `b` are partial inverses of each other.
    pub b: Elem,
    /// Exchange partner of `q` in the corner: `q = w + s − ws` with `w = p − pxyp`.
    pub s: Elem,
}

impl AraDecomposition {
    pub fn verify(&self, ring: &FiniteRing, ideal: &Ideal, p: Elem, x: Elem, y: Elem) -> Result<()> {
        let el = |i| ring.el(i);
        let (p, x, y) = (el(p), el(x), el(y));
        let (q, r, a, b) = (el(self.q), el(self.r), el(self.a), el(self.b));
        let inside = |v: RingElement| ideal.contains(v.index());
        let checks = [
            (q * q == q && inside(q), "q is an idempotent of I"),
            (p * r * p == r, "r lies in pRp"),
            (inside(p - r), "p - r lies in I"),
            (a == (p - q) * x && b == y * r, "a = (p - q)x and b = yr"),
            (a * b * a == a, "aba = a"),
            (b * a * b == b, "bab = b"),
            (inside(a * b - p), "ab - p lies in I"),
            (inside(a - p * x), "a - px lies in I"),
            (inside(b - y * p), "b - yp lies in I"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, what)) => Err(Error::Verification(format!("corner decomposition: {what} fails"))),
            None => Ok(()),
        }
    }
}

/// Given an idempotent `p` with `p − xy ∈ I`, produce `q, r` and the mutually
/// inverse pair `a = (p − q)x`, `b = yr`.
///
/// The exchange condition is applied to `w = p − pxyp` inside `pIp`: the
/// smallest idempotent `q ∈ w·pIp` with `q = w + s − ws` for some `s ∈ pIp`,
/// and then `r = (p − s)(p − q)`.
pub fn ara_decomposition(ring: &FiniteRing, ideal: &Ideal, p: Elem, x: Elem, y: Elem) -> Result<AraDecomposition> {
    ring.one()?;
    if !ideal.ring().same(ring) {
        return Err(Error::pre("ara_decomposition", "ideal belongs to another ring"));
    }
    if !ideal_is_exchange(ideal) {
        return Err(Error::pre("ara_decomposition", "the ideal is not an exchange ring"));
    }
    ara(ring, ideal, p, x, y, "ara_decomposition")
}

pub(crate) fn ara(ring: &FiniteRing, ideal: &Ideal, p: Elem, x: Elem, y: Elem, step: &str) -> Result<AraDecomposition> {
    let el = |i| ring.el(i);
    let (pe, xe, ye) = (el(p), el(x), el(y));
    if pe * pe != pe {
        return Err(Error::pre("ara_decomposition", format!("{step}: p = {p} is not idempotent")));
    }
    if !ideal.contains((pe - xe * ye).index()) {
        return Err(Error::pre("ara_decomposition", format!("{step}: p - xy is not in the ideal")));
    }
    let w = pe - pe * xe * ye * pe;
    let corner = ideal.corner(p);
    let mut qs: Vec<Elem> = corner.iter().map(|&c| (w * el(c)).index()).filter(|&q| ring.mul(q, q) == q).collect();
    qs.sort_unstable();
    qs.dedup();
    for q in qs {
        let qe = el(q);
        if let Some(&s) = corner.iter().find(|&&s| w + el(s) - w * el(s) == qe) {
            let se = el(s);
            let r = (pe - se) * (pe - qe);
            let out = AraDecomposition { q, r: r.index(), a: ((pe - qe) * xe).index(), b: (ye * r).index(), s };
            out.verify(ring, ideal, p, x, y).map_err(|e| Error::Internal(format!("{step}: {e}")))?;
            return Ok(out);
        }
    }
    Err(Error::exhausted(step, "no exchange idempotent for p - pxyp in pIp; the ideal is not an exchange ring"))
}

/// Smallest idempotent preimage of an idempotent `ē`.
pub fn lift_idempotent(ctx: &LiftContext, ebar: Elem) -> Result<Elem> {
    let s = ctx.target();
    if s.mul(ebar, ebar) != ebar {
        return Err(Error::pre("lift_idempotent", format!("{ebar} is not idempotent")));
    }
    let r = ctx.source();
    ctx.fibre(ebar)
        .iter()
        .copied()
        .find(|&e| r.mul(e, e) == e)
        .ok_or_else(|| Error::exhausted("lift_idempotent", format!("no idempotent preimage of {ebar}")))
}

/// How the element `q` was written as `e₂u + (1 − x)v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionRoute {
    /// Coefficients carried along the membership chain.
    Tracked,
    /// Exhaustive search over `Rq × Rq`.
    Search,
}

/// Lifted exchange data: `e = xy`, `y = ye`, `1 − e = (1 − x)(1 − z)`, `(1 − z)e = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeLift {
    pub y: Elem,
    pub z: Elem,
    pub e: Elem,
    pub route: DecompositionRoute,
    /// Computation took place in the unitalization of the source.
    pub unitalized: bool,
    pub trace: Trace,
}

/// The three exchange relations in unit-free form:
/// `e = xy`, `y = ye`, `e = x + z − xz`, `e = ze`.
pub fn exchange_relations(ring: &FiniteRing, x: Elem, y: Elem, z: Elem) -> std::result::Result<Elem, &'static str> {
    let (x, y, z) = (ring.el(x), ring.el(y), ring.el(z));
    let e = x * y;
    if e * e != e {
        return Err("e = xy is not idempotent");
    }
    if y * e != y {
        return Err("y = ye fails");
    }
    if x + z - x * z != e {
        return Err("1 - e = (1 - x)(1 - z) fails");
    }
    if z * e != e {
        return Err("(1 - z)e = 0 fails");
    }
    Ok(e.index())
}

/// Lift exchange data `(ȳ, z̄)` for `π(x)` to `(y, z)` for `x`.
pub fn lift_exchange(ctx: &LiftContext, x: Elem, ybar: Elem, zbar: Elem) -> Result<ExchangeLift> {
    if let Err(what) = exchange_relations(ctx.target(), ctx.apply(x), ybar, zbar) {
        return Err(Error::pre("lift_exchange", format!("target data: {what}")));
    }
    let (wctx, unitalized) = ctx.work()?;
    if !wctx.kernel_is_exchange() {
        return Err(Error::pre("lift_exchange", "the kernel is not an exchange ring"));
    }
    let w = wctx.source();
    let sw = wctx.target();
    let one = w.one_el()?;
    let el = |i| w.el(i);
    let mut trace: Trace = Vec::new();
    let mut note = |name: &str, v: RingElement| trace.push((name.to_string(), v.index()));
    let ideal = wctx.kernel();
    let xe = el(x);

    // First corner decomposition, for p₁ lifting ȳx̄.
    let p1bar = sw.mul(ybar, wctx.apply(x));
    let p1 = el(lift_idempotent(&wctx, p1bar).map_err(|e| step_err("idempotent lift of p1", e))?);
    let y1 = el(wctx.lift(ybar));
    let z1 = el(wctx.lift(zbar));
    let d1 = ara(w, ideal, p1.index(), y1.index(), x, "first corner decomposition")?;
    let (q1, r1, a1, b1) = (el(d1.q), el(d1.r), el(d1.a), el(d1.b));
    let e1 = b1 * a1;
    note("p1", p1);
    note("q1", q1);
    note("e1", e1);

    // Second decomposition on the complementary side.
    let z2 = one - (one - z1) * (one - e1);
    let p2bar = sw.mul(sw.sub(sw.one()?, zbar), sw.sub(sw.one()?, wctx.apply(x)));
    let p2 = el(lift_idempotent(&wctx, p2bar).map_err(|e| step_err("idempotent lift of p2", e))?);
    let d2 = ara(w, ideal, p2.index(), (one - z2).index(), (one - xe).index(), "second corner decomposition")?;
    let (r2, a2) = (el(d2.r), el(d2.a));
    let f = el(d2.b) * a2;
    let q = (one - e1) * (one - f);
    note("z2", z2);
    note("p2", p2);
    note("f", f);
    note("q", q);

    // Exchange inside the corner qRq for qxq.
    let qxq = q * xe * q;
    let qnxq = q * (one - xe) * q;
    let mut corner = None;
    'outer: for c in w.elements() {
        let t = qxq * el(c) * q;
        if t * t != t {
            continue;
        }
        for d in w.elements() {
            if q - t == qnxq * el(d) * q {
                corner = Some((el(c), t, el(d)));
                break 'outer;
            }
        }
    }
    let (c, t, d) = corner.ok_or_else(|| Error::exhausted("corner exchange in qRq", "no idempotent t for qxq"))?;
    let s = xe * q * c * t;
    let e2 = e1 + (one - e1) * s;
    let y2 = r1 * a1 * (one - s) + q * c * t;
    note("t", t);
    note("s", s);
    note("e2", e2);
    if xe * y2 != e2 {
        return Err(Error::Internal("x·y2 differs from e2".into()));
    }

    // q = e₂u + (1 − x)v, first by carrying coefficients through the chain.
    let c_e1 = (e1, w.zero_el());
    let c_s = (one - e1 + e1 * s, w.zero_el());
    let c_f = (w.zero_el(), r2 * a2);
    let c_nq = (c_e1.0 - e1 * f + c_f.0, c_e1.1 + c_f.1);
    let c_nq_s = pair_mul(c_nq, s);
    let c_t = (c_s.0 - c_nq_s.0, c_s.1 - c_nq_s.1);
    let c_nq_tail = pair_mul(c_nq, (one - xe) * q * d * q);
    let c_qt = (w.zero_el() - c_nq_tail.0, q * d * q - c_nq_tail.1);
    let (u, v) = pair_mul((c_qt.0 + c_t.0, c_qt.1 + c_t.1), q);
    let (u, v, route) = if e2 * u + (one - xe) * v == q {
        (u, v, DecompositionRoute::Tracked)
    } else {
        let rq: Vec<RingElement> = {
            let mut set: Vec<Elem> = w.elements().map(|r| (el(r) * q).index()).collect();
            set.sort_unstable();
            set.dedup();
            set.into_iter().map(el).collect()
        };
        let found = rq.iter().flat_map(|&u| rq.iter().map(move |&v| (u, v))).find(|&(u, v)| e2 * u + (one - xe) * v == q);
        let (u, v) = found.ok_or_else(|| Error::exhausted("decomposition q = e2 u + (1 - x) v", "no pair in Rq x Rq"))?;
        (u, v, DecompositionRoute::Search)
    };
    note("u", u);
    note("v", v);

    let z3 = one - (r2 * a2 + v);
    let e3 = e1 * (one - f) + u;
    if (one - xe) * (one - z3) + e2 * e3 != one {
        return Err(Error::Internal("(1 - x)(1 - z3) + e2 e3 differs from 1".into()));
    }
    let e = e2 + e2 * e3 * (one - e2);
    let y = y2 * e;
    let z = one - (one - z3) * (one - e2) * (one - e);
    note("e", e);

    let (y, z, e) = (y.index(), z.index(), e.index());
    exchange_relations(w, x, y, z).map_err(|what| Error::Internal(format!("lifted exchange data: {what}")))?;
    if wctx.apply(y) != ybar || wctx.apply(z) != zbar {
        return Err(Error::Internal("lifted exchange data does not map onto the target data".into()));
    }
    let n = ctx.source().size();
    if unitalized && (y >= n || z >= n) {
        return Err(Error::Internal("lifted exchange data left the non-unital source".into()));
    }
    Ok(ExchangeLift { y, z, e, route, unitalized, trace })
}

fn step_err(step: &str, e: Error) -> Error {
    match e {
        Error::SearchExhausted { msg, .. } => Error::exhausted(step, msg),
        other => other,
    }
}

fn pair_mul<'r>((a, b): (RingElement<'r>, RingElement<'r>), m: RingElement<'r>) -> (RingElement<'r>, RingElement<'r>) {
    (a * m, b * m)
}
