use super::LiftContext;
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing};
use crate::witness::{bsr_at, reduce_row, UnimodularRow};
use serde::Serialize;

/// Rows `b`, `y` and a scalar `z` with `(a + sb)·(x + y·sz) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JarlCompletion {
    pub b: Vec<Elem>,
    pub y: Vec<Elem>,
    pub z: Elem,
}

impl JarlCompletion {
    /// The completed right-hand row `x + y·sz`.
    pub fn completed_row(&self, ring: &FiniteRing, x: &[Elem], s: Elem) -> Vec<Elem> {
        let sz = ring.mul(s, self.z);
        x.iter().zip(&self.y).map(|(&xi, &yi)| ring.add(xi, ring.mul(yi, sz))).collect()
    }

    /// The completed left-hand row `a + sb`.
    pub fn completed_left(&self, ring: &FiniteRing, a: &[Elem], s: Elem) -> Vec<Elem> {
        a.iter().zip(&self.b).map(|(&ai, &bi)| ring.add(ai, ring.mul(s, bi))).collect()
    }

    pub fn verify(&self, ring: &FiniteRing, a: &[Elem], x: &[Elem], s: Elem) -> Result<()> {
        let left = self.completed_left(ring, a, s);
        let right = self.completed_row(ring, x, s);
        if ring.dot(&left, &right) != ring.one()? {
            return Err(Error::Verification("(a + sb)·(x + ysz) differs from 1".into()));
        }
        Ok(())
    }
}

/// Complete `a·x = 1 − s` to `(a + sb)·(x + y·sz) = 1`.
///
/// The row `(s, a)` with certificate `(1, x)` is reduced, giving `b` and a
/// certificate `y` of `a + sb`; then `z = 1 − b·x`.
pub fn jarl_completion(ring: &FiniteRing, a: &[Elem], x: &[Elem], s: Elem) -> Result<JarlCompletion> {
    let one = ring.one()?;
    let d = a.len();
    if d == 0 || x.len() != d {
        return Err(Error::pre("jarl_completion", "rows must be non-empty and of equal length"));
    }
    if ring.dot(a, x) != ring.sub(one, s) {
        return Err(Error::pre("jarl_completion", "a·x differs from 1 - s"));
    }
    let row = UnimodularRow::new([&[s][..], a].concat(), Some([&[one][..], x].concat()));
    let (b, y) = match reduce_row(ring, &row)? {
        Some(found) => found,
        None if bsr_at(ring, d)?.holds() => return Err(Error::Internal("row reduction failed although the stable rank bound holds".into())),
        None => return Err(Error::pre("jarl_completion", format!("stable rank of `{}` exceeds {d}", ring.name()))),
    };
    let z = ring.sub(one, ring.dot(&b, x));
    let out = JarlCompletion { b, y, z };
    out.verify(ring, a, x, s).map_err(|e| Error::Internal(e.to_string()))?;
    Ok(out)
}

/// Lifted rows with `(aʳ + a₀b)·y = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularLift {
    pub b: Vec<Elem>,
    pub y: Vec<Elem>,
    /// Defect of the naive lifts, a kernel element.
    pub defect: Elem,
    pub first: JarlCompletion,
    pub second: JarlCompletion,
}

/// `(aʳ + a₀b)·y` for a row `a = (a₀, aʳ)`.
pub(crate) fn reduced_pairing(ring: &FiniteRing, a: &[Elem], b: &[Elem], y: &[Elem]) -> Elem {
    let row: Vec<Elem> = a[1..].iter().zip(b).map(|(&ai, &bi)| ring.add(ai, ring.mul(a[0], bi))).collect();
    ring.dot(&row, y)
}

/// Lift a reduction `(b̄, ȳ)` of `π(a)` to a reduction `(b, y)` of `a`.
///
/// Naive lifts leave a defect `t` in the kernel. A first completion removes
/// it at the price of a kernel correction on both sides; the correction on
/// the left is then pushed into the `a₀` column by a second completion.
pub fn lift_unimodular(ctx: &LiftContext, a: &[Elem], x: &[Elem], bbar: &[Elem], ybar: &[Elem]) -> Result<UnimodularLift> {
    let (r, s) = (ctx.source(), ctx.target());
    let one = r.one()?;
    let d = bbar.len();
    if d == 0 || a.len() != d + 1 || x.len() != d + 1 || ybar.len() != d {
        return Err(Error::pre("lift_unimodular", "row lengths do not match"));
    }
    if r.dot(a, x) != one {
        return Err(Error::pre("lift_unimodular", "a·x differs from 1"));
    }
    if reduced_pairing(s, &ctx.pi().apply_row(a), bbar, ybar) != s.one()? {
        return Err(Error::pre("lift_unimodular", "the target rows do not reduce π(a)"));
    }
    if !ctx.source_bsr_at(d)? {
        return Err(Error::pre("lift_unimodular", format!("stable rank of `{}` exceeds {d}", r.name())));
    }
    let b1 = ctx.lift_row(bbar);
    let y1 = ctx.lift_row(ybar);
    let big_a: Vec<Elem> = a[1..].iter().zip(&b1).map(|(&ai, &bi)| r.add(ai, r.mul(a[0], bi))).collect();
    let t = r.sub(one, r.dot(&big_a, &y1));

    // (A + tB)·(y' + Y·tZ) = 1 with both corrections in the kernel.
    let first = jarl_completion(r, &big_a, &y1, t).map_err(|e| named("first completion", e))?;
    let s_row: Vec<Elem> = first.b.iter().map(|&bi| r.mul(t, bi)).collect();
    let y_t = first.completed_row(r, &y1, t);
    let scalar = r.sub(x[0], r.dot(&b1, &x[1..]));
    let s_el = r.dot(&s_row, &y_t);

    // 1 = A·(y' + t_row + xʳs) + a₀·scalar·s.
    let x2: Vec<Elem> = y_t.iter().zip(&x[1..]).map(|(&yi, &xi)| r.add(yi, r.mul(xi, s_el))).collect();
    let sigma = r.mul(r.mul(a[0], scalar), s_el);
    let second = jarl_completion(r, &big_a, &x2, sigma).map_err(|e| named("second completion", e))?;
    let coeff = r.mul(scalar, s_el);
    let b: Vec<Elem> = b1.iter().zip(&second.b).map(|(&bi, &ui)| r.add(bi, r.mul(coeff, ui))).collect();
    let y = second.completed_row(r, &x2, sigma);

    if reduced_pairing(r, a, &b, &y) != one {
        return Err(Error::Internal("lifted rows do not reduce a".into()));
    }
    if ctx.pi().apply_row(&b) != bbar || ctx.pi().apply_row(&y) != ybar {
        return Err(Error::Internal("lifted rows do not map onto the target rows".into()));
    }
    Ok(UnimodularLift { b, y, defect: t, first, second })
}

fn named(step: &str, e: Error) -> Error {
    match e {
        Error::Precondition { msg, .. } => Error::Internal(format!("{step}: {msg}")),
        other => other,
    }
}
