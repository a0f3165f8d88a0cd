use super::LiftContext;
use crate::error::{Error, Result};
use crate::finring::Elem;
use serde::Serialize;

/// A partial inverse lifted along `π`, with the intermediate values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularLift {
    pub y: Elem,
    /// Smallest preimage of `ȳ`.
    pub y_lift: Elem,
    /// Defect `x − x·y_lift·x`, a kernel element.
    pub u: Elem,
    /// Partial inverse of the defect inside the kernel.
    pub v: Elem,
}

/// Lift a partial inverse `ȳ` of `π(x)` to a partial inverse `y` of `x`.
///
/// With `y'` the smallest preimage of `ȳ`, `u = x − xy'x` and `v` the
/// smallest kernel element with `uvu = u`,
/// `y = y' + v − y'xv − vxy' + y'xvxy'`.
pub fn lift_regular(ctx: &LiftContext, x: Elem, ybar: Elem) -> Result<RegularLift> {
    let (r, s) = (ctx.source(), ctx.target());
    let xb = ctx.apply(x);
    if s.mul(s.mul(xb, ybar), xb) != xb {
        return Err(Error::pre("lift_regular", format!("{ybar} is not a partial inverse of π(x) = {xb}")));
    }
    if !ctx.kernel_is_regular() {
        return Err(Error::pre("lift_regular", "the kernel is not a regular ring"));
    }
    let (x, y1) = (r.el(x), r.el(ctx.lift(ybar)));
    let u = x - x * y1 * x;
    let v = ctx
        .kernel()
        .members()
        .iter()
        .map(|&v| r.el(v))
        .find(|&v| u * v * u == u)
        .ok_or_else(|| Error::Internal("kernel regular but defect has no partial inverse".into()))?;
    let y = y1 + v - y1 * x * v - v * x * y1 + y1 * x * v * x * y1;
    if x * y * x != x || ctx.apply(y.index()) != ybar {
        return Err(Error::Internal(format!("lifted partial inverse {} fails its identities", y.index())));
    }
    Ok(RegularLift { y: y.index(), y_lift: y1.index(), u: u.index(), v: v.index() })
}
