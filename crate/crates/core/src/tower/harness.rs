use super::{string, CoherentString, Tower};
use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing};
use crate::lift::{lift_exchange, lift_regular, lift_unimodular, qb_lift_step, QbRoute};
use crate::witness::{
    bsr_at, exchange_data, is_exchange, is_qb, is_quasi_invertible, is_regular_ring, partial_inverse, qb_solution, reduce_row, right_certificate, ExchangeMode,
    Handedness, PerpTable, QbEquation, UnimodularRow,
};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularEntry {
    pub x: CoherentString,
    pub y: CoherentString,
}

/// Coherent partial inverses for every string, by top index.
pub fn stagewise_regular(tower: &Tower) -> Result<Vec<RegularEntry>> {
    for (i, r) in tower.stages().iter().enumerate() {
        if let Some(&x) = is_regular_ring(r)?.counterexample() {
            return Err(Error::pre("stagewise_regular", format!("{x} has no partial inverse in `{}`", r.name())).at_stage(i + 1));
        }
    }
    for n in 2..=tower.depth() {
        if !tower.context(n).kernel_is_regular() {
            return Err(Error::pre("stagewise_regular", "connector kernel is not regular").at_stage(n));
        }
    }
    tower.top().elements().map(|top| regular_string(tower, top)).collect()
}

fn regular_string(tower: &Tower, top: Elem) -> Result<RegularEntry> {
    let x = string(tower, top);
    let first = partial_inverse(tower.stage(1), x.at(1)).ok_or_else(|| Error::Internal("regular stage without partial inverse".into()))?;
    let mut ys = vec![first];
    for n in 2..=tower.depth() {
        let lift = lift_regular(tower.context(n), x.at(n), ys[n - 2]).map_err(|e| e.at_stage(n))?;
        ys.push(lift.y);
    }
    Ok(RegularEntry { x, y: CoherentString { coords: ys } })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeEntry {
    pub x: CoherentString,
    pub y: CoherentString,
    pub z: CoherentString,
    /// `e = xy` at every stage.
    pub e: CoherentString,
}

/// Coherent exchange data `(y, z)` for every string, by top index.
///
/// At stage 1 the smallest witness `e = xr`, `e = x + y' − xy'` is
/// normalized to `y = re` and `z = y' + e − y'e`, which also satisfy
/// `y = ye` and `ze = e`.
pub fn stagewise_exchange(tower: &Tower) -> Result<Vec<ExchangeEntry>> {
    for (i, r) in tower.stages().iter().enumerate() {
        if let Some(&x) = is_exchange(r, ExchangeMode::NonUnital)?.counterexample() {
            return Err(Error::pre("stagewise_exchange", format!("`{}` fails the exchange condition at {x}", r.name())).at_stage(i + 1));
        }
    }
    tower.top().elements().map(|top| exchange_string(tower, top)).collect()
}

fn exchange_string(tower: &Tower, top: Elem) -> Result<ExchangeEntry> {
    let x = string(tower, top);
    let r1 = tower.stage(1);
    let (mut y, mut z) = exchange_data(r1, x.at(1))?.ok_or_else(|| Error::Internal("exchange stage without witness".into()))?;
    let mut out = ExchangeEntry { x: x.clone(), y: CoherentString { coords: vec![y] }, z: CoherentString { coords: vec![z] }, e: CoherentString { coords: vec![r1.mul(x.at(1), y)] } };
    for n in 2..=tower.depth() {
        let lift = lift_exchange(tower.context(n), x.at(n), y, z).map_err(|e| e.at_stage(n))?;
        (y, z) = (lift.y, lift.z);
        out.y.coords.push(y);
        out.z.coords.push(z);
        out.e.coords.push(tower.stage(n).mul(x.at(n), y));
    }
    Ok(out)
}

/// A row at every stage, bottom first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RowString {
    pub rows: Vec<Vec<Elem>>,
}

impl RowString {
    pub fn at(&self, n: usize) -> &[Elem] {
        &self.rows[n - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BsrEntry {
    pub a: RowString,
    /// Right certificate of `a`, `a·x = 1`.
    pub x: RowString,
    pub b: RowString,
    pub y: RowString,
}

/// Coherent reductions of every right unimodular `(d+1)`-row of the top stage.
pub fn stagewise_bsr(tower: &Tower, d: usize) -> Result<Vec<BsrEntry>> {
    let n = tower.top().size();
    budget::charge(budget::pow(n, d + 1))?;
    let mut rows = Vec::new();
    let mut a = vec![0; d + 1];
    loop {
        rows.push(a.clone());
        if !crate::witness::increment_row(&mut a, n) {
            break;
        }
    }
    stagewise_bsr_rows(tower, d, &rows)
}

/// [`stagewise_bsr`] restricted to the given top rows; rows that are not
/// right unimodular are skipped.
pub fn stagewise_bsr_rows(tower: &Tower, d: usize, rows: &[Vec<Elem>]) -> Result<Vec<BsrEntry>> {
    if d == 0 {
        return Err(Error::OutOfRange("stable rank is tested for d >= 1".into()));
    }
    for (i, r) in tower.stages().iter().enumerate() {
        if !bsr_at(r, d)?.holds() {
            return Err(Error::pre("stagewise_bsr", format!("`{}` has stable rank above {d}", r.name())).at_stage(i + 1));
        }
    }
    let top = tower.top();
    let mut out = Vec::new();
    for row in rows {
        if row.len() != d + 1 {
            return Err(Error::pre("stagewise_bsr", format!("row {row:?} does not have length {}", d + 1)));
        }
        let Some(cert) = right_certificate(top, row)? else { continue };
        out.push(bsr_string(tower, row, &cert)?);
    }
    Ok(out)
}

fn bsr_string(tower: &Tower, row: &[Elem], cert: &[Elem]) -> Result<BsrEntry> {
    let depth = tower.depth();
    let a = RowString { rows: (1..=depth).map(|n| tower.project_row(row, n)).collect() };
    let x = RowString { rows: (1..=depth).map(|n| tower.project_row(cert, n)).collect() };
    let first = UnimodularRow::new(a.at(1).to_vec(), Some(x.at(1).to_vec()));
    let (b1, y1) = reduce_row(tower.stage(1), &first)
        .map_err(|e| e.at_stage(1))?
        .ok_or_else(|| Error::Internal("stage 1 row does not reduce although bsr_at holds".into()))?;
    let (mut b, mut y) = (RowString { rows: vec![b1] }, RowString { rows: vec![y1] });
    for n in 2..=depth {
        let lift = lift_unimodular(tower.context(n), a.at(n), x.at(n), b.at(n - 1), y.at(n - 1)).map_err(|e| e.at_stage(n))?;
        b.rows.push(lift.b);
        y.rows.push(lift.y);
    }
    Ok(BsrEntry { a, x, b, y })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QbEntry {
    pub x: CoherentString,
    pub a: CoherentString,
    pub b: CoherentString,
    pub y: CoherentString,
    pub u: CoherentString,
    /// Route taken at stages 2 and up.
    pub routes: Vec<QbRoute>,
}

/// Coherent `(y, u)` for every Bass equation `xa + b = 1` of the top stage,
/// in `(x, a)` index order.
pub fn stagewise_qb(tower: &Tower) -> Result<Vec<QbEntry>> {
    stagewise_qb_with(tower, QbRoute::Auto)
}

pub(crate) fn stagewise_qb_with(tower: &Tower, route: QbRoute) -> Result<Vec<QbEntry>> {
    for (i, r) in tower.stages().iter().enumerate() {
        if let Some(eq) = is_qb(r, Handedness::Left)?.counterexample() {
            return Err(Error::pre("stagewise_qb", format!("`{}` is not QB: xa + b = 1 with (a, x) = ({}, {})", r.name(), eq.a, eq.x)).at_stage(i + 1));
        }
    }
    let r1 = tower.stage(1);
    let table = PerpTable::new(r1)?;
    let qi: Vec<bool> = r1.elements().map(|u| is_quasi_invertible(r1, &table, u)).collect();
    let top = tower.top();
    let one = top.one()?;
    let mut out = Vec::new();
    for xt in top.elements() {
        for at in top.elements() {
            let bt = top.sub(one, top.mul(xt, at));
            out.push(qb_string(tower, r1, &qi, xt, at, bt, route)?);
        }
    }
    Ok(out)
}

fn qb_string(tower: &Tower, r1: &FiniteRing, qi: &[bool], xt: Elem, at: Elem, bt: Elem, route: QbRoute) -> Result<QbEntry> {
    let (x, a, b) = (string(tower, xt), string(tower, at), string(tower, bt));
    let eq = QbEquation { a: a.at(1), x: x.at(1), b: b.at(1) };
    let y1 = qb_solution(r1, qi, Handedness::Left, &eq).ok_or_else(|| Error::Internal("QB stage without solution".into()))?;
    let mut y = vec![y1];
    let mut u = vec![r1.add(eq.a, r1.mul(y1, eq.b))];
    let mut routes = Vec::new();
    for n in 2..=tower.depth() {
        let lift = qb_lift_step(tower.context(n), x.at(n), a.at(n), b.at(n), y[n - 2], u[n - 2], route).map_err(|e| e.at_stage(n))?;
        y.push(lift.y);
        u.push(lift.u);
        routes.push(lift.route);
    }
    Ok(QbEntry { x, a, b, y: CoherentString { coords: y }, u: CoherentString { coords: u }, routes })
}
