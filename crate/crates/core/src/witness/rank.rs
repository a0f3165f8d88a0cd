use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{Elem, FiniteRing};
use serde::Serialize;

/// A row `a = (a₀, …, a_d)` with an optional right certificate `b`, `a·b = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularRow {
    pub entries: Vec<Elem>,
    pub certificate: Option<Vec<Elem>>,
}

impl UnimodularRow {
    pub fn new(entries: Vec<Elem>, certificate: Option<Vec<Elem>>) -> Self {
        UnimodularRow { entries, certificate }
    }

    /// Attach the smallest certificate, if the row is right unimodular.
    pub fn certified(ring: &FiniteRing, entries: Vec<Elem>) -> Result<Option<Self>> {
        Ok(right_certificate(ring, &entries)?.map(|c| UnimodularRow { entries, certificate: Some(c) }))
    }

    pub fn verify(&self, ring: &FiniteRing) -> Result<()> {
        let one = ring.one()?;
        match &self.certificate {
            Some(c) if c.len() == self.entries.len() && ring.dot(&self.entries, c) == one => Ok(()),
            Some(_) => Err(Error::Verification(format!("certificate does not pair the row {:?} to 1", self.entries))),
            None => Ok(()),
        }
    }

    /// `a₀`.
    pub fn head(&self) -> Elem {
        self.entries[0]
    }

    /// `aʳ = (a₁, …, a_d)`.
    pub fn rest(&self) -> &[Elem] {
        &self.entries[1..]
    }
}

/// Smallest (lexicographic) `c` with `row·c = 1`, found by a reachability sweep.
pub fn right_certificate(ring: &FiniteRing, row: &[Elem]) -> Result<Option<Vec<Elem>>> {
    let one = ring.one()?;
    let n = ring.size();
    let d = row.len();
    budget::charge(d as u128 * n as u128 * n as u128 + 1)?;
    // reach[i][s]: the suffix row[i..] can produce s.
    let mut reach = vec![vec![false; n]; d + 1];
    reach[d][0] = true;
    for i in (0..d).rev() {
        let (lo, hi) = reach.split_at_mut(i + 1);
        let next = &hi[0];
        let here = &mut lo[i];
        for c in 0..n {
            let p = ring.mul(row[i], c);
            for s in 0..n {
                if next[s] {
                    here[ring.add(p, s)] = true;
                }
            }
        }
    }
    if !reach[0][one] {
        return Ok(None);
    }
    let mut want = one;
    let mut cert = Vec::with_capacity(d);
    for i in 0..d {
        let c = (0..n).find(|&c| reach[i + 1][ring.sub(want, ring.mul(row[i], c))]).expect("reachable by construction");
        cert.push(c);
        want = ring.sub(want, ring.mul(row[i], c));
    }
    Ok(Some(cert))
}

/// Lexicographically smallest `b` such that `aʳ + a₀b` is right unimodular,
/// returned with its smallest certificate.
pub fn reduce_row(ring: &FiniteRing, a: &UnimodularRow) -> Result<Option<(Vec<Elem>, Vec<Elem>)>> {
    if a.certificate.is_none() {
        return Err(Error::pre("reduce_row", "row carries no certificate"));
    }
    if a.entries.len() < 2 {
        return Err(Error::pre("reduce_row", "row must have length at least 2"));
    }
    a.verify(ring)?;
    let d = a.entries.len() - 1;
    let n = ring.size();
    budget::charge(budget::pow(n, d).saturating_mul(d as u128 * n as u128 * n as u128))?;
    let mut b = vec![0; d];
    loop {
        let reduced: Vec<Elem> = a.rest().iter().zip(&b).map(|(&ai, &bi)| ring.add(ai, ring.mul(a.head(), bi))).collect();
        if let Some(cert) = right_certificate(ring, &reduced)? {
            return Ok(Some((b, cert)));
        }
        if !increment(&mut b, n) {
            return Ok(None);
        }
    }
}

/// Advance a row through `R^d` in lexicographic order; false after the last row.
pub(crate) fn increment(row: &mut [Elem], n: usize) -> bool {
    for slot in row.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Every right unimodular `(d+1)`-row reduces; the first row that does not otherwise.
pub fn bsr_at(ring: &FiniteRing, d: usize) -> Result<super::Verdict<Vec<Elem>>> {
    ring.one()?;
    if d == 0 {
        return Err(Error::OutOfRange("stable rank is tested for d >= 1".into()));
    }
    let n = ring.size();
    let rows = budget::pow(n, d + 1);
    budget::charge(rows.saturating_mul((d + 1) as u128 * n as u128 * n as u128))?;
    let mut a = vec![0; d + 1];
    loop {
        if let Some(row) = UnimodularRow::certified(ring, a.clone())? {
            if reduce_row(ring, &row)?.is_none() {
                return Ok(super::Verdict::Fails(a));
            }
        }
        if !increment(&mut a, n) {
            return Ok(super::Verdict::Holds);
        }
    }
}

/// Result of scanning `d = 1, …, d_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bsr {
    Exactly(usize),
    Above(usize),
}

/// Smallest `d ≤ d_max` with `bsr_at(R, d)`.
pub fn bsr(ring: &FiniteRing, d_max: usize) -> Result<Bsr> {
    for d in 1..=d_max {
        if bsr_at(ring, d)?.holds() {
            return Ok(Bsr::Exactly(d));
        }
    }
    Ok(Bsr::Above(d_max))
}
