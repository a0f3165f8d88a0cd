//! Finding every double centralizer of a finite ring.

use super::DoubleCentralizer;
use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{extend_additive, Elem, FiniteRing};

/// Which solver produced the centralizer list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Solver {
    /// Nullspace of the defining identities over `F_p`.
    Linear,
    /// Enumeration of additive endomorphisms by generator images.
    Enumeration,
}

/// Largest enumeration, `|R|^(2g)`, that is attempted.
pub const ENUMERATION_CAP: u128 = 1 << 24;

pub(crate) fn solve(ring: &FiniteRing) -> Result<(Solver, Vec<DoubleCentralizer>)> {
    let p = ring.exponent();
    if p > 1 && is_prime(p) {
        return Ok((Solver::Linear, linear(ring, p)?));
    }
    Ok((Solver::Enumeration, enumerate(ring)?))
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub(crate) fn enumerate(ring: &FiniteRing) -> Result<Vec<DoubleCentralizer>> {
    let gens = ring.additive_generators();
    let n = ring.size();
    let total = budget::pow(n, 2 * gens.len());
    if total > ENUMERATION_CAP {
        return Err(Error::Unsupported(format!("enumerating centralizers of `{}` needs {total} candidates", ring.name())));
    }
    let per_side = budget::pow(n, gens.len());
    budget::charge(per_side.saturating_mul(2 * (n as u128).pow(2)))?;
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    let mut images = vec![0; gens.len()];
    loop {
        if let Some(map) = extend_additive(ring, ring, &gens, &images) {
            let all = |f: &dyn Fn(Elem, Elem) -> bool| ring.elements().all(|x| ring.elements().all(|y| f(x, y)));
            if all(&|x, y| map[ring.mul(x, y)] == ring.mul(map[x], y)) {
                lefts.push(map.clone());
            }
            if all(&|x, y| map[ring.mul(x, y)] == ring.mul(x, map[y])) {
                rights.push(map);
            }
        }
        if !crate::witness::increment_row(&mut images, n) {
            break;
        }
    }
    budget::charge((lefts.len() as u128 * rights.len() as u128).saturating_mul((n as u128).pow(2)))?;
    let mut out = Vec::new();
    for l in &lefts {
        for r in &rights {
            if ring.elements().all(|x| ring.elements().all(|y| ring.mul(x, l[y]) == ring.mul(r[x], y))) {
                out.push(DoubleCentralizer { lambda: l.clone(), rho: r.clone() });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Rows of a linear system over `F_p`, reduced in place to echelon form.
struct System {
    p: usize,
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl System {
    fn inv(&self, a: usize) -> usize {
        (1..self.p).find(|&b| a * b % self.p == 1).expect("field element is invertible")
    }

    /// Basis of the nullspace.
    fn nullspace(mut self) -> Vec<Vec<usize>> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(k) = (r..self.rows.len()).find(|&k| self.rows[k][c] != 0) else { continue };
            self.rows.swap(r, k);
            let inv = self.inv(self.rows[r][c]);
            for v in self.rows[r].iter_mut() {
                *v = *v * inv % p;
            }
            for k in 0..self.rows.len() {
                if k != r && self.rows[k][c] != 0 {
                    let f = self.rows[k][c];
                    for j in 0..self.cols {
                        self.rows[k][j] = (self.rows[k][j] + p * p - f * self.rows[r][j]) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - self.rows[i][f]) % p;
                }
                v
            })
            .collect()
    }
}

fn linear(ring: &FiniteRing, p: usize) -> Result<Vec<DoubleCentralizer>> {
    let gens = ring.additive_generators();
    let k = gens.len();
    let n = ring.size();
    // coords[x] lists the coefficients of x in the basis `gens`.
    let mut coords = vec![Vec::new(); n];
    let mut c = vec![0; k];
    loop {
        let x = ring.sum(c.iter().zip(&gens).map(|(&ci, &g)| ring.smul(ci, g)));
        coords[x] = c.clone();
        if !crate::witness::increment_row(&mut c, p) {
            break;
        }
    }
    if coords.iter().any(|v| v.is_empty()) {
        return Err(Error::Internal("additive generators are not a basis".into()));
    }
    // Unknowns: L[i][j] at i*k + j and P[i][j] at k² + i*k + j; column j is the image of gens[j].
    let cols = 2 * k * k;
    let l = |i: usize, j: usize| i * k + j;
    let pr = |i: usize, j: usize| k * k + i * k + j;
    budget::charge((3 * k * k * k) as u128 * cols as u128 * cols as u128)?;
    let mut rows = Vec::new();
    let g = |a: usize, b: usize| ring.mul(gens[a], gens[b]);
    for a in 0..k {
        for b in 0..k {
            let ab = &coords[g(a, b)];
            // λ(g_a g_b) = λ(g_a) g_b
            for i in 0..k {
                let mut row = vec![0; cols];
                for (j, &cj) in ab.iter().enumerate() {
                    row[l(i, j)] = (row[l(i, j)] + cj) % p;
                }
                for m in 0..k {
                    let coef = coords[g(m, b)][i];
                    row[l(m, a)] = (row[l(m, a)] + p - coef) % p;
                }
                rows.push(row);
            }
            // ρ(g_a g_b) = g_a ρ(g_b)
            for i in 0..k {
                let mut row = vec![0; cols];
                for (j, &cj) in ab.iter().enumerate() {
                    row[pr(i, j)] = (row[pr(i, j)] + cj) % p;
                }
                for m in 0..k {
                    let coef = coords[g(a, m)][i];
                    row[pr(m, b)] = (row[pr(m, b)] + p - coef) % p;
                }
                rows.push(row);
            }
            // g_a λ(g_b) = ρ(g_a) g_b
            for i in 0..k {
                let mut row = vec![0; cols];
                for m in 0..k {
                    row[l(m, b)] = (row[l(m, b)] + coords[g(a, m)][i]) % p;
                    row[pr(m, a)] = (row[pr(m, a)] + p - coords[g(m, b)][i]) % p;
                }
                rows.push(row);
            }
        }
    }
    let basis = System { p, cols, rows }.nullspace();
    let count = budget::pow(p, basis.len());
    if count > crate::finring::TABLE_CAP as u128 {
        return Err(Error::SizeBound { what: format!("multiplier ring of {}", ring.name()), size: count, cap: crate::finring::TABLE_CAP as u128 });
    }
    budget::charge(count * (k * k + n * k) as u128)?;
    let mut out = Vec::new();
    let mut coef = vec![0; basis.len()];
    loop {
        let mut v = vec![0; cols];
        for (cf, b) in coef.iter().zip(&basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = (*vi + cf * bi) % p;
            }
        }
        let image = |off: usize, j: usize| ring.sum((0..k).map(|i| ring.smul(v[off + i * k + j], gens[i])));
        let lam: Vec<Elem> = (0..k).map(|j| image(0, j)).collect();
        let rho: Vec<Elem> = (0..k).map(|j| image(k * k, j)).collect();
        let lambda = extend_additive(ring, ring, &gens, &lam).ok_or_else(|| Error::Internal("linear map does not extend".into()))?;
        let rho = extend_additive(ring, ring, &gens, &rho).ok_or_else(|| Error::Internal("linear map does not extend".into()))?;
        out.push(DoubleCentralizer { lambda, rho });
        if !crate::witness::increment_row(&mut coef, p) {
            break;
        }
    }
    out.sort();
    Ok(out)
}
