use super::ideal::Ideal;
use super::ring::{Elem, FiniteRing};
use crate::budget;
use crate::error::{Error, Result};
use std::sync::Arc;

/// A validated ring homomorphism stored as an explicit map.
#[derive(Clone, Debug)]
pub struct RingMorphism {
    source: FiniteRing,
    target: FiniteRing,
    map: Arc<Vec<Elem>>,
    surjective: bool,
    unital: bool,
}

impl RingMorphism {
    /// Validate `map` exhaustively. With `declared_unital`, both rings must be
    /// unital and `map(1) = 1` is checked as well.
    pub fn new(source: &FiniteRing, target: &FiniteRing, map: Vec<Elem>, declared_unital: bool) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidMorphism(format!("{} -> {}: {msg}", source.name(), target.name())));
        if map.len() != source.size() {
            return bad(format!("map has {} entries, source has {} elements", map.len(), source.size()));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= target.size()) {
            return bad(format!("value {v} outside the target"));
        }
        if map[0] != 0 {
            return bad("zero is not preserved".into());
        }
        let n = source.size();
        budget::charge(2 * n as u128 * n as u128)?;
        for a in 0..n {
            for b in 0..n {
                if map[source.add(a, b)] != target.add(map[a], map[b]) {
                    return bad(format!("addition not preserved at ({a}, {b})"));
                }
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return bad(format!("multiplication not preserved at ({a}, {b})"));
                }
            }
        }
        if declared_unital {
            match (source.unit(), target.unit()) {
                (Some(u), Some(v)) if map[u] == v => {}
                (Some(_), Some(_)) => return bad("unit is not preserved".into()),
                _ => return bad("declared unital between non-unital rings".into()),
            }
        }
        let mut hit = vec![false; target.size()];
        for &v in &map {
            hit[v] = true;
        }
        let surjective = hit.iter().all(|&h| h);
        Ok(RingMorphism { source: source.clone(), target: target.clone(), map: Arc::new(map), surjective, unital: declared_unital })
    }

    pub fn from_fn(source: &FiniteRing, target: &FiniteRing, f: impl Fn(Elem) -> Elem, declared_unital: bool) -> Result<Self> {
        Self::new(source, target, source.elements().map(f).collect(), declared_unital)
    }

    pub fn identity(ring: &FiniteRing) -> Self {
        RingMorphism { source: ring.clone(), target: ring.clone(), map: Arc::new(ring.elements().collect()), surjective: true, unital: ring.is_unital() }
    }

    pub fn zero_map(source: &FiniteRing, target: &FiniteRing) -> Self {
        RingMorphism { source: source.clone(), target: target.clone(), map: Arc::new(vec![0; source.size()]), surjective: target.size() == 1, unital: false }
    }

    pub fn source(&self) -> &FiniteRing {
        &self.source
    }

    pub fn target(&self) -> &FiniteRing {
        &self.target
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn apply_row(&self, xs: &[Elem]) -> Vec<Elem> {
        xs.iter().map(|&x| self.map[x]).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.surjective && self.is_injective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingMorphism) -> Result<RingMorphism> {
        if !self.target.same(&other.source) {
            return Err(Error::InvalidMorphism(format!("cannot compose {} -> {} with {} -> {}", self.source.name(), self.target.name(), other.source.name(), other.target.name())));
        }
        let map: Vec<Elem> = self.map.iter().map(|&x| other.map[x]).collect();
        let mut hit = vec![false; other.target.size()];
        for &v in &map {
            hit[v] = true;
        }
        Ok(RingMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            map: Arc::new(map),
            surjective: hit.iter().all(|&h| h),
            unital: self.unital && other.unital,
        })
    }

    pub fn kernel(&self) -> Ideal {
        Ideal::new(&self.source, self.source.elements().filter(|&x| self.map[x] == 0)).expect("kernel of a validated morphism is an ideal")
    }

    pub fn image(&self) -> Vec<Elem> {
        let mut hit = vec![false; self.target.size()];
        for &v in self.map.iter() {
            hit[v] = true;
        }
        self.target.elements().filter(|&t| hit[t]).collect()
    }

    /// Preimages of every target element, each list in ascending order.
    pub fn fibres(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.target.size()];
        for x in self.source.elements() {
            out[self.map[x]].push(x);
        }
        out
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<RingMorphism> {
        if !self.is_isomorphism() {
            return Err(Error::InvalidMorphism("only isomorphisms can be inverted".into()));
        }
        let mut inv = vec![0; self.target.size()];
        for (x, &v) in self.map.iter().enumerate() {
            inv[v] = x;
        }
        Ok(RingMorphism { source: self.target.clone(), target: self.source.clone(), map: Arc::new(inv), surjective: true, unital: self.unital })
    }
}

/// First isomorphism `a -> b` found by backtracking over additive generators.
///
/// Meant for small rings; the search is charged against the budget.
pub fn find_isomorphism(a: &FiniteRing, b: &FiniteRing) -> Result<Option<RingMorphism>> {
    if a.size() != b.size() || a.is_unital() != b.is_unital() || a.exponent() != b.exponent() {
        return Ok(None);
    }
    let gens = a.additive_generators();
    budget::charge(budget::pow(b.size(), gens.len()).saturating_mul(a.size() as u128))?;
    let order = |r: &FiniteRing, x: Elem| {
        let (mut k, mut acc) = (1, x);
        while acc != 0 {
            acc = r.add(acc, x);
            k += 1;
        }
        k
    };
    let mut images = vec![0; gens.len()];
    fn rec(a: &FiniteRing, b: &FiniteRing, gens: &[Elem], images: &mut Vec<Elem>, i: usize, order: &dyn Fn(&FiniteRing, Elem) -> usize) -> Option<Vec<Elem>> {
        if i == gens.len() {
            let map = extend_additive(a, b, gens, images)?;
            return RingMorphism::new(a, b, map.clone(), false).ok().filter(|m| m.is_isomorphism()).map(|_| map);
        }
        let want = order(a, gens[i]);
        for t in b.elements() {
            if order(b, t) == want {
                images[i] = t;
                if let Some(m) = rec(a, b, gens, images, i + 1, order) {
                    return Some(m);
                }
            }
        }
        None
    }
    Ok(rec(a, b, &gens, &mut images, 0, &order).map(|map| RingMorphism::new(a, b, map, a.is_unital()).expect("validated above")))
}

/// Extend generator images additively; `None` if inconsistent.
pub(crate) fn extend_additive(a: &FiniteRing, b: &FiniteRing, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    let mut map = vec![usize::MAX; a.size()];
    map[0] = 0;
    let mut known = vec![0];
    for (&g, &img) in gens.iter().zip(images) {
        let mut i = 0;
        while i < known.len() {
            let s = known[i];
            let t = a.add(s, g);
            let v = b.add(map[s], img);
            if map[t] == usize::MAX {
                map[t] = v;
                known.push(t);
            } else if map[t] != v {
                return None;
            }
            i += 1;
        }
    }
    if map.iter().any(|&v| v == usize::MAX) {
        return None;
    }
    Some(map)
}
