//! Multiplier rings of finite non-degenerate rings, built from double
//! centralizers, with proper morphisms, corona rings and the square attached
//! to an extension.

mod solve;

pub use solve::{Solver, ENUMERATION_CAP};

use crate::budget;
use crate::error::{Error, Result};
use crate::finring::{ideal_as_ring_with_embedding, quotient, Elem, FiniteRing, Ideal, RingMorphism, Structure, TABLE_CAP};
use crate::tower::{pullback, Extension, PullbackRing};
use crate::witness::is_nondegenerate;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

/// A pair `(λ, ρ)` of additive maps with `λ(xy) = λ(x)y`, `ρ(xy) = xρ(y)`
/// and `xλ(y) = ρ(x)y`, stored as full value tables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DoubleCentralizer {
    pub lambda: Vec<Elem>,
    pub rho: Vec<Elem>,
}

impl DoubleCentralizer {
    /// `(λ_x, ρ_x)`: left and right multiplication by `x`.
    pub fn of_element(ring: &FiniteRing, x: Elem) -> Self {
        DoubleCentralizer { lambda: ring.elements().map(|y| ring.mul(x, y)).collect(), rho: ring.elements().map(|y| ring.mul(y, x)).collect() }
    }

    pub fn identity(ring: &FiniteRing) -> Self {
        DoubleCentralizer { lambda: ring.elements().collect(), rho: ring.elements().collect() }
    }

    pub fn verify(&self, ring: &FiniteRing) -> Result<()> {
        let n = ring.size();
        if self.lambda.len() != n || self.rho.len() != n {
            return Err(Error::Verification("centralizer tables have the wrong length".into()));
        }
        budget::charge(5 * n as u128 * n as u128)?;
        for x in ring.elements() {
            for y in ring.elements() {
                let fail = |what: &str| Err(Error::Verification(format!("double centralizer fails {what} at ({x}, {y})")));
                if self.lambda[ring.add(x, y)] != ring.add(self.lambda[x], self.lambda[y]) || self.rho[ring.add(x, y)] != ring.add(self.rho[x], self.rho[y]) {
                    return fail("additivity");
                }
                if self.lambda[ring.mul(x, y)] != ring.mul(self.lambda[x], y) {
                    return fail("λ(xy) = λ(x)y");
                }
                if self.rho[ring.mul(x, y)] != ring.mul(x, self.rho[y]) {
                    return fail("ρ(xy) = xρ(y)");
                }
                if ring.mul(x, self.lambda[y]) != ring.mul(self.rho[x], y) {
                    return fail("xλ(y) = ρ(x)y");
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self, ring: &FiniteRing) -> Self {
        let sum = |a: &[Elem], b: &[Elem]| a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect();
        DoubleCentralizer { lambda: sum(&self.lambda, &other.lambda), rho: sum(&self.rho, &other.rho) }
    }

    /// `(λ₁ ∘ λ₂, ρ₂ ∘ ρ₁)`.
    pub fn compose(&self, other: &Self) -> Self {
        DoubleCentralizer { lambda: other.lambda.iter().map(|&v| self.lambda[v]).collect(), rho: self.rho.iter().map(|&v| other.rho[v]).collect() }
    }

    /// Images of the given generators under `λ` and `ρ`.
    pub fn generator_images(&self, gens: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        (gens.iter().map(|&g| self.lambda[g]).collect(), gens.iter().map(|&g| self.rho[g]).collect())
    }
}

/// `M(R)` as an explicit finite ring; carrier index `i` is `elements[i]`.
#[derive(Clone, Debug)]
pub struct MultiplierRing {
    pub base: FiniteRing,
    pub ring: FiniteRing,
    pub elements: Vec<DoubleCentralizer>,
    pub solver: Solver,
    /// `x ↦ (λ_x, ρ_x)`.
    pub embedding: RingMorphism,
    index: HashMap<DoubleCentralizer, Elem>,
}

impl MultiplierRing {
    pub fn index_of(&self, m: &DoubleCentralizer) -> Option<Elem> {
        self.index.get(m).copied()
    }

    /// The embedded copy of the base ring, an ideal of `M(R)`.
    pub fn embedded_ideal(&self) -> Result<Ideal> {
        Ideal::new(&self.ring, self.embedding.image())
    }

    /// The embedding, checked to be an isomorphism; present when the base is unital.
    pub fn base_isomorphism(&self) -> Option<&RingMorphism> {
        self.embedding.is_isomorphism().then_some(&self.embedding)
    }
}

fn degenerate(ring: &FiniteRing) -> Result<()> {
    if let Some(&x) = is_nondegenerate(ring)?.counterexample() {
        return Err(Error::Degenerate { ring: ring.name().to_string(), witness: format!("{x} annihilates the ring from one side") });
    }
    Ok(())
}

pub fn multiplier_ring(ring: &FiniteRing) -> Result<MultiplierRing> {
    degenerate(ring)?;
    let (solver, elements) = solve::solve(ring)?;
    build(ring, solver, elements)
}

/// [`multiplier_ring`] forced through one solver.
pub fn multiplier_ring_with(ring: &FiniteRing, solver: Solver) -> Result<MultiplierRing> {
    degenerate(ring)?;
    let elements = match solver {
        Solver::Enumeration => solve::enumerate(ring)?,
        Solver::Linear => match solve::solve(ring)? {
            (Solver::Linear, els) => els,
            _ => return Err(Error::pre("multiplier_ring_with", format!("`{}` does not have prime exponent", ring.name()))),
        },
    };
    build(ring, solver, elements)
}

fn build(ring: &FiniteRing, solver: Solver, elements: Vec<DoubleCentralizer>) -> Result<MultiplierRing> {
    let m = elements.len();
    if m > TABLE_CAP {
        return Err(Error::SizeBound { what: format!("multiplier ring of {}", ring.name()), size: m as u128, cap: TABLE_CAP as u128 });
    }
    for d in &elements {
        d.verify(ring)?;
    }
    let index: HashMap<DoubleCentralizer, Elem> = elements.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
    let look = |d: &DoubleCentralizer| index.get(d).copied().ok_or_else(|| Error::Internal("centralizers are not closed under the ring operations".into()));
    budget::charge((m * m * 2 * ring.size()) as u128)?;
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for a in &elements {
        for b in &elements {
            add.push(look(&a.add(b, ring))?);
            mul.push(look(&a.compose(b))?);
        }
    }
    let unit = look(&DoubleCentralizer::identity(ring))?;
    let name = format!("M({})", ring.name());
    let mring = FiniteRing::from_tables(name, Structure::Multiplier { ring: ring.name().to_string() }, &add, &mul, Some(unit))?;
    let emb: Vec<Elem> = ring.elements().map(|x| look(&DoubleCentralizer::of_element(ring, x))).collect::<Result<_>>()?;
    let embedding = RingMorphism::new(ring, &mring, emb, ring.is_unital())?;
    Ok(MultiplierRing { base: ring.clone(), ring: mring, elements, solver, embedding, index })
}

/// `x ↦ (λ_x, ρ_x)` with injectivity and essentiality of the image checked.
pub fn embed(ring: &FiniteRing) -> Result<(MultiplierRing, RingMorphism)> {
    let m = multiplier_ring(ring)?;
    let e = m.embedding.clone();
    if !e.is_injective() {
        return Err(Error::Internal("embedding into the multiplier ring is not injective".into()));
    }
    let image = m.embedded_ideal().map_err(|err| Error::Internal(format!("embedded copy is not an ideal: {err}")))?;
    if !is_essential(&m.ring, &image) {
        return Err(Error::Internal("embedded copy is not essential".into()));
    }
    Ok((m, e))
}

/// No nonzero element kills the ideal from either side.
pub fn is_essential(ring: &FiniteRing, ideal: &Ideal) -> bool {
    ring.elements().skip(1).all(|s| ideal.members().iter().any(|&i| ring.mul(s, i) != 0) && ideal.members().iter().any(|&i| ring.mul(i, s) != 0))
}

/// `φ: S → M(I)` induced by an embedding `ι: I → S` of an ideal.
#[derive(Clone, Debug)]
pub struct UniversalMap {
    pub multipliers: MultiplierRing,
    pub phi: RingMorphism,
    pub injective: bool,
    pub essential: bool,
}

/// `φ(y) = (λ_y, ρ_y)` restricted to `I`.
pub fn universal_map(ambient: &FiniteRing, ideal: &Ideal) -> Result<UniversalMap> {
    if !ideal.ring().same(ambient) {
        return Err(Error::pre("universal_map", "ideal belongs to another ring"));
    }
    let (iring, incl) = ideal_as_ring_with_embedding(ideal)?;
    let multipliers = multiplier_ring(&iring)?;
    let phi = induced_map(ambient, &multipliers, &incl)?;
    let injective = phi.is_injective();
    let essential = is_essential(ambient, ideal);
    Ok(UniversalMap { multipliers, phi, injective, essential })
}

fn induced_map(ambient: &FiniteRing, m: &MultiplierRing, iota: &RingMorphism) -> Result<RingMorphism> {
    let iring = &m.base;
    let back: HashMap<Elem, Elem> = iring.elements().map(|i| (iota.apply(i), i)).collect();
    let pull = |v: Elem| back.get(&v).copied().ok_or_else(|| Error::pre("universal_map", "the image of ι is not an ideal"));
    let mut map = Vec::with_capacity(ambient.size());
    for y in ambient.elements() {
        let lambda = iring.elements().map(|i| pull(ambient.mul(y, iota.apply(i)))).collect::<Result<_>>()?;
        let rho = iring.elements().map(|i| pull(ambient.mul(iota.apply(i), y))).collect::<Result<_>>()?;
        let d = DoubleCentralizer { lambda, rho };
        map.push(m.index_of(&d).ok_or_else(|| Error::Internal(format!("φ({y}) is not a double centralizer")))?);
    }
    RingMorphism::new(ambient, &m.ring, map, ambient.is_unital())
}

/// Additive subgroup generated by `items`.
fn additive_span(ring: &FiniteRing, items: &[Elem]) -> Vec<bool> {
    let mut inside = vec![false; ring.size()];
    inside[0] = true;
    let mut span = vec![0];
    for &g in items {
        if inside[g] {
            continue;
        }
        let mut i = 0;
        while i < span.len() {
            let t = ring.add(span[i], g);
            if !inside[t] {
                inside[t] = true;
                span.push(t);
            }
            i += 1;
        }
    }
    inside
}

/// `Sπ(R) = π(R)S = S`, both spans computed additively.
pub fn is_proper(pi: &RingMorphism) -> Result<bool> {
    let (r, s) = (pi.source(), pi.target());
    budget::charge(2 * (r.size() * s.size() * s.size()) as u128)?;
    let image = pi.image();
    let left: Vec<Elem> = image.iter().flat_map(|&a| s.elements().map(move |b| s.mul(a, b))).collect();
    let right: Vec<Elem> = image.iter().flat_map(|&a| s.elements().map(move |b| s.mul(b, a))).collect();
    Ok(additive_span(s, &left).iter().all(|&b| b) && additive_span(s, &right).iter().all(|&b| b))
}

/// A term `π(u)·y` (or `y·π(u)`) of a decomposition.
type Terms = Vec<(Elem, Elem)>;

/// Decompositions `y = Σ π(uᵢ)yᵢ` (or `Σ yᵢπ(uᵢ)`) for every `y`, by a
/// breadth-first walk over products taken in the given order.
fn decompositions(pi: &RingMorphism, left: bool, reverse: bool) -> Result<Vec<Terms>> {
    let (r, s) = (pi.source(), pi.target());
    let mut products: Vec<(Elem, Elem, Elem)> = Vec::new();
    for u in r.elements() {
        for y in s.elements() {
            let v = if left { s.mul(pi.apply(u), y) } else { s.mul(y, pi.apply(u)) };
            if v != 0 {
                products.push((u, y, v));
            }
        }
    }
    if reverse {
        products.reverse();
    }
    let mut seen: Vec<Option<Terms>> = vec![None; s.size()];
    seen[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0]);
    while let Some(cur) = queue.pop_front() {
        for &(u, y, v) in &products {
            let next = s.add(cur, v);
            if seen[next].is_none() {
                let mut terms = seen[cur].clone().expect("visited");
                terms.push((u, y));
                seen[next] = Some(terms);
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().enumerate().map(|(y, t)| t.ok_or_else(|| Error::pre("extend_proper", format!("{y} is not in the span; π is not proper")))).collect()
}

/// `π̄(λ, ρ)` with `λ̄(y) = Σ π(λ(uᵢ))yᵢ` and `ρ̄(y) = Σ yᵢπ(ρ(uᵢ))`.
pub fn extend_proper(pi: &RingMorphism, m: &DoubleCentralizer) -> Result<DoubleCentralizer> {
    let (r, s) = (pi.source(), pi.target());
    degenerate(r)?;
    degenerate(s)?;
    if !is_proper(pi)? {
        return Err(Error::pre("extend_proper", format!("{} -> {} is not proper", r.name(), s.name())));
    }
    m.verify(r)?;
    let eval = |terms: &Terms, left: bool| {
        s.sum(terms.iter().map(|&(u, y)| if left { s.mul(pi.apply(m.lambda[u]), y) } else { s.mul(y, pi.apply(m.rho[u])) }))
    };
    let mut tables = Vec::new();
    for left in [true, false] {
        let first: Vec<Elem> = decompositions(pi, left, false)?.iter().map(|t| eval(t, left)).collect();
        let second: Vec<Elem> = decompositions(pi, left, true)?.iter().map(|t| eval(t, left)).collect();
        if first != second {
            let y = first.iter().zip(&second).position(|(a, b)| a != b).expect("tables differ");
            return Err(Error::Internal(format!("extension depends on the decomposition of {y}")));
        }
        tables.push(first);
    }
    let rho = tables.pop().expect("two tables");
    let lambda = tables.pop().expect("two tables");
    let out = DoubleCentralizer { lambda, rho };
    out.verify(s)?;
    Ok(out)
}

/// `π̄: M(R) → M(S)` for a proper `π`, checked to be a unital morphism
/// extending `π`.
pub fn extend_proper_morphism(pi: &RingMorphism, mr: &MultiplierRing, ms: &MultiplierRing) -> Result<RingMorphism> {
    let map: Vec<Elem> = mr
        .elements
        .iter()
        .map(|m| {
            let d = extend_proper(pi, m)?;
            ms.index_of(&d).ok_or_else(|| Error::Internal("extension is not a multiplier of the target".into()))
        })
        .collect::<Result<_>>()?;
    let bar = RingMorphism::new(&mr.ring, &ms.ring, map, true)?;
    for x in pi.source().elements() {
        if bar.apply(mr.embedding.apply(x)) != ms.embedding.apply(pi.apply(x)) {
            return Err(Error::Internal(format!("π̄ does not extend π at {x}")));
        }
    }
    Ok(bar)
}

/// `Q(R) = M(R)/R` with its quotient map.
pub fn corona(ring: &FiniteRing) -> Result<(MultiplierRing, FiniteRing, RingMorphism)> {
    let m = multiplier_ring(ring)?;
    let ideal = m.embedded_ideal()?;
    let (q, map) = quotient(&m.ring, &ideal)?;
    let q = q.renamed(format!("Q({})", ring.name()));
    let map = RingMorphism::new(&m.ring, &q, map.map().to_vec(), q.is_unital())?;
    Ok((m, q, map))
}

/// The square `R → M(I)`, `S → Q(I)` of an extension, with the comparison
/// map into the pullback `M(I) ⊕_{Q(I)} S`.
#[derive(Clone, Debug)]
pub struct HochschildSquare {
    pub multipliers: MultiplierRing,
    pub corona: FiniteRing,
    pub corona_map: RingMorphism,
    pub phi: RingMorphism,
    /// The invariant `σ: S → Q(I)`.
    pub sigma: RingMorphism,
    pub pullback: PullbackRing,
    /// `r ↦ (φ(r), α(r))`.
    pub comparison: RingMorphism,
    pub is_pullback: bool,
    /// Two elements with the same image, or an element of the pullback that is not hit.
    pub witness: Option<String>,
}

pub fn hochschild_square(ext: &Extension) -> Result<HochschildSquare> {
    ext.check_exact().map_err(|e| Error::pre("hochschild_square", e))?;
    let (multipliers, corona, corona_map) = corona(&ext.ideal)?;
    let phi = induced_map(&ext.ring, &multipliers, &ext.iota)?;
    for i in ext.ideal.elements() {
        if phi.apply(ext.iota.apply(i)) != multipliers.embedding.apply(i) {
            return Err(Error::Internal(format!("φ does not restrict to the embedding at {i}")));
        }
    }
    let s = &ext.quotient;
    let mut sigma = vec![usize::MAX; s.size()];
    for r in ext.ring.elements() {
        let v = corona_map.apply(phi.apply(r));
        let slot = &mut sigma[ext.alpha.apply(r)];
        if *slot != usize::MAX && *slot != v {
            return Err(Error::Internal("σ is not well defined".into()));
        }
        *slot = v;
    }
    let unital = s.is_unital() && corona.is_unital() && sigma[s.unit().expect("checked")] == corona.unit().expect("checked");
    let sigma = RingMorphism::new(s, &corona, sigma, unital)?;
    let pullback = pullback(&corona_map, &sigma)?;
    let map: Vec<Elem> = ext
        .ring
        .elements()
        .map(|r| pullback.index_of(phi.apply(r), ext.alpha.apply(r)).ok_or_else(|| Error::Internal("square does not commute".into())))
        .collect::<Result<_>>()?;
    let unital = ext.ring.unit().is_some() && ext.ring.unit().map(|u| map[u]) == pullback.ring.unit();
    let comparison = RingMorphism::new(&ext.ring, &pullback.ring, map, unital)?;
    let is_pullback = comparison.is_isomorphism();
    let witness = if is_pullback {
        None
    } else {
        let mut hit: HashMap<Elem, Elem> = HashMap::new();
        let clash = ext.ring.elements().find_map(|r| hit.insert(comparison.apply(r), r).map(|prev| format!("{prev} and {r} have the same image")));
        clash.or_else(|| {
            let image = comparison.image();
            pullback.ring.elements().find(|p| !image.contains(p)).map(|p| format!("pair {:?} is not hit", pullback.pairs[p]))
        })
    };
    Ok(HochschildSquare { multipliers, corona, corona_map, phi, sigma, pullback, comparison, is_pullback, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{catalog_ring, ideal_generated, make_cyclic, make_product};

    #[test]
    fn unital_rings_are_their_own_multipliers() {
        for name in ["Z/4", "Z/2xZ/2", "M2(Z/2)", "Z/6"] {
            let r = catalog_ring(name).unwrap();
            let m = multiplier_ring(&r).unwrap();
            assert_eq!(m.ring.size(), r.size(), "{name}");
            assert!(m.base_isomorphism().is_some(), "{name}");
        }
    }

    #[test]
    fn solvers_agree() {
        for name in ["Z/2xZ/2", "Z/3xZ/3", "F4", "T2(Z/2)", "Z/2[e]"] {
            let r = catalog_ring(name).unwrap();
            let a = multiplier_ring_with(&r, Solver::Linear).unwrap();
            let b = multiplier_ring_with(&r, Solver::Enumeration).unwrap();
            assert_eq!(a.elements, b.elements, "{name}");
        }
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let r = catalog_ring("2Z/4").unwrap();
        assert!(matches!(multiplier_ring(&r), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn non_essential_ideal_gives_non_injective_map() {
        let f2 = make_cyclic(2).unwrap();
        let s = make_product(&f2, &f2).unwrap();
        // (1, 0) has index 2.
        let i = ideal_generated(&s, &[2]).unwrap();
        let u = universal_map(&s, &i).unwrap();
        assert!(!u.injective && !u.essential);
        assert_eq!(u.phi.apply(1), 0);
    }

    #[test]
    fn properness() {
        let f2 = make_cyclic(2).unwrap();
        let s = make_product(&f2, &f2).unwrap();
        let first = RingMorphism::from_fn(&s, &s, |x| x & 2, false).unwrap();
        assert!(!is_proper(&first).unwrap());
        let z4 = make_cyclic(4).unwrap();
        let canon = RingMorphism::from_fn(&z4, &f2, |x| x % 2, true).unwrap();
        assert!(is_proper(&canon).unwrap());
        let three = DoubleCentralizer::of_element(&z4, 3);
        assert_eq!(extend_proper(&canon, &three).unwrap(), DoubleCentralizer::of_element(&f2, 1));
    }
}
