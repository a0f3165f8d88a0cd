use super::morphism::RingMorphism;
use super::ring::{Elem, FiniteRing, Structure, TABLE_CAP};
use crate::budget;
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// A validated two-sided ideal, members kept in ascending order.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: FiniteRing,
    members: Vec<Elem>,
    mask: Vec<bool>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.members == other.members
    }
}

impl Eq for Ideal {}

impl Ideal {
    /// Validate an explicit subset as an ideal.
    pub fn new(ring: &FiniteRing, members: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let set: BTreeSet<Elem> = members.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&m| m >= ring.size()) {
            return Err(Error::InvalidIdeal(format!("{bad} is not an element of {}", ring.name())));
        }
        let ideal = Self::unchecked(ring, set.into_iter().collect());
        ideal.validate()?;
        Ok(ideal)
    }

    fn unchecked(ring: &FiniteRing, members: Vec<Elem>) -> Self {
        let mut mask = vec![false; ring.size()];
        for &m in &members {
            mask[m] = true;
        }
        Ideal { ring: ring.clone(), members, mask }
    }

    pub fn zero(ring: &FiniteRing) -> Self {
        Self::unchecked(ring, vec![0])
    }

    pub fn whole(ring: &FiniteRing) -> Self {
        Self::unchecked(ring, ring.elements().collect())
    }

    fn validate(&self) -> Result<()> {
        let r = &self.ring;
        budget::charge(self.members.len() as u128 * (self.members.len() + 2 * r.size()) as u128)?;
        if !self.contains(0) {
            return Err(Error::InvalidIdeal("does not contain zero".into()));
        }
        for &a in &self.members {
            for &b in &self.members {
                if !self.contains(r.add(a, b)) {
                    return Err(Error::InvalidIdeal(format!("{a} + {b} leaves the subset")));
                }
            }
            for x in r.elements() {
                if !self.contains(r.mul(x, a)) || !self.contains(r.mul(a, x)) {
                    return Err(Error::InvalidIdeal(format!("multiplying {a} by {x} leaves the subset")));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.ring.size()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.mask[x]
    }

    /// Position of a member inside [`Ideal::members`].
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn intersection(&self, other: &Ideal) -> Ideal {
        Self::unchecked(&self.ring, self.members.iter().copied().filter(|&m| other.contains(m)).collect())
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let set: BTreeSet<Elem> = self.members.iter().flat_map(|&a| other.members.iter().map(move |&b| (a, b))).map(|(a, b)| self.ring.add(a, b)).collect();
        Self::unchecked(&self.ring, set.into_iter().collect())
    }

    /// Subset `pIp` for an element `p`.
    pub fn corner(&self, p: Elem) -> Vec<Elem> {
        let r = &self.ring;
        let set: BTreeSet<Elem> = self.members.iter().map(|&m| r.mul(r.mul(p, m), p)).collect();
        set.into_iter().collect()
    }
}

/// Smallest two-sided ideal containing `gens`.
pub fn ideal_generated(ring: &FiniteRing, gens: &[Elem]) -> Result<Ideal> {
    let n = ring.size();
    if let Some(&bad) = gens.iter().find(|&&g| g >= n) {
        return Err(Error::OutOfRange(format!("{bad} is not an element of {}", ring.name())));
    }
    budget::charge(n as u128 * (3 * n) as u128)?;
    let mut mask = vec![false; n];
    mask[0] = true;
    let mut members = vec![0];
    let mut queue: Vec<Elem> = Vec::new();
    let push = |x: Elem, mask: &mut Vec<bool>, members: &mut Vec<Elem>, queue: &mut Vec<Elem>| {
        if !mask[x] {
            mask[x] = true;
            members.push(x);
            queue.push(x);
        }
    };
    for &g in gens {
        push(g, &mut mask, &mut members, &mut queue);
    }
    while let Some(g) = queue.pop() {
        for r in 0..n {
            push(ring.mul(r, g), &mut mask, &mut members, &mut queue);
            push(ring.mul(g, r), &mut mask, &mut members, &mut queue);
        }
        let mut i = 0;
        while i < members.len() {
            let s = ring.add(members[i], g);
            push(s, &mut mask, &mut members, &mut queue);
            i += 1;
        }
    }
    members.sort_unstable();
    Ok(Ideal { ring: ring.clone(), members, mask })
}

/// Coset ring `R/I` with cosets ordered by their smallest representative.
pub fn quotient(ring: &FiniteRing, ideal: &Ideal) -> Result<(FiniteRing, RingMorphism)> {
    if !ideal.ring().same(ring) {
        return Err(Error::pre("quotient", "ideal belongs to another ring"));
    }
    let n = ring.size();
    let m = n / ideal.len();
    if m > TABLE_CAP {
        return Err(Error::SizeBound { what: format!("quotient of {}", ring.name()), size: m as u128, cap: TABLE_CAP as u128 });
    }
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::with_capacity(m);
    for x in 0..n {
        if coset[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &i in ideal.members() {
                coset[ring.add(x, i)] = id;
            }
        }
    }
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            add.push(coset[ring.add(a, b)]);
            mul.push(coset[ring.mul(a, b)]);
        }
    }
    let unit = ring.unit().map(|u| coset[u]);
    let name = format!("{}/I{}", ring.name(), ideal.len());
    let structure = Structure::Quotient { ring: ring.name().to_string(), ideal_size: ideal.len() };
    let q = FiniteRing::from_tables(name, structure, &add, &mul, unit)?;
    let pi = RingMorphism::new(ring, &q, coset, ring.is_unital())?;
    Ok((q, pi))
}

/// The members of `I` as a ring in their own right, in ascending order.
pub fn ideal_as_ring(ideal: &Ideal) -> Result<FiniteRing> {
    Ok(ideal_as_ring_with_embedding(ideal)?.0)
}

/// [`ideal_as_ring`] together with the inclusion into the ambient ring.
pub fn ideal_as_ring_with_embedding(ideal: &Ideal) -> Result<(FiniteRing, RingMorphism)> {
    let ambient = ideal.ring();
    let name = format!("I{}<{}", ideal.len(), ambient.name());
    let structure = Structure::IdealRing { ring: ambient.name().to_string() };
    subset_ring(ambient, ideal.members(), name, structure)
}

/// A subset closed under the ring operations, as a ring with its inclusion.
pub fn subring(ambient: &FiniteRing, members: &[Elem]) -> Result<(FiniteRing, RingMorphism)> {
    let name = format!("S{}<{}", members.len(), ambient.name());
    let structure = Structure::Subring { ring: ambient.name().to_string() };
    subset_ring(ambient, members, name, structure)
}

pub(crate) fn subset_ring(ambient: &FiniteRing, members: &[Elem], name: String, structure: Structure) -> Result<(FiniteRing, RingMorphism)> {
    let mut sorted: Vec<Elem> = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.first() != Some(&0) {
        return Err(Error::InvalidRing(format!("{name}: subset does not contain zero")));
    }
    let m = sorted.len();
    if m > TABLE_CAP {
        return Err(Error::SizeBound { what: name, size: m as u128, cap: TABLE_CAP as u128 });
    }
    let pos = |x: Elem| sorted.binary_search(&x).map_err(|_| Error::InvalidRing(format!("subset is not closed: {x} escapes")));
    let mut add = Vec::with_capacity(m * m);
    let mut mul = Vec::with_capacity(m * m);
    for &a in &sorted {
        for &b in &sorted {
            add.push(pos(ambient.add(a, b))?);
            mul.push(pos(ambient.mul(a, b))?);
        }
    }
    let ring = FiniteRing::from_tables(name, structure, &add, &mul, None)?;
    let incl = RingMorphism::new(&ring, ambient, sorted, false)?;
    Ok((ring, incl))
}

/// Every ideal of a ring, sorted by size and then by members.
pub fn all_ideals(ring: &FiniteRing) -> Result<Vec<Ideal>> {
    let n = ring.size();
    budget::charge(n as u128 * n as u128 * 8)?;
    let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let principal: Vec<Ideal> = ring.elements().map(|x| ideal_generated(ring, &[x])).collect::<Result<_>>()?;
    let mut frontier: Vec<Ideal> = Vec::new();
    for p in principal.iter() {
        if found.insert(p.members().to_vec()) {
            frontier.push(p.clone());
        }
    }
    while let Some(i) = frontier.pop() {
        for p in &principal {
            let s = i.sum(p);
            if found.insert(s.members().to_vec()) {
                frontier.push(s);
            }
        }
    }
    let mut out: Vec<Ideal> = found.into_iter().map(|m| Ideal::unchecked(ring, m)).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members().cmp(b.members())));
    Ok(out)
}
