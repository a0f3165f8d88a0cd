use super::{identical, truncated_limit, Tower};
use crate::error::{Error, Result};
use crate::finring::{ideal_as_ring_with_embedding, make_product, quotient, subset_ring, Elem, FiniteRing, Ideal, RingMorphism, Structure};
use std::collections::HashMap;

/// `R ⊕_T S = {(r, s) : α(r) = β(s)}` with its two projections.
#[derive(Clone, Debug)]
pub struct PullbackRing {
    pub ring: FiniteRing,
    /// Carrier index `i` is the pair `pairs[i]`.
    pub pairs: Vec<(Elem, Elem)>,
    pub left: RingMorphism,
    pub right: RingMorphism,
    pub alpha: RingMorphism,
    pub beta: RingMorphism,
}

impl PullbackRing {
    pub fn index_of(&self, r: Elem, s: Elem) -> Option<Elem> {
        self.pairs.binary_search(&(r, s)).ok()
    }
}

pub fn pullback(alpha: &RingMorphism, beta: &RingMorphism) -> Result<PullbackRing> {
    if !identical(alpha.target(), beta.target())? {
        return Err(Error::pre("pullback", "the two maps have different targets"));
    }
    let (r, s) = (alpha.source(), beta.source());
    let product = make_product(r, s)?;
    let ns = s.size();
    let mut pairs = Vec::new();
    for a in r.elements() {
        for b in s.elements() {
            if alpha.apply(a) == beta.apply(b) {
                pairs.push((a, b));
            }
        }
    }
    let members: Vec<Elem> = pairs.iter().map(|&(a, b)| a * ns + b).collect();
    let name = format!("{}+[{}]{}", r.name(), alpha.target().name(), s.name());
    let (ring, _) = subset_ring(&product, &members, name, Structure::Subring { ring: product.name().to_string() })?;
    let unital_to = |target: &FiniteRing, f: &dyn Fn(Elem) -> Elem| ring.unit().is_some_and(|u| target.unit() == Some(f(u)));
    let left_unital = unital_to(r, &|u| pairs[u].0);
    let right_unital = unital_to(s, &|u| pairs[u].1);
    let left = RingMorphism::new(&ring, r, pairs.iter().map(|p| p.0).collect(), left_unital)?;
    let right = RingMorphism::new(&ring, s, pairs.iter().map(|p| p.1).collect(), right_unital)?;
    Ok(PullbackRing { ring, pairs, left, right, alpha: alpha.clone(), beta: beta.clone() })
}

/// Stagewise squares `R_n → T_n ← S_n` over three towers of equal depth.
#[derive(Clone, Debug)]
pub struct PullbackSquares {
    pub left: Tower,
    pub right: Tower,
    pub apex: Tower,
    pub alphas: Vec<RingMorphism>,
    pub betas: Vec<RingMorphism>,
}

/// The comparison map from the limit of the stage pullbacks to the pullback
/// of the limits, checked element by element.
#[derive(Clone, Debug)]
pub struct PullbackComparison {
    pub stages: Vec<PullbackRing>,
    pub limit_of_pullbacks: FiniteRing,
    pub pullback_of_limits: PullbackRing,
    pub iso: RingMorphism,
    pub is_isomorphism: bool,
}

fn same_map(a: &RingMorphism, b: &RingMorphism) -> bool {
    a.map() == b.map()
}

pub fn check_pullback_limit_commute(sq: &PullbackSquares) -> Result<PullbackComparison> {
    let depth = sq.left.depth();
    if sq.right.depth() != depth || sq.apex.depth() != depth || sq.alphas.len() != depth || sq.betas.len() != depth {
        return Err(Error::pre("check_pullback_limit_commute", "towers and square data differ in depth"));
    }
    for n in 1..=depth {
        let (a, b) = (&sq.alphas[n - 1], &sq.betas[n - 1]);
        if !identical(a.source(), sq.left.stage(n))? || !identical(b.source(), sq.right.stage(n))? || !identical(a.target(), sq.apex.stage(n))? || !identical(b.target(), sq.apex.stage(n))? {
            return Err(Error::pre("check_pullback_limit_commute", format!("square {n} does not match the tower stages")));
        }
        if n >= 2 {
            let down_a = a.then(sq.apex.connector(n))?;
            let across_a = sq.left.connector(n).then(&sq.alphas[n - 2])?;
            let down_b = b.then(sq.apex.connector(n))?;
            let across_b = sq.right.connector(n).then(&sq.betas[n - 2])?;
            if !same_map(&down_a, &across_a) || !same_map(&down_b, &across_b) {
                return Err(Error::pre("check_pullback_limit_commute", format!("square {n} does not commute with the connectors")));
            }
        }
    }
    let stages: Vec<PullbackRing> = (0..depth).map(|i| pullback(&sq.alphas[i], &sq.betas[i])).collect::<Result<_>>()?;
    // Connectors of the pullback system, applied pairwise.
    let down = |n: usize, p: Elem| -> Result<Elem> {
        let (r, s) = stages[n - 1].pairs[p];
        let (r, s) = (sq.left.connector(n).apply(r), sq.right.connector(n).apply(s));
        stages[n - 2].index_of(r, s).ok_or_else(|| Error::Internal(format!("pair ({r}, {s}) escapes pullback {}", n - 1)))
    };
    let (lim_r, _) = truncated_limit(&sq.left)?;
    let (lim_s, _) = truncated_limit(&sq.right)?;
    let top = &stages[depth - 1];
    let limit_of_pullbacks = top.ring.clone();
    let pullback_of_limits = pullback(&sq.alphas[depth - 1], &sq.betas[depth - 1])?;
    let mut map = Vec::with_capacity(limit_of_pullbacks.size());
    for t in limit_of_pullbacks.elements() {
        let mut coords = vec![t];
        for n in (2..=depth).rev() {
            coords.push(down(n, *coords.last().expect("non-empty"))?);
        }
        coords.reverse();
        let rs: Vec<Elem> = coords.iter().enumerate().map(|(i, &p)| stages[i].pairs[p].0).collect();
        let ss: Vec<Elem> = coords.iter().enumerate().map(|(i, &p)| stages[i].pairs[p].1).collect();
        if !super::is_coherent(&sq.left, &rs) || !super::is_coherent(&sq.right, &ss) {
            return Err(Error::Internal("string of pairs splits into incoherent strings".into()));
        }
        let (r, s) = (rs[depth - 1], ss[depth - 1]);
        if r >= lim_r.size() || s >= lim_s.size() {
            return Err(Error::Internal("limit coordinates out of range".into()));
        }
        let image = pullback_of_limits.index_of(r, s).ok_or_else(|| Error::Internal(format!("({r}, {s}) is not in the pullback of the limits")))?;
        map.push(image);
    }
    let unital = limit_of_pullbacks.is_unital() && pullback_of_limits.ring.is_unital();
    let iso = RingMorphism::new(&limit_of_pullbacks, &pullback_of_limits.ring, map, unital)?;
    let is_isomorphism = iso.is_isomorphism();
    Ok(PullbackComparison { stages, limit_of_pullbacks, pullback_of_limits, iso, is_isomorphism })
}

/// An exact sequence `0 → I → R → S → 0`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub ideal: FiniteRing,
    pub ring: FiniteRing,
    pub quotient: FiniteRing,
    pub iota: RingMorphism,
    pub alpha: RingMorphism,
}

impl Extension {
    /// `I → R → R/I` for an ideal of `R`.
    pub fn of_ideal(ideal: &Ideal) -> Result<Self> {
        let (sub, iota) = ideal_as_ring_with_embedding(ideal)?;
        let (quotient, alpha) = quotient(ideal.ring(), ideal)?;
        let out = Extension { ideal: sub, ring: ideal.ring().clone(), quotient, iota, alpha };
        out.check_exact()?;
        Ok(out)
    }

    /// `ι` injective, `α` surjective, `ker α = im ι`.
    pub fn check_exact(&self) -> Result<()> {
        if !self.iota.is_injective() {
            return Err(Error::Verification("ι is not injective".into()));
        }
        if !self.alpha.is_surjective() {
            return Err(Error::Verification("α is not surjective".into()));
        }
        let mut image = self.iota.image();
        image.sort_unstable();
        if image != self.alpha.kernel().members() {
            return Err(Error::Verification("ker α differs from the image of ι".into()));
        }
        Ok(())
    }
}

/// Per-stage extensions `I_n → R_n → S_n` over three towers.
#[derive(Clone, Debug)]
pub struct StageExtensions {
    pub ideals: Tower,
    pub rings: Tower,
    pub quotients: Tower,
    pub iotas: Vec<RingMorphism>,
    pub alphas: Vec<RingMorphism>,
}

/// The extension of limits `lim I → lim R → lim S`.
pub fn limit_extension(ext: &StageExtensions) -> Result<Extension> {
    let depth = ext.rings.depth();
    if ext.ideals.depth() != depth || ext.quotients.depth() != depth || ext.iotas.len() != depth || ext.alphas.len() != depth {
        return Err(Error::pre("limit_extension", "towers and stage maps differ in depth"));
    }
    for n in 1..=depth {
        let stage = Extension {
            ideal: ext.ideals.stage(n).clone(),
            ring: ext.rings.stage(n).clone(),
            quotient: ext.quotients.stage(n).clone(),
            iota: ext.iotas[n - 1].clone(),
            alpha: ext.alphas[n - 1].clone(),
        };
        if !identical(stage.iota.source(), &stage.ideal)? || !identical(stage.iota.target(), &stage.ring)? {
            return Err(Error::pre("limit_extension", format!("ι_{n} does not map I_{n} into R_{n}")));
        }
        if !identical(stage.alpha.source(), &stage.ring)? || !identical(stage.alpha.target(), &stage.quotient)? {
            return Err(Error::pre("limit_extension", format!("α_{n} does not map R_{n} onto S_{n}")));
        }
        stage.check_exact().map_err(|e| Error::pre("limit_extension", format!("stage {n} is not exact: {e}")))?;
        if n >= 2 {
            let a = ext.iotas[n - 1].then(ext.rings.connector(n))?;
            let b = ext.ideals.connector(n).then(&ext.iotas[n - 2])?;
            let c = ext.alphas[n - 1].then(ext.quotients.connector(n))?;
            let d = ext.rings.connector(n).then(&ext.alphas[n - 2])?;
            if !same_map(&a, &b) || !same_map(&c, &d) {
                return Err(Error::pre("limit_extension", format!("the diagram does not commute at stage {n}")));
            }
        }
    }
    let (ideal, _) = truncated_limit(&ext.ideals)?;
    let (ring, _) = truncated_limit(&ext.rings)?;
    let (quotient, _) = truncated_limit(&ext.quotients)?;
    let iota = ext.iotas[depth - 1].clone();
    let alpha = ext.alphas[depth - 1].clone();
    // Coordinatewise, a string of R maps to zero in lim S exactly when it comes from lim I.
    let strings_of_ideal: HashMap<Elem, Elem> = ideal.elements().map(|i| (iota.apply(i), i)).collect();
    for x in ring.elements() {
        let zero_everywhere = (1..=depth).all(|n| ext.alphas[n - 1].apply(ext.rings.project(x, n)) == 0);
        if zero_everywhere != strings_of_ideal.contains_key(&x) {
            return Err(Error::Verification(format!("exactness of the limit sequence fails at {x}")));
        }
    }
    let out = Extension { ideal, ring, quotient, iota, alpha };
    out.check_exact()?;
    Ok(out)
}
