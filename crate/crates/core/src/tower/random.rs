use super::Tower;
use crate::error::{Error, Result};
use crate::finring::{all_ideals, catalog_declarations, make_cyclic, quotient, Elem, FiniteRing, RingMorphism, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generated tower together with the draws that produced it.
#[derive(Clone, Debug)]
pub struct RandomTower {
    pub tower: Tower,
    pub seed: u64,
    /// Catalog name of the top stage.
    pub top: String,
    /// Ideal drawn at each step down, starting from the top stage.
    pub draws: Vec<Vec<Elem>>,
}

impl RandomTower {
    /// One line per draw.
    pub fn trace(&self) -> Vec<String> {
        let mut out = vec![format!("seed {}: top stage {}", self.seed, self.top)];
        let depth = self.tower.depth();
        for (i, d) in self.draws.iter().enumerate() {
            let from = depth - i;
            out.push(format!("stage {from} ideal {d:?} gives stage {} = {}", from - 1, self.tower.stage(from - 1).name()));
        }
        out
    }

    /// Spec-language text that rebuilds the tower as `T`, stages `R1 .. RN`.
    pub fn to_spec(&self) -> Result<String> {
        let depth = self.tower.depth();
        let decl = catalog_declarations(&self.top, &format!("R{depth}"))
            .ok_or_else(|| Error::Unsupported(format!("`{}` has no spec form", self.top)))?;
        let mut out = format!("# random tower, seed {}, depth {depth}\n{decl}\n", self.seed);
        for (i, d) in self.draws.iter().enumerate() {
            let n = depth - i;
            let below = self.tower.stage(n - 1);
            if let Structure::Cyclic(m) = below.structure() {
                out.push_str(&format!("ring R{} = cyclic {m}\n", n - 1));
            } else {
                let members: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("ideal I{n} in R{n} = {{{}}}\n", members.join(", ")));
                out.push_str(&format!("ring R{} = quotient R{n} / I{n}\n", n - 1));
            }
        }
        let names: Vec<String> = (1..=depth).map(|n| format!("R{n}")).collect();
        out.push_str(&format!("tower T = [{}]\n", names.join(" <- ")));
        Ok(out)
    }
}

/// Reproducible tower of depth `depth`: a catalog ring on top, then
/// quotients by ideals drawn uniformly among the proper ideals.
pub fn random_tower(catalog: &[FiniteRing], depth: usize, seed: u64) -> Result<RandomTower> {
    if depth == 0 || depth > 6 {
        return Err(Error::OutOfRange(format!("tower depth {depth} outside 1..=6")));
    }
    if catalog.is_empty() {
        return Err(Error::pre("random_tower", "empty catalog"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = catalog[rng.gen_range(0..catalog.len())].clone();
    let mut stages = vec![top.clone()];
    let mut connectors = Vec::new();
    let mut draws = Vec::new();
    for _ in 1..depth {
        let current = stages.last().expect("non-empty").clone();
        let ideals = all_ideals(&current)?;
        let proper: Vec<_> = ideals.iter().filter(|i| !i.is_whole() || current.size() == 1).collect();
        let ideal = proper[rng.gen_range(0..proper.len())];
        let (below, pi) = match current.structure() {
            Structure::Cyclic(n) => {
                let m = n / ideal.len();
                let below = make_cyclic(m)?;
                let pi = RingMorphism::from_fn(&current, &below, |x| x % m, true)?;
                (below, pi)
            }
            _ => quotient(&current, ideal)?,
        };
        draws.push(ideal.members().to_vec());
        stages.push(below);
        connectors.push(pi);
    }
    stages.reverse();
    connectors.reverse();
    let tower = Tower::new(stages, connectors)?;
    Ok(RandomTower { tower, seed, top: top.name().to_string(), draws })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::{catalog, catalog_ring, parse_spec};

    #[test]
    fn depth_one_is_a_catalog_ring() {
        let t = random_tower(catalog(), 1, 0).unwrap();
        assert_eq!(t.tower.depth(), 1);
        assert!(catalog_ring(t.tower.top().name()).is_some());
    }

    #[test]
    fn same_seed_same_spec() {
        for seed in 0..20 {
            let a = random_tower(catalog(), 3, seed).unwrap().to_spec().unwrap();
            let b = random_tower(catalog(), 3, seed).unwrap().to_spec().unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn spec_round_trip() {
        for seed in 0..40 {
            let t = random_tower(catalog(), 4, seed).unwrap();
            let env = parse_spec(&t.to_spec().unwrap()).unwrap();
            let back = env.tower("T").unwrap();
            assert_eq!(back.depth(), t.tower.depth());
            for n in 1..=back.depth() {
                assert!(super::super::identical(back.stage(n), t.tower.stage(n)).unwrap(), "seed {seed} stage {n}");
            }
            for n in 2..=back.depth() {
                assert_eq!(back.connector(n).map(), t.tower.connector(n).map(), "seed {seed} connector {n}");
            }
        }
    }

    #[test]
    fn cyclic_draws_descend() {
        let z8 = make_cyclic(8).unwrap();
        let seed = (0..200).find(|&s| random_tower(std::slice::from_ref(&z8), 3, s).unwrap().draws == vec![vec![0, 4], vec![0, 2]]).unwrap();
        let t = random_tower(std::slice::from_ref(&z8), 3, seed).unwrap();
        let names: Vec<&str> = t.tower.stages().iter().map(|r| r.name()).collect();
        assert_eq!(names, ["Z/2", "Z/4", "Z/8"]);
    }
}
