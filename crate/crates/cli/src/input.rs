use crate::Failure;
use ringlift::finring::{catalog_ring, make_cyclic, parse_spec, Elem, Env, FiniteRing, RingMorphism, Structure};
use ringlift::lazyring::LazyRing;
use ringlift::lift::LiftContext;
use std::path::Path;

/// Spec-file declarations, or nothing when no file was given.
pub struct Source {
    pub env: Option<Env>,
}

impl Source {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else { return Ok(Source { env: None }) };
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        Ok(Source { env: Some(parse_spec(&text)?) })
    }

    /// A declared ring, a catalog ring, or `Z/n`.
    pub fn ring(&self, name: &str) -> Result<FiniteRing, Failure> {
        if let Some(r) = self.env.as_ref().and_then(|e| e.ring(name)) {
            return Ok(r.clone());
        }
        if let Some(r) = catalog_ring(name) {
            return Ok(r);
        }
        if let Some(n) = name.strip_prefix("Z/").and_then(|n| n.parse::<usize>().ok()) {
            return Ok(make_cyclic(n)?);
        }
        Err(Failure::Input(format!("unknown ring `{name}`")))
    }

    pub fn morphism(&self, name: &str) -> Result<RingMorphism, Failure> {
        self.env.as_ref().and_then(|e| e.morphism(name)).cloned().ok_or_else(|| Failure::Input(format!("unknown morphism `{name}`")))
    }

    /// The canonical map between two named rings.
    pub fn canonical(&self, source: &str, target: &str) -> Result<RingMorphism, Failure> {
        if let Some(env) = &self.env {
            if env.ring(source).is_some() && env.ring(target).is_some() {
                return Ok(env.canonical_morphism(source, target)?);
            }
        }
        let (a, b) = (self.ring(source)?, self.ring(target)?);
        if source == target {
            return Ok(RingMorphism::identity(&a));
        }
        match (a.structure(), b.structure()) {
            (Structure::Cyclic(n), Structure::Cyclic(m)) if n % m == 0 => Ok(RingMorphism::from_fn(&a, &b, |x| x % m, true)?),
            _ => Err(Failure::Input(format!("no canonical map {source} -> {target}; declare one in a spec file"))),
        }
    }

    pub fn lazy(&self, name: Option<&str>, family: &str, base: &str) -> Result<LazyRing, Failure> {
        if let Some(name) = name {
            return self.env.as_ref().and_then(|e| e.lazy(name)).cloned().ok_or_else(|| Failure::Input(format!("unknown lazy ring `{name}`")));
        }
        let base = self.ring(base)?;
        Ok(match family {
            "finsupport" => LazyRing::finsupport(&base)?,
            "finmatrix" => LazyRing::finmatrix(&base)?,
            other => return Err(Failure::Input(format!("unknown family `{other}`; expected finsupport or finmatrix"))),
        })
    }
}

/// Which surjection a lifting instance runs along.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Instance {
    /// Declared morphism (needs --spec).
    #[arg(long)]
    pub morphism: Option<String>,
    /// Source of the canonical map.
    #[arg(long, requires = "target")]
    pub source: Option<String>,
    /// Target of the canonical map.
    #[arg(long, requires = "source")]
    pub target: Option<String>,
    /// Lift along the identity of this ring.
    #[arg(long)]
    pub identity: Option<String>,
}

impl Instance {
    pub fn resolve(&self, src: &Source) -> Result<LiftContext, Failure> {
        let pi = match (&self.morphism, &self.source, &self.target, &self.identity) {
            (Some(m), None, None, None) => src.morphism(m)?,
            (None, Some(a), Some(b), None) => src.canonical(a, b)?,
            (None, None, None, Some(r)) => return Ok(LiftContext::identity(&src.ring(r)?)),
            _ => return Err(Failure::Input("give exactly one of --morphism, --source/--target or --identity".into())),
        };
        Ok(LiftContext::new(pi)?)
    }
}

pub fn element(ring: &FiniteRing, x: Elem) -> Result<Elem, Failure> {
    if x < ring.size() {
        Ok(x)
    } else {
        Err(Failure::Input(format!("{x} is not an element of `{}` (size {})", ring.name(), ring.size())))
    }
}

pub fn row(ring: &FiniteRing, xs: &[Elem]) -> Result<Vec<Elem>, Failure> {
    xs.iter().map(|&x| element(ring, x)).collect()
}

pub fn show_row(xs: &[Elem]) -> String {
    format!("{xs:?}")
}
