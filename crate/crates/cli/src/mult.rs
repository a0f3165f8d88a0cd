use crate::input::{row, show_row, Instance};
use crate::report::Record;
use crate::{metered, Ctx, Failure};
use clap::Subcommand;
use ringlift::finring::{all_ideals, ideal_as_ring, ideal_generated, Elem, FiniteRing, Ideal};
use ringlift::mult::{corona, extend_proper_morphism, hochschild_square, is_proper, multiplier_ring};
use ringlift::tower::Extension;
use ringlift::witness::is_nondegenerate;

/// Largest multiplier ring whose elements are listed one by one.
const LIST_CAP: usize = 64;

#[derive(Debug, Subcommand)]
pub enum MultCmd {
    /// The multiplier ring M(R) and the corona Q(R) = M(R)/R.
    Compute { target: String },
    /// Extend a proper surjection R -> S to M(R) -> M(S).
    Extend {
        #[command(flatten)]
        instance: Instance,
    },
    /// The square of an extension I -> R -> R/I over M(I) and Q(I).
    Hochschild {
        target: String,
        /// Declared ideal (needs --spec).
        #[arg(long, conflicts_with = "generators")]
        ideal: Option<String>,
        /// Generators of the ideal.
        #[arg(long, value_delimiter = ',')]
        generators: Option<Vec<Elem>>,
    },
}

pub fn run(ctx: &Ctx, cmd: &MultCmd) -> Result<Vec<Record>, Failure> {
    match cmd {
        MultCmd::Compute { target } => {
            let ring = ctx.src.ring(target)?;
            Ok(vec![metered(|| compute(&ring))?])
        }
        MultCmd::Extend { instance } => {
            let lc = instance.resolve(&ctx.src)?;
            Ok(vec![metered(|| extend(lc.pi()))?])
        }
        MultCmd::Hochschild { target, ideal, generators } => {
            let ring = ctx.src.ring(target)?;
            let ideals = match (ideal, generators) {
                (Some(name), None) => {
                    let i = ctx.src.env.as_ref().and_then(|e| e.ideal(name)).cloned().ok_or_else(|| Failure::Input(format!("unknown ideal `{name}`")))?;
                    if !i.ring().same(&ring) {
                        return Err(Failure::Input(format!("`{name}` is not an ideal of `{target}`")));
                    }
                    vec![i]
                }
                (None, Some(g)) => vec![ideal_generated(&ring, &row(&ring, g)?)?],
                _ => {
                    let mut found = Vec::new();
                    for i in all_ideals(&ring)? {
                        if !i.is_zero() && !i.is_whole() && is_nondegenerate(&ideal_as_ring(&i)?)?.holds() {
                            found.push(i);
                        }
                    }
                    if found.is_empty() {
                        return Err(Failure::Input(format!("`{target}` has no proper non-degenerate ideal")));
                    }
                    found
                }
            };
            ideals.iter().map(|i| metered(|| hochschild(i))).collect()
        }
    }
}

fn compute(ring: &FiniteRing) -> Result<Record, Failure> {
    let m = multiplier_ring(ring)?;
    let (_, q, _) = corona(ring)?;
    let bad = m.elements.iter().position(|d| d.verify(ring).is_err());
    let mut rec = Record::new("multiplier ring")
        .input("ring", ring.name())
        .input("size", ring.size())
        .identity("λ(xy) = λ(x)y, ρ(xy) = xρ(y), xλ(y) = ρ(x)y")
        .witness("size", m.ring.size())
        .witness("solver", format!("{:?}", m.solver))
        .witness("corona-size", q.size())
        .witness("embedding", show_row(m.embedding.map()))
        .witness("isomorphic", m.base_isomorphism().is_some());
    if m.ring.size() <= LIST_CAP {
        let gens = ring.additive_generators();
        rec = rec.witness("generators", show_row(&gens));
        for (i, d) in m.elements.iter().enumerate() {
            let (l, r) = d.generator_images(&gens);
            rec = rec.witness(&format!("m{i:02}"), format!("λ {} ρ {}", show_row(&l), show_row(&r)));
        }
    }
    Ok(match bad {
        Some(i) => rec.fail(format!("m{i} is not a double centralizer")),
        None => rec,
    })
}

fn extend(pi: &ringlift::finring::RingMorphism) -> Result<Record, Failure> {
    let rec = Record::new("proper extension").input("source", pi.source().name()).input("target", pi.target().name()).identity("Sπ(R) = π(R)S = S");
    if !is_proper(pi)? {
        return Ok(rec.fail("π is not proper"));
    }
    let mr = multiplier_ring(pi.source())?;
    let ms = multiplier_ring(pi.target())?;
    let ext = extend_proper_morphism(pi, &mr, &ms)?;
    let restricts = pi.source().elements().all(|r| ext.apply(mr.embedding.apply(r)) == ms.embedding.apply(pi.apply(r)));
    Ok(rec.witness("table", show_row(ext.map())).witness("restricts", restricts).witness("surjective", ext.is_surjective()).require(restricts))
}

fn hochschild(ideal: &Ideal) -> Result<Record, Failure> {
    let ext = Extension::of_ideal(ideal)?;
    let sq = hochschild_square(&ext)?;
    let rec = Record::new("hochschild square")
        .input("ring", ext.ring.name())
        .input("ideal", show_row(ideal.members()))
        .identity("R ≅ M(I) ⊕_Q(I) S")
        .witness("multipliers", sq.multipliers.ring.size())
        .witness("corona", sq.corona.size())
        .witness("sigma", show_row(sq.sigma.map()))
        .witness("pullback", sq.pullback.ring.size())
        .witness("comparison", show_row(sq.comparison.map()));
    Ok(match sq.witness {
        Some(w) => rec.fail(w),
        None => rec.require(sq.is_pullback),
    })
}
