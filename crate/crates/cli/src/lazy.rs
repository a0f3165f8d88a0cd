use crate::report::Record;
use crate::{metered, Ctx, Failure};
use clap::Subcommand;
use ringlift::lazyring::{
    approx_unit, constant_ideal_analysis, even_odd_extension, invlimsigma_probe, multiplier_as_limit, sigma_unit_of_extension, tietze_lift, Family, IdealChain,
    InvLimShape, LazyMorphism, LazyRing, MultiplierOracle,
};

#[derive(Debug, Subcommand)]
pub enum LazyCmd {
    /// Lift multipliers along the restriction to even coordinates.
    Tietze {
        #[arg(long, default_value = "Z/2")]
        base: String,
        /// unit, zero, mod:M:R (indicator of k ≡ R mod M) or points:I+J+...
        #[arg(long, value_delimiter = ',', default_values_t = ["unit".to_string(), "zero".to_string(), "mod:2:0".to_string(), "mod:3:1".to_string()])]
        xbar: Vec<String>,
    },
    /// Round trip between multipliers and coherent strings.
    Limit {
        #[arg(long, default_value = "finsupport")]
        family: String,
        #[arg(long, default_value = "Z/2")]
        base: String,
        /// Declared lazy ring (needs --spec); overrides --family and --base.
        #[arg(long)]
        lazy: Option<String>,
    },
    /// σ-unit of the even/odd extension.
    Sigma {
        #[arg(long, default_value = "Z/2")]
        base: String,
        #[arg(long)]
        lazy: Option<String>,
    },
    /// Decide σ-unitality of a small inverse system.
    Probe {
        /// truncations, identity or even-collapse.
        #[arg(long, default_value = "even-collapse")]
        shape: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value = "Z/2")]
        base: String,
    },
    /// Which of I_1, I_2, … meet ker ρ_m.
    Constant {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value = "Z/2")]
        base: String,
    },
}

pub fn run(ctx: &Ctx, cmd: &LazyCmd) -> Result<Vec<Record>, Failure> {
    match cmd {
        LazyCmd::Tietze { base, xbar } => {
            let ring = ctx.src.lazy(None, "finsupport", base)?;
            let n = ctx.precision.unwrap_or(16);
            let pi = LazyMorphism::evens(&ring)?;
            let oracles = xbar.iter().map(|s| multiplier(&ring, s)).collect::<Result<Vec<_>, _>>()?;
            oracles.iter().map(|x| metered(|| tietze(&pi, x, n))).collect()
        }
        LazyCmd::Limit { family, base, lazy } => {
            let ring = ctx.src.lazy(lazy.as_deref(), family, base)?;
            let n = ctx.precision.unwrap_or(8);
            let maps = multiplier_as_limit(&ring, n)?;
            let probes = ring.probes(n, 60);
            let mut tests = vec![MultiplierOracle::unit(&ring), MultiplierOracle::zero(&ring)];
            tests.push(match ring.family() {
                Family::FinSupport => MultiplierOracle::from_function(&ring, "k mod 3 = 0", |k| usize::from(k % 3 == 0))?,
                Family::FinMatrix => MultiplierOracle::from_matrix(&ring, "shift", |i, j| usize::from(i == j + 1), |k| k + 2),
            });
            tests.extend(ring.probes(n.min(4), 3).iter().map(|p| MultiplierOracle::from_element(&ring, p)));
            tests
                .iter()
                .map(|x| {
                    metered(|| {
                        let rec = Record::new("limit round trip")
                            .input("ring", ring.name())
                            .input("precision", n)
                            .input("multiplier", x.label())
                            .identity("backward ∘ forward = id on probes, forward ∘ backward = id")
                            .witness("probes", probes.len());
                        Ok(match maps.round_trip(x, &probes)? {
                            None => rec,
                            Some(why) => rec.fail(why),
                        })
                    })
                })
                .collect()
        }
        LazyCmd::Sigma { base, lazy } => {
            let ring = ctx.src.lazy(lazy.as_deref(), "finsupport", base)?;
            let count = ctx.precision.unwrap_or(8);
            Ok(vec![metered(|| {
                let ext = even_odd_extension(&ring)?;
                let probes = ring.probes(2 * count, 60);
                let s = sigma_unit_of_extension(&ext, count, &probes, count)?;
                let nested = s.v.windows(2).all(|w| ring.mul(&w[1], &w[0]) == w[0] && ring.mul(&w[0], &w[1]) == w[0]);
                let mut rec = Record::new("sigma unit")
                    .input("extension", &ext.label)
                    .input("count", count)
                    .identity("v_{i+1} v_i = v_i v_{i+1} = v_i, each probe fixed by v_i eventually")
                    .witness("indices", format!("{:?}", s.indices))
                    .witness("certified", s.certified.len());
                for (i, v) in s.v.iter().enumerate() {
                    rec = rec.witness(&format!("v{:02}", i + 1), v);
                }
                Ok(rec.require(nested && s.certified.len() == probes.len()))
            })?])
        }
        LazyCmd::Probe { shape, depth, base } => {
            let shape: InvLimShape = shape.parse().map_err(|e: ringlift::Error| Failure::Input(e.to_string()))?;
            let base = ctx.src.ring(base)?;
            Ok(vec![metered(|| {
                let v = invlimsigma_probe(shape, &base, *depth)?;
                let mut rec = Record::new("inverse limit probe")
                    .input("shape", shape_name(shape))
                    .input("depth", v.depth)
                    .input("base", base.name())
                    .witness("stages-sigma-unital", v.stages_sigma_unital)
                    .witness("kernels-have-units", v.kernels_have_units)
                    .witness("sigma-unital", v.sigma_unital)
                    .witness("diagonal", format!("{:?}", v.diagonal));
                for (i, line) in v.trace.iter().enumerate() {
                    rec = rec.witness(&format!("trace.{i:02}"), line);
                }
                Ok(rec)
            })?])
        }
        LazyCmd::Constant { m, k, window, base } => {
            let ring = ctx.src.lazy(None, "finsupport", base)?;
            let chain = IdealChain::new(&ring)?;
            let window = window.unwrap_or((*m).max(*k) + 4);
            let rep = constant_ideal_analysis(&chain, *m, *k, window)?;
            let mut out: Vec<Record> = rep
                .decisions
                .iter()
                .map(|d| {
                    let rec = Record::new(format!("I_{} constant", d.k)).input("m", rep.m).input("window", rep.window).witness("constant", d.constant);
                    match &d.witness {
                        Some(w) => rec.witness("meets-kernel", w),
                        None => rec,
                    }
                })
                .collect();
            out.push(Record::new("annihilator").input("m", rep.m).input("window", rep.window).witness("perp-points", rep.perp).witness("union-covers", rep.union_covers).require(rep.union_covers));
            Ok(out)
        }
    }
}

fn shape_name(s: InvLimShape) -> &'static str {
    match s {
        InvLimShape::Truncations => "truncations",
        InvLimShape::Identity => "identity",
        InvLimShape::EvenCollapse => "even-collapse",
    }
}

fn multiplier(ring: &LazyRing, spec: &str) -> Result<MultiplierOracle, Failure> {
    let bad = || Failure::Input(format!("bad multiplier `{spec}`; expected unit, zero, mod:M:R or points:I+J+..."));
    let parts: Vec<&str> = spec.split(':').collect();
    Ok(match parts.as_slice() {
        ["unit"] => MultiplierOracle::unit(ring),
        ["zero"] => MultiplierOracle::zero(ring),
        ["mod", m, r] => {
            let m: usize = m.parse().map_err(|_| bad())?;
            let r: usize = r.parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            let one = ring.base().one()?;
            MultiplierOracle::from_function(ring, spec, move |k| if k % m == r % m { one } else { 0 })?
        }
        ["points", list] => {
            let pts = list.split('+').map(|p| p.parse::<usize>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
            MultiplierOracle::from_element(ring, &ring.indicator(pts)).relabel(spec)
        }
        _ => return Err(bad()),
    })
}

fn tietze(pi: &LazyMorphism, xbar: &MultiplierOracle, n: usize) -> Result<Record, Failure> {
    let r = pi.source();
    let t = tietze_lift(pi, xbar, n)?;
    let unit = approx_unit(r);
    let e = |k: usize| if k == 0 { ringlift::lazyring::LazyElem::zero() } else { unit.e(t.subsequence[k - 1]) };
    // (x_k − x_{k−1}) e_{k−3} = 0 on both sides.
    let unstable = (2..=t.sequence.len()).find(|&k| {
        let d = r.sub(&t.sequence[k - 1], &t.sequence[k - 2]);
        let ek = e(k.saturating_sub(3));
        !r.mul(&d, &ek).is_zero() || !r.mul(&ek, &d).is_zero()
    });
    let s = pi.target();
    let probes = s.probes(pi.target_window(n), 48);
    let mut agreed = 0;
    let mut disagreement = None;
    for y in &probes {
        let l = pi.lift(y);
        if l.window() > n {
            continue;
        }
        if pi.apply(&t.oracle.act_left(&l)?) == xbar.act_left(y)? && pi.apply(&t.oracle.act_right(&l)?) == xbar.act_right(y)? {
            agreed += 1;
        } else if disagreement.is_none() {
            disagreement = Some(y.to_string());
        }
    }
    let rec = Record::new("tietze lift")
        .input("morphism", pi.describe())
        .input("x̄", xbar.label())
        .input("precision", n)
        .identity("π̄(x) = x̄ on probes, (x_k − x_{k−1}) e_{k−3} = 0")
        .witness("subsequence", format!("{:?}", t.subsequence))
        .witness("terms", t.sequence.len())
        .witness("x", &t.sequence[t.sequence.len() - 1])
        .witness("agreeing-probes", agreed);
    Ok(match (unstable, disagreement) {
        (Some(k), _) => rec.fail(format!("stability fails at k = {k}")),
        (None, Some(y)) => rec.fail(format!("π̄(x) and x̄ differ on {y}")),
        (None, None) => rec,
    })
}
