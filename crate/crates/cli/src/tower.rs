use crate::input::show_row;
use crate::report::Record;
use crate::{metered, Ctx, Failure};
use ringlift::finring::{catalog, Elem};
use ringlift::lift::exchange_relations;
use ringlift::tower::{is_coherent, random_tower, stagewise_bsr, stagewise_exchange, stagewise_qb, stagewise_regular, CoherentString, Tower};
use ringlift::witness::{is_quasi_invertible, PerpTable};
use ringlift::Error;

#[derive(Clone, Debug, Default, clap::Args)]
pub struct TowerArgs {
    /// Declared tower (needs --spec).
    #[arg(long)]
    pub name: Option<String>,
    /// Ring names from the bottom stage up, joined by canonical maps.
    #[arg(long, value_delimiter = ',')]
    pub chain: Vec<String>,
    /// Draw a tower from the catalog using --seed.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// regular, exchange, bsr=D or qb.
    #[arg(long)]
    pub harness: String,
}

enum Harness {
    Regular,
    Exchange,
    Bsr(usize),
    Qb,
}

fn parse(h: &str) -> Result<Harness, Failure> {
    Ok(match h {
        "regular" => Harness::Regular,
        "exchange" => Harness::Exchange,
        "qb" => Harness::Qb,
        other => match other.strip_prefix("bsr=").map(str::parse::<usize>) {
            Some(Ok(d)) if d >= 1 => Harness::Bsr(d),
            _ => return Err(Failure::Input(format!("unknown harness `{other}`"))),
        },
    })
}

pub fn run(ctx: &Ctx, args: &TowerArgs) -> Result<Vec<Record>, Failure> {
    let harness = parse(&args.harness)?;
    let (tower, mut head) = resolve(ctx, args)?;
    head = head.input("harness", &args.harness).input("depth", tower.depth()).input("stages", tower.describe());
    let strings = match strings(ctx, &tower, &harness) {
        Ok(s) => s,
        Err(Failure::Core(e)) if !e.is_budget() => {
            let name = if is_stage_check(&e) { "stage-check" } else { "harness" };
            let mut rec = head;
            rec.name = name.into();
            return Ok(vec![rec.fail(e)]);
        }
        Err(f) => return Err(f),
    };
    let mut out = vec![head.witness("strings", strings.len())];
    out.extend(strings);
    Ok(out)
}

fn is_stage_check(e: &Error) -> bool {
    match e {
        Error::Stage { inner, .. } => is_stage_check(inner),
        Error::Precondition { op, .. } => op.starts_with("stagewise"),
        _ => false,
    }
}

fn resolve(ctx: &Ctx, args: &TowerArgs) -> Result<(Tower, Record), Failure> {
    let head = Record::new("tower");
    match (&args.name, args.chain.is_empty(), args.random) {
        (Some(name), true, false) => {
            let t = ctx.src.env.as_ref().and_then(|e| e.tower(name)).cloned().ok_or_else(|| Failure::Input(format!("unknown tower `{name}`")))?;
            Ok((t, head.input("name", name)))
        }
        (None, false, false) => {
            let stages = args.chain.iter().map(|n| ctx.src.ring(n)).collect::<Result<Vec<_>, _>>()?;
            let connectors = args.chain.windows(2).map(|w| ctx.src.canonical(&w[1], &w[0])).collect::<Result<Vec<_>, _>>()?;
            Ok((Tower::new(stages, connectors)?, head.input("chain", args.chain.join(" <- "))))
        }
        (None, true, true) => {
            let rt = random_tower(catalog(), args.depth, ctx.seed)?;
            let mut head = head.input("seed", ctx.seed).input("top", &rt.top);
            for (i, line) in rt.trace().iter().enumerate() {
                head = head.witness(&format!("draw.{i}"), line);
            }
            Ok((rt.tower, head))
        }
        _ => Err(Failure::Input("give exactly one of --name, --chain or --random".into())),
    }
}

fn coords(s: &CoherentString) -> String {
    show_row(&s.coords)
}

fn strings(ctx: &Ctx, tower: &Tower, harness: &Harness) -> Result<Vec<Record>, Failure> {
    let depth = tower.depth();
    let coherent = |s: &CoherentString| is_coherent(tower, &s.coords);
    match harness {
        Harness::Regular => {
            let entries = stagewise_regular(tower)?;
            Ok(ctx
                .sampled(entries.len())
                .into_iter()
                .map(|i| {
                    let e = &entries[i];
                    let ok = coherent(&e.y) && (1..=depth).all(|n| {
                        let r = tower.stage(n);
                        r.mul(r.mul(e.x.at(n), e.y.at(n)), e.x.at(n)) == e.x.at(n)
                    });
                    Record::new(format!("string {}", e.x.top())).identity("xyx = x at every stage").witness("x", coords(&e.x)).witness("y", coords(&e.y)).require(ok)
                })
                .collect())
        }
        Harness::Exchange => {
            let entries = stagewise_exchange(tower)?;
            Ok(ctx
                .sampled(entries.len())
                .into_iter()
                .map(|i| {
                    let e = &entries[i];
                    let ok = coherent(&e.y) && coherent(&e.z) && (1..=depth).all(|n| exchange_relations(tower.stage(n), e.x.at(n), e.y.at(n), e.z.at(n)) == Ok(e.e.at(n)));
                    Record::new(format!("string {}", e.x.top()))
                        .identity("e = xy = e², y = ye, e = x + z − xz, e = ze at every stage")
                        .witness("x", coords(&e.x))
                        .witness("y", coords(&e.y))
                        .witness("z", coords(&e.z))
                        .witness("e", coords(&e.e))
                        .require(ok)
                })
                .collect())
        }
        Harness::Bsr(d) => {
            let entries = stagewise_bsr(tower, *d)?;
            ctx.sampled(entries.len())
                .into_iter()
                .map(|i| {
                    metered(|| {
                        let e = &entries[i];
                        let mut ok = true;
                        for s in 1..=depth {
                            let r = tower.stage(s);
                            let a = e.a.at(s);
                            let reduced: Vec<Elem> = a[1..].iter().zip(e.b.at(s)).map(|(&ai, &bi)| r.add(ai, r.mul(a[0], bi))).collect();
                            ok &= r.dot(&reduced, e.y.at(s)) == r.one()?;
                            if s >= 2 {
                                let c = tower.connector(s);
                                ok &= c.apply_row(e.b.at(s)) == e.b.at(s - 1) && c.apply_row(e.y.at(s)) == e.y.at(s - 1);
                            }
                        }
                        Ok(Record::new(format!("row {}", show_row(e.a.at(depth))))
                            .identity("(aʳ + a₀b)·y = 1 at every stage")
                            .witness("b", format!("{:?}", e.b.rows))
                            .witness("y", format!("{:?}", e.y.rows))
                            .require(ok))
                    })
                })
                .collect()
        }
        Harness::Qb => {
            let entries = stagewise_qb(tower)?;
            let tables = tower.stages().iter().map(PerpTable::new).collect::<Result<Vec<_>, _>>()?;
            Ok(ctx
                .sampled(entries.len())
                .into_iter()
                .map(|i| {
                    let e = &entries[i];
                    let ok = coherent(&e.y)
                        && coherent(&e.u)
                        && (1..=depth).all(|n| {
                            let r = tower.stage(n);
                            r.add(e.a.at(n), r.mul(e.y.at(n), e.b.at(n))) == e.u.at(n) && is_quasi_invertible(r, &tables[n - 1], e.u.at(n))
                        });
                    Record::new(format!("equation x={} a={}", e.x.top(), e.a.top()))
                        .identity("u = a + yb quasi-invertible at every stage")
                        .witness("y", coords(&e.y))
                        .witness("u", coords(&e.u))
                        .witness("routes", format!("{:?}", e.routes))
                        .require(ok)
                })
                .collect())
        }
    }
}
