use crate::input::{element, row, show_row, Instance};
use crate::report::Record;
use crate::{metered, Ctx, Failure};
use clap::Subcommand;
use ringlift::finring::Elem;
use ringlift::lift::{exchange_relations, lift_exchange, lift_regular, lift_unimodular, qb_lift_step, LiftContext, QbRoute};
use ringlift::witness::{exchange_data, is_quasi_invertible, partial_inverse, qb_solution, reduce_row, right_certificate, Handedness, PerpTable, QbEquation, UnimodularRow};

#[derive(Debug, Subcommand)]
pub enum LiftCmd {
    /// Partial inverse `y` of `x` from one of `π(x)`.
    Regular {
        #[command(flatten)]
        instance: Instance,
        /// Source element; every element when omitted.
        #[arg(long)]
        x: Option<Elem>,
        /// Partial inverse of `π(x)`; the smallest one when omitted.
        #[arg(long)]
        ybar: Option<Elem>,
    },
    /// Exchange data `(y, z)` for `x` from data for `π(x)`.
    Exchange {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        x: Option<Elem>,
        #[arg(long, requires = "zbar")]
        ybar: Option<Elem>,
        #[arg(long, requires = "ybar")]
        zbar: Option<Elem>,
    },
    /// Reduction `(b, y)` of a unimodular row from one of its image.
    Unimodular {
        #[command(flatten)]
        instance: Instance,
        /// The row `a = (a₀, …, a_d)`.
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<Elem>,
        /// Right certificate of `a`; found by search when omitted.
        #[arg(long, value_delimiter = ',')]
        x: Option<Vec<Elem>>,
        #[arg(long, value_delimiter = ',', requires = "ybar")]
        bbar: Option<Vec<Elem>>,
        #[arg(long, value_delimiter = ',', requires = "bbar")]
        ybar: Option<Vec<Elem>>,
    },
    /// Quasi-invertible correction of the Bass equation `xa + b = 1`.
    Qb {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        x: Option<Elem>,
        #[arg(long)]
        a: Option<Elem>,
        #[arg(long, requires = "ubar")]
        ybar: Option<Elem>,
        #[arg(long, requires = "ybar")]
        ubar: Option<Elem>,
        /// auto, easy or general.
        #[arg(long, default_value = "auto")]
        route: String,
    },
}

pub fn run(ctx: &Ctx, cmd: &LiftCmd) -> Result<Vec<Record>, Failure> {
    match cmd {
        LiftCmd::Regular { instance, x, ybar } => {
            let lc = instance.resolve(&ctx.src)?;
            let xs = elements(ctx, &lc, *x)?;
            xs.into_iter().map(|x| metered(|| regular(&lc, x, *ybar))).collect()
        }
        LiftCmd::Exchange { instance, x, ybar, zbar } => {
            let lc = instance.resolve(&ctx.src)?;
            let xs = elements(ctx, &lc, *x)?;
            xs.into_iter().map(|x| metered(|| exchange(&lc, x, ybar.zip(*zbar)))).collect()
        }
        LiftCmd::Unimodular { instance, a, x, bbar, ybar } => {
            let lc = instance.resolve(&ctx.src)?;
            Ok(vec![metered(|| unimodular(&lc, a, x.as_deref(), bbar.as_deref().zip(ybar.as_deref())))?])
        }
        LiftCmd::Qb { instance, x, a, ybar, ubar, route } => {
            let lc = instance.resolve(&ctx.src)?;
            let route = match route.as_str() {
                "auto" => QbRoute::Auto,
                "easy" => QbRoute::EasyCase,
                "general" => QbRoute::General,
                other => return Err(Failure::Input(format!("unknown route `{other}`; expected auto, easy or general"))),
            };
            let r = lc.source();
            let xs = elements(ctx, &lc, *x)?;
            let as_ = elements(ctx, &lc, *a)?;
            let pairs: Vec<(Elem, Elem)> = xs.iter().flat_map(|&x| as_.iter().map(move |&a| (x, a))).collect();
            let picked = if x.is_some() && a.is_some() { (0..pairs.len()).collect() } else { ctx.sampled(pairs.len()) };
            r.one()?;
            picked.into_iter().map(|i| metered(|| qb(&lc, pairs[i].0, pairs[i].1, ybar.zip(*ubar), route))).collect()
        }
    }
}

/// The given element, or every element of the source (sampled with --sample).
fn elements(ctx: &Ctx, lc: &LiftContext, x: Option<Elem>) -> Result<Vec<Elem>, Failure> {
    match x {
        Some(x) => Ok(vec![element(lc.source(), x)?]),
        None => Ok(ctx.sampled(lc.source().size())),
    }
}

fn header(lc: &LiftContext, lemma: &str) -> Record {
    Record::new(format!("lift {lemma}")).input("source", lc.source().name()).input("target", lc.target().name())
}

fn regular(lc: &LiftContext, x: Elem, ybar: Option<Elem>) -> Result<Record, Failure> {
    let (r, s) = (lc.source(), lc.target());
    let xb = lc.apply(x);
    let rec = header(lc, "regular").input("x", x).input("π(x)", xb).identity("xyx = x, π(y) = ȳ");
    let ybar = match ybar {
        Some(y) => element(s, y)?,
        None => match partial_inverse(s, xb) {
            Some(y) => y,
            None => return Ok(rec.fail(format!("π(x) = {xb} has no partial inverse in `{}`", s.name()))),
        },
    };
    let rec = rec.input("ȳ", ybar);
    let out = lift_regular(lc, x, ybar)?;
    let xyx = r.mul(r.mul(x, out.y), x);
    Ok(rec
        .witness("y", out.y)
        .witness("y'", out.y_lift)
        .witness("u", out.u)
        .witness("v", out.v)
        .witness("xyx", xyx)
        .witness("π(y)", lc.apply(out.y))
        .require(xyx == x && lc.apply(out.y) == ybar))
}

fn exchange(lc: &LiftContext, x: Elem, given: Option<(Elem, Elem)>) -> Result<Record, Failure> {
    let s = lc.target();
    let xb = lc.apply(x);
    let rec = header(lc, "exchange").input("x", x).input("π(x)", xb).identity("e = xy = e², y = ye, e = x + z − xz, e = ze");
    let (ybar, zbar) = match given {
        Some((y, z)) => (element(s, y)?, element(s, z)?),
        None => match exchange_data(s, xb)? {
            Some(d) => d,
            None => return Ok(rec.fail(format!("π(x) = {xb} has no exchange data in `{}`", s.name()))),
        },
    };
    let rec = rec.input("ȳ", ybar).input("z̄", zbar);
    let out = lift_exchange(lc, x, ybar, zbar)?;
    let mut rec = rec
        .witness("y", out.y)
        .witness("z", out.z)
        .witness("e", out.e)
        .witness("route", format!("{:?}", out.route))
        .witness("unitalized", out.unitalized);
    for (i, (name, v)) in out.trace.iter().enumerate() {
        rec = rec.witness(&format!("trace.{i:02}.{name}"), v);
    }
    Ok(match exchange_relations(lc.source(), x, out.y, out.z) {
        Ok(e) if e == out.e => rec,
        Ok(e) => rec.fail(format!("xy = {e} differs from e = {}", out.e)),
        Err(what) => rec.fail(what),
    })
}

fn unimodular(lc: &LiftContext, a: &[Elem], x: Option<&[Elem]>, given: Option<(&[Elem], &[Elem])>) -> Result<Record, Failure> {
    let (r, s) = (lc.source(), lc.target());
    let a = row(r, a)?;
    if a.len() < 2 {
        return Err(Failure::Input("the row needs at least two entries".into()));
    }
    let rec = header(lc, "unimodular").input("a", show_row(&a)).identity("(aʳ + a₀b)·y = 1");
    let x = match x {
        Some(x) => row(r, x)?,
        None => match right_certificate(r, &a)? {
            Some(x) => x,
            None => return Err(Failure::Input(format!("{} is not right unimodular", show_row(&a)))),
        },
    };
    if x.len() != a.len() || r.dot(&a, &x) != r.one()? {
        return Err(Failure::Input(format!("{} is not a right certificate of {}", show_row(&x), show_row(&a))));
    }
    let rec = rec.input("x", show_row(&x));
    let (bbar, ybar) = match given {
        Some((b, y)) => (row(s, b)?, row(s, y)?),
        None => {
            let image = UnimodularRow::new(lc.pi().apply_row(&a), Some(lc.pi().apply_row(&x)));
            match reduce_row(s, &image)? {
                Some(found) => found,
                None => return Ok(rec.fail(format!("π(a) does not reduce in `{}`", s.name()))),
            }
        }
    };
    let rec = rec.input("b̄", show_row(&bbar)).input("ȳ", show_row(&ybar));
    let out = lift_unimodular(lc, &a, &x, &bbar, &ybar)?;
    let reduced: Vec<Elem> = a[1..].iter().zip(&out.b).map(|(&ai, &bi)| r.add(ai, r.mul(a[0], bi))).collect();
    let pairing = r.dot(&reduced, &out.y);
    Ok(rec
        .witness("b", show_row(&out.b))
        .witness("y", show_row(&out.y))
        .witness("defect", out.defect)
        .witness("pairing", pairing)
        .require(pairing == r.one()?))
}

fn qb(lc: &LiftContext, x: Elem, a: Elem, given: Option<(Elem, Elem)>, route: QbRoute) -> Result<Record, Failure> {
    let (r, s) = (lc.source(), lc.target());
    let b = r.sub(r.one()?, r.mul(x, a));
    let rec = header(lc, "qb").input("x", x).input("a", a).input("b", b).identity("xa + b = 1, u = a + yb quasi-invertible");
    let (ab, bb, xb) = (lc.apply(a), lc.apply(b), lc.apply(x));
    let (ybar, ubar) = match given {
        Some((y, u)) => (element(s, y)?, element(s, u)?),
        None => {
            let table = PerpTable::new(s)?;
            let qi: Vec<bool> = s.elements().map(|u| is_quasi_invertible(s, &table, u)).collect();
            match qb_solution(s, &qi, Handedness::Left, &QbEquation { a: ab, x: xb, b: bb }) {
                Some(y) => (y, s.add(ab, s.mul(y, bb))),
                None => return Ok(rec.fail(format!("the image equation has no solution in `{}`", s.name()))),
            }
        }
    };
    let rec = rec.input("ȳ", ybar).input("ū", ubar);
    let out = qb_lift_step(lc, x, a, b, ybar, ubar, route)?;
    let table = PerpTable::new(r)?;
    let mut rec = rec.witness("y", out.y).witness("u", out.u).witness("route", format!("{:?}", out.route));
    for (i, (name, v)) in out.trace.iter().enumerate() {
        rec = rec.witness(&format!("trace.{i:02}.{name}"), v);
    }
    let ok = r.add(a, r.mul(out.y, b)) == out.u && is_quasi_invertible(r, &table, out.u) && lc.apply(out.u) == ubar;
    Ok(rec.require(ok))
}
