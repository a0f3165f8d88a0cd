use crate::input::show_row;
use crate::report::Record;
use crate::{metered, Ctx, Failure};
use ringlift::finring::FiniteRing;
use ringlift::witness::{
    bsr, bsr_at, exchange_witness, is_exchange, is_nondegenerate, is_qb, is_regular_ring, is_semiprime, partial_inverse, Bsr, ExchangeMode, Handedness, Verdict,
};

const BSR_SCAN: usize = 3;

pub fn run(ctx: &Ctx, target: &str, properties: &str) -> Result<Vec<Record>, Failure> {
    let ring = ctx.src.ring(target)?;
    let props: Vec<&str> = properties.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if props.is_empty() {
        return Err(Failure::Input("no property given".into()));
    }
    // Reject unknown names before doing any work.
    for p in &props {
        parse(p)?;
    }
    props.iter().map(|p| metered(|| property(&ring, parse(p)?))).collect()
}

#[derive(Clone, Copy)]
enum Property {
    Regular,
    Exchange(ExchangeMode),
    Nondegenerate,
    Semiprime,
    Unital,
    Bsr,
    BsrAt(usize),
    Qb(Option<Handedness>),
}

fn parse(p: &str) -> Result<Property, Failure> {
    Ok(match p {
        "regular" => Property::Regular,
        "exchange" => Property::Exchange(ExchangeMode::NonUnital),
        "exchange-unital" => Property::Exchange(ExchangeMode::Unital),
        "nondegenerate" => Property::Nondegenerate,
        "semiprime" => Property::Semiprime,
        "unital" => Property::Unital,
        "bsr" => Property::Bsr,
        "qb" => Property::Qb(None),
        "qb-left" => Property::Qb(Some(Handedness::Left)),
        "qb-right" => Property::Qb(Some(Handedness::Right)),
        other => match other.strip_prefix("bsr=").map(str::parse::<usize>) {
            Some(Ok(d)) if d >= 1 => Property::BsrAt(d),
            _ => return Err(Failure::Input(format!("unknown property `{other}`"))),
        },
    })
}

fn element_verdict(rec: Record, v: Verdict<usize>) -> Record {
    match v {
        Verdict::Holds => rec,
        Verdict::Fails(x) => rec.fail(x),
    }
}

fn property(ring: &FiniteRing, p: Property) -> Result<Record, Failure> {
    let base = |name: &str| Record::new(name).input("ring", ring.name()).input("size", ring.size());
    Ok(match p {
        Property::Regular => {
            let rec = base("regular").identity("xyx = x");
            match is_regular_ring(ring)? {
                Verdict::Holds => {
                    let ys: Vec<usize> = ring.elements().map(|x| partial_inverse(ring, x).expect("ring is regular")).collect();
                    let ok = ring.elements().all(|x| ring.mul(ring.mul(x, ys[x]), x) == x);
                    rec.witness("y", show_row(&ys)).require(ok)
                }
                Verdict::Fails(x) => rec.fail(x),
            }
        }
        Property::Exchange(mode) => {
            let (name, identity) = match mode {
                ExchangeMode::NonUnital => ("exchange", "e = xr = e², e = x + y − xy"),
                ExchangeMode::Unital => ("exchange-unital", "e = xr = e², 1 − e = (1 − x)(1 − y)"),
            };
            let rec = base(name).identity(identity);
            match is_exchange(ring, mode)? {
                Verdict::Holds => {
                    let mut es = Vec::new();
                    let mut ys = Vec::new();
                    for x in ring.elements() {
                        let w = exchange_witness(ring, x, mode)?.ok_or_else(|| Failure::Input(format!("no exchange witness for {x}")))?;
                        w.verify(ring, mode)?;
                        es.push(w.e);
                        ys.push(w.y);
                    }
                    rec.witness("e", show_row(&es)).witness("y", show_row(&ys))
                }
                Verdict::Fails(x) => rec.fail(x),
            }
        }
        Property::Nondegenerate => element_verdict(base("nondegenerate").identity("xR = 0 or Rx = 0 implies x = 0"), is_nondegenerate(ring)?),
        Property::Semiprime => element_verdict(base("semiprime").identity("xRx = 0 implies x = 0"), is_semiprime(ring)?),
        Property::Unital => match ring.unit() {
            Some(u) => base("unital").witness("one", u),
            None => base("unital").fail("no unit"),
        },
        Property::Bsr => match bsr(ring, BSR_SCAN)? {
            Bsr::Exactly(d) => base("bsr").witness("bsr", d),
            Bsr::Above(d) => base("bsr").fail(format!("above {d}")),
        },
        Property::BsrAt(d) => {
            let rec = base(&format!("bsr={d}")).identity("every unimodular (d+1)-row reduces");
            match bsr_at(ring, d)? {
                Verdict::Holds => rec,
                Verdict::Fails(row) => rec.fail(show_row(&row)),
            }
        }
        Property::Qb(side) => {
            let sides = match side {
                Some(s) => vec![s],
                None => vec![Handedness::Left, Handedness::Right],
            };
            let name = match side {
                None => "qb",
                Some(Handedness::Left) => "qb-left",
                Some(Handedness::Right) => "qb-right",
            };
            let mut rec = base(name).identity("a + yb quasi-invertible for every xa + b = 1");
            for s in sides {
                if let Verdict::Fails(eq) = is_qb(ring, s)? {
                    rec = rec.fail(format!("{s:?}: a = {}, x = {}, b = {}", eq.a, eq.x, eq.b));
                    break;
                }
            }
            rec
        }
    })
}
