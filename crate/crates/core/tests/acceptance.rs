//! Acceptance campaign. Each test prints one `criterion N: pass|FAIL` line;
//! run with `--nocapture` to see them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringlift::finring::{all_ideals, catalog, make_cyclic, quotient, Elem, FiniteRing, RingMorphism, Structure};
use ringlift::lazyring::{
    approx_unit, even_odd_extension, invlimsigma_probe, multiplier_as_limit, sigma_unit_of_extension, tietze_lift, InvLimShape, LazyElem, LazyMorphism, LazyRing,
    MultiplierOracle,
};
use ringlift::lift::{jarl_completion, lift_exchange, lift_regular, lift_unimodular, qb_lift_step, LiftContext, QbRoute};
use ringlift::mult::{corona, hochschild_square, multiplier_ring};
use ringlift::tower::{
    check_pullback_limit_commute, random_tower, stagewise_bsr, stagewise_exchange, stagewise_qb, stagewise_regular, truncated_limit, Extension, PullbackSquares, Tower,
};
use ringlift::witness::{bsr, exchange_data, is_qb, partial_inverse, qb_solution, reduce_row, right_certificate, Bsr, Handedness, QbEquation, UnimodularRow};
use std::time::Instant;

fn report(n: usize, what: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {n}: pass  {what}");
    } else {
        println!("criterion {n}: FAIL  {what}");
        for f in failures.iter().take(10) {
            println!("    {f}");
        }
    }
    assert!(failures.is_empty(), "criterion {n}: {} failures, first: {}", failures.len(), failures[0]);
}

// Independent brute-force checks.

fn one(r: &FiniteRing) -> Elem {
    r.unit().expect("unital ring")
}

fn is_qi(r: &FiniteRing, u: Elem) -> bool {
    let o = one(r);
    let killed = |p: Elem, q: Elem| r.elements().all(|t| r.mul(r.mul(p, t), q) == 0 && r.mul(r.mul(q, t), p) == 0);
    r.elements().any(|v| r.elements().any(|w| killed(r.sub(o, r.mul(v, u)), r.sub(o, r.mul(u, w)))))
}

fn dot(r: &FiniteRing, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| r.add(acc, r.mul(x, y)))
}

fn reduced(r: &FiniteRing, a: &[Elem], b: &[Elem], y: &[Elem]) -> Elem {
    let row: Vec<Elem> = a[1..].iter().zip(b).map(|(&ai, &bi)| r.add(ai, r.mul(a[0], bi))).collect();
    dot(r, &row, y)
}

fn exchange_ok(r: &FiniteRing, x: Elem, y: Elem, z: Elem) -> bool {
    let e = r.mul(x, y);
    r.mul(e, e) == e && r.mul(y, e) == y && r.sub(r.add(x, z), r.mul(x, z)) == e && r.mul(z, e) == e
}

fn coherent(t: &Tower, coords: &[Elem]) -> bool {
    coords.len() == t.depth() && (2..=t.depth()).all(|n| t.connector(n).apply(coords[n - 1]) == coords[n - 2])
}

fn coherent_rows(t: &Tower, rows: &[Vec<Elem>]) -> bool {
    rows.len() == t.depth() && (2..=t.depth()).all(|n| t.connector(n).apply_row(&rows[n - 1]) == rows[n - 2])
}

/// Every surjection `R → R/I` out of the small catalog rings.
fn surjections(unital_only: bool) -> Vec<LiftContext> {
    let mut out = Vec::new();
    for r in catalog().iter().filter(|r| r.size() <= 16 && (!unital_only || r.is_unital())) {
        for i in all_ideals(r).unwrap() {
            let (_, pi) = quotient(r, &i).unwrap();
            out.push(LiftContext::new(pi).unwrap());
        }
    }
    out
}

const INSTANCES: usize = 200;

/// Draw until `INSTANCES` valid instances have been checked.
fn campaign(seed: u64, pool: &[LiftContext], mut draw: impl FnMut(&mut ChaCha8Rng, &LiftContext) -> Option<Result<(), String>>) -> (usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut done, mut failures) = (0, Vec::new());
    let mut attempts = 0;
    while done < INSTANCES && attempts < 100 * INSTANCES {
        attempts += 1;
        let ctx = pool.choose(&mut rng).unwrap();
        if let Some(outcome) = draw(&mut rng, ctx) {
            done += 1;
            if let Err(e) = outcome {
                failures.push(format!("{} -> {}: {e}", ctx.source().name(), ctx.target().name()));
            }
        }
    }
    if done < INSTANCES {
        failures.push(format!("only {done} valid instances drawn"));
    }
    (done, failures)
}

fn pick(rng: &mut ChaCha8Rng, r: &FiniteRing) -> Elem {
    rng.gen_range(0..r.size())
}

fn pick_row(rng: &mut ChaCha8Rng, r: &FiniteRing, len: usize) -> Vec<Elem> {
    (0..len).map(|_| pick(rng, r)).collect()
}

#[test]
fn criterion_01_lifting_identities() {
    let start = Instant::now();
    let all = surjections(false);
    let unital = surjections(true);
    let mut failures = Vec::new();
    let mut counts = Vec::new();

    let (n, f) = campaign(1, &all, |rng, ctx| {
        if !ctx.kernel_is_regular() {
            return None;
        }
        let x = pick(rng, ctx.source());
        let ybar = partial_inverse(ctx.target(), ctx.apply(x))?;
        let r = ctx.source();
        Some(match lift_regular(ctx, x, ybar) {
            Ok(l) if r.mul(r.mul(x, l.y), x) == x && ctx.apply(l.y) == ybar => Ok(()),
            Ok(l) => Err(format!("x = {x}: y = {} fails xyx = x or π(y) = ȳ", l.y)),
            Err(e) => Err(format!("x = {x}: {e}")),
        })
    });
    counts.push(("lift_regular", n));
    failures.extend(f);

    let (n, f) = campaign(2, &all, |rng, ctx| {
        let x = pick(rng, ctx.source());
        let (ybar, zbar) = exchange_data(ctx.target(), ctx.apply(x)).unwrap()?;
        Some(match lift_exchange(ctx, x, ybar, zbar) {
            Ok(l) if exchange_ok(ctx.source(), x, l.y, l.z) && ctx.apply(l.y) == ybar && ctx.apply(l.z) == zbar => Ok(()),
            Ok(l) => Err(format!("x = {x}: (y, z) = ({}, {}) fails", l.y, l.z)),
            Err(e) => Err(format!("x = {x}: {e}")),
        })
    });
    counts.push(("lift_exchange", n));
    failures.extend(f);

    let (n, f) = campaign(3, &unital, |rng, ctx| {
        let r = ctx.source();
        let d = rng.gen_range(1..=2);
        let (a, x) = (pick_row(rng, r, d), pick_row(rng, r, d));
        let s = r.sub(one(r), dot(r, &a, &x));
        Some(match jarl_completion(r, &a, &x, s) {
            Ok(j) => {
                let left: Vec<Elem> = a.iter().zip(&j.b).map(|(&ai, &bi)| r.add(ai, r.mul(s, bi))).collect();
                let right: Vec<Elem> = x.iter().zip(&j.y).map(|(&xi, &yi)| r.add(xi, r.mul(yi, r.mul(s, j.z)))).collect();
                if dot(r, &left, &right) == one(r) {
                    Ok(())
                } else {
                    Err(format!("a = {a:?}, x = {x:?}: (a + sb)·(x + ysz) ≠ 1"))
                }
            }
            Err(e) => Err(format!("a = {a:?}, x = {x:?}: {e}")),
        })
    });
    counts.push(("jarl_completion", n));
    failures.extend(f);

    let (n, f) = campaign(4, &unital, |rng, ctx| {
        let (r, s) = (ctx.source(), ctx.target());
        let d = rng.gen_range(1..=2);
        let a = pick_row(rng, r, d + 1);
        let x = right_certificate(r, &a).unwrap()?;
        let (bbar, ybar) = reduce_row(s, &UnimodularRow::new(ctx.pi().apply_row(&a), Some(ctx.pi().apply_row(&x)))).unwrap()?;
        Some(match lift_unimodular(ctx, &a, &x, &bbar, &ybar) {
            Ok(l) if reduced(r, &a, &l.b, &l.y) == one(r) && ctx.pi().apply_row(&l.b) == bbar && ctx.pi().apply_row(&l.y) == ybar => Ok(()),
            Ok(l) => Err(format!("a = {a:?}: (b, y) = ({:?}, {:?}) fails", l.b, l.y)),
            Err(e) => Err(format!("a = {a:?}: {e}")),
        })
    });
    counts.push(("lift_unimodular", n));
    failures.extend(f);

    let (n, f) = campaign(5, &unital, |rng, ctx| {
        let (r, s) = (ctx.source(), ctx.target());
        let (x, a) = (pick(rng, r), pick(rng, r));
        let b = r.sub(one(r), r.mul(x, a));
        let qi: Vec<bool> = s.elements().map(|u| is_qi(s, u)).collect();
        let eq = QbEquation { a: ctx.apply(a), x: ctx.apply(x), b: ctx.apply(b) };
        let ybar = qb_solution(s, &qi, Handedness::Left, &eq)?;
        let ubar = s.add(eq.a, s.mul(ybar, eq.b));
        Some(match qb_lift_step(ctx, x, a, b, ybar, ubar, QbRoute::Auto) {
            Ok(l) if r.add(a, r.mul(l.y, b)) == l.u && ctx.apply(l.y) == ybar && ctx.apply(l.u) == ubar && is_qi(r, l.u) => Ok(()),
            Ok(l) => Err(format!("x = {x}, a = {a}: (y, u) = ({}, {}) fails", l.y, l.u)),
            Err(e) => Err(format!("x = {x}, a = {a}: {e}")),
        })
    });
    counts.push(("qb_lift_step", n));
    failures.extend(f);

    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 120 {
        failures.push(format!("took {elapsed:?}, budget is 2 minutes"));
    }
    report(1, &format!("lifting identities {counts:?} in {elapsed:.1?}"), &failures);
}

#[derive(Clone, Copy, Debug)]
enum Harness {
    Regular,
    Exchange,
    Bsr1,
    Qb,
}

/// Seeded towers of depth 2..=4 whose stages carry the harness hypothesis.
fn towers_for(h: Harness, want: usize) -> Vec<Tower> {
    let mut rng = ChaCha8Rng::seed_from_u64(h as u64 + 100);
    let mut out = Vec::new();
    let mut seed = 0;
    while out.len() < want {
        seed += 1;
        let depth = rng.gen_range(2..=4);
        let t = random_tower(catalog(), depth, seed).unwrap().tower;
        let ok = match h {
            Harness::Regular => t.stages().iter().all(|r| r.elements().all(|x| partial_inverse(r, x).is_some())),
            Harness::Exchange => true,
            Harness::Bsr1 => t.stages().iter().all(|r| r.is_unital() && bsr(r, 1).unwrap() == Bsr::Exactly(1)),
            Harness::Qb => t.stages().iter().all(|r| r.is_unital() && is_qb(r, Handedness::Left).unwrap().holds()),
        };
        if ok {
            out.push(t);
        }
    }
    out
}

fn run_harness(h: Harness, t: &Tower) -> Result<usize, String> {
    let depth = t.depth();
    match h {
        Harness::Regular => {
            let entries = stagewise_regular(t).map_err(|e| e.to_string())?;
            for e in &entries {
                let ok = coherent(t, &e.y.coords) && (1..=depth).all(|n| {
                    let r = t.stage(n);
                    r.mul(r.mul(e.x.at(n), e.y.at(n)), e.x.at(n)) == e.x.at(n)
                });
                if !ok {
                    return Err(format!("string {} fails", e.x.top()));
                }
            }
            Ok(entries.len())
        }
        Harness::Exchange => {
            let entries = stagewise_exchange(t).map_err(|e| e.to_string())?;
            for e in &entries {
                let ok = coherent(t, &e.y.coords) && coherent(t, &e.z.coords) && (1..=depth).all(|n| exchange_ok(t.stage(n), e.x.at(n), e.y.at(n), e.z.at(n)));
                if !ok {
                    return Err(format!("string {} fails", e.x.top()));
                }
            }
            Ok(entries.len())
        }
        Harness::Bsr1 => {
            let entries = stagewise_bsr(t, 1).map_err(|e| e.to_string())?;
            let top = t.top();
            let unimodular = top.elements().flat_map(|a| top.elements().map(move |b| [a, b])).filter(|row| right_certificate(top, row).unwrap().is_some()).count();
            if entries.len() != unimodular {
                return Err(format!("{} rows reduced, {unimodular} unimodular rows on top", entries.len()));
            }
            for e in &entries {
                let ok = coherent_rows(t, &e.b.rows) && coherent_rows(t, &e.y.rows) && (1..=depth).all(|n| reduced(t.stage(n), e.a.at(n), e.b.at(n), e.y.at(n)) == one(t.stage(n)));
                if !ok {
                    return Err(format!("row {:?} fails", e.a.at(depth)));
                }
            }
            Ok(entries.len())
        }
        Harness::Qb => {
            let entries = stagewise_qb(t).map_err(|e| e.to_string())?;
            if entries.len() != t.top().size().pow(2) {
                return Err(format!("{} equations, expected {}", entries.len(), t.top().size().pow(2)));
            }
            for e in &entries {
                let ok = coherent(t, &e.y.coords)
                    && coherent(t, &e.u.coords)
                    && (1..=depth).all(|n| {
                        let r = t.stage(n);
                        r.add(r.mul(e.x.at(n), e.a.at(n)), e.b.at(n)) == one(r) && r.add(e.a.at(n), r.mul(e.y.at(n), e.b.at(n))) == e.u.at(n) && is_qi(r, e.u.at(n))
                    });
                if !ok {
                    return Err(format!("equation x = {}, a = {} fails", e.x.top(), e.a.top()));
                }
            }
            Ok(entries.len())
        }
    }
}

const TOWERS: usize = 50;

#[test]
fn criterion_02_stagewise_harnesses() {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for h in [Harness::Regular, Harness::Exchange, Harness::Bsr1, Harness::Qb] {
        let towers = towers_for(h, TOWERS);
        let mut strings = 0;
        for t in &towers {
            match run_harness(h, t) {
                Ok(n) => strings += n,
                Err(e) => failures.push(format!("{h:?} on {}: {e}", t.describe())),
            }
        }
        summary.push(format!("{h:?}: {} towers, {strings} strings", towers.len()));
    }
    report(2, &summary.join("; "), &failures);
}

#[test]
fn criterion_03_bsr_supremum() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for h in [Harness::Regular, Harness::Exchange, Harness::Bsr1, Harness::Qb] {
        for t in towers_for(h, TOWERS) {
            if !t.stages().iter().all(FiniteRing::is_unital) {
                continue;
            }
            let (limit, _) = truncated_limit(&t).unwrap();
            let stages: Vec<Bsr> = t.stages().iter().map(|r| bsr(r, 3).unwrap()).collect();
            let sup = stages.iter().copied().max_by_key(|b| match b {
                Bsr::Exactly(d) => *d,
                Bsr::Above(d) => d + 1,
            });
            let lim = bsr(&limit, 3).unwrap();
            checked += 1;
            if Some(lim) != sup {
                failures.push(format!("{}: limit {lim:?}, stages {stages:?}", t.describe()));
            }
        }
    }
    report(3, &format!("bsr(limit) = max stage bsr on {checked} unital towers"), &failures);
}

#[test]
fn criterion_04_qb_symmetry() {
    let mut failures = Vec::new();
    let rings: Vec<&FiniteRing> = catalog().iter().filter(|r| r.size() <= 16 && r.is_unital()).collect();
    for r in &rings {
        let left = is_qb(r, Handedness::Left).unwrap().holds();
        let right = is_qb(r, Handedness::Right).unwrap().holds();
        if left != right {
            failures.push(format!("{}: left {left}, right {right}", r.name()));
        }
    }
    report(4, &format!("left and right QB agree on {} unital catalog rings", rings.len()), &failures);
}

#[test]
fn criterion_05_multiplier_exactness() {
    let mut failures = Vec::new();
    let rings: Vec<&FiniteRing> = catalog().iter().filter(|r| r.size() <= 16 && r.is_unital()).collect();
    for r in &rings {
        let m = multiplier_ring(r).unwrap();
        if m.base_isomorphism().is_none() {
            failures.push(format!("{}: M(R) has {} elements and is not R", r.name(), m.ring.size()));
        }
        for (i, d) in m.elements.iter().enumerate() {
            let (l, p) = (&d.lambda, &d.rho);
            let ok = r.elements().all(|x| {
                r.elements().all(|y| {
                    l[r.add(x, y)] == r.add(l[x], l[y])
                        && p[r.add(x, y)] == r.add(p[x], p[y])
                        && l[r.mul(x, y)] == r.mul(l[x], y)
                        && p[r.mul(x, y)] == r.mul(x, p[y])
                        && r.mul(x, l[y]) == r.mul(p[x], y)
                })
            });
            if !ok {
                failures.push(format!("{}: m{i} fails a centralizer identity", r.name()));
            }
        }
        if m.elements.len() != r.size() {
            failures.push(format!("{}: {} double centralizers", r.name(), m.elements.len()));
        }
        let (_, q, _) = corona(r).unwrap();
        if q.size() != 1 {
            failures.push(format!("{}: corona has {} elements", r.name(), q.size()));
        }
    }
    let mut squares = 0;
    for r in rings.iter().filter(|r| r.size() <= 12) {
        for i in all_ideals(r).unwrap() {
            if i.is_zero() || i.is_whole() {
                continue;
            }
            let ext = Extension::of_ideal(&i).unwrap();
            if !ext.ideal.is_unital() {
                continue;
            }
            let sq = hochschild_square(&ext).unwrap();
            squares += 1;
            // Elementwise: r ↦ (φ(r), α(r)) is a bijection onto the pullback.
            let mut hit = vec![false; sq.pullback.ring.size()];
            let mut ok = true;
            for x in ext.ring.elements() {
                match sq.pullback.index_of(sq.phi.apply(x), ext.alpha.apply(x)) {
                    Some(p) if !hit[p] => hit[p] = true,
                    _ => ok = false,
                }
            }
            if !ok || !hit.iter().all(|&h| h) || !sq.is_pullback {
                failures.push(format!("{} over {:?}: not a pullback", r.name(), i.members()));
            }
        }
    }
    if squares < 5 {
        failures.push(format!("only {squares} extensions with a unital ideal"));
    }
    report(5, &format!("M(R) ≅ R on {} unital rings, {squares} Hochschild pullbacks", rings.len()), &failures);
}

/// Probe multipliers on the even points: intervals, residues, points and
/// a few finite elements.
fn probe_multipliers(s: &LazyRing) -> Vec<MultiplierOracle> {
    let mut out = vec![MultiplierOracle::unit(s), MultiplierOracle::zero(s)];
    for m in 2..=7 {
        for r in [0, 1] {
            out.push(MultiplierOracle::from_function(s, format!("{r} mod {m}"), move |k| usize::from(k % m == r)).unwrap());
        }
    }
    for n in [1, 3, 5, 9] {
        out.push(MultiplierOracle::from_function(s, format!("k ≥ {n}"), move |k| usize::from(k >= n)).unwrap());
    }
    for pts in [vec![0], vec![1, 4], vec![2, 3, 11]] {
        out.push(MultiplierOracle::from_element(s, &s.indicator(pts)));
    }
    out
}

#[test]
fn criterion_06_tietze_probes() {
    let start = Instant::now();
    let f2 = make_cyclic(2).unwrap();
    let r = LazyRing::finsupport(&f2).unwrap();
    let pi = LazyMorphism::evens(&r).unwrap();
    let s = pi.target();
    let n = 32;
    let xbars = probe_multipliers(s);
    let unit = approx_unit(&r);
    let probes = s.probes(pi.target_window(n), 60);
    let mut failures = Vec::new();
    let mut agreements = 0;
    for xbar in &xbars {
        let t = match tietze_lift(&pi, xbar, n) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("{}: {e}", xbar.label()));
                continue;
            }
        };
        let e = |k: usize| if k == 0 { LazyElem::zero() } else { unit.e(t.subsequence[k - 1]) };
        for k in 2..=t.sequence.len() {
            let d = r.sub(&t.sequence[k - 1], &t.sequence[k - 2]);
            let ek = e(k.saturating_sub(3));
            if !r.mul(&d, &ek).is_zero() || !r.mul(&ek, &d).is_zero() {
                failures.push(format!("{}: (x_{k} − x_{}) e_{} ≠ 0", xbar.label(), k - 1, k.saturating_sub(3)));
            }
        }
        for y in &probes {
            let l = pi.lift(y);
            if l.window() > n {
                continue;
            }
            let left = pi.apply(&t.oracle.act_left(&l).unwrap()) == xbar.act_left(y).unwrap();
            let right = pi.apply(&t.oracle.act_right(&l).unwrap()) == xbar.act_right(y).unwrap();
            if left && right {
                agreements += 1;
            } else {
                failures.push(format!("{}: π̄(x) and x̄ differ on {y}", xbar.label()));
            }
        }
    }
    if xbars.len() < 20 {
        failures.push(format!("only {} probe multipliers", xbars.len()));
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 30 {
        failures.push(format!("took {elapsed:?}, budget is 30 s"));
    }
    report(6, &format!("{} multipliers at N = {n}, {agreements} probe agreements in {elapsed:.1?}", xbars.len()), &failures);
}

#[test]
fn criterion_07_multiplier_as_limit() {
    let f2 = make_cyclic(2).unwrap();
    let z3 = make_cyclic(3).unwrap();
    let mut failures = Vec::new();
    let mut trips = 0;
    for base in [&f2, &z3] {
        for ring in [LazyRing::finsupport(base).unwrap(), LazyRing::finmatrix(base).unwrap()] {
            for n in [8, 16, 32] {
                let maps = multiplier_as_limit(&ring, n).unwrap();
                let probes = ring.probes(n.min(12), 60);
                let mut tests = vec![MultiplierOracle::unit(&ring), MultiplierOracle::zero(&ring)];
                match ring.family() {
                    ringlift::lazyring::Family::FinSupport => tests.push(MultiplierOracle::from_function(&ring, "k mod 3 = 0", |k| usize::from(k % 3 == 0)).unwrap()),
                    ringlift::lazyring::Family::FinMatrix => tests.push(MultiplierOracle::from_matrix(&ring, "shift", |i, j| usize::from(i == j + 1), |k| k + 2)),
                }
                tests.extend(ring.probes(4, 6).iter().map(|p| MultiplierOracle::from_element(&ring, p)));
                for x in &tests {
                    trips += 1;
                    let s = maps.forward(x).unwrap();
                    let back = maps.backward(&s).unwrap();
                    for p in probes.iter().filter(|p| p.window() <= n) {
                        if back.act_left(p).unwrap() != x.act_left(p).unwrap() || back.act_right(p).unwrap() != x.act_right(p).unwrap() {
                            failures.push(format!("{} N = {n} {}: backward ∘ forward moves {p}", ring.name(), x.label()));
                        }
                    }
                    if maps.forward(&back).unwrap() != s {
                        failures.push(format!("{} N = {n} {}: forward ∘ backward moves the string", ring.name(), x.label()));
                    }
                    if let Some(why) = maps.round_trip(x, &probes).unwrap() {
                        failures.push(why);
                    }
                }
            }
        }
    }
    report(7, &format!("{trips} round trips at N = 8, 16, 32 over both families"), &failures);
}

#[test]
fn criterion_08_sigma_units() {
    let f2 = make_cyclic(2).unwrap();
    let r = LazyRing::finsupport(&f2).unwrap();
    let ext = even_odd_extension(&r).unwrap();
    let count = 10;
    let probes = r.probes(2 * count, 80);
    let mut failures = Vec::new();
    let s = sigma_unit_of_extension(&ext, count, &probes, count).unwrap();
    let fixes = |u: &LazyElem, x: &LazyElem| r.mul(u, x) == *x && r.mul(x, u) == *x;
    for i in 1..s.v.len() {
        if !fixes(&s.v[i], &s.v[i - 1]) {
            failures.push(format!("v_{} does not absorb v_{i}", i + 1));
        }
    }
    // Each probe is fixed from some index on.
    for p in &probes {
        if !(1..=count).any(|i| (i..=count).all(|j| fixes(&s.v[j - 1], p))) {
            failures.push(format!("{p} is never fixed"));
        }
    }
    if s.certified.len() < 50 {
        failures.push(format!("only {} certified probes", s.certified.len()));
    }

    let v = invlimsigma_probe(InvLimShape::EvenCollapse, &f2, 5).unwrap();
    if v.sigma_unital || v.kernels_have_units {
        failures.push("collapse tower reported σ-unital".into());
    }
    if v.diagonal.len() != 4 || v.trace.is_empty() {
        failures.push(format!("refutation trace has {} diagonal steps", v.diagonal.len()));
    }
    for &(_, stage, p) in &v.diagonal {
        // The candidate E_s = 1_[0, s·2^(s−1)) misses the odd point p.
        let e = r.block(stage << (stage - 1));
        if p % 2 == 0 || r.mul(&e, &r.delta(p)) == r.delta(p) {
            failures.push(format!("diagonal point {p} does not refute stage {stage}"));
        }
    }
    report(8, &format!("{} nested v_i, {} certified probes, collapse refuted in {} steps", s.v.len(), s.certified.len(), v.diagonal.len()), &failures);
}

/// Squares `R_n → R_{n−1} ← R_n` over the tower shifted down by one stage.
fn shifted_squares(t: &Tower, twist: bool) -> PullbackSquares {
    let zero = make_cyclic(1).unwrap();
    let depth = t.depth();
    let mut apex_stages = vec![zero.clone()];
    apex_stages.extend(t.stages()[..depth - 1].iter().cloned());
    let mut apex_conn = vec![RingMorphism::zero_map(t.stage(1), &zero)];
    apex_conn.extend((2..depth).map(|n| t.connector(n).clone()));
    let apex = Tower::new(apex_stages, apex_conn).unwrap();
    let mut alphas = vec![RingMorphism::zero_map(t.stage(1), &zero)];
    alphas.extend((2..=depth).map(|n| t.connector(n).clone()));
    let betas = if twist { (1..=depth).map(|n| RingMorphism::zero_map(t.stage(n), apex.stage(n))).collect() } else { alphas.clone() };
    PullbackSquares { left: t.clone(), right: t.clone(), apex, alphas, betas }
}

#[test]
fn criterion_09_pullback_limit_commute() {
    let mut failures = Vec::new();
    let mut instances = 0;
    let mut seed = 0;
    while instances < 12 {
        seed += 1;
        let t = random_tower(catalog(), 3, seed).unwrap().tower;
        if t.top().size() > 12 {
            continue;
        }
        let sq = shifted_squares(&t, seed % 2 == 0);
        instances += 1;
        let cmp = check_pullback_limit_commute(&sq).unwrap();
        // Independent count of the pullback of the limits.
        let top = t.depth();
        let pairs = t.top().elements().flat_map(|a| t.top().elements().map(move |b| (a, b))).filter(|&(a, b)| sq.alphas[top - 1].apply(a) == sq.betas[top - 1].apply(b)).count();
        if !cmp.is_isomorphism || cmp.limit_of_pullbacks.size() != pairs || !cmp.iso.is_injective() {
            failures.push(format!("seed {seed} ({}): comparison is not an isomorphism", t.describe()));
        }
    }
    report(9, &format!("{instances} seeded square towers"), &failures);
}

#[test]
fn criterion_10_mutation_sensitivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let rings: Vec<&FiniteRing> = catalog().iter().filter(|r| r.size() >= 2).collect();
    let maps = surjections(false).into_iter().filter(|c| c.target().size() >= 2).map(|c| c.pi().clone()).collect::<Vec<_>>();
    let mut failures = Vec::new();
    let (mut ring_muts, mut map_muts) = (0, 0);
    for k in 0..100 {
        if k % 2 == 0 {
            let r = rings.choose(&mut rng).unwrap();
            let (mut add, mut mul) = r.table_copies().unwrap();
            let n = r.size();
            let at = rng.gen_range(0..n * n);
            let table = if rng.gen_bool(0.5) { &mut add } else { &mut mul };
            table[at] = (table[at] + rng.gen_range(1..n)) % n;
            ring_muts += 1;
            if FiniteRing::from_tables_strict("mutant", Structure::Table, &add, &mul, r.unit()).is_ok() {
                failures.push(format!("{}: entry {at} changed, still accepted", r.name()));
            }
        } else {
            let pi = maps.choose(&mut rng).unwrap();
            let mut map = pi.map().to_vec();
            let at = rng.gen_range(0..map.len());
            let m = pi.target().size();
            map[at] = (map[at] + rng.gen_range(1..m)) % m;
            map_muts += 1;
            if RingMorphism::new(pi.source(), pi.target(), map, pi.is_unital()).is_ok() {
                failures.push(format!("{} -> {}: entry {at} changed, still accepted", pi.source().name(), pi.target().name()));
            }
        }
    }
    report(10, &format!("{ring_muts} ring and {map_muts} morphism mutations rejected"), &failures);
}
