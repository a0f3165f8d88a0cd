//! Worked examples recomputed with plain integer arithmetic and compared
//! against the library.

use ringlift::finring::{
    find_isomorphism, ideal_as_ring, ideal_as_ring_with_embedding, ideal_generated, make_cyclic, make_matrix, make_product, quotient, Elem, FiniteRing, Ideal,
    RingMorphism,
};
use ringlift::lazyring::{
    approx_unit, constant_ideal_analysis, even_odd_extension, multiplier_as_limit, sigma_unit_of_extension, tietze_lift, IdealChain, LazyElem, LazyMorphism, LazyRing,
    MultiplierOracle,
};
use ringlift::lift::{jarl_completion, lift_exchange, lift_idempotent, lift_quasi_invertible, lift_regular, lift_unimodular, qb_lift_step, LiftContext, QbRoute};
use ringlift::mult::{extend_proper, hochschild_square, is_proper, multiplier_ring, universal_map, DoubleCentralizer};
use ringlift::tower::{pullback, random_tower, stagewise_exchange, stagewise_qb, stagewise_regular, truncated_limit, universal_factorization, Extension, Tower};
use ringlift::witness::{
    annihilator, bsr_at, exchange_witness, has_unit_in, idempotents, is_exchange, is_nondegenerate, is_qb, is_regular_ring, is_semiprime, partial_inverse,
    quasi_invertibles, reduce_row, ExchangeMode, Handedness, UnimodularRow,
};

fn z(n: usize) -> FiniteRing {
    make_cyclic(n).unwrap()
}

fn canonical(n: usize, m: usize) -> LiftContext {
    LiftContext::new(RingMorphism::from_fn(&z(n), &z(m), |x| x % m, true).unwrap()).unwrap()
}

fn ideal(r: &FiniteRing, members: &[Elem]) -> Ideal {
    Ideal::new(r, members.iter().copied()).unwrap()
}

fn units_mod(n: usize) -> Vec<usize> {
    (0..n).filter(|&u| (0..n).any(|v| u * v % n == 1 % n)).collect()
}

/// `u` is quasi-invertible in `ℤ/n`: some `v, w` with `(1 − vu)ℤ(1 − uw) = 0` both ways.
fn qi_mod(n: usize, u: usize) -> bool {
    let one = 1 % n;
    let killed = |p: usize, q: usize| (0..n).all(|t| p * t * q % n == 0);
    (0..n).any(|v| (0..n).any(|w| killed((n + one - v * u % n) % n, (n + one - u * w % n) % n)))
}

// 2×2 matrices over ℤ/p, entry (0,0) most significant.

fn decode(p: usize, x: usize) -> [usize; 4] {
    [x / (p * p * p) % p, x / (p * p) % p, x / p % p, x % p]
}

fn encode(p: usize, m: [usize; 4]) -> usize {
    ((m[0] * p + m[1]) * p + m[2]) * p + m[3]
}

fn matmul(p: usize, a: [usize; 4], b: [usize; 4]) -> [usize; 4] {
    [(a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p, (a[2] * b[0] + a[3] * b[2]) % p, (a[2] * b[1] + a[3] * b[3]) % p]
}

#[test]
fn cyclic_tables_match_modular_arithmetic() {
    for n in 1..=16 {
        let r = z(n);
        for a in 0..n {
            for b in 0..n {
                assert_eq!(r.add(a, b), (a + b) % n);
                assert_eq!(r.mul(a, b), a * b % n);
            }
        }
        let brute: Vec<usize> = (0..n).filter(|&e| e * e % n == e).collect();
        assert_eq!(idempotents(&r), brute, "Z/{n}");
    }
    assert_eq!(idempotents(&z(6)), vec![0, 1, 3, 4]);
    assert_eq!(idempotents(&z(4)), vec![0, 1]);
}

#[test]
fn matrices_over_f3() {
    let p = 3;
    let m = make_matrix(&z(p), 2).unwrap();
    assert_eq!(m.size(), 81);
    for a in m.elements() {
        for b in m.elements() {
            assert_eq!(m.mul(a, b), encode(p, matmul(p, decode(p, a), decode(p, b))));
        }
    }
    let det_nonzero = (0..81).filter(|&x| {
        let e = decode(p, x);
        (e[0] * e[3] + p * p - e[1] * e[2]) % p != 0
    });
    let one = m.one().unwrap();
    let invertible = m.elements().filter(|&x| m.elements().any(|y| m.mul(x, y) == one && m.mul(y, x) == one));
    assert_eq!(det_nonzero.count(), 48);
    assert_eq!(invertible.count(), 48);
}

#[test]
fn products_and_isomorphisms() {
    let p = make_product(&z(2), &z(3)).unwrap();
    for a in p.elements() {
        for b in p.elements() {
            let (a0, a1, b0, b1) = (a / 3, a % 3, b / 3, b % 3);
            assert_eq!(p.mul(a, b), (a0 * b0 % 2) * 3 + a1 * b1 % 3);
        }
    }
    let iso = find_isomorphism(&p, &z(6)).unwrap().expect("Z/2 x Z/3 is Z/6");
    assert!(iso.is_isomorphism());
    // The Chinese remainder map is the only unital isomorphism.
    for x in p.elements() {
        let y = iso.apply(x);
        assert_eq!((y % 2, y % 3), (x / 3, x % 3));
    }
    let v4 = make_product(&z(2), &z(2)).unwrap();
    assert_eq!(idempotents(&v4).len(), 4);
    assert!(find_isomorphism(&v4, &z(4)).unwrap().is_none());
}

#[test]
fn ideals_and_quotients() {
    for n in 1..=12 {
        let r = z(n);
        for g in 0..n {
            let brute: Vec<usize> = {
                let mut v: Vec<usize> = (0..n).map(|k| k * g % n).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            assert_eq!(ideal_generated(&r, &[g]).unwrap().members(), &brute[..], "({g}) in Z/{n}");
        }
    }
    assert_eq!(ideal_generated(&z(4), &[2]).unwrap().members(), &[0, 2]);
    assert_eq!(ideal_generated(&z(6), &[2]).unwrap().members(), &[0, 2, 4]);
    let z4 = z(4);
    let (q4, pi4) = quotient(&z4, &ideal(&z4, &[0, 2])).unwrap();
    assert!(find_isomorphism(&q4, &z(2)).unwrap().is_some());
    assert_eq!(pi4.kernel().members(), &[0, 2]);
    let z6 = z(6);
    let (q6, pi6) = quotient(&z6, &ideal(&z6, &[0, 3])).unwrap();
    assert!(find_isomorphism(&q6, &z(3)).unwrap().is_some());
    for x in 0..6 {
        for y in 0..6 {
            assert_eq!(pi6.apply(x) == pi6.apply(y), (x + 6 - y) % 3 == 0);
        }
    }
}

#[test]
fn ideals_as_rings() {
    let (r, emb) = ideal_as_ring_with_embedding(&ideal(&z(6), &[0, 3])).unwrap();
    assert_eq!(emb.apply(r.unit().expect("{0,3} is unital")), 3);
    assert_eq!(3 * 3 % 6, 3);
    let two_z4 = ideal_as_ring(&ideal(&z(4), &[0, 2])).unwrap();
    assert_eq!(two_z4.unit(), None);
    assert!(two_z4.elements().all(|x| two_z4.mul(x, x) == 0));
}

#[test]
fn regularity_against_brute_force() {
    for n in 1..=16 {
        let r = z(n);
        for x in 0..n {
            let brute = (0..n).find(|&y| x * y % n * x % n == x);
            assert_eq!(partial_inverse(&r, x), brute, "x = {x} in Z/{n}");
        }
        let first_bad = (0..n).find(|&x| (0..n).all(|y| x * y % n * x % n != x));
        assert_eq!(is_regular_ring(&r).unwrap().counterexample().copied(), first_bad, "Z/{n}");
    }
    assert_eq!(partial_inverse(&z(6), 5), Some(5));
    assert_eq!(partial_inverse(&z(4), 2), None);
    assert!(is_regular_ring(&z(6)).unwrap().holds());
    assert_eq!(is_regular_ring(&z(4)).unwrap().counterexample(), Some(&2));
}

#[test]
fn exchange_witnesses_in_z4() {
    let n = 4;
    for x in 0..n {
        let w = exchange_witness(&z(n), x, ExchangeMode::Unital).unwrap().expect("finite rings are exchange");
        let (e, r, y) = (w.e, w.r, w.y);
        assert_eq!(e * e % n, e);
        assert_eq!(x * r % n, e);
        // 1 − e = (1 − x)(1 − y)
        assert_eq!((n + 1 - e) % n, (n + 1 - x) * (n + 1 - y) % n, "x = {x}");
    }
    for n in 1..=12 {
        assert!(is_exchange(&z(n), ExchangeMode::Unital).unwrap().holds());
        assert!(is_exchange(&z(n), ExchangeMode::NonUnital).unwrap().holds());
    }
}

#[test]
fn row_reduction_and_stable_rank() {
    let r4 = z(4);
    let row = UnimodularRow::new(vec![1, 2], Some(vec![1, 0]));
    let (b, y) = reduce_row(&r4, &row).unwrap().expect("Z/4 has stable rank one");
    assert_eq!((2 + b[0]) * y[0] % 4, 1);
    let brute_b = (0..4).find(|&b| units_mod(4).contains(&((2 + b) % 4))).unwrap();
    assert_eq!(b[0], brute_b);

    let (b, y) = reduce_row(&z(2), &UnimodularRow::new(vec![1, 0], Some(vec![1, 0]))).unwrap().unwrap();
    assert_eq!((b[0], y[0]), (1, 1));

    for n in 1..=12 {
        let units = units_mod(n);
        let brute = (0..n).all(|a0| {
            (0..n).all(|a1| {
                let unimodular = (0..n).any(|s| (0..n).any(|t| (a0 * s + a1 * t) % n == 1 % n));
                !unimodular || (0..n).any(|b| units.contains(&((a1 + a0 * b) % n)))
            })
        });
        assert_eq!(bsr_at(&z(n), 1).unwrap().holds(), brute, "Z/{n}");
    }
}

#[test]
fn quasi_invertibles_against_brute_force() {
    for n in 1..=12 {
        let brute: Vec<usize> = (0..n).filter(|&u| qi_mod(n, u)).collect();
        assert_eq!(quasi_invertibles(&z(n)).unwrap(), brute, "Z/{n}");
    }
    assert_eq!(quasi_invertibles(&z(4)).unwrap(), vec![1, 3]);

    let p = 2;
    let m = make_matrix(&z(p), 2).unwrap();
    let id = [1, 0, 0, 1];
    let sub = |a: [usize; 4], b: [usize; 4]| -> [usize; 4] { [0, 1, 2, 3].map(|i| (a[i] + p - b[i]) % p) };
    let all: Vec<[usize; 4]> = (0..16).map(|x| decode(p, x)).collect();
    let killed = |a: [usize; 4], b: [usize; 4]| all.iter().all(|&t| matmul(p, matmul(p, a, t), b) == [0; 4] && matmul(p, matmul(p, b, t), a) == [0; 4]);
    let brute: Vec<usize> = (0..16)
        .filter(|&u| {
            let u = decode(p, u);
            all.iter().any(|&v| all.iter().any(|&w| killed(sub(id, matmul(p, v, u)), sub(id, matmul(p, u, w)))))
        })
        .collect();
    assert_eq!(brute.len(), 6);
    assert_eq!(quasi_invertibles(&m).unwrap(), brute);
}

#[test]
fn qb_in_z4_against_brute_force() {
    let n = 4;
    let brute = (0..n).all(|a| {
        (0..n).all(|x| {
            (0..n).all(|b| (a * x + b) % n != 1 || (0..n).any(|y| qi_mod(n, (a + b * y) % n)))
        })
    });
    assert!(brute);
    assert!(is_qb(&z(n), Handedness::Right).unwrap().holds());
    assert!(is_qb(&z(n), Handedness::Left).unwrap().holds());
}

#[test]
fn degeneracy_units_and_annihilators() {
    let two_z4 = ideal_as_ring(&ideal(&z(4), &[0, 2])).unwrap();
    let (_, emb) = ideal_as_ring_with_embedding(&ideal(&z(4), &[0, 2])).unwrap();
    let x = *is_nondegenerate(&two_z4).unwrap().counterexample().expect("2Z/4 is degenerate");
    assert_eq!(emb.apply(x), 2);
    assert_eq!(2 * 2 % 4, 0);
    assert_eq!(is_semiprime(&z(4)).unwrap().counterexample(), Some(&2));
    assert!((0..4).all(|r| 2 * r * 2 % 4 == 0));

    for (n, members) in [(6, vec![0, 3]), (4, vec![0, 2]), (6, vec![0]), (12, vec![0, 4, 8])] {
        let brute = (0..n).find(|&e| members.iter().all(|&x| e * x % n == x));
        let r = z(n);
        assert_eq!(has_unit_in(&r, &ideal(&r, &members)).unwrap(), brute);
    }
    // 1 already fixes {0, 3}; 3 is the smallest unit inside the ideal.
    let (r6, r4) = (z(6), z(4));
    assert_eq!(has_unit_in(&r6, &ideal(&r6, &[0, 3])).unwrap(), Some(1));
    assert_eq!(has_unit_in(&r4, &ideal(&r4, &[0, 2])).unwrap(), Some(1));

    let r6 = z(6);
    assert_eq!(annihilator(&r6, &ideal(&r6, &[0, 3])).unwrap().members(), &[0, 2, 4]);
    assert_eq!(annihilator(&r6, &ideal(&r6, &[0, 2, 4])).unwrap().members(), &[0, 3]);
    assert!(annihilator(&r6, &ideal(&r6, &[0])).unwrap().is_whole());
}

#[test]
fn regular_and_idempotent_lifts() {
    let ctx = canonical(6, 3);
    let l = lift_regular(&ctx, 5, 2).unwrap();
    assert_eq!(l.y * 5 % 6 * 5 % 6, 5);
    assert_eq!(5 * l.y % 6 * l.y % 6, l.y);
    assert_eq!(l.y % 3, 2);
    assert_eq!((l.y, l.u, l.v), (5, 3, 3));

    let e = lift_idempotent(&ctx, 1).unwrap();
    let brute: Vec<usize> = (0..6).filter(|&e| e % 3 == 1 && e * e % 6 == e).collect();
    assert_eq!(brute, vec![1, 4]);
    assert_eq!(e, 1);
}

#[test]
fn exchange_lift_z4_to_z2() {
    let ctx = canonical(4, 2);
    let (x, n) = (3, 4);
    let l = lift_exchange(&ctx, x, 1, 1).unwrap();
    let (y, zz) = (l.y, l.z);
    assert_eq!((y % 2, zz % 2), (1, 1));
    let e = x * y % n;
    assert_eq!(e * e % n, e);
    assert_eq!(y * e % n, y);
    assert_eq!((n + 1 - e) % n, (n + 1 - x) * (n + 1 - zz) % n);
    assert_eq!(zz * e % n, e);
    // The worked answer passes the same checks.
    assert_eq!((3 * 3 % 4, (4 + 1 - 1) % 4, (4 + 1 - 3) * (4 + 1 - 1) % 4), (1, 0, 0));
}

#[test]
fn unimodular_completions() {
    let n = 4;
    let j = jarl_completion(&z(n), &[2], &[1], 3).unwrap();
    // (a + s·b)·y₀ completed by z: (2 + 3b)(1 + ...) ≡ 1 is the hand example.
    assert_eq!((2 + 3) * (1 + 2 * 3 * 2) % 4, 1);
    j.verify(&z(n), &[2], &[1], 3).unwrap();

    let ctx = canonical(4, 2);
    // Over Z/2 the reduced row 0 + 1·b̄ is a unit only for b̄ = 1.
    let l = lift_unimodular(&ctx, &[1, 0], &[1, 0], &[1], &[1]).unwrap();
    assert_eq!((l.b[0] % 2, l.y[0] % 2), (1, 1));
    assert_eq!(l.b[0] * l.y[0] % n, 1);
}

#[test]
fn quasi_invertible_and_qb_lifts() {
    let u = lift_quasi_invertible(&canonical(4, 2), 1).unwrap();
    assert_eq!(u, 1);
    let u = lift_quasi_invertible(&canonical(6, 3), 2).unwrap();
    let brute = (0..6).find(|&u| u % 3 == 2 && qi_mod(6, u)).unwrap();
    assert_eq!(u, brute);

    let ctx = canonical(4, 2);
    let (x, a, b) = (1, 3, 2);
    assert_eq!((x * a + b) % 4, 1);
    for route in [QbRoute::Auto, QbRoute::EasyCase, QbRoute::General] {
        let l = qb_lift_step(&ctx, x, a, b, 0, 1, route).unwrap();
        assert_eq!(l.y % 2, 0);
        assert_eq!(l.u % 2, 1);
        assert_eq!((a + b * l.y) % 4, l.u);
        assert!(qi_mod(4, l.u));
    }
}

fn chain(ns: &[usize]) -> Tower {
    let stages: Vec<FiniteRing> = ns.iter().map(|&n| z(n)).collect();
    let connectors = ns.windows(2).map(|w| RingMorphism::from_fn(&z(w[1]), &z(w[0]), |x| x % w[0], true).unwrap()).collect();
    Tower::new(stages, connectors).unwrap()
}

#[test]
fn towers_of_cyclic_rings() {
    let t = chain(&[2, 4, 8]);
    let (limit, rhos) = truncated_limit(&t).unwrap();
    assert_eq!(limit.size(), 8);
    assert_eq!(rhos[0].kernel().members(), &[0, 2, 4, 6]);
    assert_eq!((0..8).filter(|x| x % 2 == 0).collect::<Vec<_>>(), rhos[0].kernel().members());

    let t2 = chain(&[2, 4]);
    let z8 = z(8);
    let sigmas = vec![
        RingMorphism::from_fn(&z8, t2.stage(1), |x| x % 2, true).unwrap(),
        RingMorphism::from_fn(&z8, t2.stage(2), |x| x % 4, true).unwrap(),
    ];
    let sigma = universal_factorization(&t2, &sigmas).unwrap();
    assert_eq!(sigma.map(), &[0, 1, 2, 3, 0, 1, 2, 3]);
}

#[test]
fn stagewise_worked_examples() {
    let t = chain(&[3, 6]);
    let reg = stagewise_regular(&t).unwrap();
    let e = reg.iter().find(|e| e.x.top() == 5).unwrap();
    assert_eq!(e.y.coords, vec![2, 5]);
    assert_eq!(5 * 5 * 5 % 6, 5);

    let t = chain(&[2, 4]);
    for e in stagewise_exchange(&t).unwrap() {
        for n in 1..=2 {
            let m = [2, 4][n - 1];
            let (x, y, zz) = (e.x.at(n), e.y.at(n), e.z.at(n));
            let ee = x * y % m;
            assert_eq!(ee * ee % m, ee);
            assert_eq!((m + 1 - ee) % m, (m + 1 - x) * (m + 1 - zz) % m);
        }
    }
    for e in stagewise_qb(&t).unwrap() {
        for n in 1..=2 {
            let m = [2, 4][n - 1];
            assert_eq!((e.x.at(n) * e.a.at(n) + e.b.at(n)) % m, 1 % m);
            assert_eq!((e.a.at(n) + e.b.at(n) * e.y.at(n)) % m, e.u.at(n));
            assert!(qi_mod(m, e.u.at(n)));
        }
    }
}

#[test]
fn pullbacks_and_random_towers() {
    let alpha = RingMorphism::from_fn(&z(4), &z(2), |x| x % 2, true).unwrap();
    let pb = pullback(&alpha, &alpha).unwrap();
    let brute = (0..4).flat_map(|r| (0..4).map(move |s| (r, s))).filter(|(r, s)| r % 2 == s % 2).count();
    assert_eq!(brute, 8);
    assert_eq!(pb.ring.size(), 8);

    let z8 = z(8);
    let rt = random_tower(&[z8], 3, 11).unwrap();
    assert_eq!(rt.tower.depth(), 3);
    for n in 2..=3 {
        let c = rt.tower.connector(n);
        assert!(c.is_surjective());
        assert_eq!(rt.tower.stage(n).size(), rt.tower.stage(n - 1).size() * c.kernel().len());
    }
}

#[test]
fn multipliers_of_small_rings() {
    let v4 = make_product(&z(2), &z(2)).unwrap();
    let m = multiplier_ring(&v4).unwrap();
    assert_eq!(m.ring.size(), 4);
    // Additive endomorphisms of F2 x F2 that commute with the multiplication on both sides.
    let endos: Vec<[usize; 4]> = (0..256)
        .map(|k| [k % 4, k / 4 % 4, k / 16 % 4, k / 64 % 4])
        .filter(|f| f[0] == 0 && (0..4).all(|a| (0..4).all(|b| f[a ^ b] == f[a] ^ f[b])))
        .collect();
    let mulv = |a: usize, b: usize| a & b;
    let pairs = endos
        .iter()
        .flat_map(|l| endos.iter().map(move |r| (l, r)))
        .filter(|(l, r)| (0..4).all(|x| (0..4).all(|y| l[mulv(x, y)] == mulv(l[x], y) && r[mulv(x, y)] == mulv(x, r[y]) && mulv(x, l[y]) == mulv(r[x], y))))
        .count();
    assert_eq!(pairs, 4);

    // F2 x 0 is the pair (1, 0), index 2.
    let s = &v4;
    let i = ideal(s, &[0, 2]);
    let u = universal_map(s, &i).unwrap();
    assert!(!u.injective);
    assert!(!u.essential);
    assert_eq!(u.phi.apply(1), 0);
}

#[test]
fn proper_morphisms() {
    let v4 = make_product(&z(2), &z(2)).unwrap();
    let pi = RingMorphism::from_fn(&v4, &v4, |x| x & 2, false).unwrap();
    assert!(!is_proper(&pi).unwrap());

    let pi = RingMorphism::from_fn(&z(4), &z(2), |x| x % 2, true).unwrap();
    assert!(is_proper(&pi).unwrap());
    let m = DoubleCentralizer::of_element(&z(4), 3);
    assert_eq!(extend_proper(&pi, &m).unwrap(), DoubleCentralizer::of_element(&z(2), 1));
}

#[test]
fn hochschild_squares_of_unital_ideals() {
    for (ring, members) in [(z(6), vec![0, 3]), (make_product(&z(2), &z(2)).unwrap(), vec![0, 2])] {
        let h = hochschild_square(&Extension::of_ideal(&ideal(&ring, &members)).unwrap()).unwrap();
        assert!(h.is_pullback, "{}", ring.name());
        assert_eq!(h.corona.size(), 1);
        assert_eq!(h.multipliers.ring.size(), members.len());
        assert_eq!(h.pullback.ring.size(), ring.size());
    }
}

#[test]
fn lazy_worked_examples() {
    let r = LazyRing::finsupport(&z(2)).unwrap();
    let u = approx_unit(&r);
    assert_eq!(r.mul(&u.e(2), &r.delta(1)), r.delta(1));
    assert_eq!(r.mul(&u.e(3), &u.e(2)), u.e(2));
    assert_eq!(u.index_for(&r.delta(5)), 6);

    let pi = LazyMorphism::evens(&r).unwrap();
    let one = MultiplierOracle::unit(pi.target());
    let t = tietze_lift(&pi, &one, 12).unwrap();
    for k in 0..6 {
        assert_eq!(t.oracle.act_left(&r.delta(2 * k)).unwrap(), r.delta(2 * k));
    }
    let zero = tietze_lift(&pi, &MultiplierOracle::zero(pi.target()), 12).unwrap();
    assert!(r.probes(12, 30).iter().all(|p| zero.oracle.act_left(p).unwrap().is_zero()));

    let f = |k: usize| usize::from(k % 3 != 1);
    let maps = multiplier_as_limit(&r, 8).unwrap();
    let x = MultiplierOracle::from_function(&r, "f", f).unwrap();
    let s = maps.forward(&x).unwrap();
    for n in 1..=8 {
        assert_eq!(s.at(n).0, r.indicator((0..n).filter(|&k| f(k) == 1)));
    }
    let back = maps.backward(&s).unwrap();
    assert_eq!(back.act_left(&r.delta(3)).unwrap(), if f(3) == 1 { r.delta(3) } else { LazyElem::zero() });

    let chain = IdealChain::new(&r).unwrap();
    let rep = constant_ideal_analysis(&chain, 3, 2, 8).unwrap();
    assert!(rep.decisions[1].constant);
    let rep = constant_ideal_analysis(&chain, 2, 5, 9).unwrap();
    let d5 = &rep.decisions[4];
    assert!(!d5.constant);
    // The first point of [m, k) lies in both I_5 and ker ρ_2.
    assert_eq!(d5.witness, Some(r.delta(2).to_string()));
    assert!((1..=5).all(|k| rep.decisions[k - 1].constant == (k <= 2)));
    assert_eq!(rep.perp, 2);

    let ext = even_odd_extension(&r).unwrap();
    let probes = r.probes(8, 40);
    let s = sigma_unit_of_extension(&ext, 4, &probes, 4).unwrap();
    for (i, v) in s.v.iter().enumerate() {
        let k = v.window();
        assert_eq!(*v, r.block(k), "v_{} is an initial block", i + 1);
    }
}
