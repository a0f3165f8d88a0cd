use proptest::prelude::*;
use ringlift::finring::{all_ideals, catalog, quotient, unitalize, Elem, FiniteRing, RingMorphism};
use ringlift::lift::{lift_exchange, lift_regular, qb_lift_step, LiftContext, QbRoute};
use ringlift::tower::{is_coherent, random_tower, string};
use ringlift::witness::{exchange_data, is_exchange, is_regular_ring, partial_inverse, quasi_invertibles, ExchangeMode};

fn ring() -> impl Strategy<Value = FiniteRing> {
    (0..catalog().len()).prop_map(|i| catalog()[i].clone())
}

fn ring_and(k: usize) -> impl Strategy<Value = (FiniteRing, Vec<Elem>)> {
    ring().prop_flat_map(move |r| {
        let n = r.size();
        (Just(r), prop::collection::vec(0..n, k))
    })
}

/// A catalog ring, one of its ideals and the quotient map.
fn surjection() -> impl Strategy<Value = LiftContext> {
    ring().prop_filter("at most 16 elements", |r| r.size() <= 16).prop_flat_map(|r| {
        let ideals = all_ideals(&r).unwrap();
        (0..ideals.len()).prop_map(move |i| LiftContext::new(quotient(&r, &ideals[i]).unwrap().1).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ring_axioms((r, v) in ring_and(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(r.add(a, b), r.add(b, a));
        prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(r.add(a, b), c), r.add(r.mul(a, c), r.mul(b, c)));
        if let Some(u) = r.unit() {
            prop_assert_eq!(r.mul(u, a), a);
            prop_assert_eq!(r.mul(a, u), a);
        }
    }

    #[test]
    fn quotient_maps_are_homomorphisms_with_the_ideal_as_kernel(ctx in surjection(), a in 0usize..16, b in 0usize..16) {
        let (r, pi) = (ctx.source(), ctx.pi());
        let (a, b) = (a % r.size(), b % r.size());
        prop_assert_eq!(pi.apply(r.add(a, b)), pi.target().add(pi.apply(a), pi.apply(b)));
        prop_assert_eq!(pi.apply(r.mul(a, b)), pi.target().mul(pi.apply(a), pi.apply(b)));
        prop_assert!(pi.is_surjective());
        let kernel = pi.kernel();
        prop_assert_eq!(kernel.members(), ctx.kernel().members());
        prop_assert_eq!(pi.apply(a) == pi.apply(b), ctx.kernel().contains(r.sub(a, b)));
    }

    #[test]
    fn unitalization_contains_the_ring_as_an_ideal((r, v) in ring_and(2)) {
        prop_assume!(r.size() <= 16);
        let u = unitalize(&r).unwrap();
        let one = u.unit().unwrap();
        let (base, _) = u.unitalization_parts().unwrap();
        prop_assert_eq!(base.size(), r.size());
        // (x, 0) has index x.
        let embed = RingMorphism::from_fn(&r, &u, |x| x, false).unwrap();
        prop_assert!(embed.is_injective());
        for t in u.elements() {
            prop_assert!(r.elements().any(|x| embed.apply(x) == u.mul(t, embed.apply(v[0]))));
            prop_assert!(r.elements().any(|x| embed.apply(x) == u.mul(embed.apply(v[1]), t)));
        }
        prop_assert_eq!(u.mul(one, embed.apply(v[0])), embed.apply(v[0]));
    }

    #[test]
    fn regular_lifts_satisfy_the_identities(ctx in surjection(), seed in any::<u64>()) {
        prop_assume!(ctx.kernel_is_regular());
        let (r, s) = (ctx.source(), ctx.target());
        let x = (seed as usize) % r.size();
        let xbar = ctx.apply(x);
        if let Some(ybar) = partial_inverse(s, xbar) {
            let l = lift_regular(&ctx, x, ybar).unwrap();
            prop_assert_eq!(r.mul(r.mul(x, l.y), x), x);
            prop_assert_eq!(ctx.apply(l.y_lift), ybar);
        }
    }

    #[test]
    fn exchange_lifts_satisfy_the_identities(ctx in surjection(), seed in any::<u64>()) {
        prop_assume!(ctx.source().is_unital());
        let (r, s) = (ctx.source(), ctx.target());
        let x = (seed as usize) % r.size();
        let (ybar, zbar) = exchange_data(s, ctx.apply(x)).unwrap().expect("finite rings are exchange");
        let l = lift_exchange(&ctx, x, ybar, zbar).unwrap();
        let one = r.unit().unwrap();
        let e = r.mul(x, l.y);
        prop_assert_eq!(r.mul(e, e), e);
        prop_assert_eq!(r.mul(l.y, e), l.y);
        prop_assert_eq!(r.sub(one, e), r.mul(r.sub(one, x), r.sub(one, l.z)));
        prop_assert_eq!(r.mul(l.z, e), e);
        prop_assert_eq!((ctx.apply(l.y), ctx.apply(l.z)), (ybar, zbar));
    }

    #[test]
    fn qb_steps_land_on_quasi_invertibles(ctx in surjection(), seed in any::<u64>()) {
        let (r, s) = (ctx.source(), ctx.target());
        prop_assume!(r.is_unital() && s.is_unital());
        let one = r.unit().unwrap();
        let n = r.size();
        let (x, a) = ((seed as usize) % n, (seed as usize / n) % n);
        let b = r.sub(one, r.mul(x, a));
        let qi_s = quasi_invertibles(s).unwrap();
        let qi_r = quasi_invertibles(r).unwrap();
        let (abar, bbar) = (ctx.apply(a), ctx.apply(b));
        let found = s.elements().find_map(|y| {
            let u = s.add(abar, s.mul(y, bbar));
            qi_s.contains(&u).then_some((y, u))
        });
        if let Some((ybar, ubar)) = found {
            let l = qb_lift_step(&ctx, x, a, b, ybar, ubar, QbRoute::Auto).unwrap();
            prop_assert_eq!(r.add(a, r.mul(l.y, b)), l.u);
            prop_assert!(qi_r.contains(&l.u));
            prop_assert_eq!((ctx.apply(l.y), ctx.apply(l.u)), (ybar, ubar));
        }
    }

    #[test]
    fn strings_of_random_towers_are_coherent(depth in 1usize..=4, seed in any::<u64>(), pick in any::<usize>()) {
        let t = random_tower(catalog(), depth, seed).unwrap();
        let top = pick % t.tower.top().size();
        let s = string(&t.tower, top);
        prop_assert!(is_coherent(&t.tower, &s.coords));
        prop_assert_eq!(s.top(), top);
        if depth >= 2 {
            let mut bad = s.coords.clone();
            let n = bad.len();
            let kernel = t.tower.connector(n).kernel();
            // Moving the top coordinate off its fibre breaks coherence.
            let off = t.tower.top().elements().find(|&y| t.tower.connector(n).apply(y) != s.at(n - 1));
            if let Some(y) = off {
                bad[n - 1] = y;
                prop_assert!(!is_coherent(&t.tower, &bad));
            }
            prop_assert!(kernel.contains(0));
        }
    }

    #[test]
    fn regular_rings_are_exchange(r in ring()) {
        prop_assume!(r.size() <= 16);
        if is_regular_ring(&r).unwrap().holds() {
            prop_assert!(is_exchange(&r, ExchangeMode::NonUnital).unwrap().holds());
        }
    }

    #[test]
    fn table_mutations_are_rejected(r in ring(), i in any::<usize>(), bump in 1usize..16) {
        prop_assume!(r.size() >= 2 && r.size() <= 16);
        let n = r.size();
        let (add, mut mul) = r.table_copies().unwrap();
        let cell = i % (n * n);
        mul[cell] = (mul[cell] + bump % (n - 1) + 1) % n;
        let strict = FiniteRing::from_tables_strict("mutant", r.structure().clone(), &add, &mul, r.unit());
        prop_assert!(strict.is_err(), "{} with mul[{cell}] changed was accepted", r.name());
    }
}
