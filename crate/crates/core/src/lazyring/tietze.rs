use super::{approx_unit, LazyElem, LazyMorphism, MultiplierOracle};
use crate::budget;
use crate::error::{Error, Result};

/// How far past `σ(n)` the subsequence scan looks for `σ(n + 1)`.
const SCAN: usize = 1 << 12;

/// A multiplier `x` over the source with `π̄(x) = x̄`, built as the strict
/// limit of `x_1, x_2, …`.
#[derive(Clone, Debug)]
pub struct TietzeLift {
    pub oracle: MultiplierOracle,
    pub precision: usize,
    /// `subsequence[n - 1] = σ(n)`: the approximate unit is reindexed as `e_{σ(n)}`.
    pub subsequence: Vec<usize>,
    /// `sequence[n - 1] = x_n`.
    pub sequence: Vec<LazyElem>,
    /// Target probes on which `π(x·lift(s)) = x̄s` and `π(lift(s)·x) = sx̄` were checked.
    pub agreement_probes: usize,
}

impl TietzeLift {
    /// `x_n` as a multiplier, for `n ≥ 1`.
    pub fn term(&self, n: usize) -> Result<MultiplierOracle> {
        let x = self.sequence.get(n.wrapping_sub(1)).ok_or_else(|| Error::OutOfRange(format!("term {n} of {}", self.sequence.len())))?;
        Ok(MultiplierOracle::from_element(self.oracle.ring(), x))
    }
}

pub fn tietze_lift(pi: &LazyMorphism, xbar: &MultiplierOracle, precision: usize) -> Result<TietzeLift> {
    let (r, s) = (pi.source(), pi.target());
    if !xbar.ring().same(s) {
        return Err(Error::pre("tietze_lift", "x̄ is not a multiplier of the target"));
    }
    if precision == 0 {
        return Err(Error::OutOfRange("precision 0".into()));
    }
    let unit = approx_unit(r);
    let ebar = |k: usize| pi.apply(&unit.e(k));

    // σ(n + 1) is the first m > σ(n) with ē_m x̄ ē_σ(n) = x̄ ē_σ(n).
    let step = |prev: usize| -> Result<usize> {
        let xe = xbar.act_left(&ebar(prev))?;
        (prev + 1..=prev + SCAN)
            .find(|&m| s.mul(&ebar(m), &xe) == xe)
            .ok_or_else(|| Error::Internal(format!("no index past {prev} normalizes x̄ within {SCAN} steps")))
    };
    let mut sigma = vec![1];
    while *sigma.last().expect("non-empty") < precision {
        sigma.push(step(*sigma.last().expect("non-empty"))?);
    }
    // Probes in [0, precision) are fixed by e(k), so x_m acts on them finally from m = k + 2.
    let k = sigma.len();
    let terms = k + 3;
    while sigma.len() < terms {
        sigma.push(step(*sigma.last().expect("non-empty"))?);
    }
    // e(n) = e_σ(n), with e(n) = 0 for n ≤ 0.
    let e = |n: isize| if n <= 0 { LazyElem::zero() } else { unit.e(sigma[n as usize - 1]) };
    let target = |n: isize| xbar.act_right(&pi.apply(&e(n)));

    let mut xs = vec![pi.lift(&target(1)?), pi.lift(&target(2)?)];
    for n in 2..terms as isize {
        budget::charge(1 << 10)?;
        let z = pi.lift(&target(n + 1)?);
        let xn = &xs[n as usize - 1];
        let d = r.sub(&z, xn);
        let en = e(n - 1);
        let (de, ed) = (r.mul(&d, &en), r.mul(&en, &d));
        if !pi.apply(&de).is_zero() || !pi.apply(&ed).is_zero() {
            return Err(Error::Internal(format!("correction at step {n} leaves the kernel")));
        }
        let next = r.add(&r.sub(&r.sub(&z, &de), &ed), &r.mul(&ed, &en));
        xs.push(next);
    }
    for (i, x) in xs.iter().enumerate() {
        let n = i as isize + 1;
        if pi.apply(x) != target(n)? {
            return Err(Error::Internal(format!("π(x_{n}) differs from ē_{n}x̄")));
        }
        if n >= 2 {
            let diff = r.sub(x, &xs[i - 1]);
            let e3 = e(n - 3);
            if !r.mul(&diff, &e3).is_zero() || !r.mul(&e3, &diff).is_zero() {
                return Err(Error::Internal(format!("stability (x_{n} − x_{}) e_{} = 0 fails", n - 1, n - 3)));
            }
        }
    }

    let oracle = MultiplierOracle::from_element(r, xs.last().expect("non-empty")).relabel(format!("tietze({})", xbar.label())).windowed(precision);

    let probes = s.probes(pi.target_window(precision), 48);
    for y in &probes {
        let l = pi.lift(y);
        if l.window() > precision {
            continue;
        }
        if pi.apply(&oracle.act_left(&l)?) != xbar.act_left(y)? || pi.apply(&oracle.act_right(&l)?) != xbar.act_right(y)? {
            return Err(Error::Internal(format!("π̄(x) and x̄ differ on {y}")));
        }
    }
    Ok(TietzeLift { oracle, precision, subsequence: sigma, sequence: xs, agreement_probes: probes.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finring::make_cyclic;
    use crate::lazyring::{strict_probe, LazyRing};

    fn f2() -> LazyRing {
        LazyRing::finsupport(&make_cyclic(2).unwrap()).unwrap()
    }

    #[test]
    fn identity_lifts_elements() {
        let r = f2();
        let s = r.indicator([1, 2, 5]);
        let t = tietze_lift(&LazyMorphism::identity(&r), &MultiplierOracle::from_element(&r, &s), 8).unwrap();
        assert_eq!(t.oracle.disagreement(&MultiplierOracle::from_element(&r, &s), &r.probes(8, 60)).unwrap(), None);
    }

    #[test]
    fn constant_one_over_the_evens() {
        let r = f2();
        let pi = LazyMorphism::evens(&r).unwrap();
        let t = tietze_lift(&pi, &MultiplierOracle::unit(&r), 16).unwrap();
        for k in 0..8 {
            let d = r.delta(2 * k);
            assert_eq!(pi.apply(&t.oracle.act_left(&d).unwrap()), r.delta(k));
        }
        let zero = tietze_lift(&pi, &MultiplierOracle::zero(&r), 16).unwrap();
        assert!(zero.sequence.iter().all(LazyElem::is_zero));
    }

    #[test]
    fn terms_stabilize_three_past_the_support() {
        let r = f2();
        let pi = LazyMorphism::evens(&r).unwrap();
        let t = tietze_lift(&pi, &MultiplierOracle::unit(&r), 16).unwrap();
        let probes: Vec<LazyElem> = (0..10).map(|k| r.delta(k)).collect();
        let report = strict_probe(&|n| t.term(n), &probes, 1, t.sequence.len()).unwrap();
        for (k, row) in report.iter().enumerate() {
            assert!(row.index.unwrap() <= k + 3, "{row:?}");
        }
    }
}
