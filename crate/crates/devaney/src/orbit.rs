//! Orbits, omega-limit covers and the weak-indecomposability check.
//!
//! Orbits are exact; a denominator-bit budget truncates recording rather
//! than ever rounding. Omega-limit sets are estimated as dyadic covers of
//! an orbit tail, so every verdict from this module is tagged empirical:
//! finite orbits cannot certify omega-limit sets, and the residual-set
//! quantifier in weak indecomposability is not machine-checkable. The
//! deterministic seed grid uses odd dyadic numerators, which keeps runs
//! reproducible and stays off the maps' breakpoints.

use crate::interval::{dyadic_cell_of, IntervalSet};
use crate::map::{MapError, MapModel};
use crate::rational::Rational;
use crate::verdict::{Budget, BudgetUse, Status, Verdict, Witness};

/// An exactly computed orbit prefix `x, f(x), ..., f^N(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub seed: Rational,
    pub points: Vec<Rational>,
    /// True when the denominator-bit budget stopped recording early.
    pub truncated: bool,
}

/// A dyadic cover of an orbit tail, standing in for the omega-limit set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaEstimate {
    pub cover: IntervalSet,
    pub resolution: u32,
    pub burn_in: usize,
    pub tail_length: usize,
}

/// Exact orbit of `x0` for up to `n` steps. Recording stops early (with the
/// `truncated` flag, never an error) when a point's denominator exceeds the
/// bit budget.
pub fn orbit(
    m: &MapModel,
    x0: &Rational,
    n: usize,
    denom_bits: u64,
) -> Result<OrbitRecord, MapError> {
    if !m.domain().contains_point(x0) {
        return Err(MapError::OutsideDomain { x: x0.clone(), domain: m.domain() });
    }
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0.clone());
    let mut truncated = false;
    for _ in 0..n {
        let next = m.eval(points.last().unwrap())?;
        if next.denom_bits() > denom_bits {
            truncated = true;
            break;
        }
        points.push(next);
    }
    Ok(OrbitRecord { seed: x0.clone(), points, truncated })
}

/// Dyadic cover of the orbit segment with indices in
/// `[burn_in, burn_in + tail)`, at resolution `k`. Deterministic.
pub fn omega_estimate(
    m: &MapModel,
    x0: &Rational,
    burn_in: usize,
    tail: usize,
    k: u32,
    budget: &Budget,
) -> Result<OmegaEstimate, MapError> {
    assert!(burn_in >= 1 && tail >= 1, "burn_in and tail must be positive");
    let record = orbit(m, x0, burn_in + tail - 1, budget.orbit_denom_bits)?;
    let domain = m.domain();
    // A truncated orbit contributes whatever tail it still has; the final
    // recorded point stands in when truncation bites before the burn-in.
    let tail_points: &[Rational] = if record.points.len() > burn_in {
        &record.points[burn_in..]
    } else {
        std::slice::from_ref(record.points.last().unwrap())
    };
    let cells = tail_points
        .iter()
        .map(|x| dyadic_cell_of(&domain, x, k))
        .collect();
    Ok(OmegaEstimate {
        cover: IntervalSet::normalize(cells),
        resolution: k,
        burn_in,
        tail_length: tail_points.len(),
    })
}

/// The deterministic seed grid: `sample_count` odd-numerator dyadic points
/// spread over the domain interior.
pub fn seed_grid(m: &MapModel, sample_count: usize) -> Vec<Rational> {
    let domain = m.domain();
    let mut s = 1u32;
    while (1usize << (s - 1)) < sample_count {
        s += 1;
    }
    let width = domain.hi() - domain.lo();
    (0..sample_count)
        .map(|j| {
            let frac = Rational::dyadic(2 * j as i64 + 1, s);
            domain.lo() + &width * frac
        })
        .collect()
}

/// Definition-style check that a residual set of points share one
/// omega-limit set, probed on the deterministic seed grid. Covers must
/// agree pairwise within one dyadic cell of slack. Always empirical:
/// `Holds` is never certified and `Fails` carries the two divergent seeds
/// as a re-runnable (not proof-grade) witness.
pub fn weak_indecomposability_check(
    m: &MapModel,
    sample_count: usize,
    k: u32,
    burn_in: usize,
    tail: usize,
    budget: &Budget,
) -> Result<Verdict, MapError> {
    assert!(sample_count >= 2, "need at least two sample seeds");
    let property = "weak-indecomposability";
    let seeds = seed_grid(m, sample_count);
    let mut covers = Vec::with_capacity(seeds.len());
    let mut use_counters = BudgetUse::default();
    for seed in &seeds {
        let est = omega_estimate(m, seed, burn_in, tail, k, budget)?;
        use_counters.orbit_points += (burn_in + est.tail_length) as u64;
        covers.push(est.cover);
    }
    let slack = Rational::pow2_inv(k);
    for i in 0..covers.len() {
        for j in (i + 1)..covers.len() {
            let agree = covers[j].dilate(&slack).contains(&covers[i])
                && covers[i].dilate(&slack).contains(&covers[j]);
            if !agree {
                return Ok(Verdict::new(property, Status::Fails)
                    .at_resolution(k)
                    .with_witness(Witness::OmegaDivergence {
                        seed_a: seeds[i].clone(),
                        cover_a: covers[i].clone(),
                        seed_b: seeds[j].clone(),
                        cover_b: covers[j].clone(),
                    })
                    .with_note(format!(
                        "empirical: omega covers from {sample_count} grid seeds, \
                         burn-in {burn_in}, tail {tail}"
                    ))
                    .with_budget(use_counters));
            }
        }
    }
    Ok(Verdict::new(property, Status::Holds)
        .at_resolution(k)
        .with_note(format!(
            "empirical: all {sample_count} omega covers agree within one cell \
             (burn-in {burn_in}, tail {tail})"
        ))
        .with_budget(use_counters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::ClosedInterval;
    use crate::map::builtin;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> ClosedInterval {
        ClosedInterval::new(q(lo), q(hi)).unwrap()
    }

    #[test]
    fn fixed_point_orbit() {
        let f = builtin("example-3-1", None).unwrap();
        let rec = orbit(&f, &q("1/2"), 5, 4096).unwrap();
        assert_eq!(rec.points, vec![q("1/2"); 6]);
        assert!(!rec.truncated);
    }

    #[test]
    fn staircase_reaches_one_and_stays() {
        let f = builtin("example-3-2", None).unwrap();
        let rec = orbit(&f, &q("1/2"), 2, 4096).unwrap();
        assert_eq!(rec.points, vec![q("1/2"), q("1"), q("1")]);
    }

    #[test]
    fn identity_orbit_constant() {
        let f = builtin("identity", None).unwrap();
        let rec = orbit(&f, &q("1/3"), 3, 4096).unwrap();
        assert_eq!(rec.points, vec![q("1/3"); 4]);
    }

    #[test]
    fn orbit_points_stay_in_domain() {
        for name in ["tent", "identity", "example-3-1", "example-3-2"] {
            let m = builtin(name, None).unwrap();
            let dom = m.domain();
            for seed in seed_grid(&m, 16) {
                let rec = orbit(&m, &seed, 60, 4096).unwrap();
                assert!(rec.points.iter().all(|p| dom.contains_point(p)), "{name} escaped");
            }
        }
    }

    #[test]
    fn denominator_budget_truncates() {
        // Slope 2/3 blows denominators up by 3 each step.
        let m = crate::map::PLMap::from_breakpoints(vec![
            (q("0"), q("1/3")),
            (q("1"), q("1")),
        ])
        .unwrap();
        let m = MapModel::from_pl("shrink", m);
        let rec = orbit(&m, &q("1/7"), 1000, 64).unwrap();
        assert!(rec.truncated);
        assert!(rec.points.len() < 1001);
    }

    #[test]
    fn omega_cover_of_attracting_endpoint() {
        let f = builtin("example-3-2", None).unwrap();
        let est = omega_estimate(&f, &q("1/3"), 64, 64, 10, &Budget::default()).unwrap();
        assert_eq!(est.cover, IntervalSet::singleton(iv("1023/1024", "1")));
    }

    #[test]
    fn omega_cover_constant_map() {
        let f = builtin("constant", Some(q("1/2"))).unwrap();
        let est = omega_estimate(&f, &q("1/7"), 8, 8, 6, &Budget::default()).unwrap();
        assert_eq!(est.cover, IntervalSet::singleton(iv("1/2", "33/64")));
    }

    #[test]
    fn omega_cover_tent_fixed_point() {
        let f = builtin("tent", None).unwrap();
        let est = omega_estimate(&f, &q("2/3"), 16, 16, 8, &Budget::default()).unwrap();
        // 2/3 is fixed under the tent map; its cell covers it.
        assert!(est.cover.contains_point(&q("2/3")));
        assert_eq!(est.cover.len(), 1);
    }

    #[test]
    fn seed_grid_is_odd_dyadic() {
        let f = builtin("tent", None).unwrap();
        let seeds = seed_grid(&f, 64);
        assert_eq!(seeds.len(), 64);
        assert_eq!(seeds[0], q("1/128"));
        assert_eq!(seeds[63], q("127/128"));
        for s in &seeds {
            assert!(s > &q("0") && s < &q("1"));
        }
    }

    #[test]
    fn weak_check_fails_for_identity_with_witness() {
        let f = builtin("identity", None).unwrap();
        let v = weak_indecomposability_check(&f, 64, 10, 8, 8, &Budget::default()).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert!(!v.certified);
        match v.witness {
            Some(Witness::OmegaDivergence { seed_a, seed_b, .. }) => {
                assert_ne!(seed_a, seed_b);
            }
            other => panic!("expected divergence witness, got {other:?}"),
        }
    }

    #[test]
    fn weak_check_holds_for_constant() {
        let f = builtin("constant", Some(q("1/2"))).unwrap();
        let v = weak_indecomposability_check(&f, 16, 10, 8, 8, &Budget::default()).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert!(!v.certified);
    }

    #[test]
    fn weak_check_deterministic() {
        let f = builtin("example-3-1", None).unwrap();
        let b = Budget::default();
        let v1 = weak_indecomposability_check(&f, 32, 10, 64, 64, &b).unwrap();
        let v2 = weak_indecomposability_check(&f, 32, 10, 64, 64, &b).unwrap();
        assert_eq!(v1, v2);
    }
}
