//! Property suites: interval-set algebra laws, map-evaluation agreement,
//! hull soundness on the corpus, and the executable forms of the
//! equivalence statements the verdict engine is built on.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use devaney::{
    builtin, check_indecomposable, check_strong_indecomposable, check_transitivity, forward_hull,
    omega_estimate, Budget, ClosedInterval, IntervalSet, MapModel, PLMap, Rational, Status,
};

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn corpus() -> Vec<MapModel> {
    vec![
        builtin("tent", None).unwrap(),
        builtin("example-3-1", None).unwrap(),
        builtin("example-3-2", None).unwrap(),
        builtin("identity", None).unwrap(),
        builtin("constant", Some(q("1/2"))).unwrap(),
    ]
}

fn rational_in_unit(rng: &mut StdRng) -> Rational {
    let d = rng.gen_range(2..=512u64);
    let n = rng.gen_range(0..=d);
    Rational::from_parts(n.into(), d.into())
}

// --- interval-set algebra -------------------------------------------------

prop_compose! {
    fn arb_interval_set()(raw in prop::collection::vec((0u32..=512, 0u32..=512), 0..6)) -> IntervalSet {
        let pairs = raw
            .into_iter()
            .map(|(a, b)| {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                (Rational::from_parts(lo.into(), 512.into()),
                 Rational::from_parts(hi.into(), 512.into()))
            })
            .collect();
        IntervalSet::from_endpoints(pairs).unwrap()
    }
}

proptest! {
    #[test]
    fn normalize_is_idempotent(s in arb_interval_set()) {
        let again = IntervalSet::normalize(s.components().to_vec());
        prop_assert_eq!(again, s);
    }

    #[test]
    fn union_laws(a in arb_interval_set(), b in arb_interval_set(), c in arb_interval_set()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.union(&a), a.clone());
        prop_assert_eq!(a.union(&IntervalSet::empty()), a);
    }

    #[test]
    fn length_inclusion_exclusion(a in arb_interval_set(), b in arb_interval_set()) {
        let lhs = a.union(&b).total_length() + a.intersect(&b).total_length();
        let rhs = a.total_length() + b.total_length();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contains_antisymmetry(a in arb_interval_set(), b in arb_interval_set()) {
        if a.contains(&b) && b.contains(&a) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn intersect_is_lower_bound(a in arb_interval_set(), b in arb_interval_set()) {
        let i = a.intersect(&b);
        prop_assert!(a.contains(&i));
        prop_assert!(b.contains(&i));
    }
}

// --- map evaluation -------------------------------------------------------

#[test]
fn eval_agrees_with_degenerate_image_on_corpus() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0101);
    for m in corpus() {
        for _ in 0..1000 {
            let x = rational_in_unit(&mut rng);
            let y = m.eval(&x).unwrap();
            let img = m.image_interval(&ClosedInterval::point(x.clone())).unwrap();
            assert_eq!(img, ClosedInterval::point(y), "{}: point image at {x}", m.name);
        }
    }
}

#[test]
fn image_interval_bounds_are_attained_and_sound() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0102);
    for m in corpus() {
        for _ in 0..200 {
            let a = rational_in_unit(&mut rng);
            let b = rational_in_unit(&mut rng);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let j = ClosedInterval::new(lo, hi).unwrap();
            let image = m.image_interval(&j).unwrap();
            // soundness: sampled values never leave the image
            let mut attained_lo = false;
            let mut attained_hi = false;
            for i in 0..=32u64 {
                let x = j.lo()
                    + (j.hi() - j.lo()) * Rational::from_parts(i.into(), 32.into());
                let y = m.eval(&x).unwrap();
                assert!(image.contains_point(&y), "{}: f({x}) outside image of {j}", m.name);
                attained_lo |= y == *image.lo();
                attained_hi |= y == *image.hi();
            }
            // attainment: each bound is hit at an endpoint or an interior
            // critical point
            let mut candidates = vec![j.lo().clone(), j.hi().clone()];
            match &m.kind {
                devaney::MapKind::Pl(pl) => {
                    for (x, _) in pl.breakpoints() {
                        if x > j.lo() && x < j.hi() {
                            candidates.push(x.clone());
                        }
                    }
                }
                devaney::MapKind::Staircase(_) => {
                    for n in 1..=12u32 {
                        for x in [devaney::StaircaseMap::peak(n), devaney::StaircaseMap::trough(n)]
                        {
                            if x > *j.lo() && x < *j.hi() {
                                candidates.push(x);
                            }
                        }
                    }
                }
            }
            for x in candidates {
                let y = m.eval(&x).unwrap();
                attained_lo |= y == *image.lo();
                attained_hi |= y == *image.hi();
            }
            assert!(attained_lo && attained_hi, "{}: bounds of {j} not attained", m.name);
        }
    }
}

#[test]
fn iterate_splits_as_composition() {
    for m in corpus() {
        let Some(pl) = m.as_pl() else { continue };
        for p in 1..=5u32 {
            for qd in 1..=(6 - p) {
                let lhs = pl.iterate(p + qd, 1 << 16).unwrap();
                let rhs = PLMap::compose(
                    &pl.iterate(p, 1 << 16).unwrap(),
                    &pl.iterate(qd, 1 << 16).unwrap(),
                    1 << 16,
                )
                .unwrap();
                assert!(lhs.graph_eq(&rhs), "{}: f^{} != f^{p} ∘ f^{qd}", m.name, p + qd);
            }
        }
    }
}

#[test]
fn staircase_sits_above_diagonal() {
    let m = builtin("example-3-2", None).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed_0103);
    let mut checked = 0;
    while checked < 1000 {
        let x = rational_in_unit(&mut rng);
        if x.is_zero() || x == Rational::one() {
            continue;
        }
        assert!(m.eval(&x).unwrap() > x, "f({x}) <= {x}");
        checked += 1;
    }
}

// --- orbits ----------------------------------------------------------------

#[test]
fn omega_cover_shrinks_with_longer_burn_in() {
    let b = Budget::default();
    let slack = Rational::pow2_inv(8);
    for m in corpus() {
        for seed in devaney::orbit::seed_grid(&m, 8) {
            let short = omega_estimate(&m, &seed, 32, 32, 8, &b).unwrap();
            let long = omega_estimate(&m, &seed, 64, 32, 8, &b).unwrap();
            assert!(
                short.cover.dilate(&slack).contains(&long.cover),
                "{}: cover grew with burn-in at seed {seed}",
                m.name
            );
        }
    }
}

// --- hulls on the corpus ----------------------------------------------------

#[test]
fn hull_soundness_idempotence_monotonicity_on_corpus() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0104);
    let budget = Budget::default();
    for m in corpus() {
        for _ in 0..200 {
            // nested dyadic seeds U ⊆ V
            let a = rng.gen_range(0..255u64);
            let b = rng.gen_range(a + 1..=256u64);
            let ia = rng.gen_range(a..b);
            let ib = rng.gen_range(ia + 1..=b);
            let mk = |lo: u64, hi: u64| {
                IntervalSet::singleton(
                    ClosedInterval::new(
                        Rational::from_parts(lo.into(), 256.into()),
                        Rational::from_parts(hi.into(), 256.into()),
                    )
                    .unwrap(),
                )
            };
            let (u, v) = (mk(ia, ib), mk(a, b));
            let hu = forward_hull(&m, &u, &budget).unwrap();
            let hv = forward_hull(&m, &v, &budget).unwrap();
            assert!(hu.hull.contains(&hu.seed));
            assert!(hv.hull.contains(&hv.seed));
            if hv.converged {
                assert!(hv.hull.contains(&m.image_set(&hv.hull).unwrap()), "{}", m.name);
                let again = forward_hull(&m, &hv.hull, &budget).unwrap();
                assert_eq!(again.hull, hv.hull, "{}: idempotence", m.name);
                assert!(hv.hull.contains(&hu.hull), "{}: monotonicity", m.name);
            }
        }
    }
}

// --- the hierarchy, executably ----------------------------------------------

#[test]
fn implication_chain_on_corpus() {
    let b = Budget::default();
    for m in corpus() {
        let k = 6;
        let trans = check_transitivity(&m, k, &b).unwrap();
        let (strong, _) = check_strong_indecomposable(&m, k, &b).unwrap();
        let indec = check_indecomposable(&m, k, &b).unwrap();
        if trans.status == Status::Holds {
            assert_eq!(strong.status, Status::Holds, "{}: transitive but not strong", m.name);
        }
        if strong.status == Status::Holds {
            assert_eq!(indec.status, Status::Holds, "{}: strong but not indecomposable", m.name);
        }
        // contrapositive sanity: a certified pairwise failure forbids a
        // strong Holds at the same resolution
        if indec.status == Status::Fails {
            assert_ne!(strong.status, Status::Holds, "{}", m.name);
        }
    }
}

#[test]
fn report_witnesses_re_fail_their_properties() {
    // Round-trip: serialize a report, parse it back, and re-check every
    // embedded witness using only exact operations.
    use devaney::{analyze, AnalysisReport, AnalyzeParams, Witness};
    let b = Budget::default();
    for m in corpus() {
        let report = analyze(&m, &AnalyzeParams::default().with_resolution(6)).unwrap();
        let parsed = AnalysisReport::from_json(&report.to_json()).unwrap();
        if let Some(Witness::ProperInvariantHull { seed, hull }) = &parsed.transitivity.witness {
            let re = forward_hull(&m, seed, &b).unwrap();
            assert!(re.converged);
            assert_eq!(&re.hull, hull, "{}: hull witness", m.name);
            assert!(hull.contains(&m.image_set(hull).unwrap()));
            assert_ne!(*hull, IntervalSet::singleton(m.domain()));
        }
        if let Some(Witness::IndependentHulls { seed_a, hull_a, seed_b, hull_b }) =
            &parsed.indecomposability.witness
        {
            for (seed, hull) in [(seed_a, hull_a), (seed_b, hull_b)] {
                let re = forward_hull(&m, &IntervalSet::singleton(seed.clone()), &b).unwrap();
                assert_eq!(&re.hull, hull, "{}: pair witness", m.name);
                assert!(hull.contains(&m.image_set(hull).unwrap()));
                assert!(hull.interior_nonempty());
            }
            assert!(!hull_a.intersect(hull_b).interior_nonempty());
        }
        if let Some(Witness::ShrinkingFamily { members, .. }) =
            &parsed.strong_indecomposability.witness
        {
            for member in members {
                let img = m.image_interval(member).unwrap();
                assert!(member.contains(&img), "{}: family member", m.name);
                assert!(!member.is_degenerate());
            }
        }
        if let Some(Witness::DensityGap { cell, .. }) = &parsed.periodic_density.witness {
            if parsed.periodic_density.status == Status::Fails {
                for f in &parsed.periodic_findings {
                    assert!(
                        f.location.intersect(cell).is_none(),
                        "{}: density witness cell meets a finding",
                        m.name
                    );
                }
            }
        }
    }
}
