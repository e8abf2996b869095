//! Exact periodic-point enumeration, the staircase no-periodic-point
//! certificate, periodic-point density verdicts and the monotone-visit
//! ordering oracle.
//!
//! Enumeration solves `f^p(x) = x` piece by piece on the exact iterated
//! piecewise-linear representation. Density `Holds` is always bounded by a
//! resolution and a period; density `Fails` demands a completeness
//! certificate for the periodic set, because the absence of found points is
//! not the absence of points.

use crate::interval::{dyadic_cells, ClosedInterval, IntervalSet};
use crate::map::{MapError, MapKind, MapModel, PLMap};
use crate::rational::Rational;
use crate::verdict::{Budget, BudgetUse, MarginEntry, Status, Verdict, Witness};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FindingKind {
    Point,
    Segment,
}

/// A verified periodic point or a segment of periodic points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicFinding {
    pub kind: FindingKind,
    pub location: ClosedInterval,
    pub least_period: u32,
}

/// How much of the periodic set a scan is known to cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// Only periods up to the scan bound were enumerated.
    BoundedPeriods,
    /// The staircase gap certificate: no periodic point exists in (0,1).
    StaircaseGap,
    /// The map's range is a single point, so the listed fixed point is the
    /// whole periodic set for every period.
    ConstantRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicScan {
    pub findings: Vec<PeriodicFinding>,
    /// Highest period whose enumeration finished within budget.
    pub complete_through: u32,
    pub requested: u32,
    pub completeness: Completeness,
    pub budget: BudgetUse,
}

impl PeriodicScan {
    /// True iff some finding meets `cell`.
    pub fn covers_cell(&self, cell: &ClosedInterval) -> bool {
        self.findings.iter().any(|f| f.location.intersect(cell).is_some())
    }
}

/// Fixed points of a piecewise-linear map, reported piece by piece:
/// an isolated crossing per piece with slope != 1, or the whole piece when
/// it lies on the diagonal. Deduplicated across shared breakpoints.
pub fn fixed_points_pl(m: &PLMap) -> Vec<PeriodicFinding> {
    let mut segments: Vec<ClosedInterval> = Vec::new();
    let mut points: Vec<Rational> = Vec::new();
    let one = Rational::one();
    for piece in m.pieces() {
        if piece.slope == one {
            if piece.intercept.is_zero() {
                segments.push(ClosedInterval::new(piece.x0, piece.x1).unwrap());
            }
            continue;
        }
        // s x + t = x  =>  x = t / (1 - s)
        let x = &piece.intercept / &(&one - &piece.slope);
        if x >= piece.x0 && x <= piece.x1 {
            points.push(x);
        }
    }
    let segment_set = IntervalSet::normalize(segments);
    points.sort();
    points.dedup();
    let mut findings: Vec<PeriodicFinding> = segment_set
        .components()
        .iter()
        .map(|c| PeriodicFinding {
            kind: FindingKind::Segment,
            location: c.clone(),
            least_period: 1,
        })
        .collect();
    findings.extend(
        points
            .into_iter()
            .filter(|x| !segment_set.contains_point(x))
            .map(|x| PeriodicFinding {
                kind: FindingKind::Point,
                location: ClosedInterval::point(x),
                least_period: 1,
            }),
    );
    findings.sort_by(|a, b| a.location.cmp(&b.location));
    findings
}

/// Least `d >= 1` with `f^d(x) = x`, given that some period fixes `x`;
/// `bound` caps the search.
fn least_period_of_point(m: &MapModel, x: &Rational, bound: u32) -> Result<u32, MapError> {
    let mut y = m.eval(x)?;
    for d in 1..=bound {
        if y == *x {
            return Ok(d);
        }
        y = m.eval(&y)?;
    }
    Ok(bound)
}

/// True iff `g` agrees with the identity on all of `[a,b] ⊆ domain(g)`:
/// it fixes both endpoints and every one of its breakpoints inside.
fn is_identity_on(g: &PLMap, seg: &ClosedInterval) -> Result<bool, MapError> {
    if g.eval(seg.lo())? != *seg.lo() || g.eval(seg.hi())? != *seg.hi() {
        return Ok(false);
    }
    for (x, y) in g.breakpoints() {
        if x > seg.lo() && x < seg.hi() && y != x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All periodic points (and segments) with least period at most
/// `max_period`. For the staircase the gap certificate pins the periodic
/// set to exactly {0, 1}; for piecewise-linear maps the scan enumerates
/// fixed points of the exact iterates, stopping early (with
/// `complete_through` flagged) if the piece budget trips.
pub fn periodic_points(
    m: &MapModel,
    max_period: u32,
    budget: &Budget,
) -> Result<PeriodicScan, MapError> {
    assert!(max_period >= 1);
    let mut counters = BudgetUse::default();
    match &m.kind {
        MapKind::Staircase(_) => {
            let gap = staircase_gap_check();
            debug_assert!(gap.holds());
            let findings = vec![
                PeriodicFinding {
                    kind: FindingKind::Point,
                    location: ClosedInterval::point(Rational::zero()),
                    least_period: 1,
                },
                PeriodicFinding {
                    kind: FindingKind::Point,
                    location: ClosedInterval::point(Rational::one()),
                    least_period: 1,
                },
            ];
            Ok(PeriodicScan {
                findings,
                complete_through: max_period,
                requested: max_period,
                completeness: Completeness::StaircaseGap,
                budget: counters,
            })
        }
        MapKind::Pl(pl) => {
            // A constant-range map has f^p constant for every p, so its one
            // fixed point is the complete periodic set for all periods.
            let range = pl.range();
            if range.is_degenerate() {
                let findings = vec![PeriodicFinding {
                    kind: FindingKind::Point,
                    location: ClosedInterval::point(range.lo().clone()),
                    least_period: 1,
                }];
                return Ok(PeriodicScan {
                    findings,
                    complete_through: max_period,
                    requested: max_period,
                    completeness: Completeness::ConstantRange,
                    budget: counters,
                });
            }
            let mut findings: Vec<PeriodicFinding> = Vec::new();
            let mut complete_through = 0;
            let mut iterate = pl.clone();
            for p in 1..=max_period {
                if p > 1 {
                    iterate = match PLMap::compose(pl, &iterate, budget.piece_cap) {
                        Ok(next) => next,
                        Err(MapError::PieceBudget { .. }) => break,
                        Err(other) => return Err(other),
                    };
                }
                counters.pieces_built += iterate.piece_count() as u64;
                for raw in fixed_points_pl(&iterate) {
                    match raw.kind {
                        FindingKind::Point => {
                            let x = raw.location.lo();
                            let d = least_period_of_point(m, x, p)?;
                            if d == p
                                && !findings.iter().any(|f| f.location.contains_point(x))
                            {
                                findings.push(PeriodicFinding {
                                    kind: FindingKind::Point,
                                    location: raw.location,
                                    least_period: d,
                                });
                            }
                        }
                        FindingKind::Segment => {
                            let mut least = p;
                            for d in 1..p {
                                if p % d == 0 {
                                    let g = pl.iterate(d, budget.piece_cap)?;
                                    if is_identity_on(&g, &raw.location)? {
                                        least = d;
                                        break;
                                    }
                                }
                            }
                            if least == p
                                && !findings
                                    .iter()
                                    .any(|f| f.location.contains(&raw.location))
                            {
                                findings.push(PeriodicFinding {
                                    kind: FindingKind::Segment,
                                    location: raw.location,
                                    least_period: least,
                                });
                            }
                        }
                    }
                }
                complete_through = p;
            }
            findings.sort_by(|a, b| {
                a.location.cmp(&b.location).then(a.least_period.cmp(&b.least_period))
            });
            Ok(PeriodicScan {
                findings,
                complete_through,
                requested: max_period,
                completeness: Completeness::BoundedPeriods,
                budget: counters,
            })
        }
    }
}

/// Displacement `f(x) - x` as `constant + coefficient * t` over `t ∈ (0, 1/2]`.
#[derive(Debug, Clone)]
struct AffineInT {
    constant: Rational,
    coefficient: Rational,
}

impl AffineInT {
    /// Strict positivity of `constant + coefficient * t` for every
    /// `t ∈ (0, 1/2]`. An affine function takes its infimum over the band
    /// at an end, so two sign conditions decide it.
    fn strictly_positive_on_band(&self) -> bool {
        if self.coefficient.is_negative() {
            // minimum attained at t = 1/2
            &self.constant + &self.coefficient * Rational::new(1, 2) > Rational::zero()
        } else {
            // infimum as t -> 0+ is the constant; t = 0 itself is excluded
            self.constant.is_positive()
                || (self.constant.is_zero() && self.coefficient.is_positive())
        }
    }
}

/// Compose the symbolic piece displacement with a symbolic endpoint.
/// The piece is `f(x) = a + b t + c x`; the endpoint is `x = alpha + beta t`;
/// the result is `f(x) - x` at that endpoint, affine in `t`.
fn endpoint_margin(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    alpha: &Rational,
    beta: &Rational,
) -> AffineInT {
    let cm1 = c - &Rational::one();
    AffineInT {
        constant: a + &(&cm1 * alpha),
        coefficient: b + &(&cm1 * beta),
    }
}

/// Closed-form certificate that the staircase map has no periodic point in
/// `(0, 1)`.
///
/// With `t = 2^-n`, band `n >= 1` consists of the descending piece
/// `f(x) = 3 - 2t - 2x` on `[1-t, 1-3t/4]` and the ascending piece
/// `f(x) = 2x - 1 + t` on `[1-3t/4, 1-t/2]`; below `1/2` the map is `2x`.
/// On every piece `f(x) - x` is affine in `x`, so strict positivity at both
/// endpoints (checked symbolically in `n` over the whole band range)
/// proves `f(x) > x` throughout `(0, 1)`, and a point with `f(x) > x` is
/// not periodic (orbits are strictly increasing while inside `(0,1)`).
pub fn staircase_gap_check() -> Verdict {
    let q = |s: &str| -> Rational { s.parse().unwrap() };
    // (label, piece coefficients (a, b, c), endpoint (alpha, beta))
    type MarginCase<'a> = (&'a str, (&'a str, &'a str, &'a str), (&'a str, &'a str));
    let cases: [MarginCase; 4] = [
        ("descending-left", ("3", "-2", "-2"), ("1", "-1")),
        ("descending-right", ("3", "-2", "-2"), ("1", "-3/4")),
        ("ascending-left", ("-1", "1", "2"), ("1", "-3/4")),
        ("ascending-right", ("-1", "1", "2"), ("1", "-1/2")),
    ];
    let mut entries = Vec::new();
    let mut all_positive = true;
    for (label, (a, b, c), (alpha, beta)) in cases {
        let margin = endpoint_margin(&q(a), &q(b), &q(c), &q(alpha), &q(beta));
        all_positive &= margin.strictly_positive_on_band();
        entries.push(MarginEntry {
            label: label.to_string(),
            constant: margin.constant,
            coefficient: margin.coefficient,
        });
    }
    // Base piece [0, 1/2]: f(x) - x = x, affine in x over (0, 1/2]; reuse the
    // band positivity rule with x in place of t.
    let base = AffineInT { constant: Rational::zero(), coefficient: Rational::one() };
    all_positive &= base.strictly_positive_on_band();
    entries.push(MarginEntry {
        label: "base".to_string(),
        constant: base.constant,
        coefficient: base.coefficient,
    });

    let status = if all_positive { Status::Holds } else { Status::Fails };
    let mut v = Verdict::new("staircase-gap", status)
        .with_witness(Witness::AffineMargins { entries })
        .with_note(
            "f(x) - x > 0 on every piece of (0,1), uniformly in the band index; \
             the periodic set is exactly {0, 1}",
        );
    if all_positive {
        v = v.certified();
    }
    v
}

/// Endpoint displacements `(f(u) - u, f(v) - v)` for each piece of a finite
/// piecewise-linear map: the finite-map analogue of the staircase endpoint
/// scan. All strictly positive would certify a periodic-free open interior;
/// maps with fixed points show a zero or a sign change.
pub fn piece_endpoint_displacements(m: &PLMap) -> Vec<(Rational, Rational)> {
    m.pieces()
        .map(|p| {
            let at = |x: &Rational| p.eval(x) - x;
            (at(&p.x0), at(&p.x1))
        })
        .collect()
}

/// Resolution- and period-bounded periodic-point density.
///
/// `Holds` at resolution `k` means every dyadic cell of width `2^-k` in the
/// domain meets a finding of period at most `max_period`. `Fails` requires
/// the periodic set to be exactly known (gap certificate or constant
/// range); otherwise an empty cell only yields `Unknown`.
pub fn periodic_density_check(
    m: &MapModel,
    k: u32,
    max_period: u32,
    budget: &Budget,
) -> Result<Verdict, MapError> {
    assert!(k >= 1);
    let property = "periodic-density";
    let scan = periodic_points(m, max_period, budget)?;
    let cells = dyadic_cells(&m.domain(), k);
    let empty_cell = cells.iter().find(|cell| !scan.covers_cell(cell));
    let budget_use = scan.budget.clone();
    match empty_cell {
        None => {
            let mut v = Verdict::new(property, Status::Holds)
                .at_resolution(k)
                .with_note(format!(
                    "every cell meets a periodic point of period <= {}",
                    scan.complete_through
                ))
                .with_budget(budget_use);
            if scan.complete_through < scan.requested {
                v = v.with_note(format!(
                    "piece budget stopped enumeration at period {} of {}",
                    scan.complete_through, scan.requested
                ));
            }
            Ok(v)
        }
        Some(cell) => {
            let witness = Witness::DensityGap { cell: cell.clone(), max_period };
            match scan.completeness {
                Completeness::StaircaseGap | Completeness::ConstantRange => {
                    Ok(Verdict::new(property, Status::Fails)
                        .certified()
                        .at_resolution(k)
                        .with_witness(witness)
                        .with_note("the periodic set is exactly known; the witness cell misses it")
                        .with_budget(budget_use))
                }
                Completeness::BoundedPeriods => {
                    Ok(Verdict::new(property, Status::Unknown)
                        .at_resolution(k)
                        .with_witness(witness)
                        .with_note(format!(
                            "no periodic point of period <= {} found in the witness cell; \
                             higher periods undecided",
                            scan.complete_through
                        ))
                        .with_budget(budget_use))
                }
            }
        }
    }
}

/// Monotone-visit oracle on a periodic-free subinterval.
///
/// The caller must supply `j` certified periodic-free (for the staircase,
/// the gap certificate covers any `j ⊂ (0,1)`) and `z ∈ j`. Visits of the
/// orbit of `z` to `j` must then be strictly monotone; a violating triple is
/// an exact, re-checkable counterexample. Fewer than two visits within the
/// budget is vacuous.
pub fn ordering_oracle(
    m: &MapModel,
    j: &ClosedInterval,
    z: &Rational,
    budget: &Budget,
) -> Result<Verdict, MapError> {
    assert!(j.contains_point(z), "seed must lie in the probed interval");
    let property = "visit-ordering";
    let record = crate::orbit::orbit(m, z, budget.orbit_steps, budget.orbit_denom_bits)?;
    let visits: Vec<(u64, Rational)> = record
        .points
        .iter()
        .enumerate()
        .filter(|(_, x)| j.contains_point(x))
        .map(|(i, x)| (i as u64, x.clone()))
        .collect();
    let counters =
        BudgetUse { orbit_points: record.points.len() as u64, ..BudgetUse::default() };
    if visits.len() < 2 {
        return Ok(Verdict::new(property, Status::Unknown)
            .with_note(format!("vacuous: {} visit(s) within {} steps", visits.len(), budget.orbit_steps))
            .with_budget(counters));
    }
    let increasing = visits[1].1 > visits[0].1;
    for w in visits.windows(2) {
        let ok = if increasing { w[1].1 > w[0].1 } else { w[1].1 < w[0].1 };
        if !ok {
            // Report the anchor visit together with the offending pair.
            return Ok(Verdict::new(property, Status::Fails)
                .certified()
                .with_witness(Witness::OrderingViolation {
                    z: z.clone(),
                    time_a: visits[0].0,
                    value_a: visits[0].1.clone(),
                    time_b: w[0].0,
                    value_b: w[0].1.clone(),
                    time_c: w[1].0,
                    value_c: w[1].1.clone(),
                })
                .with_budget(counters));
        }
    }
    Ok(Verdict::new(property, Status::Holds)
        .with_note(format!(
            "{} visits strictly {} within {} steps",
            visits.len(),
            if increasing { "increasing" } else { "decreasing" },
            budget.orbit_steps
        ))
        .with_budget(counters))
}
