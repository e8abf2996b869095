//! Finite piecewise-linear self-maps of a closed interval.
//!
//! A [`PLMap`] is the continuous piecewise-linear interpolation of its
//! breakpoints. Composition and iteration are exact: the breakpoints of
//! `outer ∘ inner` are inner's breakpoints plus the preimages under inner of
//! outer's breakpoints. Piece counts grow exponentially under iteration, so
//! both operations take a piece cap and fail loudly when it is exceeded.

use crate::interval::ClosedInterval;
use crate::rational::Rational;

use super::MapError;

/// A continuous piecewise-linear map given by breakpoints with strictly
/// increasing x-coordinates spanning the domain; all values stay in the
/// domain, so the map is a self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    domain: ClosedInterval,
    breakpoints: Vec<(Rational, Rational)>,
}

/// One affine piece `y = slope * x + intercept` over `[x0, x1]`.
#[derive(Debug, Clone)]
pub struct Piece {
    pub x0: Rational,
    pub x1: Rational,
    pub slope: Rational,
    pub intercept: Rational,
}

impl Piece {
    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

impl PLMap {
    pub fn new(
        domain: ClosedInterval,
        breakpoints: Vec<(Rational, Rational)>,
    ) -> Result<Self, MapError> {
        if breakpoints.len() < 2 {
            return Err(MapError::TooFewBreakpoints { count: breakpoints.len() });
        }
        for w in breakpoints.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(MapError::NonIncreasingBreakpoints { x: w[1].0.clone() });
            }
        }
        if breakpoints.first().unwrap().0 != *domain.lo()
            || breakpoints.last().unwrap().0 != *domain.hi()
        {
            return Err(MapError::DomainMismatch {
                domain: domain.clone(),
                first: breakpoints.first().unwrap().0.clone(),
                last: breakpoints.last().unwrap().0.clone(),
            });
        }
        for (_, y) in &breakpoints {
            if !domain.contains_point(y) {
                return Err(MapError::RangeEscape { value: y.clone(), domain: domain.clone() });
            }
        }
        Ok(PLMap { domain, breakpoints })
    }

    /// Breakpoints `(x, y)` pairs; domain is `[first.x, last.x]`.
    pub fn from_breakpoints(breakpoints: Vec<(Rational, Rational)>) -> Result<Self, MapError> {
        if breakpoints.len() < 2 {
            return Err(MapError::TooFewBreakpoints { count: breakpoints.len() });
        }
        let domain = ClosedInterval::new(
            breakpoints.first().unwrap().0.clone(),
            breakpoints.last().unwrap().0.clone(),
        )
        .map_err(|_| MapError::NonIncreasingBreakpoints {
            x: breakpoints.last().unwrap().0.clone(),
        })?;
        Self::new(domain, breakpoints)
    }

    pub fn domain(&self) -> &ClosedInterval {
        &self.domain
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn piece_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn piece(&self, i: usize) -> Piece {
        let (x0, y0) = &self.breakpoints[i];
        let (x1, y1) = &self.breakpoints[i + 1];
        let slope = &(y1 - y0) / &(x1 - x0);
        let intercept = y0 - &(&slope * x0);
        Piece { x0: x0.clone(), x1: x1.clone(), slope, intercept }
    }

    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        (0..self.piece_count()).map(move |i| self.piece(i))
    }

    /// Index of the piece whose closed x-range contains `x` (the right piece
    /// at shared breakpoints, the last piece at the domain's upper end).
    fn piece_index(&self, x: &Rational) -> usize {
        let pp = self.breakpoints.partition_point(|(bx, _)| bx <= x);
        pp.clamp(1, self.breakpoints.len() - 1) - 1
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, MapError> {
        if !self.domain.contains_point(x) {
            return Err(MapError::OutsideDomain { x: x.clone(), domain: self.domain.clone() });
        }
        let i = self.piece_index(x);
        let (x0, y0) = &self.breakpoints[i];
        let (x1, y1) = &self.breakpoints[i + 1];
        // y0 + (x - x0) * (y1 - y0) / (x1 - x0), exact.
        Ok(y0 + &(&(x - x0) * &(y1 - y0) / (x1 - x0)))
    }

    /// Exact image of a subinterval of the domain. The image of an interval
    /// under a continuous map is an interval; both bounds are attained at an
    /// endpoint or at a breakpoint strictly inside.
    pub fn image_interval(&self, j: &ClosedInterval) -> Result<ClosedInterval, MapError> {
        if !self.domain.contains(j) {
            return Err(MapError::OutsideDomain { x: j.lo().clone(), domain: self.domain.clone() });
        }
        let fa = self.eval(j.lo())?;
        let fb = self.eval(j.hi())?;
        let mut lo = fa.clone().min(fb.clone());
        let mut hi = fa.max(fb);
        for (x, y) in &self.breakpoints {
            if x > j.lo() && x < j.hi() {
                if *y < lo {
                    lo = y.clone();
                }
                if *y > hi {
                    hi = y.clone();
                }
            }
        }
        Ok(ClosedInterval::new(lo, hi).expect("min <= max"))
    }

    /// `[min, max]` over the whole domain (attained at breakpoints).
    pub fn range(&self) -> ClosedInterval {
        let mut lo = self.breakpoints[0].1.clone();
        let mut hi = lo.clone();
        for (_, y) in &self.breakpoints[1..] {
            if *y < lo {
                lo = y.clone();
            }
            if *y > hi {
                hi = y.clone();
            }
        }
        ClosedInterval::new(lo, hi).expect("min <= max")
    }

    /// Drop interior breakpoints that lie on the segment through their
    /// neighbours; the graph is unchanged.
    fn simplified(breakpoints: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(breakpoints.len());
        for p in breakpoints {
            while out.len() >= 2 {
                let a = &out[out.len() - 2];
                let b = &out[out.len() - 1];
                // b on segment a-p: (p.y - a.y)(b.x - a.x) == (b.y - a.y)(p.x - a.x)
                let lhs = &(&p.1 - &a.1) * &(&b.0 - &a.0);
                let rhs = &(&b.1 - &a.1) * &(&p.0 - &a.0);
                if lhs == rhs {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        out
    }

    /// Exact representation of `outer ∘ inner`. Requires
    /// `range(inner) ⊆ domain(outer)`; fails with a budget error when the
    /// result would exceed `piece_cap` pieces.
    pub fn compose(outer: &PLMap, inner: &PLMap, piece_cap: usize) -> Result<PLMap, MapError> {
        let inner_range = inner.range();
        if !outer.domain.contains(&inner_range) {
            return Err(MapError::RangeEscape {
                value: if outer.domain.contains_point(inner_range.lo()) {
                    inner_range.hi().clone()
                } else {
                    inner_range.lo().clone()
                },
                domain: outer.domain.clone(),
            });
        }
        let mut cuts: Vec<Rational> = inner.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        for i in 0..inner.piece_count() {
            let (x0, y0) = &inner.breakpoints[i];
            let (x1, y1) = &inner.breakpoints[i + 1];
            if y0 == y1 {
                continue; // constant piece: composition is affine on it
            }
            let (ylo, yhi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
            for (bx, _) in &outer.breakpoints {
                if bx > ylo && bx < yhi {
                    // inner(x) = bx on this piece
                    let x = x0 + &(&(bx - y0) * &(x1 - x0) / (y1 - y0));
                    cuts.push(x);
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        if cuts.len() > piece_cap + 1 {
            return Err(MapError::PieceBudget { pieces: cuts.len() - 1, cap: piece_cap, degree: 0 });
        }
        let mut bps = Vec::with_capacity(cuts.len());
        for x in cuts {
            let y = outer.eval(&inner.eval(&x)?)?;
            bps.push((x, y));
        }
        PLMap::new(inner.domain.clone(), Self::simplified(bps))
    }

    /// Exact representation of the `p`-th iterate, `p >= 1`, by repeated
    /// composition. On a piece-budget failure, the error reports the highest
    /// fully built degree.
    pub fn iterate(&self, p: u32, piece_cap: usize) -> Result<PLMap, MapError> {
        assert!(p >= 1, "iterate requires p >= 1");
        let mut acc = self.clone();
        for degree in 2..=p {
            acc = Self::compose(self, &acc, piece_cap).map_err(|e| match e {
                MapError::PieceBudget { pieces, cap, .. } => {
                    MapError::PieceBudget { pieces, cap, degree: degree - 1 }
                }
                other => other,
            })?;
        }
        Ok(acc)
    }

    /// The restriction of this map to a subinterval `j` it maps into itself.
    pub fn restrict(&self, j: &ClosedInterval) -> Result<PLMap, MapError> {
        if !self.domain.contains(j) {
            return Err(MapError::OutsideDomain { x: j.lo().clone(), domain: self.domain.clone() });
        }
        let image = self.image_interval(j)?;
        if !j.contains(&image) {
            return Err(MapError::RangeEscape {
                value: if j.contains_point(image.lo()) {
                    image.hi().clone()
                } else {
                    image.lo().clone()
                },
                domain: j.clone(),
            });
        }
        let mut bps = vec![(j.lo().clone(), self.eval(j.lo())?)];
        for (x, y) in &self.breakpoints {
            if x > j.lo() && x < j.hi() {
                bps.push((x.clone(), y.clone()));
            }
        }
        bps.push((j.hi().clone(), self.eval(j.hi())?));
        PLMap::new(j.clone(), Self::simplified(bps))
    }

    /// Equal as functions: same domain and the same value at every
    /// breakpoint of either map. Breakpoint lists may differ.
    pub fn graph_eq(&self, other: &PLMap) -> bool {
        if self.domain != other.domain {
            return false;
        }
        let check = |xs: &PLMap, against: &PLMap| {
            xs.breakpoints.iter().all(|(x, y)| match against.eval(x) {
                Ok(v) => v == *y,
                Err(_) => false,
            })
        };
        check(self, other) && check(other, self)
    }

    /// Smallest absolute slope over all pieces.
    pub fn min_abs_slope(&self) -> Rational {
        self.pieces()
            .map(|p| p.slope.abs())
            .min()
            .expect("at least one piece")
    }
}
