//! The staircase map on `[0,1]`: countably many linear pieces accumulating
//! at the fixed point 1.
//!
//! The map interpolates linearly between the listed points `f(0) = 0`,
//! `f(1) = 1`, `f(1 - 1/2^n) = 1` and `f(1 - 3/2^{n+2}) = 1 - 1/2^{n+1}`
//! for `n >= 1`. Writing `t = 1/2^n`, band `n` occupies
//! `[1 - t, 1 - t/2)` and consists of a descending piece
//! `f(x) = 3 - 2t - 2x` down to the trough at `1 - 3t/4`, then an ascending
//! piece `f(x) = 2x - 1 + t` back up to the next peak. Below `1/2` the map
//! is `f(x) = 2x`. Every slope is ±2.
//!
//! Evaluation locates the governing band from the binary magnitude of
//! `1 - x` in closed form; nothing ever scans the infinitely many pieces.

use crate::interval::ClosedInterval;
use crate::rational::{floor_log2, Rational};

use super::MapError;

/// The staircase map; it has no parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StaircaseMap;

impl StaircaseMap {
    pub fn domain(&self) -> ClosedInterval {
        ClosedInterval::new(Rational::zero(), Rational::one()).unwrap()
    }

    /// Peak abscissa `1 - 1/2^n`; `f(peak) = 1`.
    pub fn peak(n: u32) -> Rational {
        Rational::one() - Rational::pow2_inv(n)
    }

    /// Trough abscissa `1 - 3/2^{n+2}` inside band `n`.
    pub fn trough(n: u32) -> Rational {
        Rational::one() - Rational::from_int(3) * Rational::pow2_inv(n + 2)
    }

    /// Trough value `1 - 1/2^{n+1}`.
    pub fn trough_value(n: u32) -> Rational {
        Rational::one() - Rational::pow2_inv(n + 1)
    }

    /// Band index `n >= 1` with `1 - 1/2^n <= x < 1 - 1/2^{n+1}`, for
    /// `x ∈ [1/2, 1)`. Computed from bit lengths, not by scanning.
    pub fn band_index(x: &Rational) -> u32 {
        debug_assert!(*x >= Rational::new(1, 2) && *x < Rational::one());
        let r = Rational::one() - x; // in (0, 1/2]
        floor_log2(&r.recip())
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, MapError> {
        let domain = self.domain();
        if !domain.contains_point(x) {
            return Err(MapError::OutsideDomain { x: x.clone(), domain });
        }
        if x.is_zero() {
            return Ok(Rational::zero());
        }
        if *x == Rational::one() {
            return Ok(Rational::one());
        }
        if *x < Rational::new(1, 2) {
            return Ok(Rational::from_int(2) * x);
        }
        let n = Self::band_index(x);
        let t = Rational::pow2_inv(n);
        if *x <= Self::trough(n) {
            // descending: 3 - 2t - 2x
            Ok(Rational::from_int(3) - Rational::from_int(2) * &t - Rational::from_int(2) * x)
        } else {
            // ascending: 2x - 1 + t
            Ok(Rational::from_int(2) * x - Rational::one() + t)
        }
    }

    /// Smallest `tl >= 1` with `1 - 1/2^tl >= a`, the tail band index used
    /// for images of intervals reaching 1.
    fn tail_index(a: &Rational) -> u32 {
        debug_assert!(*a < Rational::one());
        if *a <= Rational::new(1, 2) {
            return 1;
        }
        // 2^tl >= 1/(1-a), minimal: for a in band n either n or n+1.
        let n = Self::band_index(a);
        if Self::peak(n) >= *a {
            n
        } else {
            n + 1
        }
    }

    /// Exact image of `j ⊆ [0,1]`. For `j.hi == 1` the supremum is 1 and the
    /// infimum combines a closed-form tail `[1 - 1/2^{tl+1}, 1]` with an
    /// exhaustive scan of the finitely many pieces below the tail.
    pub fn image_interval(&self, j: &ClosedInterval) -> Result<ClosedInterval, MapError> {
        let domain = self.domain();
        if !domain.contains(j) {
            return Err(MapError::OutsideDomain { x: j.lo().clone(), domain });
        }
        if j.is_degenerate() {
            let v = self.eval(j.lo())?;
            return Ok(ClosedInterval::point(v));
        }
        let a = j.lo();
        let mut candidates: Vec<Rational> = Vec::new();
        let finite_hi = if *j.hi() == Rational::one() {
            let tl = Self::tail_index(a);
            let tail_lo = Self::peak(tl);
            // f([tail_lo, 1]) = [1 - 1/2^{tl+1}, 1]
            candidates.push(Self::trough_value(tl));
            candidates.push(Rational::one());
            if tail_lo > *a {
                Some(tail_lo)
            } else {
                None
            }
        } else {
            Some(j.hi().clone())
        };
        if let Some(b) = finite_hi {
            candidates.push(self.eval(a)?);
            candidates.push(self.eval(&b)?);
            if b > Rational::new(1, 2) {
                let n_hi = Self::band_index(&b);
                let n_lo = if *a < Rational::new(1, 2) { 1 } else { Self::band_index(a) };
                for n in n_lo..=n_hi {
                    let peak = Self::peak(n);
                    if peak > *a && peak < b {
                        candidates.push(Rational::one());
                    }
                    let trough = Self::trough(n);
                    if trough > *a && trough < b {
                        candidates.push(Self::trough_value(n));
                    }
                }
            }
        }
        let lo = candidates.iter().cloned().reduce(Rational::min).expect("nonempty");
        let hi = candidates.into_iter().reduce(Rational::max).expect("nonempty");
        Ok(ClosedInterval::new(lo, hi).expect("min <= max"))
    }

    /// Graph vertices for rendering, truncated at band `n_max`: the origin,
    /// alternating peaks and troughs through `peak(n_max)`, then `(1,1)`.
    /// `2 * n_max + 1` vertices in total.
    pub fn graph_vertices(&self, n_max: u32) -> Vec<(Rational, Rational)> {
        let mut vs = vec![(Rational::zero(), Rational::zero())];
        for n in 1..=n_max {
            vs.push((Self::peak(n), Rational::one()));
            if n < n_max {
                vs.push((Self::trough(n), Self::trough_value(n)));
            }
        }
        vs.push((Rational::one(), Rational::one()));
        vs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> ClosedInterval {
        ClosedInterval::new(q(lo), q(hi)).unwrap()
    }

    #[test]
    fn listed_points() {
        let f = StaircaseMap;
        assert_eq!(f.eval(&q("0")).unwrap(), q("0"));
        assert_eq!(f.eval(&q("1")).unwrap(), q("1"));
        for n in 1..=20 {
            assert_eq!(f.eval(&StaircaseMap::peak(n)).unwrap(), q("1"));
            assert_eq!(
                f.eval(&StaircaseMap::trough(n)).unwrap(),
                StaircaseMap::trough_value(n)
            );
        }
    }

    #[test]
    fn trough_of_first_band() {
        // f(5/8) = 3/4: the n = 1 instance of f(1 - 3/2^{n+2}) = 1 - 1/2^{n+1}.
        assert_eq!(StaircaseMap.eval(&q("5/8")).unwrap(), q("3/4"));
    }

    #[test]
    fn band_lookup() {
        assert_eq!(StaircaseMap::band_index(&q("1/2")), 1);
        assert_eq!(StaircaseMap::band_index(&q("5/8")), 1);
        assert_eq!(StaircaseMap::band_index(&q("3/4")), 2);
        assert_eq!(StaircaseMap::band_index(&q("999/1000")), 9);
        assert_eq!(StaircaseMap::band_index(&q("1023/1024")), 10);
    }

    #[test]
    fn doubling_below_half() {
        let f = StaircaseMap;
        assert_eq!(f.eval(&q("1/3")).unwrap(), q("2/3"));
        assert_eq!(f.eval(&q("1/128")).unwrap(), q("1/64"));
    }

    #[test]
    fn strictly_above_diagonal_at_samples() {
        let f = StaircaseMap;
        for s in ["1/7", "1/2", "5/8", "11/16", "13/16", "63/64", "997/1000"] {
            let x = q(s);
            assert!(f.eval(&x).unwrap() > x, "f({s}) <= {s}");
        }
    }

    #[test]
    fn image_of_interval_with_interior_trough() {
        // [1/2, 3/4] spans band 1: peaks at both ends, trough value 3/4.
        assert_eq!(
            StaircaseMap.image_interval(&iv("1/2", "3/4")).unwrap(),
            iv("3/4", "1")
        );
    }

    #[test]
    fn image_reaching_one_uses_tail() {
        let f = StaircaseMap;
        assert_eq!(f.image_interval(&iv("1/2", "1")).unwrap(), iv("3/4", "1"));
        assert_eq!(f.image_interval(&iv("3/4", "1")).unwrap(), iv("7/8", "1"));
        assert_eq!(f.image_interval(&iv("5/8", "1")).unwrap(), iv("3/4", "1"));
        assert_eq!(f.image_interval(&iv("0", "1")).unwrap(), iv("0", "1"));
    }

    #[test]
    fn image_below_half_doubles() {
        assert_eq!(
            StaircaseMap.image_interval(&iv("1/4", "3/8")).unwrap(),
            iv("1/2", "3/4")
        );
    }

    #[test]
    fn degenerate_image() {
        assert_eq!(
            StaircaseMap.image_interval(&iv("5/8", "5/8")).unwrap(),
            iv("3/4", "3/4")
        );
    }

    #[test]
    fn graph_vertex_count_matches_truncation() {
        assert_eq!(StaircaseMap.graph_vertices(6).len(), 13);
        assert_eq!(StaircaseMap.graph_vertices(8).len(), 17);
    }
}
