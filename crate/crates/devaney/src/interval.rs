//! Closed intervals with rational endpoints and canonical finite unions.
//!
//! An [`IntervalSet`] is the exact representation of a closed subset of the
//! line that every analysis in this crate computes on: seeds, forward hulls,
//! cores, omega-limit covers. Canonical form keeps components sorted,
//! pairwise disjoint and non-touching; touching closed intervals merge
//! (`[a,b] ∪ [b,c] = [a,c]`), which is the right semantics for closed sets.
//! Degenerate single-point components are first-class: hulls of fixed points
//! must be representable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("malformed interval: lo {lo} > hi {hi}")]
    Malformed { lo: Rational, hi: Rational },
}

/// A closed interval `[lo, hi]` with `lo <= hi`; `lo == hi` is a point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClosedInterval {
    lo: Rational,
    hi: Rational,
}

impl ClosedInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError::Malformed { lo, hi });
        }
        Ok(ClosedInterval { lo, hi })
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: Rational) -> Self {
        ClosedInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains(&self, other: &ClosedInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &ClosedInterval) -> Option<ClosedInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(ClosedInterval { lo, hi })
        } else {
            None
        }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * Rational::new(1, 2)
    }
}

impl fmt::Display for ClosedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Debug for ClosedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A canonical finite union of closed intervals.
///
/// Invariant: components sorted by `lo`, pairwise disjoint, non-touching.
/// The empty list is the empty set.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct IntervalSet {
    components: Vec<ClosedInterval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { components: Vec::new() }
    }

    /// Canonicalize a list of well-formed intervals: sort, merge touching
    /// and overlapping components. Idempotent.
    pub fn normalize(raw: Vec<ClosedInterval>) -> Self {
        let mut parts = raw;
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
        let mut components: Vec<ClosedInterval> = Vec::with_capacity(parts.len());
        for part in parts {
            match components.last_mut() {
                Some(last) if part.lo <= last.hi => {
                    if part.hi > last.hi {
                        last.hi = part.hi;
                    }
                }
                _ => components.push(part),
            }
        }
        IntervalSet { components }
    }

    /// Validate raw endpoint pairs, then canonicalize.
    pub fn from_endpoints(pairs: Vec<(Rational, Rational)>) -> Result<Self, IntervalError> {
        let mut raw = Vec::with_capacity(pairs.len());
        for (lo, hi) in pairs {
            raw.push(ClosedInterval::new(lo, hi)?);
        }
        Ok(Self::normalize(raw))
    }

    pub fn singleton(iv: ClosedInterval) -> Self {
        IntervalSet { components: vec![iv] }
    }

    pub fn components(&self) -> &[ClosedInterval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    /// True iff some component has positive length.
    pub fn interior_nonempty(&self) -> bool {
        self.components.iter().any(|c| !c.is_degenerate())
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut raw = Vec::with_capacity(self.components.len() + other.components.len());
        raw.extend_from_slice(&self.components);
        raw.extend_from_slice(&other.components);
        Self::normalize(raw)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        // Two-pointer sweep over sorted components.
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.components.len() && j < other.components.len() {
            let a = &self.components[i];
            let b = &other.components[j];
            if let Some(c) = a.intersect(b) {
                out.push(c);
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Intersections of canonical sets can touch at shared endpoints.
        Self::normalize(out)
    }

    /// True iff `other ⊆ self`, pointwise.
    pub fn contains(&self, other: &IntervalSet) -> bool {
        let mut i = 0;
        'outer: for b in &other.components {
            while i < self.components.len() {
                let a = &self.components[i];
                if a.hi < b.lo {
                    i += 1;
                } else if a.contains(b) {
                    continue 'outer;
                } else {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.components
            .binary_search_by(|c| {
                if *c.hi() < *x {
                    std::cmp::Ordering::Less
                } else if *c.lo() > *x {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    /// Exact total length (degenerate components contribute zero).
    pub fn total_length(&self) -> Rational {
        let mut acc = Rational::zero();
        for c in &self.components {
            acc = acc + c.length();
        }
        acc
    }

    /// Smallest closed interval containing the whole set; `None` when empty.
    pub fn span(&self) -> Option<ClosedInterval> {
        match (self.components.first(), self.components.last()) {
            (Some(first), Some(last)) => {
                Some(ClosedInterval { lo: first.lo.clone(), hi: last.hi.clone() })
            }
            _ => None,
        }
    }

    /// Every component widened by `eps` on both sides (clamped by nothing:
    /// callers clip to a domain when needed). Used for cover comparisons
    /// with one cell of slack.
    pub fn dilate(&self, eps: &Rational) -> IntervalSet {
        let raw = self
            .components
            .iter()
            .map(|c| ClosedInterval { lo: &c.lo - eps, hi: &c.hi + eps })
            .collect();
        Self::normalize(raw)
    }

    /// The components with positive length.
    pub fn nondegenerate(&self) -> IntervalSet {
        IntervalSet {
            components: self
                .components
                .iter()
                .filter(|c| !c.is_degenerate())
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "{{}}");
        }
        let mut first = true;
        for c in &self.components {
            if !first {
                write!(f, " ∪ ")?;
            }
            write!(f, "{}", c)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// The dyadic cells of width `2^-k` covering `domain`, clipped to it.
///
/// Cells sit on the absolute grid `[j/2^k, (j+1)/2^k]`; end cells are clipped
/// and degenerate clips are dropped.
pub fn dyadic_cells(domain: &ClosedInterval, k: u32) -> Vec<ClosedInterval> {
    let lo_idx = domain.lo().dyadic_cell_index(k);
    let mut cells = Vec::new();
    let mut j = lo_idx;
    loop {
        let cell_lo = Rational::from_bigint(j.clone()) * Rational::pow2_inv(k);
        if cell_lo >= *domain.hi() {
            break;
        }
        let cell_hi = Rational::from_bigint(&j + 1u32) * Rational::pow2_inv(k);
        let lo = cell_lo.max(domain.lo().clone());
        let hi = cell_hi.min(domain.hi().clone());
        if lo < hi {
            cells.push(ClosedInterval { lo, hi });
        }
        j += 1u32;
    }
    cells
}

/// The dyadic cell of width `2^-k` containing `x`, clipped to `domain`.
/// Points on interior cell boundaries resolve to the right-hand cell;
/// `x == domain.hi` resolves to the last cell.
pub fn dyadic_cell_of(domain: &ClosedInterval, x: &Rational, k: u32) -> ClosedInterval {
    debug_assert!(domain.contains_point(x));
    let mut j = x.dyadic_cell_index(k);
    let hi_idx = domain.hi().dyadic_cell_index(k);
    // x == hi on a grid line would index one past the end.
    if j >= hi_idx && Rational::from_bigint(hi_idx.clone()) * Rational::pow2_inv(k) == *domain.hi()
    {
        j = hi_idx - 1u32;
    }
    let cell_lo = Rational::from_bigint(j.clone()) * Rational::pow2_inv(k);
    let cell_hi = Rational::from_bigint(j + 1u32) * Rational::pow2_inv(k);
    ClosedInterval {
        lo: cell_lo.max(domain.lo().clone()),
        hi: cell_hi.min(domain.hi().clone()),
    }
}
