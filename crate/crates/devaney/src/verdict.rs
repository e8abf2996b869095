//! Verdicts, witnesses and budgets shared by every check.
//!
//! The trichotomy is deliberate:
//!
//! * `Fails` always carries an exact witness that can be re-checked with the
//!   interval-set and map operations alone.
//! * `Holds` with `certified = false` is bounded by a stated dyadic
//!   resolution `k`: no counterexample exists among invariant sets whose
//!   interiors contain a cell of width `2^-k`. `Holds` with
//!   `certified = true` is a full certificate (for example the staircase
//!   periodic-gap proof).
//! * `Unknown` means a budget ran out or the method cannot decide; it may
//!   carry a diagnostic witness.

use serde::{Deserialize, Serialize};

use crate::interval::{ClosedInterval, IntervalSet};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

/// Resource limits. All analysis degrades loudly (unconverged results,
/// partial scans), never silently.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Hull iteration limit per seed.
    pub hull_iters: usize,
    /// Component-count cap for interval sets built by hull iteration.
    pub component_cap: usize,
    /// Piece cap for iterated piecewise-linear representations.
    pub piece_cap: usize,
    /// Depth of the shrinking-family scan.
    pub family_depth: u32,
    /// Orbit points stop being recorded when a denominator exceeds this
    /// many bits.
    pub orbit_denom_bits: u64,
    /// Orbit step limit for visit-based checks.
    pub orbit_steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            hull_iters: 512,
            component_cap: 4096,
            piece_cap: 65536,
            family_depth: 20,
            orbit_denom_bits: 4096,
            orbit_steps: 512,
        }
    }
}

/// Counters reported alongside verdicts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetUse {
    pub hulls_computed: u64,
    pub hull_iterations: u64,
    pub peak_components: u64,
    pub pieces_built: u64,
    pub orbit_points: u64,
}

impl BudgetUse {
    pub fn absorb(&mut self, other: &BudgetUse) {
        self.hulls_computed += other.hulls_computed;
        self.hull_iterations += other.hull_iterations;
        self.peak_components = self.peak_components.max(other.peak_components);
        self.pieces_built += other.pieces_built;
        self.orbit_points += other.orbit_points;
    }
}

/// Exact data substantiating a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A converged forward hull that is a proper invariant closed subset
    /// with nonempty interior; refutes transitivity outright.
    ProperInvariantHull { seed: IntervalSet, hull: IntervalSet },
    /// A converged relative hull missing part of the core.
    RelativeHullGap { seed: IntervalSet, hull: IntervalSet, core: IntervalSet },
    /// Two invariant closed sets with nonempty interiors whose intersection
    /// has empty interior; refutes indecomposability.
    IndependentHulls {
        seed_a: ClosedInterval,
        hull_a: IntervalSet,
        seed_b: ClosedInterval,
        hull_b: IntervalSet,
    },
    /// A nested family of invariant intervals, each with nonempty interior,
    /// verified exactly to the stated depth, whose intersection is below
    /// two cells of the working resolution.
    ShrinkingFamily {
        members: Vec<ClosedInterval>,
        verified_depth: u32,
        intersection: ClosedInterval,
    },
    /// A dyadic cell free of periodic points up to the stated period (or,
    /// with a completeness certificate, free of periodic points outright).
    DensityGap { cell: ClosedInterval, max_period: u32 },
    /// Two seeds whose omega-limit covers disagree beyond one cell.
    OmegaDivergence {
        seed_a: Rational,
        cover_a: IntervalSet,
        seed_b: Rational,
        cover_b: IntervalSet,
    },
    /// Visits to a periodic-free interval that are not strictly monotone:
    /// `z`, then `f^m(z)`, then `f^n(z)` with `0 <= l < m < n`.
    OrderingViolation {
        z: Rational,
        time_a: u64,
        value_a: Rational,
        time_b: u64,
        value_b: Rational,
        time_c: u64,
        value_c: Rational,
    },
    /// Every piece slope has absolute value at least this factor above 1.
    UniformExpansion { factor: Rational },
    /// Displacement `f(x) - x` at the two endpoints of each symbolic piece
    /// family, as `constant + coefficient * t` with `t = 2^-n` ranging over
    /// `(0, 1/2]`; all strictly positive proves the gap.
    AffineMargins { entries: Vec<MarginEntry> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginEntry {
    pub label: String,
    pub constant: Rational,
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub status: Status,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(default)]
    pub budget: BudgetUse,
}

impl Verdict {
    pub fn new(property: impl Into<String>, status: Status) -> Self {
        Verdict {
            property: property.into(),
            status,
            certified: false,
            resolution: None,
            witness: None,
            notes: Vec::new(),
            budget: BudgetUse::default(),
        }
    }

    pub fn certified(mut self) -> Self {
        self.certified = true;
        self
    }

    pub fn at_resolution(mut self, k: u32) -> Self {
        self.resolution = Some(k);
        self
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_budget(mut self, budget: BudgetUse) -> Self {
        self.budget = budget;
        self
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn decided(&self) -> bool {
        self.status != Status::Unknown
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Holds => write!(f, "Holds"),
            Status::Fails => write!(f, "Fails"),
            Status::Unknown => write!(f, "Unknown"),
        }
    }
}
