//! The dynamical systems under analysis: finite piecewise-linear maps and
//! the staircase map, behind one [`MapModel`] front.
//!
//! All evaluation is exact. Values are immutable; every operation is a pure
//! function, so models can be shared freely across concurrent analysis
//! tasks.

mod format;
mod pl;
mod staircase;

pub use format::{parse_plm, print_plm, ParsePlmError};
pub use pl::{PLMap, Piece};
pub use staircase::StaircaseMap;

use crate::interval::{ClosedInterval, IntervalSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("a piecewise-linear map needs at least 2 breakpoints, got {count}")]
    TooFewBreakpoints { count: usize },
    #[error("breakpoint x-coordinates must be strictly increasing (at x = {x})")]
    NonIncreasingBreakpoints { x: Rational },
    #[error("breakpoints must span the domain {domain}: first x = {first}, last x = {last}")]
    DomainMismatch { domain: ClosedInterval, first: Rational, last: Rational },
    #[error("map value {value} escapes the domain {domain}")]
    RangeEscape { value: Rational, domain: ClosedInterval },
    #[error("point {x} is outside the domain {domain}")]
    OutsideDomain { x: Rational, domain: ClosedInterval },
    #[error("piece budget exceeded: {pieces} pieces needed with cap {cap} (degree {degree} built)")]
    PieceBudget { pieces: usize, cap: usize, degree: u32 },
    #[error("unknown builtin map {0:?}")]
    UnknownBuiltin(String),
    #[error("builtin {name:?} requires a parameter in {domain}")]
    BadBuiltinParameter { name: String, domain: ClosedInterval },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapKind {
    Pl(PLMap),
    Staircase(StaircaseMap),
}

/// A named map under analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapModel {
    pub name: String,
    pub kind: MapKind,
}

impl MapModel {
    pub fn from_pl(name: impl Into<String>, map: PLMap) -> Self {
        MapModel { name: name.into(), kind: MapKind::Pl(map) }
    }

    pub fn staircase() -> Self {
        MapModel { name: "example-3-2".into(), kind: MapKind::Staircase(StaircaseMap) }
    }

    pub fn domain(&self) -> ClosedInterval {
        match &self.kind {
            MapKind::Pl(m) => m.domain().clone(),
            MapKind::Staircase(s) => s.domain(),
        }
    }

    pub fn as_pl(&self) -> Option<&PLMap> {
        match &self.kind {
            MapKind::Pl(m) => Some(m),
            MapKind::Staircase(_) => None,
        }
    }

    pub fn is_staircase(&self) -> bool {
        matches!(self.kind, MapKind::Staircase(_))
    }

    /// Re-confirm all structural invariants. Models are valid by
    /// construction; this is the explicit check behind the CLI's parse
    /// pipeline.
    pub fn validate(&self) -> Result<(), MapError> {
        match &self.kind {
            MapKind::Pl(m) => {
                PLMap::new(m.domain().clone(), m.breakpoints().to_vec()).map(|_| ())
            }
            MapKind::Staircase(_) => Ok(()),
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, MapError> {
        match &self.kind {
            MapKind::Pl(m) => m.eval(x),
            MapKind::Staircase(s) => s.eval(x),
        }
    }

    pub fn image_interval(&self, j: &ClosedInterval) -> Result<ClosedInterval, MapError> {
        match &self.kind {
            MapKind::Pl(m) => m.image_interval(j),
            MapKind::Staircase(s) => s.image_interval(j),
        }
    }

    /// Componentwise exact image, canonicalized. One hull step.
    pub fn image_set(&self, a: &IntervalSet) -> Result<IntervalSet, MapError> {
        let mut raw = Vec::with_capacity(a.len());
        for c in a.components() {
            raw.push(self.image_interval(c)?);
        }
        Ok(IntervalSet::normalize(raw))
    }
}

/// The corpus maps by name. `constant` requires a parameter in `[0,1]`.
pub fn builtin(name: &str, parameter: Option<Rational>) -> Result<MapModel, MapError> {
    let q = |s: &str| -> Rational { s.parse().unwrap() };
    let bp = |pairs: &[(&str, &str)]| -> Vec<(Rational, Rational)> {
        pairs.iter().map(|(x, y)| (q(x), q(y))).collect()
    };
    match name {
        "tent" => Ok(MapModel::from_pl(
            "tent",
            PLMap::from_breakpoints(bp(&[("0", "0"), ("1/2", "1"), ("1", "0")]))
                .expect("tent map is valid"),
        )),
        "identity" => Ok(MapModel::from_pl(
            "identity",
            PLMap::from_breakpoints(bp(&[("0", "0"), ("1", "1")])).expect("identity is valid"),
        )),
        "constant" => {
            let unit = ClosedInterval::new(Rational::zero(), Rational::one()).unwrap();
            let c = parameter.ok_or_else(|| MapError::BadBuiltinParameter {
                name: "constant".into(),
                domain: unit.clone(),
            })?;
            if !unit.contains_point(&c) {
                return Err(MapError::BadBuiltinParameter {
                    name: "constant".into(),
                    domain: unit,
                });
            }
            let map = PLMap::from_breakpoints(vec![
                (Rational::zero(), c.clone()),
                (Rational::one(), c.clone()),
            ])
            .expect("constant map is valid");
            Ok(MapModel::from_pl(format!("constant-{c}"), map))
        }
        "example-3-1" => Ok(MapModel::from_pl(
            "example-3-1",
            PLMap::from_breakpoints(bp(&[
                ("0", "1"),
                ("1/6", "2/3"),
                ("1/3", "1"),
                ("2/3", "0"),
                ("1", "1/3"),
            ]))
            .expect("example-3-1 is valid"),
        )),
        "example-3-2" => Ok(MapModel::staircase()),
        other => Err(MapError::UnknownBuiltin(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_endpoints(
            pairs.iter().map(|(a, b)| (q(a), q(b))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn builtin_corpus() {
        let tent = builtin("tent", None).unwrap();
        assert_eq!(
            tent.as_pl().unwrap().breakpoints(),
            &[(q("0"), q("0")), (q("1/2"), q("1")), (q("1"), q("0"))]
        );
        let f = builtin("example-3-1", None).unwrap();
        assert!(f.validate().is_ok());
        let c = builtin("constant", Some(q("1/2"))).unwrap();
        assert_eq!(
            c.as_pl().unwrap().breakpoints(),
            &[(q("0"), q("1/2")), (q("1"), q("1/2"))]
        );
        assert!(builtin("constant", None).is_err());
        assert!(builtin("constant", Some(q("2"))).is_err());
        assert!(matches!(
            builtin("lorenz", None),
            Err(MapError::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn staircase_eval_via_model() {
        let f = builtin("example-3-2", None).unwrap();
        assert_eq!(f.eval(&q("5/8")).unwrap(), q("3/4"));
        assert_eq!(f.eval(&q("1/2")).unwrap(), q("1"));
    }

    #[test]
    fn image_set_swaps_core_halves() {
        let f = builtin("example-3-1", None).unwrap();
        let e = set(&[("0", "1/3"), ("2/3", "1")]);
        assert_eq!(f.image_set(&e).unwrap(), e);
    }

    #[test]
    fn image_set_trivia() {
        let f = builtin("tent", None).unwrap();
        assert_eq!(f.image_set(&IntervalSet::empty()).unwrap(), IntervalSet::empty());
        assert_eq!(f.image_set(&set(&[("0", "1")])).unwrap(), set(&[("0", "1")]));
    }

    #[test]
    fn identity_eval() {
        let f = builtin("identity", None).unwrap();
        assert_eq!(f.eval(&q("1/3")).unwrap(), q("1/3"));
    }
}
