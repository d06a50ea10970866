//! Game specification files.
//!
//! A spec is TOML. Rationals are written as integers (`3`), or as strings
//! holding a fraction (`"5/2"`) or a finite decimal (`"0.25"`). Bare TOML
//! floats are rejected because they have already lost exactness.
//!
//! ```toml
//! types = ["H", "L"]
//! actions = ["buy", "pass"]
//! u = [[5, -5], [0, 0]]      # one row per action, one entry per type
//! v = [1, 0]
//! prior = ["1/4", "3/4"]
//! ```
//!
//! Abstract value structures replace `actions`, `u` and `v` with pieces:
//!
//! ```toml
//! prior = ["1/2", "1/6", "1/3"]
//! [[pieces]]
//! label = "vertex"
//! value = "7/3"
//! constraints = [{ coeffs = [1, 0, 0], op = "=", rhs = 1 }]
//! ```

use std::collections::BTreeMap;
use std::fmt;

use mdmb_core::geometry::{HalfSpace, PiecewiseValueStructure, Polytope, ValuePiece};
use mdmb_core::lp::Relation;
use mdmb_core::model::{Belief, PersuasionGame, RawGame};
use mdmb_core::rational::parse_rational;
use mdmb_core::Rational;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

/// A rational read from a spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExactVisitor;

        impl Visitor<'_> for ExactVisitor {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a quoted rational such as \"5/2\" or \"0.25\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
                Err(E::custom(format!("float {v} is not exact; quote it as a string, e.g. \"{v}\"")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                parse_rational(v).map(Exact).map_err(E::custom)
            }
        }

        d.deserialize_any(ExactVisitor)
    }
}

fn unwrap_all(xs: Vec<Exact>) -> Vec<Rational> {
    xs.into_iter().map(|x| x.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Op {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSpec {
    pub coeffs: Vec<Exact>,
    pub op: Op,
    pub rhs: Exact,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub label: Option<String>,
    /// Shorthand for `vmin = vmax = value`.
    pub value: Option<Exact>,
    pub vmin: Option<Exact>,
    pub vmax: Option<Exact>,
    #[serde(default)]
    pub constraints: Vec<ConstraintSpec>,
}

/// Values a `verify` run must reproduce exactly.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub ct: Option<Exact>,
    pub md: Option<Exact>,
    pub mdmb: Option<Exact>,
    pub bp: Option<Exact>,
    /// Budget-constrained values keyed by the budget, e.g. `"2" = "1/5"`.
    #[serde(default)]
    pub budgets: BTreeMap<String, Exact>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpecFile {
    pub name: Option<String>,
    pub types: Option<Vec<String>>,
    pub actions: Option<Vec<String>>,
    pub u: Option<Vec<Vec<Exact>>>,
    pub v: Option<Vec<Exact>>,
    pub prior: Vec<Exact>,
    pub pieces: Option<Vec<PieceSpec>>,
    /// Priors for `sweep` when there are more than two types.
    pub sweep_priors: Option<Vec<Vec<Exact>>>,
    pub expected: Option<Expected>,
}

/// A validated spec: either a full game or an abstract value structure.
#[derive(Debug, Clone)]
pub enum Instance {
    Game(PersuasionGame),
    Abstract(PiecewiseValueStructure),
}

impl Instance {
    pub fn structure(&self) -> mdmb_core::Result<PiecewiseValueStructure> {
        match self {
            Instance::Game(g) => g.value_structure(),
            Instance::Abstract(s) => Ok(s.clone()),
        }
    }

    pub fn game(&self) -> Option<&PersuasionGame> {
        match self {
            Instance::Game(g) => Some(g),
            Instance::Abstract(_) => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

impl GameSpecFile {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        toml::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))
    }

    pub fn instance(&self) -> Result<Instance, SpecError> {
        let invalid = |m: String| SpecError::Invalid(m);
        let prior = unwrap_all(self.prior.clone());
        let game_fields = [self.actions.is_some(), self.u.is_some(), self.v.is_some()];
        match (&self.pieces, game_fields) {
            (None, [true, true, true]) => {
                let types = match &self.types {
                    Some(t) => t.clone(),
                    None => (1..=prior.len()).map(|i| format!("t{i}")).collect(),
                };
                let raw = RawGame {
                    types,
                    actions: self.actions.clone().unwrap_or_default(),
                    receiver_payoffs: self.u.clone().unwrap_or_default().into_iter().map(unwrap_all).collect(),
                    sender_values: unwrap_all(self.v.clone().unwrap_or_default()),
                    prior,
                };
                PersuasionGame::validate(raw).map(Instance::Game).map_err(|e| invalid(e.to_string()))
            }
            (Some(pieces), [false, false, false]) => {
                if let Some(t) = &self.types {
                    if t.len() != prior.len() {
                        return Err(invalid(format!("{} types but the prior has {} entries", t.len(), prior.len())));
                    }
                }
                let prior = Belief::new(prior).map_err(|e| invalid(format!("prior: {e}")))?;
                let built = pieces
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.build(i, prior.dim()))
                    .collect::<Result<Vec<_>, _>>()?;
                PiecewiseValueStructure::from_pieces(built, prior)
                    .map(Instance::Abstract)
                    .map_err(|e| invalid(e.to_string()))
            }
            (Some(_), _) => Err(invalid("a spec with pieces must not also give actions, u or v".into())),
            (None, _) => Err(invalid("a spec needs either actions, u and v together, or pieces".into())),
        }
    }

    pub fn sweep_priors(&self) -> Result<Option<Vec<Belief>>, SpecError> {
        let Some(list) = &self.sweep_priors else { return Ok(None) };
        list.iter()
            .enumerate()
            .map(|(i, w)| {
                Belief::new(unwrap_all(w.clone())).map_err(|e| SpecError::Invalid(format!("sweep_priors[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

impl PieceSpec {
    fn build(&self, index: usize, dim: usize) -> Result<ValuePiece, SpecError> {
        let label = self.label.clone().unwrap_or_else(|| format!("piece{index}"));
        let invalid = |m: &str| SpecError::Invalid(format!("pieces[{index}] ({label}): {m}"));
        let (vmin, vmax) = match (&self.value, &self.vmin, &self.vmax) {
            (Some(v), None, None) => (v.0.clone(), v.0.clone()),
            (None, Some(lo), Some(hi)) => (lo.0.clone(), hi.0.clone()),
            _ => return Err(invalid("give either value, or both vmin and vmax")),
        };
        let mut halfspaces = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            if c.coeffs.len() != dim {
                return Err(invalid(&format!("constraint has {} coefficients for {dim} types", c.coeffs.len())));
            }
            let relation = match c.op {
                Op::Le => Relation::Le,
                Op::Ge => Relation::Ge,
                Op::Eq => Relation::Eq,
            };
            halfspaces.push(HalfSpace::new(unwrap_all(c.coeffs.clone()), relation, c.rhs.0.clone()));
        }
        let region = Polytope::new(dim, halfspaces).map_err(|e| invalid(&e.to_string()))?;
        Ok(ValuePiece { label, tie_set: Vec::new(), region, vmin, vmax })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdmb_core::rational::frac;

    #[test]
    fn rationals_accept_integers_fractions_and_decimals() {
        let spec = GameSpecFile::parse(
            "actions = [\"a\", \"b\"]\nu = [[1, 0], [0, \"1/2\"]]\nv = [\"0.25\", -1]\nprior = [\"0.5\", \"1/2\"]\n",
        )
        .unwrap();
        let Instance::Game(g) = spec.instance().unwrap() else { panic!("expected a game") };
        assert_eq!(g.sender_values()[0], frac(1, 4));
        assert_eq!(g.receiver_payoff(1, 1), &frac(1, 2));
        assert_eq!(g.types(), ["t1", "t2"]);
    }

    #[test]
    fn floats_are_rejected_with_a_location() {
        let err = GameSpecFile::parse("actions = [\"a\"]\nu = [[1]]\nv = [0.1]\nprior = [1]\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("not exact"), "{msg}");
    }

    #[test]
    fn mixed_forms_are_invalid() {
        let spec = GameSpecFile::parse("prior = [1]\nv = [1]\n").unwrap();
        assert!(matches!(spec.instance(), Err(SpecError::Invalid(_))));
    }

    #[test]
    fn pieces_need_a_value() {
        let spec = GameSpecFile::parse("prior = [1, 0]\n[[pieces]]\nvmin = 1\n").unwrap();
        let err = spec.instance().unwrap_err().to_string();
        assert!(err.contains("pieces[0]"), "{err}");
    }
}
