//! Game primitives: types, actions, Receiver payoffs, Sender values, beliefs.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A point of the type simplex: nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Belief(Vec<Rational>);

impl Belief {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::NotOnSimplex("empty weight vector".into()));
        }
        if weights.iter().any(|w| w < &Rational::zero()) {
            return Err(Error::NotOnSimplex(format!("negative weight in {}", render(&weights))));
        }
        if rational::sum(&weights) != Rational::one() {
            return Err(Error::NotOnSimplex(format!("weights {} do not sum to 1", render(&weights))));
        }
        Ok(Self(weights))
    }

    /// The degenerate belief putting all mass on `index`.
    pub fn point_mass(dim: usize, index: usize) -> Self {
        let mut w = vec![Rational::zero(); dim];
        w[index] = Rational::one();
        Self(w)
    }

    pub fn uniform(dim: usize) -> Self {
        Self(vec![Rational::new(1.into(), (dim as i64).into()); dim])
    }

    /// Normalizes a nonnegative, not-all-zero vector onto the simplex.
    pub fn normalized(weights: Vec<Rational>) -> Result<Self> {
        let total = rational::sum(&weights);
        if total <= Rational::zero() || weights.iter().any(|w| w < &Rational::zero()) {
            return Err(Error::NotOnSimplex(format!("cannot normalize {}", render(&weights))));
        }
        Ok(Self(weights.into_iter().map(|w| w / &total).collect()))
    }

    pub(crate) fn from_weights_unchecked(weights: Vec<Rational>) -> Self {
        debug_assert_eq!(rational::sum(&weights), Rational::one());
        Self(weights)
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.0.iter().all(|w| !w.is_zero())
    }

    /// Index of the type this belief is a point mass on, if any.
    pub fn degenerate_type(&self) -> Option<usize> {
        self.0.iter().position(|w| w.is_one())
    }

    /// Keeps only the listed coordinates; caller guarantees the dropped mass is zero.
    pub(crate) fn project(&self, keep: &[usize]) -> Self {
        Self::from_weights_unchecked(keep.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.0))
    }
}

pub(crate) fn render(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(rational::to_fraction_string).collect();
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorDomain {
    /// λ ∈ Δ(Θ): weights nonnegative.
    Simplex,
    /// λ in the affine hull of Δ(Θ): weights of either sign.
    Affine,
}

/// Sender's subjective prior λ used to weight per-type payoff shares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectivePrior {
    weights: Vec<Rational>,
    domain: PriorDomain,
}

impl SubjectivePrior {
    pub fn new(weights: Vec<Rational>, domain: PriorDomain) -> Result<Self> {
        if rational::sum(&weights) != Rational::one() {
            return Err(Error::LambdaNotNormalized(render(&weights)));
        }
        if domain == PriorDomain::Simplex && weights.iter().any(|w| w < &Rational::zero()) {
            return Err(Error::NotOnSimplex(render(&weights)));
        }
        Ok(Self { weights, domain })
    }

    pub fn simplex(weights: Vec<Rational>) -> Result<Self> {
        Self::new(weights, PriorDomain::Simplex)
    }

    pub fn affine(weights: Vec<Rational>) -> Result<Self> {
        Self::new(weights, PriorDomain::Affine)
    }

    pub fn point_mass(dim: usize, index: usize) -> Self {
        Self { weights: Belief::point_mass(dim, index).0, domain: PriorDomain::Simplex }
    }

    pub fn from_belief(belief: &Belief) -> Self {
        Self { weights: belief.0.clone(), domain: PriorDomain::Simplex }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn domain(&self) -> PriorDomain {
        self.domain
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| !self.weights[i].is_zero()).collect()
    }

    /// w_λ(μ) = Σ_θ λ(θ) μ(θ) / μ₀(θ).
    pub fn share_weight(&self, belief: &[Rational], prior: &[Rational]) -> Rational {
        self.weights
            .iter()
            .zip(belief)
            .zip(prior)
            .filter(|((l, _), _)| !l.is_zero())
            .fold(Rational::zero(), |acc, ((l, m), p)| acc + l * m / p)
    }
}

/// Unvalidated game description, as read from a file or built in code.
#[derive(Debug, Clone, PartialEq)]
pub struct RawGame {
    pub types: Vec<String>,
    pub actions: Vec<String>,
    /// Receiver payoff, indexed `[action][type]`.
    pub receiver_payoffs: Vec<Vec<Rational>>,
    /// Sender value per action.
    pub sender_values: Vec<Rational>,
    pub prior: Vec<Rational>,
}

/// A finite persuasion game with transparent Sender motives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersuasionGame {
    types: Vec<String>,
    actions: Vec<String>,
    u: Vec<Vec<Rational>>,
    v: Vec<Rational>,
    prior: Belief,
}

impl PersuasionGame {
    pub fn validate(raw: RawGame) -> Result<Self> {
        let RawGame { types, actions, receiver_payoffs, sender_values, prior } = raw;
        if types.is_empty() || actions.is_empty() {
            return Err(Error::EmptyTypeOrActionSet);
        }
        let (nt, na) = (types.len(), actions.len());
        if receiver_payoffs.len() != na {
            return Err(Error::DimensionMismatch(format!(
                "receiver payoffs have {} rows for {na} actions",
                receiver_payoffs.len()
            )));
        }
        if let Some(row) = receiver_payoffs.iter().position(|r| r.len() != nt) {
            return Err(Error::DimensionMismatch(format!(
                "receiver payoff row {row} has {} entries for {nt} types",
                receiver_payoffs[row].len()
            )));
        }
        if sender_values.len() != na {
            return Err(Error::DimensionMismatch(format!(
                "{} sender values for {na} actions",
                sender_values.len()
            )));
        }
        if prior.len() != nt {
            return Err(Error::DimensionMismatch(format!("prior has {} entries for {nt} types", prior.len())));
        }
        let prior = Belief::new(prior).map_err(|e| match e {
            Error::NotOnSimplex(msg) => Error::PriorNotOnSimplex(msg),
            other => other,
        })?;
        Ok(Self { types, actions, u: receiver_payoffs, v: sender_values, prior })
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// Receiver payoff u(a, θ).
    pub fn receiver_payoff(&self, action: usize, ty: usize) -> &Rational {
        &self.u[action][ty]
    }

    pub fn receiver_row(&self, action: usize) -> &[Rational] {
        &self.u[action]
    }

    pub fn sender_values(&self) -> &[Rational] {
        &self.v
    }

    pub fn prior(&self) -> &Belief {
        &self.prior
    }

    /// Same game at a different prior.
    pub fn with_prior(&self, prior: Belief) -> Result<Self> {
        if prior.dim() != self.num_types() {
            return Err(Error::DimensionMismatch(format!(
                "prior has {} entries for {} types",
                prior.dim(),
                self.num_types()
            )));
        }
        Ok(Self { prior, ..self.clone() })
    }

    /// Drops zero-prior types. The prior needs no renormalization since the
    /// removed mass is zero.
    pub fn restrict_to_support(&self) -> Result<Self> {
        let keep = self.prior.support();
        if keep.is_empty() {
            return Err(Error::AllTypesNull);
        }
        if keep.len() == self.num_types() {
            return Ok(self.clone());
        }
        Ok(Self {
            types: keep.iter().map(|&i| self.types[i].clone()).collect(),
            actions: self.actions.clone(),
            u: self.u.iter().map(|row| keep.iter().map(|&i| row[i].clone()).collect()).collect(),
            v: self.v.clone(),
            prior: self.prior.project(&keep),
        })
    }

    /// Expected Receiver payoff of `action` under `belief`.
    pub fn expected_receiver_payoff(&self, action: usize, belief: &[Rational]) -> Rational {
        rational::dot(&self.u[action], belief)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn salesman_raw(prior_h: Rational) -> RawGame {
        RawGame {
            types: vec!["H".into(), "L".into()],
            actions: vec!["buy".into(), "pass".into()],
            receiver_payoffs: vec![vec![int(5), int(-5)], vec![int(0), int(0)]],
            sender_values: vec![int(1), int(0)],
            prior: vec![prior_h.clone(), int(1) - prior_h],
        }
    }

    #[test]
    fn salesman_game_validates() {
        let g = PersuasionGame::validate(salesman_raw(frac(1, 4))).unwrap();
        assert_eq!(g.num_types(), 2);
        assert_eq!(g.prior().weights(), &[frac(1, 4), frac(3, 4)]);
    }

    #[test]
    fn prior_off_simplex_is_rejected() {
        let mut raw = salesman_raw(frac(1, 4));
        raw.prior = vec![frac(1, 2), frac(1, 3)];
        assert!(matches!(PersuasionGame::validate(raw), Err(Error::PriorNotOnSimplex(_))));
        let mut raw = salesman_raw(frac(1, 4));
        raw.prior = vec![frac(3, 2), frac(-1, 2)];
        assert!(matches!(PersuasionGame::validate(raw), Err(Error::PriorNotOnSimplex(_))));
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let mut raw = salesman_raw(frac(1, 4));
        raw.sender_values = vec![int(1), int(0), int(2)];
        assert!(matches!(PersuasionGame::validate(raw), Err(Error::DimensionMismatch(_))));
        let mut raw = salesman_raw(frac(1, 4));
        raw.receiver_payoffs[1].push(int(0));
        assert!(matches!(PersuasionGame::validate(raw), Err(Error::DimensionMismatch(_))));
        let mut raw = salesman_raw(frac(1, 4));
        raw.actions.clear();
        assert_eq!(PersuasionGame::validate(raw), Err(Error::EmptyTypeOrActionSet));
    }

    #[test]
    fn restriction_drops_null_types() {
        let raw = RawGame {
            types: vec!["a".into(), "b".into(), "c".into()],
            actions: vec!["x".into()],
            receiver_payoffs: vec![vec![int(1), int(2), int(3)]],
            sender_values: vec![int(1)],
            prior: vec![frac(1, 2), frac(1, 2), int(0)],
        };
        let g = PersuasionGame::validate(raw).unwrap();
        let r = g.restrict_to_support().unwrap();
        assert_eq!(r.types(), &["a".to_string(), "b".to_string()]);
        assert_eq!(r.prior().weights(), &[frac(1, 2), frac(1, 2)]);
        assert_eq!(r.receiver_row(0), &[int(1), int(2)]);
        assert_eq!(r.restrict_to_support().unwrap(), r);

        let full = PersuasionGame::validate(salesman_raw(frac(1, 4))).unwrap();
        assert_eq!(full.restrict_to_support().unwrap(), full);

        let point = PersuasionGame::validate(salesman_raw(int(1))).unwrap();
        let p = point.restrict_to_support().unwrap();
        assert_eq!(p.num_types(), 1);
        assert_eq!(p.prior().weights(), &[int(1)]);
    }

    #[test]
    fn subjective_prior_domains() {
        assert!(SubjectivePrior::simplex(vec![int(2), int(-1)]).is_err());
        let l = SubjectivePrior::affine(vec![int(2), int(-1)]).unwrap();
        assert_eq!(l.support(), vec![0, 1]);
        assert!(SubjectivePrior::affine(vec![int(2), int(1)]).is_err());
        let w = l.share_weight(&[frac(1, 2), frac(1, 2)], &[frac(1, 4), frac(3, 4)]);
        assert_eq!(w, int(4) - frac(2, 3));
    }
}
