//! Receiver best-response structure on the belief simplex.
//!
//! A game is compiled into a [`PiecewiseValueStructure`]: one closed polytope
//! per tie set `S` of actions (the beliefs at which every action of `S` is
//! Receiver-optimal), each carrying the interval `[min v, max v]` over `S`.
//! All envelope computations consume this form, which can also be written
//! down directly for abstract belief-value functions.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, Relation, Sense, VarSign};
use crate::model::{render, Belief, PersuasionGame};
use crate::rational::{self, Rational};

/// Largest action set for which tie-set enumeration is attempted.
pub const MAX_ACTIONS: usize = 12;

/// Largest type set for the per-face genericity check.
const MAX_GENERIC_TYPES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl HalfSpace {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Self { coeffs, relation, rhs }
    }

    fn holds_at(&self, point: &[Rational]) -> bool {
        let lhs = rational::dot(&self.coeffs, point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    /// `(a − b·1)·z (rel) 0`: the constraint on `z = t·μ` for `t ≥ 0`.
    pub fn homogenized(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|a| a - &self.rhs).collect()
    }
}

/// H-representation of a polytope inside the simplex. The simplex
/// constraints (coordinates nonnegative, summing to one) are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
}

impl Polytope {
    pub fn simplex(dim: usize) -> Self {
        Self { dim, halfspaces: Vec::new() }
    }

    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        if let Some(h) = halfspaces.iter().find(|h| h.coeffs.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "halfspace with {} coefficients in dimension {dim}",
                h.coeffs.len()
            )));
        }
        Ok(Self { dim, halfspaces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn contains(&self, belief: &[Rational]) -> bool {
        self.halfspaces.iter().all(|h| h.holds_at(belief))
    }

    /// Decides nonemptiness by an LP feasibility problem.
    pub fn is_nonempty(&self) -> Result<bool> {
        Ok(self.find_point()?.is_some())
    }

    pub fn find_point(&self) -> Result<Option<Belief>> {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let vars: Vec<usize> = (0..self.dim).map(|i| lp.add_var(format!("mu{i}"), VarSign::NonNegative)).collect();
        lp.add_constraint(vars.iter().map(|&v| (v, Rational::one())).collect(), Relation::Eq, Rational::one());
        for h in &self.halfspaces {
            lp.add_constraint(vars.iter().copied().zip(h.coeffs.iter().cloned()).collect(), h.relation, h.rhs.clone());
        }
        let sol = lp::solve(&lp)?;
        Ok(match sol.status {
            LpStatus::Optimal => Some(Belief::from_weights_unchecked(sol.primal)),
            _ => None,
        })
    }

    /// Restriction to the face spanned by `keep` (other coordinates zero).
    pub fn project(&self, keep: &[usize]) -> Self {
        Self {
            dim: keep.len(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfSpace {
                    coeffs: keep.iter().map(|&i| h.coeffs[i].clone()).collect(),
                    relation: h.relation,
                    rhs: h.rhs.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuePiece {
    pub label: String,
    /// Actions that are all Receiver-optimal on the region; empty for
    /// directly specified pieces.
    pub tie_set: Vec<usize>,
    pub region: Polytope,
    pub vmin: Rational,
    pub vmax: Rational,
}

/// Closed pieces of the belief-value correspondence plus the prior.
///
/// The admissible Sender values at `μ` are the union of `[vmin, vmax]` over
/// pieces whose region contains `μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseValueStructure {
    dim: usize,
    pieces: Vec<ValuePiece>,
    /// `max_dominated[k]`: another piece has a superset region and at least
    /// the same `vmax`, so `k` never matters for max-branch envelopes.
    max_dominated: Vec<bool>,
    prior: Belief,
}

impl PiecewiseValueStructure {
    /// Builds a structure from directly specified pieces. Empty regions are
    /// dropped; the pieces must cover the prior and a coarse simplex grid.
    pub fn from_pieces(pieces: Vec<ValuePiece>, prior: Belief) -> Result<Self> {
        let dim = prior.dim();
        let mut kept = Vec::new();
        for p in pieces {
            if p.region.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "piece {} has dimension {} but the prior has {dim}",
                    p.label,
                    p.region.dim()
                )));
            }
            if p.vmin > p.vmax {
                return Err(Error::InvalidQuery(format!("piece {} has vmin > vmax", p.label)));
            }
            if p.region.is_nonempty()? {
                kept.push(p);
            }
        }
        let structure = Self { dim, max_dominated: vec![false; kept.len()], pieces: kept, prior };
        structure.check_coverage()?;
        Ok(structure)
    }

    fn check_coverage(&self) -> Result<()> {
        const RESOLUTION: usize = 12;
        let mut points = simplex_grid(self.dim, RESOLUTION);
        points.push(self.prior.clone());
        for p in points {
            if self.interval_at(p.weights()).is_none() {
                return Err(Error::Uncovered(p.to_string()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[ValuePiece] {
        &self.pieces
    }

    pub fn prior(&self) -> &Belief {
        &self.prior
    }

    pub(crate) fn is_max_dominated(&self, k: usize) -> bool {
        self.max_dominated[k]
    }

    pub fn with_prior(&self, prior: Belief) -> Result<Self> {
        if prior.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!("prior of dimension {} for {}", prior.dim(), self.dim)));
        }
        Ok(Self { prior, ..self.clone() })
    }

    /// `(min, max)` of the admissible values at `belief`, or `None` if no
    /// piece contains it.
    pub fn interval_at(&self, belief: &[Rational]) -> Option<(Rational, Rational)> {
        let mut out: Option<(Rational, Rational)> = None;
        for p in self.pieces.iter().filter(|p| p.region.contains(belief)) {
            out = Some(match out {
                None => (p.vmin.clone(), p.vmax.clone()),
                Some((lo, hi)) => (lo.min(p.vmin.clone()), hi.max(p.vmax.clone())),
            });
        }
        out
    }

    /// V(μ) = max 𝕍(μ).
    pub fn value_at(&self, belief: &[Rational]) -> Result<Rational> {
        self.interval_at(belief).map(|(_, hi)| hi).ok_or_else(|| Error::Uncovered(render(belief)))
    }

    /// Drops zero-prior types, projecting every piece onto the support face.
    pub fn restrict_to_support(&self) -> Result<Self> {
        let keep = self.prior.support();
        if keep.is_empty() {
            return Err(Error::AllTypesNull);
        }
        if keep.len() == self.dim {
            return Ok(self.clone());
        }
        let mut pieces = Vec::new();
        let mut dominated = Vec::new();
        for (p, d) in self.pieces.iter().zip(&self.max_dominated) {
            let region = p.region.project(&keep);
            if region.is_nonempty()? {
                pieces.push(ValuePiece { region, ..p.clone() });
                dominated.push(*d);
            }
        }
        Ok(Self { dim: keep.len(), pieces, max_dominated: dominated, prior: self.prior.project(&keep) })
    }
}

impl PersuasionGame {
    /// Support restriction followed by [`compile_pieces`].
    pub fn value_structure(&self) -> Result<PiecewiseValueStructure> {
        compile_pieces(&self.restrict_to_support()?)
    }
}

/// Exact argmax of the Receiver's expected payoff, ties included.
pub fn best_responses(game: &PersuasionGame, belief: &Belief) -> Vec<usize> {
    let payoffs: Vec<Rational> =
        (0..game.num_actions()).map(|a| game.expected_receiver_payoff(a, belief.weights())).collect();
    let best = payoffs.iter().max().expect("nonempty action set");
    (0..payoffs.len()).filter(|&a| &payoffs[a] == best).collect()
}

/// `(min, max)` of Sender values over the Receiver's best responses.
pub fn value_interval(game: &PersuasionGame, belief: &Belief) -> (Rational, Rational) {
    let br = best_responses(game, belief);
    let vals = br.iter().map(|&a| &game.sender_values()[a]);
    let lo = rational::min_of(vals.clone()).unwrap();
    let hi = rational::max_of(vals).unwrap();
    (lo, hi)
}

/// Region where every action of `tie_set` is Receiver-optimal.
fn tie_region(game: &PersuasionGame, tie_set: &[usize]) -> Polytope {
    let n = game.num_types();
    let anchor = tie_set[0];
    let diff = |b: usize| -> Vec<Rational> {
        (0..n).map(|t| game.receiver_payoff(b, t) - game.receiver_payoff(anchor, t)).collect()
    };
    let mut halfspaces = Vec::new();
    for &a in &tie_set[1..] {
        halfspaces.push(HalfSpace::new(diff(a), Relation::Eq, Rational::zero()));
    }
    for b in (0..game.num_actions()).filter(|b| !tie_set.contains(b)) {
        halfspaces.push(HalfSpace::new(diff(b), Relation::Le, Rational::zero()));
    }
    Polytope { dim: n, halfspaces }
}

/// Enumerates the nonempty tie-set regions of a (support-restricted) game.
pub fn compile_pieces(game: &PersuasionGame) -> Result<PiecewiseValueStructure> {
    let na = game.num_actions();
    if na > MAX_ACTIONS {
        return Err(Error::TooManyActions(na));
    }
    let mut pieces = Vec::new();
    for mask in 1u32..(1 << na) {
        let tie_set: Vec<usize> = (0..na).filter(|a| mask & (1 << a) != 0).collect();
        let region = tie_region(game, &tie_set);
        if !region.is_nonempty()? {
            continue;
        }
        let vals = tie_set.iter().map(|&a| &game.sender_values()[a]);
        let label = tie_set.iter().map(|&a| game.actions()[a].as_str()).collect::<Vec<_>>().join("+");
        pieces.push(ValuePiece {
            label,
            vmin: rational::min_of(vals.clone()).unwrap(),
            vmax: rational::max_of(vals).unwrap(),
            tie_set,
            region,
        });
    }
    // A tie piece lies inside the region of each of its members; it is
    // redundant for max envelopes when a member already attains its vmax.
    let max_dominated = pieces
        .iter()
        .map(|p| {
            p.tie_set.len() > 1
                && p.tie_set.iter().any(|&a| {
                    game.sender_values()[a] == p.vmax && pieces.iter().any(|q| q.tie_set == [a])
                })
        })
        .collect();
    Ok(PiecewiseValueStructure { dim: game.num_types(), pieces, max_dominated, prior: game.prior().clone() })
}

/// Witness that action `action` is the unique best response somewhere on
/// the relative interior of the face spanned by `support`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityWitness {
    pub support: Vec<usize>,
    pub action: usize,
    pub belief: Belief,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub generic: bool,
    pub witnesses: Vec<GenericityWitness>,
    /// First (support, action) pair where the action is optimal on the
    /// face interior but never uniquely so.
    pub failure: Option<(Vec<usize>, usize)>,
}

/// Maximizes the smallest of the face-interior slacks `μ(θ)`, θ ∈ support,
/// and (when `strict`) the optimality margins of `action` over every other
/// action. With `strict = false` the action only has to be weakly optimal.
fn max_slack(game: &PersuasionGame, support: &[usize], action: usize, strict: bool) -> Result<Option<(Rational, Belief)>> {
    let n = game.num_types();
    let mut lp = LinearProgram::new(Sense::Maximize);
    let mu: Vec<usize> = (0..n).map(|i| lp.add_var(format!("mu{i}"), VarSign::NonNegative)).collect();
    let s = lp.add_var("slack", VarSign::Free);
    lp.set_objective(s, Rational::one());
    lp.add_constraint(mu.iter().map(|&v| (v, Rational::one())).collect(), Relation::Eq, Rational::one());
    for t in 0..n {
        if support.contains(&t) {
            lp.add_constraint(vec![(mu[t], Rational::one()), (s, -Rational::one())], Relation::Ge, Rational::zero());
        } else {
            lp.add_constraint(vec![(mu[t], Rational::one())], Relation::Eq, Rational::zero());
        }
    }
    for b in (0..game.num_actions()).filter(|&b| b != action) {
        let mut row: Vec<(usize, Rational)> =
            (0..n).map(|t| (mu[t], game.receiver_payoff(action, t) - game.receiver_payoff(b, t))).collect();
        if strict {
            row.push((s, -Rational::one()));
        }
        lp.add_constraint(row, Relation::Ge, Rational::zero());
    }
    let sol = lp::solve(&lp)?;
    Ok(match sol.status {
        LpStatus::Optimal => {
            let belief = Belief::from_weights_unchecked(mu.iter().map(|&v| sol.primal[v].clone()).collect());
            Some((sol.primal[s].clone(), belief))
        }
        _ => None,
    })
}

/// Checks that every action optimal at some belief is uniquely optimal at
/// another belief with the same support, one support face at a time.
pub fn is_generic(game: &PersuasionGame) -> Result<GenericityReport> {
    let n = game.num_types();
    if n > MAX_GENERIC_TYPES {
        return Err(Error::InvalidQuery(format!("genericity check supports at most {MAX_GENERIC_TYPES} types")));
    }
    let mut witnesses = Vec::new();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|t| mask & (1 << t) != 0).collect();
        for a in 0..game.num_actions() {
            let optimal_inside = matches!(max_slack(game, &support, a, false)?, Some((s, _)) if s > Rational::zero());
            if !optimal_inside {
                continue;
            }
            match max_slack(game, &support, a, true)? {
                Some((s, belief)) if s > Rational::zero() => {
                    witnesses.push(GenericityWitness { support: support.clone(), action: a, belief })
                }
                _ => return Ok(GenericityReport { generic: false, witnesses, failure: Some((support, a)) }),
            }
        }
    }
    Ok(GenericityReport { generic: true, witnesses, failure: None })
}

/// All beliefs with coordinates in `{0, 1/n, …, 1}`.
pub fn simplex_grid(dim: usize, n: usize) -> Vec<Belief> {
    fn rec(dim: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if dim == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(dim - 1, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(dim, n, &mut Vec::new(), &mut raw);
    let denom = Rational::from_integer((n as i64).into());
    raw.into_iter()
        .map(|c| Belief::from_weights_unchecked(c.into_iter().map(|k| Rational::from_integer((k as i64).into()) / &denom).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    fn bin(h: Rational) -> Belief {
        Belief::new(vec![h.clone(), int(1) - h]).unwrap()
    }

    #[test]
    fn salesman_best_responses() {
        let g = fixtures::salesman(frac(1, 4));
        assert_eq!(best_responses(&g, &bin(frac(3, 10))), vec![1]);
        assert_eq!(best_responses(&g, &bin(frac(1, 2))), vec![0, 1]);
        assert_eq!(value_interval(&g, &bin(frac(4, 5))), (int(1), int(1)));
        assert_eq!(value_interval(&g, &bin(frac(1, 2))), (int(0), int(1)));
    }

    #[test]
    fn example2_intervals() {
        let g = fixtures::three_action_binary(frac(1, 5));
        assert_eq!(best_responses(&g, &bin(frac(1, 5))), vec![0, 1]);
        assert_eq!(value_interval(&g, &bin(frac(2, 3))), (frac(1, 4), int(1)));
    }

    #[test]
    fn salesman_pieces() {
        let s = fixtures::salesman(frac(1, 4)).value_structure().unwrap();
        assert_eq!(s.pieces().len(), 3);
        let by_label = |l: &str| s.pieces().iter().find(|p| p.label == l).unwrap();
        let pass = by_label("pass");
        assert!(pass.region.contains(&[int(0), int(1)]));
        assert!(pass.region.contains(&[frac(1, 2), frac(1, 2)]));
        assert!(!pass.region.contains(&[frac(51, 100), frac(49, 100)]));
        let buy = by_label("buy");
        assert!(buy.region.contains(&[int(1), int(0)]));
        assert!(!buy.region.contains(&[frac(49, 100), frac(51, 100)]));
        let tie = by_label("buy+pass");
        assert!(tie.region.contains(&[frac(1, 2), frac(1, 2)]));
        assert!(!tie.region.contains(&[frac(1, 3), frac(2, 3)]));
        assert_eq!((tie.vmin.clone(), tie.vmax.clone()), (int(0), int(1)));
    }

    #[test]
    fn example1_has_p1_p2_tie_piece() {
        let s = fixtures::pricing().value_structure().unwrap();
        let tie = s.pieces().iter().find(|p| p.label == "p1+p2").unwrap();
        assert!(tie.region.contains(&[frac(1, 2), frac(1, 4), frac(1, 4)]));
    }

    #[test]
    fn single_action_game_has_one_piece() {
        let g = fixtures::single_action();
        let s = g.value_structure().unwrap();
        assert_eq!(s.pieces().len(), 1);
        assert!(s.pieces()[0].region.halfspaces().is_empty());
    }

    #[test]
    fn genericity() {
        assert!(is_generic(&fixtures::salesman(frac(1, 4))).unwrap().generic);
        assert!(is_generic(&fixtures::three_action_binary(frac(1, 5))).unwrap().generic);
        let dup = fixtures::duplicated_action();
        let report = is_generic(&dup).unwrap();
        assert!(!report.generic);
        assert!(report.failure.is_some());
    }

    #[test]
    fn grid_intervals_match_brute_force() {
        for g in [fixtures::pricing(), fixtures::salesman(frac(1, 4)), fixtures::three_action_binary(frac(1, 5))] {
            let s = g.value_structure().unwrap();
            for mu in simplex_grid(g.num_types(), if g.num_types() == 2 { 64 } else { 16 }) {
                let br = best_responses(&g, &mu);
                let vals: Vec<&Rational> = br.iter().map(|&a| &g.sender_values()[a]).collect();
                let brute = ((*vals.iter().min().unwrap()).clone(), (*vals.iter().max().unwrap()).clone());
                assert_eq!(value_interval(&g, &mu), brute);
                assert_eq!(s.interval_at(mu.weights()), Some(brute));
                let exact = s.pieces().iter().find(|p| p.tie_set == br).expect("exact tie piece");
                assert!(exact.region.contains(mu.weights()));
            }
        }
    }

    #[test]
    fn grid_has_expected_size() {
        assert_eq!(simplex_grid(3, 4).len(), 15);
        assert_eq!(simplex_grid(2, 64).len(), 65);
    }
}
