//! Concave and quasi-concave envelopes of piecewise value structures.
//!
//! The weighted concavification at the prior is a single LP: each
//! (piece, branch) pair gets a vector `z ≥ 0` standing for weight × belief,
//! constrained to the cone over the piece's region, and the vectors must sum
//! to the prior. Offering the max and the burn branch of a piece as separate
//! LP columns realizes the pointwise maximum of the two without disjunctions.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::PiecewiseValueStructure;
use crate::lp::{self, LinearProgram, LpStatus, Relation, Sense, VarSign};
use crate::model::{Belief, PriorDomain, SubjectivePrior};
use crate::rational::{self, Rational};
use crate::solvers::PosteriorDistribution;

/// Per-message burning allowance C.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Budget {
    Finite(Rational),
    Unlimited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchMode {
    /// Value `w_λ(μ)·max 𝕍(μ)`; λ on the simplex.
    MaxOnly,
    /// Pointwise max of `w_λ(μ)·max 𝕍(μ)` and `w_λ(μ)·(min 𝕍(μ) − C)`.
    TwoBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Max,
    Min,
}

#[derive(Debug, Clone)]
pub struct WeightedEnvelopeQuery<'a> {
    pub structure: &'a PiecewiseValueStructure,
    pub lambda: SubjectivePrior,
    pub budget: Budget,
    pub mode: BranchMode,
}

impl<'a> WeightedEnvelopeQuery<'a> {
    pub fn max_only(structure: &'a PiecewiseValueStructure, lambda: SubjectivePrior) -> Self {
        Self { structure, lambda, budget: Budget::Unlimited, mode: BranchMode::MaxOnly }
    }

    pub fn two_branch(structure: &'a PiecewiseValueStructure, lambda: SubjectivePrior, budget: Rational) -> Self {
        Self { structure, lambda, budget: Budget::Finite(budget), mode: BranchMode::TwoBranch }
    }

    fn validate(&self) -> Result<()> {
        if self.lambda.weights().len() != self.structure.dim() {
            return Err(Error::DimensionMismatch(format!(
                "lambda has {} entries for {} types",
                self.lambda.weights().len(),
                self.structure.dim()
            )));
        }
        if !self.structure.prior().has_full_support() {
            return Err(Error::PriorNotFullSupport);
        }
        match (self.mode, &self.budget) {
            (BranchMode::MaxOnly, _) if self.lambda.domain() != PriorDomain::Simplex => {
                Err(Error::InvalidQuery("max-only envelopes need a simplex lambda".into()))
            }
            (BranchMode::TwoBranch, Budget::Unlimited) => {
                Err(Error::InvalidQuery("two-branch envelopes need a finite budget".into()))
            }
            (BranchMode::TwoBranch, Budget::Finite(c)) if c.is_negative() => {
                Err(Error::InvalidQuery("budget must be nonnegative".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeAtom {
    pub belief: Belief,
    pub weight: Rational,
    pub piece: usize,
    pub branch: Branch,
    /// `vmax` on the max branch, `vmin − C` on the burn branch.
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeResult {
    pub value: Rational,
    pub atoms: Vec<EnvelopeAtom>,
}

impl EnvelopeResult {
    /// Posterior distribution of the decomposition, atoms with equal beliefs merged.
    pub fn posterior(&self) -> PosteriorDistribution {
        PosteriorDistribution::merged(self.atoms.iter().map(|a| (a.belief.clone(), a.weight.clone())))
    }
}

/// One LP column block: a piece offered on one branch at a fixed value.
#[derive(Debug, Clone)]
pub(crate) struct BranchColumn {
    pub piece: usize,
    pub branch: Branch,
    pub value: Rational,
}

pub(crate) fn branch_columns(structure: &PiecewiseValueStructure, mode: BranchMode, budget: &Budget) -> Vec<BranchColumn> {
    let mut out = Vec::new();
    for (k, p) in structure.pieces().iter().enumerate() {
        if !structure.is_max_dominated(k) {
            out.push(BranchColumn { piece: k, branch: Branch::Max, value: p.vmax.clone() });
        }
    }
    if let (BranchMode::TwoBranch, Budget::Finite(c)) = (mode, budget) {
        for (k, p) in structure.pieces().iter().enumerate() {
            out.push(BranchColumn { piece: k, branch: Branch::Min, value: &p.vmin - c });
        }
    }
    out
}

/// Adds `z ∈ cone(region)` rows for the given z variables.
pub(crate) fn add_cone_rows(lp: &mut LinearProgram, structure: &PiecewiseValueStructure, piece: usize, z: &[usize]) {
    for h in structure.pieces()[piece].region.halfspaces() {
        let row = z.iter().copied().zip(h.homogenized()).collect();
        lp.add_constraint(row, h.relation, Rational::zero());
    }
}

/// Turns per-column cone vectors into merged envelope atoms.
pub(crate) fn atoms_from_columns(columns: &[BranchColumn], z: &[Vec<Rational>]) -> Vec<EnvelopeAtom> {
    let mut merged: BTreeMap<(Belief, Branch, Rational), (Rational, usize)> = BTreeMap::new();
    for (col, zc) in columns.iter().zip(z) {
        let weight = rational::sum(zc);
        if weight.is_zero() {
            continue;
        }
        let belief = Belief::from_weights_unchecked(zc.iter().map(|x| x / &weight).collect());
        merged
            .entry((belief, col.branch, col.value.clone()))
            .and_modify(|(w, _)| *w += &weight)
            .or_insert((weight, col.piece));
    }
    merged
        .into_iter()
        .map(|((belief, branch, value), (weight, piece))| EnvelopeAtom { belief, weight, piece, branch, value })
        .collect()
}

/// cav(V̂_λ)(μ₀) or cav(V̂_{λ,C})(μ₀) with an optimal decomposition.
pub fn concavify_weighted(query: &WeightedEnvelopeQuery) -> Result<EnvelopeResult> {
    query.validate()?;
    let s = query.structure;
    let n = s.dim();
    let prior = s.prior().weights();
    let columns = branch_columns(s, query.mode, &query.budget);
    let mut lp = LinearProgram::new(Sense::Maximize);
    let mut zvars = Vec::with_capacity(columns.len());
    for (j, col) in columns.iter().enumerate() {
        let z: Vec<usize> = (0..n).map(|t| lp.add_var(format!("z{j}_{t}"), VarSign::NonNegative)).collect();
        for t in 0..n {
            lp.set_objective(z[t], &col.value * &query.lambda.weights()[t] / &prior[t]);
        }
        add_cone_rows(&mut lp, s, col.piece, &z);
        zvars.push(z);
    }
    for t in 0..n {
        lp.add_constraint(zvars.iter().map(|z| (z[t], Rational::one())).collect(), Relation::Eq, prior[t].clone());
    }
    let sol = lp::solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Unbounded => return Err(Error::UnboundedEnvelope),
        LpStatus::Infeasible => return Err(Error::Uncovered(s.prior().to_string())),
    }
    let z: Vec<Vec<Rational>> = zvars.iter().map(|zv| zv.iter().map(|&v| sol.primal[v].clone()).collect()).collect();
    Ok(EnvelopeResult { value: sol.value.expect("optimal"), atoms: atoms_from_columns(&columns, &z) })
}

/// Whether the prior lies in the convex hull of the pieces with `vmax ≥ level`.
fn level_reachable(structure: &PiecewiseValueStructure, level: &Rational) -> Result<bool> {
    let n = structure.dim();
    let prior = structure.prior().weights();
    let mut lp = LinearProgram::new(Sense::Maximize);
    let mut zvars = Vec::new();
    for (k, p) in structure.pieces().iter().enumerate() {
        if &p.vmax < level || structure.is_max_dominated(k) {
            continue;
        }
        let z: Vec<usize> = (0..n).map(|t| lp.add_var(format!("z{k}_{t}"), VarSign::NonNegative)).collect();
        add_cone_rows(&mut lp, structure, k, &z);
        zvars.push(z);
    }
    for t in 0..n {
        lp.add_constraint(zvars.iter().map(|z| (z[t], Rational::one())).collect(), Relation::Eq, prior[t].clone());
    }
    Ok(lp::solve(&lp)?.status == LpStatus::Optimal)
}

/// qcav(V)(μ₀): the largest level whose superlevel set has the prior in its
/// convex hull. Only the finitely many piece values are candidate levels.
pub fn quasiconcavify(structure: &PiecewiseValueStructure) -> Result<Rational> {
    if !structure.prior().has_full_support() {
        return Err(Error::PriorNotFullSupport);
    }
    let mut levels: Vec<Rational> = structure.pieces().iter().map(|p| p.vmax.clone()).collect();
    levels.sort();
    levels.dedup();
    for level in levels.into_iter().rev() {
        if level_reachable(structure, &level)? {
            return Ok(level);
        }
    }
    Err(Error::Uncovered(structure.prior().to_string()))
}

/// Pointwise V̂_{λ,C}(μ) using the exact admissible interval at `belief`.
pub fn evaluate_subjective(
    structure: &PiecewiseValueStructure,
    lambda: &SubjectivePrior,
    budget: &Budget,
    belief: &Belief,
) -> Result<Rational> {
    let (lo, hi) = structure.interval_at(belief.weights()).ok_or_else(|| Error::Uncovered(belief.to_string()))?;
    let w = lambda.share_weight(belief.weights(), structure.prior().weights());
    match budget {
        Budget::Unlimited => {
            if lambda.domain() != PriorDomain::Simplex {
                return Err(Error::InvalidQuery("an unlimited budget needs a simplex lambda".into()));
            }
            Ok(w * hi)
        }
        Budget::Finite(c) => {
            let up = &w * hi;
            let down = w * (lo - c);
            Ok(up.max(down))
        }
    }
}
