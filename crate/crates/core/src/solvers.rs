//! Sender values under each communication protocol, and saddle certificates
//! for the money-burning protocols.
//!
//! The MDMB-type values are `min_λ cav(V̂_λ)(μ₀)` over the simplex (unlimited
//! burning) or over the affine hull (budget C). The inner concavification LP
//! is dualized, which makes its value a linear program in (λ, duals) jointly,
//! so the outer minimization is one more LP. The dual multipliers of that LP
//! are a max-min signaling scheme, so λ* and p* come out of a single solve.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::envelope::{
    self, atoms_from_columns, branch_columns, BranchMode, Budget, EnvelopeAtom, WeightedEnvelopeQuery,
};
use crate::error::{Error, Result};
use crate::geometry::PiecewiseValueStructure;
use crate::lp::{self, LinearProgram, LpStatus, Relation, Sense, VarSign};
use crate::model::{render, Belief, PriorDomain, SubjectivePrior};
use crate::par::Execution;
use crate::rational::{self, Rational};

/// Finitely supported distribution over posterior beliefs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorDistribution {
    atoms: Vec<(Belief, Rational)>,
}

impl PosteriorDistribution {
    /// Validates positive weights summing to one and Bayes plausibility.
    pub fn new(atoms: Vec<(Belief, Rational)>, prior: &Belief) -> Result<Self> {
        if atoms.iter().any(|(b, w)| !w.is_positive() || b.dim() != prior.dim()) {
            return Err(Error::InvalidQuery("posterior atoms need positive weights and matching dimension".into()));
        }
        let p = Self { atoms };
        if rational::sum(p.atoms.iter().map(|(_, w)| w)) != Rational::one() {
            return Err(Error::InvalidQuery("posterior weights do not sum to one".into()));
        }
        if !p.is_bayes_plausible(prior) {
            return Err(Error::InvalidQuery(format!("posterior does not average to the prior {prior}")));
        }
        Ok(p)
    }

    /// No information: the prior with probability one.
    pub fn point(prior: &Belief) -> Self {
        Self { atoms: vec![(prior.clone(), Rational::one())] }
    }

    pub(crate) fn merged(atoms: impl IntoIterator<Item = (Belief, Rational)>) -> Self {
        let mut m: BTreeMap<Belief, Rational> = BTreeMap::new();
        for (b, w) in atoms {
            *m.entry(b).or_insert_with(Rational::zero) += w;
        }
        Self { atoms: m.into_iter().collect() }
    }

    pub fn atoms(&self) -> &[(Belief, Rational)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mean(&self) -> Vec<Rational> {
        let dim = self.atoms.first().map_or(0, |(b, _)| b.dim());
        let mut m = vec![Rational::zero(); dim];
        for (b, w) in &self.atoms {
            for (mi, bi) in m.iter_mut().zip(b.weights()) {
                *mi += w * bi;
            }
        }
        m
    }

    pub fn is_bayes_plausible(&self, prior: &Belief) -> bool {
        self.mean() == prior.weights()
    }

    /// Conditional form π(μ|θ) = p(μ)·μ(θ)/μ₀(θ), rows indexed by type.
    pub fn conditional(&self, prior: &Belief) -> Vec<Vec<Rational>> {
        (0..prior.dim())
            .map(|t| self.atoms.iter().map(|(b, w)| w * &b.weights()[t] / &prior.weights()[t]).collect())
            .collect()
    }
}

/// An atom of a signaling scheme with the Sender value selected there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectedAtom {
    pub belief: Belief,
    pub weight: Rational,
    /// Net value realized at this posterior (value minus any burn).
    pub value: Rational,
}

impl From<&EnvelopeAtom> for SelectedAtom {
    fn from(a: &EnvelopeAtom) -> Self {
        Self { belief: a.belief.clone(), weight: a.weight.clone(), value: a.value.clone() }
    }
}

/// Worst subjective prior, optimal scheme, and the value they certify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaddleCertificate {
    pub lambda_star: SubjectivePrior,
    pub p_star: Vec<SelectedAtom>,
    pub value: Rational,
    /// L(μ_θ, p*) for each type.
    pub per_type_payoffs: Vec<Rational>,
}

impl SaddleCertificate {
    /// Certificate candidate with the max-selection `V(μ) = max 𝕍(μ)` at every atom.
    pub fn with_max_selection(
        structure: &PiecewiseValueStructure,
        lambda_star: SubjectivePrior,
        p_star: &PosteriorDistribution,
    ) -> Result<Self> {
        let selection = p_star.atoms().iter().map(|(b, _)| structure.value_at(b.weights())).collect::<Result<Vec<_>>>()?;
        let per_type_payoffs = interim_payoffs(structure, p_star, &selection)?;
        let value = rational::dot(lambda_star.weights(), &per_type_payoffs);
        let p_star = p_star
            .atoms()
            .iter()
            .zip(selection)
            .map(|((belief, weight), value)| SelectedAtom { belief: belief.clone(), weight: weight.clone(), value })
            .collect();
        Ok(Self { lambda_star, p_star, value, per_type_payoffs })
    }

    pub fn posterior(&self) -> PosteriorDistribution {
        PosteriorDistribution::merged(self.p_star.iter().map(|a| (a.belief.clone(), a.weight.clone())))
    }
}

fn payoffs_of(prior: &Belief, atoms: impl IntoIterator<Item = (Belief, Rational, Rational)>) -> Vec<Rational> {
    let mu0 = prior.weights();
    let mut out = vec![Rational::zero(); mu0.len()];
    for (belief, weight, value) in atoms {
        for (t, o) in out.iter_mut().enumerate() {
            *o += &weight * &belief.weights()[t] / &mu0[t] * &value;
        }
    }
    out
}

/// Interim signaling payoffs V_p(θ) = Σ p(μ)·μ(θ)/μ₀(θ)·V(μ).
pub fn interim_payoffs(
    structure: &PiecewiseValueStructure,
    p: &PosteriorDistribution,
    selection: &[Rational],
) -> Result<Vec<Rational>> {
    if selection.len() != p.len() {
        return Err(Error::DimensionMismatch(format!("{} selected values for {} atoms", selection.len(), p.len())));
    }
    if !structure.prior().has_full_support() {
        return Err(Error::PriorNotFullSupport);
    }
    for (i, ((b, _), v)) in p.atoms().iter().zip(selection).enumerate() {
        let (lo, hi) = structure.interval_at(b.weights()).ok_or_else(|| Error::Uncovered(b.to_string()))?;
        if v < &lo || v > &hi {
            return Err(Error::InadmissibleValue { atom: i, value: rational::to_fraction_string(v) });
        }
    }
    Ok(payoffs_of(
        structure.prior(),
        p.atoms().iter().zip(selection).map(|((b, w), v)| (b.clone(), w.clone(), v.clone())),
    ))
}

/// Which saddle problem a certificate belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaddleMode {
    /// λ ∈ Δ(Θ), max-branch values: unlimited money burning.
    Simplex,
    /// λ ∈ aff(Θ), both branches with burn budget C.
    Budget(Rational),
}

impl SaddleMode {
    fn query<'a>(&self, structure: &'a PiecewiseValueStructure, lambda: SubjectivePrior) -> WeightedEnvelopeQuery<'a> {
        match self {
            SaddleMode::Simplex => WeightedEnvelopeQuery::max_only(structure, lambda),
            SaddleMode::Budget(c) => WeightedEnvelopeQuery::two_branch(structure, lambda, c.clone()),
        }
    }
}

/// Solves `min_λ cav(V̂_λ[,C])(μ₀)` as one LP over (λ, y, η).
///
/// For each (piece, branch) column block j and type θ the dual constraint
/// of the inner concavification reads
/// `y_θ + Σ_r h_{j,r}(θ)·η_{j,r} − c_j/μ₀(θ)·λ_θ ≥ 0`, and the objective is
/// `min Σ μ₀(θ)·y_θ`. Multipliers of those rows are the cone vectors of an
/// optimal scheme.
fn solve_saddle(structure: &PiecewiseValueStructure, mode: &SaddleMode) -> Result<SaddleCertificate> {
    if !structure.prior().has_full_support() {
        return Err(Error::PriorNotFullSupport);
    }
    let n = structure.dim();
    let mu0 = structure.prior().weights();
    let (branch_mode, budget, lambda_sign) = match mode {
        SaddleMode::Simplex => (BranchMode::MaxOnly, Budget::Unlimited, VarSign::NonNegative),
        SaddleMode::Budget(c) => {
            if c.is_negative() {
                return Err(Error::InvalidQuery("budget must be nonnegative".into()));
            }
            (BranchMode::TwoBranch, Budget::Finite(c.clone()), VarSign::Free)
        }
    };
    let columns = branch_columns(structure, branch_mode, &budget);
    let mut lp = LinearProgram::new(Sense::Minimize);
    let lambda: Vec<usize> = (0..n).map(|t| lp.add_var(format!("lambda{t}"), lambda_sign)).collect();
    let y: Vec<usize> = (0..n).map(|t| lp.add_var(format!("y{t}"), VarSign::Free)).collect();
    for t in 0..n {
        lp.set_objective(y[t], mu0[t].clone());
    }
    lp.add_constraint(lambda.iter().map(|&l| (l, Rational::one())).collect(), Relation::Eq, Rational::one());
    let mut rows = Vec::with_capacity(columns.len());
    for (j, col) in columns.iter().enumerate() {
        let halfspaces = structure.pieces()[col.piece].region.halfspaces();
        let mut column_rows: Vec<Vec<(usize, Rational)>> =
            (0..n).map(|t| vec![(y[t], Rational::one()), (lambda[t], -(&col.value / &mu0[t]))]).collect();
        for (r, h) in halfspaces.iter().enumerate() {
            // Express every cone row as `≤ 0` or `= 0` so its multiplier is ≥ 0 or free.
            let (sign, coeffs) = match h.relation {
                Relation::Ge => (VarSign::NonNegative, h.homogenized().into_iter().map(|x| -x).collect()),
                Relation::Le => (VarSign::NonNegative, h.homogenized()),
                Relation::Eq => (VarSign::Free, h.homogenized()),
            };
            let eta = lp.add_var(format!("eta{j}_{r}"), sign);
            let coeffs: Vec<Rational> = coeffs;
            for (t, c) in coeffs.into_iter().enumerate() {
                if !c.is_zero() {
                    column_rows[t].push((eta, c));
                }
            }
        }
        let ids: Vec<usize> = column_rows
            .into_iter()
            .map(|row| lp.add_constraint(row, Relation::Ge, Rational::zero()))
            .collect();
        rows.push(ids);
    }
    let sol = lp::solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Unbounded => return Err(Error::UnboundedEnvelope),
        LpStatus::Infeasible => return Err(Error::Uncovered(structure.prior().to_string())),
    }
    let value = sol.value.clone().expect("optimal");
    let lambda_star = SubjectivePrior::new(
        lambda.iter().map(|&l| sol.primal[l].clone()).collect(),
        if lambda_sign == VarSign::Free { PriorDomain::Affine } else { PriorDomain::Simplex },
    )?;
    let z: Vec<Vec<Rational>> = rows.iter().map(|ids| ids.iter().map(|&i| sol.dual[i].clone()).collect()).collect();
    let atoms = atoms_from_columns(&columns, &z);
    let p_star: Vec<SelectedAtom> = atoms.iter().map(SelectedAtom::from).collect();
    let per_type_payoffs =
        payoffs_of(structure.prior(), p_star.iter().map(|a| (a.belief.clone(), a.weight.clone(), a.value.clone())));
    let cert = SaddleCertificate { lambda_star, p_star, value, per_type_payoffs };
    let verdict = check_indifference(&cert, mode);
    if let Some(v) = verdict {
        return Err(Error::CertificateFailure(v.to_string()));
    }
    Ok(cert)
}

/// V*_C(μ₀) = min over affine λ of cav(V̂_{λ,C})(μ₀), with its certificate.
pub fn value_mdmb_budget(structure: &PiecewiseValueStructure, budget: &Rational) -> Result<(Rational, SaddleCertificate)> {
    let s = structure.restrict_to_support()?;
    let cert = solve_saddle(&s, &SaddleMode::Budget(budget.clone()))?;
    Ok((cert.value.clone(), cert))
}

/// Mediated communication without burning: the budget-zero case.
pub fn value_md(structure: &PiecewiseValueStructure) -> Result<Rational> {
    value_mdmb_budget(structure, &Rational::zero()).map(|(v, _)| v)
}

/// V*(μ₀) = min over λ ∈ Δ(Θ) of cav(V̂_λ)(μ₀), with its certificate.
pub fn value_mdmb(structure: &PiecewiseValueStructure) -> Result<(Rational, SaddleCertificate)> {
    let s = structure.restrict_to_support()?;
    let cert = solve_saddle(&s, &SaddleMode::Simplex)?;
    Ok((cert.value.clone(), cert))
}

/// Binary-type shortcut: the smaller of the two point-mass concavifications.
pub fn value_mdmb_binary(structure: &PiecewiseValueStructure) -> Result<Rational> {
    let s = structure.restrict_to_support()?;
    if s.dim() != 2 {
        return Err(Error::NotBinary(s.dim()));
    }
    let a = envelope::concavify_weighted(&WeightedEnvelopeQuery::max_only(&s, SubjectivePrior::point_mass(2, 0)))?;
    let b = envelope::concavify_weighted(&WeightedEnvelopeQuery::max_only(&s, SubjectivePrior::point_mass(2, 1)))?;
    Ok(a.value.min(b.value))
}

/// Bayesian persuasion: cav(V)(μ₀).
pub fn value_bp(structure: &PiecewiseValueStructure) -> Result<Rational> {
    let s = structure.restrict_to_support()?;
    let lambda = SubjectivePrior::from_belief(s.prior());
    Ok(envelope::concavify_weighted(&WeightedEnvelopeQuery::max_only(&s, lambda))?.value)
}

/// Cheap talk: qcav(V)(μ₀).
pub fn value_ct(structure: &PiecewiseValueStructure) -> Result<Rational> {
    envelope::quasiconcavify(&structure.restrict_to_support()?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaddleViolation {
    Malformed(String),
    /// L(λ*, p*) differs from cav(V̂_λ*)(μ₀).
    NotABestReply { lagrangian: Rational, envelope: Rational },
    /// A type in the support of λ* (or any type, for affine λ*) does not get exactly the value.
    SupportPayoff { ty: usize, payoff: Rational, value: Rational },
    /// A type outside the support of λ* gets less than the value.
    OffSupportPayoff { ty: usize, payoff: Rational, value: Rational },
}

impl std::fmt::Display for SaddleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = rational::to_fraction_string;
        match self {
            SaddleViolation::Malformed(m) => write!(f, "malformed certificate: {m}"),
            SaddleViolation::NotABestReply { lagrangian, envelope } => {
                write!(f, "L(lambda*, p*) = {} but the envelope at lambda* is {}", r(lagrangian), r(envelope))
            }
            SaddleViolation::SupportPayoff { ty, payoff, value } => {
                write!(f, "type {ty} gets {} instead of the value {}", r(payoff), r(value))
            }
            SaddleViolation::OffSupportPayoff { ty, payoff, value } => {
                write!(f, "off-support type {ty} gets {} below the value {}", r(payoff), r(value))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaddleVerdict {
    pub violation: Option<SaddleViolation>,
    pub envelope_value: Option<Rational>,
    pub per_type_payoffs: Vec<Rational>,
}

impl SaddleVerdict {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

fn check_indifference(cert: &SaddleCertificate, mode: &SaddleMode) -> Option<SaddleViolation> {
    let support = cert.lambda_star.support();
    for (t, payoff) in cert.per_type_payoffs.iter().enumerate() {
        let on_support = support.contains(&t) || matches!(mode, SaddleMode::Budget(_));
        if on_support && payoff != &cert.value {
            return Some(SaddleViolation::SupportPayoff { ty: t, payoff: payoff.clone(), value: cert.value.clone() });
        }
        if !on_support && payoff < &cert.value {
            return Some(SaddleViolation::OffSupportPayoff { ty: t, payoff: payoff.clone(), value: cert.value.clone() });
        }
    }
    None
}

/// Exact check of a saddle certificate: Bayes plausibility and admissible
/// selections, the envelope equality at λ*, equal payoffs on the support of
/// λ* and no smaller payoff off it.
pub fn verify_saddle(structure: &PiecewiseValueStructure, cert: &SaddleCertificate, mode: &SaddleMode) -> Result<SaddleVerdict> {
    let malformed = |m: String, payoffs: Vec<Rational>| {
        Ok(SaddleVerdict { violation: Some(SaddleViolation::Malformed(m)), envelope_value: None, per_type_payoffs: payoffs })
    };
    let prior = structure.prior();
    let n = structure.dim();
    if cert.lambda_star.weights().len() != n {
        return malformed("lambda has the wrong dimension".into(), Vec::new());
    }
    if *mode == SaddleMode::Simplex && cert.lambda_star.domain() != PriorDomain::Simplex {
        return malformed("unlimited burning needs a simplex lambda".into(), Vec::new());
    }
    let posterior = cert.posterior();
    if rational::sum(cert.p_star.iter().map(|a| &a.weight)) != Rational::one() || !posterior.is_bayes_plausible(prior) {
        return malformed("p* is not a Bayes-plausible distribution".into(), Vec::new());
    }
    let burn = match mode {
        SaddleMode::Simplex => Rational::zero(),
        SaddleMode::Budget(c) => c.clone(),
    };
    for (i, a) in cert.p_star.iter().enumerate() {
        let Some((lo, hi)) = structure.interval_at(a.belief.weights()) else {
            return malformed(format!("atom {i} at {} is not covered", a.belief), Vec::new());
        };
        if a.value > hi || a.value < lo - &burn {
            return malformed(format!("atom {i} selects an inadmissible value"), Vec::new());
        }
    }
    let per_type = payoffs_of(prior, cert.p_star.iter().map(|a| (a.belief.clone(), a.weight.clone(), a.value.clone())));
    if per_type != cert.per_type_payoffs {
        return malformed(format!("recorded payoffs differ from recomputed {}", render(&per_type)), per_type);
    }
    let envelope = envelope::concavify_weighted(&mode.query(structure, cert.lambda_star.clone()))?.value;
    let lagrangian = rational::dot(cert.lambda_star.weights(), &per_type);
    let mut violation = None;
    if lagrangian != envelope || lagrangian != cert.value {
        violation = Some(SaddleViolation::NotABestReply { lagrangian, envelope: envelope.clone() });
    }
    if violation.is_none() {
        violation = check_indifference(cert, mode);
    }
    Ok(SaddleVerdict { violation, envelope_value: Some(envelope), per_type_payoffs: per_type })
}

/// The five protocol values at one prior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolReport {
    pub ct: Rational,
    pub md: Rational,
    /// (C, V*_C) in the order the budgets were given.
    pub budgets: Vec<(Rational, Rational)>,
    pub mdmb: Rational,
    pub bp: Rational,
}

impl ProtocolReport {
    /// Checks V_CT ≤ V_MD ≤ V_C ≤ V_C′ ≤ V* ≤ V_BP for C ≤ C′.
    pub fn check_ordering(&self) -> Result<()> {
        let fail = |m: String| Err(Error::OrderingViolated(m));
        let r = rational::to_fraction_string;
        if self.ct > self.md {
            return fail(format!("CT {} > MD {}", r(&self.ct), r(&self.md)));
        }
        if self.md > self.mdmb {
            return fail(format!("MD {} > MDMB {}", r(&self.md), r(&self.mdmb)));
        }
        if self.mdmb > self.bp {
            return fail(format!("MDMB {} > BP {}", r(&self.mdmb), r(&self.bp)));
        }
        let mut sorted = self.budgets.clone();
        sorted.sort();
        let mut prev = self.md.clone();
        for (c, v) in &sorted {
            if v < &prev || v > &self.mdmb {
                return fail(format!("budget value {} at C = {} is out of order", r(v), r(c)));
            }
            prev = v.clone();
        }
        Ok(())
    }
}

pub fn protocol_report(structure: &PiecewiseValueStructure, budgets: &[Rational]) -> Result<ProtocolReport> {
    protocol_report_with(structure, budgets, Execution::default())
}

pub fn protocol_report_with(
    structure: &PiecewiseValueStructure,
    budgets: &[Rational],
    exec: Execution,
) -> Result<ProtocolReport> {
    let s = structure.restrict_to_support()?;
    let ((ct, bp), (md, mdmb)) = exec.join(
        || exec.join(|| value_ct(&s), || value_bp(&s)),
        || exec.join(|| value_md(&s), || value_mdmb(&s).map(|(v, _)| v)),
    );
    let budget_values = exec.map(budgets, |c| value_mdmb_budget(&s, c).map(|(v, _)| (c.clone(), v)));
    let report = ProtocolReport {
        ct: ct?,
        md: md?,
        budgets: budget_values.into_iter().collect::<Result<_>>()?,
        mdmb: mdmb?,
        bp: bp?,
    };
    report.check_ordering()?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub prior: Belief,
    pub report: ProtocolReport,
}

/// Protocol values at each of the given priors, rows in input order.
pub fn sweep(
    structure: &PiecewiseValueStructure,
    priors: &[Belief],
    budgets: &[Rational],
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    // Rows run concurrently; each row's own solves stay sequential.
    exec.map(priors, |prior| {
        let s = structure.with_prior(prior.clone())?;
        let report = protocol_report_with(&s, budgets, Execution::Sequential)?;
        Ok(SweepRow { prior: prior.clone(), report })
    })
    .into_iter()
    .collect()
}

/// Priors `(k/steps, 1 − k/steps)` for `k = 0..=steps`.
pub fn binary_priors(steps: usize) -> Vec<Belief> {
    let n = Rational::from_integer((steps.max(1) as i64).into());
    (0..=steps.max(1))
        .map(|k| {
            let h = Rational::from_integer((k as i64).into()) / &n;
            Belief::from_weights_unchecked(vec![h.clone(), Rational::one() - h])
        })
        .collect()
}
