//! Money-burning mechanisms: construction of a near-optimal canonical
//! mechanism, incentive checks, PBE verification of general mechanisms and
//! reduction of those to canonical form.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::PiecewiseValueStructure;
use crate::model::{render, Belief, PersuasionGame};
use crate::rational::{self, Rational};
use crate::solvers::PosteriorDistribution;

/// A canonical mechanism: messages are posterior beliefs, each carrying a
/// fixed burn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalMDMB {
    pub atoms: Vec<Belief>,
    /// `pi[θ][i]` is the probability that type θ is sent to atom i.
    pub pi: Vec<Vec<Rational>>,
    /// Burn at each atom.
    pub x: Vec<Rational>,
    /// Sender's gross value realized at each atom.
    pub values: Vec<Rational>,
}

impl CanonicalMDMB {
    /// Mechanism whose on-path values are the max-selection at each atom.
    pub fn with_max_selection(
        structure: &PiecewiseValueStructure,
        atoms: Vec<Belief>,
        pi: Vec<Vec<Rational>>,
        x: Vec<Rational>,
    ) -> Result<Self> {
        let values = atoms.iter().map(|a| structure.value_at(a.weights())).collect::<Result<Vec<_>>>()?;
        let m = Self { atoms, pi, x, values };
        m.check_invariants(structure)?;
        Ok(m)
    }

    /// Row sums, Bayes consistency at every atom, nonnegative burns and
    /// admissible values.
    pub fn check_invariants(&self, structure: &PiecewiseValueStructure) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedMechanism(m));
        let mu0 = structure.prior().weights();
        let n = mu0.len();
        let k = self.atoms.len();
        if self.pi.len() != n || self.pi.iter().any(|r| r.len() != k) || self.x.len() != k || self.values.len() != k {
            return bad(format!("expected {n} rows of {k} entries and {k} burns and values"));
        }
        if self.atoms.iter().any(|a| a.dim() != n) {
            return bad("atom dimension differs from the type count".into());
        }
        for (t, row) in self.pi.iter().enumerate() {
            if row.iter().any(|p| p.is_negative()) || rational::sum(row) != Rational::one() {
                return bad(format!("row {t} is not a probability distribution"));
            }
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            let total = rational::sum((0..n).map(|t| &mu0[t] * &self.pi[t][i]).collect::<Vec<_>>().iter());
            for t in 0..n {
                if &atom.weights()[t] * &total != &mu0[t] * &self.pi[t][i] {
                    return bad(format!("atom {i} at {atom} is not Bayes consistent for type {t}"));
                }
            }
            if self.x[i].is_negative() {
                return bad(format!("negative burn at atom {i}"));
            }
            let (lo, hi) = structure.interval_at(atom.weights()).ok_or_else(|| Error::Uncovered(atom.to_string()))?;
            if self.values[i] < lo || self.values[i] > hi {
                return bad(format!("value {} at atom {i} is not a Receiver best response", self.values[i]));
            }
        }
        Ok(())
    }

    /// Net payoff of a type whose report is `report`.
    fn payoff_of_report(&self, report: usize) -> Rational {
        self.pi[report].iter().zip(self.values.iter().zip(&self.x)).map(|(p, (v, x))| p * (v - x)).sum()
    }

    /// Net payoff of each type under truthful reporting.
    pub fn net_payoffs(&self) -> Vec<Rational> {
        (0..self.pi.len()).map(|t| self.payoff_of_report(t)).collect()
    }

    pub fn max_burn(&self) -> Rational {
        self.x.iter().cloned().max().unwrap_or_else(Rational::zero)
    }
}

/// Near-optimal mechanism from a signaling scheme: each type is revealed with
/// probability δ, and the revealed atoms burn exactly enough to equalize all
/// net payoffs at `min_θ V_π̄(θ)`.
pub fn construct_optimal_mdmb(
    structure: &PiecewiseValueStructure,
    p_star: &PosteriorDistribution,
    delta: &Rational,
) -> Result<CanonicalMDMB> {
    if !delta.is_positive() || delta >= &Rational::one() {
        return Err(Error::InvalidDelta(rational::to_fraction_string(delta)));
    }
    let prior = structure.prior();
    if !prior.has_full_support() {
        return Err(Error::PriorNotFullSupport);
    }
    if !p_star.is_bayes_plausible(prior) || p_star.is_empty() {
        return Err(Error::InvalidQuery("the signaling scheme does not average to the prior".into()));
    }
    let n = prior.dim();
    let mut atoms: Vec<Belief> = p_star.atoms().iter().map(|(b, _)| b.clone()).collect();
    let base = p_star.conditional(prior);
    let keep = Rational::one() - delta;
    let mut pi: Vec<Vec<Rational>> = base.iter().map(|row| row.iter().map(|p| p * &keep).collect()).collect();
    let mut revealed = Vec::with_capacity(n);
    for t in 0..n {
        let mu_t = Belief::point_mass(n, t);
        let idx = match atoms.iter().position(|a| a == &mu_t) {
            Some(i) => i,
            None => {
                atoms.push(mu_t);
                for row in pi.iter_mut() {
                    row.push(Rational::zero());
                }
                atoms.len() - 1
            }
        };
        pi[t][idx] += delta;
        revealed.push(idx);
    }
    let values = atoms.iter().map(|a| structure.value_at(a.weights())).collect::<Result<Vec<_>>>()?;
    let gross: Vec<Rational> = pi.iter().map(|row| rational::dot(row, &values)).collect();
    let floor = rational::min_of(&gross).expect("at least one type");
    let mut x = vec![Rational::zero(); atoms.len()];
    for t in 0..n {
        x[revealed[t]] = (&gross[t] - &floor) / &pi[t][revealed[t]];
    }
    let mech = CanonicalMDMB { atoms, pi, x, values };
    mech.check_invariants(structure)?;
    Ok(mech)
}

/// `residual[θ][θ′]`: truthful net payoff of θ minus its payoff from reporting θ′.
pub fn check_ic(structure: &PiecewiseValueStructure, mech: &CanonicalMDMB) -> Result<Vec<Vec<Rational>>> {
    mech.check_invariants(structure)?;
    let own = mech.net_payoffs();
    Ok(own.iter().map(|u| own.iter().map(|v| u - v).collect()).collect())
}

/// Profitable pure misreport found by the deviation audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub ty: usize,
    pub report: usize,
    pub gain: Rational,
}

/// Tries every (type, report) pair by direct summation over the atoms.
pub fn audit_deviations(mech: &CanonicalMDMB) -> Vec<Deviation> {
    let n = mech.pi.len();
    let mut out = Vec::new();
    for ty in 0..n {
        let truthful = mech.payoff_of_report(ty);
        for report in 0..n {
            let gain = mech.payoff_of_report(report) - &truthful;
            if gain.is_positive() {
                out.push(Deviation { ty, report, gain });
            }
        }
    }
    out
}

/// Expected Sender payoff `Σ_θ μ₀(θ)·Σ_μ π(μ|θ)(V(μ) − x(μ))`.
pub fn sender_payoff(structure: &PiecewiseValueStructure, mech: &CanonicalMDMB) -> Result<Rational> {
    let residuals = check_ic(structure, mech)?;
    for (t, row) in residuals.iter().enumerate() {
        if let Some((t2, r)) = row.iter().enumerate().find(|(_, r)| !r.is_zero()) {
            return Err(Error::NotIncentiveCompatible(format!(
                "type {t} versus report {t2} has residual {}",
                rational::to_fraction_string(r)
            )));
        }
    }
    Ok(rational::dot(structure.prior().weights(), &mech.net_payoffs()))
}

/// Receiver information set: a signal together with the amount burned.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfoSet {
    pub signal: usize,
    pub burn: Rational,
}

/// General mechanism `φ : M → Δ(S × ℝ≥0)` with finite supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMDMB {
    messages: Vec<String>,
    signals: Vec<String>,
    phi: Vec<Vec<(InfoSet, Rational)>>,
}

impl RawMDMB {
    pub fn new(messages: Vec<String>, signals: Vec<String>, phi: Vec<Vec<(InfoSet, Rational)>>) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedMechanism(m));
        if phi.len() != messages.len() || messages.is_empty() {
            return bad(format!("{} output distributions for {} messages", phi.len(), messages.len()));
        }
        for (m, dist) in phi.iter().enumerate() {
            if dist.iter().any(|(is, p)| !p.is_positive() || is.burn.is_negative() || is.signal >= signals.len()) {
                return bad(format!("message {m} has a bad output entry"));
            }
            if rational::sum(dist.iter().map(|(_, p)| p)) != Rational::one() {
                return bad(format!("outputs of message {m} do not sum to one"));
            }
        }
        Ok(Self { messages, signals, phi })
    }

    pub fn messages(&self) -> &[String] {
        &self.messages
    }

    pub fn signals(&self) -> &[String] {
        &self.signals
    }

    pub fn phi(&self, message: usize) -> &[(InfoSet, Rational)] {
        &self.phi[message]
    }

    /// Every information set in the support of some message.
    pub fn info_sets(&self) -> Vec<InfoSet> {
        let mut v: Vec<InfoSet> = self.phi.iter().flatten().map(|(i, _)| i.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Sender reporting strategy, Receiver actions and beliefs at every
/// information set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assessment {
    /// `sigma[θ][m]`.
    pub sigma: Vec<Vec<Rational>>,
    /// Mixed action per information set.
    pub alpha: BTreeMap<InfoSet, Vec<Rational>>,
    pub beliefs: BTreeMap<InfoSet, Belief>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PbeViolation {
    Malformed(String),
    /// A type puts weight on a message that is not a best report.
    SenderNotOptimal { ty: usize, message: usize },
    /// The Receiver's mixed action uses a non-best response.
    ReceiverNotOptimal(InfoSet),
    /// Beliefs at a reached information set do not follow Bayes' rule.
    BeliefNotBayesian(InfoSet),
}

impl std::fmt::Display for PbeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PbeViolation::Malformed(m) => write!(f, "malformed assessment: {m}"),
            PbeViolation::SenderNotOptimal { ty, message } => {
                write!(f, "type {ty} sends message {message}, which is not a best report")
            }
            PbeViolation::ReceiverNotOptimal(i) => {
                write!(f, "receiver is not best-responding at signal {} with burn {}", i.signal, i.burn)
            }
            PbeViolation::BeliefNotBayesian(i) => {
                write!(f, "belief at signal {} with burn {} violates Bayes' rule", i.signal, i.burn)
            }
        }
    }
}

fn is_distribution(xs: &[Rational], len: usize) -> bool {
    xs.len() == len && xs.iter().all(|x| !x.is_negative()) && rational::sum(xs) == Rational::one()
}

/// Checks Receiver optimality at every information set, Bayes' rule where
/// reached, and then Sender optimality over all pure reports. Returns the
/// first violation found.
pub fn check_pbe(game: &PersuasionGame, raw: &RawMDMB, assess: &Assessment) -> Option<PbeViolation> {
    let n = game.num_types();
    let k = game.num_actions();
    let mu0 = game.prior().weights();
    let malformed = |m: &str| Some(PbeViolation::Malformed(m.to_string()));
    if assess.sigma.len() != n || assess.sigma.iter().any(|s| !is_distribution(s, raw.messages.len())) {
        return malformed("sigma must give each type a distribution over messages");
    }
    let sets = raw.info_sets();
    for is in &sets {
        match (assess.alpha.get(is), assess.beliefs.get(is)) {
            (Some(a), Some(b)) if is_distribution(a, k) && b.dim() == n => {}
            _ => return malformed("every information set needs a mixed action and a belief"),
        }
    }

    for is in &sets {
        let belief = assess.beliefs[is].weights();
        let payoffs: Vec<Rational> = (0..k).map(|a| game.expected_receiver_payoff(a, belief)).collect();
        let top = rational::max_of(&payoffs).expect("at least one action");
        if assess.alpha[is].iter().zip(&payoffs).any(|(w, u)| w.is_positive() && u != &top) {
            return Some(PbeViolation::ReceiverNotOptimal(is.clone()));
        }
    }

    let reach = reach_by_type(raw, assess, n);
    for is in &sets {
        let by_type = reach.get(is).cloned().unwrap_or_else(|| vec![Rational::zero(); n]);
        let total: Rational = (0..n).map(|t| &mu0[t] * &by_type[t]).sum();
        let belief = assess.beliefs[is].weights();
        if (0..n).any(|t| &belief[t] * &total != &mu0[t] * &by_type[t]) {
            return Some(PbeViolation::BeliefNotBayesian(is.clone()));
        }
    }

    let net = |is: &InfoSet| -> Rational {
        let a = &assess.alpha[is];
        rational::dot(a, game.sender_values()) - &is.burn
    };
    let report_value: Vec<Rational> =
        raw.phi.iter().map(|dist| dist.iter().map(|(is, p)| p * net(is)).sum()).collect();
    let best = rational::max_of(&report_value).expect("at least one message");
    for (t, s) in assess.sigma.iter().enumerate() {
        if mu0[t].is_zero() {
            continue;
        }
        if let Some(m) = s.iter().enumerate().position(|(m, w)| w.is_positive() && report_value[m] != best) {
            return Some(PbeViolation::SenderNotOptimal { ty: t, message: m });
        }
    }
    None
}

/// `Σ_m σ(m|θ)·φ(s,t|m)` per information set and type.
fn reach_by_type(raw: &RawMDMB, assess: &Assessment, n: usize) -> BTreeMap<InfoSet, Vec<Rational>> {
    let mut reach: BTreeMap<InfoSet, Vec<Rational>> = BTreeMap::new();
    for (m, dist) in raw.phi.iter().enumerate() {
        for (is, p) in dist {
            let entry = reach.entry(is.clone()).or_insert_with(|| vec![Rational::zero(); n]);
            for t in 0..n {
                entry[t] += &assess.sigma[t][m] * p;
            }
        }
    }
    reach
}

/// Collapses an equilibrium of a general mechanism to canonical form by
/// pooling information sets with the same posterior. Burns and realized
/// Sender values are averaged with the ex-ante reach probabilities, so the
/// Sender's expected payoff is unchanged.
pub fn canonicalize(game: &PersuasionGame, raw: &RawMDMB, assess: &Assessment) -> Result<CanonicalMDMB> {
    if let Some(v) = check_pbe(game, raw, assess) {
        return Err(Error::NotAnEquilibrium(v.to_string()));
    }
    let n = game.num_types();
    let mu0 = game.prior().weights();
    struct Pool {
        by_type: Vec<Rational>,
        mass: Rational,
        burn: Rational,
        value: Rational,
    }
    let mut pools: BTreeMap<Belief, Pool> = BTreeMap::new();
    for (is, by_type) in reach_by_type(raw, assess, n) {
        let mass: Rational = (0..n).map(|t| &mu0[t] * &by_type[t]).sum();
        if mass.is_zero() {
            continue;
        }
        let value = rational::dot(&assess.alpha[&is], game.sender_values());
        let pool = pools.entry(assess.beliefs[&is].clone()).or_insert_with(|| Pool {
            by_type: vec![Rational::zero(); n],
            mass: Rational::zero(),
            burn: Rational::zero(),
            value: Rational::zero(),
        });
        for t in 0..n {
            pool.by_type[t] += &by_type[t];
        }
        pool.burn += &mass * &is.burn;
        pool.value += &mass * value;
        pool.mass += mass;
    }
    let mut atoms = Vec::with_capacity(pools.len());
    let mut pi = vec![Vec::with_capacity(pools.len()); n];
    let mut x = Vec::with_capacity(pools.len());
    let mut values = Vec::with_capacity(pools.len());
    for (belief, pool) in pools {
        atoms.push(belief);
        for t in 0..n {
            pi[t].push(pool.by_type[t].clone());
        }
        x.push(&pool.burn / &pool.mass);
        values.push(&pool.value / &pool.mass);
    }
    // Null types never report; give them the first atom so rows stay distributions.
    for t in 0..n {
        if mu0[t].is_zero() && rational::sum(&pi[t]) != Rational::one() {
            pi[t].iter_mut().for_each(|p| *p = Rational::zero());
            if let Some(p) = pi[t].first_mut() {
                *p = Rational::one();
            }
        }
    }
    Ok(CanonicalMDMB { atoms, pi, x, values })
}

/// Expected Sender payoff of an assessment of a general mechanism.
pub fn raw_sender_payoff(game: &PersuasionGame, raw: &RawMDMB, assess: &Assessment) -> Rational {
    let mu0 = game.prior().weights();
    let mut total = Rational::zero();
    for (t, s) in assess.sigma.iter().enumerate() {
        for (m, w) in s.iter().enumerate() {
            for (is, p) in &raw.phi[m] {
                let net = rational::dot(&assess.alpha[is], game.sender_values()) - &is.burn;
                total += &mu0[t] * w * p * net;
            }
        }
    }
    total
}

/// Direct-revelation realization of a canonical mechanism: messages are
/// types, signal i points to atom i, the Receiver takes a best response that
/// attains the recorded value, and beliefs are the atoms.
pub fn realize(game: &PersuasionGame, mech: &CanonicalMDMB) -> Result<(RawMDMB, Assessment)> {
    let n = game.num_types();
    let k = game.num_actions();
    let mut phi = Vec::with_capacity(n);
    for row in &mech.pi {
        phi.push(
            row.iter()
                .enumerate()
                .filter(|(_, p)| p.is_positive())
                .map(|(i, p)| (InfoSet { signal: i, burn: mech.x[i].clone() }, p.clone()))
                .collect(),
        );
    }
    let raw = RawMDMB::new(
        game.types().to_vec(),
        (0..mech.atoms.len()).map(|i| format!("m{i}")).collect(),
        phi,
    )?;
    let mut alpha = BTreeMap::new();
    let mut beliefs = BTreeMap::new();
    for is in raw.info_sets() {
        let belief = &mech.atoms[is.signal];
        let target = &mech.values[is.signal];
        let best = crate::geometry::best_responses(game, belief);
        let mix = realize_value(game, &best, target).ok_or_else(|| {
            Error::MalformedMechanism(format!(
                "value {} at {belief} is not a mix of best responses {}",
                target,
                render(&best.iter().map(|&a| game.sender_values()[a].clone()).collect::<Vec<_>>())
            ))
        })?;
        let mut a = vec![Rational::zero(); k];
        for (idx, w) in mix {
            a[idx] += w;
        }
        alpha.insert(is.clone(), a);
        beliefs.insert(is, belief.clone());
    }
    let sigma = (0..n)
        .map(|t| (0..n).map(|m| if m == t { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    Ok((raw, Assessment { sigma, alpha, beliefs }))
}

/// Mixes the lowest- and highest-value best responses to hit `target`.
fn realize_value(game: &PersuasionGame, best: &[usize], target: &Rational) -> Option<Vec<(usize, Rational)>> {
    let v = game.sender_values();
    let lo = *best.iter().min_by(|a, b| v[**a].cmp(&v[**b]))?;
    let hi = *best.iter().max_by(|a, b| v[**a].cmp(&v[**b]))?;
    if target < &v[lo] || target > &v[hi] {
        return None;
    }
    if v[lo] == v[hi] {
        return Some(vec![(hi, Rational::one())]);
    }
    let w = (target - &v[lo]) / (&v[hi] - &v[lo]);
    Some(vec![(hi, w.clone()), (lo, Rational::one() - w)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    fn bin(h: Rational) -> Belief {
        Belief::new(vec![h.clone(), int(1) - h]).unwrap()
    }

    fn salesman_scheme(s: &PiecewiseValueStructure) -> PosteriorDistribution {
        PosteriorDistribution::new(vec![(bin(frac(1, 2)), frac(1, 2)), (bin(int(0)), frac(1, 2))], s.prior()).unwrap()
    }

    #[test]
    fn salesman_construction_matches_closed_form() {
        let mu0 = frac(1, 4);
        let game = fixtures::salesman(mu0.clone());
        let s = game.value_structure().unwrap();
        for k in 1..=8u32 {
            let delta = Rational::new(1.into(), (1i64 << k).into());
            let mech = construct_optimal_mdmb(&s, &salesman_scheme(&s), &delta).unwrap();
            let i = mech.atoms.iter().position(|a| a == &bin(int(1))).unwrap();
            let expected_burn = (int(1) - (int(2) - &delta) * &mu0) / (&delta * (int(1) - &mu0));
            assert_eq!(mech.x[i], expected_burn);
            let payoff = sender_payoff(&s, &mech).unwrap();
            assert_eq!(payoff, (int(1) - &delta) * &mu0 / (int(1) - &mu0));
            assert!(check_ic(&s, &mech).unwrap().iter().flatten().all(|r| r.is_zero()));
            assert!(audit_deviations(&mech).is_empty());
        }
    }

    #[test]
    fn dropping_the_burn_breaks_incentives() {
        let s = fixtures::salesman(frac(1, 4)).value_structure().unwrap();
        let mut mech = construct_optimal_mdmb(&s, &salesman_scheme(&s), &frac(1, 10)).unwrap();
        mech.x.iter_mut().for_each(|x| *x = int(0));
        let r = check_ic(&s, &mech).unwrap();
        assert!(r[1][0].is_negative());
        assert!(matches!(sender_payoff(&s, &mech), Err(Error::NotIncentiveCompatible(_))));
        assert_eq!(audit_deviations(&mech).len(), 1);
    }

    #[test]
    fn pricing_construction() {
        let s = fixtures::pricing().value_structure().unwrap();
        let tau = PosteriorDistribution::new(
            vec![
                (Belief::new(vec![frac(1, 2), frac(1, 4), frac(1, 4)]).unwrap(), frac(2, 3)),
                (Belief::new(vec![int(0), frac(1, 2), frac(1, 2)]).unwrap(), frac(1, 3)),
            ],
            s.prior(),
        )
        .unwrap();
        let delta = frac(1, 100);
        let mech = construct_optimal_mdmb(&s, &tau, &delta).unwrap();
        let payoff = sender_payoff(&s, &mech).unwrap();
        assert_eq!(payoff, frac(5, 2) - frac(3, 2) * &delta);
        assert!(payoff >= frac(5, 2) - frac(1, 50) && payoff <= frac(5, 2));
    }

    #[test]
    fn no_information_needs_no_burn() {
        let s = fixtures::single_action().value_structure().unwrap();
        let mech = construct_optimal_mdmb(&s, &PosteriorDistribution::point(s.prior()), &frac(1, 3)).unwrap();
        assert!(mech.x.iter().all(|x| x.is_zero()));
        assert_eq!(sender_payoff(&s, &mech).unwrap(), int(2));
    }

    #[test]
    fn invalid_delta() {
        let s = fixtures::salesman(frac(1, 4)).value_structure().unwrap();
        for d in [int(0), int(1), frac(-1, 2)] {
            assert!(matches!(construct_optimal_mdmb(&s, &salesman_scheme(&s), &d), Err(Error::InvalidDelta(_))));
        }
    }

    #[test]
    fn canonicalize_pools_equal_posteriors() {
        let game = fixtures::salesman(frac(1, 2));
        let raw = RawMDMB::new(
            vec!["m".into()],
            vec!["s".into()],
            vec![vec![
                (InfoSet { signal: 0, burn: int(0) }, frac(1, 2)),
                (InfoSet { signal: 0, burn: int(2) }, frac(1, 2)),
            ]],
        )
        .unwrap();
        let alpha = [int(0), int(2)]
            .into_iter()
            .map(|b| (InfoSet { signal: 0, burn: b }, vec![int(1), int(0)]))
            .collect();
        let beliefs = [int(0), int(2)].into_iter().map(|b| (InfoSet { signal: 0, burn: b }, bin(frac(1, 2)))).collect();
        let assess = Assessment { sigma: vec![vec![int(1)], vec![int(1)]], alpha, beliefs };
        assert_eq!(check_pbe(&game, &raw, &assess), None);
        let c = canonicalize(&game, &raw, &assess).unwrap();
        assert_eq!(c.x, vec![int(1)]);
        let s = game.value_structure().unwrap();
        assert_eq!(sender_payoff(&s, &c).unwrap(), raw_sender_payoff(&game, &raw, &assess));
    }

    #[test]
    fn realized_construction_is_an_equilibrium() {
        let game = fixtures::salesman(frac(1, 4));
        let s = game.value_structure().unwrap();
        let mech = construct_optimal_mdmb(&s, &salesman_scheme(&s), &frac(1, 10)).unwrap();
        let (raw, assess) = realize(&game, &mech).unwrap();
        assert_eq!(check_pbe(&game, &raw, &assess), None);
        assert_eq!(raw_sender_payoff(&game, &raw, &assess), frac(3, 10));
        let back = canonicalize(&game, &raw, &assess).unwrap();
        assert_eq!(sender_payoff(&s, &back).unwrap(), frac(3, 10));

        let mut pass = assess.clone();
        pass.alpha.values_mut().for_each(|a| *a = vec![int(0), int(1)]);
        assert!(matches!(check_pbe(&game, &raw, &pass), Some(PbeViolation::ReceiverNotOptimal(_))));
        assert!(matches!(canonicalize(&game, &raw, &pass), Err(Error::NotAnEquilibrium(_))));
    }

    #[test]
    fn babbling_is_an_equilibrium() {
        let game = fixtures::three_action_binary(frac(1, 5));
        let raw = RawMDMB::new(
            vec!["only".into()],
            vec!["s".into()],
            vec![vec![(InfoSet { signal: 0, burn: int(0) }, int(1))]],
        )
        .unwrap();
        let is = InfoSet { signal: 0, burn: int(0) };
        let assess = Assessment {
            sigma: vec![vec![int(1)], vec![int(1)]],
            alpha: [(is.clone(), vec![int(0), int(1), int(0)])].into_iter().collect(),
            beliefs: [(is, game.prior().clone())].into_iter().collect(),
        };
        assert_eq!(check_pbe(&game, &raw, &assess), None);
    }
}
