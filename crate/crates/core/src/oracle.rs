//! Brute-force reference values for small type sets, used to cross-check the
//! LP pipeline.
//!
//! * [`grid_concavify`] searches decompositions of the prior into grid
//!   beliefs. Every candidate is re-evaluated exactly, so the result is a
//!   certified lower bound on the concavification.
//! * [`VertexOracle`] enumerates the vertices of every piece by solving
//!   small linear systems and maximizes over all Carathéodory decompositions
//!   of the prior into vertices. On a piece the subjective value is the
//!   maximum of linear functions, hence convex, so its envelope is generated
//!   by vertices and the result is exact. It never calls the simplex solver.
//! * [`grid_min_lambda`] minimizes the vertex oracle over a finite set of
//!   subjective priors, giving an upper bound on the min-max values.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::envelope::{evaluate_subjective, Budget};
use crate::error::{Error, Result};
use crate::geometry::{simplex_grid, PiecewiseValueStructure};
use crate::lp::Relation;
use crate::model::{Belief, PriorDomain, SubjectivePrior};
use crate::par::Execution;
use crate::rational::{self, to_f64, Rational};
use crate::solvers::{self, ProtocolReport};

pub const MAX_ORACLE_TYPES: usize = 3;

/// Seed of the randomized triangle search on three types.
pub const ORACLE_SEED: u64 = 0x5eed_2024_cafe;

const RESTARTS: u64 = 48;
const CLIMB_STEPS: usize = 600;
const EXACT_CANDIDATES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    resolution: usize,
}

impl GridSpec {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidQuery(format!("grid resolution must be at least 2, got {resolution}")));
        }
        Ok(Self { resolution })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }
}

fn check_size(structure: &PiecewiseValueStructure) -> Result<()> {
    if structure.dim() > MAX_ORACLE_TYPES {
        return Err(Error::TooManyTypes(structure.dim()));
    }
    if !structure.prior().has_full_support() {
        return Err(Error::PriorNotFullSupport);
    }
    Ok(())
}

/// Unique solution of `Σ_i w_i·points[i] = target` if the points are
/// affinely independent and the target lies in their convex hull.
fn hull_weights(points: &[&[Rational]], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = points.len();
    let rows: Vec<Vec<Rational>> = (0..target.len()).map(|t| points.iter().map(|p| p[t].clone()).collect()).collect();
    let w = solve_unique(rows, target.to_vec(), k)?;
    if w.iter().any(|x| x.is_negative()) {
        return None;
    }
    Some(w)
}

/// Gaussian elimination; `None` unless the system is consistent with a
/// unique solution.
fn solve_unique(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, unknowns: usize) -> Option<Vec<Rational>> {
    let m = rows.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(unknowns);
    for col in 0..unknowns {
        let p = (pivot_row..m).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, p);
        rhs.swap(pivot_row, p);
        let inv = Rational::one() / &rows[pivot_row][col];
        for c in col..unknowns {
            rows[pivot_row][c] *= &inv;
        }
        rhs[pivot_row] *= &inv;
        for r in 0..m {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..unknowns {
                    let d = &f * &rows[pivot_row][c];
                    rows[r][c] -= d;
                }
                let d = &f * &rhs[pivot_row];
                rhs[r] -= d;
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(pivots.into_iter().map(|r| rhs[r].clone()).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exact concavification through piece vertices.
#[derive(Debug, Clone)]
pub struct VertexOracle {
    structure: PiecewiseValueStructure,
    vertices: Vec<Belief>,
    /// Each entry lists (vertex, weight) with weights summing to one and
    /// averaging to the prior.
    decompositions: Vec<Vec<(usize, Rational)>>,
}

impl VertexOracle {
    pub fn new(structure: &PiecewiseValueStructure) -> Result<Self> {
        check_size(structure)?;
        let d = structure.dim();
        let mut vertices: Vec<Belief> = Vec::new();
        for piece in structure.pieces() {
            // Candidate tight sets: region rows and coordinate bounds, with Σμ = 1 always on.
            let mut eqs: Vec<(Vec<Rational>, Rational)> = vec![(vec![Rational::one(); d], Rational::one())];
            let mut ineqs: Vec<(Vec<Rational>, Rational)> = Vec::new();
            for h in piece.region.halfspaces() {
                match h.relation {
                    Relation::Eq => eqs.push((h.coeffs.clone(), h.rhs.clone())),
                    _ => ineqs.push((h.coeffs.clone(), h.rhs.clone())),
                }
            }
            for t in 0..d {
                let mut e = vec![Rational::zero(); d];
                e[t] = Rational::one();
                ineqs.push((e, Rational::zero()));
            }
            for size in 0..d {
                for chosen in subsets(ineqs.len(), size) {
                    let system: Vec<&(Vec<Rational>, Rational)> = eqs.iter().chain(chosen.iter().map(|&i| &ineqs[i])).collect();
                    let rows = system.iter().map(|(a, _)| a.clone()).collect();
                    let rhs = system.iter().map(|(_, b)| b.clone()).collect();
                    let Some(point) = solve_unique(rows, rhs, d) else { continue };
                    if point.iter().any(|x| x.is_negative()) || !piece.region.contains(&point) {
                        continue;
                    }
                    let b = Belief::from_weights_unchecked(point);
                    if !vertices.contains(&b) {
                        vertices.push(b);
                    }
                }
            }
        }
        let prior = structure.prior().weights();
        let mut decompositions = Vec::new();
        for k in 1..=d {
            for idx in subsets(vertices.len(), k) {
                let pts: Vec<&[Rational]> = idx.iter().map(|&i| vertices[i].weights()).collect();
                if let Some(w) = hull_weights(&pts, prior) {
                    decompositions.push(idx.into_iter().zip(w).collect());
                }
            }
        }
        Ok(Self { structure: structure.clone(), vertices, decompositions })
    }

    pub fn vertices(&self) -> &[Belief] {
        &self.vertices
    }

    /// cav(V̂_λ[,C])(μ₀), exactly.
    pub fn concavify(&self, lambda: &SubjectivePrior, budget: &Budget) -> Result<Rational> {
        let f = self
            .vertices
            .iter()
            .map(|v| evaluate_subjective(&self.structure, lambda, budget, v))
            .collect::<Result<Vec<_>>>()?;
        self.decompositions
            .iter()
            .map(|dec| dec.iter().map(|(i, w)| w * &f[*i]).sum::<Rational>())
            .max()
            .ok_or_else(|| Error::Uncovered(self.structure.prior().to_string()))
    }

    /// qcav(V)(μ₀): the best level whose superlevel vertices cover the prior.
    pub fn quasiconcavify(&self) -> Result<Rational> {
        let v = self.vertices.iter().map(|b| self.structure.value_at(b.weights())).collect::<Result<Vec<_>>>()?;
        self.decompositions
            .iter()
            .map(|dec| dec.iter().map(|(i, _)| v[*i].clone()).min().expect("nonempty decomposition"))
            .max()
            .ok_or_else(|| Error::Uncovered(self.structure.prior().to_string()))
    }
}

/// Exact concavification at the prior through vertex enumeration.
pub fn vertex_concavify(structure: &PiecewiseValueStructure, lambda: &SubjectivePrior, budget: &Budget) -> Result<Rational> {
    VertexOracle::new(structure)?.concavify(lambda, budget)
}

/// Grid beliefs with their exact subjective values and float copies.
struct GridValues {
    points: Vec<Belief>,
    exact: Vec<Rational>,
    approx: Vec<f64>,
}

fn grid_values(
    structure: &PiecewiseValueStructure,
    lambda: &SubjectivePrior,
    budget: &Budget,
    grid: GridSpec,
    exec: Execution,
) -> Result<GridValues> {
    let points = simplex_grid(structure.dim(), grid.resolution);
    let exact = exec
        .map(&points, |p| evaluate_subjective(structure, lambda, budget, p))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let approx = exact.iter().map(to_f64).collect();
    Ok(GridValues { points, exact, approx })
}

/// Lower bound on cav(V̂_λ[,C])(μ₀) from decompositions into grid beliefs.
pub fn grid_concavify(
    structure: &PiecewiseValueStructure,
    lambda: &SubjectivePrior,
    budget: &Budget,
    grid: GridSpec,
) -> Result<Rational> {
    grid_concavify_with(structure, lambda, budget, grid, Execution::default())
}

pub fn grid_concavify_with(
    structure: &PiecewiseValueStructure,
    lambda: &SubjectivePrior,
    budget: &Budget,
    grid: GridSpec,
    exec: Execution,
) -> Result<Rational> {
    check_size(structure)?;
    let prior = structure.prior();
    let mut best = evaluate_subjective(structure, lambda, budget, prior)?;
    if structure.dim() == 1 {
        return Ok(best);
    }
    let g = grid_values(structure, lambda, budget, grid, exec)?;
    let mut candidates = best_pairs(&g, prior, exec);
    if structure.dim() == 3 {
        candidates.extend(random_triangles(&g, prior, grid.resolution, exec));
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (_, idx) in candidates.into_iter().take(EXACT_CANDIDATES) {
        let pts: Vec<&[Rational]> = idx.iter().map(|&i| g.points[i].weights()).collect();
        if let Some(w) = hull_weights(&pts, prior.weights()) {
            let v: Rational = idx.iter().zip(&w).map(|(&i, wi)| wi * &g.exact[i]).sum();
            best = best.max(v);
        }
    }
    Ok(best)
}

fn approx_point(b: &Belief) -> Vec<f64> {
    b.weights().iter().map(to_f64).collect()
}

/// For each grid point, the best partner such that the prior lies on the
/// segment between them (within float tolerance).
fn best_pairs(g: &GridValues, prior: &Belief, exec: Execution) -> Vec<(f64, Vec<usize>)> {
    let q = approx_point(prior);
    let pts: Vec<Vec<f64>> = g.points.iter().map(approx_point).collect();
    let n = pts.len();
    exec.map_range(n, |i| {
        let a = &pts[i];
        let mut best: Option<(f64, Vec<usize>)> = None;
        for j in (i + 1)..n {
            let b = &pts[j];
            // q = a + t (b − a) with t ∈ [0, 1].
            let (k, span) = (0..a.len()).map(|k| (k, b[k] - a[k])).max_by(|x, y| x.1.abs().total_cmp(&y.1.abs())).unwrap();
            if span.abs() < 1e-15 {
                continue;
            }
            let t = (q[k] - a[k]) / span;
            if !(-1e-12..=1.0 + 1e-12).contains(&t) {
                continue;
            }
            if (0..a.len()).any(|c| (a[c] + t * (b[c] - a[c]) - q[c]).abs() > 1e-9) {
                continue;
            }
            let v = (1.0 - t) * g.approx[i] + t * g.approx[j];
            if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                best = Some((v, vec![i, j]));
            }
        }
        best
    })
    .into_iter()
    .flatten()
    .collect()
}

fn barycentric(p: [[f64; 2]; 3], q: [f64; 2]) -> Option<[f64; 3]> {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    if det.abs() < 1e-14 {
        return None;
    }
    let w1 = ((q[0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (q[1] - p[0][1])) / det;
    let w2 = ((p[1][0] - p[0][0]) * (q[1] - p[0][1]) - (q[0] - p[0][0]) * (p[1][1] - p[0][1])) / det;
    let w = [1.0 - w1 - w2, w1, w2];
    w.iter().all(|x| *x >= -1e-12).then_some(w)
}

/// Randomized hill climbing over grid triangles containing the prior, one
/// independently seeded walk per restart.
fn random_triangles(g: &GridValues, prior: &Belief, n: usize, exec: Execution) -> Vec<(f64, Vec<usize>)> {
    let q = [to_f64(&prior.weights()[0]), to_f64(&prior.weights()[1])];
    let coords: Vec<(i64, i64)> = g
        .points
        .iter()
        .map(|b| {
            let c = |x: &Rational| (x * Rational::from_integer((n as i64).into())).to_integer();
            (i64::try_from(c(&b.weights()[0])).unwrap_or(0), i64::try_from(c(&b.weights()[1])).unwrap_or(0))
        })
        .collect();
    let index: HashMap<(i64, i64), usize> = coords.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let plane: Vec<[f64; 2]> = coords.iter().map(|&(x, y)| [x as f64 / n as f64, y as f64 / n as f64]).collect();
    let value = |tri: &[usize; 3]| -> Option<f64> {
        let w = barycentric([plane[tri[0]], plane[tri[1]], plane[tri[2]]], q)?;
        Some((0..3).map(|k| w[k] * g.approx[tri[k]]).sum())
    };
    let len = g.points.len();
    exec.map_range(RESTARTS as usize, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED.wrapping_add(r as u64));
        let mut current = None;
        for _ in 0..20_000 {
            let tri = [rng.gen_range(0..len), rng.gen_range(0..len), rng.gen_range(0..len)];
            if let Some(v) = value(&tri) {
                current = Some((v, tri));
                break;
            }
        }
        let (mut best_v, mut tri) = current?;
        for _ in 0..CLIMB_STEPS {
            let k = rng.gen_range(0..3);
            let mut next = tri;
            next[k] = if rng.gen_bool(0.5) {
                rng.gen_range(0..len)
            } else {
                let (x, y) = coords[tri[k]];
                let step = rng.gen_range(1..=(n as i64 / 8).max(1));
                let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)][rng.gen_range(0..6)];
                match index.get(&(x + dx * step, y + dy * step)) {
                    Some(&i) => i,
                    None => continue,
                }
            };
            if let Some(v) = value(&next) {
                if v >= best_v {
                    best_v = v;
                    tri = next;
                }
            }
        }
        Some((best_v, tri.to_vec()))
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Upper bound on `min_λ cav(V̂_λ[,C])(μ₀)`: the exact inner envelope at each
/// supplied λ, minimized. Returns the value and the minimizing λ.
pub fn grid_min_lambda(
    structure: &PiecewiseValueStructure,
    lambdas: &[SubjectivePrior],
    budget: &Budget,
) -> Result<(Rational, SubjectivePrior)> {
    grid_min_lambda_with(structure, lambdas, budget, Execution::default())
}

pub fn grid_min_lambda_with(
    structure: &PiecewiseValueStructure,
    lambdas: &[SubjectivePrior],
    budget: &Budget,
    exec: Execution,
) -> Result<(Rational, SubjectivePrior)> {
    let oracle = VertexOracle::new(structure)?;
    let values = exec.map(lambdas, |l| oracle.concavify(l, budget));
    let mut best: Option<(Rational, SubjectivePrior)> = None;
    for (l, v) in lambdas.iter().zip(values) {
        let v = v?;
        if best.as_ref().is_none_or(|(b, _)| &v < b) {
            best = Some((v, l.clone()));
        }
    }
    best.ok_or_else(|| Error::InvalidQuery("empty lambda grid".into()))
}

/// Binary λ line `(a + k·step, 1 − a − k·step)` for `k = 0..count`.
pub fn binary_lambda_line(start: &Rational, step: &Rational, count: usize, domain: PriorDomain) -> Result<Vec<SubjectivePrior>> {
    (0..count)
        .map(|k| {
            let h = start + step * Rational::from_integer((k as i64).into());
            SubjectivePrior::new(vec![h.clone(), Rational::one() - h], domain)
        })
        .collect()
}

/// λ grid on the simplex, or on the affine hull with coordinates in
/// `[−reach, 1 + reach]`, with step `1/n`.
pub fn lambda_grid(dim: usize, n: usize, domain: PriorDomain, reach: usize) -> Vec<SubjectivePrior> {
    match domain {
        PriorDomain::Simplex => simplex_grid(dim, n).iter().map(SubjectivePrior::from_belief).collect(),
        PriorDomain::Affine => {
            let lo = -((reach * n) as i64);
            let hi = ((1 + reach) * n) as i64;
            let nn = Rational::from_integer((n as i64).into());
            let mut out = Vec::new();
            let mut rec = |coords: &[i64]| {
                let last = n as i64 - coords.iter().sum::<i64>();
                if (lo..=hi).contains(&last) {
                    let mut w: Vec<Rational> = coords.iter().map(|&c| Rational::from_integer(c.into()) / &nn).collect();
                    w.push(Rational::from_integer(last.into()) / &nn);
                    out.push(SubjectivePrior::affine(w).expect("sums to one"));
                }
            };
            match dim {
                1 => rec(&[]),
                2 => (lo..=hi).for_each(|a| rec(&[a])),
                _ => {
                    for a in lo..=hi {
                        for b in lo..=hi {
                            rec(&[a, b]);
                        }
                    }
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub protocol: String,
    pub exact: Rational,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    pub satisfied: bool,
}

impl std::fmt::Display for AuditRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |x: &Option<Rational>| x.as_ref().map_or("-".to_string(), rational::to_fraction_string);
        write!(
            f,
            "{:<10} exact {:<12} lower {:<12} upper {:<12} {}",
            self.protocol,
            rational::to_fraction_string(&self.exact),
            show(&self.lower),
            show(&self.upper),
            if self.satisfied { "ok" } else { "VIOLATED" }
        )
    }
}

/// Oracle resolution settings for an audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditSettings {
    pub grid: GridSpec,
    pub lambda_steps: usize,
    pub affine_reach: usize,
}

impl AuditSettings {
    pub fn for_dim(dim: usize) -> Self {
        if dim <= 2 {
            Self { grid: GridSpec { resolution: 256 }, lambda_steps: 64, affine_reach: 4 }
        } else {
            Self { grid: GridSpec { resolution: 30 }, lambda_steps: 8, affine_reach: 1 }
        }
    }
}

/// Solver values against the oracles.
pub fn audit_report(structure: &PiecewiseValueStructure, budgets: &[Rational]) -> Result<Vec<AuditRow>> {
    let s = structure.restrict_to_support()?;
    let report = solvers::protocol_report(&s, budgets)?;
    audit_values(&s, &report, AuditSettings::for_dim(s.dim()))
}

/// Compares a (possibly externally supplied) report with the oracle bounds.
pub fn audit_values(structure: &PiecewiseValueStructure, report: &ProtocolReport, settings: AuditSettings) -> Result<Vec<AuditRow>> {
    let s = structure.restrict_to_support()?;
    check_size(&s)?;
    let d = s.dim();
    let vertex = VertexOracle::new(&s)?;
    let row = |protocol: String, exact: &Rational, lower: Option<Rational>, upper: Option<Rational>| {
        let satisfied = lower.as_ref().is_none_or(|l| l <= exact) && upper.as_ref().is_none_or(|u| exact <= u);
        AuditRow { protocol, exact: exact.clone(), lower, upper, satisfied }
    };
    let own = SubjectivePrior::from_belief(s.prior());
    let bp_low = grid_concavify(&s, &own, &Budget::Unlimited, settings.grid)?;
    let bp_high = vertex.concavify(&own, &Budget::Unlimited)?;
    let ct = vertex.quasiconcavify()?;
    let simplex = lambda_grid(d, settings.lambda_steps, PriorDomain::Simplex, 0);
    let affine = lambda_grid(d, settings.lambda_steps, PriorDomain::Affine, settings.affine_reach);
    let min_over = |lambdas: &[SubjectivePrior], budget: &Budget| -> Result<Rational> {
        let values = Execution::default().map(lambdas, |l| vertex.concavify(l, budget));
        rational::min_of(&values.into_iter().collect::<Result<Vec<_>>>()?)
            .ok_or_else(|| Error::InvalidQuery("empty lambda grid".into()))
    };
    let mut rows = vec![
        row("BP".into(), &report.bp, Some(bp_low), Some(bp_high)),
        row("CT".into(), &report.ct, Some(ct.clone()), Some(ct)),
        row("MDMB".into(), &report.mdmb, None, Some(min_over(&simplex, &Budget::Unlimited)?)),
        row("MD".into(), &report.md, None, Some(min_over(&affine, &Budget::Finite(Rational::zero()))?)),
    ];
    for (c, v) in &report.budgets {
        let upper = min_over(&affine, &Budget::Finite(c.clone()))?;
        rows.push(row(format!("MDMB[C={}]", rational::to_fraction_string(c)), v, None, Some(upper)));
    }
    Ok(rows)
}
