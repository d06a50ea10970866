//! Exact linear programming over the rationals.
//!
//! Two-phase primal simplex on a dense tableau. Pivots use the largest
//! reduced cost until a run of degenerate steps, then fall back to Bland's
//! rule until the objective moves again, so degenerate programs still
//! terminate. Every answer comes with a certificate
//! that is re-checked in exact arithmetic before it is returned: primal and
//! dual feasibility plus equal objective values for optimal programs, and a
//! Farkas row combination for infeasible ones.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSign {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub sign: VarSign,
}

/// A sparse row `Σ coeff·x[index] (relation) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub row: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub variables: Vec<Variable>,
    pub objective: Vec<(usize, Rational)>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Certified answer to a [`LinearProgram`].
///
/// For `Optimal`, `dual` holds one multiplier per constraint with the sign
/// convention of the program's own sense, so that `value = Σ dual[i]·rhs[i]`.
/// For `Infeasible`, `farkas` holds multipliers `ζ` with `ζ ≥ 0` on `≤` rows,
/// `ζ ≤ 0` on `≥` rows, `Σ ζ_i a_i` nonnegative on nonnegative variables and
/// zero on free ones, and `Σ ζ_i b_i < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Option<Rational>,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub farkas: Option<Vec<Rational>>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        Self { sense, variables: Vec::new(), objective: Vec::new(), constraints: Vec::new() }
    }

    pub fn add_var(&mut self, name: impl Into<String>, sign: VarSign) -> usize {
        self.variables.push(Variable { name: name.into(), sign });
        self.variables.len() - 1
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective.retain(|(j, _)| *j != var);
        if !coeff.is_zero() {
            self.objective.push((var, coeff));
        }
    }

    pub fn add_constraint(&mut self, row: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> usize {
        let row = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.constraints.push(Constraint { row, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    fn check_indices(&self) -> Result<()> {
        let n = self.variables.len();
        if let Some((j, _)) = self.objective.iter().find(|(j, _)| *j >= n) {
            return Err(Error::MalformedProgram(format!("objective refers to variable {j} of {n}")));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.row.iter().find(|(j, _)| *j >= n) {
                return Err(Error::MalformedProgram(format!("constraint {i} refers to variable {j} of {n}")));
            }
        }
        Ok(())
    }

    pub fn dense_objective(&self) -> Vec<Rational> {
        let mut c = vec![Rational::zero(); self.variables.len()];
        for (j, v) in &self.objective {
            c[*j] += v;
        }
        c
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().fold(Rational::zero(), |acc, (j, c)| acc + c * &x[*j])
    }

    /// The LP dual, written with nonnegative and free variables only
    /// (nonpositive multipliers are negated). Its optimal value equals ours.
    pub fn dual(&self) -> LinearProgram {
        let dual_sense = match self.sense {
            Sense::Maximize => Sense::Minimize,
            Sense::Minimize => Sense::Maximize,
        };
        let mut d = LinearProgram::new(dual_sense);
        // flip[i] is -1 when y_i is naturally nonpositive and we store y' = -y_i.
        let mut flip = Vec::with_capacity(self.constraints.len());
        for (i, con) in self.constraints.iter().enumerate() {
            let (sign, f) = match (self.sense, con.relation) {
                (_, Relation::Eq) => (VarSign::Free, 1),
                (Sense::Maximize, Relation::Le) | (Sense::Minimize, Relation::Ge) => (VarSign::NonNegative, 1),
                (Sense::Maximize, Relation::Ge) | (Sense::Minimize, Relation::Le) => (VarSign::NonNegative, -1),
            };
            d.add_var(format!("y{i}"), sign);
            flip.push(Rational::from_integer(f.into()));
            d.set_objective(i, &con.rhs * &flip[i]);
        }
        let c = self.dense_objective();
        let mut columns: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.variables.len()];
        for (i, con) in self.constraints.iter().enumerate() {
            for (j, a) in &con.row {
                columns[*j].push((i, a * &flip[i]));
            }
        }
        for (j, var) in self.variables.iter().enumerate() {
            let relation = match (var.sign, self.sense) {
                (VarSign::Free, _) => Relation::Eq,
                (VarSign::NonNegative, Sense::Maximize) => Relation::Ge,
                (VarSign::NonNegative, Sense::Minimize) => Relation::Le,
            };
            d.add_constraint(std::mem::take(&mut columns[j]), relation, c[j].clone());
        }
        d
    }
}

/// Solves `lp` exactly and verifies the returned certificate.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    lp.check_indices()?;
    let sol = Simplex::build(lp).run();
    verify(lp, &sol)?;
    Ok(sol)
}

/// Exact check of an [`LpSolution`] against its program.
pub fn verify(lp: &LinearProgram, sol: &LpSolution) -> Result<()> {
    let fail = |msg: String| Err(Error::CertificateFailure(msg));
    match sol.status {
        LpStatus::Unbounded => Ok(()),
        LpStatus::Infeasible => {
            let Some(z) = &sol.farkas else {
                return fail("infeasible answer without a Farkas certificate".into());
            };
            if z.len() != lp.constraints.len() {
                return fail("Farkas certificate has the wrong length".into());
            }
            let mut combo = vec![Rational::zero(); lp.num_vars()];
            let mut rhs = Rational::zero();
            for (con, zi) in lp.constraints.iter().zip(z) {
                let sign_ok = match con.relation {
                    Relation::Le => !zi.is_negative(),
                    Relation::Ge => !zi.is_positive(),
                    Relation::Eq => true,
                };
                if !sign_ok {
                    return fail("Farkas multiplier has the wrong sign".into());
                }
                for (j, a) in &con.row {
                    combo[*j] += a * zi;
                }
                rhs += &con.rhs * zi;
            }
            for (var, g) in lp.variables.iter().zip(&combo) {
                let ok = match var.sign {
                    VarSign::NonNegative => !g.is_negative(),
                    VarSign::Free => g.is_zero(),
                };
                if !ok {
                    return fail(format!("Farkas combination violated on variable {}", var.name));
                }
            }
            if !rhs.is_negative() {
                return fail("Farkas right-hand side is not negative".into());
            }
            Ok(())
        }
        LpStatus::Optimal => {
            let x = &sol.primal;
            let y = &sol.dual;
            if x.len() != lp.num_vars() || y.len() != lp.constraints.len() {
                return fail("certificate vectors have the wrong length".into());
            }
            for (var, xj) in lp.variables.iter().zip(x) {
                if var.sign == VarSign::NonNegative && xj.is_negative() {
                    return fail(format!("variable {} is negative", var.name));
                }
            }
            let max = lp.sense == Sense::Maximize;
            let mut aty = vec![Rational::zero(); lp.num_vars()];
            let mut dual_value = Rational::zero();
            for (i, (con, yi)) in lp.constraints.iter().zip(y).enumerate() {
                let lhs = con.row.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &x[*j]);
                let primal_ok = match con.relation {
                    Relation::Le => lhs <= con.rhs,
                    Relation::Ge => lhs >= con.rhs,
                    Relation::Eq => lhs == con.rhs,
                };
                if !primal_ok {
                    return fail(format!("constraint {i} is violated by the primal point"));
                }
                let dual_sign_ok = match (con.relation, max) {
                    (Relation::Eq, _) => true,
                    (Relation::Le, true) | (Relation::Ge, false) => !yi.is_negative(),
                    (Relation::Ge, true) | (Relation::Le, false) => !yi.is_positive(),
                };
                if !dual_sign_ok {
                    return fail(format!("dual multiplier {i} has the wrong sign"));
                }
                for (j, a) in &con.row {
                    aty[*j] += a * yi;
                }
                dual_value += &con.rhs * yi;
            }
            let c = lp.dense_objective();
            for ((var, g), cj) in lp.variables.iter().zip(&aty).zip(&c) {
                let ok = match (var.sign, max) {
                    (VarSign::Free, _) => g == cj,
                    (VarSign::NonNegative, true) => g >= cj,
                    (VarSign::NonNegative, false) => g <= cj,
                };
                if !ok {
                    return fail(format!("dual constraint for variable {} is violated", var.name));
                }
            }
            let primal_value = lp.objective_value(x);
            if sol.value.as_ref() != Some(&primal_value) || primal_value != dual_value {
                return fail(format!("primal value {primal_value} differs from dual value {dual_value}"));
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial,
}

struct Simplex<'a> {
    lp: &'a LinearProgram,
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    /// Max-form cost of each column.
    cost: Vec<Rational>,
    /// Column that started as the unit vector of each row.
    identity: Vec<usize>,
    /// -1 where the row was negated to make its rhs nonnegative or its slack positive.
    row_sign: Vec<Rational>,
    /// (x⁺ column, x⁻ column) of each variable.
    var_cols: Vec<(usize, Option<usize>)>,
}

impl<'a> Simplex<'a> {
    fn build(lp: &'a LinearProgram) -> Self {
        let m = lp.constraints.len();
        let mut kinds = Vec::new();
        let mut cost = Vec::new();
        let c = lp.dense_objective();
        let max = lp.sense == Sense::Maximize;
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        for (j, var) in lp.variables.iter().enumerate() {
            let cj = if max { c[j].clone() } else { -c[j].clone() };
            let plus = kinds.len();
            kinds.push(ColumnKind::Structural);
            cost.push(cj.clone());
            let minus = (var.sign == VarSign::Free).then(|| {
                kinds.push(ColumnKind::Structural);
                cost.push(-cj);
                kinds.len() - 1
            });
            var_cols.push((plus, minus));
        }
        let mut slack_of_row = vec![None; m];
        for (i, con) in lp.constraints.iter().enumerate() {
            if con.relation != Relation::Eq {
                slack_of_row[i] = Some(kinds.len());
                kinds.push(ColumnKind::Slack);
                cost.push(Rational::zero());
            }
        }
        let row_sign: Vec<Rational> = lp
            .constraints
            .iter()
            .map(|con| {
                // Negating `≥ 0` rows as well gives them a +1 slack and no artificial.
                let flip = con.rhs.is_negative() || (con.rhs.is_zero() && con.relation == Relation::Ge);
                if flip { -Rational::one() } else { Rational::one() }
            })
            .collect();
        let mut identity = vec![0; m];
        let mut needs_artificial = Vec::new();
        for (i, con) in lp.constraints.iter().enumerate() {
            let slack_coeff_positive = match con.relation {
                Relation::Le => row_sign[i].is_positive(),
                Relation::Ge => row_sign[i].is_negative(),
                Relation::Eq => false,
            };
            if slack_coeff_positive {
                identity[i] = slack_of_row[i].unwrap();
            } else {
                identity[i] = kinds.len() + needs_artificial.len();
                needs_artificial.push(i);
            }
        }
        for _ in &needs_artificial {
            kinds.push(ColumnKind::Artificial);
            cost.push(Rational::zero());
        }
        let n = kinds.len();
        let mut rows = vec![vec![Rational::zero(); n + 1]; m];
        for (i, con) in lp.constraints.iter().enumerate() {
            let s = &row_sign[i];
            let row = &mut rows[i];
            for (j, a) in &con.row {
                let (plus, minus) = var_cols[*j];
                row[plus] += a * s;
                if let Some(minus) = minus {
                    row[minus] -= a * s;
                }
            }
            if let Some(sc) = slack_of_row[i] {
                let unit = if con.relation == Relation::Le { Rational::one() } else { -Rational::one() };
                row[sc] = unit * s;
            }
            if kinds[identity[i]] == ColumnKind::Artificial {
                row[identity[i]] = Rational::one();
            }
            row[n] = &con.rhs * s;
        }
        Self {
            lp,
            rows,
            obj: vec![Rational::zero(); n + 1],
            basis: identity.clone(),
            kinds,
            cost,
            identity,
            row_sign,
            var_cols,
        }
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    /// Rebuilds the reduced-cost row `d_j = c_B B⁻¹ A_j − c_j` for `cost`.
    fn price(&mut self, cost: &[Rational]) {
        let n = self.width();
        let mut obj: Vec<Rational> = cost.iter().map(|c| -c.clone()).collect();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, entry) in row.iter().enumerate().take(n + 1) {
                if !entry.is_zero() {
                    obj[j] += cb * entry;
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let support: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &support {
                self.obj[j] -= &f * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Primal simplex iterations. Entering columns follow Dantzig's rule
    /// (most negative reduced cost) until a run of degenerate pivots, then
    /// Bland's rule until the objective moves again, which rules out cycling.
    /// Returns the entering column if the program is unbounded.
    fn iterate(&mut self, allowed: impl Fn(ColumnKind) -> bool) -> Option<usize> {
        const DEGENERATE_RUN: usize = 8;
        let n = self.width();
        let mut degenerate = 0;
        loop {
            let candidates = (0..n).filter(|&j| allowed(self.kinds[j]) && self.obj[j].is_negative());
            let entering = if degenerate < DEGENERATE_RUN {
                candidates.min_by(|&a, &b| self.obj[a].cmp(&self.obj[b]).then(a.cmp(&b)))
            } else {
                candidates.min()
            };
            let c = entering?;
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[n] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, ratio)) => {
                    degenerate = if ratio.is_zero() { degenerate + 1 } else { 0 };
                    self.pivot(r, c);
                }
                None => return Some(c),
            }
        }
    }

    /// Multipliers of the standardized rows for the current basis and `cost`.
    fn row_duals(&self, cost: &[Rational]) -> Vec<Rational> {
        self.identity.iter().map(|&col| &self.obj[col] + &cost[col]).collect()
    }

    fn run(mut self) -> LpSolution {
        let n = self.width();
        let m = self.rows.len();
        let phase_one_cost: Vec<Rational> = self
            .kinds
            .iter()
            .map(|k| if *k == ColumnKind::Artificial { -Rational::one() } else { Rational::zero() })
            .collect();
        let has_artificial = self.kinds.contains(&ColumnKind::Artificial);
        if has_artificial {
            self.price(&phase_one_cost);
            let unbounded = self.iterate(|_| true);
            debug_assert!(unbounded.is_none(), "phase one is bounded above by zero");
            if self.obj[n].is_negative() {
                let y = self.row_duals(&phase_one_cost);
                let farkas = y.iter().zip(&self.row_sign).map(|(yi, s)| yi * s).collect();
                return LpSolution {
                    status: LpStatus::Infeasible,
                    value: None,
                    primal: Vec::new(),
                    dual: Vec::new(),
                    farkas: Some(farkas),
                };
            }
            // Drive zero-level artificials out of the basis where possible;
            // rows with no other nonzero entry are redundant and keep theirs.
            for r in 0..m {
                if self.kinds[self.basis[r]] != ColumnKind::Artificial {
                    continue;
                }
                if let Some(c) = (0..n).find(|&j| self.kinds[j] != ColumnKind::Artificial && !self.rows[r][j].is_zero()) {
                    self.pivot(r, c);
                }
            }
        }
        let cost = self.cost.clone();
        self.price(&cost);
        if self.iterate(|k| k != ColumnKind::Artificial).is_some() {
            return LpSolution {
                status: LpStatus::Unbounded,
                value: None,
                primal: Vec::new(),
                dual: Vec::new(),
                farkas: None,
            };
        }
        let mut col_value = vec![Rational::zero(); n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            col_value[b] = row[n].clone();
        }
        let primal: Vec<Rational> = self
            .var_cols
            .iter()
            .map(|&(plus, minus)| match minus {
                Some(minus) => &col_value[plus] - &col_value[minus],
                None => col_value[plus].clone(),
            })
            .collect();
        let flip = if self.lp.sense == Sense::Maximize { Rational::one() } else { -Rational::one() };
        let dual = self
            .row_duals(&cost)
            .iter()
            .zip(&self.row_sign)
            .map(|(yi, s)| yi * s * &flip)
            .collect();
        let value = self.lp.objective_value(&primal);
        LpSolution { status: LpStatus::Optimal, value: Some(value), primal, dual, farkas: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn bounded_maximum() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", VarSign::NonNegative);
        lp.set_objective(x, int(1));
        lp.add_constraint(vec![(x, int(1))], Relation::Le, int(3));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, Some(int(3)));
        assert_eq!(sol.dual, vec![int(1)]);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", VarSign::NonNegative);
        lp.set_objective(x, int(1));
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_with_certificate() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", VarSign::NonNegative);
        lp.add_constraint(vec![(x, int(1))], Relation::Le, int(-1));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        let z = sol.farkas.unwrap();
        assert!(z[0] > int(0));
    }

    #[test]
    fn malformed_index_is_rejected() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        lp.add_var("x", VarSign::Free);
        lp.add_constraint(vec![(3, int(1))], Relation::Eq, int(0));
        assert!(matches!(solve(&lp), Err(Error::MalformedProgram(_))));
    }

    #[test]
    fn minimization_with_free_variables_and_equalities() {
        // min x + 2y  s.t. x + y = 1, x - y >= -3, y >= 0, x free
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.add_var("x", VarSign::Free);
        let y = lp.add_var("y", VarSign::NonNegative);
        lp.set_objective(x, int(1));
        lp.set_objective(y, int(2));
        lp.add_constraint(vec![(x, int(1)), (y, int(1))], Relation::Eq, int(1));
        lp.add_constraint(vec![(x, int(1)), (y, int(-1))], Relation::Ge, int(-3));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.value, Some(int(1)));
        assert_eq!(sol.primal, vec![int(1), int(0)]);
    }

    #[test]
    fn redundant_equalities_and_degeneracy() {
        // max x1 + x2 s.t. x1 + x2 = 1 (twice), 2x1 + 2x2 = 2, x1 <= 1/2
        let mut lp = LinearProgram::new(Sense::Maximize);
        let a = lp.add_var("a", VarSign::NonNegative);
        let b = lp.add_var("b", VarSign::NonNegative);
        lp.set_objective(a, int(1));
        lp.set_objective(b, frac(1, 2));
        lp.add_constraint(vec![(a, int(1)), (b, int(1))], Relation::Eq, int(1));
        lp.add_constraint(vec![(a, int(1)), (b, int(1))], Relation::Eq, int(1));
        lp.add_constraint(vec![(a, int(2)), (b, int(2))], Relation::Eq, int(2));
        lp.add_constraint(vec![(a, int(1))], Relation::Le, frac(1, 2));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.value, Some(frac(3, 4)));
    }

    #[test]
    fn dual_round_trip_keeps_value() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", VarSign::NonNegative);
        let y = lp.add_var("y", VarSign::Free);
        lp.set_objective(x, int(3));
        lp.set_objective(y, int(-1));
        lp.add_constraint(vec![(x, int(1)), (y, int(1))], Relation::Le, int(4));
        lp.add_constraint(vec![(x, int(1)), (y, int(-1))], Relation::Ge, int(-2));
        lp.add_constraint(vec![(y, int(1))], Relation::Ge, int(1));
        let primal = solve(&lp).unwrap();
        let dual = solve(&lp.dual()).unwrap();
        assert_eq!(primal.value, dual.value);
        let back = solve(&lp.dual().dual()).unwrap();
        assert_eq!(back.value, primal.value);
    }

    #[test]
    fn beale_cycling_example_terminates() {
        // Beale's classic example cycles under the largest-coefficient rule.
        let mut lp = LinearProgram::new(Sense::Maximize);
        let v: Vec<usize> = (0..4).map(|i| lp.add_var(format!("x{i}"), VarSign::NonNegative)).collect();
        lp.set_objective(v[0], frac(3, 4));
        lp.set_objective(v[1], int(-150));
        lp.set_objective(v[2], frac(1, 50));
        lp.set_objective(v[3], int(-6));
        lp.add_constraint(
            vec![(v[0], frac(1, 4)), (v[1], int(-60)), (v[2], frac(-1, 25)), (v[3], int(9))],
            Relation::Le,
            int(0),
        );
        lp.add_constraint(
            vec![(v[0], frac(1, 2)), (v[1], int(-90)), (v[2], frac(-1, 50)), (v[3], int(3))],
            Relation::Le,
            int(0),
        );
        lp.add_constraint(vec![(v[2], int(1))], Relation::Le, int(1));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.value, Some(frac(1, 20)));
    }
}
