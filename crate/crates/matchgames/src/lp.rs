//! Exact linear programming: a two-phase dense-tableau simplex over
//! arbitrary-precision rationals with Bland's pivoting rule, plus a
//! mechanical dual construction for strong-duality spot checks.
//!
//! Every value the solver returns is exact; the returned point satisfies
//! each constraint with zero error.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fastrat::FastRat;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    /// Sparse coefficient vector: (variable index, coefficient), indices
    /// strictly increasing. Missing indices are zero.
    pub terms: Vec<(usize, Rational)>,
    pub rel: Rel,
    pub rhs: Rational,
}

/// `maximize objective . x  subject to  constraints, x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    /// Feasibility program: zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn with_objective(num_vars: usize, objective: Vec<Rational>) -> Result<Self> {
        if objective.len() != num_vars {
            return Err(Error::ShapeMismatch(format!(
                "objective has {} coefficients for {} variables",
                objective.len(),
                num_vars
            )));
        }
        Ok(LinearProgram {
            num_vars,
            objective,
            constraints: Vec::new(),
        })
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn add_constraint(
        &mut self,
        mut terms: Vec<(usize, Rational)>,
        rel: Rel,
        rhs: Rational,
    ) -> Result<()> {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_unstable_by_key(|&(j, _)| j);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(format!(
                    "duplicate variable {} in constraint",
                    w[0].0
                )));
            }
        }
        if let Some(&(j, _)) = terms.last() {
            if j >= self.num_vars {
                return Err(Error::ShapeMismatch(format!(
                    "variable {} out of range ({} vars)",
                    j, self.num_vars
                )));
            }
        }
        self.constraints.push(Constraint { terms, rel, rhs });
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Exact objective value of a candidate point.
    pub fn objective_value(&self, point: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .sum()
    }

    /// Checks that `point` satisfies every constraint and the nonnegativity
    /// bounds exactly.
    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars || point.iter().any(|x| x.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: Rational = c.terms.iter().map(|(j, a)| a * &point[*j]).sum();
            match c.rel {
                Rel::Le => lhs <= c.rhs,
                Rel::Eq => lhs == c.rhs,
                Rel::Ge => lhs >= c.rhs,
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// m constraint rows, each of length `cols` with the rhs in the last
    /// position.
    rows: Vec<Vec<FastRat>>,
    /// Reduced-cost row `z_j - c_j`; last entry is the objective value.
    obj: Vec<FastRat>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        if !piv.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.div(&piv);
                }
            }
        }
        let nz: Vec<(usize, FastRat)> = self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        let m = self.rows.len();
        for i in 0..=m {
            if i == r {
                continue;
            }
            let row: &mut Vec<FastRat> = if i == m {
                &mut self.obj
            } else {
                &mut self.rows[i]
            };
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (j, pv) in &nz {
                row[*j].sub_mul(&f, pv);
            }
            row[c] = FastRat::zero(); // exact by construction
        }
        self.basis[r] = c;
    }

    /// One simplex phase. Entering columns follow Dantzig's rule (most
    /// negative reduced cost) until a run of degenerate pivots, after which
    /// the phase switches to Bland's rule permanently, which guarantees
    /// termination. The leaving row minimizes the ratio with ties broken by
    /// lowest basis variable. `None` means unbounded.
    fn simplex_loop(&mut self, allowed_cols: usize) -> Option<()> {
        const DEGENERATE_SWITCH: u32 = 40;
        let rhs_col = self.cols - 1;
        let mut bland = false;
        let mut degenerate_run = 0u32;
        loop {
            let c = if bland {
                match (0..allowed_cols).find(|&j| self.obj[j].is_negative()) {
                    Some(j) => j,
                    None => return Some(()),
                }
            } else {
                let mut best: Option<usize> = None;
                for j in 0..allowed_cols {
                    if self.obj[j].is_negative()
                        && best.is_none_or(|b| self.obj[j].cmp_val(&self.obj[b]).is_lt())
                    {
                        best = Some(j);
                    }
                }
                match best {
                    Some(j) => j,
                    None => return Some(()),
                }
            };
            let mut leave: Option<(usize, FastRat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = self.rows[i][rhs_col].div(a);
                    let better = match &leave {
                        None => true,
                        Some((bi, br)) => match ratio.cmp_val(br) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Equal => self.basis[i] < self.basis[*bi],
                            std::cmp::Ordering::Greater => false,
                        },
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else { return None };
            if !bland {
                if ratio.is_zero() {
                    degenerate_run += 1;
                    if degenerate_run >= DEGENERATE_SWITCH {
                        bland = true;
                    }
                } else {
                    degenerate_run = 0;
                }
            }
            self.pivot(r, c);
        }
    }
}

/// Exact optimum of `lp` by two-phase simplex.
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars;
    let m = lp.constraints.len();
    let n_slack = lp
        .constraints
        .iter()
        .filter(|c| c.rel != Rel::Eq)
        .count();
    let n_art = m; // upper bound; Le rows with nonneg rhs skip theirs
    let slack_start = n;
    let art_start = n + n_slack;
    let cols = n + n_slack + n_art + 1;
    let rhs_col = cols - 1;

    let mut rows: Vec<Vec<FastRat>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_slack = slack_start;
    let mut next_art = art_start;
    for c in &lp.constraints {
        let mut row = vec![FastRat::zero(); cols];
        let flip = c.rhs.is_negative();
        for (j, a) in &c.terms {
            let v = if flip { -a.clone() } else { a.clone() };
            row[*j] = FastRat::from_rational(&v);
        }
        let rhs = if flip { -c.rhs.clone() } else { c.rhs.clone() };
        row[rhs_col] = FastRat::from_rational(&rhs);
        let rel = match (c.rel, flip) {
            (Rel::Eq, _) => Rel::Eq,
            (r, false) => r,
            (Rel::Le, true) => Rel::Ge,
            (Rel::Ge, true) => Rel::Le,
        };
        match rel {
            Rel::Le => {
                row[next_slack] = FastRat::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Rel::Ge => {
                row[next_slack] = FastRat::one().neg();
                next_slack += 1;
                row[next_art] = FastRat::one();
                basis.push(next_art);
                next_art += 1;
            }
            Rel::Eq => {
                row[next_art] = FastRat::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }

    // Phase 1: maximize -(sum of artificials). Reduced costs start as the
    // negated column sums over artificial-basis rows.
    let mut obj = vec![FastRat::zero(); cols];
    for (i, row) in rows.iter().enumerate() {
        if basis[i] >= art_start {
            for j in 0..cols {
                if !row[j].is_zero() {
                    obj[j] = obj[j].sub(&row[j]);
                }
            }
        }
    }
    // reduced cost of each artificial column itself is zero (basic) or
    // -(-1) = +1; setting via the generic formula: z_j - c_j with c_j = -1.
    for item in obj.iter_mut().take(art_start + n_art).skip(art_start) {
        *item = item.add(&FastRat::one());
    }

    let mut t = Tableau {
        rows,
        obj,
        basis,
        cols,
    };
    t.simplex_loop(cols - 1)
        .expect("phase 1 objective is bounded above by zero");
    // The rhs cell of the objective row tracks the phase-1 value
    // -(sum of artificials); anything below zero means no feasible point.
    if t.obj[rhs_col].is_negative() {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificial variables out of the basis, dropping any
    // redundant (all-zero) rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= art_start {
            let piv = (0..art_start).find(|&j| !t.rows[i][j].is_zero());
            match piv {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Excise artificial columns and install the real objective.
    for row in t.rows.iter_mut() {
        let rhs = row[rhs_col].clone();
        row.truncate(art_start);
        row.push(rhs);
    }
    let cols2 = art_start + 1;
    t.cols = cols2;
    let cost = |j: usize| -> FastRat {
        if j < n {
            FastRat::from_rational(&lp.objective[j])
        } else {
            FastRat::zero()
        }
    };
    let mut obj2 = vec![FastRat::zero(); cols2];
    let costs_b: Vec<FastRat> = t.basis.iter().map(|&b| cost(b)).collect();
    for (j, o) in obj2.iter_mut().enumerate() {
        let mut z = FastRat::zero();
        for (i, row) in t.rows.iter().enumerate() {
            if !row[j].is_zero() && !costs_b[i].is_zero() {
                z = z.add(&costs_b[i].mul(&row[j]));
            }
        }
        *o = z;
    }
    for (j, o) in obj2.iter_mut().enumerate().take(cols2 - 1) {
        *o = o.sub(&cost(j));
    }
    t.obj = obj2;

    if t.simplex_loop(cols2 - 1).is_none() {
        return LpOutcome::Unbounded;
    }

    let mut point = vec![Rational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = t.rows[i][cols2 - 1].to_rational();
        }
    }
    debug_assert!(lp.is_feasible_point(&point));
    let value = lp.objective_value(&point);
    LpOutcome::Optimal { value, point }
}

/// The dual of `lp`, expressed again as a maximization over nonnegative
/// variables. By strong duality, when the primal has optimum v the returned
/// program has optimum -v (the dual minimum is v, and the encoding negates
/// the dual objective to fit the max convention).
///
/// Duals of `<=` rows stay one variable; `>=` rows flip sign; `=` rows are
/// split into a difference of two nonnegative variables.
pub fn dual(lp: &LinearProgram) -> LinearProgram {
    let m = lp.constraints.len();
    let n_eq = lp.constraints.iter().filter(|c| c.rel == Rel::Eq).count();
    let dual_vars = m + n_eq;
    // var layout: one per constraint, then the negative halves of Eq rows
    let mut extra = m;
    let mut var_of_row: Vec<(usize, Option<usize>)> = Vec::with_capacity(m);
    for c in &lp.constraints {
        if c.rel == Rel::Eq {
            var_of_row.push((var_of_row.len(), Some(extra)));
            extra += 1;
        } else {
            var_of_row.push((var_of_row.len(), None));
        }
    }

    let mut objective = vec![Rational::zero(); dual_vars];
    for (i, c) in lp.constraints.iter().enumerate() {
        let (pos, neg) = var_of_row[i];
        // minimize b.y  ==  maximize -b.y ; Ge rows carry y <= 0, encoded as
        // a negated nonnegative variable.
        let sign = match c.rel {
            Rel::Ge => Rational::one(),
            _ => -Rational::one(),
        };
        objective[pos] = &sign * &c.rhs;
        if let Some(negv) = neg {
            objective[negv] = -&objective[pos];
        }
    }

    let mut out = LinearProgram::with_objective(dual_vars, objective)
        .expect("objective length matches");
    for j in 0..lp.num_vars {
        let mut terms: Vec<(usize, Rational)> = Vec::new();
        for (i, c) in lp.constraints.iter().enumerate() {
            if let Ok(k) = c.terms.binary_search_by_key(&j, |&(v, _)| v) {
                let a = &c.terms[k].1;
                let (pos, neg) = var_of_row[i];
                let sign = match c.rel {
                    Rel::Ge => -Rational::one(),
                    _ => Rational::one(),
                };
                terms.push((pos, &sign * a));
                if let Some(negv) = neg {
                    terms.push((negv, -(&sign * a)));
                }
            }
        }
        out.add_constraint(terms, Rel::Ge, lp.objective[j].clone())
            .expect("dual constraint is well-formed");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn lp1() -> LinearProgram {
        // maximize x s.t. x <= 3
        let mut lp = LinearProgram::with_objective(1, vec![rat_int(1)]).unwrap();
        lp.add_constraint(vec![(0, rat_int(1))], Rel::Le, rat_int(3))
            .unwrap();
        lp
    }

    #[test]
    fn optimal_case() {
        match solve_lp(&lp1()) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat_int(3));
                assert_eq!(point, vec![rat_int(3)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_case() {
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![(0, rat_int(1))], Rel::Ge, rat_int(1))
            .unwrap();
        lp.add_constraint(vec![(0, rat_int(1))], Rel::Le, rat_int(0))
            .unwrap();
        assert_eq!(solve_lp(&lp), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_case() {
        let lp = LinearProgram::with_objective(1, vec![rat_int(1)]).unwrap();
        assert_eq!(solve_lp(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_and_ge() {
        // maximize -x + y  s.t.  -x <= -2 (i.e. x >= 2), y <= 5
        let mut lp = LinearProgram::with_objective(2, vec![rat_int(-1), rat_int(1)]).unwrap();
        lp.add_constraint(vec![(0, rat_int(-1))], Rel::Le, rat_int(-2))
            .unwrap();
        lp.add_constraint(vec![(1, rat_int(1))], Rel::Le, rat_int(5))
            .unwrap();
        match solve_lp(&lp) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat_int(3));
                assert_eq!(point, vec![rat_int(2), rat_int(5)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn exact_fractional_optimum() {
        // maximize x + y  s.t.  2x + y <= 1, x + 3y <= 1 -> x = 2/5, y = 1/5
        let mut lp = LinearProgram::with_objective(2, vec![rat_int(1), rat_int(1)]).unwrap();
        lp.add_constraint(vec![(0, rat_int(2)), (1, rat_int(1))], Rel::Le, rat_int(1))
            .unwrap();
        lp.add_constraint(vec![(0, rat_int(1)), (1, rat_int(3))], Rel::Le, rat_int(1))
            .unwrap();
        match solve_lp(&lp) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(3, 5));
                assert_eq!(point, vec![rat(2, 5), rat(1, 5)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn beale_cycling_instance_terminates() {
        // Beale's classic example that cycles under Dantzig's rule.
        let mut lp = LinearProgram::with_objective(
            4,
            vec![rat(3, 4), rat_int(-150), rat(1, 50), rat_int(-6)],
        )
        .unwrap();
        lp.add_constraint(
            vec![(0, rat(1, 4)), (1, rat_int(-60)), (2, rat(-1, 25)), (3, rat_int(9))],
            Rel::Le,
            rat_int(0),
        )
        .unwrap();
        lp.add_constraint(
            vec![(0, rat(1, 2)), (1, rat_int(-90)), (2, rat(-1, 50)), (3, rat_int(3))],
            Rel::Le,
            rat_int(0),
        )
        .unwrap();
        lp.add_constraint(vec![(2, rat_int(1))], Rel::Le, rat_int(1))
            .unwrap();
        match solve_lp(&lp) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1, 20)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn duality_on_small_lps() {
        let cases = vec![
            lp1(),
            {
                let mut lp =
                    LinearProgram::with_objective(2, vec![rat_int(1), rat_int(2)]).unwrap();
                lp.add_constraint(vec![(0, rat_int(1)), (1, rat_int(1))], Rel::Le, rat_int(4))
                    .unwrap();
                lp.add_constraint(vec![(0, rat_int(1)), (1, rat_int(3))], Rel::Le, rat_int(6))
                    .unwrap();
                lp
            },
            {
                let mut lp =
                    LinearProgram::with_objective(2, vec![rat_int(1), rat_int(1)]).unwrap();
                lp.add_constraint(vec![(0, rat_int(1)), (1, rat_int(2))], Rel::Eq, rat_int(2))
                    .unwrap();
                lp.add_constraint(vec![(0, rat_int(1))], Rel::Le, rat_int(1))
                    .unwrap();
                lp
            },
        ];
        for lp in cases {
            let LpOutcome::Optimal { value, .. } = solve_lp(&lp) else {
                panic!("primal should be optimal");
            };
            let LpOutcome::Optimal { value: dv, .. } = solve_lp(&dual(&lp)) else {
                panic!("dual should be optimal");
            };
            assert_eq!(dv, -value);
        }
    }
}
