//! Revised primal simplex over a dense explicit basis inverse.
//!
//! Entering and leaving variables follow Bland's rule (smallest eligible
//! column index, ties in the ratio test broken by smallest basic column),
//! which guarantees termination on degenerate programs and makes the pivot
//! sequence a deterministic function of the input.

use log::trace;

use super::{LinearProgram, LpSolution, LpStatus, Relation};
use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

const REFACTOR_EVERY: usize = 64;

/// Relative width of the ratio-test tie band.
const RATIO_TIE: f64 = 1e-12;

/// How an original variable is expressed in nonnegative standard columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    Fixed(f64),
    /// `x = offset + col`
    Shifted { col: usize, offset: f64 },
    /// `x = offset - col`
    Reflected { col: usize, offset: f64 },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

/// `maximize cost·x  s.t.  A x = b, x >= 0, b >= 0`.
struct StandardForm {
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    kind: Vec<ColKind>,
    cost: Vec<f64>,
    b: Vec<f64>,
    initial_basis: Vec<usize>,
    var_map: Vec<VarMap>,
    /// -1 where the row was negated to make its right-hand side nonnegative.
    row_sign: Vec<f64>,
    n_user_rows: usize,
}

impl StandardForm {
    /// `None` when the variable bounds are already contradictory.
    fn build(lp: &LinearProgram) -> Option<StandardForm> {
        let n = lp.num_vars();
        let mut cols: Vec<Vec<(usize, f64)>> = Vec::new();
        let mut kind = Vec::new();
        let mut cost = Vec::new();
        let mut var_map = Vec::with_capacity(n);
        let mut bound_rows: Vec<(usize, f64)> = Vec::new();

        for j in 0..n {
            let (lo, hi) = lp.bounds[j];
            let c = lp.objective[j];
            let map = if lo.is_finite() && hi.is_finite() && hi - lo <= 0.0 {
                if hi < lo {
                    return None;
                }
                VarMap::Fixed(lo)
            } else if lo.is_finite() {
                let col = cols.len();
                cols.push(Vec::new());
                kind.push(ColKind::Structural);
                cost.push(c);
                if hi.is_finite() {
                    bound_rows.push((col, hi - lo));
                }
                VarMap::Shifted { col, offset: lo }
            } else if hi.is_finite() {
                let col = cols.len();
                cols.push(Vec::new());
                kind.push(ColKind::Structural);
                cost.push(-c);
                VarMap::Reflected { col, offset: hi }
            } else {
                let pos = cols.len();
                cols.push(Vec::new());
                cols.push(Vec::new());
                kind.extend([ColKind::Structural, ColKind::Structural]);
                cost.extend([c, -c]);
                VarMap::Split { pos, neg: pos + 1 }
            };
            var_map.push(map);
        }

        let m_user = lp.num_constraints();
        let m = m_user + bound_rows.len();
        let mut b = vec![0.0; m];
        let mut relations = Vec::with_capacity(m);

        for (i, row) in lp.rows.iter().enumerate() {
            let mut rhs = lp.rhs[i];
            for (j, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                match var_map[j] {
                    VarMap::Fixed(v) => rhs -= a * v,
                    VarMap::Shifted { col, offset } => {
                        rhs -= a * offset;
                        cols[col].push((i, a));
                    }
                    VarMap::Reflected { col, offset } => {
                        rhs -= a * offset;
                        cols[col].push((i, -a));
                    }
                    VarMap::Split { pos, neg } => {
                        cols[pos].push((i, a));
                        cols[neg].push((i, -a));
                    }
                }
            }
            b[i] = rhs;
            relations.push(lp.relations[i]);
        }
        for (k, &(col, width)) in bound_rows.iter().enumerate() {
            let i = m_user + k;
            cols[col].push((i, 1.0));
            b[i] = width;
            relations.push(Relation::Le);
        }

        // Slacks, then sign normalization.
        let mut slack_of_row: Vec<Option<usize>> = vec![None; m];
        for i in 0..m {
            let coef = match relations[i] {
                Relation::Le => 1.0,
                Relation::Ge => -1.0,
                Relation::Eq => continue,
            };
            slack_of_row[i] = Some(cols.len());
            cols.push(vec![(i, coef)]);
            kind.push(ColKind::Slack);
            cost.push(0.0);
        }
        let mut row_sign = vec![1.0; m];
        for i in 0..m {
            if b[i] < 0.0 {
                row_sign[i] = -1.0;
                b[i] = -b[i];
            }
        }
        for col in cols.iter_mut() {
            for entry in col.iter_mut() {
                entry.1 *= row_sign[entry.0];
            }
        }

        let mut initial_basis = vec![usize::MAX; m];
        for i in 0..m {
            if let Some(s) = slack_of_row[i] {
                if cols[s][0].1 > 0.0 {
                    initial_basis[i] = s;
                    continue;
                }
            }
            initial_basis[i] = cols.len();
            cols.push(vec![(i, 1.0)]);
            kind.push(ColKind::Artificial);
            cost.push(0.0);
        }

        Some(StandardForm {
            m,
            cols,
            kind,
            cost,
            b,
            initial_basis,
            var_map,
            row_sign,
            n_user_rows: m_user,
        })
    }

    fn ncols(&self) -> usize {
        self.cols.len()
    }
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

struct Simplex<'a> {
    sf: &'a StandardForm,
    tol: &'a ToleranceConfig,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    /// Row-major `m x m` basis inverse.
    binv: Vec<f64>,
    xb: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    max_iterations: usize,
    // scratch
    y: Vec<f64>,
    u: Vec<f64>,
}

impl<'a> Simplex<'a> {
    fn new(sf: &'a StandardForm, tol: &'a ToleranceConfig) -> Self {
        let m = sf.m;
        let mut is_basic = vec![false; sf.ncols()];
        for &c in &sf.initial_basis {
            is_basic[c] = true;
        }
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        Simplex {
            sf,
            tol,
            basis: sf.initial_basis.clone(),
            is_basic,
            binv,
            xb: sf.b.clone(),
            iterations: 0,
            since_refactor: 0,
            max_iterations: 10_000 + 50 * (m + sf.ncols()),
            y: vec![0.0; m],
            u: vec![0.0; m],
        }
    }

    fn compute_duals(&mut self, cost: &[f64]) {
        let m = self.sf.m;
        self.y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..m {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            let row = &self.binv[i * m..(i + 1) * m];
            for (yk, &bik) in self.y.iter_mut().zip(row) {
                *yk += cb * bik;
            }
        }
    }

    fn reduced_cost(&self, cost: &[f64], j: usize) -> f64 {
        cost[j] - self.sf.cols[j].iter().map(|&(r, v)| self.y[r] * v).sum::<f64>()
    }

    fn compute_column(&mut self, j: usize) {
        let m = self.sf.m;
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.u[i] = self.sf.cols[j].iter().map(|&(r, v)| row[r] * v).sum();
        }
    }

    fn pivot(&mut self, r: usize, j: usize) -> Result<()> {
        let m = self.sf.m;
        let ur = self.u[r];
        let theta = self.xb[r] / ur;
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta * self.u[i];
                if self.xb[i] < 0.0 && self.xb[i] > -self.tol.feas {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[r] = theta;

        let (before, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, after) = rest.split_at_mut(m);
        pivot_row.iter_mut().for_each(|v| *v /= ur);
        for (i, row) in before
            .chunks_exact_mut(m)
            .enumerate()
            .chain(after.chunks_exact_mut(m).enumerate().map(|(k, row)| (r + 1 + k, row)))
        {
            let f = self.u[i];
            if f != 0.0 {
                for (a, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *a -= f * p;
                }
            }
        }

        self.is_basic[self.basis[r]] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
        self.iterations += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor()?;
        }
        Ok(())
    }

    /// Recomputes the basis inverse from scratch by Gauss-Jordan elimination
    /// with partial pivoting, then the basic values.
    fn refactor(&mut self) -> Result<()> {
        let m = self.sf.m;
        let mut a = vec![0.0; m * m];
        for (k, &c) in self.basis.iter().enumerate() {
            for &(r, v) in &self.sf.cols[c] {
                a[r * m + k] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let (prow, pval) = (col..m)
                .map(|r| (r, a[r * m + col].abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pval < self.tol.pivot {
                return Err(Error::NumericalFailure {
                    message: format!("singular basis during refactorization (column {})", col),
                    iterations: self.iterations,
                    pivot: pval,
                });
            }
            if prow != col {
                for k in 0..m {
                    a.swap(prow * m + k, col * m + k);
                    inv.swap(prow * m + k, col * m + k);
                }
            }
            let p = a[col * m + col];
            for k in 0..m {
                a[col * m + k] /= p;
                inv[col * m + k] /= p;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[r * m + col];
                if f == 0.0 {
                    continue;
                }
                for k in 0..m {
                    a[r * m + k] -= f * a[col * m + k];
                    inv[r * m + k] -= f * inv[col * m + k];
                }
            }
        }
        self.binv = inv;
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            let v: f64 = row.iter().zip(&self.sf.b).map(|(x, b)| x * b).sum();
            let scale = 1.0 + self.sf.b.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if v < -1e-6 * scale {
                return Err(Error::NumericalFailure {
                    message: format!("basic variable in row {} lost feasibility ({:e})", i, v),
                    iterations: self.iterations,
                    pivot: 0.0,
                });
            }
            self.xb[i] = v.max(0.0);
        }
        self.since_refactor = 0;
        Ok(())
    }

    fn run(&mut self, cost: &[f64], phase_one: bool) -> Result<PhaseOutcome> {
        let n = self.sf.ncols();
        // Reduced costs are held tighter than primal feasibility so that
        // multipliers read off the final basis satisfy their own rows to
        // roughly the same accuracy as the primal.
        let dtol = self.tol.feas * 1e-2;
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::NumericalFailure {
                    message: "iteration limit reached".into(),
                    iterations: self.iterations,
                    pivot: 0.0,
                });
            }
            self.compute_duals(cost);
            let entering = (0..n).find(|&j| {
                !self.is_basic[j]
                    && (phase_one || self.sf.kind[j] != ColKind::Artificial)
                    && self.reduced_cost(cost, j) > dtol
            });
            let Some(j) = entering else {
                // Updated inverses drift after small pivots; only a fresh
                // factorization is trusted to certify optimality.
                if self.since_refactor > 0 {
                    self.refactor()?;
                    continue;
                }
                return Ok(PhaseOutcome::Optimal);
            };
            self.compute_column(j);

            let mut best: Option<f64> = None;
            for i in 0..self.sf.m {
                if self.u[i] > self.tol.pivot {
                    let ratio = self.xb[i] / self.u[i];
                    best = Some(best.map_or(ratio, |b: f64| b.min(ratio)));
                }
            }
            let Some(min_ratio) = best else {
                if self.since_refactor > 0 {
                    self.refactor()?;
                    continue;
                }
                return Ok(PhaseOutcome::Unbounded);
            };
            let band = min_ratio + RATIO_TIE * (1.0 + min_ratio.abs());
            let leave = (0..self.sf.m)
                .filter(|&i| self.u[i] > self.tol.pivot && self.xb[i] / self.u[i] <= band)
                .min_by_key(|&i| self.basis[i])
                .expect("ratio test found a row");
            self.pivot(leave, j)?;
        }
    }

    /// Pivots basic artificials (all at zero after a feasible phase one) out
    /// of the basis where some real column can replace them.
    fn expel_artificials(&mut self) -> Result<()> {
        let m = self.sf.m;
        for r in 0..m {
            if self.sf.kind[self.basis[r]] != ColKind::Artificial {
                continue;
            }
            let row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
            let candidate = (0..self.sf.ncols()).find(|&j| {
                !self.is_basic[j]
                    && self.sf.kind[j] != ColKind::Artificial
                    && self.sf.cols[j].iter().map(|&(k, v)| row[k] * v).sum::<f64>().abs() > 1e-9
            });
            if let Some(j) = candidate {
                self.compute_column(j);
                self.xb[r] = 0.0;
                self.pivot(r, j)?;
            }
        }
        Ok(())
    }
}

/// Solves `lp` to optimality or proves it infeasible/unbounded.
pub fn solve_lp(lp: &LinearProgram, tol: &ToleranceConfig) -> Result<LpSolution> {
    lp.check_dimensions()?;
    if log::log_enabled!(log::Level::Trace) {
        trace!("solving LP:\n{}", lp.to_text());
    }
    let Some(sf) = StandardForm::build(lp) else {
        return Ok(LpSolution::without_values(LpStatus::Infeasible, 0));
    };
    let mut spx = Simplex::new(&sf, tol);

    if sf.kind.contains(&ColKind::Artificial) {
        let phase_cost: Vec<f64> = sf
            .kind
            .iter()
            .map(|&k| if k == ColKind::Artificial { -1.0 } else { 0.0 })
            .collect();
        match spx.run(&phase_cost, true)? {
            PhaseOutcome::Optimal => {}
            PhaseOutcome::Unbounded => unreachable!("phase one is bounded above by zero"),
        }
        let infeas: f64 = (0..sf.m)
            .filter(|&i| sf.kind[spx.basis[i]] == ColKind::Artificial)
            .map(|i| spx.xb[i])
            .sum();
        let scale = 1.0 + sf.b.iter().fold(0.0f64, |a, b| a.max(*b));
        if infeas > tol.feas * scale {
            return Ok(LpSolution::without_values(LpStatus::Infeasible, spx.iterations));
        }
        spx.expel_artificials()?;
    }

    if let PhaseOutcome::Unbounded = spx.run(&sf.cost, false)? {
        return Ok(LpSolution::without_values(LpStatus::Unbounded, spx.iterations));
    }
    spx.compute_duals(&sf.cost);

    let mut xs = vec![0.0; sf.ncols()];
    for (i, &c) in spx.basis.iter().enumerate() {
        xs[c] = spx.xb[i];
    }
    let primal: Vec<f64> = sf
        .var_map
        .iter()
        .map(|map| match *map {
            VarMap::Fixed(v) => v,
            VarMap::Shifted { col, offset } => offset + xs[col],
            VarMap::Reflected { col, offset } => offset - xs[col],
            VarMap::Split { pos, neg } => xs[pos] - xs[neg],
        })
        .collect();
    let dual: Vec<f64> = (0..sf.n_user_rows).map(|i| spx.y[i] * sf.row_sign[i]).collect();
    let objective: f64 = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
    let dual_objective = dual_objective(lp, &dual);

    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual,
        objective,
        dual_objective,
        iterations: spx.iterations,
    })
}

/// `y·b` plus the bound terms that price out each column's reduced cost.
fn dual_objective(lp: &LinearProgram, y: &[f64]) -> f64 {
    let mut total: f64 = y.iter().zip(&lp.rhs).map(|(a, b)| a * b).sum();
    let scale = 1.0 + lp.objective.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    for j in 0..lp.num_vars() {
        let col_dot: f64 = lp.rows.iter().zip(y).map(|(row, yi)| row[j] * yi).sum();
        let reduced = lp.objective[j] - col_dot;
        if reduced.abs() <= 1e-12 * scale {
            continue;
        }
        let (lo, hi) = lp.bounds[j];
        total += if reduced > 0.0 { reduced * hi } else { reduced * lo };
    }
    total
}
