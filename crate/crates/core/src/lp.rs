//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Problems here are tiny (at most a few dozen variables and a few hundred
//! rows), so a full tableau is the simplest thing that is also robust.

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-10;
const FEAS_EPS: f64 = 1e-7;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vars {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    /// Objective grows without bound along `ray` from a feasible point.
    Unbounded { ray: Vec<f64> },
    Infeasible,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            LpOutcome::Unbounded { .. } => Some(f64::INFINITY),
            LpOutcome::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Le,
    Eq,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    kind: Kind,
    rhs: f64,
}

/// `maximize c·x` subject to linear rows, with either `x ≥ 0` or free `x`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    n: usize,
    vars: Vars,
    objective: Vec<f64>,
    rows: Vec<Row>,
}

impl LinearProgram {
    pub fn new(n: usize, vars: Vars) -> Self {
        Self {
            n,
            vars,
            objective: vec![0.0; n],
            rows: Vec::new(),
        }
    }

    pub fn maximize(mut self, c: &[f64]) -> Self {
        assert_eq!(c.len(), self.n);
        self.objective = c.to_vec();
        self
    }

    pub fn set_objective(&mut self, c: &[f64]) {
        assert_eq!(c.len(), self.n);
        self.objective = c.to_vec();
    }

    /// Adds `a·x ≤ b`.
    pub fn le(mut self, a: &[f64], b: f64) -> Self {
        self.push_le(a, b);
        self
    }

    pub fn push_le(&mut self, a: &[f64], b: f64) {
        assert_eq!(a.len(), self.n);
        self.rows.push(Row {
            coeffs: a.to_vec(),
            kind: Kind::Le,
            rhs: b,
        });
    }

    /// Adds `a·x = b`.
    pub fn eq(mut self, a: &[f64], b: f64) -> Self {
        self.push_eq(a, b);
        self
    }

    pub fn push_eq(&mut self, a: &[f64], b: f64) {
        assert_eq!(a.len(), self.n);
        self.rows.push(Row {
            coeffs: a.to_vec(),
            kind: Kind::Eq,
            rhs: b,
        });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// Row-major constraint coefficients, `m × ncols`.
    t: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
    n_struct: usize,
    n_art_start: usize,
    ncols: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n_struct = match lp.vars {
            Vars::NonNegative => lp.n,
            Vars::Free => 2 * lp.n,
        };
        let n_slack = lp.rows.iter().filter(|r| r.kind == Kind::Le).count();
        let mut needs_art = Vec::with_capacity(lp.rows.len());
        for r in &lp.rows {
            needs_art.push(r.kind == Kind::Eq || r.rhs < 0.0);
        }
        let n_art = needs_art.iter().filter(|&&x| x).count();
        let n_art_start = n_struct + n_slack;
        let ncols = n_art_start + n_art;

        let mut t = Vec::with_capacity(lp.rows.len());
        let mut b = Vec::with_capacity(lp.rows.len());
        let mut basis = Vec::with_capacity(lp.rows.len());
        let mut slack = n_struct;
        let mut art = n_art_start;
        for (r, &art_needed) in lp.rows.iter().zip(&needs_art) {
            let mut row = vec![0.0; ncols];
            let sign = if r.rhs < 0.0 { -1.0 } else { 1.0 };
            for j in 0..lp.n {
                row[j] = sign * r.coeffs[j];
                if lp.vars == Vars::Free {
                    row[lp.n + j] = -sign * r.coeffs[j];
                }
            }
            let mut slack_col = None;
            if r.kind == Kind::Le {
                row[slack] = sign;
                slack_col = Some(slack);
                slack += 1;
            }
            if art_needed {
                row[art] = 1.0;
                basis.push(art);
                art += 1;
            } else {
                basis.push(slack_col.expect("le row without artificial has a slack"));
            }
            t.push(row);
            b.push(sign * r.rhs);
        }
        Self {
            t,
            b,
            basis,
            n_struct,
            n_art_start,
            ncols,
        }
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r = cost.to_vec();
        for (i, &bi) in self.basis.iter().enumerate() {
            let cb = cost[bi];
            if cb != 0.0 {
                for (rj, tij) in r.iter_mut().zip(&self.t[i]) {
                    *rj -= cb * tij;
                }
            }
        }
        r
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        self.b[row] /= p;
        let pivot_row = self.t[row].clone();
        let pivot_b = self.b[row];
        for i in 0..self.t.len() {
            if i == row {
                continue;
            }
            let f = self.t[i][col];
            if f != 0.0 {
                for (v, pv) in self.t[i].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.b[i] -= f * pivot_b;
                if self.b[i].abs() < 1e-14 {
                    self.b[i] = 0.0;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations for `cost` over columns `< allowed`.
    /// Returns `Err(entering column)` on unboundedness.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<(), usize> {
        for _ in 0..MAX_PIVOTS {
            let r = self.reduced_costs(cost);
            let scale = 1.0 + cost.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            let Some(enter) = (0..allowed).find(|&j| r[j] > COST_EPS * scale) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.t.len() {
                let a = self.t[i][enter];
                if a > PIVOT_EPS {
                    let ratio = self.b[i].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                            if ratio < lr && !tie || tie && self.basis[i] < self.basis[li] {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, enter),
                None => return Err(enter),
            }
        }
        Ok(())
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        if self.ncols > self.n_art_start {
            let mut cost = vec![0.0; self.ncols];
            for c in cost.iter_mut().skip(self.n_art_start) {
                *c = -1.0;
            }
            // Phase one is bounded above by zero; unboundedness cannot occur.
            let _ = self.optimize(&cost, self.ncols);
            let infeas: f64 = self
                .basis
                .iter()
                .zip(&self.b)
                .filter(|(&bi, _)| bi >= self.n_art_start)
                .map(|(_, &v)| v)
                .sum();
            let rhs_scale = 1.0 + self.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if infeas > FEAS_EPS * rhs_scale {
                return LpOutcome::Infeasible;
            }
            // Drive remaining (zero-level) artificials out of the basis.
            let mut i = 0;
            while i < self.t.len() {
                if self.basis[i] >= self.n_art_start {
                    let col = (0..self.n_art_start).find(|&j| self.t[i][j].abs() > PIVOT_EPS);
                    match col {
                        Some(j) => {
                            self.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            self.t.remove(i);
                            self.b.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }

        let mut cost = vec![0.0; self.ncols];
        for j in 0..lp.n {
            cost[j] = lp.objective[j];
            if lp.vars == Vars::Free {
                cost[lp.n + j] = -lp.objective[j];
            }
        }
        match self.optimize(&cost, self.n_art_start) {
            Ok(()) => {
                let full = self.primal();
                let x = self.structural(lp, &full);
                let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                LpOutcome::Optimal { x, value }
            }
            Err(enter) => {
                let mut dir = vec![0.0; self.ncols];
                dir[enter] = 1.0;
                for (i, &bi) in self.basis.iter().enumerate() {
                    dir[bi] = -self.t[i][enter];
                }
                LpOutcome::Unbounded {
                    ray: self.structural(lp, &dir),
                }
            }
        }
    }

    fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.ncols];
        for (i, &bi) in self.basis.iter().enumerate() {
            x[bi] = self.b[i];
        }
        x
    }

    fn structural(&self, lp: &LinearProgram, full: &[f64]) -> Vec<f64> {
        debug_assert!(self.n_struct <= full.len());
        match lp.vars {
            Vars::NonNegative => full[..lp.n].to_vec(),
            Vars::Free => (0..lp.n).map(|j| full[j] - full[lp.n + j]).collect(),
        }
    }
}
