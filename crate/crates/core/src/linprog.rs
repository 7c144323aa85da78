//! Dense two-phase simplex solver for small linear programs.
//!
//! Problems have the form
//!
//! ```text
//! minimize  cᵀx
//! subject   Gx ≤ h,  lower ≤ x ≤ upper   (bounds optional per variable)
//! ```
//!
//! Internally every variable is split into a non-negative pair `x = x⁺ − x⁻`
//! and every finite bound becomes an extra row, so the solver only ever sees
//! `G'x ≤ h'` with free `x`. The optimal tableau yields one multiplier per row,
//! which is returned as an optimality certificate (see [`LpResult::certificate`]).
//!
//! Pivoting uses Dantzig's rule and falls back to Bland's rule after
//! `5·(m+n)` consecutive degenerate pivots.

use log::trace;
use thiserror::Error;

/// Pivot elements smaller than this are never used.
pub const PIVOT_TOL: f64 = 1e-10;
/// Phase-1 optimum above this value means the program is infeasible.
pub const INFEASIBILITY_TOL: f64 = 1e-8;

const REDUCED_COST_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("inconsistent dimensions: {0}")]
    Shape(String),
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Vec<f64>>,
    pub bounds: Vec<f64>,
    pub lower: Vec<Option<f64>>,
    pub upper: Vec<Option<f64>>,
}

impl LinearProgram {
    /// Minimize `objective · x` over free variables, with no constraints yet.
    pub fn minimize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            bounds: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds the row `coeffs · x ≤ rhs`.
    pub fn leq(mut self, coeffs: Vec<f64>, rhs: f64) -> Self {
        self.push_leq(coeffs, rhs);
        self
    }

    pub fn push_leq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.constraints.push(coeffs);
        self.bounds.push(rhs);
    }

    /// Adds the row `coeffs · x ≥ rhs`.
    pub fn push_geq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.push_leq(coeffs.into_iter().map(|c| -c).collect(), -rhs);
    }

    pub fn with_lower(mut self, var: usize, value: f64) -> Self {
        self.lower[var] = Some(value);
        self
    }

    pub fn with_upper(mut self, var: usize, value: f64) -> Self {
        self.upper[var] = Some(value);
        self
    }

    /// Constrains every variable to be non-negative.
    pub fn nonnegative(mut self) -> Self {
        self.lower.iter_mut().for_each(|l| *l = Some(0.0));
        self
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if self.constraints.len() != self.bounds.len() {
            return Err(LpError::Shape(format!(
                "{} constraint rows but {} bounds",
                self.constraints.len(),
                self.bounds.len()
            )));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Shape("variable bound vectors".into()));
        }
        if let Some(row) = self.constraints.iter().find(|r| r.len() != n) {
            return Err(LpError::Shape(format!(
                "row of length {} for {} variables",
                row.len(),
                n
            )));
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        if self.constraints.iter().flatten().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("constraint matrix"));
        }
        if self.bounds.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite("bounds"));
        }
        if self
            .lower
            .iter()
            .chain(self.upper.iter())
            .flatten()
            .any(|v| !v.is_finite())
        {
            return Err(LpError::NonFinite("variable bounds"));
        }
        Ok(())
    }

    /// All rows including those generated from variable bounds, in the order
    /// `G`, lower bounds, upper bounds. Multipliers in [`LpResult::duals`] use
    /// the same order.
    pub fn expanded_rows(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let n = self.num_vars();
        let mut rows = self.constraints.clone();
        let mut rhs = self.bounds.clone();
        for (j, l) in self.lower.iter().enumerate() {
            if let Some(l) = l {
                let mut r = vec![0.0; n];
                r[j] = -1.0;
                rows.push(r);
                rhs.push(-l);
            }
        }
        for (j, u) in self.upper.iter().enumerate() {
            if let Some(u) = u {
                let mut r = vec![0.0; n];
                r[j] = 1.0;
                rows.push(r);
                rhs.push(*u);
            }
        }
        (rows, rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Present iff `status == Optimal`.
    pub solution: Option<Vec<f64>>,
    /// `+inf` when infeasible, `-inf` when unbounded.
    pub objective_value: f64,
    /// Non-negative row multipliers (rows as in [`LinearProgram::expanded_rows`]).
    pub duals: Option<Vec<f64>>,
    pub iterations: usize,
}

/// Residuals of the KKT conditions at a reported optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    /// `max(Gx − h)⁺` over all rows.
    pub primal_infeasibility: f64,
    /// `‖c + Gᵀy‖∞`.
    pub stationarity: f64,
    /// `max(−y)⁺`.
    pub dual_infeasibility: f64,
    /// `max |yᵢ (hᵢ − Gᵢx)|`.
    pub complementarity: f64,
    /// `|cᵀx + hᵀy|`.
    pub duality_gap: f64,
}

impl LpResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// KKT residuals for an optimal result, `None` otherwise.
    pub fn certificate(&self, lp: &LinearProgram) -> Option<Certificate> {
        let x = self.solution.as_ref()?;
        let y = self.duals.as_ref()?;
        let (rows, rhs) = lp.expanded_rows();
        let n = lp.num_vars();
        let mut primal = 0.0f64;
        let mut comp = 0.0f64;
        let mut grad = lp.objective.clone();
        let mut dual_obj = 0.0;
        for ((row, &h), &yi) in rows.iter().zip(&rhs).zip(y) {
            let gx: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            primal = primal.max(gx - h);
            comp = comp.max((yi * (h - gx)).abs());
            for j in 0..n {
                grad[j] += row[j] * yi;
            }
            dual_obj += h * yi;
        }
        let cx: f64 = lp.objective.iter().zip(x).map(|(a, b)| a * b).sum();
        Some(Certificate {
            primal_infeasibility: primal.max(0.0),
            stationarity: grad.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            dual_infeasibility: y.iter().fold(0.0f64, |m, v| m.max(-v)),
            complementarity: comp,
            duality_gap: (cx + dual_obj).abs(),
        })
    }
}

struct Tableau {
    /// `rows × (cols + 1)`, rhs in the last column.
    a: Vec<f64>,
    /// Reduced costs, `-objective` in the last entry.
    cost: Vec<f64>,
    basis: Vec<usize>,
    rows: usize,
    cols: usize,
    /// Columns that may never enter the basis.
    blocked: Vec<bool>,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.cols + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.a[i * (self.cols + 1) + self.cols]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.a[pr * w + pc];
        for j in 0..w {
            self.a[pr * w + j] /= p;
        }
        self.a[pr * w + pc] = 1.0;
        let (before, rest) = self.a.split_at_mut(pr * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[pc];
            if f != 0.0 {
                for j in 0..w {
                    row[j] -= f * prow[j];
                }
                row[pc] = 0.0;
            }
        }
        let f = self.cost[pc];
        if f != 0.0 {
            for j in 0..w {
                self.cost[j] -= f * prow[j];
            }
            self.cost[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Resets the cost row for the given column costs and the current basis.
    fn price(&mut self, costs: &[f64]) {
        let w = self.cols + 1;
        self.cost = vec![0.0; w];
        self.cost[..self.cols].copy_from_slice(&costs[..self.cols]);
        for i in 0..self.rows {
            let cb = costs[self.basis[i]];
            if cb != 0.0 {
                for j in 0..w {
                    self.cost[j] -= cb * self.a[i * w + j];
                }
            }
        }
    }

    fn run(&mut self, iterations: &mut usize, limit: usize) -> Result<PhaseOutcome, LpError> {
        let bland_after = 5 * (self.rows + self.cols);
        let mut degenerate_run = 0usize;
        let mut bland = false;
        loop {
            if *iterations >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            let entering = if bland {
                (0..self.cols)
                    .find(|&j| !self.blocked[j] && self.cost[j] < -REDUCED_COST_TOL)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..self.cols {
                    let d = self.cost[j];
                    if !self.blocked[j] && d < -REDUCED_COST_TOL && best.is_none_or(|(_, b)| d < b)
                    {
                        best = Some((j, d));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(pc) = entering else {
                return Ok(PhaseOutcome::Optimal);
            };

            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let aij = self.at(i, pc);
                if aij > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / aij;
                    leaving = match leaving {
                        None => Some((i, ratio)),
                        Some((k, r)) => {
                            let better = if ratio < r - 1e-12 {
                                true
                            } else if ratio <= r + 1e-12 {
                                if bland {
                                    self.basis[i] < self.basis[k]
                                } else {
                                    aij > self.at(k, pc)
                                }
                            } else {
                                false
                            };
                            if better {
                                Some((i, ratio))
                            } else {
                                Some((k, r))
                            }
                        }
                    };
                }
            }
            let Some((pr, ratio)) = leaving else {
                return Ok(PhaseOutcome::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
                if !bland && degenerate_run > bland_after {
                    trace!("switching to Bland's rule after {degenerate_run} degenerate pivots");
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(pr, pc);
            *iterations += 1;
            if log::log_enabled!(log::Level::Trace) {
                trace!(
                    "pivot {} (row {pr}, col {pc}), objective {:.6e}, basis {:?}",
                    iterations,
                    -self.cost[self.cols],
                    self.basis
                );
            }
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.cols + 1;
        self.a.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.rows -= 1;
    }
}

/// Solves `lp`. Infeasible and unbounded programs are reported through
/// [`LpStatus`]; malformed input is an error.
pub fn solve(lp: &LinearProgram) -> Result<LpResult, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let (rows, rhs) = lp.expanded_rows();
    let m = rows.len();

    // Columns: x⁺ (n), x⁻ (n), slacks (m), artificials (one per negative rhs row).
    let negative: Vec<usize> = (0..m).filter(|&i| rhs[i] < 0.0).collect();
    let slack0 = 2 * n;
    let art0 = slack0 + m;
    let cols = art0 + negative.len();
    let w = cols + 1;
    let mut a = vec![0.0; m * w];
    let mut basis = vec![0usize; m];
    let mut art_of_row = vec![None; m];
    for (k, &i) in negative.iter().enumerate() {
        art_of_row[i] = Some(art0 + k);
    }
    for i in 0..m {
        let sign = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
        let row = &mut a[i * w..(i + 1) * w];
        for j in 0..n {
            row[j] = sign * rows[i][j];
            row[n + j] = -sign * rows[i][j];
        }
        row[slack0 + i] = sign;
        row[cols] = sign * rhs[i];
        match art_of_row[i] {
            Some(c) => {
                row[c] = 1.0;
                basis[i] = c;
            }
            None => basis[i] = slack0 + i,
        }
    }

    let mut t = Tableau {
        a,
        cost: Vec::new(),
        basis,
        rows: m,
        cols,
        blocked: vec![false; cols],
    };
    let limit = 200 * (m + cols) + 1000;
    let mut iterations = 0usize;

    if !negative.is_empty() {
        let mut phase1 = vec![0.0; cols];
        phase1[art0..].iter_mut().for_each(|c| *c = 1.0);
        t.price(&phase1);
        t.run(&mut iterations, limit)?;
        let infeasibility = -t.cost[cols];
        trace!("phase 1 finished with infeasibility {infeasibility:e}");
        if infeasibility > INFEASIBILITY_TOL {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                solution: None,
                objective_value: f64::INFINITY,
                duals: None,
                iterations,
            });
        }
        // Drive remaining artificials out of the basis.
        let mut r = 0;
        while r < t.rows {
            if t.basis[r] >= art0 {
                let best = (0..art0)
                    .map(|j| (j, t.at(r, j).abs()))
                    .filter(|&(_, v)| v > PIVOT_TOL)
                    .max_by(|x, y| x.1.total_cmp(&y.1));
                match best {
                    Some((j, _)) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => t.remove_row(r),
                }
            } else {
                r += 1;
            }
        }
        t.blocked[art0..].iter_mut().for_each(|b| *b = true);
    }

    let mut costs = vec![0.0; cols];
    for j in 0..n {
        costs[j] = lp.objective[j];
        costs[n + j] = -lp.objective[j];
    }
    t.price(&costs);
    let outcome = t.run(&mut iterations, limit)?;
    if let PhaseOutcome::Unbounded = outcome {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            solution: None,
            objective_value: f64::NEG_INFINITY,
            duals: None,
            iterations,
        });
    }

    let mut values = vec![0.0; cols];
    for i in 0..t.rows {
        values[t.basis[i]] = t.rhs(i);
    }
    let x: Vec<f64> = (0..n).map(|j| values[j] - values[n + j]).collect();
    let duals: Vec<f64> = (0..m).map(|i| t.cost[slack0 + i].max(0.0)).collect();
    let objective_value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpResult {
        status: LpStatus::Optimal,
        solution: Some(x),
        objective_value,
        duals: Some(duals),
        iterations,
    })
}
