//! Dense two-phase simplex (Bland entering rule, Harris ratio test, LU
//! refactorization) with certified optimality.
//!
//! Problems are stated as `maximize cᵀx` subject to `A_le x ≤ b_le`,
//! `A_eq x = b_eq` and per-variable bounds. Before an optimal solution is
//! returned, primal feasibility, dual feasibility and the duality gap are
//! re-checked against the original data.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("LP dimension mismatch: {0}")]
    Dimension(String),
    #[error("LP data contains a non-finite value")]
    NonFinite,
    #[error("simplex exceeded {iterations} iterations")]
    IterationLimit { iterations: usize },
    #[error("LP certificate check failed (primal {primal:.2e}, dual {dual:.2e}, gap {gap:.2e})")]
    Certificate { primal: f64, dual: f64, gap: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    NonNegative,
    Free,
    /// `lo ≤ x ≤ hi`; either end may be infinite.
    Range(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub bounds: Vec<Bound>,
    pub le: Vec<(Vec<f64>, f64)>,
    pub eq: Vec<(Vec<f64>, f64)>,
}

impl LinearProgram {
    /// A maximization problem with all variables non-negative.
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self { objective, bounds: vec![Bound::NonNegative; n], le: vec![], eq: vec![] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn bound(mut self, j: usize, b: Bound) -> Self {
        self.bounds[j] = b;
        self
    }

    pub fn le(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.le.push((row, rhs));
        self
    }

    pub fn eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.eq.push((row, rhs));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Primal solution (meaningful only when optimal).
    pub x: Vec<f64>,
    pub value: f64,
    /// Multipliers of the `≤` rows (non-negative) followed by the `=` rows.
    pub dual: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptions {
    pub pivot_tol: f64,
    pub certificate_tol: f64,
    pub max_iterations: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self { pivot_tol: 1e-10, certificate_tol: 1e-9, max_iterations: 50_000 }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Le,
    Eq,
}

struct StdRow {
    a: Vec<f64>,
    b: f64,
    kind: Kind,
}

struct Tableau {
    rows: usize,
    width: usize,
    t: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    /// Initial tableau, used to refactor away accumulated rounding.
    t0: Vec<f64>,
    /// Original row of each current tableau row.
    row_ids: Vec<usize>,
    /// Harris feasibility slack.
    delta: f64,
}

/// Largest number of refactor-and-resume rounds per phase.
const MAX_REFACTORS: usize = 4;
/// Primal feasibility slack of the Harris ratio test; the refactored retry
/// uses the tight value so the returned point is feasible to the certificate.
const HARRIS_DELTA: f64 = 1e-9;
const HARRIS_DELTA_TIGHT: f64 = 1e-12;
/// Consecutive degenerate pivots before switching to Bland's leaving rule.
const STALL_PIVOTS: usize = 50;

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.t[r * self.width + self.width - 1]
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let p = self.t[r * w + q];
        let (head, rest) = self.t.split_at_mut(r * w);
        let (prow, tail) = rest.split_at_mut(w);
        prow.iter_mut().for_each(|v| *v /= p);
        prow[q] = 1.0;
        for row in head.chunks_exact_mut(w).chain(tail.chunks_exact_mut(w)) {
            let f = row[q];
            if f != 0.0 {
                row.iter_mut().zip(prow.iter()).for_each(|(v, pv)| *v -= f * pv);
                row[q] = 0.0;
            }
        }
        let f = self.obj[q];
        if f != 0.0 {
            self.obj.iter_mut().zip(prow.iter()).for_each(|(v, pv)| *v -= f * pv);
            self.obj[q] = 0.0;
        }
        self.basis[r] = q;
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width;
        self.t.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.row_ids.remove(r);
        self.rows -= 1;
    }

    /// Objective row `c_Bᵀ B⁻¹ A - c` for the current tableau.
    fn price(&mut self, cost: &[f64]) {
        let w = self.width;
        self.obj = (0..w).map(|j| if j + 1 < w { -cost[j] } else { 0.0 }).collect();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for c in 0..w {
                    self.obj[c] += cb * self.t[r * w + c];
                }
            }
        }
    }

    /// Rebuilds `B⁻¹ [A | b]` from the initial data. Returns `false` and
    /// leaves the tableau untouched if the basis matrix is singular.
    fn refactor(&mut self, cost: &[f64]) -> bool {
        let (m, w) = (self.rows, self.width);
        let b = DMatrix::from_fn(m, m, |i, k| self.t0[self.row_ids[i] * w + self.basis[k]]);
        let rhs = DMatrix::from_fn(m, w, |i, c| self.t0[self.row_ids[i] * w + c]);
        let Some(sol) = b.lu().solve(&rhs) else {
            return false;
        };
        if sol.iter().any(|v| !v.is_finite()) {
            return false;
        }
        for i in 0..m {
            for c in 0..w {
                self.t[i * w + c] = sol[(i, c)];
            }
            self.t[i * w + self.basis[i]] = 1.0;
        }
        self.price(cost);
        true
    }

    /// Leaving row by a Harris two-pass ratio test: the largest pivot among
    /// rows whose ratio is within the feasibility slack of the minimum.
    fn harris_row(&self, q: usize, pivot_tol: f64, delta: f64) -> Option<usize> {
        let mut theta = f64::INFINITY;
        for r in 0..self.rows {
            let a = self.at(r, q);
            if a > pivot_tol {
                theta = theta.min((self.rhs(r).max(0.0) + delta) / a);
            }
        }
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..self.rows {
            let a = self.at(r, q);
            if a > pivot_tol && self.rhs(r).max(0.0) / a <= theta {
                let better = match leave {
                    None => true,
                    Some((lr, la)) => a > la || a == la && self.basis[r] < self.basis[lr],
                };
                if better {
                    leave = Some((r, a));
                }
            }
        }
        leave.map(|(r, _)| r)
    }

    /// Leaving row by the textbook minimum ratio, ties to the lowest basic index.
    fn bland_row(&self, q: usize, pivot_tol: f64) -> Option<usize> {
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..self.rows {
            let a = self.at(r, q);
            if a > pivot_tol {
                let ratio = self.rhs(r).max(0.0) / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio.abs());
                        if ratio < lratio && !tie || tie && self.basis[r] < self.basis[lr] {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
        }
        leave.map(|(r, _)| r)
    }

    /// Runs primal simplex; returns `Ok(false)` on unboundedness.
    ///
    /// Entering column by Bland's rule. The leaving row comes from the
    /// numerically safer Harris test until a run of degenerate pivots
    /// suggests stalling; then Bland's leaving rule guarantees termination.
    fn run(
        &mut self,
        allowed: usize,
        opts: &LpOptions,
        cost_scale: f64,
        iterations: &mut usize,
    ) -> Result<bool, LpError> {
        let eps = opts.pivot_tol * cost_scale;
        let mut degenerate = 0;
        loop {
            let Some(q) = (0..allowed).find(|&j| self.obj[j] < -eps) else {
                return Ok(true);
            };
            let row = if degenerate < STALL_PIVOTS {
                self.harris_row(q, opts.pivot_tol, self.delta)
            } else {
                self.bland_row(q, opts.pivot_tol)
            };
            let Some(r) = row else {
                return Ok(false);
            };
            *iterations += 1;
            if *iterations > opts.max_iterations {
                return Err(LpError::IterationLimit { iterations: *iterations });
            }
            if self.rhs(r) <= self.delta {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, q);
        }
    }

    /// Dual simplex pivots until every basic value is non-negative, keeping
    /// the reduced costs of the `allowed` columns non-negative.
    fn dual_run(&mut self, allowed: usize, opts: &LpOptions, iterations: &mut usize) -> Result<(), LpError> {
        loop {
            let leave = (0..self.rows)
                .filter(|&r| self.rhs(r) < -self.delta)
                .min_by(|&a, &b| self.rhs(a).total_cmp(&self.rhs(b)).then(self.basis[a].cmp(&self.basis[b])));
            let Some(r) = leave else {
                return Ok(());
            };
            let enter = (0..allowed)
                .filter(|&j| self.at(r, j) < -opts.pivot_tol)
                .map(|j| (j, self.obj[j].max(0.0) / -self.at(r, j)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            let Some((q, _)) = enter else {
                // Row proves infeasibility at this precision; the certificate reports it.
                return Ok(());
            };
            *iterations += 1;
            if *iterations > opts.max_iterations {
                return Err(LpError::IterationLimit { iterations: *iterations });
            }
            self.pivot(r, q);
        }
    }

    /// Simplex with periodic refactorization until the clean tableau is
    /// both primal and dual feasible.
    fn solve(
        &mut self,
        cost: &[f64],
        allowed: usize,
        opts: &LpOptions,
        cost_scale: f64,
        iterations: &mut usize,
        refactor: bool,
    ) -> Result<bool, LpError> {
        if !refactor {
            return self.run(allowed, opts, cost_scale, iterations);
        }
        let eps = opts.pivot_tol * cost_scale;
        for _ in 0..MAX_REFACTORS {
            if !self.run(allowed, opts, cost_scale, iterations)? {
                return Ok(false);
            }
            if !self.refactor(cost) {
                return Ok(true);
            }
            self.dual_run(allowed, opts, iterations)?;
            let primal = (0..self.rows).all(|r| self.rhs(r) >= -self.delta);
            if primal && (0..allowed).all(|j| self.obj[j] >= -eps) {
                return Ok(true);
            }
        }
        self.run(allowed, opts, cost_scale, iterations)
    }
}

pub fn lp_solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp_solve_with(lp, &LpOptions::default())
}

/// Solves `lp`. A first pass works on the updated tableau alone; if its
/// answer fails the certificate, the solve is repeated with refactorization
/// from the original data.
pub fn lp_solve_with(lp: &LinearProgram, opts: &LpOptions) -> Result<LpSolution, LpError> {
    match solve_pass(lp, opts, false) {
        Err(LpError::Certificate { .. }) => solve_pass(lp, opts, true),
        other => other,
    }
}

fn solve_pass(lp: &LinearProgram, opts: &LpOptions, refactor: bool) -> Result<LpSolution, LpError> {
    let n = lp.num_vars();
    if lp.bounds.len() != n {
        return Err(LpError::Dimension(format!("{} bounds for {} variables", lp.bounds.len(), n)));
    }
    for (row, rhs) in lp.le.iter().chain(&lp.eq) {
        if row.len() != n {
            return Err(LpError::Dimension(format!("row of length {} for {} variables", row.len(), n)));
        }
        if !rhs.is_finite() || row.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite);
        }
    }
    if lp.objective.iter().any(|v| !v.is_finite()) {
        return Err(LpError::NonFinite);
    }

    // Map every original variable to non-negative standard columns.
    let mut map: Vec<(Vec<(usize, f64)>, f64)> = Vec::with_capacity(n);
    let mut cols = 0;
    let mut bound_rows: Vec<(usize, f64)> = vec![];
    for b in &lp.bounds {
        match *b {
            Bound::NonNegative => {
                map.push((vec![(cols, 1.0)], 0.0));
                cols += 1;
            }
            Bound::Range(lo, hi) if lo.is_finite() => {
                if hi < lo {
                    return Err(LpError::Dimension(format!("empty bound [{lo}, {hi}]")));
                }
                map.push((vec![(cols, 1.0)], lo));
                if hi.is_finite() {
                    bound_rows.push((cols, hi - lo));
                }
                cols += 1;
            }
            Bound::Range(_, hi) if hi.is_finite() => {
                map.push((vec![(cols, -1.0)], hi));
                cols += 1;
            }
            _ => {
                map.push((vec![(cols, 1.0), (cols + 1, -1.0)], 0.0));
                cols += 2;
            }
        }
    }
    let transform = |row: &[f64], rhs: f64| {
        let mut a = vec![0.0; cols];
        let mut b = rhs;
        for (j, (parts, off)) in map.iter().enumerate() {
            for &(c, s) in parts {
                a[c] += s * row[j];
            }
            b -= row[j] * off;
        }
        (a, b)
    };
    let mut rows: Vec<StdRow> = Vec::new();
    for (row, rhs) in &lp.le {
        let (a, b) = transform(row, *rhs);
        rows.push(StdRow { a, b, kind: Kind::Le });
    }
    for (row, rhs) in &lp.eq {
        let (a, b) = transform(row, *rhs);
        rows.push(StdRow { a, b, kind: Kind::Eq });
    }
    for &(c, ub) in &bound_rows {
        let mut a = vec![0.0; cols];
        a[c] = 1.0;
        rows.push(StdRow { a, b: ub, kind: Kind::Le });
    }
    // Equilibrate rows so pivot and feasibility tolerances are scale-free.
    let row_scale: Vec<f64> = rows
        .iter_mut()
        .map(|r| {
            let s = r.a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let s = if s > 0.0 { s } else { 1.0 };
            r.a.iter_mut().for_each(|v| *v /= s);
            r.b /= s;
            s
        })
        .collect();
    let (c_std, c_const) = {
        let (c, b) = transform(&lp.objective, 0.0);
        (c, -b)
    };

    // Column layout: structural | slacks | artificials | rhs.
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.kind == Kind::Le).count();
    let needs_art: Vec<bool> = rows.iter().map(|r| r.kind == Kind::Eq || r.b < 0.0).collect();
    let n_art = needs_art.iter().filter(|&&v| v).count();
    let art0 = cols + n_slack;
    let width = art0 + n_art + 1;
    let mut t = vec![0.0; m * width];
    let mut basis = vec![0; m];
    let mut slack_col = vec![usize::MAX; m];
    let mut art_col = vec![usize::MAX; m];
    let mut negated = vec![false; m];
    let (mut s_next, mut a_next) = (cols, art0);
    for (i, r) in rows.iter().enumerate() {
        let sign = if r.b < 0.0 { -1.0 } else { 1.0 };
        negated[i] = sign < 0.0;
        let base = i * width;
        for (c, v) in r.a.iter().enumerate() {
            t[base + c] = sign * v;
        }
        t[base + width - 1] = sign * r.b;
        if r.kind == Kind::Le {
            t[base + s_next] = sign;
            slack_col[i] = s_next;
            basis[i] = s_next;
            s_next += 1;
        }
        if needs_art[i] {
            t[base + a_next] = 1.0;
            art_col[i] = a_next;
            basis[i] = a_next;
            a_next += 1;
        }
    }
    let mut tab = Tableau { rows: m, width, t0: t.clone(), t, obj: vec![0.0; width], basis, row_ids: (0..m).collect(), delta: if refactor { HARRIS_DELTA_TIGHT } else { HARRIS_DELTA } };
    let mut iterations = 0;
    let b_scale = 1.0 + rows.iter().map(|r| r.b.abs()).fold(0.0, f64::max);

    // Phase I: maximize -Σ artificials.
    if n_art > 0 {
        let cost: Vec<f64> = (0..width - 1).map(|j| if j >= art0 { -1.0 } else { 0.0 }).collect();
        tab.price(&cost);
        tab.solve(&cost, width - 1, opts, 1.0, &mut iterations, refactor)?;
        if tab.obj[width - 1] < -opts.certificate_tol * b_scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: vec![],
                value: f64::NAN,
                dual: vec![],
                iterations,
            });
        }
        // Drive artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows {
            if tab.basis[r] >= art0 {
                let best = (0..art0)
                    .map(|j| (j, tab.at(r, j).abs()))
                    .filter(|&(_, v)| v > opts.pivot_tol)
                    .max_by(|a, b| a.1.total_cmp(&b.1));
                match best {
                    Some((j, _)) => tab.pivot(r, j),
                    None => {
                        tab.remove_row(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase II.
    let cost: Vec<f64> = (0..width - 1).map(|j| if j < cols { c_std[j] } else { 0.0 }).collect();
    let cost_scale = 1.0 + c_std.iter().map(|v| v.abs()).fold(0.0, f64::max);
    tab.price(&cost);
    if !tab.solve(&cost, art0, opts, cost_scale, &mut iterations, refactor)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x: vec![],
            value: f64::INFINITY,
            dual: vec![],
            iterations,
        });
    }

    let mut xs = vec![0.0; cols];
    for r in 0..tab.rows {
        if tab.basis[r] < cols {
            xs[tab.basis[r]] = tab.rhs(r).max(0.0);
        }
    }
    let y: Vec<f64> = (0..m)
        .map(|i| match rows[i].kind {
            Kind::Le => tab.obj[slack_col[i]],
            Kind::Eq => {
                let d = tab.obj[art_col[i]];
                if negated[i] {
                    -d
                } else {
                    d
                }
            }
        })
        .collect();

    certify(&rows, &c_std, &xs, &y, opts.certificate_tol)?;

    let x: Vec<f64> = map
        .iter()
        .map(|(parts, off)| off + parts.iter().map(|&(c, s)| s * xs[c]).sum::<f64>())
        .collect();
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>();
    debug_assert!((value - (c_const + c_std.iter().zip(&xs).map(|(c, v)| c * v).sum::<f64>())).abs() < 1e-6 * (1.0 + value.abs()));
    let y: Vec<f64> = y.iter().zip(&row_scale).map(|(v, s)| v / s).collect();
    let n_le = lp.le.len();
    let mut dual = y[..n_le].to_vec();
    dual.extend_from_slice(&y[n_le..n_le + lp.eq.len()]);
    Ok(LpSolution { status: LpStatus::Optimal, x, value, dual, iterations })
}

fn certify(rows: &[StdRow], c: &[f64], x: &[f64], y: &[f64], tol: f64) -> Result<(), LpError> {
    let mut primal: f64 = 0.0;
    let mut dual: f64 = 0.0;
    for v in x {
        primal = primal.max(-v);
    }
    let mut by = 0.0;
    let mut gap_scale: f64 = 1.0;
    for (r, &yi) in rows.iter().zip(y) {
        let ax: f64 = r.a.iter().zip(x).map(|(a, v)| a * v).sum();
        let scale = 1.0 + r.b.abs() + r.a.iter().zip(x).map(|(a, v)| (a * v).abs()).sum::<f64>();
        let viol = match r.kind {
            Kind::Le => (ax - r.b).max(0.0),
            Kind::Eq => (ax - r.b).abs(),
        };
        primal = primal.max(viol / scale);
        if r.kind == Kind::Le {
            dual = dual.max(-yi / (1.0 + yi.abs()));
        }
        by += r.b * yi;
        gap_scale = gap_scale.max((r.b * yi).abs());
    }
    for (j, &cj) in c.iter().enumerate() {
        let aty: f64 = rows.iter().zip(y).map(|(r, yi)| r.a[j] * yi).sum();
        let scale = 1.0 + cj.abs() + rows.iter().zip(y).map(|(r, yi)| (r.a[j] * yi).abs()).sum::<f64>();
        dual = dual.max((cj - aty) / scale);
    }
    let cx: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
    gap_scale = gap_scale.max(cx.abs());
    let gap = (cx - by).abs() / gap_scale;
    if primal > tol || dual > tol || gap > tol {
        return Err(LpError::Certificate { primal, dual, gap });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18
        let lp = LinearProgram::maximize(vec![3.0, 5.0])
            .le(vec![1.0, 0.0], 4.0)
            .le(vec![0.0, 2.0], 12.0)
            .le(vec![3.0, 2.0], 18.0);
        let s = lp_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 36.0).abs() < 1e-9);
        assert!((s.x[0] - 2.0).abs() < 1e-9 && (s.x[1] - 6.0).abs() < 1e-9);
        assert!((s.dual[0]).abs() < 1e-9 && (s.dual[1] - 1.5).abs() < 1e-9 && (s.dual[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram::maximize(vec![1.0]).le(vec![1.0], -1.0);
        assert_eq!(lp_solve(&lp).unwrap().status, LpStatus::Infeasible);
        let lp = LinearProgram::maximize(vec![1.0, 0.0]).le(vec![-1.0, 1.0], 1.0);
        assert_eq!(lp_solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_ranged_variables_with_equalities() {
        // min x + y with x free, y in [-2, 3], x - y = 1, x ≥ -5 via row
        let lp = LinearProgram::maximize(vec![-1.0, -1.0])
            .bound(0, Bound::Free)
            .bound(1, Bound::Range(-2.0, 3.0))
            .eq(vec![1.0, -1.0], 1.0)
            .le(vec![-1.0, 0.0], 5.0);
        let s = lp_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.x[0] + 1.0).abs() < 1e-9 && (s.x[1] + 2.0).abs() < 1e-9);
        assert!((s.value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let lp = LinearProgram::maximize(vec![1.0, 1.0])
            .eq(vec![1.0, 1.0], 1.0)
            .eq(vec![2.0, 2.0], 2.0);
        let s = lp_solve(&lp).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Classic cycling example under Dantzig's rule.
        let lp = LinearProgram::maximize(vec![10.0, -57.0, -9.0, -24.0])
            .le(vec![0.5, -5.5, -2.5, 9.0], 0.0)
            .le(vec![0.5, -1.5, -0.5, 1.0], 0.0)
            .le(vec![1.0, 0.0, 0.0, 0.0], 1.0);
        let s = lp_solve(&lp).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn refactored_pass_matches_plain_pass() {
        let lp = LinearProgram::maximize(vec![-1.0, -1.0, 0.0])
            .bound(0, Bound::Free)
            .bound(1, Bound::Range(-2.0, 3.0))
            .eq(vec![1.0, -1.0, 1.0], 1.0)
            .le(vec![-1.0, 0.0, 0.0], 5.0)
            .le(vec![0.0, 0.0, 1e6], 2e6);
        let opts = LpOptions::default();
        let (a, b) = (solve_pass(&lp, &opts, false).unwrap(), solve_pass(&lp, &opts, true).unwrap());
        assert!((a.value - b.value).abs() < 1e-9);
        assert!(a.dual.iter().zip(&b.dual).all(|(x, y)| (x - y).abs() < 1e-9));
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let lp = LinearProgram::maximize(vec![3.0, 5.0])
            .le(vec![1.0, 0.0], 4.0)
            .le(vec![0.0, 2.0], 12.0)
            .le(vec![3.0, 2.0], 18.0);
        let opts = LpOptions { max_iterations: 1, ..LpOptions::default() };
        assert!(matches!(lp_solve_with(&lp, &opts), Err(LpError::IterationLimit { .. })));
    }

    #[test]
    fn nearly_dependent_columns_certify() {
        // Gauge of a point in a translated cross-polytope whose vertex
        // columns nearly cancel; Phase I passes through an ill-conditioned basis.
    let lp = LinearProgram::maximize(vec![0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,-1.0])
            .eq(vec![-0.9999999932551716, 1.0000000067448283, 6.744828353917931e-9, 6.744828353917931e-9, 6.744828353917931e-9, 6.744828353917931e-9, 6.744828353917931e-9, 6.744828353917931e-9, 6.744828353917931e-9, 6.744828353917931e-9, 6.744828353917931e-9, 6.744828353917931e-9, -0.0], 1.0)
            .eq(vec![0.007220215340315652, 0.007220215340315652, -0.9927797846596843, 1.0072202153403156, 0.007220215340315652, 0.007220215340315652, 0.007220215340315652, 0.007220215340315652, 0.007220215340315652, 0.007220215340315652, 0.007220215340315652, 0.007220215340315652, -0.0], -0.0)
            .eq(vec![1.8418834085924613e-9, 1.8418834085924613e-9, 1.8418834085924613e-9, 1.8418834085924613e-9, -0.9999999981581166, 1.0000000018418833, 1.8418834085924613e-9, 1.8418834085924613e-9, 1.8418834085924613e-9, 1.8418834085924613e-9, 1.8418834085924613e-9, 1.8418834085924613e-9, -0.0], -0.0)
            .eq(vec![0.05277079650980275, 0.05277079650980275, 0.05277079650980275, 0.05277079650980275, 0.05277079650980275, 0.05277079650980275, -0.9472292034901972, 1.0527707965098028, 0.05277079650980275, 0.05277079650980275, 0.05277079650980275, 0.05277079650980275, -0.0], -0.0)
            .eq(vec![9.531352490931889e-7, 9.531352490931889e-7, 9.531352490931889e-7, 9.531352490931889e-7, 9.531352490931889e-7, 9.531352490931889e-7, 9.531352490931889e-7, 9.531352490931889e-7, -0.9999990468647509, 1.0000009531352492, 9.531352490931889e-7, 9.531352490931889e-7, -0.0], -0.0)
            .eq(vec![-0.03362137240523413, -0.03362137240523413, -0.03362137240523413, -0.03362137240523413, -0.03362137240523413, -0.03362137240523413, -0.03362137240523413, -0.03362137240523413, -0.03362137240523413, -0.03362137240523413, -1.033621372405234, 0.9663786275947659, -0.0], -0.0)
            .eq(vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0], -0.0);
        let s = lp_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value + 1.103281894850226).abs() < 1e-12);
    }
}
