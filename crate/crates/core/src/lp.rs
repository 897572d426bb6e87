//! Dense two-phase simplex with Bland's rule.
//!
//! Problems are stated over `f64` and solved either in floating point or,
//! for small instances, in exact rational arithmetic. Every optimal answer
//! carries a dual vector read from the final tableau together with the
//! primal/dual objective gap, so callers can certify the result.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numeric::{Arithmetic, Scalar, RATIONAL_MAX_VARS};

pub const ITERATION_CAP: usize = 1_000_000;
const REFINE_PASSES: usize = 2;
const CLEANUP_ROUNDS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl Bound {
    pub const NONNEG: Bound = Bound {
        lower: Some(0.0),
        upper: None,
    };
    pub const FREE: Bound = Bound {
        lower: None,
        upper: None,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

impl LpProblem {
    /// New problem; every variable starts nonnegative.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LpProblem {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![Bound::NONNEG; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_bound(&mut self, var: usize, lower: Option<f64>, upper: Option<f64>) -> &mut Self {
        self.bounds[var] = Bound { lower, upper };
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.bounds[var] = Bound::FREE;
        self
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn add_sparse(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) -> &mut Self {
        let mut coeffs = vec![0.0; self.num_vars()];
        for &(j, a) in terms {
            coeffs[j] += a;
        }
        self.add(coeffs, relation, rhs)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::Malformed("bound count differs from variable count".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::Malformed("objective must be finite".into()));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.coeffs.len() != n {
                return Err(Error::Malformed(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.coeffs.len()
                )));
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(Error::Malformed(format!("row {i} is not finite")));
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (b.lower, b.upper) {
                if l > u {
                    return Err(Error::Malformed(format!("variable {j} has lower > upper")));
                }
            }
        }
        Ok(())
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
    pub objective: f64,
    pub primal: Vec<f64>,
    /// Shadow price of each constraint row (derivative of the optimum with
    /// respect to its right-hand side).
    pub dual: Vec<f64>,
    pub dual_objective: f64,
    /// `|primal − dual| / max(1, |primal|)`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub exact_objective: Option<BigRational>,
    pub exact_primal: Option<Vec<BigRational>>,
}

impl LpSolution {
    fn empty(status: LpStatus, iterations: usize) -> Self {
        LpSolution {
            status,
            objective: match status {
                LpStatus::Unbounded => f64::INFINITY,
                _ => f64::NAN,
            },
            primal: Vec::new(),
            dual: Vec::new(),
            dual_objective: f64::NAN,
            gap: f64::NAN,
            primal_residual: f64::NAN,
            dual_residual: f64::NAN,
            iterations,
            exact_objective: None,
            exact_primal: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// The solution if optimal, otherwise the matching error.
    pub fn into_optimal(self) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::Infeasible),
            LpStatus::Unbounded => Err(Error::Unbounded),
        }
    }
}

pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    solve_lp_with(p, Arithmetic::Float)
}

/// Solves in the requested arithmetic; rational mode falls back to floating
/// point above [`RATIONAL_MAX_VARS`] variables.
pub fn solve_lp_with(p: &LpProblem, arithmetic: Arithmetic) -> Result<LpSolution> {
    p.validate()?;
    match arithmetic {
        Arithmetic::Rational if p.num_vars() <= RATIONAL_MAX_VARS => {
            let std = Standard::<BigRational>::build(p);
            let outcome = run_simplex(&std)?;
            let mut sol = std.finish(p, &outcome);
            if sol.is_optimal() {
                let x = std.recover(&outcome.x);
                let mut obj = <BigRational as num_traits::Zero>::zero();
                for (j, xj) in x.iter().enumerate() {
                    obj = obj + <BigRational as Scalar>::from_f64(p.objective[j]) * xj.clone();
                }
                sol.exact_objective = Some(obj);
                sol.exact_primal = Some(x);
            }
            Ok(sol)
        }
        _ => {
            let std = Standard::<f64>::build(p);
            let outcome = run_simplex(&std)?;
            Ok(std.finish(p, &outcome))
        }
    }
}

#[derive(Debug, Clone)]
enum VarMap {
    /// x = lower + y
    Shift { col: usize, lower: f64 },
    /// x = upper − y
    Reflect { col: usize, upper: f64 },
    /// x = y⁺ − y⁻
    Split { pos: usize, neg: usize },
}

/// `max c·y + c0` subject to `A y (rel) b`, `y ≥ 0`, `b ≥ 0`.
struct Standard<T> {
    a: Vec<Vec<T>>,
    b: Vec<T>,
    rel: Vec<Relation>,
    c: Vec<T>,
    c0: T,
    map: Vec<VarMap>,
    /// +1 or −1: the factor each original row was multiplied by.
    row_sign: Vec<i8>,
    original_rows: usize,
    minimize: bool,
}

impl<T: Scalar> Standard<T> {
    fn build(p: &LpProblem) -> Self {
        let mut ncols = 0;
        let mut map = Vec::with_capacity(p.num_vars());
        let mut upper_rows = Vec::new();
        for b in &p.bounds {
            match (b.lower, b.upper) {
                (Some(l), u) => {
                    map.push(VarMap::Shift { col: ncols, lower: l });
                    if let Some(u) = u {
                        upper_rows.push((ncols, T::from_f64(u) - T::from_f64(l)));
                    }
                    ncols += 1;
                }
                (None, Some(u)) => {
                    map.push(VarMap::Reflect { col: ncols, upper: u });
                    ncols += 1;
                }
                (None, None) => {
                    map.push(VarMap::Split {
                        pos: ncols,
                        neg: ncols + 1,
                    });
                    ncols += 2;
                }
            }
        }
        let flip = if p.sense == Sense::Min { -T::one() } else { T::one() };
        let mut c = vec![T::zero(); ncols];
        let mut c0 = T::zero();
        for (j, m) in map.iter().enumerate() {
            let cj = flip.clone() * T::from_f64(p.objective[j]);
            match *m {
                VarMap::Shift { col, lower } => {
                    c[col] = cj.clone();
                    c0 = c0 + cj * T::from_f64(lower);
                }
                VarMap::Reflect { col, upper } => {
                    c[col] = -cj.clone();
                    c0 = c0 + cj * T::from_f64(upper);
                }
                VarMap::Split { pos, neg } => {
                    c[pos] = cj.clone();
                    c[neg] = -cj;
                }
            }
        }

        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut rel = Vec::new();
        let mut row_sign = Vec::new();
        for row in &p.constraints {
            let mut coeffs = vec![T::zero(); ncols];
            let mut rhs = T::from_f64(row.rhs);
            for (j, m) in map.iter().enumerate() {
                if row.coeffs[j] == 0.0 {
                    continue;
                }
                let aj = T::from_f64(row.coeffs[j]);
                match *m {
                    VarMap::Shift { col, lower } => {
                        rhs = rhs - aj.clone() * T::from_f64(lower);
                        coeffs[col] = aj;
                    }
                    VarMap::Reflect { col, upper } => {
                        rhs = rhs - aj.clone() * T::from_f64(upper);
                        coeffs[col] = -aj;
                    }
                    VarMap::Split { pos, neg } => {
                        coeffs[pos] = aj.clone();
                        coeffs[neg] = -aj;
                    }
                }
            }
            push_row(&mut a, &mut b, &mut rel, &mut row_sign, coeffs, row.relation, rhs);
        }
        let original_rows = a.len();
        for (col, width) in upper_rows {
            let mut coeffs = vec![T::zero(); ncols];
            coeffs[col] = T::one();
            push_row(&mut a, &mut b, &mut rel, &mut row_sign, coeffs, Relation::Le, width);
        }
        Standard {
            a,
            b,
            rel,
            c,
            c0,
            map,
            row_sign,
            original_rows,
            minimize: p.sense == Sense::Min,
        }
    }

    fn recover(&self, y: &[T]) -> Vec<T> {
        self.map
            .iter()
            .map(|m| match *m {
                VarMap::Shift { col, lower } => T::from_f64(lower) + y[col].clone(),
                VarMap::Reflect { col, upper } => T::from_f64(upper) - y[col].clone(),
                VarMap::Split { pos, neg } => y[pos].clone() - y[neg].clone(),
            })
            .collect()
    }

    fn finish(&self, p: &LpProblem, out: &Outcome<T>) -> LpSolution {
        if out.status != LpStatus::Optimal {
            return LpSolution::empty(out.status, out.iterations);
        }
        let x: Vec<f64> = self.recover(&out.x).iter().map(Scalar::to_f64).collect();
        let sign = if self.minimize { -1.0 } else { 1.0 };

        let mut primal_std = self.c0.to_f64();
        for (cj, yj) in self.c.iter().zip(&out.x) {
            primal_std += cj.to_f64() * yj.to_f64();
        }
        let mut dual_std = self.c0.to_f64();
        for (bi, yi) in self.b.iter().zip(&out.y) {
            dual_std += bi.to_f64() * yi.to_f64();
        }
        let mut dual_residual: f64 = 0.0;
        for j in 0..self.c.len() {
            let mut r = self.c[j].to_f64();
            for (i, row) in self.a.iter().enumerate() {
                r -= out.y[i].to_f64() * row[j].to_f64();
            }
            dual_residual = dual_residual.max(r);
        }
        for (i, rel) in self.rel.iter().enumerate() {
            let yi = out.y[i].to_f64();
            let wrong_sign = match rel {
                Relation::Le => (-yi).max(0.0),
                Relation::Ge => yi.max(0.0),
                Relation::Eq => 0.0,
            };
            dual_residual = dual_residual.max(wrong_sign);
        }

        let dual: Vec<f64> = (0..self.original_rows)
            .map(|i| sign * f64::from(self.row_sign[i]) * out.y[i].to_f64())
            .collect();
        let objective: f64 = p.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        let dual_objective = sign * dual_std;
        let gap = (primal_std - dual_std).abs() / primal_std.abs().max(1.0);

        LpSolution {
            status: LpStatus::Optimal,
            objective,
            primal_residual: primal_residual(p, &x),
            primal: x,
            dual,
            dual_objective,
            gap,
            dual_residual,
            iterations: out.iterations,
            exact_objective: None,
            exact_primal: None,
        }
    }
}

fn push_row<T: Scalar>(
    a: &mut Vec<Vec<T>>,
    b: &mut Vec<T>,
    rel: &mut Vec<Relation>,
    row_sign: &mut Vec<i8>,
    mut coeffs: Vec<T>,
    relation: Relation,
    mut rhs: T,
) {
    let mut relation = relation;
    let mut sign = 1;
    if rhs < T::zero() {
        sign = -1;
        rhs = -rhs;
        for v in coeffs.iter_mut() {
            *v = -v.clone();
        }
        relation = match relation {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        };
    }
    a.push(coeffs);
    b.push(rhs);
    rel.push(relation);
    row_sign.push(sign);
}

fn primal_residual(p: &LpProblem, x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for row in &p.constraints {
        let lhs: f64 = row.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        let scale = 1.0 + row.rhs.abs();
        let viol = match row.relation {
            Relation::Le => (lhs - row.rhs).max(0.0),
            Relation::Ge => (row.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - row.rhs).abs(),
        };
        worst = worst.max(viol / scale);
    }
    for (b, &v) in p.bounds.iter().zip(x) {
        if let Some(l) = b.lower {
            worst = worst.max(l - v);
        }
        if let Some(u) = b.upper {
            worst = worst.max(v - u);
        }
    }
    worst
}

struct Outcome<T> {
    status: LpStatus,
    /// Standard-form primal.
    x: Vec<T>,
    /// Standard-form row duals.
    y: Vec<T>,
    iterations: usize,
}

struct Tableau<T> {
    /// m rows of `ncols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<T>>,
    /// Reduced costs `c_j − c_B B⁻¹ A_j`.
    reduced: Vec<T>,
    value: T,
    basis: Vec<usize>,
    ncols: usize,
    /// Columns at or beyond this index are artificial.
    art_start: usize,
    /// Column holding `+e_i` in the initial tableau, per row.
    unit_col: Vec<usize>,
    iterations: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, col: usize) {
        let width = self.ncols + 1;
        let piv = self.rows[r][col].clone();
        for k in 0..width {
            let v = self.rows[r][k].clone() / piv.clone();
            self.rows[r][k] = v;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col].clone();
            if factor.is_zero() {
                continue;
            }
            for k in 0..width {
                if !pivot_row[k].is_zero() {
                    let v = row[k].clone() - factor.clone() * pivot_row[k].clone();
                    row[k] = v;
                }
            }
            row[col] = T::zero();
        }
        let rc = self.reduced[col].clone();
        if !rc.is_zero() {
            for k in 0..self.ncols {
                if !pivot_row[k].is_zero() {
                    let v = self.reduced[k].clone() - rc.clone() * pivot_row[k].clone();
                    self.reduced[k] = v;
                }
            }
            self.value = self.value.clone() + rc * pivot_row[self.ncols].clone();
        }
        self.reduced[col] = T::zero();
        self.basis[r] = col;
        self.iterations += 1;
    }

    /// Sets the cost vector and recomputes reduced costs and objective.
    fn price(&mut self, cost: &[T]) {
        for j in 0..self.ncols {
            let mut r = cost[j].clone();
            for (i, row) in self.rows.iter().enumerate() {
                let cb = &cost[self.basis[i]];
                if !cb.is_zero() && !row[j].is_zero() {
                    r = r - cb.clone() * row[j].clone();
                }
            }
            self.reduced[j] = r;
        }
        let mut z = T::zero();
        for (i, row) in self.rows.iter().enumerate() {
            z = z + cost[self.basis[i]].clone() * row[self.ncols].clone();
        }
        self.value = z;
    }

    /// One step of iterative refinement of the basic solution against the
    /// initial rows: `x_B += B⁻¹ (b − B x_B)`. Column `unit_col[i]` of the
    /// tableau holds `B⁻¹ eᵢ`.
    fn refine(&mut self, initial: &[Vec<T>]) {
        let rhs = self.ncols;
        let m = self.rows.len();
        let residual: Vec<T> = initial
            .iter()
            .map(|row| {
                let mut r = row[rhs].clone();
                for k in 0..m {
                    let a = &row[self.basis[k]];
                    if !a.is_zero() {
                        r = r - a.clone() * self.rows[k][rhs].clone();
                    }
                }
                r
            })
            .collect();
        for k in 0..m {
            let mut d = T::zero();
            for (i, r) in residual.iter().enumerate() {
                let b = &self.rows[k][self.unit_col[i]];
                if !b.is_zero() && !r.is_zero() {
                    d = d + b.clone() * r.clone();
                }
            }
            let v = self.rows[k][rhs].clone() + d;
            self.rows[k][rhs] = v;
        }
    }

    /// Iterative refinement of the row duals `y` against `yᵀB = c_B`, then
    /// reduced costs recomputed from the initial columns.
    fn refine_duals(&mut self, initial: &[Vec<T>], cost: &[T]) {
        let m = self.rows.len();
        let mut y: Vec<T> = self
            .unit_col
            .iter()
            .map(|&j| -self.reduced[j].clone())
            .collect();
        for _ in 0..REFINE_PASSES {
            let slack: Vec<T> = (0..m)
                .map(|k| {
                    let col = self.basis[k];
                    let mut r = cost[col].clone();
                    for (i, row) in initial.iter().enumerate() {
                        if !row[col].is_zero() {
                            r = r - y[i].clone() * row[col].clone();
                        }
                    }
                    r
                })
                .collect();
            for (i, yi) in y.iter_mut().enumerate() {
                let mut d = T::zero();
                for (k, sk) in slack.iter().enumerate() {
                    let b = &self.rows[k][self.unit_col[i]];
                    if !b.is_zero() && !sk.is_zero() {
                        d = d + sk.clone() * b.clone();
                    }
                }
                *yi = yi.clone() + d;
            }
        }
        for j in 0..self.ncols {
            let mut r = cost[j].clone();
            for (i, row) in initial.iter().enumerate() {
                if !row[j].is_zero() {
                    r = r - y[i].clone() * row[j].clone();
                }
            }
            self.reduced[j] = r;
        }
    }

    /// Refines the final basic solution and, where that exposes a negative
    /// basic variable, restores feasibility with dual simplex pivots followed
    /// by primal ones.
    fn clean_up(&mut self, initial: &[Vec<T>]) -> Result<()> {
        for _ in 0..CLEANUP_ROUNDS {
            for _ in 0..REFINE_PASSES {
                self.refine(initial);
            }
            let rhs = self.ncols;
            let worst = (0..self.rows.len())
                .filter(|&i| self.rows[i][rhs] < -T::feas_eps())
                .min_by(|&x, &y| {
                    self.rows[x][rhs]
                        .partial_cmp(&self.rows[y][rhs])
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(r) = worst else {
                return Ok(());
            };
            let mut entering: Option<(usize, T)> = None;
            for j in 0..self.art_start {
                let a = &self.rows[r][j];
                if *a >= -T::pivot_eps() {
                    continue;
                }
                let reduced = if self.reduced[j] > T::zero() {
                    T::zero()
                } else {
                    self.reduced[j].clone()
                };
                let ratio = reduced / a.clone();
                if entering.as_ref().map_or(true, |(_, best)| ratio < *best) {
                    entering = Some((j, ratio));
                }
            }
            let Some((col, _)) = entering else {
                return Ok(());
            };
            self.pivot(r, col);
            self.optimize(false)?;
        }
        Ok(())
    }

    /// Leaving row for `col`. The bound on the step is relaxed by
    /// `feas_eps`, and among the rows that block within it the largest pivot
    /// wins, ties going to the smallest basic index. With `feas_eps = 0` only
    /// exact ties compete and the smallest basic index wins (Bland).
    fn ratio_test(&self, col: usize) -> Option<usize> {
        let rhs = self.ncols;
        let delta = T::feas_eps();
        let mut bound: Option<T> = None;
        for row in &self.rows {
            let a = &row[col];
            if *a <= T::pivot_eps() {
                continue;
            }
            let b = if row[rhs] < T::zero() { T::zero() } else { row[rhs].clone() };
            let r = (b + delta.clone()) / a.clone();
            if bound.as_ref().map_or(true, |m| r < *m) {
                bound = Some(r);
            }
        }
        let bound = bound?;
        let mut best: Option<usize> = None;
        for (i, row) in self.rows.iter().enumerate() {
            let a = &row[col];
            if *a <= T::pivot_eps() {
                continue;
            }
            let b = if row[rhs] < T::zero() { T::zero() } else { row[rhs].clone() };
            if b / a.clone() > bound {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(k) => {
                    let ak = &self.rows[k][col];
                    let larger = !delta.is_zero() && *a > *ak;
                    let tied = delta.is_zero() || *a == *ak;
                    if larger || (tied && self.basis[i] < self.basis[k]) {
                        Some(i)
                    } else {
                        Some(k)
                    }
                }
            };
        }
        best
    }

    /// Bland's rule iterations until optimal or unbounded.
    fn optimize(&mut self, allow_artificial: bool) -> Result<bool> {
        let limit = if allow_artificial { self.ncols } else { self.art_start };
        loop {
            if self.iterations >= ITERATION_CAP {
                return Err(Error::NumericalFailure(format!(
                    "simplex exceeded {ITERATION_CAP} pivots"
                )));
            }
            let entering = match (0..limit).find(|&j| self.reduced[j].is_pos()) {
                Some(j) => j,
                None => return Ok(true),
            };
            match self.ratio_test(entering) {
                Some(r) => self.pivot(r, entering),
                // A column with no pivot row and a reduced cost at rounding
                // level is noise, not a ray.
                None if self.reduced[entering] <= T::pivot_eps() => {
                    self.reduced[entering] = T::zero();
                }
                None => return Ok(false),
            }
        }
    }
}

fn run_simplex<T: Scalar>(std: &Standard<T>) -> Result<Outcome<T>> {
    let m = std.a.len();
    let n = std.c.len();
    let n_slack = std.rel.iter().filter(|r| **r != Relation::Eq).count();
    let n_art = std.rel.iter().filter(|r| **r != Relation::Le).count();
    let art_start = n + n_slack;
    let ncols = art_start + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut unit_col = Vec::with_capacity(m);
    let (mut s, mut a) = (n, art_start);
    for i in 0..m {
        let mut row = vec![T::zero(); ncols + 1];
        for (j, v) in std.a[i].iter().enumerate() {
            row[j] = v.clone();
        }
        row[ncols] = std.b[i].clone();
        match std.rel[i] {
            Relation::Le => {
                row[s] = T::one();
                basis.push(s);
                unit_col.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -T::one();
                s += 1;
                row[a] = T::one();
                basis.push(a);
                unit_col.push(a);
                a += 1;
            }
            Relation::Eq => {
                row[a] = T::one();
                basis.push(a);
                unit_col.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }
    let initial = rows.clone();
    let mut t = Tableau {
        rows,
        reduced: vec![T::zero(); ncols],
        value: T::zero(),
        basis,
        ncols,
        art_start,
        unit_col,
        iterations: 0,
    };

    if n_art > 0 {
        let mut phase1 = vec![T::zero(); ncols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = -T::one();
        }
        t.price(&phase1);
        t.optimize(true)?;
        let bmax = std
            .b
            .iter()
            .fold(T::one(), |m, v| if v.abs_val() > m { v.abs_val() } else { m });
        let infeas_tol = T::eps() * T::from_f64(100.0) * bmax;
        if t.value < -infeas_tol {
            return Ok(Outcome {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                y: Vec::new(),
                iterations: t.iterations,
            });
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] < art_start {
                continue;
            }
            let best = (0..art_start)
                .filter(|&j| t.rows[r][j].abs_val() > T::pivot_eps())
                .max_by(|&x, &y| {
                    t.rows[r][x]
                        .abs_val()
                        .partial_cmp(&t.rows[r][y].abs_val())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            if let Some(j) = best {
                t.pivot(r, j);
            }
        }
    }

    let mut cost = vec![T::zero(); ncols];
    cost[..n].clone_from_slice(&std.c);
    t.price(&cost);
    if !t.optimize(false)? {
        return Ok(Outcome {
            status: LpStatus::Unbounded,
            x: Vec::new(),
            y: Vec::new(),
            iterations: t.iterations,
        });
    }

    if !T::feas_eps().is_zero() {
        t.clean_up(&initial)?;
        t.refine_duals(&initial, &cost);
    }

    let mut x = vec![T::zero(); n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            x[bcol] = t.rows[i][ncols].clone();
        }
    }
    let y = t.unit_col.iter().map(|&j| -t.reduced[j].clone()).collect();
    Ok(Outcome {
        status: LpStatus::Optimal,
        x,
        y,
        iterations: t.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    #[test]
    fn bounded_maximum() {
        let mut p = LpProblem::new(Sense::Max, vec![1.0]);
        p.add(vec![1.0], Relation::Le, 3.0);
        let s = solve_lp(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 3.0).abs() < 1e-12);
        assert!((s.dual[0] - 1.0).abs() < 1e-12);
        assert!(s.gap <= 1e-12);
    }

    #[test]
    fn unbounded_ray() {
        let p = LpProblem::new(Sense::Max, vec![1.0]);
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_system() {
        let mut p = LpProblem::new(Sense::Min, vec![1.0]);
        p.add(vec![1.0], Relation::Ge, 2.0);
        p.add(vec![1.0], Relation::Le, 1.0);
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn lipschitz_lp_on_three_points() {
        // max f(1) + f(3) over 1-Lipschitz f on {0,1,3} with f(0) = 0.
        let pts = [0.0f64, 1.0, 3.0];
        let mut p = LpProblem::new(Sense::Max, vec![0.0, 1.0, 1.0]);
        p.set_bound(0, Some(0.0), Some(0.0));
        p.set_free(1).set_free(2);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    p.add_sparse(&[(i, 1.0), (j, -1.0)], Relation::Le, (pts[i] - pts[j]).abs());
                }
            }
        }
        for arith in [Arithmetic::Float, Arithmetic::Rational] {
            let s = solve_lp_with(&p, arith).unwrap();
            assert!((s.objective - 4.0).abs() < 1e-12);
            assert!(s.gap <= 1e-12 && s.primal_residual <= 1e-12);
            if arith == Arithmetic::Rational {
                assert_eq!(s.exact_objective, Some(rational(4, 1)));
            }
        }
    }

    #[test]
    fn minimization_with_mixed_rows_and_bounds() {
        // min 2x + 3y s.t. x + y ≥ 4, x − y = 1, x ≤ 10, y ∈ [0.5, 2]
        let mut p = LpProblem::new(Sense::Min, vec![2.0, 3.0]);
        p.set_bound(0, None, Some(10.0));
        p.set_bound(1, Some(0.5), Some(2.0));
        p.add(vec![1.0, 1.0], Relation::Ge, 4.0);
        p.add(vec![1.0, -1.0], Relation::Eq, 1.0);
        let s = solve_lp(&p).unwrap();
        assert!((s.primal[0] - 2.5).abs() < 1e-12 && (s.primal[1] - 1.5).abs() < 1e-12);
        assert!((s.objective - 9.5).abs() < 1e-12);
        assert!((s.dual_objective - 9.5).abs() < 1e-12);
        // d(opt)/d(rhs): raising the ≥ row by one costs 2.5.
        assert!((s.dual[0] - 2.5).abs() < 1e-12);
        let exact = solve_lp_with(&p, Arithmetic::Rational).unwrap();
        assert_eq!(exact.exact_objective, Some(rational(19, 2)));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Klee–Minty-like degenerate vertex at the origin.
        let mut p = LpProblem::new(Sense::Max, vec![10.0, -57.0, -9.0, -24.0]);
        p.add(vec![0.5, -5.5, -2.5, 9.0], Relation::Le, 0.0);
        p.add(vec![0.5, -1.5, -0.5, 1.0], Relation::Le, 0.0);
        p.add(vec![1.0, 0.0, 0.0, 0.0], Relation::Le, 1.0);
        let s = solve_lp(&p).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut p = LpProblem::new(Sense::Max, vec![1.0, 1.0]);
        p.add(vec![1.0, 1.0], Relation::Eq, 2.0);
        p.add(vec![2.0, 2.0], Relation::Eq, 4.0);
        p.add(vec![1.0, 0.0], Relation::Le, 1.5);
        let s = solve_lp(&p).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-12);
        assert!(s.gap < 1e-12);
    }
}
