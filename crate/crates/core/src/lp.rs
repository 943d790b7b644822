//! Small dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Sized for the feasibility problems of the cone algebra (a few dozen rows).

use crate::error::{Error, Result};

/// Reduced-cost, pivot and feasibility tolerance.
pub const LP_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Clone, Debug)]
struct Constraint {
    coeffs: Vec<f64>,
    relation: Relation,
    rhs: f64,
}

/// `maximize c·x` subject to linear constraints and per-variable bounds.
///
/// Variables default to `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    lower: Vec<Option<f64>>,
    upper: Vec<Option<f64>>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            lower: vec![Some(0.0); n_vars],
            upper: vec![None; n_vars],
            constraints: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<f64>, upper: Option<f64>) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.n_vars(), "constraint width must equal the variable count");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn maximize(&self, objective: &[f64]) -> Result<LpSolution> {
        assert_eq!(objective.len(), self.n_vars());
        StandardForm::build(self).solve(objective)
    }

    /// Phase one only.
    pub fn is_feasible(&self) -> Result<bool> {
        let zero = vec![0.0; self.n_vars()];
        Ok(self.maximize(&zero)?.status != LpStatus::Infeasible)
    }
}

/// `x_i = offset_i + Σ_c coef·y_c` with `y >= 0`.
#[derive(Clone, Debug)]
struct VarMap {
    offset: f64,
    terms: Vec<(usize, f64)>,
}

struct StandardForm {
    maps: Vec<VarMap>,
    ny: usize,
    rows: Vec<(Vec<f64>, Relation, f64)>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut maps = Vec::with_capacity(lp.n_vars());
        let mut ny = 0;
        let mut bound_rows: Vec<(usize, f64)> = Vec::new();
        for i in 0..lp.n_vars() {
            match (lp.lower[i], lp.upper[i]) {
                (Some(l), u) => {
                    maps.push(VarMap { offset: l, terms: vec![(ny, 1.0)] });
                    if let Some(u) = u {
                        bound_rows.push((ny, u - l));
                    }
                    ny += 1;
                }
                (None, Some(u)) => {
                    maps.push(VarMap { offset: u, terms: vec![(ny, -1.0)] });
                    ny += 1;
                }
                (None, None) => {
                    maps.push(VarMap { offset: 0.0, terms: vec![(ny, 1.0), (ny + 1, -1.0)] });
                    ny += 2;
                }
            }
        }
        let mut rows = Vec::new();
        for c in &lp.constraints {
            let mut row = vec![0.0; ny];
            let mut rhs = c.rhs;
            for (i, a) in c.coeffs.iter().enumerate() {
                if *a == 0.0 {
                    continue;
                }
                rhs -= a * maps[i].offset;
                for &(col, coef) in &maps[i].terms {
                    row[col] += a * coef;
                }
            }
            rows.push((row, c.relation, rhs));
        }
        for (col, ub) in bound_rows {
            let mut row = vec![0.0; ny];
            row[col] = 1.0;
            rows.push((row, Relation::Le, ub));
        }
        StandardForm { maps, ny, rows }
    }

    fn solve(&self, objective: &[f64]) -> Result<LpSolution> {
        // objective over y, plus constant
        let mut cy = vec![0.0; self.ny];
        let mut c0 = 0.0;
        for (i, vm) in self.maps.iter().enumerate() {
            c0 += objective[i] * vm.offset;
            for &(col, coef) in &vm.terms {
                cy[col] += objective[i] * coef;
            }
        }

        let m = self.rows.len();
        let mut n_slack = 0;
        let mut n_art = 0;
        let mut norm_rows = Vec::with_capacity(m);
        for (row, rel, rhs) in &self.rows {
            let (row, rel, rhs) = if *rhs < 0.0 {
                let flipped = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (row.iter().map(|v| -v).collect::<Vec<_>>(), flipped, -rhs)
            } else {
                (row.clone(), *rel, *rhs)
            };
            match rel {
                Relation::Le => n_slack += 1,
                Relation::Ge => {
                    n_slack += 1;
                    n_art += 1
                }
                Relation::Eq => n_art += 1,
            }
            norm_rows.push((row, rel, rhs));
        }
        let ncol = self.ny + n_slack + n_art;
        let art_start = self.ny + n_slack;
        let mut t = Tableau::new(m, ncol);
        let mut slack = self.ny;
        let mut art = art_start;
        for (r, (row, rel, rhs)) in norm_rows.into_iter().enumerate() {
            t.a[r][..self.ny].copy_from_slice(&row);
            t.a[r][ncol] = rhs;
            match rel {
                Relation::Le => {
                    t.a[r][slack] = 1.0;
                    t.basis[r] = slack;
                    slack += 1;
                }
                Relation::Ge => {
                    t.a[r][slack] = -1.0;
                    slack += 1;
                    t.a[r][art] = 1.0;
                    t.basis[r] = art;
                    art += 1;
                }
                Relation::Eq => {
                    t.a[r][art] = 1.0;
                    t.basis[r] = art;
                    art += 1;
                }
            }
        }

        let scale = t.a.iter().map(|r| r[ncol].abs()).fold(1.0, f64::max);
        if n_art > 0 {
            let mut c1 = vec![0.0; ncol];
            for c in c1.iter_mut().skip(art_start) {
                *c = -1.0;
            }
            match t.run(&c1, ncol)? {
                LpStatus::Unbounded => {
                    return Err(Error::Lp("phase one reported unbounded".into()));
                }
                _ => {}
            }
            let infeas: f64 = (0..m)
                .filter(|&r| t.basis[r] >= art_start)
                .map(|r| t.a[r][ncol])
                .sum();
            if infeas > LP_TOL * scale {
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    x: vec![],
                    objective: f64::NAN,
                });
            }
            t.drive_out_artificials(art_start);
        }
        let mut c2 = vec![0.0; ncol];
        c2[..self.ny].copy_from_slice(&cy);
        let status = t.run(&c2, art_start)?;
        let mut y = vec![0.0; ncol];
        for (r, &b) in t.basis.iter().enumerate() {
            y[b] = t.a[r][ncol];
        }
        let x: Vec<f64> = self
            .maps
            .iter()
            .map(|vm| vm.offset + vm.terms.iter().map(|&(c, k)| k * y[c]).sum::<f64>())
            .collect();
        let objective_value = match status {
            LpStatus::Unbounded => f64::INFINITY,
            _ => c0 + cy.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>(),
        };
        Ok(LpSolution {
            status,
            x,
            objective: objective_value,
        })
    }
}

struct Tableau {
    /// `m` rows of `ncol` coefficients followed by the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncol: usize,
}

impl Tableau {
    fn new(m: usize, ncol: usize) -> Self {
        Tableau {
            a: vec![vec![0.0; ncol + 1]; m],
            basis: vec![0; m],
            ncol,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `c·y` using columns `< allowed` as entering candidates.
    fn run(&mut self, c: &[f64], allowed: usize) -> Result<LpStatus> {
        let ncol = self.ncol;
        for _ in 0..MAX_PIVOTS {
            // Bland: lowest-index column with positive reduced cost
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut red = c[j];
                for (r, &b) in self.basis.iter().enumerate() {
                    red -= c[b] * self.a[r][j];
                }
                if red > LP_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.a.len() {
                let arj = self.a[r][j];
                if arj > LP_TOL {
                    let ratio = self.a[r][ncol] / arj;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-15
                                || ((ratio - lratio).abs() <= 1e-15 && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            self.pivot(r, j);
        }
        Err(Error::Lp(format!("no convergence within {MAX_PIVOTS} pivots")))
    }

    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= art_start {
                let col = (0..art_start)
                    .filter(|j| !self.basis.contains(j))
                    .max_by(|&x, &y| self.a[r][x].abs().total_cmp(&self.a[r][y].abs()))
                    .filter(|&j| self.a[r][j].abs() > LP_TOL);
                match col {
                    Some(j) => {
                        self.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        // redundant row
                        self.a.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }
}
