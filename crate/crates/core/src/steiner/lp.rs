//! Exact rational linear programming for the Steiner weight subproblems.
//!
//! Programs here are `min c.w  s.t.  A.w >= b, w >= 0` with `c >= 0`.
//! The solver runs primal simplex with Bland's rule on the dual
//! (`max b.y  s.t.  A'.y <= c, y >= 0`), which starts feasible at y = 0
//! and has far fewer rows; the primal optimum is read off the slack
//! reduced costs and re-verified exactly before being returned, so the
//! result is certified, not trusted.

use crate::error::{Error, Result};
use crate::rat::Rat;

/// `min objective . w` subject to `row . w >= rhs` for every constraint
/// and `w >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub constraints: Vec<(Vec<Rat>, Rat)>,
}

/// A certified optimal vertex with its matching dual certificate:
/// `dual >= 0`, `A' . dual <= objective`, and `rhs . dual = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub primal: Vec<Rat>,
    pub value: Rat,
    pub dual: Vec<Rat>,
}

pub fn lp_solve(lp: &LinearProgram) -> Result<LpSolution> {
    let nv = lp.objective.len();
    let m = lp.constraints.len();
    if lp.objective.iter().any(|c| c.is_negative()) {
        return Err(Error::Parameter("objective coefficients must be nonnegative".into()));
    }
    for (row, _) in &lp.constraints {
        if row.len() != nv {
            return Err(Error::Parameter("constraint row length mismatch".into()));
        }
    }
    if m == 0 {
        // Nothing binds; w = 0 is optimal.
        return Ok(LpSolution {
            primal: vec![Rat::zero(); nv],
            value: Rat::zero(),
            dual: vec![],
        });
    }

    // Dual in equality form: A'.y + s = c, minimize (-b).y.
    // Tableau rows: nv dual constraints. Columns: m y-vars, nv slacks, rhs.
    let cols = m + nv;
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(nv);
    for k in 0..nv {
        let mut row: Vec<Rat> = Vec::with_capacity(cols + 1);
        for j in 0..m {
            row.push(lp.constraints[j].0[k].clone());
        }
        for s in 0..nv {
            row.push(if s == k { Rat::one() } else { Rat::zero() });
        }
        row.push(lp.objective[k].clone());
        tab.push(row);
    }
    // Reduced-cost row for min (-b).y; slacks cost 0.
    let mut red: Vec<Rat> = Vec::with_capacity(cols);
    for j in 0..m {
        red.push(-lp.constraints[j].1.clone());
    }
    red.extend(std::iter::repeat_n(Rat::zero(), nv));
    let mut obj_val = Rat::zero();
    let mut basis: Vec<usize> = (m..m + nv).collect();

    loop {
        // Bland: entering column = smallest index with negative reduced cost.
        let Some(enter) = (0..cols).find(|&j| red[j].is_negative()) else {
            break;
        };
        // Ratio test; ties resolved toward the smallest basic variable.
        let mut leave: Option<usize> = None;
        let mut best_ratio: Option<Rat> = None;
        for i in 0..nv {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][cols] / &tab[i][enter];
            let better = match &best_ratio {
                None => true,
                Some(cur) => {
                    ratio < *cur
                        || (ratio == *cur && basis[i] < basis[leave.unwrap()])
                }
            };
            if better {
                best_ratio = Some(ratio);
                leave = Some(i);
            }
        }
        let Some(leave) = leave else {
            // Dual unbounded: the primal has no feasible point.
            return Err(Error::LpInfeasible);
        };

        // Pivot on (leave, enter).
        let pivot = tab[leave][enter].clone();
        for x in tab[leave].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..nv {
            if i == leave || tab[i][enter].is_zero() {
                continue;
            }
            let factor = tab[i][enter].clone();
            for j in 0..=cols {
                let delta = &factor * &tab[leave][j];
                tab[i][j] = &tab[i][j] - &delta;
            }
        }
        if !red[enter].is_zero() {
            let factor = red[enter].clone();
            for j in 0..cols {
                let delta = &factor * &tab[leave][j];
                red[j] = &red[j] - &delta;
            }
            // The tracker carries -z for the min form, which is b.y.
            obj_val = &obj_val - &(&factor * &tab[leave][cols]);
        }
        basis[leave] = enter;
    }

    // Dual solution y (basic y-columns), primal w from slack reduced costs.
    let mut dual = vec![Rat::zero(); m];
    for (i, &b) in basis.iter().enumerate() {
        if b < m {
            dual[b] = tab[i][cols].clone();
        }
    }
    let primal: Vec<Rat> = (0..nv).map(|k| red[m + k].clone()).collect();
    let value = obj_val;

    // Exact certification.
    if primal.iter().any(|w| w.is_negative()) || dual.iter().any(|y| y.is_negative()) {
        return Err(Error::LpUnbounded);
    }
    for (row, rhs) in &lp.constraints {
        let attained: Rat = row.iter().zip(&primal).map(|(a, w)| a * w).sum();
        if attained < *rhs {
            return Err(Error::LpUnbounded);
        }
    }
    let primal_value: Rat = lp.objective.iter().zip(&primal).map(|(c, w)| c * w).sum();
    let dual_value: Rat = lp
        .constraints
        .iter()
        .zip(&dual)
        .map(|((_, rhs), y)| rhs * y)
        .sum();
    if primal_value != value || dual_value != value {
        return Err(Error::LpUnbounded);
    }
    for k in 0..nv {
        let col_sum: Rat = lp
            .constraints
            .iter()
            .zip(&dual)
            .map(|((row, _), y)| &row[k] * y)
            .sum();
        if col_sum > lp.objective[k] {
            return Err(Error::LpUnbounded);
        }
    }

    Ok(LpSolution {
        primal,
        value,
        dual,
    })
}
