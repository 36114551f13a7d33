//! Two-phase tableau simplex with Bland's rule.

use std::cmp::Ordering;

use num_traits::Zero;

use super::num::Num;
use super::{LinearProgram, LpStatus, Relation, Sense};
use crate::ratio::Q;

pub(super) struct Outcome {
    pub status: LpStatus,
    pub values: Vec<Q>,
    pub objective: Q,
    pub pivots: usize,
}

impl Outcome {
    fn without_point(status: LpStatus, pivots: usize) -> Self {
        Outcome { status, values: Vec::new(), objective: Q::zero(), pivots }
    }
}

struct Tableau {
    /// m rows of `width` entries; the last entry of each row is the rhs.
    rows: Vec<Vec<Num>>,
    /// Reduced costs, last entry is minus the objective value.
    cost: Vec<Num>,
    basis: Vec<usize>,
    width: usize,
    /// Columns that may enter the basis.
    eligible: Vec<bool>,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Num {
        &self.rows[r][self.width - 1]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let pivot = self.rows[pr][pc].clone();
        if !pivot.is_one() {
            for v in self.rows[pr].iter_mut() {
                if !v.is_zero() {
                    *v = v.div(&pivot);
                }
            }
        }
        let nonzeros: Vec<(usize, Num)> = self.rows[pr]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        let eliminate = |row: &mut Vec<Num>| {
            let f = row[pc].clone();
            if f.is_zero() {
                return;
            }
            for (j, v) in &nonzeros {
                row[*j] = row[*j].sub_mul(&f, v);
            }
            row[pc] = Num::ZERO;
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pr {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Bland: lowest-index improving column, then lowest-index basic
    /// variable among the minimum-ratio rows.
    fn iterate(&mut self) -> LpStatus {
        loop {
            let entering = (0..self.width - 1)
                .find(|&j| self.eligible[j] && self.cost[j].is_negative());
            let Some(pc) = entering else {
                return LpStatus::Optimal;
            };
            let mut best: Option<(usize, Num)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r).div(a);
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => match ratio.cmp_num(bratio) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[r] < self.basis[*br],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return LpStatus::Unbounded,
                Some((pr, _)) => self.pivot(pr, pc),
            }
        }
    }

    fn set_costs(&mut self, costs: &[Num]) {
        let mut cost: Vec<Num> = costs.to_vec();
        cost.push(Num::ZERO);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    cost[j] = cost[j].sub_mul(cb, v);
                }
            }
        }
        self.cost = cost;
    }
}

pub(super) fn run(lp: &LinearProgram) -> Outcome {
    let nvars = lp.vars.len();
    // column layout: structural (free vars get a negative twin), then
    // slacks/surplus, then artificials
    let mut pos_col = Vec::with_capacity(nvars);
    let mut neg_col = vec![None; nvars];
    let mut ncols = 0;
    for (k, v) in lp.vars.iter().enumerate() {
        pos_col.push(ncols);
        ncols += 1;
        if v.free {
            neg_col[k] = Some(ncols);
            ncols += 1;
        }
    }
    let structural = ncols;

    struct Row {
        coeffs: Vec<(usize, Num)>,
        relation: Relation,
        rhs: Num,
    }
    let mut rows: Vec<Row> = Vec::with_capacity(lp.constraints.len());
    for c in &lp.constraints {
        let mut dense: Vec<Option<Q>> = vec![None; structural];
        for (v, coeff) in &c.terms {
            let slot = &mut dense[pos_col[v.0]];
            *slot = Some(slot.take().unwrap_or_else(Q::zero) + coeff);
            if let Some(nc) = neg_col[v.0] {
                let slot = &mut dense[nc];
                *slot = Some(slot.take().unwrap_or_else(Q::zero) - coeff);
            }
        }
        let mut coeffs: Vec<(usize, Num)> = dense
            .into_iter()
            .enumerate()
            .filter_map(|(j, q)| q.filter(|q| !q.is_zero()).map(|q| (j, Num::from_big(&q))))
            .collect();
        let mut rhs = Num::from_big(&c.rhs);
        let mut relation = c.relation;
        if coeffs.is_empty() {
            let ok = match relation {
                Relation::Le => !rhs.is_negative(),
                Relation::Eq => rhs.is_zero(),
                Relation::Ge => !rhs.is_positive(),
            };
            if !ok {
                return Outcome::without_point(LpStatus::Infeasible, 0);
            }
            continue;
        }
        if rhs.is_negative() {
            rhs = rhs.neg();
            for (_, v) in coeffs.iter_mut() {
                *v = v.neg();
            }
            relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push(Row { coeffs, relation, rhs });
    }

    let m = rows.len();
    let nslack = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let nart = rows.iter().filter(|r| r.relation != Relation::Le).count();
    let width = structural + nslack + nart + 1;
    let art_start = structural + nslack;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        cost: Vec::new(),
        basis: Vec::with_capacity(m),
        width,
        eligible: vec![true; width - 1],
        pivots: 0,
    };
    let mut next_slack = structural;
    let mut next_art = art_start;
    for row in rows {
        let mut dense = vec![Num::ZERO; width];
        for (j, v) in row.coeffs {
            dense[j] = v;
        }
        dense[width - 1] = row.rhs;
        match row.relation {
            Relation::Le => {
                dense[next_slack] = Num::ONE;
                tab.basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                dense[next_slack] = Num::Small(-1, 1);
                next_slack += 1;
                dense[next_art] = Num::ONE;
                tab.basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                dense[next_art] = Num::ONE;
                tab.basis.push(next_art);
                next_art += 1;
            }
        }
        tab.rows.push(dense);
    }

    // phase 1: minimise the sum of artificials
    if nart > 0 {
        let mut costs = vec![Num::ZERO; width - 1];
        for c in costs.iter_mut().skip(art_start) {
            *c = Num::ONE;
        }
        tab.set_costs(&costs);
        let status = tab.iterate();
        debug_assert_eq!(status, LpStatus::Optimal, "phase 1 is bounded below by zero");
        if !tab.cost[width - 1].is_zero() {
            return Outcome::without_point(LpStatus::Infeasible, tab.pivots);
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= art_start {
                match (0..art_start).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => {
                        tab.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        tab.rows.swap_remove(r);
                        tab.basis.swap_remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        for e in tab.eligible.iter_mut().skip(art_start) {
            *e = false;
        }
    }

    // phase 2
    let mut costs = vec![Num::ZERO; width - 1];
    let maximize = matches!(lp.objective, Some((Sense::Maximize, _)));
    if let Some((_, terms)) = &lp.objective {
        let mut acc: Vec<Q> = vec![Q::zero(); structural];
        for (v, c) in terms {
            let c = if maximize { -c.clone() } else { c.clone() };
            acc[pos_col[v.0]] += &c;
            if let Some(nc) = neg_col[v.0] {
                acc[nc] -= &c;
            }
        }
        for (j, q) in acc.iter().enumerate() {
            if !q.is_zero() {
                costs[j] = Num::from_big(q);
            }
        }
    }
    tab.set_costs(&costs);
    let status = tab.iterate();
    if status != LpStatus::Optimal {
        return Outcome::without_point(status, tab.pivots);
    }

    let mut col_values = vec![Q::zero(); structural];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < structural {
            col_values[b] = tab.rhs(r).to_big();
        }
    }
    let values: Vec<Q> = (0..nvars)
        .map(|k| {
            let mut v = col_values[pos_col[k]].clone();
            if let Some(nc) = neg_col[k] {
                v -= &col_values[nc];
            }
            v
        })
        .collect();
    let mut objective = tab.cost[width - 1].neg().to_big();
    if maximize {
        objective = -objective;
    }
    Outcome { status: LpStatus::Optimal, values, objective, pivots: tab.pivots }
}
