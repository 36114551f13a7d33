use num_traits::{One, Zero};

use super::{LinearProgram, LpError, Relation, VarId};
use crate::error::{Error, Result};
use crate::model::PreferenceProfile;
use crate::ratio::Q;

/// An affine expression `Σ c·v + constant`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(VarId, Q)>,
    pub constant: Q,
}

impl LinExpr {
    pub fn constant(c: Q) -> Self {
        Self { terms: Vec::new(), constant: c }
    }

    pub fn var(v: VarId) -> Self {
        Self { terms: vec![(v, Q::one())], constant: Q::zero() }
    }

    pub fn plus(mut self, v: VarId, coeff: Q) -> Self {
        self.terms.push((v, coeff));
        self
    }
}

/// A linear program whose first `n²` variables are the entries of an
/// assignment matrix.
#[derive(Clone, Debug)]
pub struct AssignmentLp {
    pub lp: LinearProgram,
    /// `x[i][o]`
    pub x: Vec<Vec<VarId>>,
}

/// Variables `x[i][o] >= 0` with every row and column summing to one.
pub fn build_bistochastic(n: usize) -> AssignmentLp {
    let mut lp = LinearProgram::new();
    let x: Vec<Vec<VarId>> = (0..n)
        .map(|i| (0..n).map(|o| lp.add_var(format!("x_{i}_{o}"))).collect())
        .collect();
    for row in &x {
        lp.add_constraint(row.iter().map(|&v| (v, Q::one())), Relation::Eq, Q::one())
            .expect("declared above");
    }
    for o in 0..n {
        lp.add_constraint((0..n).map(|i| (x[i][o], Q::one())), Relation::Eq, Q::one())
            .expect("declared above");
    }
    AssignmentLp { lp, x }
}

impl AssignmentLp {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Appends `Σ_{o : rank(agent, o) >= k} x[agent][o]  <rel>  rhs`.
    pub fn add_cumulative_constraint(
        &mut self,
        profile: &PreferenceProfile,
        agent: usize,
        k: usize,
        relation: Relation,
        rhs: &LinExpr,
    ) -> Result<usize> {
        let n = self.n();
        if profile.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: profile.n() });
        }
        if agent >= n {
            return Err(Error::UnknownAgent(agent));
        }
        if k == 0 || k > n {
            return Err(Error::RankOutOfRange { rank: k, n });
        }
        let mut terms: Vec<(VarId, Q)> =
            (k..=n).map(|r| (self.x[agent][profile.object_at(agent, r)], Q::one())).collect();
        terms.extend(rhs.terms.iter().map(|(v, c)| (*v, -c.clone())));
        self.lp
            .add_constraint(terms, relation, rhs.constant.clone())
            .map_err(|e: LpError| e.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve, LpStatus, Sense};
    use crate::model::PreferenceProfile;
    use crate::ratio::qi;

    #[test]
    fn bistochastic_counts() {
        let a = build_bistochastic(2);
        assert_eq!(a.lp.num_vars(), 4);
        assert_eq!(a.lp.constraints().len(), 4);
        assert!(a.lp.constraints().iter().all(|c| c.relation == Relation::Eq));
    }

    #[test]
    fn single_entry_is_forced() {
        let mut a = build_bistochastic(1);
        let b = a.lp.add_var("b");
        let p = PreferenceProfile::from_orders(vec![vec![0]]).unwrap();
        a.add_cumulative_constraint(&p, 0, 1, Relation::Le, &LinExpr::var(b)).unwrap();
        a.lp.set_objective(Sense::Minimize, [(b, qi(1))]).unwrap();
        let s = solve(&a.lp).unwrap();
        assert_eq!(s.objective, Some(qi(1)));
        assert_eq!(s.value(a.x[0][0]), &qi(1));
    }

    #[test]
    fn feasibility_point_is_bistochastic() {
        let a = build_bistochastic(3);
        let s = solve(&a.lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        for i in 0..3 {
            let row: Q = (0..3).map(|o| s.value(a.x[i][o]).clone()).sum();
            let col: Q = (0..3).map(|r| s.value(a.x[r][i]).clone()).sum();
            assert_eq!(row, qi(1));
            assert_eq!(col, qi(1));
        }
    }

    #[test]
    fn first_rawlsian_lp_of_shared_top() {
        let p = PreferenceProfile::from_letters(&["abc", "abc", "bca"]).unwrap();
        let mut a = build_bistochastic(3);
        let b = a.lp.add_var("b");
        for i in 0..3 {
            a.add_cumulative_constraint(&p, i, 3, Relation::Le, &LinExpr::var(b)).unwrap();
        }
        a.lp.set_objective(Sense::Minimize, [(b, qi(1))]).unwrap();
        assert_eq!(solve(&a.lp).unwrap().objective, Some(qi(0)));
    }

    #[test]
    fn cumulative_rows() {
        let p = PreferenceProfile::from_letters(&["abc", "abc", "bca"]).unwrap();
        let mut a = build_bistochastic(3);
        // agent 3 ranks b, c, a: b(2) covers c and a
        let k = a
            .add_cumulative_constraint(&p, 2, 2, Relation::Eq, &LinExpr::constant(qi(1)))
            .unwrap();
        let mut vars: Vec<VarId> = a.lp.constraints()[k].terms.iter().map(|t| t.0).collect();
        vars.sort();
        assert_eq!(vars, vec![a.x[2][0], a.x[2][2]]);
        let k = a
            .add_cumulative_constraint(&p, 0, 3, Relation::Le, &LinExpr::constant(qi(1)))
            .unwrap();
        assert_eq!(a.lp.constraints()[k].terms, vec![(a.x[0][2], qi(1))]);
        let k = a
            .add_cumulative_constraint(&p, 0, 1, Relation::Eq, &LinExpr::constant(qi(1)))
            .unwrap();
        assert_eq!(a.lp.constraints()[k].terms.len(), 3);
        assert!(a.add_cumulative_constraint(&p, 3, 1, Relation::Eq, &LinExpr::default()).is_err());
        assert!(a.add_cumulative_constraint(&p, 0, 4, Relation::Eq, &LinExpr::default()).is_err());
        assert!(a.add_cumulative_constraint(&p, 0, 0, Relation::Eq, &LinExpr::default()).is_err());
    }
}
