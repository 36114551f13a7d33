//! Max-min expected utility over all random assignments.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, build_bistochastic, Relation, Sense};
use crate::model::{Assignment, PreferenceProfile};
use crate::ratio::Q;

/// Cardinal utilities `u[i][o]`, strictly decreasing along each agent's
/// ordinal ranking.
#[derive(Clone, Debug, PartialEq)]
pub struct CardinalUtilityProfile {
    u: Vec<Vec<Q>>,
}

impl CardinalUtilityProfile {
    pub fn new(profile: &PreferenceProfile, u: Vec<Vec<Q>>) -> Result<Self> {
        let n = profile.n();
        if u.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: u.len() });
        }
        for (i, row) in u.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for w in profile.order(i).windows(2) {
                if row[w[0]] <= row[w[1]] {
                    return Err(Error::InconsistentUtilities(format!(
                        "agent {} values {} no higher than {}",
                        profile.agents()[i],
                        profile.objects()[w[0]],
                        profile.objects()[w[1]]
                    )));
                }
            }
        }
        Ok(Self { u })
    }

    /// Every agent gets `by_rank[k - 1]` from her rank-`k` object.
    pub fn from_rank_values(profile: &PreferenceProfile, by_rank: &[Q]) -> Result<Self> {
        let n = profile.n();
        if by_rank.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: by_rank.len() });
        }
        let u = (0..n)
            .map(|i| (0..n).map(|o| by_rank[profile.rank(i, o) - 1].clone()).collect())
            .collect();
        Self::new(profile, u)
    }

    pub fn get(&self, i: usize, o: usize) -> &Q {
        &self.u[i][o]
    }

    pub fn expected(&self, x: &Assignment, i: usize) -> Q {
        x.row(i).iter().zip(&self.u[i]).map(|(p, u)| p * u).sum()
    }

    pub fn min_expected(&self, x: &Assignment) -> Q {
        (0..x.n()).map(|i| self.expected(x, i)).min().expect("n >= 1")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxMinOutcome {
    /// One optimiser; generally not unique.
    pub assignment: Assignment,
    pub value: Q,
}

pub fn maxmin_cardinal(profile: &PreferenceProfile, utilities: &CardinalUtilityProfile) -> Result<MaxMinOutcome> {
    let n = profile.n();
    if utilities.u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: utilities.u.len() });
    }
    let mut alp = build_bistochastic(n);
    let t = alp.lp.add_free_var("t");
    for i in 0..n {
        let mut terms: Vec<_> = (0..n).map(|o| (alp.x[i][o], utilities.u[i][o].clone())).collect();
        terms.push((t, -Q::one()));
        alp.lp.add_constraint(terms, Relation::Ge, Q::zero())?;
    }
    alp.lp.set_objective(Sense::Maximize, [(t, Q::one())])?;
    let sol = lp::solve(&alp.lp)?;
    if !sol.is_optimal() {
        return Err(Error::Invariant(format!("max-min program ended {:?}", sol.status)));
    }
    let p = alp.x.iter().map(|row| row.iter().map(|&v| sol.value(v).clone()).collect()).collect();
    let assignment = Assignment::new(p)?;
    let value = sol.objective.expect("optimal");
    debug_assert_eq!(utilities.min_expected(&assignment), value);
    Ok(MaxMinOutcome { assignment, value })
}
