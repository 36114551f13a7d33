//! Rank distributions, rank dominance and rank efficiency.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, build_bistochastic, LinearProgram, Relation, Sense, VarId};
use crate::model::{cumulative_from_row, Assignment, PreferenceProfile};
use crate::ratio::Q;

/// `m[k - 1] = M(k)`, the expected number of agents receiving an object
/// ranked `k` or worse, and `e[k - 1]`, the expected number at exactly `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDistribution {
    pub m: Vec<Q>,
    pub e: Vec<Q>,
}

impl RankDistribution {
    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// `M(k)` for `k` in `1..=n+1`.
    pub fn at(&self, k: usize) -> Q {
        self.m.get(k - 1).cloned().unwrap_or_else(Q::zero)
    }
}

pub fn rank_distribution(profile: &PreferenceProfile, x: &Assignment) -> Result<RankDistribution> {
    x.check_dims(profile)?;
    let n = profile.n();
    let mut m = vec![Q::zero(); n];
    for i in 0..n {
        for (acc, b) in m.iter_mut().zip(cumulative_from_row(profile, i, x.row(i))) {
            *acc += b;
        }
    }
    let e = (0..n)
        .map(|k| &m[k] - m.get(k + 1).cloned().unwrap_or_else(Q::zero))
        .collect();
    Ok(RankDistribution { m, e })
}

/// Whether `x` rank-dominates `y`: `M^y(k) >= M^x(k)` for every `k`, with
/// at least one strict inequality.
pub fn rank_dominates(profile: &PreferenceProfile, x: &Assignment, y: &Assignment) -> Result<bool> {
    let mx = rank_distribution(profile, x)?;
    let my = rank_distribution(profile, y)?;
    let weakly = mx.m.iter().zip(&my.m).all(|(a, b)| b >= a);
    let strictly = mx.m.iter().zip(&my.m).any(|(a, b)| b > a);
    Ok(weakly && strictly)
}

/// Whether no assignment rank-dominates `x`, via the LP maximising the total
/// improvement `Σ d[k]` subject to `M^y(k) + d[k] <= M^x(k)`.
pub fn rank_efficient(profile: &PreferenceProfile, x: &Assignment) -> Result<bool> {
    let n = profile.n();
    let target = rank_distribution(profile, x)?;
    let mut alp = build_bistochastic(n);
    let mut gains = Vec::new();
    for k in 2..=n {
        let d = alp.lp.add_var(format!("d_{k}"));
        gains.push(d);
        let mut terms: Vec<(VarId, Q)> = Vec::new();
        for i in 0..n {
            for r in k..=n {
                terms.push((alp.x[i][profile.object_at(i, r)], Q::one()));
            }
        }
        terms.push((d, Q::one()));
        alp.lp.add_constraint(terms, Relation::Le, target.at(k))?;
    }
    optimum_is_zero(alp.lp, gains)
}

/// The same question answered over convex weights on all `n!` deterministic
/// assignments. Limited to `n <= 5`.
pub fn rank_efficient_brute_force(profile: &PreferenceProfile, x: &Assignment) -> Result<bool> {
    const LIMIT: usize = 5;
    let n = profile.n();
    if n > LIMIT {
        return Err(Error::BoundExceeded { n, limit: LIMIT });
    }
    let target = rank_distribution(profile, x)?;
    let mut lp = LinearProgram::new();
    // count[p][k - 1] = number of agents at rank >= k under permutation p
    let mut weights = Vec::new();
    let mut counts = Vec::new();
    for perm in (0..n).permutations(n) {
        weights.push(lp.add_var(format!("w_{}", weights.len())));
        counts.push(
            (1..=n)
                .map(|k| perm.iter().enumerate().filter(|&(i, &o)| profile.rank(i, o) >= k).count())
                .collect::<Vec<_>>(),
        );
    }
    lp.add_constraint(weights.iter().map(|&w| (w, Q::one())), Relation::Eq, Q::one())?;
    let mut gains = Vec::new();
    for k in 2..=n {
        let d = lp.add_var(format!("d_{k}"));
        gains.push(d);
        let mut terms: Vec<(VarId, Q)> = weights
            .iter()
            .zip(&counts)
            .filter(|(_, c)| c[k - 1] > 0)
            .map(|(&w, c)| (w, Q::from_integer(c[k - 1].into())))
            .collect();
        terms.push((d, Q::one()));
        lp.add_constraint(terms, Relation::Le, target.at(k))?;
    }
    optimum_is_zero(lp, gains)
}

fn optimum_is_zero(mut lp: LinearProgram, gains: Vec<VarId>) -> Result<bool> {
    if gains.is_empty() {
        return Ok(true);
    }
    lp.set_objective(Sense::Maximize, gains.into_iter().map(|d| (d, Q::one())))?;
    let sol = lp::solve(&lp)?;
    match sol.objective {
        Some(v) => Ok(v.is_zero()),
        None => Err(Error::Invariant(format!("rank LP ended {:?}", sol.status))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{q, qi};

    fn four_agent_profile() -> PreferenceProfile {
        PreferenceProfile::from_letters(&["abc", "abc", "bac"]).unwrap()
    }

    fn four_agent_x() -> Assignment {
        Assignment::new(vec![
            vec![q(1, 2), q(1, 6), q(1, 3)],
            vec![q(1, 2), q(1, 6), q(1, 3)],
            vec![qi(0), q(2, 3), q(1, 3)],
        ])
        .unwrap()
    }

    fn four_agent_y() -> Assignment {
        crate::model::DeterministicAssignment::new(vec![0, 2, 1]).unwrap().to_assignment()
    }

    #[test]
    fn four_agent_rank_tables() {
        let p = four_agent_profile();
        let mx = rank_distribution(&p, &four_agent_x()).unwrap();
        assert_eq!(mx.m, vec![qi(3), q(4, 3), qi(1)]);
        let my = rank_distribution(&p, &four_agent_y()).unwrap();
        assert_eq!(my.m, vec![qi(3), qi(1), qi(1)]);
        assert!(rank_dominates(&p, &four_agent_y(), &four_agent_x()).unwrap());
        assert!(!rank_dominates(&p, &four_agent_x(), &four_agent_y()).unwrap());
        assert!(!rank_dominates(&p, &four_agent_x(), &four_agent_x()).unwrap());
        assert!(!rank_efficient(&p, &four_agent_x()).unwrap());
        assert!(!rank_efficient_brute_force(&p, &four_agent_x()).unwrap());
    }

    #[test]
    fn identity_pattern_is_rank_efficient() {
        let p = PreferenceProfile::from_letters(&["adcbe", "bcade", "cbade", "badce", "badec"]).unwrap();
        let y = Assignment::uniform(1);
        assert!(rank_efficient(&PreferenceProfile::from_orders(vec![vec![0]]).unwrap(), &y).unwrap());
        let y = crate::model::DeterministicAssignment::new(vec![0, 1, 2, 3, 4]).unwrap().to_assignment();
        assert!(rank_efficient(&p, &y).unwrap());
        assert!(rank_efficient_brute_force(&p, &y).unwrap());
    }

    #[test]
    fn uniform_spreads_one_per_rank() {
        let p = PreferenceProfile::from_letters(&["abcd", "bcda", "cdab", "dabc"]).unwrap();
        let d = rank_distribution(&p, &Assignment::uniform(4)).unwrap();
        assert!(d.e.iter().all(|e| e == &qi(1)));
        assert_eq!(d.e.iter().sum::<Q>(), qi(4));
    }
}
