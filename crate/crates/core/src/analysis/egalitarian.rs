//! Egalitarian check: is there an assignment under which every agent's
//! allocation sd-dominates some agent `j`'s allocation under `y`, with a
//! strict gain somewhere for everyone?

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, build_bistochastic, AssignmentLp, Relation, Sense, VarId};
use crate::model::{top_masses, Assignment, PreferenceProfile};
use crate::ratio::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct EgalitarianReport {
    pub egalitarian: bool,
    /// The agent `j` everyone can beat and an assignment doing so.
    pub witness: Option<(usize, Assignment)>,
}

pub fn egalitarian_check(profile: &PreferenceProfile, y: &Assignment) -> Result<EgalitarianReport> {
    y.check_dims(profile)?;
    for j in 0..profile.n() {
        if let Some(x) = beat_agent(profile, y, j)? {
            return Ok(EgalitarianReport { egalitarian: false, witness: Some((j, x)) });
        }
    }
    Ok(EgalitarianReport { egalitarian: true, witness: None })
}

/// For agent `j`: maximise `ε` with `t^k(x_i) >= t^k(y_j) + s[i][k]` and
/// `Σ_k s[i][k] >= ε` for every agent `i`.
fn beat_agent(profile: &PreferenceProfile, y: &Assignment, j: usize) -> Result<Option<Assignment>> {
    let n = profile.n();
    let floor = top_masses(profile, j, y.row(j));
    let mut alp = build_bistochastic(n);
    let eps = alp.lp.add_var("eps");
    for i in 0..n {
        let mut total: Vec<(VarId, Q)> = Vec::new();
        for k in 1..=n {
            let s = alp.lp.add_var(format!("s_{i}_{k}"));
            total.push((s, Q::one()));
            let mut terms = top_k_terms(profile, &alp, i, k);
            terms.push((s, -Q::one()));
            alp.lp.add_constraint(terms, Relation::Ge, floor[k - 1].clone())?;
        }
        total.push((eps, -Q::one()));
        alp.lp.add_constraint(total, Relation::Ge, Q::zero())?;
    }
    alp.lp.set_objective(Sense::Maximize, [(eps, Q::one())])?;
    solve_positive(&alp)
}

/// A sufficient test with one uniform slack: some `x` has
/// `t^k(x_i) >= t^k(y_j) + δ` for all `i` and `k < n` with `δ > 0`.
pub fn egalitarian_relaxed(profile: &PreferenceProfile, y: &Assignment) -> Result<EgalitarianReport> {
    y.check_dims(profile)?;
    let n = profile.n();
    if n < 2 {
        // no k < n constraint, so nothing to beat
        return Ok(EgalitarianReport { egalitarian: true, witness: None });
    }
    for j in 0..n {
        let floor = top_masses(profile, j, y.row(j));
        let mut alp = build_bistochastic(n);
        let delta = alp.lp.add_var("delta");
        for i in 0..n {
            for k in 1..n {
                let mut terms = top_k_terms(profile, &alp, i, k);
                terms.push((delta, -Q::one()));
                alp.lp.add_constraint(terms, Relation::Ge, floor[k - 1].clone())?;
            }
        }
        alp.lp.set_objective(Sense::Maximize, [(delta, Q::one())])?;
        if let Some(x) = solve_positive(&alp)? {
            return Ok(EgalitarianReport { egalitarian: false, witness: Some((j, x)) });
        }
    }
    Ok(EgalitarianReport { egalitarian: true, witness: None })
}

fn top_k_terms(profile: &PreferenceProfile, alp: &AssignmentLp, i: usize, k: usize) -> Vec<(VarId, Q)> {
    profile.order(i)[..k].iter().map(|&o| (alp.x[i][o], Q::one())).collect()
}

/// The optimal matrix when the optimum is positive; infeasibility means no
/// assignment reaches the floor at all.
fn solve_positive(alp: &AssignmentLp) -> Result<Option<Assignment>> {
    let sol = lp::solve(&alp.lp)?;
    match sol.objective {
        None if sol.status == lp::LpStatus::Infeasible => Ok(None),
        None => Err(Error::Invariant(format!("egalitarian LP ended {:?}", sol.status))),
        Some(v) if v.is_zero() || v < Q::zero() => Ok(None),
        Some(_) => {
            let p = alp.x.iter().map(|r| r.iter().map(|&v| sol.value(v).clone()).collect()).collect();
            Ok(Some(Assignment::new(p)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sd_dominates, DeterministicAssignment};
    use crate::rules::rawlsian;

    fn four_agent_profile() -> PreferenceProfile {
        PreferenceProfile::from_letters(&["abcd", "bcad", "abcd", "badc"]).unwrap()
    }

    #[test]
    fn identity_pattern_is_egalitarian() {
        let p = four_agent_profile();
        let y = DeterministicAssignment::new(vec![0, 1, 2, 3]).unwrap().to_assignment();
        assert!(egalitarian_check(&p, &y).unwrap().egalitarian);
        assert!(egalitarian_relaxed(&p, &y).unwrap().egalitarian);
        let x = rawlsian(&p).unwrap();
        assert_ne!(x, y);
        let q = |a, b| crate::ratio::q(a, b);
        assert_eq!(x.row(0), &[q(1, 2), q(1, 2), q(0, 1), q(0, 1)]);
        assert_eq!(x.row(1), &[q(0, 1), q(0, 1), q(1, 1), q(0, 1)]);
        assert_eq!(x.row(3), &[q(0, 1), q(0, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn witness_beats_the_worst_off() {
        // everyone shares preferences and agent 3 gets the worst object for sure
        let p = PreferenceProfile::from_letters(&["abc"; 3]).unwrap();
        let y = DeterministicAssignment::new(vec![0, 1, 2]).unwrap().to_assignment();
        let r = egalitarian_check(&p, &y).unwrap();
        assert!(!r.egalitarian);
        let (j, x) = r.witness.unwrap();
        assert_eq!(j, 2);
        for i in 0..3 {
            assert!(sd_dominates(&p, i, x.row(i), y.row(j)));
            assert_ne!(x.row(i), y.row(j));
        }
        assert!(!egalitarian_relaxed(&p, &y).unwrap().egalitarian);
    }

    #[test]
    fn single_agent() {
        let p = PreferenceProfile::from_orders(vec![vec![0]]).unwrap();
        assert!(egalitarian_check(&p, &Assignment::uniform(1)).unwrap().egalitarian);
        assert!(egalitarian_relaxed(&p, &Assignment::uniform(1)).unwrap().egalitarian);
    }
}
