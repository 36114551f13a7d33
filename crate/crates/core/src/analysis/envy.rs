//! Pairwise sd-envy.

use crate::error::Result;
use crate::model::{sd_dominates, Assignment, PreferenceProfile};
use crate::ratio::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct EnvyReport {
    /// `violation[i][j]`: agent `i`'s allocation does not sd-dominate `j`'s.
    pub violation: Vec<Vec<bool>>,
    /// `weak[i][j]`: `j`'s allocation sd-dominates `i`'s and differs from it.
    pub weak: Vec<Vec<bool>>,
    /// Agents with at least one violation.
    pub enviers: usize,
    /// Agents with at least one weak envy.
    pub weak_enviers: usize,
    /// Mean number of agents envied, over the agents who envy someone.
    pub avg_envied: Option<Q>,
}

impl EnvyReport {
    pub fn envied_by(&self, i: usize) -> usize {
        self.violation[i].iter().filter(|&&v| v).count()
    }

    pub fn is_envy_free(&self) -> bool {
        self.enviers == 0
    }
}

pub fn envy_report(profile: &PreferenceProfile, x: &Assignment) -> Result<EnvyReport> {
    x.check_dims(profile)?;
    let n = profile.n();
    let mut violation = vec![vec![false; n]; n];
    let mut weak = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            violation[i][j] = !sd_dominates(profile, i, x.row(i), x.row(j));
            weak[i][j] = x.row(i) != x.row(j) && sd_dominates(profile, i, x.row(j), x.row(i));
        }
    }
    let counts: Vec<usize> = violation.iter().map(|r| r.iter().filter(|&&v| v).count()).collect();
    let enviers = counts.iter().filter(|&&c| c > 0).count();
    let weak_enviers = weak.iter().filter(|r| r.iter().any(|&v| v)).count();
    let avg_envied = (enviers > 0).then(|| {
        Q::new(counts.iter().sum::<usize>().into(), enviers.into())
    });
    Ok(EnvyReport { violation, weak, enviers, weak_enviers, avg_envied })
}
