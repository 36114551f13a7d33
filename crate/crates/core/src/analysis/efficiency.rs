//! sd-efficiency by object-graph acyclicity, cross-checked by an LP.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, build_bistochastic, Relation, Sense, VarId};
use crate::model::{top_masses, Assignment, PreferenceProfile};
use crate::ratio::Q;

/// One link of an improving cycle: `agent` gives up some of `gives` in
/// exchange for the strictly preferred `receives`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exchange {
    pub agent: usize,
    pub gives: usize,
    pub receives: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EfficiencyReport {
    pub efficient: bool,
    /// An improving cycle when the assignment is inefficient.
    pub cycle: Option<Vec<Exchange>>,
    /// Optimum of the slack-maximising LP; zero exactly when efficient.
    pub lp_gain: Q,
}

/// Runs both methods and fails if they disagree.
pub fn sd_efficient(profile: &PreferenceProfile, x: &Assignment) -> Result<EfficiencyReport> {
    x.check_dims(profile)?;
    let cycle = improving_cycle(profile, x);
    let lp_gain = sd_gain_lp(profile, x)?;
    let by_graph = cycle.is_none();
    let by_lp = lp_gain.is_zero();
    if by_graph != by_lp {
        return Err(Error::Invariant(format!(
            "sd-efficiency methods disagree: graph says {by_graph}, LP gain {lp_gain}"
        )));
    }
    Ok(EfficiencyReport { efficient: by_graph, cycle, lp_gain })
}

/// Edge `o -> o'` whenever some agent holding part of `o'` prefers `o`.
/// Returns a directed cycle translated into exchanges, if one exists.
pub fn improving_cycle(profile: &PreferenceProfile, x: &Assignment) -> Option<Vec<Exchange>> {
    let n = profile.n();
    // witness[o][o'] = agent justifying edge o -> o'
    let mut witness: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for o2 in 0..n {
            if x.get(i, o2).is_zero() {
                continue;
            }
            for o in 0..n {
                if profile.rank(i, o) < profile.rank(i, o2) && witness[o][o2].is_none() {
                    witness[o][o2] = Some(i);
                }
            }
        }
    }
    let objects = find_cycle(n, |a, b| witness[a][b].is_some())?;
    Some(
        objects
            .iter()
            .zip(objects.iter().cycle().skip(1))
            .map(|(&o, &o2)| Exchange { agent: witness[o][o2].expect("edge"), gives: o2, receives: o })
            .collect(),
    )
}

/// A directed cycle as a vertex sequence `v0, v1, ..., vk` with edges
/// `v0 -> v1 -> ... -> vk -> v0`.
pub(crate) fn find_cycle(n: usize, edge: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // iterative DFS with explicit next-neighbour cursors
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Open;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == n {
                mark[v] = Mark::Done;
                stack.pop();
                continue;
            }
            let w = *next;
            *next += 1;
            if !edge(v, w) {
                continue;
            }
            match mark[w] {
                Mark::New => {
                    parent[w] = v;
                    mark[w] = Mark::Open;
                    stack.push((w, 0));
                }
                Mark::Open => {
                    let mut path = vec![v];
                    let mut u = v;
                    while u != w {
                        u = parent[u];
                        path.push(u);
                    }
                    path.reverse();
                    return Some(path);
                }
                Mark::Done => {}
            }
        }
    }
    None
}

/// Maximises the total top-`k` slack an alternative assignment can give over
/// `x`, summed over agents and `k < n`.
pub fn sd_gain_lp(profile: &PreferenceProfile, x: &Assignment) -> Result<Q> {
    x.check_dims(profile)?;
    let n = profile.n();
    let mut alp = build_bistochastic(n);
    let mut slacks: Vec<VarId> = Vec::new();
    for i in 0..n {
        let target = top_masses(profile, i, x.row(i));
        for k in 1..n {
            let s = alp.lp.add_var(format!("s_{i}_{k}"));
            slacks.push(s);
            let mut terms: Vec<(VarId, Q)> =
                profile.order(i)[..k].iter().map(|&o| (alp.x[i][o], Q::one())).collect();
            terms.push((s, -Q::one()));
            alp.lp.add_constraint(terms, Relation::Ge, target[k - 1].clone())?;
        }
    }
    alp.lp.set_objective(Sense::Maximize, slacks.into_iter().map(|s| (s, Q::one())))?;
    let sol = lp::solve(&alp.lp)?;
    sol.objective
        .ok_or_else(|| Error::Invariant(format!("efficiency LP ended {:?}", sol.status)))
}
