//! MTAV: minimise the worst assigned rank, then the rank sum.

use rand::seq::SliceRandom;

use crate::error::Result;
use crate::matching::{min_cost_matching, perfect_matching};
use crate::model::{DeterministicAssignment, PreferenceProfile};
use crate::synth::{rng, Stream};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MtavOutcome {
    pub assignment: DeterministicAssignment,
    /// Smallest `r*` admitting a perfect matching on ranks `<= r*`.
    pub bottleneck: usize,
    pub rank_sum: usize,
}

/// Smallest rank bound under which every agent can still be matched.
pub fn bottleneck_rank(profile: &PreferenceProfile) -> usize {
    let n = profile.n();
    let (mut lo, mut hi) = (1, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(n, |i, o| profile.rank(i, o) <= mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

pub fn mtav(profile: &PreferenceProfile, seed: u64) -> Result<MtavOutcome> {
    let n = profile.n();
    let bottleneck = bottleneck_rank(profile);
    let mut r = rng(seed, Stream::MtavTieBreak);
    let mut agents: Vec<usize> = (0..n).collect();
    let mut objects: Vec<usize> = (0..n).collect();
    agents.shuffle(&mut r);
    objects.shuffle(&mut r);
    // any matching through a forbidden edge costs more than every allowed one
    let forbidden = (n * n + 1) as i64;
    let cost: Vec<Vec<i64>> = agents
        .iter()
        .map(|&i| {
            objects
                .iter()
                .map(|&o| {
                    let rank = profile.rank(i, o);
                    if rank <= bottleneck {
                        rank as i64
                    } else {
                        forbidden
                    }
                })
                .collect()
        })
        .collect();
    let (matching, _) = min_cost_matching(&cost);
    let mut perm = vec![0; n];
    for (a, &o) in matching.iter().enumerate() {
        perm[agents[a]] = objects[o];
    }
    let assignment = DeterministicAssignment::new(perm)?;
    let rank_sum = assignment.rank_sum(profile);
    debug_assert_eq!(assignment.max_rank(profile), bottleneck);
    Ok(MtavOutcome { assignment, bottleneck, rank_sum })
}
