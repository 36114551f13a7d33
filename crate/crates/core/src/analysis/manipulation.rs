//! Obvious manipulability by exhaustive enumeration, and the adjacent-swap
//! axioms of strategyproofness.

use std::thread;

use itertools::Itertools;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Assignment, PreferenceProfile};
use crate::ratio::Q;
use crate::rules::Rule;
use crate::synth::{rng, Stream};

/// Largest `n` the exhaustive probe will ever accept.
pub const PROBE_HARD_LIMIT: usize = 4;

/// `ω̄`: worst rank, by `profile`'s ranking of `agent`, held with positive
/// probability.
pub fn worst_support_rank(profile: &PreferenceProfile, x: &Assignment, agent: usize) -> usize {
    support_ranks(profile, x, agent).max().unwrap_or(0)
}

/// `ω̲`: best rank held with positive probability.
pub fn best_support_rank(profile: &PreferenceProfile, x: &Assignment, agent: usize) -> usize {
    support_ranks(profile, x, agent).min().unwrap_or(0)
}

fn support_ranks<'a>(
    profile: &'a PreferenceProfile,
    x: &'a Assignment,
    agent: usize,
) -> impl Iterator<Item = usize> + 'a {
    (0..profile.n()).filter(move |&o| x.get(agent, o).is_positive()).map(move |o| profile.rank(agent, o))
}

/// Extremes over all opponent profiles for one (agent, truth, misreport).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisreportRecord {
    pub agent: usize,
    pub truth: Vec<usize>,
    pub misreport: Vec<usize>,
    /// max over opponents of `ω̄` when truthful / when misreporting
    pub worst_truthful: usize,
    pub worst_misreport: usize,
    /// min over opponents of `ω̲` when truthful / when misreporting
    pub best_truthful: usize,
    pub best_misreport: usize,
}

impl MisreportRecord {
    pub fn violates_worst_case(&self) -> bool {
        self.worst_truthful > self.worst_misreport
    }

    pub fn violates_best_case(&self) -> bool {
        self.best_truthful > self.best_misreport
    }

    pub fn is_obvious_manipulation(&self) -> bool {
        self.violates_worst_case() || self.violates_best_case()
    }
}

/// A single opponent profile where misreporting improves the worst or best
/// supported rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileWitness {
    pub truthful_profile: Vec<Vec<usize>>,
    pub agent: usize,
    pub misreport: Vec<usize>,
    pub worst: (usize, usize),
    pub best: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationReport {
    pub n: usize,
    pub rule: String,
    pub records: Vec<MisreportRecord>,
    /// Number of (profile, agent, misreport) triples improving `ω̄` or `ω̲`.
    pub profile_witness_count: usize,
    /// The first few such triples in enumeration order.
    pub profile_witnesses: Vec<ProfileWitness>,
}

impl ManipulationReport {
    pub fn obvious_manipulations(&self) -> impl Iterator<Item = &MisreportRecord> {
        self.records.iter().filter(|r| r.is_obvious_manipulation())
    }

    pub fn is_obviously_manipulable(&self) -> bool {
        self.obvious_manipulations().next().is_some()
    }
}

const WITNESS_SAMPLE: usize = 20;

/// Enumerates every profile of size `n` and every misreport of every agent.
/// `max_n` caps the size (3 by default; 4 is the most accepted).
pub fn obvious_manipulability_probe(n: usize, rule: &Rule, max_n: usize) -> Result<ManipulationReport> {
    let limit = max_n.min(PROBE_HARD_LIMIT);
    if n == 0 || n > limit {
        return Err(Error::BoundExceeded { n, limit });
    }
    let orders: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let f = orders.len();
    let ranks: Vec<Vec<usize>> = orders
        .iter()
        .map(|ord| {
            let mut r = vec![0; n];
            for (k, &o) in ord.iter().enumerate() {
                r[o] = k + 1;
            }
            r
        })
        .collect();
    let total = f.pow(n as u32);
    let digits = |mut idx: usize| -> Vec<usize> {
        (0..n)
            .map(|_| {
                let d = idx % f;
                idx /= f;
                d
            })
            .collect()
    };
    let stride: Vec<usize> = (0..n).map(|a| f.pow(a as u32)).collect();

    // support bitmask per (profile, agent), filled in parallel
    let workers = thread::available_parallelism().map_or(1, |p| p.get()).min(total);
    let chunk = total.div_ceil(workers);
    let masks: Vec<u32> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let orders = &orders;
                let digits = &digits;
                s.spawn(move || -> Result<Vec<u32>> {
                    let mut out = Vec::new();
                    for idx in (w * chunk)..((w + 1) * chunk).min(total) {
                        let profile = PreferenceProfile::from_orders(
                            digits(idx).iter().map(|&d| orders[d].clone()).collect(),
                        )?;
                        let x = rule.apply(&profile)?;
                        for i in 0..n {
                            out.push(
                                (0..n)
                                    .filter(|&o| x.get(i, o).is_positive())
                                    .fold(0u32, |m, o| m | (1 << o)),
                            );
                        }
                    }
                    Ok(out)
                })
            })
            .collect();
        let mut all = Vec::with_capacity(total * n);
        for h in handles {
            all.extend(h.join().expect("probe worker panicked")?);
        }
        Ok::<_, Error>(all)
    })?;

    let worst = |mask: u32, r: &[usize]| (0..n).filter(|&o| mask >> o & 1 == 1).map(|o| r[o]).max().unwrap_or(0);
    let best = |mask: u32, r: &[usize]| (0..n).filter(|&o| mask >> o & 1 == 1).map(|o| r[o]).min().unwrap_or(0);

    let mut records = Vec::new();
    let mut profile_witness_count = 0;
    let mut profile_witnesses = Vec::new();
    for agent in 0..n {
        for t in 0..f {
            for m in (0..f).filter(|&m| m != t) {
                let r = &ranks[t];
                let mut rec = MisreportRecord {
                    agent,
                    truth: orders[t].clone(),
                    misreport: orders[m].clone(),
                    worst_truthful: 0,
                    worst_misreport: 0,
                    best_truthful: usize::MAX,
                    best_misreport: usize::MAX,
                };
                for idx in (0..total).filter(|idx| (idx / stride[agent]) % f == t) {
                    let alt = idx - t * stride[agent] + m * stride[agent];
                    let mt = masks[idx * n + agent];
                    let mm = masks[alt * n + agent];
                    let (wt, wm, bt, bm) = (worst(mt, r), worst(mm, r), best(mt, r), best(mm, r));
                    rec.worst_truthful = rec.worst_truthful.max(wt);
                    rec.worst_misreport = rec.worst_misreport.max(wm);
                    rec.best_truthful = rec.best_truthful.min(bt);
                    rec.best_misreport = rec.best_misreport.min(bm);
                    if wt > wm || bt > bm {
                        profile_witness_count += 1;
                        if profile_witnesses.len() < WITNESS_SAMPLE {
                            profile_witnesses.push(ProfileWitness {
                                truthful_profile: digits(idx).iter().map(|&d| orders[d].clone()).collect(),
                                agent,
                                misreport: orders[m].clone(),
                                worst: (wt, wm),
                                best: (bt, bm),
                            });
                        }
                    }
                }
                records.push(rec);
            }
        }
    }
    Ok(ManipulationReport { n, rule: rule.name().to_string(), records, profile_witness_count, profile_witnesses })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SwapVerdict {
    pub swap_monotonic: bool,
    /// Objects strictly above `a` keep their probabilities.
    pub upper_invariant: bool,
    /// Objects strictly below `b` keep their probabilities.
    pub lower_invariant: bool,
    pub before: Vec<Q>,
    pub after: Vec<Q>,
}

/// Applies the Rawlsian rule before and after `agent` swaps the adjacent
/// objects `a > b` in her report.
pub fn swap_axiom_check(profile: &PreferenceProfile, agent: usize, a: usize, b: usize) -> Result<SwapVerdict> {
    swap_axiom_check_with(&Rule::Rawlsian, profile, agent, a, b)
}

pub fn swap_axiom_check_with(
    rule: &Rule,
    profile: &PreferenceProfile,
    agent: usize,
    a: usize,
    b: usize,
) -> Result<SwapVerdict> {
    profile.check_agent(agent)?;
    let n = profile.n();
    if a >= n || b >= n || profile.rank(agent, b) != profile.rank(agent, a) + 1 {
        return Err(Error::NonAdjacentSwap { agent, a, b });
    }
    let mut order = profile.order(agent).to_vec();
    let ka = profile.rank(agent, a) - 1;
    order.swap(ka, ka + 1);
    let swapped = profile.with_report(agent, order)?;
    let before = rule.apply(profile)?.row(agent).to_vec();
    let after = rule.apply(&swapped)?.row(agent).to_vec();
    let ra = profile.rank(agent, a);
    let rb = profile.rank(agent, b);
    let unchanged = |keep: &dyn Fn(usize) -> bool| (0..n).filter(|&o| keep(o)).all(|o| before[o] == after[o]);
    Ok(SwapVerdict {
        swap_monotonic: before == after || after[b] > before[b],
        upper_invariant: unchanged(&|o| profile.rank(agent, o) < ra),
        lower_invariant: unchanged(&|o| profile.rank(agent, o) > rb),
        before,
        after,
    })
}

/// Violation counts over random profiles and random adjacent swaps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SwapProbeSummary {
    pub trials: usize,
    pub swap_monotonicity_violations: usize,
    pub upper_invariance_violations: usize,
    pub lower_invariance_violations: usize,
}

/// Draws `trials` uniform profiles with `n` agents, a random agent and a
/// random adjacent pair, and tallies axiom violations of `rule`.
pub fn swap_probe(rule: &Rule, n: usize, trials: usize, seed: u64) -> Result<SwapProbeSummary> {
    if n < 2 {
        return Err(Error::InvalidProfile("swaps need at least two objects".into()));
    }
    let mut r = rng(seed, Stream::Probe);
    let mut summary = SwapProbeSummary { trials, ..Default::default() };
    for _ in 0..trials {
        let orders = (0..n)
            .map(|_| {
                let mut o: Vec<usize> = (0..n).collect();
                o.shuffle(&mut r);
                o
            })
            .collect();
        let profile = PreferenceProfile::from_orders(orders)?;
        let agent = r.random_range(0..n);
        let k = r.random_range(0..n - 1);
        let (a, b) = (profile.order(agent)[k], profile.order(agent)[k + 1]);
        let v = swap_axiom_check_with(rule, &profile, agent, a, b)?;
        summary.swap_monotonicity_violations += usize::from(!v.swap_monotonic);
        summary.upper_invariance_violations += usize::from(!v.upper_invariant);
        summary.lower_invariance_violations += usize::from(!v.lower_invariant);
    }
    Ok(summary)
}

/// `ω̄` and `ω̲` of `agent` under `rule` applied to `profile`, ranked by
/// `truth`'s ranking of that agent.
pub fn support_ranks_under(
    rule: &Rule,
    profile: &PreferenceProfile,
    truth: &PreferenceProfile,
    agent: usize,
) -> Result<(usize, usize)> {
    let x = rule.apply(profile)?;
    Ok((worst_support_rank(truth, &x, agent), best_support_rank(truth, &x, agent)))
}
