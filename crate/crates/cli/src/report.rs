//! Multi-rule tables: maximum rank, expected rank counts, envy, pairwise
//! preference counts and the cumulative rank distribution.

use std::thread;

use rawlsian_core::analysis::{envy_report, rank_distribution, support_max_rank};
use rawlsian_core::ratio::{format_q, q};
use rawlsian_core::{sd_dominates, Assignment, PreferenceProfile, Rule, Q};
use serde::Serialize;

use crate::assignment::{decimal, Cell};
use crate::error::{CliError, Result};
use crate::problem::{finish_csv, write_record, SCHEMA_VERSION};

/// Applies every rule on its own thread; results keep the order of `rules`.
pub fn run_rules(profile: &PreferenceProfile, rules: &[Rule]) -> Result<Vec<Assignment>> {
    thread::scope(|scope| {
        let handles: Vec<_> = rules
            .iter()
            .map(|rule| {
                scope.spawn(move || {
                    log::info!("running {rule}");
                    rule.apply(profile)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| CliError::Usage("a rule thread panicked".into()))?.map_err(CliError::from))
            .collect()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleAssignment {
    pub rule: String,
    pub entries: Vec<Vec<String>>,
    pub decimals: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxRankRow {
    pub rule: String,
    /// Worst rank any agent receives with positive probability.
    pub max_rank: usize,
    /// Expected number of agents receiving an object of that rank.
    pub expected_at_max_rank: Cell,
}

/// Expected number of agents receiving their rank-`k` object, one value per
/// rule in `rules` order.
#[derive(Clone, Debug, Serialize)]
pub struct RankCountRow {
    pub k: usize,
    pub values: Vec<Cell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnvyRow {
    pub rule: String,
    /// Agents whose allocation fails to sd-dominate someone else's.
    pub enviers: usize,
    pub share: Cell,
    /// Mean number of agents sd-envied, over agents who envy.
    pub avg_envied: Option<Cell>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    First,
    Second,
    Equal,
    Incomparable,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairwiseRow {
    pub first: String,
    pub second: String,
    /// Agents whose first-rule allocation strictly sd-dominates the second's.
    pub prefer_first: usize,
    pub prefer_second: usize,
    /// Equal or sd-incomparable allocations.
    pub prefer_neither: usize,
    pub per_agent: Vec<Preference>,
}

/// `values[k - 1]` = expected number of agents receiving rank `k` or better.
#[derive(Clone, Debug, Serialize)]
pub struct CdfSeries {
    pub rule: String,
    pub values: Vec<Cell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportBundle {
    pub schema_version: u32,
    pub n: usize,
    pub agents: Vec<String>,
    pub objects: Vec<String>,
    pub rules: Vec<String>,
    pub assignments: Vec<RuleAssignment>,
    pub max_rank: Vec<MaxRankRow>,
    pub expected_rank_counts: Vec<RankCountRow>,
    pub envy: Vec<EnvyRow>,
    pub pairwise: Vec<PairwiseRow>,
    pub cdf: Vec<CdfSeries>,
}

/// Output of `compare`: the preference tables and both rank tables.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub schema_version: u32,
    pub agents: Vec<String>,
    pub rules: Vec<String>,
    pub pairwise: Vec<PairwiseRow>,
    pub max_rank: Vec<MaxRankRow>,
    pub expected_rank_counts: Vec<RankCountRow>,
}

pub fn preference(profile: &PreferenceProfile, agent: usize, x: &Assignment, y: &Assignment) -> Preference {
    let (a, b) = (x.row(agent), y.row(agent));
    if a == b {
        Preference::Equal
    } else if sd_dominates(profile, agent, a, b) {
        Preference::First
    } else if sd_dominates(profile, agent, b, a) {
        Preference::Second
    } else {
        Preference::Incomparable
    }
}

pub fn pairwise(profile: &PreferenceProfile, names: &[String], xs: &[Assignment]) -> Vec<PairwiseRow> {
    let mut rows = Vec::new();
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            let per_agent: Vec<Preference> = (0..profile.n()).map(|i| preference(profile, i, &xs[a], &xs[b])).collect();
            let count = |p: Preference| per_agent.iter().filter(|&&v| v == p).count();
            rows.push(PairwiseRow {
                first: names[a].clone(),
                second: names[b].clone(),
                prefer_first: count(Preference::First),
                prefer_second: count(Preference::Second),
                prefer_neither: count(Preference::Equal) + count(Preference::Incomparable),
                per_agent,
            });
        }
    }
    rows
}

fn rank_tables(
    profile: &PreferenceProfile,
    names: &[String],
    xs: &[Assignment],
) -> Result<(Vec<MaxRankRow>, Vec<RankCountRow>, Vec<Vec<Q>>)> {
    let dists = xs.iter().map(|x| rank_distribution(profile, x)).collect::<Result<Vec<_>, _>>()?;
    let mut max_rank = Vec::new();
    for ((name, x), d) in names.iter().zip(xs).zip(&dists) {
        let k = support_max_rank(profile, x)?;
        max_rank.push(MaxRankRow { rule: name.clone(), max_rank: k, expected_at_max_rank: Cell::from(&d.e[k - 1]) });
    }
    let counts = (1..=profile.n())
        .map(|k| RankCountRow { k, values: dists.iter().map(|d| Cell::from(&d.e[k - 1])).collect() })
        .collect();
    let cumulative = dists
        .iter()
        .map(|d| {
            d.e.iter()
                .scan(Q::from_integer(0.into()), |acc, e| {
                    *acc += e;
                    Some(acc.clone())
                })
                .collect()
        })
        .collect();
    Ok((max_rank, counts, cumulative))
}

pub fn compare(profile: &PreferenceProfile, rules: &[Rule]) -> Result<Comparison> {
    let xs = run_rules(profile, rules)?;
    let names: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
    let (max_rank, expected_rank_counts, _) = rank_tables(profile, &names, &xs)?;
    Ok(Comparison {
        schema_version: SCHEMA_VERSION,
        agents: profile.agents().to_vec(),
        pairwise: pairwise(profile, &names, &xs),
        rules: names,
        max_rank,
        expected_rank_counts,
    })
}

pub fn report(profile: &PreferenceProfile, rules: &[Rule]) -> Result<ReportBundle> {
    let xs = run_rules(profile, rules)?;
    let names: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
    let n = profile.n();
    let (max_rank, expected_rank_counts, cumulative) = rank_tables(profile, &names, &xs)?;
    let mut envy = Vec::new();
    for (name, x) in names.iter().zip(&xs) {
        let r = envy_report(profile, x)?;
        envy.push(EnvyRow {
            rule: name.clone(),
            enviers: r.enviers,
            share: Cell::from(&q(r.enviers as i64, n as i64)),
            avg_envied: r.avg_envied.as_ref().map(Cell::from),
        });
    }
    let assignments = names
        .iter()
        .zip(&xs)
        .map(|(name, x)| RuleAssignment {
            rule: name.clone(),
            entries: x.rows().iter().map(|r| r.iter().map(format_q).collect()).collect(),
            decimals: x.rows().iter().map(|r| r.iter().map(decimal).collect()).collect(),
        })
        .collect();
    let cdf = names
        .iter()
        .zip(&cumulative)
        .map(|(name, c)| CdfSeries { rule: name.clone(), values: c.iter().map(Cell::from).collect() })
        .collect();
    Ok(ReportBundle {
        schema_version: SCHEMA_VERSION,
        n,
        agents: profile.agents().to_vec(),
        objects: profile.objects().to_vec(),
        pairwise: pairwise(profile, &names, &xs),
        rules: names,
        assignments,
        max_rank,
        expected_rank_counts,
        envy,
        cdf,
    })
}

/// Plot data: header `k,<rules>`, one row per rank with decimal values.
pub fn cdf_csv(bundle: &ReportBundle) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = std::iter::once("k".to_string()).chain(bundle.rules.iter().cloned()).collect();
    write_record(&mut writer, &header)?;
    for k in 1..=bundle.n {
        let row: Vec<String> = std::iter::once(k.to_string())
            .chain(bundle.cdf.iter().map(|s| s.values[k - 1].decimal.clone()))
            .collect();
        write_record(&mut writer, &row)?;
    }
    finish_csv(writer)
}
