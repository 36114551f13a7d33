//! Command-line definitions and subcommand implementations. Commands return
//! artifacts; the caller writes them one at a time.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rawlsian_core::analysis::{
    bvn_decompose, bvn_term_bound, egalitarian_check, envy_report, obvious_manipulability_probe, rank_distribution,
    rank_efficient, sd_efficient, support_max_rank, swap_probe, PROBE_HARD_LIMIT,
};
use rawlsian_core::model::default_object_names;
use rawlsian_core::ratio::format_q;
use rawlsian_core::synth::{generate, ProfileModel};
use rawlsian_core::{PreferenceProfile, Rule, SigmaOrder};
use serde_json::{json, Value};

use crate::assignment::{emit_assignment, read_assignment, Cell, NamedAssignment};
use crate::error::{CliError, Result};
use crate::problem::{emit_problem, read_problem, to_json, Format, Problem};
use crate::report::{cdf_csv, compare, report};

#[derive(Debug, Parser)]
#[command(name = "rawlsian", version, about = "Fair random assignment: solve, analyze and compare rules")]
pub struct Cli {
    /// Seed for all randomness: MTAV tie-breaks, generators and probes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply one rule to a problem.
    Solve(SolveArgs),
    /// Run diagnostics on a given assignment.
    Analyze(AnalyzeArgs),
    /// Pairwise sd-preference counts and rank tables for several rules.
    Compare(CompareArgs),
    /// Write an assignment as a lottery over deterministic assignments.
    Decompose(DecomposeArgs),
    /// Exhaustive manipulability or random swap-axiom probes.
    Probe(ProbeArgs),
    /// Generate a synthetic problem.
    Gen(GenArgs),
    /// Full multi-rule report with the cumulative rank distribution.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleName {
    Rawlsian,
    Ps,
    Mtav,
    Sigma,
    Boston,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Envy,
    Sd,
    Rank,
    Egalitarian,
    Maxrank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Uniform,
    PlackettLuce,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Problem file (JSON, or CSV by extension).
    #[arg(long)]
    pub input: PathBuf,
    /// Overrides the format implied by the extension.
    #[arg(long)]
    pub input_format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub rule: RuleName,
    /// Rank order for `--rule sigma`, e.g. "3,2".
    #[arg(long)]
    pub sigma: Option<String>,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Assignment file (JSON, or CSV by extension).
    #[arg(long)]
    pub assignment: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "envy,sd,rank,egalitarian,maxrank")]
    pub checks: Vec<Check>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', default_value = "rawlsian,ps")]
    pub rules: Vec<RuleName>,
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub assignment: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["manipulability", "swaps"])))]
pub struct ProbeArgs {
    /// Enumerate every profile and misreport for obvious manipulations.
    #[arg(long)]
    pub manipulability: bool,
    /// Tally swap-monotonicity and invariance violations on random swaps.
    #[arg(long)]
    pub swaps: bool,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "rawlsian")]
    pub rule: RuleName,
    #[arg(long)]
    pub sigma: Option<String>,
    /// Number of random swaps.
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// Largest n the enumeration accepts.
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "uniform")]
    pub model: Model,
    /// Positive object weights for plackett-luce, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<f64>,
    #[arg(long, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', default_value = "rawlsian,ps,mtav")]
    pub rules: Vec<RuleName>,
    #[arg(long)]
    pub sigma: Option<String>,
    /// JSON bundle destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cumulative rank distribution as CSV plot data.
    #[arg(long)]
    pub cdf: Option<PathBuf>,
}

/// Text bound for a file, or for stdout when `path` is `None`.
#[derive(Debug, PartialEq, Eq)]
pub struct Artifact {
    pub path: Option<PathBuf>,
    pub text: String,
}

fn artifact(path: Option<PathBuf>, text: String) -> Vec<Artifact> {
    vec![Artifact { path, text }]
}

pub fn run(cli: Cli) -> Result<Vec<Artifact>> {
    let seed = cli.seed;
    match cli.command {
        Command::Solve(a) => solve(a, seed),
        Command::Analyze(a) => analyze(a),
        Command::Compare(a) => {
            let problem = load(&a.input)?;
            let rules = resolve_rules(&a.rules, a.sigma.as_deref(), seed, problem.profile.n())?;
            Ok(artifact(a.out, to_json(&compare(&problem.profile, &rules)?)))
        }
        Command::Decompose(a) => decompose(a),
        Command::Probe(a) => probe(a, seed),
        Command::Gen(a) => gen(a, seed),
        Command::Report(a) => {
            let problem = load(&a.input)?;
            let rules = resolve_rules(&a.rules, a.sigma.as_deref(), seed, problem.profile.n())?;
            let bundle = report(&problem.profile, &rules)?;
            let mut out = artifact(a.out, to_json(&bundle));
            if let Some(path) = a.cdf {
                out.push(Artifact { path: Some(path), text: cdf_csv(&bundle)? });
            }
            Ok(out)
        }
    }
}

fn load(input: &InputArgs) -> Result<Problem> {
    read_problem(&input.input, input.input_format)
}

fn parse_sigma(text: &str, n: usize) -> Result<SigmaOrder> {
    let order = text
        .split(',')
        .map(|k| k.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("--sigma: '{k}' is not a rank"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(SigmaOrder::new(n, order)?)
}

fn resolve_rules(names: &[RuleName], sigma: Option<&str>, seed: u64, n: usize) -> Result<Vec<Rule>> {
    if sigma.is_some() && !names.contains(&RuleName::Sigma) {
        return Err(CliError::Usage("--sigma is only valid with the sigma rule".into()));
    }
    names
        .iter()
        .map(|name| match name {
            RuleName::Rawlsian => Ok(Rule::Rawlsian),
            RuleName::Ps => Ok(Rule::ProbabilisticSerial),
            RuleName::Boston => Ok(Rule::FractionalBoston),
            RuleName::Mtav => Ok(Rule::Mtav { seed }),
            RuleName::Sigma => {
                let text = sigma.ok_or_else(|| CliError::Usage("the sigma rule needs --sigma".into()))?;
                Ok(Rule::Sigma(parse_sigma(text, n)?))
            }
        })
        .collect()
}

fn solve(a: SolveArgs, seed: u64) -> Result<Vec<Artifact>> {
    let problem = load(&a.input)?;
    let profile = &problem.profile;
    let rule = resolve_rules(&[a.rule], a.sigma.as_deref(), seed, profile.n())?.remove(0);
    let x = rule.apply(profile)?;
    let named = NamedAssignment::for_profile(profile, Some(rule.to_string()), x);
    Ok(artifact(a.out, emit_assignment(&named, a.format)?))
}

fn analyze(a: AnalyzeArgs) -> Result<Vec<Artifact>> {
    let problem = load(&a.input)?;
    let p = &problem.profile;
    let named = read_assignment(&a.assignment, None)?;
    named.check_against(p, &a.assignment.display().to_string())?;
    let x = &named.assignment;
    let mut checks = serde_json::Map::new();
    for check in &a.checks {
        let value = match check {
            Check::Envy => {
                let r = envy_report(p, x)?;
                let pairs: Vec<Value> = pairs_where(&r.violation, p);
                json!({
                    "enviers": r.enviers,
                    "weak_enviers": r.weak_enviers,
                    "avg_envied": r.avg_envied.as_ref().map(Cell::from),
                    "envy_pairs": pairs,
                })
            }
            Check::Sd => {
                let r = sd_efficient(p, x)?;
                let cycle: Option<Vec<Value>> = r.cycle.map(|c| {
                    c.iter()
                        .map(|e| {
                            json!({
                                "agent": p.agents()[e.agent],
                                "gives": p.objects()[e.gives],
                                "receives": p.objects()[e.receives],
                            })
                        })
                        .collect()
                });
                json!({ "efficient": r.efficient, "lp_gain": Cell::from(&r.lp_gain), "improving_cycle": cycle })
            }
            Check::Rank => {
                let d = rank_distribution(p, x)?;
                json!({
                    "expected_counts": d.e.iter().map(Cell::from).collect::<Vec<_>>(),
                    "at_or_below": d.m.iter().map(Cell::from).collect::<Vec<_>>(),
                    "rank_efficient": rank_efficient(p, x)?,
                })
            }
            Check::Egalitarian => {
                let r = egalitarian_check(p, x)?;
                let (agent, witness) = match &r.witness {
                    Some((j, w)) => (
                        Some(p.agents()[*j].clone()),
                        Some(w.rows().iter().map(|r| r.iter().map(format_q).collect::<Vec<_>>()).collect::<Vec<_>>()),
                    ),
                    None => (None, None),
                };
                json!({ "egalitarian": r.egalitarian, "beaten_agent": agent, "witness": witness })
            }
            Check::Maxrank => {
                let k = support_max_rank(p, x)?;
                let d = rank_distribution(p, x)?;
                json!({ "max_rank": k, "expected_at_max_rank": Cell::from(&d.e[k - 1]) })
            }
        };
        checks.insert(check_name(*check).to_string(), value);
    }
    let doc = json!({ "rule": named.rule, "checks": checks });
    Ok(artifact(a.out, to_json(&doc)))
}

fn check_name(check: Check) -> &'static str {
    match check {
        Check::Envy => "envy",
        Check::Sd => "sd",
        Check::Rank => "rank",
        Check::Egalitarian => "egalitarian",
        Check::Maxrank => "maxrank",
    }
}

fn pairs_where(matrix: &[Vec<bool>], p: &PreferenceProfile) -> Vec<Value> {
    let mut pairs = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v {
                pairs.push(json!([p.agents()[i], p.agents()[j]]));
            }
        }
    }
    pairs
}

fn decompose(a: DecomposeArgs) -> Result<Vec<Artifact>> {
    let named = read_assignment(&a.assignment, None)?;
    let d = bvn_decompose(&named.assignment)?;
    let terms: Vec<Value> = d
        .terms
        .iter()
        .map(|(w, perm)| {
            let objects: Vec<&str> = perm.as_slice().iter().map(|&o| named.objects[o].as_str()).collect();
            json!({ "weight": Cell::from(w), "objects": objects })
        })
        .collect();
    let doc = json!({
        "agents": named.agents,
        "term_bound": bvn_term_bound(named.assignment.n()),
        "terms": terms,
    });
    Ok(artifact(a.out, to_json(&doc)))
}

fn probe(a: ProbeArgs, seed: u64) -> Result<Vec<Artifact>> {
    let rule = resolve_rules(&[a.rule], a.sigma.as_deref(), seed, a.n.max(1))?.remove(0);
    let doc = if a.manipulability {
        if a.max_n > PROBE_HARD_LIMIT {
            return Err(CliError::Usage(format!("--max-n is at most {PROBE_HARD_LIMIT}")));
        }
        let r = obvious_manipulability_probe(a.n, &rule, a.max_n)?;
        let names = default_object_names(a.n);
        let objects = |order: &[usize]| order.iter().map(|&o| names[o].as_str()).collect::<String>();
        let obvious: Vec<Value> = r
            .obvious_manipulations()
            .map(|m| {
                json!({
                    "agent": m.agent + 1,
                    "truth": objects(&m.truth),
                    "misreport": objects(&m.misreport),
                    "worst": [m.worst_truthful, m.worst_misreport],
                    "best": [m.best_truthful, m.best_misreport],
                })
            })
            .collect();
        let witnesses: Vec<Value> = r
            .profile_witnesses
            .iter()
            .map(|w| {
                json!({
                    "profile": w.truthful_profile.iter().map(|o| objects(o)).collect::<Vec<_>>(),
                    "agent": w.agent + 1,
                    "misreport": objects(&w.misreport),
                    "worst": [w.worst.0, w.worst.1],
                    "best": [w.best.0, w.best.1],
                })
            })
            .collect();
        json!({
            "rule": r.rule,
            "n": r.n,
            "misreports_checked": r.records.len(),
            "obviously_manipulable": r.is_obviously_manipulable(),
            "obvious_manipulations": obvious,
            "profile_witness_count": r.profile_witness_count,
            "profile_witnesses": witnesses,
        })
    } else {
        let s = swap_probe(&rule, a.n, a.trials, seed)?;
        json!({
            "rule": rule.to_string(),
            "n": a.n,
            "seed": seed,
            "trials": s.trials,
            "swap_monotonicity_violations": s.swap_monotonicity_violations,
            "upper_invariance_violations": s.upper_invariance_violations,
            "lower_invariance_violations": s.lower_invariance_violations,
        })
    };
    Ok(artifact(a.out, to_json(&doc)))
}

fn gen(a: GenArgs, seed: u64) -> Result<Vec<Artifact>> {
    let model = match a.model {
        Model::Uniform if a.weights.is_empty() => ProfileModel::Uniform,
        Model::Uniform => return Err(CliError::Usage("--weights requires --model plackett-luce".into())),
        Model::PlackettLuce => ProfileModel::PlackettLuce(a.weights),
    };
    let profile = generate(a.n, &model, seed)?;
    Ok(artifact(a.out, emit_problem(&Problem::new(profile), a.format)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_flag_requires_sigma_rule() {
        let err = resolve_rules(&[RuleName::Rawlsian], Some("3,2"), 0, 3).unwrap_err();
        assert!(err.to_string().contains("--sigma"));
        assert!(resolve_rules(&[RuleName::Sigma], None, 0, 3).is_err());
        let rules = resolve_rules(&[RuleName::Sigma, RuleName::Mtav], Some("2,3"), 9, 3).unwrap();
        assert_eq!(rules[0], Rule::Sigma(SigmaOrder::ascending(3)));
        assert_eq!(rules[1], Rule::Mtav { seed: 9 });
        assert_eq!(resolve_rules(&[RuleName::Sigma], Some("2,2"), 0, 3).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
