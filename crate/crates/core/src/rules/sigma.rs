//! The Rawlsian rule and its σ-minimal generalisation.
//!
//! Ranks are processed in the order given by a [`SigmaOrder`]. For each rank
//! `k` the solver repeatedly (a) minimises the common bound `b*` on the
//! cumulative mass `b_i(k)` of the agents not yet fixed at `k`, and (b)
//! probes each such agent for slack below `b*`; agents with no slack are
//! fixed at `b*`. Once every (agent, rank) pair is fixed, the assignment is
//! read off by consecutive differences.
//!
//! Two LP encodings are available. [`LpForm::Verbatim`] states every fixed
//! pair as its own cumulative equality over all `n²` entries.
//! [`LpForm::Reduced`] substitutes entries pinned by consecutive fixed ranks
//! and keeps one equality per unpinned segment; it describes the same
//! feasible set with far fewer columns and is the default.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, build_bistochastic, LinExpr, LinearProgram, Relation, Sense, VarId};
use crate::model::{Assignment, PreferenceProfile, SigmaOrder};
use crate::ratio::Q;

/// Cumulative values `b_i(t)` fixed so far, keyed by agent then rank.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FixedLedger {
    n: usize,
    values: Vec<BTreeMap<usize, Q>>,
}

impl FixedLedger {
    pub fn new(n: usize) -> Self {
        Self { n, values: vec![BTreeMap::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, agent: usize, rank: usize) -> Option<&Q> {
        self.values[agent].get(&rank)
    }

    pub fn is_fixed(&self, agent: usize, rank: usize) -> bool {
        self.values[agent].contains_key(&rank)
    }

    /// Agents in `I_k`.
    pub fn fixed_agents(&self, rank: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| self.is_fixed(i, rank)).collect()
    }

    /// Fixed (rank, value) pairs of one agent, ascending by rank.
    pub fn entries(&self, agent: usize) -> impl Iterator<Item = (usize, &Q)> {
        self.values[agent].iter().map(|(k, v)| (*k, v))
    }

    fn fix(&mut self, agent: usize, rank: usize, value: Q) -> Result<()> {
        if let Some(old) = self.values[agent].insert(rank, value) {
            return Err(Error::Invariant(format!(
                "agent {agent} fixed twice at rank {rank} (previously {old})"
            )));
        }
        // b_i is non-increasing in the rank
        let mut prev: Option<&Q> = None;
        for v in self.values[agent].values() {
            if prev.is_some_and(|p| p < v) {
                return Err(Error::Invariant(format!(
                    "fixed values of agent {agent} increase with rank"
                )));
            }
            prev = Some(v);
        }
        Ok(())
    }

    /// Maximal rank intervals `[start, end)` whose total mass is known,
    /// including the implicit `b_i(1) = 1` and `b_i(n + 1) = 0`.
    fn segments(&self, agent: usize) -> Vec<Segment> {
        let mut bounds: Vec<(usize, Q)> = vec![(1, Q::one())];
        bounds.extend(
            self.values[agent].iter().filter(|(k, _)| **k > 1).map(|(k, v)| (*k, v.clone())),
        );
        bounds.push((self.n + 1, Q::zero()));
        bounds
            .windows(2)
            .map(|w| Segment { start: w[0].0, end: w[1].0, mass: &w[0].1 - &w[1].1, tail: w[1].1.clone() })
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Segment {
    start: usize,
    end: usize,
    mass: Q,
    /// `b_i(end)`
    tail: Q,
}

/// How each probe LP is encoded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LpForm {
    #[default]
    Reduced,
    Verbatim,
}

/// How the final matrix is recovered from the fully fixed ledger.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Extraction {
    /// `x[i][rank-k object] = b_i(k) - b_i(k + 1)`.
    #[default]
    Differences,
    /// Any feasible point of the verbatim system with every pair fixed.
    FeasibilityLp,
    /// Both, failing with an invariant error if they disagree.
    CrossCheck,
}

/// Result of a σ-minimal computation together with solver statistics.
#[derive(Clone, Debug)]
pub struct SigmaOutcome {
    pub assignment: Assignment,
    pub ledger: FixedLedger,
    pub lp_solves: usize,
    /// Probes avoided because an earlier solution already showed slack.
    pub probes_skipped: usize,
}

/// Configurable σ-minimal solver.
pub struct SigmaMinimal<'a> {
    scan_order: Option<Vec<usize>>,
    form: LpForm,
    extraction: Extraction,
    use_witnesses: bool,
    observer: Option<Box<dyn FnMut(&LinearProgram) + 'a>>,
}

impl Default for SigmaMinimal<'_> {
    fn default() -> Self {
        Self {
            scan_order: None,
            form: LpForm::default(),
            extraction: Extraction::default(),
            use_witnesses: true,
            observer: None,
        }
    }
}

impl<'a> SigmaMinimal<'a> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Order in which unfixed agents are probed (default ascending index).
    pub fn scan_order(mut self, order: Vec<usize>) -> Self {
        self.scan_order = Some(order);
        self
    }

    pub fn form(mut self, form: LpForm) -> Self {
        self.form = form;
        self
    }

    pub fn extraction(mut self, extraction: Extraction) -> Self {
        self.extraction = extraction;
        self
    }

    /// When enabled (default), an agent already seen strictly below `b*` in
    /// some solved LP of the current round is not probed.
    pub fn use_witnesses(mut self, on: bool) -> Self {
        self.use_witnesses = on;
        self
    }

    /// Called with every LP before it is solved.
    pub fn observe(mut self, f: impl FnMut(&LinearProgram) + 'a) -> Self {
        self.observer = Some(Box::new(f));
        self
    }

    pub fn solve(&mut self, profile: &PreferenceProfile, sigma: &SigmaOrder) -> Result<SigmaOutcome> {
        let n = profile.n();
        if sigma.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: sigma.n() });
        }
        let scan: Vec<usize> = match &self.scan_order {
            Some(order) => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                if sorted != (0..n).collect::<Vec<_>>() {
                    return Err(Error::InvalidProfile(format!(
                        "scan order {order:?} is not a permutation of the agents"
                    )));
                }
                order.clone()
            }
            None => (0..n).collect(),
        };

        let mut ledger = FixedLedger::new(n);
        let mut lp_solves = 0;
        let mut probes_skipped = 0;
        for &k in sigma.ranks() {
            loop {
                let unfixed: Vec<usize> =
                    scan.iter().copied().filter(|&i| !ledger.is_fixed(i, k)).collect();
                if unfixed.is_empty() {
                    break;
                }

                let mut sys = System::build(profile, &ledger, self.form);
                let b = sys.lp.add_var("b");
                for &i in &unfixed {
                    let expr = sys.cumulative(profile, &ledger, i, k);
                    sys.add_le(expr, LinExpr::var(b))?;
                }
                sys.lp.set_objective(Sense::Minimize, [(b, Q::one())])?;
                let sol = self.run(&sys.lp, &mut lp_solves)?;
                let bstar = sol.objective.clone().expect("optimal");
                log::debug!("rank {k}: b* = {bstar} over {} unfixed agents", unfixed.len());

                if bstar.is_zero() {
                    for &i in &unfixed {
                        ledger.fix(i, k, Q::zero())?;
                    }
                    continue;
                }

                let mut slack = vec![false; n];
                if self.use_witnesses {
                    sys.mark_slack(profile, &ledger, &unfixed, k, &bstar, sol.values(), &mut slack);
                }
                let mut forced = Vec::new();
                for &probe in &unfixed {
                    if slack[probe] {
                        probes_skipped += 1;
                        continue;
                    }
                    let mut sys = System::build(profile, &ledger, self.form);
                    let eps = sys.lp.add_var("eps");
                    for &i in &unfixed {
                        let expr = sys.cumulative(profile, &ledger, i, k);
                        let bound = if i == probe {
                            LinExpr::constant(bstar.clone()).plus(eps, -Q::one())
                        } else {
                            LinExpr::constant(bstar.clone())
                        };
                        sys.add_le(expr, bound)?;
                    }
                    sys.lp.set_objective(Sense::Maximize, [(eps, Q::one())])?;
                    let sol = self.run(&sys.lp, &mut lp_solves)?;
                    if sol.objective.as_ref().is_some_and(|e| e.is_zero()) {
                        forced.push(probe);
                    } else if self.use_witnesses {
                        sys.mark_slack(profile, &ledger, &unfixed, k, &bstar, sol.values(), &mut slack);
                    }
                }
                if forced.is_empty() {
                    return Err(Error::Invariant(format!(
                        "no agent is tight at b* = {bstar} for rank {k}"
                    )));
                }
                for i in forced {
                    ledger.fix(i, k, bstar.clone())?;
                }
            }
        }

        let assignment = match self.extraction {
            Extraction::Differences => from_differences(profile, &ledger)?,
            Extraction::FeasibilityLp => {
                lp_solves += 1;
                from_feasibility_lp(profile, &ledger)?
            }
            Extraction::CrossCheck => {
                lp_solves += 1;
                let a = from_differences(profile, &ledger)?;
                let b = from_feasibility_lp(profile, &ledger)?;
                if a != b {
                    return Err(Error::Invariant(
                        "difference extraction disagrees with the feasibility LP".into(),
                    ));
                }
                a
            }
        };
        Ok(SigmaOutcome { assignment, ledger, lp_solves, probes_skipped })
    }

    fn run(&mut self, lp: &LinearProgram, counter: &mut usize) -> Result<lp::LpSolution> {
        if let Some(f) = self.observer.as_mut() {
            f(lp);
        }
        *counter += 1;
        let sol = lp::solve(lp)?;
        if !sol.is_optimal() {
            return Err(Error::Invariant(format!("probe LP ended {:?}", sol.status)));
        }
        Ok(sol)
    }
}

/// The unique σ-minimal assignment.
pub fn sigma_minimal(profile: &PreferenceProfile, sigma: &SigmaOrder) -> Result<Assignment> {
    Ok(SigmaMinimal::new().solve(profile, sigma)?.assignment)
}

/// The unique Rawlsian assignment (σ = (n, n-1, ..., 2)).
pub fn rawlsian(profile: &PreferenceProfile) -> Result<Assignment> {
    sigma_minimal(profile, &SigmaOrder::rawlsian(profile.n()))
}

/// Upper bound on LP solves for the Rawlsian rule: `n²(n+1)/2`.
pub fn lp_solve_bound(n: usize) -> usize {
    n * n * (n + 1) / 2
}

#[derive(Clone, Debug)]
enum Entry {
    Var(VarId),
    Pinned(Q),
}

/// One probe LP under construction.
struct System {
    lp: LinearProgram,
    form: LpForm,
    /// `entries[i][o]`
    entries: Vec<Vec<Entry>>,
    /// per agent, the segment containing each rank (reduced form only)
    segment_of: Vec<Vec<usize>>,
    segments: Vec<Vec<Segment>>,
}

impl System {
    fn build(profile: &PreferenceProfile, ledger: &FixedLedger, form: LpForm) -> System {
        match form {
            LpForm::Verbatim => Self::build_verbatim(profile, ledger),
            LpForm::Reduced => Self::build_reduced(profile, ledger),
        }
    }

    fn build_verbatim(profile: &PreferenceProfile, ledger: &FixedLedger) -> System {
        let n = profile.n();
        let mut alp = build_bistochastic(n);
        for i in 0..n {
            for (t, v) in ledger.entries(i) {
                alp.add_cumulative_constraint(profile, i, t, Relation::Eq, &LinExpr::constant(v.clone()))
                    .expect("indices are in range");
            }
        }
        let entries = alp.x.iter().map(|row| row.iter().map(|&v| Entry::Var(v)).collect()).collect();
        System { lp: alp.lp, form: LpForm::Verbatim, entries, segment_of: Vec::new(), segments: Vec::new() }
    }

    fn build_reduced(profile: &PreferenceProfile, ledger: &FixedLedger) -> System {
        let n = profile.n();
        let mut lp = LinearProgram::new();
        let mut entries: Vec<Vec<Entry>> = vec![vec![Entry::Pinned(Q::zero()); n]; n];
        let mut segment_of = vec![vec![0; n + 2]; n];
        let mut all_segments = Vec::with_capacity(n);
        for i in 0..n {
            let segments = ledger.segments(i);
            for (s_idx, seg) in segments.iter().enumerate() {
                for r in seg.start..seg.end {
                    segment_of[i][r] = s_idx;
                }
                let objects = (seg.start..seg.end).map(|r| profile.object_at(i, r));
                if seg.end - seg.start == 1 {
                    entries[i][profile.object_at(i, seg.start)] = Entry::Pinned(seg.mass.clone());
                } else if seg.mass.is_zero() {
                    // already zero-initialised
                } else {
                    let vars: Vec<VarId> = objects
                        .map(|o| {
                            let v = lp.add_var(format!("x_{i}_{o}"));
                            entries[i][o] = Entry::Var(v);
                            v
                        })
                        .collect();
                    lp.add_constraint(vars.into_iter().map(|v| (v, Q::one())), Relation::Eq, seg.mass.clone())
                        .expect("declared above");
                }
            }
            all_segments.push(segments);
        }
        for o in 0..n {
            let mut rhs = Q::one();
            let mut terms = Vec::new();
            for row in &entries {
                match &row[o] {
                    Entry::Var(v) => terms.push((*v, Q::one())),
                    Entry::Pinned(c) => rhs -= c,
                }
            }
            lp.add_constraint(terms, Relation::Eq, rhs).expect("declared above");
        }
        System { lp, form: LpForm::Reduced, entries, segment_of, segments: all_segments }
    }

    /// `b_i(k)` as an affine expression of the LP variables.
    fn cumulative(&self, profile: &PreferenceProfile, _ledger: &FixedLedger, i: usize, k: usize) -> LinExpr {
        let n = profile.n();
        let (end, tail) = match self.form {
            LpForm::Verbatim => (n + 1, Q::zero()),
            LpForm::Reduced => {
                let seg = &self.segments[i][self.segment_of[i][k]];
                (seg.end, seg.tail.clone())
            }
        };
        let mut expr = LinExpr::constant(tail);
        for r in k..end {
            match &self.entries[i][profile.object_at(i, r)] {
                Entry::Var(v) => expr.terms.push((*v, Q::one())),
                Entry::Pinned(c) => expr.constant += c,
            }
        }
        expr
    }

    /// Adds `lhs <= rhs`.
    fn add_le(&mut self, lhs: LinExpr, rhs: LinExpr) -> Result<()> {
        let mut terms = lhs.terms;
        terms.extend(rhs.terms.into_iter().map(|(v, c)| (v, -c)));
        self.lp.add_constraint(terms, Relation::Le, rhs.constant - lhs.constant)?;
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn mark_slack(
        &self,
        profile: &PreferenceProfile,
        ledger: &FixedLedger,
        unfixed: &[usize],
        k: usize,
        bstar: &Q,
        values: &[Q],
        slack: &mut [bool],
    ) {
        for &i in unfixed {
            let expr = self.cumulative(profile, ledger, i, k);
            let v: Q = expr.terms.iter().map(|(var, c)| c * &values[var.index()]).sum::<Q>() + &expr.constant;
            if &v < bstar {
                slack[i] = true;
            }
        }
    }
}

fn from_differences(profile: &PreferenceProfile, ledger: &FixedLedger) -> Result<Assignment> {
    let n = profile.n();
    let b = |i: usize, k: usize| -> Result<Q> {
        if k == 1 {
            return Ok(Q::one());
        }
        if k == n + 1 {
            return Ok(Q::zero());
        }
        ledger
            .get(i, k)
            .cloned()
            .ok_or_else(|| Error::Invariant(format!("b_{i}({k}) was never fixed")))
    };
    let mut p = vec![vec![Q::zero(); n]; n];
    for (i, row) in p.iter_mut().enumerate() {
        for k in 1..=n {
            row[profile.object_at(i, k)] = b(i, k)? - b(i, k + 1)?;
        }
    }
    Assignment::new(p).map_err(|e| Error::Invariant(format!("extracted matrix: {e}")))
}

fn from_feasibility_lp(profile: &PreferenceProfile, ledger: &FixedLedger) -> Result<Assignment> {
    let sys = System::build_verbatim(profile, ledger);
    let sol = lp::solve(&sys.lp)?;
    if !sol.is_optimal() {
        return Err(Error::Invariant(format!("fully fixed system is {:?}", sol.status)));
    }
    let p = sys
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    Entry::Var(v) => sol.value(*v).clone(),
                    Entry::Pinned(c) => c.clone(),
                })
                .collect()
        })
        .collect();
    Assignment::new(p).map_err(|e| Error::Invariant(format!("feasibility point: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{q, qi};

    fn m(rows: &[&[(i64, i64)]]) -> Assignment {
        Assignment::new(rows.iter().map(|r| r.iter().map(|&(a, b)| q(a, b)).collect()).collect())
            .unwrap()
    }

    fn letters(rows: &[&str]) -> PreferenceProfile {
        PreferenceProfile::from_letters(rows).unwrap()
    }

    #[test]
    fn shared_top() {
        let x = rawlsian(&letters(&["abc", "abc", "bca"])).unwrap();
        assert_eq!(x, m(&[&[(1, 2), (1, 2), (0, 1)], &[(1, 2), (1, 2), (0, 1)], &[(0, 1), (0, 1), (1, 1)]]));
    }

    #[test]
    fn manipulation_example() {
        let x = rawlsian(&letters(&["abc", "bca", "bca"])).unwrap();
        assert_eq!(x, m(&[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 2), (1, 2)], &[(0, 1), (1, 2), (1, 2)]]));
        let y = rawlsian(&letters(&["abc", "bac", "bca"])).unwrap();
        assert_eq!(y, m(&[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 1), (0, 1)], &[(0, 1), (0, 1), (1, 1)]]));
    }

    #[test]
    fn swap_counterexample() {
        let x = rawlsian(&letters(&["cab", "bca", "bca"])).unwrap();
        assert_eq!(x, m(&[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 2), (1, 2)], &[(0, 1), (1, 2), (1, 2)]]));
        let x2 = rawlsian(&letters(&["cba", "bca", "bca"])).unwrap();
        assert_eq!(x2, m(&[&[(1, 3), (0, 1), (2, 3)], &[(1, 3), (1, 2), (1, 6)], &[(1, 3), (1, 2), (1, 6)]]));
    }

    fn seven_agent_profile() -> PreferenceProfile {
        // tails beyond the listed choices completed alphabetically
        letters(&["abecdfg", "abcdefg", "cbadefg", "cbadefg", "daebcfg", "daebcfg", "daebcfg"])
    }

    fn top3(p: &PreferenceProfile, x: &Assignment, i: usize) -> Vec<Q> {
        (1..=3).map(|k| x.get(i, p.object_at(i, k)).clone()).collect()
    }

    #[test]
    fn ascending_sigma_on_seven_agents() {
        let p = seven_agent_profile();
        let x = sigma_minimal(&p, &SigmaOrder::ascending(7)).unwrap();
        for i in 0..4 {
            assert_eq!(top3(&p, &x, i), vec![q(1, 2), q(1, 4), qi(0)]);
        }
        for i in 4..7 {
            assert_eq!(top3(&p, &x, i), vec![q(1, 3), qi(0), q(1, 3)]);
        }
        assert_ne!(x, crate::rules::fractional_boston(&p).unwrap());
    }

    #[test]
    fn identical_and_distinct_tops() {
        assert_eq!(rawlsian(&letters(&["abcd"; 4])).unwrap(), Assignment::uniform(4));
        assert!(rawlsian(&letters(&["cabd", "abcd", "dcba", "bcda"])).unwrap().is_deterministic());
        let x = sigma_minimal(&letters(&["abc", "abc", "bca"]), &SigmaOrder::rawlsian(3)).unwrap();
        assert_eq!(x, rawlsian(&letters(&["abc", "abc", "bca"])).unwrap());
    }

    #[test]
    fn single_agent() {
        let p = PreferenceProfile::from_orders(vec![vec![0]]).unwrap();
        let out = SigmaMinimal::new().solve(&p, &SigmaOrder::rawlsian(1)).unwrap();
        assert_eq!(out.assignment.get(0, 0), &qi(1));
        assert_eq!(out.lp_solves, 0);
    }

    #[test]
    fn forms_and_extractions_agree() {
        let p = letters(&["abcd", "bacd", "abdc", "cadb"]);
        let sigma = SigmaOrder::new(4, vec![3, 2, 4]).unwrap();
        let reduced = SigmaMinimal::new().extraction(Extraction::CrossCheck).solve(&p, &sigma).unwrap();
        let verbatim = SigmaMinimal::new()
            .form(LpForm::Verbatim)
            .use_witnesses(false)
            .solve(&p, &sigma)
            .unwrap();
        assert_eq!(reduced.assignment, verbatim.assignment);
        assert_eq!(reduced.ledger, verbatim.ledger);
        assert!(verbatim.lp_solves >= reduced.lp_solves);
    }

    #[test]
    fn observer_sees_every_lp() {
        let p = letters(&["abc", "abc", "bca"]);
        let mut seen = 0;
        let out = SigmaMinimal::new()
            .observe(|_| seen += 1)
            .solve(&p, &SigmaOrder::rawlsian(3))
            .unwrap();
        assert_eq!(seen, out.lp_solves);
        assert!(out.lp_solves <= lp_solve_bound(3));
    }

    #[test]
    fn bad_scan_order_rejected() {
        let p = letters(&["ab", "ba"]);
        assert!(SigmaMinimal::new().scan_order(vec![0, 0]).solve(&p, &SigmaOrder::rawlsian(2)).is_err());
        assert!(SigmaMinimal::new().solve(&p, &SigmaOrder::rawlsian(3)).is_err());
    }

    #[test]
    fn ledger_rejects_increasing_values() {
        let mut l = FixedLedger::new(3);
        l.fix(0, 3, q(1, 2)).unwrap();
        assert!(l.fix(0, 2, q(1, 4)).is_err());
        let mut l = FixedLedger::new(3);
        l.fix(0, 3, q(1, 2)).unwrap();
        assert!(l.fix(0, 3, q(1, 2)).is_err());
    }
}
