//! Problems, assignments, cumulative vectors and the lexicographic order
//! used to compare assignments.
//!
//! Ranks are 1-based throughout (`1` = most preferred); agents and objects
//! are dense 0-based indices.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::{format_q, Q};

/// Strict, complete rankings of `n` objects by `n` agents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    agents: Vec<String>,
    objects: Vec<String>,
    /// `rank[i][o]` in `1..=n`.
    rank: Vec<Vec<usize>>,
    /// `order[i][k - 1]` is the object agent `i` ranks `k`-th.
    order: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    /// Builds a profile from per-agent object orders, best first.
    pub fn from_orders(orders: Vec<Vec<usize>>) -> Result<Self> {
        let n = orders.len();
        Self::with_names(default_agent_names(n), default_object_names(n), orders)
    }

    pub fn with_names(
        agents: Vec<String>,
        objects: Vec<String>,
        orders: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = agents.len();
        if n == 0 {
            return Err(Error::InvalidProfile("at least one agent is required".into()));
        }
        if objects.len() != n {
            return Err(Error::InvalidProfile(format!(
                "{} agents but {} objects; the problem must be square",
                n,
                objects.len()
            )));
        }
        if orders.len() != n {
            return Err(Error::InvalidProfile(format!(
                "{} agents but {} preference lists",
                n,
                orders.len()
            )));
        }
        let mut rank = vec![vec![0; n]; n];
        for (i, list) in orders.iter().enumerate() {
            if list.len() != n {
                return Err(Error::InvalidProfile(format!(
                    "agent {} ranks {} objects, expected {}",
                    agents[i],
                    list.len(),
                    n
                )));
            }
            for (pos, &o) in list.iter().enumerate() {
                if o >= n {
                    return Err(Error::InvalidProfile(format!(
                        "agent {} ranks unknown object index {}",
                        agents[i], o
                    )));
                }
                if rank[i][o] != 0 {
                    return Err(Error::InvalidProfile(format!(
                        "agent {} ranks object {} twice",
                        agents[i], objects[o]
                    )));
                }
                rank[i][o] = pos + 1;
            }
        }
        Ok(Self { agents, objects, rank, order: orders })
    }

    /// Builds a profile from rank rows: `ranks[i][o]` is the position of
    /// object `o` for agent `i`.
    pub fn from_ranks(ranks: Vec<Vec<usize>>) -> Result<Self> {
        let n = ranks.len();
        let mut orders = Vec::with_capacity(n);
        for (i, row) in ranks.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidProfile(format!(
                    "rank row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            let mut order = vec![usize::MAX; n];
            for (o, &r) in row.iter().enumerate() {
                if r == 0 || r > n || order[r - 1] != usize::MAX {
                    return Err(Error::InvalidProfile(format!(
                        "rank row {i} is not a permutation of 1..={n}"
                    )));
                }
                order[r - 1] = o;
            }
            orders.push(order);
        }
        Self::from_orders(orders)
    }

    /// Parses compact letter notation such as `["abc", "abc", "bca"]`.
    /// Objects are named `a`, `b`, ... in index order.
    pub fn from_letters(rows: &[&str]) -> Result<Self> {
        let n = rows.len();
        let orders = rows
            .iter()
            .map(|row| {
                row.bytes()
                    .map(|c| match c {
                        b'a'..=b'z' => Ok((c - b'a') as usize),
                        _ => Err(Error::InvalidProfile(format!("bad object letter in {row:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_names(default_agent_names(n), letter_names(n), orders)
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    /// Rank (1-based) of object `o` for agent `i`.
    pub fn rank(&self, i: usize, o: usize) -> usize {
        self.rank[i][o]
    }

    pub fn rank_row(&self, i: usize) -> &[usize] {
        &self.rank[i]
    }

    /// Object that agent `i` ranks `k`-th (`k` 1-based).
    pub fn object_at(&self, i: usize, k: usize) -> usize {
        self.order[i][k - 1]
    }

    /// Agent `i`'s objects, best first.
    pub fn order(&self, i: usize) -> &[usize] {
        &self.order[i]
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.order
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// Same problem with agent `i`'s report replaced.
    pub fn with_report(&self, i: usize, order: Vec<usize>) -> Result<Self> {
        let mut orders = self.order.clone();
        *orders.get_mut(i).ok_or(Error::UnknownAgent(i))? = order;
        Self::with_names(self.agents.clone(), self.objects.clone(), orders)
    }

    /// Relabels agents: agent `k` of the result is agent `perm[k]` of `self`.
    pub fn permute_agents(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n())?;
        let orders = perm.iter().map(|&src| self.order[src].clone()).collect();
        let agents = perm.iter().map(|&src| self.agents[src].clone()).collect();
        Self::with_names(agents, self.objects.clone(), orders)
    }

    pub(crate) fn check_agent(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::UnknownAgent(i))
        }
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: perm.len() });
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidProfile(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

pub fn default_agent_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn letter_names(n: usize) -> Vec<String> {
    (0..n).map(|k| ((b'a' + k as u8) as char).to_string()).collect()
}

/// `a`, `b`, ... for up to 26 objects, otherwise zero-padded `o01`, `o02`, ...
/// so that lexicographic order matches index order.
pub fn default_object_names(n: usize) -> Vec<String> {
    if n <= 26 {
        letter_names(n)
    } else {
        let width = n.to_string().len();
        (1..=n).map(|k| format!("o{k:0width$}")).collect()
    }
}

/// A bistochastic matrix of exact rationals; rows are agents, columns objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    p: Vec<Vec<Q>>,
}

impl Assignment {
    pub fn new(p: Vec<Vec<Q>>) -> Result<Self> {
        let n = p.len();
        if n == 0 {
            return Err(Error::InvalidAssignment("empty matrix".into()));
        }
        let mut col = vec![Q::zero(); n];
        for (i, row) in p.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidAssignment(format!("row {i} has {} entries", row.len())));
            }
            let mut sum = Q::zero();
            for (o, v) in row.iter().enumerate() {
                if v.is_negative() || *v > Q::one() {
                    return Err(Error::InvalidAssignment(format!(
                        "entry ({i}, {o}) = {} outside [0, 1]",
                        format_q(v)
                    )));
                }
                sum += v;
                col[o] += v;
            }
            if !sum.is_one() {
                return Err(Error::InvalidAssignment(format!(
                    "row {i} sums to {}",
                    format_q(&sum)
                )));
            }
        }
        if let Some((o, s)) = col.iter().enumerate().find(|(_, s)| !s.is_one()) {
            return Err(Error::InvalidAssignment(format!("column {o} sums to {}", format_q(s))));
        }
        Ok(Self { p })
    }

    pub fn uniform(n: usize) -> Self {
        let v = Q::new(1.into(), (n as i64).into());
        Self { p: vec![vec![v; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn get(&self, i: usize, o: usize) -> &Q {
        &self.p[i][o]
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.p[i]
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.p
    }

    pub fn into_rows(self) -> Vec<Vec<Q>> {
        self.p
    }

    pub fn is_deterministic(&self) -> bool {
        self.p.iter().flatten().all(|v| v.is_zero() || v.is_one())
    }

    /// Rows permuted like [`PreferenceProfile::permute_agents`].
    pub fn permute_agents(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n())?;
        Ok(Self { p: perm.iter().map(|&src| self.p[src].clone()).collect() })
    }

    pub(crate) fn check_dims(&self, profile: &PreferenceProfile) -> Result<()> {
        if self.n() != profile.n() {
            return Err(Error::DimensionMismatch { expected: profile.n(), found: self.n() });
        }
        Ok(())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.p {
            let cells: Vec<String> = row.iter().map(format_q).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A permutation matrix stored as the map agent -> object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicAssignment {
    perm: Vec<usize>,
}

impl DeterministicAssignment {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        check_permutation(&perm, n).map_err(|_| {
            Error::InvalidAssignment(format!("{perm:?} does not use every object exactly once"))
        })?;
        Ok(Self { perm })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn object_of(&self, agent: usize) -> usize {
        self.perm[agent]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn to_assignment(&self) -> Assignment {
        let n = self.n();
        let mut p = vec![vec![Q::zero(); n]; n];
        for (i, &o) in self.perm.iter().enumerate() {
            p[i][o] = Q::one();
        }
        Assignment { p }
    }

    /// Largest rank any agent receives.
    pub fn max_rank(&self, profile: &PreferenceProfile) -> usize {
        self.perm.iter().enumerate().map(|(i, &o)| profile.rank(i, o)).max().unwrap_or(0)
    }

    pub fn rank_sum(&self, profile: &PreferenceProfile) -> usize {
        self.perm.iter().enumerate().map(|(i, &o)| profile.rank(i, o)).sum()
    }
}

/// Bottom-up cumulative probabilities of one agent: `b(k)` is the mass on
/// objects ranked `k` or worse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulativeVector {
    pub agent: usize,
    b: Vec<Q>,
}

impl CumulativeVector {
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// `b(k)` for `k` in `1..=n+1`; `b(n + 1)` is zero.
    pub fn b(&self, k: usize) -> Q {
        assert!(k >= 1 && k <= self.b.len() + 1, "rank {k} out of range");
        self.b.get(k - 1).cloned().unwrap_or_else(Q::zero)
    }

    /// Probability of the `k` most preferred objects.
    pub fn t(&self, k: usize) -> Q {
        Q::one() - self.b(k + 1)
    }

    pub fn values(&self) -> &[Q] {
        &self.b
    }
}

pub fn cumulative_vector(
    profile: &PreferenceProfile,
    x: &Assignment,
    agent: usize,
) -> Result<CumulativeVector> {
    x.check_dims(profile)?;
    profile.check_agent(agent)?;
    Ok(CumulativeVector { agent, b: cumulative_from_row(profile, agent, x.row(agent)) })
}

/// `b(1..=n)` for an arbitrary row, which need not come from a valid assignment.
pub(crate) fn cumulative_from_row(profile: &PreferenceProfile, agent: usize, row: &[Q]) -> Vec<Q> {
    let n = profile.n();
    let mut b = vec![Q::zero(); n];
    let mut acc = Q::zero();
    for k in (1..=n).rev() {
        acc += &row[profile.object_at(agent, k)];
        b[k - 1] = acc.clone();
    }
    b
}

/// Top-`k` masses `t(1..=n)` of an arbitrary row under agent's ranking.
pub(crate) fn top_masses(profile: &PreferenceProfile, agent: usize, row: &[Q]) -> Vec<Q> {
    let mut acc = Q::zero();
    profile
        .order(agent)
        .iter()
        .map(|&o| {
            acc += &row[o];
            acc.clone()
        })
        .collect()
}

/// A permutation of the ranks `2..=n` giving the order in which cumulative
/// blocks are compared.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaOrder {
    n: usize,
    order: Vec<usize>,
}

impl SigmaOrder {
    pub fn new(n: usize, order: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSigma("n must be at least 1".into()));
        }
        let mut seen = vec![false; n + 1];
        for &k in &order {
            if k < 2 || k > n || seen[k] {
                return Err(Error::InvalidSigma(format!(
                    "{order:?} is not a permutation of 2..={n}"
                )));
            }
            seen[k] = true;
        }
        if order.len() != n - 1 {
            return Err(Error::InvalidSigma(format!("{order:?} is not a permutation of 2..={n}")));
        }
        Ok(Self { n, order })
    }

    /// `(n, n - 1, ..., 2)`.
    pub fn rawlsian(n: usize) -> Self {
        Self { n, order: (2..=n).rev().collect() }
    }

    /// `(2, 3, ..., n)`.
    pub fn ascending(n: usize) -> Self {
        Self { n, order: (2..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> &[usize] {
        &self.order
    }
}

/// Concatenated per-rank blocks of `{b_i(k)}`, each sorted non-increasingly.
/// The constant all-ones block for rank 1 is not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockVector {
    n: usize,
    entries: Vec<Q>,
}

/// Outcome of comparing two block vectors lexicographically (smaller wins).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RComparison {
    Dominates,
    Dominated,
    Equal,
}

impl BlockVector {
    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn block(&self, j: usize) -> &[Q] {
        &self.entries[j * self.n..(j + 1) * self.n]
    }

    pub fn num_blocks(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.entries.len() / self.n
        }
    }

    /// Lexicographic comparison; the smaller vector dominates.
    pub fn r_compare(&self, other: &BlockVector) -> Result<RComparison> {
        if self.entries.len() != other.entries.len() || self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.entries.len(),
                found: other.entries.len(),
            });
        }
        Ok(match lex_cmp(&self.entries, &other.entries) {
            Ordering::Less => RComparison::Dominates,
            Ordering::Greater => RComparison::Dominated,
            Ordering::Equal => RComparison::Equal,
        })
    }
}

fn lex_cmp(a: &[Q], b: &[Q]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

pub fn block_vector(
    profile: &PreferenceProfile,
    x: &Assignment,
    sigma: &SigmaOrder,
) -> Result<BlockVector> {
    x.check_dims(profile)?;
    let n = profile.n();
    if sigma.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: sigma.n() });
    }
    let cumulative: Vec<Vec<Q>> =
        (0..n).map(|i| cumulative_from_row(profile, i, x.row(i))).collect();
    let mut entries = Vec::with_capacity(n * sigma.ranks().len());
    for &k in sigma.ranks() {
        let mut block: Vec<Q> = cumulative.iter().map(|b| b[k - 1].clone()).collect();
        block.sort_unstable_by(|a, b| b.cmp(a));
        entries.extend(block);
    }
    Ok(BlockVector { n, entries })
}

/// `R-dominance`: `x` dominates `y` when its block vector is lexicographically
/// smaller.
pub fn r_dominates(bx: &BlockVector, by: &BlockVector) -> Result<RComparison> {
    bx.r_compare(by)
}

/// First-order stochastic dominance of `row_a` over `row_b` for `agent`
/// (weak: equal rows dominate each other).
pub fn sd_dominates(profile: &PreferenceProfile, agent: usize, row_a: &[Q], row_b: &[Q]) -> bool {
    let mut acc_a = Q::zero();
    let mut acc_b = Q::zero();
    for &o in profile.order(agent) {
        acc_a += &row_a[o];
        acc_b += &row_b[o];
        if acc_a < acc_b {
            return false;
        }
    }
    true
}
