//! Birkhoff–von Neumann decomposition and ex-post checks on its terms.

use num_traits::{One, Signed, Zero};

use crate::analysis::efficiency::find_cycle;
use crate::error::{Error, Result};
use crate::matching::perfect_matching;
use crate::model::{Assignment, DeterministicAssignment, PreferenceProfile};
use crate::ratio::Q;
use crate::rules::{bottleneck_rank, rawlsian};

#[derive(Clone, Debug, PartialEq)]
pub struct BvnDecomposition {
    pub terms: Vec<(Q, DeterministicAssignment)>,
}

impl BvnDecomposition {
    /// `Σ weight · permutation matrix`.
    pub fn recompose(&self) -> Vec<Vec<Q>> {
        let n = self.terms.first().map_or(0, |(_, d)| d.n());
        let mut p = vec![vec![Q::zero(); n]; n];
        for (w, d) in &self.terms {
            for (i, &o) in d.as_slice().iter().enumerate() {
                p[i][o] += w;
            }
        }
        p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Carathéodory bound on the number of terms: `n² - 2n + 2`.
pub fn bvn_term_bound(n: usize) -> usize {
    (n.max(1) - 1).pow(2) + 1
}

pub fn bvn_decompose(x: &Assignment) -> Result<BvnDecomposition> {
    let n = x.n();
    let mut residual: Vec<Vec<Q>> = x.rows().to_vec();
    let mut terms: Vec<(Q, DeterministicAssignment)> = Vec::new();
    let mut remaining = Q::one();
    while remaining.is_positive() {
        let perm = perfect_matching(n, |i, o| residual[i][o].is_positive()).ok_or_else(|| {
            Error::Invariant("positive support of a bistochastic residual has no perfect matching".into())
        })?;
        let weight = perm
            .iter()
            .enumerate()
            .map(|(i, &o)| residual[i][o].clone())
            .min()
            .expect("n >= 1");
        for (i, &o) in perm.iter().enumerate() {
            residual[i][o] -= &weight;
        }
        remaining -= &weight;
        terms.push((weight, DeterministicAssignment::new(perm)?));
    }
    let bound = bvn_term_bound(n);
    while terms.len() > bound {
        reduce_once(&mut terms);
    }
    let out = BvnDecomposition { terms };
    if out.recompose() != x.rows() {
        return Err(Error::Invariant("decomposition does not recompose the input".into()));
    }
    Ok(out)
}

/// Removes at least one term via an affine dependency among the
/// permutation matrices.
fn reduce_once(terms: &mut Vec<(Q, DeterministicAssignment)>) {
    let n = terms[0].1.n();
    let m = terms.len();
    // columns: vec(P_t) stacked with a trailing 1
    let rows = n * n + 1;
    let mut a: Vec<Vec<Q>> = vec![vec![Q::zero(); m]; rows];
    for (t, (_, d)) in terms.iter().enumerate() {
        for (i, &o) in d.as_slice().iter().enumerate() {
            a[i * n + o][t] = Q::one();
        }
        a[rows - 1][t] = Q::one();
    }
    let c = null_vector(a, m).expect("more terms than the affine dimension allows");
    let theta = terms
        .iter()
        .zip(&c)
        .filter(|(_, ct)| ct.is_positive())
        .map(|((w, _), ct)| w / ct)
        .min()
        .expect("a null vector summing to zero has a positive entry");
    for ((w, _), ct) in terms.iter_mut().zip(&c) {
        *w -= &theta * ct;
    }
    terms.retain(|(w, _)| w.is_positive());
}

/// A nonzero `c` with `A c = 0`, by exact row reduction.
fn null_vector(mut a: Vec<Vec<Q>>, cols: usize) -> Option<Vec<Q>> {
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivot_cols.contains(c))?;
    let mut c = vec![Q::zero(); cols];
    c[free] = Q::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        c[pc] = -a[row][free].clone();
    }
    Some(c)
}

/// Worst rank any agent receives with positive probability.
pub fn support_max_rank(profile: &PreferenceProfile, x: &Assignment) -> Result<usize> {
    x.check_dims(profile)?;
    let n = profile.n();
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |o| (i, o)))
        .filter(|&(i, o)| x.get(i, o).is_positive())
        .map(|(i, o)| profile.rank(i, o))
        .max()
        .unwrap_or(0))
}

/// No set of agents can trade their objects around a cycle so that each is
/// strictly better off.
pub fn ex_post_efficient(profile: &PreferenceProfile, d: &DeterministicAssignment) -> bool {
    // i -> j when i prefers j's object to her own
    find_cycle(d.n(), |i, j| profile.rank(i, d.object_of(j)) < profile.rank(i, d.object_of(i))).is_none()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryReport {
    pub holds: bool,
    pub bottleneck: usize,
    pub decomposition: BvnDecomposition,
    /// Per term: (ex-post efficient, max rank).
    pub term_checks: Vec<(bool, usize)>,
}

/// Decomposes the Rawlsian assignment once and checks every term is ex-post
/// efficient with maximum rank equal to the MTAV bottleneck.
pub fn corollary_check(profile: &PreferenceProfile) -> Result<CorollaryReport> {
    let x = rawlsian(profile)?;
    let bottleneck = bottleneck_rank(profile);
    let decomposition = bvn_decompose(&x)?;
    let term_checks: Vec<(bool, usize)> = decomposition
        .terms
        .iter()
        .map(|(_, d)| (ex_post_efficient(profile, d), d.max_rank(profile)))
        .collect();
    let holds = term_checks.iter().all(|&(eff, r)| eff && r == bottleneck);
    Ok(CorollaryReport { holds, bottleneck, decomposition, term_checks })
}
