#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rawlsian_core::ratio::q;
use rawlsian_core::{Assignment, PreferenceProfile, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_order(n: usize, r: &mut impl Rng) -> Vec<usize> {
    let mut o: Vec<usize> = (0..n).collect();
    o.shuffle(r);
    o
}

pub fn random_profile(n: usize, r: &mut impl Rng) -> PreferenceProfile {
    PreferenceProfile::from_orders((0..n).map(|_| random_order(n, r)).collect()).unwrap()
}

/// `count` profiles with `n` drawn from `sizes`, reproducible from `seed`.
pub fn corpus(count: usize, sizes: std::ops::RangeInclusive<usize>, seed: u64) -> Vec<PreferenceProfile> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(sizes.clone());
            random_profile(n, &mut r)
        })
        .collect()
}

pub fn letters(rows: &[&str]) -> PreferenceProfile {
    PreferenceProfile::from_letters(rows).unwrap()
}

pub fn matrix(rows: &[&[(i64, i64)]]) -> Assignment {
    Assignment::new(rows.iter().map(|r| r.iter().map(|&(a, b)| q(a, b)).collect()).collect()).unwrap()
}

pub fn permutation_matrix(perm: &[usize]) -> Vec<Vec<Q>> {
    let n = perm.len();
    (0..n).map(|i| (0..n).map(|o| if perm[i] == o { q(1, 1) } else { q(0, 1) }).collect()).collect()
}

/// A random point of the Birkhoff polytope: a convex mix of a few random
/// permutation matrices with random integer weights.
pub fn random_assignment(n: usize, r: &mut impl Rng) -> Assignment {
    let terms = r.random_range(1..=4);
    let weights: Vec<i64> = (0..terms).map(|_| r.random_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    let mut p = vec![vec![q(0, 1); n]; n];
    for w in weights {
        let perm = random_order(n, r);
        for (i, &o) in perm.iter().enumerate() {
            p[i][o] += q(w, total);
        }
    }
    Assignment::new(p).unwrap()
}

/// `(r*, min rank sum at r*)` over all `n!` matchings.
pub fn bottleneck_brute_force(p: &PreferenceProfile) -> (usize, usize) {
    let n = p.n();
    let scored: Vec<(usize, usize)> = (0..n)
        .permutations(n)
        .map(|perm| {
            let ranks: Vec<usize> = perm.iter().enumerate().map(|(i, &o)| p.rank(i, o)).collect();
            (*ranks.iter().max().unwrap(), ranks.iter().sum())
        })
        .collect();
    let r_star = scored.iter().map(|s| s.0).min().unwrap();
    let sum = scored.iter().filter(|s| s.0 == r_star).map(|s| s.1).min().unwrap();
    (r_star, sum)
}
