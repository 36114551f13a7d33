//! Fixtures shared by the benchmarks.

use rawlsian_core::lp::{build_bistochastic, LinearProgram, Sense};
use rawlsian_core::ratio::qi;
use rawlsian_core::synth::{generate, ProfileModel};
use rawlsian_core::PreferenceProfile;

/// Seeded uniform profile.
pub fn uniform_profile(n: usize, seed: u64) -> PreferenceProfile {
    generate(n, &ProfileModel::Uniform, seed).expect("n >= 1")
}

/// Seeded profile with correlated preferences: object `o` has weight `n - o`.
pub fn correlated_profile(n: usize, seed: u64) -> PreferenceProfile {
    let weights = (0..n).map(|o| (n - o) as f64).collect();
    generate(n, &ProfileModel::PlackettLuce(weights), seed).expect("positive weights")
}

/// Minimum total rank over the bistochastic polytope.
pub fn rank_sum_lp(profile: &PreferenceProfile) -> LinearProgram {
    let n = profile.n();
    let mut alp = build_bistochastic(n);
    let objective: Vec<_> = (0..n)
        .flat_map(|i| (0..n).map(move |o| (i, o)))
        .map(|(i, o)| (alp.x[i][o], qi(profile.rank(i, o) as i64)))
        .collect();
    alp.lp.set_objective(Sense::Minimize, objective).expect("variables exist");
    alp.lp
}
