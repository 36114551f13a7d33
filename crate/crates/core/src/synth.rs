//! Seeded random profiles and the shared RNG streams.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::PreferenceProfile;

/// Independent randomness consumers derived from one seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Generator = 1,
    MtavTieBreak = 2,
    Probe = 3,
    Directions = 4,
}

/// A generator for `purpose`; the same `(seed, purpose)` always yields the
/// same sequence and distinct purposes never share one.
pub fn rng(seed: u64, purpose: Stream) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(purpose as u64);
    r
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileModel {
    /// Each ranking independently uniform.
    Uniform,
    /// Sequential draws proportional to per-object weights.
    PlackettLuce(Vec<f64>),
}

pub fn generate(n: usize, model: &ProfileModel, seed: u64) -> Result<PreferenceProfile> {
    let mut r = rng(seed, Stream::Generator);
    generate_with(n, model, &mut r)
}

pub fn generate_with(n: usize, model: &ProfileModel, r: &mut impl Rng) -> Result<PreferenceProfile> {
    if n == 0 {
        return Err(Error::InvalidProfile("at least one agent is required".into()));
    }
    let orders = match model {
        ProfileModel::Uniform => (0..n)
            .map(|_| {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(r);
                order
            })
            .collect(),
        ProfileModel::PlackettLuce(weights) => {
            if weights.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: weights.len() });
            }
            if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
                return Err(Error::InvalidProfile("weights must be positive and finite".into()));
            }
            (0..n).map(|_| plackett_luce_draw(weights, r)).collect()
        }
    };
    PreferenceProfile::from_orders(orders)
}

fn plackett_luce_draw(weights: &[f64], r: &mut impl Rng) -> Vec<usize> {
    let mut left: Vec<usize> = (0..weights.len()).collect();
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let total: f64 = left.iter().map(|&o| weights[o]).sum();
        let mut pick = r.random::<f64>() * total;
        let mut idx = left.len() - 1;
        for (k, &o) in left.iter().enumerate() {
            if pick < weights[o] {
                idx = k;
                break;
            }
            pick -= weights[o];
        }
        order.push(left.remove(idx));
    }
    order
}
