//! Fractional Boston: global rounds of eating from the k-th choice.

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::model::{Assignment, PreferenceProfile};
use crate::ratio::Q;

pub fn fractional_boston(profile: &PreferenceProfile) -> Result<Assignment> {
    let n = profile.n();
    let mut supply = vec![Q::one(); n];
    let mut p = vec![vec![Q::zero(); n]; n];
    let mut mass = vec![Q::zero(); n];
    for k in 1..=n {
        let mut eating: Vec<usize> = (0..n)
            .filter(|&i| mass[i] < Q::one() && supply[profile.object_at(i, k)].is_positive())
            .collect();
        while !eating.is_empty() {
            let mut eaters = vec![0usize; n];
            for &i in &eating {
                eaters[profile.object_at(i, k)] += 1;
            }
            let object_limit = (0..n)
                .filter(|&o| eaters[o] > 0)
                .map(|o| &supply[o] / Q::from_integer(eaters[o].into()));
            let agent_limit = eating.iter().map(|&i| Q::one() - &mass[i]);
            let dt = object_limit.chain(agent_limit).min().expect("someone is eating");
            for &i in &eating {
                let o = profile.object_at(i, k);
                p[i][o] += &dt;
                mass[i] += &dt;
                supply[o] -= &dt;
            }
            eating.retain(|&i| mass[i] < Q::one() && supply[profile.object_at(i, k)].is_positive());
        }
    }
    Assignment::new(p)
}
