//! Probabilistic serial: simultaneous eating at unit speed.

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::model::{Assignment, PreferenceProfile};
use crate::ratio::Q;

pub fn probabilistic_serial(profile: &PreferenceProfile) -> Result<Assignment> {
    let n = profile.n();
    let mut supply = vec![Q::one(); n];
    let mut p = vec![vec![Q::zero(); n]; n];
    let mut clock = Q::zero();
    while clock < Q::one() {
        let target: Vec<usize> = (0..n)
            .map(|i| {
                *profile
                    .order(i)
                    .iter()
                    .find(|&&o| supply[o].is_positive())
                    .expect("supply remains while time is below one")
            })
            .collect();
        let mut eaters = vec![0usize; n];
        for &o in &target {
            eaters[o] += 1;
        }
        let dt = (0..n)
            .filter(|&o| eaters[o] > 0)
            .map(|o| &supply[o] / Q::from_integer(eaters[o].into()))
            .min()
            .expect("at least one object is eaten");
        for (i, &o) in target.iter().enumerate() {
            p[i][o] += &dt;
        }
        for o in 0..n {
            if eaters[o] > 0 {
                supply[o] -= &dt * Q::from_integer(eaters[o].into());
            }
        }
        clock += dt;
    }
    Assignment::new(p)
}
