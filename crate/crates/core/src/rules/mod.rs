//! Assignment rules.

mod boston;
mod maxmin;
mod mtav;
mod ps;
pub mod sigma;

use std::fmt;
use std::str::FromStr;

pub use boston::fractional_boston;
pub use maxmin::{maxmin_cardinal, CardinalUtilityProfile, MaxMinOutcome};
pub use mtav::{bottleneck_rank, mtav, MtavOutcome};
pub use ps::probabilistic_serial;
pub use sigma::{
    lp_solve_bound, rawlsian, sigma_minimal, Extraction, FixedLedger, LpForm, SigmaMinimal, SigmaOutcome,
};

use crate::error::{Error, Result};
use crate::model::{Assignment, PreferenceProfile, SigmaOrder};

/// A rule selectable by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Rawlsian,
    Sigma(SigmaOrder),
    ProbabilisticSerial,
    FractionalBoston,
    Mtav { seed: u64 },
}

impl Rule {
    pub fn apply(&self, profile: &PreferenceProfile) -> Result<Assignment> {
        match self {
            Rule::Rawlsian => rawlsian(profile),
            Rule::Sigma(sigma) => sigma_minimal(profile, sigma),
            Rule::ProbabilisticSerial => probabilistic_serial(profile),
            Rule::FractionalBoston => fractional_boston(profile),
            Rule::Mtav { seed } => Ok(mtav(profile, *seed)?.assignment.to_assignment()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Rawlsian => "rawlsian",
            Rule::Sigma(_) => "sigma",
            Rule::ProbabilisticSerial => "ps",
            Rule::FractionalBoston => "boston",
            Rule::Mtav { .. } => "mtav",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses the seedless, σ-free rule names; `sigma` and `mtav` need extra
/// parameters and are built directly.
impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rawlsian" => Ok(Rule::Rawlsian),
            "ps" | "probabilistic-serial" => Ok(Rule::ProbabilisticSerial),
            "boston" | "fractional-boston" => Ok(Rule::FractionalBoston),
            "mtav" => Ok(Rule::Mtav { seed: 0 }),
            other => Err(Error::InvalidProfile(format!("unknown rule '{other}'"))),
        }
    }
}
