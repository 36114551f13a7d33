//! Fair random assignment of `n` indivisible objects to `n` agents with
//! strict ordinal preferences.
//!
//! The centrepiece is the Rawlsian rule: the unique assignment whose
//! worst-case cumulative probabilities are lexicographically minimal,
//! computed by a sequence of exact linear programs. Around it sit the
//! σ-minimal family, probabilistic serial, fractional Boston, MTAV and a
//! cardinal max-min program, plus efficiency, envy, rank, egalitarian and
//! manipulability diagnostics. All probabilities are exact rationals.

pub mod analysis;
pub mod error;
pub mod lp;
pub mod matching;
pub mod model;
pub mod ratio;
pub mod rules;
pub mod synth;

pub use error::{Error, Result};
pub use model::{
    block_vector, cumulative_vector, r_dominates, sd_dominates, Assignment, BlockVector,
    CumulativeVector, DeterministicAssignment, PreferenceProfile, RComparison, SigmaOrder,
};
pub use ratio::Q;
pub use rules::{rawlsian, sigma_minimal, Rule};
