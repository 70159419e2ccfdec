pub mod checks;
pub mod config;
pub mod decomp;
pub mod error;
pub mod json;
pub mod matrix;
pub mod padic;
pub mod report;
pub mod residue;
pub mod sample;
pub mod series;
pub mod suites;
pub mod weyl;

pub use error::{Error, Result};
pub use matrix::{membership, DiagElement, PMatrix, Subgroup};
pub use padic::{PAdic, DEFAULT_PRECISION};
pub use residue::{KKElem, ResidueField};
pub use weyl::{bruhat_leq, standard_ordering, OrderingPreset, PositionMask, WeylElement, WeylOrdering};
pub use decomp::{bruhat_cell, classify_uw, in_ulwb, matches_pattern, rb_decompose, RBDecomposition};
pub use sample::{sample_cell, trial_rng, Sampler, TrialRng};
pub use series::{eval_fw, CharComponent, Character, PSElement, Term};
pub use report::{Failure, Report};
pub use config::RunConfig;
pub use suites::{run_suite, Suite};
