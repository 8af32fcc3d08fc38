//! Colorings, solution enumeration and finite-scale profile experiments.

mod census;
mod coloring;
mod enumerate;
mod profile;

pub use census::{
    head_census, monochromatic_solutions, profile_census, profile_census_with, witness_search,
    witnesses, CensusEntry, HeadHistogram, ProfileCensus, SolutionRecord, WitnessReport,
};
pub use coloring::{default_family, head_bin, splitmix64, standard_head, ColoringSpec};
pub use enumerate::{enumerate_solutions, MAX_BOUND};
pub use profile::{asymptotic_profile, far_above, ratio_close, Profile};
