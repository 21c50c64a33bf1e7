//! Graph families, worked examples, and exhaustive enumeration of small maps.

pub mod census;
pub mod enumerate;
pub mod examples;
pub mod families;
pub mod verify;

pub use examples::{copies_map, frak_f, frak_g, gamma, pentagon_example, rose4_map};
pub use families::{make_delta_minus, make_delta_plus, make_polygonal, make_rose};
pub use enumerate::{
    enumerate_graphs, enumerate_single_fold_maps, theorem_c_verify, MapFlags, MapRecord, TheoremCReport,
};
pub use verify::{corollary_71_verify, disconnected_example_check, Corollary71Report, CopiesReport};
pub use census::{admissible_pairs, census, CensusOptions, CensusOutcome, CensusQuery, Checkpoint};
