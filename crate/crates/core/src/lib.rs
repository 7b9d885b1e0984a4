//! Search, counting and certification of envy-free divisions of the cake `[0, 1]`.
//!
//! The crate is organized around a few layers:
//!
//! * [`simplex`]: cuts as points of the standard simplex, tiles, allocations, divisions.
//! * [`preferences`]: preference oracles (half-space systems, additive utilities,
//!   and the cyclic construction with exactly two envy-free divisions).
//! * [`solver`]: grid sweeps for envy-free cuts, division counting, and
//!   secretive/expelled-player certification.
//! * [`graphs`]: the players/tiles preference graph, matching decompositions
//!   and the two-division structure report.
//! * [`hybrid`]: tiles grouped into boxes, measure equipartition, and the
//!   coloring and chessboard-complex counts behind the favourable-division bound.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod graphs;
pub mod grid;
pub mod hybrid;
pub mod matching;
pub mod measure;
pub mod preferences;
pub mod simplex;
pub mod solver;

pub use error::{EflError, Result};
pub use graphs::{
    build_graph, certify_extremal_structure, decompose_union, enumerate_perfect_matchings, ExtremalReport,
    MatchingUnionDecomposition, PreferenceGraph,
};
pub use grid::SearchParams;
pub use hybrid::{
    coloring_count, configuration_space_facets, is_favourable, lower_bound, search_favourable, total_colorings,
    BoxAllocation, BoxPreferenceOracle, FavourableDivision, HybridInstance, MassPreferences,
};
pub use measure::Measure;
pub use preferences::{
    extremal_preferences, preferred_tiles, utility_preferences, ExtremalInstance, HalfspaceSystem,
    PreferenceOracle, Region, TileSet, UtilityPreferences,
};
pub use simplex::{cuts_equal, divisions_equal, Allocation, Cut, Division, Tile};
pub use solver::{
    count_distinct_divisions, find_certified_cut, find_envy_free_divisions, verify_expelled, verify_secretive,
    BijectionFamily, CertifyMode,
};
