//! Box allocations of `2p-1` tiles, box preferences, favourable-division search,
//! coloring counts and chessboard complexes.

pub mod boxes;
pub mod chessboard;
pub mod coloring;
pub mod oracle;
pub mod search;

pub use boxes::{canonical_allocations, labelled_allocations, BoxAllocation, BoxViolation};
pub use chessboard::{
    chessboard_complex_facets, chessboard_facet_count, configuration_space_facets, configuration_space_formula, Facet,
};
pub use coloring::{
    closed_form_coloring_count, coloring_count, enumerate_colorings, is_prime, lower_bound, total_colorings, Coloring,
};
pub use oracle::{box_mass_drift, box_masses, BoxPreferenceOracle, MassPreferences};
pub use search::{
    default_equi_tol, is_favourable, measure_of_box, search_favourable, FavourableCheck, FavourableDivision,
    FavourableSearch, FavourableViolation, HybridInstance,
};
