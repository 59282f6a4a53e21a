//! Exact and budgeted search for rainbow cycles, plus the enumeration
//! oracles used to check it and the moment formulas.

pub mod oracle;
pub mod overlap;
mod search;

pub use oracle::{
    count_hamperms, expected_y_bruteforce, pair_overlap_histogram, second_moment_bruteforce,
    HampermTable, DEFAULT_ENUMERATION_LIMIT, DEFAULT_PAIRWISE_LIMIT,
};
pub use overlap::{overlap_profile, second_moment_from_profile, OverlapProfile};
pub use search::{
    find_rainbow_cycle, NotFoundReason, SearchMode, SearchOutcome, SearchStatus, MAX_SEARCH_N,
};
