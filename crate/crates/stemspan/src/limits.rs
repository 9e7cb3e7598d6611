//! Work limits shared by the search-based operations.

/// Caps for the exhaustive searches. Exceeding a cap is reported loudly
/// (an error or an `exhausted = false` flag) instead of approximating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of recursion nodes for subset searches and the
    /// branch-and-bound spanning tree search.
    pub search_nodes: u64,
    /// Maximum number of improvement iterations for the local-search solver.
    pub max_iterations: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search_nodes: 10_000_000,
            max_iterations: 1_000_000,
        }
    }
}

impl Limits {
    pub fn with_search_nodes(nodes: u64) -> Self {
        Limits { search_nodes: nodes, ..Limits::default() }
    }
}
