//! Factoring graphs as matrix products: finding adjacency matrices `B`, `C`
//! with `A = BC` for a given graph `G` with adjacency matrix `A`.

pub mod canon;
pub mod census;
pub mod conditions;
pub mod construct;
pub mod error;
pub mod factorization;
pub mod graph;
pub mod graph6;
pub mod linalg;
pub mod search;
pub mod spectral;

pub use canon::{canonical_form, canonical_key, enumerate_graphs, CanonicalKey};
pub use census::{read_catalog, run_census, verify_catalog, write_catalog, CensusOptions, CensusRecord, TheoremReport};
pub use conditions::{assess, screen, validate_factorization, ConditionReport, RuleStatus, Violation, ViolationList};
pub use construct::{construct, Construction};
pub use error::{Error, Result};
pub use factorization::{Factorization, WitnessRecord};
pub use graph::{Bipartition, Family, Graph, Permutation};
pub use graph6::{decode_graph6, encode_graph6};
pub use linalg::{adjacency, multiply, IntMatrix};
pub use search::{
    dedup_pairs, factor_naive, factor_search, fix_labeling, is_factorizable, FactorPair, SearchConfig, SearchMode,
    SearchStats, Verdict,
};
