//! Brute-force ground truth at small `n`: exact independence numbers of the
//! squarefree graph and the empirical distribution of `f(ℓ)`.

mod cdf;
mod clique;
mod graph;

pub use cdf::{empirical_f_cdf, parse_grid, write_cdf_csv, CdfPoint, GridPoint};
pub use clique::{
    count_maximum_witness_families, max_independent_set_exact, IndependentSet, SearchLimits,
    VertexOrder, WitnessFamilies, WitnessFamily,
};
pub use graph::ShareFactorGraph;
