//! Grover walks on the n-dimensional hypercube.
//!
//! [`full`] simulates the walk on the complete 2ⁿ·n-dimensional space for any absorber.
//! For the antipodal absorber and a coordinate-symmetric start, the walk stays in a
//! 2n-dimensional subspace; [`reduced`], [`stein`] and [`generating`] give three independent
//! routes to its absorbing time.

pub mod full;
pub mod generating;
pub mod reduced;
pub mod stein;

pub use full::{
    conjectured_distance_one_time, conjectured_probability, full_walk, full_walk_summary, grover_coin, hypercube_graph,
    sector_state, start_state, HypercubeConfig, Sector, StartCoin,
};
pub use generating::{
    characteristic_polynomial, generating_coefficients, generating_coefficients_with, path_prefactor, GeneratingSeries,
};
pub use reduced::{
    build_reduced_chain, chain_first_passage, reduced_first_passage, spectral_radius, spectral_radius_check,
    ReducedChain,
};
pub use stein::{solve_stein, solve_stein_equation, solve_stein_with, SteinMethod, SteinOptions, SteinSolution};
