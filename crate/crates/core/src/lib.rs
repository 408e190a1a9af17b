//! Causal direction between two observed variables in linear non-Gaussian
//! models with any number of latent confounders.
//!
//! The pipeline is:
//!
//! 1. [`cumulant`] estimates bivariate joint cumulants `C_{a,b}(X, Y)` from a
//!    [`BivariateSample`] (plug-in moments, then a truncated power-series log).
//! 2. [`matrix`] arranges the order `2k-1` cumulants into the `k x k` Hankel
//!    cumulant matrix for both orientations and reports rank and `|det|`.
//! 3. [`identify`] grows `k` until one orientation turns rank-deficient, reads
//!    off the latent count and compares determinants to pick the cause.
//!
//! [`model`] holds ground-truth structural models, exact population cumulants
//! and the synthetic data generator; [`theorems`] checks the rank and
//! determinant statements on population tables; [`bench`] runs seeded
//! simulation studies and writes reports.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cumulant;
pub mod error;
pub mod identify;
pub mod matrix;
pub mod model;
pub mod seed;
pub mod theorems;

pub use cumulant::{
    compute_moments, estimate_cumulants, joint_cumulant, moments_to_cumulants_partition,
    moments_to_cumulants_series, univariate_cumulants, BivariateSample, CumulantTable, MomentTable,
};
pub use error::{Error, Result};
pub use identify::{
    identify_direction, identify_from_cumulants, infer_latent_count, EpsilonMode, IdentifyConfig,
    InferenceResult, RankRule, Verdict,
};
pub use matrix::{CumulantMatrix, Orientation, RankReport};
pub use model::{
    generate_data, noise_cumulants_mc, population_cumulants, sample_model, Case, Direction,
    ModelSpec, NoiseFamily, NoiseSpec,
};
