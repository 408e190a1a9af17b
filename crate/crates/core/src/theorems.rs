//! Population-level checks of the rank and determinant statements on exact
//! cumulant tables of random oracle models.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identify::{identify_from_cumulants, IdentifyConfig, Verdict};
use crate::matrix::{CumulantMatrix, Orientation};
use crate::model::{population_cumulants, sample_oracle_model, Direction, ModelSpec};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub m_values: Vec<usize>,
    pub models_per_m: usize,
    pub seed: u64,
    /// Relative singular-value tolerance for population ranks.
    pub rank_tol: f64,
    /// Upper bound on the cause-side `|det|`.
    pub cause_det_max: f64,
    /// Lower bound on the effect-side `|det|`.
    pub effect_det_min: f64,
    /// Zero out the first latent's loading on the effect variable.
    pub inject_reducible: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            m_values: (0..=4).collect(),
            models_per_m: 100,
            seed: 0,
            rank_tol: 1e-8,
            cause_det_max: 1e-8,
            effect_det_min: 1e-6,
            inject_reducible: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelOutcome {
    pub m: usize,
    pub index: usize,
    pub seed: u64,
    pub direction: Direction,
    pub checks: Vec<Check>,
}

impl ModelOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub models: Vec<ModelOutcome>,
}

/// Pass counts for one check name at one `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub m: usize,
    pub name: String,
    pub passed: usize,
    pub total: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.models.iter().all(ModelOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ModelOutcome> {
        self.models.iter().filter(|o| !o.passed())
    }

    pub fn tallies(&self) -> Vec<CheckTally> {
        let mut out: Vec<CheckTally> = Vec::new();
        for outcome in &self.models {
            for check in &outcome.checks {
                let pos = out
                    .iter()
                    .position(|t| t.m == outcome.m && t.name == check.name);
                let tally = match pos {
                    Some(i) => &mut out[i],
                    None => {
                        out.push(CheckTally {
                            m: outcome.m,
                            name: check.name.clone(),
                            passed: 0,
                            total: 0,
                        });
                        out.last_mut().expect("just pushed")
                    }
                };
                tally.total += 1;
                tally.passed += check.passed as usize;
            }
        }
        out
    }
}

/// `P diag(w) P^T` form of the population cumulant matrix: column `s` of `P`
/// is `(u^(k-1), u^(k-2) v, ..., v^(k-1))` for source loadings `(u, v)` read in
/// the given orientation, and `w_s = u_s k_{2k-1}(E_s)`.
pub fn factorized_matrix(
    model: &ModelSpec,
    k: usize,
    orientation: Orientation,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let order = 2 * k - 1;
    let sources = model.sources();
    let mut path = DMatrix::zeros(k, sources.len());
    let mut weights = DMatrix::zeros(sources.len(), sources.len());
    for (s, source) in sources.iter().enumerate() {
        let (u, v) = match orientation {
            Orientation::XY => (source.x_loading, source.y_loading),
            Orientation::YX => (source.y_loading, source.x_loading),
        };
        let kappa = source
            .noise
            .exact_cumulants(order)
            .ok_or_else(|| Error::MissingCumulants {
                source_name: format!("source {s}"),
                needed: order,
                have: 0,
            })?;
        for i in 0..k {
            path[(i, s)] = u.powi((k - 1 - i) as i32) * v.powi(i as i32);
        }
        weights[(s, s)] = u * kappa[order - 1];
    }
    Ok((path, weights))
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

fn break_irreducibility(model: &mut ModelSpec) {
    if model.m() == 0 {
        return;
    }
    // beta_1 = 0 on the effect side
    match model.direction {
        Direction::XToY => model.lambda_y[0] = -model.gamma * model.lambda_x[0],
        Direction::YToX => model.lambda_x[0] = -model.gamma * model.lambda_y[0],
        Direction::None => model.lambda_y[0] = 0.0,
    }
}

fn check_model(m: usize, index: usize, options: &SuiteOptions) -> Result<ModelOutcome> {
    let seed = derive_seed(options.seed, &[m as u64, index as u64]);
    let direction = if index.is_multiple_of(2) {
        Direction::XToY
    } else {
        Direction::YToX
    };
    let k = m + 2;
    let mut model = sample_oracle_model(m, direction, 2 * (k + 1) - 1, seed)?;
    if options.inject_reducible {
        break_irreducibility(&mut model);
    }
    let table = population_cumulants(&model, 2 * (k + 1) - 1)?;
    let (cause_side, expected) = match direction {
        Direction::XToY => (Orientation::XY, Verdict::XCausesY),
        _ => (Orientation::YX, Verdict::YCausesX),
    };

    let cause = CumulantMatrix::build(&table, k, cause_side)?;
    let effect = CumulantMatrix::build(&table, k, cause_side.flipped())?;
    let rank_cause = cause.rank(options.rank_tol).rank;
    let rank_effect = effect.rank(options.rank_tol).rank;
    let det_cause = cause.abs_determinant();
    let det_effect = effect.abs_determinant();

    let config = IdentifyConfig {
        rank_rel_tol: options.rank_tol,
        ..IdentifyConfig::population()
    };
    let searched = identify_from_cumulants(&table, &config)?;
    let forced = identify_from_cumulants(&table, &config.clone().with_assumed_m(Some(m + 1)))?;
    let step = forced.final_step();
    let (forced_cause, forced_effect) = match cause_side {
        Orientation::XY => (step.xy.rank, step.yx.rank),
        Orientation::YX => (step.yx.rank, step.xy.rank),
    };

    let checks = vec![
        check(
            "rank_cause",
            rank_cause == m + 1,
            format!("rank {rank_cause}, expected {}", m + 1),
        ),
        check(
            "rank_effect",
            rank_effect == m + 2,
            format!("rank {rank_effect}, expected {}", m + 2),
        ),
        check(
            "det_cause_small",
            det_cause < options.cause_det_max,
            format!("|det| {det_cause:.3e} vs < {:.0e}", options.cause_det_max),
        ),
        check(
            "det_effect_large",
            det_effect > options.effect_det_min,
            format!("|det| {det_effect:.3e} vs > {:.0e}", options.effect_det_min),
        ),
        check(
            "det_ordering",
            det_cause < det_effect,
            format!("cause {det_cause:.3e}, effect {det_effect:.3e}"),
        ),
        check(
            "inferred",
            searched.verdict == expected && searched.m == Some(m) && searched.k_used == k,
            format!(
                "{} with m = {:?} at k = {}",
                searched.verdict, searched.m, searched.k_used
            ),
        ),
        check(
            "next_order",
            forced.verdict == expected && forced_cause == m + 1 && forced_effect == m + 2,
            format!(
                "k = {}: {} with ranks cause {forced_cause}, effect {forced_effect}",
                forced.k_used, forced.verdict
            ),
        ),
    ];
    Ok(ModelOutcome {
        m,
        index,
        seed,
        direction,
        checks,
    })
}

/// Draws `models_per_m` oracle models for each `m` (alternating the true
/// direction) and checks, at `k = m + 2`, the cause-side rank `m + 1`, the
/// effect-side rank `m + 2`, both determinant bounds and their ordering, the
/// searched verdict and latent count, and the rank gap at `k = m + 3`.
pub fn run_theorem_suite(options: &SuiteOptions) -> Result<SuiteReport> {
    if let Some(&m) = options
        .m_values
        .iter()
        .find(|&&m| m + 3 > crate::identify::MAX_K)
    {
        return Err(Error::InvalidConfig(format!(
            "m = {m} needs k = {} above the cap {}",
            m + 3,
            crate::identify::MAX_K
        )));
    }
    if !(options.rank_tol > 0.0 && options.rank_tol < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "rank_tol must be in (0, 1), got {}",
            options.rank_tol
        )));
    }
    let mut models = Vec::with_capacity(options.m_values.len() * options.models_per_m);
    for &m in &options.m_values {
        for index in 0..options.models_per_m {
            models.push(check_model(m, index, options)?);
        }
    }
    Ok(SuiteReport {
        options: options.clone(),
        models,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_models_pass() {
        let report = run_theorem_suite(&SuiteOptions {
            m_values: vec![0, 1, 2],
            models_per_m: 10,
            ..SuiteOptions::default()
        })
        .unwrap();
        if let Some(outcome) = report.failures().next() {
            panic!("{outcome:?}");
        }
        let tallies = report.tallies();
        assert_eq!(tallies.len(), 3 * 7);
        assert!(tallies.iter().all(|t| t.total == 10 && t.passed == 10));
    }

    #[test]
    fn reducible_latent_is_caught() {
        let report = run_theorem_suite(&SuiteOptions {
            m_values: vec![1],
            models_per_m: 6,
            inject_reducible: true,
            ..SuiteOptions::default()
        })
        .unwrap();
        assert!(!report.passed());
        assert_eq!(report.failures().count(), 6);
    }

    #[test]
    fn rejects_m_beyond_cap() {
        let options = SuiteOptions {
            m_values: vec![6],
            ..SuiteOptions::default()
        };
        assert!(run_theorem_suite(&options).is_err());
    }
}
