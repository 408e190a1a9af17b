//! Causal direction and latent count from cumulant matrices.
//!
//! Starting at `k = 2`, both `CM^(k)_(X,Y)` and `CM^(k)_(Y,X)` are built and
//! ranked; `k` grows while both have full rank. When one of them turns
//! rank-deficient the latent count is `m = k - 2`, and the two absolute
//! determinants decide: near-equal means `X` and `Y` are independent given the
//! latents, otherwise the orientation with the smaller determinant has the
//! cause as its first argument.
//!
//! Two extensions sit on top of that loop:
//!
//! * When *both* matrices are rank-deficient the rank pattern decides (equal
//!   ranks: conditionally independent; otherwise the lower rank marks the
//!   cause). Above `k = m + 2` both population determinants are zero, so the
//!   ranks are the only signal left there.
//! * `assumed_m` skips the loop and evaluates `k = assumed_m + 2` directly.

use serde::{Deserialize, Serialize};

use crate::cumulant::{estimate_cumulants, BivariateSample, CumulantTable};
use crate::error::{Error, Result};
use crate::matrix::{CumulantMatrix, Orientation, RankReport};

/// Largest matrix order the pipeline will build (cumulants of order 15).
pub const MAX_K: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    XCausesY,
    YCausesX,
    ConditionallyIndependent,
    Undecided,
}

impl Verdict {
    /// The verdict for the same data with `X` and `Y` exchanged.
    pub fn swapped(self) -> Self {
        match self {
            Verdict::XCausesY => Verdict::YCausesX,
            Verdict::YCausesX => Verdict::XCausesY,
            other => other,
        }
    }

    pub fn is_directional(self) -> bool {
        matches!(self, Verdict::XCausesY | Verdict::YCausesX)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::XCausesY => "x_causes_y",
            Verdict::YCausesX => "y_causes_x",
            Verdict::ConditionallyIndependent => "conditionally_independent",
            Verdict::Undecided => "undecided",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the determinant difference is compared with `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonMode {
    /// `| |CM_xy| - |CM_yx| | < epsilon`.
    #[default]
    Absolute,
    /// `| |CM_xy| - |CM_yx| | < epsilon * max(|CM_xy|, |CM_yx|)`.
    Relative,
}

/// Use of the rank pattern once both matrices are rank-deficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RankRule {
    /// Determinants only.
    Off,
    /// Both ranks equal to one means independent; otherwise determinants.
    #[default]
    Independence,
    /// Equal ranks mean conditionally independent, otherwise the lower rank
    /// marks the cause.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionRule {
    Determinant,
    RankPattern,
    /// `k_max` reached with both matrices at full rank.
    KLimit,
}

impl DecisionRule {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionRule::Determinant => "determinant",
            DecisionRule::RankPattern => "rank_pattern",
            DecisionRule::KLimit => "k_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IdentifyConfig {
    pub epsilon: f64,
    pub epsilon_mode: EpsilonMode,
    pub rank_rel_tol: f64,
    pub k_max: usize,
    pub standardize: bool,
    /// Smallest sample accepted by [`identify_direction`].
    pub min_samples: usize,
    /// Evaluate `k = assumed_m + 2` directly instead of searching.
    pub assumed_m: Option<usize>,
    pub rank_rule: RankRule,
}

impl Default for IdentifyConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-5,
            epsilon_mode: EpsilonMode::Absolute,
            rank_rel_tol: 0.05,
            k_max: 6,
            standardize: true,
            min_samples: 500,
            assumed_m: None,
            rank_rule: RankRule::Independence,
        }
    }
}

impl IdentifyConfig {
    /// Settings for exact population tables: tight rank tolerance, relative
    /// determinant comparison, no rescaling.
    pub fn population() -> Self {
        Self {
            epsilon: 1e-5,
            epsilon_mode: EpsilonMode::Relative,
            rank_rel_tol: 1e-8,
            k_max: MAX_K,
            standardize: false,
            min_samples: 0,
            assumed_m: None,
            rank_rule: RankRule::Full,
        }
    }

    pub fn with_assumed_m(mut self, m: Option<usize>) -> Self {
        self.assumed_m = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.rank_rel_tol > 0.0 && self.rank_rel_tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rank tolerance must lie in (0, 1), got {}",
                self.rank_rel_tol
            )));
        }
        if !(2..=MAX_K).contains(&self.k_max) {
            return Err(Error::InvalidConfig(format!(
                "k_max must lie in 2..={MAX_K}, got {}",
                self.k_max
            )));
        }
        if let Some(m) = self.assumed_m {
            if m + 2 > MAX_K {
                return Err(Error::InvalidConfig(format!(
                    "assumed latent count {m} needs k = {} > {MAX_K}",
                    m + 2
                )));
            }
        }
        Ok(())
    }

    /// Highest cumulant order the configuration can consume.
    pub fn required_order(&self) -> usize {
        let k = match self.assumed_m {
            Some(m) => m + 2,
            None => self.k_max,
        };
        2 * k - 1
    }
}

/// Ranks of both orientations at one matrix order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankStep {
    pub k: usize,
    pub xy: RankReport,
    pub yx: RankReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceResult {
    pub verdict: Verdict,
    /// Latent confounder count; `None` when undecided.
    pub m: Option<usize>,
    pub k_used: usize,
    pub det_xy: f64,
    pub det_yx: f64,
    pub decided_by: DecisionRule,
    /// True when `k` came from `assumed_m` rather than the rank search.
    pub forced: bool,
    /// `min(rank_xy, rank_yx) - 1` at `k_used`, when either is deficient.
    pub m_from_ranks: Option<usize>,
    pub trajectory: Vec<RankStep>,
}

impl InferenceResult {
    pub fn final_step(&self) -> &RankStep {
        self.trajectory.last().expect("trajectory is never empty")
    }
}

/// Latent count from the ranks of the two orientations at the same `k`:
/// `min(rank_xy, rank_yx) - 1`, floored at zero.
pub fn infer_latent_count(rank_xy: &RankReport, rank_yx: &RankReport) -> Result<usize> {
    if !rank_xy.deficient && !rank_yx.deficient {
        return Err(Error::NoRankDeficiency);
    }
    Ok(rank_xy.rank.min(rank_yx.rank).saturating_sub(1))
}

/// Runs the identification on raw observations.
pub fn identify_direction(
    sample: &BivariateSample,
    config: &IdentifyConfig,
) -> Result<InferenceResult> {
    config.validate()?;
    if sample.len() < config.min_samples {
        return Err(Error::TooFewSamples {
            n: sample.len(),
            min: config.min_samples,
        });
    }
    // degenerate series are rejected whether or not rescaling is on
    let standardized = sample.standardized()?;
    let source = if config.standardize {
        &standardized
    } else {
        sample
    };
    let table = estimate_cumulants(source, config.required_order())?;
    let inner = IdentifyConfig {
        standardize: false,
        ..config.clone()
    };
    identify_from_cumulants(&table, &inner)
}

/// Runs the identification on a cumulant table (estimated or exact).
pub fn identify_from_cumulants(
    table: &CumulantTable,
    config: &IdentifyConfig,
) -> Result<InferenceResult> {
    config.validate()?;
    // the search stops at the largest k the table supports
    let needed = match config.assumed_m {
        Some(_) => config.required_order(),
        None => 3,
    };
    if table.order() < needed {
        return Err(Error::IncompleteTable {
            needed,
            have: table.order(),
        });
    }
    let k_cap = config.k_max.min(table.order().div_ceil(2));
    let scaled;
    let table = if config.standardize {
        scaled = table.standardized()?;
        &scaled
    } else {
        table
    };

    let step_at = |k: usize| -> Result<(RankStep, f64, f64)> {
        let xy = CumulantMatrix::build(table, k, Orientation::XY)?;
        let yx = CumulantMatrix::build(table, k, Orientation::YX)?;
        Ok((
            RankStep {
                k,
                xy: xy.rank(config.rank_rel_tol),
                yx: yx.rank(config.rank_rel_tol),
            },
            xy.abs_determinant(),
            yx.abs_determinant(),
        ))
    };

    let mut trajectory = Vec::new();
    let (det_xy, det_yx, forced) = match config.assumed_m {
        Some(m) => {
            let (step, dxy, dyx) = step_at(m + 2)?;
            trajectory.push(step);
            (dxy, dyx, true)
        }
        None => {
            let mut k = 2;
            loop {
                let (step, dxy, dyx) = step_at(k)?;
                let full = !step.xy.deficient && !step.yx.deficient;
                trajectory.push(step);
                if full && k < k_cap {
                    k += 1;
                    continue;
                }
                break (dxy, dyx, false);
            }
        }
    };

    let last = trajectory.last().expect("at least one step");
    let k_used = last.k;
    let m_from_ranks = infer_latent_count(&last.xy, &last.yx).ok();
    let both_full = !last.xy.deficient && !last.yx.deficient;

    let (verdict, decided_by, m) = if !forced && both_full {
        (Verdict::Undecided, DecisionRule::KLimit, None)
    } else {
        let (verdict, rule) = decide(last, det_xy, det_yx, config);
        let m = config.assumed_m.unwrap_or(k_used - 2);
        (verdict, rule, Some(m))
    };

    Ok(InferenceResult {
        verdict,
        m,
        k_used,
        det_xy,
        det_yx,
        decided_by,
        forced,
        m_from_ranks,
        trajectory,
    })
}

fn decide(
    step: &RankStep,
    det_xy: f64,
    det_yx: f64,
    config: &IdentifyConfig,
) -> (Verdict, DecisionRule) {
    if step.xy.deficient && step.yx.deficient {
        let verdict = match config.rank_rule {
            RankRule::Off => None,
            RankRule::Independence => (step.xy.rank <= 1 && step.yx.rank <= 1)
                .then_some(Verdict::ConditionallyIndependent),
            RankRule::Full => Some(match step.xy.rank.cmp(&step.yx.rank) {
                std::cmp::Ordering::Less => Verdict::XCausesY,
                std::cmp::Ordering::Greater => Verdict::YCausesX,
                std::cmp::Ordering::Equal => Verdict::ConditionallyIndependent,
            }),
        };
        if let Some(verdict) = verdict {
            return (verdict, DecisionRule::RankPattern);
        }
    }
    let diff = (det_xy - det_yx).abs();
    let tie = match config.epsilon_mode {
        EpsilonMode::Absolute => diff < config.epsilon,
        EpsilonMode::Relative => {
            let scale = det_xy.max(det_yx);
            scale == 0.0 || diff < config.epsilon * scale
        }
    };
    let verdict = if tie {
        Verdict::ConditionallyIndependent
    } else if det_xy < det_yx {
        Verdict::XCausesY
    } else {
        Verdict::YCausesX
    };
    (verdict, DecisionRule::Determinant)
}
