use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::identify::{identify_direction, IdentifyConfig, Verdict};
use crate::model::{generate_data, sample_model, Case, Direction, NoiseFamily};
use crate::seed::derive_seed;

use super::plan::BenchPlan;

/// Family label of a pooled cell.
pub const MIXED_FAMILIES: &str = "mixed";

/// Tallies for one `(case, m, family, n, assumed)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub case: Case,
    pub m: usize,
    pub family: String,
    pub n: usize,
    #[serde(default)]
    pub assumed_m: Option<usize>,
    pub replicates: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub x_causes_y: usize,
    pub y_causes_x: usize,
    pub independent: usize,
    /// Includes replicates that failed with an error.
    pub undecided: usize,
    pub errors: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub plan: BenchPlan,
    pub cells: Vec<CellResult>,
}

impl BenchReport {
    /// Correct over total across the cells accepted by `filter`.
    pub fn pooled_accuracy(&self, filter: impl Fn(&CellResult) -> bool) -> Option<f64> {
        let (correct, total) = self
            .cells
            .iter()
            .filter(|c| filter(c))
            .fold((0, 0), |(c, t), cell| {
                (c + cell.correct, t + cell.replicates)
            });
        (total > 0).then(|| correct as f64 / total as f64)
    }

    pub fn cell(
        &self,
        case: Case,
        family: &str,
        n: usize,
        assumed_m: Option<usize>,
    ) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.case == case && c.family == family && c.n == n && c.assumed_m == assumed_m)
    }

    /// Copy with all wall-clock fields removed.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for cell in &mut out.cells {
            cell.mean_runtime_ms = None;
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct CellKey {
    case: Case,
    m: usize,
    family: Option<NoiseFamily>,
    n: usize,
    assumed_m: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    verdict: Verdict,
    truth: Direction,
    failed: bool,
    millis: f64,
}

fn family_code(family: Option<NoiseFamily>) -> u64 {
    family.map_or(u64::MAX, |f| f as u64)
}

fn run_replicate(key: &CellKey, rep: usize, plan: &BenchPlan) -> Outcome {
    let start = Instant::now();
    // the model and its data depend on neither the assumed count nor, for the
    // model, the sample size, so those dimensions compare like with like
    let model_seed = derive_seed(
        plan.seed,
        &[
            u8::from(key.case) as u64,
            key.m as u64,
            family_code(key.family),
            rep as u64,
        ],
    );
    let families: Vec<NoiseFamily> = match key.family {
        Some(f) => vec![f],
        None => plan.families.clone(),
    };
    let config = IdentifyConfig {
        assumed_m: key.assumed_m,
        ..plan.config.clone()
    };
    let attempt = || -> Result<(Direction, Verdict)> {
        let model = sample_model(key.case, key.m, &families, model_seed)?;
        let data = generate_data(&model, key.n, derive_seed(model_seed, &[key.n as u64]))?;
        Ok((model.direction, identify_direction(&data, &config)?.verdict))
    };
    let (truth, verdict, failed) = match attempt() {
        Ok((truth, verdict)) => (truth, verdict, false),
        Err(_) => (Direction::None, Verdict::Undecided, true),
    };
    Outcome {
        verdict,
        truth,
        failed,
        millis: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn is_correct(verdict: Verdict, truth: Direction) -> bool {
    matches!(
        (verdict, truth),
        (Verdict::XCausesY, Direction::XToY) | (Verdict::YCausesX, Direction::YToX)
    )
}

fn tally(key: &CellKey, outcomes: &[Outcome]) -> CellResult {
    let count = |v: Verdict| outcomes.iter().filter(|o| o.verdict == v).count();
    let correct = outcomes
        .iter()
        .filter(|o| !o.failed && is_correct(o.verdict, o.truth))
        .count();
    let replicates = outcomes.len();
    CellResult {
        case: key.case,
        m: key.m,
        family: key
            .family
            .map_or_else(|| MIXED_FAMILIES.to_string(), |f| f.name().to_string()),
        n: key.n,
        assumed_m: key.assumed_m,
        replicates,
        correct,
        accuracy: correct as f64 / replicates as f64,
        x_causes_y: count(Verdict::XCausesY),
        y_causes_x: count(Verdict::YCausesX),
        independent: count(Verdict::ConditionallyIndependent),
        undecided: count(Verdict::Undecided),
        errors: outcomes.iter().filter(|o| o.failed).count(),
        mean_runtime_ms: Some(outcomes.iter().map(|o| o.millis).sum::<f64>() / replicates as f64),
    }
}

/// Runs every cell of the plan. Replicates run in parallel; each has its own
/// derived seed, so results do not depend on scheduling. Replicates that fail
/// count as undecided and are also tallied under `errors`.
pub fn run_benchmark(plan: &BenchPlan) -> Result<BenchReport> {
    plan.validate()?;
    let families: Vec<Option<NoiseFamily>> = if plan.pool_families {
        vec![None]
    } else {
        plan.families.iter().copied().map(Some).collect()
    };
    let assumed: Vec<Option<usize>> = match &plan.assumed_counts {
        Some(list) => list.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let mut keys = Vec::new();
    for (case, m) in plan.structures() {
        for &family in &families {
            for &n in &plan.sample_sizes {
                for &assumed_m in &assumed {
                    keys.push(CellKey {
                        case,
                        m,
                        family,
                        n,
                        assumed_m,
                    });
                }
            }
        }
    }
    let outcomes: Vec<Outcome> = keys
        .par_iter()
        .flat_map_iter(|key| (0..plan.replicates).map(move |rep| (key, rep)))
        .map(|(key, rep)| run_replicate(key, rep, plan))
        .collect();
    let cells = keys
        .iter()
        .zip(outcomes.chunks(plan.replicates))
        .map(|(key, chunk)| tally(key, chunk))
        .collect();
    Ok(BenchReport {
        plan: plan.clone(),
        cells,
    })
}

/// Accuracy for every pair of true and assumed latent counts at one sample
/// size, with sources drawing their families from `families`.
pub fn run_assumed_grid(
    true_m: &[usize],
    assumed_m: &[usize],
    n: usize,
    replicates: usize,
    families: &[NoiseFamily],
    seed: u64,
    config: &IdentifyConfig,
) -> Result<BenchReport> {
    let mut cases: Vec<Case> = Vec::new();
    for &m in true_m {
        let case = match m {
            0 => Case::One,
            1 => Case::Two,
            _ => Case::Three,
        };
        if !cases.contains(&case) {
            cases.push(case);
        }
    }
    let latent_counts: Vec<usize> = true_m.iter().copied().filter(|&m| m >= 2).collect();
    let plan = BenchPlan {
        cases,
        families: families.to_vec(),
        sample_sizes: vec![n],
        replicates,
        latent_counts: if latent_counts.is_empty() {
            vec![2]
        } else {
            latent_counts
        },
        assumed_counts: Some(assumed_m.to_vec()),
        pool_families: true,
        seed,
        config: config.clone(),
    };
    run_benchmark(&plan)
}
