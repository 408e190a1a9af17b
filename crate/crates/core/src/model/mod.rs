//! Linear non-Gaussian models with latent confounders: specification, exact
//! population cumulants, data generation and random model draws.
//!
//! A model with `m` latents `L_i`, direct effect `gamma` and loadings
//! `lambda_x`, `lambda_y` is, for `X -> Y`,
//!
//! ```text
//! X = sum_i lambda_x[i] L_i + E_x
//! Y = gamma X + sum_i lambda_y[i] L_i + E_y
//! ```
//!
//! and the mirror image for `Y -> X`. Every variable is a linear mix of the
//! `m + 2` independent sources, so the joint cumulants are
//! `C_{a,b} = sum_s u_s^a v_s^b k_{a+b}(E_s)` over source loadings `(u_s, v_s)`.

mod generate;
mod noise;
mod sampler;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cumulant::CumulantTable;
use crate::error::{Error, Result};

pub use generate::generate_data;
pub use noise::{noise_cumulants_mc, NoiseFamily, NoiseSpec};
pub use sampler::{sample_model, sample_oracle_model, ORACLE_MIN_ANGLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    XToY,
    YToX,
    /// No direct edge; any dependence comes from the latents.
    None,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::XToY => "x_to_y",
            Direction::YToX => "y_to_x",
            Direction::None => "none",
        })
    }
}

/// Benchmark cases by latent count: one has none, two has one, three has two
/// or more.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Case {
    One,
    Two,
    Three,
}

impl Case {
    pub fn accepts(self, m: usize) -> bool {
        match self {
            Case::One => m == 0,
            Case::Two => m == 1,
            Case::Three => m >= 2,
        }
    }

    pub fn default_m(self) -> usize {
        match self {
            Case::One => 0,
            Case::Two => 1,
            Case::Three => 2,
        }
    }
}

impl TryFrom<u8> for Case {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Case::One),
            2 => Ok(Case::Two),
            3 => Ok(Case::Three),
            _ => Err(format!("case must be 1, 2 or 3, got {v}")),
        }
    }
}

impl From<Case> for u8 {
    fn from(c: Case) -> u8 {
        match c {
            Case::One => 1,
            Case::Two => 2,
            Case::Three => 3,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub direction: Direction,
    /// Direct effect; must be zero when `direction` is `none`.
    pub gamma: f64,
    pub lambda_x: Vec<f64>,
    pub lambda_y: Vec<f64>,
    pub latent_noise: Vec<NoiseSpec>,
    pub noise_x: NoiseSpec,
    pub noise_y: NoiseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// One independent source with its total loadings on `X` and `Y`.
#[derive(Debug, Clone, Copy)]
pub struct Source<'a> {
    pub x_loading: f64,
    pub y_loading: f64,
    pub noise: &'a NoiseSpec,
}

impl ModelSpec {
    pub fn m(&self) -> usize {
        self.lambda_x.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.m();
        if self.lambda_y.len() != m || self.latent_noise.len() != m {
            return Err(Error::InvalidModel(format!(
                "lambda_x, lambda_y and latent_noise lengths differ ({}, {}, {})",
                m,
                self.lambda_y.len(),
                self.latent_noise.len()
            )));
        }
        let coefs = std::iter::once(self.gamma)
            .chain(self.lambda_x.iter().copied())
            .chain(self.lambda_y.iter().copied());
        if coefs.into_iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("non-finite coefficient".into()));
        }
        if self.direction == Direction::None && self.gamma != 0.0 {
            return Err(Error::InvalidModel(
                "gamma must be 0 without a direct edge".into(),
            ));
        }
        for noise in self
            .latent_noise
            .iter()
            .chain([&self.noise_x, &self.noise_y])
        {
            noise.validate()?;
        }
        Ok(())
    }

    /// Total loadings `(alpha_i, beta_i)` of each latent on `X` and `Y`.
    pub fn total_effects(&self) -> Vec<(f64, f64)> {
        let g = self.gamma;
        self.lambda_x
            .iter()
            .zip(&self.lambda_y)
            .map(|(&lx, &ly)| match self.direction {
                Direction::XToY => (lx, g * lx + ly),
                Direction::YToX => (lx + g * ly, ly),
                Direction::None => (lx, ly),
            })
            .collect()
    }

    /// Latents first, then `E_x`, then `E_y`.
    pub fn sources(&self) -> Vec<Source<'_>> {
        let g = self.gamma;
        let (ex, ey) = match self.direction {
            Direction::XToY => ((1.0, g), (0.0, 1.0)),
            Direction::YToX => ((1.0, 0.0), (g, 1.0)),
            Direction::None => ((1.0, 0.0), (0.0, 1.0)),
        };
        let mut out: Vec<Source<'_>> = self
            .total_effects()
            .into_iter()
            .zip(&self.latent_noise)
            .map(|((u, v), noise)| Source {
                x_loading: u,
                y_loading: v,
                noise,
            })
            .collect();
        out.push(Source {
            x_loading: ex.0,
            y_loading: ex.1,
            noise: &self.noise_x,
        });
        out.push(Source {
            x_loading: ey.0,
            y_loading: ey.1,
            noise: &self.noise_y,
        });
        out
    }

    /// Every latent reaches both variables.
    pub fn is_irreducible(&self) -> bool {
        self.total_effects()
            .iter()
            .all(|&(a, b)| a != 0.0 && b != 0.0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModelSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }
}

fn source_name(index: usize, m: usize) -> String {
    match index.checked_sub(m) {
        Some(0) => "E_x".into(),
        Some(_) => "E_y".into(),
        None => format!("L{}", index + 1),
    }
}

/// Exact joint cumulants of `(X, Y)` up to total order `max_order`. Every
/// source must carry exact cumulants to that order.
pub fn population_cumulants(model: &ModelSpec, max_order: usize) -> Result<CumulantTable> {
    model.validate()?;
    if max_order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let m = model.m();
    let sources = model.sources();
    let mut kappas = Vec::with_capacity(sources.len());
    for (i, s) in sources.iter().enumerate() {
        let k = s
            .noise
            .exact_cumulants(max_order)
            .ok_or_else(|| Error::MissingCumulants {
                source_name: source_name(i, m),
                needed: max_order,
                have: match s.noise {
                    NoiseSpec::Cumulants { values } => values.len(),
                    _ => 0,
                },
            })?;
        kappas.push(k);
    }
    Ok(CumulantTable::from_fn(max_order, |a, b| {
        sources
            .iter()
            .zip(&kappas)
            .map(|(s, k)| s.x_loading.powi(a as i32) * s.y_loading.powi(b as i32) * k[a + b - 1])
            .sum()
    }))
}

/// Replaces every sampleable source by Monte-Carlo cumulants up to
/// `max_order`, so the model can be fed to [`population_cumulants`].
pub fn with_mc_cumulants(
    model: &ModelSpec,
    max_order: usize,
    n_mc: usize,
    seed: u64,
) -> Result<ModelSpec> {
    model.validate()?;
    let convert = |noise: &NoiseSpec, stream: u64| -> Result<NoiseSpec> {
        match noise {
            NoiseSpec::Distribution { .. } => Ok(NoiseSpec::Cumulants {
                values: noise_cumulants_mc(
                    noise,
                    max_order,
                    n_mc,
                    crate::seed::derive_seed(seed, &[stream]),
                )?,
            }),
            other => Ok(other.clone()),
        }
    };
    let mut out = model.clone();
    out.noise_x = convert(&model.noise_x, 0)?;
    out.noise_y = convert(&model.noise_y, 1)?;
    for (i, noise) in out.latent_noise.iter_mut().enumerate() {
        *noise = convert(noise, 2 + i as u64)?;
    }
    Ok(out)
}
