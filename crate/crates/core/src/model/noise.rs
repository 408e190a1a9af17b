use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal, Open01};
use serde::{Deserialize, Serialize};

use crate::cumulant::univariate_cumulants;
use crate::error::{Error, Result};

/// Base distributions for noise draws, `d1` through `d5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseFamily {
    #[serde(alias = "d1")]
    Laplace,
    #[serde(alias = "d2")]
    Normal,
    #[serde(alias = "d3")]
    Logistic,
    #[serde(alias = "d4")]
    Exponential,
    #[serde(alias = "d5")]
    Uniform,
}

impl NoiseFamily {
    pub const ALL: [NoiseFamily; 5] = [
        NoiseFamily::Laplace,
        NoiseFamily::Normal,
        NoiseFamily::Logistic,
        NoiseFamily::Exponential,
        NoiseFamily::Uniform,
    ];

    /// Short label `d1` ..= `d5`.
    pub fn label(self) -> &'static str {
        match self {
            NoiseFamily::Laplace => "d1",
            NoiseFamily::Normal => "d2",
            NoiseFamily::Logistic => "d3",
            NoiseFamily::Exponential => "d4",
            NoiseFamily::Uniform => "d5",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NoiseFamily::Laplace => "laplace",
            NoiseFamily::Normal => "normal",
            NoiseFamily::Logistic => "logistic",
            NoiseFamily::Exponential => "exponential",
            NoiseFamily::Uniform => "uniform",
        }
    }

    /// One draw at location zero with the given scale.
    fn draw<R: Rng + ?Sized>(self, scale: f64, rng: &mut R) -> f64 {
        match self {
            NoiseFamily::Laplace => {
                let u: f64 = rng.sample::<f64, _>(Open01) - 0.5;
                -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
            NoiseFamily::Normal => Normal::new(0.0, scale).expect("positive scale").sample(rng),
            NoiseFamily::Logistic => {
                let u: f64 = rng.sample(Open01);
                scale * (u / (1.0 - u)).ln()
            }
            NoiseFamily::Exponential => {
                Exp::new(scale.recip()).expect("positive scale").sample(rng)
            }
            NoiseFamily::Uniform => rng.random_range(-scale..scale),
        }
    }
}

impl fmt::Display for NoiseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        NoiseFamily::ALL
            .into_iter()
            .find(|f| f.name() == lower || f.label() == lower)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown noise family '{s}'")))
    }
}

/// An independent noise source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    /// Draw `r` from `family` at `scale`; the noise is `log|r|` when
    /// `log_abs` is set and `r` otherwise.
    Distribution {
        family: NoiseFamily,
        scale: f64,
        log_abs: bool,
    },
    /// Exact cumulants `k_1, k_2, ...` of a source that is never sampled.
    Cumulants { values: Vec<f64> },
    /// A point mass.
    Constant { value: f64 },
}

impl NoiseSpec {
    pub fn log_abs(family: NoiseFamily, scale: f64) -> Self {
        NoiseSpec::Distribution {
            family,
            scale,
            log_abs: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseSpec::Distribution { scale, .. } => {
                if !(*scale > 0.0) || !scale.is_finite() {
                    return Err(Error::InvalidModel(format!(
                        "noise scale must be positive, got {scale}"
                    )));
                }
            }
            NoiseSpec::Cumulants { values } => {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidModel("non-finite source cumulant".into()));
                }
                if !values.iter().skip(2).any(|&v| v != 0.0) {
                    return Err(Error::InvalidModel(
                        "explicit cumulants need a nonzero entry of order 3 or higher".into(),
                    ));
                }
            }
            NoiseSpec::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidModel("non-finite constant noise".into()));
                }
            }
        }
        Ok(())
    }

    /// Exact cumulants `k_1 ..= k_max_order`, when the source carries them.
    pub fn exact_cumulants(&self, max_order: usize) -> Option<Vec<f64>> {
        match self {
            NoiseSpec::Cumulants { values } if values.len() >= max_order => {
                Some(values[..max_order].to_vec())
            }
            NoiseSpec::Constant { value } => {
                let mut out = vec![0.0; max_order];
                if let Some(first) = out.first_mut() {
                    *first = *value;
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub fn is_sampleable(&self) -> bool {
        !matches!(self, NoiseSpec::Cumulants { .. })
    }

    /// `n` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        match *self {
            NoiseSpec::Distribution {
                family,
                scale,
                log_abs,
            } => Ok((0..n)
                .map(|_| loop {
                    let r = family.draw(scale, rng);
                    let e = if log_abs { r.abs().ln() } else { r };
                    if e.is_finite() {
                        break e;
                    }
                })
                .collect()),
            NoiseSpec::Constant { value } => Ok(vec![value; n]),
            NoiseSpec::Cumulants { .. } => Err(Error::CumulantOnlyNoise("explicit".into())),
        }
    }
}

/// Monte-Carlo cumulants `k_1 ..= k_max_order` of a noise source from `n_mc`
/// draws. Sources with exact cumulants return them unchanged.
pub fn noise_cumulants_mc(
    spec: &NoiseSpec,
    max_order: usize,
    n_mc: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    spec.validate()?;
    if let Some(exact) = spec.exact_cumulants(max_order) {
        return Ok(exact);
    }
    if let NoiseSpec::Cumulants { values } = spec {
        return Err(Error::MissingCumulants {
            source_name: "explicit".into(),
            needed: max_order,
            have: values.len(),
        });
    }
    if n_mc < 2 {
        return Err(Error::TooFewSamples { n: n_mc, min: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = spec.sample(n_mc, &mut rng)?;
    univariate_cumulants(&draws, max_order, false)
}
