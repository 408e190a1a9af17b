use crate::error::{Error, Result};

use super::moments::compensated_mean;

/// Two aligned series of observations of `X` and `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl BivariateSample {
    /// Validates equal lengths, `n >= 2` and finiteness.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                x: x.len(),
                y: y.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::EmptySample);
        }
        if x.len() < 2 {
            return Err(Error::TooFewSamples { n: x.len(), min: 2 });
        }
        for (series, values) in [('x', &x), ('y', &y)] {
            if let Some(index) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { series, index });
            }
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// The same observations with the roles of `X` and `Y` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.x, self.y)
    }

    /// Rescales each series to zero mean and unit (plug-in) variance.
    pub fn standardized(&self) -> Result<Self> {
        let x = standardize(&self.x).ok_or(Error::DegenerateSeries('x'))?;
        let y = standardize(&self.y).ok_or(Error::DegenerateSeries('y'))?;
        Ok(Self { x, y })
    }
}

fn standardize(values: &[f64]) -> Option<Vec<f64>> {
    let mean = compensated_mean(values);
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let var = compensated_mean(&centered.iter().map(|d| d * d).collect::<Vec<_>>());
    // relative to the magnitude of the data, so a constant offset series counts as degenerate
    let scale = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if !(var > 0.0) || var.sqrt() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return None;
    }
    let sd = var.sqrt();
    Some(centered.into_iter().map(|d| d / sd).collect())
}
