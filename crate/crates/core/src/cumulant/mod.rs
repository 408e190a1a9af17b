//! Bivariate moment and cumulant estimation.

mod moments;
mod partition;
mod sample;
mod series;
mod table;

pub use moments::compute_moments;
pub use partition::{moments_to_cumulants_partition, PARTITION_ORDER_CAP};
pub use sample::BivariateSample;
pub use series::moments_to_cumulants_series;
pub use table::{CumulantTable, MomentTable};

use crate::error::{Error, Result};

/// All joint cumulants up to `order`, estimated by plug-in central moments.
pub fn estimate_cumulants(sample: &BivariateSample, order: usize) -> Result<CumulantTable> {
    let moments = compute_moments(sample, order, true)?;
    moments_to_cumulants_series(&moments)
}

/// Plug-in estimate of `C_{a,b}(X, Y)`, the joint cumulant with `X` repeated
/// `a` times and `Y` repeated `b` times.
pub fn joint_cumulant(sample: &BivariateSample, a: usize, b: usize) -> Result<f64> {
    if a + b == 0 {
        return Err(Error::InvalidOrder(0));
    }
    Ok(estimate_cumulants(sample, a + b)?.get(a, b))
}

/// Univariate cumulants `k_1 ..= k_order` of a single series. With `center`
/// set, `k_1` is zero and higher orders are unaffected.
pub fn univariate_cumulants(values: &[f64], order: usize, center: bool) -> Result<Vec<f64>> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { series: 'x', index });
    }
    let m = moments::univariate_moments(values, order, center);
    Ok(series::univariate_log(&m))
}
