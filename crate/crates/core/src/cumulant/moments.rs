use rayon::prelude::*;

use crate::error::{Error, Result};

use super::sample::BivariateSample;
use super::table::{tri_index, tri_len, MomentTable};

/// Rows per accumulation chunk. Output is bitwise-stable for a fixed value.
pub(crate) const CHUNK_ROWS: usize = 4096;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    pub(crate) fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn compensated_mean(values: &[f64]) -> f64 {
    let partials: Vec<f64> = values
        .par_chunks(CHUNK_ROWS)
        .map(|chunk| {
            let mut acc = CompensatedSum::default();
            chunk.iter().for_each(|&v| acc.add(v));
            acc.value()
        })
        .collect();
    let mut total = CompensatedSum::default();
    partials.into_iter().for_each(|p| total.add(p));
    total.value() / values.len() as f64
}

/// Plug-in joint moments `m_{p,q} = (1/n) sum_t x_t^p y_t^q` for all
/// `p + q <= order`, on mean-centered data when `center` is set.
pub fn compute_moments(
    sample: &BivariateSample,
    order: usize,
    center: bool,
) -> Result<MomentTable> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let (shift_x, shift_y) = if center {
        (compensated_mean(sample.x()), compensated_mean(sample.y()))
    } else {
        (0.0, 0.0)
    };

    let len = tri_len(order);
    let partials: Vec<Vec<f64>> = sample
        .x()
        .par_chunks(CHUNK_ROWS)
        .zip(sample.y().par_chunks(CHUNK_ROWS))
        .map(|(xs, ys)| accumulate_chunk(xs, ys, order, shift_x, shift_y))
        .collect();

    let mut totals = vec![CompensatedSum::default(); len];
    for chunk in &partials {
        for (acc, &v) in totals.iter_mut().zip(chunk) {
            acc.add(v);
        }
    }
    let n = sample.len() as f64;
    let mut entries: Vec<f64> = totals.iter().map(|acc| acc.value() / n).collect();
    entries[0] = 1.0;
    MomentTable::from_entries(order, center, entries)
}

fn accumulate_chunk(xs: &[f64], ys: &[f64], order: usize, sx: f64, sy: f64) -> Vec<f64> {
    let mut sums = vec![CompensatedSum::default(); tri_len(order)];
    let mut px = vec![1.0; order + 1];
    let mut py = vec![1.0; order + 1];
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - sx, y - sy);
        for p in 1..=order {
            px[p] = px[p - 1] * dx;
            py[p] = py[p - 1] * dy;
        }
        for d in 1..=order {
            for q in 0..=d {
                sums[tri_index(d - q, q)].add(px[d - q] * py[q]);
            }
        }
    }
    sums.iter().map(CompensatedSum::value).collect()
}

/// Univariate plug-in moments `m_0 ..= m_order` (with `m_0 = 1`).
pub(crate) fn univariate_moments(values: &[f64], order: usize, center: bool) -> Vec<f64> {
    let shift = if center {
        compensated_mean(values)
    } else {
        0.0
    };
    let partials: Vec<Vec<f64>> = values
        .par_chunks(CHUNK_ROWS)
        .map(|chunk| {
            let mut sums = vec![CompensatedSum::default(); order + 1];
            for &v in chunk {
                let d = v - shift;
                let mut pow = 1.0;
                for s in sums.iter_mut().skip(1) {
                    pow *= d;
                    s.add(pow);
                }
            }
            sums.iter().map(CompensatedSum::value).collect()
        })
        .collect();
    let mut totals = vec![CompensatedSum::default(); order + 1];
    for chunk in &partials {
        for (acc, &v) in totals.iter_mut().zip(chunk) {
            acc.add(v);
        }
    }
    let n = values.len() as f64;
    let mut m: Vec<f64> = totals.iter().map(|a| a.value() / n).collect();
    m[0] = 1.0;
    m
}
