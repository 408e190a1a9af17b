//! The `k x k` Hankel cumulant matrix and its rank and determinant.
//!
//! Entry `(i, j)` (1-based) of `CM^(k)_(X,Y)` is `C_{a,b}(X, Y)` with
//! `a = 2k + 1 - i - j` and `b = i + j - 2`, so every entry has total order
//! `2k - 1` and the matrix depends on `i + j` only. The `(Y, X)` orientation
//! reads the same positions from the swapped table.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cumulant::CumulantTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "xy")]
    XY,
    #[serde(rename = "yx")]
    YX,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::XY => Orientation::YX,
            Orientation::YX => Orientation::XY,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::XY => write!(f, "(X,Y)"),
            Orientation::YX => write!(f, "(Y,X)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CumulantMatrix {
    k: usize,
    orientation: Orientation,
    entries: DMatrix<f64>,
}

impl CumulantMatrix {
    /// Builds `CM^(k)` in the given orientation. Needs cumulants up to total
    /// order `2k - 1`.
    pub fn build(table: &CumulantTable, k: usize, orientation: Orientation) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig(
                "matrix order k must be positive".into(),
            ));
        }
        let needed = 2 * k - 1;
        if table.order() < needed {
            return Err(Error::IncompleteTable {
                needed,
                have: table.order(),
            });
        }
        // anti-diagonal s = i + j (0-based) holds C_{2k-1-s, s}
        let diag: Vec<f64> = (0..2 * k - 1)
            .map(|s| {
                let (a, b) = (needed - s, s);
                match orientation {
                    Orientation::XY => table.get(a, b),
                    Orientation::YX => table.get(b, a),
                }
            })
            .collect();
        let entries = DMatrix::from_fn(k, k, |i, j| diag[i + j]);
        Ok(Self {
            k,
            orientation,
            entries,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Highest total cumulant order the matrix reads.
    pub fn source_order(&self) -> usize {
        2 * self.k - 1
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i - 1, j - 1)]
    }

    pub fn rank(&self, rel_tol: f64) -> RankReport {
        rank_report(&self.entries, rel_tol)
    }

    pub fn abs_determinant(&self) -> f64 {
        abs_determinant(&self.entries)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub tolerance_used: f64,
    /// `rank < k`.
    pub deficient: bool,
}

/// Numerical rank: the number of singular values above `rel_tol * sigma_max`.
///
/// # Panics
///
/// If `rel_tol` is outside `(0, 1)` or the matrix is not square.
pub fn rank_report(matrix: &DMatrix<f64>, rel_tol: f64) -> RankReport {
    assert!(
        rel_tol > 0.0 && rel_tol < 1.0,
        "rank tolerance must lie in (0, 1), got {rel_tol}"
    );
    assert!(matrix.is_square(), "rank_report expects a square matrix");
    let k = matrix.nrows();
    let mut singular_values: Vec<f64> = matrix.clone().singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let tolerance_used = rel_tol * sigma_max;
    let rank = if sigma_max > 0.0 {
        singular_values
            .iter()
            .filter(|&&s| s > tolerance_used)
            .count()
    } else {
        0
    };
    RankReport {
        rank,
        singular_values,
        tolerance_used,
        deficient: rank < k,
    }
}

/// `|det|` through a fully pivoted LU factorization.
pub fn abs_determinant(matrix: &DMatrix<f64>) -> f64 {
    matrix.clone().full_piv_lu().determinant().abs()
}
