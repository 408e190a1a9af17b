use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of `(p, q)` in a table stored by increasing total degree.
#[inline]
pub(crate) fn tri_index(p: usize, q: usize) -> usize {
    let d = p + q;
    d * (d + 1) / 2 + q
}

#[inline]
pub(crate) fn tri_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Joint raw or central moments `m_{p,q} = E[X^p Y^q]` for `p + q <= order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    order: usize,
    centered: bool,
    entries: Vec<f64>,
}

impl MomentTable {
    /// Builds a table from entries laid out by total degree:
    /// `m_{0,0}, m_{1,0}, m_{0,1}, m_{2,0}, m_{1,1}, m_{0,2}, ...`.
    pub fn from_entries(order: usize, centered: bool, entries: Vec<f64>) -> Result<Self> {
        let expected = tri_len(order);
        if entries.len() < expected {
            let have = (0..=order).rev().find(|&d| tri_len(d) <= entries.len());
            return Err(Error::IncompleteTable {
                needed: order,
                have: have.unwrap_or(0),
            });
        }
        if entries.len() > expected {
            return Err(Error::MalformedMoments(format!(
                "{} entries for order {order}, expected {expected}",
                entries.len()
            )));
        }
        if entries[0] != 1.0 {
            return Err(Error::MalformedMoments(format!(
                "m_(0,0) must be 1, got {}",
                entries[0]
            )));
        }
        Ok(Self {
            order,
            centered,
            entries,
        })
    }

    /// Builds a table by evaluating `f(p, q)` for every `p + q <= order`, with
    /// `m_{0,0}` forced to 1.
    pub fn from_fn(order: usize, centered: bool, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; tri_len(order)];
        for d in 0..=order {
            for q in 0..=d {
                entries[tri_index(d - q, q)] = f(d - q, q);
            }
        }
        entries[0] = 1.0;
        Self {
            order,
            centered,
            entries,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    /// `m_{p,q}`. Panics if `p + q` exceeds the table order.
    pub fn get(&self, p: usize, q: usize) -> f64 {
        assert!(
            p + q <= self.order,
            "m_({p},{q}) beyond order {}",
            self.order
        );
        self.entries[tri_index(p, q)]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Joint cumulants `C_{a,b}(X, Y)` for `1 <= a + b <= order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantTable {
    order: usize,
    // slot (0, 0) is unused and held at zero
    entries: Vec<f64>,
}

impl CumulantTable {
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; tri_len(order)];
        for d in 1..=order {
            for q in 0..=d {
                entries[tri_index(d - q, q)] = f(d - q, q);
            }
        }
        Self { order, entries }
    }

    pub(crate) fn from_raw(order: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), tri_len(order));
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `C_{a,b}`. Panics if `a + b` is zero or exceeds the table order.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        assert!(
            a + b >= 1 && a + b <= self.order,
            "C_({a},{b}) outside orders 1..={}",
            self.order
        );
        self.entries[tri_index(a, b)]
    }

    pub fn try_get(&self, a: usize, b: usize) -> Option<f64> {
        (a + b >= 1 && a + b <= self.order).then(|| self.entries[tri_index(a, b)])
    }

    /// The table of `(Y, X)`: `C_{a,b}` becomes `C_{b,a}`.
    pub fn swapped(&self) -> Self {
        Self::from_fn(self.order, |a, b| self.get(b, a))
    }

    /// Cumulants of `(cx X, cy Y)`, by multilinearity `cx^a cy^b C_{a,b}`.
    pub fn scaled(&self, cx: f64, cy: f64) -> Self {
        Self::from_fn(self.order, |a, b| {
            cx.powi(a as i32) * cy.powi(b as i32) * self.get(a, b)
        })
    }

    /// Cumulants of `X`, `Y` rescaled to unit variance.
    pub fn standardized(&self) -> Result<Self> {
        if self.order < 2 {
            return Err(Error::IncompleteTable {
                needed: 2,
                have: self.order,
            });
        }
        let var_x = self.get(2, 0);
        let var_y = self.get(0, 2);
        if !(var_x > 0.0) {
            return Err(Error::DegenerateSeries('x'));
        }
        if !(var_y > 0.0) {
            return Err(Error::DegenerateSeries('y'));
        }
        Ok(self.scaled(var_x.sqrt().recip(), var_y.sqrt().recip()))
    }

    /// Entries of total order `d`, as `(a, b, C_{a,b})` with `a` descending.
    pub fn degree(&self, d: usize) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=d).map(move |b| (d - b, b, self.get(d - b, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tri_index_is_dense() {
        let order = 7;
        let mut seen = vec![false; tri_len(order)];
        for d in 0..=order {
            for q in 0..=d {
                let i = tri_index(d - q, q);
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn from_entries_checks_layout() {
        assert!(matches!(
            MomentTable::from_entries(2, false, vec![1.0, 0.0, 0.0]),
            Err(Error::IncompleteTable { needed: 2, have: 1 })
        ));
        assert!(matches!(
            MomentTable::from_entries(1, false, vec![2.0, 0.0, 0.0]),
            Err(Error::MalformedMoments(_))
        ));
        let t = MomentTable::from_entries(1, true, vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(t.get(0, 0), 1.0);
    }

    #[test]
    fn swapped_transposes_indices() {
        let t = CumulantTable::from_fn(5, |a, b| (10 * a + b) as f64);
        let s = t.swapped();
        for d in 1..=5 {
            for (a, b, v) in t.degree(d) {
                assert_eq!(s.get(b, a), v);
            }
        }
    }

    #[test]
    fn try_get_bounds() {
        let t = CumulantTable::from_fn(3, |_, _| 1.0);
        assert_eq!(t.try_get(0, 0), None);
        assert_eq!(t.try_get(2, 2), None);
        assert_eq!(t.try_get(1, 2), Some(1.0));
    }
}
