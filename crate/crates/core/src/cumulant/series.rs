//! Moment-to-cumulant conversion through the logarithm of the moment
//! generating series.
//!
//! With `M(s, t) = sum m_{p,q} s^p t^q / (p! q!)` and `K = log M`, applying the
//! Euler operator `s d/ds + t d/dt` to `M = exp(K)` gives `D M = M * D K`.
//! Matching the coefficient of `s^p t^q` and clearing factorials:
//!
//! ```text
//! (p+q) k_{p,q} = (p+q) m_{p,q}
//!     - sum_{0 < (i,j) < (p,q)} (i+j) C(p,i) C(q,j) k_{i,j} m_{p-i,q-j}
//! ```
//!
//! which is solved in order of increasing total degree. Cost is `O(N^4)` in
//! the truncation order.

use crate::error::Result;

use super::table::{tri_index, tri_len, CumulantTable, MomentTable};

/// Pascal's triangle up to row `n`.
pub(crate) fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut row = vec![1.0; r + 1];
        for c in 1..r {
            row[c] = rows[r - 1][c - 1] + rows[r - 1][c];
        }
        rows.push(row);
    }
    rows
}

/// Joint cumulants from joint moments by the truncated series logarithm.
pub fn moments_to_cumulants_series(moments: &MomentTable) -> Result<CumulantTable> {
    let order = moments.order();
    let binom = binomials(order);
    let mut kappa = vec![0.0; tri_len(order)];
    let mut terms = Vec::with_capacity((order + 1) * (order + 1));
    for d in 1..=order {
        for q in 0..=d {
            let p = d - q;
            terms.clear();
            for i in 0..=p {
                for j in 0..=q {
                    let w = i + j;
                    if w == 0 || w == d {
                        continue;
                    }
                    // integer-valued, so the product is exact and order-free
                    let weight = w as f64 * (binom[p][i] * binom[q][j]);
                    terms.push(weight * kappa[tri_index(i, j)] * moments.get(p - i, q - j));
                }
            }
            // summing in value order makes C_{b,a} of the swapped table
            // bitwise equal to C_{a,b}
            terms.sort_by(f64::total_cmp);
            let acc: f64 = terms.iter().sum();
            kappa[tri_index(p, q)] = moments.get(p, q) - acc / d as f64;
        }
    }
    Ok(CumulantTable::from_raw(order, kappa))
}

/// Univariate restriction: `k_1 ..= k_N` from `m_0 ..= m_N` (`m_0 = 1`).
pub(crate) fn univariate_log(moments: &[f64]) -> Vec<f64> {
    let order = moments.len() - 1;
    let binom = binomials(order);
    let mut kappa = vec![0.0; order + 1];
    for p in 1..=order {
        let acc: f64 = (1..p)
            .map(|i| i as f64 * binom[p][i] * kappa[i] * moments[p - i])
            .sum();
        kappa[p] = moments[p] - acc / p as f64;
    }
    kappa.remove(0);
    kappa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_distribution_has_only_a_mean() {
        let mu: f64 = 1.7;
        let nu: f64 = -0.4;
        // raw moments of the point mass at (mu, nu)
        let m = MomentTable::from_fn(6, false, |p, q| mu.powi(p as i32) * nu.powi(q as i32));
        let k = moments_to_cumulants_series(&m).unwrap();
        assert!((k.get(1, 0) - mu).abs() < 1e-14);
        assert!((k.get(0, 1) - nu).abs() < 1e-14);
        for d in 2..=6 {
            for (a, b, v) in k.degree(d) {
                assert!(v.abs() < 1e-12, "C_({a},{b}) = {v}");
            }
        }
    }

    #[test]
    fn second_order_cumulants_are_central_moments() {
        let m = MomentTable::from_fn(4, true, |p, q| match (p, q) {
            (1, 0) | (0, 1) => 0.0,
            (2, 0) => 2.5,
            (1, 1) => -0.7,
            (0, 2) => 1.1,
            _ => 0.3 * (p as f64) - 0.2 * (q as f64),
        });
        let k = moments_to_cumulants_series(&m).unwrap();
        assert_eq!(k.get(2, 0), 2.5);
        assert_eq!(k.get(1, 1), -0.7);
        assert_eq!(k.get(0, 2), 1.1);
    }

    #[test]
    fn low_order_identities_on_raw_moments() {
        let m = MomentTable::from_fn(4, false, |p, q| 1.0 + 0.5 * p as f64 + 0.25 * q as f64);
        let k = moments_to_cumulants_series(&m).unwrap();
        let g = |p, q| m.get(p, q);
        assert!((k.get(2, 0) - (g(2, 0) - g(1, 0).powi(2))).abs() < 1e-14);
        assert!((k.get(1, 1) - (g(1, 1) - g(1, 0) * g(0, 1))).abs() < 1e-14);
        let k3 = g(3, 0) - 3.0 * g(2, 0) * g(1, 0) + 2.0 * g(1, 0).powi(3);
        assert!((k.get(3, 0) - k3).abs() < 1e-13);
        // fourth cumulant from raw moments
        let (m1, m2, m3, m4) = (g(1, 0), g(2, 0), g(3, 0), g(4, 0));
        let k4 = m4 - 4.0 * m3 * m1 - 3.0 * m2 * m2 + 12.0 * m2 * m1 * m1 - 6.0 * m1.powi(4);
        assert!((k.get(4, 0) - k4).abs() < 1e-12);
    }

    #[test]
    fn univariate_matches_bivariate_edge() {
        let raw = [1.0, 0.3, 1.4, -0.2, 3.9, 0.8, 21.0];
        let m = MomentTable::from_fn(6, false, |p, q| if q == 0 { raw[p] } else { 0.5 });
        let biv = moments_to_cumulants_series(&m).unwrap();
        let uni = univariate_log(&raw);
        for p in 1..=6 {
            assert!((uni[p - 1] - biv.get(p, 0)).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_rows() {
        let b = binomials(6);
        assert_eq!(b[6], vec![1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0]);
    }
}
