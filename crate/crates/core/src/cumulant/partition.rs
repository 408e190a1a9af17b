//! Moment-to-cumulant conversion by summing over set partitions.
//!
//! The index multiset of `C_{a,b}` is `{X x a, Y x b}`. Set partitions of it
//! are grouped by the multiset of block types `(p_i, q_i)`: every set
//! partition with the same block types contributes the same product of
//! moments, and there are
//!
//! ```text
//! a! b! / (prod_i p_i! q_i! * prod_types mult!)
//! ```
//!
//! of them. Each group contributes `(-1)^(h-1) (h-1)!` times that count times
//! `prod_i m_{p_i,q_i}`. This is an independent check on the series path and
//! is capped at total order [`PARTITION_ORDER_CAP`] because the number of
//! groups grows quickly.

use crate::error::{Error, Result};

use super::table::{CumulantTable, MomentTable};

pub const PARTITION_ORDER_CAP: usize = 12;

/// Joint cumulants from joint moments by the partition sum.
pub fn moments_to_cumulants_partition(moments: &MomentTable) -> Result<CumulantTable> {
    let order = moments.order();
    if order > PARTITION_ORDER_CAP {
        return Err(Error::OrderAboveCap {
            order,
            cap: PARTITION_ORDER_CAP,
        });
    }
    let fact: Vec<f64> = (0..=PARTITION_ORDER_CAP)
        .scan(1.0, |acc, i| {
            if i > 0 {
                *acc *= i as f64;
            }
            Some(*acc)
        })
        .collect();
    Ok(CumulantTable::from_fn(order, |a, b| {
        let mut total = 0.0;
        for_each_block_partition(a, b, &mut |blocks| {
            let h = blocks.len();
            let mut count = fact[a] * fact[b];
            let mut product = 1.0;
            let mut run = 1;
            for (i, &(p, q)) in blocks.iter().enumerate() {
                count /= fact[p] * fact[q];
                product *= moments.get(p, q);
                if i > 0 && blocks[i - 1] == (p, q) {
                    run += 1;
                    count /= run as f64;
                } else {
                    run = 1;
                }
            }
            let sign = if h % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * fact[h - 1] * count * product;
        });
        total
    }))
}

/// Calls `visit` with every multiset of non-empty block types `(p, q)` whose
/// componentwise sum is `(a, b)`, listed in non-increasing order.
type Visitor<'a> = dyn FnMut(&[(usize, usize)]) + 'a;

pub(crate) fn for_each_block_partition(a: usize, b: usize, visit: &mut Visitor) {
    let mut blocks = Vec::new();
    recurse(a, b, (a, b), &mut blocks, visit);
}

fn recurse(
    a: usize,
    b: usize,
    max: (usize, usize),
    blocks: &mut Vec<(usize, usize)>,
    visit: &mut Visitor,
) {
    if a == 0 && b == 0 {
        visit(blocks);
        return;
    }
    for p in (0..=a.min(max.0)).rev() {
        let q_cap = if p == max.0 { b.min(max.1) } else { b };
        for q in (0..=q_cap).rev() {
            if p + q == 0 {
                continue;
            }
            blocks.push((p, q));
            recurse(a - p, b - q, (p, q), blocks, visit);
            blocks.pop();
        }
    }
}
