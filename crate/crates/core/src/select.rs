//! Order statistics over real-valued vectors.

use crate::error::{Error, Result};

/// Returns the `k`-th smallest value (1-based, duplicates counted), i.e.
/// `sorted(values)[k - 1]`. Works on a copy; expected linear time.
pub fn kth_smallest(values: &[f64], k: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k == 0 || k > values.len() {
        return Err(Error::RankOutOfRange { k, len: values.len() });
    }
    let mut buf = values.to_vec();
    Ok(select_in_place(&mut buf, k - 1))
}

/// Lower median: the `floor((n + 1) / 2)`-th smallest component.
pub fn median_valuation(y: &[f64]) -> Result<f64> {
    kth_smallest(y, y.len().div_ceil(2))
}

// Three-way quickselect. The pivot position comes from a splitmix64 stream
// seeded by the slice length, so runs are reproducible.
fn select_in_place(a: &mut [f64], target: usize) -> f64 {
    let mut lo = 0usize;
    let mut hi = a.len();
    let mut state = a.len() as u64 ^ 0x9e37_79b9_7f4a_7c15;
    while hi - lo > 1 {
        state = splitmix64(state);
        let p = a[lo + (state % (hi - lo) as u64) as usize];
        // [lo, lt) < p, [lt, i) == p, [gt, hi) > p
        let (mut lt, mut i, mut gt) = (lo, lo, hi);
        while i < gt {
            if a[i] < p {
                a.swap(lt, i);
                lt += 1;
                i += 1;
            } else if a[i] > p {
                gt -= 1;
                a.swap(i, gt);
            } else {
                i += 1;
            }
        }
        if target < lt {
            hi = lt;
        } else if target >= gt {
            lo = gt;
        } else {
            return p;
        }
    }
    a[target]
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
