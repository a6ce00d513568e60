//! Gray-code enumeration of outcome subsets.
//!
//! Every quantity maximized over subsets in this crate is invariant under
//! taking the complement (`A_Δ` and `1 − A_Δ` give the same value), so only
//! subsets that exclude the last outcome are visited: `2^(n-1)` of them.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Largest outcome count accepted by subset enumeration.
pub const MAX_SUBSET_OUTCOMES: usize = 20;

pub(crate) fn check_capacity(what: &'static str, n: usize) -> Result<()> {
    if n > MAX_SUBSET_OUTCOMES {
        return Err(Error::Capacity {
            what,
            got: n,
            limit: MAX_SUBSET_OUTCOMES,
        });
    }
    Ok(())
}

/// Calls `visit(mask, Σ_{k∈mask} parts[k])` for each subset of all but the
/// last part, in reflected Gray-code order starting from the empty set.
pub(crate) fn for_each_half_subset(parts: &[CMatrix], mut visit: impl FnMut(u32, &CMatrix)) {
    assert!(!parts.is_empty());
    let free = parts.len() - 1;
    let mut acc = CMatrix::zeros(parts[0].dim());
    let mut mask = 0u32;
    visit(mask, &acc);
    for k in 1u64..(1u64 << free) {
        let bit = k.trailing_zeros();
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            acc += &parts[bit as usize];
        } else {
            acc -= &parts[bit as usize];
        }
        visit(mask, &acc);
    }
}

/// Indices contained in `mask`.
pub fn mask_indices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&k| mask & (1 << k) != 0).collect()
}
