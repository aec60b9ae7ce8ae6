use crate::error::Result;
use crate::seqcore::Symbol;

use super::ShiftSystem;

/// Whether every subword `u` with `2^{k-1} < |u| <= 2^k` holds at most `k`
/// copies of `r`. Counts grow with length, so one window size per `k`
/// suffices.
pub fn sparse_enough(w: &[Symbol], r: Symbol) -> bool {
    let n = w.len();
    let mut k = 1u32;
    while k < usize::BITS && (1usize << (k - 1)) < n {
        let len = (1usize << k).min(n);
        let mut count = w[..len].iter().filter(|&&s| s == r).count();
        if count > k as usize {
            return false;
        }
        for end in len..n {
            count += (w[end] == r) as usize;
            count -= (w[end - len] == r) as usize;
            if count > k as usize {
                return false;
            }
        }
        k += 1;
    }
    true
}

/// Membership in the extension of `base` by the sparse symbol `r`: every
/// `r`-free subword lies in the base language and `r` is sparse on every
/// dyadic scale.
pub fn small_center_contains(base: &ShiftSystem, r: Symbol, w: &[Symbol]) -> Result<bool> {
    if w.iter().any(|&s| s > r) {
        return Ok(false);
    }
    for run in w.split(|&s| s == r) {
        if !run.is_empty() && !base.contains(run)? {
            return Ok(false);
        }
    }
    Ok(sparse_enough(w, r))
}
