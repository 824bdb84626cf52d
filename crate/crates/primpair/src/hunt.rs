//! placeholder

/// Whether n is a prime power p^s with s >= 1.
pub fn is_prime_power_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for s in 1..=63u32 {
        let root = (n as f64).powf(1.0 / s as f64).round() as u64;
        for cand in root.saturating_sub(1)..=root + 1 {
            if cand >= 2 && cand.checked_pow(s) == Some(n) && crate::numth::is_prime_u128(cand as u128) {
                return true;
            }
        }
        if 1u64.checked_shl(s + 1).map_or(true, |v| v > n) {
            break;
        }
    }
    false
}
