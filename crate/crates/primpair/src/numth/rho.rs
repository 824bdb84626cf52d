//! Pollard rho (Brent's cycle variant) behind an explicit work budget.
//!
//! Inputs arrive with all prime factors ≤ 10^6 already stripped by trial
//! division, so the routine only ever sees odd composites with no small
//! factors. Arithmetic runs in Montgomery form below 2^127 and falls back
//! to BigUint residues above, which the default campaign never reaches.

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive};

use super::montgomery::{gcd_u128, Montgomery};
use super::primality::splitmix64;

/// Budget shared across one factorization call; counts rho squarings.
pub struct WorkBudget {
    pub limit: u64,
    pub used: u64,
}

impl WorkBudget {
    pub fn new(limit: u64) -> WorkBudget {
        WorkBudget { limit, used: 0 }
    }

    fn charge(&mut self, amount: u64) -> bool {
        self.used = self.used.saturating_add(amount);
        self.used <= self.limit
    }
}

/// One Brent round on a u128 modulus; returns a nontrivial factor or None
/// if this cycle parameter failed or the budget ran out.
fn brent_round_u128(n: u128, seed: u64, budget: &mut WorkBudget) -> Option<u128> {
    let mg = Montgomery::new(n);
    let mut state = seed;
    let c = mg.to_mont(2 + (splitmix64(&mut state) as u128) % (n - 2));
    let y0 = 2 + (splitmix64(&mut state) as u128) % (n - 2);
    let mut y = mg.to_mont(y0);

    let step = |x: u128| mg.add(mg.mul(x, x), c);

    let batch: u64 = 128;
    let mut r: u64 = 1;
    let mut q = mg.one;
    let mut g: u128 = 1;
    let mut x = y;
    let mut ys = y;

    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        if !budget.charge(r) {
            return None;
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let count = batch.min(r - k);
            for _ in 0..count {
                y = step(y);
                q = mg.mul(q, mg.sub(x, y));
            }
            if !budget.charge(count) {
                return None;
            }
            g = gcd_u128(mg.from_mont(q), n);
            k += batch;
        }
        r <<= 1;
    }
    if g == n {
        // Backtrack one step at a time.
        loop {
            ys = step(ys);
            g = gcd_u128(mg.from_mont(mg.sub(x, ys)), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn brent_round_big(n: &BigUint, seed: u64, budget: &mut WorkBudget) -> Option<BigUint> {
    let mut state = seed;
    let span = n - 3u32;
    let rand_elem = |state: &mut u64| {
        let r = BigUint::from(splitmix64(state)) * BigUint::from(splitmix64(state));
        BigUint::from(2u32) + r.mod_floor(&span)
    };
    let c = rand_elem(&mut state);
    let mut y = rand_elem(&mut state);
    let one = BigUint::one();

    let step = |x: &BigUint| (x * x + &c) % n;
    let batch: u64 = 64;
    let mut r: u64 = 1;
    let mut q = one.clone();
    let mut g = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();

    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        if !budget.charge(r) {
            return None;
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let count = batch.min(r - k);
            for _ in 0..count {
                y = step(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = q * diff % n;
            }
            if !budget.charge(count) {
                return None;
            }
            g = q.gcd(n);
            k += batch;
        }
        r <<= 1;
    }
    if &g == n {
        loop {
            ys = step(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

/// Splits an odd composite with no factors ≤ 10^6. Returns a nontrivial
/// divisor, or None when the budget is exhausted.
pub fn split(n: &BigUint, budget: &mut WorkBudget) -> Option<BigUint> {
    debug_assert!(n.is_odd());
    // Perfect powers defeat the rho cycle heuristics; peel them first.
    if let Some(root) = perfect_power_root(n) {
        return Some(root);
    }
    if n.bits() <= 126 {
        let small = n.to_u128().unwrap();
        for attempt in 0..64 {
            if budget.used >= budget.limit {
                return None;
            }
            let seed = 0x5851F42D4C957F2Du64
                .wrapping_mul(attempt + 1)
                .wrapping_add(small as u64);
            if let Some(f) = brent_round_u128(small, seed, budget) {
                return Some(BigUint::from(f));
            }
        }
        None
    } else {
        let digits = n.to_u64_digits();
        let base_seed = digits.iter().fold(0u64, |a, &w| a ^ w);
        for attempt in 0..64 {
            if budget.used >= budget.limit {
                return None;
            }
            if let Some(f) = brent_round_big(n, base_seed.wrapping_add(attempt), budget) {
                return Some(f);
            }
        }
        None
    }
}

/// If n = a^b for some b ≥ 2, returns a.
pub fn perfect_power_root(n: &BigUint) -> Option<BigUint> {
    let bits = n.bits();
    for b in 2..=bits {
        let root = n.nth_root(b as u32);
        if root <= BigUint::one() {
            break;
        }
        if root.pow(b as u32) == *n {
            return Some(root);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_semiprimes() {
        // 1000003 * 1000033
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        let mut budget = WorkBudget::new(1 << 24);
        let f = split(&n, &mut budget).unwrap();
        assert!(f == BigUint::from(1_000_003u64) || f == BigUint::from(1_000_033u64));
    }

    #[test]
    fn splits_70_bit_semiprime() {
        // two ~35 bit primes
        let p = BigUint::from(34_359_738_421u64); // prime
        let q = BigUint::from(34_359_738_451u64); // prime
        assert!(is_prime_u128(34_359_738_421));
        assert!(is_prime_u128(34_359_738_451));
        let n = &p * &q;
        let mut budget = WorkBudget::new(1 << 26);
        let f = split(&n, &mut budget).unwrap();
        assert!(f == p || f == q);
    }

    #[test]
    fn peels_perfect_powers() {
        let p = BigUint::from(1_000_003u64);
        let n = p.pow(3);
        let root = perfect_power_root(&n).unwrap();
        assert_eq!(root, p);
    }

    #[test]
    fn budget_exhaustion_reports_none() {
        let p = BigUint::from(34_359_738_421u64);
        let q = BigUint::from(34_359_738_451u64);
        let n = &p * &q;
        let mut budget = WorkBudget::new(16);
        assert!(split(&n, &mut budget).is_none());
    }
}
