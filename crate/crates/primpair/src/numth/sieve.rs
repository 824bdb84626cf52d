//! Eratosthenes-style sieves backing trial division and the bulk
//! verification loops over n ≤ 10^6.

use std::sync::OnceLock;

/// Trial-division bound used by `factor`.
pub const SMALL_PRIME_LIMIT: u64 = 1_000_000;

/// All primes below `SMALL_PRIME_LIMIT`, ascending.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SMALL_PRIME_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::with_capacity(80_000);
        for n in 2..limit {
            if !composite[n] {
                primes.push(n as u64);
                let mut k = n * n;
                while k < limit {
                    composite[k] = true;
                    k += n;
                }
            }
        }
        primes
    })
}

/// Smallest-prime-factor table for 0..=limit; spf[0] = spf[1] = 0.
pub fn small_factor_sieve(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for n in 2..=limit {
        if spf[n] == 0 {
            let mut k = n;
            while k <= limit {
                if spf[k] == 0 {
                    spf[k] = n as u32;
                }
                k += n;
            }
        }
    }
    spf
}

/// Number of distinct prime factors read off an spf table.
pub fn omega_from_spf(spf: &[u32], mut n: usize) -> u32 {
    let mut w = 0;
    while n > 1 {
        let p = spf[n] as usize;
        w += 1;
        while n % p == 0 {
            n /= p;
        }
    }
    w
}

/// Distinct prime factors read off an spf table.
pub fn primes_from_spf(spf: &[u32], mut n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        out.push(p as u64);
        while n % p == 0 {
            n /= p;
        }
    }
    out
}
