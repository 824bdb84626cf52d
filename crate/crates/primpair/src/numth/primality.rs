//! Miller-Rabin primality testing.
//!
//! Below the published strong-pseudoprime limit for the first thirteen
//! prime bases (3 317 044 064 679 887 385 961 981 ≈ 3.3×10^24) the test is
//! deterministic. Above it, 64 rounds with bases derived from a splitmix64
//! stream seeded by the input keep the answer reproducible while bounding
//! the error probability by 4^-64.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::montgomery::Montgomery;

/// First thirteen primes; a deterministic witness set below
/// 3 317 044 064 679 887 385 961 981.
const SMALL_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Limit up to which `SMALL_BASES` is a deterministic witness set.
pub fn deterministic_limit() -> BigUint {
    BigUint::parse_bytes(b"3317044064679887385961981", 10).unwrap()
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Strong-probable-prime test to base `a` for odd `n = d·2^s + 1`, u128 path.
fn sprp_u128(mg: &Montgomery, n: u128, d: u128, s: u32, a: u128) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = mg.pow(a, d);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mg.from_mont({
            let xm = mg.to_mont(x);
            mg.mul(xm, xm)
        });
        if x == n - 1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

/// Primality test for u128 inputs. Deterministic for the entire range that
/// the thirteen-base witness set covers; larger numbers get the 64-round
/// pseudorandom treatment.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    if n >> 127 != 0 {
        // The Montgomery context needs a spare bit.
        return is_prime_big(&BigUint::from(n));
    }
    for &p in &SMALL_BASES {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mg = Montgomery::new(n);
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    const DET_LIMIT_U128: u128 = 3_317_044_064_679_887_385_961_981;
    if n < DET_LIMIT_U128 {
        SMALL_BASES.iter().all(|&a| sprp_u128(&mg, n, d, s, a as u128))
    } else {
        let mut state = (n as u64) ^ ((n >> 64) as u64) ^ 0xD1B54A32D192ED03;
        (0..64).all(|_| {
            let a = 2 + (splitmix64(&mut state) as u128) % (n - 3);
            sprp_u128(&mg, n, d, s, a)
        })
    }
}

fn sprp_big(n: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let nm1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    let two = BigUint::from(2u32);
    for _ in 1..s {
        x = x.modpow(&two, n);
        if x == nm1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Primality test for arbitrary-precision nonnegative integers.
pub fn is_prime(n: &BigUint) -> bool {
    if n.bits() <= 127 {
        return is_prime_u128(n.to_u128().unwrap());
    }
    is_prime_big(n)
}

fn is_prime_big(n: &BigUint) -> bool {
    for &p in &SMALL_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap();
    let d = &nm1 >> s;
    let digits = n.to_u64_digits();
    let mut state = digits.iter().fold(0xD1B54A32D192ED03u64, |acc, &w| acc ^ w.rotate_left(17));
    let span = n - 3u32;
    (0..64).all(|_| {
        let r = BigUint::from(splitmix64(&mut state)) * BigUint::from(splitmix64(&mut state));
        let a = BigUint::from(2u32) + r.mod_floor(&span);
        sprp_big(n, &d, s, &a)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_and_composites() {
        let primes = [2u128, 3, 5, 7, 31, 97, 8191, 131071, 524287, 999983];
        for p in primes {
            assert!(is_prime_u128(p), "{p} should be prime");
        }
        let composites = [0u128, 1, 4, 9, 561, 1105, 1729, 2465, 6601, 8911, 25326001];
        for c in composites {
            assert!(!is_prime_u128(c), "{c} should be composite");
        }
    }

    #[test]
    fn carmichael_561_is_composite() {
        assert!(!is_prime(&BigUint::from(561u32)));
    }

    #[test]
    fn mersenne_61_is_prime() {
        let m61 = (BigUint::one() << 61) - 1u32;
        assert!(is_prime(&m61));
    }

    #[test]
    fn strong_pseudoprimes_to_base_2_are_rejected() {
        for n in [2047u128, 3277, 4033, 4681, 8321] {
            assert!(!is_prime_u128(n));
        }
    }

    #[test]
    fn large_known_primes() {
        // 2^89-1 and 2^107-1 are Mersenne primes.
        assert!(is_prime_u128((1u128 << 89) - 1));
        assert!(is_prime_u128((1u128 << 107) - 1));
        // 2^127-1 is prime but needs the BigUint path (n = 2^127-1 < 2^127 ok though)
        assert!(is_prime_u128((1u128 << 127) - 1));
        // A big composite: (2^89-1)^2
        let p = (BigUint::one() << 89) - 1u32;
        assert!(!is_prime(&(&p * &p)));
    }
}
