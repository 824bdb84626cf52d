//! Montgomery arithmetic for odd moduli below 2^127.
//!
//! The factoring hot loop multiplies residues modulo cyclotomic pieces of
//! q^m−1 that are typically 60–100 bits wide, so the 256-bit intermediate
//! product is assembled from u64 limbs by hand.

/// Full 128×128 → 256 bit product, returned as (hi, lo).
#[inline]
pub fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let a0 = a as u64 as u128;
    let a1 = a >> 64;
    let b0 = b as u64 as u128;
    let b1 = b >> 64;

    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;

    let mid = p01.wrapping_add(p10);
    let mid_carry = u128::from(mid < p01);

    let lo = p00.wrapping_add(mid << 64);
    let lo_carry = u128::from(lo < p00);

    let hi = p11 + (mid >> 64) + (mid_carry << 64) + lo_carry;
    (hi, lo)
}

/// Montgomery context for a fixed odd modulus `n < 2^127`, with R = 2^128.
#[derive(Clone, Copy)]
pub struct Montgomery {
    pub n: u128,
    /// -n^{-1} mod 2^128
    n_inv_neg: u128,
    /// R mod n
    pub one: u128,
    /// R^2 mod n
    r2: u128,
}

impl Montgomery {
    pub fn new(n: u128) -> Montgomery {
        debug_assert!(n & 1 == 1, "modulus must be odd");
        debug_assert!(n >> 127 == 0, "modulus must fit in 127 bits");
        // Newton iteration doubles the number of correct low bits each step.
        let mut inv: u128 = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert!(n.wrapping_mul(inv) == 1);
        let one = (u128::MAX % n + 1) % n;
        // R^2 mod n by 128 modular doublings of R mod n; n < 2^127 keeps
        // the doubling sum inside u128.
        let mut r2 = one;
        for _ in 0..128 {
            r2 = r2.wrapping_add(r2);
            if r2 >= n {
                r2 -= n;
            }
        }
        Montgomery { n, n_inv_neg: inv.wrapping_neg(), one, r2 }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.n_inv_neg);
        let (mn_hi, mn_lo) = mul_wide(m, self.n);
        debug_assert!(lo.wrapping_add(mn_lo) == 0);
        // lo + mn_lo ≡ 0 mod 2^128 by construction, so the pair sums to
        // exactly 0 or exactly 2^128; it carries iff lo is nonzero.
        let carry = u128::from(lo != 0);
        let mut t = hi + mn_hi + carry;
        if t >= self.n {
            t -= self.n;
        }
        t
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn to_mont(&self, x: u128) -> u128 {
        self.mul(x % self.n, self.r2)
    }

    #[inline]
    pub fn from_mont(&self, x: u128) -> u128 {
        self.redc(0, x)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        // a, b < n < 2^127 so the sum cannot wrap.
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    /// x^e mod n with x in ordinary (non-Montgomery) representation.
    pub fn pow(&self, x: u128, mut e: u128) -> u128 {
        let mut base = self.to_mont(x);
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        self.from_mont(acc)
    }
}

/// Binary gcd on u128.
pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            core::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_mul_matches_small_cases() {
        assert_eq!(mul_wide(0, 12345), (0, 0));
        assert_eq!(mul_wide(1 << 100, 1 << 100), (1 << 72, 0));
        let (hi, lo) = mul_wide(u128::MAX, u128::MAX);
        // (2^128-1)^2 = 2^256 - 2^129 + 1
        assert_eq!(hi, u128::MAX - 1);
        assert_eq!(lo, 1);
    }

    #[test]
    fn montgomery_roundtrip_and_pow() {
        // (modulus, is_prime) pairs; 2^89-1 is a Mersenne prime.
        let cases: [(u128, bool); 5] = [
            (3, true),
            (97, true),
            (1_000_003, true),
            ((1u128 << 89) - 1, true),
            (292_561 * 268_181, false),
        ];
        for &(n, prime) in &cases {
            let mg = Montgomery::new(n);
            for x in [0u128, 1, 2, 12345, n - 1] {
                assert_eq!(mg.from_mont(mg.to_mont(x)), x % n);
            }
            // Fermat test at base 2 agrees with primality on these inputs.
            assert_eq!(mg.pow(2, n - 1) == 1, prime);
        }
    }

    #[test]
    fn gcd_works() {
        assert_eq!(gcd_u128(0, 5), 5);
        assert_eq!(gcd_u128(12, 18), 6);
        assert_eq!(gcd_u128(1 << 100, 1 << 60), 1 << 60);
        assert_eq!(gcd_u128(7 * 73, 73 * 11), 73);
    }
}
