//! Integer cyclotomic polynomials Φ_d, computed by exact division of x^d−1
//! by the lower-order cyclotomics, and cached per index.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

fn cache() -> &'static Mutex<HashMap<u32, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φ_d ascending by degree.
pub fn cyclotomic_poly(d: u32) -> Vec<BigInt> {
    assert!(d >= 1);
    if let Some(hit) = cache().lock().unwrap().get(&d) {
        return hit.clone();
    }
    let poly = if d == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        // x^d - 1 divided by prod of Phi_e for proper divisors e | d.
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = BigInt::from(-1);
        num[d as usize] = BigInt::one();
        for e in 1..d {
            if d % e == 0 {
                num = exact_div(&num, &cyclotomic_poly(e));
            }
        }
        num
    };
    cache().lock().unwrap().insert(d, poly.clone());
    poly
}

/// Exact polynomial division over ℤ (panics on nonzero remainder).
fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    assert!(den[dn].is_one(), "divisor must be monic");
    assert!(rem.len() > dn);
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        quot[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (j, dcoef) in den.iter().enumerate() {
            let t = dcoef * &c;
            rem[i + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

/// Φ_d(q) for q ≥ 2, as an exact nonnegative integer.
pub fn cyclotomic_eval(d: u32, q: &BigUint) -> BigUint {
    let poly = cyclotomic_poly(d);
    let qi = BigInt::from(q.clone());
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = acc * &qi + c;
    }
    assert!(!acc.is_negative());
    acc.to_biguint().unwrap()
}
