//! Exact integer number theory: primality, factorization specialized for
//! q^m−1, and the multiplicative functions (w, W, φ, μ, θ) every condition
//! in the campaign is built from.

mod cyclotomic;
mod montgomery;
mod primality;
mod rho;
mod sieve;

pub use cyclotomic::{cyclotomic_eval, cyclotomic_poly};
pub use primality::{deterministic_limit, is_prime, is_prime_u128};
pub use rho::{perfect_power_root, WorkBudget};
pub use sieve::{
    omega_from_spf, primes_from_spf, small_factor_sieve, small_primes, SMALL_PRIME_LIMIT,
};

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumthError {
    /// The work budget ran out with a composite cofactor still standing.
    /// The caller must treat the input as unresolved rather than guessing
    /// at its number of prime divisors.
    #[error("factoring budget exceeded; unresolved composite cofactor {cofactor}")]
    BudgetExceeded { cofactor: BigUint },
}

/// Exact prime-power decomposition of a nonnegative integer.
///
/// Invariants: primes strictly increasing, every exponent ≥ 1, and the
/// product of prime^exponent reconstructs `value`. `value == 1` iff the
/// factor list is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Assembles a factorization from parts, validating every invariant.
    pub fn new(value: BigUint, factors: Vec<(BigUint, u32)>) -> Factorization {
        let f = Factorization { value, factors };
        f.validate();
        f
    }

    pub fn one() -> Factorization {
        Factorization { value: BigUint::one(), factors: Vec::new() }
    }

    fn validate(&self) {
        let mut product = BigUint::one();
        let mut last: Option<&BigUint> = None;
        for (p, e) in &self.factors {
            assert!(*e >= 1, "exponent must be positive");
            assert!(is_prime(p), "{p} is not prime");
            if let Some(prev) = last {
                assert!(prev < p, "primes must be strictly increasing");
            }
            product *= p.pow(*e);
            last = Some(p);
        }
        assert_eq!(product, self.value, "factors do not reconstruct the value");
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Number of distinct prime divisors.
    pub fn w(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of squarefree divisors, W = 2^w.
    pub fn big_w(&self) -> BigUint {
        BigUint::one() << self.factors.len()
    }

    /// Euler's totient, exact.
    pub fn phi(&self) -> BigUint {
        let mut phi = BigUint::one();
        for (p, e) in &self.factors {
            phi *= p - 1u32;
            phi *= p.pow(e - 1);
        }
        phi
    }

    /// Möbius function: 0 on non-squarefree input, else (−1)^w.
    pub fn mu(&self) -> i8 {
        if self.factors.iter().any(|(_, e)| *e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// θ = φ(n)/n as an exact rational in lowest terms.
    pub fn theta(&self) -> BigRational {
        let num = BigInt::from(self.phi());
        let den = BigInt::from(self.value.clone());
        BigRational::new(num, den)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigUint {
        self.primes().product()
    }

    /// All divisors in ascending order; refused when there are too many.
    pub fn divisors(&self, cap: usize) -> Option<Vec<BigUint>> {
        let count: usize = self
            .factors
            .iter()
            .try_fold(1usize, |acc, (_, e)| acc.checked_mul(*e as usize + 1))?;
        if count > cap {
            return None;
        }
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            let mut power = BigUint::one();
            for _ in 0..=*e {
                for d in &divs {
                    next.push(d * &power);
                }
                power *= p;
            }
            divs = next;
        }
        divs.sort();
        Some(divs)
    }

    /// Restriction to the primes dividing `d`, for a divisor d of the value.
    /// Returns the factorization of d itself.
    pub fn restrict_to_divisor(&self, d: &BigUint) -> Factorization {
        assert!(!d.is_zero() && (self.value.clone() % d).is_zero(), "not a divisor");
        let mut factors = Vec::new();
        for (p, _) in &self.factors {
            let mut e = 0u32;
            let mut rest = d.clone();
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p.clone(), e));
            }
        }
        Factorization::new(d.clone(), factors)
    }
}

/// The multiplicative-function bundle the campaign consumes.
#[derive(Debug, Clone, Serialize)]
pub struct ArithFunctions {
    pub w: u32,
    /// W = 2^w as a decimal string (it can exceed machine words).
    pub big_w: String,
    pub phi: String,
    pub mu: i8,
    /// φ(n)/n in lowest terms, as "num/den".
    pub theta: String,
    pub radical: String,
}

/// Bundles w, W, φ, μ, θ and the radical for a factorization.
pub fn arith_functions(fact: &Factorization) -> ArithFunctions {
    let theta = fact.theta();
    ArithFunctions {
        w: fact.w(),
        big_w: fact.big_w().to_string(),
        phi: fact.phi().to_string(),
        mu: fact.mu(),
        theta: format!("{}/{}", theta.numer(), theta.denom()),
        radical: fact.radical().to_string(),
    }
}

/// Default rho budget: generous for the worst cyclotomic pieces of the
/// default campaign (balanced ~96-bit semiprimes).
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Factors n ≥ 1 by trial division to 10^6 followed by recursive Brent rho
/// with a primality check at each split.
pub fn factor(n: &BigUint) -> Result<Factorization, NumthError> {
    factor_with_budget(n, &mut WorkBudget::new(DEFAULT_BUDGET))
}

pub fn factor_with_budget(
    n: &BigUint,
    budget: &mut WorkBudget,
) -> Result<Factorization, NumthError> {
    assert!(!n.is_zero(), "factor requires n >= 1");
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    if n.is_one() {
        return Ok(Factorization { value: n.clone(), factors });
    }

    let mut rest = n.clone();

    // Trial division stage, with a u128 fast lane.
    if let Some(mut small) = rest.to_u128() {
        for &p in small_primes() {
            let p = p as u128;
            if p * p > small {
                break;
            }
            if small % p == 0 {
                let mut e = 0u32;
                while small % p == 0 {
                    small /= p;
                    e += 1;
                }
                factors.push((BigUint::from(p), e));
            }
        }
        rest = BigUint::from(small);
        if small == 1 {
            factors.sort_by(|a, b| a.0.cmp(&b.0));
            return Ok(Factorization { value: n.clone(), factors });
        }
        if small <= (SMALL_PRIME_LIMIT as u128) * (SMALL_PRIME_LIMIT as u128) {
            // No factor up to the trial bound, and the cofactor is below its
            // square: it is prime.
            factors.push((rest, 1));
            factors.sort_by(|a, b| a.0.cmp(&b.0));
            return Ok(Factorization { value: n.clone(), factors });
        }
    } else {
        for &p in small_primes() {
            if (&rest % p).is_zero() {
                let mut e = 0u32;
                loop {
                    let (q, r) = num_integer::Integer::div_rem(&rest, &BigUint::from(p));
                    if !r.is_zero() {
                        break;
                    }
                    rest = q;
                    e += 1;
                }
                factors.push((BigUint::from(p), e));
            }
        }
    }

    // Recursive rho splitting on the remaining cofactor.
    let mut stack = vec![(rest, 1u32)];
    while let Some((c, mult)) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            merge_factor(&mut factors, c, mult);
            continue;
        }
        match rho::split(&c, budget) {
            Some(d) => {
                let other = &c / &d;
                // d may divide the cofactor more than once; keep it simple and
                // push both halves, the recursion re-merges duplicates.
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => return Err(NumthError::BudgetExceeded { cofactor: c }),
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let out = Factorization { value: n.clone(), factors };
    debug_assert_eq!(
        out.factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e)),
        out.value
    );
    Ok(out)
}

fn merge_factor(factors: &mut Vec<(BigUint, u32)>, p: BigUint, mult: u32) {
    if let Some(slot) = factors.iter_mut().find(|(q, _)| *q == p) {
        slot.1 += mult;
    } else {
        factors.push((p, mult));
    }
}

/// Read-mostly factorization memo with insert-if-absent semantics, shared
/// across campaign workers.
#[derive(Default)]
pub struct FactorCache {
    map: DashMap<BigUint, Factorization>,
}

impl FactorCache {
    pub fn new() -> FactorCache {
        FactorCache { map: DashMap::new() }
    }

    pub fn factor(&self, n: &BigUint, budget_limit: u64) -> Result<Factorization, NumthError> {
        if let Some(hit) = self.map.get(n) {
            return Ok(hit.clone());
        }
        let mut budget = WorkBudget::new(budget_limit);
        let fact = factor_with_budget(n, &mut budget)?;
        let entry = self.map.entry(n.clone()).or_insert(fact);
        Ok(entry.clone())
    }
}

/// Factors q^m−1 through its cyclotomic pieces q^m−1 = ∏_{d|m} Φ_d(q), so
/// rho only ever faces pieces of size about q^φ(d).
pub fn factor_qm_minus_1(
    q: &BigUint,
    m: u32,
    budget: &mut WorkBudget,
) -> Result<Factorization, NumthError> {
    factor_qm_minus_1_cached(q, m, budget, None)
}

pub fn factor_qm_minus_1_cached(
    q: &BigUint,
    m: u32,
    budget: &mut WorkBudget,
    cache: Option<&FactorCache>,
) -> Result<Factorization, NumthError> {
    assert!(*q >= BigUint::from(2u32) && m >= 1);
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        let piece = cyclotomic_eval(d, q);
        let fact = match cache {
            Some(c) => c.factor(&piece, budget.limit)?,
            None => factor_with_budget(&piece, budget)?,
        };
        for (p, e) in fact.factors() {
            merge_factor(&mut merged, p.clone(), *e);
        }
    }
    merged.sort_by(|a, b| a.0.cmp(&b.0));
    let value = q.pow(m) - 1u32;
    let out = Factorization { value, factors: merged };
    debug_assert_eq!(
        out.factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e)),
        out.value
    );
    Ok(out)
}

/// First `count` primes.
pub fn first_primes(count: usize) -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    let all = PRIMES.get_or_init(|| {
        // 3000 primes reach past 27000, far beyond any sieving depth used.
        let mut primes = Vec::with_capacity(3000);
        let mut n = 2u64;
        while primes.len() < 3000 {
            if is_prime_u128(n as u128) {
                primes.push(n);
            }
            n += 1;
        }
        primes
    });
    assert!(count <= all.len(), "prime table too small for request");
    &all[..count]
}

/// The i-th prime (1-based: p_1 = 2) together with the primorial P_i.
pub fn primorial_and_primes(i: u32) -> (Option<u64>, BigUint) {
    let primes = first_primes(i as usize);
    let p_i = primes.last().copied();
    let product = primes.iter().fold(BigUint::one(), |acc, &p| acc * p);
    (p_i, product)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fact(n: u64) -> Factorization {
        factor(&BigUint::from(n)).unwrap()
    }

    #[test]
    fn factor_basics() {
        assert_eq!(fact(1).factors(), &[]);
        assert_eq!(
            fact(15).factors(),
            &[(BigUint::from(3u32), 1), (BigUint::from(5u32), 1)]
        );
        assert_eq!(
            fact(511).factors(),
            &[(BigUint::from(7u32), 1), (BigUint::from(73u32), 1)]
        );
        assert_eq!(fact(8).factors(), &[(BigUint::from(2u32), 3)]);
    }

    #[test]
    fn factor_2_24_minus_1() {
        let f = fact((1 << 24) - 1);
        let expect: Vec<(BigUint, u32)> = vec![
            (BigUint::from(3u32), 2),
            (BigUint::from(5u32), 1),
            (BigUint::from(7u32), 1),
            (BigUint::from(13u32), 1),
            (BigUint::from(17u32), 1),
            (BigUint::from(241u32), 1),
        ];
        assert_eq!(f.factors(), expect.as_slice());
        assert_eq!(f.w(), 6);
        assert_eq!(f.big_w(), BigUint::from(64u32));
    }

    #[test]
    fn qm_minus_1_uses_cyclotomic_pieces() {
        let mut b = WorkBudget::new(DEFAULT_BUDGET);
        let f = factor_qm_minus_1(&BigUint::from(2u32), 9, &mut b).unwrap();
        assert_eq!(
            f.factors(),
            &[(BigUint::from(7u32), 1), (BigUint::from(73u32), 1)]
        );
        let f = factor_qm_minus_1(&BigUint::from(3u32), 2, &mut b).unwrap();
        assert_eq!(f.factors(), &[(BigUint::from(2u32), 3)]);
        let f = factor_qm_minus_1(&BigUint::from(2u32), 24, &mut b).unwrap();
        assert_eq!(f.w(), 6);
    }

    #[test]
    fn qm_minus_1_matches_direct_factoring_exhaustively() {
        for q in 2u64..=16 {
            if !crate::hunt::is_prime_power_u64(q) {
                continue;
            }
            for m in 1u32..=12 {
                if BigUint::from(q).pow(m).bits() > 64 {
                    continue;
                }
                let mut b = WorkBudget::new(DEFAULT_BUDGET);
                let via_cyc = factor_qm_minus_1(&BigUint::from(q), m, &mut b).unwrap();
                let direct = factor(&(BigUint::from(q).pow(m) - 1u32)).unwrap();
                assert_eq!(via_cyc, direct, "mismatch at q={q} m={m}");
            }
        }
    }

    #[test]
    fn arith_functions_examples() {
        let f12 = fact(12);
        assert_eq!(f12.phi(), BigUint::from(4u32));
        assert_eq!(f12.mu(), 0);
        assert_eq!(f12.big_w(), BigUint::from(4u32));
        let theta = f12.theta();
        assert_eq!(theta, BigRational::new(BigInt::from(1), BigInt::from(3)));

        let f1 = fact(1);
        assert_eq!(f1.w(), 0);
        assert_eq!(f1.big_w(), BigUint::one());
        assert_eq!(f1.phi(), BigUint::one());
        assert_eq!(f1.mu(), 1);
        assert_eq!(f1.theta(), BigRational::one());
    }

    #[test]
    fn primorials() {
        let (p3, prod3) = primorial_and_primes(3);
        assert_eq!(p3, Some(5));
        assert_eq!(prod3, BigUint::from(30u32));
        let (p0, prod0) = primorial_and_primes(0);
        assert_eq!(p0, None);
        assert_eq!(prod0, BigUint::one());
        let (p5, prod5) = primorial_and_primes(5);
        assert_eq!(p5, Some(11));
        assert_eq!(prod5, BigUint::from(2310u32));
    }

    #[test]
    fn divisor_lists() {
        let f = fact(12);
        let divs = f.divisors(100).unwrap();
        let expect: Vec<BigUint> =
            [1u32, 2, 3, 4, 6, 12].iter().map(|&d| BigUint::from(d)).collect();
        assert_eq!(divs, expect);
    }

    #[test]
    fn budget_exceeded_is_loud() {
        // A 70-bit semiprime with a 16-step budget cannot resolve.
        let p = BigUint::from(34_359_738_421u64);
        let q = BigUint::from(34_359_738_451u64);
        let n = &p * &q;
        let mut tiny = WorkBudget::new(4);
        match factor_with_budget(&n, &mut tiny) {
            Err(NumthError::BudgetExceeded { cofactor }) => assert_eq!(cofactor, n),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn restrict_to_divisor() {
        let f = fact(720); // 2^4 * 3^2 * 5
        let d = BigUint::from(12u32);
        let r = f.restrict_to_divisor(&d);
        assert_eq!(r.value(), &d);
        assert_eq!(
            r.factors(),
            &[(BigUint::from(2u32), 2), (BigUint::from(3u32), 1)]
        );
    }
}
