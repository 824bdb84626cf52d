//! Exact arithmetic in the tower F_p ⊆ F_q ⊆ F_{q^m}: construction with
//! deterministic moduli, element arithmetic, relative/absolute traces,
//! multiplicative order and e-freeness, and discrete-log tables.
//!
//! Fields are built once and passed by reference; elements are plain
//! coefficient vectors in canonical reduced form, so equality is
//! coefficient-wise and every operation is a pure function.

mod dlog;

pub use dlog::{DlogTable, DEFAULT_DLOG_CAP};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numth::Factorization;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero in the field")]
    DivisionByZero,
    #[error("operation requires a nonzero element")]
    ZeroElement,
    #[error("field order {order} exceeds the cap {cap}")]
    CapExceeded { order: BigUint, cap: u64 },
}

/// An element of the middle field F_q, as coefficients over F_p.
///
/// Length always equals `s`; every coefficient is reduced mod p.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseElem(pub Vec<u64>);

/// An element of the top field F_{q^m}, as coefficients over F_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem(pub Vec<BaseElem>);

/// F_q = F_p[x]/(modulus), with the lexicographically smallest monic
/// irreducible modulus of degree s.
#[derive(Debug, Clone)]
pub struct BaseField {
    pub p: u64,
    pub s: u32,
    pub q: u64,
    /// Monic, length s+1, coefficients reduced mod p.
    pub modulus: Vec<u64>,
}

/// F_{q^m} = F_q[y]/(modulus), same deterministic modulus rule.
#[derive(Debug, Clone)]
pub struct ExtField {
    pub base: BaseField,
    pub m: u32,
    /// Monic, length m+1, coefficients in F_q.
    pub modulus: Vec<BaseElem>,
}

/// Serializable field description: enough to reproduce witness reports.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDescription {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub base_modulus: Vec<u64>,
    pub ext_modulus: Vec<Vec<u64>>,
}

impl BaseField {
    /// Deterministic construction: scan monic degree-s polynomials over F_p
    /// in ascending counting order and keep the first irreducible one.
    pub fn new(p: u64, s: u32) -> BaseField {
        assert!(crate::numth::is_prime_u128(p as u128), "p must be prime");
        assert!(s >= 1);
        let q = (p as u128).pow(s);
        assert!(q <= u64::MAX as u128, "field too large to index");
        let mut field = BaseField { p, s, q: q as u64, modulus: vec![0; s as usize + 1] };
        field.modulus[s as usize] = 1;
        if s == 1 {
            // x itself: elements are just residues mod p.
            return field;
        }
        let mut index = 0u64;
        loop {
            let mut coeffs = Vec::with_capacity(s as usize + 1);
            let mut n = index;
            for _ in 0..s {
                coeffs.push(n % p);
                n /= p;
            }
            coeffs.push(1);
            field.modulus = coeffs;
            if field.modulus_irreducible() {
                return field;
            }
            index += 1;
            assert!(index < field.q, "no irreducible polynomial found");
        }
    }

    // -- prime field helpers --

    fn pmul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pinv(&self, a: u64) -> u64 {
        // Fermat inverse; p is prime and a nonzero.
        debug_assert!(a != 0);
        let mut acc = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.pmul(acc, base);
            }
            base = self.pmul(base, base);
            e >>= 1;
        }
        acc
    }

    // -- F_q element plumbing --

    pub fn zero(&self) -> BaseElem {
        BaseElem(vec![0; self.s as usize])
    }

    pub fn one(&self) -> BaseElem {
        let mut c = vec![0; self.s as usize];
        c[0] = 1;
        BaseElem(c)
    }

    pub fn from_u64(&self, v: u64) -> BaseElem {
        let mut c = vec![0; self.s as usize];
        c[0] = v % self.p;
        BaseElem(c)
    }

    /// Canonical index in 0..q (base-p digits, constant coefficient least
    /// significant).
    pub fn index_of(&self, a: &BaseElem) -> u64 {
        let mut idx = 0u64;
        for &c in a.0.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    pub fn from_index(&self, mut idx: u64) -> BaseElem {
        let mut c = vec![0; self.s as usize];
        for slot in c.iter_mut() {
            *slot = idx % self.p;
            idx /= self.p;
        }
        debug_assert!(idx == 0);
        BaseElem(c)
    }

    pub fn is_zero(&self, a: &BaseElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        BaseElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= self.p {
                        s - self.p
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    pub fn neg(&self, a: &BaseElem) -> BaseElem {
        BaseElem(a.0.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect())
    }

    pub fn sub(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: u64, a: &BaseElem) -> BaseElem {
        let k = k % self.p;
        BaseElem(a.0.iter().map(|&x| self.pmul(k, x)).collect())
    }

    pub fn mul(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        let s = self.s as usize;
        if s == 1 {
            return BaseElem(vec![self.pmul(a.0[0], b.0[0])]);
        }
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.pmul(x, y)) % self.p;
            }
        }
        // Reduce by the monic modulus.
        for i in (s..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..s {
                let t = self.pmul(c, self.modulus[j]);
                let idx = i - s + j;
                prod[idx] = (prod[idx] + self.p - t) % self.p;
            }
        }
        prod.truncate(s);
        BaseElem(prod)
    }

    pub fn pow(&self, a: &BaseElem, e: &BigUint) -> BaseElem {
        let mut acc = self.one();
        let mut base = a.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }

    pub fn inv(&self, a: &BaseElem) -> Result<BaseElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        // a^(q-2)
        Ok(self.pow(a, &BigUint::from(self.q - 2)))
    }

    /// Absolute trace F_q → F_p.
    pub fn abs_trace(&self, a: &BaseElem) -> u64 {
        let mut sum = self.zero();
        let mut conj = a.clone();
        for _ in 0..self.s {
            sum = self.add(&sum, &conj);
            conj = self.pow(&conj, &BigUint::from(self.p));
        }
        for &c in &sum.0[1..] {
            debug_assert_eq!(c, 0, "absolute trace landed outside F_p");
        }
        sum.0[0]
    }

    fn modulus_irreducible(&self) -> bool {
        // f of degree s over F_p is irreducible iff x^{p^s} ≡ x (mod f) and
        // gcd(x^{p^{s/t}} − x, f) = 1 for every prime t | s.
        poly_irreducible_generic(
            &PolyRing::base(self),
            &self.modulus.iter().map(|&c| vec![c]).collect::<Vec<_>>(),
        )
    }
}

/// Internal unified polynomial machinery across the two tower levels.
/// Coefficients are represented as Vec<u64>: over F_p a singleton, over F_q
/// a coefficient vector. This keeps the irreducibility test in one place.
struct PolyRing<'a> {
    base: &'a BaseField,
    /// None: coefficients live in F_p. Some(ext): in F_q (of `base`).
    over_ext: bool,
}

impl<'a> PolyRing<'a> {
    fn base(base: &'a BaseField) -> PolyRing<'a> {
        PolyRing { base, over_ext: false }
    }

    fn ext(base: &'a BaseField) -> PolyRing<'a> {
        PolyRing { base, over_ext: true }
    }

    fn order(&self) -> BigUint {
        if self.over_ext {
            BigUint::from(self.base.q)
        } else {
            BigUint::from(self.base.p)
        }
    }

    fn czero(&self) -> Vec<u64> {
        if self.over_ext {
            vec![0; self.base.s as usize]
        } else {
            vec![0]
        }
    }

    fn cone(&self) -> Vec<u64> {
        let mut c = self.czero();
        c[0] = 1;
        c
    }

    fn ciszero(&self, c: &[u64]) -> bool {
        c.iter().all(|&x| x == 0)
    }

    fn cadd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.over_ext {
            self.base.add(&BaseElem(a.to_vec()), &BaseElem(b.to_vec())).0
        } else {
            vec![(a[0] + b[0]) % self.base.p]
        }
    }

    fn cneg(&self, a: &[u64]) -> Vec<u64> {
        if self.over_ext {
            self.base.neg(&BaseElem(a.to_vec())).0
        } else {
            vec![if a[0] == 0 { 0 } else { self.base.p - a[0] }]
        }
    }

    fn cmul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.over_ext {
            self.base.mul(&BaseElem(a.to_vec()), &BaseElem(b.to_vec())).0
        } else {
            vec![self.base.pmul(a[0], b[0])]
        }
    }

    fn cinv(&self, a: &[u64]) -> Vec<u64> {
        if self.over_ext {
            self.base.inv(&BaseElem(a.to_vec())).expect("inverting zero").0
        } else {
            vec![self.base.pinv(a[0])]
        }
    }
}

type GPoly = Vec<Vec<u64>>;

fn gp_trim(ring: &PolyRing, p: &mut GPoly) {
    while p.len() > 1 && ring.ciszero(p.last().unwrap()) {
        p.pop();
    }
}

fn gp_deg(ring: &PolyRing, p: &GPoly) -> Option<usize> {
    for (i, c) in p.iter().enumerate().rev() {
        if !ring.ciszero(c) {
            return Some(i);
        }
    }
    None
}

fn gp_rem(ring: &PolyRing, a: &GPoly, b: &GPoly) -> GPoly {
    let db = gp_deg(ring, b).expect("division by zero polynomial");
    let lead_inv = ring.cinv(&b[db]);
    let mut rem = a.clone();
    while let Some(da) = gp_deg(ring, &rem) {
        if da < db {
            break;
        }
        let factor = ring.cmul(&rem[da], &lead_inv);
        for j in 0..=db {
            let t = ring.cmul(&factor, &b[j]);
            rem[da - db + j] = ring.cadd(&rem[da - db + j], &ring.cneg(&t));
        }
    }
    gp_trim(ring, &mut rem);
    rem
}

fn gp_gcd(ring: &PolyRing, a: &GPoly, b: &GPoly) -> GPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    gp_trim(ring, &mut x);
    gp_trim(ring, &mut y);
    while gp_deg(ring, &y).is_some() {
        let r = gp_rem(ring, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn gp_mulmod(ring: &PolyRing, a: &GPoly, b: &GPoly, modulus: &GPoly) -> GPoly {
    let da = gp_deg(ring, a).map_or(0, |d| d);
    let db = gp_deg(ring, b).map_or(0, |d| d);
    let mut prod: GPoly = vec![ring.czero(); da + db + 1];
    for i in 0..=da {
        if ring.ciszero(&a[i]) {
            continue;
        }
        for j in 0..=db {
            let t = ring.cmul(&a[i], &b[j]);
            prod[i + j] = ring.cadd(&prod[i + j], &t);
        }
    }
    gp_rem(ring, &prod, modulus)
}

fn gp_powmod(ring: &PolyRing, a: &GPoly, e: &BigUint, modulus: &GPoly) -> GPoly {
    let mut acc: GPoly = vec![ring.cone()];
    let mut base = gp_rem(ring, a, modulus);
    for i in 0..e.bits() {
        if e.bit(i) {
            acc = gp_mulmod(ring, &acc, &base, modulus);
        }
        base = gp_mulmod(ring, &base, &base, modulus);
    }
    acc
}

/// Standard gcd-with-x^{Q^i}−x irreducibility test for a monic polynomial.
fn poly_irreducible_generic(ring: &PolyRing, f: &GPoly) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let q = ring.order();
    let x: GPoly = vec![ring.czero(), ring.cone()];
    // x^{Q^n} ≡ x mod f
    let mut xq = x.clone();
    for _ in 0..n {
        xq = gp_powmod(ring, &xq, &q, f);
    }
    let mut diff = xq.clone();
    while diff.len() < 2 {
        diff.push(ring.czero());
    }
    diff[1] = ring.cadd(&diff[1], &ring.cneg(&ring.cone()));
    let mut diff_trim = diff;
    gp_trim(ring, &mut diff_trim);
    if gp_deg(ring, &diff_trim).is_some() {
        return false;
    }
    // gcd(x^{Q^{n/t}} − x, f) = 1 for each prime t | n
    let mut primes_of_n = Vec::new();
    let mut nn = n;
    let mut d = 2;
    while d * d <= nn {
        if nn % d == 0 {
            primes_of_n.push(d);
            while nn % d == 0 {
                nn /= d;
            }
        }
        d += 1;
    }
    if nn > 1 {
        primes_of_n.push(nn);
    }
    for t in primes_of_n {
        let k = n / t;
        let mut xq = x.clone();
        for _ in 0..k {
            xq = gp_powmod(ring, &xq, &q, f);
        }
        let mut diff = xq;
        while diff.len() < 2 {
            diff.push(ring.czero());
        }
        diff[1] = ring.cadd(&diff[1], &ring.cneg(&ring.cone()));
        gp_trim(ring, &mut diff);
        let g = gp_gcd(ring, &diff, f);
        if gp_deg(ring, &g) != Some(0) {
            return false;
        }
    }
    true
}

/// Deterministic tower construction (the `build_field` operation).
pub fn build_field(p: u64, s: u32, m: u32) -> ExtField {
    ExtField::new(p, s, m)
}

impl ExtField {
    pub fn new(p: u64, s: u32, m: u32) -> ExtField {
        assert!(m >= 1);
        let base = BaseField::new(p, s);
        let ring = PolyRing::ext(&base);
        let mut modulus: Vec<BaseElem> = vec![base.zero(); m as usize + 1];
        modulus[m as usize] = base.one();
        if m > 1 {
            let mut index = BigUint::zero();
            let q = BigUint::from(base.q);
            loop {
                // index → coefficient vector in base-q digits
                let mut digits = index.clone();
                for slot in modulus.iter_mut().take(m as usize) {
                    let rem = (&digits % &q).to_u64().unwrap();
                    *slot = base.from_index(rem);
                    digits /= &q;
                }
                let gp: GPoly = modulus.iter().map(|c| c.0.clone()).collect();
                if poly_irreducible_generic(&ring, &gp) {
                    break;
                }
                index += 1u32;
            }
        }
        ExtField { base, m, modulus }
    }

    pub fn describe(&self) -> FieldDescription {
        FieldDescription {
            p: self.base.p,
            s: self.base.s,
            m: self.m,
            base_modulus: self.base.modulus.clone(),
            ext_modulus: self.modulus.iter().map(|c| c.0.clone()).collect(),
        }
    }

    /// q^m as a big integer.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.base.q).pow(self.m)
    }

    /// q^m when it fits a u64.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![self.base.zero(); self.m as usize])
    }

    pub fn one(&self) -> FieldElem {
        let mut c = vec![self.base.zero(); self.m as usize];
        c[0] = self.base.one();
        FieldElem(c)
    }

    /// Embeds an element of F_q as a constant.
    pub fn embed(&self, a: &BaseElem) -> FieldElem {
        let mut c = vec![self.base.zero(); self.m as usize];
        c[0] = a.clone();
        FieldElem(c)
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.0.iter().all(|c| self.base.is_zero(c))
    }

    /// Canonical index in 0..q^m (base-q digits of base-element indices).
    pub fn index_of(&self, a: &FieldElem) -> u64 {
        let q = self.base.q;
        let mut idx = 0u64;
        for c in a.0.iter().rev() {
            idx = idx * q + self.base.index_of(c);
        }
        idx
    }

    pub fn from_index(&self, mut idx: u64) -> FieldElem {
        let q = self.base.q;
        let mut c = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            c.push(self.base.from_index(idx % q));
            idx /= q;
        }
        debug_assert!(idx == 0);
        FieldElem(c)
    }

    /// Iterate every element, ascending by canonical index. Requires the
    /// order to fit in u64.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let order = self.order_u64().expect("field too large to enumerate");
        (0..order).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(x, y)| self.base.add(x, y)).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|x| self.base.neg(x)).collect())
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: &BaseElem, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|x| self.base.mul(k, x)).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let m = self.m as usize;
        if m == 1 {
            return FieldElem(vec![self.base.mul(&a.0[0], &b.0[0])]);
        }
        let mut prod = vec![self.base.zero(); 2 * m - 1];
        for (i, x) in a.0.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                let t = self.base.mul(x, y);
                prod[i + j] = self.base.add(&prod[i + j], &t);
            }
        }
        for i in (m..prod.len()).rev() {
            if self.base.is_zero(&prod[i]) {
                continue;
            }
            let c = prod[i].clone();
            prod[i] = self.base.zero();
            for j in 0..m {
                let t = self.base.mul(&c, &self.modulus[j]);
                prod[i - m + j] = self.base.sub(&prod[i - m + j], &t);
            }
        }
        prod.truncate(m);
        FieldElem(prod)
    }

    pub fn pow(&self, a: &FieldElem, e: &BigUint) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        let e = self.order() - 2u32;
        Ok(self.pow(a, &e))
    }

    /// The q-power Frobenius of the extension.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, &BigUint::from(self.base.q))
    }

    /// Relative trace Tr_{F_{q^m}/F_q}: the sum of the m conjugates, which
    /// must land in F_q (asserted).
    pub fn rel_trace(&self, a: &FieldElem) -> BaseElem {
        let mut sum = self.zero();
        let mut conj = a.clone();
        for _ in 0..self.m {
            sum = self.add(&sum, &conj);
            conj = self.frobenius(&conj);
        }
        for c in &sum.0[1..] {
            assert!(self.base.is_zero(c), "relative trace landed outside F_q");
        }
        sum.0[0].clone()
    }

    /// Absolute trace to F_p.
    pub fn abs_trace(&self, a: &FieldElem) -> u64 {
        self.base.abs_trace(&self.rel_trace(a))
    }

    /// Multiplicative order, computed by exponent reduction over the
    /// factorization of q^m−1.
    pub fn mult_order(
        &self,
        a: &FieldElem,
        fact: &Factorization,
    ) -> Result<BigUint, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::ZeroElement);
        }
        debug_assert_eq!(*fact.value(), self.order() - 1u32);
        let mut ord = fact.value().clone();
        for (p, e) in fact.factors() {
            for _ in 0..*e {
                let candidate = &ord / p;
                if self.pow(a, &candidate) == self.one() {
                    ord = candidate;
                } else {
                    break;
                }
            }
        }
        Ok(ord)
    }

    /// e-freeness by the prime-power criterion: ε is e-free iff
    /// ε^{(q^m−1)/ℓ} ≠ 1 for every prime ℓ | e.
    pub fn is_e_free(
        &self,
        a: &FieldElem,
        e: &BigUint,
        fact: &Factorization,
    ) -> Result<bool, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::ZeroElement);
        }
        let n = fact.value();
        debug_assert!((n % e).is_zero(), "e must divide q^m - 1");
        for p in fact.primes() {
            if (e % p).is_zero() {
                let exp = n / p;
                if self.pow(a, &exp) == self.one() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_primitive(&self, a: &FieldElem, fact: &Factorization) -> Result<bool, FieldError> {
        self.is_e_free(a, fact.value(), fact)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numth::factor;

    #[test]
    fn f4_has_the_unique_quadratic_modulus() {
        let f4 = ExtField::new(2, 1, 2);
        // y^2 + y + 1
        let coeffs: Vec<u64> = f4.modulus.iter().map(|c| c.0[0]).collect();
        assert_eq!(coeffs, vec![1, 1, 1]);
    }

    #[test]
    fn f9_modulus_is_y2_plus_1() {
        let f9 = ExtField::new(3, 1, 2);
        let coeffs: Vec<u64> = f9.modulus.iter().map(|c| c.0[0]).collect();
        assert_eq!(coeffs, vec![1, 0, 1]);
    }

    #[test]
    fn f64_as_cubic_over_f4() {
        let f = ExtField::new(2, 2, 3);
        assert_eq!(f.base.q, 4);
        assert_eq!(f.order(), BigUint::from(64u32));
        // The chosen modulus must be irreducible: no roots in F_4 at least.
        for i in 0..4u64 {
            let x = f.base.from_index(i);
            let mut acc = f.modulus[3].clone();
            for k in (0..3).rev() {
                acc = f.base.add(&f.base.mul(&acc, &x), &f.modulus[k]);
            }
            assert!(!f.base.is_zero(&acc), "modulus has a root in F_4");
        }
    }

    #[test]
    fn f4_multiplication_table() {
        let f4 = ExtField::new(2, 1, 2);
        let omega = f4.from_index(2); // residue class of y
        let sq = f4.mul(&omega, &omega);
        let omega_plus_1 = f4.from_index(3);
        assert_eq!(sq, omega_plus_1);
    }

    #[test]
    fn inverses_exhaustive_on_f4() {
        let f4 = ExtField::new(2, 1, 2);
        for e in f4.elements().skip(1) {
            let inv = f4.inv(&e).unwrap();
            assert_eq!(f4.mul(&e, &inv), f4.one());
        }
        assert_eq!(f4.inv(&f4.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn frobenius_iterates_to_identity() {
        for (p, s, m) in [(2u64, 1u32, 4u32), (3, 1, 3), (2, 2, 2), (5, 1, 2)] {
            let f = ExtField::new(p, s, m);
            for e in f.elements() {
                let mut x = e.clone();
                for _ in 0..m {
                    x = f.frobenius(&x);
                }
                assert_eq!(x, e);
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_base_field() {
        let f = ExtField::new(2, 2, 3); // F_64 over F_4
        let fixed = f.elements().filter(|e| f.frobenius(e) == *e).count();
        assert_eq!(fixed, 4);
    }

    #[test]
    fn trace_examples_and_fibers() {
        let f4 = ExtField::new(2, 1, 2);
        assert_eq!(f4.rel_trace(&f4.zero()), f4.base.zero());
        let omega = f4.from_index(2);
        assert_eq!(f4.rel_trace(&omega), f4.base.one());

        // Fiber sizes on F_64 over F_4: every a in F_4 is hit q^{m-1} times.
        let f = ExtField::new(2, 2, 3);
        let mut counts = vec![0u64; 4];
        for e in f.elements() {
            counts[f.base.index_of(&f.rel_trace(&e)) as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c == 16));
    }

    #[test]
    fn trace_linearity() {
        let f = ExtField::new(3, 1, 2);
        let elems: Vec<FieldElem> = f.elements().collect();
        for a in &elems {
            for b in &elems {
                let lhs = f.rel_trace(&f.add(a, b));
                let rhs = f.base.add(&f.rel_trace(a), &f.rel_trace(b));
                assert_eq!(lhs, rhs);
            }
        }
        for c in 0..3u64 {
            let ce = f.base.from_u64(c);
            for a in &elems {
                let lhs = f.rel_trace(&f.scalar_mul(&ce, a));
                let rhs = f.base.mul(&ce, &f.rel_trace(a));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn order_tests_examples() {
        let f4 = ExtField::new(2, 1, 2);
        let fact = factor(&BigUint::from(3u32)).unwrap();
        // e = 1: every nonzero element is 1-free.
        for e in f4.elements().skip(1) {
            assert!(f4.is_e_free(&e, &BigUint::one(), &fact).unwrap());
        }
        // 1 is not primitive.
        assert!(!f4.is_primitive(&f4.one(), &fact).unwrap());
        // zero element errors
        assert_eq!(
            f4.is_e_free(&f4.zero(), &BigUint::one(), &fact),
            Err(FieldError::ZeroElement)
        );
    }

    #[test]
    fn primitive_counts_match_phi() {
        for (p, s, m) in [(2u64, 1u32, 4u32), (3, 1, 2), (2, 2, 2), (7, 1, 2), (5, 1, 3)] {
            let f = ExtField::new(p, s, m);
            let n = f.order() - 1u32;
            let fact = factor(&n).unwrap();
            let count = f
                .elements()
                .skip(1)
                .filter(|e| f.is_primitive(e, &fact).unwrap())
                .count();
            assert_eq!(BigUint::from(count as u64), fact.phi(), "({p},{s},{m})");
        }
    }

    #[test]
    fn e_free_agrees_with_literal_definition() {
        // Literal definition: ε is e-free iff no β and divisor d | e, d > 1
        // with ε = β^d, checked by exhaustive search.
        for (p, s, m) in [(2u64, 1u32, 2u32), (3, 1, 2), (2, 1, 4), (5, 1, 2)] {
            let f = ExtField::new(p, s, m);
            let n_big = f.order() - 1u32;
            let n = n_big.to_u64().unwrap();
            let fact = factor(&n_big).unwrap();
            let elems: Vec<FieldElem> = f.elements().collect();
            for e_div in 1..=n {
                if n % e_div != 0 {
                    continue;
                }
                for eps in elems.iter().skip(1) {
                    let fast = f.is_e_free(eps, &BigUint::from(e_div), &fact).unwrap();
                    let mut literal = true;
                    'outer: for d in 2..=e_div {
                        if e_div % d != 0 {
                            continue;
                        }
                        for beta in elems.iter().skip(1) {
                            if f.pow(beta, &BigUint::from(d)) == *eps {
                                literal = false;
                                break 'outer;
                            }
                        }
                    }
                    assert_eq!(fast, literal, "(q^m={}, e={}, eps={:?})", n + 1, e_div, eps);
                }
            }
        }
    }

    #[test]
    fn description_roundtrip() {
        let f = ExtField::new(3, 1, 2);
        let d = f.describe();
        let json = serde_json::to_string(&d).unwrap();
        let back: FieldDescription = serde_json::from_str(&json).unwrap();
        assert_eq!(d, back);
    }
}
