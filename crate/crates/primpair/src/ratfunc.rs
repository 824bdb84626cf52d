//! Rational functions over F_{q^m}: reduction, evaluation, squarefree
//! structure in characteristic p, the degree sums m₁/m₂, the pole-zero set
//! S, and the admissible-class membership test (functions not of the form
//! c·x^j·g(x)^d with d > 1 dividing q^m−1).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::ffield::{ExtField, FieldElem};
use crate::numth::Factorization;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatFuncError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("evaluation at a pole")]
    PoleAt(u64),
    #[error("field order {order} exceeds the enumeration cap {cap} and the symbolic path is disabled")]
    CapExceeded { order: BigUint, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Dense univariate polynomial over F_{q^m}, coefficients ascending, no
/// trailing zeros (the zero polynomial is the empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(field: &ExtField) -> Poly {
        Poly { coeffs: vec![field.one()] }
    }

    pub fn x(field: &ExtField) -> Poly {
        Poly { coeffs: vec![field.zero(), field.one()] }
    }

    pub fn from_coeffs(field: &ExtField, coeffs: Vec<FieldElem>) -> Poly {
        let mut p = Poly { coeffs };
        p.normalize(field);
        p
    }

    /// Builds from prime-field integer coefficients (reduced mod p).
    pub fn from_ints(field: &ExtField, ints: &[i64]) -> Poly {
        let p = field.base.p as i64;
        let coeffs = ints
            .iter()
            .map(|&c| {
                let r = ((c % p) + p) % p;
                field.embed(&field.base.from_u64(r as u64))
            })
            .collect();
        Poly::from_coeffs(field, coeffs)
    }

    fn normalize(&mut self, field: &ExtField) {
        while self.coeffs.last().is_some_and(|c| field.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None is the −∞ sentinel of the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn add(&self, field: &ExtField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            coeffs.push(field.add(&a, &b));
        }
        Poly::from_coeffs(field, coeffs)
    }

    pub fn neg(&self, field: &ExtField) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect() }
    }

    pub fn sub(&self, field: &ExtField, other: &Poly) -> Poly {
        self.add(field, &other.neg(field))
    }

    pub fn mul(&self, field: &ExtField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = field.mul(a, b);
                coeffs[i + j] = field.add(&coeffs[i + j], &t);
            }
        }
        Poly::from_coeffs(field, coeffs)
    }

    pub fn scale(&self, field: &ExtField, k: &FieldElem) -> Poly {
        Poly::from_coeffs(field, self.coeffs.iter().map(|c| field.mul(c, k)).collect())
    }

    pub fn pow(&self, field: &ExtField, mut e: u32) -> Poly {
        let mut acc = Poly::one(field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            base = base.mul(field, &base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder (denominator nonzero).
    pub fn div_rem(&self, field: &ExtField, den: &Poly) -> (Poly, Poly) {
        let dd = den.deg().expect("division by zero polynomial");
        let lead_inv = field.inv(den.lead().unwrap()).unwrap();
        let mut rem = self.clone();
        let mut quot = vec![field.zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.deg() {
            if dr < dd {
                break;
            }
            let factor = field.mul(rem.lead().unwrap(), &lead_inv);
            quot[dr - dd] = factor.clone();
            for j in 0..=dd {
                let t = field.mul(&factor, &den.coeffs[j]);
                rem.coeffs[dr - dd + j] = field.sub(&rem.coeffs[dr - dd + j], &t);
            }
            rem.normalize(field);
        }
        (Poly::from_coeffs(field, quot), rem)
    }

    pub fn gcd(&self, field: &ExtField, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(field, &b);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    /// Monic scalar normalization (zero stays zero).
    pub fn monic(&self, field: &ExtField) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => {
                let inv = field.inv(l).unwrap();
                self.scale(field, &inv)
            }
        }
    }

    pub fn derivative(&self, field: &ExtField) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let p = field.base.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let k = field.base.from_u64((i as u64) % p);
                field.scalar_mul(&k, c)
            })
            .collect();
        Poly::from_coeffs(field, coeffs)
    }

    pub fn eval(&self, field: &ExtField, x: &FieldElem) -> FieldElem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    /// x-adic valuation: multiplicity of the root 0. Zero polynomial → None.
    pub fn x_valuation(&self, field: &ExtField) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        Some(self.coeffs.iter().take_while(|c| field.is_zero(c)).count())
    }

    /// Coefficient-wise p-th root of a polynomial in x^p; the coefficients
    /// are raised to q^m/p (inverse Frobenius of F_{q^m}).
    fn pth_root(&self, field: &ExtField) -> Poly {
        let p = field.base.p as usize;
        let exp = field.order() / field.base.p;
        let mut coeffs = Vec::with_capacity(self.coeffs.len() / p + 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                coeffs.push(field.pow(c, &exp));
            } else {
                debug_assert!(field.is_zero(c), "not a polynomial in x^p");
            }
        }
        Poly::from_coeffs(field, coeffs)
    }
}

/// One squarefree part with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreePart {
    pub part: Poly,
    pub multiplicity: u32,
}

/// Squarefree decomposition in characteristic p: Yun's loop, with
/// p-th-root extraction whenever the derivative vanishes identically.
///
/// The returned parts are monic, squarefree, pairwise coprime, and satisfy
/// unit · ∏ partᵢ^multᵢ = input. Sorted by (multiplicity, degree).
pub fn squarefree_decomposition(field: &ExtField, poly: &Poly) -> Vec<SquarefreePart> {
    assert!(!poly.is_zero(), "squarefree decomposition of the zero polynomial");
    let mut out = Vec::new();
    decompose_rec(field, &poly.monic(field), 1, &mut out);
    out.sort_by(|a, b| {
        (a.multiplicity, a.part.deg())
            .cmp(&(b.multiplicity, b.part.deg()))
            .then_with(|| cmp_poly(field, &a.part, &b.part))
    });
    out
}

fn cmp_poly(field: &ExtField, a: &Poly, b: &Poly) -> std::cmp::Ordering {
    let ka: Vec<u64> = a.coeffs.iter().map(|c| field.index_of(c)).collect();
    let kb: Vec<u64> = b.coeffs.iter().map(|c| field.index_of(c)).collect();
    ka.cmp(&kb)
}

fn decompose_rec(field: &ExtField, f: &Poly, outer_mult: u32, out: &mut Vec<SquarefreePart>) {
    if f.deg() == Some(0) {
        return;
    }
    let deriv = f.derivative(field);
    if deriv.is_zero() {
        // f = h(x^p); parts of the p-th root return with multiplicity × p.
        let root = f.pth_root(field);
        decompose_rec(field, &root, outer_mult * field.base.p as u32, out);
        return;
    }
    let mut c = f.gcd(field, &deriv);
    let mut w = f.div_rem(field, &c).0;
    let mut i = 1u32;
    while w.deg() != Some(0) {
        let y = w.gcd(field, &c);
        let z = w.div_rem(field, &y).0;
        if z.deg().is_some_and(|d| d > 0) {
            out.push(SquarefreePart { part: z.monic(field), multiplicity: outer_mult * i });
        }
        w = y;
        c = c.div_rem(field, &w).0;
        i += 1;
    }
    if c.deg().is_some_and(|d| d > 0) {
        // Residual whose exponents are all divisible by p.
        let root = c.pth_root(field);
        decompose_rec(field, &root, outer_mult * field.base.p as u32, out);
    }
}

/// A reduced rational function num/den: gcd(num, den) = 1 and den monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    /// Normalizes: cancels the gcd and makes the denominator monic.
    pub fn new(field: &ExtField, num: Poly, den: Poly) -> Result<RationalFunction, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction { num: Poly::zero(), den: Poly::one(field) });
        }
        let g = num.gcd(field, &den);
        let (num, den) = if g.deg().is_some_and(|d| d > 0) {
            (num.div_rem(field, &g).0, den.div_rem(field, &g).0)
        } else {
            (num, den)
        };
        let lead_inv = field.inv(den.lead().unwrap()).unwrap();
        let den = den.scale(field, &lead_inv);
        let num = num.scale(field, &lead_inv);
        Ok(RationalFunction { num, den })
    }

    pub fn from_ints(
        field: &ExtField,
        num: &[i64],
        den: &[i64],
    ) -> Result<RationalFunction, RatFuncError> {
        RationalFunction::new(field, Poly::from_ints(field, num), Poly::from_ints(field, den))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// deg(num) + deg(den) of the reduced representative; None for the
    /// zero function.
    pub fn degree_sum(&self) -> Option<u32> {
        Some((self.num.deg()? + self.den.deg().unwrap()) as u32)
    }

    pub fn eval(&self, field: &ExtField, x: &FieldElem) -> Result<FieldElem, RatFuncError> {
        let d = self.den.eval(field, x);
        if field.is_zero(&d) {
            return Err(RatFuncError::PoleAt(field.index_of(x)));
        }
        let n = self.num.eval(field, x);
        Ok(field.mul(&n, &field.inv(&d).unwrap()))
    }

    pub fn mul(&self, field: &ExtField, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            field,
            self.num.mul(field, &other.num),
            self.den.mul(field, &other.den),
        )
        .unwrap()
    }

    /// Signed multiplicities of every squarefree part of num and den
    /// (numerator positive, denominator negative), with the parts.
    pub fn signed_parts(&self, field: &ExtField) -> Vec<(Poly, i64)> {
        let mut parts = Vec::new();
        if !self.num.is_zero() && self.num.deg() != Some(0) {
            for sp in squarefree_decomposition(field, &self.num) {
                parts.push((sp.part, sp.multiplicity as i64));
            }
        }
        if self.den.deg() != Some(0) {
            for sp in squarefree_decomposition(field, &self.den) {
                parts.push((sp.part, -(sp.multiplicity as i64)));
            }
        }
        parts
    }

    /// Sum of the degrees of the distinct monic irreducible factors of
    /// num·den, i.e. deg(radical(num)) + deg(radical(den)).
    pub fn distinct_degree_sum(&self, field: &ExtField) -> u32 {
        self.signed_parts(field)
            .iter()
            .map(|(p, _)| p.deg().unwrap_or(0) as u32)
            .sum()
    }

    /// Class membership: false iff the function is c·x^j·g(x)^d for some
    /// d > 1 dividing q^m−1 (including the degenerate c·x^j shape).
    ///
    /// Only the gcd M of the multiplicities of the non-x squarefree parts
    /// matters: a representation exists iff there are no non-x parts at
    /// all, or gcd(M, q^m−1) > 1.
    pub fn in_class_r(&self, field: &ExtField, qm_minus_1: &Factorization) -> bool {
        if self.is_zero() {
            return false;
        }
        let mut mult_gcd: u64 = 0;
        for (part, mult) in self.signed_parts(field) {
            let part_deg = part.deg().unwrap();
            let has_x = part.x_valuation(field) == Some(1);
            let non_x_deg = part_deg - usize::from(has_x);
            if non_x_deg == 0 {
                continue;
            }
            mult_gcd = mult_gcd.gcd(&mult.unsigned_abs());
        }
        if mult_gcd == 0 {
            // No non-x content: the function is c·x^j.
            return false;
        }
        BigUint::from(mult_gcd).gcd(qm_minus_1.value()).is_one()
    }

    /// Order at infinity: deg(den) − deg(num); negative means a pole there.
    pub fn infinity_order(&self) -> i64 {
        self.den.deg().unwrap_or(0) as i64 - self.num.deg().unwrap_or(0) as i64
    }
}

/// Setup shared by the counting and character machinery: reduced f and g,
/// their degree sums, and the pole-zero set S (all roots in F_{q^m} of the
/// numerators and denominators of both functions, together with 0).
#[derive(Debug, Clone)]
pub struct PairSetup {
    pub f: RationalFunction,
    pub g: RationalFunction,
    /// Canonical indices of the members of S, sorted ascending.
    pub s_indices: Vec<u64>,
    pub m1: u32,
    pub m2: u32,
}

/// Default enumeration cap for root finding.
pub const DEFAULT_ROOT_CAP: u64 = 1 << 20;

pub fn pair_setup(
    field: &ExtField,
    f: RationalFunction,
    g: RationalFunction,
    cap: u64,
) -> Result<PairSetup, RatFuncError> {
    let order = field.order();
    let order_u64 = match order.to_u64() {
        Some(v) if v <= cap => v,
        _ => return Err(RatFuncError::CapExceeded { order, cap }),
    };
    let m1 = f.degree_sum().expect("f must be nonzero");
    let m2 = g.degree_sum().expect("g must be nonzero");
    let mut s: Vec<u64> = vec![0];
    for idx in 1..order_u64 {
        let x = field.from_index(idx);
        let hit = [&f.num, &f.den, &g.num, &g.den]
            .iter()
            .any(|p| field.is_zero(&p.eval(field, &x)));
        if hit {
            s.push(idx);
        }
    }
    Ok(PairSetup { f, g, s_indices: s, m1, m2 })
}

/// Parses the strict text grammar `num=[c0,c1,...];den=[d0,d1,...]` with
/// integer coefficients reduced mod p.
pub fn parse_rational(field: &ExtField, text: &str) -> Result<RationalFunction, RatFuncError> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 2 {
        return Err(RatFuncError::Parse("expected `num=[...];den=[...]`".into()));
    }
    let parse_side = |side: &str, tag: &str| -> Result<Vec<i64>, RatFuncError> {
        let body = side
            .strip_prefix(&format!("{tag}=["))
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| RatFuncError::Parse(format!("malformed `{tag}` list")))?;
        if body.is_empty() {
            return Ok(Vec::new());
        }
        body.split(',')
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| RatFuncError::Parse(format!("bad integer `{tok}`")))
            })
            .collect()
    };
    let num = parse_side(parts[0], "num")?;
    let den = parse_side(parts[1], "den")?;
    RationalFunction::from_ints(field, &num, &den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::ExtField;
    use crate::numth::factor;

    fn f9() -> ExtField {
        ExtField::new(3, 1, 2)
    }

    #[test]
    fn normalization_cancels_common_factors() {
        let f = f9();
        // (x^2 (x+1)) / (x (x+1)) = x
        let num = Poly::from_ints(&f, &[0, 0, 1]).mul(&f, &Poly::from_ints(&f, &[1, 1]));
        let den = Poly::from_ints(&f, &[0, 1]).mul(&f, &Poly::from_ints(&f, &[1, 1]));
        let r = RationalFunction::new(&f, num, den).unwrap();
        assert_eq!(r.num, Poly::from_ints(&f, &[0, 1]));
        assert_eq!(r.den, Poly::one(&f));
        assert_eq!(r.degree_sum(), Some(1));
    }

    #[test]
    fn eval_and_pole() {
        let f = f9();
        let r = RationalFunction::from_ints(&f, &[1, 0, 1], &[0, 1]).unwrap(); // (x^2+1)/x
        let one = f.one();
        let v = r.eval(&f, &one).unwrap();
        assert_eq!(v, f.from_index(2)); // (1+1)/1 = 2 in characteristic 3
        assert_eq!(r.eval(&f, &f.zero()), Err(RatFuncError::PoleAt(0)));
    }

    #[test]
    fn squarefree_decomposition_examples() {
        // x^3 (x+1) over F_2
        let f2 = ExtField::new(2, 1, 2);
        let p = Poly::from_ints(&f2, &[0, 1]).pow(&f2, 3).mul(&f2, &Poly::from_ints(&f2, &[1, 1]));
        let parts = squarefree_decomposition(&f2, &p);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].part, Poly::from_ints(&f2, &[1, 1]));
        assert_eq!(parts[0].multiplicity, 1);
        assert_eq!(parts[1].part, Poly::from_ints(&f2, &[0, 1]));
        assert_eq!(parts[1].multiplicity, 3);

        // x^2 over F_9
        let f = f9();
        let p = Poly::from_ints(&f, &[0, 0, 1]);
        let parts = squarefree_decomposition(&f, &p);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].part, Poly::from_ints(&f, &[0, 1]));
        assert_eq!(parts[0].multiplicity, 2);

        // (x^2+1)^2 over F_3: x^2+1 is irreducible over F_3.
        let f3 = ExtField::new(3, 1, 1);
        let p = Poly::from_ints(&f3, &[1, 0, 1]).pow(&f3, 2);
        let parts = squarefree_decomposition(&f3, &p);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].part, Poly::from_ints(&f3, &[1, 0, 1]));
        assert_eq!(parts[0].multiplicity, 2);
    }

    #[test]
    fn squarefree_reconstruction_holds() {
        let f = f9();
        let cases: Vec<Poly> = vec![
            Poly::from_ints(&f, &[1, 1]).pow(&f, 3),
            Poly::from_ints(&f, &[0, 1])
                .pow(&f, 6)
                .mul(&f, &Poly::from_ints(&f, &[2, 1]).pow(&f, 2)),
            Poly::from_ints(&f, &[1, 2, 1, 1]),
            Poly::from_ints(&f, &[2, 0, 0, 1]).pow(&f, 9),
        ];
        for poly in cases {
            let parts = squarefree_decomposition(&f, &poly);
            let mut prod = Poly::one(&f);
            for sp in &parts {
                prod = prod.mul(&f, &sp.part.pow(&f, sp.multiplicity));
            }
            assert_eq!(prod, poly.monic(&f));
            // Parts are squarefree and pairwise coprime.
            for (i, a) in parts.iter().enumerate() {
                let d = a.part.derivative(&f);
                if !d.is_zero() {
                    assert_eq!(a.part.gcd(&f, &d).deg(), Some(0));
                }
                for b in parts.iter().skip(i + 1) {
                    assert_eq!(a.part.gcd(&f, &b.part).deg(), Some(0));
                }
            }
        }
    }

    #[test]
    fn class_r_examples() {
        let f = f9();
        let n8 = factor(&BigUint::from(8u32)).unwrap();
        // x^2 with even q^m-1: the c x^j shape.
        let r = RationalFunction::from_ints(&f, &[0, 0, 1], &[1]).unwrap();
        assert!(!r.in_class_r(&f, &n8));
        // ((x+1)/x)^2
        let xp1 = RationalFunction::from_ints(&f, &[1, 2, 1], &[0, 0, 1]).unwrap();
        assert!(!xp1.in_class_r(&f, &n8));
        // (x^2+1)/x is admissible.
        let good = RationalFunction::from_ints(&f, &[1, 0, 1], &[0, 1]).unwrap();
        assert!(good.in_class_r(&f, &n8));
    }

    #[test]
    fn class_r_matches_brute_force_on_small_fields() {
        // Brute force: search all c, j, d | q^m-1 (d>1), and low-degree g
        // with x-free monic num/den for a representation f = c x^j g^d.
        for (p, s, m) in [(2u64, 1u32, 2u32), (3, 1, 1), (2, 1, 3), (5, 1, 1)] {
            let field = ExtField::new(p, s, m);
            let n = field.order() - 1u32;
            let fact = factor(&n).unwrap();
            let n64 = n.to_u64().unwrap();
            let candidates: Vec<RationalFunction> = vec![
                RationalFunction::from_ints(&field, &[1, 0, 1], &[0, 1]).unwrap(),
                RationalFunction::from_ints(&field, &[0, 0, 1], &[1]).unwrap(),
                RationalFunction::from_ints(&field, &[1, 2, 1], &[0, 0, 1]).unwrap(),
                RationalFunction::from_ints(&field, &[0, 1, 1], &[1]).unwrap(),
                RationalFunction::from_ints(&field, &[1, 1], &[0, 1]).unwrap(),
                RationalFunction::from_ints(&field, &[1, 0, 0, 1], &[0, 1]).unwrap(),
            ];
            for cand in candidates {
                if cand.is_zero() {
                    continue;
                }
                let fast = cand.in_class_r(&field, &fact);
                let brute = !brute_force_representable(&field, &cand, n64);
                assert_eq!(fast, brute, "({p},{s},{m}) {cand:?}");
            }
        }
    }

    fn brute_force_representable(field: &ExtField, f: &RationalFunction, n: u64) -> bool {
        // f = c x^j g^d with monic x-free g; deg(g) ≤ degree_sum(f)/d.
        let ds = f.degree_sum().unwrap() as usize;
        for d in 2..=n {
            if n % d != 0 {
                continue;
            }
            let d = d as u32;
            let max_deg = ds / d as usize;
            let polys = enumerate_monic_xfree(field, max_deg);
            for gn in &polys {
                for gd in &polys {
                    if gn.gcd(field, gd).deg() != Some(0) {
                        continue;
                    }
                    let gpow_num = gn.pow(field, d);
                    let gpow_den = gd.pow(field, d);
                    for j in -(ds as i64)..=(ds as i64) {
                        let mut num = gpow_num.clone();
                        let mut den = gpow_den.clone();
                        if j >= 0 {
                            let xj = Poly::from_ints(field, &[0, 1]).pow(field, j as u32);
                            num = num.mul(field, &xj);
                        } else {
                            let xj = Poly::from_ints(field, &[0, 1]).pow(field, (-j) as u32);
                            den = den.mul(field, &xj);
                        }
                        let candidate = RationalFunction::new(field, num, den).unwrap();
                        // compare up to a scalar c
                        if candidate.den == f.den
                            && candidate.num.deg() == f.num.deg()
                            && !candidate.num.is_zero()
                        {
                            let c = field.mul(
                                f.num.lead().unwrap(),
                                &field.inv(candidate.num.lead().unwrap()).unwrap(),
                            );
                            if candidate.num.scale(field, &c) == f.num {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    fn enumerate_monic_xfree(field: &ExtField, max_deg: usize) -> Vec<Poly> {
        // Monic polynomials of degree ≤ max_deg with nonzero constant term.
        let order = field.order_u64().unwrap();
        let mut out = vec![Poly::one(field)];
        for deg in 1..=max_deg {
            let count = order.pow(deg as u32);
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(deg + 1);
                let mut rest = idx;
                for _ in 0..deg {
                    coeffs.push(field.from_index(rest % order));
                    rest /= order;
                }
                coeffs.push(field.one());
                if field.is_zero(&coeffs[0]) {
                    continue;
                }
                out.push(Poly::from_coeffs(field, coeffs));
            }
        }
        out
    }

    #[test]
    fn pair_setup_examples() {
        let f4 = ExtField::new(2, 1, 2);
        let x = RationalFunction::from_ints(&f4, &[0, 1], &[1]).unwrap();
        let setup = pair_setup(&f4, x.clone(), x, DEFAULT_ROOT_CAP).unwrap();
        assert_eq!(setup.s_indices, vec![0]);
        assert_eq!(setup.m1, 1);

        let f = f9();
        let r = RationalFunction::from_ints(&f, &[1, 0, 1], &[0, 1]).unwrap();
        let g = RationalFunction::from_ints(&f, &[0, 1, 0, 1], &[1]).unwrap();
        let setup = pair_setup(&f, r, g, DEFAULT_ROOT_CAP).unwrap();
        assert_eq!(setup.m1, 3);
        assert_eq!(setup.m2, 3);
        // S = {0, i, -i} where i is the residue class of y (y^2 = -1).
        let i_elem = f.from_index(3); // y has digits (0,1) → index 3 = 0 + 1·3
        assert!(f.is_zero(&f.add(&f.mul(&i_elem, &i_elem), &f.one())));
        let mut expect = vec![0, f.index_of(&i_elem), f.index_of(&f.neg(&i_elem))];
        expect.sort();
        assert_eq!(setup.s_indices, expect);
    }

    #[test]
    fn eval_is_multiplicative_off_poles() {
        let f = f9();
        let a = RationalFunction::from_ints(&f, &[1, 0, 1], &[0, 1]).unwrap();
        let b = RationalFunction::from_ints(&f, &[2, 1], &[1, 1]).unwrap();
        let prod = a.mul(&f, &b);
        for idx in 0..9u64 {
            let x = f.from_index(idx);
            let va = a.eval(&f, &x);
            let vb = b.eval(&f, &x);
            let vp = prod.eval(&f, &x);
            if let (Ok(va), Ok(vb), Ok(vp)) = (va, vb, vp) {
                assert_eq!(f.mul(&va, &vb), vp);
            }
        }
    }

    #[test]
    fn parser_roundtrip() {
        let f = f9();
        let r = parse_rational(&f, "num=[1,0,1];den=[0,1]").unwrap();
        assert_eq!(r, RationalFunction::from_ints(&f, &[1, 0, 1], &[0, 1]).unwrap());
        assert!(parse_rational(&f, "num=[1,2];den=[]").is_err()); // zero denominator
        assert!(parse_rational(&f, "num=[1,2]").is_err());
        assert!(parse_rational(&f, "num=[a];den=[1]").is_err());
    }
}
