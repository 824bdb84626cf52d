//! Desk-scale character machinery: canonical additive characters,
//! multiplicative characters through a discrete-log table, the two
//! characteristic functions (e-freeness and prescribed trace), Kloosterman
//! sums, and the Weil/mixed character-sum bound checks that back the
//! four-case estimates.
//!
//! Everything here is complex double precision with exact rational angles;
//! sums carry at most 2^20 unit-modulus terms so accumulated error stays
//! far below the 1e-6 assertion tolerance. Exact verdicts never depend on
//! this module: it is the numerical cross-check of the integer machinery.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::ffield::{BaseElem, DlogTable, ExtField, FieldElem};
use crate::numth::Factorization;
use crate::ratfunc::{PairSetup, Poly, RationalFunction};

/// Tolerance for all numeric assertions in this module.
pub const TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharsumError {
    #[error("field exceeds the discrete-log cap")]
    CapExceeded,
    #[error("Kloosterman sum requires (u, v) != (0, 0)")]
    BothZero,
}

/// Identifies a tower for reports.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct FieldId {
    pub p: u64,
    pub s: u32,
    pub m: u32,
}

/// Precomputed per-field lookup tables driving every character sum.
pub struct CharTables<'a> {
    pub field: &'a ExtField,
    pub fact: &'a Factorization,
    pub dlog: DlogTable,
    /// q^m
    pub order: u64,
    /// q^m − 1
    pub n: u64,
    /// p-th roots of unity: root_p[k] = e^{2πik/p}
    root_p: Vec<Complex64>,
    /// absolute trace to F_p, indexed by element index
    abs_trace: Vec<u64>,
    /// absolute trace of F_q elements, indexed by base-element index
    base_abs_trace: Vec<u64>,
    /// index of ε⁻¹ for nonzero ε (0 slot unused)
    inv_index: Vec<u64>,
    /// index in F_{q^m} of each embedded F_q element
    embed_index: Vec<u64>,
}

impl<'a> CharTables<'a> {
    pub fn build(
        field: &'a ExtField,
        fact: &'a Factorization,
        cap: u64,
    ) -> Result<CharTables<'a>, CharsumError> {
        let dlog = DlogTable::build(field, fact, cap).map_err(|_| CharsumError::CapExceeded)?;
        let order = field.order_u64().expect("capped above");
        let n = order - 1;
        let p = field.base.p;

        let root_p: Vec<Complex64> = (0..p)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / p as f64))
            .collect();

        let mut abs_trace = vec![0u64; order as usize];
        for idx in 0..order {
            let e = field.from_index(idx);
            abs_trace[idx as usize] = field.abs_trace(&e);
        }
        let q = field.base.q;
        let mut base_abs_trace = vec![0u64; q as usize];
        for idx in 0..q {
            base_abs_trace[idx as usize] = field.base.abs_trace(&field.base.from_index(idx));
        }
        let mut inv_index = vec![0u64; order as usize];
        for t in 0..n {
            let idx = dlog.index_of_power(t);
            let inv_t = if t == 0 { 0 } else { n - t };
            inv_index[idx as usize] = dlog.index_of_power(inv_t);
        }
        let embed_index: Vec<u64> = (0..q)
            .map(|idx| field.index_of(&field.embed(&field.base.from_index(idx))))
            .collect();

        Ok(CharTables { field, fact, dlog, order, n, root_p, abs_trace, base_abs_trace, inv_index, embed_index })
    }

    pub fn id(&self) -> FieldId {
        FieldId { p: self.field.base.p, s: self.field.base.s, m: self.field.m }
    }

    /// ψ̂(ε) for ε by index: the canonical additive character of F_{q^m}.
    #[inline]
    pub fn psi_hat_index(&self, idx: u64) -> Complex64 {
        self.root_p[self.abs_trace[idx as usize] as usize]
    }

    /// ψ̃(a) for a ∈ F_q by index.
    #[inline]
    pub fn psi_tilde_index(&self, idx: u64) -> Complex64 {
        self.root_p[self.base_abs_trace[idx as usize] as usize]
    }

    /// Index of u·ε for u ∈ F_q (by base index) and nonzero ε (by index).
    #[inline]
    fn scaled_index(&self, u_base_idx: u64, eps_idx: u64) -> u64 {
        if u_base_idx == 0 || eps_idx == 0 {
            return 0;
        }
        let lu = self.dlog.log_of_index(self.embed_index[u_base_idx as usize]).unwrap();
        let le = self.dlog.log_of_index(eps_idx).unwrap();
        self.dlog.index_of_power((lu + le) % self.n)
    }

    /// Absolute trace of u·ε + v·ε⁻¹, all by indices; ε nonzero.
    #[inline]
    fn kloosterman_trace(&self, u_base_idx: u64, v_base_idx: u64, eps_idx: u64) -> u64 {
        let a = self.abs_trace[self.scaled_index(u_base_idx, eps_idx) as usize];
        let inv = self.inv_index[eps_idx as usize];
        let b = self.abs_trace[self.scaled_index(v_base_idx, inv) as usize];
        (a + b) % self.field.base.p
    }
}

/// Additive character flavor: the canonical character of the middle field
/// F_q, or its lift to F_{q^m} through the relative trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddCharFlavor {
    CanonicalBase,
    Lifted,
}

/// ψ_u: x ↦ ψ̃(u·x) (base flavor) or ψ̂(u·x) (lifted flavor).
#[derive(Debug, Clone)]
pub struct AdditiveChar {
    pub u: BaseElem,
    pub flavor: AddCharFlavor,
}

impl AdditiveChar {
    pub fn eval(&self, tables: &CharTables, x_base: Option<&BaseElem>, x_ext: Option<&FieldElem>) -> Complex64 {
        match self.flavor {
            AddCharFlavor::CanonicalBase => {
                let x = x_base.expect("base-flavor character takes an F_q argument");
                let prod = tables.field.base.mul(&self.u, x);
                tables.psi_tilde_index(tables.field.base.index_of(&prod))
            }
            AddCharFlavor::Lifted => {
                let x = x_ext.expect("lifted character takes an F_{q^m} argument");
                let scaled = tables.field.scalar_mul(&self.u, x);
                tables.psi_hat_index(tables.field.index_of(&scaled))
            }
        }
    }
}

/// Multiplicative character of exact order d, indexed by j coprime to d:
/// χ(γ^t) = e^{2πi·j·t/d}, extended by χ(0) = 0 for nontrivial characters
/// and χ₁(0) = 1.
#[derive(Debug, Clone)]
pub struct MultChar {
    pub order: u64,
    pub index: u64,
    roots: Vec<Complex64>,
}

impl MultChar {
    /// Requires d | q^m−1 and gcd(j, d) = 1.
    pub fn new(tables: &CharTables, order: u64, index: u64) -> MultChar {
        assert!(order >= 1 && tables.n % order == 0, "order must divide q^m - 1");
        assert!(num_integer::gcd(index, order) == 1 || order == 1);
        let roots = (0..order)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / order as f64))
            .collect();
        MultChar { order, index, roots }
    }

    pub fn trivial(tables: &CharTables) -> MultChar {
        MultChar::new(tables, 1, 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Evaluation at an element by canonical index.
    #[inline]
    pub fn eval_index(&self, tables: &CharTables, idx: u64) -> Complex64 {
        if idx == 0 {
            return if self.order == 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        if self.order == 1 {
            return Complex64::new(1.0, 0.0);
        }
        let t = tables.dlog.log_of_index(idx).unwrap();
        let k = (self.index * (t % self.order)) % self.order;
        self.roots[k as usize]
    }

    pub fn eval(&self, tables: &CharTables, x: &FieldElem) -> Complex64 {
        self.eval_index(tables, tables.field.index_of(x))
    }

    /// Exponent k with χ = χ_n^k for the reference character χ_n of full
    /// order n = q^m−1 (namely k = j·n/d).
    pub fn exponent_on_full_group(&self, tables: &CharTables) -> u64 {
        if self.order == 1 {
            0
        } else {
            self.index * (tables.n / self.order)
        }
    }
}

/// All characters of exact order d: indices j coprime to d.
pub fn characters_of_order(tables: &CharTables, d: u64) -> Vec<MultChar> {
    if d == 1 {
        return vec![MultChar::trivial(tables)];
    }
    (1..=d)
        .filter(|&j| num_integer::gcd(j, d) == 1)
        .map(|j| MultChar::new(tables, d, j))
        .collect()
}

/// ρ_e(ε): the characteristic function of e-free elements evaluated through
/// characters: θ(e)·Σ_{d|e} μ(d)/φ(d) Σ_{(d)} χ_d(ε).
pub fn rho_via_characters(tables: &CharTables, eps: &FieldElem, e: u64) -> Complex64 {
    assert!(e >= 1 && tables.n % e == 0, "e must divide q^m - 1");
    let eps_idx = tables.field.index_of(eps);
    assert!(eps_idx != 0, "rho is defined on nonzero elements");
    let t = tables.dlog.log_of_index(eps_idx).unwrap();

    // Primes of e, from the cached factorization of n.
    let primes: Vec<u64> = tables
        .fact
        .primes()
        .filter_map(|p| p.to_u64())
        .filter(|&p| e % p == 0)
        .collect();
    let w = primes.len();

    // θ(e) = φ(e)/e as f64 (exact small rationals).
    let fact_e = tables.fact.restrict_to_divisor(&BigUint::from(e));
    let theta = fact_e.phi().to_f64().unwrap() / e as f64;

    let mut total = Complex64::new(0.0, 0.0);
    // Squarefree divisors d of e as subsets of its prime set.
    for mask in 0u32..(1u32 << w) {
        let mut d = 1u64;
        let bits = mask.count_ones();
        for (i, &p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
            }
        }
        let mu = if bits % 2 == 0 { 1.0 } else { -1.0 };
        let phi_d: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p - 1)
            .product();
        let mut char_sum = Complex64::new(0.0, 0.0);
        if d == 1 {
            char_sum += Complex64::new(1.0, 0.0);
        } else {
            for j in 1..=d {
                if num_integer::gcd(j, d) == 1 {
                    let k = (j * (t % d)) % d;
                    char_sum += Complex64::from_polar(1.0, TAU * k as f64 / d as f64);
                }
            }
        }
        total += char_sum * (mu / phi_d as f64);
    }
    total * theta
}

/// τ_a(ε): the characteristic function of trace = a evaluated through
/// additive characters: (1/q)·Σ_{u∈F_q} ψ̂(uε)·ψ̃(−ua).
pub fn tau_via_characters(tables: &CharTables, eps: &FieldElem, a: &BaseElem) -> Complex64 {
    let q = tables.field.base.q;
    let field = tables.field;
    let eps_idx = field.index_of(eps);
    let a_idx = field.base.index_of(a);
    let mut total = Complex64::new(0.0, 0.0);
    for u_idx in 0..q {
        let first = tables.psi_hat_index(tables.scaled_index(u_idx, eps_idx));
        let u = field.base.from_index(u_idx);
        let minus_ua = field.base.neg(&field.base.mul(&u, &field.base.from_index(a_idx)));
        let second = tables.psi_tilde_index(field.base.index_of(&minus_ua));
        total += first * second;
    }
    total / q as f64
}

/// Result of a bound-checked sum.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub magnitude: f64,
    pub bound: f64,
    pub pass: bool,
}

/// K(ψ̂, u, v) = Σ_{ε≠0} ψ̂(uε + vε⁻¹) with the Weil bound 2·q^{m/2}.
pub fn kloosterman(
    tables: &CharTables,
    u: &BaseElem,
    v: &BaseElem,
) -> Result<(Complex64, BoundCheck), CharsumError> {
    let base = &tables.field.base;
    if base.is_zero(u) && base.is_zero(v) {
        return Err(CharsumError::BothZero);
    }
    let u_idx = base.index_of(u);
    let v_idx = base.index_of(v);
    let mut total = Complex64::new(0.0, 0.0);
    for eps_idx in 1..tables.order {
        let tr = tables.kloosterman_trace(u_idx, v_idx, eps_idx);
        total += tables.root_p[tr as usize];
    }
    let bound = 2.0 * (tables.order as f64).sqrt();
    let magnitude = total.norm();
    Ok((total, BoundCheck { magnitude, bound, pass: magnitude <= bound + TOL }))
}

/// Per-index evaluation cache for one rational function on one field:
/// `Some(index of f(ε))` off the poles, `None` at them.
pub struct FuncTable {
    pub values: Vec<Option<u64>>,
}

impl FuncTable {
    pub fn build(field: &ExtField, f: &RationalFunction) -> FuncTable {
        let order = field.order_u64().expect("field too large for tables");
        let values = (0..order)
            .map(|idx| {
                let x = field.from_index(idx);
                f.eval(field, &x).ok().map(|v| field.index_of(&v))
            })
            .collect();
        FuncTable { values }
    }
}

/// Outcome of a Weil-type sum: the hypothesis flag distinguishes sums where
/// the bound is asserted from degenerate shapes where it is only reported.
#[derive(Debug, Clone, Serialize)]
pub struct WeilOutcome {
    pub sum_re: f64,
    pub sum_im: f64,
    pub magnitude: f64,
    /// (Σ_j deg f_j − 1)·q^{m/2}
    pub bound: f64,
    pub hypothesis_ok: bool,
    /// None when the hypothesis fails (bound not asserted).
    pub pass: Option<bool>,
}

/// Σ_{f(ε)≠∞} χ(f(ε)) with the Weil bound (Σ deg f_j − 1)·q^{m/2}.
///
/// The hypothesis check is the multiplicity-gcd test: the sum degenerates
/// when f = c·g(x)^d for d the order of χ.
pub fn weil_sum(
    tables: &CharTables,
    f: &RationalFunction,
    f_table: &FuncTable,
    chi: &MultChar,
) -> WeilOutcome {
    assert!(!chi.is_trivial(), "the Weil bound needs a nontrivial character");
    let field = tables.field;
    let parts = f.signed_parts(field);
    let mult_gcd = parts.iter().fold(0u64, |acc, (_, m)| num_integer::gcd(acc, m.unsigned_abs()));
    // Degenerate iff f is constant (no parts) or d divides every multiplicity.
    let hypothesis_ok = mult_gcd != 0 && mult_gcd % chi.order != 0;

    let mut total = Complex64::new(0.0, 0.0);
    for value in f_table.values.iter().flatten() {
        total += chi.eval_index(tables, *value);
    }
    let distinct_deg: u32 = f.distinct_degree_sum(field);
    let bound = (distinct_deg.saturating_sub(1)) as f64 * (tables.order as f64).sqrt();
    let magnitude = total.norm();
    WeilOutcome {
        sum_re: total.re,
        sum_im: total.im,
        magnitude,
        bound,
        hypothesis_ok,
        pass: hypothesis_ok.then_some(magnitude <= bound + TOL),
    }
}

/// Pole/zero bookkeeping of the mixed-sum bound (reported, not asserted).
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct MixedSumBoundParams {
    /// degree of the pole divisor of the additive argument u·x + v/x
    pub deg_g_inf: u32,
    /// distinct zeros and poles of the multiplicative argument in the closure
    pub l0: u32,
    /// distinct poles of the additive argument, infinity included
    pub l1: u32,
    /// finite poles of the multiplicative argument that are zeros or poles
    /// of the additive argument
    pub l2: u32,
}

/// The row of the four-case table a configuration falls into.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub enum CaseRow {
    /// (1, 1, 0, 0): the main term
    CaseI,
    /// (1, 1, u, v) with (u,v) ≠ (0,0): Kloosterman row
    KloostermanRow,
    /// d₁ = 1, d₂ ≠ 1
    CaseII,
    /// d₁ ≠ 1, d₂ = 1
    CaseIII,
    /// d₁ ≠ 1, d₂ ≠ 1
    CaseIV,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixedOutcome {
    pub case: CaseRow,
    pub sum_re: f64,
    pub sum_im: f64,
    pub magnitude: f64,
    /// Upper bound constant c of the asserted |sum| ≤ c·q^{m/2}; for Case I
    /// the assertion is instead Re(sum) ≥ q^m − (m₁+m₂+1).
    pub bound: f64,
    pub hypothesis_ok: bool,
    pub pass: Option<bool>,
    pub params: Option<MixedSumBoundParams>,
}

/// χ_{f,g}(d₁,d₂,u,v) = Σ_{ε∉S} χ₁(f(ε))·χ₂(g(ε))·ψ̂(uε+vε⁻¹), checked
/// against the four-case bound table.
#[allow(clippy::too_many_arguments)]
pub fn mixed_case_sum(
    tables: &CharTables,
    setup: &PairSetup,
    f_table: &FuncTable,
    g_table: &FuncTable,
    chi1: &MultChar,
    chi2: &MultChar,
    u: &BaseElem,
    v: &BaseElem,
) -> MixedOutcome {
    let field = tables.field;
    let base = &field.base;
    let u_idx = base.index_of(u);
    let v_idx = base.index_of(v);
    let u_zero = u_idx == 0;
    let v_zero = v_idx == 0;

    let mut in_s = vec![false; tables.order as usize];
    for &idx in &setup.s_indices {
        in_s[idx as usize] = true;
    }

    let mut total = Complex64::new(0.0, 0.0);
    for eps_idx in 1..tables.order {
        if in_s[eps_idx as usize] {
            continue;
        }
        let fv = f_table.values[eps_idx as usize].expect("pole outside S");
        let gv = g_table.values[eps_idx as usize].expect("pole outside S");
        let mut term = chi1.eval_index(tables, fv) * chi2.eval_index(tables, gv);
        if !(u_zero && v_zero) {
            let tr = tables.kloosterman_trace(u_idx, v_idx, eps_idx);
            term *= tables.root_p[tr as usize];
        }
        total += term;
    }

    let m1 = setup.m1 as f64;
    let m2 = setup.m2 as f64;
    let sqrt_qm = (tables.order as f64).sqrt();
    let magnitude = total.norm();

    let (case, bound, hypothesis_ok) = match (chi1.is_trivial(), chi2.is_trivial()) {
        (true, true) => {
            if u_zero && v_zero {
                (CaseRow::CaseI, m1 + m2 + 1.0, true)
            } else {
                (CaseRow::KloostermanRow, 2.0, true)
            }
        }
        (true, false) => {
            let c = match (u_zero, v_zero) {
                (true, true) => m2 - 1.0,
                (true, false) | (false, true) => m2,
                (false, false) => m2 + 2.0,
            };
            (CaseRow::CaseII, c, combined_hypothesis_ok(field, tables, setup, chi1, chi2))
        }
        (false, true) => {
            let c = match (u_zero, v_zero) {
                (true, true) => m1 - 1.0,
                (true, false) | (false, true) => m1,
                (false, false) => m1 + 2.0,
            };
            (CaseRow::CaseIII, c, combined_hypothesis_ok(field, tables, setup, chi1, chi2))
        }
        (false, false) => {
            let c = match (u_zero, v_zero) {
                (true, true) => m1 + m2 - 1.0,
                (true, false) | (false, true) => m1 + m2,
                (false, false) => m1 + m2 + 2.0,
            };
            (CaseRow::CaseIV, c, combined_hypothesis_ok(field, tables, setup, chi1, chi2))
        }
    };

    let pass = match case {
        CaseRow::CaseI => {
            let target = tables.order as f64 - (m1 + m2 + 1.0);
            Some(total.re >= target - TOL && total.im.abs() <= TOL)
        }
        _ => hypothesis_ok.then_some(magnitude <= bound * sqrt_qm + TOL),
    };

    let params = (!matches!(case, CaseRow::CaseI | CaseRow::KloostermanRow))
        .then(|| mixed_bound_params(field, setup, &case, chi1, chi2, tables, u, v));

    MixedOutcome {
        case,
        sum_re: total.re,
        sum_im: total.im,
        magnitude,
        bound,
        hypothesis_ok,
        pass,
        params,
    }
}

/// Combined-function degeneracy check for χ₁(f)·χ₂(g) = χ_n(f^{k₁}·g^{k₂}):
/// the pair degenerates iff n divides the combined multiplicity of every
/// irreducible factor of the supports, which the pairwise-gcd refinement of
/// the squarefree parts detects without factoring into irreducibles.
fn combined_hypothesis_ok(
    field: &ExtField,
    tables: &CharTables,
    setup: &PairSetup,
    chi1: &MultChar,
    chi2: &MultChar,
) -> bool {
    let n = tables.n as i128;
    let k1 = chi1.exponent_on_full_group(tables) as i128;
    let k2 = chi2.exponent_on_full_group(tables) as i128;
    let mults = combined_multiplicities(field, &setup.f, &setup.g, k1, k2);
    if mults.is_empty() {
        return false;
    }
    mults.iter().any(|&(_, c)| c.rem_euclid(n) != 0)
}

/// Refined combined multiplicities k₁·mult_f + k₂·mult_g per coprime chunk
/// of the joint support, with the chunk degree.
fn combined_multiplicities(
    field: &ExtField,
    f: &RationalFunction,
    g: &RationalFunction,
    k1: i128,
    k2: i128,
) -> Vec<(u32, i128)> {
    let parts_f = f.signed_parts(field);
    let parts_g = g.signed_parts(field);
    let mut out: Vec<(u32, i128)> = Vec::new();
    let mut residual_g: Vec<(Poly, i64)> = parts_g.clone();
    for (pf, mf) in &parts_f {
        let mut rf = pf.clone();
        for (pg, mg) in residual_g.iter_mut() {
            if rf.deg() == Some(0) {
                break;
            }
            let h = rf.gcd(field, pg);
            if h.deg().is_some_and(|d| d > 0) {
                out.push((h.deg().unwrap() as u32, k1 * *mf as i128 + k2 * *mg as i128));
                rf = rf.div_rem(field, &h).0;
                *pg = pg.div_rem(field, &h).0;
            }
        }
        if rf.deg().is_some_and(|d| d > 0) {
            out.push((rf.deg().unwrap() as u32, k1 * *mf as i128));
        }
    }
    for (pg, mg) in residual_g {
        if pg.deg().is_some_and(|d| d > 0) {
            out.push((pg.deg().unwrap() as u32, k2 * mg as i128));
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn mixed_bound_params(
    field: &ExtField,
    setup: &PairSetup,
    case: &CaseRow,
    chi1: &MultChar,
    chi2: &MultChar,
    tables: &CharTables,
    u: &BaseElem,
    v: &BaseElem,
) -> MixedSumBoundParams {
    let u_zero = field.base.is_zero(u);
    let v_zero = field.base.is_zero(v);

    // The multiplicative argument F: g for Case II, f for Case III, the
    // combined f^{k1} g^{k2} for Case IV.
    let (support, inf_order): (Vec<(Poly, i64)>, i128) = match case {
        CaseRow::CaseII => (setup.g.signed_parts(field), setup.g.infinity_order() as i128),
        CaseRow::CaseIII => (setup.f.signed_parts(field), setup.f.infinity_order() as i128),
        _ => {
            let k1 = chi1.exponent_on_full_group(tables) as i128;
            let k2 = chi2.exponent_on_full_group(tables) as i128;
            let mut support = setup.f.signed_parts(field);
            support.extend(setup.g.signed_parts(field));
            let inf = k1 * setup.f.infinity_order() as i128 + k2 * setup.g.infinity_order() as i128;
            (support, inf)
        }
    };

    // l0: distinct zeros/poles of F in the closure = degree of the joint
    // radical, plus one if infinity is a zero or pole.
    let mut radical = Poly::one(field);
    for (p, _) in &support {
        let h = radical.gcd(field, p);
        let reduced = p.div_rem(field, &h).0;
        radical = radical.mul(field, &reduced);
    }
    let mut l0 = radical.deg().unwrap_or(0) as u32;
    if inf_order != 0 {
        l0 += 1;
    }

    // Additive argument G = u·x + v/x: simple poles at ∞ (u ≠ 0) and 0 (v ≠ 0).
    let deg_g_inf = u32::from(!u_zero) + u32::from(!v_zero);
    let l1 = deg_g_inf;

    // l2: finite poles of F that are zeros or poles of G. The finite zeros
    // and poles of G are 0 together with the roots of u·x² + v when both
    // parameters are nonzero.
    let mut den_radical = Poly::one(field);
    for (p, m) in &support {
        if *m < 0 {
            let h = den_radical.gcd(field, p);
            let reduced = p.div_rem(field, &h).0;
            den_radical = den_radical.mul(field, &reduced);
        }
    }
    let mut l2 = 0u32;
    if !(u_zero && v_zero) {
        if den_radical.x_valuation(field).is_some_and(|x| x >= 1) {
            l2 += 1;
        }
        if !u_zero && !v_zero {
            // Distinct common closure roots of den(F) and u·x² + v.
            let quad = Poly::from_coeffs(
                field,
                vec![field.embed(v), field.zero(), field.embed(u)],
            );
            let quad_radical = radical_of(field, &quad);
            let common = den_radical.gcd(field, &quad_radical);
            l2 += common.deg().unwrap_or(0) as u32;
        }
    }

    MixedSumBoundParams { deg_g_inf, l0, l1, l2 }
}

/// Product of the distinct monic irreducible factors.
fn radical_of(field: &ExtField, p: &Poly) -> Poly {
    let mut rad = Poly::one(field);
    for part in crate::ratfunc::squarefree_decomposition(field, p) {
        let h = rad.gcd(field, &part.part);
        let reduced = part.part.div_rem(field, &h).0;
        rad = rad.mul(field, &reduced);
    }
    rad
}

/// Enumerates tower parameters (p, s, m) with min_order ≤ q^m ≤ max_order
/// and m ≥ min_m, ascending by (q^m, p, s).
pub fn enumerate_towers(min_order: u64, max_order: u64, min_m: u32) -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    for p in crate::numth::first_primes(200) {
        let p = *p;
        if p > max_order {
            break;
        }
        let mut s = 1u32;
        loop {
            let q = (p as u128).pow(s);
            if q > max_order as u128 {
                break;
            }
            let mut m = min_m.max(1);
            loop {
                let order = q.checked_pow(m);
                match order {
                    Some(o) if o <= max_order as u128 => {
                        if o >= min_order as u128 {
                            out.push((o as u64, p, s, m));
                        }
                        m += 1;
                    }
                    _ => break,
                }
            }
            s += 1;
        }
    }
    out.sort();
    out.into_iter().map(|(_, p, s, m)| (p, s, m)).collect()
}

/// Statistics from the characteristic-function equivalence sweep.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceSweep {
    pub fields: usize,
    pub rho_checks: u64,
    pub tau_checks: u64,
    pub failures: u64,
    pub worst_rho_error: f64,
    pub worst_tau_error: f64,
}

/// Verifies, on every tower with q^m ≤ max_order (extensions only, m ≥ 2),
/// that ρ_e matches the exact e-free indicator for every nonzero ε and
/// every divisor e of q^m−1, and that τ_a matches the trace indicator for
/// every ε and every a ∈ F_q, all within `TOL` before rounding.
pub fn rho_tau_equivalence_sweep(max_order: u64) -> EquivalenceSweep {
    let mut stats = EquivalenceSweep {
        fields: 0,
        rho_checks: 0,
        tau_checks: 0,
        failures: 0,
        worst_rho_error: 0.0,
        worst_tau_error: 0.0,
    };
    for (p, s, m) in enumerate_towers(4, max_order, 2) {
        let field = ExtField::new(p, s, m);
        let n = field.order() - 1u32;
        let fact = crate::numth::factor(&n).unwrap();
        let tables = CharTables::build(&field, &fact, max_order).unwrap();
        stats.fields += 1;

        let divisors = fact.divisors(1 << 16).expect("divisor list fits");
        for eps_idx in 1..tables.order {
            let eps = field.from_index(eps_idx);
            for e in &divisors {
                let e64 = e.to_u64().unwrap();
                let rho = rho_via_characters(&tables, &eps, e64);
                let free = field.is_e_free(&eps, e, &fact).unwrap();
                let target = if free { 1.0 } else { 0.0 };
                let err = (rho - Complex64::new(target, 0.0)).norm();
                stats.rho_checks += 1;
                stats.worst_rho_error = stats.worst_rho_error.max(err);
                if err > TOL {
                    stats.failures += 1;
                }
            }
        }

        for eps_idx in 0..tables.order {
            let eps = field.from_index(eps_idx);
            let tr = field.rel_trace(&eps);
            for a_idx in 0..field.base.q {
                let a = field.base.from_index(a_idx);
                let tau = tau_via_characters(&tables, &eps, &a);
                let target = if tr == a { 1.0 } else { 0.0 };
                let err = (tau - Complex64::new(target, 0.0)).norm();
                stats.tau_checks += 1;
                stats.worst_tau_error = stats.worst_tau_error.max(err);
                if err > TOL {
                    stats.failures += 1;
                }
            }
        }
    }
    stats
}

/// One JSON record per bound assertion for the lemma-verification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaRecord {
    pub lemma: &'static str,
    pub field: FieldId,
    pub params: serde_json::Value,
    pub magnitude: f64,
    pub bound: f64,
    pub hypothesis_ok: bool,
    pub pass: Option<bool>,
}

/// Exhaustive Kloosterman bound check over every tower with q^m ≤ max_order
/// and every (u, v) ≠ (0, 0): one record per field with the worst ratio.
pub fn kloosterman_sweep(max_order: u64) -> Vec<LemmaRecord> {
    let mut out = Vec::new();
    for (p, s, m) in enumerate_towers(4, max_order, 2) {
        let field = ExtField::new(p, s, m);
        let n = field.order() - 1u32;
        let fact = crate::numth::factor(&n).unwrap();
        let tables = CharTables::build(&field, &fact, max_order).unwrap();
        let q = field.base.q;
        let mut worst = 0.0f64;
        let mut all_pass = true;
        let mut checks = 0u64;
        for u_idx in 0..q {
            for v_idx in 0..q {
                if u_idx == 0 && v_idx == 0 {
                    continue;
                }
                let u = field.base.from_index(u_idx);
                let v = field.base.from_index(v_idx);
                let (_, check) = kloosterman(&tables, &u, &v).unwrap();
                worst = worst.max(check.magnitude);
                all_pass &= check.pass;
                checks += 1;
            }
        }
        out.push(LemmaRecord {
            lemma: "kloosterman",
            field: tables.id(),
            params: serde_json::json!({ "pairs_checked": checks }),
            magnitude: worst,
            bound: 2.0 * (tables.order as f64).sqrt(),
            hypothesis_ok: true,
            pass: Some(all_pass),
        });
    }
    out
}

/// Builds the deterministic per-field (f, g) pair used by the bound sweeps:
/// f = (x² + βx + a)/x with an irreducible quadratic numerator (so its
/// pole-zero set in the field is exactly {0}) and g = x·(x² + βx + a),
/// sharing the numerator's support. Both have degree sum 3 and sit in the
/// admissible class whenever gcd(1, q^m−1) = 1, which always holds.
pub fn standard_pair(field: &ExtField) -> (RationalFunction, RationalFunction) {
    let order = field.order_u64().expect("desk-scale field");
    // Scan for an irreducible quadratic x^2 + βx + a over F_{q^m}.
    for beta_idx in 0..order {
        'next: for a_idx in 1..order {
            let beta = field.from_index(beta_idx);
            let a = field.from_index(a_idx);
            let quad = Poly::from_coeffs(field, vec![a, beta, field.one()]);
            for x_idx in 0..order {
                if field.is_zero(&quad.eval(field, &field.from_index(x_idx))) {
                    continue 'next;
                }
            }
            let x = Poly::x(field);
            let f = RationalFunction::new(field, quad.clone(), x.clone()).unwrap();
            let g = RationalFunction::new(field, quad.mul(field, &x), Poly::one(field)).unwrap();
            return (f, g);
        }
    }
    unreachable!("every field admits an irreducible quadratic");
}

/// Weil and four-case mixed-sum assertions over a deterministic pool of
/// configurations on every tower with min_order ≤ q^m ≤ max_order.
pub fn weil_mixed_sweep(min_order: u64, max_order: u64) -> Vec<LemmaRecord> {
    let mut out = Vec::new();
    for (p, s, m) in enumerate_towers(min_order, max_order, 2) {
        let field = ExtField::new(p, s, m);
        let n_big = field.order() - 1u32;
        let fact = crate::numth::factor(&n_big).unwrap();
        let tables = CharTables::build(&field, &fact, max_order).unwrap();
        let id = tables.id();

        let (f, g) = standard_pair(&field);
        let setup = crate::ratfunc::pair_setup(&field, f.clone(), g.clone(), max_order).unwrap();
        let f_table = FuncTable::build(&field, &f);
        let g_table = FuncTable::build(&field, &g);

        // Distinct prime orders available for characters.
        let prime_orders: Vec<u64> = fact.primes().filter_map(|p| p.to_u64()).take(2).collect();

        // Weil sums: each prime order, against both functions.
        for &d in &prime_orders {
            for (tag, func, table) in [("f", &f, &f_table), ("g", &g, &g_table)] {
                let chi = MultChar::new(&tables, d, 1);
                let outcome = weil_sum(&tables, func, table, &chi);
                out.push(LemmaRecord {
                    lemma: "weil",
                    field: id,
                    params: serde_json::json!({ "function": tag, "order": d }),
                    magnitude: outcome.magnitude,
                    bound: outcome.bound,
                    hypothesis_ok: outcome.hypothesis_ok,
                    pass: outcome.pass,
                });
            }
        }

        // Mixed sums: all four (u, v) rows for the trivial/nontrivial
        // character combinations.
        let zero = field.base.zero();
        let one = field.base.one();
        let uv_rows: [(&BaseElem, &BaseElem, &str); 4] = [
            (&zero, &zero, "(0,0)"),
            (&one, &zero, "(u,0)"),
            (&zero, &one, "(0,v)"),
            (&one, &one, "(u,v)"),
        ];
        let d1 = prime_orders.first().copied();
        let d2 = prime_orders.get(1).copied().or(d1);
        let trivial = MultChar::trivial(&tables);
        let mut char_combos: Vec<(MultChar, MultChar, &'static str)> = Vec::new();
        char_combos.push((trivial.clone(), trivial.clone(), "case-i-or-kloosterman"));
        if let Some(d2v) = d2 {
            char_combos.push((trivial.clone(), MultChar::new(&tables, d2v, 1), "case-ii"));
        }
        if let Some(d1v) = d1 {
            char_combos.push((MultChar::new(&tables, d1v, 1), trivial.clone(), "case-iii"));
            if let Some(d2v) = d2 {
                char_combos.push((
                    MultChar::new(&tables, d1v, 1),
                    MultChar::new(&tables, d2v, 1),
                    "case-iv",
                ));
            }
        }
        for (chi1, chi2, combo) in &char_combos {
            for (u, v, row) in &uv_rows {
                let outcome =
                    mixed_case_sum(&tables, &setup, &f_table, &g_table, chi1, chi2, u, v);
                out.push(LemmaRecord {
                    lemma: "mixed-case",
                    field: id,
                    params: serde_json::json!({
                        "combo": combo,
                        "row": row,
                        "case": format!("{:?}", outcome.case),
                        "d1": chi1.order,
                        "d2": chi2.order,
                        "l_params": outcome.params,
                    }),
                    magnitude: outcome.magnitude,
                    bound: outcome.bound,
                    hypothesis_ok: outcome.hypothesis_ok,
                    pass: outcome.pass,
                });
            }
        }
    }
    out
}
