//! Exact machinery for deciding when a finite field F_{q^m} contains a
//! nonzero element ε such that (f(ε), g(ε)) is a pair of primitive elements
//! with both traces Tr(ε) and Tr(ε⁻¹) prescribed, for rational functions
//! f, g of bounded degree sum.
//!
//! The crate splits into three layers:
//!
//! * exact integer/field plumbing: [`numth`] (primality, factorization of
//!   q^m−1, multiplicative functions), [`ffield`] (tower arithmetic
//!   F_p ⊆ F_q ⊆ F_{q^m}), [`ratfunc`] (rational functions, squarefree
//!   structure, the admissible class test);
//! * desk-scale verification: [`charsum`] (character sums, Kloosterman and
//!   Weil-type bound checks), [`oracle`] (brute-force counts N and exact
//!   verification of the sieve inequalities);
//! * the campaign: [`bounds`] (every inequality evaluated with exact
//!   integer/rational arithmetic) and [`hunt`] (enumeration of (q, m)
//!   pairs and the exceptional-set report).

pub mod bounds;
pub mod charsum;
pub mod ffield;
pub mod hunt;
pub mod numth;
pub mod oracle;
pub mod ratfunc;
