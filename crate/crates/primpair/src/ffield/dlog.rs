//! Discrete-log table over a full enumeration of F_{q^m}^*.

use num_traits::ToPrimitive;

use super::{ExtField, FieldElem, FieldError};
use crate::numth::Factorization;

/// Default cap on q^m for table construction.
pub const DEFAULT_DLOG_CAP: u64 = 1 << 20;

/// Exponent lookup for a fixed primitive element γ: `log[index_of(ε)]` is
/// the t with γ^t = ε, for every nonzero ε.
#[derive(Debug, Clone)]
pub struct DlogTable {
    pub gamma: FieldElem,
    /// q^m − 1 as u64 (the cap keeps it small).
    pub group_order: u64,
    log: Vec<u64>,
    /// power[t] = index of γ^t
    power: Vec<u64>,
}

impl DlogTable {
    /// Finds the smallest primitive element in enumeration order and builds
    /// the full exponent table.
    pub fn build(
        field: &ExtField,
        fact: &Factorization,
        cap: u64,
    ) -> Result<DlogTable, FieldError> {
        let order = field.order();
        let order_u64 = match order.to_u64() {
            Some(v) if v <= cap => v,
            _ => return Err(FieldError::CapExceeded { order, cap }),
        };
        let group_order = order_u64 - 1;
        let gamma = field
            .elements()
            .skip(1)
            .find(|e| field.is_primitive(e, fact).unwrap())
            .expect("a primitive element always exists");

        let mut log = vec![u64::MAX; order_u64 as usize];
        let mut power = vec![0u64; group_order as usize];
        let mut acc = field.one();
        for t in 0..group_order {
            let idx = field.index_of(&acc) as usize;
            debug_assert!(log[idx] == u64::MAX, "generator order too small");
            log[idx] = t;
            power[t as usize] = idx as u64;
            acc = field.mul(&acc, &gamma);
        }
        debug_assert_eq!(acc, field.one());
        Ok(DlogTable { gamma, group_order, log, power })
    }

    /// Discrete log of a nonzero element by canonical index.
    pub fn log_of_index(&self, idx: u64) -> Option<u64> {
        let v = self.log[idx as usize];
        if v == u64::MAX {
            None
        } else {
            Some(v)
        }
    }

    pub fn log(&self, field: &ExtField, e: &FieldElem) -> Option<u64> {
        self.log_of_index(field.index_of(e))
    }

    /// Canonical index of γ^t.
    pub fn index_of_power(&self, t: u64) -> u64 {
        self.power[(t % self.group_order) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::ExtField;
    use crate::numth::factor;
    use num_traits::One;

    #[test]
    fn f4_table_is_the_expected_one() {
        let f4 = ExtField::new(2, 1, 2);
        let fact = factor(&BigUint::from(3u32)).unwrap();
        let t = DlogTable::build(&f4, &fact, DEFAULT_DLOG_CAP).unwrap();
        // gamma is omega, the residue class of y (index 2).
        assert_eq!(f4.index_of(&t.gamma), 2);
        assert_eq!(t.log_of_index(1), Some(0)); // 1
        assert_eq!(t.log_of_index(2), Some(1)); // omega
        assert_eq!(t.log_of_index(3), Some(2)); // omega + 1
        assert_eq!(t.log_of_index(0), None); // zero has no log
    }

    #[test]
    fn dlog_inverts_powers_exhaustively() {
        for (p, s, m) in [(2u64, 1u32, 6u32), (3, 1, 4), (2, 2, 3), (5, 1, 3)] {
            let f = ExtField::new(p, s, m);
            let n = f.order() - 1u32;
            let fact = factor(&n).unwrap();
            let t = DlogTable::build(&f, &fact, DEFAULT_DLOG_CAP).unwrap();
            let mut acc = f.one();
            for k in 0..t.group_order {
                assert_eq!(t.log(&f, &acc), Some(k));
                assert_eq!(t.index_of_power(k), f.index_of(&acc));
                acc = f.mul(&acc, &t.gamma);
            }
            // gamma^{q^m-1} = 1 and no smaller power is 1.
            assert_eq!(acc, f.one());
            let one = f.one();
            let mut x = t.gamma.clone();
            for _ in 1..t.group_order {
                assert_ne!(x, one);
                x = f.mul(&x, &t.gamma);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f = ExtField::new(2, 1, 12);
        let n = f.order() - 1u32;
        let fact = factor(&n).unwrap();
        match DlogTable::build(&f, &fact, 1024) {
            Err(FieldError::CapExceeded { .. }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
        assert!(BigUint::one() < n);
    }
}
