//! Brute-force verification: small finite fields as tables, exhaustive
//! enumeration of matrix groups over them (and over `Z/NZ`), conjugacy
//! classes, and the explicit finite group `I(p)`.
//!
//! Nothing here calls into the closed-form code in [`crate::groups`]; the two
//! are compared only by tests.

mod enumerate;
mod field;
mod group;
mod linalg;

use thiserror::Error;

pub use enumerate::{
    candidate_count, count_group, enumerate_group, GroupDescriptor, LeviInstance, MAX_CANDIDATES, MAX_ELEMENTS,
};
pub use field::{prime_power, SmallField};
pub use group::{p_part, Block, Coefficients, Element, FqMatrixGroup};
pub use linalg::{determinant, rank, solve, AffineSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("state space of {candidates} candidate matrices exceeds the cap of {cap}")]
    StateSpaceTooLarge { candidates: u128, cap: u128 },
    #[error("group has {elements} elements, more than the {cap} that may be materialized")]
    TooManyElements { elements: u64, cap: u64 },
    #[error("no table-backed field of order {0}")]
    UnsupportedField(u64),
    #[error("invalid group parameters: {0}")]
    InvalidParameters(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every `side x side` matrix over `F_q`, filtered by `keep`.
    fn brute_force(q: u64, side: usize, keep: impl Fn(&SmallField, &[u8]) -> bool) -> usize {
        let f = SmallField::of_order(q).unwrap();
        let len = side * side;
        let total = (q as usize).pow(len as u32);
        let mut a = vec![0u8; len];
        let mut hits = 0;
        for mut code in 0..total {
            for x in a.iter_mut() {
                *x = (code % q as usize) as u8;
                code /= q as usize;
            }
            if keep(&f, &a) {
                hits += 1;
            }
        }
        hits
    }

    fn is_unitary(f: &SmallField, a: &[u8], side: usize) -> bool {
        for i in 0..side {
            for j in 0..side {
                let mut s = 0u8;
                for k in 0..side {
                    s = f.add(s, f.mul(a[k * side + i], f.conj(a[k * side + j])));
                }
                if s != u8::from(i == j) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn column_search_agrees_with_naive_enumeration() {
        for q in [2u64, 3] {
            let naive_gl = brute_force(q, 2, |f, a| determinant(f, a, 2) != 0);
            assert_eq!(count_group(&GroupDescriptor::General { m: 2, q }).unwrap() as usize, naive_gl);
            let naive_sl = brute_force(q, 2, |f, a| determinant(f, a, 2) == 1);
            assert_eq!(count_group(&GroupDescriptor::Special { m: 2, q }).unwrap() as usize, naive_sl);
            assert_eq!(count_group(&GroupDescriptor::Symplectic { m: 1, q }).unwrap() as usize, naive_sl);
        }
        let naive_u = brute_force(4, 2, |f, a| is_unitary(f, a, 2));
        assert_eq!(naive_u, 18);
        assert_eq!(count_group(&GroupDescriptor::Unitary { m: 2, q: 2 }).unwrap(), 18);
        let naive_u3 = brute_force(9, 2, |f, a| is_unitary(f, a, 2));
        assert_eq!(count_group(&GroupDescriptor::Unitary { m: 2, q: 3 }).unwrap() as usize, naive_u3);
    }

    #[test]
    fn enumeration_examples() {
        let gl = enumerate_group(&GroupDescriptor::General { m: 2, q: 2 }).unwrap();
        assert_eq!(gl.order(), 6);
        assert!(gl.is_group());
        let u = enumerate_group(&GroupDescriptor::Unitary { m: 2, q: 2 }).unwrap();
        assert_eq!(u.order(), 18);
        assert!(u.is_group());
        let ip = enumerate_group(&GroupDescriptor::Levi(LeviInstance { p: 3, m: 1, general: vec![], unitary: vec![3] }))
            .unwrap();
        assert_eq!(ip.order(), 8);
        assert!(ip.is_group());
        let sp = enumerate_group(&GroupDescriptor::Symplectic { m: 2, q: 2 }).unwrap();
        assert_eq!(sp.order(), 720);
        let gsp = enumerate_group(&GroupDescriptor::SymplecticSimilitudeMod { m: 1, n: 4 }).unwrap();
        assert_eq!(gsp.order(), 96);
        assert!(gsp.is_group());
    }

    #[test]
    fn class_counting_examples() {
        let trivial = enumerate_group(&GroupDescriptor::General { m: 1, q: 2 }).unwrap();
        assert_eq!(trivial.order(), 1);
        for p in [2, 3, 5] {
            assert_eq!(trivial.p_regular_class_count(p), 1);
            assert_eq!(trivial.sylow_p_order(p), 1);
        }
        let ip = enumerate_group(&GroupDescriptor::Levi(LeviInstance { p: 3, m: 1, general: vec![], unitary: vec![3] }))
            .unwrap();
        assert_eq!(ip.p_regular_class_count(3), 8);
        let u = enumerate_group(&GroupDescriptor::Unitary { m: 2, q: 2 }).unwrap();
        assert_eq!(u.p_regular_class_count(2), 6);
        assert_eq!(u.sylow_p_order(2), 2);
        let gl = enumerate_group(&GroupDescriptor::General { m: 2, q: 2 }).unwrap();
        assert_eq!(gl.sylow_p_order(2), 2);
        assert_eq!(gl.sylow_p_order(5), 1);
        // S_3 has 3 classes
        assert_eq!(gl.conjugacy_classes().len(), 3);
    }

    #[test]
    fn class_partition_sanity() {
        for d in [
            GroupDescriptor::General { m: 2, q: 3 },
            GroupDescriptor::Unitary { m: 2, q: 3 },
            GroupDescriptor::Symplectic { m: 1, q: 5 },
            GroupDescriptor::SymplecticSimilitudeMod { m: 1, n: 6 },
            GroupDescriptor::Levi(LeviInstance { p: 2, m: 2, general: vec![4], unitary: vec![] }),
        ] {
            let g = enumerate_group(&d).unwrap();
            let classes = g.conjugacy_classes();
            let total: usize = classes.iter().map(Vec::len).sum();
            assert_eq!(total, g.order(), "{d:?}");
            for c in &classes {
                assert_eq!(g.order() % c.len(), 0, "{d:?}");
            }
        }
    }

    #[test]
    fn guards() {
        let huge = GroupDescriptor::General { m: 4, q: 7 };
        assert!(matches!(count_group(&huge), Err(OracleError::StateSpaceTooLarge { .. })));
        assert!(matches!(
            enumerate_group(&GroupDescriptor::SymplecticSimilitudeMod { m: 2, n: 5 }),
            Err(OracleError::StateSpaceTooLarge { .. })
        ));
        assert_eq!(
            count_group(&GroupDescriptor::Unitary { m: 1, q: 11 }),
            Err(OracleError::UnsupportedField(121))
        );
        assert!(matches!(count_group(&GroupDescriptor::General { m: 0, q: 2 }), Err(OracleError::InvalidParameters(_))));
    }

    #[test]
    fn enumeration_is_deterministic() {
        let d = GroupDescriptor::Levi(LeviInstance { p: 3, m: 1, general: vec![9], unitary: vec![] });
        let a = enumerate_group(&d).unwrap();
        let b = enumerate_group(&d).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(a.conjugacy_classes(), b.conjugacy_classes());
    }
}
