//! Ring-element traits shared by scalars, series and quotient algebras.
//!
//! [`RingElt`] is the minimal commutative-ring vocabulary the generic
//! linear algebra and polynomial code needs. It deliberately has no
//! static `zero()`/`one()`: rings here carry runtime data (prime,
//! precision, variables, modulus), so neutral elements are derived from
//! an existing element via `zero_like`/`one_like`.
//!
//! [`TowerElt`] extends it for elements of rings that are finite free
//! modules over a [`SeriesRing`] base — possibly through several stages
//! of root adjunction — and knows how to embed base scalars.

use crate::padic::PAdicInt;
use crate::series::{BaseElt, SeriesRing};

pub trait RingElt: Clone + PartialEq + std::fmt::Debug + std::fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Image of the integer `v` in the ring this element lives in.
    fn int_like(&self, v: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn is_zero(&self) -> bool;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Element of a ring sitting at the top of a (possibly trivial) tower of
/// finite free extensions of a series base ring.
pub trait TowerElt: RingElt {
    /// Descriptor of the series ring at the bottom of the tower.
    fn base_ring(&self) -> &SeriesRing;
    /// Image of a base scalar in this ring. Panics if `b` belongs to a
    /// structurally different base.
    fn embed_base(&self, b: &BaseElt) -> Self;
    /// Free rank of the containing ring over the base; ranks multiply
    /// along the tower.
    fn rank_over_base(&self) -> usize;
}

impl RingElt for PAdicInt {
    fn zero_like(&self) -> Self {
        self.with_value(0)
    }

    fn one_like(&self) -> Self {
        self.with_value(1)
    }

    fn int_like(&self, v: i64) -> Self {
        self.with_value(v as i128)
    }

    fn add(&self, rhs: &Self) -> Self {
        PAdicInt::add(self, rhs)
    }

    fn neg(&self) -> Self {
        PAdicInt::neg(self)
    }

    fn mul(&self, rhs: &Self) -> Self {
        PAdicInt::mul(self, rhs)
    }

    fn is_zero(&self) -> bool {
        PAdicInt::is_zero(self)
    }
}

impl RingElt for BaseElt {
    fn zero_like(&self) -> Self {
        self.ring().zero()
    }

    fn one_like(&self) -> Self {
        self.ring().one()
    }

    fn int_like(&self, v: i64) -> Self {
        self.ring().constant(v as i128)
    }

    fn add(&self, rhs: &Self) -> Self {
        BaseElt::add(self, rhs)
    }

    fn neg(&self) -> Self {
        BaseElt::neg(self)
    }

    fn mul(&self, rhs: &Self) -> Self {
        BaseElt::mul(self, rhs)
    }

    fn is_zero(&self) -> bool {
        BaseElt::is_zero(self)
    }
}

impl TowerElt for BaseElt {
    fn base_ring(&self) -> &SeriesRing {
        self.ring()
    }

    fn embed_base(&self, b: &BaseElt) -> Self {
        assert_eq!(self.prime(), b.prime(), "mixed primes");
        assert_eq!(self.ring().vars(), b.ring().vars(), "mismatched variable sets");
        assert_eq!(self.degcap(), b.degcap(), "mismatched degree caps");
        b.truncate_prec(self.prec().min(b.prec()))
    }

    fn rank_over_base(&self) -> usize {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesRing;

    #[test]
    fn generic_pow_matches_inherent() {
        let r = SeriesRing::new(2, 8, vec!["u1"], 8).unwrap();
        let a = r.from_pairs(&[(vec![0], 1), (vec![1], 1)]).unwrap();
        assert_eq!(RingElt::pow(&a, 5), BaseElt::pow(&a, 5));
        let c = PAdicInt::new(3, 4, 5).unwrap();
        assert_eq!(RingElt::pow(&c, 3), c.pow(3));
    }

    #[test]
    fn int_like_wraps_negatives() {
        let r = SeriesRing::new(2, 4, Vec::<String>::new(), 2).unwrap();
        let one = r.one();
        assert_eq!(one.int_like(-1), r.constant(15));
        assert!(one.sub(&one).is_zero());
    }

    #[test]
    fn embed_base_truncates_to_shared_precision() {
        let r16 = SeriesRing::new(2, 16, vec!["u1"], 8).unwrap();
        let r4 = SeriesRing::new(2, 4, vec!["u1"], 8).unwrap();
        let hi = r16.constant(3);
        let lo = r4.constant(3);
        assert_eq!(lo.embed_base(&hi).prec(), 4);
        assert_eq!(hi.embed_base(&lo).prec(), 4);
    }
}
