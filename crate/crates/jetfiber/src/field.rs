//! Arithmetic in the finite fields GF(2^k), 1 <= k <= 8.
//!
//! Elements are bit patterns in a fixed polynomial basis: bit i is the
//! coefficient of α^i, where α is a root of the modulus listed in
//! [`GfField::new`]. Addition is XOR; multiplication is carry-less
//! multiplication followed by reduction. The representation is stable
//! across runs, so element values can be frozen into tests.

use crate::error::EngineError;

/// Raw element of GF(2^k) in the polynomial basis. Only the low k bits
/// are meaningful; all constructors keep values reduced.
pub type FieldElem = u16;

/// Irreducible moduli over GF(2), indexed by k-1 (k = 1..=8).
/// Bit i of the entry is the coefficient of α^i; the leading α^k term
/// is implicit in the reduction step.
const MODULI: [u16; 8] = [
    0b1,         // k=1: α + 1 ≡ α + 1 (GF(2): reduction unused)
    0b11,        // k=2: α^2 + α + 1
    0b011,       // k=3: α^3 + α + 1
    0b0011,      // k=4: α^4 + α + 1
    0b00101,     // k=5: α^5 + α^2 + 1
    0b000011,    // k=6: α^6 + α + 1
    0b0000011,   // k=7: α^7 + α + 1
    0b00011011,  // k=8: α^8 + α^4 + α^3 + α + 1
];

/// A field descriptor: all element operations go through this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GfField {
    k: u32,
    /// Low-order part of the modulus (the α^k term is implicit).
    modulus: u16,
}

impl GfField {
    /// The field GF(2^k). Only 1 <= k <= 8 is supported.
    pub fn new(k: u32) -> Result<Self, EngineError> {
        if !(1..=8).contains(&k) {
            return Err(EngineError::Precondition(format!(
                "field GF(2^k) supported for 1 <= k <= 8, got k = {k}"
            )));
        }
        Ok(GfField { k, modulus: MODULI[(k - 1) as usize] })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of field elements, 2^k.
    pub fn order(&self) -> u64 {
        1 << self.k
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a ^ b
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a < (1 << self.k) && b < (1 << self.k));
        // Carry-less multiply into 2k-1 bits.
        let mut acc: u32 = 0;
        let a = a as u32;
        for i in 0..self.k {
            if b & (1 << i) != 0 {
                acc ^= a << i;
            }
        }
        // Reduce: replace α^d (d >= k) by α^(d-k) * modulus_low.
        for d in (self.k..2 * self.k).rev() {
            if acc & (1 << d) != 0 {
                acc ^= 1 << d;
                acc ^= (self.modulus as u32) << (d - self.k);
            }
        }
        acc as FieldElem
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc: FieldElem = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element (a^(2^k - 2)).
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    /// All field elements in ascending bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        0..(1u16 << self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_is_boolean_arithmetic() {
        let f = GfField::new(1).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.mul(1, 0), 0);
    }

    #[test]
    fn gf4_multiplication_table() {
        // GF(4) = {0, 1, ω, ω+1} with ω^2 = ω + 1. ω = 0b10.
        let f = GfField::new(2).unwrap();
        let w = 0b10;
        let w2 = f.mul(w, w);
        assert_eq!(w2, 0b11); // ω^2 = ω + 1
        assert_eq!(f.mul(w, w2), 1); // ω^3 = 1
        assert_eq!(f.pow(w, 3), 1);
        assert_eq!(f.add(w, w2), 1); // ω + ω^2 = 1
    }

    #[test]
    fn every_nonzero_element_has_an_inverse() {
        for k in 1..=8 {
            let f = GfField::new(k).unwrap();
            for a in f.elements().skip(1) {
                let ai = f.inv(a).unwrap();
                assert_eq!(f.mul(a, ai), 1, "k={k} a={a:#b}");
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        // (a + b)^2 = a^2 + b^2 in characteristic 2.
        for k in 1..=8 {
            let f = GfField::new(k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.pow(f.add(a, b), 2);
                    let rhs = f.add(f.pow(a, 2), f.pow(b, 2));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn field_axioms_spot_checks() {
        let f = GfField::new(3).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn unsupported_k_is_rejected() {
        assert!(GfField::new(0).is_err());
        assert!(GfField::new(9).is_err());
    }
}
