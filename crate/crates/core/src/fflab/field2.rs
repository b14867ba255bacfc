//! Binary fields F_{2^n} in a fixed polynomial basis.
//!
//! Elements are bit vectors packed into a u64; the modulus is the
//! lexicographically least irreducible polynomial of the degree, so every
//! enumeration in this crate is reproducible.

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryField {
    n: u32,
    modulus: u64,
}

/// Polynomial remainder of a by b over F_2 (bit-packed).
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn is_irreducible(poly: u64, degree: u32) -> bool {
    for d in 1..=degree / 2 {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(poly, q) == 0 {
                return false;
            }
        }
    }
    true
}

impl BinaryField {
    /// The field of 2^n elements with the least irreducible modulus.
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::domain(format!(
                "binary field degree must be in 1..={MAX_DEGREE}, got {n}"
            )));
        }
        let modulus = ((1u64 << n)..(1u64 << (n + 1)))
            .find(|&cand| is_irreducible(cand, n))
            .expect("an irreducible polynomial exists in every degree");
        debug_assert!(is_irreducible(modulus, n));
        Ok(BinaryField { n, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size()
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    pub fn mul(&self, mut a: u64, mut b: u64) -> u64 {
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if (a >> self.n) & 1 == 1 {
                a ^= self.modulus;
            }
        }
        acc
    }

    pub fn square(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.size() - 2)
    }

    /// A cube root of unity other than 1, present exactly in even degree.
    pub fn omega(&self) -> Result<u64> {
        self.elements()
            .find(|&z| z > 1 && self.add(self.square(z), z) == 1)
            .ok_or_else(|| {
                Error::domain(format!(
                    "no cube root of unity subfield in degree {}",
                    self.n
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_irreducible_moduli() {
        assert_eq!(BinaryField::new(1).unwrap().modulus(), 0b10);
        assert_eq!(BinaryField::new(2).unwrap().modulus(), 0b111);
        assert_eq!(BinaryField::new(3).unwrap().modulus(), 0b1011);
        assert_eq!(BinaryField::new(4).unwrap().modulus(), 0b10011);
        assert!(BinaryField::new(0).is_err());
        assert!(BinaryField::new(25).is_err());
    }

    #[test]
    fn field_axioms_small() {
        for n in 1..=8 {
            let f = BinaryField::new(n).unwrap();
            for a in f.elements() {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "inverse in degree {n}");
                }
                assert_eq!(f.pow(a, f.size()), a, "Frobenius fixed point");
            }
        }
    }

    #[test]
    fn omega_exists_iff_even_degree() {
        for n in 1..=10 {
            let f = BinaryField::new(n).unwrap();
            let w = f.omega();
            if n % 2 == 0 {
                let w = w.unwrap();
                assert_eq!(f.add(f.add(f.square(w), w), 1), 0);
                assert_eq!(f.pow(w, 3), 1);
            } else {
                assert!(w.is_err());
            }
        }
    }
}
