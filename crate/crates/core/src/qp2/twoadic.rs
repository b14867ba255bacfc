//! 2-adic numbers at finite precision: a valuation plus an odd unit residue
//! known modulo 2^prec.  Every operation computes the exact effective
//! precision of its result and refuses to continue below three bits, the
//! minimum needed to read off square classes.

use crate::error::{Error, Result};

/// Minimum unit precision (bits) for square-class decisions.
pub const MIN_PRECISION: u32 = 3;

/// Precision used for exactly known small rationals.
pub const EXACT_PRECISION: u32 = 58;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoAdic {
    val: i64,
    unit: u64,
    prec: u32,
}

impl TwoAdic {
    pub fn new(val: i64, unit: u64, prec: u32) -> Result<Self> {
        if prec < MIN_PRECISION || prec > EXACT_PRECISION {
            return Err(Error::Precision {
                effective: prec as i64,
            });
        }
        if unit % 2 == 0 {
            return Err(Error::domain("unit part must be odd"));
        }
        Ok(TwoAdic {
            val,
            unit: unit & mask(prec),
            prec,
        })
    }

    /// A nonzero integer, exactly.
    pub fn from_integer(n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("2-adic representation of zero"));
        }
        let val = n.trailing_zeros() as i64;
        let odd = n >> val;
        Ok(TwoAdic {
            val,
            unit: (odd as u64) & mask(EXACT_PRECISION),
            prec: EXACT_PRECISION,
        })
    }

    /// num / den for nonzero num, den.
    pub fn from_rational(num: i64, den: i64) -> Result<Self> {
        let n = TwoAdic::from_integer(num)?;
        let d = TwoAdic::from_integer(den)?;
        n.div(&d)
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn unit_mod8(&self) -> u8 {
        (self.unit & 7) as u8
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let unit = (self.unit as u128 * other.unit as u128) as u64 & mask(prec);
        TwoAdic {
            val: self.val + other.val,
            unit,
            prec,
        }
    }

    pub fn inv(&self) -> Self {
        // Newton iteration for the inverse of an odd unit modulo 2^prec;
        // wrapping u64 arithmetic is exact modulo 2^64.
        let mut x = 1u64;
        let mut bits = 1;
        while bits < self.prec {
            let prod = self.unit.wrapping_mul(x);
            x = x.wrapping_mul(2u64.wrapping_sub(prod));
            bits *= 2;
        }
        x &= mask(self.prec);
        debug_assert_eq!((self.unit as u128 * x as u128) as u64 & mask(self.prec), 1);
        TwoAdic {
            val: -self.val,
            unit: x,
            prec: self.prec,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()))
    }

    pub fn neg(&self) -> Self {
        TwoAdic {
            val: self.val,
            unit: self.unit.wrapping_neg() & mask(self.prec),
            prec: self.prec,
        }
    }

    /// Addition with exact precision accounting.  Equal valuations cancel:
    /// the result's valuation rises by the shared 2-power of the unit sum,
    /// and its precision falls by the same amount.  An error is returned
    /// when the sum is indistinguishable from zero at the working precision
    /// or when fewer than three unit bits survive.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let (lo, hi) = if self.val <= other.val {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.val - lo.val) as u32;
        if shift >= lo.prec {
            // The larger term is invisible at this precision.
            return Ok(*lo);
        }
        let prec = lo.prec.min(hi.prec + shift);
        let sum = (lo.unit.wrapping_add(hi.unit << shift)) & mask(prec);
        if shift > 0 {
            // Result stays at the lower valuation with an odd unit.
            return TwoAdic::new(lo.val, sum, prec).map_err(|_| Error::Precision {
                effective: prec as i64,
            });
        }
        // Equal valuations: the unit sum is even.
        if sum == 0 {
            return Err(Error::IndeterminateValuation { precision: prec });
        }
        let drop = sum.trailing_zeros();
        let new_prec = prec - drop;
        if new_prec < MIN_PRECISION {
            return Err(Error::Precision {
                effective: new_prec as i64,
            });
        }
        Ok(TwoAdic {
            val: lo.val + drop as i64,
            unit: (sum >> drop) & mask(new_prec),
            prec: new_prec,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// A unit is a square iff it is 1 mod 8; a general element also needs
    /// even valuation.
    pub fn is_square(&self) -> bool {
        self.val % 2 == 0 && self.unit_mod8() == 1
    }

    pub fn square_class(&self) -> SquareClass {
        SquareClass {
            val_parity: (self.val.rem_euclid(2)) as u8,
            unit_mod8: self.unit_mod8(),
        }
    }
}

impl std::fmt::Display for TwoAdic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "2^{} * ({} + O(2^{}))", self.val, self.unit, self.prec)
    }
}

fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// The square class of a nonzero 2-adic number: Q_2*/(Q_2*)^2 is determined
/// by the valuation parity and the unit modulo 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct SquareClass {
    pub val_parity: u8,
    pub unit_mod8: u8,
}

impl SquareClass {
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        SquareClass {
            val_parity: (self.val_parity + other.val_parity) % 2,
            unit_mod8: (self.unit_mod8 * other.unit_mod8) % 8,
        }
    }

    pub fn is_square(&self) -> bool {
        self.val_parity == 0 && self.unit_mod8 == 1
    }
}
