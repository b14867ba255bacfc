//! The Hilbert symbol over Q_2, by the classical closed form and by an
//! independent exhaustive oracle.
//!
//! For a = 2^alpha u, b = 2^beta w with u, w odd units, the symbol is
//! (-1)^(eps(u) eps(w) + alpha omega(w) + beta omega(u)) with
//! eps(u) = (u - 1)/2 and omega(u) = (u^2 - 1)/8 modulo 2.  The oracle
//! instead searches for primitive solutions of z^2 = a x^2 + b y^2 modulo
//! 2^9, which is exact once valuations are normalised into {0, 1}.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::qp2::twoadic::{SquareClass, TwoAdic};

fn eps(u: u8) -> u32 {
    ((u as u32 - 1) / 2) % 2
}

fn omega(u: u8) -> u32 {
    ((u as u32 * u as u32 - 1) / 8) % 2
}

/// Hilbert symbol from square-class data alone.
pub fn hilbert_symbol_classes(a: &SquareClass, b: &SquareClass) -> i32 {
    let s = eps(a.unit_mod8) * eps(b.unit_mod8)
        + a.val_parity as u32 * omega(b.unit_mod8)
        + b.val_parity as u32 * omega(a.unit_mod8);
    if s % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Hilbert symbol (a, b)_2 of two nonzero finite-precision 2-adic numbers.
pub fn hilbert_symbol(a: &TwoAdic, b: &TwoAdic) -> i32 {
    hilbert_symbol_classes(&a.square_class(), &b.square_class())
}

fn class_of_rational(x: &BigRational) -> SquareClass {
    assert!(!x.is_zero(), "hilbert symbol of zero");
    let two = num_bigint::BigUint::from(2u32);
    let v = crate::arith::val_p(x, &two);
    // odd unit mod 8: strip the 2-power from numerator times denominator
    let strip = |n: &BigInt| -> BigInt {
        let mut n = n.abs();
        while n.is_even() {
            n /= 2;
        }
        n
    };
    let sign = if x.is_negative() { -1i64 } else { 1 };
    let u = (strip(x.numer()) * strip(x.denom()) * BigInt::from(sign)).mod_floor(&BigInt::from(8));
    SquareClass {
        val_parity: v.rem_euclid(2) as u8,
        unit_mod8: u.to_u8().expect("residue fits"),
    }
}

/// Hilbert symbol of two nonzero rationals via the closed form.
pub fn hilbert_symbol_rational(a: &BigRational, b: &BigRational) -> i32 {
    hilbert_symbol_classes(&class_of_rational(a), &class_of_rational(b))
}

const ORACLE_MOD_BITS: u32 = 9;
const ORACLE_MOD: u32 = 1 << ORACLE_MOD_BITS;

/// +1 iff z^2 = a x^2 + b y^2 has a nontrivial Q_2-solution, decided by a
/// brute-force search for primitive solutions modulo 2^9.
///
/// Valuations are first normalised into {0, 1} by multiplying by fourth
/// powers of 2 (squares, so the symbol is unchanged); a Hensel argument then
/// makes the modulus 2^9 exact: a primitive solution has an odd coordinate
/// whose derivative 2ax (or 2by, 2z) has valuation at most 2, and
/// 9 > 2 * 2 + 1 suffices to lift.
pub fn hilbert_symbol_oracle(a: &BigRational, b: &BigRational) -> i32 {
    let reduce = |x: &BigRational| -> u32 {
        // x times a square of 2: valuation folded to val mod 2
        let two = num_bigint::BigUint::from(2u32);
        let v = crate::arith::val_p(x, &two).rem_euclid(2) as u32;
        let c = class_of_rational(x);
        // any representative with the same square class works
        ((1u32 << v) * c.unit_mod8 as u32) % ORACLE_MOD
    };
    let am = reduce(a);
    let bm = reduce(b);

    let m = ORACLE_MOD as usize;
    let sq: Vec<u32> = (0..m as u32).map(|i| (i * i) % ORACLE_MOD).collect();
    let mut a_odd = vec![false; m];
    let mut a_even = vec![false; m];
    let mut b_odd = vec![false; m];
    let mut b_even = vec![false; m];
    let mut z_odd = vec![false; m];
    let mut z_even = vec![false; m];
    for i in 0..m {
        let (ai, bi) = (
            (am as u64 * sq[i] as u64 % ORACLE_MOD as u64) as usize,
            (bm as u64 * sq[i] as u64 % ORACLE_MOD as u64) as usize,
        );
        if i % 2 == 1 {
            a_odd[ai] = true;
            b_odd[bi] = true;
            z_odd[sq[i] as usize] = true;
        } else {
            a_even[ai] = true;
            b_even[bi] = true;
            z_even[sq[i] as usize] = true;
        }
    }
    let z_any: Vec<bool> = (0..m).map(|i| z_odd[i] || z_even[i]).collect();
    let b_any: Vec<bool> = (0..m).map(|i| b_odd[i] || b_even[i]).collect();

    for s in 0..m {
        if !a_odd[s] && !a_even[s] {
            continue;
        }
        for t in 0..m {
            let sum = (s + t) % m;
            // primitive: at least one of x, y, z odd
            if a_odd[s] && b_any[t] && z_any[sum] {
                return 1;
            }
            if a_even[s] && b_odd[t] && z_any[sum] {
                return 1;
            }
            if a_even[s] && b_even[t] && z_odd[sum] {
                return 1;
            }
        }
    }
    -1
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(hilbert_symbol_rational(&rat(-1), &rat(-1)), -1);
        assert_eq!(hilbert_symbol_rational(&rat(1), &rat(-10)), 1);
        assert_eq!(hilbert_symbol_rational(&rat(2), &rat(7)), 1); // 9 = 2 + 7
        assert_eq!(hilbert_symbol_rational(&rat(5), &rat(-1)), 1); // 4 = 5 - 1
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(hilbert_symbol_oracle(&rat(-1), &rat(-1)), -1);
        assert_eq!(hilbert_symbol_oracle(&rat(2), &rat(7)), 1);
        assert_eq!(hilbert_symbol_oracle(&rat(5), &rat(-1)), 1);
    }

    #[test]
    fn closed_form_matches_oracle_on_all_classes() {
        // all square-class representatives times valuations 0..3
        let units = [1i64, 3, 5, 7, -1, -3, -5, -7];
        let mut pairs = 0;
        for &u in &units {
            for &w in &units {
                for va in 0..4i64 {
                    for vb in 0..4i64 {
                        let a = rat(u * (1 << va));
                        let b = rat(w * (1 << vb));
                        assert_eq!(
                            hilbert_symbol_rational(&a, &b),
                            hilbert_symbol_oracle(&a, &b),
                            "a = {a}, b = {b}"
                        );
                        pairs += 1;
                    }
                }
            }
        }
        assert!(pairs >= 64);
    }

    #[test]
    fn symbol_on_two_adics() {
        let a = TwoAdic::from_integer(-1).unwrap();
        assert_eq!(hilbert_symbol(&a, &a), -1);
        let b = TwoAdic::from_integer(2).unwrap();
        let c = TwoAdic::from_integer(7).unwrap();
        assert_eq!(hilbert_symbol(&b, &c), 1);
    }

    #[test]
    fn bilinearity_symmetry_and_self_negation() {
        // deterministic pseudorandom sample
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..1000 {
            let pick = |r: u64| -> i64 {
                let unit = [1i64, 3, 5, 7, -1, -3, -5, -7][(r % 8) as usize];
                let v = ((r >> 3) % 4) as u32;
                unit * (1i64 << v)
            };
            let a = rat(pick(next()));
            let b1 = rat(pick(next()));
            let b2 = rat(pick(next()));
            let lhs = hilbert_symbol_rational(&a, &(&b1 * &b2));
            let rhs = hilbert_symbol_rational(&a, &b1) * hilbert_symbol_rational(&a, &b2);
            assert_eq!(lhs, rhs, "bilinearity at a = {a}, b1 = {b1}, b2 = {b2}");
            assert_eq!(
                hilbert_symbol_rational(&a, &b1),
                hilbert_symbol_rational(&b1, &a)
            );
            assert_eq!(hilbert_symbol_rational(&a, &-&a), 1);
        }
    }
}
