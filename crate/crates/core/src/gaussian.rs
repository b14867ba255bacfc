//! Exact arithmetic in Z[i]: primary prime generators, places of Q(i) above
//! odd rational primes, and normalised valuations.
//!
//! An element coprime to 1+i has exactly one primary associate, i.e. one
//! associate congruent to 1 modulo (1+i)^3.  For a split rational prime
//! p = 1 mod 4 the two conjugate prime ideals above p therefore have
//! well-defined primary generators, conjugate to each other; we return the
//! one with positive imaginary part.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// re^2 + im^2; nonnegative, zero only at zero.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussInt {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussInt {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussInt {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> Self {
        GaussInt {
            re: -&self.re,
            im: -&self.im,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = GaussInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact quotient self / divisor, or an error when the division does not
    /// come out exactly in Z[i].
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::domain("exact_div: division by zero"));
        }
        let n = divisor.norm();
        let num = self.mul(&divisor.conj());
        let (qr, rr) = num_integer::div_rem(num.re.clone(), n.clone());
        let (qi, ri) = num_integer::div_rem(num.im.clone(), n.clone());
        if rr.is_zero() && ri.is_zero() {
            Ok(GaussInt { re: qr, im: qi })
        } else {
            Err(Error::NotDivisible {
                numerator: self.to_string(),
                divisor: divisor.to_string(),
            })
        }
    }

    pub fn is_divisible_by(&self, divisor: &Self) -> bool {
        self.exact_div(divisor).is_ok()
    }
}

impl std::fmt::Display for GaussInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return match self.im.to_i64() {
                Some(1) => write!(f, "i"),
                Some(-1) => write!(f, "-i"),
                _ => write!(f, "{}i", self.im),
            };
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        let mag = self.im.abs();
        if mag.is_one() {
            write!(f, "{}{}i", self.re, sign)
        } else {
            write!(f, "{}{}{}i", self.re, sign, mag)
        }
    }
}

/// (1+i)^3 = -2+2i, the modulus of the primary condition.
fn one_plus_i_cubed() -> GaussInt {
    GaussInt::new(-2, 2)
}

/// True iff x - 1 is divisible by (1+i)^3.
pub fn is_primary(x: &GaussInt) -> bool {
    let shifted = GaussInt {
        re: &x.re - 1,
        im: x.im.clone(),
    };
    shifted.is_zero() || shifted.is_divisible_by(&one_plus_i_cubed())
}

fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Both primary generators above the split prime p, as (positive-imaginary,
/// its conjugate).
fn primary_pair(p: u64) -> Result<(GaussInt, GaussInt)> {
    if p % 4 != 1 || !crate::arith::is_prime(&p.into()) {
        return Err(Error::domain(format!(
            "primary_generator: {p} is not a prime congruent to 1 mod 4"
        )));
    }
    for a in 1..=isqrt_u64(p) {
        let b2 = p - a * a;
        let b = isqrt_u64(b2);
        if b == 0 || b * b != b2 {
            continue;
        }
        // The two conjugate ideals are (a+bi) and (a-bi); each has exactly
        // one primary associate.
        let mut primaries = Vec::new();
        for base in [GaussInt::new(a as i64, b as i64), GaussInt::new(a as i64, -(b as i64))] {
            let mut found = Vec::new();
            for unit in [
                GaussInt::one(),
                GaussInt::new(0, 1),
                GaussInt::new(-1, 0),
                GaussInt::new(0, -1),
            ] {
                let cand = base.mul(&unit);
                if is_primary(&cand) {
                    found.push(cand);
                }
            }
            assert_eq!(found.len(), 1, "associate scan must find one primary");
            primaries.push(found.pop().unwrap());
        }
        let (x, y) = (primaries.remove(0), primaries.remove(0));
        debug_assert_eq!(x.conj(), y);
        return Ok(if x.im.is_positive() { (x, y) } else { (y, x) });
    }
    Err(Error::domain(format!(
        "primary_generator: no two-square decomposition found for {p}"
    )))
}

/// The primary prime generator above p = 1 mod 4 with positive imaginary
/// part; its conjugate generates the other ideal above p.
pub fn primary_generator(p: u64) -> Result<GaussInt> {
    primary_pair(p).map(|(x, _)| x)
}

/// A place of Q(i) above an odd rational prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaussPlace {
    /// ell = 3 mod 4; the ideal (ell) with residue degree 2.
    Inert { ell: u64 },
    /// ell = 1 mod 4; one of the two conjugate ideals, residue degree 1.
    Split { ell: u64, generator: GaussInt },
}

impl GaussPlace {
    pub fn ell(&self) -> u64 {
        match self {
            GaussPlace::Inert { ell } => *ell,
            GaussPlace::Split { ell, .. } => *ell,
        }
    }

    pub fn generator(&self) -> GaussInt {
        match self {
            GaussPlace::Inert { ell } => GaussInt::new(*ell as i64, 0),
            GaussPlace::Split { generator, .. } => generator.clone(),
        }
    }

    pub fn residue_degree(&self) -> u32 {
        match self {
            GaussPlace::Inert { .. } => 2,
            GaussPlace::Split { .. } => 1,
        }
    }
}

impl std::fmt::Display for GaussPlace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GaussPlace::Inert { ell } => write!(f, "({ell}) inert"),
            GaussPlace::Split { ell, generator } => write!(f, "({generator}) above {ell}"),
        }
    }
}

/// The places of Q(i) above an odd prime: one inert place for ell = 3 mod 4,
/// the two conjugate split places for ell = 1 mod 4.  The split generator is
/// canonicalised to a + bi with a, b > 0 and a odd; the second place carries
/// the conjugate.
pub fn places_above(ell: u64) -> Result<Vec<GaussPlace>> {
    if ell == 2 {
        return Err(Error::domain("places_above: 2 ramifies in Q(i)"));
    }
    if !crate::arith::is_prime(&ell.into()) {
        return Err(Error::domain(format!("places_above: {ell} is not prime")));
    }
    if ell % 4 == 3 {
        return Ok(vec![GaussPlace::Inert { ell }]);
    }
    for a in (1..=isqrt_u64(ell)).step_by(2) {
        let b2 = ell - a * a;
        let b = isqrt_u64(b2);
        if b > 0 && b * b == b2 {
            let lam = GaussInt::new(a as i64, b as i64);
            let conj = lam.conj();
            return Ok(vec![
                GaussPlace::Split {
                    ell,
                    generator: lam,
                },
                GaussPlace::Split {
                    ell,
                    generator: conj,
                },
            ]);
        }
    }
    unreachable!("every prime 1 mod 4 is a sum of two squares")
}

/// The normalised valuation of x at the place v: the largest k such that
/// generator^k divides x.
pub fn gauss_val(x: &GaussInt, v: &GaussPlace) -> u32 {
    assert!(!x.is_zero(), "gauss_val: argument must be nonzero");
    let gen = v.generator();
    let mut cur = x.clone();
    let mut val = 0u32;
    loop {
        match cur.exact_div(&gen) {
            Ok(q) => {
                cur = q;
                val += 1;
            }
            Err(_) => return val,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_upto;

    #[test]
    fn ring_op_examples() {
        let x = GaussInt::new(-1, 2);
        assert_eq!(x.conj(), GaussInt::new(-1, -2));
        assert_eq!(GaussInt::new(3, 2).norm(), BigInt::from(13));
        let q = GaussInt::new(-2, 2).exact_div(&GaussInt::new(1, 1)).unwrap();
        assert_eq!(q, GaussInt::new(0, 2));
        // ((-1+2i) - 1) / (1+i)^3 = 1
        let shifted = GaussInt::new(-2, 2);
        assert_eq!(
            shifted.exact_div(&GaussInt::new(-2, 2)).unwrap(),
            GaussInt::one()
        );
        assert!(GaussInt::new(1, 1)
            .exact_div(&GaussInt::new(2, 0))
            .is_err());
    }

    #[test]
    fn primary_examples() {
        assert!(is_primary(&GaussInt::new(-1, 2)));
        assert!(!is_primary(&GaussInt::new(2, 1)));
        assert!(is_primary(&GaussInt::one()));
        // among the associates of norm 5 exactly the one is primary
        let assoc = [
            GaussInt::new(2, 1),
            GaussInt::new(-2, -1),
            GaussInt::new(-1, 2),
            GaussInt::new(1, -2),
        ];
        let primaries: Vec<_> = assoc.iter().filter(|x| is_primary(x)).collect();
        assert_eq!(primaries, vec![&GaussInt::new(-1, 2)]);
    }

    #[test]
    fn primary_generator_examples() {
        assert_eq!(primary_generator(5).unwrap(), GaussInt::new(-1, 2));
        assert_eq!(primary_generator(13).unwrap(), GaussInt::new(3, 2));
        assert_eq!(primary_generator(17).unwrap(), GaussInt::new(1, 4));
        assert!(primary_generator(7).is_err());
        assert!(primary_generator(2).is_err());
    }

    #[test]
    fn primary_uniqueness_scan() {
        // Every split prime below 10^4: each ideal above it has exactly one
        // primary associate (asserted inside primary_pair), and the two are
        // conjugate.
        for p in primes_upto(10_000) {
            if p % 4 == 1 {
                let pi = primary_generator(p).unwrap();
                assert_eq!(pi.norm(), BigInt::from(p));
                assert!(is_primary(&pi));
                assert!(is_primary(&pi.conj()));
                assert!(pi.im.is_positive());
            }
        }
    }

    #[test]
    fn places_examples() {
        assert_eq!(places_above(3).unwrap(), vec![GaussPlace::Inert { ell: 3 }]);
        let p5 = places_above(5).unwrap();
        assert_eq!(p5.len(), 2);
        assert_eq!(p5[0].generator(), GaussInt::new(1, 2));
        assert_eq!(p5[1].generator(), GaussInt::new(1, -2));
        for v in &p5 {
            assert_eq!(v.generator().norm(), BigInt::from(5));
        }
        assert_eq!(places_above(7).unwrap(), vec![GaussPlace::Inert { ell: 7 }]);
        assert!(places_above(2).is_err());
        assert!(places_above(9).is_err());
    }

    #[test]
    fn gauss_val_examples() {
        let inert3 = GaussPlace::Inert { ell: 3 };
        assert_eq!(gauss_val(&GaussInt::new(0, 48), &inert3), 1);
        let split5 = &places_above(5).unwrap()[0];
        assert_eq!(gauss_val(&GaussInt::new(0, 4), split5), 0);
        assert_eq!(gauss_val(&GaussInt::new(-2, 2), &inert3), 0);
    }

    #[test]
    fn valuation_is_additive() {
        let places: Vec<GaussPlace> = [3u64, 5, 7, 13]
            .iter()
            .flat_map(|&l| places_above(l).unwrap())
            .collect();
        let xs = [
            GaussInt::new(3, 6),
            GaussInt::new(-1, 2),
            GaussInt::new(15, 0),
            GaussInt::new(2, 3),
            GaussInt::new(0, 21),
        ];
        for a in &xs {
            for b in &xs {
                let ab = a.mul(b);
                for v in &places {
                    assert_eq!(
                        gauss_val(&ab, v),
                        gauss_val(a, v) + gauss_val(b, v),
                        "at {v} for {a} * {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn valuations_account_for_norm() {
        use crate::arith::val_p;
        use num_rational::BigRational;
        let xs = [
            GaussInt::new(3, 6),
            GaussInt::new(45, 0),
            GaussInt::new(7, 21),
            GaussInt::new(2, 11),
        ];
        for x in &xs {
            for l in [3u64, 5, 7, 11, 13] {
                let total: u32 = places_above(l)
                    .unwrap()
                    .iter()
                    .map(|v| v.residue_degree() * gauss_val(x, v))
                    .sum();
                let norm_val = val_p(
                    &BigRational::from_integer(x.norm()),
                    &num_bigint::BigUint::from(l),
                );
                assert_eq!(total as i64, norm_val, "norm valuation at {l} for {x}");
            }
        }
    }
}
