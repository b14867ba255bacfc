//! Exact integer kernel: primality, factorization, rational valuations.
//!
//! Primality is deterministic below 2^64 (fixed Miller-Rabin witness set) and
//! a Baillie-PSW combination (strong base-2 test plus a strong Lucas test)
//! above; no Baillie-PSW counterexample is known, and the test is conclusive
//! for every input this crate produces at desk scale.
//!
//! Factoring runs trial division up to 10^6 and then Brent's variant of
//! Pollard rho with a deterministic seed derived from the input, so repeated
//! runs produce identical results.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Iteration budget for Pollard rho, per composite cofactor.
pub const DEFAULT_RHO_BUDGET: u64 = 10_000_000;

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Multiset of prime factors.  Every key is prime and the product of
/// `prime^exponent` reassembles the factored absolute value.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    entries: BTreeMap<BigUint, u32>,
}

impl Factorization {
    fn push(&mut self, p: BigUint, k: u32) {
        debug_assert!(is_prime(&p), "non-prime key {p}");
        *self.entries.entry(p).or_insert(0) += k;
    }

    pub fn entries(&self) -> &BTreeMap<BigUint, u32> {
        &self.entries
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    /// Product of `prime^exponent` over all entries.
    pub fn reassemble(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, k) in &self.entries {
            acc *= p.pow(*k);
        }
        acc
    }

    /// The odd prime factors, ascending, for factors that fit in a `u64`.
    /// Returns an error if an odd factor exceeds `u64` range.
    pub fn odd_primes_u64(&self) -> Result<Vec<u64>> {
        let two = BigUint::from(2u32);
        let mut out = Vec::new();
        for p in self.entries.keys() {
            if *p == two {
                continue;
            }
            let v = p
                .to_u64()
                .ok_or_else(|| Error::domain(format!("prime factor {p} exceeds u64 range")))?;
            out.push(v);
        }
        Ok(out)
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (p, k) in &self.entries {
            if !first {
                write!(fm, " * ")?;
            }
            first = false;
            if *k == 1 {
                write!(fm, "{p}")?;
            } else {
                write!(fm, "{p}^{k}")?;
            }
        }
        if first {
            write!(fm, "1")?;
        }
        Ok(())
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Witness set deterministic for all n < 3.3 * 10^24, in particular all u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_strong_probable_prime_base2(n: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let two = BigUint::from(2u32);
    let mut x = two.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a / n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let mut a = a.mod_floor(&BigInt::from(n.clone()));
    let mut n = BigInt::from(n.clone());
    let mut t = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r: BigInt = &n % 8;
            let r = r.to_i64().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_i64().unwrap() == 3 && (&n % 4u32).to_i64().unwrap() == 3 {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &r * &r == *n
}

/// Strong Lucas probable-prime test with Selfridge parameters (method A).
fn is_strong_lucas_probable_prime(n: &BigUint) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    // Find D in 5, -7, 9, -11, ... with jacobi(D, n) = -1.
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                // gcd(|D|, n) > 1; composite unless n = |D|.
                return BigInt::from(n.clone()) == d.abs();
            }
            _ => {
                let two = BigInt::from(2);
                d = if d.is_positive() { -(d + two) } else { -(d - two) };
            }
        }
    }
    let n_int = BigInt::from(n.clone());
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4;

    let np1 = n + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let dd = &np1 >> s;

    let modn = |x: &BigInt| x.mod_floor(&n_int);
    let inv2 = (n + 1u32) >> 1; // inverse of 2 mod n, n odd
    let inv2 = BigInt::from(inv2);
    let halve = |x: &BigInt| modn(&(x * &inv2));

    // Binary ladder on the bits of dd for (U_k, V_k, Q^k).
    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = modn(&q);
    let bits = dd.bits();
    for i in (0..bits - 1).rev() {
        // double: k -> 2k
        u = modn(&(&u * &v));
        v = modn(&(&v * &v - 2 * &qk));
        qk = modn(&(&qk * &qk));
        if dd.bit(i) {
            // increment: 2k -> 2k+1
            let u_next = halve(&(&p * &u + &v));
            let v_next = halve(&(&d * &u + &p * &v));
            u = u_next;
            v = v_next;
            qk = modn(&(&qk * &q));
        }
    }

    if u.is_zero() {
        return true;
    }
    for _ in 0..s {
        if v.is_zero() {
            return true;
        }
        v = modn(&(&v * &v - 2 * &qk));
        qk = modn(&(&qk * &qk));
    }
    false
}

/// Primality test: deterministic for n < 2^64, Baillie-PSW above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    // n >= 2^64: trial by a few small primes, then BPSW.
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if (n % p).is_zero() {
            return false;
        }
    }
    is_strong_probable_prime_base2(n) && is_strong_lucas_probable_prime(n)
}

/// Primes up to `bound` inclusive, by sieve.
pub fn primes_upto(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| if b { Some(k as u64) } else { None })
        .collect()
}

/// Brent's cycle-finding variant of Pollard rho on u64, deterministic in
/// (n, c).  Returns a nontrivial factor or None when the budget runs out.
fn rho_brent_u64(n: u64, c: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut spent = 0u64;
    let m = 64u64;
    let (mut x, mut q, mut g) = (0u64, 1u64, 1u64);
    let mut r = 1u64;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(y);
                let diff = if x > y { x - y } else { y - x };
                q = mulmod(q, diff.max(1), n);
            }
            g = gcd_u64(q, n);
            k += lim;
            spent += lim;
            if spent > budget {
                return None;
            }
        }
        r <<= 1;
    }
    if g == n {
        // Backtrack one step at a time.
        loop {
            ys = f(ys);
            let diff = if x > ys { x - ys } else { ys - x };
            g = gcd_u64(diff.max(1), n);
            if g > 1 {
                break;
            }
            spent += 1;
            if spent > budget {
                return None;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Pollard rho (Brent) over BigUint for inputs beyond u64.
fn rho_brent_big(n: &BigUint, c: u64, budget: u64) -> Option<BigUint> {
    let cb = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &cb) % n;
    let mut y = BigUint::from(2u32);
    let mut spent = 0u64;
    let m = 128u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = y.clone();
    let mut r = 1u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                if !diff.is_zero() {
                    q = (&q * &diff) % n;
                }
            }
            g = q.gcd(n);
            k += lim;
            spent += lim;
            if spent > budget {
                return None;
            }
        }
        r <<= 1;
    }
    if g == *n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() && !g.is_zero() {
                break;
            }
            spent += 1;
            if spent > budget {
                return None;
            }
        }
    }
    if g == *n || g.is_one() {
        None
    } else {
        Some(g)
    }
}

/// Deterministic rho seed: n mod (2^61 - 1), folded into the polynomial
/// increment so results are byte-stable across runs.
fn rho_seed(n: &BigUint) -> u64 {
    const M61: u64 = (1 << 61) - 1;
    (n % BigUint::from(M61)).to_u64().unwrap_or(1).max(1)
}

/// Factor |n| by trial division to 10^6 and then deterministic Pollard rho.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    factor_with_budget(n, DEFAULT_RHO_BUDGET)
}

/// As [`factor`], with an explicit per-cofactor rho iteration budget.
pub fn factor_with_budget(n: &BigInt, budget: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("factor: argument must be nonzero"));
    }
    let mut out = Factorization::default();
    let mut rest = n.magnitude().clone();
    if rest.is_one() {
        return Ok(out);
    }

    // Trial division.
    for p in [2u64, 3, 5] {
        let pb = BigUint::from(p);
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            out.push(pb.clone(), 1);
        }
    }
    let mut cand = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6]; // increments coprime to 2,3,5
    let mut wi = 0usize;
    while cand <= TRIAL_DIVISION_BOUND {
        let cb = BigUint::from(cand);
        if &cb * &cb > rest {
            break;
        }
        while (&rest % &cb).is_zero() {
            rest /= &cb;
            out.push(cb.clone(), 1);
        }
        cand += wheel[wi];
        wi = (wi + 1) % wheel.len();
    }
    if rest.is_one() {
        return Ok(out);
    }

    // Split remaining cofactors with rho.
    let mut stack = vec![rest];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            out.push(c, 1);
            continue;
        }
        if is_perfect_square(&c) {
            let r = c.sqrt();
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let seed = rho_seed(&c);
        let mut found = None;
        for attempt in 0..24u64 {
            let cpar = 1 + (seed.wrapping_add(attempt.wrapping_mul(0x9E3779B97F4A7C15)) % 1_000_003);
            let d = if let Some(small) = c.to_u64() {
                rho_brent_u64(small, cpar, budget).map(BigUint::from)
            } else {
                rho_brent_big(&c, cpar, budget)
            };
            if let Some(d) = d {
                if !d.is_one() && d != c {
                    found = Some(d);
                    break;
                }
            } else {
                break; // budget ran out; retrying other c would double-spend
            }
        }
        match found {
            Some(d) => {
                stack.push(&c / &d);
                stack.push(d);
            }
            None => {
                return Err(Error::FactorBudget {
                    cofactor: c,
                    budget,
                });
            }
        }
    }
    debug_assert_eq!(out.reassemble(), n.magnitude().clone());
    Ok(out)
}

/// Exponent of the prime `p` in the nonzero rational `q` (negative allowed).
pub fn val_p(q: &BigRational, p: &BigUint) -> i64 {
    assert!(!q.is_zero(), "val_p: argument must be nonzero");
    assert!(is_prime(p), "val_p: modulus must be prime");
    let count = |mut n: BigUint| -> i64 {
        let mut v = 0i64;
        if n.is_zero() {
            unreachable!();
        }
        while (&n % p).is_zero() {
            n /= p;
            v += 1;
        }
        v
    };
    count(q.numer().magnitude().clone()) - count(q.denom().magnitude().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&big(2879)));
        assert!(!is_prime(&big(1)));
        assert!(!is_prime(&big(1_379_041))); // 479 * 2879
        assert!(is_prime(&big(479)));
        assert!(is_prime(&big(2)));
    }

    #[test]
    fn primality_large_inputs() {
        // 2^89 - 1 is a Mersenne prime; its square is composite.
        let m89 = (BigUint::one() << 89) - 1u32;
        assert!(is_prime(&m89));
        assert!(!is_prime(&(&m89 * &m89)));
        let m107 = (BigUint::one() << 107) - 1u32;
        assert!(is_prime(&m107));
        assert!(!is_prime(&(&m89 * &m107)));
    }

    #[test]
    fn factor_examples() {
        let f = factor(&BigInt::from(9)).unwrap();
        assert_eq!(f.entries().len(), 1);
        assert_eq!(f.exponent_of(&big(3)), 2);

        let f = factor(&BigInt::from(1_379_041)).unwrap();
        assert_eq!(f.exponent_of(&big(479)), 1);
        assert_eq!(f.exponent_of(&big(2879)), 1);

        let f = factor(&BigInt::from(48)).unwrap();
        assert_eq!(f.exponent_of(&big(2)), 4);
        assert_eq!(f.exponent_of(&big(3)), 1);

        // Negative input factors its absolute value.
        let f = factor(&BigInt::from(-48)).unwrap();
        assert_eq!(f.reassemble(), big(48));
    }

    #[test]
    fn factor_beyond_trial_division() {
        // Two primes above the trial-division bound.
        let a = 19_407_431u64;
        let b = 235_824_427_957u64;
        assert!(is_prime(&big(a)));
        assert!(is_prime(&big(b)));
        let n = BigInt::from(a) * BigInt::from(b);
        let f = factor(&n).unwrap();
        assert_eq!(f.exponent_of(&big(a)), 1);
        assert_eq!(f.exponent_of(&big(b)), 1);
    }

    #[test]
    fn factor_budget_error() {
        let a = 19_407_431u64;
        let b = 235_824_427_957u64;
        let n = BigInt::from(a) * BigInt::from(b);
        match factor_with_budget(&n, 4) {
            Err(Error::FactorBudget { .. }) => {}
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn factor_zero_rejected() {
        assert!(factor(&BigInt::zero()).is_err());
    }

    #[test]
    fn val_p_examples() {
        let q = BigRational::from_u64(48).unwrap();
        assert_eq!(val_p(&q, &big(3)), 1);
        let q = BigRational::new(BigInt::one(), BigInt::from(4));
        assert_eq!(val_p(&q, &big(2)), -2);
        let q = BigRational::from_u64(3).unwrap();
        assert_eq!(val_p(&q, &big(5)), 0);
    }

    #[test]
    fn is_prime_matches_sieve_to_a_million() {
        let bound = 1_000_000u64;
        let primes = primes_upto(bound);
        let mut next = primes.iter().copied().peekable();
        for n in 0..=bound {
            let expected = match next.peek() {
                Some(&p) if p == n => {
                    next.next();
                    true
                }
                _ => false,
            };
            assert_eq!(is_prime_u64(n), expected, "disagreement at {n}");
        }
    }
}
