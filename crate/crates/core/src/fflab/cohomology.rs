//! First cohomology of a cyclic p-power group acting on Z[i]/p^m by
//! multiplication, computed as ker(N)/im(D) for the norm element
//! N = 1 + beta + ... + beta^(p^m - 1) and the difference D = beta - 1.
//!
//! Two independent routes: Smith normal form on the rank-2 module (the
//! working path, valid well beyond enumeration range) and literal
//! enumeration of kernel and image (the desk-scale cross-check).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussInt;

/// Largest p^m the literal enumeration accepts.
pub const BRUTE_LIMIT: u64 = 10_000;

fn check_hypotheses(p: u64, m: u32, beta: &GaussInt) -> Result<u32> {
    if p % 4 != 3 || !crate::arith::is_prime(&p.into()) {
        return Err(Error::domain(format!(
            "{p} must be a prime congruent to 3 mod 4 (inert in Z[i])"
        )));
    }
    if m == 0 {
        return Err(Error::domain("m must be positive"));
    }
    let diff = beta.sub(&GaussInt::one());
    if diff.is_zero() {
        return Ok(m); // beta = 1: infinite depth, clamped by the level
    }
    let pb = BigInt::from(p);
    let mut j = 0u32;
    let (mut re, mut im) = (diff.re.clone(), diff.im.clone());
    while (&re % &pb).is_zero() && (&im % &pb).is_zero() {
        re /= &pb;
        im /= &pb;
        j += 1;
    }
    if j == 0 {
        return Err(Error::domain(
            "beta - 1 must be divisible by p for the cohomology computation",
        ));
    }
    Ok(j.min(m))
}

type Mat2 = [[BigInt; 2]; 2];

fn mat_of(re: &BigInt, im: &BigInt, q: &BigInt) -> Mat2 {
    let r = re.mod_floor(q);
    let i = im.mod_floor(q);
    [[r.clone(), (q - &i).mod_floor(q)], [i, r]]
}

/// Geometric sum 1 + b + ... + b^(count-1) and b^count, modulo q.
fn geometric_sum(b: &(BigInt, BigInt), count: &BigUint, q: &BigInt) -> ((BigInt, BigInt), (BigInt, BigInt)) {
    if count.is_zero() {
        return ((BigInt::zero(), BigInt::zero()), (BigInt::one(), BigInt::zero()));
    }
    let gmul = |a: &(BigInt, BigInt), c: &(BigInt, BigInt)| -> (BigInt, BigInt) {
        (
            (&a.0 * &c.0 - &a.1 * &c.1).mod_floor(q),
            (&a.0 * &c.1 + &a.1 * &c.0).mod_floor(q),
        )
    };
    let gadd = |a: &(BigInt, BigInt), c: &(BigInt, BigInt)| -> (BigInt, BigInt) {
        ((&a.0 + &c.0).mod_floor(q), (&a.1 + &c.1).mod_floor(q))
    };
    let (s_half, b_half) = geometric_sum(b, &(count >> 1), q);
    let one_plus = gadd(&(BigInt::one(), BigInt::zero()), &b_half);
    let mut s = gmul(&s_half, &one_plus);
    let mut bc = gmul(&b_half, &b_half);
    if count.is_odd() {
        s = gadd(&s, &bc);
        bc = gmul(&bc, b);
    }
    (s, bc)
}

/// Smith normal form of a 2x2 integer matrix: returns (s1, s2, Q) with
/// P*M*Q = diag(s1, s2), s1 | s2, s1, s2 >= 0, and Q unimodular.
fn snf2x2(m: &Mat2) -> (BigInt, BigInt, Mat2) {
    let mut a = m.clone();
    let mut q: Mat2 = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    let swap_rows = |a: &mut Mat2| a.swap(0, 1);
    let swap_cols = |a: &mut Mat2, q: &mut Mat2| {
        for r in a.iter_mut() {
            r.swap(0, 1);
        }
        for r in q.iter_mut() {
            r.swap(0, 1);
        }
    };
    loop {
        // Euclid down column 0 with row operations.
        while !a[1][0].is_zero() {
            if a[0][0].is_zero() {
                swap_rows(&mut a);
                continue;
            }
            let t = &a[1][0] / &a[0][0];
            for c in 0..2 {
                let sub = &t * &a[0][c];
                a[1][c] -= sub;
            }
            if !a[1][0].is_zero() {
                swap_rows(&mut a);
            }
        }
        // Euclid across row 0 with column operations, mirrored into Q.
        while !a[0][1].is_zero() {
            if a[0][0].is_zero() {
                swap_cols(&mut a, &mut q);
                continue;
            }
            let t = &a[0][1] / &a[0][0];
            for r in 0..2 {
                let sub_a = &t * &a[r][0];
                a[r][1] -= sub_a;
                let sub_q = &t * &q[r][0];
                q[r][1] -= sub_q;
            }
            if !a[0][1].is_zero() {
                swap_cols(&mut a, &mut q);
            }
        }
        if !a[1][0].is_zero() {
            continue; // column ops disturbed the first column
        }
        // Divisibility fix on diag(a00, a11).
        if !a[0][0].is_zero() && !(&a[1][1] % &a[0][0]).is_zero() {
            // fold row 1 into row 0 and restart
            for c in 0..2 {
                let add = a[1][c].clone();
                a[0][c] += add;
            }
            continue;
        }
        break;
    }
    // Sign normalisation via column negation (tracked) and row negation
    // (untracked).
    for c in 0..2 {
        if a[c][c].is_negative() {
            for r in 0..2 {
                a[r][c] = -a[r][c].clone();
                q[r][c] = -q[r][c].clone();
            }
        }
    }
    if a[0][0].is_zero() && !a[1][1].is_zero() {
        // order the diagonal so that s1 | s2 (zero divides only zero)
        swap_cols(&mut a, &mut q);
        swap_rows(&mut a);
    }
    (a[0][0].clone(), a[1][1].clone(), q)
}

fn det2(m: &Mat2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Invariant factors of H^1(Z/p^m, Z[i]/p^m) with 1 acting as
/// multiplication by beta, via Smith normal form on the rank-2 module.
pub fn h1_invariants(p: u64, m: u32, beta: &GaussInt) -> Result<(BigUint, BigUint)> {
    let _j = check_hypotheses(p, m, beta)?;
    let q = BigInt::from(p).pow(m);
    let count = BigUint::from(p).pow(m);

    let beta_mod = (beta.re.mod_floor(&q), beta.im.mod_floor(&q));
    let (n_elt, _) = geometric_sum(&beta_mod, &count, &q);
    let d_elt = (
        (&beta_mod.0 - BigInt::one()).mod_floor(&q),
        beta_mod.1.clone(),
    );

    let m_n = mat_of(&n_elt.0, &n_elt.1, &q);
    let m_d = mat_of(&d_elt.0, &d_elt.1, &q);

    let (s1, s2, qt) = snf2x2(&m_n);
    let t1 = &q / s1.gcd(&q);
    let t2 = &q / s2.gcd(&q);

    // Inverse of the unimodular transform.
    let det = det2(&qt);
    debug_assert!(det.clone().abs().is_one());
    let qinv: Mat2 = [
        [&qt[1][1] * &det, -(&qt[0][1] * &det)],
        [-(&qt[1][0] * &det), &qt[0][0] * &det],
    ];

    // Generators of im(D) + q Z^2 in the coordinates of the kernel lattice.
    let gens: [[BigInt; 4]; 2] = [
        [
            m_d[0][0].clone(),
            m_d[0][1].clone(),
            q.clone(),
            BigInt::zero(),
        ],
        [
            m_d[1][0].clone(),
            m_d[1][1].clone(),
            BigInt::zero(),
            q.clone(),
        ],
    ];
    let mut coords = [[BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()], [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]];
    for (r, t) in [(0usize, &t1), (1usize, &t2)] {
        for c in 0..4 {
            let raw = &qinv[r][0] * &gens[0][c] + &qinv[r][1] * &gens[1][c];
            let (quot, rem) = raw.div_rem(t);
            if !rem.is_zero() {
                return Err(Error::domain(
                    "internal: image generators left the kernel lattice",
                ));
            }
            coords[r][c] = quot;
        }
    }

    // Invariant factors of a 2x4 integer matrix: gcd of entries, and gcd of
    // the 2x2 minors divided by it.
    let mut g1 = BigInt::zero();
    for row in &coords {
        for e in row {
            g1 = g1.gcd(e);
        }
    }
    let mut g2 = BigInt::zero();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let minor = &coords[0][i] * &coords[1][j] - &coords[0][j] * &coords[1][i];
            g2 = g2.gcd(&minor);
        }
    }
    if g1.is_zero() {
        return Err(Error::domain("internal: quotient is not finite"));
    }
    let d1 = g1.to_biguint().unwrap();
    let d2 = (&g2 / &g1).to_biguint().unwrap();
    debug_assert!((&d2 % &d1).is_zero());
    Ok((d1, d2))
}

/// Same invariants by literal enumeration: the norm element by direct
/// summation, the kernel and image as explicit sets.  Desk-scale only.
pub fn h1_invariants_brute(p: u64, m: u32, beta: &GaussInt) -> Result<(u64, u64)> {
    let _j = check_hypotheses(p, m, beta)?;
    let q = p
        .checked_pow(m)
        .filter(|&q| q <= BRUTE_LIMIT)
        .ok_or_else(|| {
            Error::domain(format!("enumeration needs p^m <= {BRUTE_LIMIT}"))
        })?;
    let qb = BigInt::from(q);
    let b = (
        beta.re.mod_floor(&qb).to_u64().unwrap(),
        beta.im.mod_floor(&qb).to_u64().unwrap(),
    );
    let gmul = |a: (u64, u64), c: (u64, u64)| -> (u64, u64) {
        let q128 = q as u128;
        let re = (a.0 as u128 * c.0 as u128 + (q128 * q128 - a.1 as u128 * c.1 as u128)) % q128;
        let im = (a.0 as u128 * c.1 as u128 + a.1 as u128 * c.0 as u128) % q128;
        (re as u64, im as u64)
    };

    // N = sum of beta^k, literally.
    let mut n = (0u64, 0u64);
    let mut power = (1u64, 0u64);
    for _ in 0..q {
        n = ((n.0 + power.0) % q, (n.1 + power.1) % q);
        power = gmul(power, b);
    }
    let d = ((b.0 + q - 1) % q, b.1);

    let apply = |g: (u64, u64), x: u64, y: u64| -> (u64, u64) {
        let q128 = q as u128;
        let re = (g.0 as u128 * x as u128 + (q128 * q128 - g.1 as u128 * y as u128)) % q128;
        let im = (g.0 as u128 * y as u128 + g.1 as u128 * x as u128) % q128;
        (re as u64, im as u64)
    };

    let mut kernel = Vec::new();
    let mut image = Vec::new();
    for x in 0..q {
        for y in 0..q {
            if apply(n, x, y) == (0, 0) {
                kernel.push((x, y));
            }
            let im_el = apply(d, x, y);
            image.push(im_el.0 * q + im_el.1);
        }
    }
    image.sort_unstable();
    image.dedup();
    let in_image = |z: (u64, u64)| image.binary_search(&(z.0 * q + z.1)).is_ok();

    let quotient_order = kernel.len() as u64 / image.len() as u64;
    let mut e = 0u32;
    loop {
        let scale = p.pow(e);
        if kernel
            .iter()
            .all(|&(x, y)| in_image(((x as u128 * scale as u128 % q as u128) as u64, (y as u128 * scale as u128 % q as u128) as u64)))
        {
            break;
        }
        e += 1;
        assert!(e <= m, "exponent exceeds the module exponent");
    }
    let d2 = p.pow(e);
    debug_assert_eq!(quotient_order % d2, 0);
    Ok((quotient_order / d2, d2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussInt {
        GaussInt::new(re, im)
    }

    #[test]
    fn h1_examples() {
        assert_eq!(
            h1_invariants(3, 1, &g(4, 0)).unwrap(),
            (BigUint::from(3u32), BigUint::from(3u32))
        );
        // t = min{j, m} = min{1, 2} = 1
        assert_eq!(
            h1_invariants(3, 2, &g(4, 0)).unwrap(),
            (BigUint::from(3u32), BigUint::from(3u32))
        );
        assert_eq!(
            h1_invariants(7, 1, &g(1, 7)).unwrap(),
            (BigUint::from(7u32), BigUint::from(7u32))
        );
        // j = 2, m = 2
        assert_eq!(
            h1_invariants(3, 2, &g(10, 0)).unwrap(),
            (BigUint::from(9u32), BigUint::from(9u32))
        );
    }

    #[test]
    fn h1_brute_agrees() {
        let cases = [
            (3u64, 1u32, g(4, 0)),
            (3, 2, g(4, 0)),
            (3, 2, g(10, 0)),
            (3, 1, g(1, 3)),
            (7, 1, g(1, 7)),
            (7, 1, g(8, 0)),
            (7, 2, g(50, 0)),
            (11, 1, g(12, 0)),
        ];
        for (p, m, beta) in cases {
            let fast = h1_invariants(p, m, &beta).unwrap();
            let brute = h1_invariants_brute(p, m, &beta).unwrap();
            assert_eq!(
                (fast.0.to_u64().unwrap(), fast.1.to_u64().unwrap()),
                brute,
                "p = {p}, m = {m}, beta = {beta}"
            );
        }
    }

    #[test]
    fn h1_law_t_min_j_m() {
        // invariants are (p^t, p^t) with t = min(j, m)
        for p in [3u64, 7, 11] {
            for m in 1..=2u32 {
                for j in 1..=2u32 {
                    let shift = BigInt::from(p).pow(j);
                    let beta = GaussInt {
                        re: BigInt::one() + &shift,
                        im: BigInt::zero(),
                    };
                    let t = j.min(m);
                    let expect = BigUint::from(p).pow(t);
                    assert_eq!(
                        h1_invariants(p, m, &beta).unwrap(),
                        (expect.clone(), expect),
                        "p = {p}, m = {m}, j = {j}"
                    );
                }
            }
        }
    }

    #[test]
    fn h1_rejects_bad_hypotheses() {
        assert!(h1_invariants(5, 1, &g(6, 0)).is_err()); // 5 = 1 mod 4
        assert!(h1_invariants(3, 1, &g(2, 0)).is_err()); // j = 0
    }

    #[test]
    fn h1_beta_one_full_module() {
        // trivial action: H^1 = Z[i]/p^m
        assert_eq!(
            h1_invariants(3, 2, &g(1, 0)).unwrap(),
            (BigUint::from(9u32), BigUint::from(9u32))
        );
    }

    #[test]
    fn snf_small_cases() {
        let m: Mat2 = [
            [BigInt::from(2), BigInt::from(4)],
            [BigInt::from(6), BigInt::from(8)],
        ];
        let (s1, s2, _) = snf2x2(&m);
        assert_eq!((s1, s2), (BigInt::from(2), BigInt::from(4)));
        let zero: Mat2 = [
            [BigInt::zero(), BigInt::zero()],
            [BigInt::zero(), BigInt::zero()],
        ];
        let (s1, s2, _) = snf2x2(&zero);
        assert!(s1.is_zero() && s2.is_zero());
    }
}
