//! The supersingular curve y^2 + y = x^3 + x^2 + x + 1 over F_2: exhaustive
//! point counts, group structure of the odd-primary parts, and the two extra
//! automorphisms available over F_4.

use crate::error::{Error, Result};
use crate::fflab::field2::BinaryField;

/// A curve y^2 + y = x^3 + a2 x^2 + a4 x + a6 with coefficients in F_2.
/// The vanishing x-derivative coefficient (no xy term) makes it
/// supersingular in characteristic 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveOverF2 {
    pub a2: u64,
    pub a4: u64,
    pub a6: u64,
}

impl CurveOverF2 {
    /// y^2 + y = x^3 + x^2 + x + 1.
    pub fn canonical() -> Self {
        CurveOverF2 { a2: 1, a4: 1, a6: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine(u64, u64),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

pub struct CurveGroup {
    pub field: BinaryField,
    pub curve: CurveOverF2,
}

impl CurveGroup {
    pub fn new(n: u32, curve: CurveOverF2) -> Result<Self> {
        Ok(CurveGroup {
            field: BinaryField::new(n)?,
            curve,
        })
    }

    fn rhs(&self, x: u64) -> u64 {
        let f = &self.field;
        let x2 = f.square(x);
        let x3 = f.mul(x2, x);
        f.add(
            f.add(x3, f.mul(self.curve.a2, x2)),
            f.add(f.mul(self.curve.a4, x), self.curve.a6),
        )
    }

    pub fn on_curve(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let f = &self.field;
                f.add(f.square(*y), *y) == self.rhs(*x)
            }
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(*x, y ^ 1),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let f = &self.field;
        match (p, q) {
            (Point::Infinity, _) => *q,
            (_, Point::Infinity) => *p,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => {
                if x1 == x2 {
                    if *y2 == y1 ^ 1 {
                        return Point::Infinity;
                    }
                    // doubling; slope (x1^2 + a4) / a3 with a3 = 1
                    let lam = f.add(f.square(*x1), self.curve.a4);
                    let x3 = f.add(f.square(lam), self.curve.a2);
                    let y3 = f.add(f.add(f.mul(lam, f.add(x3, *x1)), *y1), 1);
                    Point::Affine(x3, y3)
                } else {
                    let lam = f.mul(f.add(*y1, *y2), f.inv(f.add(*x1, *x2)));
                    let x3 = f.add(
                        f.add(f.square(lam), self.curve.a2),
                        f.add(*x1, *x2),
                    );
                    let y3 = f.add(f.add(f.mul(lam, f.add(x3, *x1)), *y1), 1);
                    Point::Affine(x3, y3)
                }
            }
        }
    }

    pub fn scalar_mul(&self, k: u64, p: &Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = *p;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// All points, infinity first, then ascending (x, y).
    pub fn points(&self) -> Vec<Point> {
        let f = &self.field;
        let mut out = vec![Point::Infinity];
        // y^2 + y is 2-to-1 onto its image; build the preimage table once.
        let mut preimages: Vec<Vec<u64>> = vec![Vec::new(); f.size() as usize];
        for y in f.elements() {
            let v = f.add(f.square(y), y);
            preimages[v as usize].push(y);
        }
        for x in f.elements() {
            for &y in &preimages[self.rhs(x) as usize] {
                out.push(Point::Affine(x, y));
            }
        }
        out
    }

    pub fn order_of(&self, p: &Point, group_order: u64) -> u64 {
        debug_assert!(self.scalar_mul(group_order, p).is_infinity());
        let mut d = group_order;
        let factors = crate::arith::factor(&num_bigint::BigInt::from(group_order))
            .expect("desk-scale group order factors");
        for (q, _) in factors.entries() {
            let q: u64 = q.try_into().expect("small prime");
            while d % q == 0 && self.scalar_mul(d / q, p).is_infinity() {
                d /= q;
            }
        }
        d
    }
}

/// Exhaustive projective point count of the canonical curve over F_{2^n}.
pub fn point_count(n: u32) -> Result<u64> {
    if n == 0 || n > 12 {
        return Err(Error::domain("point counts are desk-scale for n in 1..=12"));
    }
    let g = CurveGroup::new(n, CurveOverF2::canonical())?;
    Ok(g.points().len() as u64)
}

/// The count predicted over F_{4^k}: 4^k + 1 - 2(-2)^k = ((-2)^k - 1)^2.
pub fn predicted_count_f4(k: u32) -> i64 {
    let a = (-2i64).pow(k);
    4i64.pow(k) + 1 - 2 * a
}

/// Invariant factors (p^k1, p^k2), k1 <= k2, of the p-primary part of the
/// point group over F_{2^n}, by enumeration and order statistics.  Requires
/// even n and p dividing the group order.
pub fn group_structure_p_part(n: u32, p: u64) -> Result<(u32, u32)> {
    group_structure_p_part_of(n, p, CurveOverF2::canonical())
}

pub fn group_structure_p_part_of(n: u32, p: u64, curve: CurveOverF2) -> Result<(u32, u32)> {
    if n % 2 != 0 || n == 0 || n > 12 {
        return Err(Error::domain(format!(
            "group structure is computed for even degrees 2..=12, got {n}"
        )));
    }
    if p % 2 == 0 || !crate::arith::is_prime(&p.into()) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    let g = CurveGroup::new(n, curve)?;
    let points = g.points();
    let order = points.len() as u64;
    if order % p != 0 {
        return Err(Error::domain(format!(
            "{p} does not divide the group order {order}"
        )));
    }
    let mut total = 0u32;
    let mut m = order;
    while m % p == 0 {
        m /= p;
        total += 1;
    }
    // Elliptic curve groups have at most two invariant factors, so the
    // p-part is determined by its size and exponent.
    let mut k2 = 0u32;
    for pt in &points {
        let ord = g.order_of(pt, order);
        let mut v = 0u32;
        let mut o = ord;
        while o % p == 0 {
            o /= p;
            v += 1;
        }
        k2 = k2.max(v);
    }
    let k1 = total - k2;
    debug_assert!(k1 <= k2);
    Ok((k1, k2))
}

/// The order-2 symmetries beyond translation: sigma (x, y) -> (x+1, x+y+w)
/// and rho (x, y) -> (x+w, w^2 x+y) for w a primitive cube root of unity.
/// Verifies pointwise on all points that both preserve the curve, fix
/// infinity, are group homomorphisms, square to negation and anticommute.
pub fn check_automorphisms(n: u32) -> Result<bool> {
    check_automorphisms_of(n, CurveOverF2::canonical())
}

pub fn check_automorphisms_of(n: u32, curve: CurveOverF2) -> Result<bool> {
    if n % 2 != 0 {
        return Err(Error::domain(format!(
            "no cube root of unity subfield in degree {n}"
        )));
    }
    if n == 0 || n > 12 {
        return Err(Error::domain("automorphism checks are desk-scale for n <= 12"));
    }
    let g = CurveGroup::new(n, curve)?;
    let f = g.field;
    let w = f.omega()?;
    let w2 = f.square(w);

    let sigma = |p: &Point| -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(f.add(*x, 1), f.add(f.add(*x, *y), w)),
        }
    };
    let rho = |p: &Point| -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(f.add(*x, w), f.add(f.mul(w2, *x), *y)),
        }
    };

    let points = g.points();
    for p in &points {
        if !g.on_curve(&sigma(p)) || !g.on_curve(&rho(p)) {
            return Ok(false);
        }
        // sigma^2 = rho^2 = -1
        if sigma(&sigma(p)) != g.neg(p) || rho(&rho(p)) != g.neg(p) {
            return Ok(false);
        }
        // sigma rho = -rho sigma
        if sigma(&rho(p)) != g.neg(&rho(&sigma(p))) {
            return Ok(false);
        }
    }
    for p in &points {
        for q in &points {
            let s = g.add(p, q);
            if sigma(&s) != g.add(&sigma(p), &sigma(q)) {
                return Ok(false);
            }
            if rho(&s) != g.add(&rho(p), &rho(q)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
