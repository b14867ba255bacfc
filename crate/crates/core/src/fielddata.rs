//! Data model for the base field and the surface: coefficients, per-place
//! ramification and valuation data, and the Galois exponent used by the
//! bound machinery.  Place data is derived automatically for Q, Q(i) and
//! real or imaginary quadratic fields with rational coefficients; other
//! number fields supply their places and exponent explicitly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{factor, is_prime, val_p};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldDesc {
    /// The rational numbers.
    Rationals,
    /// Q(i) with rational coefficients.
    GaussianRationals,
    /// Q(sqrt(d)) for squarefree d, with rational coefficients.
    Quadratic(i64),
    /// An arbitrary number field of the given degree; places and exponent
    /// are user-supplied.
    Abstract { degree: u32 },
}

impl std::fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldDesc::Rationals => write!(f, "Q"),
            FieldDesc::GaussianRationals => write!(f, "Q(i)"),
            FieldDesc::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
            FieldDesc::Abstract { degree } => write!(f, "abstract degree {degree}"),
        }
    }
}

/// Ramification and coefficient-valuation data at one place above p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceData {
    pub p: u64,
    /// Ramification index e(v/p) >= 1.
    pub e: u32,
    /// Residue degree f(v/p) >= 1.
    pub f: u32,
    /// Normalised valuations of the four coefficients at v.
    pub vals: [i64; 4],
}

impl PlaceData {
    pub fn val_sum(&self) -> i64 {
        self.vals.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub field: FieldDesc,
    /// The four nonzero coefficients, for fields with rational coefficients.
    pub coefficients: Option<[BigRational; 4]>,
    /// The exponent of the relevant Galois group, or any positive multiple.
    pub exponent: u32,
    /// Explicit place data (required for abstract fields).
    pub places: Vec<PlaceData>,
    pub probes: Option<Vec<u64>>,
    pub search_bound: Option<u64>,
}

/// One place per prime, with e = f = 1 and the rational valuations of the
/// coefficients.
pub fn places_for_q(coeffs: &[BigRational; 4], primes: &[u64]) -> Vec<PlaceData> {
    primes
        .iter()
        .map(|&p| {
            let pb = BigUint::from(p);
            let mut vals = [0i64; 4];
            for (i, c) in coeffs.iter().enumerate() {
                vals[i] = val_p(c, &pb);
            }
            PlaceData {
                p,
                e: 1,
                f: 1,
                vals,
            }
        })
        .collect()
}

fn legendre(a: i64, p: u64) -> i32 {
    debug_assert!(p % 2 == 1);
    let pb = BigInt::from(p);
    let am = BigInt::from(a).mod_floor(&pb);
    if am.is_zero() {
        return 0;
    }
    let e = BigUint::from((p - 1) / 2);
    let r = am.to_biguint().unwrap().modpow(&e, &BigUint::from(p));
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn is_squarefree(d: i64) -> Result<bool> {
    let f = factor(&BigInt::from(d))?;
    Ok(f.entries().values().all(|&e| e == 1))
}

/// Places of Q(sqrt(d)) above the given odd primes, for rational
/// coefficients: p | d ramifies (e = 2, doubled valuations), otherwise the
/// Kronecker symbol decides split (two places) versus inert (f = 2).
pub fn places_for_quadratic(
    d: i64,
    coeffs: &[BigRational; 4],
    primes: &[u64],
) -> Result<Vec<PlaceData>> {
    if d == 0 || d == 1 {
        return Err(Error::domain("quadratic field needs d not in {0, 1}"));
    }
    if !is_squarefree(d)? {
        return Err(Error::domain(format!("{d} is not squarefree")));
    }
    let mut out = Vec::new();
    for &p in primes {
        if p == 2 {
            return Err(Error::domain("places above 2 are never required"));
        }
        let pb = BigUint::from(p);
        let mut vals = [0i64; 4];
        for (i, c) in coeffs.iter().enumerate() {
            vals[i] = val_p(c, &pb);
        }
        if d.unsigned_abs() % p == 0 {
            out.push(PlaceData {
                p,
                e: 2,
                f: 1,
                vals: vals.map(|v| 2 * v),
            });
        } else if legendre(d, p) == 1 {
            out.push(PlaceData {
                p,
                e: 1,
                f: 1,
                vals,
            });
            out.push(PlaceData {
                p,
                e: 1,
                f: 1,
                vals,
            });
        } else {
            out.push(PlaceData {
                p,
                e: 1,
                f: 2,
                vals,
            });
        }
    }
    Ok(out)
}

fn is_perfect_power(n: &BigUint, k: u32) -> bool {
    if n.is_zero() {
        return true;
    }
    let r = n.nth_root(k);
    r.pow(k) == *n
}

fn is_rational_power(r: &BigRational, k: u32) -> bool {
    r.is_positive()
        && is_perfect_power(r.numer().magnitude(), k)
        && is_perfect_power(r.denom().magnitude(), k)
}

/// True iff r is the square of a rational.
pub fn is_rational_square(r: &BigRational) -> bool {
    is_rational_power(r, 2)
}

/// The order of the nonzero rational r in Q(i)* modulo fourth powers:
/// 1 for r = t^4 or r = -4 t^4 (the rational fourth powers of Q(i)),
/// 2 for r = +-t^2 (the rational squares of Q(i)), else 4.
pub fn order_modulo_fourth_powers(r: &BigRational) -> u32 {
    assert!(!r.is_zero());
    if is_rational_power(r, 4) {
        return 1;
    }
    if r.is_negative() {
        let quarter = -r / BigRational::from_integer(BigInt::from(4));
        if is_rational_power(&quarter, 4) {
            return 1;
        }
    }
    if is_rational_power(r, 2) || (r.is_negative() && is_rational_power(&-r, 2)) {
        return 2;
    }
    4
}

/// Exponent of the Galois group attached to a surface over Q: the order of
/// abcd in Q(i)* modulo fourth powers.
pub fn galois_exponent_q(coeffs: &[BigRational; 4]) -> u32 {
    let product = coeffs.iter().fold(BigRational::one(), |acc, c| acc * c);
    order_modulo_fourth_powers(&product)
}

fn coefficient_product(coeffs: &[BigRational; 4]) -> BigRational {
    coeffs.iter().fold(BigRational::one(), |acc, c| acc * c)
}

impl SurfaceSpec {
    /// A surface over Q with integer or rational coefficients; the exponent
    /// and place data are derived.
    pub fn over_q(coeffs: [BigRational; 4]) -> Result<Self> {
        Self::build(FieldDesc::Rationals, Some(coeffs), None, Vec::new(), None, None)
    }

    pub fn over_q_ints(coeffs: [i64; 4]) -> Result<Self> {
        Self::over_q(coeffs.map(|c| BigRational::from_integer(BigInt::from(c))))
    }

    /// A surface over Q(sqrt(d)) with rational coefficients.
    pub fn over_quadratic(d: i64, coeffs: [BigRational; 4]) -> Result<Self> {
        Self::build(
            FieldDesc::Quadratic(d),
            Some(coeffs),
            None,
            Vec::new(),
            None,
            None,
        )
    }

    pub fn over_quadratic_ints(d: i64, coeffs: [i64; 4]) -> Result<Self> {
        Self::over_quadratic(d, coeffs.map(|c| BigRational::from_integer(BigInt::from(c))))
    }

    pub fn abstract_field(degree: u32, exponent: u32, places: Vec<PlaceData>) -> Result<Self> {
        Self::build(
            FieldDesc::Abstract { degree },
            None,
            Some(exponent),
            places,
            None,
            None,
        )
    }

    fn build(
        field: FieldDesc,
        coefficients: Option<[BigRational; 4]>,
        exponent: Option<u32>,
        places: Vec<PlaceData>,
        probes: Option<Vec<u64>>,
        search_bound: Option<u64>,
    ) -> Result<Self> {
        // Normalise Quadratic(-1) to Q(i).
        let field = match field {
            FieldDesc::Quadratic(-1) => FieldDesc::GaussianRationals,
            other => other,
        };
        if let Some(cs) = &coefficients {
            for (i, c) in cs.iter().enumerate() {
                if c.is_zero() {
                    return Err(Error::schema(
                        format!("coefficients[{i}]"),
                        "zero coefficient",
                    ));
                }
            }
        }
        for (i, pl) in places.iter().enumerate() {
            if pl.e < 1 || pl.f < 1 {
                return Err(Error::schema(
                    format!("places[{i}]"),
                    "e and f must be at least 1",
                ));
            }
            if pl.p == 2 || !is_prime(&pl.p.into()) {
                return Err(Error::schema(
                    format!("places[{i}].p"),
                    "places are indexed by odd primes",
                ));
            }
        }
        let exponent = match (&field, exponent) {
            (_, Some(n)) if n >= 1 => n,
            (_, Some(_)) => {
                return Err(Error::schema("N", "exponent must be positive"));
            }
            (FieldDesc::Abstract { .. }, None) => {
                return Err(Error::schema("N", "N required for abstract fields"));
            }
            (FieldDesc::Rationals | FieldDesc::GaussianRationals, None) => {
                let cs = coefficients.as_ref().ok_or_else(|| {
                    Error::schema("coefficients", "coefficients required for this field")
                })?;
                galois_exponent_q(cs)
            }
            (FieldDesc::Quadratic(_), None) => {
                let cs = coefficients.as_ref().ok_or_else(|| {
                    Error::schema("coefficients", "coefficients required for this field")
                })?;
                // The group gains at most one factor of two from sqrt(d);
                // a multiple of the true exponent stays sound downstream.
                galois_exponent_q(cs).lcm(&2)
            }
        };
        match &field {
            FieldDesc::Abstract { .. } => {
                if coefficients.is_some() {
                    return Err(Error::schema(
                        "coefficients",
                        "abstract fields carry valuations in `places`, not coefficients",
                    ));
                }
            }
            _ => {
                if coefficients.is_none() {
                    return Err(Error::schema(
                        "coefficients",
                        "coefficients required for this field",
                    ));
                }
            }
        }
        let spec = SurfaceSpec {
            field,
            coefficients,
            exponent,
            places,
            probes,
            search_bound,
        };
        // Explicit places for derivable fields must agree with derivation.
        if !matches!(spec.field, FieldDesc::Abstract { .. }) && !spec.places.is_empty() {
            for pl in &spec.places {
                let derived = spec.derive_places(pl.p)?;
                if !derived.contains(pl) {
                    return Err(Error::schema(
                        "places",
                        format!(
                            "place {{p: {}, e: {}, f: {}}} disagrees with the derived data",
                            pl.p, pl.e, pl.f
                        ),
                    ));
                }
            }
        }
        Ok(spec)
    }

    fn derive_places(&self, p: u64) -> Result<Vec<PlaceData>> {
        let cs = self
            .coefficients
            .as_ref()
            .expect("derivable fields carry coefficients");
        match &self.field {
            FieldDesc::Rationals => Ok(places_for_q(cs, &[p])),
            FieldDesc::GaussianRationals => places_for_quadratic(-1, cs, &[p]),
            FieldDesc::Quadratic(d) => places_for_quadratic(*d, cs, &[p]),
            FieldDesc::Abstract { .. } => unreachable!(),
        }
    }

    /// All places above the odd prime p, derived for rational-coefficient
    /// fields and looked up (with a coverage check) for abstract fields.
    pub fn places_above(&self, p: u64) -> Result<Vec<PlaceData>> {
        if p == 2 || !is_prime(&p.into()) {
            return Err(Error::domain(format!("{p} is not an odd prime")));
        }
        match &self.field {
            FieldDesc::Abstract { degree } => {
                let found: Vec<PlaceData> = self
                    .places
                    .iter()
                    .filter(|pl| pl.p == p)
                    .cloned()
                    .collect();
                if found.is_empty() {
                    return Err(Error::MissingPlaces(p));
                }
                let covered: u32 = found.iter().map(|pl| pl.e * pl.f).sum();
                if covered != *degree {
                    return Err(Error::domain(format!(
                        "places above {p} cover e*f = {covered}, expected the degree {degree}"
                    )));
                }
                Ok(found)
            }
            _ => self.derive_places(p),
        }
    }

    /// Odd primes at which some coefficient has a nonzero valuation (for
    /// abstract fields: primes of the listed places with a nonzero entry).
    pub fn support_primes(&self) -> Result<Vec<u64>> {
        match &self.field {
            FieldDesc::Abstract { .. } => {
                let mut ps: Vec<u64> = self
                    .places
                    .iter()
                    .filter(|pl| pl.vals.iter().any(|&v| v != 0))
                    .map(|pl| pl.p)
                    .collect();
                ps.sort_unstable();
                ps.dedup();
                Ok(ps)
            }
            _ => {
                let cs = self.coefficients.as_ref().unwrap();
                let mut ps = Vec::new();
                for c in cs {
                    for n in [c.numer().magnitude(), c.denom().magnitude()] {
                        let f = factor(&BigInt::from(n.clone()))?;
                        ps.extend(f.odd_primes_u64()?);
                    }
                }
                ps.sort_unstable();
                ps.dedup();
                Ok(ps)
            }
        }
    }

    pub fn effective_probes(&self) -> Vec<u64> {
        self.probes
            .clone()
            .unwrap_or_else(crate::brauer::default_probes)
    }

    pub fn effective_search_bound(&self) -> u64 {
        self.search_bound
            .unwrap_or(crate::brauer::DEFAULT_SEARCH_BOUND)
    }

    pub fn coefficient_product(&self) -> Option<BigRational> {
        self.coefficients.as_ref().map(coefficient_product)
    }

    /// Canonical structured form, re-parsable by [`parse_spec`].
    pub fn to_schema_value(&self) -> Value {
        let mut map = serde_json::Map::new();
        let field = match &self.field {
            FieldDesc::Rationals => Value::String("Q".into()),
            FieldDesc::GaussianRationals => Value::String("Q(i)".into()),
            FieldDesc::Quadratic(d) => serde_json::json!({ "quadratic": d }),
            FieldDesc::Abstract { degree } => serde_json::json!({ "abstract": { "degree": degree } }),
        };
        map.insert("field".into(), field);
        if let Some(cs) = &self.coefficients {
            let arr: Vec<Value> = cs
                .iter()
                .map(|c| {
                    if c.denom().is_one() {
                        match c.numer().to_i64() {
                            Some(n) => Value::from(n),
                            None => Value::String(c.to_string()),
                        }
                    } else {
                        Value::String(format!("{}/{}", c.numer(), c.denom()))
                    }
                })
                .collect();
            map.insert("coefficients".into(), Value::Array(arr));
        }
        map.insert("N".into(), Value::from(self.exponent));
        if !self.places.is_empty() {
            map.insert(
                "places".into(),
                serde_json::to_value(&self.places).expect("places serialize"),
            );
        }
        if let Some(ps) = &self.probes {
            map.insert("probes".into(), serde_json::to_value(ps).unwrap());
        }
        if let Some(b) = self.search_bound {
            map.insert("search_bound".into(), Value::from(b));
        }
        Value::Object(map)
    }
}

fn parse_rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::schema(path, "coefficients must be integers or \"num/den\" strings"))?;
            Ok(BigRational::from_integer(BigInt::from(i)))
        }
        Value::String(s) => {
            let parts: Vec<&str> = s.split('/').collect();
            let parse_int = |t: &str| -> Result<BigInt> {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::schema(path, format!("not an integer: `{t}`")))
            };
            match parts.as_slice() {
                [n] => Ok(BigRational::from_integer(parse_int(n)?)),
                [n, d] => {
                    let den = parse_int(d)?;
                    if den.is_zero() {
                        return Err(Error::schema(path, "zero denominator"));
                    }
                    Ok(BigRational::new(parse_int(n)?, den))
                }
                _ => Err(Error::schema(path, "expected `num` or `num/den`")),
            }
        }
        _ => Err(Error::schema(path, "expected an integer or a string")),
    }
}

fn parse_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| Error::schema(path, "expected a nonnegative integer"))
}

/// Parse and validate a structured surface description.
///
/// Schema: `{"field": "Q" | "Q(i)" | {"quadratic": d} | {"abstract":
/// {"degree": n}}, "coefficients": [a, b, c, d], "N": n?, "places":
/// [{p, e, f, vals: [va, vb, vc, vd]}]?, "probes": [p, ...]?,
/// "search_bound": b?}`.
pub fn parse_spec(text: &str) -> Result<SurfaceSpec> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::schema("<root>", e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::schema("<root>", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "field" | "coefficients" | "N" | "places" | "probes" | "search_bound"
        ) {
            return Err(Error::schema(key, "unknown key"));
        }
    }

    let field = match obj.get("field") {
        None => return Err(Error::schema("field", "missing")),
        Some(Value::String(s)) if s == "Q" => FieldDesc::Rationals,
        Some(Value::String(s)) if s == "Q(i)" => FieldDesc::GaussianRationals,
        Some(Value::Object(m)) if m.contains_key("quadratic") => {
            let d = m["quadratic"]
                .as_i64()
                .ok_or_else(|| Error::schema("field.quadratic", "expected an integer"))?;
            FieldDesc::Quadratic(d)
        }
        Some(Value::Object(m)) if m.contains_key("abstract") => {
            let degree = m["abstract"]
                .get("degree")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::schema("field.abstract.degree", "expected a positive integer"))?;
            if degree == 0 {
                return Err(Error::schema("field.abstract.degree", "degree must be positive"));
            }
            FieldDesc::Abstract {
                degree: degree as u32,
            }
        }
        Some(_) => {
            return Err(Error::schema(
                "field",
                "expected \"Q\", \"Q(i)\", {\"quadratic\": d} or {\"abstract\": {\"degree\": n}}",
            ))
        }
    };

    let coefficients = match obj.get("coefficients") {
        None => None,
        Some(Value::Array(arr)) => {
            if arr.len() != 4 {
                return Err(Error::schema("coefficients", "expected exactly four entries"));
            }
            let mut cs = Vec::with_capacity(4);
            for (i, v) in arr.iter().enumerate() {
                cs.push(parse_rational(v, &format!("coefficients[{i}]"))?);
            }
            Some([
                cs[0].clone(),
                cs[1].clone(),
                cs[2].clone(),
                cs[3].clone(),
            ])
        }
        Some(_) => return Err(Error::schema("coefficients", "expected an array")),
    };

    let exponent = match obj.get("N") {
        None => None,
        Some(v) => {
            let n = parse_u64(v, "N")?;
            Some(u32::try_from(n).map_err(|_| Error::schema("N", "out of range"))?)
        }
    };

    let places = match obj.get("places") {
        None => Vec::new(),
        Some(v) => serde_json::from_value::<Vec<PlaceData>>(v.clone())
            .map_err(|e| Error::schema("places", e.to_string()))?,
    };

    let probes = match obj.get("probes") {
        None => None,
        Some(Value::Array(arr)) => {
            let mut ps = Vec::new();
            for (i, v) in arr.iter().enumerate() {
                let p = parse_u64(v, &format!("probes[{i}]"))?;
                if p % 4 != 1 || !is_prime(&p.into()) {
                    return Err(Error::schema(
                        format!("probes[{i}]"),
                        "probes must be primes congruent to 1 mod 4",
                    ));
                }
                ps.push(p);
            }
            Some(ps)
        }
        Some(_) => return Err(Error::schema("probes", "expected an array")),
    };

    let search_bound = obj
        .get("search_bound")
        .map(|v| parse_u64(v, "search_bound"))
        .transpose()?;

    SurfaceSpec::build(field, coefficients, exponent, places, probes, search_bound)
}
