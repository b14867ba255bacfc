//! Finite-field verification lab: the supersingular curve over F_2 and its
//! symmetries, cyclic-group cohomology of Z[i]/p^m, and the exact threshold
//! inequalities.

pub mod cohomology;
pub mod curve;
pub mod field2;
pub mod thresholds;

pub use cohomology::{h1_invariants, h1_invariants_brute};
pub use curve::{
    check_automorphisms, check_automorphisms_of, group_structure_p_part, point_count,
    predicted_count_f4, CurveOverF2,
};
pub use field2::BinaryField;
pub use thresholds::{cone_threshold, hasse_weil_threshold, swan_bound, SwanBound};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaussian::GaussInt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SuiteReport {
    pub checks: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(CheckLine {
            name: name.to_string(),
            pass,
            detail,
        });
    }
}

/// The full property suite over the given curve; the canonical curve must
/// pass every check, and a corrupted curve is expected to fail.
pub fn verification_suite(curve: CurveOverF2) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();

    // Point-count identity over F_{4^k}, k = 1..6.
    let mut ok = true;
    let mut detail = String::new();
    for k in 1..=6u32 {
        let counted = curve::CurveGroup::new(2 * k, curve)?.points().len() as i64;
        let formula = predicted_count_f4(k);
        let squared = ((-2i64).pow(k) - 1).pow(2);
        if counted != formula || counted != squared {
            ok = false;
            detail = format!("k = {k}: counted {counted}, formula {formula}");
            break;
        }
    }
    if ok {
        detail = "counts match 4^k + 1 - 2(-2)^k for k <= 6".into();
    }
    report.push("point-count identity", ok, detail);

    // Equal invariant factors of every odd-primary part, even degrees <= 12.
    let mut ok = true;
    let mut detail = String::new();
    'outer: for n in [2u32, 4, 6, 8, 10, 12] {
        let g = curve::CurveGroup::new(n, curve)?;
        let order = g.points().len() as u64;
        let factors = crate::arith::factor(&num_bigint::BigInt::from(order))?;
        for p in factors.odd_primes_u64()? {
            let (k1, k2) = curve::group_structure_p_part_of(n, p, curve)?;
            if k1 != k2 {
                ok = false;
                detail = format!("degree {n}, p = {p}: factors ({k1}, {k2})");
                break 'outer;
            }
        }
    }
    if ok {
        detail = "every odd p-part is (Z/p^k)^2 for even degrees <= 12".into();
    }
    report.push("group-structure law", ok, detail);

    // Degree-p extension step: 3-part (k, k) -> (k+1, k+1) from F_4 to F_64.
    let base = curve::group_structure_p_part_of(2, 3, curve);
    let ext = curve::group_structure_p_part_of(6, 3, curve);
    let (ok, detail) = match (base, ext) {
        (Ok((a1, a2)), Ok((b1, b2))) => (
            b1 == a1 + 1 && b2 == a2 + 1,
            format!("3-part ({a1}, {a2}) over F_4 grows to ({b1}, {b2}) over F_64"),
        ),
        (b, e) => (false, format!("structure computation failed: {b:?} / {e:?}")),
    };
    report.push("degree-3 extension step", ok, detail);

    // Automorphism identities on all points, degrees 2, 4, 6.
    let mut ok = true;
    let mut detail = String::new();
    for n in [2u32, 4, 6] {
        match check_automorphisms_of(n, curve) {
            Ok(true) => {}
            Ok(false) => {
                ok = false;
                detail = format!("identities fail over degree {n}");
                break;
            }
            Err(e) => {
                ok = false;
                detail = e.to_string();
                break;
            }
        }
    }
    if ok {
        detail = "sigma^2 = rho^2 = -1 and sigma rho = -rho sigma pointwise".into();
    }
    report.push("automorphisms", ok, detail);

    // Cohomology law: (p^t, p^t) with t = min(j, m), SNF versus enumeration.
    let mut ok = true;
    let mut detail = String::new();
    'h1: for p in [3u64, 7, 11] {
        for m in 1..=2u32 {
            for j in 1..=2u32 {
                let shift = num_bigint::BigInt::from(p).pow(j);
                let betas = [
                    GaussInt {
                        re: num_bigint::BigInt::from(1) + &shift,
                        im: num_bigint::BigInt::from(0),
                    },
                    GaussInt {
                        re: num_bigint::BigInt::from(1),
                        im: shift.clone(),
                    },
                ];
                for beta in betas {
                    let t = j.min(m);
                    let expect = num_bigint::BigUint::from(p).pow(t);
                    let fast = h1_invariants(p, m, &beta)?;
                    if fast != (expect.clone(), expect.clone()) {
                        ok = false;
                        detail = format!("p = {p}, m = {m}, j = {j}: got {fast:?}");
                        break 'h1;
                    }
                    let brute = h1_invariants_brute(p, m, &beta)?;
                    if (fast.0.to_u64(), fast.1.to_u64()) != (Some(brute.0), Some(brute.1)) {
                        ok = false;
                        detail = format!("p = {p}, m = {m}: SNF {fast:?} != enumeration {brute:?}");
                        break 'h1;
                    }
                }
            }
        }
    }
    if ok {
        detail = "H^1 = (Z/p^t)^2 with t = min(j, m); SNF agrees with enumeration".into();
    }
    report.push("cohomology law", ok, detail);

    // Threshold spot values.
    let ok = hasse_weil_threshold(1024, 3, 2)
        && !cone_threshold(169, 3)
        && cone_threshold(289, 3)
        && swan_bound(1, 2, 1).admissible() == vec![0, 2]
        && swan_bound(1, 5, 1).admissible() == vec![0];
    report.push(
        "threshold spot values",
        ok,
        "exact integer comparisons on pinned cases".into(),
    );

    Ok(report)
}
