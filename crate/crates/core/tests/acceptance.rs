//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use quartic_core::brauer::{
    annihilating_exponent, candidate_superset, depth_from_kernels, congruence_depth,
    CandidateStatus, ProbePrime,
};
use quartic_core::criteria::{combined_verdict, constancy_set_complement, p_group_witness, VerdictStatus};
use quartic_core::fflab::curve::CurveGroup;
use quartic_core::fflab::{h1_invariants, h1_invariants_brute, CurveOverF2};
use quartic_core::fielddata::{PlaceData, SurfaceSpec};
use quartic_core::gaussian::GaussInt;
use quartic_core::qp2::{
    hilbert_symbol_oracle, hilbert_symbol_rational, verify_kummer_surface,
};

fn verdict_line(n: u32, pass: bool, what: &str, t: Instant) {
    println!(
        "criterion {n}: {} - {what} ({} ms)",
        if pass { "PASS" } else { "FAIL" },
        t.elapsed().as_millis()
    );
    assert!(pass, "criterion {n} failed: {what}");
}

fn probes(ps: &[u64]) -> Vec<ProbePrime> {
    ps.iter().map(|&p| ProbePrime::new(p).unwrap()).collect()
}

#[test]
fn criterion_1_exponent_bound_reproduction() {
    let t = Instant::now();
    // Candidate set from probe 5 alone: the odd prime factors of the norm.
    let single = candidate_superset(40, &probes(&[5])).unwrap();
    let from_norm: BTreeSet<u64> = single
        .candidates
        .keys()
        .copied()
        .filter(|&l| l != 5)
        .collect();
    let expected: BTreeSet<u64> = [3u64, 7, 19, 41, 79, 479, 2879].into_iter().collect();
    let set_ok = from_norm == expected;

    // With probes {5, 13, 17} and search bound 100 the annihilating
    // exponent is 3 * 5^2 * 7 * 19 * 41 = 408975.
    let (bound, report) = annihilating_exponent(40, &probes(&[5, 13, 17]), 100).unwrap();
    let bound_ok = bound == BigUint::from(408_975u64)
        && report.surviving() == vec![3, 5, 7, 19, 41];

    let in_time = t.elapsed().as_secs_f64() < 5.0;
    verdict_line(
        1,
        set_ok && bound_ok && in_time,
        "exponent bound 3 * 5^2 * 7 * 19 * 41 at N = 40 with probe-5 candidates {3,7,19,41,79,479,2879}",
        t,
    );
}

#[test]
fn criterion_2_depth_oracle_equivalence() {
    let t = Instant::now();
    let mut checked = 0u32;
    let mut mismatches = Vec::new();
    for p in [5u64, 13, 17] {
        let probe = ProbePrime::new(p).unwrap();
        for m in 1..=6u32 {
            for ell in [3u64, 5, 7, 11, 13] {
                if ell == p {
                    continue;
                }
                let mut n_max = 0u32;
                while ell.pow(n_max + 1) <= 10_000 {
                    n_max += 1;
                }
                let formula = congruence_depth(&probe, m, ell).unwrap();
                let kernel = depth_from_kernels(&probe, m, ell, n_max).unwrap();
                let agree = if formula <= n_max {
                    kernel == Some(formula)
                } else {
                    kernel.is_none()
                };
                if !agree {
                    mismatches.push((p, m, ell, formula, kernel));
                }
                checked += 1;
            }
        }
    }
    let in_time = t.elapsed().as_secs_f64() < 30.0;
    verdict_line(
        2,
        mismatches.is_empty() && checked == 78 && in_time,
        &format!("valuation formula matches kernel definition on {checked} configurations"),
        t,
    );
}

#[test]
fn criterion_3_point_count_identity() {
    let t = Instant::now();
    let mut ok = true;
    for k in 1..=6u32 {
        let counted = quartic_core::fflab::point_count(2 * k).unwrap() as i64;
        let first = 4i64.pow(k) + 1 - 2 * (-2i64).pow(k);
        let second = ((-2i64).pow(k) - 1).pow(2);
        ok &= counted == first && counted == second;
    }
    let in_time = t.elapsed().as_secs_f64() < 60.0;
    verdict_line(
        3,
        ok && in_time,
        "exhaustive counts over F_{4^k} equal ((-2)^k - 1)^2 for k = 1..6",
        t,
    );
}

#[test]
fn criterion_4_group_structure_law() {
    let t = Instant::now();
    let mut ok = true;
    for n in [2u32, 4, 6, 8, 10, 12] {
        let g = CurveGroup::new(n, CurveOverF2::canonical()).unwrap();
        let order = g.points().len() as u64;
        let factors =
            quartic_core::arith::factor(&num_bigint::BigInt::from(order)).unwrap();
        for p in factors.odd_primes_u64().unwrap() {
            let (k1, k2) = quartic_core::fflab::group_structure_p_part(n, p).unwrap();
            ok &= k1 == k2;
        }
    }
    ok &= quartic_core::fflab::group_structure_p_part(2, 3).unwrap() == (1, 1);
    ok &= quartic_core::fflab::group_structure_p_part(6, 3).unwrap() == (2, 2);
    verdict_line(
        4,
        ok,
        "odd p-parts are (Z/p^k)^2 up to degree 12; 3-part grows (3,3) -> (9,9) from F_4 to F_64",
        t,
    );
}

#[test]
fn criterion_5_cohomology_law() {
    let t = Instant::now();
    let mut ok = true;
    for p in [3u64, 7, 11] {
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
                    GaussInt {
                        re: num_bigint::BigInt::from(1) + &shift,
                        im: shift.clone(),
                    },
                ];
                for beta in betas {
                    let texp = j.min(m);
                    let expect = BigUint::from(p).pow(texp);
                    let fast = h1_invariants(p, m, &beta).unwrap();
                    ok &= fast == (expect.clone(), expect.clone());
                    let brute = h1_invariants_brute(p, m, &beta).unwrap();
                    ok &= (fast.0.to_u64().unwrap(), fast.1.to_u64().unwrap()) == brute;
                }
            }
        }
    }
    verdict_line(
        5,
        ok,
        "H^1 invariants are (p^t, p^t) with t = min(j, m); SNF route equals enumeration",
        t,
    );
}

#[test]
fn criterion_6_hilbert_symbol() {
    let t = Instant::now();
    let rat = |n: i64| num_rational::BigRational::from_integer(num_bigint::BigInt::from(n));
    let units = [1i64, 3, 5, 7, -1, -3, -5, -7];
    let mut pairs = 0u32;
    let mut ok = true;
    for &u in &units {
        for &w in &units {
            for va in 0..4 {
                for vb in 0..4 {
                    let a = rat(u << va);
                    let b = rat(w << vb);
                    ok &= hilbert_symbol_rational(&a, &b) == hilbert_symbol_oracle(&a, &b);
                    pairs += 1;
                }
            }
        }
    }

    // bilinearity, symmetry and (a, -a) = 1 on 1000 deterministic samples
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..1000 {
        let pick = |r: u64| -> i64 {
            let unit = [1i64, 3, 5, 7, -1, -3, -5, -7][(r % 8) as usize];
            unit << ((r >> 3) % 4)
        };
        let a = rat(pick(next()));
        let b1 = rat(pick(next()));
        let b2 = rat(pick(next()));
        ok &= hilbert_symbol_rational(&a, &(&b1 * &b2))
            == hilbert_symbol_rational(&a, &b1) * hilbert_symbol_rational(&a, &b2);
        ok &= hilbert_symbol_rational(&a, &b1) == hilbert_symbol_rational(&b1, &a);
        ok &= hilbert_symbol_rational(&a, &-&a) == 1;
    }
    let in_time = t.elapsed().as_secs_f64() < 10.0;
    verdict_line(
        6,
        ok && pairs >= 64 && in_time,
        &format!("closed form = oracle on {pairs} pairs; bilinearity/symmetry/(a,-a) on 1000 samples"),
        t,
    );
}

#[test]
fn criterion_7_kummer_verification() {
    let t = Instant::now();
    let r12 = verify_kummer_surface(8, 12).unwrap();
    let r16 = verify_kummer_surface(8, 16).unwrap();
    let ok = r12.is_clean()
        && r12.violations.is_empty()
        && r12.semantics() == r16.semantics();
    let in_time = t.elapsed().as_secs_f64() < 300.0;
    verdict_line(
        7,
        ok && in_time,
        "surface check clean at 12 bits and stable at 16 bits",
        t,
    );
}

#[test]
fn criterion_8_end_to_end_verdicts() {
    let t = Instant::now();
    let probes = [5u64, 13, 17];

    let holds_spec = SurfaceSpec::over_q_ints([1, 1, 1, 2]).unwrap();
    let v1a = combined_verdict(&holds_spec, &probes, 100).unwrap();
    let v1b = combined_verdict(&holds_spec, &probes, 100).unwrap();
    let holds_ok = v1a.status.holds() && v1a == v1b && !v1a.reasons.is_empty();

    let three_spec = SurfaceSpec::over_q_ints([1, 1, 1, 3]).unwrap();
    let witness = p_group_witness(&three_spec).unwrap();
    let v2a = combined_verdict(&three_spec, &probes, 100).unwrap();
    let v2b = combined_verdict(&three_spec, &probes, 100).unwrap();
    let three_ok = witness.as_ref().map(|w| w.p) == Some(3)
        && v2a.status == VerdictStatus::Inconclusive
        && v2a == v2b
        && !v2a.reasons.is_empty();

    verdict_line(
        8,
        holds_ok && three_ok,
        "(1,1,1,2) holds; (1,1,1,3) fires the 3-group witness and stays inconclusive",
        t,
    );
}

#[test]
fn criterion_9_cofiniteness_property() {
    let t = Instant::now();
    let mut ok = true;
    for degree in 2..=4u32 {
        let min_ramified = 4 * degree as u64 + 2;
        let mut places = Vec::new();
        for p in quartic_core::arith::primes_upto(200) {
            if p == 2 {
                continue;
            }
            if p >= min_ramified && p % 3 == 1 {
                // a totally ramified place (allowed: p >= 4n+2)
                places.push(PlaceData {
                    p,
                    e: degree,
                    f: 1,
                    vals: [0, 0, 0, 0],
                });
            } else {
                // unramified, one inert place of degree n
                places.push(PlaceData {
                    p,
                    e: 1,
                    f: degree,
                    vals: [0, 0, 0, 0],
                });
            }
        }
        let spec = SurfaceSpec::abstract_field(degree, 4, places).unwrap();
        let complement = constancy_set_complement(&spec, 200).unwrap();
        ok &= complement.iter().all(|p| *p == 3 || *p == 5);

        // variant with an odd valuation above 3: 3 must drop out, still
        // within {3, 5}
        let mut places2 = vec![PlaceData {
            p: 3,
            e: 1,
            f: degree,
            vals: [0, 0, 0, 1],
        }];
        for p in quartic_core::arith::primes_upto(200) {
            if p > 3 {
                places2.push(PlaceData {
                    p,
                    e: 1,
                    f: degree,
                    vals: [0, 0, 0, 0],
                });
            }
        }
        let spec2 = SurfaceSpec::abstract_field(degree, 4, places2).unwrap();
        let complement2 = constancy_set_complement(&spec2, 200).unwrap();
        ok &= complement2 == vec![3];
    }
    verdict_line(
        9,
        ok,
        "synthetic abstract fields with ramified primes >= 4n+2: complement within {3, 5}",
        t,
    );
}
