//! Bounds on the odd primes (and their exponents) that can appear in the
//! transcendental Brauer quotient of a diagonal quartic surface.
//!
//! The computation probes the Galois action through split primes p = 1 mod 4
//! of Q(i).  For a probe with primary generator pi, the congruence depth of
//! an odd prime ell at exponent m is one plus the largest valuation of
//! pi^m - conj(pi)^m at the places above ell.  Depth 1 certifies that no
//! ell-torsion survives; depth d bounds surviving ell-torsion by ell^(d-1).
//! Minimising over probes refines the bound but never certifies membership,
//! so candidate sets reported here are conservative supersets.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{factor_with_budget, is_prime, primes_upto, DEFAULT_RHO_BUDGET};
use crate::error::{Error, Result};
use crate::gaussian::{gauss_val, places_above, primary_generator, GaussInt};

/// Largest ell for which the kernel enumeration of [`kernel_invariants`]
/// is considered desk-scale (the enumeration walks ell^(2n) pairs).
pub const KERNEL_ENUM_LIMIT: u64 = 100_000;

/// A split rational probe prime with its primary generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbePrime {
    p: u64,
    pi: GaussInt,
}

impl ProbePrime {
    pub fn new(p: u64) -> Result<Self> {
        let pi = primary_generator(p)?;
        Ok(ProbePrime { p, pi })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> &GaussInt {
        &self.pi
    }

    /// pi^m - conj(pi)^m, the purely imaginary element whose valuations
    /// above ell drive the depth computation.
    pub fn delta(&self, m: u32) -> GaussInt {
        let d = self.pi.pow(m as u64).sub(&self.pi.conj().pow(m as u64));
        assert!(!d.is_zero(), "delta vanishes only for inert generators");
        d
    }
}

impl std::fmt::Display for ProbePrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (pi = {})", self.p, self.pi)
    }
}

fn check_depth_args(probe: &ProbePrime, m: u32, ell: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::domain("exponent m must be positive"));
    }
    if ell == 2 || !is_prime(&ell.into()) {
        return Err(Error::domain(format!("{ell} is not an odd prime")));
    }
    if probe.p == ell {
        return Err(Error::domain(format!(
            "probe {} divides 2*{ell}; choose a different probe",
            probe.p
        )));
    }
    Ok(())
}

/// One plus the largest valuation of pi^m - conj(pi)^m at the places above
/// ell.  Working with the integral difference instead of (pi/conj(pi))^m - 1
/// keeps everything in Z[i]; the two have the same valuations above ell
/// because conj(pi) is a unit there.
pub fn congruence_depth(probe: &ProbePrime, m: u32, ell: u64) -> Result<u32> {
    check_depth_args(probe, m, ell)?;
    let delta = probe.delta(m);
    let max_val = places_above(ell)?
        .iter()
        .map(|v| gauss_val(&delta, v))
        .max()
        .expect("places_above returns at least one place");
    Ok(1 + max_val)
}

/// Arithmetic of Z[i]/q with u64 components (q <= 10^5 keeps products in
/// u128 range).
#[derive(Clone, Copy)]
struct ResidueRing {
    q: u64,
}

impl ResidueRing {
    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let q = self.q as u128;
        let (ar, ai) = (a.0 as u128, a.1 as u128);
        let (br, bi) = (b.0 as u128, b.1 as u128);
        let re = (ar * br + (q * q - ai * bi % (q * q)) % (q * q)) % q;
        let im = (ar * bi + ai * br) % q;
        (re as u64, im as u64)
    }

    fn pow(&self, mut b: (u64, u64), mut e: u64) -> (u64, u64) {
        let mut acc = (1 % self.q, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

fn mod_inverse(a: u64, q: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (q as i128, (a % q) as i128);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(q as i128) as u64)
}

/// Invariant factors (d1, d2) with d1 | d2 of the kernel of multiplication
/// by (pi/conj(pi))^m - 1 on Z[i]/ell^n, by exhaustive enumeration.  This is
/// the definitional route against which [`congruence_depth`] is checked: the
/// depth is the least n at which the kernel's exponent d2 drops below ell^n.
pub fn kernel_invariants(probe: &ProbePrime, m: u32, ell: u64, n: u32) -> Result<(u64, u64)> {
    check_depth_args(probe, m, ell)?;
    if n == 0 {
        return Err(Error::domain("kernel level n must be positive"));
    }
    let q = ell
        .checked_pow(n)
        .filter(|&q| q <= KERNEL_ENUM_LIMIT)
        .ok_or_else(|| {
            Error::domain(format!(
                "kernel enumeration needs ell^n <= {KERNEL_ENUM_LIMIT}, got {ell}^{n}"
            ))
        })?;
    let ring = ResidueRing { q };

    let reduce = |x: &num_bigint::BigInt| -> u64 {
        use num_integer::Integer;
        x.mod_floor(&num_bigint::BigInt::from(q))
            .try_into()
            .expect("reduced representative fits u64")
    };
    let pi = (reduce(&probe.pi.re), reduce(&probe.pi.im));
    let pib = (reduce(&probe.pi.conj().re), reduce(&probe.pi.conj().im));
    // conj(pi)^{-1} = conj(conj(pi)) / Norm(conj(pi)) in the residue ring.
    let norm = ((pib.0 as u128 * pib.0 as u128 + pib.1 as u128 * pib.1 as u128) % q as u128) as u64;
    let norm_inv = mod_inverse(norm, q)
        .ok_or_else(|| Error::domain("conj(pi) not invertible; probe divides ell"))?;
    let pib_inv = ring.mul((pib.0, (q - pib.1 % q) % q), (norm_inv, 0));
    let beta = ring.mul(pi, pib_inv);
    let bm = ring.pow(beta, m as u64);
    let gamma = ((bm.0 + q - 1) % q, bm.1);

    let mut count = 0u64;
    let mut max_order = 1u64;
    for x in 0..q {
        for y in 0..q {
            let zr = (gamma.0 as u128 * x as u128 + (q as u128 - gamma.1 as u128) * y as u128) % q as u128;
            let zi = (gamma.0 as u128 * y as u128 + gamma.1 as u128 * x as u128) % q as u128;
            if zr == 0 && zi == 0 {
                count += 1;
                let g = gcd3(x, y, q);
                max_order = max_order.max(q / g);
            }
        }
    }
    debug_assert_eq!(count % max_order, 0);
    Ok((count / max_order, max_order))
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    use num_integer::Integer;
    a.gcd(&b).gcd(&c)
}

/// The least n at which the kernel exponent drops below ell^n, searched up
/// to n_max; None when the drop does not occur in range.
pub fn depth_from_kernels(probe: &ProbePrime, m: u32, ell: u64, n_max: u32) -> Result<Option<u32>> {
    for n in 1..=n_max {
        let (_, exponent) = kernel_invariants(probe, m, ell, n)?;
        if exponent < ell.pow(n) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Minimum of (depth - 1) over all split probes up to `search_bound`,
/// with the first probe attaining the minimum as witness.  The result is a
/// certified upper bound for the ell-part exponent; value 0 certifies that
/// no ell-torsion survives.  Inert primes are skipped: their generator is
/// fixed by conjugation, so the depth is infinite there.
pub fn torsion_exponent_bound(ell: u64, m: u32, search_bound: u64) -> Result<(u32, ProbePrime)> {
    if search_bound < 13 {
        return Err(Error::domain("search_bound must be at least 13"));
    }
    let mut best: Option<(u32, ProbePrime)> = None;
    for p in primes_upto(search_bound) {
        if p % 4 != 1 || p == ell {
            continue;
        }
        let probe = ProbePrime::new(p)?;
        let bound = congruence_depth(&probe, m, ell)? - 1;
        match &best {
            Some((b, _)) if *b <= bound => {}
            _ => best = Some((bound, probe)),
        }
        if matches!(best, Some((0, _))) {
            break;
        }
    }
    best.ok_or_else(|| {
        Error::domain(format!(
            "no admissible probe below {search_bound} for ell = {ell}"
        ))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CandidateStatus {
    /// Some probe reached depth 1, so no torsion at this prime survives.
    CertifiedExcluded,
    /// Not excluded by any probe tried; membership remains uncertified.
    Candidate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateEntry {
    /// Best known bound for the exponent (None when no admissible probe
    /// evaluated this prime yet).
    pub phi_upper: Option<u32>,
    pub status: CandidateStatus,
    /// For an exclusion, the probe that reached depth 1; for a candidate,
    /// the probe attaining the recorded bound.
    pub witnesses: Vec<u64>,
}

/// Conservative superset of the odd primes that can divide the Brauer
/// quotient, with per-prime exponent bounds and witness probes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: u32,
    pub candidates: BTreeMap<u64, CandidateEntry>,
    pub probes_used: Vec<u64>,
    /// 0 when only the listed probes were used; otherwise every split prime
    /// up to this bound refined the surviving entries.
    pub search_bound: u64,
}

impl BoundReport {
    /// Primes not certified excluded, ascending.
    pub fn surviving(&self) -> Vec<u64> {
        self.candidates
            .iter()
            .filter(|(_, e)| e.status == CandidateStatus::Candidate)
            .map(|(l, _)| *l)
            .collect()
    }

    pub fn excluded(&self) -> Vec<u64> {
        self.candidates
            .iter()
            .filter(|(_, e)| e.status == CandidateStatus::CertifiedExcluded)
            .map(|(l, _)| *l)
            .collect()
    }
}

/// Default probes: 5, 13, 17.
pub fn default_probes() -> Vec<u64> {
    vec![5, 13, 17]
}

/// Default search bound for probe refinement.
pub const DEFAULT_SEARCH_BOUND: u64 = 1000;

/// Build the candidate superset for exponent m from the given probes.
///
/// Any prime with surviving torsion, other than a probe's own p, must divide
/// the norm of the first probe's pi^m - conj(pi)^m; the odd prime factors of
/// that norm together with the probes' own primes form the candidate
/// universe.  Each probe then refines: depth 1 at any probe certifies
/// exclusion, otherwise the best (depth - 1) is recorded.  A probe's own p
/// is evaluated only against the other probes.
pub fn candidate_superset(m: u32, probes: &[ProbePrime]) -> Result<BoundReport> {
    candidate_superset_with_budget(m, probes, DEFAULT_RHO_BUDGET)
}

pub fn candidate_superset_with_budget(
    m: u32,
    probes: &[ProbePrime],
    rho_budget: u64,
) -> Result<BoundReport> {
    if probes.is_empty() {
        return Err(Error::domain("at least one probe prime is required"));
    }
    if m == 0 {
        return Err(Error::domain("exponent m must be positive"));
    }
    let mut seen = BTreeSet::new();
    let probes: Vec<&ProbePrime> = probes.iter().filter(|pr| seen.insert(pr.p)).collect();

    let norm = probes[0].delta(m).norm();
    let factorization = factor_with_budget(&norm, rho_budget)?;
    let mut universe: BTreeSet<u64> = factorization.odd_primes_u64()?.into_iter().collect();
    universe.extend(probes.iter().map(|pr| pr.p));

    let mut candidates = BTreeMap::new();
    for ell in universe {
        let mut entry = CandidateEntry {
            phi_upper: None,
            status: CandidateStatus::Candidate,
            witnesses: Vec::new(),
        };
        for probe in &probes {
            if probe.p == ell {
                continue;
            }
            let bound = congruence_depth(probe, m, ell)? - 1;
            if bound == 0 {
                entry = CandidateEntry {
                    phi_upper: Some(0),
                    status: CandidateStatus::CertifiedExcluded,
                    witnesses: vec![probe.p],
                };
                break;
            }
            if entry.phi_upper.map_or(true, |cur| bound < cur) {
                entry.phi_upper = Some(bound);
                entry.witnesses = vec![probe.p];
            }
        }
        candidates.insert(ell, entry);
    }
    Ok(BoundReport {
        m,
        candidates,
        probes_used: probes.iter().map(|pr| pr.p).collect(),
        search_bound: 0,
    })
}

/// An integer annihilating every odd-torsion element of the Brauer quotient
/// whenever m is a multiple of the Galois exponent: the product over the
/// surviving candidates ell of ell^phi.  After the probe pass, every
/// surviving entry is refined once more against all split primes up to
/// `search_bound`, so enlarging the bound never enlarges the result.
pub fn annihilating_exponent(
    m: u32,
    probes: &[ProbePrime],
    search_bound: u64,
) -> Result<(BigUint, BoundReport)> {
    annihilating_exponent_with_budget(m, probes, search_bound, DEFAULT_RHO_BUDGET)
}

pub fn annihilating_exponent_with_budget(
    m: u32,
    probes: &[ProbePrime],
    search_bound: u64,
    rho_budget: u64,
) -> Result<(BigUint, BoundReport)> {
    let mut report = candidate_superset_with_budget(m, probes, rho_budget)?;
    for (ell, entry) in report.candidates.iter_mut() {
        if entry.status == CandidateStatus::CertifiedExcluded {
            continue;
        }
        let (bound, witness) = torsion_exponent_bound(*ell, m, search_bound)?;
        if entry.phi_upper.map_or(true, |cur| bound < cur) {
            entry.phi_upper = Some(bound);
            entry.witnesses = vec![witness.p()];
            if bound == 0 {
                entry.status = CandidateStatus::CertifiedExcluded;
            }
        }
    }
    report.search_bound = search_bound;

    let mut product = BigUint::one();
    for (ell, entry) in &report.candidates {
        if entry.status == CandidateStatus::Candidate {
            let phi = entry
                .phi_upper
                .expect("surviving entries carry a bound after refinement");
            product *= BigUint::from(*ell).pow(phi);
        }
    }
    Ok((product, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probe(p: u64) -> ProbePrime {
        ProbePrime::new(p).unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(congruence_depth(&probe(5), 1, 3).unwrap(), 1);
        // pi^4 = -7 + 24i, delta = 48i, val_3 = 1
        assert_eq!(probe(5).generator().pow(4), GaussInt::new(-7, 24));
        assert_eq!(congruence_depth(&probe(5), 4, 3).unwrap(), 2);
        assert_eq!(congruence_depth(&probe(13), 40, 5).unwrap(), 3);
        assert!(congruence_depth(&probe(5), 4, 5).is_err());
    }

    #[test]
    fn depth_conjugation_invariance() {
        // Swapping pi for its conjugate flips the sign of delta only.
        for (p, m, l) in [(5u64, 4u32, 3u64), (13, 40, 5), (17, 6, 7), (5, 40, 41)] {
            let pr = probe(p);
            let flipped = ProbePrime {
                p,
                pi: pr.generator().conj(),
            };
            assert_eq!(
                congruence_depth(&pr, m, l).unwrap(),
                congruence_depth(&flipped, m, l).unwrap()
            );
        }
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_invariants(&probe(5), 4, 3, 1).unwrap(), (3, 3));
        assert_eq!(kernel_invariants(&probe(5), 1, 3, 1).unwrap(), (1, 1));
        assert_eq!(kernel_invariants(&probe(13), 1, 3, 1).unwrap(), (1, 1));
        // depth 2 for (5, 4, 3): kernel mod 9 has exponent 3 < 9
        let (_, e) = kernel_invariants(&probe(5), 4, 3, 2).unwrap();
        assert!(e < 9);
        assert_eq!(depth_from_kernels(&probe(5), 4, 3, 4).unwrap(), Some(2));
        assert_eq!(depth_from_kernels(&probe(13), 1, 3, 2).unwrap(), Some(1));
    }

    #[test]
    fn torsion_bound_examples() {
        let (b, w) = torsion_exponent_bound(3, 1, 100).unwrap();
        assert_eq!((b, w.p()), (0, 5));
        let (b, w) = torsion_exponent_bound(5, 40, 100).unwrap();
        assert_eq!((b, w.p()), (2, 13));
        let (b, w) = torsion_exponent_bound(79, 40, 100).unwrap();
        assert_eq!((b, w.p()), (0, 17));
        assert!(torsion_exponent_bound(3, 1, 12).is_err());
    }

    #[test]
    fn superset_from_single_probe() {
        let report = candidate_superset(40, &[probe(5)]).unwrap();
        let expect: Vec<u64> = vec![3, 7, 19, 41, 79, 479, 2879];
        for l in &expect {
            let e = &report.candidates[l];
            assert_eq!(e.status, CandidateStatus::Candidate);
            assert_eq!(e.phi_upper, Some(1), "phi bound at {l}");
        }
        // probe's own prime is present but unevaluated
        let own = &report.candidates[&5];
        assert_eq!(own.status, CandidateStatus::Candidate);
        assert_eq!(own.phi_upper, None);
        let mut all: Vec<u64> = expect.clone();
        all.push(5);
        all.sort();
        assert_eq!(report.surviving(), all);
    }

    #[test]
    fn superset_with_three_probes() {
        let probes = [probe(5), probe(13), probe(17)];
        let report = candidate_superset(40, &probes).unwrap();
        assert_eq!(report.surviving(), vec![3, 5, 7, 19, 41]);
        let phis: Vec<u32> = report
            .surviving()
            .iter()
            .map(|l| report.candidates[l].phi_upper.unwrap())
            .collect();
        assert_eq!(phis, vec![1, 2, 1, 1, 1]);
        // witnessed exclusions
        assert_eq!(report.candidates[&479].witnesses, vec![13]);
        assert_eq!(report.candidates[&2879].witnesses, vec![13]);
        assert_eq!(report.candidates[&79].witnesses, vec![17]);
    }

    #[test]
    fn superset_m1_all_excluded() {
        let report = candidate_superset(1, &[probe(5), probe(13)]).unwrap();
        for (_, e) in &report.candidates {
            assert_eq!(e.status, CandidateStatus::CertifiedExcluded);
        }
    }

    #[test]
    fn refinement_is_monotone() {
        for m in [4u32, 12, 40] {
            let wide = candidate_superset(m, &[probe(5), probe(13), probe(17)]).unwrap();
            let narrow = candidate_superset(m, &[probe(5), probe(13)]).unwrap();
            let wide_set: BTreeSet<u64> = wide.surviving().into_iter().collect();
            let narrow_set: BTreeSet<u64> = narrow.surviving().into_iter().collect();
            assert!(wide_set.is_subset(&narrow_set), "m = {m}");
        }
    }

    #[test]
    fn annihilator_examples() {
        let probes = [probe(5), probe(13), probe(17)];
        let (bound, _) = annihilating_exponent(40, &probes, 100).unwrap();
        // 3 * 5^2 * 7 * 19 * 41
        assert_eq!(bound, BigUint::from(408_975u64));

        let (bound, report) = annihilating_exponent(1, &probes, 100).unwrap();
        assert_eq!(bound, BigUint::one());
        assert!(report.surviving().is_empty());

        let (bound, _) = annihilating_exponent(4, &[probe(5), probe(13)], 100).unwrap();
        assert!((&bound % BigUint::from(3u32)).bits() == 0, "divisible by 3");
    }

    #[test]
    fn annihilator_search_bound_monotone() {
        let probes = [probe(5), probe(13), probe(17)];
        let (b100, _) = annihilating_exponent(40, &probes, 100).unwrap();
        let (b1000, _) = annihilating_exponent(40, &probes, 1000).unwrap();
        assert!(b1000 <= b100);
        assert_eq!(b1000, BigUint::from(408_975u64));
    }

    #[test]
    fn budget_exhaustion_propagates() {
        // Norm of delta for probe 13, m = 41 contains a composite cofactor
        // beyond the trial-division bound.
        let err = candidate_superset_with_budget(41, &[probe(13)], 4).unwrap_err();
        assert!(matches!(err, Error::FactorBudget { .. }));
    }
}
