//! Checkers deciding whether odd-torsion Brauer classes can obstruct weak
//! approximation, from the coefficients and place data of a surface.
//!
//! All criteria here are sufficient conditions, so failure is reported as
//! `Inconclusive`, never as a proven obstruction.  Verdicts that rely on the
//! conservative candidate superset are `HoldsConservative`; a verdict is
//! `HoldsCertified` only when every step is witness-backed, including a
//! definitional kernel cross-check of each congruence-depth value used.

use serde::{Deserialize, Serialize};

use crate::brauer::{
    annihilating_exponent_with_budget, kernel_invariants, CandidateStatus, ProbePrime,
    KERNEL_ENUM_LIMIT,
};
use crate::error::{Error, Result};
use crate::fielddata::{FieldDesc, PlaceData, SurfaceSpec};

/// Which constancy condition a place satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstancyCondition {
    /// 4e < p - 1.
    LowRamification,
    /// 2e < p - 1 and all four valuations even.
    EvenValuations,
    /// e < p - 1 and all four valuations zero.
    UnitCoefficients,
}

impl std::fmt::Display for ConstancyCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstancyCondition::LowRamification => write!(f, "4e < p-1"),
            ConstancyCondition::EvenValuations => write!(f, "2e < p-1 and even valuations"),
            ConstancyCondition::UnitCoefficients => write!(f, "e < p-1 and unit coefficients"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceTag {
    pub place: PlaceData,
    /// The first condition that holds at this place, if any.
    pub condition: Option<ConstancyCondition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstancyCheck {
    pub p: u64,
    pub holds: bool,
    pub places: Vec<PlaceTag>,
}

fn condition_at(p: u64, place: &PlaceData) -> Option<ConstancyCondition> {
    let p = p as i64;
    let e = place.e as i64;
    if 4 * e < p - 1 {
        return Some(ConstancyCondition::LowRamification);
    }
    // unit coefficients are reported in preference to even valuations
    if e < p - 1 && place.vals.iter().all(|&v| v == 0) {
        return Some(ConstancyCondition::UnitCoefficients);
    }
    if 2 * e < p - 1 && place.vals.iter().all(|v| v % 2 == 0) {
        return Some(ConstancyCondition::EvenValuations);
    }
    None
}

/// Membership of the odd prime p in the constancy set: every place above p
/// must satisfy one of the three ramification-valuation conditions, which
/// force the local evaluation maps of p-power classes to be constant.
pub fn in_constancy_set(p: u64, spec: &SurfaceSpec) -> Result<ConstancyCheck> {
    let places = spec.places_above(p)?;
    let tags: Vec<PlaceTag> = places
        .into_iter()
        .map(|place| PlaceTag {
            condition: condition_at(p, &place),
            place,
        })
        .collect();
    Ok(ConstancyCheck {
        p,
        holds: tags.iter().all(|t| t.condition.is_some()),
        places: tags,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PGroupWitness {
    pub p: u64,
    pub place: PlaceData,
    pub val_sum: i64,
}

/// The first odd prime with a place where the coefficient valuations do not
/// sum to 0 mod 4.  At such a prime the odd part of the Brauer quotient is
/// a p-group; absence of a witness yields None.
pub fn p_group_witness(spec: &SurfaceSpec) -> Result<Option<PGroupWitness>> {
    for p in spec.support_primes()? {
        for place in spec.places_above(p)? {
            let s = place.val_sum();
            if s.rem_euclid(4) != 0 {
                return Ok(Some(PGroupWitness {
                    p,
                    place,
                    val_sum: s,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinglePrimeCheck {
    pub in_set: bool,
    /// True when p > 4m + 1 for m the largest ramification index above p,
    /// which forces condition (4e < p-1) at every place.
    pub shortcut: bool,
    pub check: ConstancyCheck,
}

/// Constancy for classes of p-power order: membership of p in the constancy
/// set, with the p > 4m+1 shortcut reported.
pub fn single_prime_constancy(p: u64, spec: &SurfaceSpec) -> Result<SinglePrimeCheck> {
    let check = in_constancy_set(p, spec)?;
    let max_e = check
        .places
        .iter()
        .map(|t| t.place.e as u64)
        .max()
        .unwrap_or(1);
    Ok(SinglePrimeCheck {
        in_set: check.holds,
        shortcut: p > 4 * max_e + 1,
        check,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    /// Every step witness-backed, kernel cross-checks included.
    HoldsCertified,
    /// Sound via conservative superset semantics.
    HoldsConservative,
    /// The sufficient conditions did not apply; nothing is concluded.
    Inconclusive,
}

impl VerdictStatus {
    pub fn holds(&self) -> bool {
        !matches!(self, VerdictStatus::Inconclusive)
    }
}

impl std::fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerdictStatus::HoldsCertified => write!(f, "holds (certified)"),
            VerdictStatus::HoldsConservative => write!(f, "holds (conservative)"),
            VerdictStatus::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub reasons: Vec<String>,
}

fn probes_from(spec_probes: &[u64]) -> Result<Vec<ProbePrime>> {
    spec_probes.iter().map(|&p| ProbePrime::new(p)).collect()
}

/// Cross-check one congruence depth claim through the kernel enumeration at
/// level 1: depth 1 means trivial kernel mod ell, depth >= 2 full exponent.
fn kernel_cross_check(witness_p: u64, m: u32, ell: u64, excluded: bool) -> Result<bool> {
    if ell > KERNEL_ENUM_LIMIT.min(10_000) {
        return Ok(false); // out of enumeration range; cannot certify
    }
    let probe = ProbePrime::new(witness_p)?;
    let (_, exponent) = kernel_invariants(&probe, m, ell, 1)?;
    let consistent = if excluded {
        exponent == 1
    } else {
        exponent == ell
    };
    if !consistent {
        return Err(Error::domain(format!(
            "kernel cross-check disagrees with the valuation formula at ell = {ell}"
        )));
    }
    Ok(true)
}

/// Verdict from the inclusion of the candidate superset in the constancy
/// set: if every surviving candidate prime is in the constancy set, no
/// odd-torsion class obstructs weak approximation.
pub fn candidate_set_verdict(
    spec: &SurfaceSpec,
    probes: &[u64],
    search_bound: u64,
) -> Result<Verdict> {
    candidate_set_verdict_with_budget(spec, probes, search_bound, crate::arith::DEFAULT_RHO_BUDGET)
}

pub fn candidate_set_verdict_with_budget(
    spec: &SurfaceSpec,
    probes: &[u64],
    search_bound: u64,
    rho_budget: u64,
) -> Result<Verdict> {
    let probe_list = probes_from(probes)?;
    let (_, report) =
        annihilating_exponent_with_budget(spec.exponent, &probe_list, search_bound, rho_budget)?;

    let mut reasons = Vec::new();
    let mut failing = Vec::new();
    let mut all_certified = true;

    for (ell, entry) in &report.candidates {
        match entry.status {
            CandidateStatus::CertifiedExcluded => {
                let w = entry.witnesses[0];
                all_certified &= kernel_cross_check(w, spec.exponent, *ell, true)?;
                reasons.push(format!(
                    "{ell} excluded: probe {w} reaches depth 1 at exponent {}",
                    spec.exponent
                ));
            }
            CandidateStatus::Candidate => {
                let phi = entry.phi_upper.expect("refined candidates carry a bound");
                let w = entry.witnesses.first().copied();
                if let Some(w) = w {
                    all_certified &= kernel_cross_check(w, spec.exponent, *ell, false)?;
                } else {
                    all_certified = false;
                }
                match in_constancy_set(*ell, spec) {
                    Ok(check) if check.holds => {
                        let cond = check.places[0]
                            .condition
                            .expect("holding check tags every place");
                        reasons.push(format!(
                            "{ell} candidate (exponent bound {phi}): in constancy set via {cond}"
                        ));
                    }
                    Ok(_) => {
                        failing.push(*ell);
                        reasons.push(format!(
                            "{ell} candidate (exponent bound {phi}): fails every constancy condition"
                        ));
                    }
                    Err(Error::MissingPlaces(p)) => {
                        failing.push(*ell);
                        reasons.push(format!(
                            "{ell} candidate (exponent bound {phi}): no place data above {p}"
                        ));
                    }
                    Err(other) => return Err(other),
                }
            }
        }
    }

    if report.surviving().is_empty() {
        reasons.push("candidate set is empty".to_string());
    }

    let status = if !failing.is_empty() {
        reasons.push(format!(
            "inconclusive: candidate primes {failing:?} are not certified inside the constancy set"
        ));
        VerdictStatus::Inconclusive
    } else if all_certified {
        VerdictStatus::HoldsCertified
    } else {
        VerdictStatus::HoldsConservative
    };
    Ok(Verdict { status, reasons })
}

/// Combined verdict: when the valuation-sum witness yields a prime p whose
/// classes are forced constant, the whole odd part is unobstructed; any
/// other situation falls back to the candidate-set check.
pub fn combined_verdict(spec: &SurfaceSpec, probes: &[u64], search_bound: u64) -> Result<Verdict> {
    combined_verdict_with_budget(spec, probes, search_bound, crate::arith::DEFAULT_RHO_BUDGET)
}

pub fn combined_verdict_with_budget(
    spec: &SurfaceSpec,
    probes: &[u64],
    search_bound: u64,
    rho_budget: u64,
) -> Result<Verdict> {
    if let Some(w) = p_group_witness(spec)? {
        let single = single_prime_constancy(w.p, spec)?;
        let head = format!(
            "odd part is a {}-group: valuation sum {} at a place above {} is not 0 mod 4",
            w.p, w.val_sum, w.p
        );
        if single.in_set {
            let mut reasons = vec![head];
            if single.shortcut {
                let max_e = single
                    .check
                    .places
                    .iter()
                    .map(|t| t.place.e)
                    .max()
                    .unwrap_or(1);
                reasons.push(format!(
                    "{} > 4m+1 with m = {max_e}, so every place satisfies 4e < p-1",
                    w.p
                ));
            } else {
                let cond = single.check.places[0].condition.unwrap();
                reasons.push(format!("{} in constancy set via {cond}", w.p));
            }
            return Ok(Verdict {
                status: VerdictStatus::HoldsCertified,
                reasons,
            });
        }
        let mut verdict =
            candidate_set_verdict_with_budget(spec, probes, search_bound, rho_budget)?;
        verdict.reasons.insert(
            0,
            format!("{head}; {} is outside the constancy set", w.p),
        );
        return Ok(verdict);
    }
    candidate_set_verdict_with_budget(spec, probes, search_bound, rho_budget)
}

/// True iff abcd is a square in the field, in which case the surface admits
/// a genus one fibration.
pub fn genus_one_fibration_criterion(spec: &SurfaceSpec) -> Result<bool> {
    let r = spec
        .coefficient_product()
        .ok_or_else(|| Error::domain("fibration criterion needs rational coefficients"))?;
    let square = |x: &num_rational::BigRational| crate::fielddata::is_rational_square(x);
    Ok(match &spec.field {
        FieldDesc::Rationals => square(&r),
        FieldDesc::GaussianRationals => square(&r) || square(&-&r),
        FieldDesc::Quadratic(d) => {
            let d_rat = num_rational::BigRational::from_integer((*d).into());
            square(&r) || square(&(&r / &d_rat))
        }
        FieldDesc::Abstract { .. } => {
            return Err(Error::domain(
                "fibration criterion supports Q and quadratic fields only",
            ))
        }
    })
}

/// Odd primes up to `range_max` that are not in the constancy set.
pub fn constancy_set_complement(spec: &SurfaceSpec, range_max: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for p in crate::arith::primes_upto(range_max) {
        if p == 2 {
            continue;
        }
        if !in_constancy_set(p, spec)?.holds {
            out.push(p);
        }
    }
    Ok(out)
}
