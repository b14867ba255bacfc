//! Command-line front end: parse surface descriptions, run the
//! weak-approximation checkers and the local verification suites, and emit
//! human-readable or machine-readable reports.
//!
//! Exit codes: 0 when the checked property holds (or the command is purely
//! computational and succeeds), 1 when a verdict is inconclusive or a
//! verification suite reports violations, 2 on input errors, 3 when the
//! factoring budget is exhausted.

mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use quartic_core::arith::DEFAULT_RHO_BUDGET;
use quartic_core::brauer::{
    annihilating_exponent_with_budget, torsion_exponent_bound, CandidateStatus, ProbePrime,
};
use quartic_core::criteria::{
    combined_verdict_with_budget, genus_one_fibration_criterion,
    in_constancy_set, p_group_witness, VerdictStatus,
};
use quartic_core::error::Error;
use quartic_core::fflab::{
    cone_threshold, hasse_weil_threshold, swan_bound, verification_suite, CurveOverF2,
};
use quartic_core::fielddata::{parse_spec, SurfaceSpec};
use quartic_core::qp2::{hilbert_symbol_oracle, hilbert_symbol_rational, verify_kummer_surface};

use report::Report;

#[derive(Parser)]
#[command(
    name = "quartic",
    about = "Odd-torsion Brauer obstruction criteria for diagonal quartic surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a surface description: candidate primes, constancy set,
    /// verdicts and the annihilating exponent.
    Analyze {
        /// Path to a structured surface description.
        spec: std::path::PathBuf,
        /// Probe primes (comma separated, each 1 mod 4), e.g. 5,13,17.
        #[arg(long)]
        probes: Option<String>,
        /// Refine surviving candidates against all probes up to this bound.
        #[arg(long)]
        search_bound: Option<u64>,
        /// Iteration budget per cofactor for the factoring stage.
        #[arg(long, default_value_t = DEFAULT_RHO_BUDGET)]
        rho_budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Upper bound for the exponent of ell-torsion at exponent m.
    Phi {
        ell: u64,
        m: u32,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        #[arg(long)]
        json: bool,
    },
    /// Candidate superset and annihilating exponent for exponent m.
    Sbound {
        m: u32,
        #[arg(long)]
        probes: Option<String>,
        #[arg(long, default_value_t = 1000)]
        search_bound: u64,
        #[arg(long, default_value_t = DEFAULT_RHO_BUDGET)]
        rho_budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Hilbert symbol (a, b) over the 2-adic numbers; a, b rationals.
    Hilbert {
        a: String,
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// Swan conductor bound for p^t-torsion at ramification index e.
    Swan {
        e: u32,
        p: u64,
        t: u32,
        #[arg(long)]
        json: bool,
    },
    /// Point-existence thresholds over F_q.
    Thresholds {
        q: u64,
        p: u64,
        #[arg(long, default_value_t = 2)]
        genus: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the finite verification suites.
    VerifyLocal {
        /// Which suite: fflab, kummer or all.
        suite: String,
        /// Vanishing-order cutoff for the 2-adic case split.
        #[arg(long, default_value_t = 8)]
        cutoff: u32,
        /// Working 2-adic precision in bits.
        #[arg(long, default_value_t = 12)]
        precision: u32,
        /// Override the curve coefficients a2,a4,a6 (falsification hook).
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_probe_list(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::domain(format!("bad probe `{t}`")))
        })
        .collect()
}

fn parse_rational_arg(s: &str) -> Result<BigRational, Error> {
    let parts: Vec<&str> = s.split('/').collect();
    let int = |t: &str| -> Result<BigInt, Error> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::domain(format!("not an integer: `{t}`")))
    };
    let r = match parts.as_slice() {
        [n] => BigRational::from_integer(int(n)?),
        [n, d] => {
            let den = int(d)?;
            if den.is_zero() {
                return Err(Error::domain("zero denominator"));
            }
            BigRational::new(int(n)?, den)
        }
        _ => return Err(Error::domain(format!("bad rational `{s}`"))),
    };
    if r.is_zero() {
        return Err(Error::domain("arguments must be nonzero"));
    }
    Ok(r)
}

fn probes_of(list: &[u64]) -> Result<Vec<ProbePrime>, Error> {
    list.iter().map(|&p| ProbePrime::new(p)).collect()
}

fn bound_report_value(report: &quartic_core::brauer::BoundReport) -> Value {
    let entries: Vec<Value> = report
        .candidates
        .iter()
        .map(|(ell, e)| {
            json!({
                "ell": ell,
                "status": match e.status {
                    CandidateStatus::Candidate => "candidate",
                    CandidateStatus::CertifiedExcluded => "certified-excluded",
                },
                "phi_upper": e.phi_upper,
                "witnesses": e.witnesses,
            })
        })
        .collect();
    json!({
        "m": report.m,
        "probes_used": report.probes_used,
        "search_bound": report.search_bound,
        "candidates": entries,
    })
}

fn print_bound_report(report: &quartic_core::brauer::BoundReport) {
    println!(
        "candidate superset at exponent m = {} (probes {:?}, search bound {}):",
        report.m, report.probes_used, report.search_bound
    );
    for (ell, e) in &report.candidates {
        match e.status {
            CandidateStatus::Candidate => {
                let phi = e
                    .phi_upper
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "?".into());
                let witness = e
                    .witnesses
                    .first()
                    .map(|w| format!(" (witness probe {w})"))
                    .unwrap_or_default();
                println!("  {ell}: candidate, exponent bound {phi}{witness}");
            }
            CandidateStatus::CertifiedExcluded => {
                println!("  {ell}: excluded by probe {}", e.witnesses[0]);
            }
        }
    }
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            spec,
            probes,
            search_bound,
            rho_budget,
            json,
        } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Error::schema(spec.display().to_string(), e.to_string()))?;
            let parsed = parse_spec(&text)?;
            let probe_list = match probes {
                Some(s) => parse_probe_list(&s)?,
                None => parsed.effective_probes(),
            };
            let bound = search_bound.unwrap_or_else(|| parsed.effective_search_bound());
            cmd_analyze(&parsed, &probe_list, bound, rho_budget, json)
        }
        Command::Phi { ell, m, bound, json } => {
            let (value, witness) = torsion_exponent_bound(ell, m, bound)?;
            let results = json!({
                "ell": ell, "m": m, "search_bound": bound,
                "phi_upper": value,
                "witness_probe": witness.p(),
                "witness_generator": witness.generator().to_string(),
            });
            let report = Report::new(
                "phi",
                json!({"ell": ell, "m": m, "bound": bound}),
                results,
                "certified upper bound (witness probe attains it)",
            );
            if json {
                report.print_json();
            } else {
                println!(
                    "phi({ell}, {m}) <= {value}   [witness probe {} with generator {}]",
                    witness.p(),
                    witness.generator()
                );
                if value == 0 {
                    println!("no {ell}-torsion survives: {ell} is certified excluded");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sbound {
            m,
            probes,
            search_bound,
            rho_budget,
            json,
        } => {
            let list = match probes {
                Some(s) => parse_probe_list(&s)?,
                None => quartic_core::brauer::default_probes(),
            };
            let probe_list = probes_of(&list)?;
            let (product, report) =
                annihilating_exponent_with_budget(m, &probe_list, search_bound, rho_budget)?;
            let factored = quartic_core::arith::factor(&BigInt::from(product.clone()))?;
            let results = json!({
                "bound_report": bound_report_value(&report),
                "annihilating_exponent": product.to_string(),
                "annihilating_exponent_factored": factored.to_string(),
            });
            let rep = Report::new(
                "sbound",
                json!({"m": m, "probes": list, "search_bound": search_bound}),
                results,
                "conservative superset; exclusions witness-certified",
            );
            if json {
                rep.print_json();
            } else {
                print_bound_report(&report);
                println!("annihilating exponent: {product} = {factored}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hilbert { a, b, json } => {
            let ar = parse_rational_arg(&a)?;
            let br = parse_rational_arg(&b)?;
            let symbol = hilbert_symbol_rational(&ar, &br);
            let oracle = hilbert_symbol_oracle(&ar, &br);
            if symbol != oracle {
                return Err(Error::domain(
                    "internal: closed form and solvability oracle disagree",
                ));
            }
            let report = Report::new(
                "hilbert",
                json!({"a": a, "b": b}),
                json!({"symbol": symbol, "oracle": oracle}),
                "closed form cross-checked by exhaustive solvability search",
            );
            if json {
                report.print_json();
            } else {
                println!("({ar}, {br})_2 = {symbol:+}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Swan { e, p, t, json } => {
            if e == 0 || t == 0 || !quartic_core::arith::is_prime(&p.into()) {
                return Err(Error::domain("swan needs e, t >= 1 and p prime"));
            }
            let b = swan_bound(e, p, t);
            let report = Report::new(
                "swan",
                json!({"e": e, "p": p, "t": t}),
                json!({"upper": b.upper, "multiple_of": b.multiple_of, "admissible": b.admissible()}),
                "exact evaluation",
            );
            if json {
                report.print_json();
            } else {
                println!(
                    "swan conductor <= {} and divisible by {}; admissible values {:?}",
                    b.upper,
                    b.multiple_of,
                    b.admissible()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Thresholds { q, p, genus, json } => {
            if q < 2 {
                return Err(Error::domain("q must be at least 2"));
            }
            let hw = hasse_weil_threshold(q, p, genus);
            let cone = cone_threshold(q, p);
            let report = Report::new(
                "thresholds",
                json!({"q": q, "p": p, "genus": genus}),
                json!({"hasse_weil": hw, "cone": cone}),
                "exact integer comparisons",
            );
            if json {
                report.print_json();
            } else {
                println!(
                    "sqrt(q) + 1/sqrt(q) > 2(p(g-1)+1): {hw}\nsqrt(q) + 1/sqrt(q) > 2(2p+1): {cone}"
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyLocal {
            suite,
            cutoff,
            precision,
            curve,
            json,
        } => cmd_verify_local(&suite, cutoff, precision, curve.as_deref(), json),
    }
}

fn cmd_analyze(
    spec: &SurfaceSpec,
    probes: &[u64],
    search_bound: u64,
    rho_budget: u64,
    json: bool,
) -> Result<ExitCode, Error> {
    let probe_list = probes_of(probes)?;
    let (product, bound_report) =
        annihilating_exponent_with_budget(spec.exponent, &probe_list, search_bound, rho_budget)?;
    let factored = quartic_core::arith::factor(&BigInt::from(product.clone()))?;

    let mut constancy = Vec::new();
    for ell in bound_report.surviving() {
        match in_constancy_set(ell, spec) {
            Ok(c) => constancy.push(Some(c)),
            Err(Error::MissingPlaces(_)) => constancy.push(None),
            Err(other) => return Err(other),
        }
    }
    let surviving = bound_report.surviving();
    let witness = p_group_witness(spec)?;
    let verdict = combined_verdict_with_budget(spec, probes, search_bound, rho_budget)?;
    let fibration = match genus_one_fibration_criterion(spec) {
        Ok(b) => Some(b),
        Err(_) => None,
    };

    let results = json!({
        "exponent": spec.exponent,
        "bound_report": bound_report_value(&bound_report),
        "annihilating_exponent": product.to_string(),
        "annihilating_exponent_factored": factored.to_string(),
        "constancy": surviving.iter().zip(&constancy).map(|(p, c)| match c {
            Some(c) => json!({
                "p": c.p,
                "holds": c.holds,
                "places": c.places.iter().map(|t| json!({
                    "e": t.place.e, "f": t.place.f, "vals": t.place.vals,
                    "condition": t.condition.map(|x| x.to_string()),
                })).collect::<Vec<_>>(),
            }),
            None => json!({"p": p, "holds": Value::Null, "places": "missing"}),
        }).collect::<Vec<_>>(),
        "p_group_witness": witness.as_ref().map(|w| json!({
            "p": w.p, "val_sum": w.val_sum,
            "place": {"e": w.place.e, "f": w.place.f, "vals": w.place.vals},
        })),
        "genus_one_fibration": fibration,
        "verdict": {
            "status": verdict.status.to_string(),
            "reasons": verdict.reasons,
        },
    });
    let certification = match verdict.status {
        VerdictStatus::HoldsCertified => "every step witness-backed and kernel cross-checked",
        VerdictStatus::HoldsConservative => "sound via conservative candidate superset",
        VerdictStatus::Inconclusive => "sufficient conditions did not apply",
    };
    let report = Report::new("analyze", spec.to_schema_value(), results, certification);

    if json {
        report.print_json();
    } else {
        println!(
            "surface over {} with exponent N = {}",
            spec.field, spec.exponent
        );
        if let Some(cs) = &spec.coefficients {
            println!(
                "coefficients: [{}]",
                cs.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
        print_bound_report(&bound_report);
        println!("odd torsion annihilated by {product} = {factored}");
        for (p, c) in surviving.iter().zip(&constancy) {
            let tag = match c {
                Some(c) if c.holds => format!(
                    "in constancy set via {}",
                    c.places[0].condition.expect("holding tag")
                ),
                Some(_) => "outside the constancy set".into(),
                None => "no place data".into(),
            };
            println!("  {p}: {tag}");
        }
        match &witness {
            Some(w) => println!(
                "p-group criterion fired: odd part is a {}-group (valuation sum {} above {})",
                w.p, w.val_sum, w.p
            ),
            None => println!("p-group criterion: no witness place"),
        }
        if let Some(f) = fibration {
            println!("genus one fibration from square product: {f}");
        }
        println!("verdict: {}", verdict.status);
        for r in &verdict.reasons {
            println!("  - {r}");
        }
    }
    Ok(if verdict.status.holds() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn parse_curve(s: &str) -> Result<CurveOverF2, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::domain("curve override must be a2,a4,a6"));
    }
    let bit = |t: &str| -> Result<u64, Error> {
        match t.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(Error::domain(format!("curve coefficient `{other}` not in F_2"))),
        }
    };
    Ok(CurveOverF2 {
        a2: bit(parts[0])?,
        a4: bit(parts[1])?,
        a6: bit(parts[2])?,
    })
}

fn cmd_verify_local(
    suite: &str,
    cutoff: u32,
    precision: u32,
    curve: Option<&str>,
    json: bool,
) -> Result<ExitCode, Error> {
    let curve = match curve {
        Some(s) => parse_curve(s)?,
        None => CurveOverF2::canonical(),
    };
    let run_fflab = matches!(suite, "fflab" | "all");
    let run_kummer = matches!(suite, "kummer" | "all");
    if !run_fflab && !run_kummer {
        return Err(Error::domain(format!(
            "unknown suite `{suite}`; use fflab, kummer or all"
        )));
    }

    let mut ok = true;
    let mut results = serde_json::Map::new();

    let fflab_report = if run_fflab {
        let r = verification_suite(curve)?;
        ok &= r.pass();
        results.insert("fflab".into(), serde_json::to_value(&r).unwrap());
        Some(r)
    } else {
        None
    };
    let kummer_report = if run_kummer {
        let r = verify_kummer_surface(cutoff, precision)?;
        ok &= r.is_clean();
        results.insert("kummer".into(), serde_json::to_value(&r).unwrap());
        Some(r)
    } else {
        None
    };

    let report = Report::new(
        "verify-local",
        json!({"suite": suite, "cutoff": cutoff, "precision": precision}),
        Value::Object(results),
        if ok { "all checks pass" } else { "violations found" },
    );
    if json {
        report.print_json();
    } else {
        if let Some(r) = &fflab_report {
            for c in &r.checks {
                println!(
                    "{}: {} ({})",
                    c.name,
                    if c.pass { "OK" } else { "FAIL" },
                    c.detail
                );
            }
        }
        if let Some(r) = &kummer_report {
            println!(
                "2-adic surface check: {} contributing profile pairs ({} class pairs), {} violations",
                r.contributing_pairs,
                r.contributing_classes,
                r.violations.len()
            );
            for v in &r.violations {
                println!("  violation: {v}");
            }
            if !r.x_side.insufficient.is_empty() || !r.u_side.insufficient.is_empty() {
                println!(
                    "  insufficient precision on {} classes",
                    r.x_side.insufficient.len() + r.u_side.insufficient.len()
                );
            }
            println!(
                "excluded exact zeros: {}",
                r.excluded_points.join("; ")
            );
            println!(
                "outside-the-box shortcut (factor squares): {}",
                if r.shortcut_ok { "OK" } else { "FAIL" }
            );
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::FactorBudget { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
