//! Runs every acceptance criterion at its stated bounds and time limit.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fgtrop_core::report::Report;
use fgtrop_core::suite::{self, Backend, DEFAULT_SEED};
use fgtrop_core::{ring::RingDescriptor, Result};

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_report(r: Report) -> Outcome {
    let detail = match r.witnesses.first() {
        Some(w) => format!("{} checks, first failure {}: {}", r.checks, w.check, w.detail),
        None => format!("{} checks", r.checks),
    };
    Outcome { ok: r.pass, detail }
}

fn all(reports: Vec<Report>) -> Outcome {
    let mut total = Report::new("criterion", "all");
    for r in reports {
        total.absorb(r);
    }
    from_report(total)
}

/// Monic irreducibles of degree exactly `d` over `F_q`, by Gauss's necklace count.
fn irreducibles_of_degree(q: i64, d: u32) -> i64 {
    fn mobius(mut n: u32) -> i64 {
        let mut sign = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if n > 1 {
            sign = -sign;
        }
        sign
    }
    let total: i64 = (1..=d).filter(|e| d % e == 0).map(|e| mobius(e) * q.pow(d / e)).sum();
    total / d as i64
}

fn c1() -> Result<Outcome> {
    Ok(from_report(suite::natgcd_realization_run(10_000, 10_000, DEFAULT_SEED)?))
}

fn c2() -> Result<Outcome> {
    let r = suite::natgcd_spectrum_run()?;
    let primes: Vec<u64> = (2..=100u64).filter(|n| (2..*n).all(|d| n % d != 0)).collect();
    let mut expected = vec!["<0>".to_string()];
    expected.extend(primes.iter().map(|p| format!("<{p}>")));
    let points: Vec<String> = serde_json::from_value(r.details["points"].clone()).unwrap_or_default();
    let mut o = from_report(r);
    if points != expected {
        o.ok = false;
        o.detail = format!("points {points:?}");
    }
    Ok(o)
}

fn c3() -> Result<Outcome> {
    let r = suite::generic_kernel_run(12)?;
    let image: Vec<String> = serde_json::from_value(r.details["image"].clone()).unwrap_or_default();
    let mut o = from_report(r);
    if image != ["<0>", "<1>"] {
        o.ok = false;
        o.detail = format!("image {image:?}");
    }
    Ok(o)
}

fn c4() -> Result<Outcome> {
    let mut reports = Vec::new();
    for b in ["Z", "F5[x]", "Q[x,y]", "Z^2"] {
        reports.push(suite::correspondence_trials(&Backend::parse(b)?, 200, DEFAULT_SEED)?);
    }
    Ok(all(reports))
}

fn c5() -> Result<Outcome> {
    let mut reports = Vec::new();
    for b in ["Z", "F5[x]", "Q[x,y]"] {
        reports.push(suite::product_trials(&Backend::parse(b)?, 200, DEFAULT_SEED)?);
    }
    Ok(all(reports))
}

fn c6() -> Result<Outcome> {
    Ok(from_report(suite::primary_prime_radical_run(1000)?))
}

fn c7() -> Result<Outcome> {
    let r = suite::retraction_corpus_run()?;
    let n = r.details["semirings"].as_u64().unwrap_or(0);
    let mut o = from_report(r);
    if n < 12 {
        o.ok = false;
        o.detail = format!("only {n} semirings");
    }
    Ok(o)
}

fn c8() -> Result<Outcome> {
    let f2x = RingDescriptor::parse("F2[x]")?;
    Ok(all(vec![
        suite::topology_trials(&RingDescriptor::Integers, 50, 500, DEFAULT_SEED)?,
        suite::topology_trials(&f2x, 4, 500, DEFAULT_SEED)?,
    ]))
}

fn c9() -> Result<Outcome> {
    Ok(from_report(suite::quotient_diagram_run()?))
}

fn c10() -> Result<Outcome> {
    Ok(from_report(suite::stalks_run()?))
}

fn c11() -> Result<Outcome> {
    Ok(from_report(suite::sheafification_run()?))
}

fn c12() -> Result<Outcome> {
    let scheme = suite::projective_line_run("F2", 3)?;
    let irreducible: i64 = (1..=3).map(|d| irreducibles_of_degree(2, d)).sum();
    let mut problems = Vec::new();
    for (i, chart) in scheme.charts().iter().enumerate() {
        // the zero ideal and one point per monic irreducible
        if chart.len() as i64 != irreducible + 1 {
            problems.push(format!("chart {i} has {} points", chart.len()));
        }
    }
    for id in scheme.identifications() {
        // every point but the one at the chart's origin lies on the overlap
        if id.map.len() as i64 != irreducible || !id.escaped.is_empty() {
            problems.push(format!("overlap {}->{} identifies {} points", id.i, id.j, id.map.len()));
        }
    }
    if scheme.points().len() as i64 != irreducible + 2 {
        problems.push(format!("{} glued points", scheme.points().len()));
    }
    let mut o = from_report(scheme.report().clone());
    if !problems.is_empty() {
        o.ok = false;
        o.detail = problems.join("; ");
    }
    Ok(o)
}

fn c13() -> Result<Outcome> {
    Ok(from_report(suite::universal_property_run(500, DEFAULT_SEED)?))
}

type Criterion = (&'static str, fn() -> Result<Outcome>, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("1 fgId(Z) realizes N^gcd", c1, 5),
        ("2 Spec_k(N^gcd) truncated at 100", c2, 1),
        ("3 generic comparison kernel", c3, 1),
        ("4 correspondence round trips", c4, 60),
        ("5 k-ideal products", c5, 30),
        ("6 primary, prime and radical status", c6, 60),
        ("7 retraction theorems on the corpus", c7, 120),
        ("8 closed-set laws", c8, 30),
        ("9 quotient diagram", c9, 10),
        ("10 stalk commutation", c10, 10),
        ("11 sheafification", c11, 10),
        ("12 projective line over F2", c12, 10),
        ("13 universal property", c13, 10),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= Duration::from_secs(limit);
        let verdict = if ok && in_time { "PASS" } else { "FAIL" };
        if verdict == "FAIL" {
            failed += 1;
        }
        let late = if in_time { String::new() } else { format!(", over the {limit} s limit") };
        println!("{verdict} {name} ({:.2} s{late}): {detail}", elapsed.as_secs_f64());
    }
    println!("{} of 13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
