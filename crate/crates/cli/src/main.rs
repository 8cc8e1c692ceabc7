use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fgtrop_core::ideal::{verify_retraction_congruences, verify_retraction_ideals};
use fgtrop_core::ring::{
    ideal_canonicalize, is_primary_ring_ideal, is_prime_ring_ideal, ring_radical, FgRingIdeal, RingDescriptor,
};
use fgtrop_core::semiring::{FiniteSemiring, Semiring};
use fgtrop_core::sheaf::{
    closed_subscheme_comparison, comparison_phi, phi_presheaf, stalk_commutation_check, trop_scheme, ComparisonOpen,
    GluingData, RingPresheaf,
};
use fgtrop_core::spectrum::{localize_at_prime, radical_handle, speck_truncated, zeta_kernel_probe, SpectrumPoint};
use fgtrop_core::suite::{self, Backend, DEFAULT_SEED, DEFAULT_TRIALS};
use fgtrop_core::trop::{
    correspondence_forward, fgid_carrier, integer_candidates, literal_is_primary, literal_is_prime, FgIdSemiring,
};
use fgtrop_core::{Error, Report};

/// Environment variable naming the directory searched for fixture files.
const FIXTURE_ENV: &str = "FGTROP_FIXTURES";

#[derive(Parser)]
#[command(name = "fgtrop", version, about = "Ideal semirings, tropical spectra and sheaves over exact rings")]
struct Cli {
    /// Print a short human-readable summary instead of JSON.
    #[arg(long, global = true)]
    summary: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum and product samples in fgId(R).
    FgidTable {
        #[arg(long)]
        ring: String,
        /// Number of carrier elements to tabulate.
        #[arg(long, default_value_t = 6)]
        max: u64,
    },
    /// The truncated spectrum Spec_k(fgId(R)).
    Speck {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
    /// Theorem checks.
    #[command(subcommand)]
    Verify(Verify),
    /// Tropicalize a scheme glued from affine charts.
    Trop {
        /// Gluing description (JSON).
        #[arg(long)]
        gluing: PathBuf,
        /// Name of the covering the gluing file is expected to use.
        #[arg(long)]
        covering: String,
        #[arg(long, default_value_t = 3)]
        bound: u64,
    },
    /// Compare the semiring structure sheaf with the tropicalized ring structure sheaf.
    CompareSheaves {
        #[arg(long)]
        ring: String,
        /// Comma-separated opens: generic, whole or D(f).
        #[arg(long, value_delimiter = ',', default_value = "generic")]
        opens: Vec<String>,
        #[arg(long, default_value_t = 12)]
        bound: u64,
        /// Also compare sections of a closed subscheme cut out by this generator.
        #[arg(long)]
        quotient: Option<String>,
    },
    /// Radical of an ideal on the ring side and on the handle side.
    Radical(IdealArgs),
    /// Primary and prime status of an ideal on the ring side and by the literal definitions.
    Primary(IdealArgs),
    /// Localization at a prime and the comparison map onto fgId of the local ring.
    Localize {
        #[arg(long)]
        ring: String,
        /// Generator of the prime ideal.
        #[arg(long)]
        prime: String,
        #[arg(long, default_value_t = 8)]
        bound: u64,
    },
}

#[derive(Args)]
struct IdealArgs {
    #[arg(long)]
    ring: String,
    /// Comma-separated generators.
    #[arg(long, value_delimiter = ',')]
    ideal: Vec<String>,
}

#[derive(Subcommand)]
enum Verify {
    /// The retraction of congruences onto k-ideals.
    RetractionCong {
        #[arg(long)]
        semiring: PathBuf,
    },
    /// The retraction of ideals onto k-ideals.
    RetractionIdeal {
        #[arg(long)]
        semiring: PathBuf,
    },
    /// Ideal/k-ideal correspondence on random ideals (or submodules for Z^n).
    Correspondence {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// k-ideal products and distributivity on random triples.
    Products {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Stalk commutation of the fgId presheaf at every point of a site.
    Stalks {
        /// Site with a ring per open (JSON).
        #[arg(long)]
        site: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Theorem(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Descent { .. } => Failure::Theorem(json!({"pass": false, "error": e.to_string()})),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(bool, Value), Failure>;

/// Looks for `path` as given, then in the fixture directory by full and by file name.
fn resolve(path: &Path) -> Result<PathBuf, Failure> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    let dir = std::env::var_os(FIXTURE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"));
    let stripped = path.strip_prefix("fixtures").unwrap_or(path);
    let mut tried = vec![path.display().to_string()];
    for candidate in [dir.join(stripped), dir.join(path.file_name().unwrap_or_default())] {
        if candidate.exists() {
            return Ok(candidate);
        }
        tried.push(candidate.display().to_string());
    }
    Err(Failure::Usage(format!("no such file (tried {})", tried.join(", "))))
}

fn read(path: &Path) -> Result<String, Failure> {
    let p = resolve(path)?;
    std::fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
}

fn ring(text: &str) -> Result<RingDescriptor, Failure> {
    Ok(RingDescriptor::parse(text)?)
}

fn ideal(args: &IdealArgs) -> Result<FgRingIdeal, Failure> {
    let r = ring(&args.ring)?;
    if args.ideal.is_empty() {
        return Err(Failure::Usage("--ideal needs at least one generator".into()));
    }
    let gens = args.ideal.iter().map(|g| r.parse_element(g)).collect::<Result<Vec<_>, _>>()?;
    Ok(ideal_canonicalize(&r, &gens)?)
}

fn report(r: Report) -> Outcome {
    Ok((r.pass, r.to_json()))
}

fn semiring_file(path: &Path) -> Result<FiniteSemiring, Failure> {
    let s = FiniteSemiring::from_json_str(&read(path)?)?;
    let axioms = s.check_semiring_axioms();
    if let Some(v) = axioms.violations.first() {
        return Err(Failure::Usage(format!("{} is not a semiring: {v:?}", path.display())));
    }
    Ok(s)
}

fn fgid_table(ring_text: &str, max: u64) -> Outcome {
    let r = ring(ring_text)?;
    let (carrier, complete) = fgid_carrier(&r, max)?;
    let s = FgIdSemiring::new(r.clone());
    let shown: Vec<&FgRingIdeal> = carrier.iter().take(max as usize + 1).collect();
    let mut rows = Vec::new();
    for (k, a) in shown.iter().enumerate() {
        for b in &shown[k..] {
            rows.push(json!({
                "a": a.format(),
                "b": b.format(),
                "sum": s.add(a, b).format(),
                "product": s.mul(a, b).format(),
            }));
        }
    }
    Ok((
        true,
        json!({
            "ring": r.name(),
            "elements": shown.iter().map(|i| i.format()).collect::<Vec<_>>(),
            "carrier_complete": complete,
            "table": rows,
        }),
    ))
}

fn speck(ring_text: &str, bound: u64) -> Outcome {
    let spec = speck_truncated(&ring(ring_text)?, bound)?;
    let mut out = spec.to_json();
    out["count"] = json!(spec.len());
    Ok((true, out))
}

fn stalks(path: &Path) -> Outcome {
    let p = RingPresheaf::from_json(&read(path)?)?;
    let phi = phi_presheaf(&p)?;
    let mut total = Report::new("stalk-commutation", p.site().name());
    let mut points = serde_json::Map::new();
    for x in 0..p.site().num_points() {
        let r = stalk_commutation_check(&phi, x)?;
        points.insert(p.site().points()[x].clone(), r.to_json());
        total.absorb(r);
    }
    total.note("points", Value::Object(points));
    report(total)
}

fn trop(path: &Path, covering: &str, bound: u64) -> Outcome {
    let data = GluingData::from_json(&read(path)?)?;
    if data.covering() != covering {
        return Err(Failure::Usage(format!(
            "{} uses the covering {:?}, not {covering:?}",
            path.display(),
            data.covering()
        )));
    }
    let scheme = trop_scheme(&data, bound)?;
    Ok((scheme.report().pass, scheme.to_json()))
}

fn compare(ring_text: &str, opens: &[String], bound: u64, quotient: Option<&str>) -> Outcome {
    let r = ring(ring_text)?;
    let parsed = opens.iter().map(|o| ComparisonOpen::parse(&r, o)).collect::<Result<Vec<_>, _>>()?;
    let mut out = comparison_phi(&r, &parsed, bound)?;
    if let Some(n) = quotient {
        let n = r.parse_element(n)?;
        let mut sides = serde_json::Map::new();
        for (name, o) in opens.iter().zip(&parsed) {
            let f = match o {
                ComparisonOpen::Basic(f) => f.clone(),
                ComparisonOpen::Whole => r.one(),
                ComparisonOpen::Generic => continue,
            };
            sides.insert(name.clone(), json!(closed_subscheme_comparison(&r, &n, &f, 3)?.details));
        }
        out.note("closed_subscheme", Value::Object(sides));
    }
    report(out)
}

fn radical(args: &IdealArgs) -> Outcome {
    let i = ideal(args)?;
    let h = correspondence_forward(&i);
    let ring_side = ring_radical(&i)?;
    let handle = radical_handle(&h)?;
    let agree = handle == correspondence_forward(&ring_side);
    Ok((
        agree,
        json!({
            "ideal": i.format(),
            "ring_radical": ring_side.format(),
            "handle_radical": handle.format(),
            "is_radical": ring_side == i,
            "agree": agree,
        }),
    ))
}

fn primary(args: &IdealArgs) -> Outcome {
    let i = ideal(args)?;
    let mut out = json!({
        "ideal": i.format(),
        "primary": is_primary_ring_ideal(&i)?,
        "prime": is_prime_ring_ideal(&i)?,
    });
    let mut pass = true;
    let n = i.generator().and_then(|g| g.as_int()).and_then(|n| u64::try_from(n.magnitude()).ok());
    if let (RingDescriptor::Integers, Some(n)) = (i.ring(), n.filter(|&n| n >= 2)) {
        let h = correspondence_forward(&i);
        let cands = integer_candidates(n, 12);
        let lit_primary = literal_is_primary(&h, &cands, 64 - n.leading_zeros());
        let lit_prime = literal_is_prime(&h, &cands);
        pass = lit_primary == out["primary"] && lit_prime == out["prime"];
        out["literal_primary"] = json!(lit_primary);
        out["literal_prime"] = json!(lit_prime);
        out["agree"] = json!(pass);
    }
    Ok((pass, out))
}

fn localize(ring_text: &str, prime: &str, bound: u64) -> Outcome {
    let r = ring(ring_text)?;
    let p = FgRingIdeal::principal(&r, &r.parse_element(prime)?)?;
    let loc = localize_at_prime(&SpectrumPoint::new(p)?)?;
    let mut out = zeta_kernel_probe(&loc, bound)?;
    out.note("local_ring", loc.ring_local().name());
    report(out)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::FgidTable { ring, max } => fgid_table(ring, *max),
        Command::Speck { ring, bound } => speck(ring, *bound),
        Command::Verify(v) => match v {
            Verify::RetractionCong { semiring } => report(verify_retraction_congruences(&semiring_file(semiring)?)?),
            Verify::RetractionIdeal { semiring } => report(verify_retraction_ideals(&semiring_file(semiring)?)?),
            Verify::Correspondence { ring, trials, seed } => {
                report(suite::correspondence_trials(&Backend::parse(ring)?, *trials, *seed)?)
            }
            Verify::Products { ring, trials, seed } => {
                report(suite::product_trials(&Backend::parse(ring)?, *trials, *seed)?)
            }
            Verify::Stalks { site } => stalks(site),
        },
        Command::Trop { gluing, covering, bound } => trop(gluing, covering, *bound),
        Command::CompareSheaves { ring, opens, bound, quotient } => compare(ring, opens, *bound, quotient.as_deref()),
        Command::Radical(args) => radical(args),
        Command::Primary(args) => primary(args),
        Command::Localize { ring, prime, bound } => localize(ring, prime, *bound),
    }
}

fn summarize(v: &Value) -> String {
    let mut parts = Vec::new();
    for key in ["theorem", "semiring", "ring", "pass", "checks", "count", "point_count"] {
        if let Some(x) = v.get(key) {
            parts.push(format!("{key}: {x}"));
        }
    }
    if let Some(Value::Array(ws)) = v.get("witnesses").or_else(|| v.pointer("/report/witnesses")) {
        if let Some(w) = ws.first() {
            parts.push(format!("first witness: {w}"));
        }
    }
    if let Some(Value::Object(d)) = v.get("details") {
        for (k, x) in d.iter().filter(|(_, x)| !x.is_array() && !x.is_object()) {
            parts.push(format!("{k}: {x}"));
        }
    }
    parts.join("\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, out) = match run(&cli) {
        Ok((pass, out)) => (if pass { 0 } else { 1 }, out),
        Err(Failure::Theorem(out)) => (1, out),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = if cli.summary {
        summarize(&out)
    } else {
        serde_json::to_string_pretty(&out).expect("json values serialize")
    };
    // a closed pipe (e.g. `| head`) is not an error worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(code)
}
