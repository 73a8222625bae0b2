//! Command-line front end: loads Galois datum files, runs the library's
//! computations, prints JSON to standard output and a one-line human summary
//! to standard error. Exit code 0 means success, 1 a domain or verification
//! failure, 2 a usage error.

mod scenario;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use cmhodge::{
    cm_type_classes, decompose, dominate, enumerate_cm_types, galois_orbits_of_cm_types,
    hodge_dimension, is_nondegenerate, is_transitive_on_cm_types, mt_dimension, spectrum,
    verify_certificate, verify_recipe, CMGaloisDatum, CMType, CertificateWire, ClassWire,
    ConstituentWire, DatumWire, HodgeTypeFn, RecipeWire, DEFAULT_BUDGET,
};

use scenario::{DatumSource, ScenarioFile, SCENARIO_NAMES};

#[derive(Parser)]
#[command(
    name = "cmhodge",
    version,
    about = "CM Hodge structure calculator: CM types, torus dimensions, cohomology constituents, and realization certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a Galois datum file and summarize its structure
    Validate(DatumArg),
    /// List the CM types of a datum in canonical order
    Cmtypes(DatumArg),
    /// Galois orbits and translation classes of the CM types
    Classes(DatumArg),
    /// Split an effective type function into weight-1 layers
    Decompose(DecomposeArgs),
    /// Mumford-Tate and Hodge torus dimensions
    Rank(RankArgs),
    /// Exponent classes and constituents of H^n of the k-th power
    Spectrum(SpectrumArgs),
    /// Emit one verified realization certificate per constituent
    Dominate(SpectrumArgs),
    /// Re-check certificates from a file
    Verify(VerifyArgs),
    /// Run a built-in or external scenario and compare against its expectations
    Scenario(ScenarioArgs),
}

#[derive(Args)]
struct DatumArg {
    /// Path to a JSON datum file: group, fixing subgroup, conjugation element
    #[arg(long)]
    datum: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Type function values, one per embedding, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    phi: Vec<i64>,
    /// Weight of the type function
    #[arg(long)]
    weight: i64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["cmtype", "phi"])))]
struct RankArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Index of a CM type in canonical enumeration order
    #[arg(long)]
    cmtype: Option<usize>,
    /// Type function values, one per embedding, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "weight")]
    phi: Option<Vec<i64>>,
    /// Weight of the type function (with --phi)
    #[arg(long)]
    weight: Option<i64>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Index of a CM type in canonical enumeration order
    #[arg(long)]
    cmtype: usize,
    /// Cohomology degree n
    #[arg(short = 'n', long = "degree")]
    n: u32,
    /// Power k of the abelian variety
    #[arg(short = 'k', long = "power")]
    k: u32,
    /// Maximum number of exponent vectors to enumerate before giving up
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    datum: DatumArg,
    /// Certificate file: the `dominate` output or a bare certificate list
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").required(true).args(["name", "file", "list"])))]
struct ScenarioArgs {
    /// Name of a built-in scenario
    name: Option<String>,
    /// Path to an external scenario file (datum paths resolve next to it)
    #[arg(long)]
    file: Option<PathBuf>,
    /// List the built-in scenario names
    #[arg(long)]
    list: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            let payload = json!({ "error": format!("{err:#}") });
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).expect("error payload serializes")
            );
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Validate(args) => cmd_validate(&args),
        Command::Cmtypes(args) => cmd_cmtypes(&args),
        Command::Classes(args) => cmd_classes(&args),
        Command::Decompose(args) => cmd_decompose(&args),
        Command::Rank(args) => cmd_rank(&args),
        Command::Spectrum(args) => cmd_spectrum(&args),
        Command::Dominate(args) => cmd_dominate(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Scenario(args) => cmd_scenario(&args),
    }
}

fn emit(value: &Value, summary: &str) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    eprintln!("{summary}");
    Ok(())
}

fn load_datum(path: &Path) -> Result<Arc<CMGaloisDatum>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading datum file {}", path.display()))?;
    let wire: DatumWire = serde_json::from_str(&text)
        .with_context(|| format!("parsing datum file {}", path.display()))?;
    Ok(wire.to_datum()?)
}

fn cm_type_by_index(datum: &Arc<CMGaloisDatum>, index: usize) -> Result<CMType> {
    let all = enumerate_cm_types(datum)?;
    let count = all.len();
    all.into_iter().nth(index).ok_or_else(|| {
        anyhow!("CM type index {index} is out of range; the datum has {count} CM types")
    })
}

fn cmd_validate(args: &DatumArg) -> Result<ExitCode> {
    let datum = load_datum(&args.datum)?;
    let pairs: Vec<Vec<usize>> = datum
        .conjugate_pairs()
        .iter()
        .map(|&(a, b)| vec![a, b])
        .collect();
    let value = json!({
        "group_order": datum.group().order(),
        "degree": datum.degree(),
        "fixing": datum.fixing().members(),
        "rho": datum.rho(),
        "embeddings": datum.embeddings().cosets(),
        "conjugate_pairs": pairs,
    });
    emit(
        &value,
        &format!(
            "valid: group of order {}, degree {}, conjugation by element {}",
            datum.group().order(),
            datum.degree(),
            datum.rho()
        ),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_cmtypes(args: &DatumArg) -> Result<ExitCode> {
    let datum = load_datum(&args.datum)?;
    let cm_types = enumerate_cm_types(&datum)?;
    let members: Vec<&[usize]> = cm_types.iter().map(|t| t.members()).collect();
    let value = json!({
        "count": cm_types.len(),
        "cm_types": members,
    });
    emit(
        &value,
        &format!("{} CM types of degree {}", cm_types.len(), datum.degree()),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classes(args: &DatumArg) -> Result<ExitCode> {
    let datum = load_datum(&args.datum)?;
    let orbits = galois_orbits_of_cm_types(&datum)?;
    let transitive = is_transitive_on_cm_types(&datum)?;
    let classes = cm_type_classes(&datum)?;
    let value = json!({
        "orbits": orbits,
        "transitive": transitive,
        "classes": classes,
    });
    emit(
        &value,
        &format!(
            "{} Galois orbit(s), {}transitive, {} translation class(es)",
            orbits.len(),
            if transitive { "" } else { "not " },
            classes.len()
        ),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<ExitCode> {
    let datum = load_datum(&args.datum.datum)?;
    let phi = HodgeTypeFn::new(&datum, args.weight, &args.phi)?;
    let recipe = decompose(&phi)?;
    let report = verify_recipe(&phi, &recipe);
    if !report.ok() {
        bail!(
            "decomposition failed its own re-check: {}",
            report.failures.join("; ")
        );
    }
    let value = serde_json::to_value(RecipeWire::from_recipe(&recipe))?;
    emit(
        &value,
        &format!("{} weight-1 layers; re-check passed", recipe.layers().len()),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_rank(args: &RankArgs) -> Result<ExitCode> {
    let datum = load_datum(&args.datum.datum)?;
    let (phi, nondegenerate) = match (args.cmtype, &args.phi) {
        (Some(index), None) => {
            let cm_type = cm_type_by_index(&datum, index)?;
            let phi = HodgeTypeFn::from_cm_type(&cm_type);
            (phi, Value::Bool(is_nondegenerate(&cm_type)))
        }
        (None, Some(values)) => {
            let weight = args.weight.expect("clap enforces --weight with --phi");
            (HodgeTypeFn::new(&datum, weight, values)?, Value::Null)
        }
        _ => unreachable!("clap enforces exactly one of --cmtype and --phi"),
    };
    let mt = mt_dimension(&phi);
    let hodge = hodge_dimension(&phi);
    let value = json!({
        "mt_dim": mt,
        "hodge_dim": hodge,
        "nondegenerate": nondegenerate,
    });
    let note = match &value["nondegenerate"] {
        Value::Bool(true) => ", nondegenerate",
        Value::Bool(false) => ", degenerate",
        _ => "",
    };
    emit(
        &value,
        &format!("Mumford-Tate dimension {mt}, Hodge dimension {hodge}{note}"),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<ExitCode> {
    let datum = load_datum(&args.datum.datum)?;
    let cm_type = cm_type_by_index(&datum, args.cmtype)?;
    let spec = spectrum(&cm_type, args.n, args.k, args.budget)?;
    let classes: Vec<ClassWire> = spec.classes().iter().map(ClassWire::from_class).collect();
    let constituents: Vec<ConstituentWire> = spec
        .constituents()
        .iter()
        .map(ConstituentWire::from_constituent)
        .collect();
    let value = json!({
        "weight": spec.weight(),
        "power": spec.power(),
        "classes": classes,
        "constituents": constituents,
        "total_multiplicity": spec.total_multiplicity().to_string(),
        "expected_dimension": spec.expected_dimension().to_string(),
    });
    emit(
        &value,
        &format!(
            "{} classes in {} constituents, total multiplicity {} (expected {})",
            spec.classes().len(),
            spec.constituents().len(),
            spec.total_multiplicity(),
            spec.expected_dimension()
        ),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dominate(args: &SpectrumArgs) -> Result<ExitCode> {
    let datum = load_datum(&args.datum.datum)?;
    let cm_type = cm_type_by_index(&datum, args.cmtype)?;
    let certs = dominate(&cm_type, args.n, args.k, args.budget)?;
    let wires: Vec<CertificateWire> = certs.iter().map(CertificateWire::from_certificate).collect();
    let all_verified = wires.iter().all(|w| w.verified);
    let value = json!({ "certificates": wires });
    emit(
        &value,
        &format!(
            "{} certificate(s), {}",
            certs.len(),
            if all_verified {
                "all verified"
            } else {
                "NOT all verified"
            }
        ),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let datum = load_datum(&args.datum.datum)?;
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading certificate file {}", args.input.display()))?;
    let parsed: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing certificate file {}", args.input.display()))?;
    let list = match &parsed {
        Value::Object(map) => map
            .get("certificates")
            .cloned()
            .ok_or_else(|| anyhow!("expected a \"certificates\" list or a bare JSON array"))?,
        Value::Array(_) => parsed.clone(),
        _ => bail!("expected a \"certificates\" list or a bare JSON array"),
    };
    let wires: Vec<CertificateWire> = serde_json::from_value(list)?;
    let mut results = Vec::with_capacity(wires.len());
    let mut all_verified = true;
    for (index, wire) in wires.iter().enumerate() {
        let report = match wire.to_certificate(&datum) {
            Ok(cert) => verify_certificate(&cert),
            Err(err) => cmhodge::VerificationReport {
                failures: vec![format!("certificate does not parse: {err}")],
            },
        };
        all_verified &= report.ok();
        results.push(json!({
            "index": index,
            "verified": report.ok(),
            "failures": report.failures,
        }));
    }
    let value = json!({
        "all_verified": all_verified,
        "results": results,
    });
    let passed = results
        .iter()
        .filter(|r| r["verified"] == Value::Bool(true))
        .count();
    emit(
        &value,
        &format!("{passed}/{} certificates verified", wires.len()),
    )?;
    Ok(if all_verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_scenario(args: &ScenarioArgs) -> Result<ExitCode> {
    if args.list {
        let value = json!({ "scenarios": SCENARIO_NAMES });
        emit(&value, &format!("{} built-in scenarios", SCENARIO_NAMES.len()))?;
        return Ok(ExitCode::SUCCESS);
    }
    let (file, source) = if let Some(path) = &args.file {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading scenario file {}", path.display()))?;
        let parsed: ScenarioFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing scenario file {}", path.display()))?;
        let dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .to_path_buf();
        (parsed, DatumSource::Dir(dir))
    } else {
        let name = args.name.as_deref().expect("clap enforces a scenario name");
        let text = scenario::embedded_scenario(name).ok_or_else(|| {
            anyhow!("unknown scenario {name:?}; `cmhodge scenario --list` shows the built-in names")
        })?;
        let parsed: ScenarioFile =
            serde_json::from_str(text).expect("built-in scenario fixtures parse");
        (parsed, DatumSource::Embedded)
    };
    let outcome = scenario::run(&file, &source)?;
    let pass = outcome.pass();
    let value = json!({
        "name": file.name,
        "description": file.description,
        "origin": file.origin,
        "pass": pass,
        "mismatches": outcome.mismatches,
        "expected": file.expected,
        "actual": outcome.actual,
    });
    emit(
        &value,
        &format!(
            "scenario {}: {}",
            file.name,
            if pass { "pass" } else { "FAIL" }
        ),
    )?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
