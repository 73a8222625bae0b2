//! Named end-to-end scenarios: a fixture datum (or product of data), the
//! computations to run against it, and the summary values those computations
//! are expected to produce. The runner recomputes everything and reports any
//! field where the result disagrees with the fixture.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use cmhodge::{
    cm_type_classes, decompose, dominate, enumerate_cm_types, galois_orbits_of_cm_types,
    hodge_dimension, is_nondegenerate, is_transitive_on_cm_types, mt_dimension, product_datum,
    product_factorization_check, product_hodge_dimension, spectrum, verify_certificate,
    verify_recipe, CMGaloisDatum, CMType, DatumWire, HodgeTypeFn, DEFAULT_BUDGET,
};

/// A scenario fixture file. Exactly one of `datum` or `factors` drives it:
/// single-datum scenarios summarize CM types, torus ranks, and optionally a
/// decomposition and a spectrum; product scenarios compare combined and
/// per-factor Hodge dimensions.
#[derive(Debug, Deserialize)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Free-text note on where the expected values come from.
    #[serde(default)]
    pub origin: String,
    #[serde(default)]
    pub datum: Option<String>,
    /// Members of the CM type to rank (and to power up for the spectrum).
    #[serde(default)]
    pub cm_type: Option<Vec<usize>>,
    #[serde(default)]
    pub phi: Option<PhiSection>,
    #[serde(default)]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default)]
    pub factors: Option<Vec<String>>,
    /// One CM type per product factor, as member lists.
    #[serde(default)]
    pub factor_types: Option<Vec<Vec<usize>>>,
    pub expected: Value,
}

#[derive(Debug, Deserialize)]
pub struct PhiSection {
    pub weight: i64,
    pub values: Vec<i64>,
}

#[derive(Debug, Deserialize)]
pub struct SpectrumSection {
    pub n: u32,
    pub k: u32,
    #[serde(default)]
    pub budget: Option<u64>,
}

/// Built-in scenario names, in the order `--list` reports them.
pub const SCENARIO_NAMES: &[&str] = &[
    "imaginary-quadratic",
    "cyclic-quartic",
    "d4-quartic",
    "biquadratic-degenerate",
    "two-quadratic-product",
    "three-quadratic-product",
    "quartic-quadratic-product",
];

/// The fixture text baked into the binary for a built-in scenario name.
pub fn embedded_scenario(name: &str) -> Option<&'static str> {
    Some(match name {
        "imaginary-quadratic" => include_str!("../fixtures/scenarios/imaginary-quadratic.json"),
        "cyclic-quartic" => include_str!("../fixtures/scenarios/cyclic-quartic.json"),
        "d4-quartic" => include_str!("../fixtures/scenarios/d4-quartic.json"),
        "biquadratic-degenerate" => {
            include_str!("../fixtures/scenarios/biquadratic-degenerate.json")
        }
        "two-quadratic-product" => include_str!("../fixtures/scenarios/two-quadratic-product.json"),
        "three-quadratic-product" => {
            include_str!("../fixtures/scenarios/three-quadratic-product.json")
        }
        "quartic-quadratic-product" => {
            include_str!("../fixtures/scenarios/quartic-quadratic-product.json")
        }
        _ => return None,
    })
}

fn embedded_datum(file: &str) -> Option<&'static str> {
    Some(match file {
        "c2.json" => include_str!("../fixtures/c2.json"),
        "c4.json" => include_str!("../fixtures/c4.json"),
        "c6.json" => include_str!("../fixtures/c6.json"),
        "d4.json" => include_str!("../fixtures/d4.json"),
        "biquadratic.json" => include_str!("../fixtures/biquadratic.json"),
        _ => return None,
    })
}

/// Where a scenario's datum files come from: baked into the binary for the
/// built-in scenarios, or a directory next to an external scenario file.
pub enum DatumSource {
    Embedded,
    Dir(PathBuf),
}

impl DatumSource {
    fn read(&self, file: &str) -> Result<String> {
        match self {
            DatumSource::Embedded => embedded_datum(file)
                .map(str::to_owned)
                .ok_or_else(|| anyhow!("no embedded datum file named {file:?}")),
            DatumSource::Dir(dir) => {
                let path = dir.join(file);
                fs::read_to_string(&path)
                    .with_context(|| format!("reading datum file {}", path.display()))
            }
        }
    }

    fn load(&self, file: &str) -> Result<Arc<CMGaloisDatum>> {
        let text = self.read(file)?;
        let wire: DatumWire =
            serde_json::from_str(&text).with_context(|| format!("parsing datum file {file:?}"))?;
        Ok(wire.to_datum()?)
    }
}

/// What running one scenario produced: the recomputed summary and every
/// field where it disagrees with the fixture's expectations.
pub struct Outcome {
    pub actual: Value,
    pub mismatches: Vec<String>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Runs a scenario and compares the recomputed summary against the
/// fixture's `expected` block, field by field (extra computed fields are
/// fine; missing or differing ones are mismatches).
pub fn run(file: &ScenarioFile, source: &DatumSource) -> Result<Outcome> {
    let mut actual = Map::new();
    if let Some(datum_file) = &file.datum {
        let datum = source.load(datum_file)?;
        single_datum_summary(file, &datum, &mut actual)?;
    }
    if let Some(factor_files) = &file.factors {
        product_summary(file, factor_files, source, &mut actual)?;
    }
    if actual.is_empty() {
        bail!("scenario {:?} names neither a datum nor product factors", file.name);
    }
    let actual = Value::Object(actual);
    let mut mismatches = Vec::new();
    subset_match(&file.expected, &actual, "expected", &mut mismatches);
    Ok(Outcome { actual, mismatches })
}

fn single_datum_summary(
    file: &ScenarioFile,
    datum: &Arc<CMGaloisDatum>,
    out: &mut Map<String, Value>,
) -> Result<()> {
    out.insert("group_order".into(), json!(datum.group().order()));
    out.insert("degree".into(), json!(datum.degree()));

    let cm_types = enumerate_cm_types(datum)?;
    out.insert("cm_type_count".into(), json!(cm_types.len()));
    let orbits = galois_orbits_of_cm_types(datum)?;
    let orbit_sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    out.insert("orbit_sizes".into(), json!(orbit_sizes));
    out.insert(
        "transitive".into(),
        json!(is_transitive_on_cm_types(datum)?),
    );
    let classes = cm_type_classes(datum)?;
    out.insert("class_count".into(), json!(classes.len()));
    out.insert("classes".into(), json!(classes));

    if let Some(members) = &file.cm_type {
        let cm_type = CMType::new(datum, members)?;
        let chi = HodgeTypeFn::from_cm_type(&cm_type);
        out.insert("mt_dim".into(), json!(mt_dimension(&chi)));
        out.insert("hodge_dim".into(), json!(hodge_dimension(&chi)));
        out.insert("nondegenerate".into(), json!(is_nondegenerate(&cm_type)));

        if let Some(params) = &file.spectrum {
            let budget = params.budget.unwrap_or(DEFAULT_BUDGET);
            let spec = spectrum(&cm_type, params.n, params.k, budget)?;
            let certs = dominate(&cm_type, params.n, params.k, budget)?;

            let mut section = Map::new();
            section.insert("classes".into(), json!(spec.classes().len()));
            section.insert("constituents".into(), json!(spec.constituents().len()));
            section.insert(
                "total_multiplicity".into(),
                json!(spec.total_multiplicity().to_string()),
            );
            section.insert(
                "expected_dimension".into(),
                json!(spec.expected_dimension().to_string()),
            );
            let mut tate = BigUint::from(0u32);
            for constituent in spec.constituents().iter().filter(|c| c.is_tate()) {
                tate += constituent.multiplicity();
            }
            section.insert("tate_multiplicity".into(), json!(tate.to_string()));
            let mut hodge_mults = Map::new();
            let ps: std::collections::BTreeSet<i64> =
                spec.classes().iter().map(|c| c.p).collect();
            for p in ps {
                hodge_mults.insert(p.to_string(), json!(spec.hodge_multiplicity(p).to_string()));
            }
            section.insert("hodge_multiplicities".into(), Value::Object(hodge_mults));
            section.insert("certificates".into(), json!(certs.len()));
            section.insert(
                "all_certificates_verified".into(),
                json!(certs.iter().all(|c| verify_certificate(c).ok())),
            );
            section.insert(
                "certificates_without_lift".into(),
                json!(certs
                    .iter()
                    .filter(|c| !c.constituent().is_tate() && c.lifted_layers().is_none())
                    .count()),
            );
            let order = datum.group().order();
            section.insert(
                "proper_intermediate_fields".into(),
                json!(spec.constituents().iter().any(|c| {
                    let fixed = c.field_fixing().len();
                    fixed > 1 && fixed < order
                })),
            );
            out.insert("spectrum".into(), Value::Object(section));
        }
    }

    if let Some(section) = &file.phi {
        let phi = HodgeTypeFn::new(datum, section.weight, &section.values)?;
        let recipe = decompose(&phi)?;
        let layers: Vec<Vec<usize>> = recipe
            .layers()
            .iter()
            .map(|t| t.members().to_vec())
            .collect();
        out.insert("decompose_layers".into(), json!(layers));
        out.insert(
            "recipe_verified".into(),
            json!(verify_recipe(&phi, &recipe).ok()),
        );
    }

    Ok(())
}

fn product_summary(
    file: &ScenarioFile,
    factor_files: &[String],
    source: &DatumSource,
    out: &mut Map<String, Value>,
) -> Result<()> {
    let factors: Vec<Arc<CMGaloisDatum>> = factor_files
        .iter()
        .map(|f| source.load(f))
        .collect::<Result<_>>()?;
    let type_lists = file
        .factor_types
        .as_ref()
        .ok_or_else(|| anyhow!("product scenarios need factor_types, one CM type per factor"))?;
    if type_lists.len() != factors.len() {
        bail!(
            "{} factors but {} factor_types",
            factors.len(),
            type_lists.len()
        );
    }
    let product = product_datum(&factors)?;
    let types: Vec<CMType> = factors
        .iter()
        .zip(type_lists)
        .map(|(datum, members)| CMType::new(datum, members))
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = types
        .iter()
        .map(|t| hodge_dimension(&HodgeTypeFn::from_cm_type(t)))
        .collect();
    out.insert("factor_hodge_dims".into(), json!(dims));
    out.insert(
        "combined_hodge_dim".into(),
        json!(product_hodge_dimension(&product, &types)?),
    );
    out.insert(
        "factorization_splits".into(),
        json!(product_factorization_check(&product, &types)?),
    );
    Ok(())
}

/// Every field in `expected` must be present and equal in `actual`; objects
/// are compared key by key so the computed summary may carry extra fields.
fn subset_match(expected: &Value, actual: &Value, path: &str, out: &mut Vec<String>) {
    match (expected, actual) {
        (Value::Object(exp), Value::Object(act)) => {
            for (key, exp_value) in exp {
                let child = format!("{path}.{key}");
                match act.get(key) {
                    Some(act_value) => subset_match(exp_value, act_value, &child, out),
                    None => out.push(format!(
                        "{child}: expected {exp_value} but nothing was computed"
                    )),
                }
            }
        }
        _ => {
            if expected != actual {
                out.push(format!("{path}: expected {expected}, got {actual}"));
            }
        }
    }
}
