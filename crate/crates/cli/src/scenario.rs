//! Scenario files: parsing, overrides and dispatch.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use qcalc_core::{Exec, RngStreams, Tolerances};

use crate::error::{CliError, Result};
use crate::kinds;
use crate::report::{Report, ScenarioEcho};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    AxiomCheck,
    Chsh,
    MerminPeres,
    Complementarity,
    Uncertainty,
    WeakLaw,
    Effects,
    Hydrogen,
    Moon,
    Dynamics,
    YoungMeasure,
}

impl Kind {
    pub const ALL: [Kind; 11] = [
        Kind::AxiomCheck,
        Kind::Chsh,
        Kind::MerminPeres,
        Kind::Complementarity,
        Kind::Uncertainty,
        Kind::WeakLaw,
        Kind::Effects,
        Kind::Hydrogen,
        Kind::Moon,
        Kind::Dynamics,
        Kind::YoungMeasure,
    ];

    pub const NAMES: [&'static str; 11] = [
        "axiom-check",
        "chsh",
        "mermin-peres",
        "complementarity",
        "uncertainty",
        "weak-law",
        "effects",
        "hydrogen",
        "moon",
        "dynamics",
        "young-measure",
    ];

    pub fn name(self) -> &'static str {
        let i = Self::ALL.iter().position(|&k| k == self).expect("listed");
        Self::NAMES[i]
    }

    pub fn parse(name: &str) -> Result<Kind> {
        Self::NAMES
            .iter()
            .position(|&n| n == name)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| CliError::UnknownKind(name.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    kind: String,
    #[serde(default)]
    params: Map<String, Value>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub kind: Kind,
    pub params: Map<String, Value>,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
}

/// Command-line overrides applied on top of a scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// `--seed`, which beats the scenario's own seed.
    pub seed: Option<u64>,
    /// `QCALC_SEED`, used when neither the flag nor the file sets a seed.
    pub env_seed: Option<u64>,
    /// `--tol key=val` entries.
    pub tolerances: Vec<(String, f64)>,
}

impl RunOptions {
    fn effective_seed(&self, scenario: &Scenario) -> u64 {
        self.seed.or(scenario.seed).or(self.env_seed).unwrap_or(0)
    }
}

/// Parse a `key=value` tolerance override.
pub fn parse_tolerance_override(text: &str) -> Result<(String, f64)> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| CliError::Param(format!("--tol expects key=value, got {text:?}")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Param(format!("--tol {key}: {value:?} is not a number")))?;
    let mut probe = Tolerances::default();
    probe.set(key.trim(), value)?;
    Ok((key.trim().to_string(), value))
}

/// Parse a scenario document: a single object or an array of objects.
pub fn parse_scenarios(text: &str, origin: &str) -> Result<Vec<Scenario>> {
    let parse_err = |e: serde_json::Error| CliError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    let raws: Vec<RawScenario> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(parse_err)?
    } else {
        vec![serde_json::from_str(text).map_err(parse_err)?]
    };
    raws.into_iter()
        .map(|raw| {
            let tolerances = raw.tolerances.unwrap_or_default();
            tolerances.validate()?;
            Ok(Scenario {
                kind: Kind::parse(&raw.kind)?,
                name: raw.name,
                params: raw.params,
                seed: raw.seed,
                tolerances,
            })
        })
        .collect()
}

pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenarios(&text, &path.display().to_string())
}

/// Typed access to a scenario's parameter map. Keys that are never read are
/// reported as errors by [`Params::finish`].
pub struct Params<'a> {
    map: &'a Map<String, Value>,
    used: RefCell<BTreeSet<String>>,
}

impl<'a> Params<'a> {
    pub fn new(map: &'a Map<String, Value>) -> Self {
        Self {
            map,
            used: RefCell::new(BTreeSet::new()),
        }
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str, default: T) -> Result<T> {
        self.used.borrow_mut().insert(key.to_string());
        match self.map.get(key) {
            None => Ok(default),
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| CliError::Param(format!("{key}: {e}"))),
        }
    }

    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self
            .map
            .keys()
            .filter(|k| !used.contains(*k))
            .map(String::as_str)
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Param(format!("unknown parameter(s): {}", unknown.join(", "))))
        }
    }
}

/// Everything a scenario runner needs.
pub struct Context<'a> {
    pub params: Params<'a>,
    pub tol: Tolerances,
    pub streams: RngStreams,
}

pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<Report> {
    let mut tol = scenario.tolerances;
    for (key, value) in &opts.tolerances {
        tol.set(key, *value)?;
    }
    tol.validate()?;
    let seed = opts.effective_seed(scenario);
    let ctx = Context {
        params: Params::new(&scenario.params),
        tol,
        streams: RngStreams::new(seed, &scenario.name),
    };
    let rows = kinds::run_kind(scenario.kind, &ctx)?;
    ctx.params.finish()?;
    let echo = ScenarioEcho {
        name: scenario.name.clone(),
        kind: scenario.kind.name().to_string(),
        seed,
        params: scenario.params.clone(),
        tolerances: tol,
    };
    Ok(Report::new(echo, rows))
}

#[derive(Debug)]
pub struct Timed {
    pub report: Report,
    pub elapsed: Duration,
}

/// Run scenarios concurrently; results are ordered by scenario name.
pub fn run_batch(scenarios: &[Scenario], opts: &RunOptions) -> Result<Vec<Timed>> {
    let mut order: Vec<&Scenario> = scenarios.iter().collect();
    order.sort_by(|a, b| a.name.cmp(&b.name));
    Exec::Parallel
        .map(order.len(), |i| {
            let start = Instant::now();
            run(order[i], opts).map(|report| Timed {
                report,
                elapsed: start.elapsed(),
            })
        })
        .into_iter()
        .collect()
}

/// Load and run every scenario in `path`.
pub fn run_scenario(path: &Path, opts: &RunOptions) -> Result<Vec<Report>> {
    let scenarios = load_scenarios(path)?;
    Ok(run_batch(&scenarios, opts)?.into_iter().map(|t| t.report).collect())
}
