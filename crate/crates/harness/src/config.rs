//! Experiment configuration: schema, environment overrides and validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use convexreg_core::body::json::parse_body;
use convexreg_core::body::ConvexBody;
use convexreg_core::functional::json::parse_function;
use convexreg_core::functional::LogConcaveFn;
use convexreg_core::numerics::linalg::{gaussian_vector, Matrix};
use convexreg_core::numerics::RngStream;
use convexreg_core::{Config, Exec};

use crate::error::HarnessError;
use crate::suites::Suite;

/// Monte Carlo budgets. Every field can be overridden by the environment
/// variable `CONVEXREG_<FIELD>` (upper case), e.g. `CONVEXREG_DIRECTIONS`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Sphere directions per volume or mean-width estimate.
    pub directions: usize,
    /// Directions for rows compared against exact closed forms.
    pub oracle_directions: usize,
    /// Directions for barycenter, Santaló point and isotropic estimates.
    pub moment_directions: usize,
    /// Directions at which pointwise oracle identities are checked.
    pub identity_directions: usize,
    /// Haar subspaces per Grassmannian average.
    pub subspaces: usize,
    /// Random subspaces per body in the projection and section suites.
    pub theorem_subspaces: usize,
    /// Haar subspaces behind each empirical quantile.
    pub quantile_subspaces: usize,
    /// Directions per volume estimate inside the quantile sweep.
    pub quantile_directions: usize,
    /// Directions for functional ratio checks.
    pub functional_directions: usize,
    /// Directions for the Ball-body regularization bands, whose radial
    /// functions need nested minimizations.
    pub band_directions: usize,
    /// Pattern-search steps after the translate grid.
    pub local_steps: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            directions: 400,
            oracle_directions: 1_000_000,
            moment_directions: 4000,
            identity_directions: 500,
            subspaces: 24,
            theorem_subspaces: 2,
            quantile_subspaces: 200,
            quantile_directions: 96,
            functional_directions: 24,
            band_directions: 6,
            local_steps: 20,
        }
    }
}

impl Budgets {
    fn fields_mut(&mut self) -> [(&'static str, &mut usize); 11] {
        [
            ("directions", &mut self.directions),
            ("oracle_directions", &mut self.oracle_directions),
            ("moment_directions", &mut self.moment_directions),
            ("identity_directions", &mut self.identity_directions),
            ("subspaces", &mut self.subspaces),
            ("theorem_subspaces", &mut self.theorem_subspaces),
            ("quantile_subspaces", &mut self.quantile_subspaces),
            ("quantile_directions", &mut self.quantile_directions),
            ("functional_directions", &mut self.functional_directions),
            ("band_directions", &mut self.band_directions),
            ("local_steps", &mut self.local_steps),
        ]
    }

    /// Applies `CONVEXREG_*` overrides read through `lookup`.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<(), HarnessError> {
        for (name, slot) in self.fields_mut() {
            let var = format!("CONVEXREG_{}", name.to_uppercase());
            if let Some(raw) = lookup(&var) {
                *slot = raw
                    .trim()
                    .parse()
                    .map_err(|_| HarnessError::Invalid(format!("{var}={raw:?} is not a non-negative integer")))?;
            }
        }
        Ok(())
    }

    fn validate(&mut self) -> Result<(), HarnessError> {
        for (name, slot) in self.fields_mut() {
            if *slot == 0 && name != "local_steps" {
                return Err(HarnessError::Invalid(format!("budget \"{name}\" must be positive")));
            }
        }
        Ok(())
    }
}

/// Comparison slack and calibration settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub sigma: f64,
    pub relative_slack: f64,
    /// Factor applied to calibrated constants on the evaluation seed.
    pub headroom: f64,
    /// Allowed growth of a per-dimension calibrated constant.
    pub drift: f64,
    /// Pointwise agreement required between two exact oracle routes.
    pub oracle: f64,
    /// Stand-in for the unspecified constant in the Bourgain–Milman bound.
    pub bourgain_milman_c: f64,
}

impl Default for ToleranceOverrides {
    fn default() -> Self {
        Self { sigma: 3.0, relative_slack: 1e-3, headroom: 1.25, drift: 0.25, oracle: 1e-9, bourgain_milman_c: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinePerturbation {
    pub seed: u64,
    /// Operator norm scale of the Gaussian perturbation of the identity.
    pub size: f64,
}

/// One corpus body: inline JSON or a file, instantiated in every listed
/// dimension when the description leaves `n` open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyEntry {
    pub id: String,
    #[serde(default)]
    pub body: Option<Value>,
    #[serde(default)]
    pub file: Option<PathBuf>,
    /// Restricts the entry to these dimensions.
    #[serde(default)]
    pub dimensions: Option<Vec<usize>>,
    #[serde(default)]
    pub affine: Option<AffinePerturbation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub id: String,
    #[serde(default)]
    pub function: Option<Value>,
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub dimensions: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Used when `--out` is not given.
    pub dir: Option<PathBuf>,
    /// Writes wall-clock milliseconds into the `ms` column. Off by default
    /// because timings break byte-identical reports.
    pub timings: bool,
}

/// The on-disk experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suites: Vec<String>,
    pub corpus: Vec<BodyEntry>,
    #[serde(default)]
    pub functions: Option<Vec<FunctionEntry>>,
    /// Dimensions for every suite without an entry in `suite_dimensions`.
    #[serde(default)]
    pub dimensions: Option<Vec<usize>>,
    #[serde(default)]
    pub suite_dimensions: BTreeMap<String, Vec<usize>>,
    /// Subspace dimensions; each suite keeps the values valid for its `n`.
    #[serde(default)]
    pub k: Option<Vec<usize>>,
    pub calibration_seed: u64,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    #[serde(default)]
    pub output: OutputConfig,
}

/// A corpus body in one dimension.
#[derive(Debug, Clone)]
pub struct CorpusBody {
    pub id: String,
    pub body: ConvexBody,
}

#[derive(Debug, Clone)]
pub struct CorpusFunction {
    pub id: String,
    pub function: LogConcaveFn,
}

/// A validated configuration with descriptions resolved to JSON values.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub raw: ExperimentConfig,
    pub suites: Vec<Suite>,
    bodies: Vec<(BodyEntry, Value)>,
    functions: Vec<(FunctionEntry, Value)>,
}

fn read_json(path: &Path) -> Result<Value, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))
}

fn resolve(
    id: &str,
    inline: &Option<Value>,
    file: &Option<PathBuf>,
    base: &Path,
) -> Result<Value, HarnessError> {
    match (inline, file) {
        (Some(v), None) => Ok(v.clone()),
        (None, Some(f)) => {
            let path = if f.is_absolute() { f.clone() } else { base.join(f) };
            if !path.is_file() {
                return Err(HarnessError::Invalid(format!("entry \"{id}\": file {} does not exist", path.display())));
            }
            read_json(&path)
        }
        _ => Err(HarnessError::Invalid(format!("entry \"{id}\": give exactly one of an inline description or \"file\""))),
    }
}

fn declared_dim(v: &Value) -> Option<usize> {
    v.get("n").and_then(Value::as_u64).map(|n| n as usize)
}

/// Identity plus a seeded Gaussian perturbation of operator norm about `size`.
pub fn affine_map(n: usize, a: &AffinePerturbation) -> Matrix {
    let mut rng = RngStream::new(a.seed).child("affine").rng();
    let scale = a.size / (2.0 * (n as f64).sqrt());
    let mut m = Matrix::identity(n, n);
    for i in 0..n {
        let g = gaussian_vector(&mut rng, n);
        for j in 0..n {
            m[(i, j)] += scale * g[j];
        }
    }
    m
}

impl ExperimentConfig {
    pub fn from_str(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Invalid(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        if !path.is_file() {
            return Err(HarnessError::Invalid(format!("config file {} does not exist", path.display())));
        }
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_str(&text)
    }
}

impl Experiment {
    /// Loads, applies process environment overrides and validates.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let mut raw = ExperimentConfig::load(path)?;
        raw.budgets.apply_env(|k| std::env::var(k).ok())?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::new(raw, &base)
    }

    /// Validates `raw`; relative file references resolve against `base`.
    pub fn new(mut raw: ExperimentConfig, base: &Path) -> Result<Self, HarnessError> {
        if raw.suites.is_empty() {
            return Err(HarnessError::Invalid("no suites selected".into()));
        }
        let suites: Vec<Suite> = raw.suites.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        if raw.corpus.is_empty() {
            return Err(HarnessError::Invalid("the body corpus is empty".into()));
        }
        for name in raw.suite_dimensions.keys() {
            name.parse::<Suite>()?;
        }
        raw.budgets.validate()?;
        let t = &raw.tolerances;
        if !(t.sigma >= 0.0 && t.relative_slack >= 0.0 && t.headroom >= 1.0 && t.drift >= 0.0 && t.oracle > 0.0) {
            return Err(HarnessError::Invalid("tolerances must be non-negative and headroom at least 1".into()));
        }
        if !(t.bourgain_milman_c > 0.0 && t.bourgain_milman_c <= 1.0) {
            return Err(HarnessError::Invalid("bourgain_milman_c must lie in (0, 1]".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut bodies = Vec::new();
        for e in &raw.corpus {
            if !seen.insert(e.id.clone()) {
                return Err(HarnessError::Invalid(format!("duplicate corpus id \"{}\"", e.id)));
            }
            bodies.push((e.clone(), resolve(&e.id, &e.body, &e.file, base)?));
        }
        let mut functions = Vec::new();
        if let Some(fs) = &raw.functions {
            if fs.is_empty() && suites.contains(&Suite::Functional) {
                return Err(HarnessError::Invalid("the function corpus is empty".into()));
            }
            for e in fs {
                if !seen.insert(e.id.clone()) {
                    return Err(HarnessError::Invalid(format!("duplicate corpus id \"{}\"", e.id)));
                }
                functions.push((e.clone(), resolve(&e.id, &e.function, &e.file, base)?));
            }
        } else if suites.contains(&Suite::Functional) {
            return Err(HarnessError::Invalid("the functional suite needs a \"functions\" corpus".into()));
        }
        let exp = Self { raw, suites, bodies, functions };
        for &s in &exp.suites {
            let dims = exp.dimensions(s);
            if dims.is_empty() {
                return Err(HarnessError::Invalid(format!("suite {s} has no dimensions")));
            }
            if let Some(bad) = dims.iter().find(|&&n| n < s.min_dimension()) {
                return Err(HarnessError::Invalid(format!("suite {s} needs n >= {}, got {bad}", s.min_dimension())));
            }
            // Every description must build in every dimension it is used in.
            let mut count = 0;
            for &n in &dims {
                count += exp.bodies(n)?.len();
                if s == Suite::Functional {
                    count += exp.functions(n)?.len();
                }
            }
            if count == 0 {
                return Err(HarnessError::Invalid(format!("suite {s} has an empty corpus in dimensions {dims:?}")));
            }
        }
        Ok(exp)
    }

    pub fn dimensions(&self, s: Suite) -> Vec<usize> {
        self.raw
            .suite_dimensions
            .get(s.name())
            .cloned()
            .or_else(|| self.raw.dimensions.clone())
            .unwrap_or_else(|| s.default_dimensions().to_vec())
    }

    /// Subspace dimensions for ambient dimension `n`, restricted to `1..n`.
    pub fn ks(&self, n: usize, default: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
        let mut ks = match &self.raw.k {
            Some(k) => k.clone(),
            None => default(n),
        };
        ks.retain(|&k| k >= 1 && k < n);
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    fn applies(dims: &Option<Vec<usize>>, declared: Option<usize>, n: usize) -> bool {
        dims.as_ref().is_none_or(|d| d.contains(&n)) && declared.is_none_or(|d| d == n)
    }

    /// Corpus bodies in dimension `n`, in config order.
    pub fn bodies(&self, n: usize) -> Result<Vec<CorpusBody>, HarnessError> {
        let mut out = Vec::new();
        for (e, v) in &self.bodies {
            if !Self::applies(&e.dimensions, declared_dim(v), n) {
                continue;
            }
            let body = parse_body(v, Some(n)).map_err(|err| HarnessError::Invalid(format!("body \"{}\": {err}", e.id)))?;
            if body.dim() != n {
                continue;
            }
            let body = match &e.affine {
                Some(a) => body
                    .linear_image(&affine_map(n, a))
                    .map_err(|err| HarnessError::Invalid(format!("body \"{}\": {err}", e.id)))?,
                None => body,
            };
            out.push(CorpusBody { id: e.id.clone(), body });
        }
        Ok(out)
    }

    pub fn functions(&self, n: usize) -> Result<Vec<CorpusFunction>, HarnessError> {
        let mut out = Vec::new();
        for (e, v) in &self.functions {
            if !Self::applies(&e.dimensions, None, n) {
                continue;
            }
            let function =
                parse_function(v, Some(n)).map_err(|err| HarnessError::Invalid(format!("function \"{}\": {err}", e.id)))?;
            if function.dim() == n {
                out.push(CorpusFunction { id: e.id.clone(), function });
            }
        }
        Ok(out)
    }

    pub fn budgets(&self) -> &Budgets {
        &self.raw.budgets
    }

    pub fn tolerances(&self) -> &ToleranceOverrides {
        &self.raw.tolerances
    }

    /// Core configuration with `directions` sphere samples.
    pub fn core(&self, directions: usize) -> Config {
        let mut cfg = Config::default().with_directions(directions).with_subspaces(self.raw.budgets.subspaces);
        cfg.tol.sigma = self.raw.tolerances.sigma;
        cfg.tol.relative_slack = self.raw.tolerances.relative_slack;
        cfg.tol.headroom = self.raw.tolerances.headroom;
        cfg.tol.oracle = self.raw.tolerances.oracle;
        cfg.mc.batch_size = cfg.mc.batch_size.min(directions.div_ceil(4).max(16));
        if cfg!(not(feature = "parallel")) {
            cfg.mc.exec = Exec::Sequential;
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(extra: &str) -> String {
        format!(r#"{{"suites": ["duality"], "calibration_seed": 1, "corpus": [{{"id": "cube", "body": {{"type": "cube"}}}}] {extra}}}"#)
    }

    #[test]
    fn parses_and_defaults() {
        let raw = ExperimentConfig::from_str(&minimal("")).unwrap();
        let exp = Experiment::new(raw, Path::new(".")).unwrap();
        assert_eq!(exp.dimensions(Suite::Duality), Suite::Duality.default_dimensions());
        assert_eq!(exp.bodies(3).unwrap().len(), 1);
        assert_eq!(exp.budgets().directions, Budgets::default().directions);
    }

    #[test]
    fn rejects_unknown_fields_and_empty_corpus() {
        assert!(ExperimentConfig::from_str(&minimal(r#", "bogus": 1"#)).is_err());
        let raw = ExperimentConfig::from_str(
            r#"{"suites": ["duality"], "calibration_seed": 1, "corpus": []}"#,
        )
        .unwrap();
        assert!(Experiment::new(raw, Path::new(".")).is_err());
    }

    #[test]
    fn rejects_missing_files_and_unknown_suites() {
        let raw = ExperimentConfig::from_str(
            r#"{"suites": ["duality"], "calibration_seed": 1, "corpus": [{"id": "x", "file": "nope.json"}]}"#,
        )
        .unwrap();
        assert!(Experiment::new(raw, Path::new("/nonexistent")).is_err());
        let raw = ExperimentConfig::from_str(&minimal("").replace("duality", "nope")).unwrap();
        assert!(Experiment::new(raw, Path::new(".")).is_err());
    }

    #[test]
    fn env_overrides() {
        let mut b = Budgets::default();
        b.apply_env(|k| (k == "CONVEXREG_DIRECTIONS").then(|| "77".to_string())).unwrap();
        assert_eq!(b.directions, 77);
        assert!(b.apply_env(|k| (k == "CONVEXREG_SUBSPACES").then(|| "x".to_string())).is_err());
    }

    #[test]
    fn fixed_dimension_bodies_only_in_their_dimension() {
        let raw = ExperimentConfig::from_str(
            r#"{"suites": ["classics"], "calibration_seed": 1, "dimensions": [2, 3],
                "corpus": [{"id": "tri", "body": {"type": "vpolytope", "vertices": [[-1,-1],[2,-1],[-1,1.5]]}}]}"#,
        )
        .unwrap();
        let exp = Experiment::new(raw, Path::new(".")).unwrap();
        assert_eq!(exp.bodies(2).unwrap().len(), 1);
        assert!(exp.bodies(3).unwrap().is_empty());
    }
}
