//! JSON run configuration: a subspace family, the mode to check it in, and
//! optional knobs for the orbit, closure and relation searches.
//!
//! ```json
//! {
//!   "n": 4,
//!   "mode": "rotation",
//!   "subspaces": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]],
//!   "options": { "budget": 100000, "seed": 7 }
//! }
//! ```
//!
//! Vector entries are JSON numbers or exact fractions written as strings ("1/3").

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::conditions::{orthogonality_graph, AngleHints, EvaluateOptions, Mode, PairCosine, Rational};
use crate::error::{Error, Result};
use crate::orbit::{Generator, WordPolicy, DEFAULT_WORD_LENGTH};
use crate::isometry::reflection;
use crate::subspace::{check_ambient, perp, sum_all, Subspace, Vector};
use crate::witness::{CounterexampleConfig, WitnessConfig};

/// A coordinate: a double or an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entry {
    Number(f64),
    Exact(Rational),
}

impl Entry {
    pub fn value(&self) -> f64 {
        match self {
            Entry::Number(v) => *v,
            Entry::Exact(r) => r.to_f64(),
        }
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Entry::Number(v) => s.serialize_f64(*v),
            Entry::Exact(r) => r.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Str(String),
        }
        match Raw::deserialize(d) {
            Ok(Raw::Number(v)) => Ok(Entry::Number(v)),
            Ok(Raw::Str(s)) => s.parse().map(Entry::Exact).map_err(serde::de::Error::custom),
            Err(_) => Err(serde::de::Error::custom("expected a number or a \"p/q\" string")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConfigMode {
    /// Reflections; lines, hyperplanes or mid-dimensional subspaces by dimension.
    Reflection,
    Rotation,
    Lines,
    Hyperplanes,
}

impl fmt::Display for ConfigMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigMode::Reflection => "reflection",
            ConfigMode::Rotation => "rotation",
            ConfigMode::Lines => "lines",
            ConfigMode::Hyperplanes => "hyperplanes",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyName {
    RandomWords,
    Walk,
}

type RawSubspace = Vec<Vec<Entry>>;

/// Optional settings; CLI flags override them and the merged values are echoed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pair_cosines: Vec<PairCosine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pattern_cosines: Vec<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_policy: Option<PolicyName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_length: Option<usize>,
    /// Starting point of the orbit; a seeded random unit vector when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_point: Option<Vec<Entry>>,
    /// Extra subspaces S whose ‖x|S‖ is tested for conservation.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conserved: Vec<RawSubspace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dedup_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_digits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deadline_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub mode: ConfigMode,
    pub subspaces: Vec<RawSubspace>,
    #[serde(default)]
    pub options: RunOptions,
}

fn to_vector(raw: &[Entry], n: usize, field: &str) -> Result<Vector> {
    if raw.len() != n {
        return Err(Error::Parse(format!("{field}: expected {n} entries, found {}", raw.len())));
    }
    let v = Vector::from_iterator(n, raw.iter().map(Entry::value));
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("{field}: non-finite entry")));
    }
    Ok(v)
}

fn to_subspace(raw: &RawSubspace, n: usize, field: &str) -> Result<Subspace> {
    let vectors = raw
        .iter()
        .enumerate()
        .map(|(j, v)| to_vector(v, n, &format!("{field}[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    let s = Subspace::span(&vectors)?;
    if s.dim() != vectors.len() {
        return Err(Error::Parse(format!(
            "{field}: {} basis vectors span only {} dimensions",
            vectors.len(),
            s.dim()
        )));
    }
    Ok(s)
}

fn from_subspace(s: &Subspace) -> RawSubspace {
    s.basis_vectors().iter().map(|v| v.iter().map(|&x| Entry::Number(x)).collect()).collect()
}

impl RunConfig {
    /// Parse JSON, reporting the line and column of syntax errors and the path
    /// of the offending field for shape errors.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always serializable")
    }

    /// Shape checks that do not need linear algebra beyond building the subspaces.
    pub fn validate(&self) -> Result<()> {
        check_ambient(self.n).map_err(|e| Error::Parse(format!("n: {e}")))?;
        if self.subspaces.is_empty() {
            return Err(Error::Parse("subspaces: at least one subspace is required".into()));
        }
        self.family()?;
        if let Some(p) = &self.options.seed_point {
            let v = to_vector(p, self.n, "options.seed_point")?;
            if (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Parse(format!("options.seed_point: norm {} is not 1", v.norm())));
            }
        }
        self.extra_conserved()?;
        Ok(())
    }

    pub fn family(&self) -> Result<Vec<Subspace>> {
        self.subspaces
            .iter()
            .enumerate()
            .map(|(i, s)| to_subspace(s, self.n, &format!("subspaces[{i}]")))
            .collect()
    }

    fn extra_conserved(&self) -> Result<Vec<Subspace>> {
        self.options
            .conserved
            .iter()
            .enumerate()
            .map(|(i, s)| to_subspace(s, self.n, &format!("options.conserved[{i}]")))
            .collect()
    }

    /// The checker mode; `reflection` picks lines, hyperplanes or the mid-dimensional case.
    pub fn eval_mode(&self) -> Result<Mode> {
        Ok(match self.mode {
            ConfigMode::Lines => Mode::Lines,
            ConfigMode::Hyperplanes => Mode::Hyperplanes,
            ConfigMode::Rotation => Mode::Rotations,
            ConfigMode::Reflection => {
                let dims: Vec<usize> = self.family()?.iter().map(Subspace::dim).collect();
                if dims.iter().all(|&d| d == 1) {
                    Mode::Lines
                } else if dims.iter().all(|&d| d + 1 == self.n) {
                    Mode::Hyperplanes
                } else {
                    Mode::MidReflections
                }
            }
        })
    }

    pub fn hints(&self) -> AngleHints {
        AngleHints {
            pair_cosines: self.options.pair_cosines.clone(),
            pattern_cosines: self.options.pattern_cosines.clone(),
        }
    }

    pub fn evaluate_options(&self) -> EvaluateOptions {
        let d = EvaluateOptions::default();
        EvaluateOptions {
            bound: self.options.bound.unwrap_or(d.bound),
            precision_digits: self.options.precision_digits.unwrap_or(d.precision_digits),
            deadline: self.options.deadline_ms.map(std::time::Duration::from_millis),
            closure_note_cap: d.closure_note_cap,
        }
    }

    /// Orbit generators: reflections, or stabilizer rotations in rotation mode.
    pub fn generators(&self) -> Result<Vec<Generator>> {
        let family = self.family()?;
        Ok(match self.mode {
            ConfigMode::Rotation => family.into_iter().map(|s| Generator::Stabilizer { subspace: s }).collect(),
            _ => family.iter().map(|s| Generator::Map(reflection(s))).collect(),
        })
    }

    pub fn word_policy(&self) -> WordPolicy {
        let seed = self.options.seed.unwrap_or(0);
        match self.options.word_policy.unwrap_or(PolicyName::RandomWords) {
            PolicyName::RandomWords => WordPolicy::RandomWords {
                length: self.options.word_length.unwrap_or(DEFAULT_WORD_LENGTH),
                seed,
            },
            PolicyName::Walk => WordPolicy::Walk { seed },
        }
    }

    /// The configured seed point, or a seed-deterministic random unit vector.
    pub fn seed_point(&self) -> Result<Vector> {
        if let Some(p) = &self.options.seed_point {
            let v = to_vector(p, self.n, "options.seed_point")?;
            let norm = v.norm();
            return Ok(v / norm);
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.options.seed.unwrap_or(0));
        rng.set_stream(u64::MAX);
        let v = Vector::from_fn(self.n, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
        let norm = v.norm();
        Ok(v / norm)
    }

    /// Candidate conserved subspaces: the span of each orthogonal group of the
    /// family (of complements, in rotation mode), the total span when it is
    /// proper, and any listed in the options.
    pub fn conserved_candidates(&self) -> Result<Vec<Subspace>> {
        let family = self.family()?;
        let acting: Vec<Subspace> = match self.mode {
            ConfigMode::Rotation => family.iter().map(perp).collect(),
            _ => family,
        };
        let graph = orthogonality_graph(&acting)?;
        let mut out = Vec::new();
        if graph.components.len() > 1 {
            for comp in &graph.components {
                if let Some(s) = sum_all(comp.iter().map(|&j| &acting[j]))? {
                    out.push(s);
                }
            }
        }
        if let Some(total) = sum_all(acting.iter())? {
            if total.dim() < self.n {
                out.push(total);
            }
        }
        out.extend(self.extra_conserved()?);
        Ok(out)
    }

    pub fn from_witness(w: &WitnessConfig) -> Self {
        let mode = match w.mode {
            Mode::Lines => ConfigMode::Lines,
            Mode::Hyperplanes => ConfigMode::Hyperplanes,
            Mode::MidReflections => ConfigMode::Reflection,
            Mode::Rotations => ConfigMode::Rotation,
        };
        RunConfig {
            n: w.ambient_dim,
            mode,
            subspaces: w.subspaces.iter().map(from_subspace).collect(),
            options: RunOptions {
                pair_cosines: w.hints.pair_cosines.clone(),
                pattern_cosines: w.hints.pattern_cosines.clone(),
                ..Default::default()
            },
        }
    }

    pub fn from_counterexample(c: &CounterexampleConfig) -> Self {
        RunConfig {
            n: c.ambient_dim,
            mode: ConfigMode::Rotation,
            subspaces: c.subspaces.iter().map(from_subspace).collect(),
            options: RunOptions::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{counterexample, lines_witness, reflection_witness};

    #[test]
    fn parses_numbers_and_fractions() {
        let cfg = RunConfig::from_json(
            r#"{"n": 3, "mode": "lines", "subspaces": [[[1, 0, 0]], [["1/3", "2/3", "2/3"]]]}"#,
        )
        .unwrap();
        let fam = cfg.family().unwrap();
        assert!((fam[1].basis()[(0, 0)].abs() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(cfg.eval_mode().unwrap(), Mode::Lines);
    }

    #[test]
    fn reports_field_paths() {
        let err = RunConfig::from_json(r#"{"n": 3, "mode": "lines", "subspaces": [[[1, 0]]]}"#).unwrap_err();
        assert_eq!(err, Error::Parse("subspaces[0][0]: expected 3 entries, found 2".into()));
        let err = RunConfig::from_json("{\"n\": 3,\n \"mode\": \"lines\",\n \"subspaces\": [[[1, 0, 0]]],,}").unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.starts_with("line 3")), "{err}");
        let err = RunConfig::from_json(r#"{"n": 3, "mode": "spin", "subspaces": []}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        let err = RunConfig::from_json(r#"{"n": 2, "mode": "lines", "subspaces": [[[1, 0], [2, 0]]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("span only 1")));
    }

    #[test]
    fn witness_round_trip() {
        for w in [lines_witness(4).unwrap(), reflection_witness(5, 2).unwrap()] {
            let cfg = RunConfig::from_witness(&w);
            let back = RunConfig::from_json(&cfg.to_json()).unwrap();
            assert_eq!(back, cfg);
            for (a, b) in back.family().unwrap().iter().zip(&w.subspaces) {
                assert!(a.approx_eq(b));
            }
            assert_eq!(back.eval_mode().unwrap(), w.mode);
            assert_eq!(back.hints(), w.hints);
        }
    }

    #[test]
    fn duocylinder_candidates() {
        let cfg = RunConfig::from_counterexample(&counterexample(4, (&[2], &[2])).unwrap());
        let cands = cfg.conserved_candidates().unwrap();
        assert_eq!(cands.len(), 2);
        assert!(cands.iter().any(|s| s.approx_eq(&Subspace::coordinate(4, &[0, 1]).unwrap())));
    }
}
