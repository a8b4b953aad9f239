//! Subcommand implementations behind the `symclose` binary. Each returns a
//! [`RunReport`] together with the process exit code.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use symclose_core::config::{ConfigMode, PolicyName, RunConfig};
use symclose_core::isometry::{DEFAULT_CLOSURE_CAP, DEFAULT_DEDUP_TOL};
use symclose_core::orbit::{DEFAULT_PROBES, DEFAULT_THRESHOLD};
use symclose_core::witness::{hyperplanes_witness, lines_witness, reflection_witness, rotation_witness};
use symclose_core::{
    certify_irrational_angle, density_verdict, evaluate, finite_closure, heuristic_independence, reflection,
    sample_orbit, AngleCertificate, AngleSpec, CertificateStatus, ClosureOutcome, ConditionReport,
    DensityReport, DensityVerdict, FiniteClosureReport, IndependenceVerdict, Overall, Rational, SubSphere,
};
use symclose_core::conditions::IndependenceStatus;

pub const VERSION: &str = concat!("symclose ", env!("CARGO_PKG_VERSION"));

pub const DEFAULT_BUDGET: usize = 100_000;

/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub artifact_version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_report: Option<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density_report: Option<DensityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_closure_report: Option<FiniteClosureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<AngleCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence: Option<IndependenceVerdict>,
    pub exit_code: i32,
    pub wall_time_ms: u128,
}

impl RunReport {
    fn new(command: &str, config: Option<RunConfig>) -> Self {
        Self {
            artifact_version: VERSION,
            command: command.to_string(),
            config,
            condition_report: None,
            density_report: None,
            finite_closure_report: None,
            certificate: None,
            independence: None,
            exit_code: 0,
            wall_time_ms: 0,
        }
    }

    fn finish(mut self, exit_code: i32, started: Instant) -> Self {
        self.exit_code = exit_code;
        self.wall_time_ms = started.elapsed().as_millis();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are always serializable")
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunConfig::from_json(&text).with_context(|| format!("in {}", path.display()))
}

/// `check`: 0 Pass, 1 Fail, 2 Heuristic or Inconclusive.
pub fn check(config: RunConfig) -> Result<RunReport> {
    let started = Instant::now();
    let family = config.family()?;
    let report = evaluate(&family, config.eval_mode()?, &config.hints(), &config.evaluate_options())?;
    let code = match report.overall {
        Overall::Pass => 0,
        Overall::Fail => 1,
        Overall::Heuristic | Overall::Inconclusive => 2,
    };
    let mut out = RunReport::new("check", Some(config));
    out.condition_report = Some(report);
    Ok(out.finish(code, started))
}

/// `generate`: a witness family written in the config schema.
pub fn generate(n: usize, i: usize, mode: ConfigMode) -> Result<RunConfig> {
    let witness = match mode {
        ConfigMode::Reflection => reflection_witness(n, i)?,
        ConfigMode::Rotation => rotation_witness(n, i)?,
        ConfigMode::Lines => {
            if i != 1 {
                bail!("lines witnesses have i = 1, got {i}");
            }
            lines_witness(n)?
        }
        ConfigMode::Hyperplanes => {
            if i + 1 != n {
                bail!("hyperplane witnesses have i = n-1 = {}, got {i}", n.saturating_sub(1));
            }
            hyperplanes_witness(n)?
        }
    };
    Ok(RunConfig::from_witness(&witness))
}

/// Flag overrides for `orbit`; unset fields keep the config's values.
#[derive(Debug, Clone, Default)]
pub struct OrbitArgs {
    pub budget: Option<usize>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
    pub probes: Option<usize>,
    pub probe_seed: Option<u64>,
    pub policy: Option<PolicyName>,
}

/// `orbit`: 0 Dense, 1 Confined, 2 Inconclusive. The effective settings are
/// written back into the echoed config.
pub fn orbit(mut config: RunConfig, args: &OrbitArgs, export: Option<&Path>) -> Result<RunReport> {
    let started = Instant::now();
    let o = &mut config.options;
    o.budget = Some(args.budget.or(o.budget).unwrap_or(DEFAULT_BUDGET));
    o.threshold = Some(args.threshold.or(o.threshold).unwrap_or(DEFAULT_THRESHOLD));
    o.seed = Some(args.seed.or(o.seed).unwrap_or(0));
    o.probes = Some(args.probes.or(o.probes).unwrap_or(DEFAULT_PROBES));
    o.probe_seed = Some(args.probe_seed.or(o.probe_seed).unwrap_or(0));
    o.word_policy = Some(args.policy.or(o.word_policy).unwrap_or(PolicyName::RandomWords));
    let (budget, threshold, probes, probe_seed) =
        (o.budget.unwrap(), o.threshold.unwrap(), o.probes.unwrap(), o.probe_seed.unwrap());
    if budget == 0 {
        bail!("budget must be at least 1");
    }
    if threshold.is_nan() || threshold <= 0.0 {
        bail!("threshold must be positive");
    }

    let x = config.seed_point()?;
    let sample = sample_orbit(&config.generators()?, &x, budget, config.word_policy())?;
    let target = SubSphere::full(config.n)?;
    let report = density_verdict(&sample, &target, threshold, &config.conserved_candidates()?, probes, probe_seed)?;
    if let Some(path) = export {
        std::fs::write(path, points_csv(sample.iter())).with_context(|| format!("writing {}", path.display()))?;
    }
    let code = match report.verdict {
        DensityVerdict::Dense { .. } => 0,
        DensityVerdict::Confined { .. } => 1,
        DensityVerdict::Inconclusive { .. } => 2,
    };
    let mut out = RunReport::new("orbit", Some(config));
    out.density_report = Some(report);
    Ok(out.finish(code, started))
}

/// One row per point: comma-separated coordinates with 17 significant digits,
/// '.' as decimal separator, LF line endings, no header.
pub fn points_csv<'a>(points: impl Iterator<Item = &'a [f64]>) -> String {
    let mut out = String::new();
    for p in points {
        for (j, v) in p.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

/// `closure`: 0 when the cap is exceeded (evidence of an infinite group), 1 when finite.
pub fn closure(mut config: RunConfig, cap: Option<usize>, tol: Option<f64>) -> Result<RunReport> {
    let started = Instant::now();
    if config.mode == ConfigMode::Rotation {
        bail!("closure needs a reflection-mode config (reflection, lines or hyperplanes)");
    }
    let cap = cap.or(config.options.cap).unwrap_or(DEFAULT_CLOSURE_CAP);
    let tol = tol.or(config.options.dedup_tol).unwrap_or(DEFAULT_DEDUP_TOL);
    config.options.cap = Some(cap);
    config.options.dedup_tol = Some(tol);
    let gens: Vec<_> = config.family()?.iter().map(reflection).collect();
    let report = finite_closure(&gens, cap, tol)?;
    let code = match report.outcome {
        ClosureOutcome::ExceededCap { .. } => 0,
        ClosureOutcome::Finite { .. } => 1,
    };
    let mut out = RunReport::new("closure", Some(config));
    out.finite_closure_report = Some(report);
    Ok(out.finish(code, started))
}

/// `certify --cos`: 0 irrational multiple of π, 1 rational multiple.
pub fn certify_cosine(cosine: &str) -> Result<RunReport> {
    let started = Instant::now();
    let r: Rational = cosine.parse()?;
    let cert = certify_irrational_angle(r)?;
    let code = match cert.status {
        CertificateStatus::CertifiedIrrationalMultipleOfPi => 0,
        CertificateStatus::CertifiedRationalMultipleOfPi(_) => 1,
        CertificateStatus::Unknown => 2,
    };
    let mut out = RunReport::new("certify", None);
    out.certificate = Some(cert);
    Ok(out.finish(code, started))
}

/// Angles from a JSON array (strings or numbers) or one per line.
pub fn parse_angles(text: &str) -> Result<Vec<AngleSpec>> {
    let trimmed = text.trim_start();
    let items: Vec<String> = if trimmed.starts_with('[') {
        let values: Vec<serde_json::Value> = serde_json::from_str(text).context("angles file is not a JSON array")?;
        values
            .into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => Ok(s),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                other => bail!("unsupported angle entry {other}"),
            })
            .collect::<Result<_>>()?
    } else {
        text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect()
    };
    if items.is_empty() {
        bail!("no angles given");
    }
    items.iter().map(|s| s.parse::<AngleSpec>().map_err(Into::into)).collect()
}

/// `certify --angles-file`: 0 no relation, 1 relation found, 2 search timed out.
pub fn certify_angles(angles: &[AngleSpec], bound: i64, digits: u32, deadline: Option<Duration>) -> Result<RunReport> {
    let started = Instant::now();
    let verdict = heuristic_independence(angles, bound, digits, deadline)?;
    let code = match verdict.status {
        IndependenceStatus::NoRelationFound => 0,
        IndependenceStatus::RelationFound => 1,
        IndependenceStatus::Unknown => 2,
    };
    let mut out = RunReport::new("certify", None);
    out.independence = Some(verdict);
    Ok(out.finish(code, started))
}
