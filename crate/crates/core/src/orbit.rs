//! Empirical orbits: sampling, covering radii, conserved quantities and
//! set invariance.
//!
//! Every random choice is drawn from a ChaCha stream keyed by (seed, index), so
//! results do not depend on the number of worker threads.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry::{reflection, OrthogonalMap};
use crate::subspace::{check_same, intersect, perp, subsphere, sum, SubSphere, Subspace, Vector};

/// Conserved quantities must stay within this of their seed value.
pub const TAU_CONSERVE: f64 = 1e-8;

/// Samples smaller than this never yield Dense or Confined.
pub const MIN_EVIDENCE_POINTS: usize = 1000;

pub const DEFAULT_WORD_LENGTH: usize = 32;
pub const DEFAULT_THRESHOLD: f64 = 0.15;
pub const DEFAULT_PROBES: usize = 2000;

/// One letter of the generating alphabet.
#[derive(Debug, Clone)]
pub enum Generator {
    Map(OrthogonalMap),
    /// A fresh Haar rotation fixing `subspace` pointwise each time it is used.
    Stabilizer { subspace: Subspace },
}

impl Generator {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Generator::Map(m) => m.ambient_dim(),
            Generator::Stabilizer { subspace } => subspace.ambient_dim(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WordPolicy {
    /// Each point is x under an independent lazy word: `length` steps, each a
    /// uniform letter or (with the same probability) no move.
    RandomWords { length: usize, seed: u64 },
    /// One non-backtracking trajectory; point t is the state after t + 1 letters.
    /// Suited to families whose short words revisit few elements (two reflections).
    Walk { seed: u64 },
}

impl WordPolicy {
    pub fn random_words(seed: u64) -> Self {
        WordPolicy::RandomWords { length: DEFAULT_WORD_LENGTH, seed }
    }
}

/// Pre-digested letter used in the inner loops.
enum Letter {
    Matrix(DMatrix<f64>),
    /// Projector onto the fixed subspace and an orthonormal basis of its complement.
    Rotation { fixed: DMatrix<f64>, block: DMatrix<f64> },
}

impl Letter {
    fn apply<R: Rng>(&self, p: &Vector, rng: &mut R) -> Vector {
        match self {
            Letter::Matrix(m) => m * p,
            Letter::Rotation { fixed, block } => {
                // A Haar rotation of the block sends the block component to a
                // uniform point of the sphere of the same radius.
                let r = (block.transpose() * p).norm();
                let mut u = Vector::from_fn(block.ncols(), |_, _| rng.sample(StandardNormal));
                let un = u.norm();
                u /= un;
                fixed * p + block * u * r
            }
        }
    }
}

fn compile(generators: &[Generator], n: usize) -> Result<Vec<Letter>> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    generators
        .iter()
        .map(|g| {
            check_same(n, g.ambient_dim())?;
            Ok(match g {
                Generator::Map(m) => Letter::Matrix(m.matrix().clone()),
                Generator::Stabilizer { subspace } => {
                    if subspace.dim() + 2 > n {
                        return Err(Error::TrivialStabilizer { dim: subspace.dim(), n });
                    }
                    Letter::Rotation { fixed: subspace.projector(), block: perp(subspace).basis().clone() }
                }
            })
        })
        .collect()
}

/// Index of each letter's inverse among the letters, if any. Stabilizer letters
/// count as their own inverse: two in a row are one.
fn inverses(letters: &[Letter]) -> Vec<Option<usize>> {
    letters
        .iter()
        .enumerate()
        .map(|(a, la)| match la {
            Letter::Rotation { .. } => Some(a),
            Letter::Matrix(ma) => letters.iter().position(|lb| match lb {
                Letter::Matrix(mb) => (mb * ma).iter().enumerate().all(|(idx, v)| {
                    let (r, c) = (idx % ma.nrows(), idx / ma.nrows());
                    (v - if r == c { 1.0 } else { 0.0 }).abs() < 1e-9
                }),
                Letter::Rotation { .. } => false,
            }),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitSample {
    pub ambient_dim: usize,
    #[serde(serialize_with = "crate::subspace::serialize_vector")]
    pub seed_point: Vector,
    /// Row-major points, `ambient_dim` coordinates each.
    #[serde(skip)]
    pub points: Vec<f64>,
    pub word_policy: WordPolicy,
    pub budget_used: usize,
}

impl OrbitSample {
    pub fn len(&self) -> usize {
        self.points.len() / self.ambient_dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, idx: usize) -> &[f64] {
        &self.points[idx * self.ambient_dim..(idx + 1) * self.ambient_dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.ambient_dim)
    }

    /// Append more points (same policy bookkeeping is the caller's business).
    pub fn extend_from(&mut self, other: &OrbitSample) {
        self.points.extend_from_slice(&other.points);
        self.budget_used += other.budget_used;
    }
}

fn check_unit(x: &Vector) -> Result<()> {
    let norm = x.norm();
    if (norm - 1.0).abs() > crate::TAU_ORTHO {
        return Err(Error::NotUnit(norm));
    }
    Ok(())
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sample `budget` points of the orbit of `x` under the group generated by `generators`.
pub fn sample_orbit(generators: &[Generator], x: &Vector, budget: usize, policy: WordPolicy) -> Result<OrbitSample> {
    let n = x.len();
    check_unit(x)?;
    let letters = compile(generators, n)?;
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let k = letters.len();
    let mut points = vec![0.0; budget * n];
    match policy {
        WordPolicy::RandomWords { length, seed } => {
            points.par_chunks_mut(n).enumerate().for_each(|(t, out)| {
                let mut rng = stream(seed, t as u64);
                let mut p = x.clone();
                for _ in 0..length {
                    // index k is a lazy step, so odd and even word lengths both occur
                    let l = rng.random_range(0..=k);
                    if l < k {
                        p = letters[l].apply(&p, &mut rng);
                    }
                }
                out.copy_from_slice(p.as_slice());
            });
        }
        WordPolicy::Walk { seed } => {
            let inv = inverses(&letters);
            let mut rng = stream(seed, 0);
            let mut p = x.clone();
            let mut prev: Option<usize> = None;
            for out in points.chunks_exact_mut(n) {
                let banned = prev.and_then(|l| inv[l]);
                let l = match banned {
                    Some(b) if k > 1 => {
                        let r = rng.random_range(0..k - 1);
                        if r >= b {
                            r + 1
                        } else {
                            r
                        }
                    }
                    _ => rng.random_range(0..k),
                };
                p = letters[l].apply(&p, &mut rng);
                let norm = p.norm();
                p /= norm;
                out.copy_from_slice(p.as_slice());
                prev = Some(l);
            }
        }
    }
    Ok(OrbitSample { ambient_dim: n, seed_point: x.clone(), points, word_policy: policy, budget_used: budget })
}

/// Uniform point of the sub-sphere from the given stream.
fn probe(target: &SubSphere, rng: &mut ChaCha8Rng) -> Vector {
    let basis = target.direction.basis();
    let mut u = Vector::from_fn(basis.ncols(), |_, _| rng.sample(StandardNormal));
    let un = u.norm();
    u /= un;
    &target.center + basis * u * target.radius
}

/// Seed-deterministic uniform probes on `target`.
pub fn probes(target: &SubSphere, count: usize, seed: u64) -> Result<Vec<Vector>> {
    if target.is_degenerate() {
        return Err(Error::DegenerateTarget);
    }
    Ok((0..count).map(|j| probe(target, &mut stream(seed, j as u64))).collect())
}

/// Max over probes of the chordal distance to the nearest sample point.
pub fn covering_radius(sample: &OrbitSample, target: &SubSphere, probe_count: usize, probe_seed: u64) -> Result<f64> {
    check_same(sample.ambient_dim, target.ambient_dim())?;
    if sample.is_empty() {
        return Err(Error::EmptySet);
    }
    if probe_count == 0 {
        return Err(Error::InvalidArgument("probe_count must be at least 1".into()));
    }
    let probes = probes(target, probe_count, probe_seed)?;
    let worst = probes
        .par_iter()
        .map(|q| {
            let q = q.as_slice();
            sample
                .iter()
                .map(|p| p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst.sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConservedQuantityReport {
    pub label: String,
    pub subspace: Subspace,
    pub seed_value: f64,
    pub max_deviation: f64,
    /// ‖p|S‖ for every sample point.
    #[serde(skip)]
    pub values: Vec<f64>,
}

/// ‖p|S‖ over the sample and its largest deviation from the seed point's value.
pub fn conserved_quantity(sample: &OrbitSample, s: &Subspace, label: impl Into<String>) -> Result<ConservedQuantityReport> {
    check_same(sample.ambient_dim, s.ambient_dim())?;
    let bt = s.basis().transpose();
    let norm = |p: &[f64]| (&bt * Vector::from_column_slice(p)).norm();
    let seed_value = norm(sample.seed_point.as_slice());
    let values: Vec<f64> = sample.iter().map(norm).collect();
    let max_deviation = values.iter().map(|v| (v - seed_value).abs()).fold(0.0, f64::max);
    Ok(ConservedQuantityReport { label: label.into(), subspace: s.clone(), seed_value, max_deviation, values })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityVerdict {
    Dense { threshold: f64 },
    Confined { quantity: String, max_deviation: f64 },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub target: SubSphere,
    pub covering_radius_estimate: f64,
    pub probes_used: usize,
    pub sample_size: usize,
    pub verdict: DensityVerdict,
    pub conserved: Vec<ConservedQuantityReport>,
}

/// Dense if the covering radius beats `threshold`; otherwise Confined if some
/// candidate ‖x|S‖ is conserved; otherwise Inconclusive.
pub fn density_verdict(
    sample: &OrbitSample,
    target: &SubSphere,
    threshold: f64,
    conserved_candidates: &[Subspace],
    probe_count: usize,
    probe_seed: u64,
) -> Result<DensityReport> {
    if threshold <= 0.0 || threshold.is_nan() {
        return Err(Error::InvalidArgument(format!("threshold must be positive, got {threshold}")));
    }
    if target.is_degenerate() {
        // a one-point target is covered as soon as the sample reaches it
        let spread = sample
            .iter()
            .map(|p| (Vector::from_column_slice(p) - &target.center).norm())
            .fold(f64::INFINITY, f64::min);
        let verdict = if spread < threshold {
            DensityVerdict::Dense { threshold }
        } else {
            DensityVerdict::Inconclusive { reason: "sample never reaches the one-point target".into() }
        };
        return Ok(DensityReport {
            target: target.clone(),
            covering_radius_estimate: spread,
            probes_used: 0,
            sample_size: sample.len(),
            verdict,
            conserved: Vec::new(),
        });
    }
    let radius = covering_radius(sample, target, probe_count, probe_seed)?;
    let n = sample.ambient_dim;
    let conserved = conserved_candidates
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero() && s.dim() < n)
        .map(|(j, s)| conserved_quantity(sample, s, format!("|x|S{}| with S{} = {}", j + 1, j + 1, s.describe())))
        .collect::<Result<Vec<_>>>()?;
    let verdict = if sample.len() < MIN_EVIDENCE_POINTS {
        DensityVerdict::Inconclusive {
            reason: format!("{} sample points; at least {MIN_EVIDENCE_POINTS} are needed for a verdict", sample.len()),
        }
    } else if radius < threshold {
        DensityVerdict::Dense { threshold }
    } else if let Some(q) = conserved
        .iter()
        .filter(|q| q.max_deviation < TAU_CONSERVE)
        .min_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation))
    {
        DensityVerdict::Confined { quantity: q.label.clone(), max_deviation: q.max_deviation }
    } else {
        DensityVerdict::Inconclusive {
            reason: format!("covering radius {radius:.4} >= {threshold} and no conserved quantity"),
        }
    };
    Ok(DensityReport {
        target: target.clone(),
        covering_radius_estimate: radius,
        probes_used: probe_count,
        sample_size: sample.len(),
        verdict,
        conserved,
    })
}

/// Whether every map sends the finite set `e` onto itself, and the worst
/// distance from an image point to the set.
pub fn invariance_check(e: &[Vector], maps: &[OrthogonalMap], tol: f64) -> Result<(bool, f64)> {
    let n = e.first().ok_or(Error::EmptySet)?.len();
    let mut worst: f64 = 0.0;
    for g in maps {
        check_same(n, g.ambient_dim())?;
        for p in e {
            check_same(n, p.len())?;
            let image = g.apply(p);
            let d = e.iter().map(|q| (&image - q).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    Ok((worst < tol, worst))
}

#[derive(Debug, Clone)]
pub struct DensityOptions {
    pub budget: usize,
    pub threshold: f64,
    pub probes: usize,
    pub probe_seed: u64,
    pub policy: WordPolicy,
}

impl Default for DensityOptions {
    fn default() -> Self {
        Self {
            budget: 100_000,
            threshold: DEFAULT_THRESHOLD,
            probes: DEFAULT_PROBES,
            probe_seed: 0,
            policy: WordPolicy::random_words(0),
        }
    }
}

/// Orbit of `x` under R_H together with all rotations fixing L^⊥, measured on
/// the sub-sphere through `x` parallel to H + L.
pub fn extension_experiment(h: &Subspace, l: &Subspace, x: &Vector, options: &DensityOptions) -> Result<DensityReport> {
    check_same(h.ambient_dim(), l.ambient_dim())?;
    check_same(h.ambient_dim(), x.len())?;
    check_unit(x)?;
    let l_perp = perp(l);
    if !intersect(h, &l_perp)?.is_zero() {
        return Err(Error::HypothesisViolated("H ∩ L^⊥ ≠ {o}".into()));
    }
    if h.dim() >= l.dim() {
        return Err(Error::HypothesisViolated("dim H < dim L fails".into()));
    }
    let target = subsphere(&sum(h, l)?, x)?;
    let generators = [Generator::Stabilizer { subspace: l_perp }, Generator::Map(reflection(h))];
    let sample = sample_orbit(&generators, x, options.budget, options.policy)?;
    density_verdict(&sample, &target, options.threshold, &[], options.probes, options.probe_seed)
}
