//! Hypothesis checkers: spanning, orthogonal bipartitions, angle certificates,
//! integer-relation heuristics and the per-mode [`evaluate`] dispatcher.

mod niven;
mod relation;

use std::time::Duration;

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{finite_closure, reflection, ClosureOutcome, DEFAULT_DEDUP_TOL};
use crate::subspace::{
    check_same, intersect, numerical_rank, perp, principal_angles, sum_all, Subspace, Vector,
    TAU_EQUAL,
};

pub use niven::{certify_irrational_angle, AngleCertificate, CertificateStatus, Rational};
pub use relation::{heuristic_independence, AngleSpec, IndependenceStatus, IndependenceVerdict};

/// Subspaces whose bases overlap by more than this are joined by an edge.
pub const TAU_ORTH_EDGE: f64 = 1e-9;

/// Which theorem's hypotheses to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Reflections in lines.
    Lines,
    /// Reflections in hyperplanes; checked on the normal lines.
    Hyperplanes,
    /// Reflections in subspaces of a common dimension 2 ≤ i ≤ n − 2.
    MidReflections,
    /// Full rotational stabilizers of subspaces with dimension in [1, n − 2].
    Rotations,
}

/// Concrete evidence attached to a failed hypothesis. Subspace indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailWitness {
    /// Two nonempty, mutually orthogonal groups of subspaces.
    Bipartition { left: Vec<usize>, right: Vec<usize> },
    Rank { rank: usize, ambient_dim: usize },
    /// Every non-orthogonal pair makes a rational multiple of π.
    RationalAngles { pairs: Vec<[usize; 2]> },
    /// (q₀, q₁, …) with q₀π + Σ qⱼαⱼ = 0 numerically.
    IntegerRelation { coefficients: Vec<i64> },
    /// H_{step+1} meets (H₁ + … + H_step)^⊥ in a subspace of this dimension (1-based step).
    ChainBreak { step: usize, intersection_dim: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "evidence", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail(FailWitness),
    Heuristic(String),
    Inconclusive(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisVerdict {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<AngleCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence: Option<IndependenceVerdict>,
}

impl HypothesisVerdict {
    fn new(name: &str, verdict: Verdict, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            verdict,
            detail: detail.into(),
            certificates: Vec::new(),
            independence: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Overall {
    Pass,
    Fail,
    Heuristic,
    Inconclusive,
}

impl Overall {
    /// Fail dominates, then Inconclusive, then Heuristic; Pass needs every hypothesis to pass.
    pub fn aggregate<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> Overall {
        let mut overall = Overall::Pass;
        for v in verdicts {
            let this = match v {
                Verdict::Pass => Overall::Pass,
                Verdict::Fail(_) => return Overall::Fail,
                Verdict::Heuristic(_) => Overall::Heuristic,
                Verdict::Inconclusive(_) => Overall::Inconclusive,
            };
            overall = match (overall, this) {
                (Overall::Inconclusive, _) | (_, Overall::Inconclusive) => Overall::Inconclusive,
                (Overall::Heuristic, _) | (_, Overall::Heuristic) => Overall::Heuristic,
                _ => Overall::Pass,
            };
        }
        overall
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub mode: Mode,
    pub hypotheses: Vec<HypothesisVerdict>,
    pub overall: Overall,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn hypothesis(&self, name: &str) -> Option<&HypothesisVerdict> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    /// The first bipartition witness among the failed hypotheses.
    pub fn bipartition(&self) -> Option<(&[usize], &[usize])> {
        self.hypotheses.iter().find_map(|h| match &h.verdict {
            Verdict::Fail(FailWitness::Bipartition { left, right }) => {
                Some((left.as_slice(), right.as_slice()))
            }
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrthogonalityGraph {
    pub node_count: usize,
    /// Pairs (p, q), p < q, of non-orthogonal subspaces.
    pub edges: Vec<(usize, usize)>,
    pub connected: bool,
    /// Connected components, each sorted, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
}

impl OrthogonalityGraph {
    /// An orthogonal bipartition (first component vs the rest), if one exists.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        if self.connected {
            return None;
        }
        let left = self.components[0].clone();
        let mut right: Vec<usize> = self.components[1..].concat();
        right.sort_unstable();
        Some((left, right))
    }
}

fn check_family(subspaces: &[Subspace]) -> Result<usize> {
    let n = subspaces
        .first()
        .map(Subspace::ambient_dim)
        .ok_or_else(|| Error::InvalidArgument("empty subspace family".into()))?;
    for h in subspaces {
        check_same(n, h.ambient_dim())?;
    }
    Ok(n)
}

/// Graph on the subspaces with an edge between every non-orthogonal pair.
pub fn orthogonality_graph(subspaces: &[Subspace]) -> Result<OrthogonalityGraph> {
    check_family(subspaces)?;
    let k = subspaces.len();
    let mut edges = Vec::new();
    let mut adj = vec![Vec::new(); k];
    for p in 0..k {
        for q in p + 1..k {
            if subspaces[p].max_overlap(&subspaces[q]) > TAU_ORTH_EDGE {
                edges.push((p, q));
                adj[p].push(q);
                adj[q].push(p);
            }
        }
    }
    let mut seen = vec![false; k];
    let mut components = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    Ok(OrthogonalityGraph { node_count: k, edges, connected: components.len() == 1, components })
}

/// Rank of the concatenated bases and whether it reaches the ambient dimension.
pub fn spanning_check(subspaces: &[Subspace]) -> Result<(usize, bool)> {
    let n = check_family(subspaces)?;
    let cols: Vec<Vector> = subspaces.iter().flat_map(Subspace::basis_vectors).collect();
    if cols.is_empty() {
        return Ok((0, false));
    }
    let rank = numerical_rank(&DMatrix::from_columns(&cols));
    Ok((rank, rank == n))
}

/// An exact cosine declared for a pair of lines (0-based indices).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCosine {
    pub pair: [usize; 2],
    pub cosine: Rational,
}

/// Exact information a caller may supply so that angle hypotheses can be
/// certified rather than guessed from floating point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AngleHints {
    /// Lines and hyperplanes: cosines between specific pairs (of normals, for hyperplanes).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pair_cosines: Vec<PairCosine>,
    /// Mid-dimensional reflections: cos α₁, …, cos αᵢ of the three-subspace pattern.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pattern_cosines: Vec<Rational>,
}

impl AngleHints {
    pub fn is_empty(&self) -> bool {
        self.pair_cosines.is_empty() && self.pattern_cosines.is_empty()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(p) => Ok(Rational::new(p, 1).map_err(serde::de::Error::custom)?),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvaluateOptions {
    /// Coefficient bound for integer-relation searches.
    pub bound: i64,
    pub precision_digits: u32,
    /// Per-search deadline; a timeout yields an Inconclusive verdict.
    pub deadline: Option<Duration>,
    /// Cap for the informational finite-closure probe run when condition (i) is uncertified.
    pub closure_note_cap: usize,
}

impl Default for EvaluateOptions {
    fn default() -> Self {
        Self { bound: 10_000, precision_digits: 64, deadline: None, closure_note_cap: 1000 }
    }
}

/// Check the hypotheses of the theorem selected by `mode`.
pub fn evaluate(
    subspaces: &[Subspace],
    mode: Mode,
    hints: &AngleHints,
    options: &EvaluateOptions,
) -> Result<ConditionReport> {
    let n = check_family(subspaces)?;
    let dims: Vec<usize> = subspaces.iter().map(Subspace::dim).collect();
    let mismatch = |what: &str| Error::ModeMismatch(format!("{mode:?} requires {what}; got dims {dims:?} in R^{n}"));
    let mut notes = Vec::new();
    let hypotheses = match mode {
        Mode::Lines => {
            if dims.iter().any(|&d| d != 1) {
                return Err(mismatch("every subspace of dimension 1"));
            }
            let hs = line_hypotheses(subspaces, hints, options, "")?;
            closure_note(subspaces, &hs, options, &mut notes)?;
            hs
        }
        Mode::Hyperplanes => {
            if dims.iter().any(|&d| d + 1 != n) {
                return Err(mismatch("every subspace of dimension n-1"));
            }
            let normals: Vec<Subspace> = subspaces.iter().map(perp).collect();
            let hs = line_hypotheses(&normals, hints, options, "normals_")?;
            closure_note(subspaces, &hs, options, &mut notes)?;
            hs
        }
        Mode::MidReflections => {
            let i = dims[0];
            if dims.iter().any(|&d| d != i) || i < 2 || i + 2 > n {
                return Err(mismatch("a common dimension i with 2 <= i <= n-2"));
            }
            mid_hypotheses(subspaces, hints, options, &mut notes)?
        }
        Mode::Rotations => {
            if dims.iter().any(|&d| d < 1 || d + 2 > n) {
                return Err(mismatch("every dimension in [1, n-2]"));
            }
            let perps: Vec<Subspace> = subspaces.iter().map(perp).collect();
            vec![spanning_hypothesis(&perps, "perps_span")?, connectivity_hypothesis(&perps, "perps_connected")?]
        }
    };
    let overall = Overall::aggregate(hypotheses.iter().map(|h| &h.verdict));
    Ok(ConditionReport { mode, hypotheses, overall, notes })
}

fn spanning_hypothesis(family: &[Subspace], name: &str) -> Result<HypothesisVerdict> {
    let n = family[0].ambient_dim();
    let (rank, spans) = spanning_check(family)?;
    let verdict = if spans {
        Verdict::Pass
    } else {
        Verdict::Fail(FailWitness::Rank { rank, ambient_dim: n })
    };
    Ok(HypothesisVerdict::new(name, verdict, format!("rank {rank} of {n}")))
}

fn connectivity_hypothesis(family: &[Subspace], name: &str) -> Result<HypothesisVerdict> {
    let graph = orthogonality_graph(family)?;
    Ok(match graph.bipartition() {
        None => HypothesisVerdict::new(
            name,
            Verdict::Pass,
            format!("orthogonality graph connected ({} edges)", graph.edges.len()),
        ),
        Some((left, right)) => {
            let detail = format!("orthogonal bipartition {left:?} | {right:?}");
            HypothesisVerdict::new(name, Verdict::Fail(FailWitness::Bipartition { left, right }), detail)
        }
    })
}

fn direction(line: &Subspace) -> Vector {
    line.basis().column(0).into_owned()
}

/// Conditions (i) to (iii) for a family of lines.
fn line_hypotheses(
    lines: &[Subspace],
    hints: &AngleHints,
    options: &EvaluateOptions,
    prefix: &str,
) -> Result<Vec<HypothesisVerdict>> {
    Ok(vec![
        irrational_angle_hypothesis(lines, hints, options, &format!("{prefix}irrational_angle"))?,
        spanning_hypothesis(lines, &format!("{prefix}span"))?,
        connectivity_hypothesis(lines, &format!("{prefix}connected"))?,
    ])
}

fn irrational_angle_hypothesis(
    lines: &[Subspace],
    hints: &AngleHints,
    options: &EvaluateOptions,
    name: &str,
) -> Result<HypothesisVerdict> {
    let k = lines.len();
    let dirs: Vec<Vector> = lines.iter().map(direction).collect();
    let abs_cos = |p: usize, q: usize| dirs[p].dot(&dirs[q]).abs().min(1.0);

    let mut certificates = Vec::new();
    let mut declared = Vec::new();
    for hint in &hints.pair_cosines {
        let [p, q] = hint.pair;
        if p >= k || q >= k || p == q {
            return Err(Error::InvalidArgument(format!("angle hint names invalid pair {:?}", hint.pair)));
        }
        let computed = abs_cos(p, q);
        if (computed - hint.cosine.to_f64().abs()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "declared cosine {} for pair {:?} does not match computed {computed:.12}",
                hint.cosine, hint.pair
            )));
        }
        let cert = certify_irrational_angle(hint.cosine)?;
        if cert.is_irrational() {
            let detail = format!("pair {:?}: cos = {} is not a rational multiple of pi", hint.pair, hint.cosine);
            let mut h = HypothesisVerdict::new(name, Verdict::Pass, detail);
            h.certificates.push(cert);
            return Ok(h);
        }
        certificates.push(cert);
        declared.push(if p < q { [p, q] } else { [q, p] });
    }

    let mut rational_pairs = declared.clone();
    let mut unknown = None;
    for p in 0..k {
        for q in p + 1..k {
            if declared.contains(&[p, q]) {
                continue;
            }
            let c = abs_cos(p, q);
            if !(TAU_ORTH_EDGE..=1.0 - 1e-12).contains(&c) {
                rational_pairs.push([p, q]);
                continue;
            }
            let angle = AngleSpec::Float(c.acos());
            let verdict = heuristic_independence(&[angle], options.bound, options.precision_digits, options.deadline)?;
            match verdict.status {
                IndependenceStatus::NoRelationFound => {
                    let detail = format!(
                        "pair [{p}, {q}]: angle {:.15} shows no integer relation with pi up to {} at {} digits",
                        c.acos(),
                        options.bound,
                        verdict.precision_digits
                    );
                    let mut h = HypothesisVerdict::new(name, Verdict::Heuristic(detail.clone()), detail);
                    h.certificates = certificates;
                    h.independence = Some(verdict);
                    return Ok(h);
                }
                IndependenceStatus::RelationFound => rational_pairs.push([p, q]),
                IndependenceStatus::Unknown => unknown = Some([p, q]),
            }
        }
    }
    let mut h = if let Some(pair) = unknown {
        let msg = format!("relation search for pair {pair:?} timed out");
        HypothesisVerdict::new(name, Verdict::Inconclusive(msg.clone()), msg)
    } else {
        HypothesisVerdict::new(
            name,
            Verdict::Fail(FailWitness::RationalAngles { pairs: rational_pairs }),
            "every pair forms a rational multiple of pi",
        )
    };
    h.certificates = certificates;
    Ok(h)
}

/// When condition (i) is not certified, report whether the reflections at least
/// escape a small finite group.
fn closure_note(
    subspaces: &[Subspace],
    hypotheses: &[HypothesisVerdict],
    options: &EvaluateOptions,
    notes: &mut Vec<String>,
) -> Result<()> {
    if hypotheses[0].verdict == Verdict::Pass || options.closure_note_cap == 0 {
        return Ok(());
    }
    let gens: Vec<_> = subspaces.iter().map(reflection).collect();
    let report = finite_closure(&gens, options.closure_note_cap, DEFAULT_DEDUP_TOL)?;
    notes.push(match report.outcome {
        ClosureOutcome::Finite { order } => {
            format!("the reflections generate a finite group of order {order}")
        }
        ClosureOutcome::ExceededCap { cap } => format!(
            "the reflections generate more than {cap} elements (not a small finite Coxeter group), \
             but an irrational angle is not certified; whether that weaker condition suffices is open"
        ),
    });
    Ok(())
}

fn mid_hypotheses(
    subspaces: &[Subspace],
    hints: &AngleHints,
    options: &EvaluateOptions,
    notes: &mut Vec<String>,
) -> Result<Vec<HypothesisVerdict>> {
    let n = subspaces[0].ambient_dim();
    let family: Vec<Subspace> = if 2 * subspaces[0].dim() > n {
        notes.push("i > n/2: hypotheses checked on the orthogonal complements".into());
        subspaces.iter().map(perp).collect()
    } else {
        subspaces.to_vec()
    };
    let k = family.len();
    if k < 3 {
        let msg = format!("the theorem needs at least 3 subspaces, got {k}");
        return Ok(vec![HypothesisVerdict::new("pattern", Verdict::Inconclusive(msg.clone()), msg)]);
    }
    let mut out = Vec::new();
    match match_pattern(&family[0], &family[1], &family[2])? {
        Err(reason) => {
            out.push(HypothesisVerdict::new("pattern", Verdict::Inconclusive(reason.clone()), reason));
        }
        Ok(angles) => {
            out.push(HypothesisVerdict::new(
                "pattern",
                Verdict::Pass,
                format!("first three subspaces match the pattern with angles {angles:?}"),
            ));
            out.extend(pattern_angle_hypotheses(&angles, hints, options)?);
        }
    }
    out.push(spanning_hypothesis(&family, "span")?);
    out.push(chain_hypothesis(&family)?);
    Ok(out)
}

/// Match (H₁, H₂, H₃) against the three-subspace pattern up to a global
/// orthogonal map. Returns the angles α₁ < … < αᵢ or the reason for a mismatch.
///
/// With an adapted basis H₁ = span{uⱼ}, H₂ = span{cos αⱼ uⱼ + sin αⱼ wⱼ}, the
/// pattern requires H₃ to contain cos αⱼ uⱼ + τⱼ sin αⱼ w_{j−1} (indices mod i)
/// for signs τⱼ with product +1; the signs absorb the freedom (uⱼ, wⱼ) ↦ −(uⱼ, wⱼ).
fn match_pattern(
    h1: &Subspace,
    h2: &Subspace,
    h3: &Subspace,
) -> Result<std::result::Result<Vec<f64>, String>> {
    let i = h1.dim();
    let pa = principal_angles(h1, h2)?;
    let angles = pa.angles.clone();
    const GAP: f64 = 1e-7;
    if angles.iter().any(|a| !(GAP..=std::f64::consts::FRAC_PI_2 - GAP).contains(a)) {
        return Ok(Err(format!("principal angles between H1 and H2 must lie strictly inside (0, pi/2), got {angles:?}")));
    }
    if angles.windows(2).any(|w| w[1] - w[0] < GAP) {
        return Ok(Err(format!("principal angles between H1 and H2 must be distinct, got {angles:?}")));
    }
    let u = |j: usize| pa.e(j);
    let w = |j: usize| pa.e(pa.partner(j).expect("2i <= n"));
    let mut sign_product = 1.0;
    for (j, angle) in angles.iter().enumerate() {
        let prev = (j + i - 1) % i;
        let (c, s) = (angle.cos(), angle.sin());
        let plus = u(j) * c + w(prev) * s;
        let minus = u(j) * c - w(prev) * s;
        if h3.residual(&plus) < TAU_EQUAL {
            continue;
        } else if h3.residual(&minus) < TAU_EQUAL {
            sign_product = -sign_product;
        } else {
            return Ok(Err(format!("H3 does not contain the expected vector for j = {}", j + 1)));
        }
    }
    if sign_product < 0.0 {
        return Ok(Err("H3 matches the pattern only up to an orientation flip".into()));
    }
    Ok(Ok(angles))
}

fn pattern_angle_hypotheses(
    angles: &[f64],
    hints: &AngleHints,
    options: &EvaluateOptions,
) -> Result<Vec<HypothesisVerdict>> {
    let specs: Vec<AngleSpec> = if hints.pattern_cosines.is_empty() {
        angles.iter().map(|&a| AngleSpec::Float(a)).collect()
    } else {
        if hints.pattern_cosines.len() != angles.len() {
            return Err(Error::InvalidArgument(format!(
                "{} pattern cosines declared for {} angles",
                hints.pattern_cosines.len(),
                angles.len()
            )));
        }
        for (c, a) in hints.pattern_cosines.iter().zip(angles) {
            if (c.to_f64() - a.cos()).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "declared cosine {c} does not match computed {:.12}",
                    a.cos()
                )));
            }
        }
        hints.pattern_cosines.iter().map(|c| AngleSpec::Arccos(c.numer(), c.denom())).collect()
    };

    let irrational = if hints.pattern_cosines.is_empty() {
        let msg = "angles given in floating point; irrationality rests on the relation search".to_string();
        HypothesisVerdict::new("angles_irrational", Verdict::Heuristic(msg.clone()), msg)
    } else {
        let certs = hints
            .pattern_cosines
            .iter()
            .map(|c| certify_irrational_angle(*c))
            .collect::<Result<Vec<_>>>()?;
        let bad: Vec<String> = certs.iter().filter(|c| !c.is_irrational()).map(|c| c.cosine.to_string()).collect();
        let mut h = if bad.is_empty() {
            HypothesisVerdict::new("angles_irrational", Verdict::Pass, "every pattern angle certified irrational")
        } else {
            let detail = format!("rational multiples of pi: cos = {}", bad.join(", "));
            // α = (p/q)π gives the relation q·α − p·π = 0 directly; the search below names it.
            let verdict = heuristic_independence(&specs, options.bound, options.precision_digits, options.deadline)?;
            let coefficients = verdict.relation_found.unwrap_or_default();
            HypothesisVerdict::new("angles_irrational", Verdict::Fail(FailWitness::IntegerRelation { coefficients }), detail)
        };
        h.certificates = certs;
        h
    };

    let verdict = heuristic_independence(&specs, options.bound, options.precision_digits, options.deadline)?;
    let mut independent = match (&verdict.status, &verdict.relation_found) {
        (IndependenceStatus::RelationFound, Some(q)) => {
            HypothesisVerdict::new("angles_independent", Verdict::Fail(FailWitness::IntegerRelation { coefficients: q.clone() }), format!("integer relation {q:?} among (pi, angles)"))
        }
        (IndependenceStatus::Unknown, _) | (IndependenceStatus::RelationFound, None) => {
            let msg = "relation search timed out".to_string();
            HypothesisVerdict::new("angles_independent", Verdict::Inconclusive(msg.clone()), msg)
        }
        (IndependenceStatus::NoRelationFound, _) => {
            let msg = format!(
                "no integer relation among (pi, angles) with coefficients up to {} at {} digits",
                verdict.searched_bound, verdict.precision_digits
            );
            HypothesisVerdict::new("angles_independent", Verdict::Heuristic(msg.clone()), msg)
        }
    };
    independent.independence = Some(verdict);
    Ok(vec![irrational, independent])
}

/// H_{j+1} ∩ (H₁ + … + H_j)^⊥ = {o} for j = 3, …, k − 1.
fn chain_hypothesis(family: &[Subspace]) -> Result<HypothesisVerdict> {
    let mut acc = sum_all(&family[..3])?.expect("nonempty");
    for (j, next) in family.iter().enumerate().skip(3) {
        let meet = intersect(next, &perp(&acc))?;
        if !meet.is_zero() {
            return Ok(HypothesisVerdict::new(
                "intersection_chain",
                Verdict::Fail(FailWitness::ChainBreak { step: j, intersection_dim: meet.dim() }),
                format!("H{} meets (H1 + ... + H{j})^perp in dimension {}", j + 1, meet.dim()),
            ));
        }
        acc = crate::subspace::sum(&acc, next)?;
    }
    Ok(HypothesisVerdict::new("intersection_chain", Verdict::Pass, format!("checked {} extension steps", family.len().saturating_sub(3))))
}
