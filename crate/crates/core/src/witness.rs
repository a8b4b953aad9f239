//! Explicit subspace families that satisfy the generation theorems, and
//! families that provably do not.

use serde::Serialize;

use crate::conditions::{evaluate, AngleHints, ConditionReport, EvaluateOptions, Mode, PairCosine, Rational};
use crate::error::{Error, Result};
use crate::subspace::{check_ambient, perp, sum_all, unit, Subspace, Vector};

/// The result a generated family instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremTag {
    LineReflections,
    HyperplaneReflections,
    MidDimensionReflections,
    RotationStabilizers,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessConfig {
    pub ambient_dim: usize,
    pub mode: Mode,
    pub subspaces: Vec<Subspace>,
    pub theorem: TheoremTag,
    /// Exact cosines used by the construction.
    pub hints: AngleHints,
}

impl WitnessConfig {
    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn evaluate(&self, options: &EvaluateOptions) -> Result<ConditionReport> {
        evaluate(&self.subspaces, self.mode, &self.hints, options)
    }
}

/// A conserved quantity x ↦ ‖x|S‖.
#[derive(Debug, Clone, Serialize)]
pub struct ConservedQuantity {
    pub label: String,
    pub subspace: Subspace,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleConfig {
    pub ambient_dim: usize,
    pub subspaces: Vec<Subspace>,
    /// Indices into `subspaces`; the orthogonal complements of the two groups are mutually orthogonal.
    pub orthogonal_parts: (Vec<usize>, Vec<usize>),
    pub conserved: Vec<ConservedQuantity>,
}

impl CounterexampleConfig {
    pub fn evaluate(&self, options: &EvaluateOptions) -> Result<ConditionReport> {
        evaluate(&self.subspaces, Mode::Rotations, &AngleHints::default(), options)
    }
}

fn third() -> (f64, f64) {
    (1.0 / 3.0, 8f64.sqrt() / 3.0)
}

fn span(vectors: &[Vector]) -> Subspace {
    Subspace::span(vectors).expect("constructed vectors are independent and of valid dimension")
}

/// n lines forming a path in the orthogonality graph, consecutive lines at
/// angle arccos(1/3), non-consecutive lines orthogonal.
pub fn lines_witness(n: usize) -> Result<WitnessConfig> {
    if n < 2 {
        return Err(Error::BadDimension(format!("lines witness needs n >= 2, got {n}")));
    }
    check_ambient(n)?;
    let mut dirs: Vec<Vector> = vec![unit(n, 0)];
    for j in 1..n {
        // component of the previous direction orthogonal to all earlier ones
        let prev = &dirs[j - 1];
        let mut g = prev.clone();
        if j >= 2 {
            let earlier = span(&dirs[..j - 1]);
            g -= earlier.projector() * prev;
        }
        let s = g.norm();
        let a = 1.0 / (3.0 * s);
        let d = g / s * a + unit(n, j) * (1.0 - a * a).sqrt();
        dirs.push(d);
    }
    let subspaces = dirs.iter().map(|d| span(std::slice::from_ref(d))).collect();
    Ok(WitnessConfig {
        ambient_dim: n,
        mode: Mode::Lines,
        subspaces,
        theorem: TheoremTag::LineReflections,
        hints: path_hints(n)?,
    })
}

fn path_hints(n: usize) -> Result<AngleHints> {
    let cosine = Rational::new(1, 3)?;
    Ok(AngleHints {
        pair_cosines: (1..n).map(|j| PairCosine { pair: [j - 1, j], cosine }).collect(),
        pattern_cosines: Vec::new(),
    })
}

/// The hyperplanes orthogonal to [`lines_witness`].
pub fn hyperplanes_witness(n: usize) -> Result<WitnessConfig> {
    let lines = lines_witness(n)?;
    Ok(WitnessConfig {
        mode: Mode::Hyperplanes,
        subspaces: lines.subspaces.iter().map(perp).collect(),
        theorem: TheoremTag::HyperplaneReflections,
        ..lines
    })
}

/// ⌈n/i⌉ + 1 subspaces of dimension i (2 ≤ i ≤ n − 2) whose reflections generate O(n).
pub fn reflection_witness(n: usize, i: usize) -> Result<WitnessConfig> {
    if i < 2 || i + 2 > n {
        return Err(Error::BadDimension(format!(
            "reflection witness needs 2 <= i <= n-2, got n = {n}, i = {i}; use the lines or hyperplanes witness for i = 1 or i = n-1"
        )));
    }
    check_ambient(n)?;
    if 2 * i > n {
        let dual = reflection_witness(n, n - i)?;
        return Ok(WitnessConfig { subspaces: dual.subspaces.iter().map(perp).collect(), ..dual });
    }
    let alphas: Vec<f64> = (1..=i).map(|j| (1.0 / (2 * j + 1) as f64).acos()).collect();
    let e = |idx: usize| unit(n, idx);
    // 0-based: e(2j) and e(2j+1) play the roles of e_{2j-1}, e_{2j}
    let h1: Vec<Vector> = (0..i).map(|j| e(2 * j)).collect();
    let h2: Vec<Vector> = (0..i).map(|j| e(2 * j) * alphas[j].cos() + e(2 * j + 1) * alphas[j].sin()).collect();
    let h3: Vec<Vector> = (0..i)
        .map(|j| {
            let partner = if j == 0 { 2 * i - 1 } else { 2 * j - 1 };
            e(2 * j) * alphas[j].cos() + e(partner) * alphas[j].sin()
        })
        .collect();
    let mut subspaces = vec![span(&h1), span(&h2), span(&h3)];

    let (c, s) = third();
    let mut covered = 2 * i;
    while covered < n {
        let fresh = i.min(n - covered);
        let basis: Vec<Vector> = (0..i)
            .map(|t| if t < fresh { e(t) * c + e(covered + t) * s } else { e(t) })
            .collect();
        subspaces.push(span(&basis));
        covered += fresh;
    }
    let hints = AngleHints {
        pair_cosines: Vec::new(),
        pattern_cosines: (1..=i as i64).map(|j| Rational::new(1, 2 * j + 1)).collect::<Result<_>>()?,
    };
    Ok(WitnessConfig {
        ambient_dim: n,
        mode: Mode::MidReflections,
        subspaces,
        theorem: TheoremTag::MidDimensionReflections,
        hints,
    })
}

/// ⌈n/(n − i)⌉ subspaces of dimension i (1 ≤ i ≤ n − 2) whose stabilizers generate SO(n).
pub fn rotation_witness(n: usize, i: usize) -> Result<WitnessConfig> {
    if i < 1 || i + 2 > n {
        return Err(Error::BadDimension(format!("rotation witness needs 1 <= i <= n-2, got n = {n}, i = {i}")));
    }
    check_ambient(n)?;
    let m = n - i;
    let e = |idx: usize| unit(n, idx);
    let (c, s) = third();
    let mut perps = vec![span(&(0..m).map(e).collect::<Vec<_>>())];
    let mut covered = m;
    while covered < n {
        let fresh = m.min(n - covered);
        let mut basis = vec![e(0) * c + e(covered) * s];
        basis.extend((1..fresh).map(|t| e(covered + t)));
        basis.extend((1..=m - fresh).map(e));
        perps.push(span(&basis));
        covered += fresh;
    }
    Ok(WitnessConfig {
        ambient_dim: n,
        mode: Mode::Rotations,
        subspaces: perps.iter().map(perp).collect(),
        theorem: TheoremTag::RotationStabilizers,
        hints: AngleHints::default(),
    })
}

/// A family of subspaces whose orthogonal complements split into two mutually
/// orthogonal coordinate blocks. `part_dims` lists the codimension of each
/// subspace, part by part; the first part occupies the last coordinates.
pub fn counterexample(n: usize, part_dims: (&[usize], &[usize])) -> Result<CounterexampleConfig> {
    check_ambient(n)?;
    let (a, b) = part_dims;
    if a.is_empty() && b.is_empty() {
        return Err(Error::BadPartition("both parts are empty".into()));
    }
    if let Some(&c) = a.iter().chain(b).find(|&&c| c < 2 || c >= n) {
        return Err(Error::BadPartition(format!("codimension {c} outside [2, {}]", n - 1)));
    }
    let block_a = a.iter().copied().max().unwrap_or(0);
    let block_b = b.iter().copied().max().unwrap_or(0);
    if block_a + block_b > n {
        return Err(Error::BadPartition(format!("blocks of size {block_a} and {block_b} overflow R^{n}")));
    }
    let coordinate_perp = |axes: Vec<usize>| -> Result<Subspace> { Ok(perp(&Subspace::coordinate(n, &axes)?)) };
    let mut subspaces = Vec::new();
    let mut parts = (Vec::new(), Vec::new());
    for &c in a {
        parts.0.push(subspaces.len());
        subspaces.push(coordinate_perp((n - block_a..n - block_a + c).collect())?);
    }
    for &c in b {
        parts.1.push(subspaces.len());
        subspaces.push(coordinate_perp((0..c).collect())?);
    }
    let mut conserved = Vec::new();
    for (name, idx) in [("S1", &parts.0), ("S2", &parts.1)] {
        if let Some(s) = sum_all(idx.iter().map(|&j| perp(&subspaces[j])).collect::<Vec<_>>().iter())? {
            conserved.push(ConservedQuantity { label: format!("|x|{name}| with {name} = {}", s.describe()), subspace: s });
        }
    }
    Ok(CounterexampleConfig { ambient_dim: n, subspaces, orthogonal_parts: parts, conserved })
}

/// The regular tetrahedron with vertices (±1, ±1, ±1)/√3 (even number of minus
/// signs) and the three lines through midpoints of opposite edges.
#[derive(Debug, Clone)]
pub struct TetrahedronFixture {
    pub lines: Vec<Subspace>,
    pub vertices: Vec<Vector>,
}

pub fn tetrahedron_fixture() -> TetrahedronFixture {
    let r = 1.0 / 3f64.sqrt();
    let vertices = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
        .iter()
        .map(|v| Vector::from_column_slice(v) * r)
        .collect::<Vec<_>>();
    let mut lines = Vec::new();
    // opposite edges (0,p) and the complementary pair share a midpoint axis
    for p in 1..4 {
        let mid = (&vertices[0] + &vertices[p]) / 2.0;
        lines.push(span(&[mid]));
    }
    TetrahedronFixture { lines, vertices }
}
