//! Orthogonal maps built from subspaces: reflections, stabilizer rotations,
//! words, the closed form for powers of a double reflection, and a BFS closure
//! used to detect finite (Coxeter) groups.

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subspace::{check_same, perp, principal_angles, PrincipalAngleDecomposition, Subspace, Vector};

/// Orthogonality tolerance for constructed maps (max-entry deviation of QᵀQ − I).
pub const TAU_MAP: f64 = 1e-9;

/// Default merge distance for [`finite_closure`].
pub const DEFAULT_DEDUP_TOL: f64 = 1e-6;

/// Default element cap for [`finite_closure`]. H₄ has order 14400, so
/// detecting it needs a larger cap.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Where a map came from. Metadata only: equality uses the matrix.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Identity,
    PointReflection,
    Reflection { subspace: Subspace },
    StabilizerSample { subspace: Subspace, seed: u64 },
    Word { letters: Vec<usize> },
    Matrix,
}

#[derive(Debug, Clone)]
pub struct OrthogonalMap {
    matrix: DMatrix<f64>,
    provenance: Provenance,
}

impl OrthogonalMap {
    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n, n), provenance: Provenance::Identity }
    }

    /// x ↦ −x, the reflection in {o}.
    pub fn point_reflection(n: usize) -> Self {
        Self { matrix: -DMatrix::<f64>::identity(n, n), provenance: Provenance::PointReflection }
    }

    /// Wrap an arbitrary matrix after checking orthogonality to [`TAU_MAP`].
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let map = Self { matrix, provenance: Provenance::Matrix };
        let defect = map.orthogonality_defect();
        if defect >= TAU_MAP {
            return Err(Error::InvalidArgument(format!("matrix is not orthogonal (defect {defect:e})")));
        }
        Ok(map)
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.matrix * x
    }

    /// `self` followed by `next`, i.e. the matrix `next · self`.
    pub fn then(&self, next: &OrthogonalMap) -> OrthogonalMap {
        OrthogonalMap { matrix: &next.matrix * &self.matrix, provenance: Provenance::Matrix }
    }

    /// max |QᵀQ − I|.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.ambient_dim();
        (self.matrix.transpose() * &self.matrix - DMatrix::<f64>::identity(n, n)).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Image g(H) of a subspace.
    pub fn image(&self, h: &Subspace) -> Result<Subspace> {
        check_same(self.ambient_dim(), h.ambient_dim())?;
        Subspace::column_span(&(&self.matrix * h.basis()))
    }

    /// Max-entry distance between matrices.
    pub fn distance(&self, other: &OrthogonalMap) -> f64 {
        (&self.matrix - &other.matrix).amax()
    }
}

/// R_H: x ↦ 2(x|H) − x.
pub fn reflection(h: &Subspace) -> OrthogonalMap {
    let n = h.ambient_dim();
    let matrix = h.projector() * 2.0 - DMatrix::<f64>::identity(n, n);
    OrthogonalMap { matrix, provenance: Provenance::Reflection { subspace: h.clone() } }
}

/// Haar-distributed element of SO(d): Gaussian matrix, QR with positive
/// diagonal in R, then the last column flipped if needed for det = +1.
pub(crate) fn haar_special_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..d {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(d - 1).neg_mut();
    }
    q
}

/// Seed-deterministic Haar sample from SO(n)_H: identity on H, a random
/// rotation of H^⊥.
pub fn stabilizer_sample(h: &Subspace, seed: u64) -> Result<OrthogonalMap> {
    let n = h.ambient_dim();
    if h.dim() + 2 > n {
        return Err(Error::TrivialStabilizer { dim: h.dim(), n });
    }
    let c = perp(h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = haar_special_orthogonal(c.dim(), &mut rng);
    let matrix = h.projector() + c.basis() * q * c.basis().transpose();
    Ok(OrthogonalMap {
        matrix,
        provenance: Provenance::StabilizerSample { subspace: h.clone(), seed },
    })
}

/// Compose `factors[letters[0]]` first, then `factors[letters[1]]`, and so on.
pub fn word(factors: &[OrthogonalMap], letters: &[usize]) -> Result<OrthogonalMap> {
    let n = factors.first().map(|f| f.ambient_dim()).ok_or(Error::EmptyGenerators)?;
    for f in factors {
        check_same(n, f.ambient_dim())?;
    }
    let mut m = DMatrix::<f64>::identity(n, n);
    for &l in letters {
        let f = factors.get(l).ok_or(Error::IndexOutOfRange { index: l, len: factors.len() })?;
        m = &f.matrix * m;
    }
    Ok(OrthogonalMap { matrix: m, provenance: Provenance::Word { letters: letters.to_vec() } })
}

/// Coordinates of a point in the adapted basis of a subspace pair:
/// x = Σ ρⱼ(cos θⱼ eⱼ + sin θⱼ e_{i+k+1−j}) + y₁ + y₂ with y₁ ∈ span{e_{i+1},…,e_k}
/// and y₂ ∈ (H₁+H₂)^⊥.
#[derive(Debug, Clone)]
pub struct CanonicalCoordinates<'a> {
    pub decomposition: &'a PrincipalAngleDecomposition,
    pub rho: Vec<f64>,
    pub theta: Vec<f64>,
    pub y1: Vector,
    pub y2: Vector,
}

impl<'a> CanonicalCoordinates<'a> {
    pub fn new(pa: &'a PrincipalAngleDecomposition, x: &Vector) -> Result<Self> {
        let n = pa.ambient_dim();
        check_same(n, x.len())?;
        let c = pa.adapted_basis.transpose() * x;
        let mut rho = Vec::with_capacity(pa.i);
        let mut theta = Vec::with_capacity(pa.i);
        let mut paired = vec![false; n];
        for j in 0..pa.i {
            let a = c[j];
            let b = match pa.partner(j) {
                Some(p) => {
                    paired[p] = true;
                    c[p]
                }
                None => 0.0,
            };
            rho.push(a.hypot(b));
            theta.push(b.atan2(a).rem_euclid(std::f64::consts::TAU));
        }
        let mut y1 = Vector::zeros(n);
        for l in pa.i..pa.k {
            y1 += pa.e(l) * c[l];
        }
        let mut y2 = Vector::zeros(n);
        for l in pa.k..n {
            if !paired[l] {
                y2 += pa.e(l) * c[l];
            }
        }
        Ok(Self { decomposition: pa, rho, theta, y1, y2 })
    }

    fn assemble(&self, phase: impl Fn(usize) -> f64, s1: f64, s2: f64) -> Vector {
        let pa = self.decomposition;
        let mut out = &self.y1 * s1 + &self.y2 * s2;
        for j in 0..pa.i {
            let phi = phase(j);
            out += pa.e(j) * (self.rho[j] * phi.cos());
            if let Some(p) = pa.partner(j) {
                out += pa.e(p) * (self.rho[j] * phi.sin());
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Vector {
        self.assemble(|j| self.theta[j], 1.0, 1.0)
    }

    /// R_{H₁}x: angles negated, y₂ negated.
    pub fn reflect_first(&self) -> Vector {
        self.assemble(|j| -self.theta[j], 1.0, -1.0)
    }

    /// R_{H₂}x: angles reflected about αⱼ, y₁ and y₂ negated.
    pub fn reflect_second(&self) -> Vector {
        let a = &self.decomposition.angles;
        self.assemble(|j| 2.0 * a[j] - self.theta[j], -1.0, -1.0)
    }

    /// (R_{H₂}R_{H₁})^m x: rotation by 2mαⱼ in each plane, y₁ picks up (−1)^m.
    pub fn double_power(&self, m: u64) -> Vector {
        self.signed_power(m as i64)
    }

    /// Negative m gives (R_{H₁}R_{H₂})^{|m|} x.
    fn signed_power(&self, m: i64) -> Vector {
        let a = &self.decomposition.angles;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        self.assemble(|j| 2.0 * (m as f64) * a[j] + self.theta[j], sign, 1.0)
    }
}

/// (R_{H₂}R_{H₁})^m x evaluated through the canonical form of the pair. When
/// dim H₁ < dim H₂ the roles swap and the power is inverted.
pub fn double_reflection_power(h1: &Subspace, h2: &Subspace, x: &Vector, m: u64) -> Result<Vector> {
    check_same(h1.ambient_dim(), h2.ambient_dim())?;
    check_same(h1.ambient_dim(), x.len())?;
    if m == 0 {
        return Ok(x.clone());
    }
    let m = i64::try_from(m).map_err(|_| Error::InvalidArgument(format!("power {m} too large")))?;
    if h1.dim() >= h2.dim() {
        let pa = principal_angles(h1, h2)?;
        Ok(CanonicalCoordinates::new(&pa, x)?.signed_power(m))
    } else {
        let pa = principal_angles(h2, h1)?;
        Ok(CanonicalCoordinates::new(&pa, x)?.signed_power(-m))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosureOutcome {
    Finite { order: usize },
    ExceededCap { cap: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct FiniteClosureReport {
    pub outcome: ClosureOutcome,
    pub generators_count: usize,
    pub dedup_tol: f64,
    #[serde(skip)]
    pub elements: Vec<DMatrix<f64>>,
}

impl FiniteClosureReport {
    pub fn order(&self) -> Option<usize> {
        match self.outcome {
            ClosureOutcome::Finite { order } => Some(order),
            ClosureOutcome::ExceededCap { .. } => None,
        }
    }

    /// Whether every `g · e` lands within `tol` of a retained element.
    pub fn is_closed_under(&self, generators: &[OrthogonalMap], tol: f64) -> bool {
        self.elements.iter().all(|e| {
            generators.iter().all(|g| {
                let p = g.matrix() * e;
                self.elements.iter().any(|f| (&p - f).amax() < tol)
            })
        })
    }
}

/// Index of matrices keyed on a fixed linear functional, so that near-duplicates
/// always land in the same or an adjacent bucket.
struct MatrixIndex {
    weights: Vec<f64>,
    width: f64,
    buckets: HashMap<i64, Vec<usize>>,
}

impl MatrixIndex {
    fn new(n: usize, tol: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c105);
        let weights: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let l1: f64 = weights.iter().map(|w| w.abs()).sum();
        Self { weights, width: (2.0 * l1 * tol).max(f64::MIN_POSITIVE), buckets: HashMap::new() }
    }

    fn key(&self, m: &DMatrix<f64>) -> i64 {
        let f: f64 = m.iter().zip(&self.weights).map(|(a, w)| a * w).sum();
        (f / self.width).floor() as i64
    }

    fn find(&self, m: &DMatrix<f64>, elements: &[DMatrix<f64>], tol: f64) -> Option<usize> {
        let k = self.key(m);
        (k - 1..=k + 1)
            .filter_map(|b| self.buckets.get(&b))
            .flatten()
            .copied()
            .find(|&idx| (m - &elements[idx]).amax() < tol)
    }

    fn insert(&mut self, m: &DMatrix<f64>, idx: usize) {
        let k = self.key(m);
        self.buckets.entry(k).or_default().push(idx);
    }
}

/// Breadth-first closure of the group generated by `generators`, merging
/// matrices closer than `dedup_tol` entrywise. Hitting the cap is evidence of an
/// infinite group, not a proof.
pub fn finite_closure(
    generators: &[OrthogonalMap],
    cap: usize,
    dedup_tol: f64,
) -> Result<FiniteClosureReport> {
    if cap < 1 {
        return Err(Error::InvalidCap);
    }
    let n = generators.first().map(|g| g.ambient_dim()).ok_or(Error::EmptyGenerators)?;
    for g in generators {
        check_same(n, g.ambient_dim())?;
    }
    let mut index = MatrixIndex::new(n, dedup_tol);
    let mut elements = vec![DMatrix::<f64>::identity(n, n)];
    index.insert(&elements[0], 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        for g in generators {
            let p = g.matrix() * &elements[idx];
            if index.find(&p, &elements, dedup_tol).is_none() {
                if elements.len() == cap {
                    return Ok(FiniteClosureReport {
                        outcome: ClosureOutcome::ExceededCap { cap },
                        generators_count: generators.len(),
                        dedup_tol,
                        elements,
                    });
                }
                index.insert(&p, elements.len());
                queue.push_back(elements.len());
                elements.push(p);
            }
        }
    }
    Ok(FiniteClosureReport {
        outcome: ClosureOutcome::Finite { order: elements.len() },
        generators_count: generators.len(),
        dedup_tol,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn mirror(theta: f64) -> Subspace {
        Subspace::span(&[v(&[theta.cos(), theta.sin()])]).unwrap()
    }

    #[test]
    fn reflection_examples() {
        let r = reflection(&Subspace::coordinate(2, &[0]).unwrap());
        assert_eq!(r.matrix(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        let r = reflection(&Subspace::zero(3).unwrap());
        assert_eq!(r.matrix(), &(-DMatrix::<f64>::identity(3, 3)));
        // 2P − I with P = ½[[1,1],[1,1]]
        let r = reflection(&mirror(FRAC_PI_4));
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!((r.matrix() - expected).amax() < 1e-15);
    }

    #[test]
    fn reflection_determinant_sign() {
        for (n, axes) in [(3, vec![0]), (4, vec![0, 2]), (5, vec![1, 2, 3])] {
            let h = Subspace::coordinate(n, &axes).unwrap();
            let r = reflection(&h);
            let expected = if (n - h.dim()).is_multiple_of(2) { 1.0 } else { -1.0 };
            assert!((r.determinant() - expected).abs() < 1e-12);
            assert!((r.matrix() - r.matrix().transpose()).amax() < 1e-15);
        }
    }

    #[test]
    fn stabilizer_rejects_trivial_cases() {
        let h = Subspace::coordinate(4, &[0, 1, 2]).unwrap();
        assert_eq!(stabilizer_sample(&h, 1).unwrap_err(), Error::TrivialStabilizer { dim: 3, n: 4 });
    }

    #[test]
    fn stabilizer_of_axis_is_planar_rotation() {
        let h = Subspace::coordinate(3, &[2]).unwrap();
        for seed in 0..20 {
            let q = stabilizer_sample(&h, seed).unwrap();
            let m = q.matrix();
            assert!((m[(2, 2)] - 1.0).abs() < 1e-12);
            assert!(m[(0, 2)].abs() < 1e-12 && m[(1, 2)].abs() < 1e-12);
            assert!(m[(2, 0)].abs() < 1e-12 && m[(2, 1)].abs() < 1e-12);
            assert!((q.determinant() - 1.0).abs() < 1e-9);
            assert!(q.orthogonality_defect() < TAU_MAP);
        }
    }

    #[test]
    fn stabilizer_is_seed_deterministic() {
        let h = Subspace::coordinate(5, &[0, 3]).unwrap();
        let a = stabilizer_sample(&h, 99).unwrap();
        let b = stabilizer_sample(&h, 99).unwrap();
        let c = stabilizer_sample(&h, 100).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert!(a.distance(&c) > 1e-3);
    }

    #[test]
    fn haar_sample_is_uniform_on_the_sphere() {
        // chi-square over 24 equal-area cells: 4 bands in z × 6 longitude sectors
        let h = Subspace::zero(3).unwrap();
        let samples = 10_000;
        let mut counts = [0usize; 24];
        for seed in 0..samples {
            let q = stabilizer_sample(&h, seed as u64).unwrap();
            let p = q.matrix().column(0);
            let band = (((p[2] + 1.0) / 2.0 * 4.0).floor() as usize).min(3);
            let lon = p[1].atan2(p[0]).rem_euclid(2.0 * PI);
            let sector = ((lon / (2.0 * PI) * 6.0).floor() as usize).min(5);
            counts[band * 6 + sector] += 1;
        }
        let expected = samples as f64 / 24.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 99.9% quantile of chi-square with 23 degrees of freedom
        assert!(chi2 < 49.73, "chi2 = {chi2}");
    }

    #[test]
    fn word_examples() {
        let r = reflection(&mirror(0.3));
        let w = word(std::slice::from_ref(&r), &[0, 0]).unwrap();
        assert!((w.matrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-12);
        let w = word(&[r.clone(), r.clone()], &[]).unwrap();
        assert_eq!(w.matrix(), &DMatrix::<f64>::identity(2, 2));
        assert_eq!(word(&[r], &[1]).unwrap_err(), Error::IndexOutOfRange { index: 1, len: 1 });
    }

    #[test]
    fn word_matches_repeated_squaring() {
        let h1 = Subspace::span(&[v(&[1.0, 0.2, -0.4]), v(&[0.0, 1.0, 0.3])]).unwrap();
        let h2 = Subspace::span(&[v(&[0.5, -1.0, 1.0]), v(&[1.0, 1.0, 0.0])]).unwrap();
        let (r1, r2) = (reflection(&h1), reflection(&h2));
        let g = r2.matrix() * r1.matrix();
        for m in [1usize, 2, 7, 31, 64] {
            let letters: Vec<usize> = (0..m).flat_map(|_| [0, 1]).collect();
            let w = word(&[r1.clone(), r2.clone()], &letters).unwrap();
            let mut acc = DMatrix::<f64>::identity(3, 3);
            let mut base = g.clone();
            let mut e = m;
            while e > 0 {
                if e & 1 == 1 {
                    acc = &acc * &base;
                }
                base = &base * &base;
                e >>= 1;
            }
            assert!((w.matrix() - acc).amax() < 1e-10);
        }
    }

    #[test]
    fn double_power_of_basis_vector() {
        let a = 0.41f64;
        let h1 = Subspace::coordinate(3, &[0]).unwrap();
        let h2 = Subspace::span(&[v(&[a.cos(), a.sin(), 0.0])]).unwrap();
        let x = v(&[1.0, 0.0, 0.0]);
        assert_eq!(double_reflection_power(&h1, &h2, &x, 0).unwrap(), x);
        let y = double_reflection_power(&h1, &h2, &x, 1).unwrap();
        assert!((y - v(&[(2.0 * a).cos(), (2.0 * a).sin(), 0.0])).norm() < 1e-12);
    }

    #[test]
    fn closure_of_single_reflection() {
        let r = reflection(&mirror(0.3));
        let rep = finite_closure(&[r], 10, DEFAULT_DEDUP_TOL).unwrap();
        assert_eq!(rep.outcome, ClosureOutcome::Finite { order: 2 });
    }

    #[test]
    fn closure_of_square_mirrors_is_dihedral() {
        let gens = [reflection(&mirror(0.0)), reflection(&mirror(FRAC_PI_4))];
        let rep = finite_closure(&gens, 100, DEFAULT_DEDUP_TOL).unwrap();
        assert_eq!(rep.order(), Some(8));
        assert!(rep.is_closed_under(&gens, 1e-9));
    }

    #[test]
    fn closure_errors() {
        let r = reflection(&mirror(0.3));
        assert_eq!(finite_closure(&[r], 0, 1e-6).unwrap_err(), Error::InvalidCap);
        assert_eq!(finite_closure(&[], 10, 1e-6).unwrap_err(), Error::EmptyGenerators);
    }

    #[test]
    fn closure_of_irrational_mirrors_exceeds_cap() {
        let theta = (1.0f64 / 3.0).acos();
        let gens = [reflection(&mirror(0.0)), reflection(&mirror(theta))];
        let rep = finite_closure(&gens, 10_000, DEFAULT_DEDUP_TOL).unwrap();
        assert_eq!(rep.outcome, ClosureOutcome::ExceededCap { cap: 10_000 });
    }
}
