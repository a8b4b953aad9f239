//! Linear subspaces of ℝⁿ stored by orthonormal bases.
//!
//! All rank decisions go through singular values (or symmetric eigenvalues of
//! projectors) so that results do not depend on which basis the caller used.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::{MAX_AMBIENT_DIM, TAU_ORTHO};

pub type Vector = DVector<f64>;

/// Relative singular-value cutoff for rank decisions.
pub const TAU_RANK: f64 = 1e-8;

/// Residual bound for approximate subspace equality.
pub const TAU_EQUAL: f64 = 1e-8;

pub(crate) fn check_ambient(n: usize) -> Result<()> {
    if (2..=MAX_AMBIENT_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::AmbientDimension(n))
    }
}

pub(crate) fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A linear subspace of ℝⁿ. Columns of `basis` are orthonormal.
#[derive(Debug, Clone)]
pub struct Subspace {
    n: usize,
    basis: DMatrix<f64>,
}

impl Subspace {
    /// The zero subspace {o}.
    pub fn zero(n: usize) -> Result<Self> {
        check_ambient(n)?;
        Ok(Self { n, basis: DMatrix::zeros(n, 0) })
    }

    /// All of ℝⁿ.
    pub fn full(n: usize) -> Result<Self> {
        check_ambient(n)?;
        Ok(Self { n, basis: DMatrix::identity(n, n) })
    }

    /// Span of the listed standard basis vectors (0-based indices).
    pub fn coordinate(n: usize, axes: &[usize]) -> Result<Self> {
        check_ambient(n)?;
        let vectors = axes
            .iter()
            .map(|&a| {
                if a >= n {
                    Err(Error::IndexOutOfRange { index: a, len: n })
                } else {
                    Ok(unit(n, a))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        orthonormalize_in(n, &vectors, TAU_ORTHO)
    }

    /// Span of arbitrary vectors, orthonormalized with the default tolerance.
    pub fn span(vectors: &[Vector]) -> Result<Self> {
        orthonormalize(vectors, TAU_ORTHO)
    }

    /// Span of the columns of `m`, keeping singular directions above the rank cutoff.
    pub fn column_span(m: &DMatrix<f64>) -> Result<Self> {
        check_ambient(m.nrows())?;
        Ok(Self { n: m.nrows(), basis: column_span(m) })
    }

    /// A Gaussian-random subspace of the given dimension.
    pub fn random<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Result<Self> {
        check_ambient(n)?;
        if dim > n {
            return Err(Error::BadDimension(format!("dim {dim} exceeds ambient {n}")));
        }
        loop {
            let vectors: Vec<Vector> = (0..dim)
                .map(|_| Vector::from_fn(n, |_, _| rng.sample(StandardNormal)))
                .collect();
            let s = orthonormalize_in(n, &vectors, 1e-6)?;
            if s.dim() == dim {
                return Ok(s);
            }
        }
    }

    pub(crate) fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        Self { n: basis.nrows(), basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// n × dim matrix with orthonormal columns.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Largest |⟨bᵢ, bⱼ⟩ − δᵢⱼ| over basis pairs.
    pub fn gram_defect(&self) -> f64 {
        let g = self.basis.transpose() * &self.basis;
        let id = DMatrix::<f64>::identity(g.nrows(), g.ncols());
        (g - id).amax()
    }

    /// Residual norm of `x` after projecting onto the subspace.
    pub fn residual(&self, x: &Vector) -> f64 {
        let coeffs = self.basis.transpose() * x;
        (x - &self.basis * coeffs).norm()
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.residual(x) < tol
    }

    /// Equality as subspaces: same dimension and every basis vector of one lies in
    /// the other up to [`TAU_EQUAL`].
    pub fn approx_eq(&self, other: &Subspace) -> bool {
        self.n == other.n
            && self.dim() == other.dim()
            && self.basis.column_iter().all(|b| other.residual(&b.into_owned()) < TAU_EQUAL)
    }

    /// Largest singular value of B₁ᵀB₂, i.e. the cosine of the smallest principal
    /// angle. Zero exactly when the subspaces are mutually orthogonal.
    /// "span{e1,e3}" for coordinate subspaces, otherwise "a d-dimensional subspace".
    pub fn describe(&self) -> String {
        let axes: Vec<usize> = (0..self.n).filter(|&a| self.contains(&unit(self.n, a), 1e-12)).collect();
        if axes.len() == self.dim() {
            let names: Vec<String> = axes.iter().map(|a| format!("e{}", a + 1)).collect();
            format!("span{{{}}}", names.join(","))
        } else {
            format!("a {}-dimensional subspace", self.dim())
        }
    }

    pub fn max_overlap(&self, other: &Subspace) -> f64 {
        if self.is_zero() || other.is_zero() {
            return 0.0;
        }
        let m = self.basis.transpose() * &other.basis;
        singular_values(&m).first().copied().unwrap_or(0.0)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let basis: Vec<Vec<f64>> = self
            .basis
            .column_iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        let mut st = serializer.serialize_struct("Subspace", 2)?;
        st.serialize_field("ambient_dim", &self.n)?;
        st.serialize_field("basis", &basis)?;
        st.end()
    }
}

pub(crate) fn unit(n: usize, axis: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[axis] = 1.0;
    v
}

/// Orthonormal basis for the column space of `m`, by SVD thresholding at
/// `TAU_RANK · σ_max`.
pub(crate) fn column_span(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    if m.ncols() == 0 || m.amax() == 0.0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = thin_svd(m);
    let smax = svd.s[0];
    let keep = svd.s.iter().take_while(|&&s| s > TAU_RANK * smax).count();
    svd.u.columns(0, keep).into_owned()
}

/// Numerical rank of the columns of `m` under the same cutoff as [`column_span`].
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 || m.amax() == 0.0 {
        return 0;
    }
    let sv = singular_values(m);
    sv.iter().filter(|&&s| s > TAU_RANK * sv[0]).count()
}

/// Thin SVD with singular values in non-increasing order.
pub(crate) struct ThinSvd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
}

// nalgebra's bidiagonal SVD mis-converges on rank-deficient inputs (its
// recomposition can be off by 0.1 or more), so every SVD goes through faer.
pub(crate) fn thin_svd(m: &DMatrix<f64>) -> ThinSvd {
    let f = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)]);
    let svd = f.thin_svd().expect("SVD of a finite matrix converges");
    let (u, v) = (svd.U(), svd.V());
    let s = svd.S().column_vector();
    ThinSvd {
        u: DMatrix::from_fn(u.nrows(), u.ncols(), |r, c| u[(r, c)]),
        s: (0..s.nrows()).map(|j| s[j]).collect(),
        v: DMatrix::from_fn(v.nrows(), v.ncols(), |r, c| v[(r, c)]),
    }
}

pub(crate) fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let f = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)]);
    f.singular_values().expect("SVD of a finite matrix converges")
}

/// Orthonormal basis of the orthogonal complement of the span of orthonormal
/// columns `cols` (n × d). Works for any n, including n = 1.
pub(crate) fn orthonormal_complement(cols: &DMatrix<f64>) -> DMatrix<f64> {
    let n = cols.nrows();
    let d = cols.ncols();
    if d == 0 {
        return DMatrix::identity(n, n);
    }
    if d >= n {
        return DMatrix::zeros(n, 0);
    }
    let p = cols * cols.transpose();
    let eig = SymmetricEigen::new(p);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let take = &order[..n - d];
    let mut out = DMatrix::from_fn(n, take.len(), |r, c| eig.eigenvectors[(r, take[c])]);
    // one Gram-Schmidt sweep against `cols` and each other
    for c in 0..out.ncols() {
        let mut v = out.column(c).into_owned();
        for _ in 0..2 {
            v -= cols * (cols.transpose() * &v);
            for prev in 0..c {
                let p = out.column(prev).into_owned();
                v -= &p * p.dot(&v);
            }
        }
        let norm = v.norm();
        out.set_column(c, &(v / norm));
    }
    out
}

fn orthonormalize_in(n: usize, vectors: &[Vector], tol: f64) -> Result<Subspace> {
    let mut kept: Vec<Vector> = Vec::new();
    for v in vectors {
        check_same(n, v.len())?;
        let mut r = v.clone();
        // twice is enough (Kahan)
        for _ in 0..2 {
            for q in &kept {
                let c = q.dot(&r);
                r -= q * c;
            }
        }
        let norm = r.norm();
        if norm >= tol {
            kept.push(r / norm);
        }
    }
    let basis = if kept.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&kept)
    };
    Ok(Subspace { n, basis })
}

/// Gram–Schmidt with re-orthogonalization. Vectors whose residual after removing
/// the previous directions falls below `tol` are dropped.
pub fn orthonormalize(vectors: &[Vector], tol: f64) -> Result<Subspace> {
    let n = vectors
        .first()
        .map(|v| v.len())
        .ok_or_else(|| Error::InvalidArgument("no vectors to orthonormalize".into()))?;
    check_ambient(n)?;
    orthonormalize_in(n, vectors, tol)
}

/// H₁ + H₂.
pub fn sum(h1: &Subspace, h2: &Subspace) -> Result<Subspace> {
    check_same(h1.n, h2.n)?;
    if h1.is_zero() {
        return Ok(h2.clone());
    }
    if h2.is_zero() {
        return Ok(h1.clone());
    }
    let stacked = DMatrix::from_columns(
        &h1.basis.column_iter().chain(h2.basis.column_iter()).collect::<Vec<_>>(),
    );
    Ok(Subspace { n: h1.n, basis: column_span(&stacked) })
}

/// Sum of many subspaces; `None` for an empty list.
pub fn sum_all<'a, I>(subspaces: I) -> Result<Option<Subspace>>
where
    I: IntoIterator<Item = &'a Subspace>,
{
    let mut cols = Vec::new();
    let mut n = None;
    for s in subspaces {
        match n {
            None => n = Some(s.n),
            Some(m) => check_same(m, s.n)?,
        }
        cols.extend(s.basis.column_iter());
    }
    let Some(n) = n else { return Ok(None) };
    if cols.is_empty() {
        return Ok(Some(Subspace::zero(n)?));
    }
    Ok(Some(Subspace { n, basis: column_span(&DMatrix::from_columns(&cols)) }))
}

/// H^⊥.
pub fn perp(h: &Subspace) -> Subspace {
    Subspace { n: h.n, basis: orthonormal_complement(&h.basis) }
}

/// H₁ ∩ H₂ = (H₁^⊥ + H₂^⊥)^⊥.
pub fn intersect(h1: &Subspace, h2: &Subspace) -> Result<Subspace> {
    check_same(h1.n, h2.n)?;
    Ok(perp(&sum(&perp(h1), &perp(h2))?))
}

/// x|H.
pub fn project(x: &Vector, h: &Subspace) -> Result<Vector> {
    check_same(h.n, x.len())?;
    Ok(&h.basis * (h.basis.transpose() * x))
}

/// Span of the projections of a basis of `l` onto `h`, i.e. L|H.
pub fn projected_span(l: &Subspace, h: &Subspace) -> Result<Subspace> {
    check_same(h.n, l.n)?;
    let proj = h.projector() * &l.basis;
    Ok(Subspace { n: h.n, basis: column_span(&proj) })
}

/// Canonical form of a pair of subspaces: increasing principal angles and an
/// orthonormal basis e₁,…,eₙ with H₁ = span{e₁,…,e_k} and
/// H₂ = span{cos αⱼ eⱼ + sin αⱼ e_{i+k+1−j}}.
#[derive(Debug, Clone)]
pub struct PrincipalAngleDecomposition {
    /// α₁ ≤ … ≤ αᵢ in [0, π/2].
    pub angles: Vec<f64>,
    /// n × n orthogonal matrix whose columns are e₁,…,eₙ.
    pub adapted_basis: DMatrix<f64>,
    /// dim H₁.
    pub k: usize,
    /// dim H₂.
    pub i: usize,
}

impl PrincipalAngleDecomposition {
    pub fn ambient_dim(&self) -> usize {
        self.adapted_basis.nrows()
    }

    /// 0-based column index paired with column `j` (0-based, `j < i`), if it exists.
    pub fn partner(&self, j: usize) -> Option<usize> {
        let slot = self.i + self.k - 1 - j;
        (slot < self.ambient_dim()).then_some(slot)
    }

    pub fn e(&self, idx: usize) -> Vector {
        self.adapted_basis.column(idx).into_owned()
    }

    /// Rebuild H₁ from the adapted basis.
    pub fn first(&self) -> Subspace {
        Subspace::from_orthonormal(self.adapted_basis.columns(0, self.k).into_owned())
    }

    /// Rebuild H₂ from the adapted basis and the angles.
    pub fn second(&self) -> Subspace {
        let n = self.ambient_dim();
        let cols: Vec<Vector> = (0..self.i)
            .map(|j| {
                let a = self.angles[j];
                let mut v = self.e(j) * a.cos();
                if let Some(p) = self.partner(j) {
                    v += self.e(p) * a.sin();
                }
                v
            })
            .collect();
        orthonormalize_in(n, &cols, 1e-12).expect("ambient dimension already checked")
    }
}

/// Principal angles between H₁ (dim k) and H₂ (dim i ≤ k) with an adapted basis.
pub fn principal_angles(h1: &Subspace, h2: &Subspace) -> Result<PrincipalAngleDecomposition> {
    check_same(h1.n, h2.n)?;
    let n = h1.n;
    let (k, i) = (h1.dim(), h2.dim());
    if i == 0 {
        return Err(Error::ZeroDimensional);
    }
    if k < i {
        return Err(Error::InvalidArgument(format!(
            "principal_angles expects dim H1 >= dim H2, got {k} < {i}"
        )));
    }
    // Principal vectors of H₂ come from the SVD of (I − P₁)B₂, which resolves
    // small angles to full precision; cosines and sines are then read off the
    // same vector so both ends of [0, π/2] stay accurate.
    let p1 = h1.projector();
    let sines = (DMatrix::<f64>::identity(n, n) - &p1) * &h2.basis;
    let svd = thin_svd(&sines);
    // smallest sines first
    let order: Vec<usize> = (0..i).rev().collect();

    let mut angles = Vec::with_capacity(i);
    let mut first_vecs: Vec<Option<Vector>> = Vec::with_capacity(i);
    let mut partners: Vec<Option<Vector>> = Vec::with_capacity(i);
    for &idx in &order {
        let vj = &h2.basis * svd.v.column(idx);
        let along = &p1 * &vj;
        let resid = &vj - &along;
        let (c, s) = (along.norm(), resid.norm());
        if s < TAU_ORTHO {
            angles.push(0.0);
            partners.push(None);
        } else {
            angles.push(s.atan2(c).min(FRAC_PI_2));
            partners.push(Some(resid / s));
        }
        first_vecs.push((c >= TAU_ORTHO).then(|| along / c));
    }
    // keep the sort exact after rounding
    for j in 1..angles.len() {
        if angles[j] < angles[j - 1] {
            angles[j] = angles[j - 1];
        }
    }

    // H₁ slots: the known principal vectors, then any completion inside H₁
    let known: Vec<Vector> = first_vecs.iter().flatten().cloned().collect();
    let completion = if known.is_empty() {
        h1.basis.clone()
    } else {
        let coords = h1.basis.transpose() * DMatrix::from_columns(&known);
        let q = orthonormalize_in(k, &coords.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>(), 1e-12)?;
        &h1.basis * orthonormal_complement(&q.basis)
    };
    let mut spare = completion.column_iter().map(|c| c.into_owned());
    let mut cols: Vec<Option<Vector>> = vec![None; n];
    for (j, v) in first_vecs.into_iter().enumerate() {
        cols[j] = v.or_else(|| spare.next());
    }
    for slot in cols.iter_mut().take(k).skip(i) {
        *slot = spare.next();
    }
    for (j, w) in partners.into_iter().enumerate() {
        let slot = i + k - 1 - j;
        if let (Some(w), true) = (w, slot < n) {
            cols[slot] = Some(w);
        }
    }
    let filled: Vec<Vector> = cols.iter().flatten().cloned().collect();
    let filled_m = DMatrix::from_columns(&filled);
    let fill = orthonormal_complement(&filled_m);
    let mut next = 0;
    for slot in cols.iter_mut() {
        if slot.is_none() {
            *slot = Some(fill.column(next).into_owned());
            next += 1;
        }
    }
    let adapted: Vec<Vector> = cols.into_iter().map(|c| c.expect("all slots filled")).collect();
    Ok(PrincipalAngleDecomposition {
        angles,
        adapted_basis: DMatrix::from_columns(&adapted),
        k,
        i,
    })
}

/// The sub-sphere Sⁿ⁻¹ ∩ (V + x), with center x − x|V.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SubSphere {
    pub direction: Subspace,
    #[serde(serialize_with = "serialize_vector")]
    pub center: Vector,
    pub radius: f64,
}

impl SubSphere {
    /// The whole unit sphere Sⁿ⁻¹.
    pub fn full(n: usize) -> Result<Self> {
        Ok(Self { direction: Subspace::full(n)?, center: Vector::zeros(n), radius: 1.0 })
    }

    pub fn ambient_dim(&self) -> usize {
        self.direction.ambient_dim()
    }

    pub fn is_degenerate(&self) -> bool {
        self.radius == 0.0
    }

    /// Distance from `p` to the sub-sphere's carrier conditions.
    pub fn contains(&self, p: &Vector, tol: f64) -> bool {
        let offset = p - &self.center;
        self.direction.residual(&offset) < tol && (offset.norm() - self.radius).abs() < tol
    }
}

pub(crate) fn serialize_vector<S: Serializer>(
    v: &Vector,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    v.as_slice().serialize(s)
}

/// Sⁿ⁻¹ ∩ (V + x) for a unit vector `x`.
pub fn subsphere(v: &Subspace, x: &Vector) -> Result<SubSphere> {
    check_same(v.n, x.len())?;
    let norm = x.norm();
    if (norm - 1.0).abs() > TAU_ORTHO {
        return Err(Error::NotUnit(norm));
    }
    let center = x - project(x, v)?;
    let r2 = 1.0 - center.norm_squared();
    let radius = if r2 <= TAU_ORTHO * TAU_ORTHO { 0.0 } else { r2.sqrt() };
    Ok(SubSphere { direction: v.clone(), center, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn orthonormalize_keeps_orthonormal_input() {
        let s = orthonormalize(&[v(&[1.0, 0.0]), v(&[0.0, 1.0])], 1e-9).unwrap();
        assert_eq!(s.dim(), 2);
        assert!((s.basis() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let s = orthonormalize(&[v(&[1.0, 0.0]), v(&[2.0, 0.0])], 1e-9).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.basis_vectors()[0].clone() - v(&[1.0, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn orthonormalize_matches_textbook_gram_schmidt() {
        let input = [v(&[1.0, 1.0, 0.0]), v(&[1.0, -1.0, 0.0]), v(&[1.0, 0.0, 1.0])];
        // classical Gram–Schmidt by hand
        let q1 = v(&[1.0, 1.0, 0.0]) / 2f64.sqrt();
        let q2 = v(&[1.0, -1.0, 0.0]) / 2f64.sqrt();
        let q3 = v(&[0.0, 0.0, 1.0]);
        let s = orthonormalize(&input, 1e-9).unwrap();
        assert_eq!(s.dim(), 3);
        assert!(s.gram_defect() < 1e-12);
        for (a, b) in s.basis_vectors().iter().zip([q1, q2, q3]) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn orthonormalize_rejects_mixed_lengths() {
        let err = orthonormalize(&[v(&[1.0, 0.0]), v(&[1.0, 0.0, 0.0])], 1e-9).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn sum_examples() {
        let e1 = Subspace::coordinate(3, &[0]).unwrap();
        let e2 = Subspace::coordinate(3, &[1]).unwrap();
        let e12 = Subspace::coordinate(3, &[0, 1]).unwrap();
        assert!(sum(&e1, &e2).unwrap().approx_eq(&e12));
        assert!(sum(&e12, &Subspace::zero(3).unwrap()).unwrap().approx_eq(&e12));
        let diag = Subspace::span(&[v(&[1.0, 1.0, 0.0])]).unwrap();
        let s = sum(&e1, &diag).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.approx_eq(&e12));
    }

    #[test]
    fn intersect_examples() {
        let a = Subspace::coordinate(3, &[0, 1]).unwrap();
        let b = Subspace::coordinate(3, &[1, 2]).unwrap();
        assert!(intersect(&a, &b).unwrap().approx_eq(&Subspace::coordinate(3, &[1]).unwrap()));
        assert!(intersect(&a, &a).unwrap().approx_eq(&a));
    }

    #[test]
    fn random_hyperplanes_of_r4_meet_in_a_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = Subspace::random(4, 3, &mut rng).unwrap();
            let b = Subspace::random(4, 3, &mut rng).unwrap();
            let c = intersect(&a, &b).unwrap();
            // null-space oracle: solve [A | -B] (s, t) = 0
            let stacked = DMatrix::from_columns(
                &a.basis().column_iter().chain(b.basis().column_iter()).collect::<Vec<_>>(),
            );
            let null_dim = 6 - numerical_rank(&stacked);
            assert_eq!(c.dim(), null_dim);
            assert_eq!(c.dim(), 2);
            for x in c.basis_vectors() {
                assert!(a.contains(&x, 1e-10) && b.contains(&x, 1e-10));
            }
        }
    }

    #[test]
    fn perp_examples() {
        let e1 = Subspace::coordinate(3, &[0]).unwrap();
        assert!(perp(&e1).approx_eq(&Subspace::coordinate(3, &[1, 2]).unwrap()));
        assert_eq!(perp(&Subspace::zero(3).unwrap()).dim(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = Subspace::random(5, 2, &mut rng).unwrap();
        let p = perp(&h);
        assert_eq!(p.dim(), 3);
        let cross = h.basis().transpose() * p.basis();
        assert!(cross.amax() < 1e-12);
        assert!(p.gram_defect() < 1e-12);
        assert!(perp(&p).approx_eq(&h));
    }

    #[test]
    fn project_examples() {
        let e1 = Subspace::coordinate(2, &[0]).unwrap();
        assert!(project(&v(&[0.0, 1.0]), &e1).unwrap().norm() < 1e-15);
        let full = Subspace::full(3).unwrap();
        let x = v(&[0.3, -2.0, 5.0]);
        assert!((project(&x, &full).unwrap() - &x).norm() < 1e-15);
        let h = Subspace::coordinate(3, &[0]).unwrap();
        assert_eq!(project(&v(&[1.0, 1.0, 0.0]), &h).unwrap(), v(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn principal_angle_examples() {
        let a = 0.7f64;
        let h1 = Subspace::coordinate(3, &[0]).unwrap();
        let h2 = Subspace::span(&[v(&[a.cos(), a.sin(), 0.0])]).unwrap();
        let pa = principal_angles(&h1, &h2).unwrap();
        assert!((pa.angles[0] - a).abs() < 1e-12);

        let pa = principal_angles(&h1, &h1).unwrap();
        assert_eq!(pa.angles, vec![0.0]);

        let h1 = Subspace::coordinate(4, &[0, 1]).unwrap();
        let h2 = Subspace::coordinate(4, &[2, 3]).unwrap();
        let pa = principal_angles(&h1, &h2).unwrap();
        for a in &pa.angles {
            assert!((a - FRAC_PI_2).abs() < 1e-12);
        }
        assert!(pa.first().approx_eq(&h1) && pa.second().approx_eq(&h2));
    }

    #[test]
    fn principal_angles_errors() {
        let h = Subspace::coordinate(3, &[0]).unwrap();
        let z = Subspace::zero(3).unwrap();
        assert_eq!(principal_angles(&h, &z).unwrap_err(), Error::ZeroDimensional);
        let g = Subspace::coordinate(4, &[0]).unwrap();
        assert!(matches!(principal_angles(&h, &g), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn principal_angles_leading_zeros_when_dims_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h1 = Subspace::random(5, 3, &mut rng).unwrap();
        let h2 = Subspace::random(5, 3, &mut rng).unwrap();
        let pa = principal_angles(&h1, &h2).unwrap();
        assert_eq!(pa.angles[0], 0.0);
        assert!(pa.angles[1] > 0.0);
        let e = &pa.adapted_basis;
        assert!((e.transpose() * e - DMatrix::<f64>::identity(5, 5)).amax() < 1e-10);
        assert!(pa.first().approx_eq(&h1));
        assert!(pa.second().approx_eq(&h2));
    }

    #[test]
    fn subsphere_examples() {
        let v12 = Subspace::coordinate(3, &[0, 1]).unwrap();
        let s = subsphere(&v12, &v(&[1.0, 0.0, 0.0])).unwrap();
        assert!(s.center.norm() < 1e-15 && (s.radius - 1.0).abs() < 1e-15);

        let e1 = Subspace::coordinate(2, &[0]).unwrap();
        let s = subsphere(&e1, &v(&[0.0, 1.0])).unwrap();
        assert_eq!(s.center, v(&[0.0, 1.0]));
        assert_eq!(s.radius, 0.0);

        let h = 2f64.sqrt() / 2.0;
        let s = subsphere(&e1, &v(&[h, h])).unwrap();
        assert!((s.center.clone() - v(&[0.0, h])).norm() < 1e-15);
        assert!((s.radius - h).abs() < 1e-15);

        assert!(matches!(subsphere(&e1, &v(&[1.0, 1.0])), Err(Error::NotUnit(_))));
    }

    #[test]
    fn ambient_dimension_is_bounded() {
        assert_eq!(Subspace::zero(1).unwrap_err(), Error::AmbientDimension(1));
        assert_eq!(Subspace::full(65).unwrap_err(), Error::AmbientDimension(65));
        assert!(Subspace::full(64).is_ok());
    }
}
