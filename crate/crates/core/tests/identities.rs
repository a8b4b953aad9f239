use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use symclose_core::subspace::{numerical_rank, projected_span};
use symclose_core::{
    double_reflection_power, intersect, perp, principal_angles, reflection, sum, word, Subspace, Vector,
};

fn random_unit(n: usize, rng: &mut impl Rng) -> Vector {
    let v = Vector::from_fn(n, |_, _| rng.sample(StandardNormal));
    v.normalize()
}

/// (R_{H₂}R_{H₁})^m by repeated matrix multiplication.
fn direct_power(h1: &Subspace, h2: &Subspace, x: &Vector, m: u64) -> Vector {
    let r1 = h1.projector() * 2.0 - DMatrix::<f64>::identity(x.len(), x.len());
    let r2 = h2.projector() * 2.0 - DMatrix::<f64>::identity(x.len(), x.len());
    let step = r2 * r1;
    let mut y = x.clone();
    for _ in 0..m {
        y = &step * y;
    }
    y
}

#[test]
fn double_reflection_power_matches_matrix_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(3..=8);
        let h1 = Subspace::random(n, rng.random_range(1..n), &mut rng).unwrap();
        let h2 = Subspace::random(n, rng.random_range(1..n), &mut rng).unwrap();
        let x = random_unit(n, &mut rng);
        let m = rng.random_range(0..=64u64);
        let fast = double_reflection_power(&h1, &h2, &x, m).unwrap();
        worst = worst.max((fast - direct_power(&h1, &h2, &x, m)).amax());
    }
    assert!(worst < 1e-9, "max error {worst:e}");
}

#[test]
fn canonical_single_reflections_match_projectors() {
    use symclose_core::isometry::CanonicalCoordinates;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let n = rng.random_range(3..=8);
        let k = rng.random_range(1..n);
        let h1 = Subspace::random(n, k, &mut rng).unwrap();
        let h2 = Subspace::random(n, rng.random_range(1..=k), &mut rng).unwrap();
        let x = random_unit(n, &mut rng);
        let pa = principal_angles(&h1, &h2).unwrap();
        let cc = CanonicalCoordinates::new(&pa, &x).unwrap();
        assert!((cc.reconstruct() - &x).amax() < 1e-12);
        assert!((cc.reflect_first() - reflection(&h1).apply(&x)).amax() < 1e-10);
        assert!((cc.reflect_second() - reflection(&h2).apply(&x)).amax() < 1e-10);
    }
}

#[test]
fn complement_reflection_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut worst_neg, mut worst_pair) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let n = rng.random_range(2..=8);
        let h1 = Subspace::random(n, rng.random_range(1..n), &mut rng).unwrap();
        let h2 = Subspace::random(n, rng.random_range(1..n), &mut rng).unwrap();
        let r1 = reflection(&h1);
        let neg = reflection(&perp(&h1)).matrix() + r1.matrix();
        worst_neg = worst_neg.max(neg.amax());
        let perps = [reflection(&perp(&h1)), reflection(&perp(&h2))];
        let plain = [r1, reflection(&h2)];
        let d = word(&perps, &[0, 1]).unwrap().distance(&word(&plain, &[0, 1]).unwrap());
        worst_pair = worst_pair.max(d);
    }
    assert!(worst_neg < 1e-10, "R_perp + R = {worst_neg:e}");
    assert!(worst_pair < 1e-10, "pair identity error {worst_pair:e}");
}

#[test]
fn extension_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut done = 0;
    while done < 500 {
        let n = rng.random_range(3..=8);
        let dl = rng.random_range(2..n);
        let dh = rng.random_range(1..dl);
        let h = Subspace::random(n, dh, &mut rng).unwrap();
        let l = Subspace::random(n, dl, &mut rng).unwrap();
        if intersect(&h, &perp(&l)).unwrap().dim() != 0 {
            continue;
        }
        let rl = reflection(&h).image(&l).unwrap();
        let lhs = sum(&l, &rl).unwrap();
        let rhs = sum(&h, &l).unwrap();
        assert!(lhs.approx_eq(&rhs), "L + R_H L != H + L (n={n}, dim H={dh}, dim L={dl})");
        // rank of the projected basis, computed directly
        let image = h.projector() * l.basis();
        assert_eq!(numerical_rank(&image), dh);
        assert!(projected_span(&l, &h).unwrap().approx_eq(&h));
        done += 1;
    }
}

fn subspace_strategy() -> impl Strategy<Value = (Subspace, Subspace, Vector)> {
    (2usize..=7, any::<u64>()).prop_flat_map(|(n, seed)| {
        (1..n, 1..n).prop_map(move |(a, b)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h1 = Subspace::random(n, a, &mut rng).unwrap();
            let h2 = Subspace::random(n, b, &mut rng).unwrap();
            (h1, h2, random_unit(n, &mut rng))
        })
    })
}

proptest! {
    #[test]
    fn reflections_are_orthogonal_involutions((h, _, x) in subspace_strategy()) {
        let r = reflection(&h);
        prop_assert!(r.orthogonality_defect() < 1e-12);
        prop_assert!((r.apply(&r.apply(&x)) - &x).amax() < 1e-12);
        prop_assert!(((r.apply(&x)).norm() - 1.0).abs() < 1e-12);
        // fixes H, negates its complement
        for v in h.basis_vectors() {
            prop_assert!((r.apply(&v) - &v).amax() < 1e-12);
        }
        for v in perp(&h).basis_vectors() {
            prop_assert!((r.apply(&v) + &v).amax() < 1e-12);
        }
    }

    #[test]
    fn sum_and_intersection_dimensions((h1, h2, _) in subspace_strategy()) {
        let s = sum(&h1, &h2).unwrap();
        let i = intersect(&h1, &h2).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), h1.dim() + h2.dim());
        prop_assert!(perp(&perp(&h1)).approx_eq(&h1));
    }

    #[test]
    fn principal_angles_are_sorted_and_rebuild_the_pair((h1, h2, _) in subspace_strategy()) {
        let (a, b) = if h1.dim() >= h2.dim() { (h1, h2) } else { (h2, h1) };
        let pa = principal_angles(&a, &b).unwrap();
        prop_assert!(pa.angles.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        prop_assert!(pa.angles.iter().all(|&t| (0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&t)));
        let q = &pa.adapted_basis;
        let n = q.nrows();
        prop_assert!((q.transpose() * q - DMatrix::<f64>::identity(n, n)).amax() < 1e-9);
        prop_assert!(pa.first().approx_eq(&a));
        prop_assert!(pa.second().approx_eq(&b));
    }
}

#[test]
fn stabilizer_samples_are_haar_on_the_complement() {
    use symclose_core::stabilizer_sample;
    // 4 equal-area bands in z times 6 sectors in longitude
    let zero = Subspace::zero(3).unwrap();
    let e1 = Vector::from_vec(vec![1.0, 0.0, 0.0]);
    let mut counts = [0usize; 24];
    let trials = 10_000;
    for seed in 0..trials {
        let q = stabilizer_sample(&zero, seed).unwrap();
        assert!((q.determinant() - 1.0).abs() < 1e-9);
        let p = q.apply(&e1);
        let band = (((p[2] + 1.0) / 2.0 * 4.0) as usize).min(3);
        let sector = ((p[1].atan2(p[0]) + std::f64::consts::PI) / std::f64::consts::TAU * 6.0) as usize % 6;
        counts[band * 6 + sector] += 1;
    }
    let expected = trials as f64 / 24.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 23 degrees of freedom, 0.999 quantile
    assert!(chi2 < 49.73, "chi-square {chi2}");

    let h = Subspace::coordinate(3, &[2]).unwrap();
    let e3 = Vector::from_vec(vec![0.0, 0.0, 1.0]);
    for seed in 0..50 {
        let q = stabilizer_sample(&h, seed).unwrap();
        assert!((q.apply(&e3) - &e3).amax() < 1e-12);
        assert!((q.determinant() - 1.0).abs() < 1e-9);
    }
}
