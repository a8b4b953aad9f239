use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symclose_core::orbit::DEFAULT_WORD_LENGTH;
use symclose_core::{
    covering_radius, double_reflection_power, finite_closure, principal_angles, reflection, sample_orbit, SubSphere,
    Subspace, WordPolicy,
};

fn pair(n: usize, seed: u64) -> (Subspace, Subspace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (Subspace::random(n, n / 2, &mut rng).unwrap(), Subspace::random(n, n / 2, &mut rng).unwrap())
}

fn bench_principal_angles(c: &mut Criterion) {
    let mut group = c.benchmark_group("principal_angles");
    for n in [4, 16, 64] {
        let (h1, h2) = pair(n, n as u64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| principal_angles(black_box(&h1), black_box(&h2)).unwrap())
        });
    }
    group.finish();
}

fn bench_double_reflection_power(c: &mut Criterion) {
    let mut group = c.benchmark_group("double_reflection_power");
    for n in [4, 16] {
        let (h1, h2) = pair(n, 7);
        let x = Subspace::random(n, 1, &mut ChaCha8Rng::seed_from_u64(8)).unwrap().basis_vectors().remove(0);
        group.bench_with_input(BenchmarkId::new("closed_form", n), &n, |b, _| {
            b.iter(|| double_reflection_power(&h1, &h2, black_box(&x), 64).unwrap())
        });
        let (r1, r2) = (reflection(&h1), reflection(&h2));
        group.bench_with_input(BenchmarkId::new("matrix_word", n), &n, |b, _| {
            b.iter(|| {
                let mut y = black_box(&x).clone();
                for _ in 0..64 {
                    y = r2.apply(&r1.apply(&y));
                }
                y
            })
        });
    }
    group.finish();
}

fn mirror(angle: f64) -> Subspace {
    Subspace::span(&[symclose_core::Vector::from_vec(vec![angle.cos(), angle.sin()])]).unwrap()
}

fn bench_finite_closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("finite_closure");
    group.sample_size(10);
    let dihedral = [reflection(&mirror(0.0)), reflection(&mirror(PI / 50.0))];
    group.bench_function("dihedral_100", |b| b.iter(|| finite_closure(black_box(&dihedral), 10_000, 1e-6).unwrap()));
    let infinite = [reflection(&mirror(0.0)), reflection(&mirror((1.0f64 / 3.0).acos()))];
    group.bench_function("cap_10000", |b| b.iter(|| finite_closure(black_box(&infinite), 10_000, 1e-6).unwrap()));
    group.finish();
}

fn bench_covering_radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("covering_radius");
    group.sample_size(10);
    let gens = [symclose_core::Generator::Stabilizer { subspace: Subspace::zero(3).unwrap() }];
    let x = symclose_core::Vector::from_vec(vec![0.0, 0.0, 1.0]);
    let policy = WordPolicy::RandomWords { length: DEFAULT_WORD_LENGTH, seed: 1 };
    let target = SubSphere::full(3).unwrap();
    for budget in [10_000, 100_000] {
        let sample = sample_orbit(&gens, &x, budget, policy).unwrap();
        group.bench_with_input(BenchmarkId::new("s2_2000_probes", budget), &budget, |b, _| {
            b.iter(|| covering_radius(black_box(&sample), &target, 2000, 0).unwrap())
        });
    }
    group.bench_function("sample_orbit_s2_100000", |b| b.iter(|| sample_orbit(&gens, &x, 100_000, policy).unwrap()));
    group.finish();
}

criterion_group!(
    kernels,
    bench_principal_angles,
    bench_double_reflection_power,
    bench_finite_closure,
    bench_covering_radius
);
criterion_main!(kernels);
