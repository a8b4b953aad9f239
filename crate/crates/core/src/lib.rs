//! Decide, certify and empirically check when finitely many linear subspaces
//! of ℝⁿ, acting by reflections or by their full rotational stabilizers,
//! generate the whole orthogonal group.
//!
//! The crate is organised bottom-up:
//!
//! * [`subspace`]: orthonormal-basis subspace arithmetic and principal angles.
//! * [`isometry`]: reflections, stabilizer rotations, words and finite closure.
//! * [`conditions`]: hypothesis checkers and the [`ConditionReport`] dispatcher.
//! * [`witness`]: families realising the positive results and counterexamples.
//! * [`orbit`]: orbit sampling, covering radii and conserved quantities.
//! * [`config`]: the JSON run-configuration schema shared with the CLI.

pub mod conditions;
pub mod config;
pub mod error;
pub mod isometry;
pub mod orbit;
pub mod subspace;
pub mod witness;

pub use conditions::{
    certify_irrational_angle, evaluate, heuristic_independence, orthogonality_graph,
    spanning_check, AngleCertificate, AngleHints, AngleSpec, CertificateStatus, ConditionReport,
    EvaluateOptions, IndependenceVerdict, Mode, OrthogonalityGraph, Overall, Rational, Verdict,
};
pub use config::RunConfig;
pub use error::{Error, Result};
pub use isometry::{
    double_reflection_power, finite_closure, reflection, stabilizer_sample, word,
    ClosureOutcome, FiniteClosureReport, OrthogonalMap, Provenance,
};
pub use orbit::{
    covering_radius, density_verdict, extension_experiment, invariance_check, sample_orbit,
    DensityOptions, DensityReport, DensityVerdict, Generator, OrbitSample, WordPolicy,
};
pub use subspace::{
    intersect, orthonormalize, perp, principal_angles, project, subsphere, sum,
    PrincipalAngleDecomposition, SubSphere, Subspace, Vector,
};
pub use witness::{
    counterexample, hyperplanes_witness, lines_witness, reflection_witness, rotation_witness,
    tetrahedron_fixture, CounterexampleConfig, TheoremTag, WitnessConfig,
};

/// Orthonormality and rank tolerance used throughout.
pub const TAU_ORTHO: f64 = 1e-9;

/// Largest ambient dimension accepted by constructors.
pub const MAX_AMBIENT_DIM: usize = 64;
