//! Exact genus-zero gravitational descendants.
//!
//! The crate evaluates correlators `<tau_{d_1,e_1} g_1 ... tau_{d_n,e_n} g_n>_{0,beta}`
//! of a target geometry from finite input data (a graded cohomology ring
//! with Poincaré pairing, three-point primary Gromov–Witten numbers and,
//! for constant maps in higher genus, a table of tautological integrals).
//! Everything is exact rational arithmetic.
//!
//! Layout:
//!
//! * [`novikov`]: curve classes and truncated Novikov-ring series.
//! * [`geometry`]: the target model (cup product, pairing, dual bases, Chern data).
//! * [`moduli`]: psi integrals on genus-zero moduli, boundary expansion of psi,
//!   constant-map correlators.
//! * [`engine`]: the recursive correlator evaluator with memoization.
//! * [`phase`]: big phase space series, the coordinate change `T` and the
//!   potentials `F^st`, `G`, `Phi`.
//! * [`fixtures`]: built-in models and the plane-curve associativity oracle.
//! * [`verify`]: identity suites used by the CLI and the acceptance tests.

pub mod engine;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod linalg;
pub mod moduli;
pub mod novikov;
pub mod phase;
pub mod rational;
pub mod verify;

pub use engine::{CorrelatorKey, Engine, EngineConfig, Insertion, PrimaryTable, UnstableRoute};
pub use error::{Error, Result};
pub use geometry::{CohClass, DualBases, GeometryModel};
pub use moduli::TautTable;
pub use novikov::{CurveClass, NovikovSeries, QBound, TruncationPolicy};
pub use rational::Q;
