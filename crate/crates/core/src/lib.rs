//! Explicit maps from spheres into unitary and symplectic groups, pointwise
//! checks of the matrix identities they satisfy, and a Monte-Carlo mapping
//! degree engine for certifying homotopy generators.

pub mod degree;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod sphere;
pub mod table;
pub mod verify;

pub use degree::{
    certify_generator, certify_sp_generator, column_degrees, degree_mc, degree_mc_with,
    degree_preimage, jacobian_sign_density, DegreeConfig, DegreeEstimate,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, SymplecticConvention, C64};
pub use maps::{column, lookup, SelfSphereMap, SphereMap, UnitarySphereMap};
pub use sphere::{SpherePoint, TangentFrame};
pub use verify::{run_suite, CheckResult, Report, RunConfig, Status};
