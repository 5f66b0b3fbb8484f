//! Exact verification of a fake projective plane built as a degree-7 cyclic
//! cover of an elliptic surface.
//!
//! - [`exact`]: big-integer and rational matrices, Bareiss elimination, Smith
//!   and Hermite normal forms.
//! - [`lattice`]: Gram matrices, discriminant groups, prime-index overlattices.
//! - [`surface`]: curve configurations, divisors and their intersection calculus.
//! - [`verifier`]: feasibility, glue, descent and Chern-number checks.
//! - [`report`]: the claim registry and the certificate report.
//!
//! The types shared with the command-line front end are re-exported at the
//! crate root.

pub mod exact;
pub mod lattice;
pub mod report;
pub mod surface;
pub mod verifier;

pub use exact::{IntMatrix, RatVector};
pub use lattice::Lattice;
pub use report::{emit_report, ClaimReport, ClaimStatus, ConfigSet, Format, LoadError, Registry, Report};
pub use surface::{Case, CaseParams, Divisor, SurfaceConfig};
pub use verifier::{DescentTrace, VerifyError};
