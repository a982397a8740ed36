//! Multivariable signature and nullity functions of colored links.
//!
//! The crate works from C-complex data (generalized Seifert matrices) and
//! user-supplied polynomial invariants:
//!
//! * [`laurent`]: exact arithmetic in `Z[t_1^±1, ..., t_mu^±1]`,
//! * [`hermitian`]: certified inertia of Hermitian matrices and a pivoting solver,
//! * [`clink`]: colored link data, `H(omega)`, slope matrices and mirrors,
//! * [`invariants`]: Hosokawa polynomials, slopes and face signatures,
//! * [`strata`]: elementary ideals and the stratification they induce,
//! * [`sampler`]: torus grids, signature maps and concordance reports,
//! * [`catalog`]: built-in example links with their expected values.

pub mod catalog;
pub mod clink;
pub mod error;
pub mod hermitian;
pub mod invariants;
pub mod laurent;
pub mod sampler;
pub mod strata;
pub mod torus;

pub use clink::{ColoredLinkData, SignVector, SlopeData};
pub use error::{Error, Result};
pub use hermitian::{ComplexMatrix, InertiaResult};
pub use laurent::{LaurentPoly, Monomial};
pub use torus::TorusPoint;

/// Default relative tolerance for inertia classification and the solver.
pub const DEFAULT_TAU: f64 = 1e-9;

/// Default tolerance for deciding that a polynomial vanishes at a point.
pub const DEFAULT_TAU_POLY: f64 = 1e-8;
