//! Hybrid High-Order (HHO) discretization of 3D magnetostatics on general
//! polyhedral meshes.
//!
//! The library provides the full pipeline: polyhedral meshes with validated
//! geometry ([`mesh`]), quadrature on star-shaped cells ([`quadrature`]),
//! scaled-monomial polynomial bases and the constrained subspaces used by the
//! hybrid unknowns ([`polyspaces`]), the per-element reconstructions and
//! stabilization forms ([`localops`]), the statically condensed saddle-point
//! assembly ([`assembly`]), and problem drivers with manufactured solutions
//! and error norms ([`schemes`]).
//!
//! Two formulations of magnetostatics are supported: the first-order field
//! formulation (`curl u = f`, `div u = 0`) and the second-order vector
//! potential formulation (`curl curl u + grad p = f`, `div u = 0`), both with
//! tangential boundary conditions on the unit cube or on user-supplied
//! meshes.

pub mod assembly;
pub mod localops;
pub mod mesh;
pub mod oracle;
pub mod polyspaces;
pub mod quadrature;
pub mod schemes;

use thiserror::Error;

/// Errors surfaced by mesh construction, local solves, and assembly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("mesh validation failed: {0}")]
    Validation(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("conditioning error: {0}")]
    Conditioning(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solve(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
