//! Asymmetric broadcasting of two-qubit entanglement and the use of the
//! broadcast outputs as teleportation channels.
//!
//! The crate is organized bottom-up:
//!
//! - [`qmath`]: small dense complex linear algebra (Kronecker products,
//!   partial traces, Jacobi eigensolver, PSD square roots).
//! - [`states`]: validated two-qubit density matrices, X states and the
//!   Fano decomposition.
//! - [`entanglement`]: concurrence (pure, Wootters, X closed form) and the
//!   partial-transpose test.
//! - [`teleport`]: the `N(ρ)` usefulness criterion, maximal fidelity, the
//!   fidelity-concurrence relation for X states and a teleportation
//!   simulator with optimized corrections.
//! - [`broadcast`]: local (6-qubit) and nonlocal cloning pipelines, closed
//!   forms, inseparability regions and local-vs-nonlocal comparisons.
//! - [`sweep`], [`regions`], [`verify`]: the engines behind the command-line
//!   front end.
//!
//! Grid sweeps and Monte Carlo sampling run on rayon when the `parallel`
//! feature is enabled (the default) and fall back to sequential loops
//! otherwise; see [`exec`].

pub mod broadcast;
pub mod entanglement;
pub mod error;
pub mod exec;
pub mod format;
pub mod numeric;
pub mod qmath;
pub mod regions;
pub mod simplex;
pub mod states;
pub mod sweep;
pub mod teleport;
pub mod verify;

pub use error::{Error, Result};
