//! Gaussian intrinsic entanglement and Gaussian Rényi-2 entanglement of
//! two-mode Gaussian states.
//!
//! Quantities are in nats. Covariance matrices use the quadrature ordering
//! `(x₁, p₁, x₂, p₂, …)` with the vacuum at `I`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod gie;
pub mod information;
pub mod linalg;
pub mod measurement;
pub mod optimize;
pub mod purification;
pub mod record;
pub mod renyi2;
pub mod states;
pub mod symplectic;
pub mod verify;

pub use config::Config;
pub use error::{Error, Result};
pub use gie::{evaluate_closed_form, gie_closed_form, gie_numeric, GieResult};
pub use measurement::GaussianMeasurement;
pub use purification::{purify, Purification};
pub use renyi2::{conjecture_gap, gr2_family};
pub use states::{make_family, to_std_form, FamilyTag, StateFamily, StdForm};
