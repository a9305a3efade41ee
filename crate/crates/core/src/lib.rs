//! Closed-form solutions of the Kaluza-Klein conformal-flatness equations and
//! the numerical machinery that checks them pointwise.
//!
//! The crate is `no_std` with `alloc`. Layers, bottom up:
//!
//! - [`scalar`], [`jet`], [`tensor`], [`field`], [`linalg`]: scalar types,
//!   differentiation engine and index algebra.
//! - [`curvature`]: Christoffel symbols, Riemann/Ricci/Weyl, covariant
//!   derivatives under a fixed sign convention (see the module docs).
//! - [`catalog`]: constructors for every solution family.
//! - [`verify`]: residual evaluators and reports.
//! - [`lift`]: the `d+1`-dimensional metric and its Weyl check.
#![no_std]
// `!(x > 0.0)` is the NaN-rejecting form of every positivity check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod catalog;
pub mod curvature;
pub mod error;
pub mod field;
pub mod jet;
pub mod lift;
pub mod linalg;
pub mod scalar;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use field::{jet_eval, ClosedForm, ComponentFn, FieldJet, SmoothField};
pub use jet::Jet;
pub use scalar::{Real, Scalar};
pub use tensor::{ChartPoint, SignatureMatrix, Tensor, TensorValue, Valence};
