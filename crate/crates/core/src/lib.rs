//! Euclidean signatures of planar curves and their signature quivers.
//!
//! A periodic curvature function `κ(s)` determines a closed curve up to rigid
//! motion when its total turning over one period is a rational multiple of
//! `2π`. The signature `s ↦ (κ, κ̇)` forgets the parametrization; when it has
//! self-intersections, its pieces form a directed multigraph (the signature
//! quiver) whose closed paths resynthesize curves with the same signature.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod congruence;
pub mod curvature;
pub mod curve;
pub mod error;
pub mod format;
pub mod gallery;
pub mod polyline;
pub mod quadrature;
pub mod quiver;
pub mod reconstruction;
pub mod signature;
pub mod svg;
pub mod synthesis;
pub mod verify;
pub mod words;

pub use curvature::{CurvatureFunction, CurvaturePiece, PieceKind};
pub use error::{Error, Result};
