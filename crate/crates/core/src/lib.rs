//! Numerical core for weighted isoperimetric problems on the half-space
//! `x_N > 0` with densities of the form `|x|^l x_N^alpha`.
//!
//! The crate is `no_std` and only needs `alloc`. Float math goes through
//! `num_traits::Float` (libm); modules import it with `allow(unused_imports)`
//! because std's inherent float methods take over whenever std is linked.
//! File formats, the command line front-end and parallel sweeps live in the
//! `weiso` companion crate.
//!
//! Layout:
//! - [`special`], [`weights`]: Gamma/Beta, parameter validation and the
//!   closed-form constants (`kappa`, half-ball measure, `C^rad`, `l_1`).
//! - [`quadrature`], [`spline`], [`geometry`]: axisymmetric star-shaped sets
//!   and their weighted measure and perimeter.
//! - [`mesh`], [`rearrange`]: P1 functions on planar half-space meshes,
//!   distribution functions, decreasing rearrangement, Schwarz symmetrization.
//! - [`lab`]: isoperimetric quotients and the verification routines.
//! - [`sparse`], [`pde`]: the degenerate mixed boundary value problem and the
//!   comparison with the explicit symmetrized solution.
#![no_std]
#![deny(missing_debug_implementations)]
// `!(x > 0.0)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod geometry;
pub mod lab;
pub mod mesh;
pub mod pde;
pub mod quadrature;
pub mod rearrange;
pub mod sparse;
pub mod special;
pub mod spline;
pub mod weights;

pub use error::{Error, Result};
pub use geometry::{QuadratureSpec, RandomProfileSpec, StarProfile};
pub use mesh::{BoundaryTag, TriMesh};
pub use rearrange::{DecreasingProfile, MeshFunction, RadialFunction};
pub use weights::{RegimeFlags, WeightParams};
