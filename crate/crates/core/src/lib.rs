//! Extremal mappings of finite distortion between round hyperbolic annuli.
//!
//! The crate is `no_std` (it needs `alloc` for sample grids and reports) and
//! is organised bottom-up:
//!
//! * [`quad`] and [`specfun`]: adaptive Gauss–Kronrod quadrature, incomplete
//!   elliptic integrals in the parameter convention `F(φ|m)`, real Lambert W
//!   branches and incomplete Beta differences.
//! * [`annulus`]: hyperbolic geometry of round annuli `A_s = {1/s < |z| < s}`
//!   and of collars about a closed geodesic.
//! * [`extremal`]: the normalized rectangle (Grötzsch) problem, the closed form
//!   `p = 1` minimizer and the general-`p` boundary value solver.
//! * [`bounds`]: explicit lower/upper energy bounds and the Lambert W
//!   machinery behind them.
//! * [`oracle`]: brute-force energies of arbitrary radial maps, perturbation
//!   certificates and the punctured disk example.
//!
//! All lengths are hyperbolic; the conformal modulus of `A(a, b)` is
//! `log(b/a)`.

#![no_std]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod annulus;
pub mod bounds;
mod error;
pub mod extremal;
pub mod oracle;
pub mod quad;
pub mod report;
mod roots;
pub mod specfun;

pub use error::{Error, Result};
