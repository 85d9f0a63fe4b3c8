//! Special functions needed by the channel and analysis layers: the modified
//! Bessel functions `K0`, `K1` and the two real branches of Lambert W.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod lambert;

pub use bessel::{bessel_k0, bessel_k1, one_minus_x_k1, x_k1};
pub use lambert::{lambert_w, BranchW, BRANCH_POINT};
