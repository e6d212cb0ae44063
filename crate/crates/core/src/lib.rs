//! The principal field emission elliptic function `v(l')` and its derivative,
//! computed three independent ways:
//!
//! - the exact Frobenius expansion about `l' = 0`, with coefficients generated in
//!   exact rational arithmetic ([`coeffcore`]) and evaluated in binary64 ([`vfunction`]);
//! - the closed form in complete elliptic integrals, evaluated by the
//!   arithmetic-geometric mean ([`elliptic`], [`vfunction`]);
//! - the three-term approximation `1 - l' + (1/6) l' ln l'`.
//!
//! [`verify`] cross-checks these against each other and against the defining ODE
//! `l'(1 - l') W'' = (3/16) W`; [`emission`] plugs `v` into the Fowler-Nordheim-type
//! current density; [`cli`] and [`output`] back the `fe-vfunc` binary.

pub mod cli;
pub mod coeffcore;
pub mod elliptic;
pub mod emission;
mod error;
pub mod output;
pub mod verify;
pub mod vfunction;

pub use error::{Error, Result};
