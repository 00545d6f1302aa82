//! Exact solvers for integer programs `max{p'x : Ax = b, Wx = d, l <= x <= u}`
//! where `A` is totally unimodular and `W` has a constant number of rows with
//! bounded circuit weights.
//!
//! The modules follow the reduction chain: exact arithmetic and LP
//! ([`rational`], [`matrix`], [`lp`]), configurations and circuits
//! ([`config`], [`circuits`], [`duality`]), proximity rounding
//! ([`proximity`]), 1-sum/2-sum dynamic programs ([`sumdecomp`]), the
//! cographic change of variables ([`cographic`]), the tree-decomposition DP
//! ([`mcippdp`]), brute-force ground truth ([`oracle`]) and the end-to-end
//! driver ([`pipeline`]).

pub mod error;
pub mod lp;
pub mod matrix;
pub mod rational;

pub use error::{Error, Result};
pub mod circuits;
pub mod config;
pub mod duality;
pub mod tu;
pub mod pipeline;
pub mod proximity;
pub mod sumdecomp;
pub mod oracle;
pub mod cographic;
pub mod mcippdp;
