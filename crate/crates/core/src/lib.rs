//! Simulation and analysis of EIP-1559 base-fee dynamics.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`], [`random`], [`stats`]: time-series container, seeded random
//!   streams, moment statistics and the normal distribution helpers.
//! * [`demand`]: gas-demand generators and normality diagnostics.
//! * [`feesim`]: the multiplicative base-fee recursion.
//! * [`rca`]: AR(1) and RCA(1) simulation and the base-fee to RCA(1) mapping.
//! * [`stationarity`]: Wang's sufficient condition for strict stationarity of
//!   RCA(1) with normal coefficients.
//! * [`unitroot`]: least squares and the augmented Dickey-Fuller test.
//! * [`cli`]: experiment pipeline and command-line front end.

pub mod cli;
pub mod demand;
pub mod error;
pub mod feesim;
pub mod quadrature;
pub mod random;
pub mod rca;
pub mod series;
pub mod stationarity;
pub mod stats;
pub mod unitroot;

pub use error::{Error, Result};
pub use series::TimeSeries;
