//! Monte Carlo link-level simulation of a shared-antenna full-duplex massive
//! multiuser MIMO base station.
//!
//! The crate samples Rayleigh user channels and base-station/user SI
//! channels, applies ZF or MRT/MRC linear processing, splits every received
//! sample into desired, inter-user, SI and noise terms, and estimates how the
//! residual SI power falls with the array size `M`. A second family of
//! checks samples the scaled quadratic forms behind the large-`M` limits.
//!
//! Modules:
//! - [`numerics`]: complex matrices, small inverses, seeded CN(0, 1) streams
//! - [`channel`]: system parameters and channel draws
//! - [`processing`]: precoders, receivers and per-user term breakdowns
//! - [`asymptotics`]: convergence sweeps of the limiting statistics
//! - [`montecarlo`]: power-versus-M sweeps and 0 dB crossings
//! - [`cli`]: presets, config files, CSV and manifest output

pub mod asymptotics;
pub mod channel;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod processing;

pub use channel::{ChannelRealization, Scheme, SystemParams};
pub use error::{Error, Result};
pub use montecarlo::{run_sweep, Link, PowerTable, SweepConfig, Term};
pub use numerics::{ComplexMatrix, RngStream};
pub use processing::TermBreakdown;
