//! Orthogonal delay-Doppler division multiplexing (ODDM) over wideband
//! channels with Doppler squint.
//!
//! A path moving at radial speed `v` does not only shift the carrier: it also
//! time-scales the waveform by `1 + v/c`. This crate models that effect
//! exactly, builds the banded delay-Doppler channel matrix with and without
//! it, and measures the error of ignoring it.
//!
//! Layout:
//!
//! - [`config`], [`pulse`], [`grid`]: frame parameters, the raised-cosine
//!   pulse and the sample containers.
//! - [`modem`]: DD-to-time transmitter and receiver.
//! - [`channel`]: path model, TDL-C and underwater generators.
//! - [`timesim`]: time-domain propagation used as the independent reference.
//! - [`ddmatrix`]: the banded `H_DD` and NMSE.
//! - [`experiment`]: scenario presets and the impulse, sweep and oracle runs.

pub mod channel;
pub mod config;
pub mod ddmatrix;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod metrics;
pub mod modem;
pub mod pulse;
pub mod rng;
pub mod timesim;

pub use channel::{ChannelRealization, ChannelRecord, Path, PathSpec};
pub use config::{FrameConfig, PrefixMode};
pub use ddmatrix::{nmse, BaselineSync, DdChannelMatrix, KernelModel};
pub use error::{Error, Result};
pub use grid::{DdFrame, TimeSamples};
pub use num_complex::Complex64;
pub use pulse::RaisedCosine;
