//! Numerical toolkit for sampling and identification of time-varying
//! operators with band-limited symbols.
//!
//! The crate builds synthetic operators in a critical sinc basis, probes
//! them with weighted delta trains, and reconstructs the time-varying
//! impulse response from uniform, irregular and multi-channel outputs,
//! verifying the norm identities and density/separation conditions that
//! make each scheme work.

pub mod density;
pub mod error;
pub mod filter;
pub mod frame;
pub mod grid;
pub mod irregular;
pub mod mixing;
pub mod model;
pub mod multichannel;
pub mod quad;
pub mod report;
pub mod sinc;
pub mod train;
pub mod uniform;

pub use error::{OpError, Result};
pub use grid::{SampledOutput, TimeGrid};
pub use model::{ModelShape, OperatorModel};
pub use train::DeltaTrain;
