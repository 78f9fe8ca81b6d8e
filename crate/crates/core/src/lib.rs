pub mod bupu;
pub mod corpus;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod measures;
pub mod norms;
pub mod report;
pub mod stft;
pub mod windows;
pub mod wiener_levy;

pub use error::{Error, Result};
pub use grid::{Domain, Exponent, Grid, SampledSignal, C64};
