//! Numerical laboratory for the even soliton `Q = √2 sech x` of the focusing
//! cubic Klein-Gordon equation `u_tt - u_xx + u = u³`.
//!
//! The crate covers the spectral theory of the linearised operator, the
//! iterated Darboux transform that conjugates it to `-∂² + 1`, a spectral
//! solver for even perturbations of `Q`, a shooting procedure for the
//! unstable direction and the decay diagnostics used to assess the runs.

pub mod config;
pub mod csv;
pub mod cutoff;
pub mod darboux;
pub mod data;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod identities;
pub mod poschl_teller;
pub mod quadrature;
pub mod shooting;

pub use error::{Error, Result};
pub use grid::Grid;
pub use poschl_teller::SolitonFrame;

/// `√3`, the unstable rate `ν`.
pub const SQRT3: f64 = 1.732_050_807_568_877_2;
pub const NU: f64 = SQRT3;
pub const NU2: f64 = 3.0;
/// Normalisation of `Y₀ = c₀ sech²`.
pub const C0: f64 = 0.866_025_403_784_438_6;
/// Normalisation of `Y₁ = c₁ sech tanh` and `Z = c₁ sech`.
pub const C1: f64 = 1.224_744_871_391_589;
