//! Families of even initial data `(φ₀, φ₁)`.
//!
//! The built-in families pair `φ₁ = -νφ₀`, which makes `⟨Y₀, νφ₀ + φ₁⟩`
//! vanish identically and gives `a₋(0) = ⟨Y₀, φ₀⟩`.

use crate::config::{ExperimentConfig, Family};
use crate::csv::read_table;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::poschl_teller::y2_at;
use crate::NU;

#[derive(Clone, Debug, PartialEq)]
pub struct InitialData {
    pub phi0: Vec<f64>,
    pub phi1: Vec<f64>,
}

fn paired(phi0: Vec<f64>) -> InitialData {
    let phi1 = phi0.iter().map(|v| -NU * v).collect();
    InitialData { phi0, phi1 }
}

/// `φ₀ = ε exp(-x²/σ²)`.
pub fn gaussian_bump(grid: &Grid, eps: f64, sigma: f64) -> InitialData {
    paired(grid.sample(|x| eps * (-(x / sigma).powi(2)).exp()))
}

/// `φ₀ = ε Y₂(x) exp(-x²/σ²)`.
pub fn y2_localized(grid: &Grid, eps: f64, sigma: f64) -> InitialData {
    paired(grid.sample(|x| eps * y2_at(x) * (-(x / sigma).powi(2)).exp()))
}

/// Reads columns `x, phi0, phi1` sampled on exactly the lattice of `grid`.
pub fn parse_custom(text: &str, grid: &Grid) -> Result<InitialData> {
    let table = read_table(text)?;
    let col = |name: &str| {
        table
            .column(name)
            .ok_or_else(|| Error::InitialData(format!("custom data lacks a '{name}' column")))
    };
    let (xs, phi0, phi1) = (col("x")?, col("phi0")?, col("phi1")?);
    if xs.len() != grid.len() {
        return Err(Error::InitialData(format!("custom data has {} rows, grid has {} points", xs.len(), grid.len())));
    }
    let tol = 1e-6 * grid.dx();
    for (j, &x) in xs.iter().enumerate() {
        if !((x - grid.x(j)).abs() <= tol) {
            return Err(Error::InitialData(format!("row {}: x = {x} is off the lattice point {}", j + 1, grid.x(j))));
        }
    }
    if phi0.iter().chain(&phi1).any(|v| !v.is_finite()) {
        return Err(Error::InitialData("custom data holds non-finite values".into()));
    }
    Ok(InitialData { phi0, phi1 })
}

pub fn load(cfg: &ExperimentConfig, grid: &Grid) -> Result<InitialData> {
    match cfg.family {
        Family::GaussianBump => Ok(gaussian_bump(grid, cfg.eps, cfg.sigma)),
        Family::Y2Localized => Ok(y2_localized(grid, cfg.eps, cfg.sigma)),
        Family::CustomFile => {
            let path = cfg
                .data_path
                .as_deref()
                .ok_or_else(|| Error::Config("data.family = custom_file needs data.path".into()))?;
            parse_custom(&std::fs::read_to_string(path)?, grid)
        }
    }
}
