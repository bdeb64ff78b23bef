//! The linearised operator `L = -∂² - 6 sech² + 1` around `Q = √2 sech`,
//! its bound states, the threshold resonance, Jost solutions and the
//! distorted Fourier transform.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{norm_inf, Grid};
use crate::quadrature::sech;
use crate::{C0, C1, NU};

/// Grid samples of the soliton and the spectral data of `L`.
#[derive(Clone, Debug)]
pub struct SolitonFrame {
    grid: Grid,
    pub q: Vec<f64>,
    pub y0: Vec<f64>,
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    pub z: Vec<f64>,
    pub k: Vec<f64>,
    pub g: Vec<f64>,
    pub sech2: Vec<f64>,
    pub alpha: [Vec<f64>; 3],
}

pub fn q_at(x: f64) -> f64 {
    2f64.sqrt() * sech(x)
}

pub fn y0_at(x: f64) -> f64 {
    C0 * sech(x).powi(2)
}

pub fn y1_at(x: f64) -> f64 {
    C1 * sech(x) * x.tanh()
}

pub fn y2_at(x: f64) -> f64 {
    1.0 - 1.5 * sech(x).powi(2)
}

/// `α₁, α₂, α₃`, written through `sech` and `tanh` so nothing overflows.
pub fn alpha_at(j: usize, x: f64) -> f64 {
    let s = sech(x);
    let t2 = x.tanh().powi(2);
    let (s3, s5, s7) = (s.powi(3), s.powi(5), s.powi(7));
    match j {
        1 => -9.0 * 2f64.sqrt() / 4.0 * t2 * (s3 - 5.0 * s5),
        2 => -3.0 * 6f64.sqrt() / 4.0 * (2.0 * s3 - 15.0 * s5 + 15.0 * s7),
        3 => 27.0 * 2f64.sqrt() / 16.0 * (4.0 * s5 - 5.0 * s7),
        _ => panic!("alpha index must be 1, 2 or 3"),
    }
}

/// `𝒟₁𝒟₂(3 Q Y₂²)` in closed form.
pub fn resonance_source_d1d2_at(x: f64) -> f64 {
    let s = sech(x);
    -3.0 / (4.0 * 2f64.sqrt()) * (270.0 * s.powi(7) - 288.0 * s.powi(5) + 40.0 * s.powi(3))
}

impl SolitonFrame {
    pub fn new(grid: &Grid) -> Self {
        let grid = grid.clone();
        let q = grid.sample(q_at);
        let y0 = grid.sample(y0_at);
        let y1 = grid.sample(y1_at);
        let y2 = grid.sample(y2_at);
        let z = grid.sample(|x| C1 * sech(x));
        let k = grid.sample(f64::tanh);
        let g: Vec<f64> = k.iter().zip(&y0).map(|(k, y)| k * k * y).collect();
        let sech2 = grid.sample(|x| sech(x).powi(2));
        let alpha = [grid.sample(|x| alpha_at(1, x)), grid.sample(|x| alpha_at(2, x)), grid.sample(|x| alpha_at(3, x))];
        Self { grid, q, y0, y1, y2, z, k, g, sech2, alpha }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `L u = -u'' - 6 sech² u + u`.
    pub fn apply_l(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.grid.check(u.len())?;
        let upp = self.grid.derivative(u, 2);
        Ok(u.iter()
            .zip(&upp)
            .zip(&self.sech2)
            .map(|((u, upp), s2)| -upp - 6.0 * s2 * u + u)
            .collect())
    }

    pub fn a_coeff(&self, u: &[f64]) -> f64 {
        self.grid.inner(&self.y0, u)
    }

    /// `P_c u = u - ⟨Y₀, u⟩ Y₀` on even fields. Logs a warning if `u` has a
    /// noticeable odd part, since the `Y₁` direction is then ignored.
    pub fn project_pc_even(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.grid.check(u.len())?;
        let odd = self.grid.odd_part(u);
        if odd > 1e-8 * norm_inf(u).max(1.0) {
            log::warn!("project_pc_even called on a field with odd part {odd:.3e}");
        }
        let a = self.a_coeff(u);
        Ok(u.iter().zip(&self.y0).map(|(u, y)| u - a * y).collect())
    }

    /// Full continuous-spectrum projection, removing `Y₀` and `Y₁`.
    pub fn project_pc(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.grid.check(u.len())?;
        let a = self.a_coeff(u);
        let b = self.grid.inner(&self.y1, u);
        Ok(u.iter()
            .zip(&self.y0)
            .zip(&self.y1)
            .map(|((u, y0), y1)| u - a * y0 - b * y1)
            .collect())
    }
}

/// `c(ξ) = 1/(2 - ξ² - 3iξ)`.
pub fn jost_coefficient(xi: f64) -> Complex64 {
    1.0 / Complex64::new(2.0 - xi * xi, -3.0 * xi)
}

/// `T(ξ) = (ξ² - 2 + 3iξ)/(ξ² - 2 - 3iξ)`, unimodular on the real line.
pub fn transmission(xi: f64) -> Complex64 {
    Complex64::new(xi * xi - 2.0, 3.0 * xi) / Complex64::new(xi * xi - 2.0, -3.0 * xi)
}

/// Jost solution with `e^{-ixξ} f₊(x, ξ) → 1` as `x → +∞`.
pub fn jost_plus(x: f64, xi: f64) -> Complex64 {
    let k = x.tanh();
    let p = Complex64::new(3.0 * k * k - 1.0 - xi * xi, -3.0 * xi * k);
    jost_coefficient(xi) * p * Complex64::from_polar(1.0, x * xi)
}

/// `∂ₓ f₊(x, ξ)`.
pub fn jost_plus_dx(x: f64, xi: f64) -> Complex64 {
    let k = x.tanh();
    let s2 = 1.0 - k * k;
    let i = Complex64::new(0.0, 1.0);
    let p = Complex64::new(3.0 * k * k - 1.0 - xi * xi, -3.0 * xi * k);
    let dp = Complex64::new(6.0 * k * s2, -3.0 * xi * s2);
    jost_coefficient(xi) * (dp + i * xi * p) * Complex64::from_polar(1.0, x * xi)
}

/// Jost solution with `e^{ixξ} f₋(x, ξ) → 1` as `x → -∞`; `f₋(x, ξ) = f₊(-x, ξ)`.
pub fn jost_minus(x: f64, xi: f64) -> Complex64 {
    jost_plus(-x, xi)
}

pub fn jost_minus_dx(x: f64, xi: f64) -> Complex64 {
    -jost_plus_dx(-x, xi)
}

/// Generalised eigenfunction `e(x, ξ)` of `-∂² - 6 sech²`.
pub fn distorted_kernel(x: f64, xi: f64) -> Complex64 {
    let norm = 1.0 / (2.0 * PI).sqrt();
    if xi >= 0.0 {
        transmission(xi) * jost_plus(x, xi) * norm
    } else {
        transmission(-xi) * jost_minus(x, -xi) * norm
    }
}

/// `𝓕̃[u](ξ) = ∫ conj(e(x, ξ)) u(x) dx` by the trapezoidal rule on the grid.
pub fn distorted_ft(grid: &Grid, u: &[f64], xi: f64) -> Result<Complex64> {
    grid.check(u.len())?;
    let n = grid.len();
    let edge = (0..5).chain(n - 5..n).map(|j| u[j].abs()).fold(0.0, f64::max);
    if edge > 1e-8 * norm_inf(u).max(f64::MIN_POSITIVE) {
        log::warn!("distorted_ft: field carries {edge:.3e} near the box boundary");
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &v) in u.iter().enumerate() {
        acc += distorted_kernel(grid.x(j), xi).conj() * v;
    }
    Ok(acc * grid.dx())
}

/// Closed form of `𝓕̃[3 Q Y₂²](√3)`.
pub fn resonance_constant() -> Complex64 {
    let s3 = 3f64.sqrt();
    Complex64::new(1.0, -3.0 * s3) * (3.0 / 28.0 * PI.sqrt() * sech(PI * s3 / 2.0))
}

/// Flat transform of `𝒟₁𝒟₂(3 Q Y₂²)`.
pub fn resonance_polynomial_ft(xi: f64) -> f64 {
    let x2 = xi * xi;
    -3.0 * PI.sqrt() / 64.0 * (-29.0 - 23.0 * x2 + 9.0 * x2 * x2 + 3.0 * x2 * x2 * x2) * sech(PI * xi / 2.0)
}

/// Flat transforms of `α₁, α₂, α₃`.
pub fn alpha_ft(j: usize, xi: f64) -> f64 {
    let x2 = xi * xi;
    let s = sech(PI * xi / 2.0);
    let sp = PI.sqrt();
    let r7 = 2.0 * 7f64.sqrt();
    match j {
        1 => -sp / 64.0 * (1.0 + x2) * (-1.0 + r7 + x2) * (-1.0 - r7 + x2) * s,
        2 => -(3.0 * PI).sqrt() / 64.0 * (1.0 + x2).powi(2) * (3.0 + x2) * s,
        3 => -3.0 * sp / 256.0 * (1.0 + x2).powi(2) * (9.0 + x2) * s,
        _ => panic!("alpha index must be 1, 2 or 3"),
    }
}

/// `α̂₁ + α̂₂ ∫G + α̂₃ (∫G)²` with `∫G = 1/√3`.
pub fn alpha_combined(xi: f64) -> f64 {
    let ig = 1.0 / NU;
    alpha_ft(1, xi) + alpha_ft(2, xi) * ig + alpha_ft(3, xi) * ig * ig
}
