//! Periodic spatial lattice, its dual spectral lattice and the transform
//! convention `û(ξ) = (2π)^{-1/2} ∫ e^{-ixξ} u(x) dx`.
//!
//! Fields are plain slices of length `N`. Spectral arrays returned by
//! [`Grid::forward_ft`] are stored in ascending frequency order,
//! `ξ_m = 2π(m - N/2)/L`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Grid {
    length: f64,
    n: usize,
    dx: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    // frequencies in FFT (natural) order
    xi_nat: Vec<f64>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("length", &self.length).field("n", &self.n).finish()
    }
}

impl Grid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Grid(format!("box length must be positive, got {length}")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("point count must be an even power of two, got {n}")));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let dxi = 2.0 * PI / length;
        let xi_nat = (0..n)
            .map(|i| {
                let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
                k * dxi
            })
            .collect();
        Ok(Self { length, n, dx: length / n as f64, fwd, inv, xi_nat })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Index of the lattice point `x = 0`.
    pub fn origin(&self) -> usize {
        self.n / 2
    }

    /// Index of `-x_j`. The point `-L/2` is its own mirror by periodicity.
    pub fn mirror(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }

    /// Frequency at ascending index `m`.
    pub fn xi(&self, m: usize) -> f64 {
        (m as f64 - (self.n / 2) as f64) * self.dxi()
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.xi(m)).collect()
    }

    /// Frequencies in FFT order.
    pub fn xi_natural(&self) -> &[f64] {
        &self.xi_nat
    }

    pub fn xi_max(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    /// Ascending index of the lattice frequency closest to `xi`, if `xi` is
    /// within `tol` of it.
    pub fn xi_index(&self, xi: f64, tol: f64) -> Option<usize> {
        let k = (xi / self.dxi()).round();
        let m = k + (self.n / 2) as f64;
        if m < 0.0 || m >= self.n as f64 {
            return None;
        }
        ((k * self.dxi() - xi).abs() <= tol).then_some(m as usize)
    }

    pub(crate) fn check(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::Shape { expected: self.n, got: len })
        }
    }

    /// Unnormalised forward DFT in natural order.
    pub fn fft_raw(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
    }

    /// Unnormalised inverse DFT in natural order.
    pub fn ifft_raw(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
    }

    pub fn fft_raw_with_scratch(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.fwd.process_with_scratch(buf, scratch);
    }

    pub fn ifft_raw_with_scratch(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        self.inv.process_with_scratch(buf, scratch);
    }

    pub fn scratch_len(&self) -> usize {
        self.fwd.get_inplace_scratch_len().max(self.inv.get_inplace_scratch_len())
    }

    pub fn forward_ft(&self, u: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(u.len())?;
        let mut buf = u.to_vec();
        self.fwd.process(&mut buf);
        let h = self.n / 2;
        let scale = self.dx / (2.0 * PI).sqrt();
        Ok((0..self.n)
            .map(|m| {
                let nat = (m + h) % self.n;
                let sign = if (m + h) % 2 == 0 { 1.0 } else { -1.0 };
                buf[nat] * (sign * scale)
            })
            .collect())
    }

    pub fn forward_ft_real(&self, u: &[f64]) -> Result<Vec<Complex64>> {
        let c: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward_ft(&c)
    }

    pub fn inverse_ft(&self, uhat: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(uhat.len())?;
        let h = self.n / 2;
        let scale = self.dxi() / (2.0 * PI).sqrt();
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n];
        for (m, v) in uhat.iter().enumerate() {
            let sign = if (m + h) % 2 == 0 { 1.0 } else { -1.0 };
            buf[(m + h) % self.n] = v * (sign * scale);
        }
        self.inv.process(&mut buf);
        Ok(buf)
    }

    /// Trapezoidal transform of `u` at an arbitrary frequency.
    pub fn ft_at(&self, u: &[f64], xi: f64) -> Complex64 {
        let scale = self.dx / (2.0 * PI).sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in u.iter().enumerate() {
            if v != 0.0 {
                acc += Complex64::from_polar(v, -self.x(j) * xi);
            }
        }
        acc * scale
    }

    /// Samples a symbol in natural order. The Nyquist mode gets the mean of
    /// `m(±ξ_max)`, which vanishes for odd symbols.
    pub fn symbol<F: Fn(f64) -> Complex64>(&self, m: F) -> Result<Vec<Complex64>> {
        let h = self.n / 2;
        let mut out = Vec::with_capacity(self.n);
        for (i, &xi) in self.xi_nat.iter().enumerate() {
            let v = if i == h { 0.5 * (m(xi) + m(-xi)) } else { m(xi) };
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFiniteSymbol { xi });
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn apply_symbol(&self, sym: &[Complex64], u: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(u.len())?;
        self.check(sym.len())?;
        let mut buf = u.to_vec();
        self.fwd.process(&mut buf);
        let inv_n = 1.0 / self.n as f64;
        for (b, s) in buf.iter_mut().zip(sym) {
            *b *= s * inv_n;
        }
        self.inv.process(&mut buf);
        Ok(buf)
    }

    pub fn apply_multiplier<F: Fn(f64) -> Complex64>(&self, m: F, u: &[Complex64]) -> Result<Vec<Complex64>> {
        let sym = self.symbol(m)?;
        self.apply_symbol(&sym, u)
    }

    /// Multiplier applied to a real field, keeping the real part. Exact when
    /// the symbol is Hermitian, `m(-ξ) = conj m(ξ)`.
    pub fn apply_real_multiplier<F: Fn(f64) -> Complex64>(&self, m: F, u: &[f64]) -> Result<Vec<f64>> {
        let c: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Ok(self.apply_multiplier(m, &c)?.into_iter().map(|z| z.re).collect())
    }

    /// Spectral derivative of the given order.
    pub fn derivative(&self, u: &[f64], order: u32) -> Vec<f64> {
        let i = Complex64::new(0.0, 1.0);
        self.apply_real_multiplier(|xi| (i * xi).powu(order), u)
            .expect("polynomial symbols are finite")
    }

    pub fn derivative_c(&self, u: &[Complex64], order: u32) -> Vec<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        self.apply_multiplier(|xi| (i * xi).powu(order), u)
            .expect("polynomial symbols are finite")
    }

    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.dx * a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>()
    }

    pub fn norm_l2(&self, u: &[f64]) -> f64 {
        self.inner(u, u).sqrt()
    }

    pub fn norm_l2_c(&self, u: &[Complex64]) -> f64 {
        (self.dx * u.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Largest deviation from evenness, `max_j |u(x_j) - u(-x_j)| / 2`.
    pub fn odd_part(&self, u: &[f64]) -> f64 {
        (0..self.n)
            .map(|j| 0.5 * (u[j] - u[self.mirror(j)]).abs())
            .fold(0.0, f64::max)
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n).map(|j| f(self.x(j))).collect()
    }
}

pub fn norm_inf(u: &[f64]) -> f64 {
    u.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn norm_inf_c(u: &[Complex64]) -> f64 {
    u.iter().fold(0.0, |m, v| m.max(v.norm()))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (p, q)| m.max((p - q).abs()))
}

/// Japanese bracket `⟨ξ⟩ = (1 + ξ²)^{1/2}`.
pub fn jbracket(xi: f64) -> f64 {
    (1.0 + xi * xi).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattices() {
        let g = Grid::new(80.0, 8).unwrap();
        let xs = g.xs();
        assert_eq!(xs, vec![-40.0, -30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0]);
        assert_eq!(g.origin(), 4);
        let g = Grid::new(2.0 * PI, 4).unwrap();
        let xi: Vec<f64> = g.xis().iter().map(|v| (v * 1e12).round() / 1e12).collect();
        assert_eq!(xi, vec![-2.0, -1.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Grid::new(80.0, 6).is_err());
        assert!(Grid::new(80.0, 12).is_err());
        assert!(Grid::new(0.0, 8).is_err());
        assert!(Grid::new(-1.0, 8).is_err());
    }

    #[test]
    fn mirror_pairs() {
        let g = Grid::new(10.0, 16).unwrap();
        for j in 0..16 {
            let m = g.mirror(j);
            if j != 0 {
                assert!((g.x(j) + g.x(m)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn odd_symbol_kills_nyquist() {
        let g = Grid::new(8.0, 8).unwrap();
        let s = g.symbol(|xi| Complex64::new(0.0, xi)).unwrap();
        assert_eq!(s[4], Complex64::new(0.0, 0.0));
        let s = g.symbol(|xi| Complex64::new(xi * xi, 0.0)).unwrap();
        assert!((s[4].re - g.xi_max().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn nonfinite_symbol_flagged() {
        let g = Grid::new(8.0, 8).unwrap();
        let u = vec![0.0; 8];
        assert!(g.apply_real_multiplier(|xi| Complex64::new(1.0 / xi, 0.0), &u).is_err());
    }

    #[test]
    fn lattice_lookup() {
        let g = Grid::new(80.0, 64).unwrap();
        let m = g.xi_index(g.xi(40), 1e-12).unwrap();
        assert_eq!(m, 40);
        assert!(g.xi_index(g.xi(40) + 0.3 * g.dxi(), 1e-9).is_none());
    }
}
