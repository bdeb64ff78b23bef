//! Quadrature rules: composite Gauss-Legendre, a principal-value rule for the
//! `cosech(πs/2)` kernel, and high-order cumulative integrals on the grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Composite rule over `[a, b]` with `panels` equal panels.
    pub fn integrate<T, F>(&self, f: F, a: f64, b: f64, panels: usize) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: Fn(f64) -> T,
    {
        let h = (b - a) / panels as f64;
        let mut acc = T::default();
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (z, w) in self.nodes.iter().zip(&self.weights) {
                acc = acc + f(mid + 0.5 * h * z) * (0.5 * h * w);
            }
        }
        acc
    }
}

/// Resolution of the singular and regular convolution rules.
#[derive(Clone, Debug)]
pub struct PvRule {
    pub cutoff: f64,
    pub panel: f64,
    pub order: usize,
    /// Refinement check: halving the panel width may not move the result by more.
    pub check_tol: f64,
}

impl Default for PvRule {
    fn default() -> Self {
        Self { cutoff: 40.0, panel: 0.25, order: 16, check_tol: 1e-9 }
    }
}

pub fn cosech(x: f64) -> f64 {
    1.0 / x.sinh()
}

pub fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

impl PvRule {
    fn panels(&self, panel: f64) -> usize {
        (self.cutoff / panel).ceil() as usize
    }

    fn pv_raw<H: Fn(f64) -> Complex64>(&self, h: &H, xi: f64, panel: f64) -> Complex64 {
        let gl = GaussLegendre::new(self.order);
        let n = self.panels(panel);
        // nodes never hit s = 0; the bracket is O(s) there, so the integrand is bounded
        gl.integrate(|s| (h(xi - s) - h(xi + s)) * cosech(0.5 * PI * s), 0.0, n as f64 * panel, n)
    }

    /// `(Ω ∗ h)(ξ) = p.v. ∫ cosech(π(ξ-η)/2) h(η) dη`, folded onto `s ≥ 0`.
    pub fn pv_cosech_conv<H: Fn(f64) -> Complex64>(&self, h: H, xi: f64) -> Result<Complex64> {
        let coarse = self.pv_raw(&h, xi, self.panel);
        let fine = self.pv_raw(&h, xi, 0.5 * self.panel);
        let diff = (coarse - fine).norm();
        if diff > self.check_tol * (1.0 + fine.norm()) {
            return Err(Error::Quadrature(format!(
                "principal value at xi = {xi} moved by {diff:.3e} under refinement"
            )));
        }
        Ok(fine)
    }

    fn line_raw<H: Fn(f64) -> Complex64>(&self, h: &H, center: f64, panel: f64) -> Complex64 {
        let gl = GaussLegendre::new(self.order);
        let n = self.panels(panel);
        let half = n as f64 * panel;
        gl.integrate(|s| h(s), center - half, center + half, 2 * n)
    }

    /// `∫ h` over `[center - cutoff, center + cutoff]` for a smooth decaying `h`.
    pub fn line_integral<H: Fn(f64) -> Complex64>(&self, h: H, center: f64) -> Result<Complex64> {
        let coarse = self.line_raw(&h, center, self.panel);
        let fine = self.line_raw(&h, center, 0.5 * self.panel);
        let diff = (coarse - fine).norm();
        if diff > self.check_tol * (1.0 + fine.norm()) {
            return Err(Error::Quadrature(format!("regular integral moved by {diff:.3e} under refinement")));
        }
        Ok(fine)
    }
}

const STENCIL: usize = 8;

/// `∫_0^1 ℓ_k(t) dt` for the Lagrange basis on integer nodes `offs`.
fn cell_weights(offs: &[i64; STENCIL]) -> [f64; STENCIL] {
    let mut w = [0.0; STENCIL];
    for k in 0..STENCIL {
        // coefficients of prod_{m != k} (t - t_m) / (t_k - t_m), lowest degree first
        let mut poly = vec![1.0];
        let mut denom = 1.0;
        for m in 0..STENCIL {
            if m == k {
                continue;
            }
            let tm = offs[m] as f64;
            let mut next = vec![0.0; poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * tm;
            }
            poly = next;
            denom *= offs[k] as f64 - tm;
        }
        w[k] = poly.iter().enumerate().map(|(d, c)| c / (d as f64 + 1.0)).sum::<f64>() / denom;
    }
    w
}

/// Eighth-order cumulative integrals anchored at the lattice point `x = 0`.
///
/// Computes `F(x) = ∫_0^x k(y, x) h(y) dy` for kernels of the form
/// `k(y, x) = V(y)/W(x)`. `kernel(y, x)` must return that ratio and
/// `w_ratio(a, b)` must return `W(a)/W(b)`; both are expected to be evaluated
/// in overflow-safe form by the caller.
pub struct Cumulative {
    n: usize,
    dx: f64,
    // weights for the cell [i, i+1], indexed by the first stencil node
    cells: Vec<(usize, [f64; STENCIL])>,
}

impl Cumulative {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.len();
        assert!(n >= STENCIL);
        let mut cells = Vec::with_capacity(n - 1);
        let mut cache: Vec<(usize, [f64; STENCIL])> = Vec::new();
        for i in 0..n - 1 {
            let start = (i as i64 - 3).clamp(0, (n - STENCIL) as i64) as usize;
            let shift = i - start;
            let w = match cache.iter().find(|(s, _)| *s == shift) {
                Some((_, w)) => *w,
                None => {
                    let mut offs = [0i64; STENCIL];
                    for (m, o) in offs.iter_mut().enumerate() {
                        *o = m as i64 - shift as i64;
                    }
                    let w = cell_weights(&offs);
                    cache.push((shift, w));
                    w
                }
            };
            cells.push((start, w));
        }
        Self { n, dx: grid.dx(), cells }
    }

    pub fn apply<K, R>(&self, grid: &Grid, h: &[f64], kernel: K, w_ratio: R) -> Vec<f64>
    where
        K: Fn(f64, f64) -> f64,
        R: Fn(f64, f64) -> f64,
    {
        let n = self.n;
        let o = grid.origin();
        let mut out = vec![0.0; n];
        let cell = |i: usize, x_target: f64| -> f64 {
            let (start, w) = &self.cells[i];
            let mut acc = 0.0;
            for (m, wm) in w.iter().enumerate() {
                let j = start + m;
                acc += wm * kernel(grid.x(j), x_target) * h[j];
            }
            acc * self.dx
        };
        for i in o..n - 1 {
            let (xa, xb) = (grid.x(i), grid.x(i + 1));
            out[i + 1] = w_ratio(xa, xb) * out[i] + cell(i, xb);
        }
        for i in (1..=o).rev() {
            let (xa, xb) = (grid.x(i - 1), grid.x(i));
            out[i - 1] = w_ratio(xb, xa) * out[i] - cell(i - 1, xa);
        }
        out
    }
}

/// `cosh(y)/cosh(x)` without overflow.
pub fn ch_over_ch(y: f64, x: f64) -> f64 {
    let (ay, ax) = (y.abs(), x.abs());
    (ay - ax).exp() * (1.0 + (-2.0 * ay).exp()) / (1.0 + (-2.0 * ax).exp())
}

/// `sinh(y)/cosh(x)` without overflow.
pub fn sh_over_ch(y: f64, x: f64) -> f64 {
    let (ay, ax) = (y.abs(), x.abs());
    y.signum() * (ay - ax).exp() * (1.0 - (-2.0 * ay).exp()) / (1.0 + (-2.0 * ax).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        let gl = GaussLegendre::new(8);
        let s: f64 = gl.weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let v: f64 = gl.integrate(|x: f64| x.powi(14), 0.0, 1.0, 1);
        assert!((v - 1.0 / 15.0).abs() < 1e-14);
        let v: f64 = gl.integrate(|x: f64| x.exp(), -1.0, 2.0, 4);
        assert!((v - (2f64.exp() - (-1f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn odd_order_rule() {
        let gl = GaussLegendre::new(5);
        assert!(gl.nodes()[2].abs() < 1e-15);
        let v: f64 = gl.integrate(|x: f64| x.powi(8), -1.0, 1.0, 1);
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn cell_weights_interior() {
        let offs = [-3, -2, -1, 0, 1, 2, 3, 4];
        let w = cell_weights(&offs);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        for k in 0..4 {
            assert!((w[k] - w[7 - k]).abs() < 1e-14);
        }
    }

    #[test]
    fn cumulative_polynomial_exact() {
        let g = Grid::new(4.0, 64).unwrap();
        let c = Cumulative::new(&g);
        let h = g.sample(|x| x.powi(3) - 2.0 * x);
        let f = c.apply(&g, &h, |_, _| 1.0, |_, _| 1.0);
        for j in 0..g.len() {
            let x = g.x(j);
            assert!((f[j] - (x.powi(4) / 4.0 - x * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn ratios_are_stable() {
        assert!((ch_over_ch(800.0, 801.0) - (-1f64).exp()).abs() < 1e-15);
        assert!((sh_over_ch(-0.5, 0.3) - (-0.5f64).sinh() / 0.3f64.cosh()).abs() < 1e-15);
        assert!(ch_over_ch(0.0, 1000.0) >= 0.0);
    }

    #[test]
    fn pv_of_odd_linear_function() {
        // (Omega * eta)(xi) folds to -2 int_0^inf s cosech(pi s/2) ds
        let r = PvRule::default();
        let v = r.pv_cosech_conv(|eta| Complex64::new(eta, 0.0), 0.7).unwrap();
        // int_0^inf s cosech(pi s / 2) ds = 1
        assert!((v.re + 2.0).abs() < 1e-12, "{v}");
    }
}
