//! First-order factorisation of `L`: `𝒟₁ = ∂ + tanh`, `𝒟₂ = ∂ + 2 tanh`,
//! their adjoints, the explicit right inverses `ℐ₁, ℐ₂, 𝒥 = ℐ₂ ℐ₁`, and the
//! Fourier-side description of `ℐ₁` and `𝒥`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::poschl_teller::SolitonFrame;
use crate::quadrature::{ch_over_ch, cosech, sech, sh_over_ch, Cumulative, PvRule};
use crate::{C0, C1};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DarbouxOp {
    D1,
    D2,
    D1Adj,
    D2Adj,
}

impl DarbouxOp {
    pub fn apply(self, frame: &SolitonFrame, u: &[f64]) -> Result<Vec<f64>> {
        frame.grid().check(u.len())?;
        let du = frame.grid().derivative(u, 1);
        let (sign, weight) = match self {
            DarbouxOp::D1 => (1.0, 1.0),
            DarbouxOp::D2 => (1.0, 2.0),
            DarbouxOp::D1Adj => (-1.0, 1.0),
            DarbouxOp::D2Adj => (-1.0, 2.0),
        };
        Ok(du
            .iter()
            .zip(u)
            .zip(&frame.k)
            .map(|((d, u), k)| sign * d + weight * k * u)
            .collect())
    }
}

/// `𝒟₁𝒟₂ u`.
pub fn d1d2(frame: &SolitonFrame, u: &[f64]) -> Result<Vec<f64>> {
    DarbouxOp::D1.apply(frame, &DarbouxOp::D2.apply(frame, u)?)
}

/// Right inverses and their tilde companions, sharing one set of
/// cumulative-integral weights.
pub struct Inverses<'a> {
    frame: &'a SolitonFrame,
    cum: Cumulative,
}

impl<'a> Inverses<'a> {
    pub fn new(frame: &'a SolitonFrame) -> Self {
        Self { frame, cum: Cumulative::new(frame.grid()) }
    }

    fn grid(&self) -> &Grid {
        self.frame.grid()
    }

    /// `ℐ₁[g](x) = sech x ∫₀ˣ cosh y g(y) dy`.
    pub fn i1(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.grid().check(g.len())?;
        Ok(self.cum.apply(self.grid(), g, ch_over_ch, ch_over_ch))
    }

    /// `ℐ₂[g](x) = sech² x ∫₀ˣ cosh² y g(y) dy`.
    pub fn i2(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.grid().check(g.len())?;
        let sq = |y: f64, x: f64| ch_over_ch(y, x).powi(2);
        Ok(self.cum.apply(self.grid(), g, sq, sq))
    }

    /// `𝒥[g] = tanh x · sech x ∫₀ˣ cosh z g - sech² x ∫₀ˣ cosh z sinh z g`,
    /// which is `ℐ₂ ℐ₁` with the order of integration swapped.
    pub fn j(&self, g: &[f64]) -> Result<Vec<f64>> {
        let a = self.i1(g)?;
        let b = self.cum.apply(
            self.grid(),
            g,
            |y, x| ch_over_ch(y, x) * sh_over_ch(y, x),
            |y, x| ch_over_ch(y, x).powi(2),
        );
        Ok(a.iter().zip(&b).zip(&self.frame.k).map(|((a, b), k)| k * a - b).collect())
    }

    /// `ℐ̃₁[h](x) = -sech x ∫₀ˣ sinh y h(y) dy`.
    pub fn i1_tilde(&self, h: &[f64]) -> Result<Vec<f64>> {
        self.grid().check(h.len())?;
        Ok(self.cum.apply(self.grid(), h, |y, x| -sh_over_ch(y, x), ch_over_ch))
    }

    /// `𝒥̃[h](x) = -sech² x ∫₀ˣ (sinh x sinh y - ½ sinh² y) h(y) dy`.
    ///
    /// The `sinh x sinh y` cross term is what makes `𝒥[g] = ½K²g + 𝒥̃[∂g]`
    /// hold; the `sinh² y` kernel on its own is [`Inverses::j_tilde_sinh2`].
    pub fn j_tilde(&self, h: &[f64]) -> Result<Vec<f64>> {
        let a = self.i1_tilde(h)?;
        let b = self.j_tilde_sinh2(h)?;
        Ok(a.iter().zip(&b).zip(&self.frame.k).map(|((a, b), k)| k * a - b).collect())
    }

    /// `-½ sech² x ∫₀ˣ sinh² y h(y) dy`.
    pub fn j_tilde_sinh2(&self, h: &[f64]) -> Result<Vec<f64>> {
        self.grid().check(h.len())?;
        Ok(self.cum.apply(
            self.grid(),
            h,
            |y, x| -0.5 * sh_over_ch(y, x).powi(2),
            |y, x| ch_over_ch(y, x).powi(2),
        ))
    }

    /// `f = 𝒥[w] + c₀⁻¹ f(0) Y₀ + c₁⁻¹ f'(0) Y₁`.
    pub fn reconstruct(&self, w: &[f64], f0: f64, fp0: f64) -> Result<Vec<f64>> {
        let jw = self.j(w)?;
        let fr = self.frame;
        Ok(jw
            .iter()
            .zip(&fr.y0)
            .zip(&fr.y1)
            .map(|((j, y0), y1)| j + f0 / C0 * y0 + fp0 / C1 * y1)
            .collect())
    }

    /// Residuals of `ℐ₁[g] = K g + ℐ̃₁[∂g]` and `𝒥[g] = ½K² g + 𝒥̃[∂g]`.
    pub fn tilde_split_check(&self, g: &[f64]) -> Result<(f64, f64)> {
        let dg = self.grid().derivative(g, 1);
        let k = &self.frame.k;
        let lhs1 = self.i1(g)?;
        let t1 = self.i1_tilde(&dg)?;
        let r1 = (0..g.len()).map(|j| (lhs1[j] - k[j] * g[j] - t1[j]).abs()).fold(0.0, f64::max);
        let lhs2 = self.j(g)?;
        let t2 = self.j_tilde(&dg)?;
        let r2 = (0..g.len())
            .map(|j| (lhs2[j] - 0.5 * k[j] * k[j] * g[j] - t2[j]).abs())
            .fold(0.0, f64::max);
        Ok((r1, r2))
    }
}

/// Fourier multipliers and Schwartz weights appearing in the kernels of
/// `ℐ₁` and `𝒥`.
pub mod multipliers {
    use super::*;

    fn jb2(xi: f64) -> f64 {
        1.0 + xi * xi
    }

    pub fn m(j: usize, xi: f64) -> f64 {
        let x2 = xi * xi;
        match j {
            0 => -0.5 / jb2(xi),
            1 => 0.5 * xi / jb2(xi),
            2 => 0.5 / (4.0 + x2),
            3 => 0.5 * xi / (1.0 + x2),
            4 => (2.0 - x2) / ((1.0 + x2) * (4.0 + x2)),
            5 => -1.5 * xi / ((1.0 + x2) * (4.0 + x2)),
            6 => -1.5 / ((1.0 + x2) * (4.0 + x2)),
            _ => panic!("multiplier index out of range: {j}"),
        }
    }

    /// `m₅ = (ξ/⟨ξ⟩) m̃₅`.
    pub fn m5_reduced(xi: f64) -> f64 {
        -1.5 * jb2(xi).sqrt() / (jb2(xi) * (4.0 + xi * xi))
    }

    pub fn omega(j: usize, xi: f64) -> f64 {
        match j {
            1 => sech(0.5 * PI * xi),
            2 => xi * sech(0.5 * PI * xi),
            3 => {
                if xi.abs() < 1e-6 {
                    // series of s / sinh(πs/2)
                    2.0 / PI * (1.0 - (PI * xi).powi(2) / 24.0)
                } else {
                    xi * cosech(0.5 * PI * xi)
                }
            }
            _ => panic!("omega index out of range: {j}"),
        }
    }

    /// The symbol of `Ω` away from its pole.
    pub fn big_omega(xi: f64) -> f64 {
        cosech(0.5 * PI * xi)
    }
}

use multipliers::{m, omega};

/// Fourier side of `ℐ₁`: `iΩ∗(m₀ f̂) + iω₁ B₁(f̂) - 2i m₁ f̂`.
///
/// The last term is the point mass left by the pole of
/// `sech(π(ξ - η + i)/2)` on the real axis.
pub fn i1_hat<F: Fn(f64) -> Complex64>(rule: &PvRule, fhat: F, xi: f64) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let sing = rule.pv_cosech_conv(|eta| fhat(eta) * m(0, eta), xi)?;
    let b1 = rule.line_integral(|eta| fhat(eta) * m(1, eta), 0.0)?;
    Ok(i * sing + i * omega(1, xi) * b1 - 2.0 * i * m(1, xi) * fhat(xi))
}

/// The regular part `iω₁(ξ) B₁(f̂)` of `ℐ̂₁`.
pub fn i1_hat_regular<F: Fn(f64) -> Complex64>(rule: &PvRule, fhat: F, xi: f64) -> Result<Complex64> {
    let b1 = rule.line_integral(|eta| fhat(eta) * m(1, eta), 0.0)?;
    Ok(Complex64::new(0.0, 1.0) * omega(1, xi) * b1)
}

/// Fourier side of `𝒥`: the `δ₀` part `m₄ f̂` is evaluated directly.
pub fn j_hat<F: Fn(f64) -> Complex64>(rule: &PvRule, fhat: F, xi: f64) -> Result<Complex64> {
    let delta = fhat(xi) * m(4, xi);
    let sing = rule.pv_cosech_conv(|eta| fhat(eta) * m(5, eta), xi)?;
    let reg = rule.line_integral(|eta| omega(3, xi - eta) * m(6, eta) * fhat(eta), xi)?;
    let b2 = rule.line_integral(|eta| fhat(eta) * m(2, eta), 0.0)?;
    let b3 = rule.line_integral(|eta| fhat(eta) * m(3, eta), 0.0)?;
    Ok(delta + sing + reg + omega(3, xi) * b2 + omega(2, xi) * b3)
}

#[derive(Clone, Debug)]
pub struct KernelResidual {
    pub xi: f64,
    pub grid_value: Complex64,
    pub kernel_value: Complex64,
}

impl KernelResidual {
    pub fn residual(&self) -> f64 {
        (self.grid_value - self.kernel_value).norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    I1,
    J,
}

/// Compares the grid transform of `ℐ₁[f]` or `𝒥[f]` at a lattice frequency
/// with the kernel quadrature applied to `f̂`.
pub fn fourier_kernel_check<F: Fn(f64) -> Complex64>(
    inv: &Inverses<'_>,
    rule: &PvRule,
    kind: KernelKind,
    f: &[f64],
    fhat: F,
    xi: f64,
) -> Result<KernelResidual> {
    let grid = inv.grid();
    let m = grid.xi_index(xi, 1e-9 * grid.dxi()).ok_or_else(|| {
        Error::Quadrature(format!("xi = {xi} is not a point of the spectral lattice"))
    })?;
    let field = match kind {
        KernelKind::I1 => inv.i1(f)?,
        KernelKind::J => inv.j(f)?,
    };
    let grid_value = grid.forward_ft_real(&field)?[m];
    let xi = grid.xi(m);
    let kernel_value = match kind {
        KernelKind::I1 => i1_hat(rule, fhat, xi)?,
        KernelKind::J => j_hat(rule, fhat, xi)?,
    };
    Ok(KernelResidual { xi, grid_value, kernel_value })
}

/// The four convolution identities for `Ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionIdentity {
    OmegaOmega1,
    OmegaOmega2,
    OmegaOmega3,
    OmegaOmega,
}

impl ConvolutionIdentity {
    pub fn from_index(which: usize) -> Option<Self> {
        match which {
            1 => Some(Self::OmegaOmega1),
            2 => Some(Self::OmegaOmega2),
            3 => Some(Self::OmegaOmega3),
            4 => Some(Self::OmegaOmega),
            _ => None,
        }
    }
}

pub fn convolution_closed_form(id: ConvolutionIdentity, xi: f64) -> f64 {
    let s = sech(0.5 * PI * xi);
    match id {
        ConvolutionIdentity::OmegaOmega1 => 2.0 * xi * s,
        ConvolutionIdentity::OmegaOmega2 => (xi * xi - 1.0) * s,
        ConvolutionIdentity::OmegaOmega3 => xi * omega(3, xi),
        ConvolutionIdentity::OmegaOmega => f64::NAN,
    }
}

pub const CONVOLUTION_TEST_XI: [f64; 4] = [0.3, 1.0, crate::SQRT3, 2.5];

/// Largest deviation of the quadrature from the closed form. For `Ω∗Ω` the
/// distributional identity is tested against the Gaussian `e^{-ξ²}`.
pub fn convolution_identity_check(rule: &PvRule, id: ConvolutionIdentity) -> Result<f64> {
    let j = match id {
        ConvolutionIdentity::OmegaOmega1 => 1,
        ConvolutionIdentity::OmegaOmega2 => 2,
        ConvolutionIdentity::OmegaOmega3 => 3,
        ConvolutionIdentity::OmegaOmega => {
            let (paired, closed) = smeared_omega_omega(rule)?;
            return Ok((paired - closed).abs());
        }
    };
    let mut worst: f64 = 0.0;
    for &xi in &CONVOLUTION_TEST_XI {
        let v = rule.pv_cosech_conv(|eta| Complex64::new(omega(j, eta), 0.0), xi)?;
        worst = worst.max((v.re - convolution_closed_form(id, xi)).abs());
    }
    Ok(worst)
}

/// `(⟨Ω∗Ω, ψ⟩, -4ψ(0) + 2⟨ω₃, ψ⟩)` for `ψ = e^{-ξ²}`, the first by nested
/// principal values.
pub fn smeared_omega_omega(rule: &PvRule) -> Result<(f64, f64)> {
    let psi = |x: f64| (-x * x).exp();
    // G(η) = ∫ Ω(s) ψ(η + s) ds
    let inner = |eta: f64| -> Result<f64> {
        Ok(-rule.pv_cosech_conv(|s| Complex64::new(psi(s), 0.0), eta)?.re)
    };
    let outer_rule = PvRule { cutoff: 12.0, ..rule.clone() };
    let err = std::cell::RefCell::new(None);
    let paired = outer_rule
        .pv_cosech_conv(
            |eta| match inner(-eta) {
                Ok(v) => Complex64::new(v, 0.0),
                Err(e) => {
                    err.borrow_mut().get_or_insert(e.to_string());
                    Complex64::new(0.0, 0.0)
                }
            },
            0.0,
        )
        .map(|z| z.re)?;
    if let Some(e) = err.into_inner() {
        return Err(Error::Quadrature(e));
    }
    let closed = -4.0 * psi(0.0) + 2.0 * rule.line_integral(|x| Complex64::new(omega(3, x) * psi(x), 0.0), 0.0)?.re;
    Ok((paired, closed))
}

#[derive(Clone, Debug)]
pub struct BoundConstant {
    pub name: &'static str,
    pub constant: f64,
}

/// Measured constants `max lhs/rhs` over `samples` for the nine bounds on
/// `ℐ₁, 𝒥, P_c𝒥, ℐ̃₁, 𝒥̃`. Bounds stated for `∂^j`, `j = 0, 1`, take the
/// larger of the two ratios.
pub fn operator_bound_constants(inv: &Inverses<'_>, samples: &[Vec<f64>]) -> Result<Vec<BoundConstant>> {
    let frame = inv.frame;
    let grid = frame.grid();
    let xs = grid.xs();
    let up: Vec<f64> = xs.iter().map(|x| (1.0 + x * x).sqrt()).collect();
    let down: Vec<f64> = up.iter().map(|w| 1.0 / w).collect();
    let weighted = |w: &[f64], u: &[f64]| -> Vec<f64> { w.iter().zip(u).map(|(w, u)| w * u).collect() };
    let sup = crate::grid::norm_inf;
    let both = |u: &[f64], f: &dyn Fn(&[f64]) -> f64| -> f64 {
        let du = grid.derivative(u, 1);
        f(u).max(f(&du))
    };
    let names = [
        "sup d^j I1[v] <= C sup v",
        "sup d^j J[v] <= C sup v",
        "sup d^j PcJ[v] <= C sup v",
        "<x> I1[v] <= C <x> v (L2)",
        "<x> J[v] <= C <x> v (L2)",
        "<x>^-1 d^j I1t[dv] <= C <x>^-1 dv (L2)",
        "<x>^-1 d^j Jt[dv] <= C <x>^-1 dv (L2)",
        "sup <x>^-1 I1t[dv] <= C <x>^-1 dv (L2)",
        "sup <x>^-1 Jt[dv] <= C <x>^-1 dv (L2)",
    ];
    let mut consts = vec![0.0f64; names.len()];
    for v in samples {
        let dv = grid.derivative(v, 1);
        let i1 = inv.i1(v)?;
        let j = inv.j(v)?;
        let pcj = frame.project_pc(&j)?;
        let i1t = inv.i1_tilde(&dv)?;
        let jt = inv.j_tilde(&dv)?;
        let sup_v = sup(v);
        let l2_up_v = grid.norm_l2(&weighted(&up, v));
        let l2_down_dv = grid.norm_l2(&weighted(&down, &dv));
        let l2_down = |u: &[f64]| grid.norm_l2(&weighted(&down, u));
        let ratios = [
            both(&i1, &|u| sup(u)) / sup_v,
            both(&j, &|u| sup(u)) / sup_v,
            both(&pcj, &|u| sup(u)) / sup_v,
            grid.norm_l2(&weighted(&up, &i1)) / l2_up_v,
            grid.norm_l2(&weighted(&up, &j)) / l2_up_v,
            both(&i1t, &l2_down) / l2_down_dv,
            both(&jt, &l2_down) / l2_down_dv,
            sup(&weighted(&down, &i1t)) / l2_down_dv,
            sup(&weighted(&down, &jt)) / l2_down_dv,
        ];
        for (c, r) in consts.iter_mut().zip(ratios) {
            if r.is_finite() {
                *c = c.max(r);
            }
        }
    }
    Ok(names.iter().zip(consts).map(|(name, constant)| BoundConstant { name, constant }).collect())
}
