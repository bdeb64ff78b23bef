//! Norms and decay envelopes measured on trajectories: the adapted `N_T`
//! norm of the profile, dispersive and local decay of the free flow, the
//! high-frequency gain of Littlewood-Paley pieces, and fits of `‖φ(t)‖∞`
//! and `a₋(t)` against their expected envelopes.

use num_complex::Complex64;

use crate::cutoff::{adapted, littlewood_paley, time_partition};
use crate::error::{Error, Result};
use crate::grid::{jbracket, Grid};
use crate::quadrature::GaussLegendre;
use crate::NU;

/// `∂ξ f̂` by centred differences on the spectral lattice, one-sided at the ends.
pub fn xi_derivative(grid: &Grid, fhat: &[Complex64]) -> Result<Vec<Complex64>> {
    grid.check(fhat.len())?;
    let n = fhat.len();
    let h = grid.dxi();
    Ok((0..n)
        .map(|m| {
            if m == 0 {
                (fhat[1] - fhat[0]) / h
            } else if m == n - 1 {
                (fhat[n - 1] - fhat[n - 2]) / h
            } else {
                (fhat[m + 1] - fhat[m - 1]) / (2.0 * h)
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NtNorm {
    /// `‖⟨D⟩²f‖₂`.
    pub energy: f64,
    /// Sup over `(n, ℓ)` of `2^{-ℓ/2} τ_n(t) ‖φ_ℓ^{(n)} ⟨ξ⟩² ∂ξ f̂‖₂`.
    pub weighted: f64,
    /// `(n, ℓ)` attaining the sup.
    pub argmax: Option<(u32, u32)>,
    /// Finest annulus index the lattice resolves.
    pub resolved: u32,
    /// Set when some `n` had to be clamped to the resolved depth.
    pub clamped: bool,
}

impl NtNorm {
    pub fn total(&self) -> f64 {
        self.energy + self.weighted
    }
}

/// Finest `ℓ` whose annulus, of width `2^{-ℓ-s}`, still spans a lattice step.
pub fn resolved_depth(grid: &Grid, sharpness: f64) -> u32 {
    let l = (-grid.dxi().log2() - sharpness).floor();
    if l < 1.0 {
        1
    } else {
        l as u32
    }
}

/// The two-term norm entering the bootstrap, evaluated at a single time.
///
/// `fhat` is in ascending lattice order. Only `n ≤ n_max` with `τ_n(t) > 0`
/// enter. Families whose innermost annulus is finer than the lattice are
/// replaced by the family of the resolved depth. `l_cap` restricts the sup
/// to `ℓ ≤ l_cap`.
pub fn nt_norm(
    grid: &Grid,
    fhat: &[Complex64],
    t: f64,
    n_max: u32,
    sharpness: f64,
    l_cap: Option<u32>,
) -> Result<NtNorm> {
    let dfhat = xi_derivative(grid, fhat)?;
    let xis = grid.xis();
    let dxi = grid.dxi();
    let energy = (dxi * xis.iter().zip(fhat).map(|(&xi, f)| (1.0 + xi * xi).powi(2) * f.norm_sqr()).sum::<f64>()).sqrt();
    let weighted_sq: Vec<f64> = xis.iter().zip(&dfhat).map(|(&xi, d)| (1.0 + xi * xi).powi(2) * d.norm_sqr()).collect();
    let resolved = resolved_depth(grid, sharpness);
    let mut out = NtNorm { energy, weighted: 0.0, argmax: None, resolved, clamped: false };
    for n in 1..=n_max.max(1) {
        let tau = time_partition(n, t.max(0.0));
        if tau <= 0.0 {
            continue;
        }
        let fam = if n > resolved {
            if !out.clamped {
                log::warn!("annulus depth {n} below lattice resolution; using depth {resolved}");
            }
            out.clamped = true;
            resolved
        } else {
            n
        };
        let top = l_cap.map_or(fam, |c| c.min(fam));
        for l in 0..=top {
            let mut acc = 0.0;
            for (&xi, w) in xis.iter().zip(&weighted_sq) {
                let c = adapted(fam, l, xi, sharpness);
                if c != 0.0 {
                    acc += c * c * w;
                }
            }
            let v = 2f64.powf(-0.5 * l as f64) * tau * (acc * dxi).sqrt();
            if v > out.weighted {
                out.weighted = v;
                out.argmax = Some((n, l));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayModel {
    /// `y ≈ C ⟨t⟩^{-p}`.
    PurePower,
    /// `y ≈ C log(2+t) ⟨t⟩^{-p}`.
    PowerLog,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    pub window: (f64, f64),
    pub model: DecayModel,
    pub exponent: f64,
    pub constant: f64,
    /// RMS of the log residuals at the window maxima.
    pub residual: f64,
    pub points: usize,
}

/// Per dyadic window `[2^j, 2^{j+1}] ∩ window`, the frame with the largest `|y|`.
/// Frames with `t < 1` are ignored.
pub fn dyadic_maxima(ts: &[f64], ys: &[f64], window: (f64, f64)) -> Vec<(f64, f64)> {
    let lo = window.0.max(1.0);
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut cur: Option<(i32, f64, f64)> = None;
    for (&t, &y) in ts.iter().zip(ys) {
        if t < lo || t > window.1 || !y.is_finite() {
            continue;
        }
        let j = t.log2().floor() as i32;
        match cur {
            Some((cj, ct, cy)) if cj == j => {
                if y.abs() > cy {
                    cur = Some((j, t, y.abs()));
                } else {
                    cur = Some((cj, ct, cy));
                }
            }
            Some((_, ct, cy)) => {
                out.push((ct, cy));
                cur = Some((j, t, y.abs()));
            }
            None => cur = Some((j, t, y.abs())),
        }
    }
    if let Some((_, ct, cy)) = cur {
        out.push((ct, cy));
    }
    out
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icept = my - slope * mx;
    let rms = (xs.iter().zip(ys).map(|(x, y)| (y - icept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    (slope, icept, rms)
}

/// Regression of the dyadic maxima against the chosen envelope, exponent free.
pub fn fit_decay(ts: &[f64], ys: &[f64], window: (f64, f64), model: DecayModel) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = dyadic_maxima(ts, ys, window).into_iter().filter(|p| p.1 > 0.0).collect();
    if pts.len() < 2 {
        return Err(Error::Config(format!(
            "decay fit over [{}, {}] needs two nonempty dyadic windows, found {}",
            window.0,
            window.1,
            pts.len()
        )));
    }
    let xs: Vec<f64> = pts.iter().map(|p| jbracket(p.0).ln()).collect();
    let ls: Vec<f64> = pts
        .iter()
        .map(|&(t, y)| match model {
            DecayModel::PurePower => y.ln(),
            DecayModel::PowerLog => (y / (2.0 + t).ln()).ln(),
        })
        .collect();
    let (slope, icept, rms) = least_squares(&xs, &ls);
    Ok(DecayFit { window, model, exponent: -slope, constant: icept.exp(), residual: rms, points: pts.len() })
}

/// `sup_t ⟨t⟩^{1/2} ‖φ(t)‖∞ / (ε log(2+t))` over the frames in `window`
/// with `t ≥ 1`, reported as the constant of the `log(2+t)⟨t⟩^{-1/2}`
/// envelope.
pub fn linf_decay_ratio(ts: &[f64], linf: &[f64], eps: f64, window: (f64, f64)) -> DecayFit {
    let ratio = |t: f64, y: f64| jbracket(t).sqrt() * y / (eps * (2.0 + t).ln());
    let mut sup: f64 = 0.0;
    for (&t, &y) in ts.iter().zip(linf) {
        if t >= window.0.max(1.0) && t <= window.1 && eps > 0.0 {
            sup = sup.max(ratio(t, y));
        }
    }
    let pts = dyadic_maxima(ts, linf, window);
    let residual = if sup > 0.0 && !pts.is_empty() {
        (pts.iter().map(|&(t, y)| (ratio(t, y) / sup).ln().powi(2)).sum::<f64>() / pts.len() as f64).sqrt()
    } else {
        0.0
    };
    DecayFit { window, model: DecayModel::PowerLog, exponent: 0.5, constant: sup, residual, points: pts.len() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalDecayVariant {
    /// `‖⟨x⟩⁻¹ ∂x v‖_{H¹}`.
    Dx,
    /// `‖⟨x⟩⁻¹ (⟨D⟩ - 1) v‖_{H¹}`.
    JDMinus1,
}

fn weighted_h1(grid: &Grid, u: &[Complex64], a: f64) -> f64 {
    let w: Vec<Complex64> = u.iter().enumerate().map(|(j, z)| z * jbracket(grid.x(j)).powf(-a)).collect();
    let wx = grid.derivative_c(&w, 1);
    (grid.norm_l2_c(&w).powi(2) + grid.norm_l2_c(&wx).powi(2)).sqrt()
}

pub fn local_decay_norm(grid: &Grid, v: &[Complex64], variant: LocalDecayVariant) -> Result<f64> {
    let u = match variant {
        LocalDecayVariant::Dx => grid.apply_multiplier(|xi| Complex64::new(0.0, xi), v)?,
        LocalDecayVariant::JDMinus1 => grid.apply_multiplier(|xi| Complex64::new(jbracket(xi) - 1.0, 0.0), v)?,
    };
    Ok(weighted_h1(grid, &u, 1.0))
}

/// `‖⟨x⟩^{-a} ∂x ⟨D⟩⁻¹ e^{it⟨D⟩} f‖₂`.
pub fn improved_local_decay(grid: &Grid, f: &[Complex64], t: f64, a: f64) -> Result<f64> {
    let u = grid.apply_multiplier(|xi| Complex64::from_polar(xi / jbracket(xi), t * jbracket(xi) + 0.5 * std::f64::consts::PI), f)?;
    let w: Vec<Complex64> = u.iter().enumerate().map(|(j, z)| z * jbracket(grid.x(j)).powf(-a)).collect();
    Ok(grid.norm_l2_c(&w))
}

/// `e^{it⟨D⟩}` applied on the lattice to a transform given in ascending order.
pub fn free_evolution_grid(grid: &Grid, fhat: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    let rotated: Vec<Complex64> = grid
        .xis()
        .iter()
        .zip(fhat)
        .map(|(&xi, f)| f * Complex64::from_polar(1.0, t * jbracket(xi)))
        .collect();
    grid.inverse_ft(&rotated)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AMinusEnvelope {
    pub early_window: (f64, f64),
    pub late_window: (f64, f64),
    /// Least-squares slope of `log|a₋|` over the early window.
    pub early_slope: f64,
    /// `sup |a₋| e^{νt} / ε` over the early window.
    pub c1: f64,
    /// `sup |a₋| ⟨t⟩ / (ε² log²(2+t))` over the late window.
    pub c2: f64,
}

/// Constants of `|a₋(t)| ≤ C₁ e^{-νt} ε + C₂ ⟨t⟩⁻¹ log²(2+t) ε²`.
pub fn a_minus_envelope(
    ts: &[f64],
    a_minus: &[f64],
    eps: f64,
    early: (f64, f64),
    late: (f64, f64),
) -> Result<AMinusEnvelope> {
    let (mut xs, mut ls) = (Vec::new(), Vec::new());
    let (mut c1, mut c2): (f64, f64) = (0.0, 0.0);
    for (&t, &a) in ts.iter().zip(a_minus) {
        if t >= early.0 && t <= early.1 {
            c1 = c1.max(a.abs() * (NU * t).exp() / eps);
            if a != 0.0 {
                xs.push(t);
                ls.push(a.abs().ln());
            }
        }
        if t >= late.0 && t <= late.1 {
            c2 = c2.max(a.abs() * jbracket(t) / (eps * eps * (2.0 + t).ln().powi(2)));
        }
    }
    if xs.len() < 2 {
        return Err(Error::Config(format!("early window [{}, {}] holds fewer than two frames", early.0, early.1)));
    }
    let (slope, _, _) = least_squares(&xs, &ls);
    Ok(AMinusEnvelope { early_window: early, late_window: late, early_slope: slope, c1, c2 })
}

/// `(e^{it⟨D⟩}f)(x)` by Gauss-Legendre quadrature of the oscillatory integral
/// over `[a, b]`, with enough panels for the total phase variation.
pub fn free_evolution_at<F>(fhat: F, a: f64, b: f64, t: f64, x: f64, gl: &GaussLegendre) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let psi = |xi: f64| x * xi + t * jbracket(xi);
    // ψ is convex in ξ for t > 0; its stationary point splits the variation.
    let s = if t > 0.0 && x.abs() < t { -x / (t * t - x * x).sqrt() } else if x < 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    let s = s.clamp(a, b);
    let tv = (psi(s) - psi(a)).abs() + (psi(b) - psi(s)).abs();
    let panels = (tv / std::f64::consts::PI).ceil() as usize + 8;
    let val: Complex64 = gl.integrate(|xi| fhat(xi) * Complex64::from_polar(1.0, psi(xi)), a, b, panels);
    val / (2.0 * std::f64::consts::PI).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PkGain {
    pub k: i32,
    pub t: f64,
    /// `‖e^{it⟨D⟩} P_k f‖∞`, maximised over stationary rays.
    pub sup: f64,
    /// `‖⟨D⟩²f‖₂ + ‖⟨ξ⟩² ∂ξ f̂‖₂`.
    pub norm: f64,
}

impl PkGain {
    /// `2^{k/2} t^{1/2} sup / norm`; flat in `k` when the gain is `2^{-k/2}`.
    pub fn scaled(&self) -> f64 {
        2f64.powf(0.5 * self.k as f64) * self.t.sqrt() * self.sup / self.norm
    }
}

/// Sup of the free flow of the Littlewood-Paley piece `P_k f` for the
/// packet `f̂(ξ) = exp(-(ξ - 2^k)²/2)`, searched along the rays
/// `x = -tξ/⟨ξ⟩` near the packet centre.
pub fn pk_gain(k: i32, t: f64) -> PkGain {
    let xi0 = 2f64.powi(k);
    let packet = |xi: f64| (-0.5 * (xi - xi0).powi(2)).exp();
    let gl = GaussLegendre::new(16);
    let (a, b) = ((xi0 / 2.0).max(xi0 - 9.0), (2.0 * xi0).min(xi0 + 9.0));
    let piece = |xi: f64| Complex64::new(littlewood_paley(k, xi) * packet(xi), 0.0);
    let at_ray = |s: f64| free_evolution_at(piece, a, b, t, -t * s / jbracket(s), &gl).norm();
    let mut best = (xi0, 0.0);
    for j in -10..=10 {
        let s = xi0 + 0.1 * j as f64;
        let v = at_ray(s);
        if v > best.1 {
            best = (s, v);
        }
    }
    let centre = best.0;
    for j in -10..=10 {
        let s = centre + 0.01 * j as f64;
        let v = at_ray(s);
        if v > best.1 {
            best = (s, v);
        }
    }
    let (lo, hi) = (xi0 - 12.0, xi0 + 12.0);
    let e2: f64 = gl.integrate(|xi| (1.0 + xi * xi).powi(2) * packet(xi).powi(2), lo, hi, 64);
    let d2: f64 = gl.integrate(|xi| (1.0 + xi * xi).powi(2) * ((xi - xi0) * packet(xi)).powi(2), lo, hi, 64);
    PkGain { k, t, sup: best.1, norm: e2.sqrt() + d2.sqrt() }
}
