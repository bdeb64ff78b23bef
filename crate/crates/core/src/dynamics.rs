//! Time evolution of even perturbations `φ = u - Q`, which solve
//! `(∂t² + L)φ = 3Qφ² + φ³`.
//!
//! The flat part `-∂² + 1` is propagated exactly in Fourier space; the
//! potential and the nonlinearity are treated pointwise, either by Strang
//! splitting (kick-drift-kick) or by ETDRK4 on the first-order variable
//! `W = Û - i⟨ξ⟩⁻¹ V̂`.

use num_complex::Complex64;

use crate::darboux::{d1d2, Inverses};
use crate::error::{Error, Result};
use crate::grid::{jbracket, norm_inf, Grid};
use crate::poschl_teller::SolitonFrame;
use crate::NU;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    Strang,
    Etdrk4,
}

/// Which terms of the right-hand side are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Potential and nonlinearity.
    Full,
    /// Potential only.
    Linearized,
    /// Neither: the flat Klein-Gordon flow.
    Free,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub length: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    pub output_stride: usize,
    pub dealias: bool,
    pub model: Model,
}

/// Room left on each side for the initial data in the box-size rule.
pub const SUPPORT_MARGIN: f64 = 40.0;

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("solver.dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Config(format!("solver.t_end must be nonnegative, got {}", self.t_end)));
        }
        if self.output_stride == 0 {
            return Err(Error::Config("output.stride must be at least 1".into()));
        }
        let need = 2.0 * self.t_end + SUPPORT_MARGIN;
        if self.length < need {
            return Err(Error::Config(format!(
                "box rule L >= 2 t_end + {SUPPORT_MARGIN} violated: L = {}, t_end = {} needs L >= {need}",
                self.length, self.t_end
            )));
        }
        Grid::new(self.length, self.n).map(|_| ())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub phi: Vec<f64>,
    pub phi_t: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Modes {
    pub a: f64,
    pub a_dot: f64,
    pub a_plus: f64,
    pub a_minus: f64,
}

pub fn modes(frame: &SolitonFrame, state: &SimState) -> Modes {
    let a = frame.grid().inner(&frame.y0, &state.phi);
    let a_dot = frame.grid().inner(&frame.y0, &state.phi_t);
    let a_plus = 0.5 * (a + a_dot / NU);
    Modes { a, a_dot, a_plus, a_minus: a - a_plus }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitReport {
    /// `⟨Y₀, νφ₀ + φ₁⟩` of the supplied data.
    pub orthogonality_defect: f64,
    /// Amount of `Y₀` removed from `φ₁` to restore orthogonality.
    pub correction: f64,
}

/// `(φ, φ_t)(0) = (φ₀ + dY₀, φ₁ + dνY₀)`.
pub fn make_initial_state(
    frame: &SolitonFrame,
    phi0: &[f64],
    phi1: &[f64],
    d: f64,
    auto_project: bool,
) -> Result<(SimState, InitReport)> {
    let grid = frame.grid();
    grid.check(phi0.len())?;
    grid.check(phi1.len())?;
    for (name, u) in [("phi0", phi0), ("phi1", phi1)] {
        let odd = grid.odd_part(u);
        if odd > 1e-10 * norm_inf(u).max(1e-300) && odd > 1e-14 {
            return Err(Error::InitialData(format!("{name} is not even (odd part {odd:.3e})")));
        }
    }
    let defect = NU * grid.inner(&frame.y0, phi0) + grid.inner(&frame.y0, phi1);
    let mut phi1 = phi1.to_vec();
    let mut correction = 0.0;
    if defect.abs() > 1e-6 {
        if !auto_project {
            return Err(Error::InitialData(format!(
                "orthogonality <Y0, nu phi0 + phi1> = {defect:.3e} exceeds 1e-6"
            )));
        }
        correction = defect;
    }
    if correction != 0.0 {
        for (p, y) in phi1.iter_mut().zip(&frame.y0) {
            *p -= correction * y;
        }
    }
    let phi: Vec<f64> = phi0.iter().zip(&frame.y0).map(|(p, y)| p + d * y).collect();
    let phi_t: Vec<f64> = phi1.iter().zip(&frame.y0).map(|(p, y)| p + d * NU * y).collect();
    Ok((SimState { t: 0.0, phi, phi_t }, InitReport { orthogonality_defect: defect, correction }))
}

/// Right-hand side `6 sech² φ + 3Qφ² + φ³` (or the part kept by the model).
pub fn forcing_field(frame: &SolitonFrame, model: Model, phi: &[f64], out: &mut [f64]) {
    match model {
        Model::Free => out.iter_mut().for_each(|o| *o = 0.0),
        Model::Linearized => {
            for ((o, p), s) in out.iter_mut().zip(phi).zip(&frame.sech2) {
                *o = 6.0 * s * p;
            }
        }
        Model::Full => {
            for (((o, p), s), q) in out.iter_mut().zip(phi).zip(&frame.sech2).zip(&frame.q) {
                *o = 6.0 * s * p + p * p * (3.0 * q + p);
            }
        }
    }
}

/// `3Qφ² + φ³`, or zero when the nonlinearity is switched off.
pub fn nonlinearity(frame: &SolitonFrame, model: Model, phi: &[f64]) -> Vec<f64> {
    match model {
        Model::Full => phi.iter().zip(&frame.q).map(|(p, q)| p * p * (3.0 * q + p)).collect(),
        _ => vec![0.0; phi.len()],
    }
}

/// `E = ∫ ½Φ_t² + ½Φ_x² + ½Φ² - ¼Φ⁴` for `Φ = Q + φ`.
pub fn energy(frame: &SolitonFrame, state: &SimState) -> f64 {
    let grid = frame.grid();
    let phi_x = grid.derivative(&state.phi, 1);
    let mut acc = 0.0;
    for j in 0..grid.len() {
        let u = frame.q[j] + state.phi[j];
        let ux = -frame.q[j] * frame.k[j] + phi_x[j];
        let ut = state.phi_t[j];
        acc += 0.5 * ut * ut + 0.5 * ux * ux + 0.5 * u * u - 0.25 * u.powi(4);
    }
    acc * grid.dx()
}

/// `|∂t a₊ - ν a₊ - (2ν)⁻¹⟨Y₀, 3Qφ² + φ³⟩|` between two frames, midpoint rule.
pub fn ode_residual_aplus(frame: &SolitonFrame, model: Model, s1: &SimState, s2: &SimState) -> f64 {
    let grid = frame.grid();
    let (m1, m2) = (modes(frame, s1), modes(frame, s2));
    let h = s2.t - s1.t;
    if h == 0.0 {
        return 0.0;
    }
    let f1 = grid.inner(&frame.y0, &nonlinearity(frame, model, &s1.phi));
    let f2 = grid.inner(&frame.y0, &nonlinearity(frame, model, &s2.phi));
    let lhs = (m2.a_plus - m1.a_plus) / h;
    (lhs - NU * 0.5 * (m1.a_plus + m2.a_plus) - 0.25 * (f1 + f2) / NU).abs()
}

#[derive(Clone, Debug)]
pub struct Transformed {
    pub w: Vec<f64>,
    pub w_t: Vec<f64>,
    pub v: Vec<Complex64>,
    pub f: Vec<Complex64>,
    /// `‖P_cφ - P_c𝒥[w]‖∞`.
    pub pc_residual: f64,
}

/// `w = 𝒟₁𝒟₂P_cφ`, `v = ½(w - i⟨D⟩⁻¹w_t)`, `f = e^{-it⟨D⟩}v`.
pub fn derive_transformed(inv: &Inverses<'_>, frame: &SolitonFrame, state: &SimState) -> Result<Transformed> {
    let grid = frame.grid();
    let pc = frame.project_pc(&state.phi)?;
    let w = d1d2(frame, &pc)?;
    let w_t = d1d2(frame, &frame.project_pc(&state.phi_t)?)?;
    let wt_c: Vec<Complex64> = w_t.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let inv_d = grid.apply_multiplier(|xi| Complex64::new(1.0 / jbracket(xi), 0.0), &wt_c)?;
    let v: Vec<Complex64> = w
        .iter()
        .zip(&inv_d)
        .map(|(w, d)| 0.5 * (Complex64::new(*w, 0.0) - Complex64::new(0.0, 1.0) * d))
        .collect();
    let t = state.t;
    let f = grid.apply_multiplier(|xi| Complex64::from_polar(1.0, -t * jbracket(xi)), &v)?;
    let back = frame.project_pc(&inv.j(&w)?)?;
    let pc_residual = crate::grid::max_diff(&pc, &back);
    Ok(Transformed { w, w_t, v, f, pc_residual })
}

/// Residual of `∂t w_t = (∂² - 1)w + 𝒟₁𝒟₂ P_c(3Qφ² + φ³)` at the middle of three
/// equally spaced frames, with `∂t w_t` by central differences.
pub fn flat_equation_residual(
    frame: &SolitonFrame,
    model: Model,
    prev: &SimState,
    cur: &SimState,
    next: &SimState,
) -> Result<f64> {
    let grid = frame.grid();
    let h = 0.5 * (next.t - prev.t);
    let wt = |s: &SimState| -> Result<Vec<f64>> { d1d2(frame, &frame.project_pc(&s.phi_t)?) };
    let (a, b) = (wt(prev)?, wt(next)?);
    let w = d1d2(frame, &frame.project_pc(&cur.phi)?)?;
    let wxx = grid.derivative(&w, 2);
    let src = d1d2(frame, &frame.project_pc(&nonlinearity(frame, model, &cur.phi))?)?;
    let mut worst: f64 = 0.0;
    for j in 0..grid.len() {
        let lhs = (b[j] - a[j]) / (2.0 * h);
        let rhs = wxx[j] - w[j] + src[j];
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

struct Etd {
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

impl Etd {
    fn new(omega: &[f64], dt: f64) -> Self {
        const M: usize = 64;
        let roots: Vec<Complex64> = (0..M)
            .map(|j| Complex64::from_polar(1.0, std::f64::consts::PI * (j as f64 + 0.5) / M as f64 * 2.0))
            .collect();
        let n = omega.len();
        let mut s = Self {
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for &w in omega {
            let c = Complex64::new(0.0, w * dt);
            s.e.push(c.exp());
            s.e2.push((c * 0.5).exp());
            let (mut q, mut f1, mut f2, mut f3) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
            for r in &roots {
                let z = c + r;
                let ez = z.exp();
                let z3 = z * z * z;
                q += ((z * 0.5).exp() - 1.0) / z;
                f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
                f2 += (2.0 + z + ez * (z - 2.0)) / z3;
                f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
            }
            let k = dt / M as f64;
            s.q.push(q * k);
            s.f1.push(f1 * k);
            s.f2.push(f2 * k);
            s.f3.push(f3 * k);
        }
        s
    }
}

/// Outcome of [`Simulator::run`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunEnd {
    Completed,
    Stopped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

pub struct Simulator {
    frame: SolitonFrame,
    cfg: SolverConfig,
    omega: Vec<f64>,
    keep: Vec<bool>,
    rot: Vec<(f64, f64, f64)>,
    etd: Option<Etd>,
    zbuf: Vec<Complex64>,
    scratch: Vec<Complex64>,
    force: Vec<f64>,
}

impl Simulator {
    pub fn new(frame: &SolitonFrame, cfg: SolverConfig) -> Result<Self> {
        let grid = frame.grid();
        if grid.len() != cfg.n || (grid.length() - cfg.length).abs() > 1e-12 * cfg.length {
            return Err(Error::Config("solver grid does not match the soliton frame".into()));
        }
        if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
            return Err(Error::Config(format!("solver.dt must be positive, got {}", cfg.dt)));
        }
        let n = grid.len();
        let omega: Vec<f64> = grid.xi_natural().iter().map(|&xi| jbracket(xi)).collect();
        let cut = n as f64 / 3.0;
        let keep = (0..n)
            .map(|i| {
                let k = if i <= n / 2 { i as f64 } else { (n - i) as f64 };
                !cfg.dealias || k <= cut
            })
            .collect();
        let rot = omega
            .iter()
            .map(|&w| {
                let (s, c) = (w * cfg.dt).sin_cos();
                (c, s / w, -w * s)
            })
            .collect();
        let etd = (cfg.integrator == Integrator::Etdrk4).then(|| Etd::new(&omega, cfg.dt));
        let scratch = vec![Complex64::default(); grid.scratch_len()];
        Ok(Self {
            frame: frame.clone(),
            omega,
            keep,
            rot,
            etd,
            zbuf: vec![Complex64::default(); n],
            scratch,
            force: vec![0.0; n],
            cfg,
        })
    }

    pub fn frame(&self) -> &SolitonFrame {
        &self.frame
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    fn kick(&mut self, phi: &[f64], phi_t: &mut [f64], h: f64) {
        forcing_field(&self.frame, self.cfg.model, phi, &mut self.force);
        for (v, f) in phi_t.iter_mut().zip(&self.force) {
            *v += h * f;
        }
    }

    fn drift(&mut self, phi: &mut [f64], phi_t: &mut [f64]) {
        let n = phi.len();
        let grid = self.frame.grid().clone();
        for ((z, p), v) in self.zbuf.iter_mut().zip(phi.iter()).zip(phi_t.iter()) {
            *z = Complex64::new(*p, *v);
        }
        grid.fft_raw_with_scratch(&mut self.zbuf, &mut self.scratch);
        let i = Complex64::new(0.0, 1.0);
        let inv_n = 1.0 / n as f64;
        for a in 0..=n / 2 {
            let b = (n - a) % n;
            let (za, zb) = (self.zbuf[a], self.zbuf[b]);
            let u = 0.5 * (za + zb.conj());
            let v = -0.5 * i * (za - zb.conj());
            let (c, s_over_w, mws) = self.rot[a];
            let (mut u2, mut v2) = (c * u + s_over_w * v, mws * u + c * v);
            if !self.keep[a] {
                u2 = Complex64::default();
                v2 = Complex64::default();
            }
            self.zbuf[a] = (u2 + i * v2) * inv_n;
            if b != a {
                self.zbuf[b] = (u2.conj() + i * v2.conj()) * inv_n;
            }
        }
        grid.ifft_raw_with_scratch(&mut self.zbuf, &mut self.scratch);
        for ((z, p), v) in self.zbuf.iter().zip(phi.iter_mut()).zip(phi_t.iter_mut()) {
            *p = z.re;
            *v = z.im;
        }
    }

    fn step_strang(&mut self, phi: &mut [f64], phi_t: &mut [f64]) {
        let h = 0.5 * self.cfg.dt;
        self.kick(phi, phi_t, h);
        self.drift(phi, phi_t);
        self.kick(phi, phi_t, h);
    }

    // F(W) = -i N̂(u) / ω with u recovered from W.
    fn etd_rhs(&mut self, w: &[Complex64], out: &mut [Complex64]) {
        let n = w.len();
        let grid = self.frame.grid().clone();
        for a in 0..n {
            let b = (n - a) % n;
            self.zbuf[a] = 0.5 * (w[a] + w[b].conj()) / n as f64;
        }
        grid.ifft_raw_with_scratch(&mut self.zbuf, &mut self.scratch);
        let u: Vec<f64> = self.zbuf.iter().map(|z| z.re).collect();
        forcing_field(&self.frame, self.cfg.model, &u, &mut self.force);
        for (z, f) in self.zbuf.iter_mut().zip(&self.force) {
            *z = Complex64::new(*f, 0.0);
        }
        grid.fft_raw_with_scratch(&mut self.zbuf, &mut self.scratch);
        let mi = Complex64::new(0.0, -1.0);
        for a in 0..n {
            out[a] = if self.keep[a] { mi * self.zbuf[a] / self.omega[a] } else { Complex64::default() };
        }
    }

    fn step_etdrk4(&mut self, phi: &mut [f64], phi_t: &mut [f64]) {
        let n = phi.len();
        let grid = self.frame.grid().clone();
        let i = Complex64::new(0.0, 1.0);
        for ((z, p), v) in self.zbuf.iter_mut().zip(phi.iter()).zip(phi_t.iter()) {
            *z = Complex64::new(*p, *v);
        }
        grid.fft_raw_with_scratch(&mut self.zbuf, &mut self.scratch);
        let mut w = vec![Complex64::default(); n];
        for a in 0..n {
            let b = (n - a) % n;
            let u = 0.5 * (self.zbuf[a] + self.zbuf[b].conj());
            let v = -0.5 * i * (self.zbuf[a] - self.zbuf[b].conj());
            w[a] = if self.keep[a] { u - i * v / self.omega[a] } else { Complex64::default() };
        }
        let etd = self.etd.take().expect("ETDRK4 coefficients");
        let mut nv = vec![Complex64::default(); n];
        let mut na = nv.clone();
        let mut nb = nv.clone();
        let mut nc = nv.clone();
        self.etd_rhs(&w, &mut nv);
        let a: Vec<Complex64> = (0..n).map(|k| etd.e2[k] * w[k] + etd.q[k] * nv[k]).collect();
        self.etd_rhs(&a, &mut na);
        let b: Vec<Complex64> = (0..n).map(|k| etd.e2[k] * w[k] + etd.q[k] * na[k]).collect();
        self.etd_rhs(&b, &mut nb);
        let c: Vec<Complex64> = (0..n).map(|k| etd.e2[k] * a[k] + etd.q[k] * (2.0 * nb[k] - nv[k])).collect();
        self.etd_rhs(&c, &mut nc);
        for k in 0..n {
            w[k] = etd.e[k] * w[k] + etd.f1[k] * nv[k] + 2.0 * etd.f2[k] * (na[k] + nb[k]) + etd.f3[k] * nc[k];
        }
        self.etd = Some(etd);
        for a in 0..n {
            let b = (n - a) % n;
            let u = 0.5 * (w[a] + w[b].conj());
            let v = 0.5 * i * self.omega[a] * (w[a] - w[b].conj());
            self.zbuf[a] = (u + i * v) / n as f64;
        }
        grid.ifft_raw_with_scratch(&mut self.zbuf, &mut self.scratch);
        for ((z, p), v) in self.zbuf.iter().zip(phi.iter_mut()).zip(phi_t.iter_mut()) {
            *p = z.re;
            *v = z.im;
        }
    }

    /// Advances by one step. On a non-finite result the state is left
    /// untouched and an error is returned.
    pub fn step(&mut self, state: &mut SimState) -> Result<()> {
        let mut phi = state.phi.clone();
        let mut phi_t = state.phi_t.clone();
        match self.cfg.integrator {
            Integrator::Strang => self.step_strang(&mut phi, &mut phi_t),
            Integrator::Etdrk4 => self.step_etdrk4(&mut phi, &mut phi_t),
        }
        if phi.iter().chain(&phi_t).any(|v| !v.is_finite()) {
            return Err(Error::Solver { t: state.t, reason: "non-finite field after step".into() });
        }
        state.phi = phi;
        state.phi_t = phi_t;
        Ok(())
    }

    /// Steps from `state.t` to `t_end`, calling `observe` on the initial state
    /// and after every step. Times are `t0 + k dt` to avoid drift.
    pub fn run<F>(&mut self, state: &mut SimState, t_end: f64, mut observe: F) -> Result<RunEnd>
    where
        F: FnMut(&SimState) -> Control,
    {
        let t0 = state.t;
        let steps = ((t_end - t0) / self.cfg.dt - 1e-9).ceil().max(0.0) as usize;
        if observe(state) == Control::Stop {
            return Ok(RunEnd::Stopped);
        }
        for k in 1..=steps {
            self.step(state)?;
            state.t = t0 + k as f64 * self.cfg.dt;
            if observe(state) == Control::Stop {
                return Ok(RunEnd::Stopped);
            }
        }
        Ok(RunEnd::Completed)
    }
}
