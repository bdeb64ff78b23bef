//! Selection of the unstable coefficient `d` by bisection on the exit side
//! of the trapping functional `⟨t⟩ log(2+t)⁻² |a₊(t)|`.
//!
//! A single bisection on `d` stalls once the bracket reaches the rounding
//! floor of the state, after roughly `log(1/eps_mach)/ν` time units. Longer
//! horizons are reached in segments: from a checkpoint shortly before the
//! best probe exited, a further kick `δ(Y₀, νY₀)` is selected by the same
//! bisection, and so on until the goal time is reached.

use crate::dynamics::{modes, Control, SimState, Simulator};
use crate::error::{Error, Result};
use crate::grid::{jbracket, norm_inf};
use crate::NU;

/// `(log 2)⁻² ε^{3/2}`, the bound on the trapping functional.
pub fn threshold_constant(eps: f64) -> f64 {
    eps.powf(1.5) / std::f64::consts::LN_2.powi(2)
}

/// Largest admissible `|a₊(t)|`.
pub fn threshold(eps: f64, t: f64) -> f64 {
    threshold_constant(eps) * (2.0 + t).ln().powi(2) / jbracket(t)
}

/// `⟨t⟩ log(2+t)⁻² |a₊|`.
pub fn trapping_functional(t: f64, a_plus: f64) -> f64 {
    jbracket(t) * a_plus.abs() / (2.0 + t).ln().powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitSide {
    Plus,
    Minus,
}

impl ExitSide {
    fn of(a: f64) -> Self {
        if a >= 0.0 {
            ExitSide::Plus
        } else {
            ExitSide::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            ExitSide::Plus => '+',
            ExitSide::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exit {
    pub t: f64,
    pub side: ExitSide,
}

/// First crossing of the trapping bound, linearly interpolated between frames.
pub fn trapping_violation_time(ts: &[f64], a_plus: &[f64], eps: f64) -> Option<Exit> {
    let c = threshold_constant(eps);
    let g = |i: usize| trapping_functional(ts[i], a_plus[i]) - c;
    let i = (0..ts.len().min(a_plus.len())).find(|&i| g(i) >= 0.0)?;
    let t = if i == 0 {
        ts[0]
    } else {
        let (g0, g1) = (g(i - 1), g(i));
        ts[i - 1] + (ts[i] - ts[i - 1]) * (-g0) / (g1 - g0)
    };
    Some(Exit { t, side: ExitSide::of(a_plus[i]) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outgoing {
    Holds,
    Fails,
    NotApplicable,
}

/// `∂t(a₊²) ≥ ν a₊²` at the frame nearest to `t_exit`, by finite differences.
pub fn outgoing_check(ts: &[f64], a_plus: &[f64], t_exit: f64) -> Outgoing {
    let n = ts.len().min(a_plus.len());
    if n < 2 {
        return Outgoing::NotApplicable;
    }
    let j = (0..n)
        .min_by(|&p, &q| (ts[p] - t_exit).abs().total_cmp(&(ts[q] - t_exit).abs()))
        .unwrap_or(0);
    let sq = |i: usize| a_plus[i] * a_plus[i];
    if sq(j) == 0.0 {
        return Outgoing::NotApplicable;
    }
    let (p, q) = if j == 0 {
        (0, 1)
    } else if j == n - 1 {
        (n - 2, n - 1)
    } else {
        (j - 1, j + 1)
    };
    let deriv = (sq(q) - sq(p)) / (ts[q] - ts[p]);
    if deriv >= NU * sq(j) {
        Outgoing::Holds
    } else {
        Outgoing::Fails
    }
}

#[derive(Clone, Debug)]
pub struct ShootConfig {
    pub eps: f64,
    pub t_goal: f64,
    /// Bisection steps per segment.
    pub max_iter: usize,
    /// Replaces `±(log 2)⁻² ε^{3/2}` for the first segment.
    pub bracket: Option<(f64, f64)>,
    /// Checkpoint distance before the best exit time of a segment.
    pub margin: f64,
    /// Half width of the kick bracket in later segments before widening.
    pub refine_width: f64,
    /// Time a probe keeps running after its exit, for the growth fit.
    pub post_exit: f64,
    /// Probes stop early once `|a₊|` reaches this.
    pub amplitude_cap: f64,
    pub max_segments: usize,
}

impl ShootConfig {
    pub fn new(eps: f64, t_goal: f64) -> Self {
        Self {
            eps,
            t_goal,
            max_iter: 64,
            bracket: None,
            margin: 5.0,
            refine_width: 1e-7,
            post_exit: 1.0,
            amplitude_cap: 0.2,
            max_segments: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::Config(format!("data.eps must be positive, got {}", self.eps)));
        }
        if !(self.t_goal.is_finite() && self.t_goal > 0.0) {
            return Err(Error::Config(format!("shoot.t_goal must be positive, got {}", self.t_goal)));
        }
        if let Some((lo, hi)) = self.bracket {
            if !(lo < hi) {
                return Err(Error::Config(format!("shoot.bracket needs lo < hi, got [{lo}, {hi}]")));
            }
        }
        if self.max_iter == 0 || self.max_segments == 0 {
            return Err(Error::Config("shoot.max_iter and shoot.max_segments must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRecord {
    pub segment: usize,
    /// Initial `d` in segment 0, the checkpoint kick `δ` afterwards.
    pub d: f64,
    pub exit: Option<Exit>,
    pub outgoing: Outgoing,
    /// Slope of `log|a₊|` after the exit.
    pub growth_rate: Option<f64>,
}

impl ProbeRecord {
    pub fn survival(&self, t_goal: f64) -> f64 {
        self.exit.map_or(t_goal, |e| e.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kick {
    pub t: f64,
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketStage {
    pub segment: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug)]
pub struct ShootingResult {
    pub eps: f64,
    pub t_goal: f64,
    pub d_star: f64,
    /// Kicks along the shot trajectory; the first is `(0, d_star)`.
    pub kicks: Vec<Kick>,
    pub bracket_history: Vec<BracketStage>,
    pub probes: Vec<ProbeRecord>,
    /// Survival time of the best trajectory found.
    pub survival: f64,
    pub reached_goal: bool,
    pub final_bracket: (f64, f64),
    /// Bisection steps whose midpoint outlived the shorter-lived endpoint,
    /// out of all bisection steps.
    pub interior_steps: (usize, usize),
    /// State at the start of the last segment, before its kick.
    pub last_start: SimState,
}

impl ShootingResult {
    pub fn final_width(&self) -> f64 {
        self.final_bracket.1 - self.final_bracket.0
    }
}

fn kicked(frame_y0: &[f64], state: &SimState, delta: f64) -> SimState {
    let mut s = state.clone();
    for ((p, v), y) in s.phi.iter_mut().zip(s.phi_t.iter_mut()).zip(frame_y0) {
        *p += delta * y;
        *v += delta * NU * y;
    }
    s
}

/// Runs one probe from `start` with kick `delta` until shortly after its exit
/// or until `t_goal`.
pub fn run_probe(sim: &mut Simulator, start: &SimState, delta: f64, cfg: &ShootConfig, segment: usize) -> Result<ProbeRecord> {
    let frame = sim.frame().clone();
    let mut state = kicked(&frame.y0, start, delta);
    let c = threshold_constant(cfg.eps);
    let (mut ts, mut ap) = (Vec::new(), Vec::new());
    let mut crossed: Option<f64> = None;
    sim.run(&mut state, cfg.t_goal, |s| {
        let a = modes(&frame, s).a_plus;
        ts.push(s.t);
        ap.push(a);
        if crossed.is_none() && trapping_functional(s.t, a) >= c {
            crossed = Some(s.t);
        }
        match crossed {
            Some(t0) if s.t >= t0 + cfg.post_exit || a.abs() >= cfg.amplitude_cap => Control::Stop,
            _ => Control::Continue,
        }
    })?;
    let exit = trapping_violation_time(&ts, &ap, cfg.eps);
    let (outgoing, growth_rate) = match exit {
        Some(e) => (outgoing_check(&ts, &ap, e.t), growth_after(&ts, &ap, e.t)),
        None => (Outgoing::NotApplicable, None),
    };
    Ok(ProbeRecord { segment, d: delta, exit, outgoing, growth_rate })
}

fn growth_after(ts: &[f64], ap: &[f64], t_exit: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(ap)
        .filter(|(t, a)| **t >= t_exit && **a != 0.0)
        .map(|(t, a)| (*t, a.abs().ln()))
        .collect();
    if pts.len() < 3 || pts[pts.len() - 1].0 - pts[0].0 < 0.25 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - ml)).sum();
    Some(sxy / sxx)
}

fn describe(r: &ProbeRecord) -> String {
    match r.exit {
        Some(e) => format!("d = {:e} exits {} at T = {:.3}", r.d, e.side.symbol(), e.t),
        None => format!("d = {:e} survives", r.d),
    }
}

/// Bisection on the exit side, segment by segment, until a probe survives to
/// `t_goal`, the bracket reaches the rounding floor without further progress,
/// or the segment budget is spent.
pub fn shoot(sim: &mut Simulator, base: &SimState, cfg: &ShootConfig) -> Result<ShootingResult> {
    cfg.validate()?;
    let y0 = sim.frame().y0.clone();
    let bound = threshold_constant(cfg.eps);
    let (mut lo, mut hi) = cfg.bracket.unwrap_or((-bound, bound));
    let mut start = base.clone();
    let mut probes: Vec<ProbeRecord> = Vec::new();
    let mut history = Vec::new();
    let mut kicks: Vec<Kick> = Vec::new();
    let mut interior = (0usize, 0usize);
    let mut reached = false;
    let mut best_overall = start.t;

    for segment in 0..cfg.max_segments {
        let mut rlo = run_probe(sim, &start, lo, cfg, segment)?;
        let mut rhi = run_probe(sim, &start, hi, cfg, segment)?;
        loop {
            let sides = (rlo.exit.map(|e| e.side), rhi.exit.map(|e| e.side));
            match sides {
                (Some(a), Some(b)) if a == b => {
                    let width = hi - lo;
                    if segment == 0 || width >= 2.0 * bound {
                        return Err(Error::NoSignChange(format!("{}; {}", describe(&rlo), describe(&rhi))));
                    }
                    probes.push(rlo.clone());
                    probes.push(rhi.clone());
                    let mid = 0.5 * (lo + hi);
                    lo = mid - 4.0 * width;
                    hi = mid + 4.0 * width;
                    rlo = run_probe(sim, &start, lo, cfg, segment)?;
                    rhi = run_probe(sim, &start, hi, cfg, segment)?;
                }
                _ => break,
            }
        }
        history.push(BracketStage { segment, lo, hi });
        let side_lo = rlo.exit.map(|e| e.side);
        let mut best = if rlo.survival(cfg.t_goal) >= rhi.survival(cfg.t_goal) { rlo.clone() } else { rhi.clone() };
        let (mut t_lo, mut t_hi) = (rlo.survival(cfg.t_goal), rhi.survival(cfg.t_goal));
        probes.push(rlo);
        probes.push(rhi);
        let floor = 8.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(norm_inf(&start.phi));
        if best.exit.is_some() {
            for _ in 0..cfg.max_iter {
                if hi - lo <= floor {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let r = run_probe(sim, &start, mid, cfg, segment)?;
                let tm = r.survival(cfg.t_goal);
                interior.1 += 1;
                if tm >= t_lo.min(t_hi) {
                    interior.0 += 1;
                }
                if tm >= best.survival(cfg.t_goal) {
                    best = r.clone();
                }
                let exit = r.exit;
                probes.push(r);
                match exit {
                    None => break,
                    Some(e) if Some(e.side) == side_lo => {
                        lo = mid;
                        t_lo = tm;
                    }
                    Some(_) => {
                        hi = mid;
                        t_hi = tm;
                    }
                }
                history.push(BracketStage { segment, lo, hi });
            }
        }
        kicks.push(Kick { t: start.t, delta: best.d });
        let t_best = best.survival(cfg.t_goal);
        log::info!("segment {segment} from t = {:.3}: best T = {t_best:.3}, bracket width {:e}", start.t, hi - lo);
        if best.exit.is_none() {
            reached = true;
            best_overall = cfg.t_goal;
            break;
        }
        if t_best <= best_overall + 1.0 && segment > 0 {
            best_overall = best_overall.max(t_best);
            break;
        }
        best_overall = best_overall.max(t_best);
        let dt = sim.config().dt;
        let steps = ((t_best - cfg.margin - start.t) / dt).floor();
        if steps < 1.0 || segment + 1 == cfg.max_segments {
            break;
        }
        let mut next = kicked(&y0, &start, best.d);
        let t_c = start.t + steps * dt;
        sim.run(&mut next, t_c, |_| Control::Continue)?;
        start = next;
        lo = -cfg.refine_width;
        hi = cfg.refine_width;
    }

    Ok(ShootingResult {
        eps: cfg.eps,
        t_goal: cfg.t_goal,
        d_star: kicks.first().map_or(0.0, |k| k.delta),
        last_start: start,
        kicks,
        bracket_history: history,
        probes,
        survival: best_overall,
        reached_goal: reached,
        final_bracket: (lo, hi),
        interior_steps: interior,
    })
}

/// Reruns the shot trajectory from `base`, applying each kick at its time.
/// `observe` sees every frame once; at a kick time it sees the kicked state.
pub fn replay<F>(sim: &mut Simulator, base: &SimState, kicks: &[Kick], t_end: f64, mut observe: F) -> Result<SimState>
where
    F: FnMut(&SimState) -> Control,
{
    let y0 = sim.frame().y0.clone();
    let mut state = base.clone();
    for (i, k) in kicks.iter().enumerate() {
        if i > 0 {
            let stop = k.t;
            let dt = sim.config().dt;
            let mut halted = false;
            sim.run(&mut state, stop, |s| {
                if s.t > stop - 0.5 * dt {
                    return Control::Continue;
                }
                let c = observe(s);
                halted = c == Control::Stop;
                c
            })?;
            if halted {
                return Ok(state);
            }
        }
        state = kicked(&y0, &state, k.delta);
    }
    sim.run(&mut state, t_end, &mut observe)?;
    Ok(state)
}

/// Probes the last segment at `δ ± factor · width` around its selected kick.
pub fn sensitivity(sim: &mut Simulator, result: &ShootingResult, factor: f64, cfg: &ShootConfig) -> Result<(ProbeRecord, ProbeRecord)> {
    let last = result.kicks.last().copied().unwrap_or(Kick { t: 0.0, delta: result.d_star });
    let w = factor * result.final_width();
    let seg = result.kicks.len().saturating_sub(1);
    let minus = run_probe(sim, &result.last_start, last.delta - w, cfg, seg)?;
    let plus = run_probe(sim, &result.last_start, last.delta + w, cfg, seg)?;
    Ok((minus, plus))
}
