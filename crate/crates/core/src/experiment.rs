//! Subcommand drivers. Each writes one CSV stream and returns the list of
//! failed checks; errors map to exit codes through [`Error::exit_code`].

use std::io::Write;

use crate::config::{ExperimentConfig, Subcommand};
use crate::csv::{num, read_table, CsvWriter};
use crate::darboux::Inverses;
use crate::data;
use crate::diagnostics::{
    a_minus_envelope, fit_decay, linf_decay_ratio, local_decay_norm, nt_norm, DecayFit, DecayModel, LocalDecayVariant,
};
use crate::dynamics::{energy, make_initial_state, modes, Control, SimState, Simulator};
use crate::error::{Error, Result};
use crate::grid::{norm_inf, Grid};
use crate::identities::{bound_constants, run_battery, IdentityCheck};
use crate::poschl_teller::{resonance_constant, transmission, SolitonFrame};
use crate::shooting::{replay, sensitivity, shoot, threshold_constant, Outgoing};

/// Failed checks, each naming the check and its measured value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            0
        } else {
            1
        }
    }

    fn check(&mut self, name: &str, value: f64, ok: bool) {
        if !ok {
            self.failures.push(format!("{name}: measured {value:e}"));
        }
    }
}

/// Exit status of a finished run.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(o) => o.exit_code(),
        Err(e) => e.exit_code(),
    }
}

fn header(sub: Subcommand, cfg: &ExperimentConfig, seed: u64, tolerances: &str) -> Vec<(String, String)> {
    let dx = cfg.length / cfg.n as f64;
    let mut meta = vec![
        ("subcommand".to_string(), sub.name().to_string()),
        ("config_hash".to_string(), cfg.hash()),
        ("grid".to_string(), format!("L={:e} N={} dx={:e}", cfg.length, cfg.n, dx)),
        ("tolerances".to_string(), tolerances.to_string()),
        ("sharpness_s".to_string(), num(cfg.sharpness)),
        ("seed".to_string(), seed.to_string()),
    ];
    for line in cfg.canonical().lines() {
        meta.push(("config".to_string(), line.to_string()));
    }
    meta
}

fn status(ok: bool) -> String {
    if ok { "PASS" } else { "FAIL" }.to_string()
}

/// Validates `cfg` for `sub` and runs it, writing CSV to `out`.
pub fn run_subcommand<W: Write>(sub: Subcommand, cfg: &ExperimentConfig, seed: u64, out: W) -> Result<Outcome> {
    cfg.validate(sub)?;
    match sub {
        Subcommand::VerifyIdentities => verify_identities(cfg, seed, out),
        Subcommand::Spectral => spectral(cfg, seed, out),
        Subcommand::Simulate => simulate(cfg, seed, out),
        Subcommand::Shoot => shoot_cmd(cfg, seed, out),
        Subcommand::DecayFit => decay_fit(cfg, seed, out),
    }
}

pub fn verify_identities<W: Write>(cfg: &ExperimentConfig, seed: u64, out: W) -> Result<Outcome> {
    let grid = Grid::new(cfg.length, cfg.n)?;
    let (battery, bounds) = rayon::join(|| run_battery(&grid, cfg.samples, seed), || bound_constants(&grid, cfg.samples, seed));
    let checks: Vec<IdentityCheck> = battery?.into_iter().chain(bounds?).collect();
    let meta = header(Subcommand::VerifyIdentities, cfg, seed, "per row");
    let mut w = CsvWriter::new(out, &meta, &["identity_name", "max_residual", "tolerance", "status"])?;
    let mut outcome = Outcome::default();
    for c in &checks {
        w.row(&[c.name.clone(), num(c.residual), num(c.tolerance), status(c.passed())])?;
        outcome.check(&c.name, c.residual, c.passed());
    }
    w.into_inner()?;
    Ok(outcome)
}

pub fn spectral<W: Write>(cfg: &ExperimentConfig, seed: u64, out: W) -> Result<Outcome> {
    const EIGEN_TOL: f64 = 1e-8;
    const RESONANCE_TOL: f64 = 1e-6;
    let grid = Grid::new(cfg.length, cfg.n)?;
    let frame = SolitonFrame::new(&grid);
    let mut rows: Vec<(String, f64, f64, f64)> = Vec::new();
    let ly0 = frame.apply_l(&frame.y0)?;
    let r0 = ly0.iter().zip(&frame.y0).map(|(a, y)| (a + 3.0 * y).abs()).fold(0.0, f64::max);
    rows.push(("eigenresidual_Y0".into(), r0, 0.0, EIGEN_TOL));
    rows.push(("eigenresidual_Y1".into(), norm_inf(&frame.apply_l(&frame.y1)?), 0.0, EIGEN_TOL));
    let ly2 = frame.apply_l(&frame.y2)?;
    rows.push(("eigenresidual_Y2".into(), crate::grid::max_diff(&ly2, &frame.y2), 0.0, EIGEN_TOL));
    rows.push(("norm_Y0".into(), grid.norm_l2(&frame.y0), 1.0, EIGEN_TOL));
    rows.push(("norm_Y1".into(), grid.norm_l2(&frame.y1), 1.0, EIGEN_TOL));
    let src: Vec<f64> = frame.q.iter().zip(&frame.y2).map(|(q, y)| 3.0 * q * y * y).collect();
    let res = crate::poschl_teller::distorted_ft(&grid, &src, crate::SQRT3)?;
    let exact = resonance_constant();
    rows.push(("resonance_re".into(), res.re, exact.re, RESONANCE_TOL));
    rows.push(("resonance_im".into(), res.im, exact.im, RESONANCE_TOL));

    let meta = header(Subcommand::Spectral, cfg, seed, &format!("eigen={EIGEN_TOL:e} resonance={RESONANCE_TOL:e}"));
    let mut w = CsvWriter::new(out, &meta, &["quantity", "value", "reference", "residual", "tolerance", "status"])?;
    let mut outcome = Outcome::default();
    for (name, value, reference, tol) in rows {
        let residual = (value - reference).abs();
        let ok = residual <= tol;
        w.row(&[name.clone(), num(value), num(reference), num(residual), num(tol), status(ok)])?;
        outcome.check(&name, residual, ok);
    }
    w.section("transmission", &["xi", "re_T", "im_T", "abs_T"])?;
    for k in -40..=40 {
        let xi = 0.25 * k as f64;
        let t = transmission(xi);
        w.row(&[num(xi), num(t.re), num(t.im), num(t.norm())])?;
    }
    w.into_inner()?;
    Ok(outcome)
}

/// One output frame of `simulate`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub t: f64,
    pub linf_phi: f64,
    pub l2_phi: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub energy: f64,
    pub local_decay_norm: f64,
    pub nt_norm_proxy: f64,
}

pub const FRAME_COLUMNS: [&str; 8] =
    ["t", "linf_phi", "l2_phi", "a_plus", "a_minus", "energy", "local_decay_norm", "nt_norm_proxy"];

impl Frame {
    pub fn measure(inv: &Inverses<'_>, frame: &SolitonFrame, s: &SimState, n_max: u32, sharpness: f64) -> Result<Self> {
        let grid = frame.grid();
        let m = modes(frame, s);
        let tr = crate::dynamics::derive_transformed(inv, frame, s)?;
        let fhat = grid.forward_ft(&tr.f)?;
        Ok(Self {
            t: s.t,
            linf_phi: norm_inf(&s.phi),
            l2_phi: grid.norm_l2(&s.phi),
            a_plus: m.a_plus,
            a_minus: m.a_minus,
            energy: energy(frame, s),
            local_decay_norm: local_decay_norm(grid, &tr.v, LocalDecayVariant::Dx)?,
            nt_norm_proxy: nt_norm(grid, &fhat, s.t, n_max, sharpness, None)?.total(),
        })
    }

    fn cells(&self) -> Vec<String> {
        [self.t, self.linf_phi, self.l2_phi, self.a_plus, self.a_minus, self.energy, self.local_decay_norm, self.nt_norm_proxy]
            .iter()
            .map(|&v| num(v))
            .collect()
    }
}

fn initial_state(cfg: &ExperimentConfig, frame: &SolitonFrame, d: f64) -> Result<SimState> {
    let init = data::load(cfg, frame.grid())?;
    let (state, report) = make_initial_state(frame, &init.phi0, &init.phi1, d, cfg.auto_project)?;
    if report.correction != 0.0 {
        log::warn!("removed {:e} Y0 from phi1", report.correction);
    }
    Ok(state)
}

pub fn simulate<W: Write>(cfg: &ExperimentConfig, seed: u64, out: W) -> Result<Outcome> {
    let grid = Grid::new(cfg.length, cfg.n)?;
    let frame = SolitonFrame::new(&grid);
    let inv = Inverses::new(&frame);
    let mut state = initial_state(cfg, &frame, cfg.d)?;
    let mut sim = Simulator::new(&frame, cfg.solver(cfg.t_end)?)?;
    let meta = header(Subcommand::Simulate, cfg, seed, "none");
    let mut w = CsvWriter::new(out, &meta, &FRAME_COLUMNS)?;
    let stride = cfg.stride.max(1);
    let mut step = 0usize;
    let mut failure: Option<Error> = None;
    let end = sim.run(&mut state, cfg.t_end, |s| {
        let keep = step % stride == 0;
        step += 1;
        if keep {
            let r = Frame::measure(&inv, &frame, s, cfg.n_max, cfg.sharpness).and_then(|f| w.row(&f.cells()));
            if let Err(e) = r {
                failure = Some(e);
                return Control::Stop;
            }
        }
        Control::Continue
    });
    if let Some(e) = failure {
        return Err(e);
    }
    end?;
    w.into_inner()?;
    Ok(Outcome::default())
}

fn fit_cells(name: &str, fit: &DecayFit) -> Vec<String> {
    let model = match fit.model {
        DecayModel::PurePower => "pure_power",
        DecayModel::PowerLog => "power_log",
    };
    vec![
        name.to_string(),
        model.to_string(),
        num(fit.window.0),
        num(fit.window.1),
        num(fit.exponent),
        num(fit.constant),
        num(fit.residual),
        fit.points.to_string(),
    ]
}

const FIT_COLUMNS: [&str; 8] = ["quantity", "model", "window_lo", "window_hi", "exponent", "constant", "residual", "points"];

pub fn shoot_cmd<W: Write>(cfg: &ExperimentConfig, seed: u64, out: W) -> Result<Outcome> {
    let grid = Grid::new(cfg.length, cfg.n)?;
    let frame = SolitonFrame::new(&grid);
    let base = initial_state(cfg, &frame, 0.0)?;
    let sc = cfg.shoot_config();
    let mut sim = Simulator::new(&frame, cfg.solver(cfg.t_goal)?)?;
    let result = shoot(&mut sim, &base, &sc)?;
    let (minus, plus) = sensitivity(&mut sim, &result, 10.0, &sc)?;

    let stride = cfg.stride.max(1);
    let (mut ts, mut linf, mut am, mut traj) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut step = 0usize;
    replay(&mut sim, &base, &result.kicks, cfg.t_goal, |s| {
        let m = modes(&frame, s);
        ts.push(s.t);
        linf.push(norm_inf(&s.phi));
        am.push(m.a_minus);
        if step % stride == 0 {
            traj.push([s.t, norm_inf(&s.phi), m.a_plus, m.a_minus]);
        }
        step += 1;
        Control::Continue
    })?;

    let bound = threshold_constant(cfg.eps);
    let meta = header(
        Subcommand::Shoot,
        cfg,
        seed,
        &format!("|d_star|<={bound:e} outgoing>=0.95 sensitivity=10x_width"),
    );
    let mut w = CsvWriter::new(out, &meta, &["segment", "d", "exit_t", "exit_side", "outgoing", "growth_rate"])?;
    for p in &result.probes {
        let (t, side) = match p.exit {
            Some(e) => (num(e.t), e.side.symbol().to_string()),
            None => ("none".to_string(), "none".to_string()),
        };
        let og = match p.outgoing {
            Outgoing::Holds => "holds",
            Outgoing::Fails => "fails",
            Outgoing::NotApplicable => "n/a",
        };
        let rate = p.growth_rate.map(num).unwrap_or_else(|| "none".into());
        w.row(&[p.segment.to_string(), num(p.d), t, side, og.to_string(), rate])?;
    }
    w.section("kicks", &["t", "delta"])?;
    for k in &result.kicks {
        w.row(&[num(k.t), num(k.delta)])?;
    }
    w.section("brackets", &["segment", "lo", "hi"])?;
    for b in &result.bracket_history {
        w.row(&[b.segment.to_string(), num(b.lo), num(b.hi)])?;
    }

    let mut outcome = Outcome::default();
    let exits: Vec<_> = result.probes.iter().filter(|p| p.exit.is_some()).collect();
    let holds = exits.iter().filter(|p| p.outgoing == Outgoing::Holds).count();
    let frac = if exits.is_empty() { 1.0 } else { holds as f64 / exits.len() as f64 };
    let early = |p: &crate::shooting::ProbeRecord| p.exit.map_or(f64::INFINITY, |e| e.t);
    let sides_differ = matches!(
        (minus.exit, plus.exit),
        (Some(a), Some(b)) if a.side != b.side
    );
    let linf_fit = linf_decay_ratio(&ts, &linf, cfg.eps, cfg.fit_window);
    let env = a_minus_envelope(&ts, &am, cfg.eps, cfg.early_window, cfg.late_window);

    w.section("summary", &["quantity", "value"])?;
    let mut put = |k: &str, v: String| w.row(&[k.to_string(), v]);
    put("d_star", num(result.d_star))?;
    put("final_lo", num(result.final_bracket.0))?;
    put("final_hi", num(result.final_bracket.1))?;
    put("final_width", num(result.final_width()))?;
    put("survival", num(result.survival))?;
    put("reached_goal", result.reached_goal.to_string())?;
    put("probes", result.probes.len().to_string())?;
    put("kicks", result.kicks.len().to_string())?;
    put("interior_steps", format!("{}/{}", result.interior_steps.0, result.interior_steps.1))?;
    put("outgoing_fraction", num(frac))?;
    put("sensitivity_minus_exit", num(early(&minus)))?;
    put("sensitivity_plus_exit", num(early(&plus)))?;
    put("linf_ratio_constant", num(linf_fit.constant))?;
    if let Ok(e) = &env {
        put("a_minus_early_slope", num(e.early_slope))?;
        put("a_minus_c1", num(e.c1))?;
        put("a_minus_c2", num(e.c2))?;
    }
    w.section("trajectory", &["t", "linf_phi", "a_plus", "a_minus"])?;
    for r in &traj {
        w.row(&r.iter().map(|&v| num(v)).collect::<Vec<_>>())?;
    }

    outcome.check("|d_star| <= (log 2)^-2 eps^(3/2)", result.d_star.abs(), result.d_star.abs() <= bound);
    outcome.check("survival reaches t_goal", result.survival, result.reached_goal);
    outcome.check("outgoing property at >= 95% of exits", frac, frac >= 0.95);
    outcome.check("sensitivity -10 width exits before t_goal", early(&minus), early(&minus) < cfg.t_goal);
    outcome.check("sensitivity +10 width exits before t_goal", early(&plus), early(&plus) < cfg.t_goal);
    outcome.check("sensitivity exits on opposite sides", 0.0, sides_differ);
    w.into_inner()?;
    Ok(outcome)
}

/// Time series read back from a `simulate` CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub eps: Option<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl Series {
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// Parses a simulation CSV: needs `t` and `linf_phi`, strictly increasing
/// finite times and finite values.
pub fn read_simulation(text: &str) -> Result<Series> {
    let table = read_table(text)?;
    let ts = table.column("t").ok_or_else(|| Error::Parse { line: 1, msg: "missing column 't'".into() })?;
    if table.column("linf_phi").is_none() {
        return Err(Error::Parse { line: 1, msg: "missing column 'linf_phi'".into() });
    }
    if ts.len() < 2 {
        return Err(Error::Parse { line: 1, msg: format!("need at least two frames, found {}", ts.len()) });
    }
    for (i, row) in table.rows.iter().enumerate() {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse { line: 1, msg: format!("frame {} holds a non-finite value", i + 1) });
        }
        if i > 0 && !(ts[i] > ts[i - 1]) {
            return Err(Error::Parse { line: 1, msg: format!("times not increasing at frame {}", i + 1) });
        }
    }
    let eps = table
        .meta
        .iter()
        .filter(|(k, _)| k == "config")
        .find_map(|(_, v)| v.strip_prefix("data.eps=").and_then(|s| s.parse().ok()));
    let columns = table.columns.iter().map(|c| (c.clone(), table.column(c).unwrap_or_default())).collect();
    Ok(Series { eps, columns })
}

pub fn decay_fit<W: Write>(cfg: &ExperimentConfig, seed: u64, out: W) -> Result<Outcome> {
    let path = cfg.decay_input.as_deref().ok_or_else(|| Error::Config("decay-fit needs decay.input".into()))?;
    let series = read_simulation(&std::fs::read_to_string(path)?)?;
    let eps = series.eps.unwrap_or(cfg.eps);
    let ts = series.get("t").unwrap_or_default();
    let meta = header(Subcommand::DecayFit, cfg, seed, "none");
    let mut w = CsvWriter::new(out, &meta, &FIT_COLUMNS)?;
    let mut fits: Vec<(&str, DecayFit)> = Vec::new();
    for name in ["linf_phi", "local_decay_norm", "nt_norm_proxy"] {
        if let Some(ys) = series.get(name) {
            for model in [DecayModel::PurePower, DecayModel::PowerLog] {
                match fit_decay(ts, ys, cfg.fit_window, model) {
                    Ok(f) => fits.push((name, f)),
                    Err(e) => log::warn!("{name}: {e}"),
                }
            }
        }
    }
    if let Some(ys) = series.get("linf_phi") {
        fits.push(("linf_ratio", linf_decay_ratio(ts, ys, eps, cfg.fit_window)));
    }
    for (name, f) in &fits {
        w.row(&fit_cells(name, f))?;
    }
    if let Some(am) = series.get("a_minus") {
        if let Ok(e) = a_minus_envelope(ts, am, eps, cfg.early_window, cfg.late_window) {
            w.section("a_minus_envelope", &["early_lo", "early_hi", "late_lo", "late_hi", "early_slope", "c1", "c2"])?;
            w.row(&[
                num(e.early_window.0),
                num(e.early_window.1),
                num(e.late_window.0),
                num(e.late_window.1),
                num(e.early_slope),
                num(e.c1),
                num(e.c2),
            ])?;
        }
    }
    w.into_inner()?;
    Ok(Outcome::default())
}
