mod common;

use kgsol::dynamics::*;
use kgsol::grid::{max_diff, norm_inf};
use kgsol::{Grid, SolitonFrame, NU};

fn setup(l: f64, n: usize, dt: f64, integrator: Integrator, model: Model) -> (SolitonFrame, Simulator) {
    let g = Grid::new(l, n).unwrap();
    let f = SolitonFrame::new(&g);
    let cfg = SolverConfig { length: l, n, dt, t_end: 1.0, integrator, output_stride: 1, dealias: true, model };
    let s = Simulator::new(&f, cfg).unwrap();
    (f, s)
}

fn bump(f: &SolitonFrame, eps: f64) -> SimState {
    let g = f.grid();
    let p0 = g.sample(|x| eps * (-x * x / 2.0).exp());
    let p1: Vec<f64> = p0.iter().map(|v| -NU * v).collect();
    make_initial_state(f, &p0, &p1, 0.0, false).unwrap().0
}

fn end_state(integrator: Integrator, dt: f64) -> Vec<f64> {
    let (f, mut s) = setup(64.0, 1024, dt, integrator, Model::Full);
    let mut st = bump(&f, 0.2);
    s.run(&mut st, 1.0, |_| Control::Continue).unwrap();
    st.phi
}

fn observed_order(integrator: Integrator, dts: [f64; 3]) -> f64 {
    let r = end_state(Integrator::Etdrk4, 0.001);
    let e: Vec<f64> = dts.iter().map(|&dt| max_diff(&end_state(integrator, dt), &r)).collect();
    0.5 * ((e[0] / e[1]).log2() + (e[1] / e[2]).log2())
}

#[test]
fn strang_is_second_order() {
    let p = observed_order(Integrator::Strang, [0.05, 0.025, 0.0125]);
    assert!((p - 2.0).abs() < 0.1, "{p}");
}

#[test]
fn etdrk4_is_fourth_order() {
    let p = observed_order(Integrator::Etdrk4, [0.1, 0.05, 0.025]);
    assert!((p - 4.0).abs() < 0.3, "{p}");
}

#[test]
fn unstable_mode_grows_at_rate_nu() {
    let (f, mut s) = setup(80.0, 1024, 0.01, Integrator::Strang, Model::Linearized);
    let z = vec![0.0; 1024];
    let (mut st, _) = make_initial_state(&f, &z, &z, 1e-6, false).unwrap();
    let mut first = None;
    let mut last = (0.0, 0.0);
    s.run(&mut st, 6.0, |s| {
        let a = modes(&f, s).a_plus;
        if first.is_none() && s.t >= 1.0 {
            first = Some((s.t, a));
        }
        last = (s.t, a);
        Control::Continue
    })
    .unwrap();
    let (t0, a0) = first.unwrap();
    let rate = (last.1 / a0).ln() / (last.0 - t0);
    assert!((rate - NU).abs() < 1e-3 * NU, "{rate}");
}

#[test]
fn energy_and_parity_are_kept() {
    let (f, mut s) = setup(64.0, 1024, 0.005, Integrator::Etdrk4, Model::Full);
    let mut st = bump(&f, 0.1);
    let e0 = energy(&f, &st);
    let mut worst: f64 = 0.0;
    let mut odd: f64 = 0.0;
    s.run(&mut st, 3.0, |s| {
        worst = worst.max((energy(&f, s) - e0).abs() / e0);
        odd = odd.max(f.grid().odd_part(&s.phi));
        Control::Continue
    })
    .unwrap();
    assert!(worst < 1e-8, "{worst:e}");
    assert!(odd < 1e-10, "{odd:e}");
}

#[test]
fn unstable_coefficient_obeys_its_ode() {
    let (f, mut s) = setup(64.0, 1024, 0.002, Integrator::Etdrk4, Model::Full);
    let mut st = bump(&f, 0.1);
    let mut frames = Vec::new();
    s.run(&mut st, 0.5, |s| {
        frames.push(s.clone());
        Control::Continue
    })
    .unwrap();
    let r = frames.windows(2).map(|w| ode_residual_aplus(&f, Model::Full, &w[0], &w[1])).fold(0.0, f64::max);
    assert!(r < 1e-6, "{r:e}");
}

#[test]
fn transformed_variable_solves_the_flat_equation() {
    let (f, mut s) = setup(64.0, 1024, 0.001, Integrator::Etdrk4, Model::Full);
    let mut st = bump(&f, 0.1);
    let mut frames = Vec::new();
    s.run(&mut st, 0.3, |s| {
        frames.push(s.clone());
        Control::Continue
    })
    .unwrap();
    let n = frames.len();
    let r = flat_equation_residual(&f, Model::Full, &frames[n - 3], &frames[n - 2], &frames[n - 1]).unwrap();
    let scale = norm_inf(&frames[n - 2].phi);
    assert!(r < 1e-4 * scale.max(1e-3), "{r:e}");
}

#[test]
fn initial_data_must_be_even_and_orthogonal() {
    let g = common::small_grid();
    let f = SolitonFrame::new(&g);
    let p0 = g.sample(|x| 0.05 * (-(x - 1.0).powi(2)).exp());
    let p1 = vec![0.0; g.len()];
    assert!(make_initial_state(&f, &p0, &p1, 0.0, false).is_err());
    let p0 = g.sample(|x| 0.05 * (-x * x).exp());
    assert!(make_initial_state(&f, &p0, &p1, 0.0, false).is_err());
    let (st, rep) = make_initial_state(&f, &p0, &p1, 0.0, true).unwrap();
    assert!(rep.correction != 0.0);
    assert!((NU * g.inner(&f.y0, &st.phi) + g.inner(&f.y0, &st.phi_t)).abs() < 1e-12);
}
