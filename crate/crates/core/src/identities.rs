//! The identity battery behind `verify-identities`: spectral relations of
//! `L`, Darboux factorisations and inverses, closed-form transforms, Fourier
//! kernels and the `Ω` convolution identities, each with its tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cutoff::{adapted, time_partition};
use crate::darboux::{
    convolution_identity_check, d1d2, fourier_kernel_check, operator_bound_constants, ConvolutionIdentity, DarbouxOp,
    Inverses, KernelKind,
};
use crate::error::Result;
use crate::grid::{max_diff, norm_inf, Grid};
use crate::poschl_teller::{
    alpha_combined, alpha_ft, distorted_ft, jost_coefficient, jost_minus, jost_minus_dx, jost_plus, jost_plus_dx,
    resonance_constant, resonance_polynomial_ft, transmission, SolitonFrame,
};
use crate::quadrature::{sech, PvRule};
use crate::{C1, SQRT3};

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), residual, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

/// Sum of three Gaussians with random centres, widths and a linear tilt;
/// symmetrised when `even`.
pub fn random_schwartz(grid: &Grid, rng: &mut ChaCha8Rng, even: bool) -> Vec<f64> {
    let mut terms = Vec::new();
    for _ in 0..3 {
        let amp: f64 = rng.gen_range(-1.0..1.0);
        let centre: f64 = rng.gen_range(-4.0..4.0);
        let width: f64 = rng.gen_range(0.6..2.0);
        let tilt: f64 = rng.gen_range(-0.5..0.5);
        terms.push((amp, centre, width, tilt));
    }
    let f = |x: f64| -> f64 {
        terms
            .iter()
            .map(|(a, c, w, b)| a * (1.0 + b * x) * (-((x - c) / w).powi(2)).exp())
            .sum()
    };
    if even {
        grid.sample(|x| 0.5 * (f(x) + f(-x)))
    } else {
        grid.sample(f)
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

fn lattice_point(grid: &Grid, xi: f64) -> f64 {
    let m = (xi / grid.dxi()).round() as i64 + grid.len() as i64 / 2;
    grid.xi(m as usize)
}

/// Frequencies used by the Fourier-kernel checks, snapped to the lattice.
pub fn kernel_test_points(grid: &Grid) -> Vec<f64> {
    [0.25, 0.5, 1.0, 1.5, SQRT3, 2.0, 2.5, 3.0].iter().map(|&x| lattice_point(grid, x)).collect()
}

/// Runs the full battery. `samples` random Schwartz fields are drawn from a
/// ChaCha8 stream seeded with `seed`.
pub fn run_battery(grid: &Grid, samples: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let frame = SolitonFrame::new(grid);
    let inv = Inverses::new(&frame);
    let rule = PvRule::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let ly0 = frame.apply_l(&frame.y0)?;
    out.push(IdentityCheck::new(
        "L Y0 = -3 Y0",
        ly0.iter().zip(&frame.y0).map(|(a, y)| (a + 3.0 * y).abs()).fold(0.0, f64::max),
        1e-8,
    ));
    out.push(IdentityCheck::new("L Y1 = 0", norm_inf(&frame.apply_l(&frame.y1)?), 1e-8));
    out.push(IdentityCheck::new("L Y2 = Y2", max_diff(&frame.apply_l(&frame.y2)?, &frame.y2), 1e-8));
    out.push(IdentityCheck::new("|Y0|_2 = 1", (grid.norm_l2(&frame.y0) - 1.0).abs(), 1e-8));
    out.push(IdentityCheck::new("|Y1|_2 = 1", (grid.norm_l2(&frame.y1) - 1.0).abs(), 1e-8));
    out.push(IdentityCheck::new("<Y0, Y1> = 0", grid.inner(&frame.y0, &frame.y1).abs(), 1e-12));
    out.push(IdentityCheck::new("Y2(0) = -1/2", (frame.y2[grid.origin()] + 0.5).abs(), 1e-15));
    out.push(IdentityCheck::new("int G = 1/sqrt3", (grid.dx() * frame.g.iter().sum::<f64>() - 1.0 / SQRT3).abs(), 1e-10));

    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let xi: f64 = rng.gen_range(-50.0..50.0);
        worst = worst.max((transmission(xi).norm() - 1.0).abs());
    }
    out.push(IdentityCheck::new("|T(xi)| = 1", worst, 1e-14));

    let sech_field = grid.sample(sech);
    let dsech = grid.derivative(&sech_field, 1);
    out.push(IdentityCheck::new(
        "d/dx sech = -sech tanh",
        dsech.iter().enumerate().map(|(j, d)| (d + sech(grid.x(j)) * grid.x(j).tanh()).abs()).fold(0.0, f64::max),
        1e-10,
    ));
    let sech_hat = grid.forward_ft_real(&sech_field)?;
    out.push(IdentityCheck::new(
        "FT sech(0) = sqrt(pi/2)",
        (sech_hat[grid.len() / 2] - Complex64::new((PI / 2.0).sqrt(), 0.0)).norm(),
        1e-10,
    ));
    let gauss = grid.sample(|x| (-x * x).exp());
    let gauss_hat = grid.forward_ft_real(&gauss)?;
    let mut worst: f64 = 0.0;
    for xi in [0.0, 1.0, 2.0] {
        let m = (xi / grid.dxi()).round() as usize + grid.len() / 2;
        let exact = (-grid.xi(m).powi(2) / 4.0).exp() / 2f64.sqrt();
        worst = worst.max((gauss_hat[m] - Complex64::new(exact, 0.0)).norm());
    }
    out.push(IdentityCheck::new("FT exp(-x^2) closed form", worst, 1e-10));

    let (mut rt, mut pl) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let u: Vec<Complex64> = (0..grid.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let uh = grid.forward_ft(&u)?;
        let back = grid.inverse_ft(&uh)?;
        let d = u.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        rt = rt.max(d / crate::grid::norm_inf_c(&u));
        let nx = grid.norm_l2_c(&u);
        let nxi = (grid.dxi() * uh.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        pl = pl.max((nx - nxi).abs() / nx);
    }
    out.push(IdentityCheck::new("inverse FT o FT = id", rt, 1e-12));
    out.push(IdentityCheck::new("Plancherel", pl, 1e-10));

    let mut worst: f64 = 0.0;
    for n in [1u32, 5, 20] {
        for xi in [0.0, 1.0, SQRT3, 10.0, 1.7, 1.74] {
            let s: f64 = (0..=n).map(|l| adapted(n, l, xi, 0.0)).sum();
            worst = worst.max((s - 1.0).abs());
        }
    }
    out.push(IdentityCheck::new("sum_l phi_l^(n) = 1", worst, 1e-12));
    let mut worst: f64 = 0.0;
    for t in [0.0, 3.0, 100.0, 1e6] {
        let s: f64 = (1..=30).map(|n| time_partition(n, t)).sum();
        worst = worst.max((s - 1.0).abs());
    }
    out.push(IdentityCheck::new("sum_n tau_n = 1", worst, 1e-12));

    let fields: Vec<Vec<f64>> = (0..samples).map(|_| random_schwartz(grid, &mut rng, false)).collect();
    let evens: Vec<Vec<f64>> = (0..samples).map(|_| random_schwartz(grid, &mut rng, true)).collect();
    let mut acc = [0.0f64; 16];
    for (u, e) in fields.iter().zip(&evens) {
        let s = norm_inf(u);
        let lu = frame.apply_l(u)?;
        let d2 = DarbouxOp::D2.apply(&frame, u)?;
        let lhs = DarbouxOp::D2Adj.apply(&frame, &d2)?;
        acc[0] = acc[0].max(rel(lhs.iter().zip(&lu).zip(u).map(|((a, l), u)| (a - l - 3.0 * u).abs()).fold(0.0, f64::max), s));
        let d1a = DarbouxOp::D1Adj.apply(&frame, u)?;
        let lhs = DarbouxOp::D1.apply(&frame, &d1a)?;
        let upp = grid.derivative(u, 2);
        acc[1] = acc[1].max(rel(lhs.iter().zip(&upp).zip(u).map(|((a, p), u)| (a + p - u).abs()).fold(0.0, f64::max), s));
        let a = d1d2(&frame, &lu)?;
        let w = d1d2(&frame, u)?;
        let wpp = grid.derivative(&w, 2);
        acc[2] = acc[2].max(rel(a.iter().zip(&w).zip(&wpp).map(|((a, w), p)| (a - w + p).abs()).fold(0.0, f64::max), s));
        for (k, (op, adj)) in [(DarbouxOp::D1, DarbouxOp::D1Adj), (DarbouxOp::D2, DarbouxOp::D2Adj)].into_iter().enumerate() {
            let lhs = grid.inner(&op.apply(&frame, u)?, e);
            let rhs = grid.inner(u, &adj.apply(&frame, e)?);
            acc[3 + k] = acc[3 + k].max(rel((lhs - rhs).abs(), grid.norm_l2(u) * grid.norm_l2(e)));
        }
        let i1 = inv.i1(u)?;
        acc[5] = acc[5].max(rel(max_diff(&DarbouxOp::D1.apply(&frame, &i1)?, u), s));
        let i2 = inv.i2(u)?;
        acc[6] = acc[6].max(rel(max_diff(&DarbouxOp::D2.apply(&frame, &i2)?, u), s));
        let j = inv.j(u)?;
        acc[7] = acc[7].max(rel(max_diff(&d1d2(&frame, &j)?, u), s));
        acc[8] = acc[8].max(rel(max_diff(&j, &inv.i2(&i1)?), s));
        let back = inv.i1(&DarbouxOp::D1.apply(&frame, u)?)?;
        let f0 = u[grid.origin()];
        acc[9] = acc[9].max(rel(
            back.iter().zip(u).zip(&frame.z).map(|((b, u), z)| (b - u + f0 / C1 * z).abs()).fold(0.0, f64::max),
            s,
        ));
        let fp0 = grid.derivative(u, 1)[grid.origin()];
        let rec = inv.reconstruct(&w, f0, fp0)?;
        acc[10] = acc[10].max(rel(max_diff(&rec, u), s));
        let se = norm_inf(e);
        let pc = frame.project_pc_even(e)?;
        let pcj = frame.project_pc_even(&inv.j(&d1d2(&frame, e)?)?)?;
        acc[11] = acc[11].max(rel(max_diff(&pc, &pcj), se));
        let (r1, r2) = inv.tilde_split_check(u)?;
        acc[12] = acc[12].max(rel(r1, s));
        acc[13] = acc[13].max(rel(r2, s));
        let pc2 = frame.project_pc_even(&pc)?;
        acc[14] = acc[14].max(rel(max_diff(&pc, &pc2), se));
        acc[15] = acc[15].max(rel(frame.a_coeff(&pc).abs(), se));
    }
    let names = [
        ("D2* D2 = L + 3", 1e-8),
        ("D1 D1* = -d^2 + 1", 1e-8),
        ("D1 D2 L = (-d^2 + 1) D1 D2", 1e-7),
        ("<D1 u, v> = <u, D1* v>", 1e-8),
        ("<D2 u, v> = <u, D2* v>", 1e-8),
        ("D1 I1[g] = g", 1e-7),
        ("D2 I2[g] = g", 1e-7),
        ("D1 D2 J[g] = g", 1e-7),
        ("J = I2 I1", 1e-10),
        ("I1[D1 f] = f - f(0)/c1 Z", 1e-8),
        ("reconstruction f = J[D1 D2 f] + f(0)/c0 Y0 + f'(0)/c1 Y1", 1e-7),
        ("Pc f = Pc J[D1 D2 f]", 1e-8),
        ("I1[g] = K g + I1t[dg]", 1e-7),
        ("J[g] = K^2 g / 2 + Jt[dg]", 1e-7),
        ("Pc Pc = Pc", 1e-12),
        ("<Y0, Pc f> = 0", 1e-12),
    ];
    for ((name, tol), r) in names.iter().zip(acc) {
        out.push(IdentityCheck::new(name, r, *tol));
    }

    let k1 = d1d2(&frame, &frame.y0)?;
    let k2 = d1d2(&frame, &frame.y1)?;
    out.push(IdentityCheck::new("D1 D2 Y0 = D1 D2 Y1 = 0", norm_inf(&k1).max(norm_inf(&k2)), 1e-9));
    out.push(IdentityCheck::new("I2[Z] = Y1", max_diff(&inv.i2(&frame.z)?, &frame.y1), 1e-8));
    let zero = vec![0.0; grid.len()];
    let rec_y0 = inv.reconstruct(&zero, frame.y0[grid.origin()], 0.0)?;
    out.push(IdentityCheck::new("reconstruction of Y0 from its trace", max_diff(&rec_y0, &frame.y0), 1e-12));
    let sech_rec = inv.reconstruct(&d1d2(&frame, &sech_field)?, 1.0, 0.0)?;
    out.push(IdentityCheck::new("reconstruction of sech", max_diff(&sech_rec, &sech_field), 1e-8));

    let mut worst: f64 = 0.0;
    for xi in [0.5, 1.0, SQRT3, 3.0] {
        worst = worst.max((jost_plus(30.0, xi) * Complex64::from_polar(1.0, -30.0 * xi) - 1.0).norm());
    }
    out.push(IdentityCheck::new("e^{-ix xi} f+ -> 1 at x = 30", worst, 1e-10));
    let mut worst: f64 = 0.0;
    for xi in [0.5, 1.0, 2.5] {
        for x in [-2.0, 0.0, 0.7] {
            let w = jost_plus(x, xi) * jost_minus_dx(x, xi) - jost_plus_dx(x, xi) * jost_minus(x, xi);
            worst = worst.max((transmission(xi) * w - Complex64::new(0.0, -2.0 * xi)).norm());
        }
    }
    out.push(IdentityCheck::new("T W(f+, f-) = -2i xi", worst, 1e-8));

    let src: Vec<f64> = frame.q.iter().zip(&frame.y2).map(|(q, y)| 3.0 * q * y * y).collect();
    let res = distorted_ft(grid, &src, SQRT3)?;
    let exact = resonance_constant();
    out.push(IdentityCheck::new("resonance constant (real part)", (res.re - exact.re).abs(), 1e-6));
    out.push(IdentityCheck::new("resonance constant (imaginary part)", (res.im - exact.im).abs(), 1e-6));
    let dsrc = d1d2(&frame, &src)?;
    let mut worst: f64 = 0.0;
    for xi in [0.0, 1.0, SQRT3] {
        worst = worst.max((grid.ft_at(&dsrc, xi) - Complex64::new(resonance_polynomial_ft(xi), 0.0)).norm());
    }
    out.push(IdentityCheck::new("FT D1 D2 (3 Q Y2^2) closed form", worst, 1e-7));
    for j in 1..=3 {
        let mut worst: f64 = 0.0;
        for xi in [0.0, 1.0, SQRT3] {
            worst = worst.max((grid.ft_at(&frame.alpha[j - 1], xi) - Complex64::new(alpha_ft(j, xi), 0.0)).norm());
        }
        out.push(IdentityCheck::new(&format!("FT alpha_{j} closed form"), worst, 1e-7));
    }
    let target = -3.0 * PI.sqrt() / 4.0 * sech(SQRT3 * PI / 2.0);
    out.push(IdentityCheck::new(
        "alpha combination at +-sqrt3",
        (alpha_combined(SQRT3) - target).abs().max((alpha_combined(-SQRT3) - target).abs()),
        1e-14,
    ));

    let h = grid.sample(|x| (-(x - 0.3).powi(2) / 1.5).exp());
    let lhs_field = DarbouxOp::D2Adj.apply(&frame, &DarbouxOp::D1Adj.apply(&frame, &h)?)?;
    let mut worst: f64 = 0.0;
    for xi in [0.5, 1.0, SQRT3, 2.5] {
        let lhs = distorted_ft(grid, &lhs_field, xi)?;
        let factor = (transmission(xi) * jost_coefficient(xi)).conj() * ((1.0 + xi * xi) * (4.0 + xi * xi));
        worst = worst.max((lhs - factor * grid.ft_at(&h, xi)).norm());
    }
    out.push(IdentityCheck::new("distorted FT of D2* D1* h", worst, 1e-6));

    let fhat = |eta: f64| Complex64::new((-eta * eta / 4.0).exp() / 2f64.sqrt(), 0.0);
    for (kind, name) in [(KernelKind::I1, "Fourier kernel of I1"), (KernelKind::J, "Fourier kernel of J")] {
        let mut worst: f64 = 0.0;
        for xi in kernel_test_points(grid) {
            worst = worst.max(fourier_kernel_check(&inv, &rule, kind, &gauss, fhat, xi)?.residual());
        }
        out.push(IdentityCheck::new(name, worst, 1e-5));
    }
    for (id, name) in [
        (ConvolutionIdentity::OmegaOmega1, "Omega * omega1 = 2 xi sech"),
        (ConvolutionIdentity::OmegaOmega2, "Omega * omega2 = (xi^2 - 1) sech"),
        (ConvolutionIdentity::OmegaOmega3, "Omega * omega3 = xi^2 cosech"),
        (ConvolutionIdentity::OmegaOmega, "Omega * Omega = -4 delta + 2 omega3 (smeared)"),
    ] {
        out.push(IdentityCheck::new(name, convolution_identity_check(&rule, id)?, 1e-4));
    }
    Ok(out)
}

/// Measured constants of the nine integral-operator bounds over `2 samples`
/// random fields.
pub fn bound_constants(grid: &Grid, samples: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let frame = SolitonFrame::new(grid);
    let inv = Inverses::new(&frame);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let set: Vec<Vec<f64>> = (0..2 * samples).map(|_| random_schwartz(grid, &mut rng, false)).collect();
    Ok(operator_bound_constants(&inv, &set)?
        .into_iter()
        .map(|b| IdentityCheck::new(&format!("bound: {}", b.name), b.constant, 10.0))
        .collect())
}
