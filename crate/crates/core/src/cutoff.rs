//! Smooth cutoffs: the mother bump, Littlewood-Paley pieces, the adapted
//! annuli around the frequencies `±√3`, and the dyadic time partition.
//!
//! The adapted family is built with a configurable sharpness exponent `s`:
//! annulus `ℓ` has width about `2^{-ℓ-s}`.

use crate::SQRT3;

fn glue(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth even bump, equal to 1 on `[-1, 1]` and 0 outside `[-2, 2]`.
pub fn bump(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        return 1.0;
    }
    if a >= 2.0 {
        return 0.0;
    }
    let p = glue(2.0 - a);
    p / (p + glue(a - 1.0))
}

/// `ψ(x) = φ(x) - φ(2x)`, supported in `1/2 ≤ |x| ≤ 2`.
pub fn annulus(x: f64) -> f64 {
    bump(x) - bump(2.0 * x)
}

/// Littlewood-Paley piece `φ_k(ξ) = ψ(ξ / 2^k)`.
pub fn littlewood_paley(k: i32, xi: f64) -> f64 {
    annulus(xi * 2f64.powi(-k))
}

/// `φ_{≤k}(ξ) = φ(ξ / 2^k)`.
pub fn low_pass(k: i32, xi: f64) -> f64 {
    bump(xi * 2f64.powi(-k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Adapted annulus `φ_ℓ^{(n)}` around `|ξ| = √3`.
pub fn adapted(n: u32, l: u32, xi: f64, sharpness: f64) -> f64 {
    adapted_at(n, l, xi.abs() - SQRT3, sharpness)
}

/// One-sided version, localised around `+√3` or `-√3` only.
pub fn adapted_one_sided(n: u32, l: u32, side: Side, xi: f64, sharpness: f64) -> f64 {
    let r = match side {
        Side::Plus => xi - SQRT3,
        Side::Minus => xi + SQRT3,
    };
    adapted_at(n, l, r, sharpness)
}

fn adapted_at(n: u32, l: u32, r: f64, sharpness: f64) -> f64 {
    assert!(n >= 1 && l <= n, "annulus index out of range: n = {n}, l = {l}");
    let y = r * sharpness.exp2();
    if l == 0 {
        1.0 - low_pass(-1, y)
    } else if l == n {
        low_pass(-(n as i32), y)
    } else {
        littlewood_paley(-(l as i32), y)
    }
}

/// Tail `φ_{≥ℓ}^{(n)} = Σ_{j ≥ ℓ} φ_j^{(n)}`.
pub fn adapted_tail(l: u32, xi: f64, sharpness: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    low_pass(-(l as i32), (xi.abs() - SQRT3) * sharpness.exp2())
}

/// Dyadic time partition `τ_n`, `n ≥ 1`.
pub fn time_partition(n: u32, t: f64) -> f64 {
    assert!(n >= 1, "time partition starts at n = 1");
    if n == 1 {
        bump(t / 2.0)
    } else {
        bump(t * 2f64.powi(-(n as i32))) - bump(t * 2f64.powi(1 - n as i32))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CutoffFamily {
    LittlewoodPaley { k: i32 },
    Adapted { n: u32, l: u32 },
    AdaptedOneSided { n: u32, l: u32, side: Side },
    TimePartition { n: u32 },
}

impl CutoffFamily {
    pub fn eval(&self, arg: f64, sharpness: f64) -> f64 {
        match *self {
            CutoffFamily::LittlewoodPaley { k } => littlewood_paley(k, arg),
            CutoffFamily::Adapted { n, l } => adapted(n, l, arg, sharpness),
            CutoffFamily::AdaptedOneSided { n, l, side } => adapted_one_sided(n, l, side, arg, sharpness),
            CutoffFamily::TimePartition { n } => time_partition(n, arg),
        }
    }
}
