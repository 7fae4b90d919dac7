//! Volume estimates for four-dimensional Cayley tiles of M-diameter `d*`.
//!
//! Everything here lives in the hyperplane `x_4 = 0` after projecting the
//! facet `x_1 + x_2 + x_3 + x_4 = d*` along its smallest coordinate. The
//! removed volume is `4 ∫ (d* - x_1 - x_2 - x_3)` over the projected region,
//! and with a notch at `(v, v, v, v)` the corner above the notch is removed
//! as well. The resulting quartic in `v` peaks at `v = d*/7` with value
//! `11 d*^4 / 343`.
//!
//! Closed forms come in two flavours: `f64` for comparison with numerical
//! integration, and exact [`Rational`] twins for the polynomial identities.

mod checks;
mod integrate;
mod poly;

pub use checks::{
    run_checks, BoundCheck, VerifyConfig, DEFAULT_MC_SAMPLES, DEFAULT_QUAD_NODES, DEFAULT_SEED,
    MC_REL_TOL, MC_SIGMA, QUAD_REL_TOL,
};
pub use integrate::{
    gauss_legendre, integral_no_notch, integral_notch, notch_region_volume_mc, IntegralEstimate,
    Method,
};
pub use poly::Poly;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Notch at `(v, v, v, v)` in a tile of M-diameter `d_star`, `0 <= v <= d_star/4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotchConfig {
    pub d_star: f64,
    pub v: f64,
}

impl NotchConfig {
    pub fn new(d_star: f64, v: f64) -> Result<Self> {
        if !(d_star >= 0.0 && d_star.is_finite()) {
            return Err(Error::InvalidArgument(format!("d* must be >= 0, got {d_star}")));
        }
        if !(0.0..=d_star / 4.0).contains(&v) {
            return Err(Error::InvalidArgument(format!(
                "notch coordinate {v} outside [0, {}]",
                d_star / 4.0
            )));
        }
        Ok(NotchConfig { d_star, v })
    }
}

/// Projected region without a notch: `x >= 0`, `s = x_1+x_2+x_3 <= d*`, and
/// the dropped coordinate `d* - s` is the smallest of the four. Closed.
pub fn in_region_no_notch(x: [f64; 3], d_star: f64) -> bool {
    let s = x[0] + x[1] + x[2];
    let min = x[0].min(x[1]).min(x[2]);
    min >= 0.0 && s <= d_star && d_star - s <= min
}

/// The no-notch region minus the points whose lift lies above the notch.
pub fn in_region_notch(x: [f64; 3], cfg: &NotchConfig) -> bool {
    if !in_region_no_notch(x, cfg.d_star) {
        return false;
    }
    let s = x[0] + x[1] + x[2];
    let min = x[0].min(x[1]).min(x[2]);
    !(min >= cfg.v && cfg.d_star - s >= cfg.v)
}

/// Membership in `P = { p in S(4, d*) : p >= (v, v, v, v) }`.
pub fn in_notch_corner(x: [f64; 4], cfg: &NotchConfig) -> bool {
    x.iter().all(|&c| c >= cfg.v) && x.iter().sum::<f64>() <= cfg.d_star
}

pub fn integral_no_notch_closed(d_star: f64) -> f64 {
    d_star.powi(4) / 384.0
}

/// `2 v^4 - (4 d*/3) v^3 + (d*^2/4) v^2`.
pub fn integral_notch_closed(cfg: &NotchConfig) -> f64 {
    let (d, v) = (cfg.d_star, cfg.v);
    2.0 * v.powi(4) - 4.0 * d / 3.0 * v.powi(3) + d * d / 4.0 * v * v
}

/// Volume of the corner above the notch, `(d* - 4v)^4 / 4!`.
pub fn notch_region_volume(cfg: &NotchConfig) -> f64 {
    (cfg.d_star - 4.0 * cfg.v).powi(4) / 24.0
}

/// Upper bound on the tile volume when the notch sits at `(v, v, v, v)`:
/// `-(56/3) v^4 + 16 d* v^3 - 5 d*^2 v^2 + (2 d*^3/3) v`.
pub fn notch_volume_bound(d_star: f64, v: f64) -> f64 {
    let d = d_star;
    -56.0 / 3.0 * v.powi(4) + 16.0 * d * v.powi(3) - 5.0 * d * d * v * v + 2.0 * d.powi(3) / 3.0 * v
}

/// `notch_volume_bound` as a polynomial in `v` with exact coefficients.
pub fn notch_volume_bound_poly(d_star: &Rational) -> Poly {
    let d = d_star;
    Poly::new(vec![
        Rational::zero(),
        Rational::frac(2, 3) * d.pow(3),
        Rational::from_integer(-5) * d.pow(2),
        Rational::from_integer(16) * d.clone(),
        Rational::frac(-56, 3),
    ])
}

pub fn notch_volume_bound_exact(d_star: &Rational, v: &Rational) -> Rational {
    notch_volume_bound_poly(d_star).eval(v)
}

pub fn integral_notch_exact(d_star: &Rational, v: &Rational) -> Rational {
    Rational::from_integer(2) * v.pow(4) - Rational::frac(4, 3) * d_star.clone() * v.pow(3)
        + Rational::frac(1, 4) * d_star.pow(2) * v.pow(2)
}

pub fn notch_region_volume_exact(d_star: &Rational, v: &Rational) -> Rational {
    (d_star - &(Rational::from_integer(4) * v.clone())).pow(4) * Rational::frac(1, 24)
}

/// `[d*^4/24 - 4 I(v) - vol(P)] - notch_volume_bound`; vanishes identically.
pub fn notch_identity_residual_exact(d_star: &Rational, v: &Rational) -> Rational {
    let bound = d_star.pow(4) * Rational::frac(1, 24)
        - Rational::from_integer(4) * integral_notch_exact(d_star, v)
        - notch_region_volume_exact(d_star, v);
    bound - notch_volume_bound_exact(d_star, v)
}

pub fn notch_identity_residual(d_star: f64, v: f64) -> f64 {
    let cfg = NotchConfig { d_star, v };
    d_star.powi(4) / 24.0 - 4.0 * integral_notch_closed(&cfg) - notch_region_volume(&cfg)
        - notch_volume_bound(d_star, v)
}

/// `(-224/3) (v - d*/4)^2 (v - d*/7)` expanded as a polynomial in `v`.
pub fn derivative_factorization(d_star: &Rational) -> Poly {
    let quarter = Poly::new(vec![-(d_star.clone() * Rational::frac(1, 4)), Rational::one()]);
    let seventh = Poly::new(vec![-(d_star.clone() * Rational::frac(1, 7)), Rational::one()]);
    Poly::constant(Rational::frac(-224, 3)) * quarter.clone() * quarter * seventh
}

/// `d/dv notch_volume_bound - (-224/3)(v - d*/4)^2 (v - d*/7)`; vanishes identically.
pub fn derivative_factorization_residual_exact(d_star: &Rational, v: &Rational) -> Rational {
    notch_volume_bound_poly(d_star).derivative().eval(v) - derivative_factorization(d_star).eval(v)
}

pub fn derivative_factorization_residual(d_star: f64, v: f64) -> f64 {
    let d = d_star;
    let deriv = -224.0 / 3.0 * v.powi(3) + 48.0 * d * v * v - 10.0 * d * d * v + 2.0 * d.powi(3) / 3.0;
    deriv - (-224.0 / 3.0) * (v - d / 4.0).powi(2) * (v - d / 7.0)
}

/// Extremes of `notch_volume_bound` over the admissible notch range `[0, d*/4]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotchOptimum {
    pub v_max: Rational,
    pub max_value: Rational,
    /// Minimum on `[v_max, d*/4]`, attained at the right end where the
    /// derivative has a double root.
    pub v_local_min: Rational,
    pub local_min_value: Rational,
    /// Largest value seen on the verification grid.
    pub grid_max: f64,
    pub grid_points: usize,
}

pub const NOTCH_GRID_POINTS: usize = 10_000;

/// Locates the extremes from the factored derivative, checks that the
/// roots really are critical points, and scans a grid of `[0, d*/4]`.
pub fn optimize_notch(d_star: &Rational) -> Result<NotchOptimum> {
    if *d_star <= Rational::zero() {
        return Err(Error::InvalidArgument(format!("d* must be positive, got {d_star}")));
    }
    let poly = notch_volume_bound_poly(d_star);
    let deriv = poly.derivative();
    let quarter = d_star.clone() * Rational::frac(1, 4);
    let seventh = d_star.clone() * Rational::frac(1, 7);
    debug_assert!(deriv.eval(&quarter).is_zero() && deriv.eval(&seventh).is_zero());
    if deriv != derivative_factorization(d_star) {
        return Err(Error::InvalidArgument("derivative does not factor".into()));
    }

    let candidates = [Rational::zero(), seventh, quarter.clone()];
    let (v_max, max_value) = candidates
        .iter()
        .map(|v| (v.clone(), poly.eval(v)))
        .max_by(|a, b| a.1.cmp(&b.1))
        .expect("nonempty");
    let local_min_value = poly.eval(&quarter);

    let d = d_star.to_f64();
    let grid_max = (0..=NOTCH_GRID_POINTS)
        .map(|i| notch_volume_bound(d, d / 4.0 * i as f64 / NOTCH_GRID_POINTS as f64))
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(NotchOptimum {
        v_max,
        max_value,
        v_local_min: quarter,
        local_min_value,
        grid_max,
        grid_points: NOTCH_GRID_POINTS + 1,
    })
}

/// Volume bound without a notch: `d*^4/24 - 4 d*^4/384 = d*^4/32`.
pub fn no_notch_bound(d_star: &Rational) -> Rational {
    let q = d_star.pow(4);
    q.clone() * Rational::frac(1, 24) - Rational::from_integer(4) * q * Rational::frac(1, 384)
}

/// Larger of the two cases at `d* = d + 4`; equals `11 (d+4)^4 / 343`.
pub fn four_dim_volume_bound(d: u64) -> Result<Rational> {
    let d_star = Rational::from_integer(d as i64 + 4);
    let notch = optimize_notch(&d_star)?.max_value;
    Ok(no_notch_bound(&d_star).max(notch))
}
