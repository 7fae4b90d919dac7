//! The full battery of numeric and exact checks behind `verify-bounds`.

use serde::{Deserialize, Serialize};

use super::{
    no_notch_bound, derivative_factorization_residual_exact, notch_identity_residual_exact,
    integral_no_notch, integral_no_notch_closed, integral_notch, integral_notch_closed,
    notch_region_volume, notch_region_volume_mc, optimize_notch, notch_volume_bound_exact, IntegralEstimate,
    Method, NotchConfig,
};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Relative error cap for Monte Carlo estimates.
pub const MC_REL_TOL: f64 = 0.01;
/// Monte Carlo estimates must also fall within this many standard errors.
pub const MC_SIGMA: f64 = 3.0;
/// Relative error cap for nested quadrature.
pub const QUAD_REL_TOL: f64 = 1e-6;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_MC_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_QUAD_NODES: u64 = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub estimate: f64,
    pub closed_form: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub std_err: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn numeric(name: String, est: &IntegralEstimate, closed_form: f64) -> Self {
        let abs_err = (est.value - closed_form).abs();
        let rel_err = relative(abs_err, closed_form);
        let pass = match est.method {
            // The rounding slack covers degenerate cases where every sample
            // hits and the standard error is exactly zero.
            Method::MonteCarlo => {
                abs_err <= MC_SIGMA * est.std_error + 1e-12 * closed_form.abs()
                    && rel_err <= MC_REL_TOL
            }
            Method::NestedQuadrature => rel_err <= QUAD_REL_TOL,
        };
        BoundCheck {
            name,
            estimate: est.value,
            closed_form,
            abs_err,
            rel_err,
            std_err: est.std_error,
            pass,
        }
    }

    /// A check decided in exact arithmetic; the floats are for display only.
    fn exact(name: String, got: &Rational, want: &Rational, pass: bool) -> Self {
        let estimate = got.to_f64();
        let closed_form = want.to_f64();
        let abs_err = (got - want).abs().to_f64();
        BoundCheck {
            name,
            estimate,
            closed_form,
            abs_err,
            rel_err: relative(abs_err, closed_form),
            std_err: 0.0,
            pass,
        }
    }
}

fn relative(abs_err: f64, reference: f64) -> f64 {
    if abs_err == 0.0 {
        0.0
    } else if reference == 0.0 {
        f64::INFINITY
    } else {
        abs_err / reference.abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub d_star: Rational,
    /// Single notch coordinate; `None` runs `{0, d*/8, d*/7, d*/4}`.
    pub v: Option<Rational>,
    /// Sample count for Monte Carlo, nodes per axis for quadrature.
    pub samples: u64,
    pub seed: u64,
    pub method: Method,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            d_star: Rational::one(),
            v: None,
            samples: DEFAULT_MC_SAMPLES,
            seed: DEFAULT_SEED,
            method: Method::MonteCarlo,
        }
    }
}

fn notch_values(cfg: &VerifyConfig) -> Vec<Rational> {
    match &cfg.v {
        Some(v) => vec![v.clone()],
        None => [0, 8, 7, 4]
            .iter()
            .map(|&k| {
                if k == 0 {
                    Rational::zero()
                } else {
                    cfg.d_star.clone() * Rational::frac(1, k)
                }
            })
            .collect(),
    }
}

/// Runs every check for one `d*`. Numeric checks use the configured method;
/// the polynomial identities and the optimization are checked exactly.
pub fn run_checks(cfg: &VerifyConfig) -> Result<Vec<BoundCheck>> {
    if cfg.d_star <= Rational::zero() {
        return Err(Error::InvalidArgument(format!("d* must be positive, got {}", cfg.d_star)));
    }
    if cfg.samples == 0 {
        return Err(Error::BadSampleCount);
    }
    let d = &cfg.d_star;
    let df = d.to_f64();
    let mut out = Vec::new();

    let est = integral_no_notch(df, cfg.method, cfg.samples, cfg.seed)?;
    out.push(BoundCheck::numeric("integral_no_notch".into(), &est, integral_no_notch_closed(df)));

    for v in notch_values(cfg) {
        let notch = NotchConfig::new(df, v.to_f64())?;
        let est = integral_notch(&notch, cfg.method, cfg.samples, cfg.seed)?;
        out.push(BoundCheck::numeric(
            format!("integral_notch[v={v}]"),
            &est,
            integral_notch_closed(&notch),
        ));
        if cfg.method == Method::MonteCarlo {
            let est = notch_region_volume_mc(&notch, cfg.samples, cfg.seed)?;
            out.push(BoundCheck::numeric(
                format!("notch_region_volume[v={v}]"),
                &est,
                notch_region_volume(&notch),
            ));
        }
        let r = notch_identity_residual_exact(d, &v);
        out.push(BoundCheck::exact(
            format!("notch_identity_residual[v={v}]"),
            &r,
            &Rational::zero(),
            r.is_zero(),
        ));
        let r = derivative_factorization_residual_exact(d, &v);
        out.push(BoundCheck::exact(
            format!("derivative_factorization_residual[v={v}]"),
            &r,
            &Rational::zero(),
            r.is_zero(),
        ));
    }

    let d4 = d.pow(4);
    let no_notch = no_notch_bound(d);
    let want = d4.clone() * Rational::frac(1, 32);
    out.push(BoundCheck::exact("no_notch_bound".into(), &no_notch, &want, no_notch == want));

    let opt = optimize_notch(d)?;
    let want_max = d4.clone() * Rational::frac(11, 343);
    let seventh = d.clone() * Rational::frac(1, 7);
    out.push(BoundCheck::exact(
        "notch_maximum".into(),
        &opt.max_value,
        &want_max,
        opt.max_value == want_max && opt.v_max == seventh,
    ));
    let want_min = d4.clone() * Rational::frac(1, 32);
    out.push(BoundCheck::exact(
        "notch_local_minimum".into(),
        &opt.local_min_value,
        &want_min,
        opt.local_min_value == want_min && opt.v_local_min == d.clone() * Rational::frac(1, 4),
    ));
    let max_f = want_max.to_f64();
    let grid_ok = opt.grid_max <= max_f * (1.0 + 1e-12);
    out.push(BoundCheck {
        name: "notch_grid_scan".into(),
        estimate: opt.grid_max,
        closed_form: max_f,
        abs_err: (opt.grid_max - max_f).abs(),
        rel_err: relative((opt.grid_max - max_f).abs(), max_f),
        std_err: 0.0,
        pass: grid_ok,
    });
    let eps = d.clone() * Rational::frac(1, 1000);
    let left = notch_volume_bound_exact(d, &(&seventh - &eps));
    let right = notch_volume_bound_exact(d, &(&seventh + &eps));
    let side = left.clone().max(right.clone());
    out.push(BoundCheck::exact(
        "notch_strict_interior_maximum".into(),
        &side,
        &want_max,
        left < want_max && right < want_max,
    ));
    let (a, b) = (Rational::frac(11, 343), Rational::frac(1, 32));
    out.push(BoundCheck::exact("notch_case_dominates".into(), &a, &b, a > b));
    Ok(out)
}
