//! Monte Carlo and nested Gauss–Legendre integration of the projected regions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{in_notch_corner, in_region_no_notch, in_region_notch, NotchConfig};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MonteCarlo,
    NestedQuadrature,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Samples for Monte Carlo, nodes per axis for quadrature.
    pub samples: u64,
    pub method: Method,
    pub seed: u64,
}

const CHUNK: u64 = 1 << 15;

/// Uniform samples from `{ x in R^N : x >= 0, sum x <= scale }` via sorted
/// uniform spacings. Each chunk of samples draws from its own ChaCha stream
/// keyed by `(seed, chunk index)`, and chunk sums are combined pairwise in
/// chunk order, so the result does not depend on the worker count.
fn mc_over_simplex<const N: usize>(
    scale: f64,
    samples: u64,
    seed: u64,
    f: impl Fn([f64; N]) -> f64 + Sync,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::BadSampleCount);
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut u = [0.0f64; N];
            for _ in 0..count {
                for slot in u.iter_mut() {
                    *slot = rng.gen::<f64>();
                }
                u.sort_by(f64::total_cmp);
                let mut x = [0.0f64; N];
                let mut prev = 0.0;
                for k in 0..N {
                    x[k] = (u[k] - prev) * scale;
                    prev = u[k];
                }
                let y = f(x);
                sum += y;
                sum_sq += y * y;
            }
            (sum, sum_sq)
        })
        .collect();
    let sums: Vec<f64> = partial.iter().map(|p| p.0).collect();
    let sqs: Vec<f64> = partial.iter().map(|p| p.1).collect();
    let n = samples as f64;
    let mean = pairwise_sum(&sums) / n;
    let var = (pairwise_sum(&sqs) / n - mean * mean).max(0.0);
    let volume = scale.powi(N as i32) / (1..=N).product::<usize>() as f64;
    let std_error = if samples > 1 {
        volume * (var * n / (n - 1.0)).sqrt() / n.sqrt()
    } else {
        0.0
    };
    Ok((volume * mean, std_error))
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and its derivative.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            return (vec![0.0], vec![2.0]);
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

type Limits1 = Box<dyn Fn(f64) -> (f64, f64) + Sync>;
type Limits2 = Box<dyn Fn(f64, f64) -> (f64, f64) + Sync>;

/// One iterated integral `∫_a^b dt ∫_{g(t)}^{h(t)} du ∫_{q(t,u)}^{r(t,u)} dx_3`
/// of `d* - x_1 - x_2 - x_3`. The integrand is symmetric in `x_1, x_2`, so the
/// pieces written with `x_2` outermost need no relabelling.
struct Piece {
    outer: (f64, f64),
    middle: Limits1,
    inner: Limits2,
}

fn no_notch_pieces(d: f64) -> Vec<Piece> {
    vec![
        Piece {
            outer: (0.0, d / 4.0),
            middle: Box::new(move |x1| (d - 3.0 * x1, d - x1)),
            inner: Box::new(move |x1, x2| (0.5 * (d - x1 - x2), d - x1 - x2)),
        },
        Piece {
            outer: (d / 4.0, d),
            middle: Box::new(move |x1| ((d - x1) / 3.0, d - x1)),
            inner: Box::new(move |x1, x2| (0.5 * (d - x1 - x2), d - x1 - x2)),
        },
        Piece {
            outer: (0.0, d / 4.0),
            middle: Box::new(move |x1| (x1, d - 3.0 * x1)),
            inner: Box::new(move |x1, x2| (d - 2.0 * x1 - x2, d - x1 - x2)),
        },
        // outer variable x2, middle x1
        Piece {
            outer: (0.0, d / 4.0),
            middle: Box::new(move |x2| (x2, d - 3.0 * x2)),
            inner: Box::new(move |x2, x1| (d - x1 - 2.0 * x2, d - x1 - x2)),
        },
    ]
}

fn notch_pieces(d: f64, v: f64) -> Vec<Piece> {
    vec![
        Piece {
            outer: (0.0, v),
            middle: Box::new(move |x1| (d - 3.0 * x1, d - x1)),
            inner: Box::new(move |x1, x2| (0.5 * (d - x1 - x2), d - x1 - x2)),
        },
        Piece {
            outer: (v, d - 3.0 * v),
            middle: Box::new(move |x1| (d - x1 - 2.0 * v, d - x1)),
            inner: Box::new(move |x1, x2| (0.5 * (d - x1 - x2), d - x1 - x2)),
        },
        Piece {
            outer: (d - 3.0 * v, d),
            middle: Box::new(move |x1| ((d - x1) / 3.0, d - x1)),
            inner: Box::new(move |x1, x2| (0.5 * (d - x1 - x2), d - x1 - x2)),
        },
        Piece {
            outer: (v, d - 3.0 * v),
            middle: Box::new(move |x1| (v, d - x1 - 2.0 * v)),
            inner: Box::new(move |x1, x2| (d - x1 - x2 - v, d - x1 - x2)),
        },
        Piece {
            outer: (0.0, v),
            middle: Box::new(move |x1| (x1, d - 3.0 * x1)),
            inner: Box::new(move |x1, x2| (d - 2.0 * x1 - x2, d - x1 - x2)),
        },
        // outer variable x2, middle x1
        Piece {
            outer: (0.0, v),
            middle: Box::new(move |x2| (x2, d - 3.0 * x2)),
            inner: Box::new(move |x2, x1| (d - x1 - 2.0 * x2, d - x1 - x2)),
        },
    ]
}

fn integrate_pieces(d: f64, pieces: &[Piece], nodes: usize) -> f64 {
    let (xs, ws) = gauss_legendre(nodes);
    let map = |(a, b): (f64, f64), i: usize| {
        let half = 0.5 * (b - a);
        (a + half * (xs[i] + 1.0), half * ws[i])
    };
    let per_piece: Vec<f64> = pieces
        .iter()
        .map(|piece| {
            let outer: Vec<f64> = (0..nodes)
                .into_par_iter()
                .map(|i| {
                    let (t, wt) = map(piece.outer, i);
                    let mut acc = 0.0;
                    for j in 0..nodes {
                        let (u, wu) = map((piece.middle)(t), j);
                        let mut inner = 0.0;
                        for k in 0..nodes {
                            let (x3, w3) = map((piece.inner)(t, u), k);
                            inner += w3 * (d - t - u - x3);
                        }
                        acc += wu * inner;
                    }
                    wt * acc
                })
                .collect();
            pairwise_sum(&outer)
        })
        .collect();
    per_piece.iter().sum()
}

fn check_d_star(d_star: f64) -> Result<()> {
    if !(d_star >= 0.0 && d_star.is_finite()) {
        return Err(Error::InvalidArgument(format!("d* must be >= 0, got {d_star}")));
    }
    Ok(())
}

/// `∫ (d* - x_1 - x_2 - x_3)` over the no-notch region; exact value `d*^4 / 384`.
/// For quadrature, `samples` is the number of nodes per axis.
pub fn integral_no_notch(d_star: f64, method: Method, samples: u64, seed: u64) -> Result<IntegralEstimate> {
    check_d_star(d_star)?;
    if samples == 0 {
        return Err(Error::BadSampleCount);
    }
    let (value, std_error) = match method {
        Method::MonteCarlo => mc_over_simplex::<3>(d_star, samples, seed, |x| {
            if in_region_no_notch(x, d_star) {
                d_star - x[0] - x[1] - x[2]
            } else {
                0.0
            }
        })?,
        Method::NestedQuadrature => (
            integrate_pieces(d_star, &no_notch_pieces(d_star), samples as usize),
            0.0,
        ),
    };
    Ok(IntegralEstimate {
        value,
        std_error,
        samples,
        method,
        seed,
    })
}

/// Same integrand over the region left when a notch sits at `(v, v, v, v)`;
/// exact value `2v^4 - (4d*/3) v^3 + (d*^2/4) v^2`.
pub fn integral_notch(cfg: &NotchConfig, method: Method, samples: u64, seed: u64) -> Result<IntegralEstimate> {
    check_d_star(cfg.d_star)?;
    if samples == 0 {
        return Err(Error::BadSampleCount);
    }
    let d = cfg.d_star;
    let (value, std_error) = match method {
        Method::MonteCarlo => mc_over_simplex::<3>(d, samples, seed, |x| {
            if in_region_notch(x, cfg) {
                d - x[0] - x[1] - x[2]
            } else {
                0.0
            }
        })?,
        Method::NestedQuadrature => (
            integrate_pieces(d, &notch_pieces(d, cfg.v), samples as usize),
            0.0,
        ),
    };
    Ok(IntegralEstimate {
        value,
        std_error,
        samples,
        method,
        seed,
    })
}

/// Monte Carlo volume of the corner `{ p in S(4, d*) : p >= (v,v,v,v) }`.
pub fn notch_region_volume_mc(cfg: &NotchConfig, samples: u64, seed: u64) -> Result<IntegralEstimate> {
    check_d_star(cfg.d_star)?;
    let (value, std_error) = mc_over_simplex::<4>(cfg.d_star, samples, seed, |x| {
        if in_notch_corner(x, cfg) {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(IntegralEstimate {
        value,
        std_error,
        samples,
        method: Method::MonteCarlo,
        seed,
    })
}
