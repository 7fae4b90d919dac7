//! Exhaustive search for `f(n, d)`, the largest order of an abelian group
//! with an `n`-element generating set whose Cayley digraph has diameter at
//! most `d`, together with the closed-form upper bounds.
//!
//! Such a group is `Z^n / L` for a sublattice `L` of index `|G|`, and the
//! diameter is the M-diameter of its Cayley tile. The search walks indices
//! downward from a proven upper bound and stops at the first index that has
//! a sublattice with tile diameter at most `d`.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covering::{factorial, simplex_size};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_sublattices, IntegerLattice, LatticeFile};
use crate::rational::Rational;
use crate::tile::diameter_at_most;

/// Environment variable read for the default worker count.
pub const THREADS_ENV: &str = "SIMPLEX_COVER_THREADS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub n: usize,
    pub d: u64,
    pub f_value: BigInt,
    pub witness: IntegerLattice,
    pub binomial_cap: BigInt,
    pub analytic_upper: Rational,
    pub candidates_scanned: u64,
    pub exhaustive: bool,
    pub elapsed_ms: u64,
}

/// JSON layout of a [`SearchReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReportJson {
    pub n: usize,
    pub d: u64,
    #[serde(with = "crate::report::bigint_json")]
    pub f: BigInt,
    pub witness_basis: Vec<Vec<i64>>,
    #[serde(with = "crate::report::bigint_json")]
    pub binomial_cap: BigInt,
    pub analytic_upper: Rational,
    pub candidates_scanned: u64,
    pub exhaustive: bool,
    pub elapsed_ms: u64,
}

impl SearchReport {
    pub fn to_json(&self) -> SearchReportJson {
        SearchReportJson {
            n: self.n,
            d: self.d,
            f: self.f_value.clone(),
            witness_basis: self.witness.basis_i64().expect("witness index fits in memory"),
            binomial_cap: self.binomial_cap.clone(),
            analytic_upper: self.analytic_upper.clone(),
            candidates_scanned: self.candidates_scanned,
            exhaustive: self.exhaustive,
            elapsed_ms: self.elapsed_ms,
        }
    }

    pub fn from_json(json: &SearchReportJson) -> Result<Self> {
        let witness = IntegerLattice::from_file(&LatticeFile {
            n: json.n,
            basis: json.witness_basis.clone(),
        })?;
        Ok(SearchReport {
            n: json.n,
            d: json.d,
            f_value: json.f.clone(),
            witness,
            binomial_cap: json.binomial_cap.clone(),
            analytic_upper: json.analytic_upper.clone(),
            candidates_scanned: json.candidates_scanned,
            exhaustive: json.exhaustive,
            elapsed_ms: json.elapsed_ms,
        })
    }

    /// Minimum covering density `C(d+n, n) / f(n, d)`.
    pub fn min_density(&self) -> Rational {
        Rational::new(self.binomial_cap.clone(), self.f_value.clone()).expect("f >= 1")
    }
}

/// `floor((d+2)^2 / 3)`, the exact value of `f(2, d)`.
pub fn f2_closed_form(d: u64) -> BigInt {
    let s = BigInt::from(d + 2);
    &s * &s / 3
}

/// `3 (d+3)^3 / 25`.
pub fn f3_upper_bound(d: u64) -> Rational {
    Rational::new(3 * num_traits::pow(BigInt::from(d + 3), 3), 25).expect("nonzero")
}

/// `11 (d+4)^4 / 343`.
pub fn f4_upper_bound(d: u64) -> Rational {
    Rational::new(11 * num_traits::pow(BigInt::from(d + 4), 4), 343).expect("nonzero")
}

/// `n - 1 + ((n-1)/(2n-1))^(n-1)`, the factor shared by the general bounds.
fn general_factor(n: usize) -> Rational {
    let m = n as i64;
    Rational::from_integer(m - 1) + Rational::frac(m - 1, 2 * m - 1).pow((n - 1) as u32)
}

/// `(d+n)^n / (n * n!) * (n - 1 + ((n-1)/(2n-1))^(n-1))`.
pub fn fn_upper_bound(n: usize, d: u64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let lead = Rational::new(
        num_traits::pow(BigInt::from(d + n as u64), n),
        BigInt::from(n) * factorial(n as u64),
    )?;
    Ok(lead * general_factor(n))
}

/// `n / (n - 1 + ((n-1)/(2n-1))^(n-1))`, lower bound for the lattice
/// covering density of the n-simplex.
pub fn theta_lower_bound(n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    Rational::from_integer(n as i64).checked_div(&general_factor(n))
}

/// Tightest available analytic upper bound on `f(n, d)`.
pub fn analytic_upper_bound(n: usize, d: u64) -> Rational {
    match n {
        0 => Rational::one(),
        1 => Rational::from_integer(d as i64 + 1),
        2 => fn_upper_bound(2, d).expect("n >= 2"),
        3 => f3_upper_bound(d),
        4 => f4_upper_bound(d),
        _ => fn_upper_bound(n, d).expect("n >= 2"),
    }
}

/// `min(C(d+n, n), floor(upper bound))`: no index above this can succeed.
pub fn default_index_cap(n: usize, d: u64) -> u64 {
    let cap = simplex_size(n, d).min(analytic_upper_bound(n, d).floor());
    cap.to_u64().unwrap_or(u64::MAX)
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Start the downward scan here instead of at [`default_index_cap`].
    pub index_cap: Option<u64>,
    /// Worker threads; `None` uses the current rayon pool.
    pub threads: Option<usize>,
}

pub fn brute_force_f(n: usize, d: u64, index_cap: Option<u64>) -> Result<SearchReport> {
    brute_force_f_with(
        n,
        d,
        &SearchOptions {
            index_cap,
            threads: None,
        },
    )
}

/// Scans indices `cap, cap-1, ..., 1`; at each index every HNF sublattice is
/// tested in parallel and the lexicographically least success is the witness.
///
/// A user cap below the default makes the report non-exhaustive; if the scan
/// succeeds right at such a cap the true value may be larger and
/// [`Error::CapTooSmall`] carries the best-found report.
pub fn brute_force_f_with(n: usize, d: u64, opts: &SearchOptions) -> Result<SearchReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| search(n, d, opts.index_cap)),
        None => search(n, d, opts.index_cap),
    }
}

fn search(n: usize, d: u64, user_cap: Option<u64>) -> Result<SearchReport> {
    let start = Instant::now();
    let default_cap = default_index_cap(n, d);
    let cap = user_cap.unwrap_or(default_cap);
    if cap == 0 {
        return Err(Error::InvalidArgument("index cap must be positive".into()));
    }
    let exhaustive = cap >= default_cap;
    let mut scanned = 0u64;

    for m in (1..=cap).rev() {
        let candidates = enumerate_sublattices(n, m);
        scanned += candidates.len() as u64;
        // Candidates are in lexicographic order, so the first success is the least.
        let hit = candidates
            .into_par_iter()
            .find_first(|l| diameter_at_most(l, d).unwrap_or(false));
        if let Some(witness) = hit {
            let report = SearchReport {
                n,
                d,
                f_value: BigInt::from(m),
                witness,
                binomial_cap: simplex_size(n, d),
                analytic_upper: analytic_upper_bound(n, d),
                candidates_scanned: scanned,
                exhaustive,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            if !exhaustive && m == cap {
                return Err(Error::CapTooSmall {
                    cap,
                    report: Box::new(report),
                });
            }
            return Ok(report);
        }
    }
    unreachable!("Z^n itself has diameter 0")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRow {
    pub d: u64,
    pub density: Rational,
    pub witness: IntegerLattice,
    pub f_value: BigInt,
}

/// Minimum covering density `C(d+n, n) / f(n, d)` for each `d`.
pub fn density_trend(n: usize, ds: &[u64], index_cap: Option<u64>) -> Result<Vec<DensityRow>> {
    ds.iter()
        .map(|&d| {
            let report = brute_force_f(n, d, index_cap)?;
            Ok(DensityRow {
                d,
                density: report.min_density(),
                witness: report.witness,
                f_value: report.f_value,
            })
        })
        .collect()
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&t| t > 0)
}
