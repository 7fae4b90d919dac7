//! Lattice coverings of `Z^n` by the discrete simplex
//! `S°(n,d) = { z >= 0 : z_1 + ... + z_n <= d }` and their continuous lift.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntegerLattice;
use crate::rational::Rational;
use crate::tile::{self, build_tile, OrthantPoint};

/// Default sampling resolution of [`continuous_cover_falsify`].
pub const DEFAULT_RESOLUTION: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteSimplex {
    pub n: usize,
    pub d: u64,
    pub size: BigInt,
}

impl DiscreteSimplex {
    pub fn new(n: usize, d: u64) -> Self {
        DiscreteSimplex {
            n,
            d,
            size: simplex_size(n, d),
        }
    }

    pub fn points(&self) -> impl Iterator<Item = OrthantPoint> {
        tile::simplex_points(self.n, self.d)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.n && x.iter().all(|&c| c >= 0) && x.iter().sum::<i64>() <= self.d as i64
    }
}

/// Exact binomial coefficient `C(d+n, n)`.
pub fn simplex_size(n: usize, d: u64) -> BigInt {
    binomial(d + n as u64, n as u64)
}

pub fn binomial(top: u64, k: u64) -> BigInt {
    let k = k.min(top.saturating_sub(k));
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(top - i) / BigInt::from(i + 1))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringVerdict {
    pub covered: bool,
    pub density: Option<Rational>,
    pub witness: Option<Vec<i64>>,
    pub tile_diameter: u64,
}

/// Decides `S°(n,d) + L = Z^n` through the Cayley tile: it covers iff the
/// tile's M-diameter is at most `d`. An uncovered witness is a tile point of
/// M-norm greater than `d`.
pub fn covers_discrete(n: usize, d: u64, lattice: &IntegerLattice) -> Result<CoveringVerdict> {
    if lattice.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lattice.dim(),
        });
    }
    let tile = build_tile(lattice)?;
    let covered = tile.m_diameter() <= d;
    let witness = (!covered).then(|| {
        tile.points()
            .iter()
            .find(|p| p.m_norm() > d)
            .expect("diameter exceeds d")
            .to_i64()
    });
    let density = covered
        .then(|| Rational::new(simplex_size(n, d), lattice.det().clone()))
        .transpose()?;
    Ok(CoveringVerdict {
        covered,
        density,
        witness,
        tile_diameter: tile.m_diameter(),
    })
}

/// `C(d+n, n) / det(L)` for a covering.
pub fn discrete_density(n: usize, d: u64, lattice: &IntegerLattice) -> Result<Rational> {
    let verdict = covers_discrete(n, d, lattice)?;
    match verdict.density {
        Some(density) => Ok(density),
        None => Err(Error::NotACovering {
            witness: verdict.witness.unwrap_or_default(),
            d,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuousLift {
    /// Radius of the continuous simplex `S(n, D)` that covers `E^n`.
    #[serde(rename = "D")]
    pub big_d: u64,
    pub continuous_density: Rational,
}

/// A discrete covering at radius `d` lifts to a covering of `E^n` by
/// `S(n, d+n) + L`; reports that radius with density `(d+n)^n / (n! det L)`.
pub fn lift_to_continuous(n: usize, d: u64, lattice: &IntegerLattice) -> Result<ContinuousLift> {
    discrete_density(n, d, lattice)?;
    let big_d = d + n as u64;
    let volume = Rational::new(
        num_traits::pow(BigInt::from(big_d), n),
        factorial(n as u64),
    )?;
    let continuous_density = volume.checked_div(&Rational::from_integer(lattice.det().clone()))?;
    Ok(ContinuousLift {
        big_d,
        continuous_density,
    })
}

/// Rounds every coordinate of `k * row` to the nearest integer (ties go up)
/// and normalises the result.
pub fn round_scaled_lattice(real_basis: &[Vec<f64>], k: f64) -> Result<IntegerLattice> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {k}")));
    }
    let n = real_basis.len();
    let mut rows = Vec::with_capacity(n);
    for row in real_basis {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        let rounded: Option<Vec<BigInt>> = row
            .iter()
            .map(|&x| BigInt::from_f64((k * x + 0.5).floor()))
            .collect();
        rows.push(rounded.ok_or_else(|| Error::InvalidArgument("non-finite basis entry".into()))?);
    }
    IntegerLattice::from_rows(&rows).map_err(|e| match e {
        Error::SingularBasis => Error::SingularAfterRounding,
        other => other,
    })
}

/// Scans the grid `(1/resolution) Z^n` inside the fundamental box of `L` and
/// returns the first sample not covered by `S(n, D) + L`, where
/// `S(n, D) = { x >= 0 : sum x_i <= D }`.
///
/// `None` is evidence only; a returned point is a certificate of
/// non-covering. Samples are visited in lexicographic order and the
/// earliest uncovered one is reported regardless of worker count.
pub fn continuous_cover_falsify(
    n: usize,
    big_d: &Rational,
    lattice: &IntegerLattice,
    resolution: u32,
) -> Result<Option<Vec<Rational>>> {
    if lattice.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lattice.dim(),
        });
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let grid = FalsifierGrid::new(big_d, lattice, resolution)?;
    let total = grid.extent.iter().try_fold(1u64, |acc, &e| acc.checked_mul(e));
    let total = total.ok_or_else(|| Error::TooLarge("sample grid".into()))?;

    let hit = (0..total)
        .into_par_iter()
        .map(|idx| grid.sample(idx))
        .find_first(|k| !grid.covered(k));
    Ok(hit.map(|k| {
        k.iter()
            .map(|&c| Rational::frac(c, resolution as i64))
            .collect()
    }))
}

/// Direct check that the rational point `p` lies in `S(n, D) + v` for some
/// lattice vector `v`, by enumerating every integer `v` with
/// `p_i - D <= v_i <= p_i`.
pub fn continuous_point_covered(
    p: &[Rational],
    big_d: &Rational,
    lattice: &IntegerLattice,
) -> Result<bool> {
    let n = lattice.dim();
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.len(),
        });
    }
    let lo: Vec<BigInt> = p.iter().map(|c| -((big_d - c).floor())).collect();
    let hi: Vec<BigInt> = p.iter().map(Rational::floor).collect();
    let mut v = lo.clone();
    loop {
        if lattice.contains(&v)? {
            let mut sum = Rational::zero();
            let mut inside = true;
            for (c, vi) in p.iter().zip(&v) {
                let diff = c - &Rational::from_integer(vi.clone());
                if diff < Rational::zero() {
                    inside = false;
                    break;
                }
                sum = sum + diff;
            }
            if inside && &sum <= big_d {
                return Ok(true);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if v[i] < hi[i] {
                v[i] += 1;
                for j in i + 1..n {
                    v[j] = lo[j].clone();
                }
                break;
            }
        }
    }
}

/// Samples are stored scaled by the resolution: sample `k` is the point `k / res`.
struct FalsifierGrid {
    indexer: crate::lattice::CosetIndexer,
    extent: Vec<u64>,
    res: i128,
    d_num: i128,
    d_den: i128,
}

impl FalsifierGrid {
    fn new(big_d: &Rational, lattice: &IntegerLattice, resolution: u32) -> Result<Self> {
        let indexer = lattice.coset_indexer()?;
        let diag = lattice.diagonal();
        let extent = diag
            .iter()
            .map(|h| h.to_u64().map(|h| h * resolution as u64))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::TooLarge("fundamental box".into()))?;
        let too_big = || Error::TooLarge(format!("radius {big_d}"));
        let d_num = big_d.numer().to_i128().ok_or_else(too_big)?;
        let d_den = big_d.denom().to_i128().ok_or_else(too_big)?;
        Ok(FalsifierGrid {
            indexer,
            extent,
            res: resolution as i128,
            d_num,
            d_den,
        })
    }

    fn sample(&self, mut idx: u64) -> Vec<i64> {
        let mut k = vec![0i64; self.extent.len()];
        for i in (0..k.len()).rev() {
            k[i] = (idx % self.extent[i]) as i64;
            idx /= self.extent[i];
        }
        k
    }

    fn covered(&self, k: &[i64]) -> bool {
        if self.d_num < 0 {
            return false;
        }
        let n = k.len();
        // v_i ranges over integers in [k_i/res - D, k_i/res].
        let scale = self.res * self.d_den;
        let lo: Vec<i64> = k
            .iter()
            .map(|&ki| {
                let num = ki as i128 * self.d_den - self.res * self.d_num;
                -Integer::div_floor(&(-num), &scale) as i64
            })
            .collect();
        let hi: Vec<i64> = k.iter().map(|&ki| Integer::div_floor(&(ki as i128), &self.res) as i64).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return false;
        }
        let budget = self.res * self.d_num;
        let mut v = lo.clone();
        loop {
            let slack: i128 = k
                .iter()
                .zip(&v)
                .map(|(&ki, &vi)| ki as i128 - self.res * vi as i128)
                .sum();
            if slack * self.d_den <= budget && self.indexer.contains(&v) {
                return true;
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if v[i] < hi[i] {
                    v[i] += 1;
                    v[i + 1..].copy_from_slice(&lo[i + 1..]);
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5() -> IntegerLattice {
        IntegerLattice::from_i64_rows(&[vec![5, 0], vec![3, 1]]).unwrap()
    }

    #[test]
    fn simplex_sizes() {
        assert_eq!(simplex_size(4, 0), BigInt::from(1));
        assert_eq!(simplex_size(2, 2), BigInt::from(6));
        assert_eq!(simplex_size(3, 2), BigInt::from(10));
        assert_eq!(simplex_size(2, 10), BigInt::from(66));
        for n in 1..5 {
            for d in 0..8 {
                assert_eq!(
                    simplex_size(n, d),
                    BigInt::from(DiscreteSimplex::new(n, d).points().count())
                );
            }
        }
    }

    #[test]
    fn covering_examples() {
        let v = covers_discrete(2, 2, &z5()).unwrap();
        assert!(v.covered);
        assert_eq!(v.density, Some(Rational::frac(6, 5)));
        assert_eq!(v.witness, None);
        assert_eq!(v.tile_diameter, 2);

        let v = covers_discrete(2, 1, &z5()).unwrap();
        assert!(!v.covered);
        assert_eq!(v.witness, Some(vec![0, 2]));
        assert_eq!(v.density, None);

        for d in 0..5 {
            let v = covers_discrete(3, d, &IntegerLattice::identity(3)).unwrap();
            assert!(v.covered);
            assert_eq!(v.density, Some(Rational::from_integer(simplex_size(3, d))));
        }
        assert!(covers_discrete(3, 2, &z5()).is_err());
    }

    #[test]
    fn density_examples() {
        assert_eq!(discrete_density(2, 2, &z5()).unwrap(), Rational::frac(6, 5));
        assert!(matches!(
            discrete_density(2, 1, &z5()),
            Err(Error::NotACovering { .. })
        ));
    }

    #[test]
    fn lift_examples() {
        let lift = lift_to_continuous(2, 2, &z5()).unwrap();
        assert_eq!(lift.big_d, 4);
        assert_eq!(lift.continuous_density, Rational::frac(8, 5));
        // n^n / n! for the single-coset case
        let lift = lift_to_continuous(3, 0, &IntegerLattice::identity(3)).unwrap();
        assert_eq!(lift.continuous_density, Rational::frac(27, 6));
        let lift = lift_to_continuous(3, 4, &IntegerLattice::identity(3)).unwrap();
        assert_eq!(lift.continuous_density, Rational::frac(343, 6));
        assert!(lift_to_continuous(2, 1, &z5()).is_err());
    }

    #[test]
    fn rounding_examples() {
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(
            round_scaled_lattice(&id, 7.0).unwrap(),
            IntegerLattice::scaled_identity(2, 7)
        );
        let b = vec![vec![1.2, 0.0], vec![0.4, 1.0]];
        let l = round_scaled_lattice(&b, 10.0).unwrap();
        assert_eq!(l, IntegerLattice::from_i64_rows(&[vec![12, 0], vec![4, 10]]).unwrap());
        assert_eq!(l.det(), &BigInt::from(120));
        // ties toward +inf: 0.25 * 2 = 0.5 -> 1, -0.25 * 2 = -0.5 -> 0
        let t = vec![vec![0.25, 1.0], vec![-0.25, 1.0]];
        let l = round_scaled_lattice(&t, 2.0).unwrap();
        assert_eq!(l, IntegerLattice::from_i64_rows(&[vec![1, 2], vec![0, 2]]).unwrap());
        let tiny = vec![vec![0.01, 0.0], vec![0.0, 1.0]];
        assert!(matches!(
            round_scaled_lattice(&tiny, 1.0),
            Err(Error::SingularAfterRounding)
        ));
    }

    #[test]
    fn falsifier_identity_covers() {
        for n in 1..4 {
            let none = continuous_cover_falsify(
                n,
                &Rational::from_integer(n as i64),
                &IntegerLattice::identity(n),
                4,
            )
            .unwrap();
            assert_eq!(none, None);
        }
    }

    #[test]
    fn falsifier_accepts_lifted_covering() {
        let got = continuous_cover_falsify(2, &Rational::from_integer(4), &z5(), 4).unwrap();
        assert_eq!(got, None);
    }

    #[test]
    fn falsifier_finds_gap_in_sparse_lattice() {
        let l = IntegerLattice::scaled_identity(2, 2);
        let d = Rational::one();
        let w = continuous_cover_falsify(2, &d, &l, 2).unwrap().expect("gap");
        assert!(!continuous_point_covered(&w, &d, &l).unwrap());
        // (1, 1/2) is uncovered as well
        let p = vec![Rational::one(), Rational::frac(1, 2)];
        assert!(!continuous_point_covered(&p, &d, &l).unwrap());
        // while (1/2, 1/2) is covered by the translate at the origin
        let p = vec![Rational::frac(1, 2), Rational::frac(1, 2)];
        assert!(continuous_point_covered(&p, &d, &l).unwrap());
    }

    #[test]
    fn falsifier_agrees_with_direct_check() {
        let l = IntegerLattice::from_i64_rows(&[vec![3, 0], vec![1, 2]]).unwrap();
        for big_d in [Rational::frac(1, 2), Rational::one(), Rational::frac(3, 2), Rational::from_integer(2)] {
            let res = 3;
            let w = continuous_cover_falsify(2, &big_d, &l, res).unwrap();
            // brute force the same grid in the same order
            let mut first = None;
            'outer: for a in 0..3 * res as i64 {
                for b in 0..2 * res as i64 {
                    let p = vec![Rational::frac(a, res as i64), Rational::frac(b, res as i64)];
                    if !continuous_point_covered(&p, &big_d, &l).unwrap() {
                        first = Some(p);
                        break 'outer;
                    }
                }
            }
            assert_eq!(w, first, "D = {big_d}");
        }
    }
}
