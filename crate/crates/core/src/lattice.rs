//! Full-rank sublattices of `Z^n` in Hermite normal form.
//!
//! Bases are stored row-wise and lower triangular: row `i` is zero past
//! column `i`, its diagonal entry is positive, and every entry below a
//! diagonal entry lies in `[0, diagonal)` of that column. With this layout
//! the canonical coset representative of `x` lives in the box
//! `0 <= r_i < h_ii` and is found by back-substitution from the last row.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    basis: Vec<Vec<BigInt>>,
    det: BigInt,
}

/// On-disk lattice description: any generating set of rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub n: usize,
    pub basis: Vec<Vec<i64>>,
}

/// Normalises a generating set of integer rows to the canonical HNF basis.
pub fn hnf_normalize(rows: &[Vec<BigInt>]) -> Result<IntegerLattice> {
    IntegerLattice::from_rows(rows)
}

pub fn determinant(lattice: &IntegerLattice) -> BigInt {
    lattice.det.clone()
}

impl IntegerLattice {
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let n = rows.first().map(Vec::len).ok_or(Error::SingularBasis)?;
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        let mut pool: Vec<Vec<BigInt>> = rows
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let mut basis = vec![Vec::new(); n];

        // Column by column from the right: gcd-eliminate until exactly one
        // row has a nonzero entry there; that row becomes basis row `col`.
        for col in (0..n).rev() {
            loop {
                let pivot = pool
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| !r[col].is_zero())
                    .min_by(|(_, a), (_, b)| a[col].abs().cmp(&b[col].abs()))
                    .map(|(i, _)| i);
                let Some(p) = pivot else {
                    return Err(Error::SingularBasis);
                };
                let pivot_row = pool[p].clone();
                let mut done = true;
                for (i, row) in pool.iter_mut().enumerate() {
                    if i == p || row[col].is_zero() {
                        continue;
                    }
                    let q = row[col].div_floor(&pivot_row[col]);
                    sub_scaled(row, &pivot_row, &q);
                    if !row[col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    let mut row = pool.swap_remove(p);
                    if row[col].is_negative() {
                        row.iter_mut().for_each(|x| *x = -&*x);
                    }
                    basis[col] = row;
                    pool.retain(|r| r.iter().any(|x| !x.is_zero()));
                    break;
                }
            }
        }

        for i in 1..n {
            for j in (0..i).rev() {
                let q = basis[i][j].div_floor(&basis[j][j]);
                if !q.is_zero() {
                    let row_j = basis[j].clone();
                    sub_scaled(&mut basis[i], &row_j, &q);
                }
            }
        }

        let det = (0..n).fold(BigInt::one(), |acc, i| acc * &basis[i][i]);
        Ok(IntegerLattice { basis, det })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1)
    }

    /// The lattice `k Z^n`.
    pub fn scaled_identity(n: usize, k: u64) -> Self {
        assert!(n >= 1 && k >= 1);
        let basis = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::from(k) } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        IntegerLattice {
            basis,
            det: num_traits::pow(BigInt::from(k), n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.dim()).map(|i| self.basis[i][i].clone()).collect()
    }

    /// Basis as machine integers, when every entry fits.
    pub fn basis_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn to_file(&self) -> Option<LatticeFile> {
        Some(LatticeFile {
            n: self.dim(),
            basis: self.basis_i64()?,
        })
    }

    pub fn from_file(file: &LatticeFile) -> Result<Self> {
        if file.basis.iter().any(|r| r.len() != file.n) {
            let bad = file.basis.iter().find(|r| r.len() != file.n).unwrap();
            return Err(Error::DimensionMismatch {
                expected: file.n,
                found: bad.len(),
            });
        }
        Self::from_i64_rows(&file.basis)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }

    /// Canonical representative of `x + L` in the fundamental box.
    pub fn reduce_mod(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_dim(x.len())?;
        let mut r = x.to_vec();
        for i in (0..self.dim()).rev() {
            let q = r[i].div_floor(&self.basis[i][i]);
            if !q.is_zero() {
                sub_scaled(&mut r, &self.basis[i], &q);
            }
        }
        Ok(r)
    }

    pub fn reduce_mod_i64(&self, x: &[i64]) -> Result<Vec<BigInt>> {
        let x: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.reduce_mod(&x)
    }

    pub fn same_coset(&self, x: &[BigInt], y: &[BigInt]) -> Result<bool> {
        Ok(self.reduce_mod(x)? == self.reduce_mod(y)?)
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.reduce_mod(x)?.iter().all(Zero::is_zero))
    }

    /// Fast machine-integer coset indexing, available when the index fits
    /// comfortably in memory-sized integers.
    pub fn coset_indexer(&self) -> Result<CosetIndexer> {
        CosetIndexer::new(self)
    }
}

impl PartialOrd for IntegerLattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the flattened basis (rows have equal length, so row-wise
/// comparison is the same thing).
impl Ord for IntegerLattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.basis.cmp(&other.basis)
    }
}

fn sub_scaled(row: &mut [BigInt], by: &[BigInt], q: &BigInt) {
    for (a, b) in row.iter_mut().zip(by) {
        if !b.is_zero() {
            *a -= q * b;
        }
    }
}

/// Largest index handled by [`CosetIndexer`].
pub const MAX_INDEXED_DET: u64 = 1 << 32;

/// Maps integer vectors to `0..det` by reducing into the fundamental box and
/// reading the residue as a mixed-radix number.
#[derive(Clone, Debug)]
pub struct CosetIndexer {
    basis: Vec<Vec<i64>>,
    strides: Vec<u64>,
    det: u64,
}

impl CosetIndexer {
    fn new(lattice: &IntegerLattice) -> Result<Self> {
        let det = lattice
            .det
            .to_u64()
            .filter(|&d| d <= MAX_INDEXED_DET)
            .ok_or_else(|| Error::TooLarge(format!("lattice index {}", lattice.det)))?;
        // Entries below the diagonal are smaller than det, so they fit.
        let basis = lattice.basis_i64().expect("entries bounded by det");
        let n = basis.len();
        let mut strides = vec![1u64; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * basis[i + 1][i + 1] as u64;
        }
        Ok(CosetIndexer {
            basis,
            strides,
            det,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn det(&self) -> u64 {
        self.det
    }

    /// Residue of `x` in the fundamental box.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        debug_assert_eq!(x.len(), self.dim());
        let mut r = x.to_vec();
        for i in (0..self.dim()).rev() {
            let q = r[i].div_euclid(self.basis[i][i]);
            if q != 0 {
                for j in 0..=i {
                    r[j] -= q * self.basis[i][j];
                }
            }
        }
        r
    }

    pub fn index(&self, x: &[i64]) -> usize {
        let r = self.reduce(x);
        r.iter()
            .zip(&self.strides)
            .map(|(&v, &s)| v as u64 * s)
            .sum::<u64>() as usize
    }

    pub fn index_u32(&self, x: &[u32]) -> usize {
        let x: Vec<i64> = x.iter().map(|&v| v as i64).collect();
        self.index(&x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }
}

/// Every canonical HNF lattice of index exactly `m` in `Z^n`, in
/// lexicographic order of the flattened basis.
pub fn enumerate_sublattices(n: usize, m: u64) -> Vec<IntegerLattice> {
    assert!(n >= 1 && m >= 1);
    let mut out = Vec::new();
    let mut basis = vec![vec![0i64; n]; n];
    // Flattened positions below and on the diagonal, in row-major order.
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    fill(&positions, 0, m, &mut basis, &mut out);
    out
}

fn fill(
    positions: &[(usize, usize)],
    at: usize,
    remaining: u64,
    basis: &mut Vec<Vec<i64>>,
    out: &mut Vec<IntegerLattice>,
) {
    let n = basis.len();
    if at == positions.len() {
        let rows: Vec<Vec<BigInt>> = basis
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let det = BigInt::from(
            (0..n).map(|i| basis[i][i] as u64).product::<u64>(),
        );
        out.push(IntegerLattice { basis: rows, det });
        return;
    }
    let (i, j) = positions[at];
    if i == j {
        if i == n - 1 {
            basis[i][i] = remaining as i64;
            fill(positions, at + 1, 1, basis, out);
        } else {
            for dv in divisors(remaining) {
                basis[i][i] = dv as i64;
                fill(positions, at + 1, remaining / dv, basis, out);
            }
        }
    } else {
        for h in 0..basis[j][j] {
            basis[i][j] = h;
            fill(positions, at + 1, remaining, basis, out);
        }
        basis[i][j] = 0;
    }
}

/// Divisors of `m` in increasing order.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= m {
        if m % k == 0 {
            small.push(k);
            if k != m / k {
                large.push(m / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
