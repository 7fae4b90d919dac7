//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's reduction, tile or search code; lattices are handled
//! through their generator rows only.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use simplex_cover::IntegerLattice;

/// Rows of the normalised basis as `i64`.
pub fn rows(l: &IntegerLattice) -> Vec<Vec<i64>> {
    l.basis_i64().expect("small test lattice")
}

/// Residue of `x` modulo a lower-triangular basis, written out from scratch:
/// clear coordinates from the last to the first.
pub fn residue(basis: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    let mut r = x.to_vec();
    for i in (0..basis.len()).rev() {
        let q = r[i].div_euclid(basis[i][i]);
        for (rj, bj) in r.iter_mut().zip(&basis[i]) {
            *rj -= q * bj;
        }
    }
    r
}

/// Index of the quotient group, as the number of distinct residues in the
/// diagonal box. Only meaningful for small determinants.
pub fn diagonal_product(basis: &[Vec<i64>]) -> i64 {
    (0..basis.len()).map(|i| basis[i][i]).product()
}

/// Diameter of the Cayley digraph of `Z^n / L` with generators `e_i`, by
/// breadth-first search over residues.
pub fn bfs_diameter(l: &IntegerLattice) -> u64 {
    let b = rows(l);
    let n = b.len();
    let start = vec![0i64; n];
    let mut dist: HashMap<Vec<i64>, u64> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    let mut far = 0;
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        far = far.max(dx);
        for i in 0..n {
            let mut y = x.clone();
            y[i] += 1;
            let y = residue(&b, &y);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), dx + 1);
                queue.push_back(y);
            }
        }
    }
    assert_eq!(dist.len() as i64, diagonal_product(&b), "BFS reached every coset");
    far
}

/// Points of `{x >= 0, sum x = s}` in lexicographic order.
pub fn shell(n: usize, s: u64) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![s as u32]];
    }
    let mut out = Vec::new();
    for first in 0..=s {
        for mut rest in shell(n - 1, s - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// The first point of every coset in the graded order (coordinate sum,
/// then lexicographic), by walking shells until every coset has been seen.
pub fn brute_tile(l: &IntegerLattice) -> Vec<Vec<u32>> {
    let b = rows(l);
    let n = b.len();
    let det = diagonal_product(&b) as usize;
    let mut seen = HashSet::new();
    let mut tile = Vec::new();
    let mut s = 0;
    while tile.len() < det {
        for p in shell(n, s) {
            let x: Vec<i64> = p.iter().map(|&c| c as i64).collect();
            if seen.insert(residue(&b, &x)) {
                tile.push(p);
            }
        }
        s += 1;
    }
    tile
}

/// Whether every coset meets `{x >= 0, sum x <= d}`, by counting residues.
pub fn simplex_covers(l: &IntegerLattice, d: u64) -> bool {
    let b = rows(l);
    let n = b.len();
    let mut seen = HashSet::new();
    for s in 0..=d {
        for p in shell(n, s) {
            let x: Vec<i64> = p.iter().map(|&c| c as i64).collect();
            seen.insert(residue(&b, &x));
        }
    }
    seen.len() as i64 == diagonal_product(&b)
}

/// Fraction-free Gaussian elimination (Bareiss) for `|det|` of a square matrix.
pub fn abs_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => a.swap(i, k),
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].abs()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b[0].len();
    a.iter()
        .map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect())
        .collect()
}

/// Product of random elementary row operations with small multipliers.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    if n < 2 {
        return u;
    }
    for _ in 0..(3 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3) {
            0 => u.swap(i, j),
            1 => u[i].iter_mut().for_each(|x| *x = -*x),
            _ => {
                let k = rng.gen_range(-2..=2);
                let rj = u[j].clone();
                for (x, y) in u[i].iter_mut().zip(rj) {
                    *x += k * y;
                }
            }
        }
    }
    u
}

/// Random full-rank generator matrix whose lattice has index at most
/// `max_index`: a random triangular matrix scrambled by a unimodular one.
pub fn random_generators(rng: &mut impl Rng, n: usize, max_index: u64) -> Vec<Vec<i64>> {
    let mut diag = vec![1i64; n];
    let mut index = 1u64;
    let target = rng.gen_range(1..=max_index);
    loop {
        let i = rng.gen_range(0..n);
        let grown = index / diag[i] as u64 * (diag[i] as u64 + 1);
        if grown > target {
            break;
        }
        diag[i] += 1;
        index = grown;
    }
    let tri: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => rng.gen_range(-4..=4),
                    std::cmp::Ordering::Equal => diag[i],
                    std::cmp::Ordering::Greater => 0,
                })
                .collect()
        })
        .collect();
    mat_mul(&random_unimodular(rng, n), &tri)
}

pub fn random_lattice(rng: &mut impl Rng, n: usize, max_index: u64) -> IntegerLattice {
    IntegerLattice::from_i64_rows(&random_generators(rng, n, max_index)).expect("full rank")
}

/// The corpus from the acceptance criteria: `count` lattices per dimension,
/// index at most 60 for n = 2, 3 and at most 30 for n = 4.
pub fn corpus(rng: &mut impl Rng, count: usize) -> Vec<IntegerLattice> {
    let mut out = Vec::new();
    for (n, cap) in [(2, 60), (3, 60), (4, 30)] {
        for _ in 0..count {
            out.push(random_lattice(rng, n, cap));
        }
    }
    out
}

pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m % d == 0).collect()
}

pub fn sigma(m: u64) -> u64 {
    divisors(m).iter().sum()
}

/// Number of index-`m` sublattices of `Z^3`: sum over `a b c = m` of `b c^2`.
pub fn sublattice_count_3(m: u64) -> u64 {
    let mut total = 0;
    for a in divisors(m) {
        for b in divisors(m / a) {
            let c = m / a / b;
            total += b * c * c;
        }
    }
    total
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
