//! Cayley tiles: the least representative of every coset of a sublattice,
//! taken in the graded order on the nonnegative orthant.
//!
//! Points of `Z^n ∩ O_n` are ordered first by their coordinate sum
//! (the M-norm) and then lexicographically, so `(0,0) < (0,1) < (1,0) <
//! (0,2) < ...`. Scanning the orthant in this order and keeping the first
//! point seen in each coset yields the tile `T`. Its translates by `L`
//! tile `Z^n`, and its largest M-norm equals the diameter of the Cayley
//! digraph of `Z^n / L` with generators `e_1, ..., e_n`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntegerLattice;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrthantPoint {
    coords: Vec<u32>,
    m_norm: u64,
}

impl OrthantPoint {
    pub fn new(coords: Vec<u32>) -> Self {
        let m_norm = coords.iter().map(|&c| c as u64).sum();
        OrthantPoint { coords, m_norm }
    }

    pub fn origin(n: usize) -> Self {
        OrthantPoint::new(vec![0; n])
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn m_norm(&self) -> u64 {
        self.m_norm
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.coords.iter().map(|&c| c as i64).collect()
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &OrthantPoint) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    /// `π_axis`: the point with coordinate `axis` set to zero.
    pub fn project(&self, axis: usize) -> OrthantPoint {
        let mut coords = self.coords.clone();
        coords[axis] = 0;
        OrthantPoint::new(coords)
    }
}

impl Ord for OrthantPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.m_norm
            .cmp(&other.m_norm)
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for OrthantPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for OrthantPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrthantPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<u32>::deserialize(d).map(OrthantPoint::new)
    }
}

/// The graded order: M-norm first, lexicographic within a shell.
pub fn prec_compare(x: &OrthantPoint, y: &OrthantPoint) -> Result<Ordering> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(x.cmp(y))
}

/// The same order extended to all of `Z^n` (sum first, then lexicographic).
/// Compatible with addition, so `o < v` iff `u < u + v`.
pub fn signed_prec_compare(x: &[i64], y: &[i64]) -> Ordering {
    let sx: i64 = x.iter().sum();
    let sy: i64 = y.iter().sum();
    sx.cmp(&sy).then_with(|| x.cmp(y))
}

/// Unbounded stream of `Z^n ∩ O_n` in increasing graded order.
#[derive(Clone, Debug)]
pub struct OrthantStream {
    next: Vec<u32>,
}

pub fn enumerate_orthant_prec(n: usize) -> OrthantStream {
    assert!(n >= 1, "dimension must be positive");
    OrthantStream { next: vec![0; n] }
}

impl Iterator for OrthantStream {
    type Item = OrthantPoint;

    fn next(&mut self) -> Option<OrthantPoint> {
        let current = self.next.clone();
        let n = current.len();
        // Next composition of the same total in lexicographic order: bump the
        // rightmost position that still has mass to its right, and move the
        // rest of that mass to the last coordinate.
        let mut tail = 0u32;
        let mut bumped = false;
        for i in (0..n.saturating_sub(1)).rev() {
            tail += self.next[i + 1];
            if tail > 0 {
                self.next[i] += 1;
                for c in &mut self.next[i + 1..] {
                    *c = 0;
                }
                self.next[n - 1] = tail - 1;
                bumped = true;
                break;
            }
        }
        if !bumped {
            let total: u32 = current.iter().sum();
            self.next = vec![0; n];
            self.next[n - 1] = total + 1;
        }
        Some(OrthantPoint::new(current))
    }
}

/// All points of the discrete simplex `S°(n, d)` in graded order.
pub fn simplex_points(n: usize, d: u64) -> impl Iterator<Item = OrthantPoint> {
    enumerate_orthant_prec(n).take_while(move |p| p.m_norm() <= d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTile {
    dim: usize,
    points: Vec<OrthantPoint>,
    m_diameter: u64,
    source_lattice: IntegerLattice,
}

/// Per-axis projections of a tile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Silhouette {
    pub projections: Vec<BTreeSet<OrthantPoint>>,
}

/// Scans the orthant in graded order and keeps the first point of each coset.
pub fn build_tile(lattice: &IntegerLattice) -> Result<CayleyTile> {
    let indexer = lattice.coset_indexer()?;
    let det = indexer.det() as usize;
    let n = lattice.dim();
    let mut seen = vec![false; det];
    let mut points = Vec::with_capacity(det);
    for p in enumerate_orthant_prec(n) {
        let k = indexer.index_u32(p.coords());
        if !seen[k] {
            seen[k] = true;
            points.push(p);
            if points.len() == det {
                break;
            }
        }
    }
    let m_diameter = points.last().map_or(0, OrthantPoint::m_norm);
    Ok(CayleyTile {
        dim: n,
        points,
        m_diameter,
        source_lattice: lattice.clone(),
    })
}

/// True iff every coset has a representative of M-norm at most `d`, i.e. the
/// tile's M-diameter is at most `d`. Stops as soon as the scan leaves
/// `S°(n, d)` or all cosets are found.
pub fn diameter_at_most(lattice: &IntegerLattice, d: u64) -> Result<bool> {
    let indexer = lattice.coset_indexer()?;
    let det = indexer.det() as usize;
    let mut seen = vec![false; det];
    let mut found = 0usize;
    for p in simplex_points(lattice.dim(), d) {
        let k = indexer.index_u32(p.coords());
        if !seen[k] {
            seen[k] = true;
            found += 1;
            if found == det {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

impl CayleyTile {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points in graded order.
    pub fn points(&self) -> &[OrthantPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn m_diameter(&self) -> u64 {
        self.m_diameter
    }

    pub fn source_lattice(&self) -> &IntegerLattice {
        &self.source_lattice
    }

    pub fn point_set(&self) -> HashSet<Vec<u32>> {
        self.points.iter().map(|p| p.coords.clone()).collect()
    }

    /// Largest coordinate along each axis.
    pub fn axis_extent(&self) -> Vec<u32> {
        (0..self.dim)
            .map(|i| self.points.iter().map(|p| p.coords[i]).max().unwrap_or(0))
            .collect()
    }

    pub fn silhouette(&self) -> Silhouette {
        silhouette(self)
    }

    pub fn find_notch(&self) -> Result<Option<OrthantPoint>> {
        find_notch(self)
    }

    pub fn is_downward_closed(&self) -> bool {
        is_downward_closed(&self.points)
    }

    /// Stable export record.
    pub fn export(&self) -> Result<TileExport> {
        Ok(TileExport {
            n: self.dim,
            det: self.source_lattice.det().clone(),
            diameter: self.m_diameter,
            points: self.points.clone(),
            notch: self.find_notch()?,
        })
    }

    /// Character grid for 2-D tiles: `#` tile point, `o` notch, `.` empty;
    /// the top row has the largest second coordinate.
    pub fn render_ascii(&self) -> Result<String> {
        if self.dim != 2 {
            return Err(Error::InvalidArgument(format!(
                "ASCII rendering needs a 2-D tile, got dimension {}",
                self.dim
            )));
        }
        let notch = self.find_notch()?;
        let set = self.point_set();
        let ext = self.axis_extent();
        let mut out = String::new();
        for y in (0..=ext[1] + 1).rev() {
            for x in 0..=ext[0] + 1 {
                let c = if set.contains(&vec![x, y]) {
                    '#'
                } else if notch.as_ref().is_some_and(|v| v.coords() == [x, y]) {
                    'o'
                } else {
                    '.'
                };
                out.push(c);
            }
            out.push('\n');
        }
        Ok(out)
    }
}

pub fn m_diameter(tile: &CayleyTile) -> u64 {
    tile.m_diameter
}

pub fn silhouette(tile: &CayleyTile) -> Silhouette {
    let projections = (0..tile.dim)
        .map(|axis| tile.points.iter().map(|p| p.project(axis)).collect())
        .collect();
    Silhouette { projections }
}

impl Silhouette {
    pub fn dim(&self) -> usize {
        self.projections.len()
    }

    pub fn contains(&self, axis: usize, p: &OrthantPoint) -> bool {
        self.projections[axis].contains(p)
    }

    /// Whether `p` lies under the silhouette in every axis direction.
    pub fn dominates_all_projections(&self, p: &OrthantPoint) -> bool {
        (0..self.dim()).all(|axis| self.contains(axis, &p.project(axis)))
    }
}

/// Whether `0 <= y <= x` with `x` in the set always puts `y` in the set.
/// Checking the unit steps down from every point suffices.
pub fn is_downward_closed(points: &[OrthantPoint]) -> bool {
    let set: HashSet<&[u32]> = points.iter().map(|p| p.coords()).collect();
    points.iter().all(|p| {
        (0..p.dim()).all(|i| {
            if p.coords[i] == 0 {
                return true;
            }
            let mut q = p.coords.clone();
            q[i] -= 1;
            set.contains(q.as_slice())
        })
    })
}

/// The componentwise-minimal point outside the tile whose every projection
/// lies in the silhouette. Candidates are scanned over the box
/// `[0, extent_i + 1]`; more than one minimal candidate contradicts the
/// structure theory of lattice tiles and is reported as an error.
pub fn find_notch(tile: &CayleyTile) -> Result<Option<OrthantPoint>> {
    let sil = silhouette(tile);
    let set = tile.point_set();
    let bounds: Vec<u32> = tile.axis_extent().iter().map(|&e| e + 1).collect();

    let mut candidates = Vec::new();
    for_each_in_box(&bounds, |coords| {
        if set.contains(coords) {
            return;
        }
        let p = OrthantPoint::new(coords.to_vec());
        if sil.dominates_all_projections(&p) {
            candidates.push(p);
        }
    });
    if candidates.is_empty() {
        return Ok(None);
    }

    let minimal: Vec<&OrthantPoint> = candidates
        .iter()
        .filter(|p| !candidates.iter().any(|q| q != *p && q.dominated_by(p)))
        .collect();
    if minimal.len() != 1 {
        return Err(Error::MultipleMinimalNotches {
            candidates: minimal.iter().map(|p| p.coords.clone()).collect(),
        });
    }
    let notch = minimal[0].clone();
    debug_assert!(candidates.iter().all(|p| notch.dominated_by(p)));
    Ok(Some(notch))
}

/// Calls `f` on every integer point of `[0, bounds_0] x ... x [0, bounds_{n-1}]`
/// in lexicographic order.
pub(crate) fn for_each_in_box(bounds: &[u32], mut f: impl FnMut(&[u32])) {
    let n = bounds.len();
    let mut cur = vec![0u32; n];
    loop {
        f(&cur);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                for c in &mut cur[i + 1..] {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// `S°(n,d)` minus every translate `S°(n,d) + v` with `v` a nonzero lattice
/// vector in the nonnegative orthant. Only `v <= (d, ..., d)` can meet the
/// simplex, so lattice vectors are found by scanning that box.
///
/// Requires `S°(n,d) + L` to cover `Z^n`; otherwise returns
/// [`Error::NotACovering`] with a point whose coset is never reached.
///
/// The result need not be a complete set of coset representatives: two
/// simplex points can differ by a lattice vector that is not in the orthant
/// and both survive. Compare [`tile_from_signed_difference`].
pub fn tile_from_difference(lattice: &IntegerLattice, d: u64) -> Result<Vec<OrthantPoint>> {
    let n = lattice.dim();
    let tile = build_tile(lattice)?;
    if tile.m_diameter() > d {
        return Err(not_covering(&tile, d));
    }
    let indexer = lattice.coset_indexer()?;
    let d32 = u32::try_from(d).map_err(|_| Error::TooLarge(format!("d = {d}")))?;
    let mut translates: Vec<Vec<u32>> = Vec::new();
    for_each_in_box(&vec![d32; n], |v| {
        if v.iter().any(|&c| c != 0) && indexer.index_u32(v) == 0 {
            translates.push(v.to_vec());
        }
    });
    let simplex: Vec<OrthantPoint> = simplex_points(n, d).collect();
    let kept = simplex
        .into_iter()
        .filter(|p| {
            !translates.iter().any(|v| {
                // p ∈ S° + v  <=>  p - v >= 0 and |p - v| <= d
                let mut sum = 0u64;
                for (a, b) in p.coords.iter().zip(v) {
                    if a < b {
                        return false;
                    }
                    sum += (a - b) as u64;
                }
                sum <= d
            })
        })
        .collect();
    Ok(kept)
}

/// `S°(n,d)` minus every translate `S°(n,d) + v` with `v` a lattice vector
/// that is positive in the graded order on `Z^n` (not only the orthant).
/// Translates that can meet the simplex have `|v_i| <= d`.
///
/// A simplex point survives iff no other simplex point of its coset comes
/// earlier in the graded order, so this reproduces the Cayley tile whenever
/// `S°(n,d) + L` covers `Z^n`.
pub fn tile_from_signed_difference(
    lattice: &IntegerLattice,
    d: u64,
) -> Result<Vec<OrthantPoint>> {
    let n = lattice.dim();
    let tile = build_tile(lattice)?;
    if tile.m_diameter() > d {
        return Err(not_covering(&tile, d));
    }
    let indexer = lattice.coset_indexer()?;
    let d32 = u32::try_from(d).map_err(|_| Error::TooLarge(format!("d = {d}")))?;
    let zero = vec![0i64; n];
    let mut translates: Vec<Vec<i64>> = Vec::new();
    for_each_in_box(&vec![2 * d32; n], |shifted| {
        let v: Vec<i64> = shifted.iter().map(|&c| c as i64 - d as i64).collect();
        if signed_prec_compare(&v, &zero) == Ordering::Greater && indexer.contains(&v) {
            translates.push(v);
        }
    });
    let kept = simplex_points(n, d)
        .filter(|p| {
            !translates.iter().any(|v| {
                let mut sum = 0i64;
                for (&a, &b) in p.coords.iter().zip(v) {
                    let c = a as i64 - b;
                    if c < 0 {
                        return false;
                    }
                    sum += c;
                }
                sum <= d as i64
            })
        })
        .collect();
    Ok(kept)
}

pub(crate) fn not_covering(tile: &CayleyTile, d: u64) -> Error {
    let witness = tile
        .points()
        .iter()
        .find(|p| p.m_norm() > d)
        .expect("diameter exceeds d")
        .to_i64();
    Error::NotACovering { witness, d }
}

/// True iff the points number `det(L)` and lie in pairwise distinct cosets.
pub fn is_tiling(points: &[OrthantPoint], lattice: &IntegerLattice) -> bool {
    if BigInt::from(points.len()) != *lattice.det() {
        return false;
    }
    let Ok(indexer) = lattice.coset_indexer() else {
        return false;
    };
    let mut seen = HashSet::with_capacity(points.len());
    points.iter().all(|p| {
        p.dim() == lattice.dim() && seen.insert(indexer.index_u32(p.coords()))
    })
}

/// Stable tile export record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileExport {
    pub n: usize,
    #[serde(with = "crate::report::bigint_json")]
    pub det: BigInt,
    pub diameter: u64,
    pub points: Vec<OrthantPoint>,
    pub notch: Option<OrthantPoint>,
}
