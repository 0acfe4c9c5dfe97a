//! Lattice geometry on `Z^d`: sites, cubes, boundaries, sub-cube collections,
//! annuli and the bad-region merging step of the multiscale induction.
//!
//! Everything here is exact integer arithmetic; no floating point enters.

use crate::error::{Error, Result};
use std::collections::HashMap;

/// A point of `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    coords: Vec<i64>,
}

impl Site {
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "site needs at least one coordinate");
        Site { coords }
    }

    /// Origin of `Z^d`.
    pub fn origin(dim: usize) -> Self {
        Site::new(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Sup norm `max_v |n_v|`.
    pub fn norm_inf(&self) -> i64 {
        self.coords.iter().map(|c| c.abs()).max().unwrap()
    }

    /// Graph norm `sum_v |n_v|`; shortest path length to the origin.
    pub fn norm_l1(&self) -> i64 {
        self.coords.iter().map(|c| c.abs()).sum()
    }

    pub fn dist_inf(&self, other: &Site) -> i64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap()
    }

    pub fn dist_l1(&self, other: &Site) -> i64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    pub fn translated(&self, by: &[i64]) -> Site {
        Site::new(
            self.coords
                .iter()
                .zip(by)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// The 2d nearest neighbors, in a fixed order (axis by axis, -1 then +1).
    pub fn neighbors(&self) -> Vec<Site> {
        let mut out = Vec::with_capacity(2 * self.dim());
        for axis in 0..self.dim() {
            for step in [-1i64, 1] {
                let mut c = self.coords.clone();
                c[axis] += step;
                out.push(Site::new(c));
            }
        }
        out
    }
}

/// Convenience constructor used throughout tests and examples.
pub fn site(coords: &[i64]) -> Site {
    Site::new(coords.to_vec())
}

/// An ordered, indexed set of sites. The order fixes the matrix index map.
#[derive(Debug, Clone)]
pub struct Region {
    sites: Vec<Site>,
    index: HashMap<Site, usize>,
}

impl Region {
    pub fn from_sites(sites: Vec<Site>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Domain("region must be nonempty".into()));
        }
        let dim = sites[0].dim();
        let mut index = HashMap::with_capacity(sites.len());
        for (i, s) in sites.iter().enumerate() {
            if s.dim() != dim {
                return Err(Error::Domain("mixed dimensions in region".into()));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate site {:?}", s.coords())));
            }
        }
        Ok(Region { sites, index })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.sites[0].dim()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.index.contains_key(s)
    }

    pub fn index_of(&self, s: &Site) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Coordination number of `s` within the region: `|{j in R : |j-s|_1 = 1}|`.
    pub fn coordination(&self, s: &Site) -> usize {
        s.neighbors().iter().filter(|n| self.contains(n)).count()
    }

    /// Set difference, keeping this region's site order.
    pub fn minus(&self, other: &Region) -> Result<Region> {
        Region::from_sites(
            self.sites
                .iter()
                .filter(|s| !other.contains(s))
                .cloned()
                .collect(),
        )
    }
}

/// The cube `Λ_L(n0) = {n : |n - n0|_inf <= L}` with `(2L+1)^d` sites.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    center: Site,
    radius: i64,
}

impl Cube {
    pub fn new(center: Site, radius: i64) -> Result<Self> {
        if radius < 0 {
            return Err(Error::Domain(format!("cube radius {radius} < 0")));
        }
        Ok(Cube { center, radius })
    }

    /// Cube of radius `L` centered at the origin.
    pub fn centered(dim: usize, radius: i64) -> Result<Self> {
        Cube::new(Site::origin(dim), radius)
    }

    pub fn center(&self) -> &Site {
        &self.center
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn side(&self) -> i64 {
        2 * self.radius + 1
    }

    /// `|Λ_L| = (2L+1)^d`.
    pub fn volume(&self) -> usize {
        (self.side() as usize).pow(self.dim() as u32)
    }

    pub fn contains(&self, s: &Site) -> bool {
        s.dim() == self.dim() && s.dist_inf(&self.center) <= self.radius
    }

    /// Deterministic lexicographic site enumeration.
    pub fn sites(&self) -> Vec<Site> {
        let d = self.dim();
        let side = self.side();
        let mut out = Vec::with_capacity(self.volume());
        let mut offset = vec![-self.radius; d];
        loop {
            out.push(self.center.translated(&offset));
            // odometer increment, last axis fastest => lexicographic order
            let mut axis = d;
            loop {
                if axis == 0 {
                    return out;
                }
                axis -= 1;
                offset[axis] += 1;
                if offset[axis] <= self.radius {
                    break;
                }
                offset[axis] = -self.radius;
            }
            let _ = side;
        }
    }

    /// Index of `s` in the lexicographic enumeration, without materializing it.
    pub fn index_of(&self, s: &Site) -> Option<usize> {
        if !self.contains(s) {
            return None;
        }
        let side = self.side() as usize;
        let mut idx = 0usize;
        for (c, c0) in s.coords().iter().zip(self.center.coords()) {
            let off = (c - c0 + self.radius) as usize;
            idx = idx * side + off;
        }
        Some(idx)
    }

    pub fn region(&self) -> Region {
        Region::from_sites(self.sites()).expect("cube region is nonempty and duplicate-free")
    }

    /// Inner boundary layer `{n : |n - n0|_inf = L}` (for `L = 0` the center).
    pub fn inner_boundary_sites(&self) -> Vec<Site> {
        self.sites()
            .into_iter()
            .filter(|s| s.dist_inf(&self.center) == self.radius)
            .collect()
    }

    /// `A ⋐ Λ`: contained in `other` and disjoint from its inner boundary.
    pub fn well_inside(&self, other: &Cube) -> bool {
        self.center.dist_inf(&other.center) + self.radius <= other.radius - 1
    }

    pub fn subset_of(&self, other: &Cube) -> bool {
        self.center.dist_inf(&other.center) + self.radius <= other.radius
    }

    pub fn disjoint(&self, other: &Cube) -> bool {
        self.center.dist_inf(&other.center) > self.radius + other.radius
    }

    /// Two site sets touch if they intersect or some pair is at sup-distance 1.
    /// For cubes this is decidable from the centers alone.
    pub fn touches(&self, other: &Cube) -> bool {
        self.center.dist_inf(&other.center) <= self.radius + other.radius + 1
    }
}

/// Ordered site list of a cube.
pub fn cube_sites(cube: &Cube) -> Vec<Site> {
    cube.sites()
}

/// Edge set and inner/outer site layers of the boundary of `inner_set`,
/// optionally relative to an ambient cube (edges clipped to ambient x ambient).
#[derive(Debug, Clone)]
pub struct BoundarySet {
    /// Canonical orientation: (inner, outer) once per edge.
    pub edges: Vec<(Site, Site)>,
    pub inner_sites: Vec<Site>,
    pub outer_sites: Vec<Site>,
}

pub fn boundary(inner_set: &Region, ambient: Option<&Cube>) -> Result<BoundarySet> {
    if inner_set.is_empty() {
        return Err(Error::Domain("boundary of empty set".into()));
    }
    if let Some(amb) = ambient {
        for s in inner_set.sites() {
            if !amb.contains(s) {
                return Err(Error::Domain(format!(
                    "inner set site {:?} outside ambient cube",
                    s.coords()
                )));
            }
        }
    }
    let mut edges = Vec::new();
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for s in inner_set.sites() {
        let mut on_boundary = false;
        for n in s.neighbors() {
            if inner_set.contains(&n) {
                continue;
            }
            if let Some(amb) = ambient {
                if !amb.contains(&n) {
                    continue;
                }
            }
            on_boundary = true;
            outer.push(n.clone());
            edges.push((s.clone(), n));
        }
        if on_boundary {
            inner.push(s.clone());
        }
    }
    outer.sort();
    outer.dedup();
    inner.sort();
    edges.sort();
    Ok(BoundarySet {
        edges,
        inner_sites: inner,
        outer_sites: outer,
    })
}

/// All cubes `Λ_l(n)` well inside `big`, i.e. the collection `C_l(big)`.
/// Centers satisfy `|n - center|_inf <= L - l - 1`.
pub fn subcubes(big: &Cube, l: i64) -> Result<Vec<Cube>> {
    if l < 0 || l >= big.radius() {
        return Err(Error::Domain(format!(
            "subcube radius {l} must satisfy 0 <= l < {}",
            big.radius()
        )));
    }
    let reach = big.radius() - l - 1;
    let centers = Cube::new(big.center().clone(), reach)?;
    centers
        .sites()
        .into_iter()
        .map(|c| Cube::new(c, l))
        .collect()
}

/// The annuli `A_k = Λ_{6 L_{k+1}} \ Λ_{3 L_k}` and the enlarged
/// `A_k^+ = Λ_{8 L_{k+1}} \ Λ_{2 L_k}` used by the eigenfunction iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annulus {
    pub k: usize,
    pub inner_radius: i64,
    pub outer_radius: i64,
    pub enlarged: bool,
}

impl Annulus {
    pub fn standard(k: usize, l_k: i64, l_next: i64) -> Self {
        Annulus {
            k,
            inner_radius: 3 * l_k,
            outer_radius: 6 * l_next,
            enlarged: false,
        }
    }

    pub fn enlarged(k: usize, l_k: i64, l_next: i64) -> Self {
        Annulus {
            k,
            inner_radius: 2 * l_k,
            outer_radius: 8 * l_next,
            enlarged: true,
        }
    }

    /// Membership: `inner_radius < |n|_inf <= outer_radius`.
    pub fn contains(&self, n: &Site) -> bool {
        let r = n.norm_inf();
        r > self.inner_radius && r <= self.outer_radius
    }
}

#[derive(Debug, Clone)]
pub struct AnnulusDistance {
    /// `dist(n, boundary of A_k^+)` = min over the hole and the outer shell.
    pub dist: i64,
    /// Integer form of the security bound, `ceil(|n|/3) - 1`.
    pub floor_bound: i64,
    /// Set when the exact `dist >= |n|/3` fails though the integer form holds.
    pub flagged: bool,
}

/// Security distance of `n in A_k` from the boundary of the enlarged annulus.
pub fn annulus_distance_check(n: &Site, l_k: i64, l_next: i64) -> Result<AnnulusDistance> {
    let a_k = Annulus::standard(0, l_k, l_next);
    if !a_k.contains(n) {
        return Err(Error::Domain(format!(
            "site with |n|={} outside the annulus ({}, {}]",
            n.norm_inf(),
            a_k.inner_radius,
            a_k.outer_radius
        )));
    }
    let r = n.norm_inf();
    let dist = (r - 2 * l_k).min(8 * l_next - r);
    let floor_bound = (r + 2) / 3 - 1; // ceil(r/3) - 1
    if dist < floor_bound {
        return Err(Error::Domain(format!(
            "annulus security distance {dist} below integer bound {floor_bound}"
        )));
    }
    Ok(AnnulusDistance {
        dist,
        floor_bound,
        flagged: 3 * dist < r,
    })
}

/// Merge up to three bad-cube centers into pairwise non-touching regions.
///
/// Starts from the `Λ_{2l}(m_i)`; a touching pair around `m` is replaced by
/// `Λ_{6l+1}(m)`, and a further touch by `Λ_{10l+2}(m)`, so the merged radii
/// stay within {2l, 6l+1, 10l+2} and the union always covers every original
/// `Λ_{2l}(m_i)`.
pub fn merge_bad_regions(centers: &[Site], l: i64) -> Result<Vec<Cube>> {
    if centers.is_empty() || centers.len() > 3 {
        return Err(Error::Domain(format!(
            "merging handles 1..=3 centers, got {}",
            centers.len()
        )));
    }
    if l < 0 {
        return Err(Error::Domain("negative scale".into()));
    }
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            if a == b {
                return Err(Error::Domain("bad-cube centers must be distinct".into()));
            }
        }
    }
    let next_radius = |r: i64| -> i64 {
        if r == 2 * l {
            6 * l + 1
        } else {
            10 * l + 2
        }
    };
    let mut regions: Vec<Cube> = centers
        .iter()
        .map(|c| Cube::new(c.clone(), 2 * l))
        .collect::<Result<_>>()?;
    loop {
        let mut merged = false;
        'scan: for i in 0..regions.len() {
            for j in i + 1..regions.len() {
                if regions[i].touches(&regions[j]) {
                    // grow the larger (first on ties) region, drop the other
                    let (keep, drop) = if regions[j].radius() > regions[i].radius() {
                        (j, i)
                    } else {
                        (i, j)
                    };
                    let grown = Cube::new(
                        regions[keep].center().clone(),
                        next_radius(regions[keep].radius()),
                    )?;
                    regions[keep] = grown;
                    regions.remove(drop);
                    merged = true;
                    break 'scan;
                }
            }
        }
        if !merged {
            return Ok(regions);
        }
    }
}
