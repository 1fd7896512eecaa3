//! Finite systems of walls given by chords of the ideal circle, and their
//! dual cube complexes.
//!
//! A wall is a chord with two distinct ideal endpoints; its halfspaces are
//! the two open boundary arcs. Vertices of the dual complex are consistent
//! orientations: one halfspace per wall such that every two chosen arcs meet.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Most walls accepted by [`build_dual`].
pub const MAX_WALLS: usize = 20;
/// Largest number of cube records (dimension ≥ 2) kept by [`build_dual`].
pub const MAX_CUBE_RECORDS: usize = 2_000_000;
/// Angles closer than this on the circle count as equal.
pub const ANGLE_TOL: f64 = 1e-12;
/// Tolerance when matching rotated walls against the system.
pub const SYMMETRY_TOL: f64 = 1e-9;

fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Chord between two ideal points, stored with `lo < hi` in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Wall {
    lo: f64,
    hi: f64,
}

impl Wall {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput("wall endpoints must be finite".into()));
        }
        let (a, b) = (normalize_angle(a), normalize_angle(b));
        if circle_gap(a, b) <= ANGLE_TOL {
            return Err(Error::InvalidInput(format!(
                "wall endpoints coincide at angle {a}"
            )));
        }
        Ok(Wall {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Side of a boundary point: `Some(true)` on the arc `(lo, hi)`,
    /// `Some(false)` on the complementary arc, `None` at an endpoint.
    pub fn side(&self, x: f64) -> Option<bool> {
        let x = normalize_angle(x);
        if circle_gap(x, self.lo) <= ANGLE_TOL || circle_gap(x, self.hi) <= ANGLE_TOL {
            return None;
        }
        Some(self.lo < x && x < self.hi)
    }

    fn shares_endpoint(&self, o: &Wall) -> bool {
        [self.lo, self.hi]
            .iter()
            .any(|&a| circle_gap(a, o.lo) <= ANGLE_TOL || circle_gap(a, o.hi) <= ANGLE_TOL)
    }

    pub fn rotated(&self, angle: f64) -> Wall {
        Wall::new(self.lo + angle, self.hi + angle).expect("rotation keeps endpoints distinct")
    }

    fn matches(&self, o: &Wall) -> bool {
        circle_gap(self.lo, o.lo) <= SYMMETRY_TOL && circle_gap(self.hi, o.hi) <= SYMMETRY_TOL
    }
}

/// Whether the two chords cross, i.e. their endpoints interleave.
pub fn crosses(w1: &Wall, w2: &Wall) -> Result<bool> {
    if w1.shares_endpoint(w2) {
        return Err(Error::InvalidInput(
            "walls share an endpoint; general position is required".into(),
        ));
    }
    Ok(w1.side(w2.lo) != w1.side(w2.hi))
}

/// Whether halfspace `s1` of `w1` meets halfspace `s2` of `w2` (general position).
fn halfspaces_meet(w1: &Wall, s1: bool, w2: &Wall, s2: bool) -> bool {
    let inside = |w: &Wall, s: bool, x: f64| w.side(x) == Some(s);
    inside(w1, s1, w2.lo) || inside(w1, s1, w2.hi) || inside(w2, s2, w1.lo) || inside(w2, s2, w1.hi)
}

/// Walls in general position, with an optional rotation symmetry of order `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct WallSystem {
    walls: Vec<Wall>,
    symmetry: u32,
}

impl WallSystem {
    /// `symmetry` is the order `N` of the rotation by `2π/N`; 1 means none.
    pub fn new(walls: Vec<Wall>, symmetry: u32) -> Result<Self> {
        if symmetry == 0 {
            return Err(Error::InvalidInput("symmetry order must be at least 1".into()));
        }
        for (i, a) in walls.iter().enumerate() {
            for b in &walls[i + 1..] {
                if a.shares_endpoint(b) {
                    return Err(Error::InvalidInput(format!(
                        "walls {a:?} and {b:?} share an endpoint"
                    )));
                }
            }
        }
        Ok(WallSystem { walls, symmetry })
    }

    pub fn from_pairs(pairs: &[(f64, f64)], symmetry: u32) -> Result<Self> {
        let walls = pairs
            .iter()
            .map(|&(a, b)| Wall::new(a, b))
            .collect::<Result<_>>()?;
        Self::new(walls, symmetry)
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    pub fn symmetry(&self) -> u32 {
        self.symmetry
    }

    /// Index of the image of each wall under the generating rotation.
    pub fn rotation_permutation(&self) -> Result<Vec<usize>> {
        let angle = TAU / self.symmetry as f64;
        self.walls
            .iter()
            .map(|w| {
                let r = w.rotated(angle);
                self.walls.iter().position(|o| o.matches(&r)).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "rotation by 2π/{} does not permute the walls",
                        self.symmetry
                    ))
                })
            })
            .collect()
    }
}

/// Key of a cube: its corner with the spanning walls' bits cleared, and the set of spanning walls.
pub type CubeKey = (u32, u32);

/// Sageev dual of a finite wall system.
#[derive(Clone, Debug)]
pub struct CubeComplex {
    walls: usize,
    vertices: Vec<u32>,
    vertex_set: HashSet<u32>,
    /// Cubes of dimension ≥ 2.
    cubes: BTreeSet<CubeKey>,
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

impl CubeComplex {
    pub fn wall_count(&self) -> usize {
        self.walls
    }

    /// Vertices as orientation masks; bit `i` set means the arc `(lo, hi)` of wall `i`.
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn has_vertex(&self, v: u32) -> bool {
        self.vertex_set.contains(&v)
    }

    /// Edges as `(endpoint with the wall's bit cleared, wall)`, sorted.
    pub fn edges(&self) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        for &v in &self.vertices {
            for i in 0..self.walls {
                if v & (1 << i) == 0 && self.has_vertex(v | (1 << i)) {
                    out.push((v, i));
                }
            }
        }
        out
    }

    pub fn cubes(&self) -> &BTreeSet<CubeKey> {
        &self.cubes
    }

    pub fn has_cube(&self, key: CubeKey) -> bool {
        match key.1.count_ones() {
            0 => self.has_vertex(key.0),
            1 => self.has_vertex(key.0) && self.has_vertex(key.0 | key.1),
            _ => self.cubes.contains(&key),
        }
    }

    /// Drops a cube record, e.g. to build a corrupted control complex.
    pub fn remove_cube(&mut self, key: CubeKey) -> bool {
        self.cubes.remove(&key)
    }

    /// Number of cubes of each dimension, starting with vertices and edges.
    pub fn cubes_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![self.vertices.len(), self.edges().len()];
        for (_, s) in &self.cubes {
            let k = s.count_ones() as usize;
            if counts.len() <= k {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
        }
        while counts.len() > 2 && counts.last() == Some(&0) {
            counts.pop();
        }
        counts
    }

    fn neighbors(&self, v: u32) -> impl Iterator<Item = (usize, u32)> + '_ {
        (0..self.walls)
            .map(move |i| (i, v ^ (1 << i)))
            .filter(|(_, w)| self.has_vertex(*w))
    }

    fn has_square_at(&self, v: u32, i: usize, j: usize) -> bool {
        let s = (1u32 << i) | (1u32 << j);
        self.cubes.contains(&(v & !s, s))
    }
}

fn consistent_orientations(ws: &WallSystem) -> Vec<u32> {
    let k = ws.len();
    let w = ws.walls();
    // meet[i][j] bit (2·si + sj): halfspace si of wall i meets halfspace sj of wall j
    let meet: Vec<Vec<u8>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut m = 0u8;
                    if i != j {
                        for si in [false, true] {
                            for sj in [false, true] {
                                if halfspaces_meet(&w[i], si, &w[j], sj) {
                                    m |= 1 << (2 * si as u8 + sj as u8);
                                }
                            }
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    let ok = |v: u32, j: usize| {
        let sj = (v >> j) & 1;
        (0..j).all(|i| {
            let si = (v >> i) & 1;
            meet[i][j] & (1 << (2 * si + sj)) != 0
        })
    };
    fn extend(v: u32, j: usize, k: usize, ok: &dyn Fn(u32, usize) -> bool, out: &mut Vec<u32>) {
        if j == k {
            out.push(v);
            return;
        }
        for s in [0u32, 1] {
            let next = v | (s << j);
            if ok(next, j) {
                extend(next, j + 1, k, ok, out);
            }
        }
    }
    let split = k.div_ceil(2);
    let mut prefixes = Vec::new();
    extend(0, 0, split, &ok, &mut prefixes);
    let mut vertices: Vec<u32> = prefixes
        .par_iter()
        .flat_map_iter(|&p| {
            let mut out = Vec::new();
            extend(p, split, k, &ok, &mut out);
            out
        })
        .collect();
    vertices.sort_unstable();
    vertices
}

/// Builds the dual cube complex.
pub fn build_dual(ws: &WallSystem) -> Result<CubeComplex> {
    let k = ws.len();
    if k > MAX_WALLS {
        return Err(Error::Config(format!(
            "at most {MAX_WALLS} walls are supported, got {k}"
        )));
    }
    let crossing: Vec<u32> = (0..k)
        .map(|i| {
            (0..k).try_fold(0u32, |m, j| {
                Ok(if i != j && crosses(&ws.walls()[i], &ws.walls()[j])? {
                    m | (1 << j)
                } else {
                    m
                })
            })
        })
        .collect::<Result<_>>()?;
    let vertices = consistent_orientations(ws);
    let vertex_set: HashSet<u32> = vertices.iter().copied().collect();

    let per_vertex: Vec<Vec<CubeKey>> = vertices
        .par_iter()
        .map(|&v| {
            let up: Vec<usize> = (0..k)
                .filter(|&i| v & (1 << i) == 0 && vertex_set.contains(&(v | (1 << i))))
                .collect();
            let mut found = Vec::new();
            let mut stack: Vec<(u32, usize)> = up.iter().enumerate().map(|(p, &i)| (1u32 << i, p)).collect();
            while let Some((s, last)) = stack.pop() {
                if s.count_ones() >= 2 {
                    found.push((v, s));
                }
                for (p, &i) in up.iter().enumerate().skip(last + 1) {
                    if crossing[i] & s != s {
                        continue;
                    }
                    let mut sub = s;
                    let corners_present = loop {
                        if !vertex_set.contains(&(v | sub | (1 << i))) {
                            break false;
                        }
                        if sub == 0 {
                            break true;
                        }
                        sub = (sub - 1) & s;
                    };
                    if corners_present {
                        stack.push((s | (1 << i), p));
                    }
                }
            }
            found
        })
        .collect();
    let total: usize = per_vertex.iter().map(Vec::len).sum();
    if total > MAX_CUBE_RECORDS {
        return Err(Error::Config(format!(
            "complex has {total} cubes of dimension ≥ 2, above the limit {MAX_CUBE_RECORDS}"
        )));
    }
    Ok(CubeComplex {
        walls: k,
        vertices,
        vertex_set,
        cubes: per_vertex.into_iter().flatten().collect(),
    })
}

/// Outcome of the simple-connectivity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cat0Report {
    pub connected: bool,
    pub simply_connected: Verdict,
    pub flag_links: bool,
}

impl Cat0Report {
    pub fn passes(&self) -> bool {
        self.connected && self.simply_connected == Verdict::Yes && self.flag_links
    }
}

pub fn check_cat0(c: &CubeComplex) -> Cat0Report {
    let (connected, parent) = spanning_tree(c);
    let simply_connected = if connected {
        simple_connectivity(c, &parent)
    } else {
        Verdict::Inconclusive
    };
    Cat0Report {
        connected,
        simply_connected,
        flag_links: flag_condition(c),
    }
}

/// BFS tree from the first vertex: parent vertex and the wall flipped to reach it.
fn spanning_tree(c: &CubeComplex) -> (bool, HashMap<u32, Option<(u32, usize)>>) {
    let mut parent = HashMap::new();
    let Some(&root) = c.vertices.first() else {
        return (true, parent);
    };
    parent.insert(root, None);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for (i, w) in c.neighbors(v) {
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(w) {
                e.insert(Some((v, i)));
                queue.push_back(w);
            }
        }
    }
    (parent.len() == c.vertices.len(), parent)
}

/// Walls flipped along the tree path from the root to `v`.
fn tree_word(parent: &HashMap<u32, Option<(u32, usize)>>, mut v: u32) -> Vec<usize> {
    let mut word = Vec::new();
    while let Some(&Some((p, i))) = parent.get(&v) {
        word.push(i);
        v = p;
    }
    word.reverse();
    word
}

fn simple_connectivity(c: &CubeComplex, parent: &HashMap<u32, Option<(u32, usize)>>) -> Verdict {
    let cap = 2 * c.edges().len();
    let root = c.vertices[0];
    for (v, i) in c.edges() {
        let w = v | (1 << i);
        if parent.get(&w) == Some(&Some((v, i))) || parent.get(&v) == Some(&Some((w, i))) {
            continue;
        }
        // root → v → w → root
        let mut word = tree_word(parent, v);
        word.push(i);
        let mut back = tree_word(parent, w);
        back.reverse();
        word.extend(back);
        if word.len() > cap {
            return Verdict::Inconclusive;
        }
        if !reduce_loop(c, root, word, cap) {
            return if homology_nontrivial(c) {
                Verdict::No
            } else {
                Verdict::Inconclusive
            };
        }
    }
    Verdict::Yes
}

/// Reduces a closed edge path to the constant path by cancelling backtracks
/// and sliding edges across squares. Returns false if it gets stuck.
fn reduce_loop(c: &CubeComplex, root: u32, mut word: Vec<usize>, cap: usize) -> bool {
    let mut budget = cap.saturating_mul(cap).max(64);
    while !word.is_empty() {
        if budget == 0 {
            return false;
        }
        budget -= 1;
        if let Some(p) = word.windows(2).position(|w| w[0] == w[1]) {
            word.drain(p..p + 2);
            continue;
        }
        // innermost repeated wall
        let mut best: Option<(usize, usize)> = None;
        let mut last: HashMap<usize, usize> = HashMap::new();
        for (m, &x) in word.iter().enumerate() {
            if let Some(&k) = last.get(&x) {
                if best.is_none_or(|(a, b)| m - k < b - a) {
                    best = Some((k, m));
                }
            }
            last.insert(x, m);
        }
        let Some((_, m)) = best else {
            return false;
        };
        // vertex reached before position m − 1
        let before = word[..m - 1].iter().fold(root, |v, &x| v ^ (1 << x));
        if !c.has_square_at(before, word[m - 1], word[m]) {
            return false;
        }
        word.swap(m - 1, m);
    }
    true
}

/// Whether the 2-skeleton has nonzero first homology with `GF(2)` coefficients.
fn homology_nontrivial(c: &CubeComplex) -> bool {
    let edges = c.edges();
    let index: HashMap<(u32, usize), usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let words = edges.len().div_ceil(64);
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; edges.len()];
    let mut rank = 0usize;
    for &(base, s) in &c.cubes {
        if s.count_ones() != 2 {
            continue;
        }
        let mut row = vec![0u64; words];
        let ws: Vec<usize> = bits(s).collect();
        for (a, b) in [(ws[0], ws[1]), (ws[1], ws[0])] {
            for corner in [base, base | (1 << b)] {
                if let Some(&k) = index.get(&(corner, a)) {
                    row[k / 64] ^= 1 << (k % 64);
                }
            }
        }
        while let Some(pivot) = (0..edges.len()).find(|&k| row[k / 64] >> (k % 64) & 1 == 1) {
            match &basis[pivot] {
                Some(b) => row.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
                None => {
                    basis[pivot] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    let cycle_rank = edges.len() + 1 - c.vertices.len();
    rank < cycle_rank
}

/// Links are flag: every record's faces are present, and every set of
/// pairwise square-adjacent directions at a vertex spans a cube.
fn flag_condition(c: &CubeComplex) -> bool {
    for &(base, s) in &c.cubes {
        for sub in std::iter::successors(Some(s), |&t| if t == 0 { None } else { Some((t - 1) & s) }) {
            if !c.has_vertex(base | sub) {
                return false;
            }
        }
        if s.count_ones() >= 3 {
            for i in bits(s) {
                let face = s & !(1 << i);
                if !c.has_cube((base, face)) || !c.has_cube((base | (1 << i), face)) {
                    return false;
                }
            }
        }
    }
    c.vertices.par_iter().all(|&v| {
        let dirs: Vec<usize> = c.neighbors(v).map(|(i, _)| i).collect();
        let adj = |i: usize, j: usize| c.has_square_at(v, i, j);
        // grow cliques of the link; each must be realised by a cube at v
        let mut stack: Vec<(u32, usize)> = (0..dirs.len()).map(|p| (1u32 << dirs[p], p)).collect();
        while let Some((s, last)) = stack.pop() {
            if s.count_ones() >= 3 && !c.cubes.contains(&(v & !s, s)) {
                return false;
            }
            for p in last + 1..dirs.len() {
                let i = dirs[p];
                if bits(s).all(|j| adj(i, j)) {
                    stack.push((s | (1 << i), p));
                }
            }
        }
        true
    })
}

/// Parallelism classes of edges, generated by opposite sides of squares.
/// Returns the wall flipped by each class.
pub fn hyperplane_classes(c: &CubeComplex) -> Result<Vec<usize>> {
    let edges = c.edges();
    let index: HashMap<(u32, usize), usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut uf: Vec<usize> = (0..edges.len()).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for &(base, s) in &c.cubes {
        if s.count_ones() != 2 {
            continue;
        }
        let ws: Vec<usize> = bits(s).collect();
        for (a, b) in [(ws[0], ws[1]), (ws[1], ws[0])] {
            let (Some(&e1), Some(&e2)) = (index.get(&(base, a)), index.get(&(base | (1 << b), a))) else {
                return Err(Error::Consistency("square side missing from the edge set".into()));
            };
            let (r1, r2) = (find(&mut uf, e1), find(&mut uf, e2));
            uf[r1] = r2;
        }
    }
    let mut class_wall: HashMap<usize, usize> = HashMap::new();
    for (k, &(_, wall)) in edges.iter().enumerate() {
        let r = find(&mut uf, k);
        if *class_wall.entry(r).or_insert(wall) != wall {
            return Err(Error::Consistency(
                "a hyperplane class mixes edges of different walls".into(),
            ));
        }
    }
    let mut walls: Vec<usize> = class_wall.into_values().collect();
    walls.sort_unstable();
    Ok(walls)
}

/// Number of orbits of walls under the system's rotation symmetry, after
/// checking that hyperplanes of the complex biject with walls.
pub fn hyperplane_families(c: &CubeComplex, ws: &WallSystem) -> Result<usize> {
    let classes = hyperplane_classes(c)?;
    if classes != (0..ws.len()).collect::<Vec<_>>() || c.wall_count() != ws.len() {
        return Err(Error::Consistency(format!(
            "{} hyperplane classes for {} walls",
            classes.len(),
            ws.len()
        )));
    }
    let perm = ws.rotation_permutation()?;
    let mut seen = vec![false; ws.len()];
    let mut orbits = 0;
    for start in 0..ws.len() {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    Ok(orbits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSeparation {
    Separated(usize),
    NotSeparated,
}

/// First wall whose two halfspaces split the boundary points `b1`, `b2`.
pub fn separates_pair(ws: &WallSystem, b1: f64, b2: f64) -> Result<PairSeparation> {
    for (k, w) in ws.walls().iter().enumerate() {
        let (Some(s1), Some(s2)) = (w.side(b1), w.side(b2)) else {
            return Err(Error::InvalidInput(format!(
                "boundary point coincides with an endpoint of wall {k}"
            )));
        };
        if s1 != s2 {
            return Ok(PairSeparation::Separated(k));
        }
    }
    Ok(PairSeparation::NotSeparated)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FillingReport {
    pub resolution: usize,
    /// Grid points are `2π(j + offset)/resolution`.
    pub offset: f64,
    pub pairs_checked: usize,
    pub filling: bool,
    /// First grid pair that no wall separates.
    pub witness: Option<(f64, f64)>,
}

/// Checks that every pair of an evenly spaced boundary grid is separated.
/// The grid is shifted off the wall endpoints.
pub fn filling_at_resolution(ws: &WallSystem, resolution: usize) -> Result<FillingReport> {
    if resolution < 2 {
        return Err(Error::Config("resolution must be at least 2".into()));
    }
    let step = TAU / resolution as f64;
    let clear = |offset: f64| {
        (0..resolution).all(|j| {
            let x = step * (j as f64 + offset);
            ws.walls().iter().all(|w| w.side(x).is_some() && {
                let (a, b) = w.endpoints();
                circle_gap(x, a) > 1e-9 && circle_gap(x, b) > 1e-9
            })
        })
    };
    let offset = [0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875, 0.3141592653589793]
        .into_iter()
        .find(|&o| clear(o))
        .ok_or_else(|| Error::Inconclusive("no grid offset avoids the wall endpoints".into()))?;
    let grid: Vec<f64> = (0..resolution).map(|j| step * (j as f64 + offset)).collect();
    let mut pairs_checked = 0;
    for i in 0..resolution {
        for j in i + 1..resolution {
            pairs_checked += 1;
            if separates_pair(ws, grid[i], grid[j])? == PairSeparation::NotSeparated {
                return Ok(FillingReport {
                    resolution,
                    offset,
                    pairs_checked,
                    filling: false,
                    witness: Some((grid[i], grid[j])),
                });
            }
        }
    }
    Ok(FillingReport {
        resolution,
        offset,
        pairs_checked,
        filling: true,
        witness: None,
    })
}

/// `n` walls through a common region, pairwise crossing: chords from
/// `π k/n` to `π k/n + π + π/(2n)`.
pub fn crossing_fixture(n: usize) -> WallSystem {
    let step = std::f64::consts::PI / n as f64;
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = step * k as f64 + 0.1 * step;
            (a, a + std::f64::consts::PI + 0.3 * step)
        })
        .collect();
    WallSystem::from_pairs(&pairs, 1).expect("fixture is in general position")
}

/// `n` nested chords symmetric about the angle π.
pub fn nested_fixture(n: usize) -> WallSystem {
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let h = 0.2 + 2.5 * k as f64 / n.max(1) as f64;
            (std::f64::consts::PI - h, std::f64::consts::PI + h)
        })
        .collect();
    WallSystem::from_pairs(&pairs, 1).expect("fixture is in general position")
}

/// `n` diameters rotated evenly by `π/n`, with rotation symmetry of order `2n`.
pub fn diameter_fixture(n: usize) -> WallSystem {
    let step = std::f64::consts::PI / n as f64;
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (step * k as f64, step * k as f64 + std::f64::consts::PI))
        .collect();
    WallSystem::from_pairs(&pairs, 2 * n as u32).expect("fixture is in general position")
}
