//! Brute-force enumeration of dimer covers of the honeycomb torus and the
//! lattice-path picture used to classify them by homology.
//!
//! Site `(x, y)` carries an in-vertex `u(x, y)` and an out-vertex
//! `v(x, y)`. The `a` edge joins `u(x, y)` to `v(x, y)`, the `b` edge joins
//! `v(x-1, y)` to `u(x, y)` and the `c` edge joins `v(x, y-1)` to `u(x, y)`.
//! A cover is therefore a choice of edge at every in-vertex such that the
//! chosen out-vertices are all distinct. A `b` choice is an east step into
//! the site, a `c` choice a north step, an `a` choice an empty site.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::kasteleyn::{MomentVector, Sector};

/// Largest vertex count `2mn` accepted by the enumerator.
pub const MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    A,
    B,
    C,
}

impl EdgeKind {
    const ORDER: [EdgeKind; 3] = [EdgeKind::A, EdgeKind::B, EdgeKind::C];
}

/// A perfect matching, stored as the edge used at each in-vertex
/// (index `y * m + x`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cover {
    pub m: usize,
    pub n: usize,
    pub edges: Vec<EdgeKind>,
}

/// Per-cover edge counts and homology class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoverStats {
    pub n_a: u32,
    pub n_b: u32,
    pub n_c: u32,
    /// Parities of crossings of the vertical and horizontal cut lines.
    pub class: (u8, u8),
}

impl CoverStats {
    pub fn weight(&self, a: f64, b: f64, c: f64) -> f64 {
        a.powi(self.n_a as i32) * b.powi(self.n_b as i32) * c.powi(self.n_c as i32)
    }

    /// Index into [`HomologyTable::n`]: `eps_x + 2 eps_y`.
    pub fn class_index(&self) -> usize {
        usize::from(self.class.0) + 2 * usize::from(self.class.1)
    }
}

impl fmt::Display for CoverStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.n_a, self.n_b, self.n_c, self.class.0, self.class.1
        )
    }
}

fn check_size(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 || 2 * m * n > MAX_VERTICES {
        return Err(Error::Size {
            m,
            n,
            bound: MAX_VERTICES,
        });
    }
    Ok(())
}

impl Cover {
    /// Validate and wrap an edge assignment.
    pub fn from_edges(m: usize, n: usize, edges: Vec<EdgeKind>) -> Result<Self> {
        if m == 0 || n == 0 || edges.len() != m * n {
            return Err(Error::MalformedCover(format!(
                "{} edges for a {m}x{n} torus",
                edges.len()
            )));
        }
        let cover = Cover { m, n, edges };
        let mut used = vec![false; m * n];
        for y in 0..n {
            for x in 0..m {
                let target = cover.partner(x, y);
                if std::mem::replace(&mut used[target], true) {
                    return Err(Error::MalformedCover(format!(
                        "out-vertex {} matched twice",
                        target
                    )));
                }
            }
        }
        Ok(cover)
    }

    /// Build a cover from closed lattice paths, each listed as the sequence of
    /// visited sites; consecutive sites must differ by one east or north step.
    pub fn from_paths(m: usize, n: usize, paths: &[Vec<(usize, usize)>]) -> Result<Self> {
        let mut edges = vec![EdgeKind::A; m * n];
        for path in paths {
            for (i, &(x, y)) in path.iter().enumerate() {
                let (px, py) = path[(i + path.len() - 1) % path.len()];
                let kind = if (px + 1) % m == x && py == y {
                    EdgeKind::B
                } else if px == x && (py + 1) % n == y {
                    EdgeKind::C
                } else {
                    return Err(Error::MalformedCover(format!(
                        "step ({px},{py}) -> ({x},{y}) is not east or north"
                    )));
                };
                if edges[y * m + x] != EdgeKind::A {
                    return Err(Error::MalformedCover(format!("site ({x},{y}) visited twice")));
                }
                edges[y * m + x] = kind;
            }
        }
        Cover::from_edges(m, n, edges)
    }

    pub fn edge_at(&self, x: usize, y: usize) -> EdgeKind {
        self.edges[y * self.m + x]
    }

    /// Out-vertex index matched to `u(x, y)`.
    fn partner(&self, x: usize, y: usize) -> usize {
        let (m, n) = (self.m, self.n);
        match self.edge_at(x, y) {
            EdgeKind::A => y * m + x,
            EdgeKind::B => y * m + (x + m - 1) % m,
            EdgeKind::C => ((y + n - 1) % n) * m + x,
        }
    }

    /// Crossing parities with the vertical cut between columns `cut_x - 1`
    /// and `cut_x`, and the horizontal cut between rows `cut_y - 1` and `cut_y`.
    pub fn crossing_class(&self, cut_x: usize, cut_y: usize) -> (u8, u8) {
        let ex = (0..self.n)
            .filter(|&y| self.edge_at(cut_x % self.m, y) == EdgeKind::B)
            .count();
        let ey = (0..self.m)
            .filter(|&x| self.edge_at(x, cut_y % self.n) == EdgeKind::C)
            .count();
        ((ex % 2) as u8, (ey % 2) as u8)
    }

    pub fn stats(&self) -> CoverStats {
        let count = |k| self.edges.iter().filter(|&&e| e == k).count() as u32;
        CoverStats {
            n_a: count(EdgeKind::A),
            n_b: count(EdgeKind::B),
            n_c: count(EdgeKind::C),
            class: self.crossing_class(0, 0),
        }
    }
}

/// Every perfect matching of the `m x n` honeycomb torus, in lexicographic
/// order of edge choices (`a < b < c`) over in-vertices `y * m + x`.
pub fn enumerate_cover_configs(m: usize, n: usize) -> Result<Vec<Cover>> {
    check_size(m, n)?;
    let sites = m * n;
    let mut out = Vec::new();
    let mut edges = vec![EdgeKind::A; sites];
    let mut used = vec![false; sites];

    fn partner(m: usize, n: usize, idx: usize, kind: EdgeKind) -> usize {
        let (x, y) = (idx % m, idx / m);
        match kind {
            EdgeKind::A => idx,
            EdgeKind::B => y * m + (x + m - 1) % m,
            EdgeKind::C => ((y + n - 1) % n) * m + x,
        }
    }

    fn dfs(
        idx: usize,
        m: usize,
        n: usize,
        edges: &mut Vec<EdgeKind>,
        used: &mut Vec<bool>,
        out: &mut Vec<Cover>,
    ) {
        if idx == m * n {
            out.push(Cover {
                m,
                n,
                edges: edges.clone(),
            });
            return;
        }
        for kind in EdgeKind::ORDER {
            // On 1-wide tori two edge kinds can reach the same out-vertex;
            // they are still distinct edges, so both are tried.
            let target = partner(m, n, idx, kind);
            if used[target] {
                continue;
            }
            used[target] = true;
            edges[idx] = kind;
            dfs(idx + 1, m, n, edges, used, out);
            used[target] = false;
        }
    }

    dfs(0, m, n, &mut edges, &mut used, &mut out);
    Ok(out)
}

/// Edge counts and class of every cover; see [`enumerate_cover_configs`].
pub fn enumerate_covers(m: usize, n: usize) -> Result<Vec<CoverStats>> {
    Ok(enumerate_cover_configs(m, n)?
        .iter()
        .map(Cover::stats)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    East,
    North,
}

/// One closed monotone path on the square torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loop {
    /// Visited sites, starting from the lowest index `y * m + x`.
    pub sites: Vec<(usize, usize)>,
    /// `steps[i]` leads from `sites[i]` to the next site.
    pub steps: Vec<Step>,
    /// Number of times the loop wraps horizontally and vertically.
    pub winding: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopSystem {
    pub loops: Vec<Loop>,
    /// Sites not on any loop (covered by `a` dimers).
    pub empty_sites: usize,
    /// Crossing parities of the cuts `x = 0` and `y = 0`.
    pub class: (u8, u8),
}

impl LoopSystem {
    pub fn total_winding(&self) -> (usize, usize) {
        self.loops
            .iter()
            .fold((0, 0), |(h, v), l| (h + l.winding.0, v + l.winding.1))
    }

    /// `a^empty b^east c^north`.
    pub fn weight(&self, a: f64, b: f64, c: f64) -> f64 {
        let (mut east, mut north) = (0i32, 0i32);
        for l in &self.loops {
            for s in &l.steps {
                match s {
                    Step::East => east += 1,
                    Step::North => north += 1,
                }
            }
        }
        a.powi(self.empty_sites as i32) * b.powi(east) * c.powi(north)
    }
}

/// The lattice-path image of a cover: `b` dimers become east steps, `c`
/// dimers north steps and `a` dimers empty sites.
pub fn paths_from_cover(cover: &Cover) -> Result<LoopSystem> {
    let cover = Cover::from_edges(cover.m, cover.n, cover.edges.clone())?;
    let (m, n) = (cover.m, cover.n);
    let mut visited = vec![false; m * n];
    let mut loops = Vec::new();
    for start in 0..m * n {
        if visited[start] || cover.edges[start] == EdgeKind::A {
            continue;
        }
        let mut sites = Vec::new();
        let mut steps = Vec::new();
        let (mut east, mut north) = (0usize, 0usize);
        let mut idx = start;
        loop {
            visited[idx] = true;
            let (x, y) = (idx % m, idx / m);
            sites.push((x, y));
            let east_next = y * m + (x + 1) % m;
            let north_next = ((y + 1) % n) * m + x;
            // v(x, y) is matched either eastward or northward.
            let next = if cover.edges[east_next] == EdgeKind::B {
                east += 1;
                steps.push(Step::East);
                east_next
            } else if cover.edges[north_next] == EdgeKind::C {
                north += 1;
                steps.push(Step::North);
                north_next
            } else {
                return Err(Error::MalformedCover(format!("path stops at ({x},{y})")));
            };
            if next == start {
                break;
            }
            if visited[next] {
                return Err(Error::MalformedCover("paths merge".into()));
            }
            idx = next;
        }
        loops.push(Loop {
            sites,
            steps,
            winding: (east / m, north / n),
        });
    }
    Ok(LoopSystem {
        loops,
        empty_sites: cover.edges.iter().filter(|&&e| e == EdgeKind::A).count(),
        class: cover.crossing_class(0, 0),
    })
}

/// Exponent triples `(n_a, n_b, n_c)` with multiplicities, per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyPolynomial {
    pub m: usize,
    pub n: usize,
    /// Indexed by `eps_x + 2 eps_y`.
    pub terms: [BTreeMap<(u32, u32, u32), u64>; 4],
}

impl HomologyPolynomial {
    pub fn evaluate(&self, a: f64, b: f64, c: f64) -> HomologyTable {
        let mut n = [0.0; 4];
        for (slot, terms) in n.iter_mut().zip(&self.terms) {
            *slot = terms
                .iter()
                .map(|(&(i, j, k), &count)| {
                    count as f64 * a.powi(i as i32) * b.powi(j as i32) * c.powi(k as i32)
                })
                .sum();
        }
        HomologyTable { n }
    }
}

/// Total cover weight per homology class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomologyTable {
    /// `[N(0,0), N(1,0), N(0,1), N(1,1)]`.
    pub n: [f64; 4],
}

/// Sign of `N(eps_x, eps_y)` (columns, same order as [`HomologyTable::n`])
/// in each sector (rows, [`Sector::ALL`] order).
pub const SECTOR_SIGNS: [[i8; 4]; 4] = [
    [1, -1, -1, -1],
    [1, 1, -1, 1],
    [1, -1, 1, 1],
    [1, 1, 1, -1],
];

impl HomologyTable {
    pub fn total(&self) -> f64 {
        self.n.iter().sum()
    }

    pub fn get(&self, eps_x: u8, eps_y: u8) -> f64 {
        self.n[usize::from(eps_x) + 2 * usize::from(eps_y)]
    }

    /// The four sector values, in [`Sector::ALL`] order.
    pub fn sector_values(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (row, slot) in SECTOR_SIGNS.iter().zip(out.iter_mut()) {
            *slot = row.iter().zip(&self.n).map(|(&s, v)| f64::from(s) * v).sum();
        }
        out
    }

    pub fn sector_value(&self, s: Sector) -> f64 {
        self.sector_values()[s.index()]
    }

    /// Inverse of [`HomologyTable::sector_values`]; the sign matrix is
    /// orthogonal up to a factor 4.
    pub fn from_sector_values(z: [f64; 4]) -> Self {
        let mut n = [0.0; 4];
        for (col, slot) in n.iter_mut().enumerate() {
            *slot = SECTOR_SIGNS
                .iter()
                .zip(&z)
                .map(|(row, v)| f64::from(row[col]) * v)
                .sum::<f64>()
                / 4.0;
        }
        HomologyTable { n }
    }
}

pub fn homology_polynomial(m: usize, n: usize) -> Result<HomologyPolynomial> {
    let mut terms: [BTreeMap<(u32, u32, u32), u64>; 4] = Default::default();
    for s in enumerate_covers(m, n)? {
        *terms[s.class_index()].entry((s.n_a, s.n_b, s.n_c)).or_insert(0) += 1;
    }
    Ok(HomologyPolynomial { m, n, terms })
}

pub fn homology_table(m: usize, n: usize, a: f64, b: f64, c: f64) -> Result<HomologyTable> {
    Ok(homology_polynomial(m, n)?.evaluate(a, b, c))
}

/// Exact Boltzmann moments of `N_c` by direct summation over covers.
pub fn brute_moments(m: usize, n: usize, a: f64, b: f64, c: f64, lmax: usize) -> Result<MomentVector> {
    let covers = enumerate_covers(m, n)?;
    let weights: Vec<f64> = covers.iter().map(|s| s.weight(a, b, c)).collect();
    let z: f64 = weights.iter().sum();
    let mut raw = vec![0.0; lmax + 1];
    for (s, w) in covers.iter().zip(&weights) {
        let x = f64::from(s.n_c);
        for (l, r) in raw.iter_mut().enumerate() {
            *r += w / z * x.powi(l as i32);
        }
    }
    let mean = raw.get(1).copied().unwrap_or(0.0);
    let mut central = vec![0.0; lmax + 1];
    for (s, w) in covers.iter().zip(&weights) {
        let d = f64::from(s.n_c) - mean;
        for (l, cm) in central.iter_mut().enumerate() {
            *cm += w / z * d.powi(l as i32);
        }
    }
    let table = homology_table(m, n, a, b, c)?;
    let sectors = table.sector_values();
    let mut sector_weights = [0.0; 4];
    for ((slot, s), v) in sector_weights.iter_mut().zip(Sector::ALL).zip(sectors) {
        *slot = f64::from(s.eps()) * v / (2.0 * z);
    }
    Ok(MomentVector {
        raw,
        central,
        sector_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one() {
        let covers = enumerate_covers(1, 1).unwrap();
        let got: Vec<_> = covers.iter().map(|s| ((s.n_a, s.n_b, s.n_c), s.class)).collect();
        assert_eq!(
            got,
            vec![((1, 0, 0), (0, 0)), ((0, 1, 0), (1, 0)), ((0, 0, 1), (0, 1))]
        );
        let t = homology_table(1, 1, 2.0, 3.0, 5.0).unwrap();
        assert_eq!(t.n, [2.0, 3.0, 5.0, 0.0]);
        assert_eq!(t.sector_values(), [2.0 - 3.0 - 5.0, 2.0 + 3.0 - 5.0, 2.0 - 3.0 + 5.0, 10.0]);
    }

    #[test]
    fn conservation_and_cut_independence() {
        for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 2), (2, 3), (5, 2), (3, 3)] {
            for cover in enumerate_cover_configs(m, n).unwrap() {
                let s = cover.stats();
                assert_eq!((s.n_a + s.n_b + s.n_c) as usize, m * n);
                for cx in 0..m {
                    for cy in 0..n {
                        assert_eq!(cover.crossing_class(cx, cy), s.class);
                    }
                }
            }
        }
    }

    #[test]
    fn size_bound() {
        assert!(matches!(enumerate_covers(4, 3), Err(Error::Size { .. })));
        assert!(enumerate_covers(5, 2).is_ok());
    }

    #[test]
    fn malformed_cover_rejected() {
        // Two b edges on a 2x1 torus with one a edge collide.
        let bad = Cover {
            m: 2,
            n: 1,
            edges: vec![EdgeKind::A, EdgeKind::B],
        };
        assert!(matches!(paths_from_cover(&bad), Err(Error::MalformedCover(_))));
    }

    #[test]
    fn single_east_loop_on_one_by_one() {
        let cover = Cover::from_edges(1, 1, vec![EdgeKind::B]).unwrap();
        let loops = paths_from_cover(&cover).unwrap();
        assert_eq!(loops.loops.len(), 1);
        assert_eq!(loops.loops[0].winding, (1, 0));
        assert_eq!(loops.class, (1, 0));
    }

    #[test]
    fn empty_cover_has_no_loops() {
        let cover = Cover::from_edges(3, 2, vec![EdgeKind::A; 6]).unwrap();
        let loops = paths_from_cover(&cover).unwrap();
        assert!(loops.loops.is_empty());
        assert_eq!(loops.class, (0, 0));
        assert_eq!(loops.empty_sites, 6);
    }

    #[test]
    fn staircase_pair_on_seven_by_six() {
        let first = vec![
            (0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (3, 3),
            (4, 3), (4, 4), (5, 4), (5, 5), (6, 5), (6, 0),
        ];
        let second = vec![
            (3, 0), (4, 0), (4, 1), (5, 1), (5, 2), (6, 2), (6, 3),
            (0, 3), (0, 4), (1, 4), (1, 5), (2, 5), (2, 0),
        ];
        let cover = Cover::from_paths(7, 6, &[first, second]).unwrap();
        let s = cover.stats();
        assert_eq!((s.n_a, s.n_b, s.n_c), (16, 14, 12));
        let loops = paths_from_cover(&cover).unwrap();
        assert_eq!(loops.loops.len(), 2);
        assert_eq!(loops.total_winding(), (2, 2));
        let w = loops.weight(1.1, 0.7, 0.3);
        assert!((w - s.weight(1.1, 0.7, 0.3)).abs() < 1e-15 * w);
        for l in &loops.loops {
            assert_eq!(l.steps.len(), l.sites.len());
        }
    }
}
